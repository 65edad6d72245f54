//! Property tests for the invariants the library promises.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tailfit::gof::{gof_pvalue, synthesize, GofOptions};
use tailfit::models::{
    fit_mle, sample, AltModel, AnyModel, Exponential, Family, FitOptions, LogNormal,
    PowerLawCutoff, PowerLawModel, Sampler, TailData, TailModel, Tsallis, Weibull, Yule,
};
use tailfit::pipeline::{emit_histogram, emit_raw, ingest, InputFormat};
use tailfit::plfit::{estimate_xmin, scan_candidates, CountSample, FitConfig};
use tailfit::seeds;
use tailfit::select::{nested_lr_test, vuong_test};

fn family_model() -> impl Strategy<Value = AnyModel> {
    let x0 = 1u64..40;
    prop_oneof![
        (1.2f64..5.0, x0.clone()).prop_map(|(a, x0)| PowerLawModel::new(a, x0).unwrap().into()),
        (0.01f64..2.0, x0.clone())
            .prop_map(|(l, x0)| AltModel::Exponential(Exponential::new(l, x0).unwrap()).into()),
        (0.05f64..0.99, 0.3f64..2.0, x0.clone())
            .prop_map(|(q, b, x0)| AltModel::Weibull(Weibull::new(q, b, x0).unwrap()).into()),
        (-1.0f64..4.0, 0.3f64..2.5, x0.clone())
            .prop_map(|(m, s, x0)| AltModel::LogNormal(LogNormal::new(m, s, x0).unwrap()).into()),
        (0.5f64..30.0, 0.3f64..4.0, x0.clone())
            .prop_map(|(s, t, x0)| AltModel::Tsallis(Tsallis::new(s, t, x0).unwrap()).into()),
        (1.2f64..5.0, x0.clone())
            .prop_map(|(a, x0)| AltModel::Yule(Yule::new(a, x0).unwrap()).into()),
        (0.0f64..4.0, 1e-4f64..0.5, x0).prop_map(|(a, l, x0)| AltModel::PowerLawCutoff(
            PowerLawCutoff::new(a, l, x0).unwrap()
        )
        .into()),
    ]
}

fn power_law_sample(alpha: f64, x0: u64, n: usize, seed: u64) -> Vec<u64> {
    sample(&PowerLawModel::new(alpha, x0).unwrap(), n, seed)
}

// L(α) = -n ln ζ(α, x0) - α Σ ln x, written out directly.
fn power_law_ll(tail: &TailData, alpha: f64) -> f64 {
    let z = tailfit::specfun::hurwitz_zeta(alpha, tail.x0()).unwrap();
    -(tail.n() as f64) * z.ln() - alpha * tail.sum_ln()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pmf_sums_to_one(m in family_model()) {
        let x0 = m.x0();
        let top = x0 + 100_000;
        let mass: f64 = (x0..=top).map(|x| m.pmf(x).unwrap()).sum();
        let total = mass + m.ccdf(top + 1).unwrap();
        prop_assert!((total - 1.0).abs() <= 1e-9, "{:?}: {total}", m.params());
    }

    #[test]
    fn ccdf_steps_by_pmf(m in family_model(), offset in 0u64..5_000) {
        let x = m.x0() + offset;
        let (a, b) = (m.ccdf(x).unwrap(), m.ccdf(x + 1).unwrap());
        prop_assert!(b <= a);
        let p = m.pmf(x).unwrap();
        prop_assert!(((a - b) - p).abs() <= 1e-12 + 1e-9 * p, "{a} - {b} vs {p}");
    }

    #[test]
    fn monotone_families_have_decreasing_pmf(m in family_model(), offset in 0u64..5_000) {
        let decreasing = matches!(
            m.family(),
            Family::PowerLaw | Family::Exponential | Family::Yule | Family::PowerLawCutoff
        );
        if decreasing {
            let x = m.x0() + offset;
            prop_assert!(m.log_pmf(x + 1).unwrap() < m.log_pmf(x).unwrap());
        }
    }

    #[test]
    fn quantile_brackets_u(m in family_model(), u in 1e-9f64..1.0) {
        let mut s = Sampler::new(&m);
        let x = s.quantile(u);
        prop_assert!(x >= m.x0());
        // The largest x with P(X >= x) >= u, up to rounding at the boundary.
        prop_assert!(m.ccdf(x).unwrap() >= u * (1.0 - 1e-9));
        prop_assert!(m.ccdf(x + 1).unwrap() <= u * (1.0 + 1e-9));
    }

    #[test]
    fn scan_ignores_input_order(seed in 0u64..1_000, alpha in 1.8f64..3.5) {
        let data = power_law_sample(alpha, 1, 1_500, seed);
        let mut shuffled = data.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let cfg = FitConfig::default();
        let a = estimate_xmin(&CountSample::new("f", data).unwrap(), &cfg).unwrap();
        let b = estimate_xmin(&CountSample::new("f", shuffled).unwrap(), &cfg).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn scan_ignores_duplication(seed in 0u64..1_000, alpha in 1.8f64..3.5) {
        let data = power_law_sample(alpha, 1, 1_000, seed);
        let doubled: Vec<u64> = data.iter().chain(&data).copied().collect();
        // A floor of one keeps the candidate set the same after duplication.
        let cfg = FitConfig { min_tail: 1, ..FitConfig::default() };
        let a = estimate_xmin(&CountSample::new("f", data).unwrap(), &cfg).unwrap();
        let b = estimate_xmin(&CountSample::new("f", doubled).unwrap(), &cfg).unwrap();
        prop_assert_eq!(a.x0(), b.x0());
        prop_assert!((a.alpha() - b.alpha()).abs() <= 1e-6);
        prop_assert!((a.ks - b.ks).abs() <= 1e-12);
    }

    #[test]
    fn selected_cutoff_minimizes_ks(seed in 0u64..1_000, alpha in 1.8f64..3.5) {
        let s = CountSample::new("f", power_law_sample(alpha, 1, 2_000, seed)).unwrap();
        let cfg = FitConfig::default();
        let fit = estimate_xmin(&s, &cfg).unwrap();
        let log = scan_candidates(&s, &cfg).unwrap();
        prop_assert!(log.iter().any(|e| e.x0 == fit.x0()));
        for e in &log {
            prop_assert!(fit.ks <= e.ks);
            if e.ks == fit.ks {
                prop_assert!(fit.x0() <= e.x0);
            }
        }
    }

    #[test]
    fn alpha_is_likelihood_argmax(seed in 0u64..1_000, alpha in 1.5f64..4.0, x0 in 1u64..10) {
        let tail = TailData::new(&power_law_sample(alpha, x0, 300, seed), x0).unwrap();
        let fit = fit_mle(Family::PowerLaw, &tail, &FitOptions::default()).unwrap();
        let a_hat = fit.model.as_power_law().unwrap().alpha();
        let best = power_law_ll(&tail, a_hat);
        // Grid with step 1e-4 around the estimate.
        for k in -200i32..=200 {
            let a = a_hat + f64::from(k) * 1e-4;
            if a > 1.01 {
                prop_assert!(power_law_ll(&tail, a) <= best + 1e-9 * best.abs());
            }
        }
        for step in [1e-6, -1e-6] {
            prop_assert!(power_law_ll(&tail, a_hat + 10.0 * step) <= best + 1e-9 * best.abs());
        }
    }

    #[test]
    fn vuong_is_antisymmetric(seed in 0u64..1_000, a in 1.5f64..3.5, lam in 0.05f64..1.0) {
        let tail = TailData::new(&power_law_sample(a, 2, 400, seed), 2).unwrap();
        let pl = PowerLawModel::new(a, 2).unwrap();
        let ex = Exponential::new(lam, 2).unwrap();
        let ab = vuong_test(&tail, &pl, &ex, 0.1).unwrap();
        let ba = vuong_test(&tail, &ex, &pl, 0.1).unwrap();
        prop_assert_eq!(ab.lr, -ba.lr);
        prop_assert_eq!(ab.p_value, ba.p_value);
        prop_assert_eq!(ab.sigma_lr, ba.sigma_lr);
    }

    #[test]
    fn vuong_scales_under_duplication(seed in 0u64..1_000, a in 1.5f64..3.5, k in prop::sample::select(vec![2usize, 4])) {
        let data = power_law_sample(a, 1, 300, seed);
        let pl = PowerLawModel::new(a, 1).unwrap();
        let yu = Yule::new(a, 1).unwrap();
        let once = vuong_test(&TailData::new(&data, 1).unwrap(), &pl, &yu, 0.1).unwrap();
        let many: Vec<u64> = data.iter().flat_map(|&x| std::iter::repeat_n(x, k)).collect();
        let dup = vuong_test(&TailData::new(&many, 1).unwrap(), &pl, &yu, 0.1).unwrap();
        let kf = k as f64;
        prop_assert_eq!(dup.lr, kf * once.lr);
        prop_assert_eq!(dup.sigma_lr, once.sigma_lr);
        let (n1, n2) = (once.nlr.unwrap(), dup.nlr.unwrap());
        prop_assert!((n2 - kf.sqrt() * n1).abs() <= 1e-12 * n2.abs().max(1e-300));
    }

    #[test]
    fn synthetic_sets_keep_their_size(seed in 0u64..1_000, n in 200usize..800) {
        let m = PowerLawModel::new(2.5, 1).unwrap();
        let s = CountSample::new("f", sample(&m, n, seed)).unwrap();
        let fit = estimate_xmin(&s, &FitConfig::default()).unwrap();
        let synth = synthesize(&s, &fit, seed).unwrap();
        prop_assert_eq!(synth.n(), n);
        prop_assert_eq!(synth.name(), "f");
    }

    #[test]
    fn derived_seeds_are_stable(master in any::<u64>(), field in "[a-zA-Z ]{0,12}", index in any::<u64>()) {
        let a = seeds::derive(master, &field, "gof", index);
        prop_assert_eq!(a, seeds::derive(master, &field, "gof", index));
        prop_assert_ne!(a, seeds::derive(master, &field, "bootstrap", index));
        prop_assert_ne!(a, seeds::derive(master, &field, "gof", index.wrapping_add(1)));
    }

    #[test]
    fn raw_and_histogram_round_trip(
        data in prop::collection::vec(0u64..100_000, 1..400),
        name in "[a-z][a-z_]{0,10}",
    ) {
        let s = CountSample::new(name, data).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let raw = dir.path().join("x.counts");
        let hist = dir.path().join("x.hist");
        emit_raw(&s, &raw).unwrap();
        emit_histogram(&s, &hist).unwrap();
        prop_assert_eq!(&ingest(&raw, InputFormat::Raw).unwrap(), &s);
        prop_assert_eq!(&ingest(&hist, InputFormat::Histogram).unwrap(), &s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn nested_statistic_is_non_negative(seed in 0u64..1_000, a in 1.8f64..3.5, lam in 1e-4f64..0.05) {
        let truth = PowerLawCutoff::new(a, lam, 5).unwrap();
        let tail = TailData::new(&sample(&truth, 1_000, seed), 5).unwrap();
        let opts = FitOptions::default();
        let pl = fit_mle(Family::PowerLaw, &tail, &opts).unwrap();
        let cut = fit_mle(Family::PowerLawCutoff, &tail, &opts).unwrap();
        prop_assert!(cut.log_likelihood >= pl.log_likelihood - 1e-6);
        let r = nested_lr_test(&tail, pl.model.as_power_law().unwrap(), &cut.model, 0.1).unwrap();
        prop_assert!(r.stat >= 0.0);
    }

    #[test]
    fn gof_accounting_is_exact_and_monotone(seed in 0u64..1_000, bump in 0.0f64..0.05) {
        let m = PowerLawModel::new(2.5, 1).unwrap();
        let s = CountSample::new("f", sample(&m, 400, seed)).unwrap();
        let cfg = FitConfig::default();
        let fit = estimate_xmin(&s, &cfg).unwrap();
        let opts = GofOptions { n_sims: 100, threshold: 0.1 };
        let g = gof_pvalue(&s, &fit, &cfg, &opts, seed).unwrap();
        prop_assert_eq!(g.n_sims + g.n_failed, opts.n_sims);
        // The p-value is the correctly rounded ratio of two integers, so the
        // product recovers the exceedance count after rounding.
        prop_assert_eq!(g.p_value, g.n_exceed as f64 / g.n_sims as f64);
        prop_assert_eq!((g.p_value * g.n_sims as f64).round() as usize, g.n_exceed);
        prop_assert_eq!(g, gof_pvalue(&s, &fit, &cfg, &opts, seed).unwrap());
        let mut harder = fit.clone();
        harder.ks += bump;
        let h = gof_pvalue(&s, &harder, &cfg, &opts, seed).unwrap();
        prop_assert!(h.n_exceed <= g.n_exceed);
    }
}

#[test]
fn corpus_file_round_trips() {
    let path =
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/corpus/power_law.counts");
    let s = ingest(&path, InputFormat::Raw).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let big: Vec<u64> = s.counts().iter().chain(s.counts()).copied().collect();
    let big = CountSample::new(s.name(), big).unwrap();
    assert_eq!(big.n(), 100_000);
    for (file, fmt) in [
        ("a.counts", InputFormat::Raw),
        ("a.hist", InputFormat::Histogram),
    ] {
        let out = dir.path().join(file);
        match fmt {
            InputFormat::Raw => emit_raw(&big, &out).unwrap(),
            InputFormat::Histogram => emit_histogram(&big, &out).unwrap(),
        }
        assert_eq!(ingest(&out, fmt).unwrap(), big);
    }
}
