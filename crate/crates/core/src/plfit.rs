//! Power-law estimation on integer data: the exponent MLE for a given cutoff,
//! the KS-minimizing cutoff scan, and bootstrap standard errors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{PowerLawModel, TailData, TailModel};
use crate::optim::brent_minimize;
use crate::seeds;
use crate::specfun::hurwitz_zeta;

/// The observations of one field, sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountSample {
    name: String,
    counts: Vec<u64>,
}

impl CountSample {
    pub fn new(name: impl Into<String>, mut counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidArgument(
                "a sample needs at least one observation".into(),
            ));
        }
        counts.sort_unstable();
        Ok(Self {
            name: name.into(),
            counts,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Full sample size.
    pub fn n(&self) -> usize {
        self.counts.len()
    }

    /// Number of observations `>= x0`.
    pub fn tail_len(&self, x0: u64) -> usize {
        self.counts.len() - self.counts.partition_point(|&c| c < x0)
    }

    pub fn tail(&self, x0: u64) -> Result<TailData> {
        let start = self.counts.partition_point(|&c| c < x0);
        let (values, counts) = histogram(&self.counts[start..]);
        TailData::from_histogram(values, counts, x0)
    }

    /// Distinct values and their multiplicities.
    pub fn histogram(&self) -> (Vec<u64>, Vec<u64>) {
        histogram(&self.counts)
    }
}

fn histogram(sorted: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut values: Vec<u64> = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    for &x in sorted {
        if values.last() == Some(&x) {
            *counts.last_mut().expect("parallel vectors") += 1;
        } else {
            values.push(x);
            counts.push(1);
        }
    }
    (values, counts)
}

/// Settings for the cutoff scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Smallest number of observations a candidate tail must hold.
    pub min_tail: u64,
    pub alpha_bounds: (f64, f64),
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            min_tail: 50,
            alpha_bounds: (1.01, 20.0),
        }
    }
}

/// The selected power law and its tail summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub model: PowerLawModel,
    pub se_alpha: Option<f64>,
    pub se_x0: Option<f64>,
    pub n_tail: u64,
    pub n_total: u64,
    pub frac_tail: f64,
    pub ks: f64,
}

impl PowerLawFit {
    pub fn alpha(&self) -> f64 {
        self.model.alpha()
    }

    pub fn x0(&self) -> u64 {
        self.model.x0()
    }
}

/// One candidate cutoff examined by the scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanEntry {
    pub x0: u64,
    pub alpha: f64,
    pub ks: f64,
    pub n_tail: u64,
}

/// Right-continuous empirical CDF of the observations `>= x0`.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    x0: u64,
    values: Vec<u64>,
    cumulative: Vec<u64>,
    n: u64,
}

impl EmpiricalCdf {
    /// `S(x) = #{x0 <= x_i <= x} / n_tail`.
    pub fn eval(&self, x: u64) -> f64 {
        if x < self.x0 {
            return 0.0;
        }
        let k = self.values.partition_point(|&v| v <= x);
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1] as f64 / self.n as f64
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

pub fn empirical_tail_cdf(sample: &CountSample, x0: u64) -> Result<EmpiricalCdf> {
    let start = sample.counts.partition_point(|&c| c < x0);
    if start == sample.counts.len() {
        return Err(Error::EmptyTail(x0));
    }
    let (values, counts) = histogram(&sample.counts[start..]);
    let mut cumulative = Vec::with_capacity(counts.len());
    let mut acc = 0;
    for c in counts {
        acc += c;
        cumulative.push(acc);
    }
    Ok(EmpiricalCdf {
        x0,
        values,
        cumulative,
        n: acc,
    })
}

/// Sup-distance between the empirical tail CDF and the model CDF over the
/// integers from `x0` to the largest observation.
pub fn ks_statistic(sample: &CountSample, model: &PowerLawModel) -> Result<f64> {
    let x0 = model.x0();
    let start = sample.counts.partition_point(|&c| c < x0);
    if start == sample.counts.len() {
        return Err(Error::EmptyTail(x0));
    }
    let (values, counts) = histogram(&sample.counts[start..]);
    let n = counts.iter().sum();
    Ok(ks_histogram(&values, &counts, n, x0, model.alpha()))
}

// Gap sums up to this length are added directly; longer gaps call the
// Euler–Maclaurin zeta instead.
const DIRECT_GAP: u64 = 32;

/// KS distance for a tail histogram. Between consecutive observed values the
/// empirical CDF is flat while the model CDF increases, so the supremum over
/// the integer grid is attained at an observed value or just before the next.
fn ks_histogram(values: &[u64], counts: &[u64], n: u64, x0: u64, alpha: f64) -> f64 {
    let d = values.len();
    // z[j] = ζ(alpha, values[j]), built backward.
    let mut z = vec![0.0; d];
    z[d - 1] = hurwitz_zeta(alpha, values[d - 1]).expect("alpha > 1");
    for j in (0..d - 1).rev() {
        let (lo, hi) = (values[j], values[j + 1]);
        z[j] = if hi - lo <= DIRECT_GAP {
            let mut s = z[j + 1];
            for x in (lo..hi).rev() {
                s += (x as f64).powf(-alpha);
            }
            s
        } else {
            hurwitz_zeta(alpha, lo).expect("alpha > 1")
        };
    }
    let zeta0 = if values[0] == x0 {
        z[0]
    } else {
        hurwitz_zeta(alpha, x0).expect("alpha > 1")
    };
    let nf = n as f64;
    // Before the first observation S = 0 and the largest model CDF is at values[0] - 1.
    let mut ks = if values[0] > x0 {
        1.0 - z[0] / zeta0
    } else {
        0.0
    };
    let mut cum = 0u64;
    for j in 0..d {
        cum += counts[j];
        let s = cum as f64 / nf;
        let v = values[j] as f64;
        let p_at = 1.0 - (z[j] - v.powf(-alpha)) / zeta0;
        ks = ks.max((s - p_at).abs());
        if j + 1 < d {
            let p_before_next = 1.0 - z[j + 1] / zeta0;
            ks = ks.max((s - p_before_next).abs());
        }
    }
    ks.clamp(0.0, 1.0)
}

/// MLE of the exponent on a tail given by its size and `Σ ln x`.
fn alpha_mle(n: f64, sum_ln: f64, x0: u64, bounds: (f64, f64)) -> f64 {
    let negll = |a: f64| match hurwitz_zeta(a, x0) {
        Ok(z) => n * z.ln() + a * sum_ln,
        Err(_) => f64::INFINITY,
    };
    brent_minimize(negll, bounds.0, bounds.1, 1e-10, 500).0
}

fn check_bounds(cfg: &FitConfig) -> Result<()> {
    let (lo, hi) = cfg.alpha_bounds;
    if !(lo > 1.0) || !(hi >= lo) || !hi.is_finite() {
        return Err(Error::Config(format!(
            "alpha bounds must satisfy 1 < lo <= hi < inf, got [{lo}, {hi}]"
        )));
    }
    if cfg.min_tail < 1 {
        return Err(Error::Config("min_tail must be at least 1".into()));
    }
    Ok(())
}

/// Fits the exponent at every candidate cutoff and records its KS distance.
///
/// Candidates are the distinct observed values `>= 1` whose tail holds at
/// least `min_tail` observations and more than one distinct value.
pub fn scan_candidates(sample: &CountSample, cfg: &FitConfig) -> Result<Vec<ScanEntry>> {
    check_bounds(cfg)?;
    let start = sample.counts.partition_point(|&c| c < 1);
    let (values, counts) = histogram(&sample.counts[start..]);
    let d = values.len();
    let mut tail_n = vec![0u64; d + 1];
    let mut tail_ln = vec![0.0f64; d + 1];
    for j in (0..d).rev() {
        tail_n[j] = tail_n[j + 1] + counts[j];
        tail_ln[j] = tail_ln[j + 1] + counts[j] as f64 * (values[j] as f64).ln();
    }
    let mut log = Vec::new();
    for j in 0..d.saturating_sub(1) {
        if tail_n[j] < cfg.min_tail {
            break;
        }
        let x0 = values[j];
        let alpha = alpha_mle(tail_n[j] as f64, tail_ln[j], x0, cfg.alpha_bounds);
        let ks = ks_histogram(&values[j..], &counts[j..], tail_n[j], x0, alpha);
        log.push(ScanEntry {
            x0,
            alpha,
            ks,
            n_tail: tail_n[j],
        });
    }
    Ok(log)
}

/// Picks the KS-minimizing cutoff, breaking ties toward the smallest `x0`.
pub fn select_from_scan(sample: &CountSample, log: &[ScanEntry]) -> Result<PowerLawFit> {
    let best = log
        .iter()
        .fold(None::<&ScanEntry>, |best, e| match best {
            Some(b) if b.ks <= e.ks => Some(b),
            _ => Some(e),
        })
        .ok_or_else(|| {
            Error::InsufficientTail(format!(
                "no cutoff leaves a non-degenerate tail in sample '{}' (n = {})",
                sample.name,
                sample.n()
            ))
        })?;
    let n_total = sample.n() as u64;
    Ok(PowerLawFit {
        model: PowerLawModel::new(best.alpha, best.x0)?,
        se_alpha: None,
        se_x0: None,
        n_tail: best.n_tail,
        n_total,
        frac_tail: best.n_tail as f64 / n_total as f64,
        ks: best.ks,
    })
}

/// KS-minimizing cutoff and exponent; the standard errors are left empty.
pub fn estimate_xmin(sample: &CountSample, cfg: &FitConfig) -> Result<PowerLawFit> {
    let log = scan_candidates(sample, cfg)?;
    select_from_scan(sample, &log)
}

/// Exponent MLE and KS distance at a fixed cutoff, without the scan.
pub fn fit_at(sample: &CountSample, x0: u64, cfg: &FitConfig) -> Result<PowerLawFit> {
    check_bounds(cfg)?;
    if x0 < 1 {
        return Err(Error::Domain("the cutoff x0 must be >= 1".into()));
    }
    let tail = sample.tail(x0)?;
    let (alpha, _) = crate::models::power_law_alpha(&tail, cfg.alpha_bounds)?;
    let model = PowerLawModel::new(alpha, x0)?;
    let ks = ks_histogram(tail.values(), tail.counts(), tail.n(), x0, alpha);
    let n_total = sample.n() as u64;
    Ok(PowerLawFit {
        model,
        se_alpha: None,
        se_x0: None,
        n_tail: tail.n(),
        n_total,
        frac_tail: tail.n() as f64 / n_total as f64,
        ks,
    })
}

/// Bootstrap standard errors and the replicate accounting behind them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BootstrapSe {
    pub se_alpha: f64,
    pub se_x0: f64,
    pub reps: usize,
    pub failed: usize,
}

/// Nonparametric bootstrap of the whole pipeline, cutoff included.
///
/// Each replicate resamples the full sample with replacement and reruns the
/// scan. Replicates whose scan fails are dropped and counted.
pub fn bootstrap_se(
    sample: &CountSample,
    cfg: &FitConfig,
    reps: usize,
    seed: u64,
) -> Result<BootstrapSe> {
    if reps < 2 {
        return Err(Error::Config(format!(
            "bootstrap needs at least 2 replicates, got {reps}"
        )));
    }
    check_bounds(cfg)?;
    let n = sample.n();
    let fits: Vec<Option<(f64, f64)>> = (0..reps)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seeds::replicate(seed, i as u64));
            let resampled: Vec<u64> = (0..n)
                .map(|_| sample.counts[rng.random_range(0..n)])
                .collect();
            let replicate = CountSample::new(sample.name.clone(), resampled).ok()?;
            estimate_xmin(&replicate, cfg)
                .ok()
                .map(|f| (f.alpha(), f.x0() as f64))
        })
        .collect();
    let ok: Vec<(f64, f64)> = fits.iter().flatten().copied().collect();
    let failed = reps - ok.len();
    if 2 * failed > reps || ok.len() < 2 {
        return Err(Error::BootstrapFailure { failed, reps });
    }
    let sd = |xs: &mut dyn Iterator<Item = f64>| -> f64 {
        let v: Vec<f64> = xs.collect();
        let m = v.iter().sum::<f64>() / v.len() as f64;
        (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
    };
    Ok(BootstrapSe {
        se_alpha: sd(&mut ok.iter().map(|p| p.0)),
        se_x0: sd(&mut ok.iter().map(|p| p.1)),
        reps,
        failed,
    })
}

/// The scan followed by the bootstrap, with standard errors filled in.
pub fn fit_with_se(
    sample: &CountSample,
    cfg: &FitConfig,
    reps: usize,
    seed: u64,
) -> Result<(PowerLawFit, BootstrapSe)> {
    let mut fit = estimate_xmin(sample, cfg)?;
    let se = bootstrap_se(sample, cfg, reps, seed)?;
    fit.se_alpha = Some(se.se_alpha);
    fit.se_x0 = Some(se.se_x0);
    Ok((fit, se))
}

/// Tail restricted to the selected cutoff.
pub fn fitted_tail(sample: &CountSample, fit: &PowerLawFit) -> Result<TailData> {
    sample.tail(fit.x0())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::sample as draw;
    use std::f64::consts::PI;

    /// KS over every integer of the grid, straight from the definitions.
    fn ks_brute(sample: &CountSample, model: &PowerLawModel) -> f64 {
        let cdf = empirical_tail_cdf(sample, model.x0()).unwrap();
        let max = *sample.counts().last().unwrap();
        (model.x0()..=max)
            .map(|x| (cdf.eval(x) - (1.0 - model.ccdf(x + 1).unwrap())).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn empirical_cdf_counts() {
        let s = CountSample::new("t", vec![7, 5, 5, 2]).unwrap();
        let cdf = empirical_tail_cdf(&s, 5).unwrap();
        assert_eq!(cdf.eval(5), 2.0 / 3.0);
        assert_eq!(cdf.eval(6), 2.0 / 3.0);
        assert_eq!(cdf.eval(7), 1.0);
        assert_eq!(cdf.eval(4), 0.0);
        assert!(matches!(
            empirical_tail_cdf(&s, 8),
            Err(Error::EmptyTail(8))
        ));
    }

    #[test]
    fn ks_single_point() {
        let s = CountSample::new("t", vec![1]).unwrap();
        let m = PowerLawModel::new(2.0, 1).unwrap();
        let ks = ks_statistic(&s, &m).unwrap();
        assert!((ks - (1.0 - 6.0 / (PI * PI))).abs() < 1e-14);
        assert!((ks - 0.3921).abs() < 1e-4);
    }

    #[test]
    fn ks_fast_path_matches_full_grid() {
        let m = PowerLawModel::new(1.8, 3).unwrap();
        let data: Vec<u64> = draw(&m, 3000, 17).into_iter().chain([1, 2, 2]).collect();
        let s = CountSample::new("t", data).unwrap();
        for (alpha, x0) in [(1.8, 3), (2.2, 3), (1.6, 5), (2.0, 4)] {
            let model = PowerLawModel::new(alpha, x0).unwrap();
            let fast = ks_statistic(&s, &model).unwrap();
            let slow = ks_brute(&s, &model);
            assert!(
                (fast - slow).abs() < 1e-12,
                "{alpha} {x0}: {fast} vs {slow}"
            );
        }
    }

    #[test]
    fn ks_is_small_for_true_model() {
        let m = PowerLawModel::new(2.5, 1).unwrap();
        let s = CountSample::new("t", draw(&m, 100_000, 8)).unwrap();
        assert!(ks_statistic(&s, &m).unwrap() < 0.01);
    }

    #[test]
    fn alpha_matches_grid_oracle() {
        let m = PowerLawModel::new(2.7, 2).unwrap();
        let data = draw(&m, 400, 21);
        let tail = TailData::new(&data, 2).unwrap();
        let cfg = FitConfig::default();
        let alpha = alpha_mle(tail.n() as f64, tail.sum_ln(), 2, cfg.alpha_bounds);
        let ll = |a: f64| -(tail.n() as f64) * hurwitz_zeta(a, 2).unwrap().ln() - a * tail.sum_ln();
        let mut best = (f64::NEG_INFINITY, 0.0);
        let mut a = 1.5;
        while a < 5.0 {
            let v = ll(a);
            if v > best.0 {
                best = (v, a);
            }
            a += 1e-4;
        }
        assert!((alpha - best.1).abs() <= 1e-4, "{alpha} vs {}", best.1);
        // The grid point is within half a step of the true maximizer, so
        // Brent's answer must beat every grid neighbour.
        assert!(ll(alpha) >= best.0 - 1e-9);
    }

    #[test]
    fn identical_values_are_insufficient() {
        let s = CountSample::new("same", vec![9; 500]).unwrap();
        assert!(matches!(
            estimate_xmin(&s, &FitConfig::default()),
            Err(Error::InsufficientTail(_))
        ));
    }

    #[test]
    fn scan_picks_minimum_with_smallest_tie() {
        let m = PowerLawModel::new(2.5, 1).unwrap();
        let s = CountSample::new("t", draw(&m, 20_000, 4)).unwrap();
        let cfg = FitConfig::default();
        let log = scan_candidates(&s, &cfg).unwrap();
        let fit = select_from_scan(&s, &log).unwrap();
        assert!(log.iter().all(|e| e.ks >= fit.ks));
        let first_min = log.iter().find(|e| e.ks == fit.ks).unwrap();
        assert_eq!(first_min.x0, fit.x0());
        assert_eq!(fit.n_tail as usize, s.tail_len(fit.x0()));
        assert!(fit.x0() <= 3);
    }

    #[test]
    fn zero_variance_bootstrap() {
        let data: Vec<u64> = std::iter::repeat_n(1, 100)
            .chain(std::iter::repeat_n(2, 100))
            .collect();
        let s = CountSample::new("two", data).unwrap();
        let cfg = FitConfig {
            min_tail: 50,
            alpha_bounds: (2.5, 2.5),
        };
        let se = bootstrap_se(&s, &cfg, 20, 1).unwrap();
        assert_eq!((se.se_alpha, se.se_x0), (0.0, 0.0));
        assert_eq!(se.failed, 0);
    }

    #[test]
    fn bootstrap_is_deterministic() {
        let m = PowerLawModel::new(2.5, 1).unwrap();
        let s = CountSample::new("t", draw(&m, 3000, 2)).unwrap();
        let cfg = FitConfig::default();
        let a = bootstrap_se(&s, &cfg, 30, 77).unwrap();
        let b = bootstrap_se(&s, &cfg, 30, 77).unwrap();
        assert_eq!(a.se_alpha.to_bits(), b.se_alpha.to_bits());
        assert_eq!(a.se_x0.to_bits(), b.se_x0.to_bits());
        assert!(bootstrap_se(&s, &cfg, 1, 77).is_err());
    }
}
