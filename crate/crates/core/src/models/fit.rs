//! Maximum-likelihood fitting of every family on a fixed tail `[x0, ∞)`.
//!
//! One-parameter families use Brent's method on a bounded interval (the
//! exponential has a closed form). Two-parameter families use Nelder–Mead in
//! an unconstrained reparametrization, from a moment-based start plus four
//! jittered restarts, followed by a polishing restart from the best point.

use serde::Serialize;

use super::{
    AltModel, AnyModel, Exponential, Family, LogNormal, PowerLawCutoff, PowerLawModel, TailData,
    TailModel, Tsallis, Weibull, Yule,
};
use crate::error::{Error, Result};
use crate::optim::{brent_minimize, nelder_mead, Minimum, NelderMeadOptions};
use crate::specfun::{hurwitz_zeta, SeriesTolerance};

/// Knobs shared by all fitters.
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    /// Search interval for the power-law and Yule exponents.
    pub alpha_bounds: (f64, f64),
    pub series_tol: SeriesTolerance,
    pub nelder_mead: NelderMeadOptions,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            alpha_bounds: (1.01, 20.0),
            series_tol: SeriesTolerance::default(),
            nelder_mead: NelderMeadOptions::default(),
        }
    }
}

/// A maximum-likelihood fit and its tail log-likelihood.
#[derive(Debug, Clone, Serialize)]
pub struct FittedModel {
    pub model: AnyModel,
    pub log_likelihood: f64,
}

// Boxes for the reparametrized two-parameter searches.
const WEIBULL_BOX: [(f64, f64); 2] = [(-60.0, 10.0), (-7.0, 3.5)];
const LOGNORMAL_BOX: [(f64, f64); 2] = [(-200.0, 50.0), (-7.0, 4.0)];
const TSALLIS_BOX: [(f64, f64); 2] = [(-12.0, 25.0), (-10.0, 5.0)];
const CUTOFF_BOX: [(f64, f64); 2] = [(0.0, 20.0), (-35.0, 5.0)];
const JITTERS: [(f64, f64); 4] = [(0.5, 0.5), (-0.5, 0.5), (0.5, -0.5), (-0.5, -0.5)];

fn in_box(p: &[f64], bx: &[(f64, f64); 2]) -> bool {
    p.iter().zip(bx).all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
}

fn clamp_box(p: [f64; 2], bx: &[(f64, f64); 2]) -> [f64; 2] {
    [p[0].clamp(bx[0].0, bx[0].1), p[1].clamp(bx[1].0, bx[1].1)]
}

/// Fits `family` to the tail by maximum likelihood.
pub fn fit_mle(family: Family, tail: &TailData, opts: &FitOptions) -> Result<FittedModel> {
    let x0 = tail.x0();
    if tail.distinct() == 1 && tail.values()[0] == x0 {
        return Err(Error::DegenerateData(format!(
            "all {} observations equal x0 = {x0}; the {family} likelihood is unbounded",
            tail.n()
        )));
    }
    if family.n_params() > 1 && tail.distinct() < 2 {
        return Err(Error::DegenerateData(format!(
            "{family} needs at least two distinct values"
        )));
    }
    match family {
        Family::PowerLaw => {
            let (alpha, _) = power_law_alpha(tail, opts.alpha_bounds)?;
            finish(PowerLawModel::new(alpha, x0)?.into(), tail)
        }
        Family::Exponential => {
            let excess = tail.mean() - x0 as f64;
            let lambda = (1.0 / excess).ln_1p();
            finish(
                AltModel::Exponential(Exponential::new(lambda, x0)?).into(),
                tail,
            )
        }
        Family::Yule => {
            let (lo, hi) = opts.alpha_bounds;
            let negll = |a: f64| match Yule::new(a, x0) {
                Ok(m) => -m.log_likelihood(tail),
                Err(_) => f64::INFINITY,
            };
            let (alpha, _) = brent_minimize(negll, lo, hi, 1e-10, 500);
            finish(AltModel::Yule(Yule::new(alpha, x0)?).into(), tail)
        }
        Family::Weibull => {
            let start = [-tail.mean().ln(), 0.0];
            let build = move |p: &[f64]| -> Result<AltModel> {
                Ok(AltModel::Weibull(Weibull::from_rate(
                    p[0].exp(),
                    p[1].exp(),
                    x0,
                )?))
            };
            fit_two(family, tail, opts, &WEIBULL_BOX, vec![start], &build)
        }
        Family::LogNormal => {
            let n = tail.n() as f64;
            let mean_ln = tail.sum_ln() / n;
            let var_ln = tail
                .iter()
                .map(|(x, c)| c as f64 * ((x as f64).ln() - mean_ln).powi(2))
                .sum::<f64>()
                / n;
            let start = [mean_ln, var_ln.sqrt().max(0.05).ln()];
            let build = move |p: &[f64]| -> Result<AltModel> {
                Ok(AltModel::LogNormal(LogNormal::new(p[0], p[1].exp(), x0)?))
            };
            fit_two(family, tail, opts, &LOGNORMAL_BOX, vec![start], &build)
        }
        Family::Tsallis => {
            let start = [tail.mean().ln(), 2f64.ln()];
            let build = move |p: &[f64]| -> Result<AltModel> {
                Ok(AltModel::Tsallis(Tsallis::new(p[0].exp(), p[1].exp(), x0)?))
            };
            fit_two(family, tail, opts, &TSALLIS_BOX, vec![start], &build)
        }
        Family::PowerLawCutoff => {
            let (alpha_pl, _) = power_law_alpha(tail, opts.alpha_bounds)?;
            let tol = opts.series_tol;
            let start = [alpha_pl, -(tail.max() as f64).ln()];
            // The pure power law sits on the λ -> 0 edge of the box; starting
            // there keeps the nested fit at least as good as the power law.
            let edge = [alpha_pl, CUTOFF_BOX[1].0];
            let build = move |p: &[f64]| -> Result<AltModel> {
                Ok(AltModel::PowerLawCutoff(PowerLawCutoff::with_tolerance(
                    p[0],
                    p[1].exp(),
                    x0,
                    tol,
                )?))
            };
            fit_two(family, tail, opts, &CUTOFF_BOX, vec![start, edge], &build)
        }
    }
}

/// Convenience wrapper taking raw observations `>= x0` and default options.
pub fn fit_mle_values(family: Family, data: &[u64], x0: u64) -> Result<FittedModel> {
    fit_mle(family, &TailData::new(data, x0)?, &FitOptions::default())
}

fn finish(model: AnyModel, tail: &TailData) -> Result<FittedModel> {
    let log_likelihood = model.log_likelihood(tail);
    if !log_likelihood.is_finite() {
        return Err(Error::FitFailure {
            family: model.family(),
            reason: "log-likelihood is not finite at the estimate".into(),
            best: Some(Box::new(model)),
        });
    }
    Ok(FittedModel {
        model,
        log_likelihood,
    })
}

/// Power-law exponent maximizing `-n ln ζ(α, x0) - α Σ ln x_i` on `bounds`.
/// Returns `(alpha, log_likelihood)`.
pub(crate) fn power_law_alpha(tail: &TailData, bounds: (f64, f64)) -> Result<(f64, f64)> {
    let x0 = tail.x0();
    if tail.distinct() == 1 && tail.values()[0] == x0 {
        return Err(Error::DegenerateData(format!(
            "all {} observations equal x0 = {x0}; the power-law likelihood grows without bound in alpha",
            tail.n()
        )));
    }
    let (lo, hi) = bounds;
    if !(lo > 1.0) || hi < lo {
        return Err(Error::InvalidArgument(format!(
            "alpha bounds must satisfy 1 < lo <= hi, got [{lo}, {hi}]"
        )));
    }
    let n = tail.n() as f64;
    let s = tail.sum_ln();
    let negll = |a: f64| match hurwitz_zeta(a, x0) {
        Ok(z) => n * z.ln() + a * s,
        Err(_) => f64::INFINITY,
    };
    let (alpha, f) = brent_minimize(negll, lo, hi, 1e-10, 500);
    Ok((alpha, -f))
}

fn fit_two<B>(
    family: Family,
    tail: &TailData,
    opts: &FitOptions,
    bx: &[(f64, f64); 2],
    bases: Vec<[f64; 2]>,
    build: &B,
) -> Result<FittedModel>
where
    B: Fn(&[f64]) -> Result<AltModel>,
{
    let negll = |p: &[f64]| -> f64 {
        if !in_box(p, bx) {
            return f64::INFINITY;
        }
        match build(p) {
            Ok(m) => {
                let ll = m.log_likelihood(tail);
                if ll.is_finite() {
                    -ll
                } else {
                    f64::INFINITY
                }
            }
            Err(_) => f64::INFINITY,
        }
    };

    let mut starts = Vec::new();
    for base in &bases {
        let base = clamp_box(*base, bx);
        starts.push(base);
        if starts.len() == 1 {
            for (du, dv) in JITTERS {
                starts.push(clamp_box([base[0] + du, base[1] + dv], bx));
            }
        }
    }

    let mut runs: Vec<Minimum> = starts
        .iter()
        .map(|s| nelder_mead(negll, s, opts.nelder_mead))
        .collect();
    // Boundary starts are kept as candidates in their own right.
    for s in starts.iter().skip(1 + JITTERS.len()) {
        let f = negll(s);
        runs.push(Minimum {
            x: s.to_vec(),
            f,
            iterations: 0,
            converged: f.is_finite(),
        });
    }

    let best_idx = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.f.total_cmp(&b.1.f))
        .map(|(i, _)| i)
        .expect("at least one start");
    let polish = nelder_mead(negll, &runs[best_idx].x, opts.nelder_mead);
    if polish.f <= runs[best_idx].f {
        runs.push(polish);
    }

    let best_any = runs
        .iter()
        .filter(|m| m.f.is_finite())
        .min_by(|a, b| a.f.total_cmp(&b.f));
    let best_converged = runs
        .iter()
        .filter(|m| m.converged && m.f.is_finite())
        .min_by(|a, b| a.f.total_cmp(&b.f));

    match best_converged {
        Some(m) => finish(build(&m.x)?.into(), tail),
        None => Err(Error::FitFailure {
            family,
            reason: "the maximum likelihood estimator did not converge".into(),
            best: best_any
                .and_then(|m| build(&m.x).ok())
                .map(|a| Box::new(a.into())),
        }),
    }
}
