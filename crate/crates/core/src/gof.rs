//! Semi-parametric bootstrap goodness-of-fit test for the power-law tail.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::Sampler;
use crate::plfit::{estimate_xmin, CountSample, FitConfig, PowerLawFit};
use crate::seeds;

/// Outcome of the bootstrap test.
///
/// `n_sims` counts the synthetic data sets that were refit successfully, so
/// `p_value * n_sims == n_exceed`; failed refits are reported in `n_failed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GofResult {
    pub k: f64,
    pub n_sims: usize,
    pub n_exceed: usize,
    pub n_failed: usize,
    pub p_value: f64,
    pub threshold: f64,
    pub reject: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GofOptions {
    pub n_sims: usize,
    pub threshold: f64,
}

impl Default for GofOptions {
    fn default() -> Self {
        Self {
            n_sims: 1000,
            threshold: 0.1,
        }
    }
}

/// A synthetic sample of the same size: each point follows the fitted power
/// law with probability `n_tail / n` and is otherwise drawn uniformly from the
/// observations below the cutoff.
pub fn synthesize(sample: &CountSample, fit: &PowerLawFit, seed: u64) -> Result<CountSample> {
    let n = sample.n();
    let body = &sample.counts()[..sample.counts().partition_point(|&c| c < fit.x0())];
    let p_tail = if body.is_empty() {
        1.0
    } else {
        fit.n_tail as f64 / n as f64
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = Sampler::new(&fit.model);
    let data: Vec<u64> = (0..n)
        .map(|_| {
            if rng.random::<f64>() < p_tail {
                sampler.draw(&mut rng)
            } else {
                body[rng.random_range(0..body.len())]
            }
        })
        .collect();
    CountSample::new(sample.name(), data)
}

/// Fraction of synthetic data sets whose own refit KS distance is at least
/// the observed one (ties count as exceedances).
pub fn gof_pvalue(
    sample: &CountSample,
    fit: &PowerLawFit,
    cfg: &FitConfig,
    opts: &GofOptions,
    seed: u64,
) -> Result<GofResult> {
    if opts.n_sims < 100 {
        return Err(Error::Config(format!(
            "goodness-of-fit needs at least 100 synthetic data sets, got {}",
            opts.n_sims
        )));
    }
    if !(opts.threshold > 0.0 && opts.threshold < 1.0) {
        return Err(Error::Config(format!(
            "threshold must lie in (0, 1), got {}",
            opts.threshold
        )));
    }
    let ks: Vec<Option<f64>> = (0..opts.n_sims)
        .into_par_iter()
        .map(|i| {
            let synth = synthesize(sample, fit, seeds::replicate(seed, i as u64)).ok()?;
            estimate_xmin(&synth, cfg).ok().map(|f| f.ks)
        })
        .collect();
    tally(fit.ks, &ks, opts)
}

fn tally(k: f64, ks: &[Option<f64>], opts: &GofOptions) -> Result<GofResult> {
    let n_failed = ks.iter().filter(|v| v.is_none()).count();
    if 10 * n_failed > ks.len() {
        return Err(Error::GofFailure {
            failed: n_failed,
            sims: ks.len(),
        });
    }
    let n_sims = ks.len() - n_failed;
    let n_exceed = ks.iter().flatten().filter(|&&v| v >= k).count();
    let p_value = n_exceed as f64 / n_sims as f64;
    Ok(GofResult {
        k,
        n_sims,
        n_exceed,
        n_failed,
        p_value,
        threshold: opts.threshold,
        reject: p_value < opts.threshold,
    })
}
