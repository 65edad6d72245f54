use serde::Serialize;

use super::{Family, TailModel};
use crate::error::{Error, Result};
use crate::specfun::{hurwitz_zeta, zeta_run_backward};

/// Discrete power law `p(x) = x^(-alpha) / ζ(alpha, x0)` on `x >= x0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawModel {
    alpha: f64,
    x0: u64,
    #[serde(skip)]
    ln_zeta: f64,
}

impl PowerLawModel {
    pub fn new(alpha: f64, x0: u64) -> Result<Self> {
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(Error::InvalidModel(format!(
                "power-law exponent must be finite and > 1, got {alpha}"
            )));
        }
        if x0 < 1 {
            return Err(Error::InvalidModel(
                "power-law cutoff x0 must be >= 1".into(),
            ));
        }
        let ln_zeta = hurwitz_zeta(alpha, x0)?.ln();
        Ok(Self { alpha, x0, ln_zeta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `ln ζ(alpha, x0)`.
    pub fn ln_normalizer(&self) -> f64 {
        self.ln_zeta
    }
}

impl TailModel for PowerLawModel {
    fn family(&self) -> Family {
        Family::PowerLaw
    }

    fn x0(&self) -> u64 {
        self.x0
    }

    fn log_pmf_unchecked(&self, x: u64) -> f64 {
        -self.alpha * (x as f64).ln() - self.ln_zeta
    }

    fn ccdf_unchecked(&self, x: u64) -> f64 {
        if x <= self.x0 {
            return 1.0;
        }
        let z = hurwitz_zeta(self.alpha, x).expect("validated at construction");
        (z.ln() - self.ln_zeta).exp()
    }

    fn ccdf_run(&self, from: u64, len: usize) -> Vec<f64> {
        let scale = (-self.ln_zeta).exp();
        let mut run = zeta_run_backward(self.alpha, from, len);
        for (i, v) in run.iter_mut().enumerate() {
            *v = if from + i as u64 <= self.x0 {
                1.0
            } else {
                (*v * scale).min(1.0)
            };
        }
        run
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("alpha", self.alpha)]
    }
}
