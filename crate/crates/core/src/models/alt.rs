//! The alternative heavy-tail families, each normalized on `[x0, ∞)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::Serialize;

use super::{Family, TailModel};
use crate::error::{Error, Result};
use crate::specfun::{
    erfc, hurwitz_zeta_shifted, ln_gamma_ratio, log1mexp, log_erfc, log_normal_sf,
    truncated_tail_sum, SeriesTolerance,
};

fn check_x0(x0: u64) -> Result<()> {
    if x0 < 1 {
        return Err(Error::InvalidModel("cutoff x0 must be >= 1".into()));
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidModel(format!(
            "{name} must be finite and positive, got {v}"
        )));
    }
    Ok(())
}

/// Shifted geometric law `(1 - e^-λ) e^(-λ (x - x0))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exponential {
    lambda: f64,
    x0: u64,
    #[serde(skip)]
    ln_c: f64,
}

impl Exponential {
    pub fn new(lambda: f64, x0: u64) -> Result<Self> {
        positive("exponential rate lambda", lambda)?;
        check_x0(x0)?;
        Ok(Self {
            lambda,
            x0,
            ln_c: log1mexp(-lambda),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl TailModel for Exponential {
    fn family(&self) -> Family {
        Family::Exponential
    }
    fn x0(&self) -> u64 {
        self.x0
    }
    fn log_pmf_unchecked(&self, x: u64) -> f64 {
        self.ln_c - self.lambda * (x - self.x0) as f64
    }
    fn ccdf_unchecked(&self, x: u64) -> f64 {
        (-self.lambda * (x - self.x0) as f64).exp()
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("lambda", self.lambda)]
    }
}

/// Discrete stretched exponential with survival `q^(x^β) / q^(x0^β)`.
///
/// Stored through the rate `c = -ln q` so that `q` extremely close to one
/// stays representable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Weibull {
    q: f64,
    /// `-ln q`, kept because `q` underflows for steep fits.
    rate: f64,
    beta: f64,
    x0: u64,
    #[serde(skip)]
    ln_rate: f64,
}

impl Weibull {
    pub fn new(q: f64, beta: f64, x0: u64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidModel(format!(
                "Weibull base q must lie in (0, 1), got {q}"
            )));
        }
        Self::from_rate(-q.ln(), beta, x0)
    }

    /// Builds the model from `c = -ln q > 0`.
    pub fn from_rate(rate: f64, beta: f64, x0: u64) -> Result<Self> {
        positive("Weibull rate -ln q", rate)?;
        positive("Weibull shape beta", beta)?;
        check_x0(x0)?;
        Ok(Self {
            q: (-rate).exp(),
            rate,
            beta,
            x0,
            ln_rate: rate.ln(),
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `ln P(X >= x) = -c (x^β - x0^β)`.
    fn ln_ccdf(&self, x: u64) -> f64 {
        if x <= self.x0 {
            return 0.0;
        }
        let lx0 = (self.x0 as f64).ln();
        let ratio = (x as f64 / self.x0 as f64).ln();
        -(self.ln_rate + self.beta * lx0).exp() * (self.beta * ratio).exp_m1()
    }
}

impl TailModel for Weibull {
    fn family(&self) -> Family {
        Family::Weibull
    }
    fn x0(&self) -> u64 {
        self.x0
    }
    fn log_pmf_unchecked(&self, x: u64) -> f64 {
        let xf = x as f64;
        // ln S(x+1) - ln S(x) = -c x^β ((1 + 1/x)^β - 1)
        let step =
            -(self.ln_rate + self.beta * xf.ln()).exp() * (self.beta * (1.0 / xf).ln_1p()).exp_m1();
        self.ln_ccdf(x) + log1mexp(step)
    }
    fn ccdf_unchecked(&self, x: u64) -> f64 {
        self.ln_ccdf(x).exp()
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("q", self.q), ("rate", self.rate), ("beta", self.beta)]
    }
}

/// Discretized log-normal: the law of `round(Y)` for log-normal `Y`,
/// conditioned on `round(Y) >= x0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogNormal {
    mu: f64,
    sigma: f64,
    x0: u64,
    #[serde(skip)]
    ln_norm: f64,
}

impl LogNormal {
    pub fn new(mu: f64, sigma: f64, x0: u64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidModel(format!(
                "log-normal mu must be finite, got {mu}"
            )));
        }
        positive("log-normal sigma", sigma)?;
        check_x0(x0)?;
        let mut m = Self {
            mu,
            sigma,
            x0,
            ln_norm: 0.0,
        };
        m.ln_norm = log_normal_sf(m.z(x0 as f64 - 0.5));
        if !m.ln_norm.is_finite() {
            return Err(Error::InvalidModel(format!(
                "log-normal (mu = {mu}, sigma = {sigma}) has no mass above x0 = {x0}"
            )));
        }
        Ok(m)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    fn z(&self, y: f64) -> f64 {
        (y.ln() - self.mu) / self.sigma
    }
}

/// `ln (Φ(zu) - Φ(zl))` for `zl < zu`, choosing the tail that avoids cancellation.
fn ln_normal_interval(zl: f64, zu: f64) -> f64 {
    if zl > 0.0 {
        let a = log_normal_sf(zl);
        a + log1mexp(log_normal_sf(zu) - a)
    } else if zu < 0.0 {
        let a = log_normal_sf(-zu);
        a + log1mexp(log_normal_sf(-zl) - a)
    } else {
        let outside = 0.5 * erfc(zu * FRAC_1_SQRT_2) + 0.5 * erfc(-zl * FRAC_1_SQRT_2);
        (-outside).ln_1p()
    }
}

impl TailModel for LogNormal {
    fn family(&self) -> Family {
        Family::LogNormal
    }
    fn x0(&self) -> u64 {
        self.x0
    }
    fn log_pmf_unchecked(&self, x: u64) -> f64 {
        let xf = x as f64;
        ln_normal_interval(self.z(xf - 0.5), self.z(xf + 0.5)) - self.ln_norm
    }
    fn ccdf_unchecked(&self, x: u64) -> f64 {
        (log_normal_sf(self.z(x as f64 - 0.5)) - self.ln_norm).exp()
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("mu", self.mu), ("sigma", self.sigma)]
    }
}

/// Log-normal density evaluated at the integer `x` with the erfc tail
/// normalizer, as printed in the classic alternative-model tables.
///
/// Kept for comparison with published numbers; unlike [`LogNormal`] it does
/// not sum to one over the integers.
pub fn lognormal_printed_log_pmf(mu: f64, sigma: f64, x0: u64, x: u64) -> Result<f64> {
    LogNormal::new(mu, sigma, x0)?;
    if x < x0 {
        return Err(Error::Domain(format!("x = {x} lies below x0 = {x0}")));
    }
    let lx = (x as f64).ln();
    let z0 = ((x0 as f64).ln() - mu) / (std::f64::consts::SQRT_2 * sigma);
    Ok(0.5 * (2.0 / (PI * sigma * sigma)).ln()
        - log_erfc(z0)
        - lx
        - (lx - mu).powi(2) / (2.0 * sigma * sigma))
}

/// Tsallis (q-exponential) law `∝ (1 + x/σ)^(-θ-1)`.
///
/// The normalizer is `σ^(θ+1) ζ(θ+1, x0 + σ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tsallis {
    sigma: f64,
    theta: f64,
    x0: u64,
    #[serde(skip)]
    ln_norm: f64,
    #[serde(skip)]
    ln_zeta0: f64,
}

impl Tsallis {
    pub fn new(sigma: f64, theta: f64, x0: u64) -> Result<Self> {
        positive("Tsallis scale sigma", sigma)?;
        positive("Tsallis tail index theta", theta)?;
        check_x0(x0)?;
        let ln_zeta0 = hurwitz_zeta_shifted(theta + 1.0, x0 as f64 + sigma)?.ln();
        if !ln_zeta0.is_finite() {
            return Err(Error::InvalidModel(format!(
                "Tsallis (sigma = {sigma}, theta = {theta}) normalizer is not finite"
            )));
        }
        Ok(Self {
            sigma,
            theta,
            x0,
            ln_norm: (theta + 1.0) * sigma.ln() + ln_zeta0,
            ln_zeta0,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

impl TailModel for Tsallis {
    fn family(&self) -> Family {
        Family::Tsallis
    }
    fn x0(&self) -> u64 {
        self.x0
    }
    fn log_pmf_unchecked(&self, x: u64) -> f64 {
        -(self.theta + 1.0) * (x as f64 / self.sigma).ln_1p() - self.ln_norm
    }
    fn ccdf_unchecked(&self, x: u64) -> f64 {
        if x <= self.x0 {
            return 1.0;
        }
        let z = hurwitz_zeta_shifted(self.theta + 1.0, x as f64 + self.sigma)
            .expect("validated at construction");
        (z.ln() - self.ln_zeta0).exp()
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("sigma", self.sigma), ("theta", self.theta)]
    }
}

/// Yule–Simon law `(α-1) Γ(x0+α-1)/Γ(x0) · Γ(x)/Γ(x+α)`.
///
/// The survival function telescopes to `Γ(x0+α-1) Γ(x) / (Γ(x0) Γ(x+α-1))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Yule {
    alpha: f64,
    x0: u64,
    #[serde(skip)]
    ln_head: f64,
}

impl Yule {
    pub fn new(alpha: f64, x0: u64) -> Result<Self> {
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(Error::InvalidModel(format!(
                "Yule shape must be finite and > 1, got {alpha}"
            )));
        }
        check_x0(x0)?;
        Ok(Self {
            alpha,
            x0,
            ln_head: ln_gamma_ratio(x0 as f64, alpha - 1.0),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl TailModel for Yule {
    fn family(&self) -> Family {
        Family::Yule
    }
    fn x0(&self) -> u64 {
        self.x0
    }
    fn log_pmf_unchecked(&self, x: u64) -> f64 {
        (self.alpha - 1.0).ln() + self.ln_head - ln_gamma_ratio(x as f64, self.alpha)
    }
    fn ccdf_unchecked(&self, x: u64) -> f64 {
        if x <= self.x0 {
            return 1.0;
        }
        (self.ln_head - ln_gamma_ratio(x as f64, self.alpha - 1.0)).exp()
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("alpha", self.alpha)]
    }
}

/// Power law with exponential cutoff `∝ x^(-α) e^(-λx)`.
///
/// The normalizer is a truncated tail sum of `(x/x0)^(-α) e^(-λ(x-x0))`, so
/// it stays finite even when `e^(-λ x0)` underflows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawCutoff {
    alpha: f64,
    lambda: f64,
    x0: u64,
    #[serde(skip)]
    ln_t: f64,
    #[serde(skip)]
    tol: SeriesTolerance,
}

impl PowerLawCutoff {
    pub fn new(alpha: f64, lambda: f64, x0: u64) -> Result<Self> {
        Self::with_tolerance(alpha, lambda, x0, SeriesTolerance::default())
    }

    pub fn with_tolerance(alpha: f64, lambda: f64, x0: u64, tol: SeriesTolerance) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidModel(format!(
                "cutoff exponent must be finite and >= 0, got {alpha}"
            )));
        }
        positive("cutoff rate lambda", lambda)?;
        check_x0(x0)?;
        let ln_t = Self::ln_scaled_tail(alpha, lambda, x0, tol)?.ln();
        Ok(Self {
            alpha,
            lambda,
            x0,
            ln_t,
            tol,
        })
    }

    /// `Σ_{k>=x} (k/x)^(-α) e^(-λ(k-x))`.
    fn ln_scaled_tail(alpha: f64, lambda: f64, x: u64, tol: SeriesTolerance) -> Result<f64> {
        let xf = x as f64;
        truncated_tail_sum(
            move |k: f64| (-alpha * (k / xf).ln() - lambda * (k - xf)).exp(),
            x,
            tol,
        )
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn ln_kernel(&self, x: u64) -> f64 {
        -self.alpha * (x as f64 / self.x0 as f64).ln() - self.lambda * (x - self.x0) as f64
    }
}

impl TailModel for PowerLawCutoff {
    fn family(&self) -> Family {
        Family::PowerLawCutoff
    }
    fn x0(&self) -> u64 {
        self.x0
    }
    fn log_pmf_unchecked(&self, x: u64) -> f64 {
        self.ln_kernel(x) - self.ln_t
    }
    fn ccdf_unchecked(&self, x: u64) -> f64 {
        if x <= self.x0 {
            return 1.0;
        }
        match Self::ln_scaled_tail(self.alpha, self.lambda, x, self.tol) {
            Ok(u) => (self.ln_kernel(x) + u.ln() - self.ln_t).exp(),
            Err(_) => f64::NAN,
        }
    }
    fn ccdf_run(&self, from: u64, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        if len == 0 {
            return out;
        }
        let last = from + len as u64 - 1;
        let mut acc = self.ccdf_unchecked(last);
        out[len - 1] = acc;
        for i in (0..len - 1).rev() {
            acc += self.log_pmf_unchecked(from + i as u64).exp();
            out[i] = acc.min(1.0);
        }
        if from <= self.x0 {
            out[(self.x0 - from) as usize] = 1.0;
        }
        out
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("alpha", self.alpha), ("lambda", self.lambda)]
    }
}

/// One of the six alternative families.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum AltModel {
    Exponential(Exponential),
    Weibull(Weibull),
    LogNormal(LogNormal),
    Tsallis(Tsallis),
    Yule(Yule),
    PowerLawCutoff(PowerLawCutoff),
}

macro_rules! delegate {
    ($self:ident, $m:ident => $e:expr) => {
        match $self {
            AltModel::Exponential($m) => $e,
            AltModel::Weibull($m) => $e,
            AltModel::LogNormal($m) => $e,
            AltModel::Tsallis($m) => $e,
            AltModel::Yule($m) => $e,
            AltModel::PowerLawCutoff($m) => $e,
        }
    };
}

impl TailModel for AltModel {
    fn family(&self) -> Family {
        delegate!(self, m => m.family())
    }
    fn x0(&self) -> u64 {
        delegate!(self, m => m.x0())
    }
    fn log_pmf_unchecked(&self, x: u64) -> f64 {
        delegate!(self, m => m.log_pmf_unchecked(x))
    }
    fn ccdf_unchecked(&self, x: u64) -> f64 {
        delegate!(self, m => m.ccdf_unchecked(x))
    }
    fn ccdf_run(&self, from: u64, len: usize) -> Vec<f64> {
        delegate!(self, m => m.ccdf_run(from, len))
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        delegate!(self, m => m.params())
    }
}
