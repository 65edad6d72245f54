//! Discrete tail models on `[x0, ∞)`: the power law and six alternatives.
//!
//! Every model is immutable after construction and caches its
//! log-normalizer, so `log_pmf` is a handful of flops. Probabilities are
//! computed in log space and only exponentiated at the interface.

mod alt;
mod fit;
mod power_law;
mod sampler;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use alt::{
    lognormal_printed_log_pmf, AltModel, Exponential, LogNormal, PowerLawCutoff, Tsallis, Weibull,
    Yule,
};
pub(crate) use fit::power_law_alpha;
pub use fit::{fit_mle, fit_mle_values, FitOptions, FittedModel};
pub use power_law::PowerLawModel;
pub use sampler::{sample, Sampler};

/// Model family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    PowerLaw,
    Exponential,
    Weibull,
    LogNormal,
    Tsallis,
    Yule,
    PowerLawCutoff,
}

impl Family {
    /// The alternatives compared against the power law, in report order.
    pub const ALTERNATIVES: [Family; 6] = [
        Family::Exponential,
        Family::Weibull,
        Family::LogNormal,
        Family::Tsallis,
        Family::Yule,
        Family::PowerLawCutoff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PowerLaw => "power_law",
            Family::Exponential => "exponential",
            Family::Weibull => "weibull",
            Family::LogNormal => "log_normal",
            Family::Tsallis => "tsallis",
            Family::Yule => "yule",
            Family::PowerLawCutoff => "power_law_cutoff",
        }
    }

    /// Number of free parameters (the cutoff `x0` is not counted).
    pub fn n_params(self) -> usize {
        match self {
            Family::PowerLaw | Family::Exponential | Family::Yule => 1,
            _ => 2,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        let fam = match norm.as_str() {
            "power_law" | "powerlaw" | "pl" => Family::PowerLaw,
            "exponential" | "exp" => Family::Exponential,
            "weibull" | "stretched_exponential" => Family::Weibull,
            "log_normal" | "lognormal" => Family::LogNormal,
            "tsallis" => Family::Tsallis,
            "yule" => Family::Yule,
            "power_law_cutoff" | "cutoff" | "pl_cutoff" => Family::PowerLawCutoff,
            _ => return Err(Error::InvalidArgument(format!("unknown family '{s}'"))),
        };
        Ok(fam)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A normalized discrete distribution on the integers `x >= x0`.
pub trait TailModel {
    fn family(&self) -> Family;
    fn x0(&self) -> u64;

    /// `ln p(x)`; the caller guarantees `x >= x0`.
    fn log_pmf_unchecked(&self, x: u64) -> f64;

    /// `P(X >= x)`; the caller guarantees `x >= x0`.
    fn ccdf_unchecked(&self, x: u64) -> f64;

    /// `P(X >= x)` for `x = from, from + 1, ...` (`len` values).
    fn ccdf_run(&self, from: u64, len: usize) -> Vec<f64> {
        (0..len as u64)
            .map(|i| self.ccdf_unchecked(from + i))
            .collect()
    }

    /// Named parameters, for reports.
    fn params(&self) -> Vec<(&'static str, f64)>;

    fn log_pmf(&self, x: u64) -> Result<f64> {
        self.check_support(x)?;
        Ok(self.log_pmf_unchecked(x))
    }

    fn pmf(&self, x: u64) -> Result<f64> {
        self.log_pmf(x).map(f64::exp)
    }

    fn ccdf(&self, x: u64) -> Result<f64> {
        self.check_support(x)?;
        if x == self.x0() {
            return Ok(1.0);
        }
        Ok(self.ccdf_unchecked(x).clamp(0.0, 1.0))
    }

    fn cdf(&self, x: u64) -> Result<f64> {
        self.check_support(x)?;
        Ok(1.0 - self.ccdf_unchecked(x + 1).clamp(0.0, 1.0))
    }

    /// Tail log-likelihood `Σ ln p(x_i)`.
    fn log_likelihood(&self, tail: &TailData) -> f64 {
        tail.iter()
            .map(|(x, c)| c as f64 * self.log_pmf_unchecked(x))
            .sum()
    }

    fn check_support(&self, x: u64) -> Result<()> {
        if x < self.x0() {
            return Err(Error::Domain(format!(
                "x = {x} lies below the model cutoff x0 = {}",
                self.x0()
            )));
        }
        Ok(())
    }
}

/// Either the power law or one of the alternatives.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum AnyModel {
    PowerLaw(PowerLawModel),
    Alt(AltModel),
}

impl AnyModel {
    pub fn as_power_law(&self) -> Option<&PowerLawModel> {
        match self {
            AnyModel::PowerLaw(m) => Some(m),
            AnyModel::Alt(_) => None,
        }
    }

    pub fn as_alt(&self) -> Option<&AltModel> {
        match self {
            AnyModel::Alt(m) => Some(m),
            AnyModel::PowerLaw(_) => None,
        }
    }
}

impl From<PowerLawModel> for AnyModel {
    fn from(m: PowerLawModel) -> Self {
        AnyModel::PowerLaw(m)
    }
}

impl From<AltModel> for AnyModel {
    fn from(m: AltModel) -> Self {
        AnyModel::Alt(m)
    }
}

impl TailModel for AnyModel {
    fn family(&self) -> Family {
        match self {
            AnyModel::PowerLaw(m) => m.family(),
            AnyModel::Alt(m) => m.family(),
        }
    }
    fn x0(&self) -> u64 {
        match self {
            AnyModel::PowerLaw(m) => m.x0(),
            AnyModel::Alt(m) => m.x0(),
        }
    }
    fn log_pmf_unchecked(&self, x: u64) -> f64 {
        match self {
            AnyModel::PowerLaw(m) => m.log_pmf_unchecked(x),
            AnyModel::Alt(m) => m.log_pmf_unchecked(x),
        }
    }
    fn ccdf_unchecked(&self, x: u64) -> f64 {
        match self {
            AnyModel::PowerLaw(m) => m.ccdf_unchecked(x),
            AnyModel::Alt(m) => m.ccdf_unchecked(x),
        }
    }
    fn ccdf_run(&self, from: u64, len: usize) -> Vec<f64> {
        match self {
            AnyModel::PowerLaw(m) => m.ccdf_run(from, len),
            AnyModel::Alt(m) => m.ccdf_run(from, len),
        }
    }
    fn params(&self) -> Vec<(&'static str, f64)> {
        match self {
            AnyModel::PowerLaw(m) => m.params(),
            AnyModel::Alt(m) => m.params(),
        }
    }
}

/// Observations `>= x0` stored as a sorted histogram, with the sufficient
/// statistics the closed-form likelihoods need.
#[derive(Debug, Clone, PartialEq)]
pub struct TailData {
    x0: u64,
    values: Vec<u64>,
    counts: Vec<u64>,
    n: u64,
    sum_ln: f64,
    sum_x: f64,
}

impl TailData {
    /// Builds the tail from raw observations, all of which must be `>= x0`.
    pub fn new(data: &[u64], x0: u64) -> Result<Self> {
        if x0 < 1 {
            return Err(Error::Domain("tail cutoff x0 must be >= 1".into()));
        }
        if let Some(&bad) = data.iter().find(|&&x| x < x0) {
            return Err(Error::Domain(format!(
                "observation {bad} lies below x0 = {x0}"
            )));
        }
        let mut sorted = data.to_vec();
        sorted.sort_unstable();
        let mut values = Vec::new();
        let mut counts: Vec<u64> = Vec::new();
        for x in sorted {
            if values.last() == Some(&x) {
                *counts.last_mut().unwrap() += 1;
            } else {
                values.push(x);
                counts.push(1);
            }
        }
        Self::from_histogram(values, counts, x0)
    }

    /// Builds the tail from a strictly increasing histogram.
    pub fn from_histogram(values: Vec<u64>, counts: Vec<u64>, x0: u64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyTail(x0));
        }
        debug_assert!(values.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(values.len(), counts.len());
        if values[0] < x0 {
            return Err(Error::Domain(format!(
                "observation {} lies below x0 = {x0}",
                values[0]
            )));
        }
        let n = counts.iter().sum();
        let sum_ln = values
            .iter()
            .zip(&counts)
            .map(|(&x, &c)| c as f64 * (x as f64).ln())
            .sum();
        let sum_x = values
            .iter()
            .zip(&counts)
            .map(|(&x, &c)| c as f64 * x as f64)
            .sum();
        Ok(Self {
            x0,
            values,
            counts,
            n,
            sum_ln,
            sum_x,
        })
    }

    pub fn x0(&self) -> u64 {
        self.x0
    }

    /// Number of observations.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn distinct(&self) -> usize {
        self.values.len()
    }

    pub fn max(&self) -> u64 {
        *self.values.last().expect("tail is non-empty")
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn sum_ln(&self) -> f64 {
        self.sum_ln
    }

    pub fn sum_x(&self) -> f64 {
        self.sum_x
    }

    pub fn mean(&self) -> f64 {
        self.sum_x / self.n as f64
    }

    /// `(value, multiplicity)` pairs in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.values.iter().copied().zip(self.counts.iter().copied())
    }

    /// Expands back into individual observations.
    pub fn to_vec(&self) -> Vec<u64> {
        self.iter()
            .flat_map(|(x, c)| std::iter::repeat_n(x, c as usize))
            .collect()
    }
}

/// Builds a model of `family` from named parameters, as used by the command
/// line and the Python bindings. Weibull accepts either `q` or `rate`.
pub fn build_model(
    family: Family,
    params: &std::collections::BTreeMap<String, f64>,
    x0: u64,
) -> Result<AnyModel> {
    let get = |key: &str| {
        params
            .get(key)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("{family} needs parameter '{key}'")))
    };
    let allowed: &[&str] = match family {
        Family::PowerLaw => &["alpha"],
        Family::Exponential => &["lambda"],
        Family::Weibull => &["q", "rate", "beta"],
        Family::LogNormal => &["mu", "sigma"],
        Family::Tsallis => &["sigma", "theta"],
        Family::Yule => &["alpha"],
        Family::PowerLawCutoff => &["alpha", "lambda"],
    };
    if let Some(extra) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::InvalidArgument(format!(
            "{family} has no parameter '{extra}' (expected {})",
            allowed.join(", ")
        )));
    }
    Ok(match family {
        Family::PowerLaw => PowerLawModel::new(get("alpha")?, x0)?.into(),
        Family::Exponential => AltModel::Exponential(Exponential::new(get("lambda")?, x0)?).into(),
        Family::Weibull => {
            let beta = get("beta")?;
            let w = match (params.get("q"), params.get("rate")) {
                (Some(&q), None) => Weibull::new(q, beta, x0)?,
                (None, Some(&c)) => Weibull::from_rate(c, beta, x0)?,
                _ => {
                    return Err(Error::InvalidArgument(
                        "weibull needs exactly one of 'q' or 'rate'".into(),
                    ))
                }
            };
            AltModel::Weibull(w).into()
        }
        Family::LogNormal => {
            AltModel::LogNormal(LogNormal::new(get("mu")?, get("sigma")?, x0)?).into()
        }
        Family::Tsallis => {
            AltModel::Tsallis(Tsallis::new(get("sigma")?, get("theta")?, x0)?).into()
        }
        Family::Yule => AltModel::Yule(Yule::new(get("alpha")?, x0)?).into(),
        Family::PowerLawCutoff => {
            AltModel::PowerLawCutoff(PowerLawCutoff::new(get("alpha")?, get("lambda")?, x0)?).into()
        }
    })
}
