//! Likelihood-ratio comparisons of the power law against each alternative.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{
    fit_mle, AnyModel, Family, FitOptions, FittedModel, PowerLawModel, TailData, TailModel,
};
use crate::plfit::{CountSample, PowerLawFit};
use crate::specfun::{chi2_1_sf, normal_two_sided_p, KahanSum};

/// Default significance level for verdicts.
pub const DEFAULT_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    PowerLawFavored,
    AlternativeFavored,
    Indeterminate,
}

impl Verdict {
    fn from_sign(lr: f64, p_value: f64, threshold: f64) -> Self {
        if p_value >= threshold || lr == 0.0 {
            Verdict::Indeterminate
        } else if lr > 0.0 {
            Verdict::PowerLawFavored
        } else {
            Verdict::AlternativeFavored
        }
    }
}

/// One likelihood-ratio comparison. `lr` is the first model's log-likelihood
/// minus the second's. `stat` is the normalized ratio for non-nested pairs and
/// `2|lr|` for the nested pair; `nlr` is reported for both whenever the
/// pointwise differences vary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonResult {
    pub alternative: Family,
    pub lr: f64,
    pub stat: f64,
    pub nlr: Option<f64>,
    pub sigma_lr: f64,
    pub p_value: f64,
    pub nested: bool,
    pub verdict: Verdict,
}

struct Differences {
    lr: f64,
    sigma: f64,
    n: f64,
}

fn pointwise(tail: &TailData, m1: &dyn TailModel, m2: &dyn TailModel) -> Result<Differences> {
    if m1.x0() != m2.x0() || m1.x0() != tail.x0() {
        return Err(Error::InvalidArgument(format!(
            "models and data must share x0 (got {}, {}, {})",
            m1.x0(),
            m2.x0(),
            tail.x0()
        )));
    }
    let mut diffs = Vec::with_capacity(tail.distinct());
    for (x, c) in tail.iter() {
        let d = m1.log_pmf_unchecked(x) - m2.log_pmf_unchecked(x);
        if !d.is_finite() {
            return Err(Error::LikelihoodEvaluation(x));
        }
        diffs.push((d, c as f64));
    }
    let n = tail.n() as f64;
    let mut lr = KahanSum::default();
    for &(d, c) in &diffs {
        lr.add(c * d);
    }
    let lr = lr.value();
    let mean = lr / n;
    let mut ss = KahanSum::default();
    for &(d, c) in &diffs {
        ss.add(c * (d - mean) * (d - mean));
    }
    Ok(Differences {
        lr,
        sigma: (ss.value() / n).sqrt(),
        n,
    })
}

/// Vuong's normalized likelihood-ratio test for non-nested models.
pub fn vuong_test(
    tail: &TailData,
    m1: &dyn TailModel,
    m2: &dyn TailModel,
    threshold: f64,
) -> Result<ComparisonResult> {
    let d = pointwise(tail, m1, m2)?;
    if d.sigma == 0.0 {
        return Err(Error::IndistinguishableModels);
    }
    let nlr = d.lr / (d.sigma * d.n.sqrt());
    let p_value = normal_two_sided_p(nlr);
    Ok(ComparisonResult {
        alternative: m2.family(),
        lr: d.lr,
        stat: nlr,
        nlr: Some(nlr),
        sigma_lr: d.sigma,
        p_value,
        nested: false,
        verdict: Verdict::from_sign(d.lr, p_value, threshold),
    })
}

/// Chi-squared test of the power law against the power law with cutoff, which
/// contains it as the `lambda -> 0` limit.
pub fn nested_lr_test(
    tail: &TailData,
    power_law: &PowerLawModel,
    cutoff: &dyn TailModel,
    threshold: f64,
) -> Result<ComparisonResult> {
    let d = pointwise(tail, power_law, cutoff)?;
    let stat = -2.0 * d.lr;
    if stat < -1e-6 {
        return Err(Error::NestingViolation(stat));
    }
    let stat = stat.max(0.0);
    let p_value = chi2_1_sf(stat);
    let nlr = (d.sigma > 0.0).then(|| d.lr / (d.sigma * d.n.sqrt()));
    Ok(ComparisonResult {
        alternative: cutoff.family(),
        lr: d.lr,
        stat,
        nlr,
        sigma_lr: d.sigma,
        p_value,
        nested: true,
        verdict: Verdict::from_sign(d.lr, p_value, threshold),
    })
}

/// A row of the comparison sweep: either a test result or the reason the
/// alternative could not be compared.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub alternative: Family,
    pub fitted: Option<FittedModel>,
    pub result: Option<ComparisonResult>,
    pub error: Option<RowError>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowError {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for RowError {
    fn from(e: &Error) -> Self {
        Self {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

/// Fits each alternative on the selected tail and compares it with the power
/// law. Failures are recorded in their row and never abort the sweep.
pub fn compare_all(
    sample: &CountSample,
    fit: &PowerLawFit,
    opts: &FitOptions,
    threshold: f64,
) -> Result<Vec<ComparisonRow>> {
    let tail = sample.tail(fit.x0())?;
    Ok(Family::ALTERNATIVES
        .iter()
        .map(|&family| compare_one(&tail, &fit.model, family, opts, threshold))
        .collect())
}

fn compare_one(
    tail: &TailData,
    pl: &PowerLawModel,
    family: Family,
    opts: &FitOptions,
    threshold: f64,
) -> ComparisonRow {
    let fitted = match fit_mle(family, tail, opts) {
        Ok(f) => f,
        Err(e) => {
            return ComparisonRow {
                alternative: family,
                fitted: None,
                result: None,
                error: Some(RowError::from(&e)),
            }
        }
    };
    let outcome = match (&fitted.model, family) {
        (AnyModel::Alt(m), Family::PowerLawCutoff) => nested_lr_test(tail, pl, m, threshold),
        (AnyModel::Alt(m), _) => vuong_test(tail, pl, m, threshold),
        (AnyModel::PowerLaw(_), _) => unreachable!("alternatives never fit a pure power law"),
    };
    match outcome {
        Ok(r) => ComparisonRow {
            alternative: family,
            fitted: Some(fitted),
            result: Some(r),
            error: None,
        },
        Err(e) => ComparisonRow {
            alternative: family,
            fitted: Some(fitted),
            result: None,
            error: Some(RowError::from(&e)),
        },
    }
}
