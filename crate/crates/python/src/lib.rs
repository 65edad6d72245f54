//! Python bindings. Structured results cross the boundary as JSON and come
//! out as plain dicts and lists, so the Python side sees exactly the fields
//! the Rust report serializes.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use tailfit::models::{self, Family, PowerLawModel, TailModel};
use tailfit::pipeline::{self, Profile, RunConfig};
use tailfit::plfit::{self, CountSample, FitConfig, PowerLawFit};

create_exception!(
    pytailfit,
    TailfitError,
    PyValueError,
    "Raised for every library error; the message starts with the error kind."
);

fn to_py(e: tailfit::Error) -> PyErr {
    TailfitError::new_err(format!("{}: {e}", e.kind()))
}

fn to_dict<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| to_py(e.into()))?;
    let loads = py.import("json")?.getattr("loads")?;
    Ok(loads.call1((text,))?.unbind())
}

fn fit_config(min_tail: u64) -> FitConfig {
    FitConfig {
        min_tail,
        ..FitConfig::default()
    }
}

fn sample_of(name: &str, counts: Vec<u64>) -> PyResult<CountSample> {
    CountSample::new(name, counts).map_err(to_py)
}

// A fit handed back from Python: only the cutoff and exponent matter to the
// downstream stages, the tail summary is recomputed.
fn refit(sample: &CountSample, alpha: f64, x0: u64) -> PyResult<PowerLawFit> {
    let mut fit = plfit::fit_at(sample, x0, &FitConfig::default()).map_err(to_py)?;
    fit.model = PowerLawModel::new(alpha, x0).map_err(to_py)?;
    fit.ks = plfit::ks_statistic(sample, &fit.model).map_err(to_py)?;
    Ok(fit)
}

/// A discrete power law `p(x) = x^-alpha / zeta(alpha, x0)` on `x >= x0`.
#[pyclass(name = "PowerLaw", module = "pytailfit", frozen)]
struct PyPowerLaw {
    inner: PowerLawModel,
}

#[pymethods]
impl PyPowerLaw {
    #[new]
    fn new(alpha: f64, x0: u64) -> PyResult<Self> {
        Ok(Self {
            inner: PowerLawModel::new(alpha, x0).map_err(to_py)?,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn x0(&self) -> u64 {
        self.inner.x0()
    }

    fn pmf(&self, x: u64) -> PyResult<f64> {
        self.inner.pmf(x).map_err(to_py)
    }

    fn log_pmf(&self, x: u64) -> PyResult<f64> {
        self.inner.log_pmf(x).map_err(to_py)
    }

    fn ccdf(&self, x: u64) -> PyResult<f64> {
        self.inner.ccdf(x).map_err(to_py)
    }

    fn sample(&self, py: Python<'_>, n: usize, seed: u64) -> Vec<u64> {
        py.detach(|| models::sample(&self.inner, n, seed))
    }

    fn __repr__(&self) -> String {
        format!(
            "PowerLaw(alpha={}, x0={})",
            self.inner.alpha(),
            self.inner.x0()
        )
    }
}

#[pymodule]
pub mod pytailfit {
    use super::*;

    #[pymodule_export]
    use super::PyPowerLaw;

    #[pymodule_init]
    fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
        m.add("TailfitError", m.py().get_type::<TailfitError>())?;
        m.add("__version__", env!("CARGO_PKG_VERSION"))
    }

    /// Hurwitz zeta `sum_{k >= 0} (k + x0)^-alpha` for `alpha > 1`, `x0 >= 1`.
    #[pyfunction]
    fn hurwitz_zeta(alpha: f64, x0: u64) -> PyResult<f64> {
        tailfit::specfun::hurwitz_zeta(alpha, x0).map_err(to_py)
    }

    /// Draws `n` values from a family given its named parameters.
    #[pyfunction]
    #[pyo3(signature = (family, params, x0 = 1, n = 1000, seed = 0))]
    fn sample(
        py: Python<'_>,
        family: &str,
        params: BTreeMap<String, f64>,
        x0: u64,
        n: usize,
        seed: u64,
    ) -> PyResult<Vec<u64>> {
        let family = Family::parse(family).map_err(to_py)?;
        let model = models::build_model(family, &params, x0).map_err(to_py)?;
        Ok(py.detach(|| models::sample(&model, n, seed)))
    }

    /// Reads a `.counts` or `.hist` file; returns `(field_name, counts)`.
    #[pyfunction]
    fn read_counts(path: std::path::PathBuf) -> PyResult<(String, Vec<u64>)> {
        let format = pipeline::InputFormat::from_path(&path);
        let s = pipeline::ingest(&path, format).map_err(to_py)?;
        Ok((s.name().to_string(), s.counts().to_vec()))
    }

    /// KS-minimizing cutoff scan with the exponent MLE at the chosen cutoff.
    #[pyfunction]
    #[pyo3(signature = (counts, min_tail = 50))]
    fn estimate_xmin(py: Python<'_>, counts: Vec<u64>, min_tail: u64) -> PyResult<Py<PyAny>> {
        let s = sample_of("field", counts)?;
        let fit = py
            .detach(|| plfit::estimate_xmin(&s, &fit_config(min_tail)))
            .map_err(to_py)?;
        to_dict(py, &fit)
    }

    /// Exponent MLE at a fixed cutoff.
    #[pyfunction]
    fn fit_at(py: Python<'_>, counts: Vec<u64>, x0: u64) -> PyResult<Py<PyAny>> {
        let s = sample_of("field", counts)?;
        let fit = plfit::fit_at(&s, x0, &FitConfig::default()).map_err(to_py)?;
        to_dict(py, &fit)
    }

    /// Bootstrap standard errors of the exponent and the cutoff.
    #[pyfunction]
    #[pyo3(signature = (counts, reps = 200, seed = 0, min_tail = 50))]
    fn bootstrap_se(
        py: Python<'_>,
        counts: Vec<u64>,
        reps: usize,
        seed: u64,
        min_tail: u64,
    ) -> PyResult<Py<PyAny>> {
        let s = sample_of("field", counts)?;
        let se = py
            .detach(|| plfit::bootstrap_se(&s, &fit_config(min_tail), reps, seed))
            .map_err(to_py)?;
        to_dict(py, &se)
    }

    /// Bootstrap goodness-of-fit p-value of a power-law fit with exponent
    /// `alpha` above cutoff `x0`.
    #[pyfunction]
    #[pyo3(signature = (counts, alpha, x0, n_sims = 1000, seed = 0, threshold = 0.1, min_tail = 50))]
    #[allow(clippy::too_many_arguments)]
    fn gof_pvalue(
        py: Python<'_>,
        counts: Vec<u64>,
        alpha: f64,
        x0: u64,
        n_sims: usize,
        seed: u64,
        threshold: f64,
        min_tail: u64,
    ) -> PyResult<Py<PyAny>> {
        let s = sample_of("field", counts)?;
        let fit = refit(&s, alpha, x0)?;
        let opts = tailfit::gof::GofOptions { n_sims, threshold };
        let g = py
            .detach(|| tailfit::gof::gof_pvalue(&s, &fit, &fit_config(min_tail), &opts, seed))
            .map_err(to_py)?;
        to_dict(py, &g)
    }

    /// Likelihood-ratio comparisons of the power law against every
    /// alternative on the tail above `x0`.
    #[pyfunction]
    #[pyo3(signature = (counts, alpha, x0, threshold = 0.1))]
    fn compare_all(
        py: Python<'_>,
        counts: Vec<u64>,
        alpha: f64,
        x0: u64,
        threshold: f64,
    ) -> PyResult<Py<PyAny>> {
        let s = sample_of("field", counts)?;
        let fit = refit(&s, alpha, x0)?;
        let opts = models::FitOptions::default();
        let rows = py
            .detach(|| tailfit::select::compare_all(&s, &fit, &opts, threshold))
            .map_err(to_py)?;
        to_dict(py, &rows)
    }

    /// The full per-field analysis. `config` holds any run-configuration
    /// fields to override on top of the chosen profile.
    #[pyfunction]
    #[pyo3(signature = (counts, name = "field", profile = "test", config = None))]
    fn analyze_field(
        py: Python<'_>,
        counts: Vec<u64>,
        name: &str,
        profile: &str,
        config: Option<Bound<'_, PyAny>>,
    ) -> PyResult<Py<PyAny>> {
        let profile = match profile {
            "test" => Profile::Test,
            "paper" => Profile::Paper,
            other => {
                return Err(TailfitError::new_err(format!(
                    "config: unknown profile '{other}'"
                )))
            }
        };
        let mut run = RunConfig::for_profile(profile);
        if let Some(overrides) = config {
            let dumps = py.import("json")?.getattr("dumps")?;
            let text: String = dumps.call1((overrides,))?.extract()?;
            let overrides: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| to_py(e.into()))?;
            let mut merged = serde_json::to_value(&run).map_err(|e| to_py(e.into()))?;
            if let (Some(base), serde_json::Value::Object(extra)) =
                (merged.as_object_mut(), overrides)
            {
                base.extend(extra);
            } else {
                return Err(TailfitError::new_err("config: overrides must be a dict"));
            }
            run = serde_json::from_value(merged)
                .map_err(|e| to_py(tailfit::Error::Config(e.to_string())))?;
        }
        let s = sample_of(name, counts)?;
        let row = py
            .detach(|| pipeline::analyze_field(&s, &run))
            .map_err(to_py)?;
        to_dict(py, &row)
    }
}
