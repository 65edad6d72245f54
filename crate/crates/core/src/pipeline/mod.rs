//! End-to-end analysis of one or more fields: the cutoff scan, bootstrap
//! standard errors, the goodness-of-fit test and the model comparisons.

pub mod ingest;
pub mod report;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gof::{gof_pvalue, GofOptions};
use crate::models::FitOptions;
use crate::optim::NelderMeadOptions;
use crate::plfit::{bootstrap_se, estimate_xmin, CountSample, FitConfig};
use crate::seeds;
use crate::select::compare_all;
use crate::specfun::SeriesTolerance;

pub use ingest::{emit_histogram, emit_raw, ingest, InputFormat};
pub use report::{
    ccdf_rows, export_ccdf, render_table3, AnalysisReport, Descriptive, FieldReport, StageError,
    StageSeeds, Table3Cells,
};

/// Name given to the row built from all fields together.
pub const POOLED_FIELD: &str = "pooled";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Simulation budgets: `test` runs 200 bootstrap replicates and 200 synthetic
/// data sets, `paper` runs 1000 of each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Test,
    Paper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub master_seed: u64,
    pub bootstrap_reps: usize,
    pub gof_sims: usize,
    pub gof_threshold: f64,
    pub min_tail: u64,
    pub alpha_bounds: (f64, f64),
    pub series_tol: SeriesTolerance,
    pub formats: Vec<OutputFormat>,
    pub pooled: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::for_profile(Profile::Paper)
    }
}

impl RunConfig {
    pub fn for_profile(profile: Profile) -> Self {
        let reps = match profile {
            Profile::Test => 200,
            Profile::Paper => 1000,
        };
        Self {
            master_seed: 42,
            bootstrap_reps: reps,
            gof_sims: reps,
            gof_threshold: 0.1,
            min_tail: 50,
            alpha_bounds: (1.01, 20.0),
            series_tol: SeriesTolerance::default(),
            formats: vec![OutputFormat::Csv, OutputFormat::Json],
            pooled: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.gof_sims < 100 {
            return Err(Error::Config(format!(
                "gof_sims must be at least 100, got {}",
                self.gof_sims
            )));
        }
        if self.bootstrap_reps < 2 {
            return Err(Error::Config(format!(
                "bootstrap_reps must be at least 2, got {}",
                self.bootstrap_reps
            )));
        }
        if !(self.gof_threshold > 0.0 && self.gof_threshold < 1.0) {
            return Err(Error::Config(format!(
                "gof_threshold must lie in (0, 1), got {}",
                self.gof_threshold
            )));
        }
        if self.min_tail < 1 {
            return Err(Error::Config("min_tail must be positive".into()));
        }
        let (lo, hi) = self.alpha_bounds;
        if !(lo > 1.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::Config(format!(
                "alpha_bounds must satisfy 1 < lo <= hi, got [{lo}, {hi}]"
            )));
        }
        self.series_tol
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        if self.formats.is_empty() {
            return Err(Error::Config(
                "at least one output format is required".into(),
            ));
        }
        Ok(())
    }

    pub fn fit_config(&self) -> FitConfig {
        FitConfig {
            min_tail: self.min_tail,
            alpha_bounds: self.alpha_bounds,
        }
    }

    pub fn fit_options(&self) -> FitOptions {
        FitOptions {
            alpha_bounds: self.alpha_bounds,
            series_tol: self.series_tol,
            nelder_mead: NelderMeadOptions::default(),
        }
    }

    pub fn gof_options(&self) -> GofOptions {
        GofOptions {
            n_sims: self.gof_sims,
            threshold: self.gof_threshold,
        }
    }
}

/// Runs every stage on one field. Stage failures are recorded on the row and
/// never abort it; a sample with no usable cutoff yields a skipped row.
pub fn analyze_field(sample: &CountSample, config: &RunConfig) -> Result<FieldReport> {
    config.validate()?;
    let name = sample.name();
    let seeds = StageSeeds {
        bootstrap: seeds::derive(config.master_seed, name, "bootstrap", 0),
        gof: seeds::derive(config.master_seed, name, "gof", 0),
    };
    let mut row = FieldReport::new(sample, seeds);
    let fit_cfg = config.fit_config();

    let mut fit = match estimate_xmin(sample, &fit_cfg) {
        Ok(f) => f,
        Err(e) => {
            row.skip("estimate_xmin", &e);
            return Ok(row);
        }
    };
    match bootstrap_se(sample, &fit_cfg, config.bootstrap_reps, seeds.bootstrap) {
        Ok(se) => {
            fit.se_alpha = Some(se.se_alpha);
            fit.se_x0 = Some(se.se_x0);
            row.bootstrap = Some(se);
        }
        Err(e) => row.record("bootstrap_se", &e),
    }
    match gof_pvalue(sample, &fit, &fit_cfg, &config.gof_options(), seeds.gof) {
        Ok(g) => row.gof = Some(g),
        Err(e) => row.record("gof_pvalue", &e),
    }
    match compare_all(sample, &fit, &config.fit_options(), config.gof_threshold) {
        Ok(rows) => row.comparisons = rows,
        Err(e) => row.record("compare_all", &e),
    }
    row.fit = Some(fit);
    Ok(row)
}

/// Pools all fields into one sample.
pub fn pool(samples: &[CountSample]) -> Result<CountSample> {
    let all: Vec<u64> = samples
        .iter()
        .flat_map(|s| s.counts().iter().copied())
        .collect();
    CountSample::new(POOLED_FIELD, all)
}

/// Analyzes every field (in parallel) and assembles the report with rows
/// sorted by field name.
pub fn analyze_all(samples: &[CountSample], config: &RunConfig) -> Result<AnalysisReport> {
    config.validate()?;
    let mut names: Vec<&str> = samples.iter().map(|s| s.name()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Config(format!("duplicate field name '{}'", w[0])));
    }
    if config.pooled && names.contains(&POOLED_FIELD) {
        return Err(Error::Config(format!(
            "field name '{POOLED_FIELD}' is reserved for the pooled row"
        )));
    }
    let mut fields = samples
        .par_iter()
        .map(|s| analyze_field(s, config))
        .collect::<Result<Vec<_>>>()?;
    fields.sort_by(|a, b| a.field.cmp(&b.field));
    let pooled = if config.pooled {
        Some(analyze_field(&pool(samples)?, config)?)
    } else {
        None
    };
    Ok(AnalysisReport::new(config.clone(), fields, pooled))
}
