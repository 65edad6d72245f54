//! Report rows and their CSV, JSON and CCDF renderings.

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::ingest::write_file;
use super::{OutputFormat, RunConfig};
use crate::error::{Error, Result};
use crate::gof::GofResult;
use crate::models::{Family, TailModel};
use crate::plfit::{BootstrapSe, CountSample, PowerLawFit};
use crate::select::{ComparisonRow, RowError};

/// Summary statistics of the full sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Descriptive {
    pub n: u64,
    pub mean: f64,
    pub sd: f64,
    pub max: u64,
}

impl Descriptive {
    pub fn of(sample: &CountSample) -> Self {
        let xs = sample.counts();
        let n = xs.len() as f64;
        let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / n;
        let ss: f64 = xs.iter().map(|&x| (x as f64 - mean).powi(2)).sum();
        let sd = if xs.len() > 1 {
            (ss / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self {
            n: xs.len() as u64,
            mean,
            sd,
            max: *xs.last().expect("samples are non-empty"),
        }
    }
}

/// Seeds handed to the stochastic stages of one field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StageSeeds {
    pub bootstrap: u64,
    pub gof: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageError {
    pub stage: String,
    pub kind: String,
    pub message: String,
}

/// Everything computed for one field.
#[derive(Debug, Clone, Serialize)]
pub struct FieldReport {
    pub field: String,
    pub descriptive: Descriptive,
    pub skipped: bool,
    pub fit: Option<PowerLawFit>,
    pub bootstrap: Option<BootstrapSe>,
    pub gof: Option<GofResult>,
    pub comparisons: Vec<ComparisonRow>,
    pub seeds: StageSeeds,
    pub errors: Vec<StageError>,
}

impl FieldReport {
    pub(crate) fn new(sample: &CountSample, seeds: StageSeeds) -> Self {
        Self {
            field: sample.name().to_string(),
            descriptive: Descriptive::of(sample),
            skipped: false,
            fit: None,
            bootstrap: None,
            gof: None,
            comparisons: Vec::new(),
            seeds,
            errors: Vec::new(),
        }
    }

    pub(crate) fn record(&mut self, stage: &str, e: &Error) {
        let RowError { kind, message } = RowError::from(e);
        self.errors.push(StageError {
            stage: stage.to_string(),
            kind,
            message,
        });
    }

    pub(crate) fn skip(&mut self, stage: &str, e: &Error) {
        self.skipped = true;
        self.record(stage, e);
    }

    fn comparison(&self, family: Family) -> Option<&ComparisonRow> {
        self.comparisons.iter().find(|r| r.alternative == family)
    }
}

/// The full run: configuration, per-field rows and the optional pooled row.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub master_seed: u64,
    pub config: RunConfig,
    pub fields: Vec<FieldReport>,
    pub pooled: Option<FieldReport>,
}

/// The five cells of a power-law fit row: `x0 (se)`, `alpha (se)`, tail size,
/// tail share in percent and the goodness-of-fit p-value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table3Cells {
    pub x0: String,
    pub alpha: String,
    pub n_tail: String,
    pub pct: String,
    pub p: String,
}

const MISSING: &str = "-";

fn fixed(v: Option<f64>, decimals: usize) -> String {
    match v {
        Some(v) if v.is_finite() => {
            let s = format!("{v:.decimals$}");
            // A value that rounds to zero prints without a sign.
            match s.strip_prefix('-') {
                Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
                _ => s,
            }
        }
        _ => MISSING.to_string(),
    }
}

/// Renders a fit with the fixed decimals of a published table: one decimal
/// on the cutoff's standard error, two on the exponent and its error, one on
/// the percentage and three on the p-value.
pub fn render_table3(fit: &PowerLawFit, gof_p: Option<f64>) -> Table3Cells {
    Table3Cells {
        x0: format!("{} ({})", fit.x0(), fixed(fit.se_x0, 1)),
        alpha: format!("{:.2} ({})", fit.alpha(), fixed(fit.se_alpha, 2)),
        n_tail: fit.n_tail.to_string(),
        pct: format!("{:.1}", 100.0 * fit.frac_tail),
        p: fixed(gof_p, 3),
    }
}

impl AnalysisReport {
    pub fn new(config: RunConfig, fields: Vec<FieldReport>, pooled: Option<FieldReport>) -> Self {
        Self {
            tool: "tailfit",
            version: env!("CARGO_PKG_VERSION"),
            master_seed: config.master_seed,
            config,
            fields,
            pooled,
        }
    }

    fn rows(&self) -> impl Iterator<Item = &FieldReport> {
        self.fields.iter().chain(self.pooled.iter())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// One line per field: descriptive statistics, the fit columns and, per
    /// alternative, the raw and normalized log-likelihood ratios with their
    /// p-value. Missing entries are written as `-`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = [
            "field",
            "n",
            "mean",
            "sd",
            "max",
            "x0",
            "alpha",
            "n_tail",
            "pct_total",
            "gof_p",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        for fam in Family::ALTERNATIVES {
            for col in ["lr", "nlr", "p"] {
                header.push(format!("{}_{col}", fam.name()));
            }
        }
        w.write_record(&header)?;
        for row in self.rows() {
            let d = &row.descriptive;
            let mut rec = vec![
                row.field.clone(),
                d.n.to_string(),
                format!("{:.2}", d.mean),
                format!("{:.2}", d.sd),
                d.max.to_string(),
            ];
            match &row.fit {
                Some(fit) => {
                    let c = render_table3(fit, row.gof.map(|g| g.p_value));
                    rec.extend([c.x0, c.alpha, c.n_tail, c.pct, c.p]);
                }
                None => rec.extend(std::iter::repeat_n(MISSING.to_string(), 5)),
            }
            for fam in Family::ALTERNATIVES {
                let result = row.comparison(fam).and_then(|r| r.result.as_ref());
                rec.push(fixed(result.map(|r| r.lr), 3));
                rec.push(fixed(result.and_then(|r| r.nlr), 3));
                rec.push(fixed(result.map(|r| r.p_value), 3));
            }
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Writes the requested formats. An `out` path ending in `.json` or
    /// `.csv` names the report file (other formats share its stem); any
    /// other path is treated as a directory receiving `report.<ext>`.
    pub fn write(&self, out: &Path, formats: &[OutputFormat]) -> Result<Vec<PathBuf>> {
        let base = match out.extension().and_then(|e| e.to_str()) {
            Some("json") | Some("csv") => out.with_extension(""),
            _ => {
                std::fs::create_dir_all(out).map_err(|source| Error::File {
                    path: out.display().to_string(),
                    source,
                })?;
                out.join("report")
            }
        };
        let mut written = Vec::new();
        for fmt in formats {
            let (ext, body) = match fmt {
                OutputFormat::Json => ("json", self.to_json()?),
                OutputFormat::Csv => ("csv", self.to_csv()?),
            };
            let path = base.with_extension(ext);
            write_file(&path, body.as_bytes())?;
            written.push(path);
        }
        Ok(written)
    }
}

/// `(x, empirical ccdf, anchored model ccdf)` for every distinct observed
/// `x >= 1`. The model curve starts at the cutoff and is scaled to meet the
/// empirical curve there.
pub fn ccdf_rows(sample: &CountSample, fit: &PowerLawFit) -> Vec<(u64, f64, Option<f64>)> {
    let (values, counts) = sample.histogram();
    let n = sample.n() as f64;
    let x0 = fit.x0();
    let anchor = sample.tail_len(x0) as f64 / n;
    let mut above = sample.n() as u64;
    let mut rows = Vec::with_capacity(values.len());
    for (&x, &c) in values.iter().zip(&counts) {
        if x >= 1 {
            let emp = above as f64 / n;
            let model = (x >= x0).then(|| anchor * fit.model.ccdf_unchecked(x));
            rows.push((x, emp, model));
        }
        above -= c;
    }
    rows
}

/// Writes `x,ccdf_empirical,ccdf_fit` for plotting on log-log axes.
pub fn export_ccdf(sample: &CountSample, fit: &PowerLawFit, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "ccdf_empirical", "ccdf_fit"])?;
    for (x, emp, model) in ccdf_rows(sample, fit) {
        w.write_record([
            x.to_string(),
            emp.to_string(),
            model.map(|m| m.to_string()).unwrap_or_default(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    write_file(path, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::PowerLawModel;

    pub(crate) fn energy_fit() -> PowerLawFit {
        PowerLawFit {
            model: PowerLawModel::new(3.91, 32).unwrap(),
            se_alpha: Some(0.22),
            se_x0: Some(5.4),
            n_tail: 356,
            n_total: 71_200,
            frac_tail: 356.0 / 71_200.0,
            ks: 0.03,
        }
    }

    #[test]
    fn energy_row_layout() {
        let c = render_table3(&energy_fit(), Some(0.825));
        assert_eq!(c.x0, "32 (5.4)");
        assert_eq!(c.alpha, "3.91 (0.22)");
        assert_eq!(c.n_tail, "356");
        assert_eq!(c.pct, "0.5");
        assert_eq!(c.p, "0.825");
    }

    #[test]
    fn missing_entries_render_as_dash() {
        let mut f = energy_fit();
        f.se_x0 = None;
        f.se_alpha = None;
        let c = render_table3(&f, None);
        assert_eq!(c.x0, "32 (-)");
        assert_eq!(c.alpha, "3.91 (-)");
        assert_eq!(c.p, "-");
    }

    #[test]
    fn no_negative_zero() {
        assert_eq!(fixed(Some(-1e-9), 3), "0.000");
        assert_eq!(fixed(Some(-0.0005), 3), "-0.001");
        assert_eq!(fixed(Some(20.74), 3), "20.740");
        assert_eq!(fixed(Some(f64::NAN), 3), "-");
    }

    #[test]
    fn ccdf_is_anchored() {
        let data: Vec<u64> = (0..200).map(|i| i % 40).collect();
        let s = CountSample::new("t", data).unwrap();
        let mut f = energy_fit();
        f.model = PowerLawModel::new(2.5, 10).unwrap();
        let rows = ccdf_rows(&s, &f);
        assert_eq!(rows[0].0, 1);
        let at = rows.iter().find(|r| r.0 == 10).unwrap();
        assert_eq!(at.2, Some(at.1));
        assert!(rows.iter().filter(|r| r.0 < 10).all(|r| r.2.is_none()));
        assert!(rows.windows(2).all(|w| w[0].1 >= w[1].1));
    }
}
