use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use tailfit::models::{build_model, sample, Family};
use tailfit::pipeline::{
    analyze_all, emit_histogram, emit_raw, export_ccdf, ingest, InputFormat, Profile, RunConfig,
};
use tailfit::plfit::CountSample;
use tailfit::{Error, Result};

#[derive(Parser)]
#[command(
    name = "tailfit",
    version,
    about = "Power-law tail fitting and model comparison for count data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one or more fields and write the report.
    Run(RunArgs),
    /// Draw a synthetic field from a model and write it to disk.
    Synth(SynthArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Input files, one field per file.
    #[arg(long, required = true, num_args = 1.., action = clap::ArgAction::Append)]
    input: Vec<PathBuf>,
    /// Input layout; inferred from the extension (`.hist` or raw) when omitted.
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    /// JSON file with RunConfig fields; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Simulation budget to start from.
    #[arg(long, value_enum)]
    profile: Option<Profile>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    bootstrap_reps: Option<usize>,
    #[arg(long)]
    gof_sims: Option<usize>,
    #[arg(long)]
    gof_threshold: Option<f64>,
    #[arg(long)]
    min_tail: Option<u64>,
    /// Add a row for all fields pooled together.
    #[arg(long)]
    pooled: bool,
    /// Report path (`.json`/`.csv`) or directory.
    #[arg(long, default_value = "report")]
    out: PathBuf,
    /// Directory for per-field `<field>.ccdf.csv` exports.
    #[arg(long)]
    ccdf_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Model family, e.g. power_law, log_normal, yule.
    #[arg(long)]
    family: String,
    /// Model parameter as name=value; repeat for each parameter.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    #[arg(long, default_value_t = 1)]
    x0: u64,
    /// Number of draws.
    #[arg(short = 'n', long, default_value_t = 50_000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Field name written into the file header.
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    out: PathBuf,
    /// Write the histogram layout instead of one count per line.
    #[arg(long)]
    histogram: bool,
}

fn parse_param(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let v: f64 = v.parse().map_err(|_| format!("'{v}' is not a number"))?;
    Ok((k.trim().to_string(), v))
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("TAILFIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
        Error::Config(format!(
            "TAILFIT_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("cannot start the worker pool: {e}")))
}

fn load_config(args: &RunArgs) -> Result<RunConfig> {
    let base = RunConfig::for_profile(args.profile.unwrap_or(Profile::Paper));
    let mut config = match &args.config {
        None => base,
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::File {
                path: path.display().to_string(),
                source,
            })?;
            let overrides: serde_json::Value = serde_json::from_str(&text)?;
            let serde_json::Value::Object(overrides) = overrides else {
                return Err(Error::Config(
                    "the config file must hold a JSON object".into(),
                ));
            };
            let mut merged = serde_json::to_value(&base)?;
            let obj = merged
                .as_object_mut()
                .expect("config serializes to an object");
            for (k, v) in overrides {
                obj.insert(k, v);
            }
            serde_json::from_value(merged).map_err(|e| Error::Config(e.to_string()))?
        }
    };
    if let Some(v) = args.seed {
        config.master_seed = v;
    }
    if let Some(v) = args.bootstrap_reps {
        config.bootstrap_reps = v;
    }
    if let Some(v) = args.gof_sims {
        config.gof_sims = v;
    }
    if let Some(v) = args.gof_threshold {
        config.gof_threshold = v;
    }
    if let Some(v) = args.min_tail {
        config.min_tail = v;
    }
    if args.pooled {
        config.pooled = true;
    }
    config.validate()?;
    Ok(config)
}

fn file_safe(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "-_.".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn run(args: RunArgs) -> Result<()> {
    let config = load_config(&args)?;
    configure_threads()?;
    let started = Instant::now();
    let samples = args
        .input
        .iter()
        .map(|p| ingest(p, args.format.unwrap_or_else(|| InputFormat::from_path(p))))
        .collect::<Result<Vec<CountSample>>>()?;
    let report = analyze_all(&samples, &config)?;
    for path in report.write(&args.out, &config.formats)? {
        println!("{}", path.display());
    }
    if let Some(dir) = &args.ccdf_dir {
        std::fs::create_dir_all(dir).map_err(|source| Error::File {
            path: dir.display().to_string(),
            source,
        })?;
        for s in &samples {
            let row = report.fields.iter().find(|r| r.field == s.name());
            if let Some(fit) = row.and_then(|r| r.fit.as_ref()) {
                let path = dir.join(format!("{}.ccdf.csv", file_safe(s.name())));
                export_ccdf(s, fit, &path)?;
                println!("{}", path.display());
            }
        }
    }
    let skipped = report.fields.iter().filter(|r| r.skipped).count();
    eprintln!(
        "analyzed {} field(s), {} skipped, in {:.1}s",
        report.fields.len(),
        skipped,
        started.elapsed().as_secs_f64()
    );
    Ok(())
}

fn synth(args: SynthArgs) -> Result<()> {
    let family = Family::parse(&args.family)?;
    let params: BTreeMap<String, f64> = args.params.into_iter().collect();
    let model = build_model(family, &params, args.x0)?;
    let data = sample(&model, args.n, args.seed);
    let name = args.name.unwrap_or_else(|| {
        Path::new(&args.out)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("synthetic")
            .to_string()
    });
    let s = CountSample::new(name, data)?;
    if args.histogram {
        emit_histogram(&s, &args.out)
    } else {
        emit_raw(&s, &args.out)
    }
}

fn report_error(kind: &str, message: &str) {
    let body = serde_json::json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{body}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            report_error("usage", e.to_string().trim());
            return ExitCode::from(2);
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Synth(args) => synth(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report_error(e.kind(), &e.to_string());
            ExitCode::FAILURE
        }
    }
}
