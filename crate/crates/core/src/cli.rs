//! `rkband learn | predict | eval`.
//!
//! Exit codes: 0 success, 2 data error, 64 usage error, 65 band/data mismatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::band::{BandSet, RkBand};
use crate::classifier::{run_pipeline, ClassifierModel, PipelineConfig};
use crate::dataset_file::{load_labeled, parse_queries, read_text};
use crate::error::Error;
use crate::learning::LearningLog;
use crate::series::{preprocess, LabeledDataset, TimeSeries};
use crate::silhouette::evaluate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INCOMPATIBLE: i32 = 65;

#[derive(Parser, Debug)]
#[command(name = "rkband", version, about = "1-NN time series classification with learned DTW bands")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Learn per-class bands from a training file.
    Learn(RunConfig),
    /// Classify a test file, learning bands first unless --band-in is given.
    Predict(RunConfig),
    /// Report silhouette and leave-one-out accuracy for a given band.
    Eval(RunConfig),
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Labeled training file.
    #[arg(long)]
    pub train: PathBuf,
    /// File of series to classify (labels in column 1 are optional).
    #[arg(long)]
    pub test: Option<PathBuf>,
    /// Band set JSON to use instead of learning.
    #[arg(long)]
    pub band_in: Option<PathBuf>,
    /// Where to write the learned band set JSON.
    #[arg(long)]
    pub band_out: Option<PathBuf>,
    /// Uniform Sakoe-Chiba width in percent (eval only).
    #[arg(long)]
    pub sc_width: Option<u32>,
    /// Maximum warping window in percent of the series length.
    #[arg(long, default_value_t = 100)]
    pub bound: u32,
    #[arg(long, default_value_t = 9.0)]
    pub complexity_threshold: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Write the tab-separated learning log here.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Skip z-normalization of input series.
    #[arg(long)]
    pub no_normalize: bool,
    /// Predictions file (predict only; default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(Error),
    Incompatible(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
            Failure::Incompatible(_) => EXIT_INCOMPATIBLE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Incompatible(m) => f.write_str(m),
            Failure::Data(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
/// Reports go to `out`, diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let result = match &cli.command {
        Command::Learn(cfg) => with_threads(cfg, || cmd_learn(cfg, out)),
        Command::Predict(cfg) => with_threads(cfg, || cmd_predict(cfg, out, err)),
        Command::Eval(cfg) => with_threads(cfg, || cmd_eval(cfg, out)),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(err, "error: {failure}");
            failure.code()
        }
    }
}

fn with_threads<F>(cfg: &RunConfig, f: F) -> CliResult<()>
where
    F: FnOnce() -> CliResult<()> + Send,
{
    validate(cfg)?;
    match cfg.threads {
        None => f(),
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Usage(format!("cannot start {n} threads: {e}")))?
            .install(f),
    }
}

fn validate(cfg: &RunConfig) -> CliResult<()> {
    if cfg.bound > 100 {
        return Err(Failure::Usage(format!("--bound {} outside 0..=100", cfg.bound)));
    }
    if cfg.complexity_threshold.is_nan() || cfg.complexity_threshold <= 0.0 {
        return Err(Failure::Usage(
            "--complexity-threshold must be positive".into(),
        ));
    }
    if let Some(w) = cfg.sc_width {
        if w > 100 {
            return Err(Failure::Usage(format!("--sc-width {w} outside 0..=100")));
        }
    }
    Ok(())
}

fn load_train(cfg: &RunConfig) -> CliResult<LabeledDataset> {
    let data = load_labeled(&cfg.train)?;
    Ok(if cfg.no_normalize { data } else { data.znormalize() })
}

fn load_test(cfg: &RunConfig, series_length: usize) -> CliResult<(Vec<TimeSeries>, Option<Vec<i64>>)> {
    let Some(path) = &cfg.test else {
        return Err(Failure::Usage("--test is required".into()));
    };
    let (series, labels) = parse_queries(&read_text(path)?, path, series_length)?;
    let series = if cfg.no_normalize {
        series
    } else {
        series.iter().map(TimeSeries::znormalize).collect()
    };
    Ok((series, labels))
}

fn load_band(path: &Path, data: &LabeledDataset) -> CliResult<BandSet> {
    let bands = BandSet::load(path).map_err(|e| match e {
        Error::Io { .. } => Failure::Data(e),
        other => Failure::Incompatible(format!("{}: {other}", path.display())),
    })?;
    bands
        .check_covers(data.labels(), data.series_length())
        .map_err(|e| {
            Failure::Incompatible(format!(
                "{}: band set does not fit the preprocessed data (length {}): {e}",
                path.display(),
                data.series_length()
            ))
        })?;
    Ok(bands)
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let io_err = |source| {
        Failure::Data(Error::Io {
            path: path.to_path_buf(),
            source,
        })
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn write_artifacts(cfg: &RunConfig, bands: &BandSet, log: &mut LearningLog) -> CliResult<()> {
    if let Some(path) = &cfg.band_out {
        write_atomic(path, &(bands.to_json()? + "\n"))?;
    }
    if let Some(path) = &cfg.log {
        write_atomic(path, &log.to_tsv())?;
    }
    Ok(())
}

fn pipeline_config(cfg: &RunConfig) -> PipelineConfig {
    PipelineConfig {
        complexity_threshold: cfg.complexity_threshold,
        bound_percent: cfg.bound,
        seed: cfg.seed,
    }
}

fn new_log(cfg: &RunConfig) -> LearningLog {
    let mut log = LearningLog::new();
    log.note(format!(
        "seed {} bound {}% complexity threshold {}",
        cfg.seed, cfg.bound, cfg.complexity_threshold
    ));
    log
}

fn cmd_learn(cfg: &RunConfig, out: &mut (dyn Write + Send)) -> CliResult<()> {
    let train = load_train(cfg)?;
    let mut log = new_log(cfg);
    let result = run_pipeline(train, Vec::new(), pipeline_config(cfg), &mut log)?;
    let learning = &result.learning;
    let _ = writeln!(out, "series length: {}", result.length);
    let _ = writeln!(out, "extraction heuristic: {}", learning.extraction_heuristic);
    let _ = writeln!(out, "best warping window: {}%", learning.window_percent);
    let _ = writeln!(out, "iterative heuristic: {}", learning.iterative_heuristic);
    let _ = writeln!(out, "winner: {}", learning.winner);
    let _ = writeln!(out, "silhouette: {}", learning.heuristic);
    let _ = writeln!(out, "leave-one-out accuracy: {}", result.predicted_accuracy);
    write_artifacts(cfg, &learning.bands, &mut log)
}

fn cmd_predict(cfg: &RunConfig, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> CliResult<()> {
    let train = load_train(cfg)?;
    let (test, test_labels) = load_test(cfg, train.series_length())?;

    let (model, predictions) = if let Some(band_in) = &cfg.band_in {
        let pre = preprocess(train, test, cfg.complexity_threshold)?;
        let bands = load_band(band_in, &pre.train)?;
        let model = ClassifierModel::new(pre.train, bands)?;
        let predictions = model.predict_all(&pre.test)?;
        (model, predictions)
    } else {
        let mut log = new_log(cfg);
        let result = run_pipeline(train, test, pipeline_config(cfg), &mut log)?;
        write_artifacts(cfg, &result.learning.bands, &mut log)?;
        (result.model, result.predictions)
    };

    let text: String = predictions.iter().map(|l| format!("{l}\n")).collect();
    let report: &mut (dyn Write + Send) = match &cfg.out {
        Some(path) => {
            write_atomic(path, &text)?;
            out
        }
        None => {
            let _ = out.write_all(text.as_bytes());
            err
        }
    };
    let _ = writeln!(report, "predicted accuracy: {}", model.predicted_accuracy);
    if let Some(truth) = test_labels {
        if !truth.is_empty() {
            let hits = truth.iter().zip(&predictions).filter(|(a, b)| a == b).count();
            let _ = writeln!(report, "test accuracy: {}", hits as f64 / truth.len() as f64);
        }
    }
    Ok(())
}

fn cmd_eval(cfg: &RunConfig, out: &mut (dyn Write + Send)) -> CliResult<()> {
    let train = load_train(cfg)?;
    let pre = preprocess(train, Vec::new(), cfg.complexity_threshold)?;
    let data = pre.train;
    let bands = match (&cfg.band_in, cfg.sc_width) {
        (Some(path), None) => load_band(path, &data)?,
        (None, Some(width)) => BandSet::uniform(
            data.labels(),
            &RkBand::sakoe_chiba(data.series_length(), width)?,
        )?,
        (Some(_), Some(_)) => {
            return Err(Failure::Usage(
                "--band-in and --sc-width are mutually exclusive".into(),
            ))
        }
        (None, None) => {
            return Err(Failure::Usage("eval needs --band-in or --sc-width".into()))
        }
    };
    let silhouette = evaluate(&data, &bands)?;
    let model = ClassifierModel::new(data, bands)?;
    let _ = writeln!(out, "series length: {}", pre.length);
    let _ = writeln!(out, "silhouette: {silhouette}");
    let _ = writeln!(out, "leave-one-out accuracy: {}", model.predicted_accuracy);
    Ok(())
}
