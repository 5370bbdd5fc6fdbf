//! Config-driven runner for the removability experiments.

pub mod config;
pub mod experiments;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

pub use config::{Diagnostic, ExperimentConfig, ExperimentKind, Loaded};
pub use experiments::{run_experiment, Outcome, Table};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    /// Replaces the depth of the thin set.
    pub depth_override: Option<u32>,
}

#[derive(Debug)]
pub enum RunError {
    Config(Vec<Diagnostic>),
    Numerical(removability::Error),
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            RunError::Numerical(_) | RunError::Io(_) => 2,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(diags) => {
                for (i, d) in diags.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "error: {d}")?;
                }
                Ok(())
            }
            RunError::Numerical(e) => write!(f, "numerical failure: {e}"),
            RunError::Io(e) => write!(f, "i/o failure: {e}"),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub experiment: ExperimentKind,
    pub config_path: Option<String>,
    pub config: ExperimentConfig,
    pub code_version: &'static str,
    pub seed: u64,
    pub threads: usize,
    pub depth_override: Option<u32>,
    pub started_unix: u64,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub out_dir: PathBuf,
    pub outcome: Outcome,
    pub manifest: Manifest,
}

/// Applies the command-line overrides and revalidates.
pub fn prepare(mut loaded: Loaded, opts: &RunOptions) -> Result<Loaded, RunError> {
    if let Some(seed) = opts.seed {
        loaded.config.seed = Some(seed);
        loaded.warnings.retain(|w| !w.contains("seed"));
    }
    if let Some(depth) = opts.depth_override {
        loaded.config.thin.depth = depth;
        let problems = loaded.config.problems();
        if !problems.is_empty() {
            return Err(RunError::Config(
                problems
                    .into_iter()
                    .map(|(field, message)| Diagnostic {
                        line: None,
                        field: format!("--depth-override ({field})"),
                        message,
                    })
                    .collect(),
            ));
        }
    }
    Ok(loaded)
}

pub fn run_file(path: &Path, opts: &RunOptions) -> Result<RunResult, RunError> {
    let loaded = config::load(path).map_err(RunError::Config)?;
    run_loaded(loaded, Some(path), opts)
}

pub fn run_loaded(loaded: Loaded, path: Option<&Path>, opts: &RunOptions) -> Result<RunResult, RunError> {
    let Loaded { config, warnings } = prepare(loaded, opts)?;
    let threads = opts.threads.unwrap_or_else(rayon::current_num_threads).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| RunError::Io(e.to_string()))?;
    let started_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let clock = Instant::now();
    let outcome = pool
        .install(|| run_experiment(&config))
        .map_err(RunError::Numerical)?;
    let wall_time_s = clock.elapsed().as_secs_f64();

    let out_dir = opts
        .out
        .clone()
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from("results").join(config.experiment.name()));
    fs::create_dir_all(&out_dir)?;
    let mut outputs = Vec::new();
    for table in &outcome.tables {
        let name = format!("{}.csv", table.name);
        write_csv(&out_dir.join(&name), table)?;
        outputs.push(name);
    }
    let summary = serde_json::to_string_pretty(&outcome.summary).map_err(|e| RunError::Io(e.to_string()))?;
    fs::write(out_dir.join("summary.json"), summary + "\n")?;
    outputs.push("summary.json".into());

    let manifest = Manifest {
        experiment: config.experiment,
        config_path: path.map(|p| p.display().to_string()),
        seed: config.seed(),
        config,
        code_version: env!("CARGO_PKG_VERSION"),
        threads,
        depth_override: opts.depth_override,
        started_unix,
        wall_time_s,
        outputs,
        warnings,
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| RunError::Io(e.to_string()))?;
    fs::write(out_dir.join("run.json"), text + "\n")?;
    Ok(RunResult {
        out_dir,
        outcome,
        manifest,
    })
}

pub fn write_csv(path: &Path, table: &Table) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| RunError::Io(e.to_string()))?;
    w.write_record(&table.header).map_err(|e| RunError::Io(e.to_string()))?;
    for row in &table.rows {
        w.write_record(row).map_err(|e| RunError::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
