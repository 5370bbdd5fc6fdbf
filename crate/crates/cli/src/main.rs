use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use removability_cli::{config, run_file, ExperimentKind, RunOptions};

#[derive(Parser)]
#[command(name = "removability", version, about = "Run removability experiments from a TOML config")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `seed` in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for independent grid points.
        #[arg(long)]
        threads: Option<usize>,
        /// Depth of the thin Cantor set.
        #[arg(long)]
        depth_override: Option<u32>,
    },
    /// Check a config file without running anything.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// List the available experiment kinds.
    ListExperiments,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::ListExperiments => {
            for kind in ExperimentKind::ALL {
                println!("{:<24}{}", kind.name(), kind.summary());
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match config::load(&config) {
            Ok(loaded) => {
                for w in &loaded.warnings {
                    eprintln!("warning: {w}");
                }
                println!("ok");
                ExitCode::SUCCESS
            }
            Err(diags) => {
                for d in diags {
                    eprintln!("{}: error: {d}", config.display());
                }
                ExitCode::from(1)
            }
        },
        Command::Run {
            config,
            out,
            seed,
            threads,
            depth_override,
        } => {
            let opts = RunOptions {
                out,
                seed,
                threads,
                depth_override,
            };
            match run_file(&config, &opts) {
                Ok(result) => {
                    for w in &result.manifest.warnings {
                        eprintln!("warning: {w}");
                    }
                    println!(
                        "{}: wrote {} in {:.2} s",
                        result.manifest.experiment,
                        result.out_dir.display(),
                        result.manifest.wall_time_s
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{}: {e}", config.display());
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}
