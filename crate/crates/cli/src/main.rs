use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coherent_engine::config::{parse_config, ExperimentKind};
use coherent_engine::experiment::run_experiment;
use coherent_engine::selftest::{run_selftest, write_plot_csvs};
use coherent_engine::Error;

#[derive(Parser)]
#[command(name = "coherent-engine", version, about = "Collective coherent heat-engine simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a key=value config file.
    Run {
        config: PathBuf,
        /// Write the CSV here instead of stdout (overrides `output=` in the config).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the randomized invariant suite.
    Selftest {
        /// Also write the plotting CSVs into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// List experiment names.
    ListExperiments,
}

/// Exit code for domain and config errors.
const DOMAIN_EXIT: u8 = 2;

fn fail(err: &Error) -> ExitCode {
    eprintln!("{}: {err}", err.name());
    ExitCode::from(DOMAIN_EXIT)
}

fn run(config: PathBuf, output: Option<PathBuf>) -> ExitCode {
    let text = match fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("IoError: {}: {e}", config.display());
            return ExitCode::FAILURE;
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let csv = match run_experiment(&cfg) {
        Ok(t) => t.to_csv(),
        Err(e) => return fail(&e),
    };
    match output.or(cfg.output) {
        Some(path) => {
            if let Err(e) = fs::write(&path, csv) {
                eprintln!("IoError: {}: {e}", path.display());
                return ExitCode::FAILURE;
            }
        }
        None => print!("{csv}"),
    }
    ExitCode::SUCCESS
}

fn selftest(out_dir: Option<PathBuf>) -> ExitCode {
    let outcomes = run_selftest();
    let mut ok = true;
    for o in &outcomes {
        println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
        ok &= o.passed;
    }
    if let Some(dir) = out_dir {
        match write_plot_csvs(&dir) {
            Ok(paths) => {
                for p in paths {
                    println!("wrote {}", p.display());
                }
            }
            Err(e) => return fail(&e),
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config, output } => run(config, output),
        Command::Selftest { out_dir } => selftest(out_dir),
        Command::ListExperiments => {
            for kind in ExperimentKind::ALL {
                println!("{:<14} {}", kind.name(), kind.description());
            }
            ExitCode::SUCCESS
        }
    }
}
