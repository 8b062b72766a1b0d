use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, ValueEnum};
use ghartree::cli::{error_json, exit_code, run_command, Options, RunConfig};
use ghartree::GhError;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Params,
    Groundstate,
    Thresholds,
    Classify,
    Evolve,
    Sweep,
}

/// Focusing generalized Hartree laboratory.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Args {
    command: Command,
    /// Extra `key=value` settings, applied after the config file.
    settings: Vec<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Accepted for compatibility; runs are deterministic.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    resume: Option<PathBuf>,
}

fn run(args: &Args) -> anyhow::Result<String> {
    let cfg = RunConfig::load(args.config.as_deref(), &args.settings)?;
    let opts = Options { out: args.out.clone(), threads: args.threads, resume: args.resume.clone() };
    let name = args.command.to_possible_value().expect("named variant");
    let out = run_command(name.get_name(), &cfg, &opts).with_context(|| format!("{} failed", name.get_name()))?;
    for f in &out.files {
        log::info!("wrote {}", f.display());
    }
    Ok(out.stdout)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GHARTREE_LOG", "warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(stdout) => {
            print!("{stdout}");
            ExitCode::SUCCESS
        }
        Err(err) => match err.downcast_ref::<GhError>() {
            Some(gh) => {
                eprintln!("{}", error_json(gh));
                ExitCode::from(exit_code(gh) as u8)
            }
            None => {
                eprintln!("{}", serde_json::json!({ "error": "internal", "message": format!("{err:#}"), "exit_code": 1 }));
                ExitCode::FAILURE
            }
        },
    }
}
