//! Parses a run configuration, prints its canonical form and hash, then
//! runs one command.
//!
//! `cargo run --release --example batch_config [file] [command]`
use ghartree::cli::{error_json, run_command, Options, RunConfig};

const SAMPLE: &str = "\
# energy-critical 3d, half the gradient threshold
N = 3
p = 5
b = 1
beta = 0.45
";

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let text = match args.first() {
        Some(path) => std::fs::read_to_string(path).expect("readable config"),
        None => SAMPLE.to_string(),
    };
    let command = args.get(1).map(String::as_str).unwrap_or("classify");
    let result = RunConfig::parse(&text).and_then(|cfg| {
        eprint!("{}", cfg.canonical());
        eprintln!("hash {}", cfg.hash());
        run_command(command, &cfg, &Options::default())
    });
    match result {
        Ok(out) => print!("{}", out.stdout),
        Err(e) => {
            eprintln!("{}", error_json(&e));
            std::process::exit(ghartree::cli::exit_code(&e));
        }
    }
}
