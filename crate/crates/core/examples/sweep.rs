//! Amplitude sweep through the batch layer, as `ghartree sweep` would run it.
//!
//! `cargo run --release --example sweep [N p b] [threads]`
use ghartree::cli::{run_command, Options, RunConfig};

fn main() -> ghartree::Result<()> {
    let a: Vec<String> = std::env::args().skip(1).collect();
    let (dim, p, b) = if a.len() >= 3 { (a[0].as_str(), a[1].as_str(), a[2].as_str()) } else { ("3", "7", "1") };
    let threads = a.get(3).and_then(|s| s.parse().ok()).unwrap_or(4);
    let cfg = RunConfig::parse(&format!("N={dim}\np={p}\nb={b}\nn=48\nL=12\nbeta_min=0.2\nbeta_max=2.0\nbeta_steps=37\n"))?;
    let out = run_command("sweep", &cfg, &Options { threads, ..Default::default() })?;
    print!("{}", out.stdout);
    Ok(())
}
