//! Split-step evolution of a Gaussian, with the observable trajectory as
//! CSV on stdout.
//!
//! `cargo run --release --example evolve_gaussian [beta t_end n L]`
use ghartree::evolve::{EvolveConfig, Evolver};
use ghartree::observables::gaussian;
use ghartree::{EquationParams, Grid};

fn main() -> ghartree::Result<()> {
    let a: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let beta = a.first().copied().unwrap_or(0.5);
    let t_end = a.get(1).copied().unwrap_or(1.0);
    let n = a.get(2).map(|&v| v as usize).unwrap_or(64);
    let l = a.get(3).copied().unwrap_or(12.0);
    let params = EquationParams::new(3, 3.0, 1.0)?;
    let grid = Grid::new(3, n, l)?;
    let config = EvolveConfig { dt0: 0.01, t_end, record_stride: 5, ..Default::default() };
    let record = Evolver::new(params, &grid)?.run(&gaussian(&grid, beta, 1.0, |_| 0.0), &config)?;
    record.write_csv(std::io::stdout().lock(), &[format!("beta={beta} n={n} L={l}")])?;
    eprintln!(
        "{} after {} steps ({} rejected); |grad u| {:.4} -> {:.4}; mass drift {:.1e}, energy drift {:.1e}",
        record.status,
        record.steps,
        record.rejected_steps,
        record.first().grad_norm(),
        record.last().grad_norm(),
        record.max_mass_drift(),
        record.max_energy_drift()
    );
    Ok(())
}
