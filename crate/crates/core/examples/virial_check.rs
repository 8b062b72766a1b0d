//! Finite differences of the sampled variance against the virial
//! identities along a short trajectory.
//!
//! `cargo run --release --example virial_check [beta]`
use ghartree::evolve::{evolve, virial_consistency, EvolveConfig};
use ghartree::observables::gaussian;
use ghartree::{EquationParams, Grid};

fn main() -> ghartree::Result<()> {
    let beta = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.8);
    let params = EquationParams::new(3, 3.0, 1.0)?;
    let grid = Grid::new(3, 48, 10.0)?;
    let config = EvolveConfig { dt0: 2e-3, t_end: 0.4, record_stride: 10, ..Default::default() };
    let record = evolve(&gaussian(&grid, beta, 1.0, |_| 0.0), &config, &params)?;
    for s in &record.samples {
        let (a, b) = s.virial_acceleration(&params)?;
        println!("t {:.3}  V {:.6}  V_t {:+.6}  V_tt {:+.6} / {:+.6}", s.time, s.variance, s.variance_rate, a, b);
    }
    let r = virial_consistency(&record)?;
    println!(
        "{} interior points: rate {:.2e}, acceleration {:.2e}, analytic forms {:.2e}",
        r.interior_points, r.rate_discrepancy, r.acceleration_discrepancy, r.form_mismatch
    );
    Ok(())
}
