//! Petviashvili ground state with Pohozhaev diagnostics and the sharp
//! Gagliardo-Nirenberg constant.
//!
//! `cargo run --release --example ground_state [n L] [out-stem]`
use std::path::PathBuf;

use ghartree::groundstate::{petviashvili_solve, DEFAULT_MAX_ITER, DEFAULT_TOL};
use ghartree::{EquationParams, Grid};

fn main() -> ghartree::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().and_then(|s| s.parse().ok()).unwrap_or(64);
    let l = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(10.0);
    let params = EquationParams::new(3, 3.0, 1.0)?;
    let grid = Grid::new(3, n, l)?;
    let t0 = std::time::Instant::now();
    let q = petviashvili_solve(params, &grid, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    println!("converged in {} iterations ({:.1?}), residual {:.2e}", q.iterations, t0.elapsed(), q.residual);
    println!("M[Q]          = {:.6}", q.mass_q);
    println!("|grad Q|^2/M  = {:.6}", q.grad_sq_q / q.mass_q);
    println!("Z(Q)/M        = {:.6}", q.z_q / q.mass_q);
    println!("E[Q]/M        = {:.6}", q.energy_q() / q.mass_q);
    println!("C_GN          = {:.6}", q.c_gn);
    println!("axis asymmetry {:.2e}", q.axis_asymmetry());
    if let Some(stem) = args.get(2) {
        q.save(&PathBuf::from(stem))?;
        println!("saved {stem}.ghfd and {stem}.json");
    }
    Ok(())
}
