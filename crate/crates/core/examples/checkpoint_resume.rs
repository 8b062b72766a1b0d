//! Checkpoint mid-run, resume, and compare with an uninterrupted run.
//!
//! `cargo run --release --example checkpoint_resume`
use ghartree::evolve::{Checkpoint, EvolveConfig, Evolver};
use ghartree::observables::gaussian;
use ghartree::{EquationParams, Grid};

fn main() -> ghartree::Result<()> {
    let params = EquationParams::new(3, 3.0, 1.0)?;
    let grid = Grid::new(3, 32, 8.0)?;
    let ev = Evolver::new(params, &grid)?;
    let u0 = gaussian(&grid, 0.7, 1.0, |_| 0.0);
    let dir = std::env::temp_dir().join("ghartree-checkpoint-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("half.ghfd");

    let full = ev.run(&u0, &EvolveConfig { dt0: 0.01, t_end: 0.4, ..Default::default() })?;
    let half = ev.run(
        &u0,
        &EvolveConfig { dt0: 0.01, t_end: 0.2, checkpoint_stride: 10, checkpoint_path: Some(path.clone()), ..Default::default() },
    )?;
    println!("first leg: {} at t = {}", half.status, half.final_time);
    let resumed = ev.resume(Checkpoint::load(&path)?, &EvolveConfig { dt0: 0.01, t_end: 0.4, ..Default::default() })?;
    let a = full.final_field.as_ref().expect("final field");
    let b = resumed.final_field.as_ref().expect("final field");
    println!("resumed to t = {}; relative L2 difference {:.2e}", resumed.final_time, a.rel_l2_distance(b));
    Ok(())
}
