//! Gaussian-data amplitude thresholds for the worked parameter sets.
//! The subcritical set needs a ground state; pass `n L` to choose its grid.
//!
//! `cargo run --release --example thresholds [n L]`
use ghartree::criteria::{all_thresholds, scale_exponent, Denominators, EnergyModel};
use ghartree::groundstate::{petviashvili_solve, DEFAULT_MAX_ITER, DEFAULT_TOL};
use ghartree::{classify, Criticality, EquationParams, Grid};

fn main() -> ghartree::Result<()> {
    let a: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let (n, l) = if a.len() == 2 { (a[0] as usize, a[1]) } else { (64, 10.0) };
    for (dim, p, b) in [(3, 3.0, 1.0), (3, 5.0, 1.0), (4, 3.0, 2.0), (3, 7.0, 1.0)] {
        let params = EquationParams::new(dim, p, b)?;
        let den = match classify(&params)?.class {
            Criticality::Intercritical => {
                let q = petviashvili_solve(params, &Grid::new(dim, n, l)?, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
                println!("(ground state on n = {n}, L = {l}: M[Q] = {:.5})", q.mass_q);
                Some(Denominators::from_ground_state(&q)?)
            }
            Criticality::EnergyCritical => Some(Denominators::energy_critical(&params)?),
            _ => None,
        };
        println!("N={dim} p={p} b={b}: thresholds in beta/gamma^{:.4}", scale_exponent(&params));
        for model in [EnergyModel::Exact, EnergyModel::Published] {
            let t = all_thresholds(&params, den.as_ref(), model)?;
            let row: Vec<String> = t.iter().map(|(k, v)| format!("{k}={v:.5}")).collect();
            println!("  {model:?}: {}", row.join("  "));
        }
    }
    Ok(())
}
