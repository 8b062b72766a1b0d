//! Dichotomy verdict for `β e^{-γ|x|²/2}` under any admissible `(N, p, b)`.
//! Intercritical runs solve for the ground state on a coarse grid.
//!
//! `cargo run --release --example classify_gaussian [N p b beta gamma]`
use ghartree::criteria::{dichotomy_classify, gaussian_observables, ClassifyInput, Denominators, EnergyModel};
use ghartree::groundstate::{petviashvili_solve, DEFAULT_MAX_ITER, DEFAULT_TOL};
use ghartree::{classify, Criticality, EquationParams, Grid};

fn main() -> ghartree::Result<()> {
    let a: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let (dim, p, b) = if a.len() >= 3 { (a[0] as usize, a[1], a[2]) } else { (3, 3.0, 1.0) };
    let params = EquationParams::new(dim, p, b)?;
    let den = match classify(&params)?.class {
        Criticality::Intercritical => {
            let q = petviashvili_solve(params, &Grid::new(dim, 48, 8.0)?, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
            Some(Denominators::from_ground_state(&q)?)
        }
        Criticality::EnergyCritical => Some(Denominators::energy_critical(&params)?),
        _ => None,
    };
    let gamma = a.get(4).copied().unwrap_or(1.0);
    let betas = match a.get(3) {
        Some(&beta) => vec![beta],
        None => vec![0.5, 0.9, 1.0, 1.1, 1.3, 1.5],
    };
    for beta in betas {
        let g = gaussian_observables(beta, gamma, &params, EnergyModel::Exact)?;
        let input = ClassifyInput { criterion: g.input, grad_sq: g.grad_sq, finite_variance: true, radial: true };
        let r = dichotomy_classify(&input, den.as_ref())?;
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into());
        println!(
            "beta {beta:.3}: ME {:>8} G {:>8} criterion {:>5} -> {} {:?}",
            fmt(r.me_value),
            fmt(r.g_value),
            r.criterion.map(|c| c.holds.to_string()).unwrap_or_else(|| "-".into()),
            r.verdict,
            r.clauses_fired
        );
    }
    Ok(())
}
