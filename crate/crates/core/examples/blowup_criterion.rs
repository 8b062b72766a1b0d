//! The variance blow-up criterion and its particle-in-a-potential reading,
//! for Gaussians `β e^{-|x|²/2}` with an optional inward chirp.
//!
//! `cargo run --example blowup_criterion [beta] [chirp]`
use ghartree::criteria::{blowup_criterion, blowup_criterion_real, gaussian_observables, mechanics_conditions, EnergyModel};
use ghartree::EquationParams;

fn main() -> ghartree::Result<()> {
    let a: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let beta = a.first().copied().unwrap_or(1.2);
    let chirp = a.get(1).copied().unwrap_or(0.0);
    let params = EquationParams::new(3, 3.0, 1.0)?;
    let g = gaussian_observables(beta, 1.0, &params, EnergyModel::Exact)?;
    let mut input = g.input;
    // u e^{-i c |x|²} shifts V_t(0) by -8 c V(0)
    input.variance_rate0 = -8.0 * chirp * input.variance0;
    // and 4 c² V(0) to ‖∇u‖²
    input.energy += 2.0 * chirp * chirp * input.variance0;
    println!("M = {:.6}  E = {:.6}  V = {:.6}  V_t = {:.6}", input.mass, input.energy, input.variance0, input.variance_rate0);
    let out = blowup_criterion(&input)?;
    println!("criterion holds: {}  (f = {:.6})", out.holds, out.f_value);
    if chirp == 0.0 {
        println!("real-data form agrees: {}", blowup_criterion_real(&input)? == out.holds);
    }
    let s = out.state;
    println!("x0 = {:.6}  v = {:.6}  v_s = {:.6}  particle energy {:.6} vs barrier {:.6}", s.x0, s.position(), s.velocity(), s.particle_energy(), s.u_tilde_max);
    let c = mechanics_conditions(&s)?;
    println!("mechanics conditions: {:?}", c.tags());
    Ok(())
}
