//! Explicit energy-critical ground states in 3d and 4d, checked against
//! the closed-form sharp constants.
//!
//! `cargo run --example critical_profile`
use ghartree::groundstate::critical_constants;
use ghartree::groundstate::radial::explicit_critical_q;

fn main() -> ghartree::Result<()> {
    for dim in [3, 4] {
        let q = explicit_critical_q(dim)?;
        let k = critical_constants(dim, q.b())?;
        println!("N = {dim}: Q(r) = {:.6} (1 + r^2)^-{}", q.amplitude, (dim - 2) as f64 / 2.0);
        println!("  residual           {:.2e}", q.residual(40.0, 400)?);
        println!("  |grad Q|^2 radial  {:.8}", q.grad_norm_sq()?);
        println!("  |grad Q|^2 sharp   {:.8}", k.grad_q_sq_critical);
        println!("  Z(Q)               {:.8}", q.z_value()?);
        println!("  E[Q]               {:.8}", k.energy_q_critical);
        println!("  C_GN / C_Sob / C_HLS = {:.6e} / {:.6e} / {:.6e}", k.c_gn, k.c_sobolev, k.c_hls);
    }
    Ok(())
}
