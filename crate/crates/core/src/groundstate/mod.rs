//! Ground states `-ΔQ + Q - (|x|^{-b} * |Q|^p)|Q|^{p-2}Q = 0` by Petviashvili
//! iteration, the sharp Gagliardo-Nirenberg constant they realize, and the
//! closed-form constants of the energy-critical case.

pub mod radial;

use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::eqparams::{classify, EquationParams, CLASS_TOL};
use crate::error::{GhError, Result};
use crate::field::{ComplexField, Grid};
use crate::observables::{mass, Observer};

pub use radial::{explicit_critical_q, radial_riesz_potential, CriticalProfile};

/// Default residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default iteration cap.
pub const DEFAULT_MAX_ITER: usize = 500;

/// A converged ground state with its Pohozhaev diagnostics.
#[derive(Debug, Clone)]
pub struct GroundStateResult {
    pub params: EquationParams,
    pub profile: ComplexField,
    /// `‖Q - (1-Δ)^{-1} N(Q)‖_{L²}`
    pub residual: f64,
    pub tol: f64,
    pub mass_q: f64,
    pub grad_sq_q: f64,
    pub z_q: f64,
    pub c_gn: f64,
    pub iterations: usize,
    /// Final stabilizing factor `S`.
    pub stabilizer: f64,
}

/// Serializable summary written next to a ground-state checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateSummary {
    pub params: EquationParams,
    pub grid: Grid,
    pub residual: f64,
    pub iterations: usize,
    pub stabilizer: f64,
    pub mass_q: f64,
    pub grad_sq_q: f64,
    pub z_q: f64,
    pub energy_q: f64,
    pub c_gn: f64,
    pub grad_over_mass: f64,
    pub z_over_mass: f64,
}

impl GroundStateResult {
    /// `E[Q] = ½‖∇Q‖² - Z(Q)/(2p)`
    pub fn energy_q(&self) -> f64 {
        0.5 * self.grad_sq_q - self.z_q / (2.0 * self.params.p)
    }

    pub fn is_converged(&self) -> bool {
        self.residual <= self.tol
    }

    pub fn summary(&self) -> GroundStateSummary {
        GroundStateSummary {
            params: self.params,
            grid: self.profile.grid,
            residual: self.residual,
            iterations: self.iterations,
            stabilizer: self.stabilizer,
            mass_q: self.mass_q,
            grad_sq_q: self.grad_sq_q,
            z_q: self.z_q,
            energy_q: self.energy_q(),
            c_gn: self.c_gn,
            grad_over_mass: self.grad_sq_q / self.mass_q,
            z_over_mass: self.z_q / self.mass_q,
        }
    }

    /// Writes `<stem>.ghfd` and `<stem>.json`.
    pub fn save(&self, stem: &Path) -> Result<()> {
        let file = std::fs::File::create(stem.with_extension("ghfd"))?;
        self.profile
            .write_checkpoint(std::io::BufWriter::new(file))?;
        std::fs::write(
            stem.with_extension("json"),
            serde_json::to_string_pretty(&self.summary())?,
        )?;
        Ok(())
    }

    /// Axis samples `Q(x_j e_axis)` for `x_j >= 0`.
    pub fn axis_profile(&self, axis: usize) -> Vec<f64> {
        let g = self.profile.grid;
        let c = g.center_index();
        (c..g.n)
            .map(|j| {
                let mut idx = vec![c; g.dim];
                idx[axis] = j;
                self.profile.values[g.ravel(&idx)].re
            })
            .collect()
    }

    /// Largest relative deviation between the axis profiles (both
    /// directions), a radial-symmetry diagnostic.
    pub fn axis_asymmetry(&self) -> f64 {
        let g = self.profile.grid;
        let c = g.center_index();
        let reference = self.axis_profile(0);
        let peak = reference[0].abs();
        let mut worst: f64 = 0.0;
        for axis in 0..g.dim {
            for (d, &r) in reference.iter().enumerate().take(c) {
                for j in [c + d, c - d] {
                    let mut idx = vec![c; g.dim];
                    idx[axis] = j;
                    worst = worst.max((self.profile.values[g.ravel(&idx)].re - r).abs() / peak);
                }
            }
        }
        worst
    }
}

/// Petviashvili iteration from the seed `e^{-|x|²/2}`:
/// `Q ← S^σ (1-Δ)^{-1} N(Q)` with `S = ⟨Q,(1-Δ)Q⟩/⟨Q,N(Q)⟩` and
/// `σ = (2p-1)/(2p-2)`.
pub fn petviashvili_solve(
    params: EquationParams,
    grid: &Grid,
    tol: f64,
    max_iter: usize,
) -> Result<GroundStateResult> {
    let report = classify(&params)?;
    if report.s_c < -CLASS_TOL || report.s_c >= 1.0 - CLASS_TOL {
        return Err(GhError::WrongRegime {
            expected: "0 <= s_c < 1",
            s_c: report.s_c,
        });
    }
    let observer = Observer::new(params, grid)?;
    let spectral = observer.spectral();
    let nl = observer.nonlinearity();
    let sigma = (2.0 * params.p - 1.0) / (2.0 * params.p - 2.0);
    let dv = grid.cell_volume();

    let mut q = grid.sample(|x| C64::new((-0.5 * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0));
    let mut iterations = 0;
    loop {
        let veff = nl.effective_potential(&q.values)?;
        let nq: Vec<C64> = q.values.iter().zip(&veff).map(|(v, w)| v * *w).collect();
        let mut lq = q.values.clone();
        spectral.neg_laplacian(&mut lq);
        let mut next = nq.clone();
        spectral.invert_helmholtz(&mut next);
        let mut qq = 0.0;
        let mut qlq = 0.0;
        let mut qnq = 0.0;
        let mut res2 = 0.0;
        for (((v, l), nv), w) in q.values.iter().zip(&lq).zip(&nq).zip(&next) {
            qq += v.re * v.re;
            qlq += v.re * l.re;
            qnq += v.re * nv.re;
            res2 += (v - w).norm_sqr();
        }
        let residual = (res2 * dv).sqrt();
        let s = (qq + qlq) / qnq;
        if !(1e-6..=1e6).contains(&s) || !s.is_finite() {
            return Err(GhError::Divergence(s));
        }
        log::debug!("petviashvili {iterations}: residual {residual:.3e}, S = {s:.12}");
        if residual <= tol {
            let grad_sq_q = observer.grad_norm_sq(&q)?;
            let z_q = qnq * dv;
            let mass_q = mass(&q)?;
            let c_gn = weinstein_quotient(&params, mass_q, grad_sq_q, z_q)?;
            return Ok(GroundStateResult {
                params,
                profile: q,
                residual,
                tol,
                mass_q,
                grad_sq_q,
                z_q,
                c_gn,
                iterations,
                stabilizer: s,
            });
        }
        if iterations >= max_iter {
            return Err(GhError::NoConvergence { iterations, residual });
        }
        let factor = s.powf(sigma);
        // the exact iterate is real; drop round-off imaginary parts
        q.values = next.iter().map(|v| C64::new(v.re * factor, 0.0)).collect();
        iterations += 1;
    }
}

/// `Z / (‖∇u‖^{2(k+1)} ‖u‖^{2(1-s_c)(p-1)})` from `M`, `‖∇u‖²` and `Z`.
pub fn weinstein_quotient(params: &EquationParams, mass: f64, grad_sq: f64, z: f64) -> Result<f64> {
    let r = classify(params)?;
    Ok(z / (grad_sq.powf(r.k + 1.0) * mass.powf((1.0 - r.s_c) * (params.p - 1.0))))
}

/// Sharp constant of `Z(u) <= C ‖∇u‖^{2k+2} ‖u‖^{2(1-s_c)(p-1)}`, realized
/// by the ground state.
pub fn sharp_gn_constant(result: &GroundStateResult) -> Result<f64> {
    if !result.is_converged() {
        return Err(GhError::Unconverged {
            residual: result.residual,
            tol: result.tol,
        });
    }
    weinstein_quotient(&result.params, result.mass_q, result.grad_sq_q, result.z_q)
}

/// Closed-form sharp constants of the energy-critical problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpConstants {
    pub c_gn: f64,
    pub c_sobolev: f64,
    pub c_hls: f64,
    pub grad_q_sq_critical: f64,
    pub energy_q_critical: f64,
}

/// Sharp Sobolev, Hardy-Littlewood-Sobolev and `Z <= C ‖∇u‖^{2p}` constants
/// for `p = (2N-b)/(N-2)`, together with `‖∇Q‖²` and `E[Q]` of the
/// extremizer.
pub fn critical_constants(dim: usize, b: f64) -> Result<SharpConstants> {
    if dim < 3 || !(b > 0.0 && b < dim as f64) {
        return Err(GhError::InvalidParams(format!(
            "critical constants need N >= 3 and 0 < b < N, got N = {dim}, b = {b}"
        )));
    }
    let nd = dim as f64;
    let pi = std::f64::consts::PI;
    let ratio = gamma(nd) / gamma(nd / 2.0);
    let c_sobolev = ratio.powf(1.0 / nd) / (nd * (nd - 2.0) * pi).sqrt();
    let c_hls = pi.powf(b / 2.0) * gamma((nd - b) / 2.0) / gamma(nd - b / 2.0) * ratio.powf(1.0 - b / nd);
    let c_gn = pi.powf(b / 2.0)
        * (ratio.powf((nd - b + 2.0) / (2.0 * nd - b)) / (nd * (nd - 2.0) * pi))
            .powf((2.0 * nd - b) / (nd - 2.0))
        * gamma((nd - b) / 2.0)
        / gamma(nd - b / 2.0);
    let p = (2.0 * nd - b) / (nd - 2.0);
    // ‖∇Q‖² = Z(Q) = C ‖∇Q‖^{2p}
    let grad_q_sq_critical = c_gn.powf(-1.0 / (p - 1.0));
    Ok(SharpConstants {
        c_gn,
        c_sobolev,
        c_hls,
        grad_q_sq_critical,
        energy_q_critical: grad_q_sq_critical * (p - 1.0) / (2.0 * p),
    })
}
