//! One-dimensional radial tools: the explicit energy-critical profile and
//! Riesz potentials of radial densities by Newton's theorem.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{GhError, Result};
use crate::numerics::{integrate, integrate_to_infinity};

const QUAD_ABS: f64 = 1e-15;
const QUAD_REL: f64 = 1e-13;

/// Surface area of the unit sphere in `R^N`.
pub fn sphere_area(dim: usize) -> f64 {
    2.0 * PI.powf(dim as f64 / 2.0) / gamma(dim as f64 / 2.0)
}

/// `(|x|^{-b} * g)(r)` for a radial density `g(|x|)`.
///
/// Exact reductions exist for the Newtonian exponent `b = N - 2` (any
/// `N >= 3`) and for every `b` in three dimensions; other pairs are
/// `Unsupported`.
pub fn radial_riesz_potential(g: &impl Fn(f64) -> f64, r: f64, dim: usize, b: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(GhError::Domain(format!("radius {r} must be positive")));
    }
    let nd = dim as f64;
    if dim >= 3 && (b - (nd - 2.0)).abs() < 1e-14 {
        let area = sphere_area(dim);
        let inner = integrate(|s| g(s) * s.powf(nd - 1.0), 0.0, r, QUAD_ABS, QUAD_REL)?;
        let outer = integrate_to_infinity(|s| g(s) * s, r, QUAD_ABS, QUAD_REL)?;
        return Ok(area * (inner * r.powf(2.0 - nd) + outer));
    }
    if dim == 3 && b > 0.0 && b < 3.0 {
        // angular average of |x - y|^{-b} over the sphere |y| = s
        let shell = |s: f64| -> f64 {
            if s == 0.0 {
                return 4.0 * PI * r.powf(-b);
            }
            let (hi, lo) = (r + s, (r - s).abs());
            let bracket = if (b - 2.0).abs() < 1e-14 {
                (hi / lo).ln()
            } else {
                (hi.powf(2.0 - b) - lo.powf(2.0 - b)) / (2.0 - b)
            };
            2.0 * PI / (r * s) * bracket
        };
        let inner = integrate(|s| g(s) * s * s * shell(s), 0.0, r, QUAD_ABS, QUAD_REL)?;
        let outer = integrate_to_infinity(|s| g(s) * s * s * shell(s), r, QUAD_ABS, QUAD_REL)?;
        return Ok(inner + outer);
    }
    Err(GhError::Unsupported(format!(
        "radial Riesz potential for N = {dim}, b = {b}"
    )))
}

/// `Q(r) = A (1 + r²)^{-(N-2)/2}`, the explicit solution of
/// `ΔQ + (|x|^{-(N-2)} * Q^p) Q^{p-1} = 0` with `p = (N+2)/(N-2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalProfile {
    pub dim: usize,
    pub amplitude: f64,
}

/// The explicit energy-critical profile for `b = N - 2`.
pub fn explicit_critical_q(dim: usize) -> Result<CriticalProfile> {
    if !(3..=4).contains(&dim) {
        return Err(GhError::InvalidParams(format!(
            "explicit critical profile needs N in 3..=4, got {dim}"
        )));
    }
    let nd = dim as f64;
    let base = nd * (nd - 2.0) / PI.powf(nd / 2.0) * gamma(1.0 + nd / 2.0);
    Ok(CriticalProfile {
        dim,
        amplitude: base.powf((nd - 2.0) / 8.0),
    })
}

impl CriticalProfile {
    fn nd(&self) -> f64 {
        self.dim as f64
    }

    pub fn b(&self) -> f64 {
        self.nd() - 2.0
    }

    /// `(N + 2)/(N - 2)`
    pub fn power(&self) -> f64 {
        (self.nd() + 2.0) / (self.nd() - 2.0)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.amplitude * (1.0 + r * r).powf(-(self.nd() - 2.0) / 2.0)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let nd = self.nd();
        -self.amplitude * (nd - 2.0) * r * (1.0 + r * r).powf(-nd / 2.0)
    }

    /// `ΔQ = Q'' + (N-1)Q'/r`, in closed form.
    pub fn laplacian(&self, r: f64) -> f64 {
        let nd = self.nd();
        -self.amplitude * nd * (nd - 2.0) * (1.0 + r * r).powf(-(nd + 2.0) / 2.0)
    }

    /// `(|x|^{-(N-2)} * Q^p)(r)` by radial quadrature.
    pub fn potential(&self, r: f64) -> Result<f64> {
        let p = self.power();
        radial_riesz_potential(&|s| self.value(s).powf(p), r, self.dim, self.b())
    }

    /// `‖∇Q‖²` by radial quadrature.
    pub fn grad_norm_sq(&self) -> Result<f64> {
        let nd = self.nd();
        let v = integrate_to_infinity(
            |r| self.derivative(r).powi(2) * r.powf(nd - 1.0),
            0.0,
            QUAD_ABS,
            QUAD_REL,
        )?;
        Ok(sphere_area(self.dim) * v)
    }

    /// `Z(Q)` by nested radial quadrature.
    pub fn z_value(&self) -> Result<f64> {
        let nd = self.nd();
        let p = self.power();
        let v = integrate_to_infinity(
            |r| {
                if r == 0.0 {
                    return 0.0;
                }
                self.potential(r).unwrap_or(f64::NAN) * self.value(r).powf(p) * r.powf(nd - 1.0)
            },
            0.0,
            1e-12,
            1e-11,
        )?;
        if !v.is_finite() {
            return Err(GhError::NoConvergence {
                iterations: 0,
                residual: f64::NAN,
            });
        }
        Ok(sphere_area(self.dim) * v)
    }

    /// Relative weighted residual of `ΔQ + V Q^{p-1} = 0`, sampled on
    /// `samples` radii in `(0, r_max]`:
    /// `sqrt(Σ res² r^{N-1}) / sqrt(Σ (ΔQ)² r^{N-1})`.
    pub fn residual(&self, r_max: f64, samples: usize) -> Result<f64> {
        let nd = self.nd();
        let p = self.power();
        let (mut num, mut den) = (0.0, 0.0);
        for i in 1..=samples {
            let r = r_max * i as f64 / samples as f64;
            let lap = self.laplacian(r);
            let res = lap + self.potential(r)? * self.value(r).powf(p - 1.0);
            let w = r.powf(nd - 1.0);
            num += res * res * w;
            den += lap * lap * w;
        }
        Ok((num / den).sqrt())
    }
}
