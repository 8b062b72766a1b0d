//! Equation parameters `(N, p, b)` and the exponent bookkeeping derived from
//! them: critical Sobolev index, criticality class, admissible Strichartz
//! pair and the Hardy-Littlewood-Sobolev partner exponent.

use serde::{Deserialize, Serialize};

use crate::error::{GhError, Result};

/// Tolerance used to snap `s_c` onto the class boundaries `{0, 1}`.
pub const CLASS_TOL: f64 = 1e-12;

/// The triple `(N, p, b)` of `i u_t + Δu + (|x|^{-b} * |u|^p)|u|^{p-2}u = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquationParams {
    pub dim: usize,
    pub p: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criticality {
    MassCritical,
    Intercritical,
    EnergyCritical,
    EnergySupercritical,
    /// `s_c < 0`; outside every theorem used here.
    MassSubcritical,
}

impl std::fmt::Display for Criticality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Criticality::MassCritical => "mass-critical",
            Criticality::Intercritical => "intercritical",
            Criticality::EnergyCritical => "energy-critical",
            Criticality::EnergySupercritical => "energy-supercritical",
            Criticality::MassSubcritical => "mass-subcritical",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalityReport {
    pub s_c: f64,
    pub class: Criticality,
    /// `k = s_c (p - 1)`.
    pub k: f64,
    /// `alpha = k / 2`.
    pub alpha: f64,
    /// `s_c < p - 1` whenever `p` is not an even integer.
    pub lwp_regularity_ok: bool,
    /// `b + s_c < N`, used by the local theory but not part of its statement.
    pub a1_exponent_ok: bool,
}

/// An `L^2`-admissible Strichartz pair with its Hölder duals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissiblePair {
    pub q: f64,
    pub r: f64,
    pub q_dual: f64,
    pub r_dual: f64,
}

impl AdmissiblePair {
    /// Builds a pair, filling in the duals.
    pub fn new(q: f64, r: f64) -> Self {
        AdmissiblePair {
            q,
            r,
            q_dual: dual_exponent(q),
            r_dual: dual_exponent(r),
        }
    }

    /// `2/q + N/r = N/2`, `2 <= q, r <= inf`, and not the endpoint `(2, inf, 2)`.
    pub fn is_admissible(&self, dim: usize, tol: f64) -> bool {
        let n = dim as f64;
        let inv = |x: f64| if x.is_infinite() { 0.0 } else { 1.0 / x };
        let lhs = 2.0 * inv(self.q) + n * inv(self.r);
        let in_range = self.q >= 2.0 && self.r >= 2.0;
        let endpoint = self.q == 2.0 && self.r.is_infinite() && dim == 2;
        in_range && !endpoint && (lhs - n / 2.0).abs() <= tol
    }
}

fn dual_exponent(x: f64) -> f64 {
    if x.is_infinite() {
        1.0
    } else if x == 1.0 {
        f64::INFINITY
    } else {
        x / (x - 1.0)
    }
}

impl EquationParams {
    /// Validates `0 < b < N`, `p >= 2` and `N >= 1`.
    pub fn new(dim: usize, p: f64, b: f64) -> Result<Self> {
        let params = EquationParams { dim, p, b };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(GhError::InvalidParams("dimension must be positive".into()));
        }
        if !(self.p.is_finite() && self.p >= 2.0) {
            return Err(GhError::InvalidParams(format!("p = {} < 2", self.p)));
        }
        let n = self.dim as f64;
        if !(self.b.is_finite() && self.b > 0.0 && self.b < n) {
            return Err(GhError::InvalidParams(format!(
                "b = {} outside (0, {})",
                self.b, self.dim
            )));
        }
        Ok(())
    }

    /// Exponent of the scaling `u -> λ^e u(λx, λ²t)`: `(N - b + 2) / (2(p - 1))`.
    pub fn scaling_exponent(&self) -> f64 {
        (self.dim as f64 - self.b + 2.0) / (2.0 * (self.p - 1.0))
    }

    /// The energy-critical power `p = (2N - b)/(N - 2)`, for `N >= 3`.
    pub fn energy_critical_power(dim: usize, b: f64) -> Result<f64> {
        if dim < 3 {
            return Err(GhError::InvalidParams(
                "energy-critical power needs N >= 3".into(),
            ));
        }
        let n = dim as f64;
        Ok((2.0 * n - b) / (n - 2.0))
    }
}

/// Critical Sobolev index `s_c = N/2 - (N - b + 2)/(2(p - 1))`.
pub fn scaling_index(params: &EquationParams) -> Result<f64> {
    params.validate()?;
    Ok(params.dim as f64 / 2.0 - params.scaling_exponent())
}

pub fn classify(params: &EquationParams) -> Result<CriticalityReport> {
    let s_c = scaling_index(params)?;
    let class = if s_c.abs() <= CLASS_TOL {
        Criticality::MassCritical
    } else if (s_c - 1.0).abs() <= CLASS_TOL {
        Criticality::EnergyCritical
    } else if s_c < 0.0 {
        Criticality::MassSubcritical
    } else if s_c < 1.0 {
        Criticality::Intercritical
    } else {
        Criticality::EnergySupercritical
    };
    let k = s_c * (params.p - 1.0);
    let p_even_integer = params.p.fract() == 0.0 && (params.p as i64) % 2 == 0;
    Ok(CriticalityReport {
        s_c,
        class,
        k,
        alpha: k / 2.0,
        lwp_regularity_ok: p_even_integer || s_c < params.p - 1.0,
        a1_exponent_ok: params.b + s_c < params.dim as f64,
    })
}

/// The pair `(q, r) = (2p, 2Np/(Np - 2))` used for the local theory.
pub fn canonical_pair(params: &EquationParams) -> Result<AdmissiblePair> {
    params.validate()?;
    let n = params.dim as f64;
    let np = n * params.p;
    if np <= 2.0 {
        return Err(GhError::InvalidParams(format!("Np = {np} <= 2")));
    }
    let pair = AdmissiblePair::new(2.0 * params.p, 2.0 * np / (np - 2.0));
    if !pair.is_admissible(params.dim, 1e-12) {
        return Err(GhError::InvalidParams(format!(
            "pair ({}, {}) is not admissible in dimension {}",
            pair.q, pair.r, params.dim
        )));
    }
    Ok(pair)
}

/// Solves `1/r2 + b/N = 1 + 1/r1` for `r1`.
pub fn hls_partner_exponent(r2: f64, params: &EquationParams) -> Result<f64> {
    params.validate()?;
    if !(r2 > 1.0 && r2.is_finite()) {
        return Err(GhError::OutOfRange(format!("r2 = {r2} outside (1, inf)")));
    }
    let inv_r1 = 1.0 / r2 + params.b / params.dim as f64 - 1.0;
    // r1 in (1, inf)  <=>  1/r1 in (0, 1)
    if !(inv_r1 > 1e-14 && inv_r1 < 1.0) {
        return Err(GhError::OutOfRange(format!(
            "solved 1/r1 = {inv_r1} leaves (0, 1)"
        )));
    }
    Ok(1.0 / inv_r1)
}
