//! Free-space convolution with the Riesz kernel `|x|^{-b}` and the nonlocal
//! nonlinearity `(|x|^{-b} * |u|^p) |u|^{p-2} u`.
//!
//! The convolution is a lattice sum `Σ_j w(m - j) g_j` evaluated exactly
//! (up to round-off) by zero padding to `(2n)^N` and multiplying spectra.
//! Off the origin the weights are `h^N |h d|^{-b}`. The punctured lattice
//! sum misses the singular cell; its leading error terms are the Epstein
//! zeta moments `Z_N(b) h^{N-b} g(0)` and `Z_N(b-2) h^{N-b+2} Δg(0) / 2N`,
//! which are folded into the weights at the origin and its `2N` nearest
//! neighbours. For smooth `g` this makes the rule accurate to
//! `O(h^{N-b+4})` instead of `O(h^{N-b})`.

use std::sync::Mutex;

use num_complex::Complex64 as C64;

use super::fft::RealPaddedFft;
use super::lattice::epstein_zeta;
use super::{ComplexField, Grid, RealField, BOUNDARY_WARN};
use crate::eqparams::EquationParams;
use crate::error::{GhError, Result};

/// Tabulated, transformed Riesz kernel for one grid and one exponent `b`.
#[derive(Debug, Clone)]
pub struct RieszKernel {
    b: f64,
    grid: Grid,
    fft: RealPaddedFft,
    /// Kernel DFT on the padded grid (half spectrum), divided by `(2n)^N`.
    spectrum: Vec<f64>,
    boundary: Vec<bool>,
    w_origin: f64,
    w_neighbour: f64,
}

impl RieszKernel {
    pub fn new(grid: &Grid, b: f64) -> Result<Self> {
        if !(b > 0.0 && b < grid.dim as f64) {
            return Err(GhError::InvalidParams(format!(
                "kernel exponent b = {b} outside (0, {})",
                grid.dim
            )));
        }
        let h = grid.spacing();
        let dim = grid.dim;
        let z_b = epstein_zeta(dim, b);
        let z_b2 = epstein_zeta(dim, b - 2.0);
        let scale = h.powf(dim as f64 - b);
        let w_origin = (z_b2 - z_b) * scale;
        let w_neighbour = scale - z_b2 * scale / (2.0 * dim as f64);

        let padded = 2 * grid.n;
        let fft = RealPaddedFft::new(dim, grid.n);
        let total = padded.pow(dim as u32);
        let mut weights = vec![0.0; total];
        let mut idx = vec![0usize; dim];
        let mut offset = vec![0i64; dim];
        for v in weights.iter_mut() {
            for (o, &m) in offset.iter_mut().zip(&idx) {
                *o = if m < grid.n { m as i64 } else { m as i64 - padded as i64 };
            }
            *v = kernel_weight(&offset, h, b, w_origin, w_neighbour);
            for axis in (0..dim).rev() {
                idx[axis] += 1;
                if idx[axis] < padded {
                    break;
                }
                idx[axis] = 0;
            }
        }
        let mut buf = Vec::new();
        fft.forward_full(&weights, &mut buf);
        drop(weights);
        let norm = 1.0 / total as f64;
        // even kernel: the spectrum is real
        let spectrum = buf.iter().map(|c| c.re * norm).collect();
        Ok(RieszKernel {
            b,
            grid: *grid,
            fft,
            spectrum,
            boundary: grid.boundary_mask(),
            w_origin,
            w_neighbour,
        })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Lattice weight at integer offset `d` (in cells).
    pub fn weight(&self, offset: &[i64]) -> f64 {
        kernel_weight(
            offset,
            self.grid.spacing(),
            self.b,
            self.w_origin,
            self.w_neighbour,
        )
    }

    /// Length of the scratch buffer used by [`RieszKernel::convolve_into`].
    pub fn scratch_len(&self) -> usize {
        self.spectrum.len()
    }

    /// `∫ |x - y|^{-b} g(y) dy` at every grid point.
    pub fn convolve(&self, g: &RealField) -> Result<RealField> {
        if g.grid != self.grid {
            return Err(GhError::KernelMismatch(format!(
                "kernel built for {:?}, field on {:?}",
                self.grid, g.grid
            )));
        }
        g.check_finite()?;
        let mut out = RealField::zeros(&self.grid);
        let mut scratch = Vec::new();
        self.convolve_into(&g.values, &mut out.values, &mut scratch)?;
        Ok(out)
    }

    /// Slice version of [`RieszKernel::convolve`] reusing `scratch`.
    pub fn convolve_into(&self, g: &[f64], out: &mut [f64], scratch: &mut Vec<C64>) -> Result<()> {
        let len = self.grid.len();
        if g.len() != len || out.len() != len {
            return Err(GhError::KernelMismatch(format!(
                "expected {len} samples, got input {} / output {}",
                g.len(),
                out.len()
            )));
        }
        let (mut edge, mut total) = (0.0, 0.0);
        for (v, &on_edge) in g.iter().zip(&self.boundary) {
            total += v.abs();
            if on_edge {
                edge += v.abs();
            }
        }
        if edge > BOUNDARY_WARN * total {
            log::warn!(
                "{:.2e} of the convolved density lies in the boundary layer; enlarge the box",
                edge / total
            );
        }

        self.fft.forward(g, scratch);
        for (c, k) in scratch.iter_mut().zip(&self.spectrum) {
            *c *= *k;
        }
        self.fft.inverse(scratch, out);
        Ok(())
    }

}

fn kernel_weight(offset: &[i64], h: f64, b: f64, w_origin: f64, w_neighbour: f64) -> f64 {
    let r2: i64 = offset.iter().map(|d| d * d).sum();
    match r2 {
        0 => w_origin,
        1 => w_neighbour,
        _ => h.powi(offset.len() as i32) * (h * h * r2 as f64).powf(-b / 2.0),
    }
}

/// `N(u) = (|x|^{-b} * |u|^p) |u|^{p-2} u` on a fixed grid.
pub struct Nonlinearity {
    pub params: EquationParams,
    kernel: RieszKernel,
    scratch: Mutex<Vec<C64>>,
}

impl Clone for Nonlinearity {
    fn clone(&self) -> Self {
        Nonlinearity {
            params: self.params,
            kernel: self.kernel.clone(),
            scratch: Mutex::new(Vec::new()),
        }
    }
}

impl std::fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Nonlinearity")
            .field("params", &self.params)
            .field("grid", &self.kernel.grid)
            .finish()
    }
}

impl Nonlinearity {
    pub fn new(params: EquationParams, grid: &Grid) -> Result<Self> {
        params.validate()?;
        if params.dim != grid.dim {
            return Err(GhError::KernelMismatch(format!(
                "equation in {} dimensions, grid in {}",
                params.dim, grid.dim
            )));
        }
        Ok(Nonlinearity {
            params,
            kernel: RieszKernel::new(grid, params.b)?,
            scratch: Mutex::new(Vec::new()),
        })
    }

    pub fn kernel(&self) -> &RieszKernel {
        &self.kernel
    }

    pub fn grid(&self) -> &Grid {
        &self.kernel.grid
    }

    fn check(&self, u: &ComplexField) -> Result<()> {
        if u.grid != self.kernel.grid {
            return Err(GhError::KernelMismatch(format!(
                "nonlinearity built for {:?}, field on {:?}",
                self.kernel.grid, u.grid
            )));
        }
        u.check_finite()
    }

    /// `|u|^p` at every point.
    pub fn density_power(&self, u: &[C64]) -> Vec<f64> {
        let p = self.params.p;
        match integer_power(p) {
            Some(2) => u.iter().map(|v| v.norm_sqr()).collect(),
            Some(k) => u.iter().map(|v| v.norm().powi(k)).collect(),
            None => u.iter().map(|v| v.norm().powf(p)).collect(),
        }
    }

    /// `|u|^{p-2}` at every point.
    fn modulus_factor(&self, u: &[C64]) -> Vec<f64> {
        let q = self.params.p - 2.0;
        match integer_power(q) {
            Some(0) => vec![1.0; u.len()],
            Some(k) => u.iter().map(|v| v.norm().powi(k)).collect(),
            None => u.iter().map(|v| v.norm().powf(q)).collect(),
        }
    }

    /// The real potential `|x|^{-b} * |u|^p`.
    pub fn potential(&self, u: &ComplexField) -> Result<RealField> {
        self.check(u)?;
        let (values, _) = self.potential_and_density(&u.values)?;
        Ok(RealField {
            grid: u.grid,
            values,
        })
    }

    /// The potential together with `|u|^p`.
    pub fn potential_and_density(&self, u: &[C64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let g = self.density_power(u);
        let mut v = vec![0.0; g.len()];
        let mut scratch = self.scratch.lock().unwrap_or_else(|e| e.into_inner());
        self.kernel.convolve_into(&g, &mut v, &mut scratch)?;
        Ok((v, g))
    }

    /// `V_eff = (|x|^{-b} * |u|^p) |u|^{p-2}`, the real multiplier with
    /// `N(u) = V_eff u`.
    pub fn effective_potential(&self, u: &[C64]) -> Result<Vec<f64>> {
        let (mut v, _) = self.potential_and_density(u)?;
        for (a, m) in v.iter_mut().zip(self.modulus_factor(u)) {
            *a *= m;
        }
        Ok(v)
    }

    /// `N(u)` pointwise.
    pub fn term(&self, u: &ComplexField) -> Result<ComplexField> {
        self.check(u)?;
        let veff = self.effective_potential(&u.values)?;
        Ok(ComplexField {
            grid: u.grid,
            values: u.values.iter().zip(&veff).map(|(v, w)| v * *w).collect(),
        })
    }
}

fn integer_power(x: f64) -> Option<i32> {
    (x == x.round() && x.abs() < 64.0).then_some(x as i32)
}
