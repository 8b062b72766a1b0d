//! Uniform box grids, sampled fields, spectral transforms and the free-space
//! Riesz convolution behind the nonlocal nonlinearity.

mod fft;
pub mod lattice;
pub mod riesz;
pub mod spectral;

use std::io::{Read, Write};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{GhError, Result};

pub use riesz::{Nonlinearity, RieszKernel};
pub use spectral::{Spectral, SpectralField};

/// Largest supported number of grid points, `n^N <= 2^28`.
pub const MAX_POINTS: usize = 1 << 28;

/// Fraction of the total held in the boundary layer above which a warning
/// is logged.
pub const BOUNDARY_WARN: f64 = 1e-6;

/// A cube `[-L, L)^N` sampled at `n` points per axis, spacing `h = 2L/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub dim: usize,
    pub n: usize,
    pub half_extent: f64,
}

impl Grid {
    pub fn new(dim: usize, n: usize, half_extent: f64) -> Result<Grid> {
        if !(1..=4).contains(&dim) {
            return Err(GhError::InvalidGrid(format!("dimension {dim} not in 1..=4")));
        }
        if n < 8 || n % 2 != 0 {
            return Err(GhError::InvalidGrid(format!(
                "points per axis must be even and >= 8, got {n}"
            )));
        }
        if !(half_extent.is_finite() && half_extent > 0.0) {
            return Err(GhError::InvalidGrid(format!("half extent {half_extent}")));
        }
        match n.checked_pow(dim as u32) {
            Some(total) if total <= MAX_POINTS => {}
            _ => {
                return Err(GhError::InvalidGrid(format!(
                    "{n}^{dim} points exceeds the 2^28 limit"
                )))
            }
        }
        Ok(Grid { dim, n, half_extent })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.n as f64
    }

    /// Total number of samples `n^N`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `h^N`
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Coordinate of index `j` along any axis.
    pub fn coord(&self, j: usize) -> f64 {
        -self.half_extent + j as f64 * self.spacing()
    }

    /// Angular wavenumber of FFT bin `k` along any axis.
    pub fn wavenumber(&self, k: usize) -> f64 {
        let n = self.n as i64;
        let signed = if (k as i64) < n / 2 { k as i64 } else { k as i64 - n };
        2.0 * std::f64::consts::PI * signed as f64 / (2.0 * self.half_extent)
    }

    /// Index of the grid point at the origin along each axis.
    pub fn center_index(&self) -> usize {
        self.n / 2
    }

    /// Calls `f(linear_index, x)` for every grid point in row-major order.
    pub fn for_each_point(&self, mut f: impl FnMut(usize, &[f64])) {
        let coords: Vec<f64> = (0..self.n).map(|j| self.coord(j)).collect();
        let mut idx = vec![0usize; self.dim];
        let mut x: Vec<f64> = vec![coords[0]; self.dim];
        for lin in 0..self.len() {
            f(lin, &x);
            for axis in (0..self.dim).rev() {
                idx[axis] += 1;
                if idx[axis] < self.n {
                    x[axis] = coords[idx[axis]];
                    break;
                }
                idx[axis] = 0;
                x[axis] = coords[0];
            }
        }
    }

    /// Multi-index of a linear index.
    pub fn unravel(&self, mut lin: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for axis in (0..self.dim).rev() {
            idx[axis] = lin % self.n;
            lin /= self.n;
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &j| acc * self.n + j)
    }

    /// Samples `f` at every grid point.
    pub fn sample(&self, mut f: impl FnMut(&[f64]) -> C64) -> ComplexField {
        let mut values = vec![C64::default(); self.len()];
        self.for_each_point(|i, x| values[i] = f(x));
        ComplexField { grid: *self, values }
    }

    /// Marks the outermost `max(1, n/16)` cells along every axis.
    pub fn boundary_mask(&self) -> Vec<bool> {
        let width = (self.n / 16).max(1);
        let mut mask = vec![false; self.len()];
        let mut idx = vec![0usize; self.dim];
        for m in mask.iter_mut() {
            *m = idx.iter().any(|&j| j < width || j >= self.n - width);
            for axis in (0..self.dim).rev() {
                idx[axis] += 1;
                if idx[axis] < self.n {
                    break;
                }
                idx[axis] = 0;
            }
        }
        mask
    }

    /// Fraction of `sum(weights)` carried by the boundary layer.
    pub fn boundary_fraction(&self, weights: impl Iterator<Item = f64>) -> f64 {
        let mask = self.boundary_mask();
        let (mut edge, mut total) = (0.0, 0.0);
        for (w, on_edge) in weights.zip(mask) {
            total += w;
            if on_edge {
                edge += w;
            }
        }
        if total > 0.0 {
            edge / total
        } else {
            0.0
        }
    }
}

/// A complex field sampled on a [`Grid`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub grid: Grid,
    pub values: Vec<C64>,
}

/// A real field sampled on a [`Grid`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl ComplexField {
    pub fn zeros(grid: &Grid) -> Self {
        ComplexField {
            grid: *grid,
            values: vec![C64::default(); grid.len()],
        }
    }

    pub fn from_values(grid: &Grid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(GhError::InvalidGrid(format!(
                "{} samples for a grid of {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(ComplexField { grid: *grid, values })
    }

    /// Fails with `PoisonedField` on the first NaN or infinite sample.
    pub fn check_finite(&self) -> Result<()> {
        match self
            .values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            Some(index) => Err(GhError::PoisonedField { index }),
            None => Ok(()),
        }
    }

    /// `|u|^2` at every point.
    pub fn density(&self) -> RealField {
        RealField {
            grid: self.grid,
            values: self.values.iter().map(|v| v.norm_sqr()).collect(),
        }
    }

    pub fn scale(&mut self, factor: C64) {
        for v in &mut self.values {
            *v *= factor;
        }
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let mut out = self.clone();
        out.scale(factor);
        out
    }

    /// Relative l2 distance `|a - b| / |b|`.
    pub fn rel_l2_distance(&self, other: &ComplexField) -> f64 {
        let num: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = other.values.iter().map(|b| b.norm_sqr()).sum();
        (num / den.max(f64::MIN_POSITIVE)).sqrt()
    }

    /// Fraction of the mass in the boundary layer.
    pub fn boundary_mass_fraction(&self) -> f64 {
        self.grid
            .boundary_fraction(self.values.iter().map(|v| v.norm_sqr()))
    }

    pub fn write_checkpoint<W: Write>(&self, w: W) -> Result<()> {
        write_checkpoint(w, self)
    }

    pub fn read_checkpoint<R: Read>(r: R) -> Result<Self> {
        read_checkpoint(r)
    }
}

impl RealField {
    pub fn zeros(grid: &Grid) -> Self {
        RealField {
            grid: *grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.values.iter().position(|v| !v.is_finite()) {
            Some(index) => Err(GhError::PoisonedField { index }),
            None => Ok(()),
        }
    }

    pub fn to_complex(&self) -> ComplexField {
        ComplexField {
            grid: self.grid,
            values: self.values.iter().map(|&v| C64::new(v, 0.0)).collect(),
        }
    }
}

/// Magic bytes opening every field checkpoint.
pub const CHECKPOINT_MAGIC: &[u8; 4] = b"GHFD";
pub const CHECKPOINT_VERSION: u32 = 1;

/// Writes the binary checkpoint: magic, version, N, n (u32 LE), L (f64 LE),
/// then `n^N` samples as little-endian `(re, im)` f64 pairs, row-major.
pub fn write_checkpoint<W: Write>(mut w: W, field: &ComplexField) -> Result<()> {
    let g = &field.grid;
    let mut header = Vec::with_capacity(24);
    header.extend_from_slice(CHECKPOINT_MAGIC);
    header.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    header.extend_from_slice(&(g.dim as u32).to_le_bytes());
    header.extend_from_slice(&(g.n as u32).to_le_bytes());
    header.extend_from_slice(&g.half_extent.to_le_bytes());
    w.write_all(&header)?;
    let mut body = Vec::with_capacity(16 * field.values.len());
    for v in &field.values {
        body.extend_from_slice(&v.re.to_le_bytes());
        body.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&body)?;
    w.flush()?;
    Ok(())
}

pub fn read_checkpoint<R: Read>(mut r: R) -> Result<ComplexField> {
    let mut header = [0u8; 24];
    r.read_exact(&mut header)
        .map_err(|e| GhError::Format(format!("truncated header: {e}")))?;
    if &header[0..4] != CHECKPOINT_MAGIC {
        return Err(GhError::Format("bad magic, expected GHFD".into()));
    }
    let u32_at = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().unwrap());
    let version = u32_at(4);
    if version != CHECKPOINT_VERSION {
        return Err(GhError::Format(format!("unsupported version {version}")));
    }
    let dim = u32_at(8) as usize;
    let n = u32_at(12) as usize;
    let half_extent = f64::from_le_bytes(header[16..24].try_into().unwrap());
    let grid = Grid::new(dim, n, half_extent)?;
    let mut body = vec![0u8; 16 * grid.len()];
    r.read_exact(&mut body)
        .map_err(|e| GhError::Format(format!("truncated samples: {e}")))?;
    let values = body
        .chunks_exact(16)
        .map(|c| {
            C64::new(
                f64::from_le_bytes(c[0..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..16].try_into().unwrap()),
            )
        })
        .collect();
    Ok(ComplexField { grid, values })
}
