//! Conserved and monitored quantities: mass, energy, momentum, the
//! potential pairing `Z(u)`, the variance `V = ‖x u‖²` and its first two
//! time derivatives from the virial identities.
//!
//! Integrals are plain `h^N`-weighted sums with pairwise summation, so a
//! given field always produces bit-identical results.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::eqparams::{classify, EquationParams};
use crate::error::{GhError, Result};
use crate::field::{ComplexField, Grid, Nonlinearity, Spectral, BOUNDARY_WARN};
use crate::numerics::{pairwise_sum, pairwise_sum_by};

/// Every monitored quantity at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSet {
    pub time: f64,
    pub mass: f64,
    pub energy: f64,
    pub z_value: f64,
    pub momentum: Vec<f64>,
    pub grad_norm_sq: f64,
    pub variance: f64,
    pub variance_rate: f64,
}

impl ObservableSet {
    pub fn grad_norm(&self) -> f64 {
        self.grad_norm_sq.sqrt()
    }

    /// `V_tt` in both forms, `16E - (8k/p) Z` and `16(k+1)E - 8k‖∇u‖²`.
    pub fn virial_acceleration(&self, params: &EquationParams) -> Result<(f64, f64)> {
        let k = classify(params)?.k;
        Ok(virial_forms(self.energy, self.z_value, self.grad_norm_sq, k, params.p))
    }

    pub fn csv_header(dim: usize) -> String {
        let mut cols = vec![
            "t", "mass", "energy", "grad_norm_sq", "z", "variance", "variance_rate",
        ]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
        cols.extend((0..dim).map(|i| format!("momentum_{i}")));
        cols.join(",")
    }

    pub fn csv_row(&self) -> String {
        let mut cols = vec![
            self.time,
            self.mass,
            self.energy,
            self.grad_norm_sq,
            self.z_value,
            self.variance,
            self.variance_rate,
        ];
        cols.extend(&self.momentum);
        cols.iter()
            .map(|v| format!("{v:.17e}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn virial_forms(energy: f64, z: f64, grad_sq: f64, k: f64, p: f64) -> (f64, f64) {
    (
        16.0 * energy - 8.0 * k / p * z,
        16.0 * (k + 1.0) * energy - 8.0 * k * grad_sq,
    )
}

fn weighted_sum(grid: &Grid, f: impl Fn(usize) -> f64) -> f64 {
    grid.cell_volume() * pairwise_sum_by(grid.len(), &f)
}

/// `∫ |u|²`
pub fn mass(u: &ComplexField) -> Result<f64> {
    u.check_finite()?;
    Ok(weighted_sum(&u.grid, |i| u.values[i].norm_sqr()))
}

/// `∫ |x|² |u|²` in box-centred coordinates.
pub fn variance(u: &ComplexField) -> Result<f64> {
    u.check_finite()?;
    warn_boundary(u);
    let r2 = radius_sq(&u.grid);
    Ok(weighted_sum(&u.grid, |i| r2[i] * u.values[i].norm_sqr()))
}

fn radius_sq(grid: &Grid) -> Vec<f64> {
    let mut r2 = vec![0.0; grid.len()];
    grid.for_each_point(|i, x| r2[i] = x.iter().map(|v| v * v).sum());
    r2
}

fn warn_boundary(u: &ComplexField) {
    let frac = u.boundary_mass_fraction();
    if frac > BOUNDARY_WARN {
        log::warn!("{frac:.2e} of the mass lies in the boundary layer; enlarge the box");
    }
}

/// Evaluates observables on one grid, caching the transform plan and the
/// Riesz kernel.
#[derive(Debug, Clone)]
pub struct Observer {
    params: EquationParams,
    k: f64,
    spectral: Spectral,
    nonlinearity: Nonlinearity,
    /// Per-axis coordinates.
    coords: Vec<f64>,
}

impl Observer {
    pub fn new(params: EquationParams, grid: &Grid) -> Result<Self> {
        let k = classify(&params)?.k;
        Ok(Observer {
            params,
            k,
            spectral: Spectral::new(grid),
            nonlinearity: Nonlinearity::new(params, grid)?,
            coords: (0..grid.n).map(|j| grid.coord(j)).collect(),
        })
    }

    pub fn params(&self) -> &EquationParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid {
        self.spectral.grid()
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nonlinearity
    }

    fn check(&self, u: &ComplexField) -> Result<()> {
        if &u.grid != self.grid() {
            return Err(GhError::KernelMismatch(format!(
                "observer built for {:?}, field on {:?}",
                self.grid(),
                u.grid
            )));
        }
        u.check_finite()
    }

    /// `Z(u) = ∫ (|x|^{-b} * |u|^p) |u|^p`
    pub fn z_functional(&self, u: &ComplexField) -> Result<f64> {
        self.check(u)?;
        let (v, g) = self.nonlinearity.potential_and_density(&u.values)?;
        Ok(weighted_sum(self.grid(), |i| v[i] * g[i]))
    }

    /// `∫ |∇u|²`
    pub fn grad_norm_sq(&self, u: &ComplexField) -> Result<f64> {
        self.check(u)?;
        let mut hat = u.values.clone();
        self.spectral.dft(&mut hat);
        Ok(self.spectral.grad_norm_sq_from_hat(&hat))
    }

    /// `E = ½‖∇u‖² - Z/(2p)`
    pub fn energy(&self, u: &ComplexField) -> Result<f64> {
        let g = self.grad_norm_sq(u)?;
        let z = self.z_functional(u)?;
        Ok(0.5 * g - z / (2.0 * self.params.p))
    }

    /// `Im ∫ ū ∇u`
    pub fn momentum(&self, u: &ComplexField) -> Result<Vec<f64>> {
        self.check(u)?;
        let mut hat = u.values.clone();
        self.spectral.dft(&mut hat);
        Ok(self.spectral.momentum_from_hat(&hat))
    }

    /// `V_t = 4 Im ∫ ū x·∇u`
    pub fn variance_rate(&self, u: &ComplexField) -> Result<f64> {
        self.check(u)?;
        let grid = *self.grid();
        let n = grid.n;
        let grads = self.spectral.gradient(u)?;
        let mut total = 0.0;
        for (axis, d) in grads.iter().enumerate() {
            let stride = n.pow((grid.dim - 1 - axis) as u32);
            total += weighted_sum(&grid, |i| {
                let x = self.coords[(i / stride) % n];
                (u.values[i].conj() * d.values[i]).im * x
            });
        }
        Ok(4.0 * total)
    }

    /// Both forms of `V_tt`; they agree identically.
    pub fn virial_acceleration(&self, u: &ComplexField) -> Result<(f64, f64)> {
        let g = self.grad_norm_sq(u)?;
        let z = self.z_functional(u)?;
        let e = 0.5 * g - z / (2.0 * self.params.p);
        Ok(virial_forms(e, z, g, self.k, self.params.p))
    }

    /// Everything at once, sharing one forward transform.
    pub fn observe(&self, u: &ComplexField, time: f64) -> Result<ObservableSet> {
        self.check(u)?;
        let mut hat = u.values.clone();
        self.spectral.dft(&mut hat);
        let grad_norm_sq = self.spectral.grad_norm_sq_from_hat(&hat);
        let momentum = self.spectral.momentum_from_hat(&hat);
        drop(hat);
        let z_value = self.z_functional(u)?;
        Ok(ObservableSet {
            time,
            mass: mass(u)?,
            energy: 0.5 * grad_norm_sq - z_value / (2.0 * self.params.p),
            z_value,
            momentum,
            grad_norm_sq,
            variance: variance(u)?,
            variance_rate: self.variance_rate(u)?,
        })
    }
}

/// One-shot `Z(u)`; builds the kernel, so prefer [`Observer`] in loops.
pub fn z_functional(u: &ComplexField, params: &EquationParams) -> Result<f64> {
    Observer::new(*params, &u.grid)?.z_functional(u)
}

/// One-shot energy.
pub fn energy(u: &ComplexField, params: &EquationParams) -> Result<f64> {
    Observer::new(*params, &u.grid)?.energy(u)
}

/// One-shot momentum.
pub fn momentum(u: &ComplexField) -> Result<Vec<f64>> {
    u.check_finite()?;
    let spectral = Spectral::new(&u.grid);
    let mut hat = u.values.clone();
    spectral.dft(&mut hat);
    Ok(spectral.momentum_from_hat(&hat))
}

/// One-shot `V_t`.
pub fn variance_rate(u: &ComplexField) -> Result<f64> {
    u.check_finite()?;
    let grid = u.grid;
    let grads = Spectral::new(&grid).gradient(u)?;
    let n = grid.n;
    let mut total = 0.0;
    for (axis, d) in grads.iter().enumerate() {
        let stride = n.pow((grid.dim - 1 - axis) as u32);
        let terms: Vec<f64> = (0..grid.len())
            .map(|i| (u.values[i].conj() * d.values[i]).im * grid.coord((i / stride) % n))
            .collect();
        total += grid.cell_volume() * pairwise_sum(&terms);
    }
    Ok(4.0 * total)
}

/// One-shot virial acceleration.
pub fn virial_acceleration(u: &ComplexField, params: &EquationParams) -> Result<(f64, f64)> {
    Observer::new(*params, &u.grid)?.virial_acceleration(u)
}

/// `β e^{-γ|x|²/2}` sampled on `grid`, times an optional phase.
pub fn gaussian(grid: &Grid, beta: f64, gamma: f64, phase: impl Fn(&[f64]) -> f64) -> ComplexField {
    grid.sample(|x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        C64::from_polar(beta * (-0.5 * gamma * r2).exp(), phase(x))
    })
}
