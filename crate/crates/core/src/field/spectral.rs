//! Fourier transforms on a [`Grid`] and the spectral operators built on them.
//!
//! The continuum convention is the symmetric one,
//! `f̂(ξ) = (2π)^{-N/2} ∫ f(x) e^{-ix·ξ} dx`, discretized as
//! `f̂(ξ_k) = (2π)^{-N/2} h^N Σ_j f(x_j) e^{-iξ_k·x_j}` with `x_j = -L + jh`.
//! With that weighting `Σ_k |f̂_k|² Δξ^N = h^N Σ_j |f_j|²`.

use num_complex::Complex64 as C64;

use super::fft::FftNd;
use super::{ComplexField, Grid};
use crate::error::Result;
use crate::numerics::pairwise_sum;

/// Spectral coefficients in FFT bin order, continuum-normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: Grid,
    pub coeffs: Vec<C64>,
}

/// FFT plan plus per-point wavenumber tables for one grid.
#[derive(Debug, Clone)]
pub struct Spectral {
    grid: Grid,
    fft: FftNd,
    /// `|ξ|²` per bin, Nyquist included.
    xi_sq: Vec<f64>,
    /// Per-axis wavenumbers with the Nyquist bin zeroed (odd derivatives).
    xi_axis: Vec<f64>,
}

impl Spectral {
    pub fn new(grid: &Grid) -> Self {
        let n = grid.n;
        let xi_full: Vec<f64> = (0..n).map(|k| grid.wavenumber(k)).collect();
        let xi_axis: Vec<f64> = (0..n)
            .map(|k| if k == n / 2 { 0.0 } else { xi_full[k] })
            .collect();
        let sq: Vec<f64> = xi_full.iter().map(|x| x * x).collect();
        let mut xi_sq = vec![0.0; grid.len()];
        let mut idx = vec![0usize; grid.dim];
        for v in xi_sq.iter_mut() {
            *v = idx.iter().map(|&k| sq[k]).sum();
            for axis in (0..grid.dim).rev() {
                idx[axis] += 1;
                if idx[axis] < n {
                    break;
                }
                idx[axis] = 0;
            }
        }
        Spectral {
            grid: *grid,
            fft: FftNd::new(grid.dim, n),
            xi_sq,
            xi_axis,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `|ξ_k|²` per bin.
    pub fn xi_sq(&self) -> &[f64] {
        &self.xi_sq
    }

    /// Raw unnormalized DFT in place.
    pub fn dft(&self, data: &mut [C64]) {
        self.fft.forward(data);
    }

    /// Inverse of [`Spectral::dft`], including the `1/n^N` factor.
    pub fn idft(&self, data: &mut [C64]) {
        self.fft.inverse(data);
        let scale = 1.0 / self.grid.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    /// Phase `(-1)^{k_1+...+k_N}` from the box offset `-L`, times the
    /// `h^N (2π)^{-N/2}` weight.
    fn continuum_factor(&self, lin: usize) -> f64 {
        let g = &self.grid;
        let w = g.cell_volume() / (2.0 * std::f64::consts::PI).powf(g.dim as f64 / 2.0);
        let mut parity = 0;
        let mut rest = lin;
        for _ in 0..g.dim {
            let k = rest % g.n;
            rest /= g.n;
            // signed bin index has the same parity as k when n is even
            parity += k;
        }
        if parity % 2 == 0 {
            w
        } else {
            -w
        }
    }

    pub fn transform_forward(&self, f: &ComplexField) -> Result<SpectralField> {
        f.check_finite()?;
        let mut coeffs = f.values.clone();
        self.fft.forward(&mut coeffs);
        for (lin, c) in coeffs.iter_mut().enumerate() {
            *c *= self.continuum_factor(lin);
        }
        Ok(SpectralField {
            grid: self.grid,
            coeffs,
        })
    }

    pub fn transform_inverse(&self, s: &SpectralField) -> Result<ComplexField> {
        let mut values = s.coeffs.clone();
        for (lin, c) in values.iter_mut().enumerate() {
            *c /= self.continuum_factor(lin);
        }
        self.idft(&mut values);
        let out = ComplexField {
            grid: self.grid,
            values,
        };
        out.check_finite()?;
        Ok(out)
    }

    /// `∂u/∂x_axis` for every axis, by multiplication with `iξ`.
    pub fn gradient(&self, u: &ComplexField) -> Result<Vec<ComplexField>> {
        u.check_finite()?;
        let mut hat = u.values.clone();
        self.fft.forward(&mut hat);
        Ok((0..self.grid.dim)
            .map(|axis| {
                let mut d = hat.clone();
                self.multiply_axis(&mut d, axis);
                self.idft(&mut d);
                ComplexField {
                    grid: self.grid,
                    values: d,
                }
            })
            .collect())
    }

    /// Multiplies spectral data by `iξ_axis`.
    fn multiply_axis(&self, data: &mut [C64], axis: usize) {
        let n = self.grid.n;
        let stride = n.pow((self.grid.dim - 1 - axis) as u32);
        for (lin, v) in data.iter_mut().enumerate() {
            let k = (lin / stride) % n;
            *v *= C64::new(0.0, self.xi_axis[k]);
        }
    }

    /// `∫|∇u|²` by Parseval from the DFT of `u`.
    pub fn grad_norm_sq_from_hat(&self, hat: &[C64]) -> f64 {
        let weight = self.grid.cell_volume() / self.grid.len() as f64;
        weight
            * pairwise_sum(
                &hat.iter()
                    .zip(&self.xi_sq)
                    .map(|(c, x)| c.norm_sqr() * x)
                    .collect::<Vec<_>>(),
            )
    }

    /// `Im ∫ ū ∇u` by Parseval from the DFT of `u`.
    pub fn momentum_from_hat(&self, hat: &[C64]) -> Vec<f64> {
        let n = self.grid.n;
        let weight = self.grid.cell_volume() / self.grid.len() as f64;
        (0..self.grid.dim)
            .map(|axis| {
                let stride = n.pow((self.grid.dim - 1 - axis) as u32);
                let terms: Vec<f64> = hat
                    .iter()
                    .enumerate()
                    .map(|(lin, c)| c.norm_sqr() * self.xi_axis[(lin / stride) % n])
                    .collect();
                weight * pairwise_sum(&terms)
            })
            .collect()
    }

    /// Applies the exact free propagator `e^{-i|ξ|²dt}` in place.
    pub fn propagate(&self, data: &mut [C64], dt: f64) {
        if dt == 0.0 {
            return;
        }
        self.fft.forward(data);
        let scale = 1.0 / self.grid.len() as f64;
        for (v, x2) in data.iter_mut().zip(&self.xi_sq) {
            *v *= C64::from_polar(scale, -x2 * dt);
        }
        self.fft.inverse(data);
    }

    /// [`Spectral::propagate`] that also returns `∫|∇u|²`, which the free
    /// flow leaves unchanged.
    pub fn propagate_with_grad(&self, data: &mut [C64], dt: f64) -> f64 {
        self.fft.forward(data);
        let grad = self.grad_norm_sq_from_hat(data);
        let scale = 1.0 / self.grid.len() as f64;
        for (v, x2) in data.iter_mut().zip(&self.xi_sq) {
            *v *= C64::from_polar(scale, -x2 * dt);
        }
        self.fft.inverse(data);
        grad
    }

    /// Solves `(1 - Δ) w = f` in place.
    pub fn invert_helmholtz(&self, data: &mut [C64]) {
        self.fft.forward(data);
        let scale = 1.0 / self.grid.len() as f64;
        for (v, x2) in data.iter_mut().zip(&self.xi_sq) {
            *v *= scale / (1.0 + x2);
        }
        self.fft.inverse(data);
    }

    /// `-Δu` in place.
    pub fn neg_laplacian(&self, data: &mut [C64]) {
        self.fft.forward(data);
        let scale = 1.0 / self.grid.len() as f64;
        for (v, x2) in data.iter_mut().zip(&self.xi_sq) {
            *v *= scale * x2;
        }
        self.fft.inverse(data);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    /// Random field with only low modes excited.
    fn band_limited(grid: &Grid, seed: u64) -> ComplexField {
        let spec = Spectral::new(grid);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cutoff = grid.wavenumber(grid.n / 8).powi(2);
        let mut hat: Vec<C64> = spec
            .xi_sq()
            .iter()
            .map(|&x2| {
                if x2 <= cutoff {
                    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                } else {
                    C64::default()
                }
            })
            .collect();
        spec.idft(&mut hat);
        ComplexField {
            grid: *grid,
            values: hat,
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let g = Grid::new(2, 16, 3.0).unwrap();
        let s = Spectral::new(&g);
        let hat = s.transform_forward(&ComplexField::zeros(&g)).unwrap();
        assert!(hat.coeffs.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn gaussian_is_self_dual() {
        let g = Grid::new(1, 256, 20.0).unwrap();
        let s = Spectral::new(&g);
        let f = g.sample(|x| C64::new((-x[0] * x[0] / 2.0).exp(), 0.0));
        let hat = s.transform_forward(&f).unwrap();
        for (k, c) in hat.coeffs.iter().enumerate() {
            let xi = g.wavenumber(k);
            assert!((c - C64::new((-xi * xi / 2.0).exp(), 0.0)).norm() < 1e-8, "bin {k}");
        }
    }

    #[test]
    fn parseval_and_roundtrip() {
        let g = Grid::new(3, 16, 4.0).unwrap();
        let s = Spectral::new(&g);
        let f = band_limited(&g, 3);
        let hat = s.transform_forward(&f).unwrap();
        let dxi = 2.0 * PI / (2.0 * g.half_extent);
        let lhs: f64 = hat.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * dxi.powi(3);
        let rhs: f64 = f.values.iter().map(|c| c.norm_sqr()).sum::<f64>() * g.cell_volume();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        let back = s.transform_inverse(&hat).unwrap();
        assert!(back.rel_l2_distance(&f) < 1e-12);
    }

    #[test]
    fn constant_has_no_gradient() {
        let g = Grid::new(2, 16, 2.0).unwrap();
        let s = Spectral::new(&g);
        let u = g.sample(|_| C64::new(2.5, -1.0));
        for d in s.gradient(&u).unwrap() {
            assert!(d.values.iter().all(|v| v.norm() < 1e-13));
        }
    }

    #[test]
    fn plane_wave_is_an_eigenfunction() {
        let g = Grid::new(2, 32, PI).unwrap();
        let s = Spectral::new(&g);
        // wavenumber 3 fits the periodic box of length 2π exactly
        let u = g.sample(|x| C64::from_polar(1.0, 3.0 * x[1]));
        let grad = s.gradient(&u).unwrap();
        for (lin, v) in u.values.iter().enumerate() {
            assert!(grad[0].values[lin].norm() < 1e-12);
            assert!((grad[1].values[lin] - C64::new(0.0, 3.0) * v).norm() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_differences_at_second_order() {
        // smooth periodic function; centered differences converge at O(h²)
        let errs: Vec<f64> = [32usize, 64, 128]
            .iter()
            .map(|&n| {
                let g = Grid::new(1, n, PI).unwrap();
                let s = Spectral::new(&g);
                let u = g.sample(|x| C64::new((x[0].sin()).exp(), (2.0 * x[0]).cos()));
                let d = &s.gradient(&u).unwrap()[0];
                let h = g.spacing();
                (0..n)
                    .map(|j| {
                        let fd = (u.values[(j + 1) % n] - u.values[(j + n - 1) % n]) / (2.0 * h);
                        (fd - d.values[j]).norm()
                    })
                    .fold(0.0, f64::max)
            })
            .collect();
        let order1 = (errs[0] / errs[1]).log2();
        let order2 = (errs[1] / errs[2]).log2();
        assert!((order1 - 2.0).abs() < 0.1 && (order2 - 2.0).abs() < 0.1, "{errs:?}");
    }

    #[test]
    fn parseval_gradient_matches_explicit_gradient() {
        let g = Grid::new(2, 32, 5.0).unwrap();
        let s = Spectral::new(&g);
        let u = band_limited(&g, 11);
        let mut hat = u.values.clone();
        s.dft(&mut hat);
        let via_parseval = s.grad_norm_sq_from_hat(&hat);
        let explicit: f64 = s
            .gradient(&u)
            .unwrap()
            .iter()
            .map(|d| d.values.iter().map(|v| v.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            * g.cell_volume();
        // band-limited data has no Nyquist content, so both agree
        assert!((via_parseval - explicit).abs() < 1e-10 * explicit);
    }

    #[test]
    fn helmholtz_inverse_undoes_operator() {
        let g = Grid::new(2, 32, 6.0).unwrap();
        let s = Spectral::new(&g);
        let u = band_limited(&g, 5);
        let mut w = u.values.clone();
        s.neg_laplacian(&mut w);
        for (a, b) in w.iter_mut().zip(&u.values) {
            *a += b;
        }
        s.invert_helmholtz(&mut w);
        let back = ComplexField { grid: g, values: w };
        assert!(back.rel_l2_distance(&u) < 1e-12);
    }
}
