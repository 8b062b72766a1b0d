//! Batched N-dimensional FFTs over flat row-major cubes.
//!
//! [`RealPaddedFft`] serves the zero-padded convolution: real data on
//! `[0, active)^N` inside a cube of side `2 active`, a half spectrum along
//! the last axis, and passes that skip lines which are identically zero
//! (forward) or never read (inverse).

use std::sync::Arc;

use num_complex::Complex64 as C64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::{Fft, FftPlanner};

/// Lines gathered per batch for strided axes.
const BATCH: usize = 16;

#[derive(Clone)]
pub(crate) struct FftNd {
    dim: usize,
    len: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FftNd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftNd")
            .field("dim", &self.dim)
            .field("len", &self.len)
            .finish()
    }
}

impl FftNd {
    pub fn new(dim: usize, len: usize) -> Self {
        let mut planner = FftPlanner::new();
        FftNd {
            dim,
            len,
            fwd: planner.plan_fft_forward(len),
            inv: planner.plan_fft_inverse(len),
        }
    }

    pub fn total(&self) -> usize {
        self.len.pow(self.dim as u32)
    }

    /// Unnormalized forward DFT along every axis.
    pub fn forward(&self, data: &mut [C64]) {
        for axis in (0..self.dim).rev() {
            self.axis(data, axis, &self.fwd);
        }
    }

    /// Unnormalized inverse DFT along every axis (no `1/len^N` factor).
    pub fn inverse(&self, data: &mut [C64]) {
        for axis in 0..self.dim {
            self.axis(data, axis, &self.inv);
        }
    }

    fn axis(&self, data: &mut [C64], axis: usize, fft: &Arc<dyn Fft<f64>>) {
        debug_assert_eq!(data.len(), self.total());
        let len = self.len;
        let stride = len.pow((self.dim - 1 - axis) as u32);
        let mut scratch = vec![C64::default(); fft.get_inplace_scratch_len()];
        if stride == 1 {
            // contiguous lines, processed in one call
            fft.process_with_scratch(data, &mut scratch);
            return;
        }
        let mut buf = vec![C64::default(); BATCH * len];
        for outer in 0..len.pow(axis as u32) {
            strided_lines(fft.as_ref(), data, outer * len * stride, len, stride, &mut buf, &mut scratch);
        }
    }
}

/// Maps a counter over `[0, active)^digits` to the linear index over
/// `[0, len)^digits`.
fn outer_offset(mut counter: usize, digits: usize, active: usize, len: usize) -> usize {
    if active == len {
        return counter;
    }
    let mut offset = 0;
    let mut place = 1;
    for _ in 0..digits {
        offset += (counter % active) * place;
        counter /= active;
        place *= len;
    }
    offset
}

/// Gathers the lines `base + j*stride + i` (`j < len`) for `i` in
/// `[0, stride)` in batches, transforms them and scatters them back.
fn strided_lines(
    fft: &dyn Fft<f64>,
    data: &mut [C64],
    base: usize,
    len: usize,
    stride: usize,
    buf: &mut [C64],
    scratch: &mut [C64],
) {
    let mut i0 = 0;
    while i0 < stride {
        let cc = BATCH.min(stride - i0);
        for j in 0..len {
            let src = &data[base + j * stride + i0..base + j * stride + i0 + cc];
            for (ii, v) in src.iter().enumerate() {
                buf[ii * len + j] = *v;
            }
        }
        fft.process_with_scratch(&mut buf[..cc * len], scratch);
        for j in 0..len {
            let dst = &mut data[base + j * stride + i0..base + j * stride + i0 + cc];
            for (ii, v) in dst.iter_mut().enumerate() {
                *v = buf[ii * len + j];
            }
        }
        i0 += cc;
    }
}

/// Transform of a real cube `[0, active)^N` zero-padded to `[0, len)^N`.
///
/// The last axis is a real-to-complex transform stored as `len/2 + 1`
/// bins, so spectra have shape `len^{N-1} × (len/2 + 1)`.
#[derive(Clone)]
pub(crate) struct RealPaddedFft {
    dim: usize,
    len: usize,
    active: usize,
    half: usize,
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for RealPaddedFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RealPaddedFft")
            .field("dim", &self.dim)
            .field("len", &self.len)
            .field("active", &self.active)
            .finish()
    }
}

impl RealPaddedFft {
    pub fn new(dim: usize, active: usize) -> Self {
        let len = 2 * active;
        let mut real = RealFftPlanner::<f64>::new();
        let mut planner = FftPlanner::new();
        RealPaddedFft {
            dim,
            len,
            active,
            half: len / 2 + 1,
            r2c: real.plan_fft_forward(len),
            c2r: real.plan_fft_inverse(len),
            fwd: planner.plan_fft_forward(len),
            inv: planner.plan_fft_inverse(len),
        }
    }

    /// Number of complex bins in a spectrum.
    pub fn spectrum_len(&self) -> usize {
        self.len.pow(self.dim as u32 - 1) * self.half
    }

    #[cfg(test)]
    /// Index of the padded-grid bin `k` (each `k_i < len`, last `<= len/2`).
    pub fn bin_index(&self, k: &[usize]) -> usize {
        let mut idx = 0;
        for &ki in &k[..self.dim - 1] {
            idx = idx * self.len + ki;
        }
        idx * self.half + k[self.dim - 1]
    }

    /// Unnormalized forward transform of the row-major `active^N` cube
    /// `input` into `out` (resized to [`RealPaddedFft::spectrum_len`]).
    pub fn forward(&self, input: &[f64], out: &mut Vec<C64>) {
        self.forward_rows(input, self.active, out);
    }

    /// Forward transform of a full `len^N` real cube.
    pub fn forward_full(&self, input: &[f64], out: &mut Vec<C64>) {
        self.forward_rows(input, self.len, out);
    }

    fn forward_rows(&self, input: &[f64], active: usize, out: &mut Vec<C64>) {
        out.clear();
        out.resize(self.spectrum_len(), C64::default());
        let mut line = vec![0.0; self.len];
        let mut scratch = self.r2c.make_scratch_vec();
        for (row, chunk) in input.chunks_exact(active).enumerate() {
            line[..active].copy_from_slice(chunk);
            line[active..].fill(0.0);
            let base = outer_offset(row, self.dim - 1, active, self.len) * self.half;
            self.r2c
                .process_with_scratch(&mut line, &mut out[base..base + self.half], &mut scratch)
                .expect("buffer lengths match the plan");
        }
        for axis in (0..self.dim - 1).rev() {
            self.complex_axis(out, axis, active, &self.fwd);
        }
    }

    /// Unnormalized inverse of [`RealPaddedFft::forward`], keeping only the
    /// `active^N` block; `data` is destroyed.
    pub fn inverse(&self, data: &mut [C64], output: &mut [f64]) {
        let n = self.active;
        for axis in 0..self.dim - 1 {
            self.complex_axis(data, axis, self.active, &self.inv);
        }
        let mut line = vec![0.0; self.len];
        let mut scratch = self.c2r.make_scratch_vec();
        for (row, chunk) in output.chunks_exact_mut(n).enumerate() {
            let base = outer_offset(row, self.dim - 1, n, self.len) * self.half;
            let bins = &mut data[base..base + self.half];
            // round-off only: the result is real
            bins[0].im = 0.0;
            bins[self.half - 1].im = 0.0;
            self.c2r
                .process_with_scratch(bins, &mut line, &mut scratch)
                .expect("buffer lengths match the plan");
            chunk.copy_from_slice(&line[..n]);
        }
    }

    /// Complex transform along `axis < N-1` of the lines whose indices on
    /// earlier axes are below `active`.
    fn complex_axis(&self, data: &mut [C64], axis: usize, active: usize, fft: &Arc<dyn Fft<f64>>) {
        let len = self.len;
        let stride = len.pow((self.dim - 2 - axis) as u32) * self.half;
        let mut scratch = vec![C64::default(); fft.get_inplace_scratch_len()];
        let mut buf = vec![C64::default(); BATCH * len];
        for outer in 0..active.pow(axis as u32) {
            let base = outer_offset(outer, axis, active, len) * len * stride;
            strided_lines(fft.as_ref(), data, base, len, stride, &mut buf, &mut scratch);
        }
    }
}
