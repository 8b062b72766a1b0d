//! Epstein zeta function of the integer lattice `Z^N`, analytically continued.
//!
//! `Z_N(s) = sum_{j != 0} |j|^{-s}` converges only for `s > N`; the continuation
//! comes from the theta-function splitting
//!
//! ```text
//! pi^{-s/2} Γ(s/2) Z_N(s) = 2/(s-N) - 2/s
//!     + sum_{j != 0} [ Γ(s/2, π|j|²) (π|j|²)^{-s/2}
//!                    + Γ((N-s)/2, π|j|²) (π|j|²)^{-(N-s)/2} ]
//! ```
//!
//! which converges like `exp(-π|j|²)`. These constants are the moments of
//! the error of the punctured lattice rule for `|x|^{-s}`-singular integrands.

use statrs::function::gamma::{gamma, gamma_ur};

/// Lattice shells summed in each direction; `exp(-π 5²)` is far below f64 resolution.
const SHELLS: i64 = 5;

/// Exponential integral `E_1(x) = Γ(0, x)` for `x > 0`.
fn exp_integral_e1(x: f64) -> f64 {
    if x < 1.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..60 {
            term *= -x / k as f64;
            sum -= term / k as f64;
        }
        -0.577_215_664_901_532_9 - x.ln() + sum
    } else {
        // modified Lentz on the continued fraction e^{-x}/(x+1-1/(x+3-4/(x+5-...)))
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..200 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

/// Upper incomplete gamma `Γ(a, x)` for `x > 0` and any real `a`.
fn upper_gamma(a: f64, x: f64) -> f64 {
    if a.abs() < 1e-14 {
        exp_integral_e1(x)
    } else if a > 0.0 {
        gamma_ur(a, x) * gamma(a)
    } else {
        // Γ(a, x) = (Γ(a+1, x) - x^a e^{-x}) / a
        (upper_gamma(a + 1.0, x) - x.powf(a) * (-x).exp()) / a
    }
}

/// `Z_N(s)` for real `s`; the value at `s = 0` is the limit `-1`.
pub fn epstein_zeta(dim: usize, s: f64) -> f64 {
    if s.abs() < 1e-10 {
        return -1.0;
    }
    let n = dim as f64;
    let mut acc = 2.0 / (s - n) - 2.0 / s;
    let mut idx = vec![-SHELLS; dim];
    loop {
        let r2: i64 = idx.iter().map(|j| j * j).sum();
        if r2 != 0 {
            let x = std::f64::consts::PI * r2 as f64;
            acc += upper_gamma(s / 2.0, x) * x.powf(-s / 2.0)
                + upper_gamma((n - s) / 2.0, x) * x.powf(-(n - s) / 2.0);
        }
        // odometer over [-SHELLS, SHELLS]^N
        let mut axis = 0;
        loop {
            if axis == dim {
                return acc * std::f64::consts::PI.powf(s / 2.0) / gamma(s / 2.0);
            }
            idx[axis] += 1;
            if idx[axis] <= SHELLS {
                break;
            }
            idx[axis] = -SHELLS;
            axis += 1;
        }
    }
}
