//! `|x|^{-b} * e^{-|x|²}` on the grid against a one-dimensional radial
//! quadrature of the same potential.
//!
//! `cargo run --release --example riesz_convolution [n L b]`
use ghartree::groundstate::radial::radial_riesz_potential;
use ghartree::{Grid, RealField, RieszKernel};

fn main() -> ghartree::Result<()> {
    let a: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let (n, l, b) = if a.len() == 3 { (a[0] as usize, a[1], a[2]) } else { (64, 10.0, 1.0) };
    let grid = Grid::new(3, n, l)?;
    let g = |r: f64| (-r * r).exp();
    let mut values = vec![0.0; grid.len()];
    grid.for_each_point(|i, x| values[i] = g(x.iter().map(|v| v * v).sum::<f64>().sqrt()));
    let kernel = RieszKernel::new(&grid, b)?;
    let conv = kernel.convolve(&RealField { grid, values })?;
    let c = grid.center_index();
    println!("{:>8} {:>14} {:>14} {:>10}", "r", "grid", "radial", "rel err");
    for j in (c + 1..n).step_by((n / 16).max(1)) {
        let r = grid.coord(j);
        let idx = grid.ravel(&[j, c, c]);
        let exact = radial_riesz_potential(&g, r, 3, b)?;
        let got = conv.values[idx];
        println!("{r:>8.4} {got:>14.8} {exact:>14.8} {:>10.2e}", (got - exact).abs() / exact);
    }
    Ok(())
}
