//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Runs without the libtest harness so the lines always reach stdout.

use std::f64::consts::PI;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use ghartree::criteria::{
    blowup_criterion, f_radicand, gaussian_observables, mechanics_conditions, threshold_solve, CriterionInput,
    Denominators, EnergyModel, ThresholdKind,
};
use ghartree::evolve::{virial_consistency, EvolveConfig, Evolver, TerminalStatus, TrajectoryRecord};
use ghartree::field::lattice::epstein_zeta;
use ghartree::groundstate::radial::explicit_critical_q;
use ghartree::groundstate::{petviashvili_solve, GroundStateResult, DEFAULT_MAX_ITER, DEFAULT_TOL};
use ghartree::observables::{gaussian, mass, variance, Observer};
use ghartree::{scaling_index, EquationParams, Grid, RealField, RieszKernel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::erf::erf;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn params(dim: usize, p: f64, b: f64) -> EquationParams {
    EquationParams::new(dim, p, b).unwrap()
}

fn subcritical() -> EquationParams {
    params(3, 3.0, 1.0)
}

/// Subcritical ground state at `n = 128, L = 12`, with its solve time.
fn ground_state() -> &'static (GroundStateResult, Duration) {
    static GS: OnceLock<(GroundStateResult, Duration)> = OnceLock::new();
    GS.get_or_init(|| {
        let t0 = Instant::now();
        let grid = Grid::new(3, 128, 12.0).unwrap();
        let q = petviashvili_solve(subcritical(), &grid, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        (q, t0.elapsed())
    })
}

fn c1_criticality() -> Outcome {
    let cases = [((3, 3.0, 1.0), 0.5), ((3, 5.0, 1.0), 1.0), ((3, 7.0, 1.0), 7.0 / 6.0), ((4, 3.0, 2.0), 1.0)];
    let mut worst = 0.0f64;
    let mut pass = true;
    for ((n, p, b), want) in cases {
        let got = scaling_index(&params(n, p, b)).unwrap();
        let formula = n as f64 / 2.0 - (n as f64 - b + 2.0) / (2.0 * (p - 1.0));
        let err = (got - want).abs().max((formula - want).abs());
        worst = worst.max(err);
        pass &= err <= 1e-14;
    }
    Outcome::new(pass, format!("max |s_c - expected| = {worst:.1e}"))
}

fn c2_subcritical_thresholds() -> Outcome {
    let (q, solve_time) = ground_state();
    let t0 = Instant::now();
    let p = subcritical();
    let den = Denominators::from_ground_state(q).unwrap();
    let solve = |kind| threshold_solve(kind, &p, Some(&den), EnergyModel::Exact).unwrap();
    // closed forms from E[u_g] = 0 and V(0) = (ωM)²/E at γ = 1
    let beta_e = (3f64.powf(4.5) / (16.0 * PI)).powf(0.25);
    let beta_b = 3f64.powf(9.0 / 8.0) / (2f64.powf(1.25) * PI.powf(0.25));
    let beta_1 = 2f64.sqrt() / (3f64.powf(0.25) * PI.powf(0.75)) * q.mass_q.sqrt();
    // beta_1's closed form assumes the exact Pohozhaev ratio; the grid
    // ground state meets it to ~5e-5
    let rows = [
        ("beta_E", solve(ThresholdKind::NegativeEnergy), 1.29, 0.01, Some((beta_e, 1e-7))),
        ("beta_b", solve(ThresholdKind::CriterionBlowup), 1.08689, 1e-4, Some((beta_b, 1e-7))),
        ("beta_ME-", solve(ThresholdKind::MeLower), 0.9586, 1e-3, None),
        ("beta_ME+", solve(ThresholdKind::MeUpper), 1.1812, 1e-3, None),
        ("beta_1", solve(ThresholdKind::Gradient), 1.0418, 1e-3, Some((beta_1, 1e-4))),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, got, want, tol, oracle) in rows {
        pass &= (got - want).abs() <= tol;
        match oracle {
            Some((o, otol)) => {
                pass &= (got - o).abs() <= otol;
                parts.push(format!("{name}={got:.5} (closed form {:+.0e})", got - o));
            }
            None => parts.push(format!("{name}={got:.5}")),
        }
    }
    let total = *solve_time + t0.elapsed();
    pass &= total < Duration::from_secs(300);
    Outcome::new(pass, format!("{} (M[Q]={:.5}, {:.0?})", parts.join(" "), q.mass_q, total))
}

fn c3_closed_form_thresholds() -> Outcome {
    use ThresholdKind::*;
    let t0 = Instant::now();
    let table: [((usize, f64, f64), ThresholdKind, f64); 12] = [
        ((3, 5.0, 1.0), NegativeEnergy, 1.42161),
        ((3, 5.0, 1.0), CriterionBlowup, 1.16254),
        ((3, 5.0, 1.0), EnergyCriticalLower, 0.812225),
        ((3, 5.0, 1.0), EnergyCriticalUpper, 1.34423),
        ((3, 5.0, 1.0), Gradient, 0.902925),
        ((4, 3.0, 2.0), NegativeEnergy, 1.69257),
        ((4, 3.0, 2.0), CriterionBlowup, 1.28607),
        ((4, 3.0, 2.0), EnergyCriticalLower, 0.768792),
        ((4, 3.0, 2.0), EnergyCriticalUpper, 1.58845),
        ((4, 3.0, 2.0), Gradient, 0.921318),
        ((3, 7.0, 1.0), NegativeEnergy, 1.3946799),
        ((3, 7.0, 1.0), CriterionBlowup, 1.17278),
    ];
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for ((n, p, b), kind, want) in table {
        let ps = params(n, p, b);
        let den = if p < 7.0 { Some(Denominators::energy_critical(&ps).unwrap()) } else { None };
        let got = threshold_solve(kind, &ps, den.as_ref(), EnergyModel::Published).unwrap();
        if rel(got, want) > worst {
            worst = rel(got, want);
            worst_at = format!("({n},{p},{b}) {} = {got:.6}", kind.name());
        }
    }
    let took = t0.elapsed();
    Outcome::new(
        worst <= 1e-3 && took < Duration::from_secs(1),
        format!("12 values, worst relative error {worst:.1e} at {worst_at} ({took:.0?})"),
    )
}

fn c4_ground_state() -> Outcome {
    let (q, _) = ground_state();
    let obs = Observer::new(subcritical(), &q.profile.grid).unwrap();
    let m = mass(&q.profile).unwrap();
    let grad = obs.grad_norm_sq(&q.profile).unwrap();
    let z = obs.z_functional(&q.profile).unwrap();
    let e = 0.5 * grad - z / 6.0;
    let pass = rel(m, 5.2339) <= 5e-3
        && (grad / m - 2.0).abs() <= 1e-3
        && (z / m - 3.0).abs() <= 1e-3
        && (e / m - 0.5).abs() <= 1e-3;
    Outcome::new(
        pass,
        format!("M[Q]={m:.5} |grad Q|^2/M={:.6} Z/M={:.6} E/M={:.6}", grad / m, z / m, e / m),
    )
}

/// `∫ |S^{N-1}| r^{N-1} Q'(r)² dr` for `Q = A(1+r²)^{-(N-2)/2}`, by the
/// midpoint rule in `r = tan θ`.
fn critical_grad_sq(dim: usize, amplitude: f64) -> f64 {
    let nd = dim as f64;
    let area = 2.0 * PI.powf(nd / 2.0) / statrs::function::gamma::gamma(nd / 2.0);
    let steps = 200_000;
    let h = 0.5 * PI / steps as f64;
    let mut acc = 0.0;
    for i in 0..steps {
        let th = (i as f64 + 0.5) * h;
        let r = th.tan();
        let dq = -amplitude * (nd - 2.0) * r * (1.0 + r * r).powf(-nd / 2.0);
        acc += r.powf(nd - 1.0) * dq * dq / th.cos().powi(2);
    }
    area * acc * h
}

fn c5_explicit_critical() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (dim, want) in [(3, 3f64.powf(1.5) * PI.powf(1.75) / 2f64.powf(2.5)), (4, 16.0 * PI / 3.0)] {
        let q = explicit_critical_q(dim).unwrap();
        let res = q.residual(50.0, 500).unwrap();
        let g = critical_grad_sq(dim, q.amplitude);
        let g_lib = q.grad_norm_sq().unwrap();
        pass &= res <= 1e-6 && rel(g, want) <= 1e-3 && rel(g_lib, want) <= 1e-3;
        parts.push(format!("{dim}d residual {res:.1e} |grad Q|^2 {g:.6} (closed form {want:.6})"));
    }
    Outcome::new(pass, parts.join("; "))
}

/// Displayed `E[u_g]` at `γ = 1`.
fn displayed_energy(set: (usize, f64, f64), beta: f64) -> f64 {
    let pi32 = PI.powf(1.5);
    match set {
        (3, 3.0, 1.0) => pi32 / 4.0 * beta.powi(2) * (3.0 - 16.0 * PI / 3f64.powf(3.5) * beta.powi(4)),
        (3, 5.0, 1.0) => pi32 / 4.0 * beta.powi(2) * (3.0 - 16.0 * PI / 5f64.powf(3.5) * beta.powi(8)),
        (4, 3.0, 2.0) => PI * PI * beta.powi(2) * (1.0 - PI * PI / 81.0 * beta.powi(4)),
        (3, 7.0, 1.0) => pi32 / 4.0 * beta.powi(2) * (3.0 - 16.0 * PI / 7f64.powf(3.5) * beta.powi(12)),
        _ => unreachable!(),
    }
}

fn c6_gaussian_closed_forms() -> Outcome {
    let beta = 1.1;
    let mut pass = true;
    let mut parts = Vec::new();
    for set in [(3, 3.0, 1.0), (3, 5.0, 1.0), (3, 7.0, 1.0), (4, 3.0, 2.0)] {
        let (dim, p, b) = set;
        let nd = dim as f64;
        let (n, l) = if dim == 3 { (128, 12.0) } else { (48, 8.0) };
        let grid = Grid::new(dim, n, l).unwrap();
        let u = gaussian(&grid, beta, 1.0, |_| 0.0);
        let obs = Observer::new(params(dim, p, b), &grid).unwrap();
        let got = [
            mass(&u).unwrap(),
            variance(&u).unwrap(),
            obs.grad_norm_sq(&u).unwrap(),
            obs.energy(&u).unwrap(),
        ];
        let shown = [
            beta * beta * PI.powf(nd / 2.0),
            beta * beta * nd * PI.powf(nd / 2.0) / 2.0,
            nd * PI.powf(nd / 2.0) / 2.0 * beta * beta,
            displayed_energy(set, beta),
        ];
        let errs: Vec<f64> = got.iter().zip(&shown).map(|(g, s)| rel(*g, *s)).collect();
        let exact = gaussian_observables(beta, 1.0, &params(dim, p, b), EnergyModel::Exact).unwrap();
        let ok = errs.iter().all(|e| *e <= 1e-5);
        pass &= ok;
        parts.push(format!(
            "({dim},{p},{b}) n={n}: M {:.0e} V {:.0e} G {:.0e} E {:.0e} [vs exact integral {:.0e}]{}",
            errs[0],
            errs[1],
            errs[2],
            errs[3],
            rel(got[3], exact.input.energy),
            if ok { "" } else { " FAIL" }
        ));
    }
    Outcome::new(pass, parts.join("; "))
}

/// Direct lattice sum with the zeta-corrected self and nearest-neighbour
/// weights.
fn direct_sum(grid: &Grid, b: f64, g: &[f64]) -> Vec<f64> {
    let dim = grid.dim;
    let h = grid.spacing();
    let scale = h.powf(dim as f64 - b);
    let zb = epstein_zeta(dim, b);
    let zb2 = epstein_zeta(dim, b - 2.0);
    let idx: Vec<Vec<usize>> = (0..grid.len()).map(|i| grid.unravel(i)).collect();
    (0..grid.len())
        .map(|i| {
            let mut acc = 0.0;
            for j in 0..grid.len() {
                let r2: f64 = idx[i].iter().zip(&idx[j]).map(|(&a, &c)| (a as f64 - c as f64).powi(2)).sum();
                let w = if r2 == 0.0 {
                    (zb2 - zb) * scale
                } else if r2 == 1.0 {
                    scale - zb2 * scale / (2.0 * dim as f64)
                } else {
                    scale * r2.powf(-b / 2.0)
                };
                acc += w * g[j];
            }
            acc
        })
        .collect()
}

fn c7_convolution_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_direct = 0.0f64;
    for (dim, b) in [(3, 1.0), (4, 2.0), (2, 1.0)] {
        let grid = Grid::new(dim, 8, 2.0).unwrap();
        let g: Vec<f64> = (0..grid.len()).map(|_| rng.random_range(0.0..1.0)).collect();
        let fast = RieszKernel::new(&grid, b).unwrap().convolve(&RealField { grid, values: g.clone() }).unwrap();
        let slow = direct_sum(&grid, b, &g);
        let scale = slow.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let err = fast.values.iter().zip(&slow).fold(0.0f64, |m, (a, c)| m.max((a - c).abs())) / scale;
        worst_direct = worst_direct.max(err);
    }
    // Newton: |x|^{-1} * e^{-|x|²} = π^{3/2} erf(r) / r
    let grid = Grid::new(3, 128, 8.0).unwrap();
    let mut values = vec![0.0; grid.len()];
    let mut exact = vec![0.0; grid.len()];
    grid.for_each_point(|i, x| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        values[i] = (-r * r).exp();
        exact[i] = if r > 0.0 { PI.powf(1.5) * erf(r) / r } else { 2.0 * PI };
    });
    let conv = RieszKernel::new(&grid, 1.0).unwrap().convolve(&RealField { grid, values }).unwrap();
    let scale = exact.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let radial = conv.values.iter().zip(&exact).fold(0.0f64, |m, (a, c)| m.max((a - c).abs())) / scale;
    Outcome::new(
        worst_direct <= 1e-12 && radial <= 1e-5,
        format!("direct sum n=8 {worst_direct:.1e}; radial n=128 {radial:.1e}"),
    )
}

/// Boosted subcritical Gaussian `0.8 e^{-|x|²/2 + 0.3 i x₁}` to `t = 1`
/// at `dt = 1e-3`, sampled every `0.01`.
fn conservation_run() -> &'static (TrajectoryRecord, Duration) {
    static RUN: OnceLock<(TrajectoryRecord, Duration)> = OnceLock::new();
    RUN.get_or_init(|| {
        let t0 = Instant::now();
        let grid = Grid::new(3, 64, 8.0).unwrap();
        let u0 = gaussian(&grid, 0.8, 1.0, |x| 0.3 * x[0]);
        let config = EvolveConfig { dt0: 1e-3, t_end: 1.0, record_stride: 10, ..Default::default() };
        let record = Evolver::new(subcritical(), &grid).unwrap().run(&u0, &config).unwrap();
        (record, t0.elapsed())
    })
}

fn c8_conservation() -> Outcome {
    let (r, took) = conservation_run();
    let per_time = r.final_time.max(1.0);
    let (dm, de, dp) = (r.max_mass_drift() / per_time, r.max_energy_drift() / per_time, r.max_momentum_drift() / per_time);
    let pass = r.status == TerminalStatus::ReachedTEnd
        && dm <= 1e-10
        && de <= 1e-6
        && dp <= 1e-8
        && *took < Duration::from_secs(120);
    Outcome::new(
        pass,
        format!("{} mass {dm:.1e} energy {de:.1e} momentum {dp:.1e} ({took:.0?})", r.status),
    )
}

fn c9_virial() -> Outcome {
    let (r, _) = conservation_run();
    let v = virial_consistency(r).unwrap();
    Outcome::new(
        v.acceleration_discrepancy <= 0.05 && v.form_mismatch <= 1e-10,
        format!(
            "FD V_tt vs 16E-(8k/p)Z {:.2e} over {} points; analytic forms {:.1e}",
            v.acceleration_discrepancy, v.interior_points, v.form_mismatch
        ),
    )
}

fn c10_dynamics() -> Outcome {
    let p = subcritical();
    // collapse: small box for resolution, dt floor matched to the phase cap
    // at ten times the initial gradient
    let t0 = Instant::now();
    let grid = Grid::new(3, 128, 4.0).unwrap();
    let config = EvolveConfig { dt0: 0.01, t_end: 2.0, dt_floor: 5e-6, record_stride: 20, ..Default::default() };
    let up = Evolver::new(p, &grid).unwrap().run(&gaussian(&grid, 1.3, 1.0, |_| 0.0), &config).unwrap();
    let up_time = t0.elapsed();
    let growth = up.last().grad_norm() / up.first().grad_norm();
    let turned = up.samples.iter().position(|s| s.variance_rate < 0.0);
    let monotone = turned.is_some_and(|i| {
        up.samples[i..].iter().all(|s| s.virial_acceleration(&p).unwrap().0 < 0.0)
    });
    let blow_ok = up.status == TerminalStatus::BlowupDetected
        && growth >= 10.0
        && up.final_time < 2.0
        && monotone
        && up_time < Duration::from_secs(600);

    // dispersion: box large enough to hold the spreading wave up to t = 2
    let t1 = Instant::now();
    let grid = Grid::new(3, 128, 20.0).unwrap();
    let config = EvolveConfig { dt0: 0.01, t_end: 2.0, record_stride: 20, ..Default::default() };
    let down = Evolver::new(p, &grid).unwrap().run(&gaussian(&grid, 0.5, 1.0, |_| 0.0), &config).unwrap();
    let down_time = t1.elapsed();
    let decreasing = down.samples.windows(2).all(|w| w[1].grad_norm() <= w[0].grad_norm());
    let disp_ok = down.status == TerminalStatus::ReachedTEnd
        && down.last().grad_norm() < down.first().grad_norm()
        && down_time < Duration::from_secs(600);
    Outcome::new(
        blow_ok && disp_ok,
        format!(
            "beta=1.3: {} at t={:.4}, |grad u| x{growth:.2}, V_tt<0 after turn-down {monotone} ({up_time:.0?}); \
             beta=0.5: {} |grad u| {:.5} -> {:.5}, monotone {decreasing} ({down_time:.0?})",
            up.status,
            up.final_time,
            down.status,
            down.first().grad_norm(),
            down.last().grad_norm()
        ),
    )
}

/// Independent statement of the criterion: `V_t/(ωM) < 4√2 f(E V/(ωM)²)`.
fn criterion_oracle(p: &EquationParams, m: f64, e: f64, v: f64, vt: f64) -> bool {
    let (n, pp, b) = (p.dim as f64, p.p, p.b);
    let omega = (n * n * (n * (pp - 2.0) + b - 2.0) / (8.0 * (n * (pp - 2.0) + b))).sqrt();
    let s_c = n / 2.0 - (n - b + 2.0) / (2.0 * (pp - 1.0));
    let k = s_c * (pp - 1.0);
    let x = e * v / (omega * m).powi(2);
    let root = (1.0 / (k * x.powf(k)) + x - (1.0 + k) / k).max(0.0).sqrt();
    let f = if x < 1.0 { root } else { -root };
    vt / (omega * m) < 4.0 * 2f64.sqrt() * f
}

fn c11_mechanics_equivalence() -> Outcome {
    let sets = [params(3, 3.0, 1.0), params(3, 5.0, 1.0), params(3, 7.0, 1.0), params(4, 3.0, 2.0), params(3, 2.5, 1.5)];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut mismatches = 0;
    let mut holds = 0;
    for i in 0..1000 {
        let p = sets[i % sets.len()];
        let m = 10f64.powf(rng.random_range(-1.0..1.5));
        let e = 10f64.powf(rng.random_range(-2.0..2.0));
        let v = 10f64.powf(rng.random_range(-1.0..2.0));
        let vt = rng.random_range(-3.0..3.0) * m;
        let input = CriterionInput { mass: m, energy: e, variance0: v, variance_rate0: vt, params: p };
        let out = blowup_criterion(&input).unwrap();
        let mech = mechanics_conditions(&out.state).unwrap().any();
        let oracle = criterion_oracle(&p, m, e, v, vt);
        if out.holds != mech || out.holds != oracle {
            mismatches += 1;
        }
        holds += out.holds as usize;
    }
    let mut min_rad = f64::INFINITY;
    for p in &sets {
        let k = scaling_index(p).unwrap() * (p.p - 1.0);
        for j in 0..=600 {
            let x = 10f64.powf(-3.0 + 6.0 * j as f64 / 600.0);
            min_rad = min_rad.min(f_radicand(x, k));
        }
    }
    Outcome::new(
        mismatches == 0 && min_rad >= -1e-14,
        format!("{mismatches} mismatches in 1000 samples ({holds} blow-up); min radicand {min_rad:.1e}"),
    )
}

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "criticality indices", c1_criticality),
        (2, "subcritical threshold table", c2_subcritical_thresholds),
        (3, "critical and supercritical threshold tables", c3_closed_form_thresholds),
        (4, "subcritical ground state", c4_ground_state),
        (5, "explicit critical ground states", c5_explicit_critical),
        (6, "Gaussian closed forms on the grid", c6_gaussian_closed_forms),
        (7, "convolution oracles", c7_convolution_oracle),
        (8, "conservation", c8_conservation),
        (9, "virial identity", c9_virial),
        (10, "dynamical dichotomy", c10_dynamics),
        (11, "criterion/mechanics equivalence", c11_mechanics_equivalence),
    ];
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        let key = format!("c{id}");
        if !filter.is_empty() && !filter.iter().any(|f| *f == key) {
            continue;
        }
        let out = run();
        println!("criterion {id:>2} {} {name}: {}", if out.pass { "PASS" } else { "FAIL" }, out.detail);
        if !out.pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: all selected criteria passed");
}
