use ghartree::cli::{run_command, Options, RunConfig};
use ghartree::evolve::{EvolveConfig, Evolver, TerminalStatus};
use ghartree::observables::gaussian;
use ghartree::{EquationParams, Grid};

fn fixed_step(dt: f64, t_end: f64) -> EvolveConfig {
    EvolveConfig { dt0: dt, t_end, dt_floor: dt / 10.0, phase_cap: 3.0, record_stride: 1_000_000, ..Default::default() }
}

#[test]
fn strang_splitting_is_second_order_in_energy() {
    let p = EquationParams::new(3, 3.0, 1.0).unwrap();
    let grid = Grid::new(3, 32, 8.0).unwrap();
    let ev = Evolver::new(p, &grid).unwrap();
    let u0 = gaussian(&grid, 0.9, 1.0, |_| 0.0);
    let dts = [0.02, 0.01, 0.005];
    let errs: Vec<f64> = dts
        .iter()
        .map(|&dt| {
            let r = ev.run(&u0, &fixed_step(dt, 0.1)).unwrap();
            assert_eq!(r.rejected_steps, 0);
            (r.last().energy - r.first().energy).abs()
        })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = dts.iter().zip(&errs).map(|(d, e)| (d.ln(), e.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / 3.0;
    let my = ys.iter().sum::<f64>() / 3.0;
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((slope - 2.0).abs() <= 0.3, "slope {slope}, errors {errs:?}");
}

#[test]
fn mass_critical_acceleration_is_sixteen_energy_along_a_run() {
    let p = EquationParams::new(3, 2.0, 2.0).unwrap();
    let grid = Grid::new(3, 32, 8.0).unwrap();
    let u0 = gaussian(&grid, 0.8, 1.0, |x| 0.2 * x[1]);
    let config = EvolveConfig { dt0: 5e-3, t_end: 0.2, record_stride: 4, ..Default::default() };
    let r = Evolver::new(p, &grid).unwrap().run(&u0, &config).unwrap();
    assert_eq!(r.status, TerminalStatus::ReachedTEnd);
    for s in &r.samples {
        let (a, _) = s.virial_acceleration(&p).unwrap();
        assert!((a / (16.0 * s.energy) - 1.0).abs() <= 2e-2, "t = {}: {}", s.time, a / (16.0 * s.energy));
    }
}

#[test]
fn boosted_gaussian_keeps_its_momentum() {
    let p = EquationParams::new(3, 3.0, 1.0).unwrap();
    let grid = Grid::new(3, 48, 6.0).unwrap();
    // boost on the lattice of grid wavenumbers, π/L
    let dk = std::f64::consts::PI / 6.0;
    let u0 = gaussian(&grid, 0.6, 1.0, |x| dk * x[0] - dk * x[2]);
    let config = EvolveConfig { dt0: 5e-3, t_end: 0.2, record_stride: 5, ..Default::default() };
    let r = Evolver::new(p, &grid).unwrap().run(&u0, &config).unwrap();
    let m = r.first().mass;
    assert!((r.first().momentum[0] - dk * m).abs() < 1e-8 * m);
    assert!(r.max_momentum_drift() < 1e-8, "{}", r.max_momentum_drift());
    assert!(r.max_mass_drift() < 1e-12);
}

#[test]
fn evolving_forward_then_backward_returns_the_datum() {
    let p = EquationParams::new(3, 3.0, 1.0).unwrap();
    let grid = Grid::new(3, 24, 6.0).unwrap();
    let ev = Evolver::new(p, &grid).unwrap();
    let u0 = gaussian(&grid, 0.9, 1.0, |x| 0.3 * x[0]);
    let mut u = u0.clone();
    for _ in 0..20 {
        u = ev.strang_step(&u, 5e-3).unwrap();
    }
    for _ in 0..20 {
        u = ev.strang_step(&u, -5e-3).unwrap();
    }
    assert!(u.rel_l2_distance(&u0) < 1e-10);
}

#[test]
fn dynamic_sweep_runs_every_datum() {
    let cfg = RunConfig::parse(
        "N=3\np=7\nb=1\nn=16\nL=6\nbeta_min=0.3\nbeta_max=0.5\nbeta_steps=3\nsweep_mode=dynamic\nt_end=0.02\ndt0=0.01\n",
    )
    .unwrap();
    let out = run_command("sweep", &cfg, &Options { threads: 2, ..Default::default() }).unwrap();
    let rows: Vec<&str> = out.stdout.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",reached-t-end")), "{rows:?}");
}
