//! Strang split-step integrator with adaptive steps, conservation and
//! boundary monitoring, blow-up detection and checkpoint/resume.
//!
//! The linear sub-flow `e^{itΔ}` is applied exactly in Fourier space; the
//! nonlinear sub-flow `u ↦ e^{i dt V_eff} u` is exact for the frozen
//! potential because `|u|` (and hence `V_eff`) does not change under it.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::eqparams::{classify, EquationParams};
use crate::error::{GhError, Result};
use crate::field::{read_checkpoint, write_checkpoint, ComplexField, Grid};
use crate::observables::{mass, ObservableSet, Observer};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveConfig {
    pub dt0: f64,
    pub t_end: f64,
    pub dt_floor: f64,
    /// Largest nonlinear phase `dt · max|V_eff|` allowed in one step.
    pub phase_cap: f64,
    pub blowup_gradient_factor: f64,
    /// Record observables every this many steps.
    pub record_stride: usize,
    /// Relative mass drift that aborts the run.
    pub conservation_abort: f64,
    /// Boundary-layer mass fraction that aborts the run.
    pub boundary_abort: f64,
    /// Write a checkpoint every this many steps (0 disables).
    pub checkpoint_stride: usize,
    pub checkpoint_path: Option<PathBuf>,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            dt0: 1e-3,
            t_end: 1.0,
            dt_floor: 1e-7,
            phase_cap: 0.1,
            blowup_gradient_factor: 10.0,
            record_stride: 10,
            conservation_abort: 1e-4,
            boundary_abort: 1e-4,
            checkpoint_stride: 0,
            checkpoint_path: None,
        }
    }
}

impl EvolveConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(GhError::Config(msg));
        if !(self.dt_floor > 0.0 && self.dt0 > self.dt_floor) {
            return bad(format!("need dt0 > dt_floor > 0, got {} and {}", self.dt0, self.dt_floor));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return bad(format!("t_end must be positive, got {}", self.t_end));
        }
        if !(self.phase_cap > 0.0 && self.phase_cap < std::f64::consts::PI) {
            return bad(format!("phase_cap must lie in (0, π), got {}", self.phase_cap));
        }
        if !(self.blowup_gradient_factor > 1.0) {
            return bad(format!(
                "blowup_gradient_factor must exceed 1, got {}",
                self.blowup_gradient_factor
            ));
        }
        if self.record_stride == 0 {
            return bad("record_stride must be at least 1".into());
        }
        if !(self.conservation_abort > 0.0) || !(self.boundary_abort > 0.0) {
            return bad("abort thresholds must be positive".into());
        }
        if self.checkpoint_stride > 0 && self.checkpoint_path.is_none() {
            return bad("checkpoint_stride set without checkpoint_path".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalStatus {
    ReachedTEnd,
    BlowupDetected,
    AbortedConservation,
    AbortedBoundary,
}

impl std::fmt::Display for TerminalStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TerminalStatus::ReachedTEnd => "reached-t-end",
            TerminalStatus::BlowupDetected => "blowup-detected",
            TerminalStatus::AbortedConservation => "aborted-conservation",
            TerminalStatus::AbortedBoundary => "aborted-boundary",
        })
    }
}

/// Sampled observables of one run and how it ended.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub params: EquationParams,
    pub samples: Vec<ObservableSet>,
    pub status: TerminalStatus,
    pub steps: usize,
    pub rejected_steps: usize,
    pub final_time: f64,
    /// Step the phase cap asked for at the end of the run.
    pub final_dt: f64,
    #[serde(skip)]
    pub final_field: Option<ComplexField>,
}

impl TrajectoryRecord {
    pub fn first(&self) -> &ObservableSet {
        &self.samples[0]
    }

    pub fn last(&self) -> &ObservableSet {
        self.samples.last().expect("trajectory has at least one sample")
    }

    /// Largest relative mass drift over the record.
    pub fn max_mass_drift(&self) -> f64 {
        let m0 = self.first().mass;
        self.samples.iter().map(|s| (s.mass - m0).abs() / m0).fold(0.0, f64::max)
    }

    /// Largest relative energy drift over the record.
    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.first().energy;
        self.samples.iter().map(|s| (s.energy - e0).abs() / e0.abs()).fold(0.0, f64::max)
    }

    /// Largest momentum drift in any component.
    pub fn max_momentum_drift(&self) -> f64 {
        let p0 = &self.first().momentum;
        self.samples
            .iter()
            .flat_map(|s| s.momentum.iter().zip(p0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }

    /// CSV with one row per sample, after `header` comment lines.
    pub fn write_csv<W: Write>(&self, mut w: W, header: &[String]) -> Result<()> {
        for line in header {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "# status={}", self.status)?;
        writeln!(w, "{}", ObservableSet::csv_header(self.params.dim))?;
        for s in &self.samples {
            writeln!(w, "{}", s.csv_row())?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Run metadata stored next to a field checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub params: EquationParams,
    pub time: f64,
    pub steps: usize,
    pub dt_next: f64,
    pub mass0: f64,
    pub grad_sq0: f64,
}

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub field: ComplexField,
    pub meta: CheckpointMeta,
}

impl Checkpoint {
    /// Sidecar metadata path, `<path>.json`.
    pub fn meta_path(path: &Path) -> PathBuf {
        let mut s = path.as_os_str().to_owned();
        s.push(".json");
        PathBuf::from(s)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_checkpoint(BufWriter::new(File::create(path)?), &self.field)?;
        let meta = BufWriter::new(File::create(Self::meta_path(path))?);
        serde_json::to_writer_pretty(meta, &self.meta)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let field = read_checkpoint(BufReader::new(File::open(path)?))?;
        let meta: CheckpointMeta =
            serde_json::from_reader(BufReader::new(File::open(Self::meta_path(path))?))?;
        Ok(Checkpoint { field, meta })
    }
}

/// Integrator state for one grid and parameter set.
#[derive(Debug, Clone)]
pub struct Evolver {
    observer: Observer,
}

impl Evolver {
    pub fn new(params: EquationParams, grid: &Grid) -> Result<Self> {
        Ok(Evolver {
            observer: Observer::new(params, grid)?,
        })
    }

    pub fn observer(&self) -> &Observer {
        &self.observer
    }

    pub fn params(&self) -> &EquationParams {
        self.observer.params()
    }

    fn check(&self, u: &ComplexField) -> Result<()> {
        if &u.grid != self.observer.grid() {
            return Err(GhError::KernelMismatch(format!(
                "evolver built for {:?}, field on {:?}",
                self.observer.grid(),
                u.grid
            )));
        }
        u.check_finite()
    }

    /// `e^{i dt Δ} u`
    pub fn linear_step(&self, u: &ComplexField, dt: f64) -> Result<ComplexField> {
        self.check(u)?;
        let mut out = u.clone();
        self.observer.spectral().propagate(&mut out.values, dt);
        Ok(out)
    }

    /// `e^{i dt V_eff(u)} u`
    pub fn nonlinear_step(&self, u: &ComplexField, dt: f64) -> Result<ComplexField> {
        self.check(u)?;
        let mut out = u.clone();
        let veff = self.observer.nonlinearity().effective_potential(&out.values)?;
        rotate(&mut out.values, &veff, dt);
        Ok(out)
    }

    /// Half linear, full nonlinear, half linear.
    pub fn strang_step(&self, u: &ComplexField, dt: f64) -> Result<ComplexField> {
        self.check(u)?;
        let mut out = u.clone();
        let spectral = self.observer.spectral();
        spectral.propagate(&mut out.values, 0.5 * dt);
        let veff = self.observer.nonlinearity().effective_potential(&out.values)?;
        rotate(&mut out.values, &veff, dt);
        spectral.propagate(&mut out.values, 0.5 * dt);
        Ok(out)
    }

    /// Evolves `u0` from `t = 0` under `config`.
    pub fn run(&self, u0: &ComplexField, config: &EvolveConfig) -> Result<TrajectoryRecord> {
        config.validate()?;
        self.check(u0)?;
        let grad_sq0 = self.observer.grad_norm_sq(u0)?;
        let meta = CheckpointMeta {
            params: *self.params(),
            time: 0.0,
            steps: 0,
            dt_next: config.dt0,
            mass0: mass(u0)?,
            grad_sq0,
        };
        self.integrate(u0.clone(), meta, config)
    }

    /// Continues a checkpointed run up to `config.t_end`.
    pub fn resume(&self, checkpoint: Checkpoint, config: &EvolveConfig) -> Result<TrajectoryRecord> {
        config.validate()?;
        self.check(&checkpoint.field)?;
        if checkpoint.meta.params != *self.params() {
            return Err(GhError::Config(format!(
                "checkpoint is for {:?}, evolver for {:?}",
                checkpoint.meta.params,
                self.params()
            )));
        }
        self.integrate(checkpoint.field, checkpoint.meta, config)
    }

    fn integrate(&self, mut u: ComplexField, start: CheckpointMeta, config: &EvolveConfig) -> Result<TrajectoryRecord> {
        let spectral = self.observer.spectral();
        let nonlinearity = self.observer.nonlinearity();
        let mut t = start.time;
        let mut steps = start.steps;
        let mut dt_next = start.dt_next.min(config.dt0);
        let mut rejected = 0;
        let grad0 = start.grad_sq0.sqrt();
        let end_eps = 1e-12 * config.t_end.max(1.0);

        let mut samples = vec![self.observer.observe(&u, t)?];
        let mut status = TerminalStatus::ReachedTEnd;
        let mut last_recorded = steps;

        while t < config.t_end - end_eps {
            let mut dt = dt_next.min(config.t_end - t);
            let (grad_sq, refined) = loop {
                spectral.propagate(&mut u.values, 0.5 * dt);
                let veff = nonlinearity.effective_potential(&u.values)?;
                let vmax = veff.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let refined = if vmax > 0.0 { config.phase_cap / vmax } else { f64::INFINITY };
                if dt > refined && dt > config.dt_floor {
                    spectral.propagate(&mut u.values, -0.5 * dt);
                    dt = (0.9 * refined).max(config.dt_floor);
                    rejected += 1;
                    continue;
                }
                rotate(&mut u.values, &veff, dt);
                break (spectral.propagate_with_grad(&mut u.values, 0.5 * dt), refined);
            };
            t += dt;
            steps += 1;
            log::trace!("step {steps}: t = {t:.6}, dt = {dt:.3e}, |grad u| = {:.4}, dt cap = {refined:.3e}", grad_sq.sqrt());
            dt_next = (0.9 * refined).clamp(config.dt_floor, config.dt0);

            let m = mass(&u).unwrap_or(f64::NAN);
            let drift = (m - start.mass0).abs() / start.mass0;
            if !(drift <= config.conservation_abort) || !grad_sq.is_finite() {
                status = TerminalStatus::AbortedConservation;
            } else if u.boundary_mass_fraction() > config.boundary_abort {
                status = TerminalStatus::AbortedBoundary;
            } else if grad_sq.sqrt() > config.blowup_gradient_factor * grad0
                && refined < 4.0 * config.dt_floor
            {
                status = TerminalStatus::BlowupDetected;
            }
            let done = status != TerminalStatus::ReachedTEnd || t >= config.t_end - end_eps;
            if status != TerminalStatus::AbortedConservation && (done || (steps - start.steps) % config.record_stride == 0) {
                samples.push(self.observer.observe(&u, t)?);
                last_recorded = steps;
            }
            if config.checkpoint_stride > 0 && steps % config.checkpoint_stride == 0 && u.check_finite().is_ok() {
                let path = config.checkpoint_path.as_ref().expect("validated");
                Checkpoint {
                    field: u.clone(),
                    meta: CheckpointMeta {
                        time: t,
                        steps,
                        dt_next,
                        ..start.clone()
                    },
                }
                .save(path)?;
            }
            if done {
                break;
            }
        }
        log::debug!(
            "{status} at t = {t} after {steps} steps ({rejected} rejected), last sample at step {last_recorded}"
        );
        Ok(TrajectoryRecord {
            params: *self.params(),
            samples,
            status,
            steps,
            rejected_steps: rejected,
            final_time: t,
            final_dt: dt_next,
            final_field: Some(u),
        })
    }
}

fn rotate(u: &mut [C64], veff: &[f64], dt: f64) {
    for (v, w) in u.iter_mut().zip(veff) {
        *v *= C64::from_polar(1.0, dt * w);
    }
}

/// One-shot evolution; see [`Evolver::run`].
pub fn evolve(u0: &ComplexField, config: &EvolveConfig, params: &EquationParams) -> Result<TrajectoryRecord> {
    Evolver::new(*params, &u0.grid)?.run(u0, config)
}

/// Finite differences of the sampled variance against the analytic
/// `V_t` and `V_tt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VirialReport {
    pub interior_points: usize,
    /// `max |FD V' - V_t| / max |V_t|`, or absolute when `V_t ≡ 0`.
    pub rate_discrepancy: f64,
    /// `max |FD V'' - (16E - (8k/p)Z)| / |16E - (8k/p)Z|`, pointwise.
    pub acceleration_discrepancy: f64,
    /// `max |form₁ - form₂| / max(|form₁|, |form₂|)`.
    pub form_mismatch: f64,
    /// Largest spacing between samples.
    pub max_spacing: f64,
}

/// Compares centred differences of `V(t)` with the virial identities.
pub fn virial_consistency(record: &TrajectoryRecord) -> Result<VirialReport> {
    let s = &record.samples;
    if s.len() < 3 {
        return Err(GhError::InsufficientSamples(format!(
            "need at least 3 samples, have {}",
            s.len()
        )));
    }
    let k = classify(&record.params)?.k;
    let p = record.params.p;
    let rate_scale = s.iter().map(|o| o.variance_rate.abs()).fold(0.0, f64::max);
    let (mut rate_err, mut acc_err, mut form_err, mut spacing) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for o in s {
        let a = 16.0 * o.energy - 8.0 * k / p * o.z_value;
        let b = 16.0 * (k + 1.0) * o.energy - 8.0 * k * o.grad_norm_sq;
        let scale = a.abs().max(b.abs());
        if scale > 0.0 {
            form_err = form_err.max((a - b).abs() / scale);
        }
    }
    for w in s.windows(3) {
        let (h1, h2) = (w[1].time - w[0].time, w[2].time - w[1].time);
        spacing = spacing.max(h1).max(h2);
        let (v0, v1, v2) = (w[0].variance, w[1].variance, w[2].variance);
        // three-point formulas on a nonuniform stencil
        let d1 = (-h2 / (h1 * (h1 + h2))) * v0 + ((h2 - h1) / (h1 * h2)) * v1 + (h1 / (h2 * (h1 + h2))) * v2;
        let d2 = 2.0 * (v0 / (h1 * (h1 + h2)) - v1 / (h1 * h2) + v2 / (h2 * (h1 + h2)));
        let o = &w[1];
        let rate_den = if rate_scale > 0.0 { rate_scale } else { 1.0 };
        rate_err = rate_err.max((d1 - o.variance_rate).abs() / rate_den);
        let acc = 16.0 * o.energy - 8.0 * k / p * o.z_value;
        acc_err = acc_err.max((d2 - acc).abs() / acc.abs().max(f64::MIN_POSITIVE));
    }
    Ok(VirialReport {
        interior_points: s.len() - 2,
        rate_discrepancy: rate_err,
        acceleration_discrepancy: acc_err,
        form_mismatch: form_err,
        max_spacing: spacing,
    })
}
