//! Batch surface: `key=value` run configuration, the six commands, output
//! headers and exit-code mapping. The `ghartree` binary is a thin wrapper.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::criteria::{
    all_thresholds, dichotomy_classify, gaussian_observables, omega_sq, scale_exponent, ClassifyInput,
    Denominators, EnergyModel, JsonReport, ThresholdKind,
};
use crate::eqparams::{canonical_pair, classify, Criticality, EquationParams};
use crate::error::{GhError, Result};
use crate::evolve::{Checkpoint, EvolveConfig, Evolver, TerminalStatus};
use crate::field::Grid;
use crate::groundstate::{petviashvili_solve, GroundStateSummary, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::observables::gaussian;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Every key accepted in a run configuration.
pub const KEYS: &[&str] = &[
    "N",
    "p",
    "b",
    "n",
    "L",
    "beta",
    "gamma",
    "dt0",
    "t_end",
    "dt_floor",
    "phase_cap",
    "blowup_gradient_factor",
    "record_stride",
    "conservation_abort",
    "boundary_abort",
    "checkpoint_stride",
    "gs_tol",
    "gs_max_iter",
    "energy_model",
    "ground_state",
    "beta_min",
    "beta_max",
    "beta_steps",
    "sweep_mode",
    "out",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    /// Closed-form functionals and verdicts only.
    Analytic,
    /// Also evolve every datum.
    Dynamic,
}

/// Parsed run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: EquationParams,
    pub grid: Grid,
    pub beta: f64,
    pub gamma: f64,
    pub evolve: EvolveConfig,
    pub gs_tol: f64,
    pub gs_max_iter: usize,
    pub energy_model: EnergyModel,
    /// Ground-state summary JSON to reuse instead of solving.
    pub ground_state: Option<PathBuf>,
    pub beta_min: f64,
    pub beta_max: f64,
    pub beta_steps: usize,
    pub sweep_mode: SweepMode,
    pub out: Option<PathBuf>,
    entries: BTreeMap<String, String>,
}

/// Default `(n, L)` per dimension.
pub fn default_grid(dim: usize) -> (usize, f64) {
    match dim {
        1 => (1024, 40.0),
        2 => (256, 16.0),
        3 => (128, 12.0),
        _ => (48, 8.0),
    }
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| GhError::Config(format!("line {}: expected key=value, got {raw:?}", lineno + 1)))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Self::from_pairs(pairs)
    }

    /// Reads a config file and applies `overrides` (`key=value` strings).
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut text = match path {
            Some(p) => fs::read_to_string(p).map_err(|e| GhError::Config(format!("{}: {e}", p.display())))?,
            None => String::new(),
        };
        for o in overrides {
            text.push('\n');
            text.push_str(o);
        }
        Self::parse(&text)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (k, v) in pairs {
            let key = if k == "dim" { "N".to_string() } else { k };
            if !KEYS.contains(&key.as_str()) {
                return Err(GhError::Config(format!("unknown key {key:?}")));
            }
            entries.insert(key, v);
        }
        let get = |k: &str| entries.get(k).map(String::as_str);
        fn num<T: std::str::FromStr>(k: &str, v: Option<&str>, default: Option<T>) -> Result<T> {
            match v {
                Some(s) => s
                    .parse()
                    .map_err(|_| GhError::Config(format!("{k} = {s:?} is not a valid number"))),
                None => default.ok_or_else(|| GhError::Config(format!("missing required key {k}"))),
            }
        }
        let dim: usize = num("N", get("N"), None)?;
        let params = EquationParams::new(dim, num("p", get("p"), None)?, num("b", get("b"), None)?)?;
        let (n0, l0) = default_grid(dim);
        let grid = Grid::new(dim, num("n", get("n"), Some(n0))?, num("L", get("L"), Some(l0))?)?;
        let d = EvolveConfig::default();
        let evolve = EvolveConfig {
            dt0: num("dt0", get("dt0"), Some(d.dt0))?,
            t_end: num("t_end", get("t_end"), Some(d.t_end))?,
            dt_floor: num("dt_floor", get("dt_floor"), Some(d.dt_floor))?,
            phase_cap: num("phase_cap", get("phase_cap"), Some(d.phase_cap))?,
            blowup_gradient_factor: num("blowup_gradient_factor", get("blowup_gradient_factor"), Some(d.blowup_gradient_factor))?,
            record_stride: num("record_stride", get("record_stride"), Some(d.record_stride))?,
            conservation_abort: num("conservation_abort", get("conservation_abort"), Some(d.conservation_abort))?,
            boundary_abort: num("boundary_abort", get("boundary_abort"), Some(d.boundary_abort))?,
            checkpoint_stride: num("checkpoint_stride", get("checkpoint_stride"), Some(0))?,
            checkpoint_path: None,
        };
        let energy_model = match get("energy_model").unwrap_or("published") {
            "published" => EnergyModel::Published,
            "exact" => EnergyModel::Exact,
            other => return Err(GhError::Config(format!("energy_model must be exact or published, got {other:?}"))),
        };
        let sweep_mode = match get("sweep_mode").unwrap_or("analytic") {
            "analytic" => SweepMode::Analytic,
            "dynamic" => SweepMode::Dynamic,
            other => return Err(GhError::Config(format!("sweep_mode must be analytic or dynamic, got {other:?}"))),
        };
        let cfg = RunConfig {
            params,
            grid,
            beta: num("beta", get("beta"), Some(1.0))?,
            gamma: num("gamma", get("gamma"), Some(1.0))?,
            evolve,
            gs_tol: num("gs_tol", get("gs_tol"), Some(DEFAULT_TOL))?,
            gs_max_iter: num("gs_max_iter", get("gs_max_iter"), Some(DEFAULT_MAX_ITER))?,
            energy_model,
            ground_state: get("ground_state").map(PathBuf::from),
            beta_min: num("beta_min", get("beta_min"), Some(0.1))?,
            beta_max: num("beta_max", get("beta_max"), Some(2.0))?,
            beta_steps: num("beta_steps", get("beta_steps"), Some(96))?,
            sweep_mode,
            out: get("out").map(PathBuf::from),
            entries,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.gamma > 0.0) {
            return Err(GhError::Config("beta and gamma must be positive".into()));
        }
        if !(self.beta_min > 0.0 && self.beta_max > self.beta_min) || self.beta_steps < 2 {
            return Err(GhError::Config("need 0 < beta_min < beta_max and beta_steps >= 2".into()));
        }
        if !(self.gs_tol > 0.0) {
            return Err(GhError::Config("gs_tol must be positive".into()));
        }
        let mut e = self.evolve.clone();
        e.checkpoint_path = Some(PathBuf::new());
        e.validate()
    }

    /// Canonical `key=value` listing of every resolved setting.
    pub fn canonical(&self) -> String {
        let e = &self.evolve;
        let mut m: BTreeMap<&str, String> = BTreeMap::new();
        m.insert("N", self.params.dim.to_string());
        m.insert("p", format!("{:?}", self.params.p));
        m.insert("b", format!("{:?}", self.params.b));
        m.insert("n", self.grid.n.to_string());
        m.insert("L", format!("{:?}", self.grid.half_extent));
        m.insert("beta", format!("{:?}", self.beta));
        m.insert("gamma", format!("{:?}", self.gamma));
        m.insert("dt0", format!("{:?}", e.dt0));
        m.insert("t_end", format!("{:?}", e.t_end));
        m.insert("dt_floor", format!("{:?}", e.dt_floor));
        m.insert("phase_cap", format!("{:?}", e.phase_cap));
        m.insert("blowup_gradient_factor", format!("{:?}", e.blowup_gradient_factor));
        m.insert("record_stride", e.record_stride.to_string());
        m.insert("conservation_abort", format!("{:?}", e.conservation_abort));
        m.insert("boundary_abort", format!("{:?}", e.boundary_abort));
        m.insert("checkpoint_stride", e.checkpoint_stride.to_string());
        m.insert("gs_tol", format!("{:?}", self.gs_tol));
        m.insert("gs_max_iter", self.gs_max_iter.to_string());
        m.insert("energy_model", serde_json::to_value(self.energy_model).unwrap().as_str().unwrap().to_string());
        m.insert("beta_min", format!("{:?}", self.beta_min));
        m.insert("beta_max", format!("{:?}", self.beta_max));
        m.insert("beta_steps", self.beta_steps.to_string());
        m.insert("sweep_mode", serde_json::to_value(self.sweep_mode).unwrap().as_str().unwrap().to_string());
        if let Some(g) = &self.ground_state {
            m.insert("ground_state", g.display().to_string());
        }
        m.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// SHA-256 of [`RunConfig::canonical`], hex.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Keys as given, before defaults.
    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }
}

/// Flags shared by every command.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub out: Option<PathBuf>,
    /// Worker count for sweeps; `0` means one.
    pub threads: usize,
    pub resume: Option<PathBuf>,
}

/// What a command printed and wrote.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub stdout: String,
    pub files: Vec<PathBuf>,
}

/// Header lines embedded in every output file.
pub fn header_lines(cfg: &RunConfig, command: &str) -> Vec<String> {
    vec![
        format!("ghartree {VERSION} {command}"),
        format!("config_hash={}", cfg.hash()),
    ]
}

fn header_json(cfg: &RunConfig, command: &str) -> Value {
    json!({ "artifact": "ghartree", "version": VERSION, "command": command, "config_hash": cfg.hash() })
}

fn out_dir(cfg: &RunConfig, opts: &Options) -> Result<Option<PathBuf>> {
    let dir = opts.out.clone().or_else(|| cfg.out.clone());
    if let Some(d) = &dir {
        fs::create_dir_all(d).map_err(|e| GhError::Config(format!("output directory {}: {e}", d.display())))?;
    }
    Ok(dir)
}

fn write_json(dir: &Option<PathBuf>, name: &str, value: &Value, files: &mut Vec<PathBuf>) -> Result<String> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    if let Some(d) = dir {
        let path = d.join(name);
        fs::write(&path, &text)?;
        files.push(path);
    }
    Ok(text)
}

fn write_csv(dir: &Option<PathBuf>, name: &str, header: &[String], body: &str, files: &mut Vec<PathBuf>) -> Result<String> {
    let mut text: String = header.iter().map(|h| format!("# {h}\n")).collect();
    text.push_str(body);
    if let Some(d) = dir {
        let path = d.join(name);
        fs::write(&path, &text)?;
        files.push(path);
    }
    Ok(text)
}

/// Criticality bookkeeping for `(N, p, b)`.
pub fn cmd_params(cfg: &RunConfig, opts: &Options) -> Result<CommandOutput> {
    let p = &cfg.params;
    let r = classify(p)?;
    let mut v = json!({
        "header": header_json(cfg, "params"),
        "params": p,
        "s_c": r.s_c,
        "class": r.class.to_string(),
        "k": r.k,
        "alpha": r.alpha,
        "lwp_regularity_ok": r.lwp_regularity_ok,
        "a1_exponent_ok": r.a1_exponent_ok,
        "scaling_exponent": p.scaling_exponent(),
        "gaussian_scale_exponent": scale_exponent(p),
    });
    if r.s_c > 0.0 {
        v["omega_sq"] = json!(omega_sq(p));
    }
    if let Ok(pair) = canonical_pair(p) {
        v["strichartz_pair"] = json!(pair);
    }
    if p.dim >= 3 {
        v["energy_critical_power"] = json!(EquationParams::energy_critical_power(p.dim, p.b)?);
    }
    let dir = out_dir(cfg, opts)?;
    let mut files = Vec::new();
    let stdout = write_json(&dir, "params.json", &v, &mut files)?;
    Ok(CommandOutput { stdout, files })
}

/// Ground-state constants: from `ground_state=` if given, else solved on
/// the configured grid.
fn ground_summary(cfg: &RunConfig) -> Result<GroundStateSummary> {
    if let Some(path) = &cfg.ground_state {
        let text = fs::read_to_string(path).map_err(|e| GhError::Config(format!("{}: {e}", path.display())))?;
        let summary: GroundStateSummary = serde_json::from_str(&text)?;
        if summary.params != cfg.params {
            return Err(GhError::Config(format!(
                "ground state {} is for {:?}, config for {:?}",
                path.display(),
                summary.params,
                cfg.params
            )));
        }
        return Ok(summary);
    }
    Ok(petviashvili_solve(cfg.params, &cfg.grid, cfg.gs_tol, cfg.gs_max_iter)?.summary())
}

fn denominators(cfg: &RunConfig) -> Result<(Option<Denominators>, Option<GroundStateSummary>)> {
    match classify(&cfg.params)?.class {
        Criticality::Intercritical => {
            let g = ground_summary(cfg)?;
            Ok((Some(Denominators::from_gn_constant(&cfg.params, g.c_gn)?), Some(g)))
        }
        Criticality::EnergyCritical => Ok((Some(Denominators::energy_critical(&cfg.params)?), None)),
        _ => Ok((None, None)),
    }
}

/// Solves for the ground state and writes `groundstate.{ghfd,json}`.
pub fn cmd_groundstate(cfg: &RunConfig, opts: &Options) -> Result<CommandOutput> {
    let result = petviashvili_solve(cfg.params, &cfg.grid, cfg.gs_tol, cfg.gs_max_iter)?;
    let dir = out_dir(cfg, opts)?;
    let mut files = Vec::new();
    let v = json!({
        "header": header_json(cfg, "groundstate"),
        "summary": result.summary(),
        "axis_asymmetry": result.axis_asymmetry(),
    });
    if let Some(d) = &dir {
        let ckpt = d.join("groundstate.ghfd");
        result.profile.write_checkpoint(BufWriter::new(fs::File::create(&ckpt)?))?;
        files.push(ckpt);
        // plain summary, loadable through ground_state=
        let path = d.join("groundstate_summary.json");
        fs::write(&path, serde_json::to_string_pretty(&result.summary())? + "\n")?;
        files.push(path);
    }
    let stdout = write_json(&dir, "groundstate.json", &v, &mut files)?;
    Ok(CommandOutput { stdout, files })
}

/// Threshold table in the scale-invariant amplitude at `γ = 1`.
pub fn cmd_thresholds(cfg: &RunConfig, opts: &Options) -> Result<CommandOutput> {
    let (den, ground) = denominators(cfg)?;
    let table = all_thresholds(&cfg.params, den.as_ref(), cfg.energy_model)?;
    let dir = out_dir(cfg, opts)?;
    let mut files = Vec::new();
    let mut body = String::from("kind,beta\n");
    for kind in ThresholdKind::ALL {
        if let Some(v) = table.get(kind.name()) {
            body.push_str(&format!("{},{:.10}\n", kind.name(), v));
        }
    }
    let mut header = header_lines(cfg, "thresholds");
    header.push(format!("scale variable beta/gamma^{:.10}", scale_exponent(&cfg.params)));
    write_csv(&dir, "thresholds.csv", &header, &body, &mut files)?;
    let v = json!({
        "header": header_json(cfg, "thresholds"),
        "params": cfg.params,
        "energy_model": cfg.energy_model,
        "scale_exponent": scale_exponent(&cfg.params),
        "mass_q": ground.as_ref().map(|g| g.mass_q),
        "thresholds": table,
    });
    let stdout = write_json(&dir, "thresholds.json", &v, &mut files)?;
    Ok(CommandOutput { stdout, files })
}

fn classify_beta(
    cfg: &RunConfig,
    beta: f64,
    den: Option<&Denominators>,
) -> Result<(ClassifyInput, crate::criteria::ClassificationReport)> {
    let g = gaussian_observables(beta, cfg.gamma, &cfg.params, cfg.energy_model)?;
    let input = ClassifyInput {
        criterion: g.input,
        grad_sq: g.grad_sq,
        finite_variance: true,
        radial: true,
    };
    let report = dichotomy_classify(&input, den)?;
    Ok((input, report))
}

/// Classifies the Gaussian `β e^{-γ|x|²/2}`.
pub fn cmd_classify(cfg: &RunConfig, opts: &Options) -> Result<CommandOutput> {
    let (den, _) = denominators(cfg)?;
    let (input, report) = classify_beta(cfg, cfg.beta, den.as_ref())?;
    let thresholds = all_thresholds(&cfg.params, den.as_ref(), cfg.energy_model)?;
    let json_report = JsonReport::new(&input, &report, thresholds)?;
    let mut v = serde_json::to_value(&json_report)?;
    v["header"] = header_json(cfg, "classify");
    v["beta"] = json!(cfg.beta);
    v["gamma"] = json!(cfg.gamma);
    let dir = out_dir(cfg, opts)?;
    let mut files = Vec::new();
    let stdout = write_json(&dir, "classify.json", &v, &mut files)?;
    Ok(CommandOutput { stdout, files })
}

/// Evolves the configured Gaussian (or resumes a checkpoint) and writes
/// `trajectory.csv`, `evolve.json` and a final checkpoint.
pub fn cmd_evolve(cfg: &RunConfig, opts: &Options) -> Result<CommandOutput> {
    let dir = out_dir(cfg, opts)?;
    let mut econf = cfg.evolve.clone();
    if econf.checkpoint_stride > 0 {
        let d = dir
            .as_ref()
            .ok_or_else(|| GhError::Config("checkpoint_stride needs an output directory".into()))?;
        econf.checkpoint_path = Some(d.join("checkpoint.ghfd"));
    }
    let evolver = Evolver::new(cfg.params, &cfg.grid)?;
    let record = match &opts.resume {
        Some(path) => evolver.resume(Checkpoint::load(path)?, &econf)?,
        None => evolver.run(&gaussian(&cfg.grid, cfg.beta, cfg.gamma, |_| 0.0), &econf)?,
    };
    let mut files = Vec::new();
    let header = header_lines(cfg, "evolve");
    if let Some(d) = &dir {
        let path = d.join("trajectory.csv");
        record.write_csv(BufWriter::new(fs::File::create(&path)?), &header)?;
        files.push(path);
        if let Some(field) = &record.final_field {
            let path = d.join("final.ghfd");
            let last = record.last();
            Checkpoint {
                field: field.clone(),
                meta: crate::evolve::CheckpointMeta {
                    params: cfg.params,
                    time: record.final_time,
                    steps: record.steps,
                    dt_next: record.final_dt,
                    mass0: record.first().mass,
                    grad_sq0: if opts.resume.is_some() { f64::NAN } else { record.first().grad_norm_sq },
                },
            }
            .save(&path)?;
            debug_assert!(last.time <= record.final_time);
            files.push(path);
        }
    }
    let first = record.first();
    let last = record.last();
    let v = json!({
        "header": header_json(cfg, "evolve"),
        "status": record.status,
        "steps": record.steps,
        "rejected_steps": record.rejected_steps,
        "final_time": record.final_time,
        "final_dt": record.final_dt,
        "samples": record.samples.len(),
        "grad_norm_initial": first.grad_norm(),
        "grad_norm_final": last.grad_norm(),
        "max_mass_drift": record.max_mass_drift(),
        "max_energy_drift": record.max_energy_drift(),
    });
    let stdout = write_json(&dir, "evolve.json", &v, &mut files)?;
    Ok(CommandOutput { stdout, files })
}

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub beta: f64,
    pub mass: f64,
    pub energy: f64,
    pub me: Option<f64>,
    pub g: Option<f64>,
    pub x0: Option<f64>,
    pub criterion_holds: Option<bool>,
    pub verdict: String,
    pub dynamic_status: Option<TerminalStatus>,
}

impl SweepRow {
    fn csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.10e}")).unwrap_or_else(|| "nan".into());
        format!(
            "{:.10},{:.10e},{:.10e},{},{},{},{},{},{}\n",
            self.beta,
            self.mass,
            self.energy,
            opt(self.me),
            opt(self.g),
            opt(self.x0),
            self.criterion_holds.map(|b| if b { "1" } else { "0" }).unwrap_or("nan"),
            self.verdict,
            self.dynamic_status.map(|s| s.to_string()).unwrap_or_else(|| "-".into()),
        )
    }
}

fn sweep_row(cfg: &RunConfig, beta: f64, den: Option<&Denominators>, evolver: Option<&Evolver>) -> Result<SweepRow> {
    let (input, report) = classify_beta(cfg, beta, den)?;
    let dynamic_status = match evolver {
        Some(ev) => Some(ev.run(&gaussian(&cfg.grid, beta, cfg.gamma, |_| 0.0), &cfg.evolve)?.status),
        None => None,
    };
    Ok(SweepRow {
        beta,
        mass: input.criterion.mass,
        energy: input.criterion.energy,
        me: report.me_value,
        g: report.g_value,
        x0: report.criterion.map(|c| c.state.x0),
        criterion_holds: report.criterion.map(|c| c.holds),
        verdict: report.verdict.to_string(),
        dynamic_status,
    })
}

/// Sweeps `β` over `[beta_min, beta_max]` at the configured `γ`, writing
/// `sweep.csv` (gnuplot-friendly) with the band structure.
pub fn cmd_sweep(cfg: &RunConfig, opts: &Options) -> Result<CommandOutput> {
    let (den, _) = denominators(cfg)?;
    let betas: Vec<f64> = (0..cfg.beta_steps)
        .map(|i| cfg.beta_min + (cfg.beta_max - cfg.beta_min) * i as f64 / (cfg.beta_steps - 1) as f64)
        .collect();
    let workers = opts.threads.max(1).min(betas.len());
    let evolver = match cfg.sweep_mode {
        SweepMode::Dynamic => Some(Evolver::new(cfg.params, &cfg.grid)?),
        SweepMode::Analytic => None,
    };
    let chunk = betas.len().div_ceil(workers);
    let rows: Vec<Result<SweepRow>> = std::thread::scope(|scope| {
        let handles: Vec<_> = betas
            .chunks(chunk)
            .map(|part| {
                let den = den.as_ref();
                // each worker owns its evolver (kernels hold scratch buffers)
                let ev = evolver.clone();
                scope.spawn(move || part.iter().map(|&b| sweep_row(cfg, b, den, ev.as_ref())).collect::<Vec<_>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let mut body = String::from("beta,mass,energy,me,g,x0,criterion,verdict,dynamic\n");
    for r in &rows {
        body.push_str(&r.csv());
    }
    let dir = out_dir(cfg, opts)?;
    let mut files = Vec::new();
    let stdout = write_csv(&dir, "sweep.csv", &header_lines(cfg, "sweep"), &body, &mut files)?;
    Ok(CommandOutput { stdout, files })
}

/// Dispatches a command by name.
pub fn run_command(name: &str, cfg: &RunConfig, opts: &Options) -> Result<CommandOutput> {
    match name {
        "params" => cmd_params(cfg, opts),
        "groundstate" => cmd_groundstate(cfg, opts),
        "thresholds" => cmd_thresholds(cfg, opts),
        "classify" => cmd_classify(cfg, opts),
        "evolve" => cmd_evolve(cfg, opts),
        "sweep" => cmd_sweep(cfg, opts),
        other => Err(GhError::Config(format!("unknown command {other:?}"))),
    }
}

/// `2` for configuration problems, `3` for numerical failures.
pub fn exit_code(err: &GhError) -> i32 {
    match err {
        GhError::InvalidParams(_)
        | GhError::OutOfRange(_)
        | GhError::InvalidGrid(_)
        | GhError::KernelMismatch(_)
        | GhError::WrongRegime { .. }
        | GhError::Unsupported(_)
        | GhError::Config(_)
        | GhError::Format(_)
        | GhError::Io(_)
        | GhError::Json(_) => 2,
        GhError::Domain(_)
        | GhError::PoisonedField { .. }
        | GhError::NonpositiveEnergy(_)
        | GhError::NoConvergence { .. }
        | GhError::Divergence(_)
        | GhError::Unconverged { .. }
        | GhError::NoRoot { .. }
        | GhError::InsufficientSamples(_) => 3,
    }
}

/// Machine-readable error line for stderr.
pub fn error_json(err: &GhError) -> String {
    let kind = match err {
        GhError::InvalidParams(_) => "invalid-params",
        GhError::OutOfRange(_) => "out-of-range",
        GhError::Domain(_) => "domain",
        GhError::InvalidGrid(_) => "invalid-grid",
        GhError::PoisonedField { .. } => "poisoned-field",
        GhError::KernelMismatch(_) => "kernel-mismatch",
        GhError::WrongRegime { .. } => "wrong-regime",
        GhError::NonpositiveEnergy(_) => "nonpositive-energy",
        GhError::NoConvergence { .. } => "no-convergence",
        GhError::Divergence(_) => "divergence",
        GhError::Unconverged { .. } => "unconverged",
        GhError::NoRoot { .. } => "no-root",
        GhError::InsufficientSamples(_) => "insufficient-samples",
        GhError::Unsupported(_) => "unsupported",
        GhError::Format(_) => "format",
        GhError::Config(_) => "config",
        GhError::Io(_) => "io",
        GhError::Json(_) => "json",
    };
    json!({ "error": kind, "message": err.to_string(), "exit_code": exit_code(err) }).to_string()
}
