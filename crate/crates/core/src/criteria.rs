//! Analytic classification of initial data: the variance blow-up criterion
//! and its particle-mechanics form, the normalized mass-energy and gradient
//! functionals, the global-existence/blow-up dichotomy, and Gaussian-data
//! thresholds.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::eqparams::{classify, Criticality, EquationParams, CLASS_TOL};
use crate::error::{GhError, Result};
use crate::groundstate::{critical_constants, GroundStateResult};
use crate::numerics::bisect;

/// Bracket searched by [`threshold_solve`] in the scale-invariant amplitude.
pub const THRESHOLD_BRACKET: (f64, f64) = (1e-3, 10.0);
/// Absolute tolerance of [`threshold_solve`].
pub const THRESHOLD_TOL: f64 = 1e-8;
/// Band treated as equality when comparing the particle energy with `Ũ_max`.
const EQUALITY_TOL: f64 = 1e-12;

/// `f(x) = ±sqrt(1/(k x^k) + x - (1+k)/k)`, `+` for `x < 1`, `-` for `x >= 1`.
pub fn f_threshold(x: f64, k: f64) -> Result<f64> {
    if !(x > 0.0) || !(k > 0.0) || !x.is_finite() || !k.is_finite() {
        return Err(GhError::Domain(format!("f needs x > 0 and k > 0, got x = {x}, k = {k}")));
    }
    let mut radicand = f_radicand(x, k);
    if radicand < 0.0 {
        if radicand < -1e-14 {
            return Err(GhError::Domain(format!("negative radicand {radicand:e} at x = {x}")));
        }
        radicand = 0.0;
    }
    let root = radicand.sqrt();
    Ok(if x < 1.0 { root } else { -root })
}

/// `1/(k x^k) + x - (1+k)/k`, nonnegative with its only zero at `x = 1`.
pub fn f_radicand(x: f64, k: f64) -> f64 {
    1.0 / (k * x.powf(k)) + x - (1.0 + k) / k
}

/// `ω² = N²(N(p-2)+b-2) / (8(N(p-2)+b))`
pub fn omega_sq(params: &EquationParams) -> f64 {
    let n = params.dim as f64;
    let s = n * (params.p - 2.0) + params.b;
    n * n * (s - 2.0) / (8.0 * s)
}

/// Data entering the variance criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionInput {
    pub mass: f64,
    pub energy: f64,
    pub variance0: f64,
    pub variance_rate0: f64,
    pub params: EquationParams,
}

impl CriterionInput {
    fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.mass > 0.0) || !(self.variance0 > 0.0) {
            return Err(GhError::InvalidParams(format!(
                "criterion needs positive mass and variance, got M = {}, V(0) = {}",
                self.mass, self.variance0
            )));
        }
        if !self.energy.is_finite() || !self.variance_rate0.is_finite() {
            return Err(GhError::InvalidParams("non-finite energy or variance rate".into()));
        }
        Ok(())
    }
}

/// Normalized variables of the comparison ODE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanicsState {
    pub omega: f64,
    pub k: f64,
    pub alpha: f64,
    /// `E V(0) / (ωM)²`, the initial `Ṽ`.
    pub x0: f64,
    /// `V_t(0) / (ωM)`
    pub slope0: f64,
    pub u_tilde_max: f64,
}

impl MechanicsState {
    /// `dṼ/ds(0) = slope0 / 4√2` in the time `s = 4√2 E t / (ωM)`.
    pub fn v_tilde_rate(&self) -> f64 {
        self.slope0 / (4.0 * 2f64.sqrt())
    }

    /// Particle position `v(0) = Ṽ(0)^{α+1}`.
    pub fn position(&self) -> f64 {
        self.x0.powf(self.alpha + 1.0)
    }

    /// Particle velocity `v_s(0) = (α+1) Ṽ^α Ṽ_s`.
    pub fn velocity(&self) -> f64 {
        (self.alpha + 1.0) * self.x0.powf(self.alpha) * self.v_tilde_rate()
    }

    /// `c = (α+1)(2α+1)/2`
    pub fn stiffness(&self) -> f64 {
        (self.alpha + 1.0) * (2.0 * self.alpha + 1.0) / 2.0
    }

    /// `𝓔(0) = v_s²/(2c) + Ũ(v)`
    pub fn particle_energy(&self) -> f64 {
        self.velocity().powi(2) / (2.0 * self.stiffness()) + u_tilde(self.position(), self.alpha)
    }
}

/// `Ũ(v) = ((α+1)/2α) v^{2α/(α+1)} - ((α+1)/(2α+1)) v^{(2α+1)/(α+1)}`
pub fn u_tilde(v: f64, alpha: f64) -> f64 {
    let a1 = alpha + 1.0;
    a1 / (2.0 * alpha) * v.powf(2.0 * alpha / a1) - a1 / (2.0 * alpha + 1.0) * v.powf((2.0 * alpha + 1.0) / a1)
}

/// `Ũ_max = (α+1) / (2α(2α+1))`, attained at `v = 1`.
pub fn u_tilde_max(alpha: f64) -> f64 {
    (alpha + 1.0) / (2.0 * alpha * (2.0 * alpha + 1.0))
}

/// Verdict of the variance criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub holds: bool,
    pub f_value: f64,
    pub state: MechanicsState,
}

/// Sufficient condition for finite-time blow-up of finite-variance data
/// with positive energy: `V_t(0)/(ωM) < 4√2 f(E V(0)/(ωM)²)`.
pub fn blowup_criterion(input: &CriterionInput) -> Result<CriterionOutcome> {
    input.validate()?;
    let report = classify(&input.params)?;
    if report.s_c <= CLASS_TOL {
        return Err(GhError::WrongRegime {
            expected: "mass-supercritical (s_c > 0)",
            s_c: report.s_c,
        });
    }
    if input.energy <= 0.0 {
        return Err(GhError::NonpositiveEnergy(input.energy));
    }
    let omega = omega_sq(&input.params).sqrt();
    let om = omega * input.mass;
    let state = MechanicsState {
        omega,
        k: report.k,
        alpha: report.alpha,
        x0: input.energy * input.variance0 / (om * om),
        slope0: input.variance_rate0 / om,
        u_tilde_max: u_tilde_max(report.alpha),
    };
    let f_value = f_threshold(state.x0, state.k)?;
    Ok(CriterionOutcome {
        holds: state.slope0 < 4.0 * 2f64.sqrt() * f_value,
        f_value,
        state,
    })
}

/// Real-data form of the criterion, `V(0) < (ωM)²/E`.
pub fn blowup_criterion_real(input: &CriterionInput) -> Result<bool> {
    let outcome = blowup_criterion(input)?;
    let om = outcome.state.omega * input.mass;
    Ok(input.variance0 < om * om / input.energy)
}

/// Which of the particle blow-up conditions fire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MechanicsConditions {
    /// `𝓔(0) < Ũ_max` and `v(0) < 1`
    pub below_barrier: bool,
    /// `𝓔(0) > Ũ_max` and `v_s(0) < 0`
    pub over_barrier_inward: bool,
    /// `𝓔(0) = Ũ_max`, `v_s(0) < 0` and `v(0) < 1`
    pub on_barrier_inward: bool,
}

impl MechanicsConditions {
    pub fn any(&self) -> bool {
        self.below_barrier || self.over_barrier_inward || self.on_barrier_inward
    }

    pub fn tags(&self) -> Vec<&'static str> {
        let mut t = Vec::new();
        if self.below_barrier {
            t.push("I");
        }
        if self.over_barrier_inward {
            t.push("II");
        }
        if self.on_barrier_inward {
            t.push("III");
        }
        t
    }
}

/// Evaluates the three particle conditions from `𝓔(0)`, `v(0)`, `v_s(0)`.
pub fn mechanics_conditions(state: &MechanicsState) -> Result<MechanicsConditions> {
    if !(state.alpha > 0.0) || !(state.x0 > 0.0) || !state.slope0.is_finite() {
        return Err(GhError::Domain(format!(
            "mechanics needs α > 0 and Ṽ(0) > 0, got α = {}, Ṽ(0) = {}",
            state.alpha, state.x0
        )));
    }
    let energy = state.particle_energy();
    let barrier = u_tilde_max(state.alpha);
    let v = state.position();
    let vs = state.velocity();
    let gap = energy - barrier;
    let band = EQUALITY_TOL * barrier;
    Ok(MechanicsConditions {
        below_barrier: gap < -band && v < 1.0,
        over_barrier_inward: gap > band && vs < 0.0,
        on_barrier_inward: gap.abs() <= band && vs < 0.0 && v < 1.0,
    })
}

/// Normalizing denominators of the mass-energy and gradient functionals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Denominators {
    /// `M[Q]^{(1-s_c)/s_c} E[Q]` (or `E[Q]` when `s_c = 1`).
    pub mass_energy: f64,
    /// `‖Q‖^{(1-s_c)/s_c} ‖∇Q‖` (or `‖∇Q‖` when `s_c = 1`).
    pub mass_gradient: f64,
}

impl Denominators {
    /// From the sharp Gagliardo-Nirenberg constant, intercritical case.
    pub fn from_gn_constant(params: &EquationParams, c_gn: f64) -> Result<Self> {
        let r = intercritical(params)?;
        let g = (params.p / c_gn / (r.k + 1.0)).powf(1.0 / (2.0 * r.k));
        Ok(Denominators {
            mass_energy: r.k / (2.0 * r.k + 2.0) * g * g,
            mass_gradient: g,
        })
    }

    /// From a converged ground state.
    pub fn from_ground_state(ground: &GroundStateResult) -> Result<Self> {
        let c = crate::groundstate::sharp_gn_constant(ground)?;
        Self::from_gn_constant(&ground.params, c)
    }

    /// From the closed-form energy-critical constants.
    pub fn energy_critical(params: &EquationParams) -> Result<Self> {
        let r = classify(params)?;
        if r.class != Criticality::EnergyCritical {
            return Err(GhError::WrongRegime {
                expected: "energy-critical (s_c = 1)",
                s_c: r.s_c,
            });
        }
        let c = critical_constants(params.dim, params.b)?;
        Ok(Denominators {
            mass_energy: c.energy_q_critical,
            mass_gradient: c.grad_q_sq_critical.sqrt(),
        })
    }

    /// Whichever applies to `params`, using `ground` in the intercritical case.
    pub fn for_params(params: &EquationParams, ground: Option<&GroundStateResult>) -> Result<Self> {
        let r = classify(params)?;
        match r.class {
            Criticality::EnergyCritical => Self::energy_critical(params),
            Criticality::Intercritical => match ground {
                Some(g) => Self::from_ground_state(g),
                None => Err(GhError::InvalidParams(
                    "intercritical normalization needs a ground state".into(),
                )),
            },
            _ => Err(GhError::WrongRegime {
                expected: "0 < s_c <= 1",
                s_c: r.s_c,
            }),
        }
    }
}

fn intercritical(params: &EquationParams) -> Result<crate::eqparams::CriticalityReport> {
    let r = classify(params)?;
    if r.class != Criticality::Intercritical {
        return Err(GhError::WrongRegime {
            expected: "intercritical (0 < s_c < 1)",
            s_c: r.s_c,
        });
    }
    Ok(r)
}

/// `(ME[u], G[u])` for intercritical parameters.
pub fn me_g_functionals(
    mass: f64,
    energy: f64,
    grad_sq: f64,
    den: &Denominators,
    params: &EquationParams,
) -> Result<(f64, f64)> {
    let r = intercritical(params)?;
    let e = (1.0 - r.s_c) / r.s_c;
    let me = mass.powf(e) * energy / den.mass_energy;
    let g = mass.sqrt().powf(e) * grad_sq.sqrt() / den.mass_gradient;
    Ok((me, g))
}

/// `(E[u]/E[Q], ‖∇u‖/‖∇Q‖)` for energy-critical parameters.
pub fn energy_critical_functionals(
    energy: f64,
    grad_sq: f64,
    den: &Denominators,
) -> (f64, f64) {
    (energy / den.mass_energy, grad_sq.sqrt() / den.mass_gradient)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    GlobalScatteringRegime,
    BlowupRegime,
    CriterionBlowup,
    NegativeEnergyBlowup,
    Undetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::GlobalScatteringRegime => "global-scattering-regime",
            Verdict::BlowupRegime => "blowup-regime",
            Verdict::CriterionBlowup => "criterion-blowup",
            Verdict::NegativeEnergyBlowup => "negative-energy-blowup",
            Verdict::Undetermined => "undetermined",
        };
        f.write_str(s)
    }
}

/// Everything known about one initial datum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyInput {
    pub criterion: CriterionInput,
    pub grad_sq: f64,
    /// `|x| u_0 ∈ L²`
    pub finite_variance: bool,
    pub radial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub class: Criticality,
    /// `ME[u]` (intercritical) or `E[u]/E[Q]` (energy-critical).
    pub me_value: Option<f64>,
    pub g_value: Option<f64>,
    pub criterion: Option<CriterionOutcome>,
    pub verdict: Verdict,
    pub clauses_fired: Vec<String>,
}

/// Combines the dichotomy, the variance criterion and the negative-energy
/// clause into one verdict with the clauses that fired.
///
/// `den` is required for `0 < s_c <= 1`; for `s_c > 1` only the criterion
/// and negative-energy clauses exist.
pub fn dichotomy_classify(input: &ClassifyInput, den: Option<&Denominators>) -> Result<ClassificationReport> {
    let c = &input.criterion;
    c.validate()?;
    let params = &c.params;
    let r = classify(params)?;
    if r.s_c <= CLASS_TOL {
        return Err(GhError::WrongRegime {
            expected: "mass-supercritical (s_c > 0)",
            s_c: r.s_c,
        });
    }
    let localized = input.finite_variance || input.radial;
    let mut clauses = Vec::new();
    let mut verdict = Verdict::Undetermined;

    let (me_value, g_value) = match r.class {
        Criticality::Intercritical | Criticality::EnergyCritical => {
            let den = den.ok_or_else(|| {
                GhError::InvalidParams("ground-state normalization required for s_c <= 1".into())
            })?;
            let (me, g) = if r.class == Criticality::Intercritical {
                me_g_functionals(c.mass, c.energy, input.grad_sq, den, params)?
            } else {
                energy_critical_functionals(c.energy, input.grad_sq, den)
            };
            if me < 1.0 {
                clauses.push("energy-below-ground-state".to_string());
                if g < 1.0 {
                    clauses.push("gradient-below-ground-state".to_string());
                    verdict = Verdict::GlobalScatteringRegime;
                } else if g > 1.0 {
                    clauses.push("gradient-above-ground-state".to_string());
                    if localized {
                        clauses.push("finite-variance-or-radial".to_string());
                        verdict = Verdict::BlowupRegime;
                    } else if r.class == Criticality::Intercritical {
                        clauses.push("blowup-or-gradient-unbounded".to_string());
                    } else {
                        clauses.push("infinite-variance-open".to_string());
                    }
                }
            }
            (Some(me), Some(g))
        }
        _ => (None, None),
    };

    let mut criterion = None;
    if c.energy <= 0.0 {
        if localized {
            clauses.push("negative-energy".to_string());
            verdict = Verdict::NegativeEnergyBlowup;
        }
    } else if input.finite_variance {
        let outcome = blowup_criterion(c)?;
        if outcome.holds {
            clauses.push("variance-criterion".to_string());
            if verdict == Verdict::Undetermined {
                verdict = Verdict::CriterionBlowup;
            }
        }
        criterion = Some(outcome);
    }

    Ok(ClassificationReport {
        class: r.class,
        me_value,
        g_value,
        criterion,
        verdict,
        clauses_fired: clauses,
    })
}

/// Which energy formula to use for Gaussian data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyModel {
    /// Exact Gaussian integral of `Z`, valid for every `(N, p, b)`.
    Exact,
    /// The displayed per-case formulas for `(3,3,1)`, `(3,5,1)`, `(3,7,1)`
    /// and `(4,3,2)`; falls back to `Exact` elsewhere.
    Published,
}

/// Closed-form observables of `β e^{-γ|x|²/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianObservables {
    pub input: CriterionInput,
    pub grad_sq: f64,
    pub z_value: f64,
}

/// `Z(β e^{-γ|x|²/2})` in closed form.
pub fn gaussian_z(beta: f64, gamma_: f64, params: &EquationParams) -> f64 {
    let n = params.dim as f64;
    let b = params.b;
    let a = params.p * gamma_ / 2.0;
    beta.powf(2.0 * params.p)
        * (PI / (2.0 * a)).powf(n / 2.0)
        * PI.powf(n / 2.0)
        / gamma(n / 2.0)
        * (2.0 / a).powf((n - b) / 2.0)
        * gamma((n - b) / 2.0)
}

fn same(params: &EquationParams, dim: usize, p: f64, b: f64) -> bool {
    params.dim == dim && params.p == p && params.b == b
}

/// Displayed energy formula for the worked parameter sets.
fn published_energy(beta: f64, g: f64, params: &EquationParams) -> Option<f64> {
    let subcrit = |pow: i32, denom: f64| {
        PI.powf(1.5) / 4.0 * beta * beta / g.sqrt() * (3.0 - 16.0 * PI / denom.powf(3.5) * beta.powi(pow) / (g * g))
    };
    if same(params, 3, 3.0, 1.0) {
        Some(subcrit(4, 3.0))
    } else if same(params, 3, 5.0, 1.0) {
        Some(subcrit(8, 5.0))
    } else if same(params, 3, 7.0, 1.0) {
        Some(subcrit(12, 7.0))
    } else if same(params, 4, 3.0, 2.0) {
        Some(PI * PI * beta * beta / g * (1.0 - PI * PI / 81.0 * beta.powi(4) / (g * g)))
    } else {
        None
    }
}

/// Mass, variance, gradient norm and energy of Gaussian data.
pub fn gaussian_observables(
    beta: f64,
    gamma_: f64,
    params: &EquationParams,
    model: EnergyModel,
) -> Result<GaussianObservables> {
    params.validate()?;
    if !(beta > 0.0 && gamma_ > 0.0) || !beta.is_finite() || !gamma_.is_finite() {
        return Err(GhError::InvalidParams(format!(
            "Gaussian needs β, γ > 0, got β = {beta}, γ = {gamma_}"
        )));
    }
    let n = params.dim as f64;
    let pin = PI.powf(n / 2.0);
    let mass = beta * beta * (PI / gamma_).powf(n / 2.0);
    let variance0 = beta * beta * n * pin / (2.0 * gamma_.powf(n / 2.0 + 1.0));
    let grad_sq = n * pin / 2.0 * beta * beta / gamma_.powf((n - 2.0) / 2.0);
    let z_value = gaussian_z(beta, gamma_, params);
    let exact = 0.5 * grad_sq - z_value / (2.0 * params.p);
    let energy = match model {
        EnergyModel::Exact => exact,
        EnergyModel::Published => published_energy(beta, gamma_, params).unwrap_or(exact),
    };
    Ok(GaussianObservables {
        input: CriterionInput {
            mass,
            energy,
            variance0,
            variance_rate0: 0.0,
            params: *params,
        },
        grad_sq,
        z_value,
    })
}

/// Exponent `e` with `β/γ^e` invariant under the equation's scaling.
pub fn scale_exponent(params: &EquationParams) -> f64 {
    (params.dim as f64 - params.b + 2.0) / (4.0 * (params.p - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdKind {
    /// `E < 0` above.
    NegativeEnergy,
    /// Real-data variance criterion holds above.
    CriterionBlowup,
    /// Lower root of `ME = 1`.
    MeLower,
    /// Upper root of `ME = 1`.
    MeUpper,
    /// `G = 1`.
    Gradient,
    /// Lower root of `E/E[Q] = 1`.
    EnergyCriticalLower,
    /// Upper root of `E/E[Q] = 1`.
    EnergyCriticalUpper,
}

impl ThresholdKind {
    pub const ALL: [ThresholdKind; 7] = [
        ThresholdKind::NegativeEnergy,
        ThresholdKind::CriterionBlowup,
        ThresholdKind::MeLower,
        ThresholdKind::MeUpper,
        ThresholdKind::Gradient,
        ThresholdKind::EnergyCriticalLower,
        ThresholdKind::EnergyCriticalUpper,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ThresholdKind::NegativeEnergy => "negative-energy",
            ThresholdKind::CriterionBlowup => "criterion-blowup",
            ThresholdKind::MeLower => "me-lower",
            ThresholdKind::MeUpper => "me-upper",
            ThresholdKind::Gradient => "gradient",
            ThresholdKind::EnergyCriticalLower => "energy-critical-lower",
            ThresholdKind::EnergyCriticalUpper => "energy-critical-upper",
        }
    }

    /// Kinds meaningful for a criticality class.
    pub fn applicable(class: Criticality) -> Vec<ThresholdKind> {
        use ThresholdKind::*;
        match class {
            Criticality::Intercritical => vec![NegativeEnergy, CriterionBlowup, MeLower, MeUpper, Gradient],
            Criticality::EnergyCritical => vec![
                NegativeEnergy,
                CriterionBlowup,
                EnergyCriticalLower,
                EnergyCriticalUpper,
                Gradient,
            ],
            Criticality::EnergySupercritical => vec![NegativeEnergy, CriterionBlowup],
            _ => vec![],
        }
    }
}

impl std::str::FromStr for ThresholdKind {
    type Err = GhError;
    fn from_str(s: &str) -> Result<Self> {
        ThresholdKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GhError::InvalidParams(format!("unknown threshold kind {s}")))
    }
}

/// Signed condition whose sign change in `β` (at `γ = 1`) defines the
/// threshold; positive below the threshold.
pub fn threshold_condition(
    kind: ThresholdKind,
    beta: f64,
    params: &EquationParams,
    den: Option<&Denominators>,
    model: EnergyModel,
) -> Result<f64> {
    let g = gaussian_observables(beta, 1.0, params, model)?;
    let c = &g.input;
    let need_den = || {
        den.ok_or_else(|| GhError::InvalidParams(format!("{} threshold needs ground-state data", kind.name())))
    };
    Ok(match kind {
        ThresholdKind::NegativeEnergy => c.energy,
        ThresholdKind::CriterionBlowup => {
            let om = omega_sq(params).sqrt() * c.mass;
            c.variance0 * c.energy - om * om
        }
        ThresholdKind::MeLower | ThresholdKind::MeUpper => {
            let (me, _) = me_g_functionals(c.mass, c.energy, g.grad_sq, need_den()?, params)?;
            let v = 1.0 - me;
            if kind == ThresholdKind::MeLower { v } else { -v }
        }
        ThresholdKind::EnergyCriticalLower | ThresholdKind::EnergyCriticalUpper => {
            let (e, _) = energy_critical_functionals(c.energy, g.grad_sq, need_den()?);
            let v = 1.0 - e;
            if kind == ThresholdKind::EnergyCriticalLower { v } else { -v }
        }
        ThresholdKind::Gradient => {
            let r = classify(params)?;
            let gv = if r.class == Criticality::EnergyCritical {
                energy_critical_functionals(c.energy, g.grad_sq, need_den()?).1
            } else {
                me_g_functionals(c.mass, c.energy, g.grad_sq, need_den()?, params)?.1
            };
            1.0 - gv
        }
    })
}

/// Amplitude at which the energy-type functional peaks (at `γ = 1`);
/// separates the lower and upper roots.
fn energy_peak(params: &EquationParams, model: EnergyModel) -> Result<f64> {
    let r = classify(params)?;
    // E(β) = A β² - B β^{2p}; the functional is β^m E with m = 2(1-s_c)/s_c
    let a = gaussian_observables(1.0, 1.0, params, model)?;
    let big_a = 0.5 * a.grad_sq;
    let big_b = big_a - a.input.energy;
    let m = if r.class == Criticality::Intercritical {
        2.0 * (1.0 - r.s_c) / r.s_c
    } else {
        0.0
    };
    Ok((big_a * (m + 2.0) / (big_b * (m + 2.0 * params.p))).powf(1.0 / (2.0 * params.p - 2.0)))
}

/// Threshold in the scale-invariant amplitude `β/γ^e`, by bisection on
/// [`THRESHOLD_BRACKET`] to [`THRESHOLD_TOL`].
pub fn threshold_solve(
    kind: ThresholdKind,
    params: &EquationParams,
    den: Option<&Denominators>,
    model: EnergyModel,
) -> Result<f64> {
    let (lo, hi) = THRESHOLD_BRACKET;
    let f = |beta: f64| threshold_condition(kind, beta, params, den, model).unwrap_or(f64::NAN);
    // evaluate once up front so configuration errors surface as such
    threshold_condition(kind, 1.0, params, den, model)?;
    let (a, b) = match kind {
        ThresholdKind::MeLower | ThresholdKind::EnergyCriticalLower => (lo, energy_peak(params, model)?.clamp(lo, hi)),
        ThresholdKind::MeUpper | ThresholdKind::EnergyCriticalUpper => (energy_peak(params, model)?.clamp(lo, hi), hi),
        _ => (lo, hi),
    };
    bisect(f, a, b, THRESHOLD_TOL).map_err(|_| GhError::NoRoot { lo: a, hi: b })
}

/// Every applicable threshold; kinds without a root are omitted.
pub fn all_thresholds(
    params: &EquationParams,
    den: Option<&Denominators>,
    model: EnergyModel,
) -> Result<BTreeMap<String, f64>> {
    let class = classify(params)?.class;
    let mut out = BTreeMap::new();
    for kind in ThresholdKind::applicable(class) {
        if den.is_none() && !matches!(kind, ThresholdKind::NegativeEnergy | ThresholdKind::CriterionBlowup) {
            continue;
        }
        match threshold_solve(kind, params, den, model) {
            Ok(v) => {
                out.insert(kind.name().to_string(), v);
            }
            Err(GhError::NoRoot { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Machine-readable classification of one datum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub params: EquationParams,
    pub inputs: CriterionInput,
    pub me: Option<f64>,
    pub g: Option<f64>,
    pub omega: f64,
    pub k: f64,
    pub x0: Option<f64>,
    pub f_value: Option<f64>,
    pub verdict: Verdict,
    pub clauses: Vec<String>,
    pub thresholds: BTreeMap<String, f64>,
}

impl JsonReport {
    pub fn new(input: &ClassifyInput, report: &ClassificationReport, thresholds: BTreeMap<String, f64>) -> Result<Self> {
        let params = input.criterion.params;
        Ok(JsonReport {
            params,
            inputs: input.criterion,
            me: report.me_value,
            g: report.g_value,
            omega: omega_sq(&params).sqrt(),
            k: classify(&params)?.k,
            x0: report.criterion.map(|c| c.state.x0),
            f_value: report.criterion.map(|c| c.f_value),
            verdict: report.verdict,
            clauses: report.clauses_fired.clone(),
            thresholds,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(dim: usize, p: f64, b: f64) -> EquationParams {
        EquationParams::new(dim, p, b).unwrap()
    }

    #[test]
    fn f_values() {
        for k in [0.3, 1.0, 4.0] {
            assert_eq!(f_threshold(1.0, k).unwrap(), 0.0);
        }
        assert!((f_threshold(4.0, 1.0).unwrap() + 1.5).abs() < 1e-15);
        assert!((f_threshold(0.25, 1.0).unwrap() - 1.5).abs() < 1e-15);
        assert!(f_threshold(0.0, 1.0).is_err());
        assert!(f_threshold(1.0, 0.0).is_err());
        assert!(f_threshold(-1.0, 1.0).is_err());
    }

    #[test]
    fn radicand_is_nonnegative_on_log_grid() {
        for k in [0.1, 0.5, 1.0, 4.0, 14.0 / 3.0] {
            for i in 0..=600 {
                let x = 10f64.powf(-3.0 + i as f64 / 100.0);
                assert!(f_radicand(x, k) >= -1e-14, "k {k} x {x}");
            }
            // continuity at 1
            assert!(f_threshold(1.0 - 1e-9, k).unwrap() < 1e-6);
            assert!(f_threshold(1.0 + 1e-9, k).unwrap() > -1e-6);
        }
    }

    #[test]
    fn omega_for_worked_cases() {
        assert!((omega_sq(&params(3, 3.0, 1.0)) - 9.0 / 16.0).abs() < 1e-15);
        assert!((omega_sq(&params(3, 5.0, 1.0)) - 0.9).abs() < 1e-15);
        assert!((omega_sq(&params(4, 3.0, 2.0)) - 4.0 / 3.0).abs() < 1e-15);
        assert!((omega_sq(&params(3, 7.0, 1.0)) - 63.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn u_tilde_barrier() {
        assert!((u_tilde_max(0.5) - 0.75).abs() < 1e-15);
        for alpha in [0.25, 0.5, 2.0] {
            assert!((u_tilde(1.0, alpha) - u_tilde_max(alpha)).abs() < 1e-14);
            assert!(u_tilde(0.9, alpha) < u_tilde_max(alpha));
            assert!(u_tilde(1.1, alpha) < u_tilde_max(alpha));
        }
        let state = MechanicsState {
            omega: 0.75,
            k: 1.0,
            alpha: 0.5,
            x0: 1.0,
            slope0: 0.0,
            u_tilde_max: 0.75,
        };
        assert!(!mechanics_conditions(&state).unwrap().any());
    }

    #[test]
    fn criterion_regimes() {
        let mass_critical = CriterionInput {
            mass: 1.0,
            energy: 1.0,
            variance0: 1.0,
            variance_rate0: 0.0,
            params: params(3, 2.0, 2.0),
        };
        assert!(matches!(blowup_criterion(&mass_critical), Err(GhError::WrongRegime { .. })));
        let negative = CriterionInput {
            energy: -1.0,
            params: params(3, 3.0, 1.0),
            ..mass_critical
        };
        assert!(matches!(blowup_criterion(&negative), Err(GhError::NonpositiveEnergy(_))));
    }

    #[test]
    fn subcritical_criterion_threshold() {
        let p = params(3, 3.0, 1.0);
        let t = threshold_solve(ThresholdKind::CriterionBlowup, &p, None, EnergyModel::Exact).unwrap();
        let closed = 3f64.powf(9.0 / 8.0) / (2f64.powf(1.25) * PI.powf(0.25));
        assert!((t - closed).abs() < 1e-7);
        let below = gaussian_observables(0.99 * t, 1.0, &p, EnergyModel::Exact).unwrap();
        let above = gaussian_observables(1.01 * t, 1.0, &p, EnergyModel::Exact).unwrap();
        assert!(!blowup_criterion(&below.input).unwrap().holds);
        assert!(blowup_criterion(&above.input).unwrap().holds);
        let e = threshold_solve(ThresholdKind::NegativeEnergy, &p, None, EnergyModel::Exact).unwrap();
        assert!((e - 3f64.powf(9.0 / 8.0) / (2.0 * PI.powf(0.25))).abs() < 1e-7);
    }

    #[test]
    fn published_energy_matches_exact_in_three_dimensions() {
        for p in [params(3, 3.0, 1.0), params(3, 5.0, 1.0), params(3, 7.0, 1.0)] {
            for (beta, g) in [(0.7, 1.0), (1.2, 0.5), (1.0, 2.0)] {
                let a = gaussian_observables(beta, g, &p, EnergyModel::Exact).unwrap();
                let b = gaussian_observables(beta, g, &p, EnergyModel::Published).unwrap();
                assert!((a.input.energy - b.input.energy).abs() < 1e-12 * a.grad_sq);
            }
        }
    }

    #[test]
    fn energy_critical_thresholds_3d() {
        let p = params(3, 5.0, 1.0);
        let den = Denominators::energy_critical(&p).unwrap();
        let get = |k| threshold_solve(k, &p, Some(&den), EnergyModel::Published).unwrap();
        assert!((get(ThresholdKind::NegativeEnergy) - 1.42161).abs() < 1e-5);
        assert!((get(ThresholdKind::CriterionBlowup) - 1.16254).abs() < 1e-5);
        assert!((get(ThresholdKind::EnergyCriticalLower) - 0.812225).abs() < 1e-6);
        assert!((get(ThresholdKind::EnergyCriticalUpper) - 1.34423).abs() < 1e-5);
        assert!((get(ThresholdKind::Gradient) - 0.902925).abs() < 1e-6);
    }

    #[test]
    fn supercritical_has_only_two_thresholds() {
        let p = params(3, 7.0, 1.0);
        let t = all_thresholds(&p, None, EnergyModel::Published).unwrap();
        assert_eq!(t.len(), 2);
        assert!((t["negative-energy"] - 1.3946799).abs() < 1e-6);
        assert!((t["criterion-blowup"] - 1.17278).abs() < 1e-5);
        assert!(t["negative-energy"] > t["criterion-blowup"]);
    }

    #[test]
    fn classification_of_supercritical_data() {
        let p = params(3, 7.0, 1.0);
        let classify_beta = |beta: f64| {
            let g = gaussian_observables(beta, 1.0, &p, EnergyModel::Exact).unwrap();
            let input = ClassifyInput {
                criterion: g.input,
                grad_sq: g.grad_sq,
                finite_variance: true,
                radial: true,
            };
            dichotomy_classify(&input, None).unwrap()
        };
        assert_eq!(classify_beta(0.5).verdict, Verdict::Undetermined);
        assert_eq!(classify_beta(1.3).verdict, Verdict::CriterionBlowup);
        assert_eq!(classify_beta(1.5).verdict, Verdict::NegativeEnergyBlowup);
        assert!(classify_beta(1.3).me_value.is_none());
    }

    #[test]
    fn json_report_schema() {
        let p = params(3, 7.0, 1.0);
        let g = gaussian_observables(1.3, 1.0, &p, EnergyModel::Exact).unwrap();
        let input = ClassifyInput {
            criterion: g.input,
            grad_sq: g.grad_sq,
            finite_variance: true,
            radial: true,
        };
        let report = dichotomy_classify(&input, None).unwrap();
        let thresholds = all_thresholds(&p, None, EnergyModel::Exact).unwrap();
        let json = serde_json::to_value(JsonReport::new(&input, &report, thresholds).unwrap()).unwrap();
        for key in ["params", "inputs", "me", "g", "omega", "k", "x0", "f_value", "verdict", "clauses", "thresholds"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["verdict"], "criterion-blowup");
    }

    proptest! {
        #[test]
        fn criterion_equals_mechanics(
            mass in 0.1f64..50.0,
            energy in 0.01f64..50.0,
            variance in 0.01f64..100.0,
            rate in -100.0f64..100.0,
            which in 0usize..4,
        ) {
            let p = [params(3, 3.0, 1.0), params(3, 5.0, 1.0), params(4, 3.0, 2.0), params(3, 7.0, 1.0)][which];
            let input = CriterionInput { mass, energy, variance0: variance, variance_rate0: rate, params: p };
            let out = blowup_criterion(&input).unwrap();
            prop_assert_eq!(out.holds, mechanics_conditions(&out.state).unwrap().any());
        }

        #[test]
        fn real_data_forms_agree(mass in 0.1f64..50.0, energy in 0.01f64..50.0, variance in 0.01f64..100.0) {
            let input = CriterionInput { mass, energy, variance0: variance, variance_rate0: 0.0, params: params(3, 3.0, 1.0) };
            prop_assert_eq!(blowup_criterion(&input).unwrap().holds, blowup_criterion_real(&input).unwrap());
        }

        #[test]
        fn barrier_equivalence(x in 0.01f64..10.0, vs in -5.0f64..5.0, alpha in 0.1f64..3.0) {
            // 𝓔 < Ũ_max  ⟺  Ṽ_s² < 1/(2αṼ^{2α}) + Ṽ - (2α+1)/(2α)
            let state = MechanicsState { omega: 1.0, k: 2.0 * alpha, alpha, x0: x, slope0: vs * 4.0 * 2f64.sqrt(), u_tilde_max: u_tilde_max(alpha) };
            let lhs = state.particle_energy() < u_tilde_max(alpha);
            let rhs = vs * vs < 1.0 / (2.0 * alpha * x.powf(2.0 * alpha)) + x - (2.0 * alpha + 1.0) / (2.0 * alpha);
            let margin = (vs * vs - f_radicand(x, 2.0 * alpha)).abs();
            prop_assume!(margin > 1e-9);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn criterion_is_scale_invariant(
            mass in 0.1f64..50.0,
            energy in 0.01f64..50.0,
            variance in 0.01f64..100.0,
            rate in -50.0f64..50.0,
            up in proptest::bool::ANY,
        ) {
            let p = params(3, 3.0, 1.0);
            let lambda: f64 = if up { 2.0 } else { 0.5 };
            let n = p.dim as f64;
            let a = p.scaling_exponent();
            let base = CriterionInput { mass, energy, variance0: variance, variance_rate0: rate, params: p };
            let scaled = CriterionInput {
                mass: lambda.powf(2.0 * a - n) * mass,
                energy: lambda.powf(2.0 * a + 2.0 - n) * energy,
                variance0: lambda.powf(2.0 * a - n - 2.0) * variance,
                variance_rate0: lambda.powf(2.0 * a - n) * rate,
                params: p,
            };
            let a0 = blowup_criterion(&base).unwrap();
            let a1 = blowup_criterion(&scaled).unwrap();
            prop_assume!((a0.state.slope0 - 4.0 * 2f64.sqrt() * a0.f_value).abs() > 1e-9);
            prop_assert_eq!(a0.holds, a1.holds);
        }
    }
}
