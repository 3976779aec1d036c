//! Time integration on the lens window.
//!
//! Everything is Strang splitting between two exact flows: the linear
//! oscillator phase in coefficient space, and the pointwise nonlinear phase
//! rotation with the coefficient `cos^{e_c}(2τ)` frozen at the substep
//! midpoint. Both substeps are `L²` isometries. Formulations:
//!
//! * `FullField` — the transformed equation for `w`, data `w(τ₀)`;
//! * `Remainder` — the equation for `v` forced by the free wave
//!   `ξ(τ) = e^{-iτH}u₀`, Cauchy data `v(0) = 0`; ξ is recomputed by exact
//!   phase multiplication each step, never stored;
//! * `Deterministic` — `FullField` with deterministic data and no draw;
//! * `Linear` — the nonlinearity switched off.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{analyze, synthesize, GridField, SpectralField};
use crate::propagator::linear_propagate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    FullField,
    Remainder,
    Deterministic,
    Linear,
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::FullField => "full_w",
            Self::Remainder => "remainder_v",
            Self::Deterministic => "deterministic",
            Self::Linear => "linear",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub n: usize,
    /// Nonlinearity power: the equation carries `|w|^{p-2} w`; `p = 4` is the
    /// cubic case.
    pub p: f64,
    pub dtau: f64,
    pub tau_span: (f64, f64),
    pub formulation: Formulation,
    /// A trajectory is flagged invalid when its `ℋ¹` norm exceeds this factor
    /// times the reference norm of the data.
    pub guard_factor: f64,
    /// Steps between stored checkpoints; `0` picks a stride aiming at ~1024
    /// checkpoints (dense enough for endpoint rate fits).
    pub checkpoint_stride: usize,
}

impl EvolutionConfig {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            p: 4.0,
            dtau: 1e-3,
            tau_span: (0.0, std::f64::consts::FRAC_PI_4),
            formulation: Formulation::FullField,
            guard_factor: 1e3,
            checkpoint_stride: 0,
        }
    }

    /// Exponent of the time-dependent coefficient, `(p-2)·n/2 − 2`; equals
    /// `n − 2` in the cubic case and vanishes at the mass-critical power
    /// `p = 2 + 4/n`.
    pub fn cos_exponent(&self) -> f64 {
        (self.p - 2.0) * self.n as f64 / 2.0 - 2.0
    }

    /// Whether `(n, p)` lies in the supported range `2 + 4/n ≤ p ≤ 4`.
    pub fn power_admissible(&self) -> bool {
        let lo = 2.0 + 4.0 / self.n as f64;
        self.p >= lo - 1e-12 && self.p <= 4.0 + 1e-12
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StepLogEntry {
    pub tau: f64,
    pub mass: f64,
    pub h1: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub config: EvolutionConfig,
    pub taus: Vec<f64>,
    pub states: Vec<SpectralField>,
    pub step_log: Vec<StepLogEntry>,
    pub valid: bool,
    pub invalid_reason: Option<String>,
}

impl Trajectory {
    pub fn final_tau(&self) -> f64 {
        *self.taus.last().expect("trajectory has checkpoints")
    }

    pub fn final_state(&self) -> &SpectralField {
        self.states.last().expect("trajectory has checkpoints")
    }

    pub fn checkpoint_near(&self, tau: f64) -> (f64, &SpectralField) {
        let (k, _) = self
            .taus
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| (*a - tau).abs().partial_cmp(&(*b - tau).abs()).unwrap())
            .unwrap();
        (self.taus[k], &self.states[k])
    }
}

fn h1_norm(f: &SpectralField) -> f64 {
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| f.basis().eigenvalue(k) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Exact solution of the frozen-coefficient nonlinear substep:
/// `z ↦ z · exp(-i · cos^{e_c}(2τ_mid) · |z|^{p-2} · Δτ)`. The pointwise
/// modulus is preserved exactly.
pub fn nonlinear_step(g: &GridField, tau_mid: f64, dtau: f64, cfg: &EvolutionConfig) -> GridField {
    let coef = (2.0 * tau_mid).cos().powf(cfg.cos_exponent());
    let cubic = (cfg.p - 4.0).abs() < 1e-12;
    let values = g
        .values()
        .iter()
        .map(|z| {
            let amp = if cubic {
                z.norm_sqr()
            } else {
                z.norm_sqr().powf((cfg.p - 2.0) / 2.0)
            };
            z * Complex64::from_polar(1.0, -coef * amp * dtau)
        })
        .collect();
    GridField::new(g.basis().clone(), values)
}

/// One Strang step: half linear phase, exact nonlinear rotation at the
/// midpoint, half linear phase. For the remainder formulation the rotation
/// acts on `ξ(τ_mid) + v` and the free wave is subtracted back out.
pub fn strang_step(
    state: &SpectralField,
    u0: Option<&SpectralField>,
    tau: f64,
    dtau: f64,
    cfg: &EvolutionConfig,
) -> Result<SpectralField> {
    let half = linear_propagate(state, dtau / 2.0);
    if cfg.formulation == Formulation::Linear {
        return Ok(linear_propagate(&half, dtau / 2.0));
    }
    let tau_mid = tau + dtau / 2.0;
    let rotated = match cfg.formulation {
        Formulation::Remainder => {
            let u0 = u0.ok_or_else(|| {
                Error::InvalidConfig("remainder formulation needs the draw u₀".into())
            })?;
            state.basis().check_same(u0.basis())?;
            let xi = synthesize(&linear_propagate(u0, tau_mid));
            let mut z = synthesize(&half);
            for (zv, xv) in z.values_mut().iter_mut().zip(xi.values()) {
                *zv += xv;
            }
            let mut out = nonlinear_step(&z, tau_mid, dtau, cfg);
            for (ov, xv) in out.values_mut().iter_mut().zip(xi.values()) {
                *ov -= xv;
            }
            analyze(&out)
        }
        _ => analyze(&nonlinear_step(&synthesize(&half), tau_mid, dtau, cfg)),
    };
    Ok(linear_propagate(&rotated, dtau / 2.0))
}

/// Integrates over the configured span, storing checkpoints and the per-step
/// conserved-quantity log. A trajectory whose `ℋ¹` norm exceeds the guard is
/// flagged invalid and truncated, not silently continued.
pub fn evolve(
    initial: &SpectralField,
    u0: Option<&SpectralField>,
    cfg: &EvolutionConfig,
) -> Result<Trajectory> {
    evolve_observed(initial, u0, cfg, |_, _, _| {})
}

/// `evolve` with a per-step observer called on every grid time, including
/// `τ₀`.
pub fn evolve_observed(
    initial: &SpectralField,
    u0: Option<&SpectralField>,
    cfg: &EvolutionConfig,
    mut observer: impl FnMut(usize, f64, &SpectralField),
) -> Result<Trajectory> {
    validate_cauchy_data(initial, u0, cfg)?;
    let (tau0, tau1) = cfg.tau_span;
    let span = tau1 - tau0;
    if span == 0.0 || cfg.dtau <= 0.0 {
        return Err(Error::InvalidConfig(
            "need a nonempty span and positive base step".into(),
        ));
    }
    let nsteps = ((span.abs() / cfg.dtau).round() as usize).max(1);
    let stride = if cfg.checkpoint_stride == 0 {
        (nsteps / 1024).max(1)
    } else {
        cfg.checkpoint_stride
    };

    let guard_base = h1_norm(initial)
        .max(u0.map(h1_norm).unwrap_or(0.0))
        .max(1e-12);
    let guard = cfg.guard_factor * guard_base;

    let mut state = initial.clone();
    let mut taus = vec![tau0];
    let mut states = vec![state.clone()];
    let mut step_log = vec![StepLogEntry {
        tau: tau0,
        mass: state.norm_l2(),
        h1: h1_norm(&state),
    }];
    observer(0, tau0, &state);

    let mut valid = true;
    let mut invalid_reason = None;
    let mut tau = tau0;
    for step in 1..=nsteps {
        let tau_next = tau0 + span * step as f64 / nsteps as f64;
        state = strang_step(&state, u0, tau, tau_next - tau, cfg)?;
        tau = tau_next;
        let h1 = h1_norm(&state);
        step_log.push(StepLogEntry {
            tau,
            mass: state.norm_l2(),
            h1,
        });
        observer(step, tau, &state);
        if !h1.is_finite() || h1 > guard {
            valid = false;
            invalid_reason = Some(format!(
                "ℋ¹ norm {h1:.3e} exceeded the guard {guard:.3e} at τ = {tau:.6}"
            ));
            taus.push(tau);
            states.push(state.clone());
            break;
        }
        if step % stride == 0 || step == nsteps {
            taus.push(tau);
            states.push(state.clone());
        }
    }

    Ok(Trajectory {
        config: *cfg,
        taus,
        states,
        step_log,
        valid,
        invalid_reason,
    })
}

fn validate_cauchy_data(
    initial: &SpectralField,
    u0: Option<&SpectralField>,
    cfg: &EvolutionConfig,
) -> Result<()> {
    if initial.basis().dim() != cfg.n {
        return Err(Error::InvalidConfig(format!(
            "field dimension {} does not match config n = {}",
            initial.basis().dim(),
            cfg.n
        )));
    }
    match cfg.formulation {
        Formulation::Remainder => {
            if u0.is_none() {
                return Err(Error::InvalidConfig(
                    "remainder formulation needs the draw u₀".into(),
                ));
            }
            if initial.norm_l2() != 0.0 {
                return Err(Error::InvalidConfig(
                    "remainder formulation starts from v = 0".into(),
                ));
            }
            if cfg.tau_span.0 != 0.0 {
                return Err(Error::InvalidConfig(
                    "remainder Cauchy data is posed at τ = 0".into(),
                ));
            }
        }
        Formulation::Deterministic if u0.is_some() => {
            return Err(Error::InvalidConfig(
                "deterministic mode takes no draw".into(),
            ));
        }
        _ => {}
    }
    Ok(())
}

/// Free wave `ξ(τ) = e^{-iτH} u₀` on the grid.
pub fn free_wave_grid(u0: &SpectralField, tau: f64) -> GridField {
    synthesize(&linear_propagate(u0, tau))
}

/// Nonlinear forcing `cos^{e_c}(2τ)|ξ+v|^{p-2}(ξ+v)` projected back onto the
/// basis.
fn forcing(
    v: &SpectralField,
    u0: Option<&SpectralField>,
    tau: f64,
    cfg: &EvolutionConfig,
) -> SpectralField {
    let coef = (2.0 * tau).cos().powf(cfg.cos_exponent());
    let mut z = synthesize(v);
    if let Some(u0) = u0 {
        let xi = free_wave_grid(u0, tau);
        for (zv, xv) in z.values_mut().iter_mut().zip(xi.values()) {
            *zv += xv;
        }
    }
    let cubic = (cfg.p - 4.0).abs() < 1e-12;
    for zv in z.values_mut().iter_mut() {
        let amp = if cubic {
            zv.norm_sqr()
        } else {
            zv.norm_sqr().powf((cfg.p - 2.0) / 2.0)
        };
        *zv *= coef * amp;
    }
    analyze(&z)
}

/// Residual of the integral (Duhamel) form of the remainder equation at the
/// trajectory's checkpoints: `‖v(τ_k) + i·e^{-iτ_k H} ∫₀^{τ_k} e^{isH} N(s) ds‖`,
/// the integral taken by the composite trapezoid rule on the step grid with
/// every term propagated spectrally. A small residual certifies that the
/// split integrator solves the integral equation, not merely the split ODEs.
pub fn duhamel_residual(traj: &Trajectory, u0: Option<&SpectralField>) -> Result<Vec<(f64, f64)>> {
    let cfg = &traj.config;
    if !matches!(
        cfg.formulation,
        Formulation::Remainder | Formulation::Linear
    ) {
        return Err(Error::InvalidConfig(
            "residual applies to the remainder (or linear) formulation".into(),
        ));
    }
    let basis = traj.states[0].basis().clone();
    let forcing_u0 = if cfg.formulation == Formulation::Linear {
        None
    } else {
        u0
    };
    let tau0 = cfg.tau_span.0;
    let initial = traj.states[0].clone();

    let mut accum = basis.spectral_zero();
    let mut prev: Option<SpectralField> = None; // ĝ at the previous grid time
    let mut prev_tau = tau0;
    let mut out = Vec::new();
    let mut next_checkpoint = 0usize;

    let traj2 = evolve_observed(&initial, u0, cfg, |_, tau, state| {
        let n_hat = forcing(state, forcing_u0, tau, cfg);
        let g_hat = linear_propagate(&n_hat, -(tau - tau0));
        if let Some(p) = prev.take() {
            let h = (tau - prev_tau) / 2.0;
            for ((a, b), c) in accum
                .coeffs_mut()
                .iter_mut()
                .zip(p.coeffs())
                .zip(g_hat.coeffs())
            {
                *a += (b + c) * h;
            }
        }
        prev_tau = tau;
        prev = Some(g_hat);

        while next_checkpoint < traj.taus.len() && (traj.taus[next_checkpoint] - tau).abs() < 1e-12
        {
            let duhamel = linear_propagate(&accum, tau - tau0);
            let homogeneous = linear_propagate(&initial, tau - tau0);
            let residual: f64 = state
                .coeffs()
                .iter()
                .zip(duhamel.coeffs())
                .zip(homogeneous.coeffs())
                .map(|((v, d), h0)| (v - h0 + Complex64::i() * d).norm_sqr())
                .sum::<f64>()
                .sqrt();
            out.push((tau, residual));
            next_checkpoint += 1;
        }
    })?;
    debug_assert_eq!(traj2.taus.len(), traj.taus.len());
    Ok(out)
}
