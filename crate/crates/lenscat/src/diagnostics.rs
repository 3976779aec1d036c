//! Measured quantities: harmonic Sobolev and weighted Lebesgue norms, the
//! dimension-specific K statistics of the free wave, mixed space-time norms,
//! the energy functional with its monotonicity/ceiling audits, scattering
//! state extraction, and the decay- and tail-exponent fits.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{EvolutionConfig, Trajectory};
use crate::field::{gradient, synthesize, GridField, SpectralField};
use crate::lens::t_of_tau;
use crate::measure::{build_gamma, sample, RandomLaw};
use crate::propagator::linear_propagate;

/// `‖H^{s/2} f‖_{L²} = (Σ λ_k^s |c_k|²)^{1/2}`; any real `s` since all
/// eigenvalues are ≥ 1.
pub fn sobolev_norm(f: &SpectralField, s: f64) -> f64 {
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| f.basis().eigenvalue(k).powf(s) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Fraction of integrand mass allowed in the outer node shell before a norm
/// is flagged as tail-unresolved.
pub const TAIL_WARN_FRACTION: f64 = 0.01;

/// A quadrature Lebesgue norm together with the fraction of its integrand
/// living on the outermost 10% of nodes (per axis, both ends). For finite
/// exponents the warning fires when more than 1% of the integrand mass sits
/// out there; for the sup norm it fires when the maximizer itself does.
#[derive(Debug, Clone, Copy)]
pub struct LqNorm {
    pub value: f64,
    pub outer_fraction: f64,
    warn: bool,
}

impl LqNorm {
    pub fn tail_warning(&self) -> bool {
        self.warn
    }
}

fn outer_mask(basis: &crate::basis::BasisTable) -> Vec<bool> {
    let m = basis.quad_points();
    let shell = m.div_ceil(20); // outermost 5% of indices on each end
    let n = basis.dim();
    (0..basis.grid_len())
        .map(|mut i| {
            for _ in 0..n {
                let idx = i % m;
                if idx < shell || idx >= m - shell {
                    return true;
                }
                i /= m;
            }
            false
        })
        .collect()
}

/// `L^q` norm of grid values, `1 ≤ q ≤ ∞` (`f64::INFINITY` for the grid max).
pub fn lebesgue_norm(g: &GridField, q: f64) -> Result<LqNorm> {
    if q < 1.0 || q.is_nan() {
        return Err(Error::InvalidConfig(format!("L^q needs q ≥ 1, got {q}")));
    }
    let basis = g.basis();
    let outer = outer_mask(basis);
    if q.is_infinite() {
        let mut all: f64 = 0.0;
        let mut out: f64 = 0.0;
        for (i, v) in g.values().iter().enumerate() {
            let a = v.norm();
            all = all.max(a);
            if outer[i] {
                out = out.max(a);
            }
        }
        let frac = if all > 0.0 { out / all } else { 0.0 };
        return Ok(LqNorm {
            value: all,
            outer_fraction: frac,
            warn: all > 0.0 && out >= all * (1.0 - 1e-12),
        });
    }
    let mut total = 0.0;
    let mut outer_mass = 0.0;
    for (i, v) in g.values().iter().enumerate() {
        let term = basis.grid_weight(i) * v.norm().powf(q);
        total += term;
        if outer[i] {
            outer_mass += term;
        }
    }
    let frac = if total > 0.0 { outer_mass / total } else { 0.0 };
    Ok(LqNorm {
        value: total.powf(1.0 / q),
        outer_fraction: frac,
        warn: frac > TAIL_WARN_FRACTION,
    })
}

/// Pointwise modulus of the gradient, `(Σ_d |∂_d f|²)^{1/2}`, on the grid.
pub fn gradient_magnitude(f: &SpectralField) -> GridField {
    let grads = gradient(f);
    let basis = f.basis().clone();
    let mut values = vec![Complex64::new(0.0, 0.0); basis.grid_len()];
    for g in &grads {
        for (v, gv) in values.iter_mut().zip(g.values()) {
            *v += Complex64::new(gv.norm_sqr(), 0.0);
        }
    }
    for v in values.iter_mut() {
        *v = Complex64::new(v.re.sqrt(), 0.0);
    }
    GridField::new(basis, values)
}

/// `‖⟨x⟩^a (∇)f‖_{L^q}` via ladder gradient and weighted quadrature.
pub fn weighted_norm(f: &SpectralField, weight: f64, grad: bool, q: f64) -> Result<LqNorm> {
    let g = if grad {
        gradient_magnitude(f)
    } else {
        synthesize(f)
    };
    let weighted = crate::field::weight_pointwise(&g, weight);
    lebesgue_norm(&weighted, q)
}

/// One constituent of the K statistic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KTerm {
    pub key: String,
    pub weight: f64,
    pub grad: bool,
    /// Space(-time) exponent; `None` is the sup norm.
    pub q: Option<f64>,
    pub value: f64,
}

/// Dimension-specific sum of weighted sup and `L^q` norms of the free wave
/// `ξ(τ) = e^{-iτH}u₀`. Finite for every draw; degree-1 homogeneous.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KStatistic {
    pub n: usize,
    pub tau_samples: usize,
    pub terms: Vec<KTerm>,
    pub total: f64,
    pub tail_warning: bool,
}

struct Recipe {
    sup_terms: Vec<(&'static str, f64, bool)>,
    lq_terms: Vec<(&'static str, f64, bool, f64)>,
}

fn recipe(n: usize) -> Result<Recipe> {
    // (key, weight power, gradient flag[, exponent])
    match n {
        2 => Ok(Recipe {
            sup_terms: vec![("sup_w1_xi", 1.0, false), ("sup_grad_xi", 0.0, true)],
            lq_terms: vec![("st_l2_xi", 0.0, false, 2.0)],
        }),
        3 => Ok(Recipe {
            sup_terms: vec![
                ("sup_w65_xi", 6.0 / 5.0, false),
                ("sup_w15_grad_xi", 1.0 / 5.0, true),
            ],
            lq_terms: vec![
                ("st_l125_xi", 0.0, false, 12.0 / 5.0),
                ("st_l12_w1_xi", 1.0, false, 12.0),
                ("st_l12_grad_xi", 0.0, true, 12.0),
            ],
        }),
        4 => Ok(Recipe {
            sup_terms: vec![
                ("sup_w75_xi", 7.0 / 5.0, false),
                ("sup_w25_grad_xi", 2.0 / 5.0, true),
            ],
            lq_terms: vec![
                ("st_l83_xi", 0.0, false, 8.0 / 3.0),
                ("st_l8_w1_xi", 1.0, false, 8.0),
                ("st_l8_grad_xi", 0.0, true, 8.0),
            ],
        }),
        _ => Err(Error::InvalidConfig(format!(
            "no K-statistic recipe for dimension {n}"
        ))),
    }
}

/// Computes the K statistic by sampling one full period of the oscillator
/// flow (`|ξ|` is π-periodic in τ up to a global phase, so the sup over all
/// times is realized on `[-π/2, π/2]`); the space-time integrals run over the
/// lens window `[-π/4, π/4]`.
pub fn k_statistic(u0: &SpectralField, tau_samples: usize) -> Result<KStatistic> {
    let n = u0.basis().dim();
    let rec = recipe(n)?;
    let samples = tau_samples.max(8).div_ceil(4) * 4;

    let mut sup_vals = vec![0.0f64; rec.sup_terms.len()];
    let mut lq_accum = vec![0.0f64; rec.lq_terms.len()];
    let mut tail = false;

    let h = std::f64::consts::PI / samples as f64;
    for i in 0..=samples {
        let tau = -FRAC_PI_2 + i as f64 * h;
        let xi = linear_propagate(u0, tau);
        let plain = synthesize(&xi);
        let grad_mag = gradient_magnitude(&xi);

        for (slot, (_, w, grad)) in sup_vals.iter_mut().zip(&rec.sup_terms) {
            let g = if *grad { &grad_mag } else { &plain };
            let weighted = crate::field::weight_pointwise(g, *w);
            let norm = lebesgue_norm(&weighted, f64::INFINITY)?;
            tail |= norm.tail_warning();
            *slot = slot.max(norm.value);
        }

        // trapezoid in τ over the lens window
        if tau.abs() <= FRAC_PI_4 + 1e-12 {
            let endpoint = (tau.abs() - FRAC_PI_4).abs() < 1e-12;
            let tw = if endpoint { h / 2.0 } else { h };
            for (slot, (_, w, grad, q)) in lq_accum.iter_mut().zip(&rec.lq_terms) {
                let g = if *grad { &grad_mag } else { &plain };
                let weighted = crate::field::weight_pointwise(g, *w);
                let norm = lebesgue_norm(&weighted, *q)?;
                tail |= norm.tail_warning();
                *slot += tw * norm.value.powf(*q);
            }
        }
    }

    let mut terms = Vec::new();
    for ((key, w, grad), value) in rec.sup_terms.iter().zip(sup_vals) {
        terms.push(KTerm {
            key: (*key).into(),
            weight: *w,
            grad: *grad,
            q: None,
            value,
        });
    }
    for ((key, w, grad, q), accum) in rec.lq_terms.iter().zip(lq_accum) {
        terms.push(KTerm {
            key: (*key).into(),
            weight: *w,
            grad: *grad,
            q: Some(*q),
            value: accum.powf(1.0 / q),
        });
    }
    let total = terms.iter().map(|t| t.value).sum();
    Ok(KStatistic {
        n,
        tau_samples: samples,
        terms,
        total,
        tail_warning: tail,
    })
}

/// A space-time exponent pair, admissible when `2/p + n/q = n/2`, `p ≥ 2`,
/// `(n, p) ≠ (2, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrichartzPair {
    pub p: f64,
    pub q: f64,
}

impl StrichartzPair {
    pub fn is_admissible(&self, n: usize) -> bool {
        let nn = n as f64;
        let scaling = 2.0 / self.p
            + if self.q.is_infinite() {
                0.0
            } else {
                nn / self.q
            };
        (scaling - nn / 2.0).abs() < 1e-9 && self.p >= 2.0 && !(n == 2 && self.p == 2.0)
    }
}

/// Mixed norm `(∫ ‖u(τ)‖_{L^q}^p dτ)^{1/p}` over the checkpoint grid
/// (trapezoid in τ, grid max when `p = ∞`).
pub fn strichartz_norm(traj: &Trajectory, p: f64, q: f64, grad: bool) -> Result<f64> {
    if p < 1.0 || q < 1.0 || p.is_nan() || q.is_nan() {
        return Err(Error::InvalidConfig(format!(
            "mixed norm needs p, q ≥ 1 (got {p}, {q})"
        )));
    }
    let spatial: Result<Vec<f64>> = traj
        .states
        .iter()
        .map(|s| Ok(weighted_norm(s, 0.0, grad, q)?.value))
        .collect();
    let spatial = spatial?;
    if p.is_infinite() {
        return Ok(spatial.iter().copied().fold(0.0, f64::max));
    }
    let mut total = 0.0;
    for k in 1..traj.taus.len() {
        let dt = (traj.taus[k] - traj.taus[k - 1]).abs();
        total += dt * (spatial[k - 1].powf(p) + spatial[k].powf(p)) / 2.0;
    }
    Ok(total.powf(1.0 / p))
}

/// The energy `ℰ(v) = ½‖v‖²_{ℋ¹} + (1/p)∫ cos^{e_c}(2τ)|ξ+v|^p dx` (ξ = 0 in
/// deterministic mode).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EnergySample {
    pub tau: f64,
    pub quadratic: f64,
    pub potential: f64,
    pub total: f64,
}

pub fn energy(
    v: &SpectralField,
    u0: Option<&SpectralField>,
    tau: f64,
    cfg: &EvolutionConfig,
) -> EnergySample {
    let quadratic = 0.5 * sobolev_norm(v, 1.0).powi(2);
    let coef = (2.0 * tau).cos().powf(cfg.cos_exponent());
    let mut z = synthesize(v);
    if let Some(u0) = u0 {
        let xi = synthesize(&linear_propagate(u0, tau));
        for (zv, xv) in z.values_mut().iter_mut().zip(xi.values()) {
            *zv += xv;
        }
    }
    let basis = z.basis();
    let mut integral = 0.0;
    for (i, zv) in z.values().iter().enumerate() {
        integral += basis.grid_weight(i) * zv.norm_sqr().powf(cfg.p / 2.0);
    }
    let potential = coef * integral / cfg.p;
    EnergySample {
        tau,
        quadratic,
        potential,
        total: quadratic + potential,
    }
}

pub fn energy_series(traj: &Trajectory, u0: Option<&SpectralField>) -> Vec<EnergySample> {
    traj.taus
        .iter()
        .zip(&traj.states)
        .map(|(&tau, v)| energy(v, u0, tau, &traj.config))
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyAudit {
    /// Largest single-checkpoint upward move of the energy.
    pub max_step_increase: f64,
    /// Sum of all upward moves.
    pub cumulative_increase: f64,
    pub initial: f64,
    pub sup_v_h1: f64,
    /// `K⁴ e^{2π(K²+1)}` when a K statistic was supplied.
    pub ceiling: Option<f64>,
    pub ceiling_satisfied: Option<bool>,
}

/// Monotonicity and a-priori-bound report. In deterministic mode on
/// `[0, π/4]` the energy should only move upward by splitting error; on a
/// randomized trial the `ℋ¹` norm must sit below the (loose) ceiling
/// `K⁴ e^{2π(K²+1)}` — a violation there means a bug, not new behaviour.
pub fn energy_audit(
    traj: &Trajectory,
    u0: Option<&SpectralField>,
    k_total: Option<f64>,
) -> EnergyAudit {
    let series = energy_series(traj, u0);
    let mut max_step = 0.0f64;
    let mut cumulative = 0.0;
    for w in series.windows(2) {
        let up = (w[1].total - w[0].total).max(0.0);
        max_step = max_step.max(up);
        cumulative += up;
    }
    let sup_v_h1 = traj.step_log.iter().map(|e| e.h1).fold(0.0, f64::max);
    let ceiling = k_total.map(|k| k.powi(4) * (2.0 * std::f64::consts::PI * (k * k + 1.0)).exp());
    let ceiling_satisfied = ceiling.map(|c| sup_v_h1 <= c);
    EnergyAudit {
        max_step_increase: max_step,
        cumulative_increase: cumulative,
        initial: series.first().map(|e| e.total).unwrap_or(0.0),
        sup_v_h1,
        ceiling,
        ceiling_satisfied,
    }
}

/// Scattering state `r₀^± = e^{±i(π/4)H} v(±π/4)` from a remainder trajectory
/// that reached the endpoint.
pub fn extract_scattering(traj: &Trajectory) -> Result<SpectralField> {
    if !traj.valid {
        return Err(Error::InvalidTrajectory(
            traj.invalid_reason
                .clone()
                .unwrap_or_else(|| "guard tripped".into()),
        ));
    }
    let tau_end = traj.final_tau();
    if (tau_end.abs() - FRAC_PI_4).abs() > 1e-9 {
        return Err(Error::InvalidTrajectory(format!(
            "trajectory ends at τ = {tau_end}, not ±π/4"
        )));
    }
    Ok(linear_propagate(traj.final_state(), -tau_end))
}

/// Least-squares fit of `ln y` against `ln x`; returns (slope, intercept,
/// R²).
pub fn fit_log_log(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let pairs: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(&x, &y)| x > 0.0 && y > 0.0)
        .map(|(&x, &y)| (x.ln(), y.ln()))
        .collect();
    fit_linear(&pairs)
}

fn fit_linear(pairs: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pairs.len() as f64;
    if pairs.len() < 2 {
        return (0.0, 0.0, 0.0);
    }
    let sx: f64 = pairs.iter().map(|p| p.0).sum();
    let sy: f64 = pairs.iter().map(|p| p.1).sum();
    let sxx: f64 = pairs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pairs.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return (0.0, sy / n, 0.0);
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let ss_tot: f64 = pairs.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = pairs
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    (slope, intercept, r2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateVerdict {
    Ok,
    Inconclusive,
}

/// Fitted endpoint decay exponent of `E(τ) = ‖e^{iτH}v(τ) − r₀^±‖_{ℋ¹}`
/// mapped to physical time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateFit {
    pub mu: f64,
    #[serde(rename = "r2")]
    pub r_squared: f64,
    /// Physical-time window actually used.
    pub window: (f64, f64),
    pub floor: f64,
    pub samples: usize,
    pub verdict: RateVerdict,
}

/// Physical-time start of the asymptotic fit window: below this the error
/// still sits on its small-time plateau rather than the endpoint decay.
pub const RATE_T_MIN: f64 = 10.0;

/// Fit on an explicit `(τ, E)` series; the window keeps samples above
/// `10 × floor`, beyond `t = 10`, and below `τ = π/4 − 10·Δτ`.
pub fn rate_fit_series(taus: &[f64], errors: &[f64], floor: f64, dtau: f64) -> RateFit {
    let cutoff = FRAC_PI_4 - 10.0 * dtau;
    let mut ts = Vec::new();
    let mut es = Vec::new();
    for (&tau, &e) in taus.iter().zip(errors) {
        let tau = tau.abs();
        if tau >= cutoff || tau >= FRAC_PI_4 {
            continue;
        }
        if e <= 10.0 * floor || e <= 0.0 {
            continue;
        }
        let t = t_of_tau(tau);
        if t < RATE_T_MIN {
            continue;
        }
        ts.push(t);
        es.push(e);
    }
    if ts.len() < 8 {
        return RateFit {
            mu: f64::NAN,
            r_squared: 0.0,
            window: (0.0, 0.0),
            floor,
            samples: ts.len(),
            verdict: RateVerdict::Inconclusive,
        };
    }
    let (slope, _, r2) = fit_log_log(&ts, &es);
    let lo = ts.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ts.iter().copied().fold(0.0, f64::max);
    RateFit {
        mu: -slope,
        r_squared: r2,
        window: (lo, hi),
        floor,
        samples: ts.len(),
        verdict: RateVerdict::Ok,
    }
}

/// Endpoint-rate fit of a remainder trajectory against the scattering state.
pub fn rate_fit(traj: &Trajectory, r0: &SpectralField, floor: f64) -> RateFit {
    let errors: Vec<f64> = traj
        .taus
        .iter()
        .zip(&traj.states)
        .map(|(&tau, v)| {
            let rotated = linear_propagate(v, -tau);
            sobolev_norm(&rotated.sub(r0).expect("same basis"), 1.0)
        })
        .collect();
    rate_fit_series(&traj.taus, &errors, floor, traj.config.dtau)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailFit {
    pub slope: f64,
    #[serde(rename = "r2")]
    pub r_squared: f64,
    pub thresholds: Vec<f64>,
    pub exceedance: Vec<f64>,
    pub dropped: usize,
    pub degenerate: bool,
}

/// Minimum exceedance count for a threshold to enter the tail fit.
pub const TAIL_MIN_EXCEEDANCES: usize = 5;

/// Fits `ln P(X > K)` against `K²`; a sub-Gaussian family shows a negative
/// slope with a good linear fit.
pub fn tail_fit(samples: &[f64], thresholds: &[f64]) -> TailFit {
    let n = samples.len() as f64;
    let mut used_k = Vec::new();
    let mut used_p = Vec::new();
    let mut dropped = 0;
    for &k in thresholds {
        let count = samples.iter().filter(|&&x| x > k).count();
        if count < TAIL_MIN_EXCEEDANCES || count == samples.len() {
            dropped += 1;
            continue;
        }
        used_k.push(k);
        used_p.push(count as f64 / n);
    }
    if used_k.len() < 3 {
        return TailFit {
            slope: 0.0,
            r_squared: 0.0,
            thresholds: used_k,
            exceedance: used_p,
            dropped,
            degenerate: true,
        };
    }
    let pairs: Vec<(f64, f64)> = used_k
        .iter()
        .zip(&used_p)
        .map(|(&k, &p)| (k * k, p.ln()))
        .collect();
    let (slope, _, r2) = fit_linear(&pairs);
    TailFit {
        slope,
        r_squared: r2,
        thresholds: used_k,
        exceedance: used_p,
        dropped,
        degenerate: false,
    }
}

/// Interpolated empirical quantile (samples need not be sorted).
pub fn quantile(samples: &[f64], q: f64) -> f64 {
    assert!((0.0..=1.0).contains(&q));
    let mut v: Vec<f64> = samples.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if v.is_empty() {
        return f64::NAN;
    }
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        v[lo]
    } else {
        v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CeilingVerdict {
    Bounded,
    Diverging,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CeilingReport {
    pub epsilon: f64,
    /// `(J, median ‖u₀‖_{ℋ^{s+ε}})` along the ladder.
    pub medians: Vec<(usize, f64)>,
    pub verdict: CeilingVerdict,
}

/// Watches the truncated `ℋ^{s+ε}` norms of draws along a cluster-cutoff
/// ladder: "diverging" means strictly increasing with a last/first ratio
/// above 2.
pub fn regularity_ceiling(
    n: usize,
    s: f64,
    delta_reg: f64,
    law: &RandomLaw,
    seeds: &[u64],
    ladder: &[usize],
    epsilon: f64,
) -> Result<CeilingReport> {
    let mut medians = Vec::new();
    for &j in ladder {
        let basis = crate::basis::BasisTable::build_default(n, j)?;
        let gamma = build_gamma(&basis, s, delta_reg);
        let mut norms: Vec<f64> = seeds
            .iter()
            .map(|&seed| {
                let draw = sample(&gamma, law, seed);
                sobolev_norm(&draw.u0, s + epsilon)
            })
            .collect();
        norms.sort_by(|a, b| a.partial_cmp(b).unwrap());
        medians.push((j, quantile(&norms, 0.5)));
    }
    let increasing = medians.windows(2).all(|w| w[1].1 > w[0].1);
    let first = medians.first().map(|m| m.1).unwrap_or(0.0);
    let last = medians.last().map(|m| m.1).unwrap_or(0.0);
    let verdict = if increasing && first > 0.0 && last / first > 2.0 {
        CeilingVerdict::Diverging
    } else {
        CeilingVerdict::Bounded
    };
    Ok(CeilingReport {
        epsilon,
        medians,
        verdict,
    })
}

/// Planted-exponent trajectory for calibrating the rate fit:
/// `v(τ) = (π/4 − τ)^μ · φ₀` on a checkpoint grid.
pub fn synthetic_rate_series(mu: f64, basis_taus: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let taus: Vec<f64> = basis_taus.to_vec();
    let errors = taus.iter().map(|&t| (FRAC_PI_4 - t).powf(mu)).collect();
    (taus, errors)
}
