//! The lens change of variables between free-space dynamics on all of ℝ (in
//! physical time `t`) and oscillator dynamics on the window `(-π/4, π/4)`
//! (in lens time `τ`), with `t = tan(2τ)/2`.
//!
//! In the forward direction
//! `w(τ, y) = cos(2τ)^{-n/2} · u(t(τ), y/cos 2τ) · e^{-i|y|² t(τ)}`,
//! and the free propagator is reached only through this conjugation: for any
//! `φ`, `e^{itΔ}φ` equals the inverse lens map applied to `e^{-iτ(t)H}φ`.
//! Rescaled evaluation goes through the Hermite expansion at scaled nodes
//! (exact per mode), never through interpolation.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{analyze, synthesize, synthesize_at_scaled_nodes, GridField, SpectralField};
use crate::propagator::linear_propagate;

/// Physical time of a lens time; `±π/4` map to `±∞`.
pub fn t_of_tau(tau: f64) -> f64 {
    debug_assert!(tau.abs() <= FRAC_PI_4 + 1e-12);
    if tau >= FRAC_PI_4 {
        f64::INFINITY
    } else if tau <= -FRAC_PI_4 {
        f64::NEG_INFINITY
    } else {
        (2.0 * tau).tan() / 2.0
    }
}

/// Lens time of a physical time; total on the extended line.
pub fn tau_of_t(t: f64) -> f64 {
    if t == f64::INFINITY {
        FRAC_PI_4
    } else if t == f64::NEG_INFINITY {
        -FRAC_PI_4
    } else {
        (2.0 * t).atan() / 2.0
    }
}

/// A matched `(τ, t)` pair on the two clocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimePair {
    pub tau: f64,
    pub t: f64,
}

impl TimePair {
    pub fn from_tau(tau: f64) -> Self {
        Self {
            tau,
            t: t_of_tau(tau),
        }
    }

    pub fn from_t(t: f64) -> Self {
        Self {
            tau: tau_of_t(t),
            t,
        }
    }
}

/// Scale and modulation of the lens map at one lens time.
#[derive(Debug, Clone, Copy)]
pub struct LensFrame {
    pub tau: f64,
    /// `1/cos(2τ) ≥ 1` on the open window.
    pub scale: f64,
    /// Coefficient of the quadratic modulation phase, `t(τ)`.
    pub phase_coeff: f64,
}

impl LensFrame {
    pub fn new(tau: f64) -> Result<Self> {
        if tau.abs() >= FRAC_PI_4 {
            return Err(Error::LensEndpoint(tau));
        }
        Ok(Self {
            tau,
            scale: 1.0 / (2.0 * tau).cos(),
            phase_coeff: t_of_tau(tau),
        })
    }
}

/// `u(t(τ), ·) ↦ w(τ, ·)` on the grid.
pub fn lens_forward(u: &GridField, tau: f64) -> Result<GridField> {
    let frame = LensFrame::new(tau)?;
    let basis = u.basis().clone();
    let n = basis.dim() as f64;
    let coeffs = analyze(u);
    let mut out = synthesize_at_scaled_nodes(&coeffs, frame.scale);
    let amp = frame.scale.powf(n / 2.0);
    for (i, v) in out.values_mut().iter_mut().enumerate() {
        let r2: f64 = basis.grid_point(i).iter().map(|x| x * x).sum();
        *v *= amp * Complex64::from_polar(1.0, -r2 * frame.phase_coeff);
    }
    Ok(out)
}

/// `w(τ, ·) ↦ u(t(τ), ·)` on the grid.
pub fn lens_inverse(w: &GridField, tau: f64) -> Result<GridField> {
    let frame = LensFrame::new(tau)?;
    let basis = w.basis().clone();
    let n = basis.dim() as f64;
    let cos2 = 1.0 / frame.scale;
    let coeffs = analyze(w);
    let mut out = synthesize_at_scaled_nodes(&coeffs, cos2);
    let amp = cos2.powf(n / 2.0);
    for (i, v) in out.values_mut().iter_mut().enumerate() {
        let r2: f64 = basis.grid_point(i).iter().map(|x| x * x).sum();
        *v *= amp * Complex64::from_polar(1.0, r2 * cos2 * cos2 * frame.phase_coeff);
    }
    Ok(out)
}

/// `e^{itΔ}φ` realized through the lens conjugation (never by discretizing
/// the free flow on an unbounded domain).
pub fn free_evolve(phi: &SpectralField, t: f64) -> Result<GridField> {
    let tau = tau_of_t(t);
    let w = linear_propagate(phi, tau);
    lens_inverse(&synthesize(&w), tau)
}

/// Maximal `ℋ⁰` defect, over the grid of lens times, of the conjugation
/// identity relating the oscillator flow at `τ` and the free flow read
/// backwards at `-τ`. Linear evolution only.
pub fn conjugation_check(u0: &SpectralField, tau_grid: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &tau in tau_grid {
        let t = t_of_tau(tau);
        // u(t(τ)) out of the oscillator flow
        let u_t = free_evolve(u0, t)?;
        // e^{-it(τ)Δ} applied through the conjugation at -τ
        let back = free_evolve(&analyze(&u_t), -t)?;
        let defect = analyze(&back).sub(u0)?.norm_l2();
        worst = worst.max(defect);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisTable;
    use crate::diagnostics::fit_log_log;

    // smooth deterministic data for the lens checks: the rescaled field has
    // spectral content slightly beyond the cutoff, so full-band noise would
    // not round-trip at spectral accuracy
    fn smooth(basis: &std::sync::Arc<BasisTable>, seed: u64) -> SpectralField {
        crate::testutil::smooth_random_field(basis, seed, 1.3)
    }

    #[test]
    fn time_maps_are_mutual_inverses() {
        assert_eq!(t_of_tau(0.0), 0.0);
        assert_eq!(tau_of_t(0.0), 0.0);
        // t(π/8) = tan(π/4)/2 = 1/2
        assert!((t_of_tau(std::f64::consts::FRAC_PI_8) - 0.5).abs() < 1e-15);
        for &t in &[-1000.0, -3.7, -0.2, 0.0, 0.4, 12.0, 1000.0] {
            assert!((t_of_tau(tau_of_t(t)) - t).abs() <= 1e-13 * t.abs().max(1.0));
        }
        // monotone approach to π/4
        assert!(tau_of_t(1e3) < FRAC_PI_4);
        assert!(tau_of_t(1e3) > tau_of_t(1e2));
        assert!((tau_of_t(1e3) - (2e3f64).atan() / 2.0).abs() < 1e-12);
        assert_eq!(t_of_tau(FRAC_PI_4), f64::INFINITY);
        assert_eq!(tau_of_t(f64::NEG_INFINITY), -FRAC_PI_4);
    }

    #[test]
    fn maps_are_odd_and_increasing() {
        let taus: Vec<f64> = (-10..=10).map(|i| i as f64 * 0.07).collect();
        for w in taus.windows(2) {
            assert!(t_of_tau(w[1]) > t_of_tau(w[0]));
        }
        for &tau in &taus {
            assert!((t_of_tau(-tau) + t_of_tau(tau)).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_at_time_zero() {
        let basis = BasisTable::build_default(2, 8).unwrap();
        let f = smooth(&basis, 1);
        let g = synthesize(&f);
        let w = lens_forward(&g, 0.0).unwrap();
        let err = g
            .values()
            .iter()
            .zip(w.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "identity defect {err}");
    }

    #[test]
    fn endpoint_rejected() {
        let basis = BasisTable::build_default(2, 4).unwrap();
        let g = synthesize(&basis.spectral_unit(0));
        assert!(matches!(
            lens_forward(&g, FRAC_PI_4),
            Err(Error::LensEndpoint(_))
        ));
        assert!(matches!(
            lens_inverse(&g, -FRAC_PI_4),
            Err(Error::LensEndpoint(_))
        ));
    }

    #[test]
    fn l2_isometry() {
        let basis = BasisTable::build_default(2, 16).unwrap();
        let f = crate::testutil::smooth_random_field(&basis, 2, 0.45);
        let g = synthesize(&f);
        for &tau in &[0.3, -0.2, 0.1] {
            let w = lens_forward(&g, tau).unwrap();
            let a = w.norm_l2_quad();
            let b = g.norm_l2_quad();
            assert!((a - b).abs() < 1e-9 * b, "τ={tau}: {a} vs {b}");
        }
    }

    #[test]
    fn forward_inverse_round_trip() {
        // the rescaling and the quadratic chirp push spectral content upward
        // by a per-cluster mixing ratio that grows with |τ| (≈0.21 at τ=0.2,
        // ≈0.32 at τ=0.3); the ratio to the power of the spare clusters sets
        // the round-trip floor, so spectral-grade trips want J=32 and
        // moderate τ
        let basis = BasisTable::build_default(2, 32).unwrap();
        let f = smooth(&basis, 3);
        let g = synthesize(&f);
        for &tau in &[0.2, -0.15] {
            let w = lens_forward(&g, tau).unwrap();
            let back = lens_inverse(&w, tau).unwrap();
            let err = g
                .values()
                .iter()
                .zip(back.values())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-9, "round trip at τ={tau}: {err}");
        }
        // at τ=0.3 the same trip still lands within the mixing-ratio floor
        let w = lens_forward(&g, 0.3).unwrap();
        let back = lens_inverse(&w, 0.3).unwrap();
        let err = g
            .values()
            .iter()
            .zip(back.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-7, "round trip at τ=0.3: {err}");
    }

    #[test]
    fn conjugation_defect_zero_at_origin_and_phase_invariant() {
        let basis = BasisTable::build_default(2, 10).unwrap();
        let f = smooth(&basis, 4);
        let d0 = conjugation_check(&f, &[0.0]).unwrap();
        assert!(d0 < 1e-11, "τ=0 defect {d0}");
        let d1 = conjugation_check(&f, &[0.15]).unwrap();
        let rotated = f.scale(Complex64::from_polar(1.0, 1.234));
        let d2 = conjugation_check(&rotated, &[0.15]).unwrap();
        assert!((d1 - d2).abs() < 1e-10, "phase invariance: {d1} vs {d2}");
    }

    #[test]
    fn conjugation_defect_small_on_smooth_data() {
        let basis = BasisTable::build_default(2, 32).unwrap();
        let f = smooth(&basis, 5);
        let d = conjugation_check(&f, &[0.1, 0.2, -0.15]).unwrap();
        assert!(d < 1e-7, "defect {d}");
    }

    #[test]
    fn rate_transfer_closed_form() {
        // E(τ) = (π/4 − τ)^μ read against t decays like t^{-μ}
        for &mu in &[1.0, 1.5, 2.0] {
            let ts: Vec<f64> = (0..40)
                .map(|i| 10f64 * (100f64).powf(i as f64 / 39.0))
                .collect();
            let es: Vec<f64> = ts
                .iter()
                .map(|&t| (FRAC_PI_4 - tau_of_t(t)).powf(mu))
                .collect();
            let (slope, _inter, r2) = fit_log_log(&ts, &es);
            assert!(
                (slope + mu).abs() < 0.01 * mu,
                "μ={mu}: transferred slope {slope}"
            );
            assert!(r2 > 0.999);
        }
    }
}
