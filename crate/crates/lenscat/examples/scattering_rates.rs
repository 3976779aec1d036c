//! Endpoint decay-rate study: evolve one draw at two resolutions, estimate
//! the discretization floor from the pair, and fit the decay of
//! `‖e^{iτH}v(τ) − r₀⁺‖_H1` against physical time.
//!
//! Note on the measured exponents: with the basis truncated, the forcing has
//! a finite ℋ¹ norm and the endpoint error is governed by the integrable
//! factor cos^{e_c}(2τ), so the fit lands at μ ≈ e_c + 1 (1 for n=2, 2 for
//! n=3) — at least as fast as the guaranteed decay in every dimension.

use lenscat::lab::{rate_study, ExperimentConfig, LabContext};

fn main() {
    // n=2 at a reduced size so the example runs in seconds; the acceptance
    // suite runs the pinned J=32 / Δτ=5e-4 version
    let config = ExperimentConfig {
        n: 2,
        s: 0.2,
        clusters: 24,
        dtau: 1e-3,
        seeds: vec![1],
        ..Default::default()
    };
    let ctx = LabContext::prepare(config).unwrap();
    let rows = rate_study(&ctx, &[1e-3, 5e-4]).unwrap();
    println!("n  J   M   dt        floor      mu      R2        window_t");
    for r in &rows {
        println!(
            "{}  {:<3} {:<3} {:<9.2e} {:<10.2e} {:<7.4} {:<9.6} [{:.1}, {:.1}]",
            r.n,
            r.clusters,
            r.quad,
            r.dt,
            r.floor,
            r.fit.mu,
            r.fit.r_squared,
            r.fit.window.0,
            r.fit.window.1
        );
    }

    // the fitter itself, calibrated on planted exponents
    println!("\nplanted-exponent calibration:");
    let lo = lenscat::lens::tau_of_t(10.0);
    let hi = std::f64::consts::FRAC_PI_4 - 10.1 * 5e-4;
    let taus: Vec<f64> = (0..256)
        .map(|i| lo + (hi - lo) * i as f64 / 255.0)
        .collect();
    for mu in [1.0, 1.5, 2.0] {
        let (ts, es) = lenscat::diagnostics::synthetic_rate_series(mu, &taus);
        let fit = lenscat::diagnostics::rate_fit_series(&ts, &es, 0.0, 5e-4);
        println!(
            "  planted {mu}: recovered {:.4} (R² {:.6})",
            fit.mu, fit.r_squared
        );
    }
}
