//! The lens dictionary: time maps, the isometric round trip, the
//! conjugation identity on coherent-state data, and the rate transfer
//! between lens time and physical time.

use std::f64::consts::FRAC_PI_4;

use lenscat::basis::BasisTable;
use lenscat::diagnostics::fit_log_log;
use lenscat::field::{analyze, synthesize};
use lenscat::lens::{conjugation_check, lens_forward, lens_inverse, t_of_tau, tau_of_t, TimePair};
use lenscat::propagator::linear_propagate;
use num_complex::Complex64;

fn main() {
    println!("== the two clocks ==");
    for t in [0.0, 0.5, 2.0, 10.0, 1000.0] {
        let pair = TimePair::from_t(t);
        println!(
            "t = {t:7.1}  ↔  τ = {:.6}  (π/4 − τ = {:.3e})",
            pair.tau,
            FRAC_PI_4 - pair.tau
        );
    }
    println!("t(π/4) = {}", t_of_tau(FRAC_PI_4));

    println!("\n== round trip and isometry (n=2, J=32) ==");
    let basis = BasisTable::build_default(2, 32).unwrap();
    let mut f = basis.spectral_zero();
    for (k, c) in f.coeffs_mut().iter_mut().enumerate() {
        let deg = basis.index(k).total_degree() as f64;
        *c = Complex64::new((k as f64).sin(), (0.6 * k as f64).cos()) * (-1.3 * deg).exp();
    }
    let g = synthesize(&f);
    for tau in [0.15, 0.2] {
        let w = lens_forward(&g, tau).unwrap();
        let back = lens_inverse(&w, tau).unwrap();
        let rt = g
            .values()
            .iter()
            .zip(back.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let iso = (w.norm_l2_quad() - g.norm_l2_quad()).abs() / g.norm_l2_quad();
        println!("τ = {tau}: pointwise round trip {rt:.3e}, L² defect {iso:.3e}");
    }

    println!("\n== conjugation identity on a coherent state (J=48) ==");
    let basis48 = BasisTable::build_default(2, 48).unwrap();
    let x0: [f64; 2] = [0.5, 0.3];
    let mut u0 = basis48.spectral_zero();
    for (k, c) in u0.coeffs_mut().iter_mut().enumerate() {
        let mi = basis48.index(k);
        let mut v = 1.0;
        for (axis, &d) in mi.degrees().iter().enumerate() {
            let m = d as usize;
            let fact: f64 = (1..=m).map(|i| i as f64).product();
            v *= std::f64::consts::PI.powf(0.25)
                * (-x0[axis] * x0[axis] / 4.0).exp()
                * x0[axis].powi(m as i32)
                / (2f64.powi(m as i32) * fact).sqrt();
        }
        *c = Complex64::new(v, 0.0);
    }
    println!("‖u₀‖_L2 = {:.6}", u0.norm_l2());
    let defect = conjugation_check(&u0, &[0.1, 0.2, -0.15]).unwrap();
    println!("max conjugation defect over the τ grid: {defect:.3e}");

    // and once through the oscillator propagator directly (the identity says
    // the free flow at t(τ) equals the inverse lens of e^{-iτH})
    let tau = 0.2;
    let w = linear_propagate(&u0, tau);
    let u_t = lens_inverse(&synthesize(&w), tau).unwrap();
    let back = analyze(&lens_forward(&u_t, tau).unwrap());
    println!(
        "lens_forward(lens_inverse(w)) − w: {:.3e}",
        back.sub(&w).unwrap().norm_l2()
    );

    println!("\n== rate transfer: (π/4 − τ)^μ reads as t^(−μ) ==");
    for mu in [1.0, 1.5, 2.0] {
        let ts: Vec<f64> = (0..64)
            .map(|i| 10f64 * 100f64.powf(i as f64 / 63.0))
            .collect();
        let es: Vec<f64> = ts
            .iter()
            .map(|&t| (FRAC_PI_4 - tau_of_t(t)).powf(mu))
            .collect();
        let (slope, _, r2) = fit_log_log(&ts, &es);
        println!(
            "planted μ = {mu}: fitted decay {:.4} (R² = {r2:.6})",
            -slope
        );
    }
}
