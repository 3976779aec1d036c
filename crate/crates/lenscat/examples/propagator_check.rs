//! The oscillator flow two ways: exact phases against the closed-form
//! kernel, plus the dispersive ceiling and the π-periodicity.

use lenscat::basis::BasisTable;
use lenscat::field::synthesize;
use lenscat::propagator::{interior_max_diff, kernel_modulus, linear_propagate, mehler_reference};
use num_complex::Complex64;

fn main() {
    let basis = BasisTable::build_default(2, 32).unwrap();
    let phi0 = basis.spectral_unit(0);

    println!("== spectral propagator vs oscillator kernel (τ = 0.3) ==");
    for j in [16usize, 24, 32] {
        let b = BasisTable::build_default(2, j).unwrap();
        let f = b.spectral_unit(0);
        let spectral = synthesize(&linear_propagate(&f, 0.3));
        let kernel = mehler_reference(&synthesize(&f), 0.3).unwrap();
        println!(
            "J={j:2}: interior deviation {:.3e}",
            interior_max_diff(&spectral, &kernel, 0.5)
        );
    }

    println!("\n== exact unitarity and periodicity ==");
    let coeffs: Vec<Complex64> = (0..basis.len())
        .map(|k| Complex64::new((0.9 * k as f64).sin(), (0.4 * k as f64).cos()))
        .collect();
    let f = lenscat::SpectralField::new(basis.clone(), coeffs);
    for s in [-1.0, 0.0, 1.0, 2.0] {
        let a = lenscat::diagnostics::sobolev_norm(&f, s);
        let b = lenscat::diagnostics::sobolev_norm(&linear_propagate(&f, 0.37), s);
        println!("‖·‖_H^{s:4}: drift {:.3e}", (a - b).abs() / a);
    }
    let period = linear_propagate(&f, std::f64::consts::PI);
    let defect = f
        .coeffs()
        .iter()
        .zip(period.coeffs())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("π-period defect (n=2): {defect:.3e}");

    println!("\n== dispersive ceiling |e^(-iτH)φ|∞ · (2π|sin 2τ|)^(n/2) / ‖φ‖_L1 ==");
    let small = BasisTable::build_default(2, 16).unwrap();
    let phi = synthesize(&small.spectral_unit(0));
    let l1: f64 = phi
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| small.grid_weight(i) * v.norm())
        .sum();
    let mut worst = 0.0f64;
    for k in 0..16 {
        let tau = 0.05 + 1.4 * k as f64 / 15.0;
        let out = mehler_reference(&phi, tau).unwrap();
        let ratio = out.max_abs() / (kernel_modulus(2, tau) * l1);
        worst = worst.max(ratio);
        if k % 5 == 0 {
            println!("τ = {tau:.3}: ratio {ratio:.9}");
        }
    }
    println!("worst ratio over the grid: {worst:.9} (ceiling 1)");
    let _ = phi0;
}
