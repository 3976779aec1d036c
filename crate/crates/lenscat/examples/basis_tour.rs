//! Tour of the oscillator eigenbasis: eigenvalue clusters, quadrature
//! exactness, the spectral↔grid round trip, and the ladder algebra.

use lenscat::basis::BasisTable;
use lenscat::field::{analyze, gradient, position_product, synthesize};
use num_complex::Complex64;

fn main() {
    println!("== eigenvalue clusters ==");
    for n in 1..=3usize {
        let basis = BasisTable::build_default(n, 6).unwrap();
        let sizes: Vec<(usize, usize)> = basis.clusters().iter().map(|c| (c.j, c.len())).collect();
        println!(
            "n={n}: basis {:3} modes, cluster sizes {:?}",
            basis.len(),
            sizes
        );
    }

    println!("\n== quadrature exactness (n=2, J=32) ==");
    let basis = BasisTable::build_default(2, 32).unwrap();
    let m = basis.quad_points();
    let degrees = basis.max_degree() + 1;
    let mut worst = 0.0f64;
    for a in 0..degrees {
        for b in 0..degrees {
            let mut s = 0.0;
            for i in 0..m {
                s += basis.weights()[i]
                    * basis.values_of_degree(a)[i]
                    * basis.values_of_degree(b)[i];
            }
            worst = worst.max((s - if a == b { 1.0 } else { 0.0 }).abs());
        }
    }
    println!("per-axis Gram deviation from identity: {worst:.3e}");

    let coeffs: Vec<Complex64> = (0..basis.len())
        .map(|k| Complex64::new((0.3 * k as f64).sin(), (0.7 * k as f64).cos()))
        .collect();
    let f = lenscat::SpectralField::new(basis.clone(), coeffs);
    let back = analyze(&synthesize(&f));
    let err: f64 = f
        .coeffs()
        .iter()
        .zip(back.coeffs())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    println!(
        "analyze∘synthesize round trip: {:.3e} (relative)",
        err / f.norm_l2()
    );

    println!("\n== ladder operators (n=1) ==");
    let basis1 = BasisTable::build_default(1, 8).unwrap();
    let phi0 = basis1.spectral_unit(0);
    let phi1 = synthesize(&basis1.spectral_unit(1));
    let d = gradient(&phi0);
    let x = position_product(&phi0, 0);
    let sqrt2 = std::f64::consts::SQRT_2;
    let derr = d[0]
        .values()
        .iter()
        .zip(phi1.values())
        .map(|(a, b)| (a + b / sqrt2).norm())
        .fold(0.0, f64::max);
    let xerr = x
        .values()
        .iter()
        .zip(phi1.values())
        .map(|(a, b)| (a - b / sqrt2).norm())
        .fold(0.0, f64::max);
    println!("d/dx φ₀ + φ₁/√2:  {derr:.3e}");
    println!("x·φ₀  − φ₁/√2:  {xerr:.3e}");

    println!("\n== grid value of the ground state ==");
    let basis2 = BasisTable::build_default(2, 8).unwrap();
    let g = synthesize(&basis2.spectral_unit(0));
    let mq = basis2.quad_points();
    let origin = (mq / 2) * mq + mq / 2;
    println!(
        "φ₀(0) = {:.12} (closed form π^(-1/2) = {:.12})",
        g.values()[origin].re,
        std::f64::consts::PI.powf(-0.5)
    );
}
