//! The energy functional along trajectories: strict decrease for the
//! deterministic equation on [0, π/4], the uniform ℋ¹ envelope, and the
//! a-priori ceiling K⁴e^{2π(K²+1)} on randomized trials.

use lenscat::basis::BasisTable;
use lenscat::diagnostics::{
    energy, energy_audit, energy_series, k_statistic, lebesgue_norm, sobolev_norm,
};
use lenscat::evolution::{evolve, EvolutionConfig, Formulation};
use lenscat::field::synthesize;
use lenscat::measure::{build_gamma, sample, LawKind, RandomLaw};
use num_complex::Complex64;

fn main() {
    println!("== deterministic mode: energy decreases on [0, π/4] ==");
    for (n, j) in [(3usize, 10usize), (4, 8)] {
        let basis = BasisTable::build_default(n, j).unwrap();
        let phi = basis.spectral_unit(0).scale(Complex64::new(0.5, 0.0));
        let mut cfg = EvolutionConfig::new(n);
        cfg.formulation = Formulation::Deterministic;
        cfg.dtau = 1e-3;
        cfg.checkpoint_stride = 98;
        let traj = evolve(&phi, None, &cfg).unwrap();
        let series = energy_series(&traj, None);
        print!("n={n}: ℰ = ");
        for s in series.iter().step_by(2) {
            print!("{:.6} ", s.total);
        }
        let audit = energy_audit(&traj, None, None);
        println!(
            "\n     max upward step {:.2e}, sup ‖w‖_H1 {:.6} (cap {:.6})",
            audit.max_step_increase,
            audit.sup_v_h1,
            (sobolev_norm(&phi, 1.0).powi(2)
                + 0.5 * lebesgue_norm(&synthesize(&phi), 4.0).unwrap().value.powi(4))
            .sqrt()
        );
        if n == 4 {
            // the mixed norm that controls the critical-case continuation
            let l4l8 = lenscat::diagnostics::strichartz_norm(&traj, 4.0, 8.0, false).unwrap();
            println!("     ‖w‖_L4L8 over [0, π/4] = {l4l8:.6}");
        }
    }

    println!("\n== remainder mode: initial identity and the K ceiling ==");
    let basis = BasisTable::build_default(2, 16).unwrap();
    let gamma = build_gamma(&basis, 0.2, 0.05);
    let draw = sample(&gamma, &RandomLaw::new(LawKind::Gaussian), 11);
    let mut cfg = EvolutionConfig::new(2);
    cfg.formulation = Formulation::Remainder;
    cfg.dtau = 2e-3;
    cfg.checkpoint_stride = 98;

    let e0 = energy(&basis.spectral_zero(), Some(&draw.u0), 0.0, &cfg);
    let l4 = lebesgue_norm(&synthesize(&draw.u0), 4.0).unwrap().value;
    println!(
        "ℰ(0) = {:.9}  vs  ¼‖u₀‖⁴_L4 = {:.9}",
        e0.total,
        l4.powi(4) / 4.0
    );

    let traj = evolve(&basis.spectral_zero(), Some(&draw.u0), &cfg).unwrap();
    let k = k_statistic(&draw.u0, 256).unwrap();
    let audit = energy_audit(&traj, Some(&draw.u0), Some(k.total));
    println!("K = {:.4}; per-term:", k.total);
    for term in &k.terms {
        println!("  {:<16} {:.4}", term.key, term.value);
    }
    println!(
        "sup ‖v‖_H1 = {:.4} ≤ ceiling K⁴e^(2π(K²+1)) = {:.3e}: {}",
        audit.sup_v_h1,
        audit.ceiling.unwrap(),
        audit.ceiling_satisfied.unwrap()
    );
}
