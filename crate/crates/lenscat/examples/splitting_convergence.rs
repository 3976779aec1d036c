//! The split integrator under the microscope: second-order self-convergence,
//! mass conservation, time reversal, the w = ξ + v decomposition, and the
//! residual of the integral form of the remainder equation.

use lenscat::basis::BasisTable;
use lenscat::evolution::{duhamel_residual, evolve, EvolutionConfig, Formulation};
use lenscat::measure::{build_gamma, sample, LawKind, RandomLaw};
use lenscat::propagator::linear_propagate;
use num_complex::Complex64;

fn smooth(basis: &std::sync::Arc<BasisTable>, decay: f64) -> lenscat::SpectralField {
    let mut f = basis.spectral_zero();
    for (k, c) in f.coeffs_mut().iter_mut().enumerate() {
        let deg = basis.index(k).total_degree() as f64;
        *c = Complex64::new((1.1 * k as f64).sin(), (0.7 * k as f64).cos()) * (-decay * deg).exp();
    }
    f
}

fn main() {
    let basis = BasisTable::build_default(2, 12).unwrap();
    let f = smooth(&basis, 0.8).scale(Complex64::new(2.0, 0.0));

    println!("== self-convergence (n=2, deterministic, τ ∈ [0, 0.5]) ==");
    let run = |dtau: f64| {
        let mut cfg = EvolutionConfig::new(2);
        cfg.formulation = Formulation::Deterministic;
        cfg.tau_span = (0.0, 0.5);
        cfg.dtau = dtau;
        evolve(&f, None, &cfg).unwrap().final_state().clone()
    };
    let reference = run(0.0025);
    let mut prev: Option<f64> = None;
    for dtau in [0.02, 0.01, 0.005] {
        let err = run(dtau).sub(&reference).unwrap().norm_l2();
        match prev {
            Some(p) => println!("Δτ = {dtau:6}: error {err:.3e}  (factor {:.2})", p / err),
            None => println!("Δτ = {dtau:6}: error {err:.3e}"),
        }
        prev = Some(err);
    }

    println!("\n== mass conservation over [0, π/4] ==");
    let basis32 = BasisTable::build_default(2, 32).unwrap();
    let g = smooth(&basis32, 0.8);
    let mut cfg = EvolutionConfig::new(2);
    cfg.formulation = Formulation::Deterministic;
    cfg.dtau = 1e-3;
    cfg.checkpoint_stride = 256;
    let traj = evolve(&g, None, &cfg).unwrap();
    let m0 = traj.step_log[0].mass;
    let drift = traj
        .step_log
        .iter()
        .map(|e| (e.mass - m0).abs())
        .fold(0.0, f64::max);
    println!(
        "relative drift over {} steps: {:.3e}",
        traj.step_log.len() - 1,
        drift / m0
    );

    println!("\n== time reversal ==");
    let mut fwd = EvolutionConfig::new(2);
    fwd.formulation = Formulation::FullField;
    fwd.dtau = 5e-3;
    fwd.tau_span = (0.0, 0.3);
    let out = evolve(&f, None, &fwd).unwrap();
    let mut bwd = fwd;
    bwd.tau_span = (0.3, 0.0);
    let back = evolve(out.final_state(), None, &bwd).unwrap();
    println!(
        "‖roundtrip − initial‖ = {:.3e}",
        back.final_state().sub(&f).unwrap().norm_l2()
    );

    println!("\n== decomposition w = ξ + v (gaussian draw) ==");
    let basis16 = BasisTable::build_default(2, 16).unwrap();
    let gamma = build_gamma(&basis16, 0.2, 0.05);
    let draw = sample(&gamma, &RandomLaw::new(LawKind::Gaussian), 7);
    let mut wcfg = EvolutionConfig::new(2);
    wcfg.formulation = Formulation::FullField;
    wcfg.dtau = 2e-3;
    wcfg.checkpoint_stride = 98;
    let w_traj = evolve(&draw.u0, None, &wcfg).unwrap();
    let mut vcfg = wcfg;
    vcfg.formulation = Formulation::Remainder;
    let v_traj = evolve(&basis16.spectral_zero(), Some(&draw.u0), &vcfg).unwrap();
    let mut worst = 0.0f64;
    for ((tau, w), v) in w_traj.taus.iter().zip(&w_traj.states).zip(&v_traj.states) {
        let xi = linear_propagate(&draw.u0, *tau);
        worst = worst.max(w.sub(&xi.add(v).unwrap()).unwrap().norm_l2());
    }
    println!("max ‖w − ξ − v‖ over checkpoints: {worst:.3e}");

    println!("\n== Duhamel residual of the remainder equation (n=2) ==");
    for dtau in [2e-3, 1e-3] {
        let mut cfg = EvolutionConfig::new(2);
        cfg.formulation = Formulation::Remainder;
        cfg.dtau = dtau;
        cfg.checkpoint_stride = 128;
        let traj = evolve(&basis16.spectral_zero(), Some(&draw.u0), &cfg).unwrap();
        let res = duhamel_residual(&traj, Some(&draw.u0)).unwrap();
        let max_res = res.iter().map(|&(_, r)| r).fold(0.0, f64::max);
        let max_v = traj.step_log.iter().map(|e| e.mass).fold(0.0, f64::max);
        println!(
            "Δτ = {dtau:.1e}: max ‖v − Ξ(v)‖ = {max_res:.3e}  ({:.2e} relative to max ‖v‖)",
            max_res / max_v
        );
    }
}
