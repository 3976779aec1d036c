//! The full single-trajectory pipeline: draw → remainder evolution on
//! [0, π/4] → diagnostics → scattering state, with every artifact written to
//! `./out/trial-demo`.

use lenscat::lab::{persist_trial, run_trial, ExperimentConfig, LabContext};

fn main() {
    let config = ExperimentConfig {
        n: 2,
        s: 0.2,
        clusters: 16,
        dtau: 1e-3,
        seeds: vec![42],
        ..Default::default()
    };
    let ctx = LabContext::prepare(config).unwrap();
    println!(
        "basis: {} modes, grid {}^{} = {} points, Δτ = {}",
        ctx.basis.len(),
        ctx.basis.quad_points(),
        ctx.config.n,
        ctx.basis.grid_len(),
        ctx.config.dtau
    );

    let out = run_trial(&ctx, 42).unwrap();
    let r = &out.record;
    println!("valid: {}", r.valid);
    if let Some(k) = &r.k_statistic {
        println!("K statistic: {:.4} ({} τ samples)", k.total, k.tau_samples);
    }
    println!(
        "‖u₀‖_Hs = {:.4}, ‖u₀‖_H1 = {:.4}",
        r.norms.u0_hs, r.norms.u0_h1
    );
    println!(
        "sup ‖v‖_H1 = {:.4}, ‖v(π/4)‖_H1 = {:.4}, total-field mass drift {:.2e}",
        r.norms.sup_v_h1, r.norms.v_end_h1, r.norms.mass_drift
    );
    if let Some(n) = r.r0_plus_norm_h1 {
        println!("scattering state: ‖r₀⁺‖_H1 = {n:.4}");
    }
    if let Some(rate) = &r.rate {
        println!(
            "endpoint rate: μ = {:.4} (R² = {:.4}, window t ∈ [{:.1}, {:.1}], floor {:.2e})",
            rate.mu, rate.r_squared, rate.window.0, rate.window.1, rate.floor
        );
    }

    let dir = std::path::Path::new("out/trial-demo");
    persist_trial(dir, &ctx, &out).unwrap();
    println!("\nartifacts in {}:", dir.display());
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    for n in names {
        println!("  {n}");
    }
}
