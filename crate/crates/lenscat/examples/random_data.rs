//! Admissible profiles and randomized draws: the cluster-equidistribution
//! check, sub-Gaussian certificates, norm statistics, and the regularity
//! ceiling along a truncation ladder.

use lenscat::basis::BasisTable;
use lenscat::diagnostics::{quantile, regularity_ceiling, sobolev_norm, tail_fit};
use lenscat::measure::{build_gamma, check_admissible, mgf_audit, sample, LawKind, RandomLaw};

fn main() {
    let basis = BasisTable::build_default(2, 16).unwrap();
    let gamma = build_gamma(&basis, 0.2, 0.05);
    println!(
        "profile: n=2, s=0.2, δ_reg=0.05, J=16 → {} modes",
        basis.len()
    );
    let report = check_admissible(&gamma);
    println!(
        "admissibility: max per-cluster ratio {:.6} (equal-in-cluster design)",
        report.max_ratio
    );

    println!("\n== sub-Gaussian certificates (κ = 1/2) ==");
    let grid: Vec<f64> = (-50..=50).map(|i| i as f64 * 0.1).collect();
    for kind in [LawKind::Gaussian, LawKind::Rademacher, LawKind::Uniform] {
        let law = RandomLaw::new(kind);
        println!(
            "{:<11} max E[e^(cg)]·e^(−κc²) = {:.9}",
            law.kind.name(),
            mgf_audit(&law, &grid)
        );
    }

    println!("\n== draw statistics (1000 gaussian seeds) ==");
    let law = RandomLaw::new(LawKind::Gaussian);
    let norms: Vec<f64> = (0..1000)
        .map(|seed| sobolev_norm(&sample(&gamma, &law, seed).u0, 0.2))
        .collect();
    println!(
        "‖u₀‖_H^0.2 quantiles: q25 {:.4}  q50 {:.4}  q75 {:.4}  q95 {:.4}",
        quantile(&norms, 0.25),
        quantile(&norms, 0.50),
        quantile(&norms, 0.75),
        quantile(&norms, 0.95)
    );
    let thresholds: Vec<f64> = [0.5, 0.6, 0.7, 0.8, 0.9, 0.95]
        .iter()
        .map(|&q| quantile(&norms, q))
        .collect();
    let fit = tail_fit(&norms, &thresholds);
    println!(
        "tail: slope of ln P(‖u₀‖ > K) vs K² = {:.4} (R² = {:.4}) — sub-Gaussian shape",
        fit.slope, fit.r_squared
    );

    println!("\n== regularity ceiling along J ∈ {{8, 16, 32, 64}} ==");
    let seeds: Vec<u64> = (0..9).collect();
    let ladder = [8usize, 16, 32, 64];
    for (eps, label) in [(0.0, "ε = 0"), (1.6, "ε = 4δ (δ = 0.4)")] {
        let rep = regularity_ceiling(2, 0.0, 0.4, &law, &seeds, &ladder, eps).unwrap();
        let medians: Vec<String> = rep
            .medians
            .iter()
            .map(|(j, v)| format!("J{j}: {v:.3}"))
            .collect();
        println!("{label:<18} {:?} → {:?}", medians, rep.verdict);
    }

    println!("\n== determinism ==");
    let a = sample(&gamma, &law, 424242);
    let b = sample(&gamma, &law, 424242);
    println!(
        "same seed twice: coefficients identical = {}",
        a.u0.coeffs() == b.u0.coeffs()
    );
}
