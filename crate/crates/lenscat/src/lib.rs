//! Hermite-spectral laboratory for nonlinear Schrödinger dynamics in the
//! lens frame.
//!
//! The harmonic oscillator `H = -Δ + |x|²` is diagonal in the tensor Hermite
//! basis, and the lens change of variables maps the long-time behaviour of
//! cubic (and general-power) NLS on ℝⁿ onto a non-autonomous equation on the
//! compact time window `(-π/4, π/4)`. Everything in this crate lives in that
//! frame: fields are Hermite coefficient vectors, the linear flow is an exact
//! phase multiplication, and physical-time quantities are read off through the
//! lens maps.
//!
//! The crate is organised as a library with one thin command-line binary.
//! Each major capability has a runnable program under `examples/`:
//!
//! * `basis_tour` — eigenvalue clusters, quadrature exactness, ladder algebra
//! * `propagator_check` — spectral propagator vs. the oscillator kernel
//! * `lens_identities` — time maps, isometry, conjugation, rate transfer
//! * `random_data` — admissible profiles, randomized draws, tail statistics
//! * `splitting_convergence` — Strang order, mass drift, integral-equation residual
//! * `energy_structure` — energy monotonicity and the a-priori ceiling
//! * `single_trial` — the full randomized-trajectory pipeline
//! * `scattering_rates` — endpoint decay-rate fits
//! * `ensemble_stats` — seeded Monte Carlo ensembles

pub mod basis;
pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod field;
pub mod lab;
pub mod lens;
pub mod measure;
pub mod propagator;
pub mod record;
mod rng;
pub mod snapshot;

pub use basis::{BasisTable, MultiIndex};
pub use error::{Error, Result};
pub use evolution::{EvolutionConfig, Formulation, Trajectory};
pub use field::{GridField, SpectralField};
pub use lab::ExperimentConfig;
pub use measure::{Draw, GammaProfile, LawKind, RandomLaw};

#[cfg(test)]
pub(crate) mod testutil {
    use std::sync::Arc;

    use num_complex::Complex64;

    use crate::basis::BasisTable;
    use crate::field::SpectralField;

    fn mix(seed: u64) -> u64 {
        let mut z = seed.wrapping_add(0x9E3779B97F4A7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Deterministic full-band random coefficients in the unit box.
    pub(crate) fn random_field(basis: &Arc<BasisTable>, seed: u64) -> SpectralField {
        let coeffs = (0..basis.len())
            .map(|k| {
                let a = mix(seed ^ ((k as u64) << 1));
                let b = mix(seed ^ ((k as u64) << 1 | 1));
                Complex64::new(
                    (a >> 11) as f64 / (1u64 << 53) as f64 - 0.5,
                    (b >> 11) as f64 / (1u64 << 53) as f64 - 0.5,
                )
            })
            .collect();
        SpectralField::new(basis.clone(), coeffs)
    }

    /// Random coefficients damped exponentially in the total degree; stays
    /// well inside the resolved band.
    pub(crate) fn smooth_random_field(
        basis: &Arc<BasisTable>,
        seed: u64,
        decay: f64,
    ) -> SpectralField {
        let mut f = random_field(basis, seed);
        for (k, c) in f.coeffs_mut().iter_mut().enumerate() {
            let deg = basis.index(k).total_degree() as f64;
            *c *= (-decay * deg).exp();
        }
        f
    }
}
