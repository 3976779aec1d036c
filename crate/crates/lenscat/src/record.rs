//! Machine-readable trial and ensemble records.
//!
//! One JSON record per trajectory (field order fixed by the struct, no
//! timestamps — identical configs and seeds reproduce identical bytes), a CSV
//! time series per trial, and an order-independent ensemble summary.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{KStatistic, RateFit, TailFit};
use crate::evolution::Formulation;
use crate::measure::LawKind;

/// Resolved provenance block embedded in every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialMeta {
    pub seed: u64,
    pub n: usize,
    pub p: f64,
    pub s: f64,
    pub delta_reg: f64,
    #[serde(rename = "J")]
    pub clusters: usize,
    #[serde(rename = "M")]
    pub quad: usize,
    pub dt: f64,
    pub law: LawKind,
    pub kappa: f64,
    pub c_adm: f64,
    pub formulation: Formulation,
    pub tau_end: f64,
    pub k_tau_samples: usize,
    pub dealias: bool,
    /// Eigenbasis the measure is built on.
    pub basis: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormBlock {
    pub u0_hs: f64,
    pub u0_h1: f64,
    pub u0_l4: f64,
    pub sup_v_h1: f64,
    pub v_end_h1: f64,
    pub mass_drift: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyCeilingBlock {
    pub k_total: f64,
    pub ceiling: f64,
    pub sup_v_h1: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub meta: TrialMeta,
    pub valid: bool,
    pub invalid_reason: Option<String>,
    #[serde(rename = "K")]
    pub k_statistic: Option<KStatistic>,
    /// `[τ, ℰ(τ)]` pairs at the checkpoints.
    pub energy: Vec<[f64; 2]>,
    pub norms: NormBlock,
    #[serde(rename = "r0_plus_norm_H1")]
    pub r0_plus_norm_h1: Option<f64>,
    pub rate: Option<RateFit>,
    pub enest: Option<EnergyCeilingBlock>,
}

impl TrialRecord {
    pub fn to_json(&self) -> crate::error::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// One CSV row per checkpoint.
#[derive(Debug, Clone, Copy)]
pub struct SeriesRow {
    pub tau: f64,
    pub t: f64,
    pub e_h1: f64,
    pub energy: f64,
    pub mass: f64,
}

pub fn write_series_csv<W: Write>(mut w: W, rows: &[SeriesRow]) -> std::io::Result<()> {
    writeln!(w, "tau,t,E_H1,energy,mass")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt(r.tau),
            fmt(r.t),
            fmt(r.e_h1),
            fmt(r.energy),
            fmt(r.mass)
        )?;
    }
    Ok(())
}

fn fmt(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.17e}")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Quantiles {
    pub q05: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub q95: f64,
}

impl Quantiles {
    pub fn of(samples: &[f64]) -> Self {
        use crate::diagnostics::quantile;
        Self {
            q05: quantile(samples, 0.05),
            q25: quantile(samples, 0.25),
            q50: quantile(samples, 0.50),
            q75: quantile(samples, 0.75),
            q95: quantile(samples, 0.95),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub trials: usize,
    pub valid: usize,
    /// Reason → count, sorted by reason.
    pub failure_reasons: std::collections::BTreeMap<String, usize>,
    pub k_quantiles: Option<Quantiles>,
    pub u0_hs_quantiles: Option<Quantiles>,
    pub rate_mu_quantiles: Option<Quantiles>,
    pub tail: Option<TailFit>,
    /// Seeds in ascending order; the summary is a function of the set.
    pub seeds: Vec<u64>,
}
