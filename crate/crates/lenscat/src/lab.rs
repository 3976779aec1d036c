//! Experiment orchestration: resolved configuration, the single-trajectory
//! pipeline, seeded Monte Carlo ensembles with an order-independent merge,
//! refinement-ladder rate studies, and the quick invariant battery behind
//! `lenscat check`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::BasisTable;
use crate::diagnostics::{
    self, energy_series, extract_scattering, k_statistic, rate_fit, sobolev_norm, tail_fit,
    RateFit, TailFit,
};
use crate::error::{Error, Result};
use crate::evolution::{evolve, EvolutionConfig, Formulation, Trajectory};
use crate::field::synthesize;
use crate::lens::t_of_tau;
use crate::measure::{build_gamma, check_admissible, sample, GammaProfile, LawKind, RandomLaw};
use crate::propagator::linear_propagate;
use crate::record::{
    write_series_csv, EnergyCeilingBlock, EnsembleSummary, NormBlock, Quantiles, SeriesRow,
    TrialMeta, TrialRecord,
};
use crate::snapshot::{write_snapshot, SnapshotMeta};

/// Worker-count cap honored by every parallel map in this module.
pub const THREADS_ENV: &str = "LENSCAT_THREADS";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub n: usize,
    pub p: f64,
    /// Declared profile regularity.
    pub s: f64,
    pub delta_reg: f64,
    /// Cluster cutoff J.
    pub clusters: usize,
    /// Quadrature points per axis; `None` resolves to `2·d_max+1`
    /// (or `6·d_max+1` with `dealias`).
    pub quad: Option<usize>,
    pub dtau: f64,
    pub law: LawKind,
    pub c_adm: f64,
    pub dealias: bool,
    /// Gates the large four-dimensional grids.
    pub big: bool,
    pub k_tau_samples: usize,
    pub checkpoint_stride: usize,
    pub guard_factor: f64,
    /// Run the half-step companion needed for the rate-fit error floor.
    pub compute_rate: bool,
    pub seeds: Vec<u64>,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 2,
            p: 4.0,
            s: 0.2,
            delta_reg: 0.05,
            clusters: 16,
            quad: None,
            dtau: 1e-3,
            law: LawKind::Gaussian,
            c_adm: 10.0,
            dealias: false,
            big: false,
            k_tau_samples: 256,
            checkpoint_stride: 0,
            guard_factor: 1e3,
            compute_rate: true,
            seeds: vec![1],
            out_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// Non-fatal advisories: the `(n, s)` range of the admissible table and
    /// the supported power window.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let ok = match self.n {
            2 => self.s > 0.0,
            3 => self.s >= -0.25,
            4 => self.s >= -0.5,
            _ => true,
        };
        if !ok {
            out.push(format!(
                "s = {} lies outside the admissible range for n = {}",
                self.s, self.n
            ));
        }
        let lo = 2.0 + 4.0 / self.n as f64;
        if self.p < lo || self.p > 4.0 {
            out.push(format!(
                "power p = {} outside the supported window [{lo}, 4]",
                self.p
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=4).contains(&self.n) {
            return Err(Error::InvalidConfig(format!(
                "trials need n ∈ {{2,3,4}}, got {}",
                self.n
            )));
        }
        if self.n == 4 && !self.big {
            return Err(Error::InvalidConfig(
                "four-dimensional runs are gated behind --big (grids start at ~3×10⁵ points)"
                    .into(),
            ));
        }
        if self.dtau <= 0.0 {
            return Err(Error::InvalidConfig("dt must be positive".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidConfig("need at least one seed".into()));
        }
        Ok(())
    }

    pub fn build_basis(&self) -> Result<std::sync::Arc<BasisTable>> {
        let budget = if self.big {
            1 << 26
        } else {
            crate::basis::DEFAULT_GRID_BUDGET
        };
        match self.quad {
            Some(m) => BasisTable::build_with_budget(self.n, self.clusters, m, budget),
            None => {
                let d_max = self
                    .clusters
                    .checked_sub(self.n / 2)
                    .ok_or(Error::EmptyBasis {
                        n: self.n,
                        j: self.clusters,
                    })?;
                let m = if self.dealias {
                    6 * d_max + 1
                } else {
                    2 * d_max + 1
                };
                BasisTable::build_with_budget(self.n, self.clusters, m, budget)
            }
        }
    }

    pub fn evolution_config(&self) -> EvolutionConfig {
        EvolutionConfig {
            n: self.n,
            p: self.p,
            dtau: self.dtau,
            tau_span: (0.0, std::f64::consts::FRAC_PI_4),
            formulation: Formulation::Remainder,
            guard_factor: self.guard_factor,
            checkpoint_stride: self.checkpoint_stride,
        }
    }
}

/// Shared immutable state for a batch of trials.
pub struct LabContext {
    pub config: ExperimentConfig,
    pub basis: std::sync::Arc<BasisTable>,
    pub gamma: GammaProfile,
    pub law: RandomLaw,
}

impl LabContext {
    pub fn prepare(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let basis = config.build_basis()?;
        let gamma = build_gamma(&basis, config.s, config.delta_reg);
        let report = check_admissible(&gamma);
        if !report.passes(config.c_adm) {
            return Err(Error::InvalidConfig(format!(
                "built profile violates admissibility: ratio {}",
                report.max_ratio
            )));
        }
        let law = RandomLaw::new(config.law);
        Ok(Self {
            config,
            basis,
            gamma,
            law,
        })
    }

    fn trial_meta(&self, seed: u64) -> TrialMeta {
        TrialMeta {
            seed,
            n: self.config.n,
            p: self.config.p,
            s: self.config.s,
            delta_reg: self.config.delta_reg,
            clusters: self.config.clusters,
            quad: self.basis.quad_points(),
            dt: self.config.dtau,
            law: self.config.law,
            kappa: self.law.kappa,
            c_adm: self.config.c_adm,
            formulation: Formulation::Remainder,
            tau_end: std::f64::consts::FRAC_PI_4,
            k_tau_samples: self.config.k_tau_samples,
            dealias: self.config.dealias,
            basis: "hermite-tensor".into(),
        }
    }
}

/// Output of one randomized trajectory: the record plus the pieces callers
/// may want to persist or inspect further.
pub struct TrialOutput {
    pub record: TrialRecord,
    pub trajectory: Trajectory,
    pub series: Vec<SeriesRow>,
    pub r0_plus: Option<crate::field::SpectralField>,
}

/// The single-trajectory pipeline: draw, remainder evolution on `[0, π/4]`,
/// diagnostics, optional half-step companion for the rate-fit floor.
pub fn run_trial(ctx: &LabContext, seed: u64) -> Result<TrialOutput> {
    let cfg = &ctx.config;
    let draw = sample(&ctx.gamma, &ctx.law, seed);
    let u0 = &draw.u0;
    let k_stat = k_statistic(u0, cfg.k_tau_samples)?;

    let evo = cfg.evolution_config();
    let traj = evolve(&ctx.basis.spectral_zero(), Some(u0), &evo)?;

    let u0_grid = synthesize(u0);
    let u0_l4 = diagnostics::lebesgue_norm(&u0_grid, 4.0)?.value;
    let mass0 = u0.norm_l2();
    let energy = energy_series(&traj, Some(u0));
    let sup_v_h1 = traj.step_log.iter().map(|e| e.h1).fold(0.0, f64::max);

    // total-field mass ‖ξ+v‖ at the checkpoints; conserved by the full flow
    let mut series = Vec::with_capacity(traj.taus.len());
    let mut mass_drift = 0.0f64;
    for ((&tau, state), es) in traj.taus.iter().zip(&traj.states).zip(&energy) {
        let xi = linear_propagate(u0, tau);
        let w = xi.add(state)?;
        let mass = w.norm_l2();
        mass_drift = mass_drift.max((mass - mass0).abs());
        series.push(SeriesRow {
            tau,
            t: t_of_tau(tau),
            e_h1: sobolev_norm(state, 1.0),
            energy: es.total,
            mass,
        });
    }

    let mut record = TrialRecord {
        meta: ctx.trial_meta(seed),
        valid: traj.valid,
        invalid_reason: traj.invalid_reason.clone(),
        k_statistic: Some(k_stat.clone()),
        energy: energy.iter().map(|e| [e.tau, e.total]).collect(),
        norms: NormBlock {
            u0_hs: sobolev_norm(u0, cfg.s),
            u0_h1: sobolev_norm(u0, 1.0),
            u0_l4,
            sup_v_h1,
            v_end_h1: sobolev_norm(traj.final_state(), 1.0),
            mass_drift,
        },
        r0_plus_norm_h1: None,
        rate: None,
        enest: None,
    };

    if !traj.valid {
        return Ok(TrialOutput {
            record,
            trajectory: traj,
            series,
            r0_plus: None,
        });
    }

    let r0 = extract_scattering(&traj)?;
    record.r0_plus_norm_h1 = Some(sobolev_norm(&r0, 1.0));

    let ceiling = k_stat.total.powi(4)
        * (2.0 * std::f64::consts::PI * (k_stat.total * k_stat.total + 1.0)).exp();
    record.enest = Some(EnergyCeilingBlock {
        k_total: k_stat.total,
        ceiling,
        sup_v_h1,
        satisfied: sup_v_h1 <= ceiling,
    });

    if cfg.compute_rate {
        let mut fine_cfg = evo;
        fine_cfg.dtau = evo.dtau / 2.0;
        let fine = evolve(&ctx.basis.spectral_zero(), Some(u0), &fine_cfg)?;
        let floor = refinement_floor(&traj, &fine)?;
        record.rate = Some(rate_fit(&traj, &r0, floor));
    }

    Ok(TrialOutput {
        record,
        trajectory: traj,
        series,
        r0_plus: Some(r0),
    })
}

/// Largest `ℋ¹` distance between the rotated states of two resolutions at
/// their common checkpoints; the discretization floor for rate fitting.
pub fn refinement_floor(coarse: &Trajectory, fine: &Trajectory) -> Result<f64> {
    let mut floor = 0.0f64;
    let mut fi = 0usize;
    for (&tau, state) in coarse.taus.iter().zip(&coarse.states) {
        while fi < fine.taus.len() && fine.taus[fi] < tau - 1e-12 {
            fi += 1;
        }
        if fi >= fine.taus.len() || (fine.taus[fi] - tau).abs() > 1e-12 {
            continue;
        }
        let a = linear_propagate(state, -tau);
        let b = linear_propagate(&fine.states[fi], -tau);
        floor = floor.max(sobolev_norm(&a.sub(&b)?, 1.0));
    }
    Ok(floor)
}

/// Writes the record, CSV series, and endpoint snapshots for one trial.
pub fn persist_trial(dir: &Path, ctx: &LabContext, out: &TrialOutput) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let seed = out.record.meta.seed;
    std::fs::write(
        dir.join(format!("trial-{seed}.json")),
        out.record.to_json()?,
    )?;
    let mut csv = Vec::new();
    write_series_csv(&mut csv, &out.series)?;
    std::fs::write(dir.join(format!("trial-{seed}-series.csv")), csv)?;

    let meta = SnapshotMeta {
        n: ctx.config.n,
        p: ctx.config.p,
        clusters: ctx.config.clusters,
        quad: ctx.basis.quad_points(),
        dt: ctx.config.dtau,
        tau: out.trajectory.final_tau(),
        formulation: Formulation::Remainder,
        seed,
    };
    write_snapshot(
        &dir.join(format!("trial-{seed}-v-end.lens1")),
        &meta,
        out.trajectory.final_state().coeffs(),
    )?;
    if let Some(r0) = &out.r0_plus {
        write_snapshot(
            &dir.join(format!("trial-{seed}-r0-plus.lens1")),
            &meta,
            r0.coeffs(),
        )?;
    }
    Ok(())
}

fn worker_count(jobs: usize) -> usize {
    let avail = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(avail);
    avail.min(cap).min(jobs).max(1)
}

/// Index-ordered parallel map over seeds: results are merged by input
/// position, so the outcome is independent of the worker count.
pub fn parallel_map<T: Send, F: Fn(usize) -> T + Sync>(jobs: usize, f: F) -> Vec<T> {
    let workers = worker_count(jobs);
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<T>>> = (0..jobs).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs {
                    break;
                }
                let value = f(i);
                *slots[i].lock().unwrap() = Some(value);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("worker filled every slot"))
        .collect()
}

/// Runs every seed (in parallel, shared immutable basis), persists per-trial
/// artifacts when an output directory is set, and merges the records into an
/// order-independent summary. A failed trial becomes an invalid record; it
/// never aborts the ensemble.
pub fn run_ensemble(ctx: &LabContext) -> Result<(Vec<TrialRecord>, EnsembleSummary)> {
    let mut seeds = ctx.config.seeds.clone();
    seeds.sort_unstable();
    seeds.dedup();

    let records: Vec<TrialRecord> = parallel_map(seeds.len(), |i| {
        let seed = seeds[i];
        match run_trial(ctx, seed) {
            Ok(out) => {
                if let Some(dir) = &ctx.config.out_dir {
                    if let Err(e) = persist_trial(dir, ctx, &out) {
                        let mut rec = out.record;
                        rec.valid = false;
                        rec.invalid_reason = Some(format!("persist failed: {e}"));
                        return rec;
                    }
                }
                out.record
            }
            Err(e) => TrialRecord {
                meta: ctx.trial_meta(seed),
                valid: false,
                invalid_reason: Some(e.to_string()),
                k_statistic: None,
                energy: Vec::new(),
                norms: NormBlock {
                    u0_hs: f64::NAN,
                    u0_h1: f64::NAN,
                    u0_l4: f64::NAN,
                    sup_v_h1: f64::NAN,
                    v_end_h1: f64::NAN,
                    mass_drift: f64::NAN,
                },
                r0_plus_norm_h1: None,
                rate: None,
                enest: None,
            },
        }
    });

    let summary = summarize(&seeds, &records);
    if let Some(dir) = &ctx.config.out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(
            dir.join("ensemble.json"),
            serde_json::to_string_pretty(&summary)?,
        )?;
    }
    Ok((records, summary))
}

/// Deterministic function of the set of records (callers sort by seed).
pub fn summarize(seeds: &[u64], records: &[TrialRecord]) -> EnsembleSummary {
    let valid: Vec<&TrialRecord> = records.iter().filter(|r| r.valid).collect();
    let mut failure_reasons = BTreeMap::new();
    for r in records.iter().filter(|r| !r.valid) {
        let reason = r.invalid_reason.clone().unwrap_or_else(|| "unknown".into());
        *failure_reasons.entry(reason).or_insert(0) += 1;
    }
    let k_vals: Vec<f64> = valid
        .iter()
        .filter_map(|r| r.k_statistic.as_ref().map(|k| k.total))
        .collect();
    let hs_vals: Vec<f64> = valid.iter().map(|r| r.norms.u0_hs).collect();
    let mu_vals: Vec<f64> = valid
        .iter()
        .filter_map(|r| r.rate.as_ref())
        .filter(|r| r.verdict == diagnostics::RateVerdict::Ok)
        .map(|r| r.mu)
        .collect();

    let tail = tail_from_norms(&hs_vals);

    EnsembleSummary {
        trials: records.len(),
        valid: valid.len(),
        failure_reasons,
        k_quantiles: (!k_vals.is_empty()).then(|| Quantiles::of(&k_vals)),
        u0_hs_quantiles: (!hs_vals.is_empty()).then(|| Quantiles::of(&hs_vals)),
        rate_mu_quantiles: (!mu_vals.is_empty()).then(|| Quantiles::of(&mu_vals)),
        tail,
        seeds: seeds.to_vec(),
    }
}

/// Sub-Gaussian tail fit of the draw norms with thresholds at the upper
/// quantiles.
pub fn tail_from_norms(norms: &[f64]) -> Option<TailFit> {
    if norms.len() < 50 {
        return None;
    }
    let thresholds: Vec<f64> = [0.5, 0.6, 0.7, 0.8, 0.9, 0.95]
        .iter()
        .map(|&q| diagnostics::quantile(norms, q))
        .collect();
    Some(tail_fit(norms, &thresholds))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateStudyRow {
    pub n: usize,
    #[serde(rename = "J")]
    pub clusters: usize,
    #[serde(rename = "M")]
    pub quad: usize,
    pub dt: f64,
    pub seed: u64,
    pub floor: f64,
    pub fit: RateFit,
}

/// Refinement-ladder rate study on one draw: evolve at each step size,
/// estimate the floor from the finest pair, fit on the base resolution.
pub fn rate_study(ctx: &LabContext, ladder: &[f64]) -> Result<Vec<RateStudyRow>> {
    if ladder.len() < 2 {
        return Err(Error::InvalidConfig(
            "refinement ladder needs at least 2 resolutions".into(),
        ));
    }
    let seed = ctx.config.seeds[0];
    let draw = sample(&ctx.gamma, &ctx.law, seed);
    let mut rows = Vec::new();
    let mut trajs: Vec<Trajectory> = Vec::new();
    for &dt in ladder {
        let mut evo = ctx.config.evolution_config();
        evo.dtau = dt;
        trajs.push(evolve(&ctx.basis.spectral_zero(), Some(&draw.u0), &evo)?);
    }
    for (i, traj) in trajs.iter().enumerate() {
        if !traj.valid {
            return Err(Error::InvalidTrajectory(
                traj.invalid_reason.clone().unwrap_or_default(),
            ));
        }
        let partner = if i + 1 < trajs.len() {
            &trajs[i + 1]
        } else {
            &trajs[i - 1]
        };
        let floor = refinement_floor(traj, partner)?;
        let r0 = extract_scattering(traj)?;
        rows.push(RateStudyRow {
            n: ctx.config.n,
            clusters: ctx.config.clusters,
            quad: ctx.basis.quad_points(),
            dt: ladder[i],
            seed,
            floor,
            fit: rate_fit(traj, &r0, floor),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }
}

/// The fast invariant battery at pinned sizes (`n = 1, 2`, `J ≤ 32`);
/// exercised by `lenscat check` with a nonzero exit on any failure.
pub fn check_suite() -> CheckReport {
    let mut lines = Vec::new();
    let mut push = |name: &str, pass: bool, detail: String| {
        lines.push(CheckLine {
            name: name.into(),
            pass,
            detail,
        });
    };

    // cluster sizes against the combinatorial count
    {
        let mut ok = true;
        let mut detail = String::new();
        for (n, j_top) in [(1usize, 16usize), (2, 16), (3, 12)] {
            let basis = BasisTable::build_default(n, j_top).unwrap();
            for c in basis.clusters() {
                let m = c.j - n / 2;
                let oracle = match n {
                    1 => 1,
                    2 => m + 1,
                    _ => (m + 1) * (m + 2) / 2,
                };
                if c.len() != oracle {
                    ok = false;
                    detail = format!("n={n} j={}: {} vs oracle {}", c.j, c.len(), oracle);
                }
            }
        }
        if ok {
            detail = "cluster counts match for n ≤ 3".into();
        }
        push("cluster-partition", ok, detail);
    }

    // discrete orthonormality at n=2, J=32
    {
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
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s - expect).abs());
            }
        }
        push(
            "gram-identity",
            worst < 1e-10,
            format!("max per-axis Gram deviation {worst:.3e} at J=32"),
        );
    }

    // transform round trip
    {
        let basis = BasisTable::build_default(2, 16).unwrap();
        let f = {
            let coeffs = (0..basis.len())
                .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.61).cos()))
                .collect();
            crate::field::SpectralField::new(basis.clone(), coeffs)
        };
        let back = crate::field::analyze(&crate::field::synthesize(&f));
        let err: f64 = f
            .coeffs()
            .iter()
            .zip(back.coeffs())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / f.norm_l2();
        push(
            "transform-round-trip",
            err < 1e-10,
            format!("relative round-trip error {err:.3e}"),
        );
    }

    // spectral propagator against the kernel
    {
        let basis = BasisTable::build_default(2, 32).unwrap();
        let f = basis.spectral_unit(0);
        let spectral = synthesize(&linear_propagate(&f, 0.3));
        let kernel = crate::propagator::mehler_reference(&synthesize(&f), 0.3).unwrap();
        let err = crate::propagator::interior_max_diff(&spectral, &kernel, 0.5);
        push(
            "propagator-kernel-oracle",
            err < 1e-8,
            format!("interior deviation {err:.3e} at τ=0.3, J=32"),
        );
    }

    // lens round trip and isometry
    {
        let basis = BasisTable::build_default(2, 32).unwrap();
        let mut f = basis.spectral_zero();
        for (k, c) in f.coeffs_mut().iter_mut().enumerate() {
            let deg = basis.index(k).total_degree() as f64;
            *c = Complex64::new((k as f64).sin(), (k as f64 * 0.7).cos()) * (-1.3 * deg).exp();
        }
        let g = synthesize(&f);
        let w = crate::lens::lens_forward(&g, 0.2).unwrap();
        let back = crate::lens::lens_inverse(&w, 0.2).unwrap();
        let rt = g
            .values()
            .iter()
            .zip(back.values())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        let iso = (w.norm_l2_quad() - g.norm_l2_quad()).abs() / g.norm_l2_quad();
        push(
            "lens-round-trip",
            rt < 1e-9 && iso < 1e-9,
            format!("pointwise {rt:.3e}, isometry defect {iso:.3e}"),
        );
    }

    // time maps (relative: the slope of tan(2τ) near the endpoint amplifies
    // τ-rounding by 1 + 4t²)
    {
        let mut worst = 0.0f64;
        for i in 0..=100 {
            let t = -1000.0 + 20.0 * i as f64;
            let err = (t_of_tau(crate::lens::tau_of_t(t)) - t).abs() / t.abs().max(1.0);
            worst = worst.max(err);
        }
        // one ulp of τ maps to (1+4t²)·ulp of t at the window edge, so the
        // relative floor sits around 4|t|·ε ≈ 2e-13
        push(
            "time-map-inverse",
            worst < 1e-12,
            format!("max relative |t(τ(t)) − t| = {worst:.3e} on [−10³, 10³]"),
        );
    }

    // splitting: mass conservation over the full window (resolved data; the
    // drift is quadratic-phase aliasing and scales with Δτ²)
    {
        let basis = BasisTable::build_default(2, 16).unwrap();
        let mut f = basis.spectral_zero();
        for (k, c) in f.coeffs_mut().iter_mut().enumerate() {
            let deg = basis.index(k).total_degree() as f64;
            *c =
                Complex64::new((1.3 * k as f64).sin(), (0.9 * k as f64).cos()) * 0.5 * (-deg).exp();
        }
        let mut evo = EvolutionConfig::new(2);
        evo.formulation = Formulation::Deterministic;
        evo.dtau = 1e-3;
        let traj = evolve(&f, None, &evo).unwrap();
        let m0 = traj.step_log[0].mass;
        let drift = traj
            .step_log
            .iter()
            .map(|e| (e.mass - m0).abs())
            .fold(0.0, f64::max)
            / m0;
        push(
            "mass-conservation",
            drift < 1e-10,
            format!("relative drift {drift:.3e} over [0, π/4]"),
        );
    }

    // snapshot format
    {
        let dir = std::env::temp_dir().join(format!("lenscat-check-{}", std::process::id()));
        let _ = std::fs::create_dir_all(&dir);
        let path = dir.join("probe.lens1");
        let meta = SnapshotMeta {
            n: 2,
            p: 4.0,
            clusters: 4,
            quad: 9,
            dt: 1e-3,
            tau: 0.1,
            formulation: Formulation::FullField,
            seed: 7,
        };
        let coeffs = vec![Complex64::new(0.1, -0.2), Complex64::new(3.0, 4.0)];
        let ok = write_snapshot(&path, &meta, &coeffs).is_ok()
            && crate::snapshot::read_snapshot(&path)
                .map(|(m, c)| m == meta && c == coeffs)
                .unwrap_or(false);
        let corrupted = {
            let mut bytes = std::fs::read(&path).unwrap_or_default();
            if !bytes.is_empty() {
                bytes[0] = b'?';
            }
            crate::snapshot::parse_snapshot(&bytes).is_err()
        };
        let _ = std::fs::remove_dir_all(&dir);
        push(
            "snapshot-format",
            ok && corrupted,
            "bit-exact round trip; corrupted magic rejected".into(),
        );
    }

    // sub-Gaussian certificates
    {
        let grid: Vec<f64> = (-50..=50).map(|i| i as f64 * 0.1).collect();
        let mut worst = 0.0f64;
        for kind in [LawKind::Gaussian, LawKind::Rademacher, LawKind::Uniform] {
            worst = worst.max(crate::measure::mgf_audit(&RandomLaw::new(kind), &grid));
        }
        push(
            "mgf-audit",
            worst <= 1.0 + 1e-3,
            format!("max MGF ratio {worst:.6} over all laws"),
        );
    }

    CheckReport { lines }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_round_trips_through_toml() {
        let cfg = ExperimentConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        let back = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(back.n, cfg.n);
        assert_eq!(back.seeds, cfg.seeds);
        // partial files pick up defaults
        let partial = ExperimentConfig::from_toml("n = 3\ns = -0.25\n").unwrap();
        assert_eq!(partial.n, 3);
        assert_eq!(partial.clusters, 16);
    }

    #[test]
    fn warnings_follow_admissible_table() {
        let mut cfg = ExperimentConfig {
            n: 2,
            s: 0.2,
            ..Default::default()
        };
        assert!(cfg.warnings().is_empty());
        cfg.s = -0.1;
        assert_eq!(cfg.warnings().len(), 1);
        cfg = ExperimentConfig {
            n: 3,
            s: -0.25,
            ..Default::default()
        };
        assert!(cfg.warnings().is_empty());
        cfg.s = -0.3;
        assert!(!cfg.warnings().is_empty());
        cfg = ExperimentConfig {
            n: 4,
            s: -0.5,
            big: true,
            ..Default::default()
        };
        assert!(cfg.warnings().is_empty());
    }

    #[test]
    fn four_dimensional_needs_big() {
        let cfg = ExperimentConfig {
            n: 4,
            clusters: 6,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig {
            n: 4,
            clusters: 6,
            big: true,
            ..Default::default()
        };
        assert!(cfg.validate().is_ok());
        // a cutoff below the first eigenvalue errors instead of underflowing
        let tiny = ExperimentConfig {
            n: 4,
            clusters: 1,
            big: true,
            ..Default::default()
        };
        assert!(matches!(tiny.build_basis(), Err(Error::EmptyBasis { .. })));
    }

    #[test]
    fn parallel_map_is_order_stable() {
        let out = parallel_map(100, |i| i * i);
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn check_suite_passes() {
        let report = check_suite();
        for line in &report.lines {
            assert!(line.pass, "{}: {}", line.name, line.detail);
        }
    }

    #[test]
    fn zero_profile_trial_degenerates_cleanly() {
        let mut config = ExperimentConfig {
            clusters: 6,
            dtau: 5e-3,
            k_tau_samples: 16,
            compute_rate: true,
            ..Default::default()
        };
        config.seeds = vec![3];
        let mut ctx = LabContext::prepare(config).unwrap();
        ctx.gamma = ctx.gamma.scaled(0.0);
        let out = run_trial(&ctx, 3).unwrap();
        assert!(out.record.valid);
        let k = out.record.k_statistic.as_ref().unwrap();
        assert_eq!(k.total, 0.0);
        assert_eq!(out.record.r0_plus_norm_h1, Some(0.0));
        let rate = out.record.rate.as_ref().unwrap();
        assert_eq!(rate.verdict, diagnostics::RateVerdict::Inconclusive);
    }

    #[test]
    fn guard_tripped_trial_never_corrupts_the_ensemble() {
        let config = ExperimentConfig {
            clusters: 5,
            dtau: 1e-2,
            k_tau_samples: 8,
            compute_rate: false,
            guard_factor: 1.0 + 1e-12, // any nonlinear motion trips it
            seeds: vec![1, 2, 3],
            ..Default::default()
        };
        let mut ctx = LabContext::prepare(config).unwrap();
        ctx.gamma = ctx.gamma.scaled(40.0);
        let (records, summary) = run_ensemble(&ctx).unwrap();
        assert_eq!(summary.trials, 3);
        assert_eq!(summary.valid + summary.failure_reasons.values().sum::<usize>(), 3);
        // invalid trials carry their reason and never abort the batch
        for r in &records {
            if !r.valid {
                assert!(r.invalid_reason.is_some());
            }
        }
        assert!(summary.valid < 3, "expected the tight guard to trip");
    }

    #[test]
    fn ensemble_merge_ignores_seed_order() {
        let config = ExperimentConfig {
            clusters: 5,
            dtau: 1e-2,
            k_tau_samples: 8,
            compute_rate: false,
            seeds: vec![5, 1, 9, 3],
            ..Default::default()
        };
        let ctx = LabContext::prepare(config).unwrap();
        let (_, s1) = run_ensemble(&ctx).unwrap();
        let mut permuted = ctx.config.clone();
        permuted.seeds = vec![9, 3, 5, 1];
        let ctx2 = LabContext {
            config: permuted,
            basis: ctx.basis.clone(),
            gamma: ctx.gamma.clone(),
            law: ctx.law,
        };
        let (_, s2) = run_ensemble(&ctx2).unwrap();
        assert_eq!(
            serde_json::to_string(&s1).unwrap(),
            serde_json::to_string(&s2).unwrap()
        );
    }
}
