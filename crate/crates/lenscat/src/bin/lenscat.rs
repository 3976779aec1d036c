//! Thin command-line front end; all the machinery lives in the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lenscat::diagnostics::{rate_fit_series, synthetic_rate_series};
use lenscat::lab::{self, ExperimentConfig, LabContext};
use lenscat::measure::LawKind;

#[derive(Parser)]
#[command(
    name = "lenscat",
    about = "Hermite-spectral laboratory for NLS scattering in the lens frame",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one randomized trajectory and write its record, series, and
    /// endpoint snapshots.
    Run(CommonArgs),
    /// Run a seeded Monte Carlo ensemble and write the summary.
    Ensemble(CommonArgs),
    /// Refinement-ladder rate study (or a planted-exponent self-test).
    Rates(RatesArgs),
    /// Fast invariant battery; nonzero exit on any failure.
    Check,
    /// Dump a snapshot's coefficients as CSV.
    Export(ExportArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// TOML configuration file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long = "delta-reg")]
    delta_reg: Option<f64>,
    /// Cluster cutoff J.
    #[arg(long)]
    clusters: Option<usize>,
    /// Quadrature points per axis M.
    #[arg(long)]
    quad: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    /// gaussian | rademacher | uniform
    #[arg(long)]
    law: Option<String>,
    /// Seed spec: "7", "1,5,9", or "0..500".
    #[arg(long)]
    seeds: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow four-dimensional grids (memory: the grid alone starts at
    /// ~3×10⁵ points, ~5 MB per field copy).
    #[arg(long)]
    big: bool,
    /// De-aliased quadrature (M = 6·d_max+1).
    #[arg(long)]
    dealias: bool,
    /// Skip the half-step companion run (no rate fit).
    #[arg(long = "no-rate")]
    no_rate: bool,
}

#[derive(Args)]
struct RatesArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated step-size ladder, finest last (default "dt,dt/2").
    #[arg(long)]
    ladder: Option<String>,
    /// Run the fitter on a planted synthetic decay exponent instead.
    #[arg(long)]
    planted: Option<f64>,
}

#[derive(Args)]
struct ExportArgs {
    /// LENS1 snapshot to read.
    #[arg(long)]
    snapshot: PathBuf,
    /// CSV destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_seeds(spec: &str) -> Result<Vec<u64>, String> {
    let spec = spec.trim();
    if let Some((a, b)) = spec.split_once("..") {
        let lo: u64 = a
            .trim()
            .parse()
            .map_err(|_| format!("bad seed range: {spec}"))?;
        let hi: u64 = b
            .trim()
            .parse()
            .map_err(|_| format!("bad seed range: {spec}"))?;
        if hi <= lo {
            return Err(format!("empty seed range: {spec}"));
        }
        return Ok((lo..hi).collect());
    }
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad seed: {s}"))
        })
        .collect()
}

fn resolve_config(args: &CommonArgs) -> Result<ExperimentConfig, String> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
            ExperimentConfig::from_toml(&text).map_err(|e| e.to_string())?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(p) = args.p {
        cfg.p = p;
    }
    if let Some(s) = args.s {
        cfg.s = s;
    }
    if let Some(d) = args.delta_reg {
        cfg.delta_reg = d;
    }
    if let Some(j) = args.clusters {
        cfg.clusters = j;
    }
    if let Some(m) = args.quad {
        cfg.quad = Some(m);
    }
    if let Some(dt) = args.dt {
        cfg.dtau = dt;
    }
    if let Some(law) = &args.law {
        cfg.law = LawKind::parse(law).ok_or_else(|| format!("unknown law: {law}"))?;
    }
    if let Some(seeds) = &args.seeds {
        cfg.seeds = parse_seeds(seeds)?;
    }
    if let Some(out) = &args.out {
        cfg.out_dir = Some(out.clone());
    }
    cfg.big |= args.big;
    cfg.dealias |= args.dealias;
    cfg.compute_rate = !args.no_rate;
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run(args) => {
            let cfg = resolve_config(&args)?;
            let seed = *cfg.seeds.first().ok_or("need a seed")?;
            let ctx = LabContext::prepare(cfg).map_err(|e| e.to_string())?;
            let out = lab::run_trial(&ctx, seed).map_err(|e| e.to_string())?;
            if let Some(dir) = &ctx.config.out_dir {
                lab::persist_trial(dir, &ctx, &out).map_err(|e| e.to_string())?;
                println!("wrote trial artifacts for seed {seed} to {}", dir.display());
            } else {
                println!("{}", out.record.to_json().map_err(|e| e.to_string())?);
            }
            if out.record.valid {
                println!(
                    "seed {seed}: valid, K = {:.4}, ‖r₀⁺‖_H1 = {:.4}",
                    out.record
                        .k_statistic
                        .as_ref()
                        .map(|k| k.total)
                        .unwrap_or(0.0),
                    out.record.r0_plus_norm_h1.unwrap_or(0.0),
                );
                Ok(ExitCode::SUCCESS)
            } else {
                println!(
                    "seed {seed}: INVALID ({})",
                    out.record.invalid_reason.as_deref().unwrap_or("unknown")
                );
                Ok(ExitCode::from(2))
            }
        }
        Cmd::Ensemble(args) => {
            let cfg = resolve_config(&args)?;
            let ctx = LabContext::prepare(cfg).map_err(|e| e.to_string())?;
            let (_, summary) = lab::run_ensemble(&ctx).map_err(|e| e.to_string())?;
            println!("{} trials, {} valid", summary.trials, summary.valid);
            if let Some(q) = &summary.k_quantiles {
                println!(
                    "K quantiles: q25 {:.4}  q50 {:.4}  q75 {:.4}",
                    q.q25, q.q50, q.q75
                );
            }
            if let Some(tail) = &summary.tail {
                println!(
                    "tail fit: slope {:.4}, R² {:.4} ({} thresholds)",
                    tail.slope,
                    tail.r_squared,
                    tail.thresholds.len()
                );
            }
            if ctx.config.out_dir.is_none() {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&summary).map_err(|e| e.to_string())?
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Rates(args) => {
            if let Some(mu) = args.planted {
                let taus: Vec<f64> = (0..256)
                    .map(|i| std::f64::consts::FRAC_PI_4 * (0.8 + 0.199 * i as f64 / 255.0))
                    .collect();
                let (ts, es) = synthetic_rate_series(mu, &taus);
                let fit = rate_fit_series(&ts, &es, 0.0, 5e-4);
                println!(
                    "planted μ = {mu}: recovered μ = {:.6}, R² = {:.6}",
                    fit.mu, fit.r_squared
                );
                return Ok(ExitCode::SUCCESS);
            }
            let cfg = resolve_config(&args.common)?;
            let base_dt = cfg.dtau;
            let ladder: Vec<f64> = match &args.ladder {
                Some(spec) => spec
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<f64>()
                            .map_err(|_| format!("bad step: {s}"))
                    })
                    .collect::<Result<_, _>>()?,
                None => vec![base_dt, base_dt / 2.0],
            };
            let out_dir = cfg.out_dir.clone();
            let ctx = LabContext::prepare(cfg).map_err(|e| e.to_string())?;
            let rows = lab::rate_study(&ctx, &ladder).map_err(|e| e.to_string())?;
            println!("n  J   M   dt         floor       mu       R2       window_t");
            for r in &rows {
                println!(
                    "{}  {:<3} {:<3} {:<10.3e} {:<11.3e} {:<8.4} {:<8.4} [{:.2}, {:.2}]",
                    r.n,
                    r.clusters,
                    r.quad,
                    r.dt,
                    r.floor,
                    r.fit.mu,
                    r.fit.r_squared,
                    r.fit.window.0,
                    r.fit.window.1
                );
            }
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
                std::fs::write(
                    dir.join("rates.json"),
                    serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())?,
                )
                .map_err(|e| e.to_string())?;
                println!("wrote {}", dir.join("rates.json").display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check => {
            let report = lab::check_suite();
            for line in &report.lines {
                println!(
                    "[{}] {:24} {}",
                    if line.pass { "PASS" } else { "FAIL" },
                    line.name,
                    line.detail
                );
            }
            if report.all_pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Cmd::Export(args) => {
            let (meta, coeffs) =
                lenscat::snapshot::read_snapshot(&args.snapshot).map_err(|e| e.to_string())?;
            let basis = lenscat::BasisTable::build(meta.n, meta.clusters, meta.quad)
                .map_err(|e| e.to_string())?;
            if basis.len() != coeffs.len() {
                return Err(format!(
                    "snapshot holds {} coefficients but the basis has {}",
                    coeffs.len(),
                    basis.len()
                ));
            }
            let mut text = String::new();
            let alpha_cols: Vec<String> = (0..meta.n).map(|d| format!("alpha{d}")).collect();
            text.push_str(&format!("k,{},re,im\n", alpha_cols.join(",")));
            for (k, c) in coeffs.iter().enumerate() {
                let mi = basis.index(k);
                let alphas: Vec<String> = mi.degrees().iter().map(|d| d.to_string()).collect();
                text.push_str(&format!(
                    "{k},{},{:.17e},{:.17e}\n",
                    alphas.join(","),
                    c.re,
                    c.im
                ));
            }
            match args.out {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|e| e.to_string())?;
                    println!("wrote {}", path.display());
                }
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
