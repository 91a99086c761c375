//! `landau-lab`: experiment orchestration for the fuzzy Landau solver.
//!
//! Subcommands: `simulate` (time series + summary), `check` (inequality
//! suites), `reduce` (κ≡1 fuzzy vs homogeneous oracle), `report` (rate fits
//! from an existing CSV).
//!
//! Exit codes: 0 ok, 1 assertion failure, 2 config error, 3 numerical
//! failure (NaN/negativity/CFL).

// `!(x > 0)` in validation deliberately rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use fuzzy_landau::analysis::{
    rate_fit, run_inequality_suite, GrowthLaw, InequalityReport, RateFit, SuiteConfig,
    SUITE_NAMES,
};
use fuzzy_landau::solver::{
    reduction_gap, run_with_hook, write_snapshot, SolverError, Trajectory,
};

use config::{ConfigError, RunConfig};

#[derive(Parser)]
#[command(name = "landau-lab", version, about = "fuzzy Landau solver laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured simulation and emit a CSV time series plus a JSON
    /// summary with conservation/entropy pass-fail flags.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// force deterministic fixed-order reductions
        #[arg(long)]
        deterministic: bool,
        #[arg(long)]
        seed: Option<u64>,
        /// write a field snapshot every K steps
        #[arg(long, value_name = "K")]
        snapshot_every: Option<usize>,
    },
    /// Run inequality verification suites.
    Check {
        /// comma-separated suite names, or "all"
        #[arg(long, default_value = "all")]
        suites: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Run the κ≡1 fuzzy-vs-homogeneous reduction oracle.
    Reduce {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Fit growth laws against a CSV produced by `simulate`.
    Report {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// fit specs: COL:loglog:EXPONENT | COL:lincap[:FRAC:TOL] |
        /// COL:slope:EXPECTED:RELTOL
        #[arg(long = "fit", value_name = "SPEC")]
        fits: Vec<String>,
    },
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(msg: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: msg.into(),
        }
    }
    fn numerical(msg: impl Into<String>) -> Failure {
        Failure {
            code: 3,
            message: msg.into(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Failure {
        Failure::config(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::config(format!("io: {e}"))
    }
}

fn solver_failure(e: SolverError) -> Failure {
    match e {
        SolverError::NonFinite
        | SolverError::NegativeAfterStep
        | SolverError::EntropyIncrease
        | SolverError::CflViolation(_) => Failure::numerical(e.to_string()),
        other => Failure::config(other.to_string()),
    }
}

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_timeseries_csv(path: &Path, traj: &Trajectory, dim: usize) -> std::io::Result<()> {
    let mut out = String::new();
    let mut header = vec!["t", "mass", "px", "py"];
    if dim > 2 {
        header.push("pz");
    }
    header.extend(["energy", "x2moment", "H", "D", "fisher"]);
    let mut cols: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    for s in &traj.s_values {
        cols.push(format!("M{s}"));
    }
    for p in &traj.p_values {
        cols.push(format!("Lp{p}"));
    }
    cols.push("fmin".into());
    cols.push("fmax".into());
    out.push_str(&cols.join(","));
    out.push('\n');
    for r in &traj.records {
        let mut row = vec![fmt_f(r.t), fmt_f(r.mass)];
        for a in 0..dim {
            row.push(fmt_f(r.momentum[a]));
        }
        row.push(fmt_f(r.energy));
        row.push(fmt_f(r.x2_moment));
        row.push(fmt_f(r.entropy));
        row.push(fmt_f(r.dissipation));
        row.push(fmt_f(r.fisher));
        for m in &r.moments {
            row.push(fmt_f(*m));
        }
        for l in &r.lp_norms {
            row.push(fmt_f(*l));
        }
        row.push(fmt_f(r.f_min));
        row.push(fmt_f(r.f_max));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out)
}

#[derive(Serialize)]
struct Defects {
    mass_rel: f64,
    momentum_abs: f64,
    momentum_scale: f64,
    energy_rel: f64,
    entropy_ledger: f64,
    entropy_balance_max_rel: f64,
    d_min: f64,
}

#[derive(Serialize)]
struct Assertions {
    mass_ok: bool,
    momentum_ok: bool,
    energy_ok: bool,
    entropy_ledger_ok: bool,
    dissipation_nonneg: bool,
    entropy_finite: bool,
    nonnegative: bool,
}

#[derive(Serialize)]
struct SimulateSummary<'a> {
    config: &'a RunConfig,
    steps: usize,
    records: usize,
    dt_halvings: usize,
    defects: Defects,
    assertions: Assertions,
    pass: bool,
}

fn cmd_simulate(
    config_path: &Path,
    out_dir: &Path,
    deterministic: bool,
    seed: Option<u64>,
    snapshot_every: Option<usize>,
) -> Result<ExitCode, Failure> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| Failure::config(format!("reading {}: {e}", config_path.display())))?;
    let mut cfg = RunConfig::parse(&text)?;
    if deterministic {
        cfg.solver.deterministic = true;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let grid = cfg.build_grid()?;
    let f0 = cfg.build_initial(&grid)?;
    let solver_cfg = cfg.solver.to_solver_config();
    let diag = cfg.diagnostics_config();

    fs::create_dir_all(out_dir)?;
    let snap_dir = out_dir.join("snapshots");
    let vk = cfg.velocity_kernel;
    let sk = cfg.spatial_kernel;
    let mut snap_err: Option<SolverError> = None;
    let mut hook_impl;
    let hook: Option<&mut dyn FnMut(usize, f64, &fuzzy_landau::grid::Field)> =
        if let Some(k) = snapshot_every.filter(|k| *k > 0) {
            fs::create_dir_all(&snap_dir)?;
            let dir = snap_dir.clone();
            hook_impl = move |step: usize, t: f64, f: &fuzzy_landau::grid::Field| {
                if step % k == 0 && snap_err.is_none() {
                    let path = dir.join(format!("step_{step:06}.snap"));
                    if let Err(e) = write_snapshot(&path, f, t, &vk, &sk) {
                        snap_err = Some(e);
                    }
                }
            };
            Some(&mut hook_impl)
        } else {
            None
        };

    let traj = run_with_hook(
        &f0,
        &cfg.velocity_kernel,
        &cfg.spatial_kernel,
        &solver_cfg,
        &diag,
        hook,
    )
    .map_err(solver_failure)?;

    write_timeseries_csv(&out_dir.join("timeseries.csv"), &traj, grid.dim())?;

    let s = &traj.summary;
    let energy_tol = 1e-9 + 1e-12 * s.steps as f64;
    let assertions = Assertions {
        mass_ok: s.mass_defect_rel <= 1e-12,
        momentum_ok: s.momentum_defect_abs <= 1e-10 * s.momentum_scale,
        energy_ok: s.energy_defect_rel <= energy_tol,
        entropy_ledger_ok: s.entropy_ledger_ok,
        dissipation_nonneg: s.d_min >= 0.0,
        entropy_finite: s.h_finite,
        nonnegative: s.nonnegative,
    };
    let pass = assertions.mass_ok
        && assertions.momentum_ok
        && assertions.energy_ok
        && assertions.entropy_ledger_ok
        && assertions.dissipation_nonneg
        && assertions.entropy_finite
        && assertions.nonnegative;
    let summary = SimulateSummary {
        config: &cfg,
        steps: s.steps,
        records: traj.records.len(),
        dt_halvings: s.dt_halvings,
        defects: Defects {
            mass_rel: s.mass_defect_rel,
            momentum_abs: s.momentum_defect_abs,
            momentum_scale: s.momentum_scale,
            energy_rel: s.energy_defect_rel,
            entropy_ledger: s.entropy_ledger_defect,
            entropy_balance_max_rel: s.entropy_balance_max_rel,
            d_min: s.d_min,
        },
        assertions,
        pass,
    };
    fs::write(
        out_dir.join("summary.json"),
        serde_json::to_string_pretty(&summary).expect("summary serializes"),
    )?;
    println!(
        "simulate: {} steps, {} records, pass={}",
        s.steps,
        traj.records.len(),
        pass
    );
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct CheckSummary {
    reports: Vec<InequalityReport>,
    pass: bool,
}

fn cmd_check(
    suites: &str,
    out_dir: &Path,
    seed: u64,
    samples: usize,
    dim: usize,
) -> Result<ExitCode, Failure> {
    if dim != 2 && dim != 3 {
        return Err(Failure::config("dim must be 2 or 3"));
    }
    let names: Vec<&str> = if suites == "all" {
        SUITE_NAMES.to_vec()
    } else {
        suites.split(',').map(|s| s.trim()).collect()
    };
    let cfg = SuiteConfig { seed, samples, dim };
    let mut reports = Vec::new();
    for name in names {
        let rep = run_inequality_suite(name, &cfg)
            .map_err(|e| Failure::config(e.to_string()))?;
        println!(
            "check {}: {} samples, {} violations{}",
            rep.name,
            rep.samples,
            rep.violations,
            if rep.assert_mode { "" } else { " (report-only)" }
        );
        reports.push(rep);
    }
    let pass = reports.iter().all(|r| r.passed());
    fs::create_dir_all(out_dir)?;
    let summary = CheckSummary { reports, pass };
    fs::write(
        out_dir.join("inequalities.json"),
        serde_json::to_string_pretty(&summary).expect("report serializes"),
    )?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct ReduceSummary {
    steps: usize,
    max_marginal_gap: f64,
    marginal_scale: f64,
    threshold: f64,
    pass: bool,
}

fn cmd_reduce(config_path: &Path, out_dir: &Path, steps: usize) -> Result<ExitCode, Failure> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| Failure::config(format!("reading {}: {e}", config_path.display())))?;
    let cfg = RunConfig::parse(&text)?;
    let grid = cfg.build_grid()?;
    // the oracle is defined for κ≡1 and a separable inhomogeneous state;
    // the configured spatial kernel and IC type are not consulted here
    let f0 = fuzzy_landau::analysis::sample_separable(&grid, cfg.seed);
    let mut vk = cfg.velocity_kernel;
    if let Some(n) = cfg.solver.clamp_n {
        vk.clamp_n = Some(n);
    }
    let report = reduction_gap(
        &f0,
        &vk,
        cfg.solver.dt,
        steps,
        cfg.solver.backend,
        fuzzy_landau::collision::LOG_FLOOR,
    )
    .map_err(solver_failure)?;
    let threshold = 1e-12 * report.marginal_scale.max(1.0);
    let pass = report.max_marginal_gap <= threshold;
    let summary = ReduceSummary {
        steps: report.steps,
        max_marginal_gap: report.max_marginal_gap,
        marginal_scale: report.marginal_scale,
        threshold,
        pass,
    };
    fs::create_dir_all(out_dir)?;
    fs::write(
        out_dir.join("reduce.json"),
        serde_json::to_string_pretty(&summary).expect("summary serializes"),
    )?;
    println!(
        "reduce: max marginal gap {:.3e} over {} steps (threshold {:.3e}), pass={}",
        report.max_marginal_gap, report.steps, threshold, pass
    );
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn parse_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("reading {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Failure::config("empty csv"))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(',').map(|s| s.trim().parse::<f64>()).collect();
        let row = row.map_err(|e| Failure::config(format!("csv row {}: {e}", i + 2)))?;
        if row.len() != header.len() {
            return Err(Failure::config(format!(
                "csv row {} has {} fields, header has {}",
                i + 2,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

fn parse_fit_spec(spec: &str) -> Result<(String, GrowthLaw), Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Failure::config(format!("bad fit spec: {spec}"));
    if parts.len() < 2 {
        return Err(bad());
    }
    let col = parts[0].to_string();
    let law = match parts[1] {
        "loglog" => {
            if parts.len() != 3 {
                return Err(bad());
            }
            GrowthLaw::LogLogSlope {
                theoretical: parts[2].parse().map_err(|_| bad())?,
            }
        }
        "lincap" => {
            let frac = if parts.len() > 2 {
                parts[2].parse().map_err(|_| bad())?
            } else {
                0.1
            };
            let tol = if parts.len() > 3 {
                parts[3].parse().map_err(|_| bad())?
            } else {
                0.05
            };
            GrowthLaw::LinearCap {
                fit_fraction: frac,
                exceed_tol: tol,
            }
        }
        "slope" => {
            if parts.len() != 4 {
                return Err(bad());
            }
            GrowthLaw::LinearSlope {
                expected: parts[2].parse().map_err(|_| bad())?,
                rel_tol: parts[3].parse().map_err(|_| bad())?,
            }
        }
        _ => return Err(bad()),
    };
    Ok((col, law))
}

#[derive(Serialize)]
struct ReportSummary {
    fits: Vec<RateFit>,
    pass: bool,
}

fn cmd_report(csv: &Path, out_dir: &Path, fits: &[String]) -> Result<ExitCode, Failure> {
    if fits.is_empty() {
        return Err(Failure::config("at least one --fit spec is required"));
    }
    let (header, rows) = parse_csv(csv)?;
    let t_col = header
        .iter()
        .position(|h| h == "t")
        .ok_or_else(|| Failure::config("csv has no t column"))?;
    let ts: Vec<f64> = rows.iter().map(|r| r[t_col]).collect();
    let mut results = Vec::new();
    for spec in fits {
        let (col, law) = parse_fit_spec(spec)?;
        let idx = header
            .iter()
            .position(|h| *h == col)
            .ok_or_else(|| Failure::config(format!("csv has no column {col}")))?;
        let values: Vec<f64> = rows.iter().map(|r| r[idx]).collect();
        let fit = rate_fit(&ts, &values, &col, law)
            .map_err(|e| Failure::config(e.to_string()))?;
        println!(
            "report {}: fitted {:.4e} vs theoretical {:.4e}, pass={}",
            fit.functional, fit.fitted, fit.theoretical, fit.pass
        );
        results.push(fit);
    }
    let pass = results.iter().all(|f| f.pass);
    fs::create_dir_all(out_dir)?;
    fs::write(
        out_dir.join("rate_fits.json"),
        serde_json::to_string_pretty(&ReportSummary {
            fits: results,
            pass,
        })
        .expect("fits serialize"),
    )?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Simulate {
            config,
            out,
            deterministic,
            seed,
            snapshot_every,
        } => cmd_simulate(config, out, *deterministic, *seed, *snapshot_every),
        Command::Check {
            suites,
            out,
            seed,
            samples,
            dim,
        } => cmd_check(suites, out, *seed, *samples, *dim),
        Command::Reduce { config, out, steps } => cmd_reduce(config, out, *steps),
        Command::Report { csv, out, fits } => cmd_report(csv, out, fits),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
