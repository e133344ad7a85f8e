//! Command-line front end.
//!
//! Each subcommand maps its flags one-to-one onto a library call and emits a
//! CSV table. With `--out FILE` the table goes to `FILE` and the run manifest
//! to `FILE.manifest.json`. Without it, the table goes to stdout and the
//! manifest to stderr.
//!
//! Exit codes: 0 on success, 1 when the requested quantity does not exist
//! (e.g. an infeasible threshold) or a computation fails, 2 on invalid flags.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::exponents::{self, SparsityModel, ThresholdKind};
use crate::experiments::{self, ReweightedConfig};
use crate::geometry::{self, FacePair, FiniteModel, IndexRule};
use crate::report::{fmt_f64, now_rfc3339, sha256_hex, OutputDigest, RunManifest, Table};
use crate::sampling::Amplitude;
use crate::thresholds::{self, SearchSettings, ThresholdError};

/// Environment variable holding the default worker count.
pub const JOBS_ENV: &str = "WL1_JOBS";

#[derive(Debug, Parser)]
#[command(name = "wl1", version, about = "Thresholds, Grassmann-angle bounds and recovery experiments for weighted l1 minimization")]
pub struct Cli {
    /// Worker threads (results do not depend on this) [default: all cores]
    #[arg(long, global = true, env = JOBS_ENV)]
    pub jobs: Option<usize>,
    /// Write the CSV table here and the manifest to FILE.manifest.json (default: stdout / stderr)
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Asymptotic recovery threshold δ_c = m/n of a nonuniform sparse model
    Threshold(ThresholdArgs),
    /// Weight ratio ω = w2/w1 minimizing δ_c for a two-class model
    OptimalWeight(OptimalWeightArgs),
    /// Exponents ψ_com, ψ_int, ψ_ext and ψ_tot at one point τ
    Exponents(ExponentsArgs),
    /// External and internal angles of a weighted cross-polytope face pair
    Angles(AnglesArgs),
    /// Grassmann-angle upper bound on the failure probability at finite n
    Bound(BoundArgs),
    /// Empirical recovery over a grid of weights ω and ratios δ = m/n
    Simulate(SimulateArgs),
    /// Empirical recovery versus class-1 sparsity p1 for several weights
    P1Sweep(P1SweepArgs),
    /// Plain versus two-step reweighted l1 over a range of support sizes
    Reweighted(ReweightedArgs),
    /// Recovery of noisy signals: output SNR versus input SNR
    Noisy(NoisyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Class fractions γ_i (comma-separated, summing to 1)
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub gamma: Vec<f64>,
    /// Per-class sparsity fractions p_i, each between 0 and 1 (comma-separated)
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub p: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Per-class weights w_i > 0 (comma-separated) [default: all 1]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub omega: Vec<f64>,
    /// Threshold kind: weak, sectional or strong
    #[arg(long, default_value = "weak")]
    pub kind: ThresholdKind,
    /// Grid points per free axis of the τ scan
    #[arg(long, default_value_t = 60)]
    pub grid: usize,
    /// Bisection tolerance on δ (absolute)
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct OptimalWeightArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Threshold kind: weak, sectional or strong
    #[arg(long, default_value = "weak")]
    pub kind: ThresholdKind,
    /// Smallest ω scanned (dimensionless ratio w2/w1)
    #[arg(long, default_value_t = 0.5)]
    pub omega_min: f64,
    /// Largest ω scanned (dimensionless ratio w2/w1)
    #[arg(long, default_value_t = 10.0)]
    pub omega_max: f64,
    /// Golden-section tolerance on log ω
    #[arg(long, default_value_t = 1e-3)]
    pub search_tol: f64,
    /// Points of the initial log-spaced ω scan
    #[arg(long, default_value_t = 17)]
    pub scan_points: usize,
    /// Grid points per free axis of the τ scan
    #[arg(long, default_value_t = 60)]
    pub grid: usize,
    /// Bisection tolerance on δ (absolute)
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ExponentsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Per-class weights w_i > 0 (comma-separated) [default: all 1]
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub omega: Vec<f64>,
    /// Off-support face fractions τ_i, as fractions of n (comma-separated)
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub tau: Vec<f64>,
    /// Threshold kind selecting the combinatorial exponent: weak, sectional or strong
    #[arg(long, default_value = "weak")]
    pub kind: ThresholdKind,
}

#[derive(Debug, Args)]
pub struct AnglesArgs {
    /// Vertices of the face F per class (comma-separated counts)
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<usize>,
    /// Extra vertices of the face G ⊇ F per class (comma-separated counts)
    #[arg(long, value_delimiter = ',', required = true)]
    pub t: Vec<usize>,
    /// Class sizes n_i (comma-separated counts)
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Per-class weights w_i > 0 (comma-separated)
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub w: Vec<f64>,
    /// Monte-Carlo samples for the internal angle
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    /// Master seed of the Monte-Carlo streams
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Ambient dimension n (at most 80)
    #[arg(long)]
    pub n: usize,
    /// Size of class 1 (class 2 has n − n1 coordinates)
    #[arg(long)]
    pub n1: usize,
    /// Nonzeros in class 1
    #[arg(long)]
    pub k1: usize,
    /// Nonzeros in class 2
    #[arg(long)]
    pub k2: usize,
    /// Number of measurements
    #[arg(long)]
    pub m: usize,
    /// Class weights w1,w2 > 0
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub w: Vec<f64>,
    /// Monte-Carlo samples per internal angle
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    /// Faces entering the sum: as-printed (all l ≥ m+2) or parity (l = m+2+2s)
    #[arg(long, default_value = "as-printed")]
    pub rule: IndexRule,
    /// Master seed of the Monte-Carlo streams
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Class-2 weights ω to test; class 1 has weight 1 (comma-separated)
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub omegas: Vec<f64>,
    /// Measurement ratios δ = m/n in (0,1] (comma-separated)
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub deltas: Vec<f64>,
    /// Ambient dimension n
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Random instances per (ω, δ) cell
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Master seed
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct P1SweepArgs {
    /// Sparsity fraction of class 2
    #[arg(long, default_value_t = 0.05)]
    pub p2: f64,
    /// Class-1 sparsity fractions p1 to sweep (comma-separated)
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub p1: Vec<f64>,
    /// Class-2 weights ω (ω = 1 is always added as the baseline; comma-separated)
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub omegas: Vec<f64>,
    /// Ambient dimension n (two equal classes)
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Number of measurements
    #[arg(long, default_value_t = 100)]
    pub m: usize,
    /// Random instances per p1 (shared by all ω)
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Master seed
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ReweightedArgs {
    /// Ambient dimension n
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Number of measurements
    #[arg(long, default_value_t = 112)]
    pub m: usize,
    /// Smallest support size k
    #[arg(long, default_value_t = 30)]
    pub k_min: usize,
    /// Largest support size k
    #[arg(long, default_value_t = 70)]
    pub k_max: usize,
    /// Step between support sizes
    #[arg(long, default_value_t = 2)]
    pub k_step: usize,
    /// Nonzero distribution: gaussian, uniform, rayleigh, sqrt-chi2-4, sqrt-chi2-6 or sign
    #[arg(long, default_value = "gaussian")]
    pub distribution: Amplitude,
    /// Second-step weight on the complement of the estimated support (≥ 1)
    #[arg(long, default_value_t = 10.0)]
    pub omega: f64,
    /// Random instances per k
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Master seed
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct NoisyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Class-2 weights ω; class 1 has weight 1 (comma-separated)
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub omegas: Vec<f64>,
    /// Input SNRs in dB, `inf` for noiseless (comma-separated)
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub snr: Vec<f64>,
    /// Ambient dimension n
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Number of measurements
    #[arg(long, default_value_t = 100)]
    pub m: usize,
    /// Random instances per input SNR (shared by all ω)
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    /// Master seed
    #[arg(long)]
    pub seed: u64,
}

/// A failed run and its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags or parameters (exit 2).
    Usage(String),
    /// The requested quantity does not exist (exit 1).
    Infeasible(String),
    /// A computation or I/O step failed (exit 1).
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Infeasible(_) | CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Infeasible(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

/// What a subcommand produced.
struct RunOutput {
    table: Table,
    params: serde_json::Value,
    seed: Option<u64>,
    summary: serde_json::Value,
    notes: Vec<String>,
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

fn threshold_error(e: ThresholdError) -> CliError {
    match e {
        ThresholdError::Infeasible { .. } => CliError::Infeasible(e.to_string()),
        ThresholdError::InvalidArgument(_) => CliError::Usage(e.to_string()),
        ThresholdError::Exponent(exponents::ExponentError::InvalidModel(_)) => CliError::Usage(e.to_string()),
        other => CliError::Runtime(other.to_string()),
    }
}

fn build_model(m: &ModelArgs, omega: &[f64]) -> Result<SparsityModel, CliError> {
    let omega = if omega.is_empty() { vec![1.0; m.gamma.len()] } else { omega.to_vec() };
    SparsityModel::new(&m.gamma, &m.p, &omega).map_err(usage)
}

fn join_f64(v: &[f64]) -> String {
    v.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(";")
}

fn cmd_threshold(a: &ThresholdArgs) -> Result<RunOutput, CliError> {
    let model = build_model(&a.model, &a.omega)?;
    let r = thresholds::delta_c(&model, a.kind, a.grid, a.tol).map_err(threshold_error)?;
    let mut t = Table::new([
        "kind", "delta_c", "rho", "witness_tau", "psi_com", "psi_int", "psi_ext", "psi_tot", "grid_resolution", "refine_tol", "delta_lo",
        "grid_max", "refined_max", "peak_psi",
    ]);
    t.push(vec![
        r.kind.to_string(),
        fmt_f64(r.delta_c),
        fmt_f64(model.rho()),
        join_f64(&r.witness_tau),
        fmt_f64(r.witness.psi_com),
        fmt_f64(r.witness.psi_int),
        fmt_f64(r.witness.psi_ext),
        fmt_f64(r.witness.psi_tot),
        r.grid_resolution.to_string(),
        fmt_f64(r.refine_tol),
        fmt_f64(r.delta_lo),
        fmt_f64(r.grid_max),
        fmt_f64(r.refined_max),
        fmt_f64(r.peak_psi),
    ]);
    Ok(RunOutput {
        table: t,
        params: json!({"gamma": a.model.gamma, "p": a.model.p, "omega": model.omega(), "kind": a.kind, "grid": a.grid, "tol": a.tol}),
        seed: None,
        summary: json!({"delta_c": r.delta_c, "witness_tau": r.witness_tau}),
        notes: vec![],
    })
}

fn cmd_optimal_weight(a: &OptimalWeightArgs) -> Result<RunOutput, CliError> {
    let model = build_model(&a.model, &[])?;
    let settings = SearchSettings { grid: a.grid, tol: a.tol, scan_points: a.scan_points };
    let r = thresholds::optimal_weight(&model, a.kind, (a.omega_min, a.omega_max), a.search_tol, settings).map_err(threshold_error)?;
    let mut curve = r.curve.clone();
    curve.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut t = Table::new(["omega", "delta_c", "is_optimum"]);
    for (w, d) in curve {
        t.push(vec![fmt_f64(w), fmt_f64(d), (w == r.omega_star).to_string()]);
    }
    Ok(RunOutput {
        table: t,
        params: json!({"gamma": a.model.gamma, "p": a.model.p, "kind": a.kind, "omega_min": a.omega_min, "omega_max": a.omega_max,
                       "search_tol": a.search_tol, "scan_points": a.scan_points, "grid": a.grid, "tol": a.tol}),
        seed: None,
        summary: json!({"omega_star": r.omega_star, "delta_star": r.delta_star, "unimodal": r.unimodal}),
        notes: vec![],
    })
}

fn cmd_exponents(a: &ExponentsArgs) -> Result<RunOutput, CliError> {
    let model = build_model(&a.model, &a.omega)?;
    model.check_tau(&a.tau).map_err(usage)?;
    let e = exponents::psi_tot(&model, &a.tau, a.kind).map_err(runtime)?;
    let mut t = Table::new(["psi_com", "psi_int", "psi_ext", "psi_tot"]);
    t.push(vec![fmt_f64(e.psi_com), fmt_f64(e.psi_int), fmt_f64(e.psi_ext), fmt_f64(e.psi_tot)]);
    Ok(RunOutput {
        table: t,
        params: json!({"gamma": a.model.gamma, "p": a.model.p, "omega": model.omega(), "tau": a.tau, "kind": a.kind}),
        seed: None,
        summary: serde_json::to_value(e.witness).unwrap_or_default(),
        notes: vec![],
    })
}

fn cmd_angles(a: &AnglesArgs) -> Result<RunOutput, CliError> {
    let pair = FacePair::new(a.k.clone(), a.t.clone(), a.n.clone(), a.w.clone()).map_err(usage)?;
    let lz = geometry::log_external_angle(&pair).map_err(runtime)?;
    let b = geometry::internal_angle_unchecked(&pair, a.samples, a.seed).map_err(runtime)?;
    let mut t = Table::new(["external", "log_external", "internal", "internal_std_err", "log_internal", "log_internal_std_err", "samples"]);
    t.push(vec![
        fmt_f64(lz.exp()),
        fmt_f64(lz),
        fmt_f64(b.estimate),
        fmt_f64(b.std_err),
        fmt_f64(b.log_estimate),
        fmt_f64(b.log_std_err),
        b.samples.to_string(),
    ]);
    let mut notes = vec![];
    if b.rel_err() > geometry::MAX_REL_ERR {
        notes.push(format!("internal-angle relative error {:.3} exceeds {}; increase --samples", b.rel_err(), geometry::MAX_REL_ERR));
    }
    Ok(RunOutput {
        table: t,
        params: json!({"k": a.k, "t": a.t, "n": a.n, "w": a.w, "samples": a.samples}),
        seed: Some(a.seed),
        summary: json!({"log_external": lz, "log_internal": b.log_estimate}),
        notes,
    })
}

fn cmd_bound(a: &BoundArgs) -> Result<RunOutput, CliError> {
    if a.w.len() != 2 {
        return Err(CliError::Usage(format!("--w needs two weights, got {}", a.w.len())));
    }
    let fm = FiniteModel::two_class(a.n, a.n1, a.k1, a.k2, a.m, a.w[0], a.w[1]).map_err(usage)?;
    let r = geometry::failure_bound(&fm, a.samples, a.seed, a.rule).map_err(|e| match e {
        geometry::GeometryError::Domain(_) => usage(e),
        other => runtime(other),
    })?;
    let mut t = Table::new(["t1", "t2", "log_count", "log_beta", "beta_rel_err", "log_zeta", "log_term", "term"]);
    for term in &r.terms {
        t.push(vec![
            term.t[0].to_string(),
            term.t[1].to_string(),
            fmt_f64(term.log_count),
            fmt_f64(term.log_beta),
            fmt_f64(term.beta_rel_err),
            fmt_f64(term.log_zeta),
            fmt_f64(term.log_term),
            fmt_f64(term.log_term.exp()),
        ]);
    }
    Ok(RunOutput {
        table: t,
        params: json!({"n": a.n, "n1": a.n1, "k1": a.k1, "k2": a.k2, "m": a.m, "w": a.w, "samples": a.samples, "rule": a.rule}),
        seed: Some(a.seed),
        summary: json!({"bound": r.bound, "clamped": r.clamped, "std_err": r.std_err, "terms": r.terms.len()}),
        notes: vec![format!("index rule: {}", a.rule.as_str())],
    })
}

fn experiment_error(e: experiments::ExperimentError) -> CliError {
    match e {
        experiments::ExperimentError::Invalid(_) => usage(e),
        other => runtime(other),
    }
}

fn cmd_simulate(a: &SimulateArgs) -> Result<RunOutput, CliError> {
    let model = build_model(&a.model, &[])?;
    let g = experiments::run_phase_grid(&model, &a.omegas, &a.deltas, a.n, a.trials, a.seed).map_err(experiment_error)?;
    Ok(RunOutput {
        table: g.to_table(),
        params: json!({"gamma": a.model.gamma, "p": a.model.p, "omegas": a.omegas, "deltas": a.deltas, "n": a.n, "trials": a.trials}),
        seed: Some(a.seed),
        summary: json!({"cells": a.omegas.len() * a.deltas.len()}),
        notes: vec!["instance seed = hash(seed, delta index, trial); every omega reuses the same instances".into()],
    })
}

fn cmd_p1_sweep(a: &P1SweepArgs) -> Result<RunOutput, CliError> {
    let s = experiments::run_p1_sweep(a.p2, &a.omegas, a.n, a.m, &a.p1, a.trials, a.seed).map_err(experiment_error)?;
    let env = s.envelope();
    let base = s.baseline();
    let best_gain = env.iter().zip(&base).map(|(e, b)| e.0 - b).fold(f64::NEG_INFINITY, f64::max);
    Ok(RunOutput {
        table: s.to_table(),
        params: json!({"p2": a.p2, "p1": a.p1, "omegas": a.omegas, "n": a.n, "m": a.m, "trials": a.trials}),
        seed: Some(a.seed),
        summary: json!({"max_envelope_gain": best_gain}),
        notes: vec!["instance seed = hash(seed, p1 index, trial); every omega reuses the same instances".into()],
    })
}

fn cmd_reweighted(a: &ReweightedArgs) -> Result<RunOutput, CliError> {
    if a.k_step == 0 || a.k_min > a.k_max {
        return Err(CliError::Usage("need k_min ≤ k_max and k_step ≥ 1".into()));
    }
    let cfg = ReweightedConfig {
        n: a.n,
        m: a.m,
        ks: (a.k_min..=a.k_max).step_by(a.k_step).collect(),
        amplitude: a.distribution,
        omega: a.omega,
        trials: a.trials,
    };
    let r = experiments::run_reweighted(&cfg, a.seed).map_err(experiment_error)?;
    Ok(RunOutput {
        table: r.to_table(),
        params: serde_json::to_value(&cfg).unwrap_or_default(),
        seed: Some(a.seed),
        summary: json!({"plain_crossover": r.plain_crossover, "reweighted_crossover": r.reweighted_crossover}),
        notes: vec!["crossover: k where the success rate crosses 1/2, linear interpolation between adjacent k".into()],
    })
}

fn cmd_noisy(a: &NoisyArgs) -> Result<RunOutput, CliError> {
    let model = build_model(&a.model, &[])?;
    let r = experiments::run_noisy_snr(&model, &a.omegas, a.n, a.m, &a.snr, a.trials, a.seed).map_err(experiment_error)?;
    let averages: Vec<serde_json::Value> = r
        .averages_table()
        .rows
        .iter()
        .map(|row| json!({"omega": row[0], "input_snr_db": row[1], "mean_output_snr_db": row[2]}))
        .collect();
    Ok(RunOutput {
        table: r.to_table(),
        params: json!({"gamma": a.model.gamma, "p": a.model.p, "omegas": a.omegas,
                       "snr": a.snr.iter().map(|s| fmt_f64(*s)).collect::<Vec<_>>(), "n": a.n, "m": a.m, "trials": a.trials}),
        seed: Some(a.seed),
        summary: json!({"averages": averages}),
        notes: vec![
            "noise: white Gaussian vector added to the signal before measurement, scaled so that 10 log10(|x|^2/|e|^2) equals the input SNR".into(),
            format!("output SNR: 10 log10(|x|^2/|x - x_hat|^2) against the noisy signal x, capped at {} dB", experiments::MAX_SNR_DB),
        ],
    })
}

fn dispatch(cmd: &Command) -> (&'static str, Result<RunOutput, CliError>) {
    match cmd {
        Command::Threshold(a) => ("threshold", cmd_threshold(a)),
        Command::OptimalWeight(a) => ("optimal-weight", cmd_optimal_weight(a)),
        Command::Exponents(a) => ("exponents", cmd_exponents(a)),
        Command::Angles(a) => ("angles", cmd_angles(a)),
        Command::Bound(a) => ("bound", cmd_bound(a)),
        Command::Simulate(a) => ("simulate", cmd_simulate(a)),
        Command::P1Sweep(a) => ("p1-sweep", cmd_p1_sweep(a)),
        Command::Reweighted(a) => ("reweighted", cmd_reweighted(a)),
        Command::Noisy(a) => ("noisy", cmd_noisy(a)),
    }
}

/// Runs a parsed command line; returns the exit code.
pub fn execute(cli: Cli) -> Result<(), CliError> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        // Fails only if a pool already exists (e.g. repeated calls in one process); the old pool is then kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let started = now_rfc3339();
    let (name, result) = dispatch(&cli.command);
    let out = result?;
    let digest = crate::report::params_digest(&out.params);
    let csv = out.table.to_csv(name, &digest);
    let mut manifest = RunManifest::new(name, out.params, out.seed, started);
    manifest.notes = out.notes;
    manifest.summary = out.summary;
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &csv).map_err(|e| runtime(format!("writing {}: {e}", path.display())))?;
            manifest.outputs.push(OutputDigest { path: path.display().to_string(), sha256: sha256_hex(csv.as_bytes()) });
            manifest.finished = now_rfc3339();
            let mpath = manifest_path(path);
            let text = serde_json::to_string_pretty(&manifest).map_err(runtime)?;
            std::fs::write(&mpath, text + "\n").map_err(|e| runtime(format!("writing {}: {e}", mpath.display())))?;
        }
        None => {
            print!("{csv}");
            manifest.outputs.push(OutputDigest { path: "-".into(), sha256: sha256_hex(csv.as_bytes()) });
            manifest.finished = now_rfc3339();
            eprintln!("{}", serde_json::to_string_pretty(&manifest).map_err(runtime)?);
        }
    }
    Ok(())
}

/// `FILE` → `FILE.manifest.json`.
pub fn manifest_path(out: &std::path::Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Parses `args` (including the program name) and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
