//! Monte-Carlo sweeps of weighted ℓ1 recovery.
//!
//! Every instance is drawn from its own stream, seeded by the master seed and
//! the instance's coordinates. Different weights are applied to the *same*
//! instances (common random numbers), so comparisons across ω are paired.
//! Trials run in parallel, and the counts are sums, so results do not depend
//! on the worker count.

use nalgebra::DVector;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponents::SparsityModel;
use crate::recovery::{self, ClassLayout, RecoveryError, DEFAULT_LP_TOL, DEFAULT_REL_TOL};
use crate::report::{fmt_f64, Table};
use crate::sampling::{self, Amplitude};

/// Output SNR reported when the recovery error is exactly zero.
pub const MAX_SNR_DB: f64 = 300.0;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error(transparent)]
    Recovery(#[from] RecoveryError),
}

/// Outcome of one recovery attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Success,
    Failure,
    SolverError,
}

fn attempt(inst: &recovery::RecoveryInstance, w: &[f64]) -> Outcome {
    match recovery::solve_weighted_l1(&inst.a, &inst.y, w, DEFAULT_LP_TOL) {
        Ok(s) if recovery::recovery_success(&inst.x0, &s.x, DEFAULT_REL_TOL) => Outcome::Success,
        Ok(_) => Outcome::Failure,
        Err(_) => Outcome::SolverError,
    }
}

fn per_index(layout: &ClassLayout, class_w: &[f64]) -> Vec<f64> {
    layout.class_of().iter().map(|&c| class_w[c]).collect()
}

fn require_two_classes(model: &SparsityModel) -> Result<(), ExperimentError> {
    if model.u() != 2 {
        return Err(ExperimentError::Invalid(format!("the ω axis needs a two-class model, got {} classes", model.u())));
    }
    Ok(())
}

fn check_weights(omegas: &[f64]) -> Result<(), ExperimentError> {
    if omegas.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
        return Err(ExperimentError::Invalid("weights must be positive".into()));
    }
    Ok(())
}

/// Empirical success counts over a (ω, δ) grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub model: SparsityModel,
    pub n: usize,
    pub omegas: Vec<f64>,
    pub deltas: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// `successes[i][j]` for `omegas[i]`, `deltas[j]`.
    pub successes: Vec<Vec<usize>>,
    /// Solver failures (counted as unsuccessful).
    pub errors: Vec<Vec<usize>>,
}

impl PhaseGrid {
    /// Measurements used for `deltas[j]`.
    pub fn m(&self, j: usize) -> usize {
        measurements(self.deltas[j], self.n)
    }

    pub fn fraction(&self, i: usize, j: usize) -> f64 {
        if self.trials == 0 {
            f64::NAN
        } else {
            self.successes[i][j] as f64 / self.trials as f64
        }
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["omega", "delta", "m", "trials", "successes", "solver_errors", "success_rate"]);
        for (i, &w) in self.omegas.iter().enumerate() {
            for (j, &d) in self.deltas.iter().enumerate() {
                t.push(vec![
                    fmt_f64(w),
                    fmt_f64(d),
                    self.m(j).to_string(),
                    self.trials.to_string(),
                    self.successes[i][j].to_string(),
                    self.errors[i][j].to_string(),
                    fmt_f64(self.fraction(i, j)),
                ]);
            }
        }
        t
    }
}

/// `round(δn)`.
pub fn measurements(delta: f64, n: usize) -> usize {
    (delta * n as f64).round() as usize
}

/// Success over a grid of class-2 weights `ω` (class 1 has weight 1) and ratios `δ = m/n`.
///
/// The instance for `(δ_j, trial)` is shared by every ω.
pub fn run_phase_grid(model: &SparsityModel, omegas: &[f64], deltas: &[f64], n: usize, trials: usize, seed: u64) -> Result<PhaseGrid, ExperimentError> {
    require_two_classes(model)?;
    check_weights(omegas)?;
    if let Some(&d) = deltas.iter().find(|&&d| !(d > 0.0 && d <= 1.0)) {
        return Err(ExperimentError::Invalid(format!("delta = {d} must lie in (0, 1]")));
    }
    let layout = ClassLayout::from_model(model, n);
    let jobs: Vec<(usize, usize)> = (0..deltas.len()).flat_map(|j| (0..trials).map(move |t| (j, t))).collect();
    let outcomes: Vec<(usize, Vec<Outcome>)> = jobs
        .par_iter()
        .map(|&(j, t)| {
            let mut rng = sampling::stream(seed, &[j as u64, t as u64]);
            let inst = recovery::sample_instance(&layout, measurements(deltas[j], n), Amplitude::Gaussian, &[1.0, 1.0], &mut rng);
            (j, omegas.iter().map(|&w| attempt(&inst, &per_index(&layout, &[1.0, w]))).collect())
        })
        .collect();
    let mut successes = vec![vec![0; deltas.len()]; omegas.len()];
    let mut errors = vec![vec![0; deltas.len()]; omegas.len()];
    for (j, outs) in outcomes {
        for (i, o) in outs.into_iter().enumerate() {
            match o {
                Outcome::Success => successes[i][j] += 1,
                Outcome::SolverError => errors[i][j] += 1,
                Outcome::Failure => {}
            }
        }
    }
    Ok(PhaseGrid { model: model.clone(), n, omegas: omegas.to_vec(), deltas: deltas.to_vec(), trials, seed, successes, errors })
}

/// Success versus class-1 sparsity for several weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct P1Sweep {
    pub p2: f64,
    pub n: usize,
    pub m: usize,
    pub p1s: Vec<f64>,
    /// Always contains 1 (the unweighted baseline).
    pub omegas: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// `successes[a][b]` for `p1s[a]`, `omegas[b]`.
    pub successes: Vec<Vec<usize>>,
}

impl P1Sweep {
    pub fn rate(&self, a: usize, b: usize) -> f64 {
        self.successes[a][b] as f64 / self.trials.max(1) as f64
    }

    /// Success rate at ω = 1 for each p1.
    pub fn baseline(&self) -> Vec<f64> {
        let b = self.omegas.iter().position(|&w| w == 1.0).expect("baseline weight present");
        (0..self.p1s.len()).map(|a| self.rate(a, b)).collect()
    }

    /// Best success rate over ω for each p1, with the maximizing ω (smallest on ties).
    pub fn envelope(&self) -> Vec<(f64, f64)> {
        (0..self.p1s.len())
            .map(|a| {
                (0..self.omegas.len()).fold((f64::NEG_INFINITY, f64::NAN), |best, b| {
                    let r = self.rate(a, b);
                    if r > best.0 || (r == best.0 && self.omegas[b] < best.1) {
                        (r, self.omegas[b])
                    } else {
                        best
                    }
                })
            })
            .collect()
    }

    pub fn to_table(&self) -> Table {
        let mut cols: Vec<String> = vec!["p1".into()];
        cols.extend(self.omegas.iter().map(|w| format!("omega={}", fmt_f64(*w))));
        cols.extend(["envelope".into(), "omega_star".into(), "baseline".into(), "trials".into()]);
        let mut t = Table::new(cols);
        let env = self.envelope();
        let base = self.baseline();
        for (a, &p1) in self.p1s.iter().enumerate() {
            let mut row = vec![fmt_f64(p1)];
            row.extend((0..self.omegas.len()).map(|b| fmt_f64(self.rate(a, b))));
            row.extend([fmt_f64(env[a].0), fmt_f64(env[a].1), fmt_f64(base[a]), self.trials.to_string()]);
            t.push(row);
        }
        t
    }
}

/// Success probability per `(p1, ω)` for `γ = (1/2, 1/2)` and fixed `p2`, `m`.
pub fn run_p1_sweep(p2: f64, omegas: &[f64], n: usize, m: usize, p1s: &[f64], trials: usize, seed: u64) -> Result<P1Sweep, ExperimentError> {
    check_weights(omegas)?;
    if m > n {
        return Err(ExperimentError::Invalid(format!("m = {m} exceeds n = {n}")));
    }
    let mut ws = omegas.to_vec();
    if !ws.contains(&1.0) {
        ws.insert(0, 1.0);
    }
    let layouts: Result<Vec<ClassLayout>, ExperimentError> = p1s
        .iter()
        .map(|&p1| {
            let model = SparsityModel::new(&[0.5, 0.5], &[p1, p2], &[1.0, 1.0]).map_err(|e| ExperimentError::Invalid(e.to_string()))?;
            Ok(ClassLayout::from_model(&model, n))
        })
        .collect();
    let layouts = layouts?;
    let jobs: Vec<(usize, usize)> = (0..p1s.len()).flat_map(|a| (0..trials).map(move |t| (a, t))).collect();
    let outcomes: Vec<(usize, Vec<bool>)> = jobs
        .par_iter()
        .map(|&(a, t)| {
            let mut rng = sampling::stream(seed, &[a as u64, t as u64]);
            let inst = recovery::sample_instance(&layouts[a], m, Amplitude::Gaussian, &[1.0, 1.0], &mut rng);
            (a, ws.iter().map(|&w| attempt(&inst, &per_index(&layouts[a], &[1.0, w])) == Outcome::Success).collect())
        })
        .collect();
    let mut successes = vec![vec![0; ws.len()]; p1s.len()];
    for (a, outs) in outcomes {
        for (b, ok) in outs.into_iter().enumerate() {
            successes[a][b] += ok as usize;
        }
    }
    Ok(P1Sweep { p2, n, m, p1s: p1s.to_vec(), omegas: ws, trials, seed, successes })
}

/// Settings of the two-step reweighted experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReweightedConfig {
    pub n: usize,
    pub m: usize,
    /// Support sizes to sweep.
    pub ks: Vec<usize>,
    pub amplitude: Amplitude,
    /// Weight on the complement of the estimated support in the second step.
    pub omega: f64,
    pub trials: usize,
}

impl ReweightedConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.m > self.n {
            return Err(ExperimentError::Invalid(format!("m = {} exceeds n = {}", self.m, self.n)));
        }
        if let Some(k) = self.ks.iter().find(|&&k| k > self.n) {
            return Err(ExperimentError::Invalid(format!("k = {k} exceeds n = {}", self.n)));
        }
        if !(self.omega >= 1.0 && self.omega.is_finite()) {
            return Err(ExperimentError::Invalid(format!("omega = {} must be at least 1", self.omega)));
        }
        Ok(())
    }
}

/// Plain and reweighted success curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReweightedResult {
    pub config: ReweightedConfig,
    pub seed: u64,
    pub plain: Vec<usize>,
    pub reweighted: Vec<usize>,
    pub plain_crossover: Option<f64>,
    pub reweighted_crossover: Option<f64>,
}

impl ReweightedResult {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["k", "trials", "plain_successes", "reweighted_successes", "plain_rate", "reweighted_rate"]);
        let tr = self.config.trials.max(1) as f64;
        for (i, &k) in self.config.ks.iter().enumerate() {
            t.push(vec![
                k.to_string(),
                self.config.trials.to_string(),
                self.plain[i].to_string(),
                self.reweighted[i].to_string(),
                fmt_f64(self.plain[i] as f64 / tr),
                fmt_f64(self.reweighted[i] as f64 / tr),
            ]);
        }
        t
    }
}

/// Indices of the `k` largest magnitudes (smallest index first among ties).
pub fn largest_k(x: &DVector<f64>, k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

/// Two-step reweighted ℓ1: solve plain ℓ1, keep the `k` largest entries as the
/// estimated support `L`, and re-solve with weight 1 on `L` and `ω` elsewhere.
pub fn reweighted_l1(a: &nalgebra::DMatrix<f64>, y: &DVector<f64>, k: usize, omega: f64) -> Result<(DVector<f64>, DVector<f64>), RecoveryError> {
    let n = a.ncols();
    let first = recovery::solve_weighted_l1(a, y, &vec![1.0; n], DEFAULT_LP_TOL)?.x;
    let mut w = vec![omega; n];
    for j in largest_k(&first, k) {
        w[j] = 1.0;
    }
    let second = recovery::solve_weighted_l1(a, y, &w, DEFAULT_LP_TOL)?.x;
    Ok((first, second))
}

/// k at which a decreasing success curve crosses 1/2, by linear interpolation.
pub fn crossover(ks: &[usize], rates: &[f64]) -> Option<f64> {
    for i in 0..ks.len().saturating_sub(1) {
        let (f0, f1) = (rates[i], rates[i + 1]);
        if f0 >= 0.5 && f1 < 0.5 {
            return Some(ks[i] as f64 + (f0 - 0.5) / (f0 - f1) * (ks[i + 1] - ks[i]) as f64);
        }
    }
    None
}

/// Plain versus reweighted success over the support sizes of `config`.
pub fn run_reweighted(config: &ReweightedConfig, seed: u64) -> Result<ReweightedResult, ExperimentError> {
    config.validate()?;
    let jobs: Vec<(usize, usize)> = (0..config.ks.len()).flat_map(|a| (0..config.trials).map(move |t| (a, t))).collect();
    let outcomes: Vec<(usize, bool, bool)> = jobs
        .par_iter()
        .map(|&(a, t)| {
            let layout = ClassLayout { sizes: vec![config.n], support: vec![config.ks[a]] };
            let mut rng = sampling::stream(seed, &[config.ks[a] as u64, t as u64]);
            let inst = recovery::sample_instance(&layout, config.m, config.amplitude, &[1.0], &mut rng);
            match reweighted_l1(&inst.a, &inst.y, config.ks[a], config.omega) {
                Ok((p, r)) => (
                    a,
                    recovery::recovery_success(&inst.x0, &p, DEFAULT_REL_TOL),
                    recovery::recovery_success(&inst.x0, &r, DEFAULT_REL_TOL),
                ),
                Err(_) => (a, false, false),
            }
        })
        .collect();
    let mut plain = vec![0; config.ks.len()];
    let mut reweighted = vec![0; config.ks.len()];
    for (a, p, r) in outcomes {
        plain[a] += p as usize;
        reweighted[a] += r as usize;
    }
    let tr = config.trials.max(1) as f64;
    let rate = |v: &[usize]| v.iter().map(|&s| s as f64 / tr).collect::<Vec<_>>();
    Ok(ReweightedResult {
        plain_crossover: crossover(&config.ks, &rate(&plain)),
        reweighted_crossover: crossover(&config.ks, &rate(&reweighted)),
        config: config.clone(),
        seed,
        plain,
        reweighted,
    })
}

/// One noisy recovery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoisyTrial {
    pub omega: f64,
    pub input_snr_db: f64,
    pub trial: usize,
    pub output_snr_db: f64,
}

/// Noisy recoveries and their per-(ω, input SNR) averages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisyResult {
    pub omegas: Vec<f64>,
    pub snrs_db: Vec<f64>,
    pub trials: Vec<NoisyTrial>,
    /// `averages[i][j]` for `omegas[i]`, `snrs_db[j]`.
    pub averages: Vec<Vec<f64>>,
}

impl NoisyResult {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["omega", "input_snr_db", "trial", "output_snr_db"]);
        for r in &self.trials {
            t.push(vec![fmt_f64(r.omega), fmt_f64(r.input_snr_db), r.trial.to_string(), fmt_f64(r.output_snr_db)]);
        }
        t
    }

    pub fn averages_table(&self) -> Table {
        let mut t = Table::new(["omega", "input_snr_db", "mean_output_snr_db"]);
        for (i, &w) in self.omegas.iter().enumerate() {
            for (j, &s) in self.snrs_db.iter().enumerate() {
                t.push(vec![fmt_f64(w), fmt_f64(s), fmt_f64(self.averages[i][j])]);
            }
        }
        t
    }
}

/// `10·log10(‖x‖² / ‖x − x̂‖²)`, capped at [`MAX_SNR_DB`].
pub fn snr_db(x: &DVector<f64>, x_hat: &DVector<f64>) -> f64 {
    let err = (x - x_hat).norm_squared();
    if err == 0.0 {
        return MAX_SNR_DB;
    }
    (10.0 * (x.norm_squared() / err).log10()).min(MAX_SNR_DB)
}

/// Noisy recovery: the model signal plus white Gaussian noise at the given
/// input SNR (dB; `inf` for none) is measured and recovered with weights `(1, ω)`.
/// The output SNR compares the recovery with the noisy signal.
pub fn run_noisy_snr(model: &SparsityModel, omegas: &[f64], n: usize, m: usize, snrs_db: &[f64], trials: usize, seed: u64) -> Result<NoisyResult, ExperimentError> {
    require_two_classes(model)?;
    check_weights(omegas)?;
    if m > n {
        return Err(ExperimentError::Invalid(format!("m = {m} exceeds n = {n}")));
    }
    if snrs_db.iter().any(|s| s.is_nan()) {
        return Err(ExperimentError::Invalid("input SNR must be a number or inf".into()));
    }
    let layout = ClassLayout::from_model(model, n);
    let jobs: Vec<(usize, usize)> = (0..snrs_db.len()).flat_map(|j| (0..trials).map(move |t| (j, t))).collect();
    let rows: Vec<(usize, usize, Vec<f64>)> = jobs
        .par_iter()
        .map(|&(j, t)| {
            let mut rng = sampling::stream(seed, &[j as u64, t as u64]);
            let mut inst = recovery::sample_instance(&layout, m, Amplitude::Gaussian, &[1.0, 1.0], &mut rng);
            let snr = snrs_db[j];
            if snr.is_finite() {
                let e: DVector<f64> = DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
                let en = e.norm();
                if en > 0.0 && inst.x0.norm() > 0.0 {
                    let scale = inst.x0.norm() / en * 10f64.powf(-snr / 20.0);
                    inst.x0 += e * scale;
                }
                inst.y = &inst.a * &inst.x0;
            }
            let outs = omegas
                .iter()
                .map(|&w| match recovery::solve_weighted_l1(&inst.a, &inst.y, &per_index(&layout, &[1.0, w]), DEFAULT_LP_TOL) {
                    Ok(s) => snr_db(&inst.x0, &s.x),
                    Err(_) => f64::NAN,
                })
                .collect();
            (j, t, outs)
        })
        .collect();
    let mut trials_out = Vec::with_capacity(rows.len() * omegas.len());
    let mut sums = vec![vec![(0.0, 0usize); snrs_db.len()]; omegas.len()];
    for (i, &w) in omegas.iter().enumerate() {
        for (j, t, outs) in &rows {
            trials_out.push(NoisyTrial { omega: w, input_snr_db: snrs_db[*j], trial: *t, output_snr_db: outs[i] });
            if outs[i].is_finite() {
                sums[i][*j].0 += outs[i];
                sums[i][*j].1 += 1;
            }
        }
    }
    let averages = sums.iter().map(|r| r.iter().map(|&(s, c)| if c == 0 { f64::NAN } else { s / c as f64 }).collect()).collect();
    Ok(NoisyResult { omegas: omegas.to_vec(), snrs_db: snrs_db.to_vec(), trials: trials_out, averages })
}
