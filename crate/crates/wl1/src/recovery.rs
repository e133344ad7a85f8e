//! Random nonuniformly sparse instances and weighted ℓ1 recovery.
//!
//! Coordinates are split into contiguous class blocks. Each class receives a
//! uniformly random support of a fixed size, the nonzero values are drawn from
//! an [`Amplitude`](crate::sampling::Amplitude) distribution, and `A` has i.i.d. standard normal entries.
//! Recovery solves `min Σ w_j|x_j|  s.t.  Ax = y` as the LP over `x = x⁺ − x⁻`.

use std::io::{BufRead, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponents::SparsityModel;
use crate::lp::{self, Certificate, LpError, LpOptions, LpProblem, LpStatus};
use crate::sampling::{self, Amplitude};

/// Default relative ℓ2 tolerance for declaring exact recovery.
pub const DEFAULT_REL_TOL: f64 = 1e-6;
/// Default LP feasibility/optimality tolerance.
pub const DEFAULT_LP_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum RecoveryError {
    #[error("invalid dimensions: {0}")]
    Dimension(String),
    #[error("y is not in the range of A (numerically rank-deficient measurement matrix)")]
    Infeasible,
    #[error("LP iteration limit reached")]
    IterLimit,
    #[error("LP solution failed certification: {0}")]
    Uncertified(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("malformed matrix file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Class sizes `n_i` and per-class support sizes `k_i` of an instance family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassLayout {
    pub sizes: Vec<usize>,
    pub support: Vec<usize>,
}

impl ClassLayout {
    pub fn new(sizes: Vec<usize>, support: Vec<usize>) -> Result<Self, RecoveryError> {
        if sizes.is_empty() || sizes.len() != support.len() {
            return Err(RecoveryError::Dimension("class sizes and support sizes must have equal, nonzero length".into()));
        }
        if let Some(i) = (0..sizes.len()).find(|&i| support[i] > sizes[i]) {
            return Err(RecoveryError::Dimension(format!("class {i}: support {} exceeds size {}", support[i], sizes[i])));
        }
        Ok(ClassLayout { sizes, support })
    }

    /// Class sizes by largest-remainder rounding of `γ_i n`, supports `round(p_i n_i)`.
    pub fn from_model(model: &SparsityModel, n: usize) -> Self {
        let sizes = class_sizes(&model.gamma(), n);
        let support = sizes.iter().zip(model.p()).map(|(&ni, p)| ((p * ni as f64).round() as usize).min(ni)).collect();
        ClassLayout { sizes, support }
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn total_support(&self) -> usize {
        self.support.iter().sum()
    }

    /// Class index of every coordinate.
    pub fn class_of(&self) -> Vec<usize> {
        self.sizes.iter().enumerate().flat_map(|(i, &s)| std::iter::repeat_n(i, s)).collect()
    }

    /// First coordinate of each class block.
    pub fn offsets(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .scan(0, |acc, &s| {
                let o = *acc;
                *acc += s;
                Some(o)
            })
            .collect()
    }
}

/// Splits `n` into parts proportional to `gamma` by largest-remainder rounding.
pub fn class_sizes(gamma: &[f64], n: usize) -> Vec<usize> {
    let exact: Vec<f64> = gamma.iter().map(|g| g * n as f64).collect();
    let mut sizes: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut rest = n.saturating_sub(sizes.iter().sum());
    let mut order: Vec<usize> = (0..gamma.len()).collect();
    // Largest fractional part first; earlier class wins ties.
    order.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())).then(a.cmp(&b)));
    for &i in order.iter().cycle() {
        if rest == 0 {
            break;
        }
        sizes[i] += 1;
        rest -= 1;
    }
    sizes
}

/// One measurement problem with known ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryInstance {
    #[serde(skip)]
    pub a: DMatrix<f64>,
    #[serde(skip)]
    pub x0: DVector<f64>,
    #[serde(skip)]
    pub y: DVector<f64>,
    pub layout: ClassLayout,
    /// Per-class weights.
    pub omega: Vec<f64>,
    /// Master seed and task coordinates the instance was drawn from, if any.
    pub seed: Option<(u64, Vec<u64>)>,
}

impl RecoveryInstance {
    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    /// Weight of every coordinate.
    pub fn weights(&self) -> Vec<f64> {
        self.layout.class_of().iter().map(|&c| self.omega[c]).collect()
    }

    /// Writes `a.txt`, `x0.txt` and `y.txt` in the plain-text matrix format.
    pub fn write_bundle(&self, dir: &Path) -> Result<(), RecoveryError> {
        std::fs::create_dir_all(dir)?;
        write_matrix(&mut std::fs::File::create(dir.join("a.txt"))?, &self.a)?;
        write_matrix(&mut std::fs::File::create(dir.join("x0.txt"))?, &DMatrix::from_column_slice(self.n(), 1, self.x0.as_slice()))?;
        write_matrix(&mut std::fs::File::create(dir.join("y.txt"))?, &DMatrix::from_column_slice(self.m(), 1, self.y.as_slice()))?;
        Ok(())
    }
}

/// Draws an instance with the given layout, measurement count and amplitudes.
pub fn sample_instance<R: Rng + ?Sized>(layout: &ClassLayout, m: usize, amplitude: Amplitude, omega: &[f64], rng: &mut R) -> RecoveryInstance {
    let n = layout.n();
    let x0 = sample_signal(layout, amplitude, rng);
    let a = DMatrix::from_fn(m, n, |_, _| StandardNormal.sample(rng));
    let y = &a * &x0;
    RecoveryInstance { a, x0, y, layout: layout.clone(), omega: omega.to_vec(), seed: None }
}

/// A signal with uniformly random supports of the layout's sizes.
pub fn sample_signal<R: Rng + ?Sized>(layout: &ClassLayout, amplitude: Amplitude, rng: &mut R) -> DVector<f64> {
    let mut x0 = DVector::zeros(layout.n());
    for ((&size, &k), off) in layout.sizes.iter().zip(&layout.support).zip(layout.offsets()) {
        for j in sampling::random_subset(rng, size, k) {
            x0[off + j] = amplitude.sample(rng);
        }
    }
    x0
}

/// Draws an instance of `model` at dimension `n` with `m` Gaussian measurements and Gaussian nonzeros.
pub fn sample_model_instance(model: &SparsityModel, n: usize, m: usize, seed: u64) -> Result<RecoveryInstance, RecoveryError> {
    if m > n {
        return Err(RecoveryError::Dimension(format!("m = {m} exceeds n = {n}")));
    }
    let layout = ClassLayout::from_model(model, n);
    let mut rng = sampling::stream(seed, &[]);
    let mut inst = sample_instance(&layout, m, Amplitude::Gaussian, &model.omega(), &mut rng);
    inst.seed = Some((seed, vec![]));
    Ok(inst)
}

/// Solution of the weighted ℓ1 program.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedL1Solution {
    pub x: DVector<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub certificate: Certificate,
}

/// Solves `min Σ w_j|x_j|  s.t.  Ax = y`; the LP optimum is certified to `tol`.
pub fn solve_weighted_l1(a: &DMatrix<f64>, y: &DVector<f64>, w: &[f64], tol: f64) -> Result<WeightedL1Solution, RecoveryError> {
    let (m, n) = a.shape();
    if y.len() != m || w.len() != n {
        return Err(RecoveryError::Dimension(format!("A is {m}×{n}, y has {}, w has {}", y.len(), w.len())));
    }
    if w.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(RecoveryError::Dimension("weights must be positive and finite".into()));
    }
    let mut big = DMatrix::zeros(m, 2 * n);
    big.view_mut((0, 0), (m, n)).copy_from(a);
    big.view_mut((0, n), (m, n)).copy_from(&(-a));
    let c = DVector::from_fn(2 * n, |j, _| w[j % n]);
    let problem = LpProblem::new(big, y.clone(), c)?;
    let sol = lp::solve(&problem, &LpOptions { tol, ..LpOptions::default() })?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(RecoveryError::Infeasible),
        LpStatus::IterLimit => return Err(RecoveryError::IterLimit),
        LpStatus::Unbounded => unreachable!("positive weights bound the objective below by zero"),
    }
    if !sol.is_certified(&problem, tol) {
        return Err(RecoveryError::Uncertified(format!("{:?}", sol.certificate)));
    }
    let x = DVector::from_fn(n, |i, _| sol.x[i] - sol.x[n + i]);
    Ok(WeightedL1Solution { x, objective: sol.objective, iterations: sol.iterations, certificate: sol.certificate })
}

/// `‖x̂ − x0‖₂ ≤ rel_tol · max(1, ‖x0‖₂)`.
pub fn recovery_success(x0: &DVector<f64>, x_hat: &DVector<f64>, rel_tol: f64) -> bool {
    (x_hat - x0).norm() <= rel_tol * x0.norm().max(1.0)
}

/// Writes a matrix as a `rows cols` header line followed by row-major entries.
pub fn write_matrix<W: Write>(out: &mut W, a: &DMatrix<f64>) -> std::io::Result<()> {
    writeln!(out, "{} {}", a.nrows(), a.ncols())?;
    for i in 0..a.nrows() {
        let row: Vec<String> = (0..a.ncols()).map(|j| format!("{:e}", a[(i, j)])).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

/// Reads the format of [`write_matrix`]; blank lines and `#` comments are ignored.
pub fn read_matrix<R: BufRead>(input: R) -> Result<DMatrix<f64>, RecoveryError> {
    let mut tokens = Vec::new();
    for line in input.lines() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("");
        tokens.extend(body.split_whitespace().map(str::to_owned));
    }
    let mut it = tokens.into_iter();
    let mut dim = |what: &str| -> Result<usize, RecoveryError> {
        it.next()
            .ok_or_else(|| RecoveryError::Format(format!("missing {what}")))?
            .parse()
            .map_err(|e| RecoveryError::Format(format!("{what}: {e}")))
    };
    let rows = dim("row count")?;
    let cols = dim("column count")?;
    let values: Result<Vec<f64>, RecoveryError> =
        it.map(|t| t.parse::<f64>().map_err(|e| RecoveryError::Format(format!("entry '{t}': {e}")))).collect();
    let values = values?;
    if values.len() != rows * cols {
        return Err(RecoveryError::Format(format!("expected {} entries, found {}", rows * cols, values.len())));
    }
    Ok(DMatrix::from_row_slice(rows, cols, &values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn largest_remainder_sizes() {
        assert_eq!(class_sizes(&[0.5, 0.5], 11), vec![6, 5]);
        assert_eq!(class_sizes(&[0.2, 0.3, 0.5], 7), vec![1, 2, 4]);
        assert_eq!(class_sizes(&[1.0 / 3.0; 3], 100).iter().sum::<usize>(), 100);
    }

    #[test]
    fn zero_sparsity_gives_zero_signal() {
        let model = SparsityModel::new(&[0.5, 0.5], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let inst = sample_model_instance(&model, 20, 10, 1).unwrap();
        assert_eq!(inst.x0.norm(), 0.0);
        assert_eq!(inst.y.norm(), 0.0);
    }

    #[test]
    fn support_sizes_are_exact() {
        let model = SparsityModel::new(&[0.5, 0.5], &[0.4, 0.05], &[1.0, 2.0]).unwrap();
        for seed in 0..20 {
            let inst = sample_model_instance(&model, 100, 50, seed).unwrap();
            assert_eq!(inst.x0.rows(0, 50).iter().filter(|v| **v != 0.0).count(), 20);
            assert_eq!(inst.x0.rows(50, 50).iter().filter(|v| **v != 0.0).count(), 3);
            assert!((&inst.a * &inst.x0 - &inst.y).norm() <= 1e-12 * (1.0 + inst.y.norm()));
        }
    }

    #[test]
    fn square_system_is_solved_exactly() {
        let mut rng = sampling::stream(3, &[]);
        let a = DMatrix::from_fn(6, 6, |_, _| StandardNormal.sample(&mut rng));
        let x = DVector::from_fn(6, |i, _| i as f64 - 2.5);
        let s = solve_weighted_l1(&a, &(&a * &x), &[1.0; 6], DEFAULT_LP_TOL).unwrap();
        assert!((s.x - x).norm() < 1e-8);
        let s = solve_weighted_l1(&a, &DVector::zeros(6), &[1.0; 6], DEFAULT_LP_TOL).unwrap();
        assert_eq!(s.x.norm(), 0.0);
    }

    #[test]
    fn success_tolerance_contract() {
        let x0 = DVector::from_vec(vec![1.0, 0.0]);
        assert!(recovery_success(&x0, &x0, 1e-6));
        assert!(!recovery_success(&x0, &(&x0 + DVector::from_element(2, 1.0)), 1e-6));
        let edge = DVector::from_vec(vec![1.0 + 0.5, 0.0]);
        assert!(recovery_success(&x0, &edge, 0.5));
    }

    #[test]
    fn matrix_text_round_trip() {
        let a = DMatrix::from_row_slice(2, 3, &[1.0, -2.5e-7, 3.0, 0.1, 1e300, -0.0]);
        let mut buf = Vec::new();
        write_matrix(&mut buf, &a).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("2 3\n"));
        let b = read_matrix(std::io::Cursor::new(format!("# comment\n{text}"))).unwrap();
        assert_eq!(a, b);
        assert!(read_matrix(std::io::Cursor::new("2 2\n1 2 3")).is_err());
    }
}
