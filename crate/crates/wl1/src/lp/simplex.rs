//! Two-phase revised primal simplex on dense data.
//!
//! The basis inverse is rebuilt from an LU factorization every
//! [`REFACTOR_EVERY`] pivots and updated by elementary row operations (product
//! form) in between. Pricing is Dantzig's rule with the smallest index winning
//! ties. After [`DEGENERATE_SWITCH`] consecutive degenerate pivots it falls
//! back to Bland's rule, which cannot cycle, until a pivot makes progress.

use nalgebra::{DMatrix, DVector};

use super::{Certificate, LpError, LpOptions, LpProblem, LpSolution, LpStatus};
use super::presolve;

/// Pivots between refactorizations of the basis.
pub const REFACTOR_EVERY: usize = 64;
/// Consecutive degenerate pivots before switching to Bland's rule.
pub const DEGENERATE_SWITCH: usize = 50;
/// Smallest pivot element accepted in the ratio test.
const PIVOT_TOL: f64 = 1e-9;

enum PhaseEnd {
    Optimal,
    Unbounded,
    IterLimit,
}

struct Basis<'a> {
    a: &'a DMatrix<f64>,
    b: &'a DVector<f64>,
    m: usize,
    n: usize,
    /// Variable in each basis position; `n..n+m` are artificials.
    vars: Vec<usize>,
    is_basic: Vec<bool>,
    inv: DMatrix<f64>,
    xb: DVector<f64>,
    since_refactor: usize,
}

impl<'a> Basis<'a> {
    fn artificial(a: &'a DMatrix<f64>, b: &'a DVector<f64>) -> Self {
        let (m, n) = a.shape();
        let mut is_basic = vec![false; n + m];
        for v in is_basic.iter_mut().skip(n) {
            *v = true;
        }
        Basis {
            a,
            b,
            m,
            n,
            vars: (n..n + m).collect(),
            is_basic,
            inv: DMatrix::identity(m, m),
            xb: b.clone(),
            since_refactor: 0,
        }
    }

    /// `B⁻¹ a_j`.
    fn ftran(&self, j: usize) -> DVector<f64> {
        if j < self.n {
            &self.inv * self.a.column(j)
        } else {
            self.inv.column(j - self.n).into_owned()
        }
    }

    /// Simplex multipliers `π = B⁻ᵀ c_B`.
    fn duals(&self, cost: &[f64]) -> DVector<f64> {
        let cb = DVector::from_iterator(self.m, self.vars.iter().map(|&v| cost[v]));
        self.inv.tr_mul(&cb)
    }

    fn refactor(&mut self) -> Result<(), LpError> {
        self.since_refactor = 0;
        if self.m == 0 {
            return Ok(());
        }
        let mut bm = DMatrix::zeros(self.m, self.m);
        for (pos, &v) in self.vars.iter().enumerate() {
            if v < self.n {
                bm.set_column(pos, &self.a.column(v));
            } else {
                bm[(v - self.n, pos)] = 1.0;
            }
        }
        self.inv = bm.lu().try_inverse().ok_or(LpError::SingularBasis)?;
        self.xb = &self.inv * self.b;
        Ok(())
    }

    fn pivot(&mut self, r: usize, q: usize, u: &DVector<f64>, theta: f64) {
        let ur = u[r];
        for k in 0..self.m {
            let vr = self.inv[(r, k)] / ur;
            if vr != 0.0 {
                for i in 0..self.m {
                    if i != r {
                        self.inv[(i, k)] -= u[i] * vr;
                    }
                }
            }
            self.inv[(r, k)] = vr;
        }
        for i in 0..self.m {
            if i != r {
                self.xb[i] -= theta * u[i];
            }
        }
        self.xb[r] = theta;
        self.is_basic[self.vars[r]] = false;
        self.is_basic[q] = true;
        self.vars[r] = q;
        self.since_refactor += 1;
    }

    fn reduced_cost(&self, j: usize, cost: &[f64], atpi: &DVector<f64>, pi: &DVector<f64>) -> f64 {
        cost[j] - if j < self.n { atpi[j] } else { pi[j - self.n] }
    }

    /// Runs simplex iterations for `cost` until optimality, unboundedness or the iteration limit.
    fn run(&mut self, cost: &[f64], phase_two: bool, opts: &LpOptions, iters: &mut usize) -> Result<PhaseEnd, LpError> {
        let dtol = opts.tol * cost.iter().fold(1.0f64, |acc, c| acc.max(c.abs()));
        let ptol = opts.tol * (1.0 + self.b.amax());
        let entering_limit = if phase_two { self.n } else { self.n + self.m };
        let mut degenerate = 0;
        let mut bland = false;
        loop {
            if *iters >= opts.max_iter {
                return Ok(PhaseEnd::IterLimit);
            }
            let pi = self.duals(cost);
            let atpi = self.a.tr_mul(&pi);
            let mut entering = None;
            let mut best = -dtol;
            for j in 0..entering_limit {
                if self.is_basic[j] {
                    continue;
                }
                let d = self.reduced_cost(j, cost, &atpi, &pi);
                if bland {
                    if d < -dtol {
                        entering = Some(j);
                        break;
                    }
                } else if d < best {
                    best = d;
                    entering = Some(j);
                }
            }
            let Some(q) = entering else {
                return Ok(PhaseEnd::Optimal);
            };
            let u = self.ftran(q);

            // An artificial left in the basis after phase one sits at zero and
            // must stay there: it leaves as soon as the entering column touches it.
            let mut leaving = None;
            if phase_two {
                leaving = (0..self.m)
                    .filter(|&i| self.vars[i] >= self.n && u[i].abs() > PIVOT_TOL)
                    .min_by_key(|&i| self.vars[i]);
            }
            let theta = if let Some(r) = leaving {
                self.xb[r] / u[r]
            } else {
                let mut min_ratio = f64::INFINITY;
                for i in 0..self.m {
                    if u[i] > PIVOT_TOL {
                        min_ratio = min_ratio.min(self.xb[i].max(0.0) / u[i]);
                    }
                }
                if !min_ratio.is_finite() {
                    return Ok(PhaseEnd::Unbounded);
                }
                let slack = 1e-12 * (1.0 + min_ratio);
                let ties = (0..self.m).filter(|&i| u[i] > PIVOT_TOL && self.xb[i].max(0.0) / u[i] <= min_ratio + slack);
                leaving = if bland {
                    ties.min_by_key(|&i| self.vars[i])
                } else {
                    // Largest pivot among ties for stability; first index wins exact ties.
                    ties.fold(None, |acc: Option<usize>, i| match acc {
                        Some(r) if u[r] >= u[i] => Some(r),
                        _ => Some(i),
                    })
                };
                min_ratio
            };
            let r = leaving.expect("ratio test found a row");
            self.pivot(r, q, &u, theta);
            for x in self.xb.iter_mut() {
                if *x < 0.0 && *x > -ptol {
                    *x = 0.0;
                }
            }
            *iters += 1;
            if theta.abs() <= ptol {
                degenerate += 1;
                if degenerate > DEGENERATE_SWITCH {
                    bland = true;
                }
            } else {
                degenerate = 0;
                bland = false;
            }
            if self.since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
            }
        }
    }

    /// Pivots basic artificials out of the basis where a structural column allows it.
    fn drive_out_artificials(&mut self) {
        let scale = self.a.amax().max(1.0);
        for r in 0..self.m {
            if self.vars[r] < self.n {
                continue;
            }
            let row = self.inv.row(r).into_owned();
            let alpha = self.a.tr_mul(&row.transpose());
            let best = (0..self.n)
                .filter(|&j| !self.is_basic[j])
                .map(|j| (j, alpha[j].abs()))
                .fold(None, |acc: Option<(usize, f64)>, x| match acc {
                    Some(a) if a.1 >= x.1 => Some(a),
                    _ => Some(x),
                });
            if let Some((j, mag)) = best {
                if mag > 1e-7 * scale {
                    let u = self.ftran(j);
                    let theta = self.xb[r] / u[r];
                    self.pivot(r, j, &u, theta);
                }
            }
        }
    }
}

/// Solves `min cᵀx  s.t.  Ax = b, x ≥ 0`.
pub fn solve(problem: &LpProblem, opts: &LpOptions) -> Result<LpSolution, LpError> {
    let (m0, n) = problem.a.shape();
    let rows = presolve::independent_rows(&problem.a);
    let m = rows.rank();
    // Reduced system with b ≥ 0.
    let mut a = DMatrix::zeros(m, n);
    let mut b = DVector::zeros(m);
    let mut sign = vec![1.0; m];
    for (i, &r) in rows.kept.iter().enumerate() {
        let s = if problem.b[r] < 0.0 { -1.0 } else { 1.0 };
        sign[i] = s;
        a.set_row(i, &(problem.a.row(r) * s));
        b[i] = problem.b[r] * s;
    }

    let mut basis = Basis::artificial(&a, &b);
    let mut iters = 0;
    let mut phase1 = vec![0.0; n + m];
    for c in phase1.iter_mut().skip(n) {
        *c = 1.0;
    }
    let finish = |status: LpStatus, basis: &Basis, iters: usize| -> LpSolution {
        let x = primal(basis);
        let pi = basis.duals(&phase2_cost(&problem.c, m));
        build_solution(problem, &rows.kept, &sign, &a, &b, x, pi, status, iters, m)
    };

    match basis.run(&phase1, false, opts, &mut iters)? {
        PhaseEnd::IterLimit => return Ok(finish(LpStatus::IterLimit, &basis, iters)),
        PhaseEnd::Unbounded => unreachable!("phase one is bounded below by zero"),
        PhaseEnd::Optimal => {}
    }
    basis.refactor()?;
    let infeasibility: f64 = basis.vars.iter().zip(basis.xb.iter()).filter(|(&v, _)| v >= n).map(|(_, x)| x.abs()).sum();
    if infeasibility > 1e-8 * (1.0 + b.amax()) * (m.max(1) as f64) {
        return Ok(finish(LpStatus::Infeasible, &basis, iters));
    }
    basis.drive_out_artificials();
    basis.refactor()?;

    let cost = phase2_cost(&problem.c, m);
    let mut status = LpStatus::Optimal;
    // A second pass after refactoring confirms optimality on a fresh inverse.
    for _ in 0..3 {
        let before = iters;
        match basis.run(&cost, true, opts, &mut iters)? {
            PhaseEnd::IterLimit => {
                status = LpStatus::IterLimit;
                break;
            }
            PhaseEnd::Unbounded => {
                status = LpStatus::Unbounded;
                break;
            }
            PhaseEnd::Optimal => {}
        }
        basis.refactor()?;
        if iters == before {
            break;
        }
    }
    let mut sol = finish(status, &basis, iters);
    // Rows dropped in presolve must be satisfied too; otherwise b is not in range(A).
    if sol.status == LpStatus::Optimal && m < m0 && sol.certificate.primal_residual > 1e-9 * (1.0 + problem.b.norm()) {
        sol.status = LpStatus::Infeasible;
    }
    Ok(sol)
}

fn phase2_cost(c: &DVector<f64>, m: usize) -> Vec<f64> {
    c.iter().cloned().chain(std::iter::repeat_n(0.0, m)).collect()
}

fn primal(basis: &Basis) -> DVector<f64> {
    let mut x = DVector::zeros(basis.n);
    for (pos, &v) in basis.vars.iter().enumerate() {
        if v < basis.n {
            x[v] = basis.xb[pos].max(0.0);
        }
    }
    x
}

#[allow(clippy::too_many_arguments)]
fn build_solution(
    problem: &LpProblem,
    kept: &[usize],
    sign: &[f64],
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    x: DVector<f64>,
    pi: DVector<f64>,
    status: LpStatus,
    iterations: usize,
    rank: usize,
) -> LpSolution {
    let objective = problem.c.dot(&x);
    let primal_residual = (&problem.a * &x - &problem.b).norm();
    let reduced = &problem.c - a.tr_mul(&pi);
    let min_reduced_cost = reduced.iter().cloned().fold(f64::INFINITY, f64::min);
    let duality_gap = (objective - b.dot(&pi)).abs();
    let mut duals = DVector::zeros(problem.a.nrows());
    for (i, &r) in kept.iter().enumerate() {
        duals[r] = sign[i] * pi[i];
    }
    LpSolution {
        status,
        x,
        objective,
        duals,
        iterations,
        rank,
        certificate: Certificate { primal_residual, min_reduced_cost, duality_gap },
    }
}
