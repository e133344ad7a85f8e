//! Row-rank detection for equality constraints.
//!
//! Householder QR of `Aᵀ` with column pivoting by remaining norm: at each step
//! the row of `A` with the largest component orthogonal to the rows already kept
//! is selected. Rows whose remaining norm drops below `RANK_TOL · ‖A‖_F` are
//! linear combinations of the kept ones and are dropped.
//!
//! nalgebra's `ColPivQR` pivots on the largest single entry rather than the
//! largest column norm, which is not rank revealing, so the factorization is
//! written out here.

use nalgebra::{DMatrix, DVector};

/// Relative threshold for declaring a row dependent.
pub const RANK_TOL: f64 = 1e-10;

/// Result of the row-rank detection.
#[derive(Debug, Clone, PartialEq)]
pub struct RowBasis {
    /// Indices of a maximal independent set of rows, in increasing order.
    pub kept: Vec<usize>,
    /// Indices of the dropped (dependent) rows.
    pub dropped: Vec<usize>,
}

impl RowBasis {
    pub fn rank(&self) -> usize {
        self.kept.len()
    }
}

/// Finds a maximal set of numerically independent rows of `a`.
pub fn independent_rows(a: &DMatrix<f64>) -> RowBasis {
    let (m, n) = a.shape();
    let scale = a.norm();
    if m == 0 || scale == 0.0 {
        return RowBasis { kept: vec![], dropped: (0..m).collect() };
    }
    // Columns of `work` are the rows of A.
    let mut work = a.transpose();
    let mut order: Vec<usize> = (0..m).collect();
    let mut rank = 0;
    for step in 0..m.min(n) {
        let (best, best_norm) = (step..m)
            .map(|j| (j, work.view((step, j), (n - step, 1)).norm()))
            .fold((step, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_norm <= RANK_TOL * scale {
            break;
        }
        work.swap_columns(step, best);
        order.swap(step, best);
        // Householder reflector zeroing work[step+1.., step].
        let mut v: DVector<f64> = work.view((step, step), (n - step, 1)).column(0).into_owned();
        let alpha = if v[0] >= 0.0 { -best_norm } else { best_norm };
        v[0] -= alpha;
        let vnorm2 = v.norm_squared();
        if vnorm2 > 0.0 {
            for j in step..m {
                let mut col = work.view_mut((step, j), (n - step, 1));
                let dot = v.dot(&col.column(0));
                col.column_mut(0).axpy(-2.0 * dot / vnorm2, &v, 1.0);
            }
        }
        rank += 1;
    }
    let mut kept: Vec<usize> = order[..rank].to_vec();
    let mut dropped: Vec<usize> = order[rank..].to_vec();
    kept.sort_unstable();
    dropped.sort_unstable();
    RowBasis { kept, dropped }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_rank_keeps_everything() {
        let a = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 2.0, 0.0, 1.0, 1.0]);
        let r = independent_rows(&a);
        assert_eq!(r.kept, vec![0, 1]);
        assert!(r.dropped.is_empty());
    }

    #[test]
    fn combination_is_dropped() {
        // Row 2 = row 0 + 2·row 1; the small row 3 is independent.
        let a = DMatrix::from_row_slice(
            4,
            4,
            &[1.0, 2.0, 0.0, 1.0, 0.0, 1.0, 3.0, -1.0, 1.0, 4.0, 6.0, -1.0, 0.0, 0.0, 0.0, 1e-3],
        );
        let r = independent_rows(&a);
        assert_eq!(r.rank(), 3);
        assert_eq!(r.dropped.len(), 1);
        assert!(r.kept.contains(&3));
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let r = independent_rows(&DMatrix::zeros(3, 5));
        assert_eq!(r.rank(), 0);
        assert_eq!(r.dropped, vec![0, 1, 2]);
    }
}
