//! Smith normal form with recorded transforms.
//!
//! `snf` returns unimodular `U`, `V` with `U * A * V = diag(d)` and
//! `d_i | d_{i+1}`. The transforms are what make quotient-group coordinates
//! computable: `V` maps standard basis vectors to invariant-factor
//! coordinates, and spare rows of `U` span the left kernel of `A`.

use crate::error::{Error, Result};
use crate::matrix::{div_floor, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// Invariant factors, ascending divisibility chain; zeros trail when the
    /// matrix is rank-deficient.
    pub d: Vec<i128>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

/// Smith normal form of a square matrix.
pub fn snf(a: &IntMatrix) -> Result<SnfResult> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    snf_rectangular(a)
}

/// Smith normal form of an arbitrary matrix (internal; diagonal has
/// `min(rows, cols)` entries).
pub(crate) fn snf_rectangular(a: &IntMatrix) -> Result<SnfResult> {
    let m = a.rows();
    let n = a.cols();
    let steps = m.min(n);
    let mut a = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for k in 0..steps {
        loop {
            // Deterministic pivot: smallest absolute nonzero value in the
            // trailing submatrix, earliest position on ties.
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..m {
                for j in k..n {
                    if a[(i, j)] != 0
                        && pivot
                            .is_none_or(|p| a[(i, j)].unsigned_abs() < a[p].unsigned_abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break;
            };
            if pi != k {
                a.swap_rows(k, pi);
                u.swap_rows(k, pi);
            }
            if pj != k {
                a.swap_cols(k, pj);
                v.swap_cols(k, pj);
            }
            if a[(k, k)] < 0 {
                a.negate_row(k);
                u.negate_row(k);
            }

            let mut clean = true;
            for i in k + 1..m {
                if a[(i, k)] != 0 {
                    let q = div_floor(a[(i, k)], a[(k, k)])?;
                    if q != 0 {
                        a.add_row_multiple(i, k, -q)?;
                        u.add_row_multiple(i, k, -q)?;
                    }
                    if a[(i, k)] != 0 {
                        clean = false;
                    }
                }
            }
            for j in k + 1..n {
                if a[(k, j)] != 0 {
                    let q = div_floor(a[(k, j)], a[(k, k)])?;
                    if q != 0 {
                        a.add_col_multiple(j, k, -q)?;
                        v.add_col_multiple(j, k, -q)?;
                    }
                    if a[(k, j)] != 0 {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }

            // Pivot must divide the whole trailing submatrix for the chain
            // d_k | d_{k+1} to come out of later steps.
            let mut fixed = true;
            'divcheck: for i in k + 1..m {
                for j in k + 1..n {
                    if a[(i, j)] % a[(k, k)] != 0 {
                        a.add_row_multiple(k, i, 1)?;
                        u.add_row_multiple(k, i, 1)?;
                        fixed = false;
                        break 'divcheck;
                    }
                }
            }
            if fixed {
                break;
            }
        }
    }

    let d = (0..steps).map(|i| a[(i, i)]).collect();
    Ok(SnfResult { d, u, v })
}

/// Basis for the left kernel `{ x : x * A = 0 }`, as rows.
pub(crate) fn left_kernel(a: &IntMatrix) -> Result<IntMatrix> {
    let m = a.rows();
    let res = snf_rectangular(a)?;
    let rank = res.d.iter().filter(|&&x| x != 0).count();
    let rows = (rank..m).map(|i| res.u.row(i).to_vec()).collect();
    IntMatrix::from_rows(rows)
}
