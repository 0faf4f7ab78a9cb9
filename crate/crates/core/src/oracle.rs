//! Dense O(n^3) reference implementations.
//!
//! Everything here is deliberately naive and independent of the structured
//! fast paths; tests compare the two. [`dense_gepp`] shares the pivot
//! tie-breaking rule of the fast factorization (strictly larger magnitude
//! wins, earliest index on ties) so factorizations agree element-wise, not
//! just up to permutation.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::fast_gepp::{apply_pivots, apply_pivots_rev, PIVOT_THRESHOLD};

/// Dense LU factorization with partial pivoting, `P^T A = L U`.
///
/// `perm[k]` is the row swapped with row `k` at step `k` (0-based), the same
/// convention as the structured factorization.
#[derive(Debug, Clone)]
pub struct DensePlu {
    pub perm: Vec<usize>,
    pub l: DenseMatrix,
    pub u: DenseMatrix,
}

/// Gaussian elimination with partial pivoting on a dense square matrix.
pub fn dense_gepp(a: &DenseMatrix) -> Result<DensePlu> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "square matrix required, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut work = a.clone();
    let mut l = DenseMatrix::identity(n);
    let mut perm = Vec::with_capacity(n);
    for k in 0..n {
        let mut piv = k;
        let mut best = work[(k, k)].abs();
        let mut colmax = best;
        for i in k + 1..n {
            let v = work[(i, k)].abs();
            colmax = colmax.max(v);
            if v > best {
                best = v;
                piv = i;
            }
        }
        if colmax == 0.0 || best < PIVOT_THRESHOLD * colmax {
            return Err(Error::NumericallySingular { step: k + 1 });
        }
        perm.push(piv);
        work.swap_rows(k, piv);
        if piv != k {
            for j in 0..k {
                let tmp = l[(k, j)];
                l[(k, j)] = l[(piv, j)];
                l[(piv, j)] = tmp;
            }
        }
        let d = work[(k, k)];
        for i in k + 1..n {
            let m = work[(i, k)] / d;
            l[(i, k)] = m;
            work[(i, k)] = 0.0;
            for j in k + 1..n {
                let s = m * work[(k, j)];
                work[(i, j)] -= s;
            }
        }
    }
    let mut u = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            u[(i, j)] = work[(i, j)];
        }
    }
    Ok(DensePlu { perm, l, u })
}

/// Solves `A x = b` given a dense factorization of `A`.
pub fn dense_solve(plu: &DensePlu, b: &[f64]) -> Vec<f64> {
    let n = plu.perm.len();
    assert_eq!(b.len(), n, "right-hand side length mismatch");
    let mut y = b.to_vec();
    apply_pivots(&plu.perm, &mut y);
    // forward substitution with unit lower triangle
    for i in 0..n {
        for j in 0..i {
            let s = plu.l[(i, j)] * y[j];
            y[i] -= s;
        }
    }
    // back substitution
    for i in (0..n).rev() {
        for j in i + 1..n {
            let s = plu.u[(i, j)] * y[j];
            y[i] -= s;
        }
        y[i] /= plu.u[(i, i)];
    }
    y
}

/// Solves `A^T y = c` given a dense factorization of `A`.
pub fn dense_solve_transposed(plu: &DensePlu, c: &[f64]) -> Vec<f64> {
    let n = plu.perm.len();
    assert_eq!(c.len(), n, "right-hand side length mismatch");
    let mut y = c.to_vec();
    // U^T z = c (forward substitution with division)
    for i in 0..n {
        for j in 0..i {
            let s = plu.u[(j, i)] * y[j];
            y[i] -= s;
        }
        y[i] /= plu.u[(i, i)];
    }
    // L^T w = z (back substitution, unit diagonal)
    for i in (0..n).rev() {
        for j in i + 1..n {
            let s = plu.l[(j, i)] * y[j];
            y[i] -= s;
        }
    }
    apply_pivots_rev(&plu.perm, &mut y);
    y
}

/// Inverse via one factorization and `n` unit-vector solves.
pub fn dense_inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.rows();
    let plu = dense_gepp(a)?;
    let mut inv = DenseMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = dense_solve(&plu, &e);
        e[j] = 0.0;
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    Ok(inv)
}

/// Evaluates `sum_k d[k] * W^k` for `k = 0 .. d.len()-1` by matrix Horner.
pub fn matrix_power_sum(w: &DenseMatrix, d: &[f64]) -> DenseMatrix {
    let n = w.rows();
    assert_eq!(n, w.cols(), "square matrix required");
    let mut acc = DenseMatrix::zeros(n, n);
    for &dk in d.iter().rev() {
        let mut next = w.matmul(&acc);
        for i in 0..n {
            next[(i, i)] += dk;
        }
        acc = next;
    }
    acc
}

/// Infinity-norm condition number `||A|| * ||A^-1||`; infinite when singular.
pub fn cond_estimate(a: &DenseMatrix) -> f64 {
    match dense_inverse(a) {
        Ok(inv) => a.inf_norm() * inv.inf_norm(),
        Err(_) => f64::INFINITY,
    }
}
