//! Fast Gaussian elimination with partial pivoting on displacement
//! generators.
//!
//! The factorization never forms the dense matrix. At step `k` the Schur
//! complement `R^(k)` of the pivoted matrix satisfies the same displacement
//! equation as the input, against the trailing submatrix of `W` and with
//! updated generators `(G^(k), B^(k))`:
//!
//! * its first column is `diag(x^(k)) G^(k) b_1^(k)`, read off in O(alpha n);
//! * its first row `[d, u]` solves the row system
//!   `[d, u] (M - x_k N)^(k) = x_k g_1^(k) B^(k) M^(k)`,
//!   handled by the O(n) generator kernels of `recurrence_structure`;
//! * the next generators are rank-one updates
//!   `G^(k+1) = (G^(k) - [1; l/d] g_1^(k))[1:]` and
//!   `B^(k+1) = (B^(k) - b_1^(k) [1, u/d])[:, 1:]`.
//!
//! Total cost is O(alpha n^2) and the produced `L`, `U`, and permutation
//! agree element-wise with dense partial pivoting on the materialized
//! matrix (the dense oracle uses the same tie-breaking rule).

use crate::dense::DenseMatrix;
use crate::displacement::DisplacementInstance;
use crate::error::{Error, Result};
use crate::recurrence_structure::{qs_matvec, qs_solve, shifted_generators, trailing_submatrix};

/// Pivots smaller than this fraction of the column maximum are treated as
/// numerically zero. With free pivot choice the selected pivot is the
/// column maximum and only an exactly zero column trips the check; under
/// forced pivot sequences it guards against dividing by noise.
pub(crate) const PIVOT_THRESHOLD: f64 = 1e-13;

/// Result of the structured factorization: `P^T R = L U` where `perm[k]`
/// records the row swapped with row `k` at step `k` (0-based).
#[derive(Debug, Clone)]
pub struct PluFactorization {
    pub perm: Vec<usize>,
    /// Unit lower-triangular factor; subdiagonal magnitudes are at most 1
    /// when pivots were chosen freely.
    pub l: DenseMatrix,
    pub u: DenseMatrix,
    /// Nodes in pivoted order (the diagonal of `D_x` after `P^T`).
    pub pivoted_nodes: Vec<f64>,
    /// Inner-loop operations executed, a structural complexity witness.
    pub ops: u64,
}

/// Snapshot of the generator state entering elimination step `k` (1-based),
/// after the swaps of all earlier steps.
#[derive(Debug, Clone)]
pub struct SchurState {
    pub k: usize,
    pub g: DenseMatrix,
    pub b: DenseMatrix,
    pub nodes: Vec<f64>,
}

/// Applies the recorded swaps to a vector in factorization order,
/// producing `P^T v`.
pub fn apply_pivots(perm: &[usize], v: &mut [f64]) {
    for (k, &p) in perm.iter().enumerate() {
        v.swap(k, p);
    }
}

/// Applies the recorded swaps in reverse order, producing `P v`.
pub fn apply_pivots_rev(perm: &[usize], v: &mut [f64]) {
    for (k, &p) in perm.iter().enumerate().rev() {
        v.swap(k, p);
    }
}

#[inline]
fn gen_dot(g: &DenseMatrix, row: usize, b: &DenseMatrix, col: usize) -> f64 {
    let mut acc = 0.0;
    for a in 0..g.cols() {
        acc += g[(row, a)] * b[(a, col)];
    }
    acc
}

fn gepp_inner(
    inst: &DisplacementInstance,
    mut trace: Option<&mut Vec<SchurState>>,
    forced: Option<&[usize]>,
) -> Result<PluFactorization> {
    let n = inst.n();
    let alpha = inst.alpha_rank();
    let mut gm = inst.g.clone();
    let mut bm = inst.b.clone();
    let mut xs = inst.nodes.as_slice().to_vec();
    let mut l = DenseMatrix::identity(n);
    let mut u = DenseMatrix::zeros(n, n);
    let mut perm = Vec::with_capacity(n);
    let base = shifted_generators(&inst.system, 0.0);
    let mut ops: u64 = 0;

    for k in 1..=n {
        let m = n - k + 1;
        if let Some(states) = trace.as_deref_mut() {
            let mut sg = DenseMatrix::zeros(m, alpha);
            let mut sb = DenseMatrix::zeros(alpha, m);
            for i in 0..m {
                sg.row_mut(i).copy_from_slice(&gm.row(k - 1 + i)[..alpha]);
                for a in 0..alpha {
                    sb[(a, i)] = bm[(a, k - 1 + i)];
                }
            }
            states.push(SchurState { k, g: sg, b: sb, nodes: xs[k - 1..].to_vec() });
        }

        // First column of the current Schur complement.
        let mut col = Vec::with_capacity(m);
        for i in 0..m {
            col.push(xs[k - 1 + i] * gen_dot(&gm, k - 1 + i, &bm, k - 1));
        }
        ops += (m * alpha) as u64;

        let piv_rel = match forced {
            Some(seq) => {
                let p = seq[k - 1];
                assert!(p >= k - 1 && p < n, "forced pivot out of range at step {k}");
                p - (k - 1)
            }
            None => {
                let mut best = col[0].abs();
                let mut at = 0;
                for (i, v) in col.iter().enumerate().skip(1) {
                    if v.abs() > best {
                        best = v.abs();
                        at = i;
                    }
                }
                at
            }
        };
        let colmax = col.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if colmax == 0.0 || col[piv_rel].abs() < PIVOT_THRESHOLD * colmax {
            return Err(Error::NumericallySingular { step: k });
        }

        let p = k - 1 + piv_rel;
        perm.push(p);
        if p != k - 1 {
            xs.swap(k - 1, p);
            gm.swap_rows(k - 1, p);
            col.swap(0, piv_rel);
            for j in 0..k - 1 {
                let tmp = l[(k - 1, j)];
                l[(k - 1, j)] = l[(p, j)];
                l[(p, j)] = tmp;
            }
        }
        let d = col[0];
        let xk = xs[k - 1];

        // First row of the Schur complement through the generator kernels.
        let plain = trailing_submatrix(&base, k);
        let shifted = plain.with_xi(xk);
        let mut t = Vec::with_capacity(m);
        for c in 0..m {
            t.push(gen_dot(&gm, k - 1, &bm, k - 1 + c));
        }
        let tm = qs_matvec(&plain.gens, &t);
        let rhs: Vec<f64> = tm.iter().map(|v| xk * v).collect();
        let urow = qs_solve(&shifted.gens, &rhs)?;
        debug_assert!((urow[0] - d).abs() <= 1e-12 * d.abs().max(1e-300));
        ops += (m * alpha) as u64 + 16 * m as u64;

        for (c, v) in urow.iter().enumerate() {
            u[(k - 1, k - 1 + c)] = *v;
        }
        u[(k - 1, k - 1)] = d;
        for i in 1..m {
            let f = col[i] / d;
            l[(k - 1 + i, k - 1)] = f;
            for a in 0..alpha {
                let s = f * gm[(k - 1, a)];
                gm[(k - 1 + i, a)] -= s;
            }
        }
        for c in 1..m {
            let f = urow[c] / d;
            for a in 0..alpha {
                let s = f * bm[(a, k - 1)];
                bm[(a, k - 1 + c)] -= s;
            }
        }
        ops += (2 * (m.saturating_sub(1)) * alpha) as u64;
    }

    Ok(PluFactorization { perm, l, u, pivoted_nodes: xs, ops })
}

/// Structured partial-pivoting factorization of the instance.
pub fn gepp(inst: &DisplacementInstance) -> Result<PluFactorization> {
    gepp_inner(inst, None, None)
}

/// Factorization that also records the generator state entering every
/// step, for verification of the Schur-complement invariant.
pub fn gepp_trace(inst: &DisplacementInstance) -> Result<(PluFactorization, Vec<SchurState>)> {
    let mut states = Vec::with_capacity(inst.n());
    let fact = gepp_inner(inst, Some(&mut states), None)?;
    Ok((fact, states))
}

/// Factorization with a caller-imposed pivot sequence (`forced[k]` is the
/// 0-based global row to swap into position `k`). Test-support path.
#[cfg(test)]
pub(crate) fn gepp_forced(
    inst: &DisplacementInstance,
    forced: &[usize],
) -> Result<PluFactorization> {
    assert_eq!(forced.len(), inst.n(), "one forced pivot per step required");
    gepp_inner(inst, None, Some(forced))
}

/// Solves `R x = b` from the factorization.
pub fn solve(fact: &PluFactorization, b: &[f64]) -> Vec<f64> {
    let n = fact.perm.len();
    assert_eq!(b.len(), n, "right-hand side length mismatch");
    let mut y = b.to_vec();
    apply_pivots(&fact.perm, &mut y);
    for i in 0..n {
        for j in 0..i {
            let s = fact.l[(i, j)] * y[j];
            y[i] -= s;
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let s = fact.u[(i, j)] * y[j];
            y[i] -= s;
        }
        y[i] /= fact.u[(i, i)];
    }
    y
}

/// Solves `R^T y = c` from the same factorization.
pub fn solve_transposed(fact: &PluFactorization, c: &[f64]) -> Vec<f64> {
    let n = fact.perm.len();
    assert_eq!(c.len(), n, "right-hand side length mismatch");
    let mut y = c.to_vec();
    for i in 0..n {
        for j in 0..i {
            let s = fact.u[(j, i)] * y[j];
            y[i] -= s;
        }
        y[i] /= fact.u[(i, i)];
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let s = fact.l[(j, i)] * y[j];
            y[i] -= s;
        }
    }
    apply_pivots_rev(&fact.perm, &mut y);
    y
}

/// Reassembles `P L U` densely (test and verification support).
pub fn permuted_product(fact: &PluFactorization) -> DenseMatrix {
    let mut lu = fact.l.matmul(&fact.u);
    for k in (0..fact.perm.len()).rev() {
        lu.swap_rows(k, fact.perm[k]);
    }
    lu
}
