//! Displacement form of polynomial-Vandermonde-like matrices.
//!
//! A matrix `R` belongs to the class handled by this workspace when it
//! satisfies the canonical displacement equation
//!
//! ```text
//! diag(1/x_i) * R  -  R * W  =  G * B
//! ```
//!
//! where `W = N M^{-1}` is built from the recurrence pair of a polynomial
//! system, `G` is `n x alpha`, and `B` is `alpha x n`. The pair `(G, B)` is
//! a compressed O(alpha n) description of `R`; the polynomial-Vandermonde
//! matrix itself is the `alpha = 1` member produced by
//! [`canonical_vq_generators`].

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::poly_systems::{NodeSet, PolySystem};
use crate::recurrence_structure::{qs_solve, shifted_generators};

/// A matrix of the displacement class, stored as its generators.
#[derive(Debug, Clone)]
pub struct DisplacementInstance {
    pub system: PolySystem,
    pub nodes: NodeSet,
    /// Left generator, `n x alpha`.
    pub g: DenseMatrix,
    /// Right generator, `alpha x n`.
    pub b: DenseMatrix,
}

impl DisplacementInstance {
    pub fn new(
        system: PolySystem,
        nodes: NodeSet,
        g: DenseMatrix,
        b: DenseMatrix,
    ) -> Result<Self> {
        let n = system.n();
        if nodes.n() != n {
            return Err(Error::DimensionMismatch(format!(
                "system order {} vs {} nodes",
                n,
                nodes.n()
            )));
        }
        if g.rows() != n || b.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "generators {}x{} and {}x{} do not frame an order-{n} matrix",
                g.rows(),
                g.cols(),
                b.rows(),
                b.cols()
            )));
        }
        if g.cols() != b.rows() || g.cols() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "generator ranks disagree: {} vs {}",
                g.cols(),
                b.rows()
            )));
        }
        Ok(Self { system, nodes, g, b })
    }

    /// Displacement rank `alpha` of the stored generators.
    pub fn alpha_rank(&self) -> usize {
        self.g.cols()
    }

    pub fn n(&self) -> usize {
        self.system.n()
    }
}

/// Dense `W = N M^{-1}` in O(n^2): row `k` of `W` is `tau_k` times row
/// `k + 1` of `M^{-1}`, each row recovered by one structured solve. `W` is
/// strictly upper triangular.
pub fn wq_dense(sys: &PolySystem) -> DenseMatrix {
    let n = sys.n();
    let sm = shifted_generators(sys, 0.0);
    let mut w = DenseMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for k in 1..n {
        e[k] = 1.0;
        let row = qs_solve(&sm.gens, &e).expect("recurrence matrix has unit diagonal");
        e[k] = 0.0;
        let tau = sys.tau(k);
        for (j, v) in row.iter().enumerate() {
            w[(k - 1, j)] = tau * v;
        }
    }
    w
}

/// Reconstructs the dense matrix described by an instance, column by
/// column, from the displacement equation. Reference path for tests and
/// verification; the fast factorization never calls this.
pub fn materialize(inst: &DisplacementInstance) -> DenseMatrix {
    let n = inst.n();
    let alpha = inst.alpha_rank();
    let w = wq_dense(&inst.system);
    let xs = inst.nodes.as_slice();
    let mut r = DenseMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let mut acc = 0.0;
            for a in 0..alpha {
                acc += inst.g[(i, a)] * inst.b[(a, j)];
            }
            for m in 0..j {
                acc += r[(i, m)] * w[(m, j)];
            }
            r[(i, j)] = xs[i] * acc;
        }
    }
    r
}

/// Rank-one canonical generators of the polynomial-Vandermonde matrix of
/// the system at the given nodes: `G` holds the reciprocal nodes and `B` is
/// `tau0` times the first row of `M^{-1}`.
pub fn canonical_vq_generators(sys: &PolySystem, nodes: &NodeSet) -> Result<DisplacementInstance> {
    let n = sys.n();
    if nodes.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "system order {} vs {} nodes",
            n,
            nodes.n()
        )));
    }
    let mut g = DenseMatrix::zeros(n, 1);
    for (i, &x) in nodes.as_slice().iter().enumerate() {
        g[(i, 0)] = 1.0 / x;
    }
    let sm = shifted_generators(sys, 0.0);
    let mut e1 = vec![0.0; n];
    e1[0] = 1.0;
    let row = qs_solve(&sm.gens, &e1).expect("recurrence matrix has unit diagonal");
    let mut b = DenseMatrix::zeros(1, n);
    for (j, v) in row.iter().enumerate() {
        b[(0, j)] = sys.tau0() * v;
    }
    DisplacementInstance::new(sys.clone(), nodes.clone(), g, b)
}

/// Infinity norm of `diag(1/x) R - R W - G B` for a candidate dense `R`.
pub fn displacement_residual(inst: &DisplacementInstance, r: &DenseMatrix) -> f64 {
    let n = inst.n();
    assert_eq!((r.rows(), r.cols()), (n, n), "candidate shape mismatch");
    let w = wq_dense(&inst.system);
    let rw = r.matmul(&w);
    let gb = inst.g.matmul(&inst.b);
    let xs = inst.nodes.as_slice();
    let mut res = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            res[(i, j)] = r[(i, j)] / xs[i] - rw[(i, j)] - gb[(i, j)];
        }
    }
    res.inf_norm()
}
