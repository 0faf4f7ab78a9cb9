//! Recurrence matrices of a polynomial system and their order-2
//! quasiseparable generator representation.
//!
//! Every system yields a pair `(M, N)`: `M` is unit upper triangular, `N`
//! has the degree-raising coefficients `tau_k` on its superdiagonal and
//! zeros elsewhere, and the row vector of polynomial values satisfies
//! `[Q_0(x) .. Q_{n-1}(x)] * (M - x N) = tau0 * e_1^T` for every `x`.
//! Equivalently, at any node set, `V M - D_x V N` is the rank-one matrix
//! `tau0 * ones * e_1^T`; this identity is what ties the matrices back to
//! the recurrence and is asserted by the test suite.
//!
//! The upper triangle of `M` (and of any shift `M - xi N`) carries at most
//! order-2 quasiseparable structure: there are vectors `g_j`, matrices
//! `b_i`, and vectors `h_k` of size 2 such that entry `(j, k)` above the
//! diagonal equals `g_j b_{j+1} ... b_{k-1} h_k`. All O(n) kernels in this
//! module work on that generator form and never touch dense storage.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::poly_systems::{PolyFamily, PolySystem};

/// Dense recurrence pair `(M, N)` of a system.
#[derive(Debug, Clone)]
pub struct RecurrenceMatrices {
    /// Unit upper-triangular coefficient matrix.
    pub m: DenseMatrix,
    /// Superdiagonal degree-raising matrix.
    pub n: DenseMatrix,
}

/// Entry of `M` above the diagonal, 0-based: `coefficient(sys, j, k)` is the
/// weight of `Q_j` in the expansion of `tau_k x Q_{k-1} - Q_k`, negated into
/// matrix position `(j, k)`.
fn coefficient(sys: &PolySystem, j: usize, k: usize) -> f64 {
    debug_assert!(j < k && k < sys.n());
    match sys.family() {
        PolyFamily::Quasiseparable => {
            if j == k - 1 {
                -sys.th(k)
            } else {
                let mut v = -sys.be(j + 1) * sys.ga(k);
                for i in j + 2..k {
                    v *= sys.al(i);
                }
                v
            }
        }
        PolyFamily::Semiseparable => {
            let be0 = |i: usize| if i == 0 { 1.0 } else { sys.be(i) };
            if j == k - 1 {
                -(sys.th(k) + sys.ga(k) * be0(k - 1))
            } else {
                let mut v = -be0(j) * sys.ga(k);
                for i in j + 1..k {
                    v *= sys.al(i) - sys.be(i) * sys.ga(i);
                }
                v
            }
        }
        PolyFamily::WellFree => {
            let a0 = |i: usize| if i == 0 { 1.0 } else { sys.al(i) };
            if j == k - 1 {
                sys.de(k) + sys.be(k) / a0(k - 1)
            } else {
                let dd = sys.de(j + 1) / sys.al(j + 1) + sys.be(j + 1) / (a0(j) * sys.al(j + 1));
                let mut v = sys.al(k) / sys.al(j + 2) * (dd * sys.be(j + 2) + sys.ga(j + 2));
                for i in j + 2..k {
                    v *= sys.be(i + 1) / sys.al(i + 1);
                }
                v
            }
        }
    }
}

/// Builds the dense recurrence pair in O(n^2).
pub fn build_mn(sys: &PolySystem) -> RecurrenceMatrices {
    let n = sys.n();
    let mut m = DenseMatrix::identity(n);
    let mut nn = DenseMatrix::zeros(n, n);
    for k in 1..n {
        nn[(k - 1, k)] = sys.tau(k);
        for j in 0..k {
            m[(j, k)] = coefficient(sys, j, k);
        }
    }
    RecurrenceMatrices { m, n: nn }
}

/// Order-2 quasiseparable generators of an upper-triangular matrix of size
/// `m`: diagonal `d`, row seeds `g_1..g_{m-1}`, transition matrices
/// `b_2..b_{m-1}`, column closers `h_2..h_m`. Entry `(j, k)` (1-based,
/// `j < k`) is `g_j b_{j+1} ... b_{k-1} h_k`.
#[derive(Debug, Clone)]
pub struct QsUpperGenerators {
    pub d: Vec<f64>,
    pub g: Vec<[f64; 2]>,
    pub b: Vec<[[f64; 2]; 2]>,
    pub h: Vec<[f64; 2]>,
}

#[inline]
fn vec_times_b(w: [f64; 2], b: &[[f64; 2]; 2]) -> [f64; 2] {
    [w[0] * b[0][0] + w[1] * b[1][0], w[0] * b[0][1] + w[1] * b[1][1]]
}

impl QsUpperGenerators {
    /// Matrix order represented by these generators.
    pub fn size(&self) -> usize {
        self.d.len()
    }

    /// Expands the generators into a dense upper-triangular matrix. O(n^2),
    /// intended for tests and small-scale verification.
    pub fn to_dense(&self) -> DenseMatrix {
        let m = self.size();
        let mut out = DenseMatrix::zeros(m, m);
        for j in 1..=m {
            out[(j - 1, j - 1)] = self.d[j - 1];
            if j == m {
                break;
            }
            let mut w = self.g[j - 1];
            for k in j + 1..=m {
                let h = self.h[k - 2];
                out[(j - 1, k - 1)] = w[0] * h[0] + w[1] * h[1];
                if k < m {
                    w = vec_times_b(w, &self.b[k - 2]);
                }
            }
        }
        out
    }
}

/// Generator form of the shifted matrix `M - xi * N`.
///
/// Keeps the unshifted superdiagonal and the `tau` sequence alongside the
/// generators so the shift can be retargeted in O(n) without rebuilding
/// from the system.
#[derive(Debug, Clone)]
pub struct ShiftedM {
    pub xi: f64,
    pub gens: QsUpperGenerators,
    superdiag: Vec<f64>,
    tau: Vec<f64>,
}

impl ShiftedM {
    pub fn size(&self) -> usize {
        self.gens.size()
    }

    /// Same matrix family re-shifted to `M - xi * N`: only the superdiagonal
    /// slots of the row seeds depend on the shift.
    pub fn with_xi(&self, xi: f64) -> ShiftedM {
        let mut out = self.clone();
        out.xi = xi;
        for (j, g) in out.gens.g.iter_mut().enumerate() {
            g[0] = out.superdiag[j] - xi * out.tau[j];
        }
        out
    }
}

/// Builds generators of `M - xi * N` directly from the system in O(n).
pub fn shifted_generators(sys: &PolySystem, xi: f64) -> ShiftedM {
    let n = sys.n();
    let m = n.saturating_sub(1);
    let d = vec![1.0; n];
    let h = vec![[1.0, 0.0]; m];
    let mut superdiag = Vec::with_capacity(m);
    let mut tau = Vec::with_capacity(m);
    for k in 1..n {
        superdiag.push(coefficient(sys, k - 1, k));
        tau.push(sys.tau(k));
    }
    let mut g = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(n.saturating_sub(2));
    match sys.family() {
        PolyFamily::Quasiseparable => {
            for j in 1..n {
                g.push([superdiag[j - 1] - xi * tau[j - 1], -sys.be(j)]);
            }
            for i in 2..n {
                b.push([[0.0, 0.0], [sys.ga(i), sys.al(i)]]);
            }
        }
        PolyFamily::Semiseparable => {
            let be0 = |i: usize| if i == 0 { 1.0 } else { sys.be(i) };
            for j in 1..n {
                g.push([superdiag[j - 1] - xi * tau[j - 1], -be0(j - 1)]);
            }
            for i in 2..n {
                let a = sys.al(i - 1) - sys.be(i - 1) * sys.ga(i - 1);
                b.push([[0.0, 0.0], [sys.ga(i) * a, a]]);
            }
        }
        PolyFamily::WellFree => {
            // Slots that would index beyond the coefficient arrays never
            // reach a matrix entry; they are stored as zero.
            for j in 1..n {
                let second = if j + 1 < n {
                    superdiag[j - 1] * sys.be(j + 1) / sys.al(j) + sys.ga(j + 1)
                } else {
                    0.0
                };
                g.push([superdiag[j - 1] - xi * tau[j - 1], second]);
            }
            for i in 2..n {
                let r = if i + 1 < n { sys.be(i + 1) / sys.al(i) } else { 0.0 };
                b.push([[0.0, 0.0], [1.0, r]]);
            }
        }
    }
    ShiftedM { xi, gens: QsUpperGenerators { d, g, b, h }, superdiag, tau }
}

fn tail<T: Clone>(v: &[T], start: usize) -> Vec<T> {
    if start >= v.len() {
        Vec::new()
    } else {
        v[start..].to_vec()
    }
}

/// Trailing principal submatrix starting at 1-based index `k`, still in
/// generator form. The generator slices of the parent are reused verbatim.
pub fn trailing_submatrix(sm: &ShiftedM, k: usize) -> ShiftedM {
    assert!(k >= 1 && k <= sm.size(), "trailing start out of range");
    let s = k - 1;
    ShiftedM {
        xi: sm.xi,
        gens: QsUpperGenerators {
            d: tail(&sm.gens.d, s),
            g: tail(&sm.gens.g, s),
            b: tail(&sm.gens.b, s),
            h: tail(&sm.gens.h, s),
        },
        superdiag: tail(&sm.superdiag, s),
        tau: tail(&sm.tau, s),
    }
}

/// Row-vector product `v * T` for an upper-triangular matrix in generator
/// form, in O(n).
pub fn qs_matvec(gens: &QsUpperGenerators, v: &[f64]) -> Vec<f64> {
    let m = gens.size();
    assert_eq!(v.len(), m, "vector length mismatch");
    let mut out = Vec::with_capacity(m);
    out.push(v[0] * gens.d[0]);
    let mut w = [0.0, 0.0];
    for k in 2..=m {
        let gj = gens.g[k - 2];
        let prev = v[k - 2];
        w = if k == 2 {
            [prev * gj[0], prev * gj[1]]
        } else {
            let t = vec_times_b(w, &gens.b[k - 3]);
            [t[0] + prev * gj[0], t[1] + prev * gj[1]]
        };
        let h = gens.h[k - 2];
        out.push(v[k - 1] * gens.d[k - 1] + w[0] * h[0] + w[1] * h[1]);
    }
    out
}

/// Solves the row-vector system `v * T = rhs` for an upper-triangular matrix
/// in generator form, in O(n). The running state `w` accumulates the
/// contribution of all solved components to the current column.
pub fn qs_solve(gens: &QsUpperGenerators, rhs: &[f64]) -> Result<Vec<f64>> {
    let m = gens.size();
    assert_eq!(rhs.len(), m, "right-hand side length mismatch");
    let mut v = Vec::with_capacity(m);
    if gens.d[0] == 0.0 {
        return Err(Error::SingularBasis { column: 1 });
    }
    v.push(rhs[0] / gens.d[0]);
    let mut w = [0.0, 0.0];
    for k in 2..=m {
        let gj = gens.g[k - 2];
        let prev = v[k - 2];
        w = if k == 2 {
            [prev * gj[0], prev * gj[1]]
        } else {
            let t = vec_times_b(w, &gens.b[k - 3]);
            [t[0] + prev * gj[0], t[1] + prev * gj[1]]
        };
        let h = gens.h[k - 2];
        if gens.d[k - 1] == 0.0 {
            return Err(Error::SingularBasis { column: k });
        }
        v.push((rhs[k - 1] - w[0] * h[0] - w[1] * h[1]) / gens.d[k - 1]);
    }
    Ok(v)
}
