//! Polynomial systems defined by sparse recurrence relations, their
//! evaluation, and polynomial-Vandermonde matrix assembly.
//!
//! A system of order `n` describes polynomials `Q_0, ..., Q_{n-1}` with
//! `deg Q_k = k`, starting from the constant `Q_0 = tau0`. Three recurrence
//! families are supported, each parameterized by coefficient arrays
//! `alpha, beta, gamma, delta, theta` of length `n - 1` (entry `k - 1`
//! drives the step from degree `k - 1` to degree `k`):
//!
//! * [`PolyFamily::Quasiseparable`] uses an auxiliary sequence `G_k`:
//!   `G_k = alpha_k G_{k-1} + beta_k Q_{k-1}`,
//!   `Q_k = gamma_k G_{k-1} + (delta_k x + theta_k) Q_{k-1}`, with `G_0 = 0`.
//! * [`PolyFamily::Semiseparable`] feeds the weighted previous polynomial
//!   into both updates: with `w = (delta_k x + theta_k) Q_{k-1}`,
//!   `G_k = alpha_k G_{k-1} + beta_k w` and `Q_k = gamma_k G_{k-1} + w`,
//!   with `G_0 = Q_0`.
//! * [`PolyFamily::WellFree`] is a pure three-term recurrence
//!   `Q_k = (alpha_k x - delta_k) Q_{k-1} - (beta_k x + gamma_k) Q_{k-2}`
//!   with `Q_{-1} = 0` and `beta_1 = 0`; `theta` is unused and must be zero.
//!
//! The degree-raising coefficient `tau_k` (`delta_k` for the first two
//! families, `alpha_k` for well-free systems) must be nonzero so every step
//! raises the degree by exactly one.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Recurrence family of a [`PolySystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolyFamily {
    /// Two-term coupled recurrence with auxiliary sequence seeded at zero.
    Quasiseparable,
    /// Coupled recurrence with auxiliary sequence seeded at `Q_0`.
    Semiseparable,
    /// Three-term recurrence without an auxiliary sequence.
    WellFree,
}

impl PolyFamily {
    /// Stable lowercase name used in file formats and reports.
    pub fn name(self) -> &'static str {
        match self {
            PolyFamily::Quasiseparable => "quasiseparable",
            PolyFamily::Semiseparable => "semiseparable",
            PolyFamily::WellFree => "well_free",
        }
    }
}

/// A validated recurrence-defined polynomial system of order `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem {
    family: PolyFamily,
    n: usize,
    tau0: f64,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    gamma: Vec<f64>,
    delta: Vec<f64>,
    theta: Vec<f64>,
}

impl PolySystem {
    /// Validates and builds a system. Each coefficient array must have
    /// length `n - 1`; family invariants are enforced here so downstream
    /// code can divide by `tau_k` freely.
    pub fn new(
        family: PolyFamily,
        n: usize,
        tau0: f64,
        alpha: Vec<f64>,
        beta: Vec<f64>,
        gamma: Vec<f64>,
        delta: Vec<f64>,
        theta: Vec<f64>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSystem("order must be at least 1".into()));
        }
        if !tau0.is_finite() || tau0 == 0.0 {
            return Err(Error::InvalidSystem("tau0 must be finite and nonzero".into()));
        }
        let m = n - 1;
        for (name, arr) in [
            ("alpha", &alpha),
            ("beta", &beta),
            ("gamma", &gamma),
            ("delta", &delta),
            ("theta", &theta),
        ] {
            if arr.len() != m {
                return Err(Error::InvalidSystem(format!(
                    "{name} has length {}, expected {m}",
                    arr.len()
                )));
            }
            if arr.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidSystem(format!("{name} contains a non-finite entry")));
            }
        }
        match family {
            PolyFamily::Quasiseparable | PolyFamily::Semiseparable => {
                if let Some(k) = delta.iter().position(|&d| d == 0.0) {
                    return Err(Error::InvalidSystem(format!(
                        "delta_{} must be nonzero for this family",
                        k + 1
                    )));
                }
            }
            PolyFamily::WellFree => {
                if let Some(k) = alpha.iter().position(|&a| a == 0.0) {
                    return Err(Error::InvalidSystem(format!(
                        "alpha_{} must be nonzero for well-free systems",
                        k + 1
                    )));
                }
                if m > 0 && beta[0] != 0.0 {
                    return Err(Error::InvalidSystem(
                        "beta_1 must be zero for well-free systems".into(),
                    ));
                }
                if theta.iter().any(|&t| t != 0.0) {
                    return Err(Error::InvalidSystem(
                        "theta is unused by well-free systems and must be zero".into(),
                    ));
                }
            }
        }
        Ok(Self { family, n, tau0, alpha, beta, gamma, delta, theta })
    }

    pub fn family(&self) -> PolyFamily {
        self.family
    }

    /// Order of the system: the number of polynomials `Q_0 ... Q_{n-1}`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Value of the constant polynomial `Q_0`.
    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Degree-raising coefficient `tau_k` for `1 <= k <= n - 1`.
    pub fn tau(&self, k: usize) -> f64 {
        match self.family {
            PolyFamily::Quasiseparable | PolyFamily::Semiseparable => self.de(k),
            PolyFamily::WellFree => self.al(k),
        }
    }

    /// Leading coefficient of `Q_k`: `tau0 * tau_1 * ... * tau_k`.
    pub fn leading_coefficient(&self, k: usize) -> f64 {
        (1..=k).fold(self.tau0, |acc, j| acc * self.tau(j))
    }

    // 1-based coefficient accessors used by the recurrence kernels.
    #[inline]
    pub(crate) fn al(&self, k: usize) -> f64 {
        self.alpha[k - 1]
    }

    #[inline]
    pub(crate) fn be(&self, k: usize) -> f64 {
        self.beta[k - 1]
    }

    #[inline]
    pub(crate) fn ga(&self, k: usize) -> f64 {
        self.gamma[k - 1]
    }

    #[inline]
    pub(crate) fn de(&self, k: usize) -> f64 {
        self.delta[k - 1]
    }

    #[inline]
    pub(crate) fn th(&self, k: usize) -> f64 {
        self.theta[k - 1]
    }
}

/// Evaluation nodes `x_1, ..., x_n`: finite, pairwise distinct, nonzero.
///
/// Nonzero nodes are required because parts of the pipeline work with the
/// reciprocal scaling `diag(1/x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    values: Vec<f64>,
}

impl NodeSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidNodes("node set must be nonempty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidNodes("nodes must be finite".into()));
        }
        if let Some(i) = values.iter().position(|&v| v == 0.0) {
            return Err(Error::InvalidNodes(format!("node {} is zero", i + 1)));
        }
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                if values[i] == values[j] {
                    return Err(Error::InvalidNodes(format!(
                        "nodes {} and {} coincide",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// Evaluates `Q_0(x), ..., Q_{n-1}(x)` in O(n).
pub fn evaluate_system(sys: &PolySystem, x: f64) -> Vec<f64> {
    evaluate_with_aux(sys, x).0
}

/// Evaluation that also returns the auxiliary sequence `G_0 .. G_{n-1}`
/// for the coupled families (`None` for well-free systems).
pub(crate) fn evaluate_with_aux(sys: &PolySystem, x: f64) -> (Vec<f64>, Option<Vec<f64>>) {
    let n = sys.n;
    let mut q = Vec::with_capacity(n);
    q.push(sys.tau0);
    match sys.family {
        PolyFamily::Quasiseparable => {
            let mut g = Vec::with_capacity(n);
            g.push(0.0);
            for k in 1..n {
                let (gp, qp) = (g[k - 1], q[k - 1]);
                g.push(sys.al(k) * gp + sys.be(k) * qp);
                q.push(sys.ga(k) * gp + (sys.de(k) * x + sys.th(k)) * qp);
            }
            (q, Some(g))
        }
        PolyFamily::Semiseparable => {
            let mut g = Vec::with_capacity(n);
            g.push(sys.tau0);
            for k in 1..n {
                let (gp, qp) = (g[k - 1], q[k - 1]);
                let w = (sys.de(k) * x + sys.th(k)) * qp;
                g.push(sys.al(k) * gp + sys.be(k) * w);
                q.push(sys.ga(k) * gp + w);
            }
            (q, Some(g))
        }
        PolyFamily::WellFree => {
            for k in 1..n {
                let prev2 = if k >= 2 { q[k - 2] } else { 0.0 };
                let mut v = (sys.al(k) * x - sys.de(k)) * q[k - 1];
                if k >= 2 {
                    v -= (sys.be(k) * x + sys.ga(k)) * prev2;
                }
                q.push(v);
            }
            (q, None)
        }
    }
}

/// Builds the polynomial-Vandermonde matrix `V[i][k] = Q_k(x_i)`.
pub fn build_vandermonde(sys: &PolySystem, nodes: &NodeSet) -> Result<DenseMatrix> {
    if nodes.n() != sys.n() {
        return Err(Error::DimensionMismatch(format!(
            "system order {} vs {} nodes",
            sys.n(),
            nodes.n()
        )));
    }
    let n = sys.n();
    let mut v = DenseMatrix::zeros(n, n);
    for (i, &x) in nodes.as_slice().iter().enumerate() {
        let vals = evaluate_system(sys, x);
        v.row_mut(i).copy_from_slice(&vals);
    }
    Ok(v)
}

/// Rewrites a semiseparable system as an equivalent quasiseparable one:
/// both produce identical polynomials and identical recurrence matrices.
pub fn ss_to_qs(sys: &PolySystem) -> Result<PolySystem> {
    if sys.family() != PolyFamily::Semiseparable {
        return Err(Error::InvalidSystem("ss_to_qs expects a semiseparable system".into()));
    }
    let n = sys.n();
    let m = n - 1;
    let mut alpha = Vec::with_capacity(m);
    let mut beta = Vec::with_capacity(m);
    let mut gamma = Vec::with_capacity(m);
    let mut theta = Vec::with_capacity(m);
    // beta_0 = 1 seeds the auxiliary sequence at Q_0.
    let be0 = |k: usize| if k == 0 { 1.0 } else { sys.be(k) };
    for k in 1..n {
        let a_k = sys.al(k) - sys.be(k) * sys.ga(k);
        alpha.push(a_k);
        beta.push(be0(k - 1) * a_k);
        gamma.push(sys.ga(k));
        theta.push(sys.th(k) + sys.ga(k) * be0(k - 1));
    }
    PolySystem::new(
        PolyFamily::Quasiseparable,
        n,
        sys.tau0(),
        alpha,
        beta,
        gamma,
        sys.delta().to_vec(),
        theta,
    )
}

/// Monomial basis `1, x, x^2, ...` as a quasiseparable system.
pub fn monomial(n: usize) -> PolySystem {
    let m = n.saturating_sub(1);
    PolySystem::new(
        PolyFamily::Quasiseparable,
        n,
        1.0,
        vec![0.0; m],
        vec![0.0; m],
        vec![0.0; m],
        vec![1.0; m],
        vec![0.0; m],
    )
    .expect("monomial preset is always valid")
}

/// Chebyshev polynomials of the first kind as a well-free system.
pub fn chebyshev(n: usize) -> PolySystem {
    let m = n.saturating_sub(1);
    let mut alpha = vec![2.0; m];
    if m > 0 {
        alpha[0] = 1.0;
    }
    let mut gamma = vec![1.0; m];
    if m > 0 {
        gamma[0] = 0.0;
    }
    PolySystem::new(
        PolyFamily::WellFree,
        n,
        1.0,
        alpha,
        vec![0.0; m],
        gamma,
        vec![0.0; m],
        vec![0.0; m],
    )
    .expect("chebyshev preset is always valid")
}

/// General three-term recurrence `Q_k = (alpha_k x - delta_k) Q_{k-1} - gamma_k Q_{k-2}`
/// (a well-free system with `beta = 0`), covering orthogonal polynomial bases.
pub fn three_term(tau0: f64, alpha: Vec<f64>, delta: Vec<f64>, gamma: Vec<f64>) -> Result<PolySystem> {
    let m = alpha.len();
    PolySystem::new(
        PolyFamily::WellFree,
        m + 1,
        tau0,
        alpha,
        vec![0.0; m],
        gamma,
        delta,
        vec![0.0; m],
    )
}

/// Szego-type polynomials driven by reflection coefficients `rho_k` with
/// `|rho_k| < 1`, expressed as a semiseparable system.
pub fn szego(rho: &[f64]) -> Result<PolySystem> {
    let m = rho.len();
    if let Some(k) = rho.iter().position(|r| r.abs() >= 1.0 || !r.is_finite()) {
        return Err(Error::InvalidSystem(format!(
            "reflection coefficient rho_{} must satisfy |rho| < 1",
            k + 1
        )));
    }
    let mut alpha = Vec::with_capacity(m);
    let mut beta = Vec::with_capacity(m);
    let mut gamma = Vec::with_capacity(m);
    let mut delta = Vec::with_capacity(m);
    for &r in rho {
        let mu = (1.0 - r * r).sqrt();
        alpha.push(1.0 / mu);
        beta.push(-r);
        gamma.push(-r / mu);
        delta.push(1.0 / mu);
    }
    PolySystem::new(PolyFamily::Semiseparable, m + 1, 1.0, alpha, beta, gamma, delta, vec![0.0; m])
}
