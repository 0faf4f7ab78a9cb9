//! Reversed ("hat") systems: polynomial systems whose recurrence
//! coefficients are the index-reversed, rescaled coefficients of a source
//! system.
//!
//! The hat system of an order-`n` source satisfies the coefficient law
//! `tau_hat_k = tau_{n-k}` and, for `1 <= j < k <= n-1`,
//! `a_hat_{jk} = (tau_{n-k} / tau_{n-j}) a_{n-k, n-j}`; its first
//! recurrence row depends only on the boundary extension chosen here
//! (out-of-range multiplicative slots read 1, additive slots read 0).
//! The constant term is normalized to [`hat_tau0`]. These systems drive
//! the Horner-style summation stage of the inversion engine.

use crate::error::{Error, Result};
use crate::poly_systems::{PolyFamily, PolySystem};

/// A hat system together with the family of its source.
#[derive(Debug, Clone)]
pub struct HornerSystem {
    pub system: PolySystem,
    pub source_family: PolyFamily,
}

/// Constant term shared by all hat systems.
pub fn hat_tau0() -> f64 {
    1.0
}

struct Ext<'a> {
    sys: &'a PolySystem,
}

impl<'a> Ext<'a> {
    fn in_range(&self, i: usize) -> bool {
        (1..self.sys.n()).contains(&i)
    }

    fn a(&self, i: usize) -> f64 {
        if self.in_range(i) {
            self.sys.al(i)
        } else {
            1.0
        }
    }

    fn b(&self, i: usize) -> f64 {
        if self.in_range(i) {
            self.sys.be(i)
        } else {
            0.0
        }
    }

    fn g(&self, i: usize) -> f64 {
        if self.in_range(i) {
            self.sys.ga(i)
        } else {
            0.0
        }
    }

    fn d(&self, i: usize) -> f64 {
        if self.in_range(i) {
            self.sys.de(i)
        } else {
            1.0
        }
    }

    fn t(&self, i: usize) -> f64 {
        if self.in_range(i) {
            self.sys.th(i)
        } else {
            0.0
        }
    }
}

fn expect_family(sys: &PolySystem, want: PolyFamily, who: &str) -> Result<()> {
    if sys.family() != want {
        return Err(Error::InvalidSystem(format!(
            "{who} expects a {} source, got {}",
            want.name(),
            sys.family().name()
        )));
    }
    Ok(())
}

/// Hat system of a quasiseparable source, itself quasiseparable.
pub fn hat_qs(sys: &PolySystem) -> Result<HornerSystem> {
    expect_family(sys, PolyFamily::Quasiseparable, "hat_qs")?;
    let n = sys.n();
    let e = Ext { sys };
    let m = n - 1;
    let mut al = Vec::with_capacity(m);
    let mut be = Vec::with_capacity(m);
    let mut ga = Vec::with_capacity(m);
    let mut de = Vec::with_capacity(m);
    let mut th = Vec::with_capacity(m);
    for k in 1..n {
        al.push(e.a(n - k + 1));
        be.push(e.g(n - k + 1) / e.d(n - k + 1));
        ga.push(e.b(n - k + 1) * e.d(n - k));
        de.push(e.d(n - k));
        th.push(e.d(n - k) / e.d(n - k + 1) * e.t(n - k + 1));
    }
    let system =
        PolySystem::new(PolyFamily::Quasiseparable, n, hat_tau0(), al, be, ga, de, th)?;
    Ok(HornerSystem { system, source_family: PolyFamily::Quasiseparable })
}

/// Hat system of a semiseparable source, itself semiseparable.
pub fn hat_ss(sys: &PolySystem) -> Result<HornerSystem> {
    expect_family(sys, PolyFamily::Semiseparable, "hat_ss")?;
    let n = sys.n();
    let e = Ext { sys };
    let m = n - 1;
    let mut al = Vec::with_capacity(m);
    let mut be = Vec::with_capacity(m);
    let mut ga = Vec::with_capacity(m);
    let mut de = Vec::with_capacity(m);
    let mut th = Vec::with_capacity(m);
    for k in 1..n {
        al.push(sys.al(n - k));
        be.push(sys.ga(n - k) / sys.de(n - k));
        ga.push(sys.be(n - k) * sys.de(n - k));
        de.push(sys.de(n - k));
        th.push(e.d(n - k) / e.d(n - k + 1) * e.t(n - k + 1));
    }
    let system =
        PolySystem::new(PolyFamily::Semiseparable, n, hat_tau0(), al, be, ga, de, th)?;
    Ok(HornerSystem { system, source_family: PolyFamily::Semiseparable })
}

/// Hat system of a quasiseparable source with nonzero `beta`, expressed as
/// a well-free (three-term) system. Boundary slots that would read
/// `beta_n / beta_{n+1}` collapse by ratio: the `k = 1` ratio is 0 and the
/// `k = 2` ratio is `beta_{n-1}` itself.
pub fn hat_wf(sys: &PolySystem) -> Result<HornerSystem> {
    expect_family(sys, PolyFamily::Quasiseparable, "hat_wf")?;
    let n = sys.n();
    if let Some(k) = sys.beta().iter().position(|&b| b == 0.0) {
        return Err(Error::InvalidSystem(format!(
            "hat_wf requires nonzero beta, beta_{} is zero",
            k + 1
        )));
    }
    let e = Ext { sys };
    let bratio = |k: usize| -> f64 {
        if k == 1 {
            0.0
        } else if k == 2 {
            sys.be(n - 1)
        } else {
            sys.be(n - k + 1) / sys.be(n - k + 2)
        }
    };
    // this slot extends multiplicatively, unlike the additive beta default
    let b_mul = |i: usize| if e.in_range(i) { sys.be(i) } else { 1.0 };
    let m = n - 1;
    let mut al = Vec::with_capacity(m);
    let mut be = Vec::with_capacity(m);
    let mut ga = Vec::with_capacity(m);
    let mut de = Vec::with_capacity(m);
    for k in 1..n {
        al.push(e.d(n - k));
        be.push(e.d(n - k) * e.a(n - k + 2) * bratio(k));
        de.push(-(e.d(n - k) / e.d(n - k + 1)) * (e.t(n - k + 1) + e.a(n - k + 2) * bratio(k)));
        ga.push(
            (e.d(n - k) / e.d(n - k + 2))
                * bratio(k)
                * (e.t(n - k + 2) * e.a(n - k + 2) - b_mul(n - k + 2) * e.g(n - k + 2)),
        );
    }
    let system = PolySystem::new(
        PolyFamily::WellFree,
        n,
        hat_tau0(),
        al,
        be,
        ga,
        de,
        vec![0.0; m],
    )?;
    Ok(HornerSystem { system, source_family: PolyFamily::Quasiseparable })
}

/// Hat system of a well-free source, expressed as a quasiseparable system
/// through the index-reversed general-recurrence coefficients.
pub fn hat_wf_source(sys: &PolySystem) -> Result<HornerSystem> {
    expect_family(sys, PolyFamily::WellFree, "hat_wf_source")?;
    let n = sys.n();
    let a = |i: usize| if (1..n).contains(&i) { sys.al(i) } else { 1.0 };
    let b = |i: usize| if (2..n).contains(&i) { sys.be(i) } else { 0.0 };
    let g = |i: usize| if (1..n).contains(&i) { sys.ga(i) } else { 0.0 };
    let d = |i: usize| if (1..n).contains(&i) { sys.de(i) } else { 0.0 };
    let a0 = |i: usize| if i == 0 { 1.0 } else { a(i) };
    let m = n - 1;
    let mut al = Vec::with_capacity(m);
    let mut be = Vec::with_capacity(m);
    let mut ga = Vec::with_capacity(m);
    let mut de = Vec::with_capacity(m);
    let mut th = Vec::with_capacity(m);
    for k in 1..n {
        al.push(b(n - k + 2) / a(n - k + 2));
        be.push(if k == 1 { 0.0 } else { 1.0 });
        de.push(a(n - k));
        th.push(-(a(n - k) / a(n - k + 1)) * (d(n - k + 1) + b(n - k + 1) / a(n - k)));
        if k == 1 {
            ga.push(0.0);
        } else {
            let dd = d(n - k + 1) / a(n - k + 1) + b(n - k + 1) / (a0(n - k) * a(n - k + 1));
            ga.push(-(a(n - k) / a(n - k + 2)) * (dd * b(n - k + 2) + g(n - k + 2)));
        }
    }
    let system =
        PolySystem::new(PolyFamily::Quasiseparable, n, hat_tau0(), al, be, ga, de, th)?;
    Ok(HornerSystem { system, source_family: PolyFamily::WellFree })
}

/// Family dispatch used by the inversion engine.
pub fn hat_system(sys: &PolySystem) -> Result<HornerSystem> {
    match sys.family() {
        PolyFamily::Quasiseparable => hat_qs(sys),
        PolyFamily::Semiseparable => hat_ss(sys),
        PolyFamily::WellFree => hat_wf_source(sys),
    }
}
