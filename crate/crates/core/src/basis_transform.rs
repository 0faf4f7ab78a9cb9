//! Change of basis between a recurrence-defined polynomial system and the
//! monomial basis.
//!
//! Column `k` of the basis matrix `S` holds the monomial coefficients of
//! `Q_k`, so `V = V_mono * S` for the plain Vandermonde matrix `V_mono` at
//! the same nodes. `S` is upper triangular with diagonal
//! `tau0 * tau_1 ... tau_k`, hence always invertible for a valid system.
//! For the coupled families the companion matrix `T` holds the monomial
//! coefficients of the auxiliary sequence `G_k`.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::poly_systems::{PolyFamily, PolySystem};

/// Upper-triangular basis matrix, plus the auxiliary-sequence matrix for
/// the families that have one.
#[derive(Debug, Clone)]
pub struct BasisMatrix {
    pub s: DenseMatrix,
    pub t: Option<DenseMatrix>,
}

fn shift_down(v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    out[1..].copy_from_slice(&v[..v.len() - 1]);
    out
}

fn axpy(dst: &mut [f64], a: f64, src: &[f64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d += a * s;
    }
}

/// Builds the basis matrix of a system in O(n^2) by running the recurrence
/// on coefficient vectors (the shift replaces multiplication by `x`).
pub fn spq(sys: &PolySystem) -> BasisMatrix {
    let n = sys.n();
    let mut s_mat = DenseMatrix::zeros(n, n);
    let mut s = vec![0.0; n];
    s[0] = sys.tau0();
    for (i, &v) in s.iter().enumerate() {
        s_mat[(i, 0)] = v;
    }
    match sys.family() {
        PolyFamily::Quasiseparable | PolyFamily::Semiseparable => {
            let coupled_ss = sys.family() == PolyFamily::Semiseparable;
            let mut t_mat = DenseMatrix::zeros(n, n);
            let mut t = vec![0.0; n];
            if coupled_ss {
                t[0] = sys.tau0();
                t_mat[(0, 0)] = sys.tau0();
            }
            for k in 1..n {
                let (tn, sn) = if coupled_ss {
                    let mut w = shift_down(&s);
                    for (wi, si) in w.iter_mut().zip(&s) {
                        *wi = sys.de(k) * *wi + sys.th(k) * si;
                    }
                    let mut tn = vec![0.0; n];
                    axpy(&mut tn, sys.al(k), &t);
                    axpy(&mut tn, sys.be(k), &w);
                    let mut sn = w;
                    for (si, ti) in sn.iter_mut().zip(&t) {
                        *si += sys.ga(k) * ti;
                    }
                    (tn, sn)
                } else {
                    let mut tn = vec![0.0; n];
                    axpy(&mut tn, sys.al(k), &t);
                    axpy(&mut tn, sys.be(k), &s);
                    let mut sn = shift_down(&s);
                    for v in sn.iter_mut() {
                        *v *= sys.de(k);
                    }
                    axpy(&mut sn, sys.ga(k), &t);
                    axpy(&mut sn, sys.th(k), &s);
                    (tn, sn)
                };
                t = tn;
                s = sn;
                for i in 0..n {
                    s_mat[(i, k)] = s[i];
                    t_mat[(i, k)] = t[i];
                }
            }
            BasisMatrix { s: s_mat, t: Some(t_mat) }
        }
        PolyFamily::WellFree => {
            let mut prev = vec![0.0; n];
            for k in 1..n {
                let mut sn = shift_down(&s);
                for (v, si) in sn.iter_mut().zip(&s) {
                    *v = sys.al(k) * *v - sys.de(k) * si;
                }
                if k >= 2 {
                    let sh = shift_down(&prev);
                    axpy(&mut sn, -sys.be(k), &sh);
                    axpy(&mut sn, -sys.ga(k), &prev);
                }
                prev = std::mem::replace(&mut s, sn);
                for i in 0..n {
                    s_mat[(i, k)] = s[i];
                }
            }
            BasisMatrix { s: s_mat, t: None }
        }
    }
}

/// Solves `S x = rhs` for upper-triangular `S` by back substitution.
pub fn back_substitute(s: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = s.rows();
    assert_eq!(s.cols(), n, "square matrix required");
    assert_eq!(rhs.len(), n, "right-hand side length mismatch");
    let mut x = rhs.to_vec();
    for i in (0..n).rev() {
        for j in i + 1..n {
            let v = s[(i, j)] * x[j];
            x[i] -= v;
        }
        let diag = s[(i, i)];
        if diag == 0.0 {
            return Err(Error::SingularBasis { column: i + 1 });
        }
        x[i] /= diag;
    }
    Ok(x)
}

/// Solves the row system `x S = rhs` for upper-triangular `S` by forward
/// substitution over columns.
pub fn back_substitute_left(s: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = s.rows();
    assert_eq!(s.cols(), n, "square matrix required");
    assert_eq!(rhs.len(), n, "right-hand side length mismatch");
    let mut x = rhs.to_vec();
    for j in 0..n {
        for i in 0..j {
            let v = x[i] * s[(i, j)];
            x[j] -= v;
        }
        let diag = s[(j, j)];
        if diag == 0.0 {
            return Err(Error::SingularBasis { column: j + 1 });
        }
        x[j] /= diag;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance_gen::{random_nodes, random_system};
    use crate::poly_systems::{
        build_vandermonde, chebyshev, evaluate_with_aux, monomial, NodeSet,
    };
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const FAMILIES: [PolyFamily; 3] =
        [PolyFamily::Quasiseparable, PolyFamily::Semiseparable, PolyFamily::WellFree];

    #[test]
    fn monomial_basis_matrix_is_identity() {
        let bm = spq(&monomial(6));
        assert!(bm.s.sub(&DenseMatrix::identity(6)).max_abs() == 0.0);
    }

    #[test]
    fn chebyshev_coefficients_are_exact() {
        let bm = spq(&chebyshev(5));
        let expect = DenseMatrix::from_row_major(
            5,
            5,
            vec![
                1.0, 0.0, -1.0, 0.0, 1.0, //
                0.0, 1.0, 0.0, -3.0, 0.0, //
                0.0, 0.0, 2.0, 0.0, -8.0, //
                0.0, 0.0, 0.0, 4.0, 0.0, //
                0.0, 0.0, 0.0, 0.0, 8.0,
            ],
        );
        assert!(bm.s.sub(&expect).max_abs() == 0.0);
        assert!(bm.t.is_none());
    }

    #[test]
    fn vandermonde_factors_through_monomials() {
        let mut rng = StdRng::seed_from_u64(41);
        for fam in FAMILIES {
            for _ in 0..8 {
                let n = rng.gen_range(1..10);
                let sys = random_system(fam, n, &mut rng);
                let nodes = random_nodes(n, &mut rng);
                let v = build_vandermonde(&sys, &nodes).unwrap();
                let vp = build_vandermonde(&monomial(n), &nodes).unwrap();
                let prod = vp.matmul(&spq(&sys).s);
                let scale = v.max_abs().max(1.0);
                assert!(prod.sub(&v).max_abs() <= 1e-11 * scale, "{fam:?} n={n}");
            }
        }
    }

    #[test]
    fn diagonal_carries_leading_coefficients() {
        let mut rng = StdRng::seed_from_u64(42);
        for fam in FAMILIES {
            let sys = random_system(fam, 8, &mut rng);
            let bm = spq(&sys);
            for k in 0..8 {
                let want = sys.leading_coefficient(k);
                assert!((bm.s[(k, k)] - want).abs() <= 1e-13 * want.abs());
                for i in k + 1..8 {
                    assert_eq!(bm.s[(i, k)], 0.0, "{fam:?} below-diagonal fill");
                }
            }
        }
    }

    #[test]
    fn auxiliary_matrix_tracks_aux_sequence() {
        let mut rng = StdRng::seed_from_u64(43);
        for fam in [PolyFamily::Quasiseparable, PolyFamily::Semiseparable] {
            let n = 7;
            let sys = random_system(fam, n, &mut rng);
            let nodes = random_nodes(n, &mut rng);
            let t_mat = spq(&sys).t.expect("coupled families carry T");
            let vp = build_vandermonde(&monomial(n), &nodes).unwrap();
            let vals = vp.matmul(&t_mat);
            for (i, &x) in nodes.as_slice().iter().enumerate() {
                let (_, aux) = evaluate_with_aux(&sys, x);
                let aux = aux.unwrap();
                for k in 0..n {
                    let scale = aux[k].abs().max(1.0);
                    assert!(
                        (vals[(i, k)] - aux[k]).abs() <= 1e-11 * scale,
                        "{fam:?} G_{k} at node {i}"
                    );
                }
            }
        }
    }

    #[test]
    fn back_substitution_solves_both_orientations() {
        let mut rng = StdRng::seed_from_u64(44);
        let sys = random_system(PolyFamily::Semiseparable, 6, &mut rng);
        let s = spq(&sys).s;
        let x: Vec<f64> = (0..6).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let bx = (0..6)
            .map(|i| (0..6).map(|j| s[(i, j)] * x[j]).sum::<f64>())
            .collect::<Vec<f64>>();
        let got = back_substitute(&s, &bx).unwrap();
        for (a, b) in got.iter().zip(&x) {
            assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0));
        }
        let xb = (0..6)
            .map(|j| (0..6).map(|i| x[i] * s[(i, j)]).sum::<f64>())
            .collect::<Vec<f64>>();
        let got = back_substitute_left(&s, &xb).unwrap();
        for (a, b) in got.iter().zip(&x) {
            assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0));
        }
    }

    #[test]
    fn zero_diagonal_is_reported() {
        let mut s = DenseMatrix::identity(3);
        s[(1, 1)] = 0.0;
        match back_substitute(&s, &[1.0, 1.0, 1.0]) {
            Err(Error::SingularBasis { column }) => assert_eq!(column, 2),
            other => panic!("expected singular basis, got {other:?}"),
        }
        match back_substitute_left(&s, &[1.0, 1.0, 1.0]) {
            Err(Error::SingularBasis { column }) => assert_eq!(column, 2),
            other => panic!("expected singular basis, got {other:?}"),
        }
    }

    #[test]
    fn chebyshev_vandermonde_columns_match_basis_product() {
        let nodes = NodeSet::new(vec![0.15, 0.45, 0.75, 1.05, 1.35]).unwrap();
        let sys = chebyshev(5);
        let v = build_vandermonde(&sys, &nodes).unwrap();
        let vp = build_vandermonde(&monomial(5), &nodes).unwrap();
        let prod = vp.matmul(&spq(&sys).s);
        assert!(prod.sub(&v).max_abs() <= 1e-12);
    }
}
