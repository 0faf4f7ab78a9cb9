//! Fast inversion of displacement-class matrices in O(alpha n^2).
//!
//! The inverse of an instance `R` with displacement rank `alpha` is
//! assembled as
//!
//! ```text
//! R^{-1} = J * sum_i  A_i^T * diag(c_i)
//! ```
//!
//! where `J` is the order-reversal matrix, `c_i = D_x R^{-T} b_i^T` comes
//! from one transposed solve per right generator row, and
//! `A_i = V_hat * sum_k d_ik W_hat^k` is a polynomial sum in the hat
//! system of the source, evaluated without ever forming `W_hat` by the
//! Horner-style recurrence of [`fast_sum_product`]. The coefficient rows
//! `d_i` are the reversed plain solves `R^{-1} g_i` pushed through the hat
//! basis matrix. Both solves reuse one structured factorization, so the
//! whole pipeline stays at O(alpha n^2).

use crate::basis_transform::{back_substitute_left, spq, BasisMatrix};
use crate::dense::DenseMatrix;
use crate::displacement::{materialize, DisplacementInstance};
use crate::error::{Error, Result};
use crate::fast_gepp::{gepp, solve, solve_transposed, PluFactorization};
use crate::horner::hat_system;
use crate::poly_systems::{build_vandermonde, evaluate_system, NodeSet, PolyFamily, PolySystem};

/// Inverse plus an optional right-residual report `||R R^{-1} - I||_inf`.
#[derive(Debug, Clone)]
pub struct InverseResult {
    pub inverse: DenseMatrix,
    pub residual: Option<f64>,
}

/// Builds the auxiliary matrix `V_F` of reciprocal-node polynomial tails:
/// with `y_i = 1/x_i`, entry `(i, k)` is `sum_{m=k+2}^{n} d_m y_i^{m-k-1}`
/// (1-based `m`), so the last column is identically zero and
/// `x_i VF[i][k] = VF[i][k+1] + d[k+1]` columnwise.
pub fn build_vf(nodes: &NodeSet, d: &[f64]) -> DenseMatrix {
    let n = nodes.n();
    assert_eq!(d.len(), n, "coefficient length mismatch");
    let mut vf = DenseMatrix::zeros(n, n);
    for (i, &x) in nodes.as_slice().iter().enumerate() {
        let y = 1.0 / x;
        let mut f = 0.0;
        for k in (0..n.saturating_sub(1)).rev() {
            f = y * (f + d[k + 1]);
            vf[(i, k)] = f;
        }
    }
    vf
}

/// Evaluates `V * (sum_{k=0}^{n-1} d_k W^k)` in O(n^2) without forming
/// `W`, where `V` and `W` belong to the given system at the given nodes.
///
/// The columns of the product are corrected Vandermonde columns: the
/// correction sequence `u_k` follows the same recurrence as the system
/// itself, seeded from [`build_vf`], with multiplication by `x` replaced
/// by `corr_k = x .* u_k - (drow . s_k)` where `s_k` is the monomial
/// coefficient column of `Q_{k-1}` and `drow = [d_2 .. d_n, 0]`.
pub fn fast_sum_product(sys: &PolySystem, nodes: &NodeSet, d: &[f64]) -> Result<DenseMatrix> {
    let n = sys.n();
    if nodes.n() != n || d.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "system order {}, {} nodes, {} coefficients",
            n,
            nodes.n(),
            d.len()
        )));
    }
    let v = build_vandermonde(sys, nodes)?;
    let s_mat = spq(sys).s;
    let xs = nodes.as_slice();

    // dsum_i = sum_k d_k (1/x_i)^k by Horner
    let dsum: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let y = 1.0 / x;
            d.iter().rev().fold(0.0, |acc, &dk| acc * y + dk)
        })
        .collect();
    let mut drow = vec![0.0; n];
    drow[..n - 1].copy_from_slice(&d[1..]);

    let vf = build_vf(nodes, d);
    let mut u_mat = DenseMatrix::zeros(n, n);
    let mut u: Vec<f64> = (0..n).map(|i| sys.tau0() * vf[(i, 0)]).collect();
    for (i, &ui) in u.iter().enumerate() {
        u_mat[(i, 0)] = ui;
    }
    let s_dot = |k: usize| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            acc += drow[i] * s_mat[(i, k)];
        }
        acc
    };
    let corr_of = |u: &[f64], k: usize| -> Vec<f64> {
        let dot = s_dot(k);
        u.iter().zip(xs).map(|(ui, &x)| x * ui - dot).collect()
    };
    match sys.family() {
        PolyFamily::Quasiseparable => {
            let mut w = vec![0.0; n];
            for k in 1..n {
                let corr = corr_of(&u, k - 1);
                let mut un = vec![0.0; n];
                let mut wn = vec![0.0; n];
                for i in 0..n {
                    un[i] = sys.ga(k) * w[i] + sys.de(k) * corr[i] + sys.th(k) * u[i];
                    wn[i] = sys.al(k) * w[i] + sys.be(k) * u[i];
                }
                u = un;
                w = wn;
                for (i, &ui) in u.iter().enumerate() {
                    u_mat[(i, k)] = ui;
                }
            }
        }
        PolyFamily::Semiseparable => {
            let mut w = u.clone();
            for k in 1..n {
                let corr = corr_of(&u, k - 1);
                let mut un = vec![0.0; n];
                let mut wn = vec![0.0; n];
                for i in 0..n {
                    wn[i] = sys.al(k) * w[i]
                        + sys.be(k) * (sys.de(k) * corr[i])
                        + sys.be(k) * sys.th(k) * u[i];
                    un[i] = sys.ga(k) * w[i] + sys.de(k) * corr[i] + sys.th(k) * u[i];
                }
                u = un;
                w = wn;
                for (i, &ui) in u.iter().enumerate() {
                    u_mat[(i, k)] = ui;
                }
            }
        }
        PolyFamily::WellFree => {
            let mut um = vec![0.0; n];
            for k in 1..n {
                let corr = corr_of(&u, k - 1);
                let mut un = vec![0.0; n];
                for i in 0..n {
                    un[i] = sys.al(k) * corr[i] - sys.de(k) * u[i];
                }
                if k >= 2 {
                    let corrm = corr_of(&um, k - 2);
                    for i in 0..n {
                        un[i] -= sys.be(k) * corrm[i] + sys.ga(k) * um[i];
                    }
                }
                um = std::mem::replace(&mut u, un);
                for (i, &ui) in u.iter().enumerate() {
                    u_mat[(i, k)] = ui;
                }
            }
        }
    }
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            out[(i, k)] = dsum[i] * v[(i, k)] - u_mat[(i, k)];
        }
    }
    Ok(out)
}

/// Coefficient stage of the inversion: from one factorization of `R`,
/// returns `C` (`n x alpha`, columns `c_i = D_x R^{-T} b_i^T`) and `D`
/// (`alpha x n`, rows `d_i` solving `d_i S_hat = reversed(R^{-1} g_i)`).
///
/// `c_i` comes from a transposed solve, `d_i` from a plain solve; the two
/// orientations are not interchangeable even though both type-check.
pub fn cidik(
    inst: &DisplacementInstance,
    fact: &PluFactorization,
    hat_basis: &BasisMatrix,
) -> Result<(DenseMatrix, DenseMatrix)> {
    let n = inst.n();
    let alpha = inst.alpha_rank();
    let xs = inst.nodes.as_slice();
    let mut c = DenseMatrix::zeros(n, alpha);
    let mut d = DenseMatrix::zeros(alpha, n);
    for i in 0..alpha {
        let ci = solve_transposed(fact, inst.b.row(i));
        for (r, v) in ci.into_iter().enumerate() {
            c[(r, i)] = xs[r] * v;
        }
        let mut w = solve(fact, &inst.g.col(i));
        w.reverse();
        let di = back_substitute_left(&hat_basis.s, &w)?;
        d.row_mut(i).copy_from_slice(&di);
    }
    Ok((c, d))
}

fn assemble(
    inst: &DisplacementInstance,
    hat: &PolySystem,
    c: &DenseMatrix,
    d: &DenseMatrix,
) -> Result<DenseMatrix> {
    let n = inst.n();
    let alpha = inst.alpha_rank();
    let mut acc = DenseMatrix::zeros(n, n);
    for i in 0..alpha {
        let a_i = fast_sum_product(hat, &inst.nodes, d.row(i))?;
        for r in 0..n {
            for col in 0..n {
                acc[(r, col)] += a_i[(col, r)] * c[(col, i)];
            }
        }
    }
    // left-multiply by the reversal matrix J
    let mut inv = DenseMatrix::zeros(n, n);
    for r in 0..n {
        inv.row_mut(r).copy_from_slice(acc.row(n - 1 - r));
    }
    Ok(inv)
}

/// Fast inverse of the instance. Fails with
/// [`Error::NumericallySingular`] when elimination hits a zero column.
pub fn invert(inst: &DisplacementInstance) -> Result<InverseResult> {
    let fact = gepp(inst)?;
    let hat = hat_system(&inst.system)?;
    let basis = spq(&hat.system);
    let (c, d) = cidik(inst, &fact, &basis)?;
    let inverse = assemble(inst, &hat.system, &c, &d)?;
    Ok(InverseResult { inverse, residual: None })
}

/// Fast inverse plus the dense right-residual `||R R^{-1} - I||_inf`
/// (costs an extra O(n^3) for the check).
pub fn invert_verified(inst: &DisplacementInstance) -> Result<InverseResult> {
    let mut res = invert(inst)?;
    let r = materialize(inst);
    let mut prod = r.matmul(&res.inverse);
    for i in 0..inst.n() {
        prod[(i, i)] -= 1.0;
    }
    res.residual = Some(prod.inf_norm());
    Ok(res)
}

/// Value of `sum_k d_k Q_k(x)`, the polynomial encoded by a coefficient
/// row in the system basis. Convenience for callers interpreting `D`.
pub fn eval_in_basis(sys: &PolySystem, d: &[f64], x: f64) -> f64 {
    evaluate_system(sys, x).iter().zip(d).map(|(q, c)| q * c).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::displacement::wq_dense;
    use crate::instance_gen::{random_instance, random_nodes, random_system};
    use crate::oracle::{cond_estimate, dense_inverse, matrix_power_sum};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const FAMILIES: [PolyFamily; 3] =
        [PolyFamily::Quasiseparable, PolyFamily::Semiseparable, PolyFamily::WellFree];

    #[test]
    fn vf_satisfies_column_recurrence() {
        let mut rng = StdRng::seed_from_u64(51);
        let nodes = random_nodes(7, &mut rng);
        let d: Vec<f64> = (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let vf = build_vf(&nodes, &d);
        for i in 0..7 {
            assert_eq!(vf[(i, 6)], 0.0, "last column must vanish");
            let x = nodes.as_slice()[i];
            for k in 0..6 {
                let lhs = x * vf[(i, k)];
                let rhs = vf[(i, k + 1)] + d[k + 1];
                assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
            }
        }
    }

    #[test]
    fn fast_sum_matches_dense_power_sum() {
        let mut rng = StdRng::seed_from_u64(52);
        for fam in FAMILIES {
            for _ in 0..8 {
                let n = rng.gen_range(1..10);
                let sys = random_system(fam, n, &mut rng);
                let nodes = random_nodes(n, &mut rng);
                let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let v = build_vandermonde(&sys, &nodes).unwrap();
                let direct = v.matmul(&matrix_power_sum(&wq_dense(&sys), &d));
                let fast = fast_sum_product(&sys, &nodes, &d).unwrap();
                let scale = direct.max_abs().max(1.0);
                assert!(
                    fast.sub(&direct).max_abs() <= 1e-11 * scale,
                    "{fam:?} n={n}"
                );
            }
        }
    }

    #[test]
    fn coefficient_stage_solves_the_right_systems() {
        let mut rng = StdRng::seed_from_u64(53);
        let inst = random_instance(PolyFamily::Quasiseparable, 7, 2, &mut rng);
        let r = materialize(&inst);
        let fact = gepp(&inst).unwrap();
        let hat = hat_system(&inst.system).unwrap();
        let basis = spq(&hat.system);
        let (c, d) = cidik(&inst, &fact, &basis).unwrap();
        let xs = inst.nodes.as_slice();
        let rt = r.transpose();
        for i in 0..2 {
            // R^T (c_i ./ x) = b_i
            let ci: Vec<f64> = (0..7).map(|r_| c[(r_, i)] / xs[r_]).collect();
            let prod = rt.matvec(&ci);
            for (p, want) in prod.iter().zip(inst.b.row(i)) {
                assert!((p - want).abs() <= 1e-8 * want.abs().max(1.0));
            }
            // d_i S_hat = reversed(R^{-1} g_i)
            let mut w = crate::oracle::dense_solve(&crate::oracle::dense_gepp(&r).unwrap(), &inst.g.col(i));
            w.reverse();
            let prod: Vec<f64> = (0..7)
                .map(|j| (0..7).map(|t| d[(i, t)] * basis.s[(t, j)]).sum())
                .collect();
            for (p, want) in prod.iter().zip(&w) {
                assert!((p - want).abs() <= 1e-8 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn inverse_matches_dense_oracle() {
        let mut rng = StdRng::seed_from_u64(54);
        for fam in FAMILIES {
            let mut tested = 0;
            while tested < 5 {
                let n = rng.gen_range(2..10);
                let alpha = rng.gen_range(1..4);
                let inst = random_instance(fam, n, alpha, &mut rng);
                let r = materialize(&inst);
                if cond_estimate(&r) > 1e6 {
                    continue;
                }
                tested += 1;
                let fast = invert(&inst).unwrap().inverse;
                let dense = dense_inverse(&r).unwrap();
                let scale = dense.max_abs().max(1.0);
                assert!(
                    fast.sub(&dense).max_abs() <= 1e-6 * scale,
                    "{fam:?} n={n} alpha={alpha}"
                );
            }
        }
    }

    #[test]
    fn verified_inverse_reports_small_residual() {
        let mut rng = StdRng::seed_from_u64(55);
        let inst = (0..500)
            .map(|_| random_instance(PolyFamily::Semiseparable, 8, 1, &mut rng))
            .find(|cand| cond_estimate(&materialize(cand)) <= 1e6)
            .expect("a moderately conditioned instance exists");
        let res = invert_verified(&inst).unwrap();
        let resid = res.residual.unwrap();
        assert!(resid <= 1e-7, "residual {resid}");
    }

    #[test]
    fn order_one_inversion_is_reciprocal() {
        let sys = crate::poly_systems::monomial(1);
        let nodes = crate::poly_systems::NodeSet::new(vec![2.0]).unwrap();
        let g = DenseMatrix::from_row_major(1, 1, vec![3.0]);
        let b = DenseMatrix::from_row_major(1, 1, vec![0.5]);
        let inst = DisplacementInstance::new(sys, nodes, g, b).unwrap();
        // R = x * g * b = 3
        let r = materialize(&inst);
        assert!((r[(0, 0)] - 3.0).abs() < 1e-15);
        let inv = invert(&inst).unwrap().inverse;
        assert!((inv[(0, 0)] - 1.0 / 3.0).abs() < 1e-15);
    }

    // The reversal matrix in the assembly is essential: dropping it (using
    // the identity instead) produces a grossly wrong result.
    #[test]
    fn reversal_arbitration() {
        let mut rng = StdRng::seed_from_u64(56);
        let inst = random_instance(PolyFamily::Quasiseparable, 6, 1, &mut rng);
        let r = materialize(&inst);
        let dense = dense_inverse(&r).unwrap();
        let fact = gepp(&inst).unwrap();
        let hat = hat_system(&inst.system).unwrap();
        let basis = spq(&hat.system);
        let (c, d) = cidik(&inst, &fact, &basis).unwrap();
        let with_reversal = assemble(&inst, &hat.system, &c, &d).unwrap();
        let scale = dense.max_abs();
        assert!(with_reversal.sub(&dense).max_abs() <= 1e-8 * scale);
        // identity in place of the reversal: reconstruct acc from the
        // assembled result by undoing the row flip, then compare directly
        let mut without = DenseMatrix::zeros(6, 6);
        for i in 0..6 {
            without.row_mut(i).copy_from_slice(with_reversal.row(5 - i));
        }
        assert!(
            without.sub(&dense).max_abs() > 1e-2 * scale,
            "identity arbitration should fail decisively"
        );
    }

    // Rescaling the hat system's constant term must not change the
    // inverse: the basis solves absorb the scale.
    #[test]
    fn inverse_is_invariant_to_hat_rescaling() {
        let mut rng = StdRng::seed_from_u64(57);
        let inst = random_instance(PolyFamily::WellFree, 6, 2, &mut rng);
        let fact = gepp(&inst).unwrap();
        let hat = hat_system(&inst.system).unwrap();
        let reference = {
            let basis = spq(&hat.system);
            let (c, d) = cidik(&inst, &fact, &basis).unwrap();
            assemble(&inst, &hat.system, &c, &d).unwrap()
        };
        let scaled_sys = PolySystem::new(
            hat.system.family(),
            hat.system.n(),
            7.25 * hat.system.tau0(),
            hat.system.alpha().to_vec(),
            hat.system.beta().to_vec(),
            hat.system.gamma().to_vec(),
            hat.system.delta().to_vec(),
            hat.system.theta().to_vec(),
        )
        .unwrap();
        let scaled = {
            let basis = spq(&scaled_sys);
            let (c, d) = cidik(&inst, &fact, &basis).unwrap();
            assemble(&inst, &scaled_sys, &c, &d).unwrap()
        };
        let scale = reference.max_abs().max(1.0);
        assert!(scaled.sub(&reference).max_abs() <= 1e-9 * scale);
    }

    #[test]
    fn eval_in_basis_is_a_dot_product() {
        let sys = crate::poly_systems::chebyshev(4);
        let d = [1.0, 2.0, 0.0, -1.0];
        let x = 0.5;
        let q = evaluate_system(&sys, x);
        let want = q[0] + 2.0 * q[1] - q[3];
        assert!((eval_in_basis(&sys, &d, x) - want).abs() < 1e-15);
    }
}
