//! Ready-made triples: adjoint triples, hemi-semidirect products, crossed
//! modules and the small non-equivariant fixture used throughout the tests.

use crate::error::Error;
use crate::linalg::{scalar, sparse_from_dense, Matrix, Scalar};
use crate::superalgebra::Block;
use crate::Result;
use num_traits::Zero;

use super::{LieAlgebra, LieLeibnizTriple};

/// sl2 with the Chevalley basis (h, e, f): [h,e] = 2e, [h,f] = -2f,
/// [e,f] = h.
pub fn sl2() -> LieAlgebra {
    let z = || vec![Scalar::zero(); 3];
    let mut rows = vec![z(); 9];
    let mut set = |a: usize, b: usize, v: Vec<i64>| {
        rows[a * 3 + b] = v.into_iter().map(scalar).collect();
    };
    set(0, 1, vec![0, 2, 0]);
    set(1, 0, vec![0, -2, 0]);
    set(0, 2, vec![0, 0, -2]);
    set(2, 0, vec![0, 0, 2]);
    set(1, 2, vec![1, 0, 0]);
    set(2, 1, vec![-1, 0, 0]);
    let constants: Block = rows.iter().map(|r| sparse_from_dense(r)).collect();
    LieAlgebra::new(
        3,
        vec!["h".into(), "e".into(), "f".into()],
        constants,
    )
    .expect("sl2 constants")
}

/// Action matrices of (h, e, f) on the 2-dimensional fundamental module.
pub fn sl2_fundamental_action() -> Vec<Matrix> {
    vec![
        Matrix::from_int_rows(&[&[1, 0], &[0, -1]]),
        Matrix::from_int_rows(&[&[0, 1], &[0, 0]]),
        Matrix::from_int_rows(&[&[0, 0], &[1, 0]]),
    ]
}

/// The adjoint triple (g, g, id): strict, surjective, faithful for
/// centerless g.
pub fn adjoint(g: &LieAlgebra) -> LieLeibnizTriple {
    let m = g.dim();
    let action: Vec<Matrix> = (0..m).map(|a| g.ad(a)).collect();
    LieLeibnizTriple::new(g.clone(), action, Matrix::identity(m)).expect("adjoint triple")
}

/// Hemi-semidirect product: V = g + M with a.(b, y) = ([a,b], a.y) and
/// theta the projection onto g.
pub fn hemi_semidirect(g: &LieAlgebra, module_action: &[Matrix]) -> Result<LieLeibnizTriple> {
    let m = g.dim();
    if module_action.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{} module action matrices for a {}-dimensional algebra",
            module_action.len(),
            m
        )));
    }
    let p = module_action.first().map_or(0, |mat| mat.rows());
    for mat in module_action {
        if mat.rows() != p || mat.cols() != p {
            return Err(Error::DimensionMismatch(
                "module action matrices must be square of equal size".into(),
            ));
        }
    }
    let n = m + p;
    let action: Vec<Matrix> = (0..m)
        .map(|a| {
            let ad = g.ad(a);
            Matrix::from_fn(n, n, |r, c| {
                if r < m && c < m {
                    ad[(r, c)].clone()
                } else if r >= m && c >= m {
                    module_action[a][(r - m, c - m)].clone()
                } else {
                    Scalar::zero()
                }
            })
        })
        .collect();
    let theta = Matrix::from_fn(m, n, |r, c| {
        if r == c {
            num_traits::One::one()
        } else {
            Scalar::zero()
        }
    });
    let t = LieLeibnizTriple::new(g.clone(), action, theta)?;
    t.require_valid()?;
    Ok(t)
}

/// A Lie algebra crossed module: V itself a Lie algebra, theta equivariant
/// and satisfying the Peiffer identity theta(u) . v = [u, v]_V. Both
/// conditions are verified.
pub fn crossed_module(
    g: &LieAlgebra,
    v: &LieAlgebra,
    action: &[Matrix],
    theta: &Matrix,
) -> Result<LieLeibnizTriple> {
    let t = LieLeibnizTriple::new(g.clone(), action.to_vec(), theta.clone())?;
    if let Some(w) = t.strictness_witness() {
        return Err(Error::InvalidInput(format!(
            "crossed module requires an equivariant theta; fails at {}",
            w
        )));
    }
    let n = v.dim();
    if n != t.module_dim() {
        return Err(Error::DimensionMismatch(
            "module dimension differs from the Lie algebra structure on V".into(),
        ));
    }
    for a in 0..n {
        for b in 0..n {
            let mut ua = vec![Scalar::zero(); n];
            ua[a] = num_traits::One::one();
            let mut ub = vec![Scalar::zero(); n];
            ub[b] = num_traits::One::one();
            let lhs = t.action_of(&t.theta_of(&ua)).mul_vec(&ub);
            let rhs = v.bracket(&ua, &ub);
            if lhs != rhs {
                return Err(Error::InvalidInput(format!(
                    "Peiffer identity fails at basis pair ({}, {})",
                    a, b
                )));
            }
        }
    }
    t.require_valid()?;
    Ok(t)
}

/// Quadratic but not equivariant: the Borel algebra b = span(h, e) with
/// [h, e] = 2e, V its adjoint module, theta the projection onto h. The
/// theta orbit is two-dimensional.
pub fn nonstrict_fixture() -> LieLeibnizTriple {
    let z = || vec![Scalar::zero(); 2];
    let mut rows = vec![z(); 4];
    rows[0 * 2 + 1] = vec![scalar(0), scalar(2)];
    rows[1 * 2 + 0] = vec![scalar(0), scalar(-2)];
    let constants: Block = rows.iter().map(|r| sparse_from_dense(r)).collect();
    let g = LieAlgebra::new(2, vec!["h".into(), "e".into()], constants).expect("borel");
    let action = vec![
        Matrix::from_int_rows(&[&[0, 0], &[0, 2]]),
        Matrix::from_int_rows(&[&[0, 0], &[-2, 0]]),
    ];
    let theta = Matrix::from_int_rows(&[&[1, 0], &[0, 0]]);
    LieLeibnizTriple::new(g, action, theta).expect("borel fixture")
}

/// Fails the quadratic constraint: sl2 adjoint with theta the projection
/// onto the e direction. Used to exercise failure reporting.
pub fn quadratic_failure_fixture() -> LieLeibnizTriple {
    let g = sl2();
    let action: Vec<Matrix> = (0..3).map(|a| g.ad(a)).collect();
    let mut theta = Matrix::zeros(3, 3);
    theta[(1, 1)] = num_traits::One::one();
    LieLeibnizTriple::new(g, action, theta).expect("projection fixture")
}
