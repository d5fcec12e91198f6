//! Free Lie superalgebras on odd generators, realized inside the tensor
//! algebra with the super commutator. Ranks of iterated commutator spans
//! replace any basis combinatorics: canonical bases are the echelon rows,
//! and every derived basis vector carries a witness decomposition into
//! brackets of a generator with a lower-degree basis vector.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

use crate::error::Error;
use crate::graded::{GradedSpace, Window};
use crate::linalg::{rref_with_transcript, Matrix, Scalar};
use crate::Result;

use super::{Block, BracketExpression, GradedLieSuperalgebra, WitnessTable, WitnessTerm};

pub(crate) struct FreeComponent {
    pub basis: Matrix,
    pub pivots: Vec<usize>,
    pub witnesses: Vec<BracketExpression>,
}

/// Tensor-algebra realization of the free Lie superalgebra on `n` odd
/// generators, truncated at `depth`. Component k lives in the k-th tensor
/// power (dimension n^k).
pub struct FreeTower {
    n: usize,
    comps: Vec<FreeComponent>,
}

impl FreeTower {
    pub fn build(n: usize, depth: usize) -> FreeTower {
        let mut comps = Vec::new();
        if depth >= 1 {
            comps.push(FreeComponent {
                basis: Matrix::identity(n),
                pivots: (0..n).collect(),
                witnesses: Vec::new(),
            });
        }
        for k in 2..=depth {
            let prev = &comps[k - 2];
            let d_prev = prev.basis.rows();
            let ambient = n.checked_pow(k as u32).expect("tensor power overflow");
            let mut rows = Vec::with_capacity(n * d_prev);
            for a in 0..n {
                for c in 0..d_prev {
                    rows.push(bracket_tensor_with_generator(n, a, k - 1, prev.basis.row(c)));
                }
            }
            let (basis, pivots, transcript) = rref_with_transcript(rows, ambient);
            let witnesses = (0..basis.rows())
                .map(|r| {
                    let mut terms = Vec::new();
                    for nu in 0..n * d_prev {
                        let coeff = transcript[(r, nu)].clone();
                        if coeff.is_zero() {
                            continue;
                        }
                        terms.push(WitnessTerm {
                            coeff,
                            left: (1, nu / d_prev),
                            right: (k as i64 - 1, nu % d_prev),
                        });
                    }
                    BracketExpression {
                        degree: k as i64,
                        terms,
                    }
                })
                .collect();
            comps.push(FreeComponent {
                basis,
                pivots,
                witnesses,
            });
        }
        FreeTower { n, comps }
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.comps.len()
    }

    pub fn dim(&self, k: usize) -> usize {
        if k == 0 || k > self.comps.len() {
            0
        } else {
            self.comps[k - 1].basis.rows()
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        (1..=self.depth()).map(|k| self.dim(k)).collect()
    }

    pub(crate) fn component(&self, k: usize) -> &FreeComponent {
        &self.comps[k - 1]
    }

    /// Tensor coordinates of a combination of degree-k basis vectors.
    pub fn tensor_of(&self, k: usize, coords: &[Scalar]) -> Vec<Scalar> {
        let comp = self.component(k);
        let ambient = comp.basis.cols();
        let mut out = vec![Scalar::zero(); ambient];
        for (r, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..ambient {
                if !comp.basis[(r, j)].is_zero() {
                    out[j] += c * &comp.basis[(r, j)];
                }
            }
        }
        out
    }

    /// Expresses a tensor lying in the degree-k component over its echelon
    /// basis; None if it does not belong to the span.
    pub fn coords_in_basis(&self, k: usize, tensor: &[Scalar]) -> Option<Vec<Scalar>> {
        let comp = self.component(k);
        let coords: Vec<Scalar> = comp.pivots.iter().map(|&p| tensor[p].clone()).collect();
        let mut residual = tensor.to_vec();
        for (r, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..comp.basis.cols() {
                if !comp.basis[(r, j)].is_zero() {
                    let v = &residual[j] - &(c * &comp.basis[(r, j)]);
                    residual[j] = v;
                }
            }
        }
        if residual.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    /// Super commutator of two basis tensors, expressed over the target
    /// component basis. Panics if the bracket leaves the span, which would
    /// contradict the free construction.
    pub fn bracket_in_basis(&self, i: usize, a: usize, j: usize, b: usize) -> Vec<Scalar> {
        let t = bracket_tensor(
            self.n,
            i,
            self.component(i).basis.row(a),
            j,
            self.component(j).basis.row(b),
        );
        self.coords_in_basis(i + j, &t)
            .expect("free component is closed under the super commutator")
    }

    /// Bracket table for the assembled algebra, rows indexed a * dim_j + b.
    pub(crate) fn block(&self, i: usize, j: usize) -> Block {
        let (di, dj) = (self.dim(i), self.dim(j));
        let mut rows = Vec::with_capacity(di * dj);
        for a in 0..di {
            for b in 0..dj {
                rows.push(crate::linalg::sparse_from_dense(&self.bracket_in_basis(i, a, j, b)));
            }
        }
        rows
    }

    pub fn witnesses(&self, k: usize) -> &[BracketExpression] {
        &self.component(k).witnesses
    }
}

/// u (x) w - (-1)^{ij} w (x) u for tensors of degrees i and j.
pub fn bracket_tensor(n: usize, i: usize, u: &[Scalar], j: usize, w: &[Scalar]) -> Vec<Scalar> {
    let stride = n.pow(j as u32);
    let out_dim = u.len() * w.len();
    let mut out = vec![Scalar::zero(); out_dim];
    for (a, ua) in u.iter().enumerate() {
        if ua.is_zero() {
            continue;
        }
        for (b, wb) in w.iter().enumerate() {
            if wb.is_zero() {
                continue;
            }
            out[a * stride + b] += ua * wb;
        }
    }
    let sign_negate = (i * j) % 2 == 0;
    let stride_rev = n.pow(i as u32);
    for (b, wb) in w.iter().enumerate() {
        if wb.is_zero() {
            continue;
        }
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            let term = wb * ua;
            if sign_negate {
                out[b * stride_rev + a] -= term;
            } else {
                out[b * stride_rev + a] += term;
            }
        }
    }
    out
}

fn bracket_tensor_with_generator(n: usize, a: usize, j: usize, w: &[Scalar]) -> Vec<Scalar> {
    let mut e = vec![Scalar::zero(); n];
    e[a] = Scalar::one();
    bracket_tensor(n, 1, &e, j, w)
}

/// Dimensions of the free Lie superalgebra on `n` odd generators through
/// degree `max`, from the factorization of 1/(1 - n t) into
/// (1 + t^k)^{d_k} for odd k and (1 - t^k)^{-d_k} for even k.
pub fn free_super_dimension(n: usize, max: usize) -> Vec<usize> {
    let mut s: Vec<BigInt> = Vec::with_capacity(max + 1);
    let mut p = BigInt::one();
    for _ in 0..=max {
        s.push(p.clone());
        p *= BigInt::from(n);
    }
    let mut dims = Vec::with_capacity(max);
    for k in 1..=max {
        let dk = s[k].clone();
        assert!(!dk.is_negative(), "series coefficient must be nonnegative");
        let dk_usize = dk.to_usize().expect("dimension fits in usize");
        dims.push(dk_usize);
        if dk_usize == 0 {
            continue;
        }
        for _ in 0..dk_usize {
            if k % 2 == 1 {
                // divide by (1 + t^k)
                let mut u = vec![BigInt::zero(); max + 1];
                for i in 0..=max {
                    u[i] = if i >= k {
                        &s[i] - &u[i - k]
                    } else {
                        s[i].clone()
                    };
                }
                s = u;
            } else {
                // multiply by (1 - t^k)
                for i in (k..=max).rev() {
                    let v = &s[i] - &s[i - k];
                    s[i] = v;
                }
            }
        }
    }
    dims
}

/// The free Lie superalgebra on odd generators, assembled with canonical
/// echelon bases and witness decompositions for each derived basis vector.
pub fn free_lie_super(
    generators: &GradedSpace,
    window: Window,
) -> Result<(GradedLieSuperalgebra, WitnessTable)> {
    let n = generators.dim(1);
    if generators.total_dim() != n {
        return Err(Error::InvalidInput(
            "free generators must be concentrated at degree 1".into(),
        ));
    }
    if window.max() < 1 {
        return Err(Error::WindowTooSmall(
            "free construction needs max degree >= 1".into(),
        ));
    }
    let depth = window.max() as usize;
    let tower = FreeTower::build(n, depth);
    let mut space = GradedSpace::empty(window);
    space.set_component(1, generators.labels(1).to_vec())?;
    for k in 2..=depth {
        space.set_component_dim(k as i64, tower.dim(k))?;
    }
    let mut algebra = GradedLieSuperalgebra::new_raw(space);
    for i in 1..=depth {
        for j in i..=depth {
            if i + j > depth {
                continue;
            }
            algebra.set_block(i as i64, j as i64, tower.block(i, j));
        }
    }
    algebra.set_provenance(1, "generators");
    for k in 2..=depth {
        algebra.set_provenance(k as i64, "free tensor span");
    }
    let continues = free_super_dimension(n, depth + 1)[depth] > 0;
    algebra.set_truncated(continues);

    let mut witnesses: WitnessTable = BTreeMap::new();
    for k in 2..=depth {
        witnesses.insert(k as i64, tower.witnesses(k).to_vec());
    }
    Ok((algebra, witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense_from_sparse;

    #[test]
    fn one_generator_dims() {
        let tower = FreeTower::build(1, 5);
        assert_eq!(tower.dims(), vec![1, 1, 0, 0, 0]);
        assert_eq!(free_super_dimension(1, 5), vec![1, 1, 0, 0, 0]);
    }

    #[test]
    fn two_generator_dims_match_series_oracle() {
        let tower = FreeTower::build(2, 5);
        assert_eq!(tower.dims(), vec![2, 3, 2, 3, 6]);
        assert_eq!(free_super_dimension(2, 5), vec![2, 3, 2, 3, 6]);
    }

    #[test]
    fn three_generator_dims_match_series_oracle() {
        let tower = FreeTower::build(3, 5);
        assert_eq!(tower.dims(), vec![3, 6, 8, 18, 48]);
        assert_eq!(free_super_dimension(3, 5), vec![3, 6, 8, 18, 48]);
    }

    #[test]
    fn degree_two_is_the_symmetric_square() {
        // odd generators: [u, v] = u(x)v + v(x)u
        let tower = FreeTower::build(2, 2);
        assert_eq!(tower.dim(2), 3);
    }

    #[test]
    fn free_algebra_passes_identities_and_witnesses_evaluate() {
        let window = Window::new(0, 4).unwrap();
        let gens = GradedSpace::concentrated(window, 1, 2).unwrap();
        let (algebra, witnesses) = free_lie_super(&gens, window).unwrap();
        assert_eq!(algebra.dims(), vec![(0, 0), (1, 2), (2, 3), (3, 2), (4, 3)]);
        let report = algebra.check_super_identities();
        assert!(report.all_pass(), "{:?}", report.checks);

        for (degree, exprs) in &witnesses {
            for (idx, expr) in exprs.iter().enumerate() {
                let value = algebra.evaluate_expression(expr);
                let mut expected = vec![Scalar::zero(); algebra.dim(*degree)];
                expected[idx] = num_traits::One::one();
                assert_eq!(value, expected, "witness {} at degree {}", idx, degree);
            }
        }
    }

    #[test]
    fn perturbed_constant_fails_with_witness() {
        let window = Window::new(0, 3).unwrap();
        let gens = GradedSpace::concentrated(window, 1, 2).unwrap();
        let (mut algebra, _) = free_lie_super(&gens, window).unwrap();
        // Poison one entry of the (1, 2) block.
        let mut block = algebra.block(1, 2).unwrap().clone();
        block[0].push((0, crate::linalg::scalar(1)));
        algebra.set_block(1, 2, block);
        let report = algebra.check_super_identities();
        assert!(!report.all_pass());
        let failing: Vec<_> = report.checks.iter().filter(|c| !c.pass).collect();
        assert!(failing[0].witness.is_some());
    }

    #[test]
    fn bracket_of_generator_with_its_square_vanishes() {
        // 3 [e, [e, e]] = 0 is forced by the super Jacobi identity.
        let tower = FreeTower::build(1, 3);
        assert_eq!(tower.dim(3), 0);
        // and the degree-2 bracket of the single generator is nonzero
        let square = tower.bracket_in_basis(1, 0, 1, 0);
        assert!(!square.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn free_truncation_flag_tracks_continuation() {
        let w2 = Window::new(0, 2).unwrap();
        let gens1 = GradedSpace::concentrated(w2, 1, 1).unwrap();
        let (a, _) = free_lie_super(&gens1, w2).unwrap();
        // one odd generator stops at degree 2
        assert!(!a.is_truncated());

        let gens2 = GradedSpace::concentrated(w2, 1, 2).unwrap();
        let (b, _) = free_lie_super(&gens2, w2).unwrap();
        assert!(b.is_truncated());
    }

    #[test]
    fn witness_terms_reference_generator_times_lower_basis() {
        let tower = FreeTower::build(2, 3);
        for expr in tower.witnesses(3) {
            for t in &expr.terms {
                assert_eq!(t.left.0, 1);
                assert_eq!(t.right.0, 2);
            }
        }
        // spot check: each (1,2) block row really lands in the degree-3 span
        let block = tower.block(1, 2);
        for row in &block {
            let dense = dense_from_sparse(row, tower.dim(3));
            let tensor = tower.tensor_of(3, &dense);
            assert!(tower.coords_in_basis(3, &tensor).is_some());
        }
    }
}
