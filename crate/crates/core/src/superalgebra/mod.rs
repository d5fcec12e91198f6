//! Graded Lie superalgebras given by exact structure constants.
//!
//! An algebra stores, for every in-window degree pair (i, j) with i <= j,
//! the brackets of basis vectors as sparse coordinate rows at degree i + j.
//! The (j, i) orientation is always derived through the super sign rule, so
//! cross-degree antisymmetry holds structurally; same-degree tables are
//! stored in full and verified by [`GradedLieSuperalgebra::check_super_identities`].
//!
//! Brackets that would land outside the window are unknown rather than
//! zero: evaluating one sets a truncation flag instead of silently
//! dropping the component.

pub(crate) mod extend;
mod free;
mod ops;

pub use extend::{
    extend_mixed_bracket, flip, maximal_extension, maximal_extension_with_witnesses,
    minimal_extension, LocalLieSuperalgebra,
};
pub use free::{free_lie_super, free_super_dimension, FreeTower};
pub use ops::{
    extend_and_compare, ideal_generated, ideal_witness, idealiser, maximal_trivial_ideal,
    quotient, restrict_to_family, subalgebra_generated, transitivity_defect, DegreeFamily,
    LocalMap, Side,
};

pub(crate) use extend::extend_upward as extend_upward_public;

use std::collections::BTreeMap;

use crate::error::Error;
use crate::graded::{koszul_sign, GradedSpace, GradedVector, Window};
use crate::linalg::{
    add_sparse_into, dense_from_sparse, is_zero_vec, scalar, sparse_from_dense, Scalar, SparseVec,
};
use crate::report::{Check, Report};
use crate::Result;
use num_traits::Zero;

/// Bracket table for one degree pair: row a * dim_j + b holds the
/// coordinates of [e_{i,a}, e_{j,b}] in the degree-(i+j) basis.
pub type Block = Vec<SparseVec>;

pub fn block_from_dense_rows(rows: Vec<Vec<Scalar>>) -> Block {
    rows.iter().map(|r| sparse_from_dense(r)).collect()
}

/// Formal decomposition of a basis vector into brackets of lower-degree
/// basis vectors: sum of coeff * [left, right] over (degree, index) pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessTerm {
    pub coeff: Scalar,
    pub left: (i64, usize),
    pub right: (i64, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BracketExpression {
    pub degree: i64,
    pub terms: Vec<WitnessTerm>,
}

/// Witness decompositions for every basis vector of each derived degree.
pub type WitnessTable = BTreeMap<i64, Vec<BracketExpression>>;

#[derive(Clone, Debug)]
pub struct GradedLieSuperalgebra {
    space: GradedSpace,
    blocks: BTreeMap<(i64, i64), Block>,
    provenance: BTreeMap<i64, String>,
    truncated: bool,
}

impl GradedLieSuperalgebra {
    pub(crate) fn new_raw(space: GradedSpace) -> Self {
        GradedLieSuperalgebra {
            space,
            blocks: BTreeMap::new(),
            provenance: BTreeMap::new(),
            truncated: false,
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub(crate) fn space_mut(&mut self) -> &mut GradedSpace {
        &mut self.space
    }

    pub fn window(&self) -> Window {
        self.space.window()
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.space.dim(degree)
    }

    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.space.dims()
    }

    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub(crate) fn set_truncated(&mut self, t: bool) {
        self.truncated = t;
    }

    pub fn provenance(&self) -> &BTreeMap<i64, String> {
        &self.provenance
    }

    pub(crate) fn set_provenance(&mut self, degree: i64, note: impl Into<String>) {
        self.provenance.insert(degree, note.into());
    }

    /// Installs the bracket table for the ordered pair i <= j; the table
    /// must cover all dim_i * dim_j basis pairs.
    pub(crate) fn set_block(&mut self, i: i64, j: i64, block: Block) {
        assert!(i <= j, "blocks are keyed with i <= j");
        let expect = self.dim(i) * self.dim(j);
        assert_eq!(block.len(), expect, "block ({i},{j}) has wrong row count");
        self.blocks.insert((i, j), block);
    }

    pub(crate) fn block(&self, i: i64, j: i64) -> Option<&Block> {
        self.blocks.get(&(i, j))
    }

    pub(crate) fn has_block(&self, i: i64, j: i64) -> bool {
        self.blocks.contains_key(&(i, j))
    }

    /// Iterates stored blocks in key order.
    pub(crate) fn blocks(&self) -> impl Iterator<Item = (&(i64, i64), &Block)> {
        self.blocks.iter()
    }

    /// [e_{i,a}, e_{j,b}] as a sparse row at degree i + j. Empty when the
    /// target degree is outside the window or either component is zero.
    ///
    /// Panics if an in-window block that should exist was never installed;
    /// that is a construction-order bug, not a runtime condition.
    pub fn bracket_basis(&self, i: i64, a: usize, j: i64, b: usize) -> SparseVec {
        if !self.window().contains(i + j) || self.dim(i) == 0 || self.dim(j) == 0 {
            return Vec::new();
        }
        if self.dim(i + j) == 0 {
            return Vec::new();
        }
        if i <= j {
            let block = self
                .blocks
                .get(&(i, j))
                .unwrap_or_else(|| panic!("block ({i},{j}) not constructed"));
            block[a * self.dim(j) + b].clone()
        } else {
            let block = self
                .blocks
                .get(&(j, i))
                .unwrap_or_else(|| panic!("block ({j},{i}) not constructed"));
            let row = &block[b * self.dim(i) + a];
            let sign = scalar(-koszul_sign(i, j));
            row.iter().map(|(k, v)| (*k, v * &sign)).collect()
        }
    }

    /// Bracket of a combination at degree i with a combination at degree j;
    /// dense output at degree i + j (empty if out of window).
    pub(crate) fn bracket_components(
        &self,
        i: i64,
        x: &[Scalar],
        j: i64,
        y: &[Scalar],
    ) -> Vec<Scalar> {
        let target = i + j;
        if !self.window().contains(target) {
            return Vec::new();
        }
        let mut acc = vec![Scalar::zero(); self.dim(target)];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let row = self.bracket_basis(i, a, j, b);
                let c = xa * yb;
                add_sparse_into(&mut acc, &row, &c);
            }
        }
        acc
    }

    /// Bilinear extension of the stored constants. The flag is set when a
    /// nonzero component pair would land outside the window, where the
    /// bracket is unknown; zero is returned for those components.
    pub fn bracket(&self, x: &GradedVector, y: &GradedVector) -> (GradedVector, bool) {
        let mut out = GradedVector::zero();
        let mut truncated = false;
        for (i, xi) in x.components() {
            for (j, yj) in y.components() {
                if !self.window().contains(i + j) {
                    truncated = true;
                    continue;
                }
                let acc = self.bracket_components(i, xi, j, yj);
                if !is_zero_vec(&acc) {
                    let mut part = GradedVector::zero();
                    part.set_component(i + j, acc);
                    out.add_assign(&part);
                }
            }
        }
        (out, truncated)
    }

    /// Verifies super antisymmetry and the super Jacobi identity over all
    /// in-window basis tuples whose intermediate brackets stay in the
    /// window. Violations are reported with the first witness, not raised.
    pub fn check_super_identities(&self) -> Report {
        let mut report =
            Report::new("check-super-identities").with_dimensions(self.space.dims());
        report.truncated = self.truncated;

        report.push_check(Check::from_outcome("antisymmetry", self.antisymmetry_witness()));
        report.push_check(Check::from_outcome("jacobi", self.jacobi_witness()));
        report
    }

    fn antisymmetry_witness(&self) -> Option<String> {
        let w = self.window();
        for i in w.iter() {
            let d = self.dim(i);
            if d == 0 || !w.contains(2 * i) {
                continue;
            }
            let sign = scalar(koszul_sign(i, i));
            for a in 0..d {
                for b in 0..d {
                    let mut acc = vec![Scalar::zero(); self.dim(2 * i)];
                    add_sparse_into(&mut acc, &self.bracket_basis(i, a, i, b), &scalar(1));
                    add_sparse_into(&mut acc, &self.bracket_basis(i, b, i, a), &sign);
                    if !is_zero_vec(&acc) {
                        return Some(format!(
                            "degree {} indices ({}, {}): [x,y] + (-1)^(xy) [y,x] != 0",
                            i, a, b
                        ));
                    }
                }
            }
        }
        None
    }

    fn jacobi_witness(&self) -> Option<String> {
        let w = self.window();
        let degrees: Vec<i64> = w.iter().filter(|&k| self.dim(k) > 0).collect();
        for &i in &degrees {
            for &j in degrees.iter().filter(|&&j| j >= i) {
                for &k in degrees.iter().filter(|&&k| k >= j) {
                    if ![i + j, i + k, j + k, i + j + k]
                        .iter()
                        .all(|&s| w.contains(s))
                    {
                        continue;
                    }
                    if let Some(witness) = self.jacobi_witness_for_degrees(i, j, k) {
                        return Some(witness);
                    }
                }
            }
        }
        None
    }

    fn jacobi_witness_for_degrees(&self, i: i64, j: i64, k: i64) -> Option<String> {
        let target = self.dim(i + j + k);
        if target == 0 {
            // All three terms land in a zero component; nothing to check.
            return None;
        }
        let sign_xy = scalar(-koszul_sign(i, j));
        for a in 0..self.dim(i) {
            let b_lo = if j == i { a } else { 0 };
            for b in b_lo..self.dim(j) {
                let c_lo = if k == j { b } else { 0 };
                for c in c_lo..self.dim(k) {
                    let mut acc = vec![Scalar::zero(); target];
                    // [x, [y, z]]
                    for (idx, coef) in &self.bracket_basis(j, b, k, c) {
                        let row = self.bracket_basis(i, a, j + k, *idx);
                        add_sparse_into(&mut acc, &row, coef);
                    }
                    // - (-1)^{xy} [y, [x, z]]
                    for (idx, coef) in &self.bracket_basis(i, a, k, c) {
                        let row = self.bracket_basis(j, b, i + k, *idx);
                        add_sparse_into(&mut acc, &row, &(coef * &sign_xy));
                    }
                    // - [[x, y], z]
                    for (idx, coef) in &self.bracket_basis(i, a, j, b) {
                        let row = self.bracket_basis(i + j, *idx, k, c);
                        add_sparse_into(&mut acc, &row, &-coef);
                    }
                    if !is_zero_vec(&acc) {
                        return Some(format!(
                            "degrees ({}, {}, {}) indices ({}, {}, {})",
                            i, j, k, a, b, c
                        ));
                    }
                }
            }
        }
        None
    }

    /// Evaluates a witness decomposition inside the algebra.
    pub fn evaluate_expression(&self, expr: &BracketExpression) -> Vec<Scalar> {
        let mut acc = vec![Scalar::zero(); self.dim(expr.degree)];
        for t in &expr.terms {
            let row = self.bracket_basis(t.left.0, t.left.1, t.right.0, t.right.1);
            add_sparse_into(&mut acc, &row, &t.coeff);
        }
        acc
    }

    /// Structure constants flattened for reports, in block key order.
    pub fn constant_entries(&self) -> Vec<crate::report::ConstantEntry> {
        let mut out = Vec::new();
        for (&(i, j), block) in &self.blocks {
            let dj = self.dim(j);
            for (row_idx, row) in block.iter().enumerate() {
                if row.is_empty() {
                    continue;
                }
                out.push(crate::report::ConstantEntry {
                    degrees: (i, j),
                    left: row_idx / dj,
                    right: row_idx % dj,
                    value: row
                        .iter()
                        .map(|(k, v)| (*k, v.to_string()))
                        .collect(),
                });
            }
        }
        out
    }

    pub(crate) fn expect_nonempty_window(&self, min: i64, max: i64) -> Result<()> {
        let w = self.window();
        if w.min() > min || w.max() < max {
            return Err(Error::WindowTooSmall(format!(
                "window [{}, {}] does not cover [{}, {}]",
                w.min(),
                w.max(),
                min,
                max
            )));
        }
        Ok(())
    }
}

/// Fills the derived half of a same-degree table: given rows for all pairs
/// (a, b) with a <= b, completes (b, a) entries by the sign rule.
pub(crate) fn complete_symmetric_table(
    degree: i64,
    dim: usize,
    upper: &BTreeMap<(usize, usize), SparseVec>,
    target_dim: usize,
) -> Block {
    let sign = scalar(-koszul_sign(degree, degree));
    let mut block: Block = vec![Vec::new(); dim * dim];
    for ((a, b), row) in upper {
        block[a * dim + b] = row.clone();
        if a != b {
            block[*b * dim + *a] = row.iter().map(|(k, v)| (*k, v * &sign)).collect();
        }
    }
    let _ = target_dim;
    block
}

/// Dense coordinates of [e_{i,a}, e_{j,b}] (helper for tests and callers
/// that want dense rows).
pub fn bracket_basis_dense(g: &GradedLieSuperalgebra, i: i64, a: usize, j: i64, b: usize) -> Vec<Scalar> {
    dense_from_sparse(&g.bracket_basis(i, a, j, b), g.dim(i + j))
}
