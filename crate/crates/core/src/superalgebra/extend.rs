//! Extensions of local Lie superalgebras.
//!
//! A local part prescribes degrees -1, 0, 1 and the bracket blocks landing
//! inside that region. Two canonical global extensions exist on any window:
//!
//! - the maximal one, with positive and negative parts free on the degree
//!   +-1 components (tensor-algebra realization);
//! - the minimal one, its quotient by the largest ideal meeting the local
//!   part trivially, built here degree by degree: each new component is the
//!   span of brackets of lower components, realized faithfully by its
//!   adjoint action on the opposite degree +-1 space.
//!
//! Mixed brackets between the two sides are defined by the Jacobi
//! recursion on witness decompositions; well-definedness is a theorem, and
//! witness independence is exercised by tests.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::graded::{koszul_sign, GradedSpace, GradedVector, Window};
use crate::linalg::{
    add_sparse_into, is_zero_vec, rref_with_transcript, scalar, sparse_from_dense, Scalar,
};
use crate::Result;
use num_traits::Zero;

use super::free::FreeTower;
use super::ops::Side;
use super::{Block, BracketExpression, GradedLieSuperalgebra, WitnessTable, WitnessTerm};

/// Degrees -1, 0, 1 with the bracket blocks that stay inside the region.
/// Pairs of degree +-1 elements have no bracket here; extensions define it.
#[derive(Clone, Debug)]
pub struct LocalLieSuperalgebra {
    inner: GradedLieSuperalgebra,
}

impl LocalLieSuperalgebra {
    /// Blocks are indexed like the algebra tables: `neg_zero` holds
    /// [e_{-1,a}, e_{0,b}], `neg_pos` holds [e_{-1,a}, e_{1,b}],
    /// `zero_zero` the full degree-0 table, `zero_pos` the action on
    /// degree 1.
    pub fn new(
        dims: (usize, usize, usize),
        neg_zero: Block,
        neg_pos: Block,
        zero_zero: Block,
        zero_pos: Block,
    ) -> Result<Self> {
        let (dn, dz, dp) = dims;
        let window = Window::new(-1, 1)?;
        let mut space = GradedSpace::empty(window);
        space.set_component_dim(-1, dn)?;
        space.set_component_dim(0, dz)?;
        space.set_component_dim(1, dp)?;
        check_block_shape("[-1,0]", &neg_zero, dn * dz, dn)?;
        check_block_shape("[-1,1]", &neg_pos, dn * dp, dz)?;
        check_block_shape("[0,0]", &zero_zero, dz * dz, dz)?;
        check_block_shape("[0,1]", &zero_pos, dz * dp, dp)?;
        let mut inner = GradedLieSuperalgebra::new_raw(space);
        inner.set_block(-1, 0, neg_zero);
        inner.set_block(-1, 1, neg_pos);
        inner.set_block(0, 0, zero_zero);
        inner.set_block(0, 1, zero_pos);
        Ok(LocalLieSuperalgebra { inner })
    }

    pub fn from_algebra(g: &GradedLieSuperalgebra) -> Result<Self> {
        g.expect_nonempty_window(-1, 1)?;
        let dims = (g.dim(-1), g.dim(0), g.dim(1));
        let grab = |i: i64, j: i64| -> Block {
            if g.dim(i) == 0 || g.dim(j) == 0 {
                Vec::new()
            } else {
                g.block(i, j).cloned().unwrap_or_default()
            }
        };
        LocalLieSuperalgebra::new(dims, grab(-1, 0), grab(-1, 1), grab(0, 0), grab(0, 1))
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.inner.dim(-1), self.inner.dim(0), self.inner.dim(1))
    }

    pub fn as_algebra(&self) -> &GradedLieSuperalgebra {
        &self.inner
    }

    /// The identities hold exactly for the triples whose brackets all stay
    /// in the region; the window rule of the generic checker matches that.
    pub fn check_identities(&self) -> crate::report::Report {
        self.inner.check_super_identities()
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.check_identities();
        if let Some(c) = report.checks.iter().find(|c| !c.pass) {
            return Err(Error::IdentityViolation(format!(
                "local part fails {}: {}",
                c.name,
                c.witness.clone().unwrap_or_default()
            )));
        }
        Ok(())
    }
}

fn check_block_shape(name: &str, block: &Block, rows: usize, target_dim: usize) -> Result<()> {
    if block.len() != rows {
        return Err(Error::DimensionMismatch(format!(
            "block {} has {} rows, expected {}",
            name,
            block.len(),
            rows
        )));
    }
    for row in block {
        for (idx, _) in row {
            if *idx >= target_dim {
                return Err(Error::DimensionMismatch(format!(
                    "block {} references coordinate {} of a {}-dimensional component",
                    name, idx, target_dim
                )));
            }
        }
    }
    Ok(())
}

/// Regrade by negating every degree. Elements and bracket values are
/// untouched; parity is preserved since k and -k agree mod 2.
pub fn flip(g: &GradedLieSuperalgebra) -> GradedLieSuperalgebra {
    let w = g.window();
    let window = Window::new(-w.max(), -w.min()).expect("flipped window");
    let mut space = GradedSpace::empty(window);
    for k in w.iter() {
        if g.dim(k) > 0 {
            space
                .set_component(-k, g.space().labels(k).to_vec())
                .expect("flip component");
        }
    }
    let mut out = GradedLieSuperalgebra::new_raw(space);
    let pairs: Vec<(i64, i64)> = g.blocks().map(|(&k, _)| k).collect();
    for (i, j) in pairs {
        let (ni, nj) = (-j, -i);
        let (di, dj) = (out.dim(ni), out.dim(nj));
        let mut block: Block = vec![Vec::new(); di * dj];
        for a in 0..di {
            for b in 0..dj {
                // new [e_{ni,a}, e_{nj,b}] = old [e_{j,a}, e_{i,b}]
                block[a * dj + b] = g.bracket_basis(j, a, i, b);
            }
        }
        out.set_block(ni, nj, block);
    }
    for (k, note) in g.provenance() {
        out.set_provenance(-k, note.clone());
    }
    out.set_truncated(g.is_truncated());
    out
}

pub(crate) fn flip_witnesses(table: &WitnessTable) -> WitnessTable {
    table
        .iter()
        .map(|(k, exprs)| {
            (
                -k,
                exprs
                    .iter()
                    .map(|e| BracketExpression {
                        degree: -e.degree,
                        terms: e
                            .terms
                            .iter()
                            .map(|t| WitnessTerm {
                                coeff: t.coeff.clone(),
                                left: (-t.left.0, t.left.1),
                                right: (-t.right.0, t.right.1),
                            })
                            .collect(),
                    })
                    .collect(),
            )
        })
        .collect()
}

/// [e_{i,a}, y] for a dense component y at degree j.
pub(crate) fn bracket_unit_dense(
    g: &GradedLieSuperalgebra,
    i: i64,
    a: usize,
    j: i64,
    y: &[Scalar],
) -> Vec<Scalar> {
    let mut acc = vec![Scalar::zero(); g.dim(i + j)];
    for (b, c) in y.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let row = g.bracket_basis(i, a, j, b);
        add_sparse_into(&mut acc, &row, c);
    }
    acc
}

/// Value of [b, u] where b is given by a witness decomposition
/// b = sum coeff [x, y], via the Jacobi recursion
/// [[x, y], u] = [x, [y, u]] - (-1)^{xy} [y, [x, u]].
/// The result is independent of the witness; tests exercise that.
pub fn extend_mixed_bracket(
    g: &GradedLieSuperalgebra,
    expr: &BracketExpression,
    u: &GradedVector,
) -> Result<GradedVector> {
    let Some(m) = u.is_homogeneous() else {
        return Err(Error::InvalidInput(
            "probe vector must be homogeneous".into(),
        ));
    };
    let coords = u.component(m).unwrap();
    let target = expr.degree + m;
    if !g.window().contains(target) {
        return Err(Error::InvalidInput(format!(
            "bracket target degree {} is outside the window",
            target
        )));
    }
    let value = mixed_bracket_dense(g, expr, m, coords)?;
    Ok(GradedVector::from_component(target, value))
}

pub(crate) fn mixed_bracket_dense(
    g: &GradedLieSuperalgebra,
    expr: &BracketExpression,
    m: i64,
    u: &[Scalar],
) -> Result<Vec<Scalar>> {
    let w = g.window();
    let target = expr.degree + m;
    let mut acc = vec![Scalar::zero(); g.dim(target)];
    for t in &expr.terms {
        let (dx, xi) = t.left;
        let (dy, yi) = t.right;
        if dx + dy != expr.degree {
            return Err(Error::InvalidInput(format!(
                "witness term degrees {} + {} do not sum to {}",
                dx, dy, expr.degree
            )));
        }
        for d in [dy + m, dx + m] {
            if !w.contains(d) {
                return Err(Error::ConstructionOrder(format!(
                    "intermediate degree {} leaves the window",
                    d
                )));
            }
        }
        // [x, [y, u]]
        let yu = unit_bracket(g, dy, yi, m, u);
        let x_yu = bracket_unit_dense(g, dx, xi, dy + m, &yu);
        // [y, [x, u]]
        let xu = unit_bracket(g, dx, xi, m, u);
        let y_xu = bracket_unit_dense(g, dy, yi, dx + m, &xu);
        let sign = scalar(-koszul_sign(dx, dy));
        for (idx, slot) in acc.iter_mut().enumerate() {
            let mut v = &t.coeff * &x_yu[idx];
            v += &t.coeff * &(&sign * &y_xu[idx]);
            *slot += v;
        }
    }
    Ok(acc)
}

fn unit_bracket(g: &GradedLieSuperalgebra, i: i64, a: usize, m: i64, u: &[Scalar]) -> Vec<Scalar> {
    bracket_unit_dense(g, i, a, m, u)
}

type SparseColumns = Vec<crate::linalg::SparseVec>;

/// Columns of ad(e_{i,a}) restricted to degree j: column b is
/// [e_{i,a}, e_{j,b}].
fn adjoint_columns(g: &GradedLieSuperalgebra, i: i64, a: usize, j: i64) -> SparseColumns {
    (0..g.dim(j)).map(|b| g.bracket_basis(i, a, j, b)).collect()
}

/// Composition outer . inner on sparse column maps.
fn compose_columns(outer: &SparseColumns, inner: &SparseColumns) -> SparseColumns {
    inner
        .iter()
        .map(|col| {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, v) in col {
                for (r, w) in &outer[*k] {
                    let entry = acc.entry(*r).or_insert_with(Scalar::zero);
                    *entry += v * w;
                }
            }
            acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
        })
        .collect()
}

fn add_scaled_columns(acc: &mut SparseColumns, other: &SparseColumns, factor: &Scalar) {
    for (a, o) in acc.iter_mut().zip(other) {
        if o.is_empty() {
            continue;
        }
        let mut map: BTreeMap<usize, Scalar> = a.iter().cloned().collect();
        for (k, v) in o {
            let entry = map.entry(*k).or_insert_with(Scalar::zero);
            *entry += factor * v;
        }
        *a = map.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    }
}

/// Fills every missing mixed block (m, q) for q >= 2 and m_min <= m <= 0
/// using the witness decompositions of the positive basis vectors. For
/// each witness term [x, y] the action on the whole degree-m component is
/// composed from sparse adjoint columns, so the cost is proportional to
/// the number of nonzero structure constants rather than to dimensions.
pub(crate) fn extend_upward(
    g: &mut GradedLieSuperalgebra,
    witnesses: &WitnessTable,
    m_min: i64,
) -> Result<()> {
    let w = g.window();
    for q in 2..=w.max() {
        let dq = g.dim(q);
        if dq == 0 {
            continue;
        }
        let exprs = witnesses.get(&q).ok_or_else(|| {
            Error::ConstructionOrder(format!("no witness table for degree {}", q))
        })?;
        if exprs.len() != dq {
            return Err(Error::ConstructionOrder(format!(
                "degree {} has {} witnesses for {} basis vectors",
                q,
                exprs.len(),
                dq
            )));
        }
        for m in m_min..=0 {
            let dm = g.dim(m);
            if dm == 0 || g.has_block(m, q) || !w.contains(m + q) {
                continue;
            }
            let sign = scalar(-koszul_sign(m, q));
            let mut adjoint_cache: BTreeMap<(i64, usize, i64), SparseColumns> = BTreeMap::new();
            let mut block: Block = vec![Vec::new(); dm * dq];
            for (bidx, expr) in exprs.iter().enumerate() {
                // total column map G_m -> G_{m+q} of ad(b) restricted
                let mut total: SparseColumns = vec![Vec::new(); dm];
                for t in &expr.terms {
                    let (dx, xi) = t.left;
                    let (dy, yi) = t.right;
                    if dx + dy != expr.degree {
                        return Err(Error::InvalidInput(format!(
                            "witness term degrees {} + {} do not sum to {}",
                            dx, dy, expr.degree
                        )));
                    }
                    for d in [dy + m, dx + m] {
                        if !w.contains(d) {
                            return Err(Error::ConstructionOrder(format!(
                                "intermediate degree {} leaves the window",
                                d
                            )));
                        }
                    }
                    let mut fetch = |i: i64, a: usize, j: i64| -> SparseColumns {
                        adjoint_cache
                            .entry((i, a, j))
                            .or_insert_with(|| adjoint_columns(g, i, a, j))
                            .clone()
                    };
                    // [x, [y, u]] - (-1)^{xy} [y, [x, u]]
                    let x_after_y = compose_columns(&fetch(dx, xi, dy + m), &fetch(dy, yi, m));
                    let y_after_x = compose_columns(&fetch(dy, yi, dx + m), &fetch(dx, xi, m));
                    add_scaled_columns(&mut total, &x_after_y, &t.coeff);
                    let s = &t.coeff * &scalar(-koszul_sign(dx, dy));
                    add_scaled_columns(&mut total, &y_after_x, &s);
                }
                for (uidx, col) in total.into_iter().enumerate() {
                    block[uidx * dq + bidx] = col
                        .into_iter()
                        .map(|(k, x)| (k, &x * &sign))
                        .collect();
                }
            }
            g.set_block(m, q, block);
        }
    }
    Ok(())
}

/// The unique extension with both sides free on the degree +-1 components.
pub fn maximal_extension(
    local: &LocalLieSuperalgebra,
    window: Window,
) -> Result<GradedLieSuperalgebra> {
    maximal_extension_with_witnesses(local, window).map(|(g, _, _)| g)
}

/// As [`maximal_extension`], also returning the witness tables of the free
/// positive and negative components.
pub fn maximal_extension_with_witnesses(
    local: &LocalLieSuperalgebra,
    window: Window,
) -> Result<(GradedLieSuperalgebra, WitnessTable, WitnessTable)> {
    if !window.contains(-1) || !window.contains(1) {
        return Err(Error::WindowTooSmall(
            "extension window must contain [-1, 1]".into(),
        ));
    }
    local.require_valid()?;
    let (dn, dz, dp) = local.dims();

    let mut space = GradedSpace::empty(window);
    space.set_component(-1, local.as_algebra().space().labels(-1).to_vec())?;
    space.set_component(0, local.as_algebra().space().labels(0).to_vec())?;
    space.set_component(1, local.as_algebra().space().labels(1).to_vec())?;

    let pos_depth = window.max().max(1) as usize;
    let neg_depth = (-window.min()).max(1) as usize;
    let pos_tower = FreeTower::build(dp, pos_depth);
    let neg_tower = FreeTower::build(dn, neg_depth);
    for k in 2..=pos_depth {
        space.set_component_dim(k as i64, pos_tower.dim(k))?;
    }
    for k in 2..=neg_depth {
        space.set_component_dim(-(k as i64), neg_tower.dim(k))?;
    }

    let mut g = GradedLieSuperalgebra::new_raw(space);
    for (i, j) in [(-1, 0), (-1, 1), (0, 0), (0, 1)] {
        if g.dim(i) > 0 && g.dim(j) > 0 {
            g.set_block(i, j, local.as_algebra().block(i, j).cloned().unwrap_or_default());
        }
    }
    // free towers provide all brackets of same-sign degrees
    for i in 1..=pos_depth {
        for j in i..=pos_depth {
            if i + j <= pos_depth && !g.has_block(i as i64, j as i64) {
                g.set_block(i as i64, j as i64, pos_tower.block(i, j));
            }
        }
    }
    let mut neg_witnesses_pos_keyed: WitnessTable = BTreeMap::new();
    for k in 2..=neg_depth {
        neg_witnesses_pos_keyed.insert(k as i64, neg_tower.witnesses(k).to_vec());
    }
    {
        // install negative free blocks by flipping the tower orientation
        for i in 1..=neg_depth {
            for j in i..=neg_depth {
                if i + j > neg_depth {
                    continue;
                }
                let tower_block = neg_tower.block(i, j); // rows (a at i, b at j)
                let (di, dj) = (neg_tower.dim(i), neg_tower.dim(j));
                // key (-j, -i): rows (b at -j, a at -i) = [e_b, e_a] = -(-1)^{p p'} [e_a, e_b]
                let sign = scalar(-koszul_sign(i as i64, j as i64));
                let mut block: Block = vec![Vec::new(); dj * di];
                for a in 0..di {
                    for b in 0..dj {
                        block[b * di + a] = tower_block[a * dj + b]
                            .iter()
                            .map(|(k, v)| (*k, v * &sign))
                            .collect();
                    }
                }
                if (i, j) == (1, 1) && dn > 0 {
                    // same-degree table: install [e_a, e_b] directly
                    g.set_block(-1, -1, tower_block);
                } else {
                    g.set_block(-(j as i64), -(i as i64), block);
                }
            }
        }
    }

    // mixed brackets of the negative side with degrees 0 and 1
    let mut flipped = flip(&g);
    extend_upward(&mut flipped, &neg_witnesses_pos_keyed, -1)?;
    let mut g = flip(&flipped);

    // mixed brackets of the positive side with everything non-positive
    let mut pos_witnesses: WitnessTable = BTreeMap::new();
    for k in 2..=pos_depth {
        pos_witnesses.insert(k as i64, pos_tower.witnesses(k).to_vec());
    }
    extend_upward(&mut g, &pos_witnesses, window.min())?;

    for k in window.iter() {
        let note = match k {
            -1..=1 => "local part",
            _ if k > 1 => "free on the degree 1 component",
            _ => "free on the degree -1 component",
        };
        g.set_provenance(k, note);
    }
    let pos_continues =
        window.max() >= 1 && super::free::free_super_dimension(dp, pos_depth + 1)[pos_depth] > 0;
    let neg_continues =
        window.min() <= -1 && super::free::free_super_dimension(dn, neg_depth + 1)[neg_depth] > 0;
    g.set_truncated(pos_continues || neg_continues);
    let _ = dz;
    Ok((g, pos_witnesses, flip_witnesses(&neg_witnesses_pos_keyed)))
}

/// One side of the minimal extension, built degree by degree: component
/// -(k) is the span of brackets [G_{-1}, G_{-k+1}] realized faithfully by
/// the adjoint action on G_1, so the largest trivially-intersecting ideal
/// is quotiented out as the construction proceeds.
///
/// Returns the witness table of the side it built (negative degrees).
fn minimal_negative_side(g: &mut GradedLieSuperalgebra, depth: usize) -> Result<WitnessTable> {
    let mut witnesses: WitnessTable = BTreeMap::new();
    let probe = g.dim(1);
    for k in 2..=depth as i64 {
        let prev = g.dim(-k + 1);
        let d1 = g.dim(-1);
        let ambient = probe * prev;
        // realize [x, y] for x at -i, y at -j through its action on G_1
        let realize = |g: &GradedLieSuperalgebra, i: i64, a: usize, j: i64, b: usize| {
            let mut row = vec![Scalar::zero(); ambient];
            let sign = scalar(-koszul_sign(-i, -j));
            for u in 0..probe {
                // [[x,y],u] = [x,[y,u]] - (-1)^{xy} [y,[x,u]]
                let yu = g.bracket_basis(-j, b, 1, u);
                let yu_dense = crate::linalg::dense_from_sparse(&yu, g.dim(-j + 1));
                let x_yu = bracket_unit_dense(g, -i, a, -j + 1, &yu_dense);
                let xu = g.bracket_basis(-i, a, 1, u);
                let xu_dense = crate::linalg::dense_from_sparse(&xu, g.dim(-i + 1));
                let y_xu = bracket_unit_dense(g, -j, b, -i + 1, &xu_dense);
                for t in 0..prev {
                    let mut v = x_yu[t].clone();
                    v += &sign * &y_xu[t];
                    row[u as usize * prev + t] = v;
                }
            }
            row
        };

        // span over [G_{-1}, G_{-k+1}]
        let mut rows = Vec::with_capacity(d1 * prev);
        for a in 0..d1 {
            for b in 0..prev {
                rows.push(realize(g, 1, a, k - 1, b));
            }
        }
        let (basis, pivots, transcript) = rref_with_transcript(rows.clone(), ambient);
        let dim_k = basis.rows();
        g.space_mut().set_component_dim(-k, dim_k)?;
        g.set_provenance(-k, "span of local brackets, adjoint realization");

        let coords_of = |basis: &crate::linalg::Matrix,
                         pivots: &[usize],
                         row: &[Scalar]|
         -> Result<Vec<Scalar>> {
            let coords: Vec<Scalar> = pivots.iter().map(|&p| row[p].clone()).collect();
            let mut residual = row.to_vec();
            for (r, c) in coords.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for t in 0..ambient {
                    if !basis[(r, t)].is_zero() {
                        let v = &residual[t] - &(c * &basis[(r, t)]);
                        residual[t] = v;
                    }
                }
            }
            if is_zero_vec(&residual) {
                Ok(coords)
            } else {
                Err(Error::Inconsistency(format!(
                    "bracket leaves the degree {} span",
                    -k
                )))
            }
        };

        // witnesses from the elimination transcript
        let exprs: Vec<BracketExpression> = (0..dim_k)
            .map(|r| {
                let mut terms = Vec::new();
                for nu in 0..d1 * prev {
                    let coeff = transcript[(r, nu)].clone();
                    if coeff.is_zero() {
                        continue;
                    }
                    terms.push(WitnessTerm {
                        coeff,
                        left: (-1, nu / prev),
                        right: (-k + 1, nu % prev),
                    });
                }
                BracketExpression { degree: -k, terms }
            })
            .collect();
        witnesses.insert(-k, exprs);

        // block (-k+1, -1) (or the full (-1,-1) table when k = 2)
        if k == 2 {
            if d1 > 0 {
                let mut block: Block = vec![Vec::new(); d1 * d1];
                for a in 0..d1 {
                    for b in 0..prev {
                        block[a * d1 + b] = sparse_from_dense(&coords_of(
                            &basis,
                            &pivots,
                            &rows[a * prev + b],
                        )?);
                    }
                }
                g.set_block(-1, -1, block);
            }
        } else if d1 > 0 && prev > 0 {
            // rows computed as [x at -1, y at -k+1]; key is (-k+1, -1)
            let sign = scalar(-koszul_sign(-1, -k + 1));
            let mut block: Block = vec![Vec::new(); prev * d1];
            for a in 0..d1 {
                for b in 0..prev {
                    let coords = coords_of(&basis, &pivots, &rows[a * prev + b])?;
                    block[b * d1 + a] = coords
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(t, x)| (t, x * &sign))
                        .collect();
                }
            }
            g.set_block(-k + 1, -1, block);
        }

        // evaluation block (-k, 1): slices of the realization rows
        if probe > 0 && dim_k > 0 {
            let mut block: Block = vec![Vec::new(); dim_k * probe];
            for r in 0..dim_k {
                for u in 0..probe {
                    let slice: Vec<Scalar> =
                        (0..prev).map(|t| basis[(r, u * prev + t)].clone()).collect();
                    block[r * probe + u] = sparse_from_dense(&slice);
                }
            }
            g.set_block(-k, 1, block);
        }

        // block (-k, 0): [x, z](u) = [x, [z, u]] + [ [x, u], z ] reordered
        // via the Jacobi identity; the result must stay in the new span.
        let dz = g.dim(0);
        if dz > 0 && dim_k > 0 {
            let mut block: Block = vec![Vec::new(); dim_k * dz];
            for r in 0..dim_k {
                for z in 0..dz {
                    let mut row = vec![Scalar::zero(); ambient];
                    for u in 0..probe {
                        // [[x,z],u] = [x,[z,u]] - [z,[x,u]]
                        let zu = g.bracket_basis(0, z, 1, u);
                        let zu_dense = crate::linalg::dense_from_sparse(&zu, probe);
                        let x_zu = bracket_unit_dense(g, -k, r, 1, &zu_dense);
                        let xu = g.bracket_basis(-k, r, 1, u);
                        let xu_dense = crate::linalg::dense_from_sparse(&xu, prev);
                        let z_xu = bracket_unit_dense(g, 0, z, -k + 1, &xu_dense);
                        for t in 0..prev {
                            let v = &x_zu[t] - &z_xu[t];
                            row[u * prev + t] = v;
                        }
                    }
                    block[r * dz + z] = sparse_from_dense(&coords_of(&basis, &pivots, &row)?);
                }
            }
            g.set_block(-k, 0, block);
        }

        // remaining same-side splits (-i, -j), i + j = k, 2 <= i <= j
        let mut i = 2i64;
        while 2 * i <= k {
            let j = k - i;
            if i > j {
                break;
            }
            let (di, dj) = (g.dim(-i), g.dim(-j));
            if di > 0 && dj > 0 && !g.has_block(-j, -i) {
                if i == j {
                    let mut block: Block = vec![Vec::new(); di * di];
                    for a in 0..di {
                        for b in 0..di {
                            let row = realize(g, i, a, j, b);
                            block[a * di + b] =
                                sparse_from_dense(&coords_of(&basis, &pivots, &row)?);
                        }
                    }
                    g.set_block(-i, -i, block);
                } else {
                    let sign = scalar(-koszul_sign(-i, -j));
                    let mut block: Block = vec![Vec::new(); dj * di];
                    for a in 0..di {
                        for b in 0..dj {
                            let coords = coords_of(&basis, &pivots, &realize(g, i, a, j, b))?;
                            block[b * di + a] = coords
                                .iter()
                                .enumerate()
                                .filter(|(_, x)| !x.is_zero())
                                .map(|(t, x)| (t, x * &sign))
                                .collect();
                        }
                    }
                    g.set_block(-j, -i, block);
                }
            }
            i += 1;
        }
    }
    Ok(witnesses)
}

/// The minimal extension: quotient of the maximal one by the largest
/// ideal intersecting the local part trivially, constructed directly as a
/// pair of adjoint-realized towers. The result is (-2, 2)-transitive and
/// agrees with quotienting the maximal extension; tests compare the two
/// paths on small fixtures.
pub fn minimal_extension(
    local: &LocalLieSuperalgebra,
    window: Window,
) -> Result<GradedLieSuperalgebra> {
    if !window.contains(-1) || !window.contains(1) {
        return Err(Error::WindowTooSmall(
            "extension window must contain [-1, 1]".into(),
        ));
    }
    local.require_valid()?;

    let mut space = GradedSpace::empty(window);
    for k in [-1, 0, 1] {
        space.set_component(k, local.as_algebra().space().labels(k).to_vec())?;
    }
    let mut g = GradedLieSuperalgebra::new_raw(space);
    for (i, j) in [(-1, 0), (-1, 1), (0, 0), (0, 1)] {
        if g.dim(i) > 0 && g.dim(j) > 0 {
            g.set_block(i, j, local.as_algebra().block(i, j).cloned().unwrap_or_default());
        }
    }
    for k in -1..=1 {
        g.set_provenance(k, "local part");
    }

    minimal_negative_side(&mut g, (-window.min()).max(0) as usize)?;
    let mut flipped = flip(&g);
    let pos_witnesses_flipped =
        minimal_negative_side(&mut flipped, window.max().max(0) as usize)?;
    let mut g = flip(&flipped);
    let pos_witnesses = flip_witnesses(&pos_witnesses_flipped);
    extend_upward(&mut g, &pos_witnesses, window.min())?;

    let neg_open = window.min() <= -1 && g.dim(window.min()) > 0;
    let pos_open = window.max() >= 1 && g.dim(window.max()) > 0;
    g.set_truncated(neg_open || pos_open);

    for side in [Side::Negative, Side::Positive] {
        let (start, label) = match side {
            Side::Negative => (2, "(-2,2)"),
            Side::Positive => (-2, "(-2,2)"),
        };
        let defect = super::ops::transitivity_defect(&g, side, start)?;
        if defect.values().any(|s| s.dim() > 0) {
            return Err(Error::Inconsistency(format!(
                "minimal extension failed to be {} transitive",
                label
            )));
        }
    }
    Ok(g)
}


#[cfg(test)]
mod tests {
    use super::test_fixtures::abelian_local;
    use super::*;
    use crate::linalg::scalar;

    #[test]
    fn flip_is_an_involution() {
        let w = Window::new(0, 3).unwrap();
        let gens = crate::graded::GradedSpace::concentrated(w, 1, 2).unwrap();
        let (g, _) = crate::superalgebra::free_lie_super(&gens, w).unwrap();
        let back = flip(&flip(&g));
        assert_eq!(back.dims(), g.dims());
        for i in w.iter() {
            for j in w.iter() {
                if !w.contains(i + j) {
                    continue;
                }
                for a in 0..g.dim(i) {
                    for b in 0..g.dim(j) {
                        assert_eq!(back.bracket_basis(i, a, j, b), g.bracket_basis(i, a, j, b));
                    }
                }
            }
        }
    }

    #[test]
    fn flip_preserves_identities() {
        let w = Window::new(0, 3).unwrap();
        let gens = crate::graded::GradedSpace::concentrated(w, 1, 2).unwrap();
        let (g, _) = crate::superalgebra::free_lie_super(&gens, w).unwrap();
        let f = flip(&g);
        assert!(f.check_super_identities().all_pass());
    }

    #[test]
    fn abelian_local_maximal_extension_has_free_sides_and_zero_mixed_brackets() {
        let local = abelian_local((2, 1, 2));
        let w = Window::new(-3, 3).unwrap();
        let g = maximal_extension(&local, w).unwrap();
        assert_eq!(g.dim(2), 3);
        assert_eq!(g.dim(-2), 3);
        assert_eq!(g.dim(3), 2);
        // mixed bracket of the free square with degree 0 vanishes
        for a in 0..g.dim(-2) {
            for b in 0..g.dim(0) {
                assert!(g.bracket_basis(-2, a, 0, b).is_empty());
            }
        }
        assert!(g.check_super_identities().all_pass());
    }

    #[test]
    fn local_with_no_negative_part_extends_upward_only() {
        let local = abelian_local((0, 1, 2));
        let w = Window::new(-2, 3).unwrap();
        let g = maximal_extension(&local, w).unwrap();
        assert_eq!(g.dim(-1), 0);
        assert_eq!(g.dim(-2), 0);
        assert_eq!(g.dim(2), 3);
        assert!(g.check_super_identities().all_pass());
    }

    #[test]
    fn minimal_extension_of_abelian_local_is_the_local_part() {
        let local = abelian_local((2, 2, 2));
        let w = Window::new(-3, 3).unwrap();
        let g = minimal_extension(&local, w).unwrap();
        assert_eq!(
            g.dims(),
            vec![(-3, 0), (-2, 0), (-1, 2), (0, 2), (1, 2), (2, 0), (3, 0)]
        );
        assert!(!g.is_truncated());
        assert!(g.check_super_identities().all_pass());
    }

    #[test]
    fn extend_mixed_bracket_unfolds_the_jacobi_recursion() {
        // free algebra on two odd generators, probe with degree 0 absent:
        // use the maximal extension of an abelian local part instead, where
        // every mixed bracket must vanish.
        let local = abelian_local((1, 1, 2));
        let w = Window::new(-2, 3).unwrap();
        let g = maximal_extension(&local, w).unwrap();
        let expr = BracketExpression {
            degree: 2,
            terms: vec![WitnessTerm {
                coeff: scalar(1),
                left: (1, 0),
                right: (1, 1),
            }],
        };
        let u = GradedVector::basis_vector(0, 0, 1);
        let value = extend_mixed_bracket(&g, &expr, &u).unwrap();
        assert!(value.is_zero());
    }

    #[test]
    fn extend_mixed_bracket_with_equal_even_witness_vanishes() {
        let local = abelian_local((1, 2, 1));
        let w = Window::new(-2, 2).unwrap();
        let g = maximal_extension(&local, w).unwrap();
        // x = y even: [x, y] = 0, so the recursion must return 0
        let expr = BracketExpression {
            degree: 0 + 0,
            terms: vec![
                WitnessTerm {
                    coeff: scalar(1),
                    left: (0, 0),
                    right: (0, 0),
                },
                WitnessTerm {
                    coeff: scalar(-1),
                    left: (0, 0),
                    right: (0, 0),
                },
            ],
        };
        let u = GradedVector::basis_vector(1, 0, 1);
        let value = extend_mixed_bracket(&g, &expr, &u).unwrap();
        assert!(value.is_zero());
    }
}
