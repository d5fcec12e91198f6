//! The universal graded Lie superalgebra of an odd vector space and the
//! constructions living inside it: prolongations of ideals in the free
//! positive part, reduced prolongations with prescribed top degrees, and
//! the minimal algebra generated by the degree 1 space together with a
//! subspace at degree -1.
//!
//! Negative components are towers of Hom spaces: degree -k is the space of
//! maps from the degree-1 space into the component above it, evaluation is
//! contraction on the first slot, and all brackets follow the recursion
//! [x, y](u) = [x, y(u)] + (-1)^{|y|} [x(u), y].

use std::collections::BTreeMap;

use crate::error::Error;
use crate::graded::{koszul_sign, GradedSpace, Window};
use crate::linalg::{
    add_sparse_into, dense_from_sparse, is_zero_vec, kernel, scalar, sparse_from_dense, Matrix,
    Scalar, Subspace,
};
use crate::report::{Check, Report};
use crate::superalgebra::{
    extend_and_compare, flip, free_super_dimension, idealiser, maximal_trivial_ideal, quotient,
    restrict_to_family, Block, DegreeFamily, FreeTower, GradedLieSuperalgebra,
    LocalLieSuperalgebra, Side, WitnessTable,
};
use crate::Result;
use num_traits::{One, Zero};

/// Degree-0 data for a Hom tower: an abstract Lie algebra acting on the
/// degree-1 space. The universal algebra uses gl of the space itself.
pub(crate) struct TowerSpec {
    pub v_dim: usize,
    pub deg0_dim: usize,
    /// full bracket table of the degree-0 algebra
    pub deg0_constants: Block,
    /// rows (z, u): [e_{0,z}, e_{1,u}] in degree-1 coordinates
    pub deg0_action: Block,
}

/// gl(n) with basis E(b,c): the unit map e_b -> e_c, flattened as b*n + c.
pub(crate) fn gl_spec(n: usize) -> TowerSpec {
    let m = n * n;
    let idx = |b: usize, c: usize| b * n + c;
    let mut constants: Block = vec![Vec::new(); m * m];
    for b in 0..n {
        for c in 0..n {
            for d in 0..n {
                for e in 0..n {
                    let mut row: Vec<(usize, Scalar)> = Vec::new();
                    if e == b {
                        row.push((idx(d, c), Scalar::one()));
                    }
                    if c == d {
                        let mut found = false;
                        for entry in row.iter_mut() {
                            if entry.0 == idx(b, e) {
                                entry.1 -= Scalar::one();
                                found = true;
                            }
                        }
                        if !found {
                            row.push((idx(b, e), -Scalar::one()));
                        }
                    }
                    row.retain(|(_, v)| !v.is_zero());
                    row.sort_by_key(|(k, _)| *k);
                    constants[idx(b, c) * m + idx(d, e)] = row;
                }
            }
        }
    }
    let mut action: Block = vec![Vec::new(); m * n];
    for b in 0..n {
        for c in 0..n {
            for u in 0..n {
                if u == b {
                    action[idx(b, c) * n + u] = vec![(c, Scalar::one())];
                }
            }
        }
    }
    TowerSpec {
        v_dim: n,
        deg0_dim: m,
        deg0_constants: constants,
        deg0_action: action,
    }
}

/// Flattened coordinates of an endomorphism in the gl basis above:
/// coordinate b*n + c carries the coefficient of e_c in m(e_b).
pub fn endomorphism_coords(m: &Matrix) -> Vec<Scalar> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut out = vec![Scalar::zero(); n * n];
    for b in 0..n {
        for c in 0..n {
            out[b * n + c] = m[(c, b)].clone();
        }
    }
    out
}

/// Assembles the full Hom tower over the degree-0 algebra of the spec,
/// with the free superalgebra on the degree-1 space above it. Negative
/// component at degree -k has dimension v^k * deg0_dim.
pub(crate) fn assemble_hom_tower(
    spec: &TowerSpec,
    window: Window,
) -> Result<(GradedLieSuperalgebra, WitnessTable)> {
    if !window.contains(0) || !window.contains(1) {
        return Err(Error::WindowTooSmall(
            "hom tower window must contain degrees 0 and 1".into(),
        ));
    }
    let v = spec.v_dim;
    let m = spec.deg0_dim;
    let depth = (-window.min()).max(0) as usize;
    let pos_depth = window.max() as usize;

    let mut space = GradedSpace::empty(window);
    space.set_component_dim(1, v)?;
    space.set_component_dim(0, m)?;
    let mut level_dims = vec![m];
    for k in 1..=depth {
        let d = v.checked_pow(k as u32).and_then(|p| p.checked_mul(m));
        let d = d.ok_or_else(|| Error::InvalidInput("tower dimension overflow".into()))?;
        space.set_component_dim(-(k as i64), d)?;
        level_dims.push(d);
    }
    let pos_tower = FreeTower::build(v, pos_depth.max(1));
    for k in 2..=pos_depth {
        space.set_component_dim(k as i64, pos_tower.dim(k))?;
    }

    let mut g = GradedLieSuperalgebra::new_raw(space);
    g.set_block(0, 0, spec.deg0_constants.clone());
    g.set_block(0, 1, spec.deg0_action.clone());

    // evaluation blocks: x at -(k) is a map from V into level k-1
    for k in 1..=depth {
        let dk = level_dims[k];
        let prev = level_dims[k - 1];
        let mut block: Block = vec![Vec::new(); dk * v];
        for idx in 0..dk {
            let (u0, t) = (idx / prev, idx % prev);
            block[idx * v + u0] = vec![(t, Scalar::one())];
        }
        g.set_block(-(k as i64), 1, block);
    }

    // negative-negative and negative-zero blocks, by descending total degree
    for total in 1..=2 * depth as i64 {
        let t = -total;
        for i in window.iter().filter(|&i| i <= 0 && i >= t) {
            let j = t - i;
            if j < i || j > 0 || (i == 0 && j == 0) {
                continue;
            }
            if !window.contains(t) {
                continue;
            }
            let (di, dj, dt) = (g.dim(i), g.dim(j), g.dim(t));
            if di == 0 || dj == 0 {
                continue;
            }
            let dim_above = g.dim(t + 1);
            let prev_i = g.dim(i + 1);
            let prev_j = if j == 0 { v } else { g.dim(j + 1) };
            let sign_y = scalar(if crate::graded::parity(j) == 1 { -1 } else { 1 });
            let mut block: Block = vec![Vec::new(); di * dj];
            for a in 0..di {
                let (u0, s) = (a / prev_i, a % prev_i);
                for b in 0..dj {
                    let mut out = vec![Scalar::zero(); dt];
                    for u in 0..v {
                        let mut slot = vec![Scalar::zero(); dim_above];
                        // [x, y(u)]
                        if j == 0 {
                            let yu = g.bracket_basis(0, b, 1, u);
                            for (c, coef) in yu.iter() {
                                let row = g.bracket_basis(i, a, 1, *c);
                                add_sparse_into(&mut slot, &row, coef);
                            }
                        } else {
                            let (u1, r) = (b / prev_j, b % prev_j);
                            if u == u1 {
                                let row = g.bracket_basis(i, a, j + 1, r);
                                add_sparse_into(&mut slot, &row, &Scalar::one());
                            }
                        }
                        // (-1)^{|y|} [x(u), y]
                        if u == u0 {
                            let row = g.bracket_basis(i + 1, s, j, b);
                            add_sparse_into(&mut slot, &row, &sign_y);
                        }
                        for (c, val) in slot.into_iter().enumerate() {
                            if !val.is_zero() {
                                out[u * dim_above + c] = val;
                            }
                        }
                    }
                    block[a * dj + b] = sparse_from_dense(&out);
                }
            }
            g.set_block(i, j, block);
        }
    }

    // free positive part and mixed brackets
    let mut witnesses: WitnessTable = BTreeMap::new();
    for i in 1..=pos_depth {
        for j in i..=pos_depth {
            if i + j <= pos_depth {
                g.set_block(i as i64, j as i64, pos_tower.block(i, j));
            }
        }
    }
    for k in 2..=pos_depth {
        witnesses.insert(k as i64, pos_tower.witnesses(k).to_vec());
    }
    crate::superalgebra::extend_upward_public(&mut g, &witnesses, window.min())?;

    for k in window.iter() {
        let note = match k {
            1 => "degree 1 space",
            0 => "degree 0 algebra",
            _ if k < 0 => "hom tower",
            _ => "free on the degree 1 space",
        };
        g.set_provenance(k, note);
    }
    let pos_continues =
        pos_depth >= 1 && free_super_dimension(v, pos_depth + 1)[pos_depth] > 0;
    g.set_truncated(pos_continues || (depth > 0 && v * m > 0) || (window.min() < 0 && v * m > 0));
    Ok((g, witnesses))
}

/// Kantor's universal Lie superalgebra of an n-dimensional odd space,
/// truncated to the window: gl at degree 0, Hom towers below, free above.
pub struct UniversalAlgebra {
    n: usize,
    algebra: GradedLieSuperalgebra,
    pos_witnesses: WitnessTable,
}

impl UniversalAlgebra {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn algebra(&self) -> &GradedLieSuperalgebra {
        &self.algebra
    }

    pub fn window(&self) -> Window {
        self.algebra.window()
    }

    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.algebra.dims()
    }
}

pub fn build_universal(n: usize, window: Window) -> Result<UniversalAlgebra> {
    if n == 0 {
        return Err(Error::InvalidInput("universal algebra needs n >= 1".into()));
    }
    let (algebra, pos_witnesses) = assemble_hom_tower(&gl_spec(n), window)?;
    Ok(UniversalAlgebra {
        n,
        algebra,
        pos_witnesses,
    })
}

/// The semilocal morphism rho into the universal algebra: identity on
/// degree 1, the adjoint action on degree 0, and recursively
/// rho(x)(u) = rho([x, u]) below.
pub struct RhoMorphism {
    maps: BTreeMap<i64, Matrix>,
    injective: BTreeMap<i64, bool>,
    report: Report,
}

impl RhoMorphism {
    pub fn map(&self, degree: i64) -> Option<&Matrix> {
        self.maps.get(&degree)
    }

    pub fn injective(&self, degree: i64) -> Option<bool> {
        self.injective.get(&degree).copied()
    }

    pub fn injective_everywhere(&self) -> bool {
        self.injective.values().all(|&b| b)
    }

    pub fn report(&self) -> &Report {
        &self.report
    }

    /// Image of each component as a subspace of the tower coordinates.
    pub fn image_family(&self) -> DegreeFamily {
        self.maps
            .iter()
            .map(|(&k, m)| {
                (
                    k,
                    Subspace::from_rows(
                        m.rows(),
                        (0..m.cols()).map(|c| (0..m.rows()).map(|r| m[(r, c)].clone()).collect()).collect(),
                    ),
                )
            })
            .collect()
    }
}

pub fn rho_morphism(u: &UniversalAlgebra, g: &GradedLieSuperalgebra) -> Result<RhoMorphism> {
    if g.dim(1) != u.n {
        return Err(Error::DimensionMismatch(format!(
            "degree 1 component has dimension {}, universal algebra was built on {}",
            g.dim(1),
            u.n
        )));
    }
    let w = g.window();
    let uw = u.window();
    let n = u.n;
    let mut maps: BTreeMap<i64, Matrix> = BTreeMap::new();
    maps.insert(1, Matrix::identity(n));
    // degree 0: operator coordinates of the adjoint action on degree 1
    let mut rho0 = Matrix::zeros(n * n, g.dim(0));
    for a in 0..g.dim(0) {
        for b in 0..n {
            for (c, coef) in g.bracket_basis(0, a, 1, b).iter() {
                rho0[(b * n + c, a)] = coef.clone();
            }
        }
    }
    maps.insert(0, rho0);
    let mut k = -1i64;
    while w.contains(k) && uw.contains(k) {
        let d = g.dim(k);
        let prev = &maps[&(k + 1)];
        let target = n * prev.rows();
        let mut rho_k = Matrix::zeros(target, d);
        for a in 0..d {
            for u_idx in 0..n {
                let xu = dense_from_sparse(&g.bracket_basis(k, a, 1, u_idx), g.dim(k + 1));
                let img = prev.mul_vec(&xu);
                for (t, val) in img.into_iter().enumerate() {
                    rho_k[(u_idx * prev.rows() + t, a)] = val;
                }
            }
        }
        maps.insert(k, rho_k);
        k -= 1;
    }

    let mut injective = BTreeMap::new();
    for (&deg, m) in &maps {
        injective.insert(deg, m.rank() == g.dim(deg));
    }

    // morphism property on semilocal basis pairs, inside both windows
    let mut report = Report::new("rho-morphism");
    let mut witness = None;
    'outer: for (&i, mi) in &maps {
        for (&j, mj) in &maps {
            if j < i || i + j > 1 {
                continue;
            }
            if !w.contains(i + j) || !uw.contains(i + j) {
                continue;
            }
            let Some(mt) = maps.get(&(i + j)) else {
                continue;
            };
            for a in 0..g.dim(i) {
                for b in 0..g.dim(j) {
                    let lhs = mt.mul_vec(&dense_from_sparse(
                        &g.bracket_basis(i, a, j, b),
                        g.dim(i + j),
                    ));
                    let xa: Vec<Scalar> = (0..mi.rows()).map(|r| mi[(r, a)].clone()).collect();
                    let yb: Vec<Scalar> = (0..mj.rows()).map(|r| mj[(r, b)].clone()).collect();
                    let rhs = u.algebra.bracket_components(i, &xa, j, &yb);
                    if lhs != rhs {
                        witness = Some(format!(
                            "degrees ({}, {}) indices ({}, {})",
                            i, j, a, b
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    report.push_check(Check::from_outcome("semilocal-morphism", witness));
    for (&deg, &inj) in &injective {
        report.push_check(Check {
            name: format!("injective at degree {}", deg),
            pass: inj,
            witness: None,
        });
    }
    Ok(RhoMorphism {
        maps,
        injective,
        report,
    })
}

fn positive_ideal_witness(g: &GradedLieSuperalgebra, fam: &DegreeFamily) -> Option<String> {
    for i in 1..=g.window().max() {
        if g.dim(i) == 0 {
            continue;
        }
        for (&j, fj) in fam.iter() {
            let target = i + j;
            if !g.window().contains(target) {
                continue;
            }
            let ft = fam
                .get(&target)
                .cloned()
                .unwrap_or_else(|| Subspace::zero(g.dim(target)));
            for a in 0..g.dim(i) {
                let mut unit = vec![Scalar::zero(); g.dim(i)];
                unit[a] = Scalar::one();
                for b in 0..fj.dim() {
                    let v = g.bracket_components(i, &unit, j, fj.basis_row(b));
                    if !is_zero_vec(&v) && !ft.contains_vector(&v) {
                        return Some(format!(
                            "[degree {} basis {}, ideal vector {} at degree {}] leaves the ideal",
                            i, a, b, j
                        ));
                    }
                }
            }
        }
    }
    None
}

fn validate_positive_ideal(u: &UniversalAlgebra, d_ideal: &DegreeFamily) -> Result<()> {
    for (&k, s) in d_ideal.iter() {
        if k < 2 {
            return Err(Error::InvalidInput(format!(
                "ideal component at degree {} (must be >= 2)",
                k
            )));
        }
        if s.ambient_dim() != u.algebra.dim(k) {
            return Err(Error::DimensionMismatch(format!(
                "ideal at degree {} has ambient {}, component has dimension {}",
                k,
                s.ambient_dim(),
                u.algebra.dim(k)
            )));
        }
    }
    if let Some(w) = positive_ideal_witness(&u.algebra, d_ideal) {
        return Err(Error::NotAnIdeal(w));
    }
    Ok(())
}

/// Intersects each negative idealiser component with the nested Hom
/// condition N_{-k} inside Hom(V, N_{-k+1}) that the untruncated idealiser
/// satisfies. This removes elements that only survive because conditions
/// referencing degrees beyond the window are invisible.
fn sharpen_idealiser(u: &UniversalAlgebra, family: &mut DegreeFamily) -> Result<()> {
    let w = u.window();
    let mut k = 1i64;
    while w.contains(-k) {
        let above = family
            .get(&(-k + 1))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(u.algebra.dim(-k + 1)));
        let hom = hom_into(u.n, &above, u.algebra.dim(-k + 1));
        let current = family
            .get(&(-k))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(u.algebra.dim(-k)));
        let meet = hom.intersect(&current)?;
        if meet.dim() > 0 {
            family.insert(-k, meet);
        } else {
            family.remove(&(-k));
        }
        k += 1;
    }
    Ok(())
}

/// Prolongation of U_+/D: the idealiser N of D in U, modulo D. Computed in
/// the full tower coordinates; certified within the window.
pub fn prolongation(
    u: &UniversalAlgebra,
    d_ideal: &DegreeFamily,
) -> Result<GradedLieSuperalgebra> {
    validate_positive_ideal(u, d_ideal)?;
    let mut family = idealiser(&u.algebra, d_ideal)?;
    sharpen_idealiser(u, &mut family)?;
    // the positive part is untouched by the idealiser of an ideal of U_+
    for q in 1..=u.window().max() {
        if u.algebra.dim(q) > 0 {
            family.insert(q, Subspace::full(u.algebra.dim(q)));
        }
    }
    let restricted = restrict_to_family(&u.algebra, &family)?;
    // D in restricted coordinates: positives are full, so coordinates agree
    let quotient_family: DegreeFamily = d_ideal.clone();
    quotient(&restricted, &quotient_family)
}

/// Reduced prolongation: prescribed subspaces T_0 .. T_{-p} at the top,
/// then N'_{-k} = Hom(V, N'_{-k+1}) n N_{-k} downward.
pub fn reduced_prolongation(
    u: &UniversalAlgebra,
    d_ideal: &DegreeFamily,
    t_family: &BTreeMap<i64, Subspace>,
) -> Result<GradedLieSuperalgebra> {
    validate_positive_ideal(u, d_ideal)?;
    let w = u.window();
    let p = t_family.keys().copied().min().map_or(0, |k| -k);
    for k in 0..=p {
        if !t_family.contains_key(&(-k)) {
            return Err(Error::InvalidInput(format!(
                "t_family must prescribe every degree 0..-{}, missing {}",
                p, -k
            )));
        }
    }
    let n = u.n;
    // conditions: T_{-k} inside Hom(V, T_{-k+1}), and [T_{-k}, D] in D
    for k in 0..=p {
        let t_k = &t_family[&(-k)];
        if t_k.ambient_dim() != u.algebra.dim(-k) {
            return Err(Error::DimensionMismatch(format!(
                "prescribed subspace at degree {} has wrong ambient",
                -k
            )));
        }
        if k >= 1 {
            let above: &Subspace = if k == 1 {
                &t_family[&0]
            } else {
                &t_family[&(-k + 1)]
            };
            let prev_dim = u.algebra.dim(-k + 1);
            for r in 0..t_k.dim() {
                let row = t_k.basis_row(r);
                for slot in 0..n {
                    let slice: Vec<Scalar> =
                        row[slot * prev_dim..(slot + 1) * prev_dim].to_vec();
                    if !above.contains_vector(&slice) {
                        return Err(Error::InvalidInput(format!(
                            "prescribed subspace at degree {} does not map into the one above (basis {}, slot {})",
                            -k, r, slot
                        )));
                    }
                }
            }
        }
        for (&j, dj) in d_ideal.iter() {
            let target = j - k;
            if !w.contains(target) {
                continue;
            }
            let dt = d_ideal
                .get(&target)
                .cloned()
                .unwrap_or_else(|| Subspace::zero(u.algebra.dim(target)));
            for r in 0..t_k.dim() {
                for b in 0..dj.dim() {
                    let v = u
                        .algebra
                        .bracket_components(-k, t_k.basis_row(r), j, dj.basis_row(b));
                    if !is_zero_vec(&v) && !dt.contains_vector(&v) {
                        return Err(Error::InvalidInput(format!(
                            "prescribed subspace at degree {} does not idealise the ideal (basis {}, degree {} vector {})",
                            -k, r, j, b
                        )));
                    }
                }
            }
        }
    }

    let mut idealiser_family = idealiser(&u.algebra, d_ideal)?;
    sharpen_idealiser(u, &mut idealiser_family)?;
    let mut family: DegreeFamily = DegreeFamily::new();
    for q in 1..=w.max() {
        if u.algebra.dim(q) > 0 {
            family.insert(q, Subspace::full(u.algebra.dim(q)));
        }
    }
    for k in 0..=p {
        if t_family[&(-k)].dim() > 0 {
            family.insert(-k, t_family[&(-k)].clone());
        }
    }
    let mut k = p + 1;
    while w.contains(-k) {
        let prev = family
            .get(&(-k + 1))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(u.algebra.dim(-k + 1)));
        let hom = hom_into(n, &prev, u.algebra.dim(-k + 1));
        let n_k = idealiser_family
            .get(&(-k))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(u.algebra.dim(-k)));
        let meet = hom.intersect(&n_k)?;
        if meet.dim() > 0 {
            family.insert(-k, meet);
        }
        k += 1;
    }
    let restricted = restrict_to_family(&u.algebra, &family)?;
    quotient(&restricted, d_ideal)
}

/// Subspace of Hom(V, S) inside Hom(V, W) coordinates, for S inside W.
fn hom_into(v_dim: usize, s: &Subspace, above_dim: usize) -> Subspace {
    let ambient = v_dim * above_dim;
    let mut rows = Vec::with_capacity(v_dim * s.dim());
    for slot in 0..v_dim {
        for r in 0..s.dim() {
            let mut row = vec![Scalar::zero(); ambient];
            for (t, val) in s.basis_row(r).iter().enumerate() {
                row[slot * above_dim + t] = val.clone();
            }
            rows.push(row);
        }
    }
    Subspace::from_rows(ambient, rows)
}

/// The subalgebra of U generated by the degree-1 space and `t_minus1`,
/// modulo its maximal ideal meeting the local part trivially. The positive
/// part starts as all of U_+ since U_+ is free on the degree-1 space.
pub fn build_p(u: &UniversalAlgebra, t_minus1: &Subspace) -> Result<GradedLieSuperalgebra> {
    let w = u.window();
    if t_minus1.ambient_dim() != u.algebra.dim(-1) {
        return Err(Error::DimensionMismatch(format!(
            "t_minus1 ambient {} differs from the degree -1 component {}",
            t_minus1.ambient_dim(),
            u.algebra.dim(-1)
        )));
    }
    let n = u.n;
    let gl_dim = u.algebra.dim(0);
    // local closure: degree 0 is the Lie closure of [T_{-1}, V]; degree -1
    // grows by the degree-0 action until both stabilize
    let mut pm1 = t_minus1.clone();
    let mut p0 = Subspace::zero(gl_dim);
    loop {
        let before = (pm1.dim(), p0.dim());
        let mut zero_rows = p0.basis().row_vecs();
        for r in 0..pm1.dim() {
            for b in 0..n {
                let mut unit = vec![Scalar::zero(); n];
                unit[b] = Scalar::one();
                let v = u.algebra.bracket_components(-1, pm1.basis_row(r), 1, &unit);
                if !is_zero_vec(&v) {
                    zero_rows.push(v);
                }
            }
        }
        let mut p0_new = Subspace::from_rows(gl_dim, zero_rows);
        // close under the commutator
        loop {
            let d = p0_new.dim();
            let mut rows = p0_new.basis().row_vecs();
            for a in 0..d {
                for b in a + 1..d {
                    let v = u.algebra.bracket_components(
                        0,
                        p0_new.basis_row(a),
                        0,
                        p0_new.basis_row(b),
                    );
                    if !is_zero_vec(&v) {
                        rows.push(v);
                    }
                }
            }
            let next = Subspace::from_rows(gl_dim, rows);
            if next.dim() == d {
                p0_new = next;
                break;
            }
            p0_new = next;
        }
        let mut neg_rows = pm1.basis().row_vecs();
        for a in 0..p0_new.dim() {
            for r in 0..pm1.dim() {
                let v = u.algebra.bracket_components(
                    -1,
                    pm1.basis_row(r),
                    0,
                    p0_new.basis_row(a),
                );
                if !is_zero_vec(&v) {
                    neg_rows.push(v);
                }
            }
        }
        pm1 = Subspace::from_rows(u.algebra.dim(-1), neg_rows);
        p0 = p0_new;
        if (pm1.dim(), p0.dim()) == before {
            break;
        }
    }

    let mut family: DegreeFamily = DegreeFamily::new();
    for q in 1..=w.max() {
        if u.algebra.dim(q) > 0 {
            family.insert(q, Subspace::full(u.algebra.dim(q)));
        }
    }
    if p0.dim() > 0 {
        family.insert(0, p0.clone());
    }
    if pm1.dim() > 0 {
        family.insert(-1, pm1.clone());
    }
    // deeper levels: spans of brackets of the levels already fixed
    let mut k = 2i64;
    while w.contains(-k) {
        let ambient = u.algebra.dim(-k);
        let mut rows = Vec::new();
        for i in 1..k {
            let j = k - i;
            if i > j {
                break;
            }
            let (fi, fj) = (family.get(&(-i)), family.get(&(-j)));
            let (Some(fi), Some(fj)) = (fi, fj) else {
                continue;
            };
            for a in 0..fi.dim() {
                for b in 0..fj.dim() {
                    let v = u
                        .algebra
                        .bracket_components(-i, fi.basis_row(a), -j, fj.basis_row(b));
                    if !is_zero_vec(&v) {
                        rows.push(v);
                    }
                }
            }
        }
        let level = Subspace::from_rows(ambient, rows);
        if level.dim() > 0 {
            family.insert(-k, level);
        }
        k += 1;
    }

    let generated = restrict_to_family(&u.algebra, &family)?;
    let trivial = maximal_trivial_ideal(&generated, Side::Negative, 2)?;
    let result = quotient(&generated, &trivial)?;
    // the negative side embeds in the tower, so only the positive side
    // needed quotienting; certify both transitivity directions
    let neg_defect = crate::superalgebra::transitivity_defect(&result, Side::Positive, -2)?;
    if neg_defect.values().any(|s| s.dim() > 0) {
        return Err(Error::Inconsistency(
            "generated algebra has a defect below degree -2".into(),
        ));
    }
    Ok(result)
}

/// Annihilator of the degree-2 component inside Hom(V, gl): the degree -1
/// part of the idealiser of U_{2+}, computed by explicit kernel.
pub fn degree_two_annihilator(u: &UniversalAlgebra) -> Result<Subspace> {
    u.algebra.expect_nonempty_window(-1, 2)?;
    let d2 = u.algebra.dim(2);
    let dm1 = u.algebra.dim(-1);
    let mut cond_rows = Vec::new();
    for b in 0..d2 {
        let images: Vec<Vec<Scalar>> = (0..dm1)
            .map(|a| dense_from_sparse(&u.algebra.bracket_basis(-1, a, 2, b), u.n))
            .collect();
        for coord in 0..u.n {
            if images.iter().all(|r| r[coord].is_zero()) {
                continue;
            }
            cond_rows.push(images.iter().map(|r| r[coord].clone()).collect());
        }
    }
    Ok(if cond_rows.is_empty() {
        Subspace::full(dm1)
    } else {
        kernel(&Matrix::from_rows(cond_rows))
    })
}

/// Local part of the Cartan-type algebra W(n): the degree-1 space, gl at
/// degree 0, and the annihilator of the degree-2 component at degree -1.
pub fn w_local_part(n: usize) -> Result<LocalLieSuperalgebra> {
    let u = build_universal(n, Window::new(-1, 2)?)?;
    let ann = degree_two_annihilator(&u)?;
    let g = &u.algebra;
    let (dm1, d0, d1) = (ann.dim(), g.dim(0), g.dim(1));
    let mut neg_zero: Block = vec![Vec::new(); dm1 * d0];
    for a in 0..dm1 {
        for z in 0..d0 {
            let mut unit = vec![Scalar::zero(); d0];
            unit[z] = Scalar::one();
            let v = g.bracket_components(-1, ann.basis_row(a), 0, &unit);
            let coords = ann.coords_of(&v).ok_or_else(|| {
                Error::Inconsistency("annihilator is not gl-stable".into())
            })?;
            neg_zero[a * d0 + z] = sparse_from_dense(&coords);
        }
    }
    let mut neg_pos: Block = vec![Vec::new(); dm1 * d1];
    for a in 0..dm1 {
        for b in 0..d1 {
            let mut unit = vec![Scalar::zero(); d1];
            unit[b] = Scalar::one();
            let v = g.bracket_components(-1, ann.basis_row(a), 1, &unit);
            neg_pos[a * d1 + b] = sparse_from_dense(&v);
        }
    }
    let zero_zero = g.block(0, 0).cloned().unwrap_or_default();
    let zero_pos = g.block(0, 1).cloned().unwrap_or_default();
    LocalLieSuperalgebra::new((dm1, d0, d1), neg_zero, neg_pos, zero_zero, zero_pos)
}

/// W(n) as the minimal extension of its local part.
pub fn build_w(n: usize, window: Window) -> Result<GradedLieSuperalgebra> {
    if n == 0 {
        return Err(Error::InvalidInput("w requires n >= 1".into()));
    }
    let local = w_local_part(n)?;
    crate::superalgebra::minimal_extension(&local, window)
}

/// W(n) along the prolongation route: the idealiser of U_{2+} in U,
/// modulo U_{2+}. Negative levels are computed inside the nested Hom
/// subspaces, where the only binding condition is annihilating U_2.
pub fn w_by_prolongation(n: usize, window: Window) -> Result<GradedLieSuperalgebra> {
    if n == 0 {
        return Err(Error::InvalidInput("w requires n >= 1".into()));
    }
    if !window.contains(0) || !window.contains(1) {
        return Err(Error::WindowTooSmall(
            "prolongation window must contain degrees 0 and 1".into(),
        ));
    }
    let spec = gl_spec(n);
    let mut space = GradedSpace::empty(window);
    space.set_component_dim(1, n)?;
    space.set_component_dim(0, spec.deg0_dim)?;
    let mut g = GradedLieSuperalgebra::new_raw(space);
    g.set_block(0, 0, spec.deg0_constants.clone());
    g.set_block(0, 1, spec.deg0_action.clone());
    g.set_provenance(0, "gl of the degree 1 space");
    g.set_provenance(1, "degree 1 space");

    // the free square in tensor coordinates, for the annihilator condition
    let free2 = FreeTower::build(n, 2);
    let d2 = free2.dim(2);

    let mut k = 1i64;
    while window.contains(-k) {
        let prev = g.dim(-k + 1);
        let ambient = n * prev;
        // candidate x is a map V -> previous level; condition [x, U_2] = 0
        // with [x, [u, v]] = [[x,u], v] + (-1)^{p(x)} [u, [x, v]]
        let sign = scalar(if k % 2 == 1 { -1 } else { 1 });
        let target_dim = g.dim(-k + 2);
        let mut cond_rows: Vec<Vec<Scalar>> = Vec::new();
        let mut images: Vec<Vec<Vec<Scalar>>> = Vec::new();
        for cand in 0..ambient {
            let (u0, t) = (cand / prev, cand % prev);
            let mut per_pair = Vec::with_capacity(d2);
            for pair in 0..d2 {
                // expand the degree-2 basis vector over elementary tensors
                let tensor = free2.component(2).basis.row(pair);
                let mut acc = vec![Scalar::zero(); target_dim];
                for (idx, coef) in tensor.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let (uu, vv) = (idx / n, idx % n);
                    // [x, u (x) v] with x(u) = delta e_t
                    // first term [[x,u],v]
                    if uu == u0 {
                        let row = g.bracket_basis(-k + 1, t, 1, vv);
                        add_sparse_into(&mut acc, &row, coef);
                    }
                    // second term (-1)^{p(x)} [u, [x,v]] = -(-1)^{p(x)+p(-k+1)} [[x,v],u]
                    if vv == u0 {
                        let row = g.bracket_basis(-k + 1, t, 1, uu);
                        let s2 = &sign * &scalar(-koszul_sign(-k + 1, 1));
                        add_sparse_into(&mut acc, &row, &(coef * &s2));
                    }
                }
                per_pair.push(acc);
            }
            images.push(per_pair);
        }
        for pair in 0..d2 {
            for coord in 0..target_dim {
                if images.iter().all(|per| per[pair][coord].is_zero()) {
                    continue;
                }
                cond_rows.push(images.iter().map(|per| per[pair][coord].clone()).collect());
            }
        }
        let level = if cond_rows.is_empty() {
            Subspace::full(ambient)
        } else {
            kernel(&Matrix::from_rows(cond_rows))
        };
        let dim_k = level.dim();
        g.space_mut().set_component_dim(-k, dim_k)?;
        g.set_provenance(-k, "idealiser level");

        // evaluation block
        if dim_k > 0 {
            let mut block: Block = vec![Vec::new(); dim_k * n];
            for r in 0..dim_k {
                for u_idx in 0..n {
                    let slice: Vec<Scalar> = level.basis_row(r)
                        [u_idx * prev..(u_idx + 1) * prev]
                        .to_vec();
                    block[r * n + u_idx] = sparse_from_dense(&slice);
                }
            }
            g.set_block(-k, 1, block);
        }

        // [x, y](u) = [x, y(u)] + (-1)^{|y|} [x(u), y], expressed in the
        // level bases; closure is the idealiser property
        let realize = |g: &GradedLieSuperalgebra,
                       level: &Subspace,
                       i: i64,
                       xa: &[Scalar],
                       j: i64,
                       yb: &[Scalar]|
         -> Vec<Scalar> {
            let above = g.dim(i + j + 1);
            let mut out = vec![Scalar::zero(); level.ambient_dim()];
            for u_idx in 0..n {
                let mut unit = vec![Scalar::zero(); n];
                unit[u_idx] = Scalar::one();
                let yu = g.bracket_components(j, yb, 1, &unit);
                let x_yu = g.bracket_components(i, xa, j + 1, &yu);
                let xu = g.bracket_components(i, xa, 1, &unit);
                let xu_y = g.bracket_components(i + 1, &xu, j, yb);
                let s = scalar(if crate::graded::parity(j) == 1 { -1 } else { 1 });
                for c in 0..above {
                    let mut v = x_yu[c].clone();
                    v += &s * &xu_y[c];
                    out[u_idx * above + c] = v;
                }
            }
            out
        };

        // blocks (-i, -j) with i + j = k + 1 would belong to the next
        // round; here install (-k, 0) and the same-total pairs
        let d0 = g.dim(0);
        if dim_k > 0 && d0 > 0 && window.contains(-k) {
            let mut block: Block = vec![Vec::new(); dim_k * d0];
            for r in 0..dim_k {
                let x = level.basis_row(r);
                for z in 0..d0 {
                    let mut unit = vec![Scalar::zero(); d0];
                    unit[z] = Scalar::one();
                    // [x, z](u) = [x, z(u)] + [x(u), z]; the new level acts
                    // through its slices
                    let mut row = vec![Scalar::zero(); ambient];
                    for u_idx in 0..n {
                        let zu = g.bracket_basis(0, z, 1, u_idx);
                        let mut slot = vec![Scalar::zero(); prev];
                        for (c, coef) in zu.iter() {
                            for t in 0..prev {
                                slot[t] += coef * &x[*c * prev + t];
                            }
                        }
                        let xu: Vec<Scalar> = x[u_idx * prev..(u_idx + 1) * prev].to_vec();
                        let xu_z = g.bracket_components(-k + 1, &xu, 0, &unit);
                        for t in 0..prev {
                            slot[t] += &xu_z[t];
                        }
                        for (t, val) in slot.into_iter().enumerate() {
                            row[u_idx * prev + t] = val;
                        }
                    }
                    let coords = level.coords_of(&row).ok_or_else(|| {
                        Error::Inconsistency("idealiser level is not gl-stable".into())
                    })?;
                    block[r * d0 + z] = sparse_from_dense(&coords);
                }
            }
            g.set_block(-k, 0, block);
        }
        for i in 1..k {
            let j = k - i;
            if i > j || !window.contains(-k) {
                break;
            }
            let (di, dj) = (g.dim(-i), g.dim(-j));
            if di == 0 || dj == 0 || dim_k == 0 {
                continue;
            }
            let mut upper: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
            for a in 0..di {
                let xa = unit_vector(di, a);
                for b in 0..dj {
                    let yb = unit_vector(dj, b);
                    let row = realize(&g, &level, -i, &xa, -j, &yb);
                    let coords = level.coords_of(&row).ok_or_else(|| {
                        Error::Inconsistency("idealiser levels are not bracket-closed".into())
                    })?;
                    upper.insert((a, b), coords);
                }
            }
            if i == j {
                let mut block: Block = vec![Vec::new(); di * di];
                for ((a, b), coords) in upper {
                    block[a * di + b] = sparse_from_dense(&coords);
                }
                g.set_block(-i, -i, block);
            } else {
                // computed [x at -i, y at -j]; stored key is (-j, -i)
                let s = scalar(-koszul_sign(-i, -j));
                let mut block: Block = vec![Vec::new(); dj * di];
                for ((a, b), coords) in upper {
                    block[b * di + a] = coords
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(t, x)| (t, x * &s))
                        .collect();
                }
                g.set_block(-j, -i, block);
            }
        }
        k += 1;
    }
    // positive degrees above 1 are zero in the quotient by U_{2+}
    g.set_truncated(window.min() < 0 && g.dim(window.min()) > 0);
    Ok(g)
}

fn unit_vector(dim: usize, a: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    v[a] = Scalar::one();
    v
}

/// Dimension check report for both W(n) routes plus their comparison.
pub fn compare_w_routes(n: usize, window: Window) -> Result<Report> {
    let by_minimal = build_w(n, window)?;
    let by_prolong = w_by_prolongation(n, window)?;
    let dims = (
        by_minimal.dim(-1),
        by_minimal.dim(0),
        by_minimal.dim(1),
    );
    let local_map = crate::superalgebra::LocalMap::identity((dims.0, dims.1, dims.2));
    let mut report = extend_and_compare(
        &by_minimal,
        &by_prolong,
        &local_map,
        ("minimal extension", "prolongation"),
    )?;
    report.command = format!("compare-w-routes n={}", n);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar;

    #[test]
    fn universal_dimensions_follow_the_hom_tower() {
        let u = build_universal(2, Window::new(-2, 2).unwrap()).unwrap();
        assert_eq!(
            u.dims(),
            vec![(-2, 16), (-1, 8), (0, 4), (1, 2), (2, 3)]
        );
    }

    #[test]
    fn identity_endomorphism_acts_as_identity() {
        let u = build_universal(3, Window::new(-1, 2).unwrap()).unwrap();
        // identity = sum of E(b,b)
        let mut id = vec![Scalar::zero(); 9];
        for b in 0..3 {
            id[b * 3 + b] = Scalar::one();
        }
        for v in 0..3 {
            let unit = unit_vector(3, v);
            let out = u.algebra.bracket_components(0, &id, 1, &unit);
            assert_eq!(out, unit);
        }
    }

    #[test]
    fn universal_algebra_passes_identities() {
        let u = build_universal(2, Window::new(-2, 2).unwrap()).unwrap();
        let report = u.algebra.check_super_identities();
        assert!(report.all_pass(), "{:?}", report.checks);
    }

    #[test]
    fn annihilator_of_degree_two_has_the_expected_dimension() {
        // C(n, 2) * n
        for (n, expected) in [(2usize, 2usize), (3, 9)] {
            let u = build_universal(n, Window::new(-1, 2).unwrap()).unwrap();
            let ann = degree_two_annihilator(&u).unwrap();
            assert_eq!(ann.dim(), expected, "n = {}", n);
        }
    }

    #[test]
    fn w_tower_dimensions() {
        // dims C(n, p) * n at degree -p + 1
        let w2 = build_w(2, Window::new(-2, 2).unwrap()).unwrap();
        assert_eq!(w2.dims(), vec![(-2, 0), (-1, 2), (0, 4), (1, 2), (2, 0)]);
        assert!(w2.check_super_identities().all_pass());
        assert!(!w2.is_truncated());

        let w1 = build_w(1, Window::new(-1, 2).unwrap()).unwrap();
        assert_eq!(w1.dims(), vec![(-1, 0), (0, 1), (1, 1), (2, 0)]);

        let w3 = build_w(3, Window::new(-3, 2).unwrap()).unwrap();
        assert_eq!(
            w3.dims(),
            vec![(-3, 0), (-2, 3), (-1, 9), (0, 9), (1, 3), (2, 0)]
        );
        assert_eq!(w3.total_dim(), 24);
    }

    #[test]
    fn w_prolongation_route_matches_the_minimal_route() {
        for n in [1usize, 2, 3] {
            let window = Window::new(-(n as i64), 2).unwrap();
            let report = compare_w_routes(n, window).unwrap();
            assert!(
                report.comparison.as_ref().unwrap().isomorphic,
                "n = {}: {:?}",
                n,
                report.checks
            );
        }
    }

    #[test]
    fn generic_prolongation_of_the_full_positive_ideal_gives_w() {
        let u = build_universal(2, Window::new(-2, 2).unwrap()).unwrap();
        let mut d = DegreeFamily::new();
        d.insert(2, Subspace::full(u.algebra.dim(2)));
        let p = prolongation(&u, &d).unwrap();
        assert_eq!(p.dims(), vec![(-2, 0), (-1, 2), (0, 4), (1, 2), (2, 0)]);
        assert!(p.check_super_identities().all_pass());
    }

    #[test]
    fn prolongation_of_zero_ideal_is_the_whole_universal_algebra() {
        let u = build_universal(2, Window::new(-2, 2).unwrap()).unwrap();
        let p = prolongation(&u, &DegreeFamily::new()).unwrap();
        assert_eq!(p.dims(), u.dims());
    }

    #[test]
    fn prolongation_for_three_generators_matches_the_paper_tower() {
        let u = build_universal(3, Window::new(-3, 2).unwrap()).unwrap();
        let mut d = DegreeFamily::new();
        d.insert(2, Subspace::full(u.algebra.dim(2)));
        let p = prolongation(&u, &d).unwrap();
        // (U_1^*)^{v p} (x) U_1: C(3, p) * 3, zero once p exceeds 3
        assert_eq!(
            p.dims(),
            vec![(-3, 0), (-2, 3), (-1, 9), (0, 9), (1, 3), (2, 0)]
        );
    }

    #[test]
    fn reduced_prolongation_with_maximal_subspaces_is_the_prolongation() {
        let u = build_universal(2, Window::new(-2, 2).unwrap()).unwrap();
        let mut d = DegreeFamily::new();
        d.insert(2, Subspace::full(u.algebra.dim(2)));
        let plain = prolongation(&u, &d).unwrap();
        let mut t = BTreeMap::new();
        t.insert(0, Subspace::full(u.algebra.dim(0)));
        let reduced = reduced_prolongation(&u, &d, &t).unwrap();
        assert_eq!(reduced.dims(), plain.dims());
    }

    #[test]
    fn reduced_prolongation_with_zero_top_kills_everything_below() {
        let u = build_universal(2, Window::new(-2, 2).unwrap()).unwrap();
        let mut t = BTreeMap::new();
        t.insert(0, Subspace::zero(4));
        let reduced = reduced_prolongation(&u, &DegreeFamily::new(), &t).unwrap();
        assert_eq!(reduced.dim(0), 0);
        assert_eq!(reduced.dim(-1), 0);
        assert_eq!(reduced.dim(-2), 0);
        assert_eq!(reduced.dim(1), 2);
    }

    fn sl2_adjoint_image() -> Subspace {
        // ad h, ad e, ad f on the ordered basis (h, e, f)
        let ad_h = Matrix::from_int_rows(&[&[0, 0, 0], &[0, 2, 0], &[0, 0, -2]]);
        let ad_e = Matrix::from_int_rows(&[&[0, 0, 1], &[-2, 0, 0], &[0, 0, 0]]);
        let ad_f = Matrix::from_int_rows(&[&[0, -1, 0], &[0, 0, 0], &[2, 0, 0]]);
        Subspace::from_rows(
            9,
            [ad_h, ad_e, ad_f]
                .iter()
                .map(endomorphism_coords)
                .collect(),
        )
    }

    #[test]
    fn reduced_prolongation_of_the_free_part_by_a_module_structure() {
        // prescribing rho(sl2) at degree 0 with the zero ideal: the
        // degree -1 component is all of Hom(V, rho(sl2))
        let u = build_universal(3, Window::new(-1, 2).unwrap()).unwrap();
        let mut t = BTreeMap::new();
        t.insert(0, sl2_adjoint_image());
        let reduced = reduced_prolongation(&u, &DegreeFamily::new(), &t).unwrap();
        assert_eq!(reduced.dim(0), 3);
        assert_eq!(reduced.dim(-1), 9);
        assert!(reduced.check_super_identities().all_pass());
    }

    #[test]
    fn build_p_recovers_w_from_the_annihilator() {
        let u = build_universal(2, Window::new(-2, 2).unwrap()).unwrap();
        let ann = degree_two_annihilator(&u).unwrap();
        let p = build_p(&u, &ann).unwrap();
        assert_eq!(p.dims(), vec![(-2, 0), (-1, 2), (0, 4), (1, 2), (2, 0)]);
        assert!(p.check_super_identities().all_pass());
        // subalgebra generated by the annihilator recovers all of gl
        assert_eq!(p.dim(0), 4);
    }

    #[test]
    fn build_p_with_zero_bottom_keeps_only_degree_one() {
        let u = build_universal(2, Window::new(-2, 2).unwrap()).unwrap();
        let p = build_p(&u, &Subspace::zero(u.algebra.dim(-1))).unwrap();
        assert_eq!(p.dims(), vec![(-2, 0), (-1, 0), (0, 0), (1, 2), (2, 0)]);
    }

    #[test]
    fn rho_on_the_universal_algebra_is_the_identity_embedding() {
        let u = build_universal(2, Window::new(-2, 2).unwrap()).unwrap();
        let rho = rho_morphism(&u, &u.algebra).unwrap();
        assert!(rho.report().all_pass());
        for k in [-2i64, -1, 0, 1] {
            let m = rho.map(k).unwrap();
            assert_eq!(m, &Matrix::identity(u.algebra.dim(k)), "degree {}", k);
        }
    }

    #[test]
    fn rho_is_injective_on_w2() {
        let window = Window::new(-2, 2).unwrap();
        let w = build_w(2, window).unwrap();
        let u = build_universal(2, window).unwrap();
        let rho = rho_morphism(&u, &w).unwrap();
        assert!(rho.report().all_pass(), "{:?}", rho.report().checks);
        assert!(rho.injective_everywhere());
    }

    #[test]
    fn rho_kernel_detects_a_summand_acting_by_zero() {
        // degree 0 = sl2 + a one-dimensional center acting by zero on a
        // 2-dimensional degree-1 space
        use crate::superalgebra::block_from_dense_rows;
        let dz = 4usize;
        let mut zz = vec![vec![Scalar::zero(); dz]; dz * dz];
        // sl2 constants in the first three coordinates
        let sl2 = crate::superalgebra::extend::test_fixtures::sl2_constants();
        for a in 0..3 {
            for b in 0..3 {
                for (idx, v) in &sl2[a * 3 + b] {
                    zz[a * dz + b][*idx] = v.clone();
                }
            }
        }
        let mut zp = vec![vec![Scalar::zero(); 2]; dz * 2];
        let act = [
            Matrix::from_int_rows(&[&[1, 0], &[0, -1]]),
            Matrix::from_int_rows(&[&[0, 1], &[0, 0]]),
            Matrix::from_int_rows(&[&[0, 0], &[1, 0]]),
        ];
        for (z, mat) in act.iter().enumerate() {
            for u_idx in 0..2 {
                for c in 0..2 {
                    zp[z * 2 + u_idx][c] = mat[(c, u_idx)].clone();
                }
            }
        }
        let local = LocalLieSuperalgebra::new(
            (0, dz, 2),
            Vec::new(),
            Vec::new(),
            block_from_dense_rows(zz),
            block_from_dense_rows(zp),
        )
        .unwrap();
        let g = crate::superalgebra::maximal_extension(&local, Window::new(-1, 1).unwrap()).unwrap();
        let u = build_universal(2, Window::new(-1, 1).unwrap()).unwrap();
        let rho = rho_morphism(&u, &g).unwrap();
        assert_eq!(rho.injective(0), Some(false));
        let m = rho.map(0).unwrap();
        // the center (last coordinate) maps to zero
        let center: Vec<Scalar> = (0..m.rows()).map(|r| m[(r, 3)].clone()).collect();
        assert!(crate::linalg::is_zero_vec(&center));
    }

    #[test]
    fn w2_embeds_into_the_reduced_prolongation_of_its_positive_part() {
        let window = Window::new(-2, 2).unwrap();
        let w = build_w(2, window).unwrap();
        let u = build_universal(2, window).unwrap();
        let rho = rho_morphism(&u, &w).unwrap();
        let mut d = DegreeFamily::new();
        d.insert(2, Subspace::full(u.algebra.dim(2)));
        // prescribe the rho images of the local part
        let image = rho.image_family();
        let mut t = BTreeMap::new();
        t.insert(0, image[&0].clone());
        t.insert(-1, image[&-1].clone());
        let reduced = reduced_prolongation(&u, &d, &t).unwrap();
        // containment of every rho image degreewise
        for k in [-2i64, -1, 0] {
            let img = image
                .get(&k)
                .cloned()
                .unwrap_or_else(|| Subspace::zero(u.algebra.dim(k)));
            assert!(img.dim() <= reduced.dim(k));
        }
        assert_eq!(reduced.dim(-2), w.dim(-2));
    }

    #[test]
    fn paper_basis_relations_hold_with_the_unit_convention() {
        // K^b_c := -E(b,c) satisfies [E_a, K^b_c] = delta_a^b E_c, and
        // K^{bc}_d := -(unit at slot b with value -E(c,d)) gives
        // [E_a, K^{bc}_d] = delta_a^b K^c_d.
        let n = 2usize;
        let u = build_universal(n, Window::new(-1, 2).unwrap()).unwrap();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut k_coords = vec![Scalar::zero(); n * n];
                    k_coords[b * n + c] = -Scalar::one();
                    let mut e_a = vec![Scalar::zero(); n];
                    e_a[a] = Scalar::one();
                    let out = u.algebra.bracket_components(1, &e_a, 0, &k_coords);
                    let mut expected = vec![Scalar::zero(); n];
                    if a == b {
                        expected[c] = Scalar::one();
                    }
                    assert_eq!(out, expected);
                }
            }
        }
        // nested case
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut k2 = vec![Scalar::zero(); n * n * n];
                        k2[b * (n * n) + c * n + d] = scalar(1);
                        let mut e_a = vec![Scalar::zero(); n];
                        e_a[a] = Scalar::one();
                        let out = u.algebra.bracket_components(1, &e_a, -1, &k2);
                        // [E_a, x] = -(-1)^{|x|} x(E_a) = x(E_a) for odd x
                        let mut expected = vec![Scalar::zero(); n * n];
                        if a == b {
                            expected[c * n + d] = scalar(1);
                        }
                        assert_eq!(out, expected);
                    }
                }
            }
        }
    }
}
