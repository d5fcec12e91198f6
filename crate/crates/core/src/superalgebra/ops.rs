//! Subalgebras, ideals, quotients, transitivity analysis and comparisons.
//!
//! Degreewise subspace families are the common currency: a family maps a
//! degree to a subspace of that component (absent degrees mean zero).
//! Everything is certified within the window: bracket pairs whose target
//! degree leaves the window cannot be inspected and are skipped.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::graded::GradedVector;
use crate::linalg::{
    dense_from_sparse, is_zero_vec, kernel, rref_with_transcript, sparse_from_dense, Matrix,
    Scalar, Subspace,
};
use crate::report::{Check, Comparison, Report};
use crate::Result;
use num_traits::Zero;

use super::{Block, GradedLieSuperalgebra};

pub type DegreeFamily = BTreeMap<i64, Subspace>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    /// Probe with the degree -1 component (negative transitivity).
    Negative,
    /// Probe with the degree +1 component (positive transitivity).
    Positive,
}

fn family_dim(fam: &DegreeFamily) -> usize {
    fam.values().map(|s| s.dim()).sum()
}

fn family_subspace<'a>(fam: &'a DegreeFamily, g: &GradedLieSuperalgebra, k: i64) -> Subspace {
    fam.get(&k)
        .cloned()
        .unwrap_or_else(|| Subspace::zero(g.dim(k)))
}

/// Smallest bracket-closed span containing the seeds, computed by fixpoint
/// iteration over all in-window degree pairs.
pub fn subalgebra_generated(
    g: &GradedLieSuperalgebra,
    seeds: &[GradedVector],
) -> Result<DegreeFamily> {
    let mut fam = seeds_family(g, seeds)?;
    loop {
        let before = family_dim(&fam);
        let mut additions: BTreeMap<i64, Vec<Vec<Scalar>>> = BTreeMap::new();
        let degrees: Vec<i64> = fam.keys().copied().collect();
        for &i in &degrees {
            for &j in &degrees {
                if i > j || !g.window().contains(i + j) {
                    continue;
                }
                let (fi, fj) = (fam[&i].clone(), fam[&j].clone());
                for a in 0..fi.dim() {
                    for b in 0..fj.dim() {
                        let v = g.bracket_components(i, fi.basis_row(a), j, fj.basis_row(b));
                        if !is_zero_vec(&v) {
                            additions.entry(i + j).or_default().push(v);
                        }
                    }
                }
            }
        }
        merge_additions(g, &mut fam, additions);
        if family_dim(&fam) == before {
            return Ok(fam);
        }
    }
}

/// Smallest bracket-absorbing span containing the seeds.
pub fn ideal_generated(g: &GradedLieSuperalgebra, seeds: &[GradedVector]) -> Result<DegreeFamily> {
    let mut fam = seeds_family(g, seeds)?;
    loop {
        let before = family_dim(&fam);
        let mut additions: BTreeMap<i64, Vec<Vec<Scalar>>> = BTreeMap::new();
        let degrees: Vec<i64> = fam.keys().copied().collect();
        for i in g.window().iter() {
            if g.dim(i) == 0 {
                continue;
            }
            for &j in &degrees {
                if !g.window().contains(i + j) {
                    continue;
                }
                let fj = fam[&j].clone();
                for a in 0..g.dim(i) {
                    for b in 0..fj.dim() {
                        let row = fj.basis_row(b);
                        let v = g.bracket_components(i, &unit_vec(g.dim(i), a), j, row);
                        if !is_zero_vec(&v) {
                            additions.entry(i + j).or_default().push(v);
                        }
                    }
                }
            }
        }
        merge_additions(g, &mut fam, additions);
        if family_dim(&fam) == before {
            return Ok(fam);
        }
    }
}

fn unit_vec(dim: usize, a: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    v[a] = num_traits::One::one();
    v
}

fn seeds_family(g: &GradedLieSuperalgebra, seeds: &[GradedVector]) -> Result<DegreeFamily> {
    let mut rows: BTreeMap<i64, Vec<Vec<Scalar>>> = BTreeMap::new();
    for s in seeds {
        let Some(k) = s.is_homogeneous() else {
            if s.is_zero() {
                continue;
            }
            return Err(Error::InvalidInput("seeds must be homogeneous".into()));
        };
        rows.entry(k).or_default().push(s.component(k).unwrap().to_vec());
    }
    let mut fam = DegreeFamily::new();
    for (k, r) in rows {
        let s = Subspace::from_rows(g.dim(k), r);
        if s.dim() > 0 {
            fam.insert(k, s);
        }
    }
    Ok(fam)
}

fn merge_additions(
    g: &GradedLieSuperalgebra,
    fam: &mut DegreeFamily,
    additions: BTreeMap<i64, Vec<Vec<Scalar>>>,
) {
    for (k, rows) in additions {
        let mut all = rows;
        if let Some(existing) = fam.get(&k) {
            all.extend(existing.basis().row_vecs());
        }
        let s = Subspace::from_rows(g.dim(k), all);
        if s.dim() > 0 {
            fam.insert(k, s);
        }
    }
}

/// First basis pair whose bracket leaves the family, if any. Degrees whose
/// bracket target is outside the window cannot be checked and are skipped.
pub fn ideal_witness(g: &GradedLieSuperalgebra, fam: &DegreeFamily) -> Option<String> {
    for i in g.window().iter() {
        if g.dim(i) == 0 {
            continue;
        }
        for (&j, fj) in fam.iter() {
            let target = i + j;
            if !g.window().contains(target) {
                continue;
            }
            let ft = family_subspace(fam, g, target);
            for a in 0..g.dim(i) {
                for b in 0..fj.dim() {
                    let v = g.bracket_components(i, &unit_vec(g.dim(i), a), j, fj.basis_row(b));
                    if !is_zero_vec(&v) && !ft.contains_vector(&v) {
                        return Some(format!(
                            "bracket of basis {} at degree {} with family vector {} at degree {} leaves the family at degree {}",
                            a, i, b, j, target
                        ));
                    }
                }
            }
        }
    }
    None
}

/// Quotient by a verified ideal. Coset representatives are the standard
/// coordinates away from the ideal's pivot columns, so the induced
/// constants are read off after reduction.
pub fn quotient(g: &GradedLieSuperalgebra, fam: &DegreeFamily) -> Result<GradedLieSuperalgebra> {
    if let Some(w) = ideal_witness(g, fam) {
        return Err(Error::NotAnIdeal(w));
    }
    let window = g.window();
    let mut reps: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut space = crate::graded::GradedSpace::empty(window);
    for k in window.iter() {
        let d = g.dim(k);
        if d == 0 {
            continue;
        }
        let ideal_k = family_subspace(fam, g, k);
        let pivots: std::collections::BTreeSet<usize> = ideal_k.pivots().iter().copied().collect();
        let keep: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
        let labels: Vec<String> = keep.iter().map(|&c| g.space().labels(k)[c].clone()).collect();
        space.set_component(k, labels)?;
        reps.insert(k, keep);
    }
    let mut out = GradedLieSuperalgebra::new_raw(space);
    for k in window.iter() {
        if out.dim(k) > 0 {
            out.set_provenance(k, "quotient by ideal");
        }
    }
    out.set_truncated(g.is_truncated());
    let degrees: Vec<i64> = window.iter().filter(|&k| out.dim(k) > 0).collect();
    for &i in &degrees {
        for &j in &degrees {
            if i > j || !window.contains(i + j) {
                continue;
            }
            let ri = &reps[&i];
            let rj = &reps[&j];
            let target = i + j;
            let ideal_t = family_subspace(fam, g, target);
            let rt = reps.get(&target);
            let mut block: Block = vec![Vec::new(); ri.len() * rj.len()];
            for (ai, &a) in ri.iter().enumerate() {
                for (bi, &b) in rj.iter().enumerate() {
                    let dense = dense_from_sparse(&g.bracket_basis(i, a, j, b), g.dim(target));
                    let reduced = ideal_t.reduce(&dense);
                    let coords: Vec<Scalar> = match rt {
                        Some(rt) => rt.iter().map(|&c| reduced[c].clone()).collect(),
                        None => Vec::new(),
                    };
                    block[ai * rj.len() + bi] = sparse_from_dense(&coords);
                }
            }
            out.set_block(i, j, block);
        }
    }
    Ok(out)
}

/// Defect tower of transitivity: for the negative side,
/// D_n = {x in G_n | [G_{-1}, x] = 0} and D_{k+1} = {x | [G_{-1}, x] in D_k};
/// the algebra is negatively n-transitive iff the tower vanishes. The
/// positive side is the mirror image probed by G_{+1}.
pub fn transitivity_defect(
    g: &GradedLieSuperalgebra,
    side: Side,
    n: i64,
) -> Result<DegreeFamily> {
    match side {
        Side::Negative => defect_upward(g, n),
        Side::Positive => {
            let flipped = super::extend::flip(g);
            let fam = defect_upward(&flipped, -n)?;
            Ok(fam.into_iter().map(|(k, s)| (-k, s)).collect())
        }
    }
}

fn defect_upward(g: &GradedLieSuperalgebra, n: i64) -> Result<DegreeFamily> {
    let w = g.window();
    if n > w.max() {
        // nothing at or above the start degree inside the window
        return Ok(DegreeFamily::new());
    }
    let probe = if w.contains(-1) { g.dim(-1) } else { 0 };
    if probe > 0 && !w.contains(n - 1) {
        return Err(Error::WindowTooSmall(format!(
            "defect tower at degree {} needs degree {} in window",
            n,
            n - 1
        )));
    }
    let mut fam = DegreeFamily::new();
    let mut below = Subspace::zero(g.dim(n - 1));
    for k in n..=w.max() {
        let d = g.dim(k);
        if d == 0 {
            below = Subspace::zero(d);
            continue;
        }
        let mut cond_rows: Vec<Vec<Scalar>> = Vec::new();
        for a in 0..probe {
            // residual of [e_{-1,a}, x] modulo the previous defect layer
            let images: Vec<Vec<Scalar>> = (0..d)
                .map(|c| {
                    below.reduce(&dense_from_sparse(
                        &g.bracket_basis(-1, a, k, c),
                        g.dim(k - 1),
                    ))
                })
                .collect();
            for coord in 0..g.dim(k - 1) {
                if images.iter().all(|r| r[coord].is_zero()) {
                    continue;
                }
                cond_rows.push(images.iter().map(|r| r[coord].clone()).collect());
            }
        }
        let dk = if cond_rows.is_empty() {
            Subspace::full(d)
        } else {
            kernel(&Matrix::from_rows(cond_rows))
        };
        below = dk.clone();
        if dk.dim() > 0 {
            fam.insert(k, dk);
        }
    }
    Ok(fam)
}

/// The defect tower beyond the given degree, certified a posteriori to be
/// an ideal; for a locally generated algebra this is the maximal ideal
/// meeting the degrees below `beyond` trivially on that side.
pub fn maximal_trivial_ideal(
    g: &GradedLieSuperalgebra,
    side: Side,
    beyond: i64,
) -> Result<DegreeFamily> {
    let fam = transitivity_defect(g, side, beyond)?;
    if let Some(w) = ideal_witness(g, &fam) {
        return Err(Error::NotAnIdeal(format!(
            "defect tower is not an ideal (window too small to certify): {}",
            w
        )));
    }
    Ok(fam)
}

/// Idealiser N = {x | [x, d] in D for all d in D}, computed degreewise by
/// linear conditions. Conditions whose bracket target leaves the window
/// are skipped, so the result is certified within the window.
pub fn idealiser(g: &GradedLieSuperalgebra, fam: &DegreeFamily) -> Result<DegreeFamily> {
    let w = g.window();
    let mut out = DegreeFamily::new();
    for m in w.iter() {
        let d = g.dim(m);
        if d == 0 {
            continue;
        }
        let mut cond_rows: Vec<Vec<Scalar>> = Vec::new();
        for (&j, dj) in fam.iter() {
            let target = m + j;
            if !w.contains(target) {
                continue;
            }
            let dt = family_subspace(fam, g, target);
            for b in 0..dj.dim() {
                let images: Vec<Vec<Scalar>> = (0..d)
                    .map(|a| {
                        dt.reduce(&g.bracket_components(
                            m,
                            &unit_vec(d, a),
                            j,
                            dj.basis_row(b),
                        ))
                    })
                    .collect();
                for coord in 0..g.dim(target) {
                    if images.iter().all(|r| r[coord].is_zero()) {
                        continue;
                    }
                    cond_rows.push(images.iter().map(|r| r[coord].clone()).collect());
                }
            }
        }
        let nm = if cond_rows.is_empty() {
            Subspace::full(d)
        } else {
            kernel(&Matrix::from_rows(cond_rows))
        };
        if nm.dim() > 0 {
            out.insert(m, nm);
        }
    }
    Ok(out)
}

/// Restricts the algebra to a bracket-closed family, with the family's
/// echelon bases as the new coordinates.
pub fn restrict_to_family(
    g: &GradedLieSuperalgebra,
    fam: &DegreeFamily,
) -> Result<GradedLieSuperalgebra> {
    let window = g.window();
    let mut space = crate::graded::GradedSpace::empty(window);
    for (&k, s) in fam.iter() {
        if s.ambient_dim() != g.dim(k) {
            return Err(Error::DimensionMismatch(format!(
                "family at degree {} has ambient {} but component has dimension {}",
                k,
                s.ambient_dim(),
                g.dim(k)
            )));
        }
        space.set_component_dim(k, s.dim())?;
    }
    let mut out = GradedLieSuperalgebra::new_raw(space);
    out.set_truncated(g.is_truncated());
    let degrees: Vec<i64> = fam.keys().copied().filter(|&k| fam[&k].dim() > 0).collect();
    for &i in &degrees {
        for &j in &degrees {
            if i > j || !window.contains(i + j) {
                continue;
            }
            let (fi, fj) = (&fam[&i], &fam[&j]);
            if out.dim(i + j) == 0 {
                // bracket must vanish for the family to be closed
                for a in 0..fi.dim() {
                    for b in 0..fj.dim() {
                        let v = g.bracket_components(i, fi.basis_row(a), j, fj.basis_row(b));
                        if !is_zero_vec(&v) {
                            return Err(Error::NotASubalgebra(format!(
                                "bracket at degrees ({}, {}) leaves the family",
                                i, j
                            )));
                        }
                    }
                }
                out.set_block(i, j, vec![Vec::new(); fi.dim() * fj.dim()]);
                continue;
            }
            let ft = &fam[&(i + j)];
            let mut block: Block = vec![Vec::new(); fi.dim() * fj.dim()];
            for a in 0..fi.dim() {
                for b in 0..fj.dim() {
                    let v = g.bracket_components(i, fi.basis_row(a), j, fj.basis_row(b));
                    let coords = ft.coords_of(&v).ok_or_else(|| {
                        Error::NotASubalgebra(format!(
                            "bracket of family vectors ({}, {}) at degrees ({}, {}) leaves the family",
                            a, b, i, j
                        ))
                    })?;
                    block[a * fj.dim() + b] = sparse_from_dense(&coords);
                }
            }
            out.set_block(i, j, block);
        }
    }
    for (&k, _) in fam.iter() {
        out.set_provenance(k, "subalgebra restriction");
    }
    Ok(out)
}

/// Degreewise linear map between two algebras on the local degrees;
/// matrices send source coordinates to target coordinates.
#[derive(Clone, Debug)]
pub struct LocalMap {
    pub neg: Matrix,
    pub zero: Matrix,
    pub pos: Matrix,
}

impl LocalMap {
    pub fn identity(dims: (usize, usize, usize)) -> Self {
        LocalMap {
            neg: Matrix::identity(dims.0),
            zero: Matrix::identity(dims.1),
            pos: Matrix::identity(dims.2),
        }
    }
}

/// Extends a local isomorphism of two locally generated algebras degree by
/// degree and verifies it is a bracket-preserving bijection on the whole
/// window. The result reports per-degree dimensions of both sides and one
/// check per obstruction; `isomorphic` is the conjunction.
pub fn extend_and_compare(
    a: &GradedLieSuperalgebra,
    b: &GradedLieSuperalgebra,
    local_map: &LocalMap,
    names: (&str, &str),
) -> Result<Report> {
    let w = a.window();
    let mut report = Report::new("compare-locally-generated");
    let mut isomorphic = true;

    if b.window() != w {
        report.push_check(Check::fail("windows-match", "windows differ"));
        finish_comparison(&mut report, a, b, names, false);
        return Ok(report);
    }

    // dimensions must agree degreewise
    let dim_mismatch: Vec<String> = w
        .iter()
        .filter(|&k| a.dim(k) != b.dim(k))
        .map(|k| format!("degree {}: {} vs {}", k, a.dim(k), b.dim(k)))
        .collect();
    if !dim_mismatch.is_empty() {
        report.push_check(Check::fail("dimensions-match", dim_mismatch.join("; ")));
        finish_comparison(&mut report, a, b, names, false);
        return Ok(report);
    }
    report.push_check(Check::pass("dimensions-match"));

    let mut maps: BTreeMap<i64, Matrix> = BTreeMap::new();
    maps.insert(-1, local_map.neg.clone());
    maps.insert(0, local_map.zero.clone());
    maps.insert(1, local_map.pos.clone());
    for (k, m) in &maps {
        if m.rows() != b.dim(*k) || m.cols() != a.dim(*k) {
            return Err(Error::DimensionMismatch(format!(
                "local map at degree {} has shape {}x{}, expected {}x{}",
                k,
                m.rows(),
                m.cols(),
                b.dim(*k),
                a.dim(*k)
            )));
        }
        if m.rank() != a.dim(*k) {
            report.push_check(Check::fail(
                "local-map-bijective",
                format!("degree {} map is singular", k),
            ));
            finish_comparison(&mut report, a, b, names, false);
            return Ok(report);
        }
    }

    // extend upward and downward through the generating brackets
    for dir in [1i64, -1] {
        let mut k = dir;
        loop {
            k += dir;
            if !w.contains(k) {
                break;
            }
            let d = a.dim(k);
            if d == 0 {
                maps.insert(k, Matrix::zeros(0, 0));
                continue;
            }
            let prev = k - dir;
            // spanning rows [e_{dir,a}, e_{prev,c}] in a-coordinates
            let d1 = a.dim(dir);
            let dp = a.dim(prev);
            let mut rows = Vec::with_capacity(d1 * dp);
            for g1 in 0..d1 {
                for c in 0..dp {
                    rows.push(dense_from_sparse(&a.bracket_basis(dir, g1, prev, c), d));
                }
            }
            let (_, pivots, transcript) = rref_with_transcript(rows, d);
            if pivots.len() < d || pivots.iter().enumerate().any(|(i, &p)| i != p) {
                report.push_check(Check::fail(
                    "locally-generated",
                    format!("degree {} is not spanned by brackets with degree {}", k, dir),
                ));
                finish_comparison(&mut report, a, b, names, false);
                return Ok(report);
            }
            // transcript row t expresses the standard basis vector e_t
            let phi_gen = maps[&dir].clone();
            let phi_prev = maps[&prev].clone();
            let mut phi = Matrix::zeros(b.dim(k), d);
            for t in 0..d {
                let mut acc = vec![Scalar::zero(); b.dim(k)];
                for nu in 0..d1 * dp {
                    let coeff = transcript[(t, nu)].clone();
                    if coeff.is_zero() {
                        continue;
                    }
                    let img_gen = phi_gen.mul_vec(&unit_vec(d1, nu / dp));
                    let img_prev = phi_prev.mul_vec(&unit_vec(dp, nu % dp));
                    let v = b.bracket_components(dir, &img_gen, prev, &img_prev);
                    for (i, x) in v.iter().enumerate() {
                        acc[i] += &coeff * x;
                    }
                }
                for (i, x) in acc.into_iter().enumerate() {
                    phi[(i, t)] = x;
                }
            }
            if phi.rank() < d {
                report.push_check(Check::fail(
                    "map-bijective",
                    format!("induced map at degree {} is singular", k),
                ));
                finish_comparison(&mut report, a, b, names, false);
                return Ok(report);
            }
            maps.insert(k, phi);
        }
    }
    report.push_check(Check::pass("locally-generated"));
    report.push_check(Check::pass("map-bijective"));

    // verify the morphism property on every in-window basis pair
    let mut witness = None;
    'outer: for i in w.iter() {
        for j in w.iter().filter(|&j| j >= i) {
            if !w.contains(i + j) || a.dim(i) == 0 || a.dim(j) == 0 {
                continue;
            }
            let phi_i = &maps[&i];
            let phi_j = &maps[&j];
            let phi_t = &maps[&(i + j)];
            for x in 0..a.dim(i) {
                for y in 0..a.dim(j) {
                    let lhs = phi_t.mul_vec(&dense_from_sparse(
                        &a.bracket_basis(i, x, j, y),
                        a.dim(i + j),
                    ));
                    let rhs = b.bracket_components(
                        i,
                        &phi_i.mul_vec(&unit_vec(a.dim(i), x)),
                        j,
                        &phi_j.mul_vec(&unit_vec(a.dim(j), y)),
                    );
                    if lhs != rhs {
                        witness = Some(format!(
                            "degrees ({}, {}) indices ({}, {}): images of the bracket differ",
                            i, j, x, y
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    match witness {
        None => report.push_check(Check::pass("bracket-preserving")),
        Some(wit) => {
            isomorphic = false;
            report.push_check(Check::fail("bracket-preserving", wit));
        }
    }
    finish_comparison(&mut report, a, b, names, isomorphic);
    Ok(report)
}

fn finish_comparison(
    report: &mut Report,
    a: &GradedLieSuperalgebra,
    b: &GradedLieSuperalgebra,
    names: (&str, &str),
    isomorphic: bool,
) {
    report.comparison = Some(Comparison {
        left_name: names.0.to_string(),
        right_name: names.1.to_string(),
        left: a
            .dims()
            .into_iter()
            .map(|(degree, dim)| crate::report::DimensionEntry { degree, dim })
            .collect(),
        right: b
            .dims()
            .into_iter()
            .map(|(degree, dim)| crate::report::DimensionEntry { degree, dim })
            .collect(),
        isomorphic,
    });
    report.dimensions = report.comparison.as_ref().unwrap().left.clone();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{GradedSpace, Window};
    use crate::linalg::scalar;
    use crate::superalgebra::extend::test_fixtures::{abelian_local, sl2_constants};
    use crate::superalgebra::{free_lie_super, LocalLieSuperalgebra};

    fn sl2_at_zero() -> GradedLieSuperalgebra {
        let w = Window::new(-1, 1).unwrap();
        let mut space = GradedSpace::empty(w);
        space.set_component_dim(0, 3).unwrap();
        let mut g = GradedLieSuperalgebra::new_raw(space);
        g.set_block(0, 0, sl2_constants());
        g
    }

    #[test]
    fn sl2_identities_hold() {
        assert!(sl2_at_zero().check_super_identities().all_pass());
    }

    #[test]
    fn subalgebra_from_full_basis_is_everything() {
        let g = sl2_at_zero();
        let seeds: Vec<GradedVector> = (0..3)
            .map(|i| GradedVector::basis_vector(0, i, 3))
            .collect();
        let fam = subalgebra_generated(&g, &seeds).unwrap();
        assert_eq!(family_dim(&fam), 3);
    }

    #[test]
    fn central_element_generates_one_dimensional_subalgebra() {
        // abelian 2-dim algebra at degree 0
        let w = Window::new(-1, 1).unwrap();
        let mut space = GradedSpace::empty(w);
        space.set_component_dim(0, 2).unwrap();
        let mut g = GradedLieSuperalgebra::new_raw(space);
        g.set_block(0, 0, vec![Vec::new(); 4]);
        let fam =
            subalgebra_generated(&g, &[GradedVector::basis_vector(0, 0, 2)]).unwrap();
        assert_eq!(family_dim(&fam), 1);
    }

    #[test]
    fn zero_seeds_generate_zero_ideal() {
        let g = sl2_at_zero();
        let fam = ideal_generated(&g, &[]).unwrap();
        assert_eq!(family_dim(&fam), 0);
    }

    #[test]
    fn any_nonzero_seed_generates_all_of_sl2() {
        let g = sl2_at_zero();
        for i in 0..3 {
            let fam = ideal_generated(&g, &[GradedVector::basis_vector(0, i, 3)]).unwrap();
            assert_eq!(family_dim(&fam), 3, "seed {}", i);
        }
    }

    #[test]
    fn ideal_from_degree_one_of_free_algebra_reaches_every_positive_degree() {
        let w = Window::new(0, 4).unwrap();
        let gens = GradedSpace::concentrated(w, 1, 2).unwrap();
        let (g, _) = free_lie_super(&gens, w).unwrap();
        let seeds: Vec<GradedVector> = (0..2)
            .map(|i| GradedVector::basis_vector(1, i, 2))
            .collect();
        let fam = ideal_generated(&g, &seeds).unwrap();
        for k in 1..=4 {
            assert_eq!(fam[&k].dim(), g.dim(k), "degree {}", k);
        }
    }

    #[test]
    fn quotient_by_zero_ideal_preserves_constants() {
        let g = sl2_at_zero();
        let q = quotient(&g, &DegreeFamily::new()).unwrap();
        assert_eq!(q.dims(), g.dims());
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(q.bracket_basis(0, a, 0, b), g.bracket_basis(0, a, 0, b));
            }
        }
    }

    #[test]
    fn quotient_by_whole_algebra_is_zero() {
        let g = sl2_at_zero();
        let mut fam = DegreeFamily::new();
        fam.insert(0, Subspace::full(3));
        let q = quotient(&g, &fam).unwrap();
        assert_eq!(q.total_dim(), 0);
    }

    #[test]
    fn quotient_of_free_algebra_by_degree_two_ideal_is_abelian() {
        let w = Window::new(0, 4).unwrap();
        let gens = GradedSpace::concentrated(w, 1, 2).unwrap();
        let (g, _) = free_lie_super(&gens, w).unwrap();
        let seeds: Vec<GradedVector> = (0..3)
            .map(|i| GradedVector::basis_vector(2, i, 3))
            .collect();
        let fam = ideal_generated(&g, &seeds).unwrap();
        let q = quotient(&g, &fam).unwrap();
        assert_eq!(q.dim(1), 2);
        assert_eq!(q.dim(2), 0);
        assert_eq!(q.dim(3), 0);
        assert_eq!(q.dim(4), 0);
        assert!(q.check_super_identities().all_pass());
    }

    #[test]
    fn non_ideal_is_rejected_with_witness() {
        let g = sl2_at_zero();
        let mut fam = DegreeFamily::new();
        // span{h} is a subalgebra but not an ideal
        fam.insert(0, Subspace::from_rows(3, vec![vec![scalar(1), scalar(0), scalar(0)]]));
        let err = quotient(&g, &fam).unwrap_err();
        assert!(matches!(err, Error::NotAnIdeal(_)));
    }

    #[test]
    fn free_positive_part_has_full_defect() {
        let w = Window::new(-1, 3).unwrap();
        let gens = GradedSpace::concentrated(w, 1, 2).unwrap();
        let (g, _) = free_lie_super(&gens, w).unwrap();
        let fam = transitivity_defect(&g, Side::Negative, 2).unwrap();
        assert_eq!(fam[&2].dim(), g.dim(2));
        assert_eq!(fam[&3].dim(), g.dim(3));
    }

    #[test]
    fn maximal_trivial_ideal_of_abelian_extension_kills_everything_above_two() {
        let local = abelian_local((1, 1, 2));
        let w = Window::new(-2, 3).unwrap();
        let g = crate::superalgebra::maximal_extension(&local, w).unwrap();
        let fam = maximal_trivial_ideal(&g, Side::Negative, 2).unwrap();
        assert_eq!(fam[&2].dim(), g.dim(2));
        assert_eq!(fam[&3].dim(), g.dim(3));
        let q = quotient(&g, &fam).unwrap();
        assert_eq!(q.dim(2), 0);
        assert_eq!(q.dim(3), 0);
    }

    #[test]
    fn idealiser_of_zero_and_of_everything_is_the_whole_algebra() {
        let g = sl2_at_zero();
        let n = idealiser(&g, &DegreeFamily::new()).unwrap();
        assert_eq!(family_dim(&n), 3);
        let mut full = DegreeFamily::new();
        full.insert(0, Subspace::full(3));
        let n = idealiser(&g, &full).unwrap();
        assert_eq!(family_dim(&n), 3);
    }

    #[test]
    fn restriction_to_borel_subalgebra() {
        let g = sl2_at_zero();
        let mut fam = DegreeFamily::new();
        fam.insert(
            0,
            Subspace::from_rows(
                3,
                vec![
                    vec![scalar(1), scalar(0), scalar(0)],
                    vec![scalar(0), scalar(1), scalar(0)],
                ],
            ),
        );
        let restricted = restrict_to_family(&g, &fam).unwrap();
        assert_eq!(restricted.dim(0), 2);
        assert!(restricted.check_super_identities().all_pass());
        // span{h, f} is also closed; span{e, f} is not
        let mut bad = DegreeFamily::new();
        bad.insert(
            0,
            Subspace::from_rows(
                3,
                vec![
                    vec![scalar(0), scalar(1), scalar(0)],
                    vec![scalar(0), scalar(0), scalar(1)],
                ],
            ),
        );
        assert!(restrict_to_family(&g, &bad).is_err());
    }

    #[test]
    fn minimal_extension_matches_quotiented_maximal_extension() {
        // a non-trivial local part: degree 0 = sl2, degree 1 = fundamental,
        // degree -1 = fundamental, with the natural action and pairing zero
        let action_e = Matrix::from_int_rows(&[&[0, 1], &[0, 0]]);
        let action_f = Matrix::from_int_rows(&[&[0, 0], &[1, 0]]);
        let action_h = Matrix::from_int_rows(&[&[1, 0], &[0, -1]]);
        let mut zero_pos: Block = vec![Vec::new(); 6];
        let mut neg_zero: Block = vec![Vec::new(); 6];
        for (zi, m) in [(0usize, &action_h), (1, &action_e), (2, &action_f)] {
            for b in 0..2 {
                let col: Vec<Scalar> = (0..2).map(|r| m[(r, b)].clone()).collect();
                zero_pos[zi * 2 + b] = crate::linalg::sparse_from_dense(&col);
                // [x_{-1,a}, z] = -[z, x_{-1,a}] with the same action matrices
                let neg: Vec<Scalar> = col.iter().map(|x| -x.clone()).collect();
                neg_zero[b * 3 + zi] = crate::linalg::sparse_from_dense(&neg);
            }
        }
        let local = LocalLieSuperalgebra::new(
            (2, 3, 2),
            neg_zero,
            vec![Vec::new(); 4], // zero pairing between the two fundamentals
            sl2_constants(),
            zero_pos,
        )
        .unwrap();
        let w = Window::new(-3, 3).unwrap();
        let minimal = crate::superalgebra::minimal_extension(&local, w).unwrap();
        assert!(minimal.check_super_identities().all_pass());

        let maximal = crate::superalgebra::maximal_extension(&local, w).unwrap();
        let mut ideal = maximal_trivial_ideal(&maximal, Side::Negative, 2).unwrap();
        ideal.extend(maximal_trivial_ideal(&maximal, Side::Positive, -2).unwrap());
        let quotiented = quotient(&maximal, &ideal).unwrap();
        assert_eq!(quotiented.dims(), minimal.dims());

        let report = extend_and_compare(
            &minimal,
            &quotiented,
            &LocalMap::identity((2, 3, 2)),
            ("minimal", "maximal/ideal"),
        )
        .unwrap();
        assert!(report.comparison.as_ref().unwrap().isomorphic, "{:?}", report.checks);
    }

    #[test]
    fn minimalization_is_idempotent() {
        let local = abelian_local((2, 1, 2));
        let w = Window::new(-3, 3).unwrap();
        let g = crate::superalgebra::minimal_extension(&local, w).unwrap();
        for side in [Side::Negative, Side::Positive] {
            let beyond = if side == Side::Negative { 2 } else { -2 };
            let fam = maximal_trivial_ideal(&g, side, beyond).unwrap();
            assert_eq!(family_dim(&fam), 0);
        }
    }
}
