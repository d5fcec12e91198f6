//! Lie-Leibniz triples: a Lie algebra g, a g-module V and an embedding
//! tensor Theta: V -> g obeying the quadratic constraint
//! Theta(Theta(u) . v) = [Theta(u), Theta(v)].
//!
//! The constraint makes u . v := Theta(u) . v a left Leibniz product on V,
//! and the whole of this module is about the structures that product
//! generates: the g-orbit of Theta, the gauge subalgebra, the largest
//! g-submodule killed by the symmetric part of the product, and the graded
//! Lie superalgebras assembled from them in [`hierarchy`].

mod factories;
mod hierarchy;

pub use factories::{
    adjoint, crossed_module, hemi_semidirect, nonstrict_fixture, quadratic_failure_fixture, sl2,
    sl2_fundamental_action,
};
pub use hierarchy::{
    build_l, build_t, compare_with_p, dgla_chain_report, differential_d_theta, ChainKind,
    DglaChain, TensorHierarchy,
};

use crate::error::Error;
use crate::graded::{GradedSpace, Window};
use crate::linalg::{
    is_zero_vec, kernel, largest_invariant_subspace, span_closure, Matrix, Scalar, Subspace,
};
use crate::report::{Check, Report};
use crate::superalgebra::{Block, GradedLieSuperalgebra};
use crate::Result;
use num_traits::{One, Zero};

/// Lie algebra given by a full structure-constant table.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    dim: usize,
    labels: Vec<String>,
    constants: Block,
}

impl LieAlgebra {
    pub fn new(dim: usize, labels: Vec<String>, constants: Block) -> Result<Self> {
        if labels.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for dimension {}",
                labels.len(),
                dim
            )));
        }
        if constants.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "constant table has {} rows, expected {}",
                constants.len(),
                dim * dim
            )));
        }
        for row in &constants {
            for (idx, _) in row {
                if *idx >= dim {
                    return Err(Error::DimensionMismatch(format!(
                        "structure constant references coordinate {} of a {}-dimensional algebra",
                        idx, dim
                    )));
                }
            }
        }
        Ok(LieAlgebra {
            dim,
            labels,
            constants,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn constants(&self) -> &Block {
        &self.constants
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = xa * yb;
                crate::linalg::add_sparse_into(&mut out, &self.constants[a * self.dim + b], &c);
            }
        }
        out
    }

    /// The algebra placed at degree 0 of a graded window, so the generic
    /// identity checker applies.
    pub fn as_graded(&self) -> GradedLieSuperalgebra {
        let w = Window::new(0, 0).expect("window");
        let mut space = GradedSpace::empty(w);
        space
            .set_component(0, self.labels.clone())
            .expect("component");
        let mut g = GradedLieSuperalgebra::new_raw(space);
        g.set_block(0, 0, self.constants.clone());
        g
    }

    pub fn check_identities(&self) -> Report {
        self.as_graded().check_super_identities()
    }

    /// Adjoint operator of a basis element.
    pub fn ad(&self, a: usize) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for b in 0..self.dim {
            for (c, v) in &self.constants[a * self.dim + b] {
                m[(*c, b)] = v.clone();
            }
        }
        m
    }

    /// Killing form nondegeneracy plus a one-dimensional commutant of the
    /// adjoint representation: the computational notion of simplicity used
    /// for hypothesis labeling (exact for split algebras at desk scale).
    pub fn is_simple(&self) -> bool {
        let m = self.dim;
        if m == 0 {
            return false;
        }
        let ads: Vec<Matrix> = (0..m).map(|a| self.ad(a)).collect();
        let killing = Matrix::from_fn(m, m, |a, b| ads[a].mul(&ads[b]).trace());
        if killing.rank() != m {
            return false;
        }
        // commutant: T with T ad(x) = ad(x) T for every basis x
        let mut cond_rows: Vec<Vec<Scalar>> = Vec::new();
        for ad in &ads {
            for i in 0..m {
                for j in 0..m {
                    // (T A - A T)[i][j] = sum_k T[i][k] A[k][j] - A[i][k] T[k][j]
                    let mut row = vec![Scalar::zero(); m * m];
                    for k in 0..m {
                        row[i * m + k] += &ad[(k, j)];
                        row[k * m + j] -= &ad[(i, k)];
                    }
                    if !is_zero_vec(&row) {
                        cond_rows.push(row);
                    }
                }
            }
        }
        let commutant = if cond_rows.is_empty() {
            m * m
        } else {
            kernel(&Matrix::from_rows(cond_rows)).dim()
        };
        commutant == 1
    }
}

/// A Lie algebra, a module and an embedding tensor. The action is stored
/// as one matrix per Lie algebra basis vector; theta's columns are the
/// images of the module basis.
#[derive(Clone, Debug)]
pub struct LieLeibnizTriple {
    g: LieAlgebra,
    action: Vec<Matrix>,
    theta: Matrix,
}

impl LieLeibnizTriple {
    pub fn new(g: LieAlgebra, action: Vec<Matrix>, theta: Matrix) -> Result<Self> {
        let m = g.dim();
        if action.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for a {}-dimensional algebra",
                action.len(),
                m
            )));
        }
        let n = if m == 0 {
            theta.cols()
        } else {
            action[0].rows()
        };
        for (i, a) in action.iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "action matrix {} is {}x{}, expected {}x{}",
                    i,
                    a.rows(),
                    a.cols(),
                    n,
                    n
                )));
            }
        }
        if theta.rows() != m || theta.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "theta is {}x{}, expected {}x{}",
                theta.rows(),
                theta.cols(),
                m,
                n
            )));
        }
        Ok(LieLeibnizTriple { g, action, theta })
    }

    pub fn lie_algebra(&self) -> &LieAlgebra {
        &self.g
    }

    pub fn module_dim(&self) -> usize {
        self.theta.cols()
    }

    pub fn algebra_dim(&self) -> usize {
        self.g.dim()
    }

    pub fn theta(&self) -> &Matrix {
        &self.theta
    }

    pub fn action_matrices(&self) -> &[Matrix] {
        &self.action
    }

    /// rho(x) for a coefficient vector x over the Lie algebra basis.
    pub fn action_of(&self, x: &[Scalar]) -> Matrix {
        let n = self.module_dim();
        let mut out = Matrix::zeros(n, n);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            out = out.add(&self.action[a].scale(xa));
        }
        out
    }

    pub fn theta_of(&self, u: &[Scalar]) -> Vec<Scalar> {
        self.theta.mul_vec(u)
    }

    /// Theta as a flat element of Hom(V, g), slot-major: coordinate
    /// u * dim(g) + z.
    pub fn theta_flat(&self) -> Vec<Scalar> {
        let (m, n) = (self.algebra_dim(), self.module_dim());
        let mut out = vec![Scalar::zero(); n * m];
        for u in 0..n {
            for z in 0..m {
                out[u * m + z] = self.theta[(z, u)].clone();
            }
        }
        out
    }

    fn unit(dim: usize, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); dim];
        v[i] = Scalar::one();
        v
    }

    fn quadratic_witness(&self) -> Option<String> {
        let n = self.module_dim();
        for i in 0..n {
            for j in 0..n {
                let u = Self::unit(n, i);
                let v = Self::unit(n, j);
                let theta_u = self.theta_of(&u);
                let lhs = self.theta_of(&self.action_of(&theta_u).mul_vec(&v));
                let rhs = self.g.bracket(&theta_u, &self.theta_of(&v));
                if lhs != rhs {
                    return Some(format!("module basis pair ({}, {})", i, j));
                }
            }
        }
        None
    }

    fn representation_witness(&self) -> Option<String> {
        let m = self.algebra_dim();
        for a in 0..m {
            for b in 0..m {
                let lhs = self.action[a].mul(&self.action[b]).sub(&self.action[b].mul(&self.action[a]));
                let rhs = self.action_of(&self.g.bracket(&Self::unit(m, a), &Self::unit(m, b)));
                if lhs != rhs {
                    return Some(format!("algebra basis pair ({}, {})", a, b));
                }
            }
        }
        None
    }

    pub fn strictness_witness(&self) -> Option<String> {
        let (m, n) = (self.algebra_dim(), self.module_dim());
        for a in 0..m {
            for j in 0..n {
                let u = Self::unit(n, j);
                let lhs = self.theta_of(&self.action[a].mul_vec(&u));
                let rhs = self.g.bracket(&Self::unit(m, a), &self.theta_of(&u));
                if lhs != rhs {
                    return Some(format!("algebra basis {}, module basis {}", a, j));
                }
            }
        }
        None
    }

    pub fn is_surjective(&self) -> bool {
        self.theta.rank() == self.algebra_dim()
    }

    pub fn is_faithful(&self) -> bool {
        let (m, n) = (self.algebra_dim(), self.module_dim());
        let rows: Vec<Vec<Scalar>> = (0..m)
            .map(|a| {
                let mut flat = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        flat.push(self.action[a][(i, j)].clone());
                    }
                }
                flat
            })
            .collect();
        if m == 0 {
            return true;
        }
        Subspace::from_rows(n * n, rows).dim() == m
    }

    /// Required validity: Lie identities, the representation property and
    /// the quadratic constraint. Strictness, surjectivity and faithfulness
    /// are descriptive and reported as notes.
    pub fn validate(&self) -> Report {
        let mut report = Report::new("validate-triple")
            .with_dimensions(vec![(0, self.algebra_dim()), (1, self.module_dim())]);
        let lie = self.g.check_identities();
        let jacobi_witness = lie
            .checks
            .iter()
            .find(|c| !c.pass)
            .and_then(|c| c.witness.clone());
        report.push_check(Check::from_outcome("lie-identities", jacobi_witness));
        report.push_check(Check::from_outcome(
            "representation",
            self.representation_witness(),
        ));
        report.push_check(Check::from_outcome(
            "quadratic-constraint",
            self.quadratic_witness(),
        ));
        report.note(format!("strict: {}", self.strictness_witness().is_none()));
        report.note(format!("surjective: {}", self.is_surjective()));
        report.note(format!("faithful: {}", self.is_faithful()));
        report
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if let Some(c) = report.checks.iter().find(|c| !c.pass) {
            return Err(Error::IdentityViolation(format!(
                "triple fails {}: {}",
                c.name,
                c.witness.clone().unwrap_or_default()
            )));
        }
        Ok(())
    }

    /// Action of x on Hom(V, g): (x . phi)(u) = [x, phi(u)] - phi(x . u).
    pub fn hom_action(&self, x: &[Scalar], phi: &[Scalar]) -> Vec<Scalar> {
        let (m, n) = (self.algebra_dim(), self.module_dim());
        assert_eq!(phi.len(), n * m, "hom coordinate length");
        let rho_x = self.action_of(x);
        let mut out = vec![Scalar::zero(); n * m];
        for u in 0..n {
            let phi_u = &phi[u * m..(u + 1) * m];
            let first = self.g.bracket(x, phi_u);
            for z in 0..m {
                out[u * m + z] = first[z].clone();
            }
            for c in 0..n {
                let coef = &rho_x[(c, u)];
                if coef.is_zero() {
                    continue;
                }
                for z in 0..m {
                    let v = &out[u * m + z] - &(coef * &phi[c * m + z]);
                    out[u * m + z] = v;
                }
            }
        }
        out
    }

    /// Matrix of the hom action of one basis generator.
    pub fn hom_action_operator(&self, a: usize) -> Matrix {
        let (m, n) = (self.algebra_dim(), self.module_dim());
        let x = Self::unit(m, a);
        let mut out = Matrix::zeros(n * m, n * m);
        for col in 0..n * m {
            let phi = Self::unit(n * m, col);
            let img = self.hom_action(&x, &phi);
            for (r, v) in img.into_iter().enumerate() {
                out[(r, col)] = v;
            }
        }
        out
    }

    /// The g-orbit span of theta inside Hom(V, g); theta always belongs.
    pub fn orbit_r_theta(&self) -> Subspace {
        let ops: Vec<Matrix> = (0..self.algebra_dim())
            .map(|a| self.hom_action_operator(a))
            .collect();
        span_closure(
            self.module_dim() * self.algebra_dim(),
            vec![self.theta_flat()],
            &ops,
        )
    }

    /// Image of theta; a subalgebra of g by the quadratic constraint, and
    /// theta is equivariant along it. Both facts are verified.
    pub fn gauge_subalgebra(&self) -> Result<Subspace> {
        let (m, n) = (self.algebra_dim(), self.module_dim());
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|j| (0..m).map(|z| self.theta[(z, j)].clone()).collect())
            .collect();
        let image = Subspace::from_rows(m, cols);
        for a in 0..image.dim() {
            for b in 0..image.dim() {
                let v = self.g.bracket(image.basis_row(a), image.basis_row(b));
                if !image.contains_vector(&v) {
                    return Err(Error::Inconsistency(format!(
                        "image of theta is not closed under the bracket (pair {}, {})",
                        a, b
                    )));
                }
            }
        }
        let theta_flat = self.theta_flat();
        for a in 0..image.dim() {
            let moved = self.hom_action(image.basis_row(a), &theta_flat);
            if !is_zero_vec(&moved) {
                return Err(Error::Inconsistency(format!(
                    "theta is not equivariant along its image (basis {})",
                    a
                )));
            }
        }
        Ok(image)
    }
}

/// Index of the unordered pair (i, j), i <= j, in the symmetric square
/// basis.
pub fn sym_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * n - i * (i + 1) / 2 + j
}

pub fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Symmetric part of the Leibniz product as a map Sym^2 V -> V, with its
/// exact kernel. Equivariance along the gauge subalgebra is verified.
pub struct SymmetricBracket {
    pub matrix: Matrix,
    pub kernel: Subspace,
}

/// Action of a Lie algebra element on the symmetric square basis.
pub fn sym_square_action(t: &LieLeibnizTriple, x: &[Scalar]) -> Matrix {
    let n = t.module_dim();
    let nn = sym_dim(n);
    let rho = t.action_of(x);
    let mut out = Matrix::zeros(nn, nn);
    for i in 0..n {
        for j in i..n {
            let col = sym_index(n, i, j);
            // x.(u_i v u_j) = (x.u_i) v u_j + u_i v (x.u_j)
            for c in 0..n {
                let coef = rho[(c, i)].clone();
                if !coef.is_zero() {
                    let (a, b) = if c <= j { (c, j) } else { (j, c) };
                    out[(sym_index(n, a, b), col)] += &coef;
                }
                let coef = rho[(c, j)].clone();
                if !coef.is_zero() {
                    let (a, b) = if i <= c { (i, c) } else { (c, i) };
                    out[(sym_index(n, a, b), col)] += &coef;
                }
            }
        }
    }
    out
}

pub fn symmetric_bracket(t: &LieLeibnizTriple) -> Result<SymmetricBracket> {
    t.require_valid()?;
    let n = t.module_dim();
    let nn = sym_dim(n);
    let mut matrix = Matrix::zeros(n, nn);
    let leibniz = leibniz_from_triple(t)?;
    for i in 0..n {
        for j in i..n {
            let uv = leibniz.product_basis(i, j);
            let vu = leibniz.product_basis(j, i);
            let col = sym_index(n, i, j);
            for c in 0..n {
                let mut v = &uv[c] + &vu[c];
                v /= crate::linalg::scalar(2);
                matrix[(c, col)] = v;
            }
        }
    }
    let kernel = kernel(&matrix);
    // equivariance along the gauge subalgebra
    let gauge = t.gauge_subalgebra()?;
    for a in 0..gauge.dim() {
        let h = gauge.basis_row(a);
        let s = sym_square_action(t, h);
        let lhs = matrix.mul(&s);
        let rhs = t.action_of(h).mul(&matrix);
        if lhs != rhs {
            return Err(Error::Inconsistency(format!(
                "symmetric bracket is not equivariant along the gauge subalgebra (basis {})",
                a
            )));
        }
    }
    Ok(SymmetricBracket { matrix, kernel })
}

/// Left Leibniz algebra: product constants with the Leibniz rule
/// u.(v.w) = (u.v).w + v.(u.w) verified on all basis triples.
#[derive(Clone, Debug)]
pub struct LeibnizAlgebra {
    dim: usize,
    product: Block,
}

impl LeibnizAlgebra {
    pub fn new(dim: usize, product: Block) -> Result<Self> {
        if product.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "product table has {} rows, expected {}",
                product.len(),
                dim * dim
            )));
        }
        let l = LeibnizAlgebra { dim, product };
        if let Some(w) = l.leibniz_witness() {
            return Err(Error::IdentityViolation(format!(
                "Leibniz rule fails at {}",
                w
            )));
        }
        Ok(l)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn product_table(&self) -> &Block {
        &self.product
    }

    pub fn product_basis(&self, a: usize, b: usize) -> Vec<Scalar> {
        crate::linalg::dense_from_sparse(&self.product[a * self.dim + b], self.dim)
    }

    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = xa * yb;
                crate::linalg::add_sparse_into(&mut out, &self.product[a * self.dim + b], &c);
            }
        }
        out
    }

    fn leibniz_witness(&self) -> Option<String> {
        let n = self.dim;
        let unit = |i: usize| {
            let mut v = vec![Scalar::zero(); n];
            v[i] = Scalar::one();
            v
        };
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    let lhs = self.product(&unit(u), &self.product(&unit(v), &unit(w)));
                    let mut rhs = self.product(&self.product(&unit(u), &unit(v)), &unit(w));
                    let second = self.product(&unit(v), &self.product(&unit(u), &unit(w)));
                    for i in 0..n {
                        rhs[i] += &second[i];
                    }
                    if lhs != rhs {
                        return Some(format!("basis triple ({}, {}, {})", u, v, w));
                    }
                }
            }
        }
        None
    }

    /// Product antisymmetric on all basis pairs, i.e. V is a Lie algebra.
    pub fn is_lie(&self) -> bool {
        let n = self.dim;
        for a in 0..n {
            for b in 0..n {
                let uv = self.product_basis(a, b);
                let vu = self.product_basis(b, a);
                for c in 0..n {
                    if uv[c] != -vu[c].clone() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Leibniz product u . v = rho(Theta(u)) v induced by a valid triple.
pub fn leibniz_from_triple(t: &LieLeibnizTriple) -> Result<LeibnizAlgebra> {
    t.require_valid()?;
    let n = t.module_dim();
    let mut product: Block = vec![Vec::new(); n * n];
    for a in 0..n {
        let mut u = vec![Scalar::zero(); n];
        u[a] = Scalar::one();
        let op = t.action_of(&t.theta_of(&u));
        for b in 0..n {
            let mut v = vec![Scalar::zero(); n];
            v[b] = Scalar::one();
            product[a * n + b] = crate::linalg::sparse_from_dense(&op.mul_vec(&v));
        }
    }
    LeibnizAlgebra::new(n, product)
}

/// The canonical surjective faithful triple of a Leibniz algebra:
/// g = ad(V) with the commutator, Theta = ad.
pub fn triple_from_leibniz(l: &LeibnizAlgebra) -> Result<LieLeibnizTriple> {
    let n = l.dim();
    let ad_mats: Vec<Matrix> = (0..n)
        .map(|a| {
            Matrix::from_fn(n, n, |r, c| {
                let img = l.product_basis(a, c);
                img[r].clone()
            })
        })
        .collect();
    let flat_rows: Vec<Vec<Scalar>> = ad_mats
        .iter()
        .map(crate::kantor::endomorphism_coords)
        .collect();
    let span = Subspace::from_rows(n * n, flat_rows.clone());
    let m = span.dim();
    let labels = (0..m).map(|i| format!("ad.{}", i)).collect();
    // structure constants of the commutator on the span basis
    let basis_mats: Vec<Matrix> = (0..m)
        .map(|r| {
            let flat = span.basis_row(r);
            Matrix::from_fn(n, n, |i, j| flat[j * n + i].clone())
        })
        .collect();
    let mut constants: Block = vec![Vec::new(); m * m];
    for a in 0..m {
        for b in 0..m {
            let comm = basis_mats[a].mul(&basis_mats[b]).sub(&basis_mats[b].mul(&basis_mats[a]));
            let coords = span
                .coords_of(&crate::kantor::endomorphism_coords(&comm))
                .ok_or_else(|| {
                    Error::Inconsistency(
                        "adjoint span of a Leibniz algebra is not bracket-closed".into(),
                    )
                })?;
            constants[a * m + b] = crate::linalg::sparse_from_dense(&coords);
        }
    }
    let g = LieAlgebra::new(m, labels, constants)?;
    let mut theta = Matrix::zeros(m, n);
    for u in 0..n {
        let coords = span
            .coords_of(&flat_rows[u])
            .ok_or_else(|| Error::Inconsistency("ad(u) outside its own span".into()))?;
        for z in 0..m {
            theta[(z, u)] = coords[z].clone();
        }
    }
    let triple = LieLeibnizTriple::new(g, basis_mats, theta)?;
    triple.require_valid()?;
    Ok(triple)
}

/// Computes K two ways and insists they agree: the largest g-submodule of
/// the kernel of the symmetric bracket, and the joint annihilator of the
/// theta orbit acting on the symmetric square.
pub struct KModule {
    pub k: Subspace,
    pub kernel: Subspace,
}

pub fn compute_k(t: &LieLeibnizTriple) -> Result<KModule> {
    let sym = symmetric_bracket(t)?;
    let n = t.module_dim();
    let ops: Vec<Matrix> = (0..t.algebra_dim())
        .map(|a| {
            let mut x = vec![Scalar::zero(); t.algebra_dim()];
            x[a] = Scalar::one();
            sym_square_action(t, &x)
        })
        .collect();
    let invariant = largest_invariant_subspace(&ops, &sym.kernel)?;

    // joint kernel of k -> [chi, k] over the orbit of theta
    let orbit = t.orbit_r_theta();
    let m = t.algebra_dim();
    let nn = sym_dim(n);
    let mut cond_rows: Vec<Vec<Scalar>> = Vec::new();
    for r in 0..orbit.dim() {
        let chi = orbit.basis_row(r);
        let chi_of = |i: usize| -> Vec<Scalar> { chi[i * m..(i + 1) * m].to_vec() };
        let mut mat = Matrix::zeros(n, nn);
        for i in 0..n {
            for j in i..n {
                let col = sym_index(n, i, j);
                let mut ui = vec![Scalar::zero(); n];
                ui[i] = Scalar::one();
                let mut uj = vec![Scalar::zero(); n];
                uj[j] = Scalar::one();
                // (chi(u_i) . u_j + chi(u_j) . u_i) / 2; on the diagonal the
                // two terms coincide, leaving chi(u_i) . u_i
                let mut val = t.action_of(&chi_of(i)).mul_vec(&uj);
                let second = t.action_of(&chi_of(j)).mul_vec(&ui);
                for c in 0..n {
                    val[c] += &second[c];
                    val[c] /= crate::linalg::scalar(2);
                }
                for c in 0..n {
                    mat[(c, col)] = val[c].clone();
                }
            }
        }
        for c in 0..n {
            let row: Vec<Scalar> = (0..nn).map(|col| mat[(c, col)].clone()).collect();
            if !is_zero_vec(&row) {
                cond_rows.push(row);
            }
        }
    }
    let annihilator = if cond_rows.is_empty() {
        Subspace::full(nn)
    } else {
        kernel(&Matrix::from_rows(cond_rows))
    };
    if annihilator != invariant {
        return Err(Error::Inconsistency(
            "invariant-subspace and orbit-annihilator routes to K disagree".into(),
        ));
    }
    // direct check of [orbit, K] = 0 through the symmetric pairing
    for r in 0..orbit.dim() {
        let chi = orbit.basis_row(r);
        let chi_of = |i: usize| -> Vec<Scalar> { chi[i * m..(i + 1) * m].to_vec() };
        for kb in 0..invariant.dim() {
            let kvec = invariant.basis_row(kb);
            let mut val = vec![Scalar::zero(); n];
            for i in 0..n {
                for j in i..n {
                    let coef = &kvec[sym_index(n, i, j)];
                    if coef.is_zero() {
                        continue;
                    }
                    let mut ui = vec![Scalar::zero(); n];
                    ui[i] = Scalar::one();
                    let mut uj = vec![Scalar::zero(); n];
                    uj[j] = Scalar::one();
                    let mut pair = t.action_of(&chi_of(i)).mul_vec(&uj);
                    let second = t.action_of(&chi_of(j)).mul_vec(&ui);
                    for c in 0..n {
                        pair[c] += &second[c];
                        pair[c] /= crate::linalg::scalar(2);
                        val[c] += &(coef * &pair[c]);
                    }
                }
            }
            if !is_zero_vec(&val) {
                return Err(Error::Inconsistency(format!(
                    "[orbit vector {}, K vector {}] is nonzero",
                    r, kb
                )));
            }
        }
    }
    Ok(KModule {
        k: invariant,
        kernel: sym.kernel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar;

    #[test]
    fn sl2_is_simple_and_valid() {
        let g = sl2();
        assert!(g.check_identities().all_pass());
        assert!(g.is_simple());
    }

    #[test]
    fn borel_is_not_simple() {
        let t = nonstrict_fixture();
        assert!(!t.lie_algebra().is_simple());
    }

    #[test]
    fn adjoint_triple_validates_strict_surjective_faithful() {
        let t = adjoint(&sl2());
        let report = t.validate();
        assert!(report.all_pass(), "{:?}", report.checks);
        assert!(report.notes.contains(&"strict: true".to_string()));
        assert!(report.notes.contains(&"surjective: true".to_string()));
        assert!(report.notes.contains(&"faithful: true".to_string()));
    }

    #[test]
    fn zero_theta_passes_trivially_but_is_not_surjective() {
        let g = sl2();
        let action: Vec<Matrix> = (0..3).map(|a| g.ad(a)).collect();
        let t = LieLeibnizTriple::new(g, action, Matrix::zeros(3, 3)).unwrap();
        let report = t.validate();
        assert!(report.all_pass());
        assert!(report.notes.contains(&"strict: true".to_string()));
        assert!(report.notes.contains(&"surjective: false".to_string()));
    }

    #[test]
    fn projection_onto_a_nilpotent_direction_fails_the_quadratic_constraint() {
        let t = quadratic_failure_fixture();
        let report = t.validate();
        let quad = report
            .checks
            .iter()
            .find(|c| c.name == "quadratic-constraint")
            .unwrap();
        assert!(!quad.pass);
        assert!(quad.witness.is_some());
    }

    #[test]
    fn adjoint_leibniz_product_is_the_bracket() {
        let g = sl2();
        let t = adjoint(&g);
        let l = leibniz_from_triple(&t).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let mut ua = vec![scalar(0); 3];
                ua[a] = scalar(1);
                let mut ub = vec![scalar(0); 3];
                ub[b] = scalar(1);
                assert_eq!(l.product_basis(a, b), g.bracket(&ua, &ub));
            }
        }
        assert!(l.is_lie());
    }

    #[test]
    fn hemi_semidirect_product_matches_the_displayed_formula() {
        let g = sl2();
        let t = hemi_semidirect(&g, &sl2_fundamental_action()).unwrap();
        let l = leibniz_from_triple(&t).unwrap();
        // (a, x) . (b, y) = ([a, b], a . y): on basis vectors of the g part
        // against the module part the product is the action
        let fund = sl2_fundamental_action();
        for a in 0..3 {
            for y in 0..2 {
                let prod = l.product_basis(a, 3 + y);
                let mut expected = vec![scalar(0); 5];
                for c in 0..2 {
                    expected[3 + c] = fund[a][(c, y)].clone();
                }
                assert_eq!(prod, expected);
            }
            // module on the left acts by zero
            for b in 0..5 {
                assert_eq!(l.product_basis(3 + (a % 2), b), vec![scalar(0); 5]);
            }
        }
        // g against g is the bracket
        for a in 0..3 {
            for b in 0..3 {
                let prod = l.product_basis(a, b);
                let mut ua = vec![scalar(0); 3];
                ua[a] = scalar(1);
                let mut ub = vec![scalar(0); 3];
                ub[b] = scalar(1);
                let br = g.bracket(&ua, &ub);
                assert_eq!(&prod[0..3], &br[..]);
                assert!(prod[3..].iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn theta_zero_gives_the_abelian_leibniz_algebra() {
        let g = sl2();
        let action: Vec<Matrix> = (0..3).map(|a| g.ad(a)).collect();
        let t = LieLeibnizTriple::new(g, action, Matrix::zeros(3, 3)).unwrap();
        let l = leibniz_from_triple(&t).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert!(l.product_basis(a, b).iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn abelian_leibniz_algebra_has_zero_inner_algebra() {
        let l = LeibnizAlgebra::new(2, vec![Vec::new(); 4]).unwrap();
        let t = triple_from_leibniz(&l).unwrap();
        assert_eq!(t.algebra_dim(), 0);
    }

    #[test]
    fn leibniz_round_trip_is_the_identity_on_product_constants() {
        let g = sl2();
        let t = hemi_semidirect(&g, &sl2_fundamental_action()).unwrap();
        let l = leibniz_from_triple(&t).unwrap();
        let t2 = triple_from_leibniz(&l).unwrap();
        let l2 = leibniz_from_triple(&t2).unwrap();
        assert_eq!(l.product_table(), l2.product_table());
    }

    #[test]
    fn lie_algebra_as_leibniz_recovers_inner_derivations() {
        let g = sl2();
        let t = adjoint(&g);
        let l = leibniz_from_triple(&t).unwrap();
        let t2 = triple_from_leibniz(&l).unwrap();
        // sl2 has trivial center, so inn(sl2) has dimension 3
        assert_eq!(t2.algebra_dim(), 3);
    }

    #[test]
    fn hom_action_of_central_elements_kills_equivariant_maps() {
        // abelian one-dimensional algebra acting trivially
        let g = LieAlgebra::new(1, vec!["z".into()], vec![Vec::new(); 1]).unwrap();
        let t = LieLeibnizTriple::new(g, vec![Matrix::zeros(2, 2)], Matrix::zeros(1, 2)).unwrap();
        let phi = vec![scalar(1), scalar(2)];
        let moved = t.hom_action(&[scalar(1)], &phi);
        assert!(is_zero_vec(&moved));
    }

    #[test]
    fn strict_theta_is_killed_by_the_hom_action() {
        let t = adjoint(&sl2());
        let theta = t.theta_flat();
        for a in 0..3 {
            let mut x = vec![scalar(0); 3];
            x[a] = scalar(1);
            assert!(is_zero_vec(&t.hom_action(&x, &theta)), "generator {}", a);
        }
    }

    #[test]
    fn nonstrict_fixture_has_a_two_dimensional_stable_orbit() {
        let t = nonstrict_fixture();
        assert!(t.validate().all_pass());
        assert!(t.strictness_witness().is_some());
        let orbit = t.orbit_r_theta();
        assert_eq!(orbit.dim(), 2);
        // stability under all generators
        for a in 0..t.algebra_dim() {
            let op = t.hom_action_operator(a);
            for r in 0..orbit.dim() {
                let moved = op.mul_vec(orbit.basis_row(r));
                assert!(orbit.contains_vector(&moved));
            }
        }
    }

    #[test]
    fn orbit_of_zero_theta_is_zero() {
        let g = sl2();
        let action: Vec<Matrix> = (0..3).map(|a| g.ad(a)).collect();
        let t = LieLeibnizTriple::new(g, action, Matrix::zeros(3, 3)).unwrap();
        assert_eq!(t.orbit_r_theta().dim(), 0);
    }

    #[test]
    fn strict_triple_orbit_is_one_dimensional() {
        let t = adjoint(&sl2());
        assert_eq!(t.orbit_r_theta().dim(), 1);
    }

    #[test]
    fn gauge_subalgebra_examples() {
        let t = adjoint(&sl2());
        assert_eq!(t.gauge_subalgebra().unwrap().dim(), 3);

        let g = sl2();
        let action: Vec<Matrix> = (0..3).map(|a| g.ad(a)).collect();
        let zero = LieLeibnizTriple::new(g, action, Matrix::zeros(3, 3)).unwrap();
        assert_eq!(zero.gauge_subalgebra().unwrap().dim(), 0);

        let hemi = hemi_semidirect(&sl2(), &sl2_fundamental_action()).unwrap();
        assert_eq!(hemi.gauge_subalgebra().unwrap().dim(), 3);
    }

    #[test]
    fn adjoint_symmetric_bracket_vanishes() {
        let t = adjoint(&sl2());
        let sym = symmetric_bracket(&t).unwrap();
        assert!(sym.matrix.is_zero());
        assert_eq!(sym.kernel.dim(), 6);
    }

    #[test]
    fn hemi_symmetric_bracket_has_rank_two() {
        let t = hemi_semidirect(&sl2(), &sl2_fundamental_action()).unwrap();
        let sym = symmetric_bracket(&t).unwrap();
        assert_eq!(sym.matrix.rank(), 2);
        assert_eq!(sym.kernel.dim(), 13);
        assert_eq!(sym_dim(5), 15);
    }

    #[test]
    fn k_module_of_the_adjoint_triple_is_the_full_symmetric_square() {
        let t = adjoint(&sl2());
        let k = compute_k(&t).unwrap();
        assert_eq!(k.k.dim(), 6);
        assert_eq!(k.kernel.dim(), 6);
    }

    #[test]
    fn k_module_of_the_hemi_triple_equals_the_kernel() {
        let t = hemi_semidirect(&sl2(), &sl2_fundamental_action()).unwrap();
        let k = compute_k(&t).unwrap();
        assert_eq!(k.kernel.dim(), 13);
        assert_eq!(k.k, k.kernel);
    }

    #[test]
    fn k_module_of_the_nonstrict_fixture_is_strictly_smaller_than_the_kernel() {
        let t = nonstrict_fixture();
        let k = compute_k(&t).unwrap();
        assert_eq!(k.kernel.dim(), 2);
        assert_eq!(k.k.dim(), 1);
        assert!(k.kernel.contains(&k.k).unwrap());
    }

    #[test]
    fn hom_action_operators_form_a_representation() {
        let t = nonstrict_fixture();
        let m = t.algebra_dim();
        for a in 0..m {
            for b in 0..m {
                let ha = t.hom_action_operator(a);
                let hb = t.hom_action_operator(b);
                let comm = ha.mul(&hb).sub(&hb.mul(&ha));
                let mut xa = vec![scalar(0); m];
                xa[a] = scalar(1);
                let mut xb = vec![scalar(0); m];
                xb[b] = scalar(1);
                let bracket = t.lie_algebra().bracket(&xa, &xb);
                let mut expected = Matrix::zeros(comm.rows(), comm.cols());
                for (z, coef) in bracket.iter().enumerate() {
                    if !coef.is_zero() {
                        expected = expected.add(&t.hom_action_operator(z).scale(coef));
                    }
                }
                assert_eq!(comm, expected);
            }
        }
    }

    #[test]
    fn crossed_module_factory_validates_the_identity_crossed_module() {
        let g = sl2();
        let action: Vec<Matrix> = (0..3).map(|a| g.ad(a)).collect();
        let t = crossed_module(&g, &g.clone(), &action, &Matrix::identity(3)).unwrap();
        assert!(t.validate().all_pass());
    }

    #[test]
    fn crossed_module_factory_rejects_broken_peiffer_identity() {
        let g = sl2();
        let action: Vec<Matrix> = (0..3).map(|a| g.ad(a)).collect();
        // V abelian but theta the identity: Theta(u) . v != [u, v]_V = 0
        let abelian = LieAlgebra::new(3, vec!["a".into(), "b".into(), "c".into()], vec![Vec::new(); 9]).unwrap();
        assert!(crossed_module(&g, &abelian, &action, &Matrix::identity(3)).is_err());
    }
}
