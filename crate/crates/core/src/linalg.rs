//! Exact linear algebra over the rationals.
//!
//! All arithmetic uses arbitrary-precision rationals, so row reduction,
//! kernels and subspace operations are exact and deterministic: identical
//! inputs always produce bit-identical outputs. Subspaces are kept in
//! reduced row echelon form, which fixes a canonical basis for every span
//! computed anywhere else in the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use crate::error::Error;
use crate::Result;

/// Exact rational scalar. Always reduced to lowest terms with a positive
/// denominator (maintained by the underlying rational type).
pub type Scalar = BigRational;

/// Sparse row: (column index, nonzero value) pairs sorted by index.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "p/q" or "p" with arbitrary-precision integers. A zero
/// denominator is rejected rather than panicking.
pub fn parse_rational(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let invalid = || Error::InvalidRational(s.to_string());
    match s.split_once('/') {
        Some((num, den)) => {
            let n = BigInt::from_str(num.trim()).map_err(|_| invalid())?;
            let d = BigInt::from_str(den.trim()).map_err(|_| invalid())?;
            if d.is_zero() {
                return Err(invalid());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n = BigInt::from_str(s).map_err(|_| invalid())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub fn format_rational(x: &Scalar) -> String {
    x.to_string()
}

pub fn sparse_from_dense(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn dense_from_sparse(v: &SparseVec, dim: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); dim];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// acc += factor * row
pub fn add_sparse_into(acc: &mut [Scalar], row: &SparseVec, factor: &Scalar) {
    if factor.is_zero() {
        return;
    }
    for (i, x) in row {
        acc[*i] += factor * x;
    }
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| scalar(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Scalar] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Matrix product self * other.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Column-vector application: (self * v).
    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "mul_vec shape");
        let mut out = vec![Scalar::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = Scalar::zero();
            for j in 0..self.cols {
                if !v[j].is_zero() && !self[(i, j)].is_zero() {
                    acc += &self[(i, j)] * &v[j];
                }
            }
            out[i] = acc;
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut t = Scalar::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        t
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form with its pivot columns.
///
/// Deterministic: scans columns left to right and picks the topmost
/// unprocessed row with a nonzero entry as the pivot.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let lead = a[(r, c)].clone();
        if !lead.is_one() {
            for j in c..a.cols {
                let v = &a[(r, j)] / &lead;
                a[(r, j)] = v;
            }
        }
        for i in 0..a.rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..a.cols {
                let v = &a[(i, j)] - &(&f * &a[(r, j)]);
                a[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Row reduction that also returns, for each echelon basis row, its
/// coordinates over the original input rows. Zero rows are dropped.
pub fn rref_with_transcript(rows: Vec<Vec<Scalar>>, ambient: usize) -> (Matrix, Vec<usize>, Matrix) {
    let n = rows.len();
    let mut aug = Matrix::zeros(n, ambient + n);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), ambient, "transcript row length");
        for (j, x) in row.iter().enumerate() {
            aug[(i, j)] = x.clone();
        }
        aug[(i, ambient + i)] = Scalar::one();
    }
    // Eliminate on the leading block only; the trailing identity block
    // records the row operations.
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ambient {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !aug[(i, c)].is_zero()) else {
            continue;
        };
        aug.swap_rows(r, p);
        let lead = aug[(r, c)].clone();
        if !lead.is_one() {
            for j in 0..ambient + n {
                let v = &aug[(r, j)] / &lead;
                aug[(r, j)] = v;
            }
        }
        for i in 0..n {
            if i == r || aug[(i, c)].is_zero() {
                continue;
            }
            let f = aug[(i, c)].clone();
            for j in 0..ambient + n {
                let v = &aug[(i, j)] - &(&f * &aug[(r, j)]);
                aug[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    let mut basis = Matrix::zeros(rank, ambient);
    let mut transcript = Matrix::zeros(rank, n);
    for i in 0..rank {
        for j in 0..ambient {
            basis[(i, j)] = aug[(i, j)].clone();
        }
        for j in 0..n {
            transcript[(i, j)] = aug[(i, ambient + j)].clone();
        }
    }
    (basis, pivots, transcript)
}

/// Kernel {v | m v = 0} as a canonical subspace; dim + rank = cols.
pub fn kernel(m: &Matrix) -> Subspace {
    let (r, pivots) = rref(m);
    let mut rows = Vec::new();
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    for f in 0..m.cols {
        if pivot_set.contains(&f) {
            continue;
        }
        let mut v = vec![Scalar::zero(); m.cols];
        v[f] = Scalar::one();
        for (row_idx, &p) in pivots.iter().enumerate() {
            v[p] = -r[(row_idx, f)].clone();
        }
        rows.push(v);
    }
    Subspace::from_rows(m.cols, rows)
}

/// A subspace of a coordinate space, stored as a reduced-row-echelon basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_rows(ambient: usize, rows: Vec<Vec<Scalar>>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ambient, "span row length");
        }
        let (reduced, pivots) = rref(&Matrix::from_rows(rows));
        let rank = pivots.len();
        let mut basis = Matrix::zeros(rank, ambient);
        for i in 0..rank {
            for j in 0..ambient {
                basis[(i, j)] = reduced[(i, j)].clone();
            }
        }
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        Subspace::from_rows(m.cols(), m.row_vecs())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_row(&self, i: usize) -> &[Scalar] {
        self.basis.row(i)
    }

    /// Residual of v after subtracting its projection onto the span.
    /// Zero iff v belongs to the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient, "reduce ambient");
        let mut out = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for j in 0..self.ambient {
                let v = &out[j] - &(&f * &self.basis[(i, j)]);
                out[j] = v;
            }
        }
        out
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Coordinates of v over the echelon basis, if v lies in the span.
    pub fn coords_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        if is_zero_vec(&self.reduce(v)) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut rows = self.basis.row_vecs();
        rows.extend(other.basis.row_vecs());
        Ok(Subspace::from_rows(self.ambient, rows))
    }

    /// Intersection via the kernel of the stacked bases: a vector lies in
    /// both spans iff it is u^T A = w^T B for kernel elements (u, w) of
    /// [A^T | -B^T].
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let da = self.dim();
        let db = other.dim();
        if da == 0 || db == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        let stacked = Matrix::from_fn(self.ambient, da + db, |i, j| {
            if j < da {
                self.basis[(j, i)].clone()
            } else {
                -other.basis[(j - da, i)].clone()
            }
        });
        let ker = kernel(&stacked);
        let mut rows = Vec::new();
        for r in 0..ker.dim() {
            let uv = ker.basis_row(r);
            let mut x = vec![Scalar::zero(); self.ambient];
            for (i, u) in uv.iter().take(da).enumerate() {
                if !u.is_zero() {
                    for j in 0..self.ambient {
                        x[j] += u * &self.basis[(i, j)];
                    }
                }
            }
            rows.push(x);
        }
        Ok(Subspace::from_rows(self.ambient, rows))
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok((0..other.dim()).all(|r| self.contains_vector(other.basis_row(r))))
    }

    /// Deterministic coset representatives for self / sub: the echelon
    /// basis rows of self whose pivot is not a pivot of sub.
    pub fn quotient_basis(&self, sub: &Subspace) -> Result<Matrix> {
        self.check_ambient(sub)?;
        if !self.contains(sub)? {
            return Err(Error::InvalidInput(
                "quotient_basis: divisor is not contained in the space".into(),
            ));
        }
        let sub_pivots: std::collections::BTreeSet<usize> = sub.pivots.iter().copied().collect();
        let rows: Vec<Vec<Scalar>> = (0..self.dim())
            .filter(|&r| !sub_pivots.contains(&self.pivots[r]))
            .map(|r| self.basis_row(r).to_vec())
            .collect();
        Ok(Matrix::from_rows(if rows.is_empty() {
            vec![vec![]; 0]
        } else {
            rows
        }))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions differ: {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }
}

/// Greatest fixpoint of W_{i+1} = {x in W_i | A x in W_i for all A}: the
/// largest subspace of w stable under every operator.
pub fn largest_invariant_subspace(operators: &[Matrix], w: &Subspace) -> Result<Subspace> {
    for a in operators {
        if a.rows() != w.ambient_dim() || a.cols() != w.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, ambient is {}",
                a.rows(),
                a.cols(),
                w.ambient_dim()
            )));
        }
    }
    let mut cur = w.clone();
    loop {
        let d = cur.dim();
        if d == 0 {
            return Ok(cur);
        }
        // Conditions on coefficient vectors c: sum_i c_i (A b_i mod W) = 0.
        let mut cond_rows: Vec<Vec<Scalar>> = Vec::new();
        for a in operators {
            let residuals: Vec<Vec<Scalar>> = (0..d)
                .map(|i| cur.reduce(&a.mul_vec(cur.basis_row(i))))
                .collect();
            for coord in 0..cur.ambient_dim() {
                if residuals.iter().all(|r| r[coord].is_zero()) {
                    continue;
                }
                cond_rows.push(residuals.iter().map(|r| r[coord].clone()).collect());
            }
        }
        if cond_rows.is_empty() {
            return Ok(cur);
        }
        let ker = kernel(&Matrix::from_rows(cond_rows));
        if ker.dim() == d {
            return Ok(cur);
        }
        let rows: Vec<Vec<Scalar>> = (0..ker.dim())
            .map(|r| {
                let c = ker.basis_row(r);
                let mut x = vec![Scalar::zero(); cur.ambient_dim()];
                for (i, ci) in c.iter().enumerate() {
                    if !ci.is_zero() {
                        for j in 0..cur.ambient_dim() {
                            x[j] += ci * &cur.basis[(i, j)];
                        }
                    }
                }
                x
            })
            .collect();
        cur = Subspace::from_rows(cur.ambient_dim(), rows);
    }
}

/// Span closure of the given rows under a set of linear operators.
pub fn span_closure(ambient: usize, seed_rows: Vec<Vec<Scalar>>, operators: &[Matrix]) -> Subspace {
    let mut cur = Subspace::from_rows(ambient, seed_rows);
    loop {
        let d = cur.dim();
        let mut rows = cur.basis.row_vecs();
        for a in operators {
            for i in 0..d {
                rows.push(a.mul_vec(cur.basis_row(i)));
            }
        }
        let next = Subspace::from_rows(ambient, rows);
        if next.dim() == d {
            return next;
        }
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Fraction-free Gaussian elimination (Bareiss) over integers; the rank
    // oracle is independent of the rational rref path above.
    fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
        if rows.is_empty() {
            return 0;
        }
        let mut m: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let (nr, nc) = (m.len(), m[0].len());
        let mut prev = BigInt::from(1);
        let mut rank = 0;
        let mut row = 0;
        for col in 0..nc {
            if row == nr {
                break;
            }
            let Some(p) = (row..nr).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            for i in row + 1..nr {
                for j in col + 1..nc {
                    let v = (&m[row][col] * &m[i][j] - &m[i][col] * &m[row][j]) / &prev;
                    m[i][j] = v;
                }
                m[i][col] = BigInt::from(0);
            }
            prev = m[row][col].clone();
            rank += 1;
            row += 1;
        }
        rank
    }

    #[test]
    fn rref_identity_is_fixed() {
        let m = Matrix::identity(2);
        let (r, pivots) = rref(&m);
        assert_eq!(r, m);
        assert_eq!(pivots, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one() {
        let m = Matrix::from_int_rows(&[&[2, 4], &[1, 2]]);
        let (r, pivots) = rref(&m);
        assert_eq!(r, Matrix::from_int_rows(&[&[1, 2], &[0, 0]]));
        assert_eq!(pivots, vec![0]);
    }

    #[test]
    fn rref_rank_matches_fraction_free_oracle() {
        // Fixed 5x7 matrix; rank frozen from the Bareiss oracle.
        let rows: Vec<Vec<i64>> = vec![
            vec![2, -3, 0, 5, 1, 1, -2],
            vec![4, -6, 0, 10, 2, 2, -4],
            vec![1, 0, 2, -1, 3, 0, 1],
            vec![3, -3, 2, 4, 4, 1, -1],
            vec![0, 5, -1, 2, 2, -3, 7],
        ];
        let oracle = bareiss_rank(&rows);
        assert_eq!(oracle, 3);
        let m = Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| scalar(x)).collect())
                .collect(),
        );
        assert_eq!(m.rank(), oracle);
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let k = kernel(&Matrix::zeros(3, 3));
        assert_eq!(k.dim(), 3);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let k = kernel(&Matrix::identity(4));
        assert_eq!(k.dim(), 0);
    }

    #[test]
    fn kernel_of_single_relation() {
        let k = kernel(&Matrix::from_int_rows(&[&[1, 1, 0]]));
        assert_eq!(k.dim(), 2);
        assert!(k.contains_vector(&[scalar(1), scalar(-1), scalar(0)]));
    }

    #[test]
    fn subspace_sum_spans_plane() {
        let a = Subspace::from_rows(2, vec![vec![scalar(1), scalar(0)]]);
        let b = Subspace::from_rows(2, vec![vec![scalar(0), scalar(1)]]);
        assert_eq!(a.sum(&b).unwrap().dim(), 2);
    }

    #[test]
    fn subspace_intersection_of_plane_and_line() {
        let full = Subspace::full(2);
        let line = Subspace::from_rows(2, vec![vec![scalar(1), scalar(1)]]);
        let meet = full.intersect(&line).unwrap();
        assert_eq!(meet.dim(), 1);
        assert!(meet.contains_vector(&[scalar(1), scalar(1)]));
    }

    #[test]
    fn quotient_basis_matches_pivot_complement_enumeration() {
        let space = Subspace::full(3);
        let sub = Subspace::from_rows(3, vec![vec![scalar(1), scalar(0), scalar(0)]]);
        let reps = space.quotient_basis(&sub).unwrap();
        // Oracle: enumerate the standard coordinates missing from the
        // divisor's pivot set.
        let expected: Vec<usize> = (0..3).filter(|i| !sub.pivots().contains(i)).collect();
        assert_eq!(reps.rows(), expected.len());
        for (r, &coord) in expected.iter().enumerate() {
            let mut e = vec![Scalar::zero(); 3];
            e[coord] = Scalar::one();
            assert_eq!(reps.row(r), &e[..]);
        }
    }

    #[test]
    fn ambient_mismatch_is_rejected() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(a.sum(&b).is_err());
        assert!(a.intersect(&b).is_err());
    }

    #[test]
    fn invariant_subspace_identity_operator_keeps_w() {
        let w = Subspace::from_rows(3, vec![vec![scalar(1), scalar(2), scalar(0)]]);
        let out = largest_invariant_subspace(&[Matrix::identity(3)], &w).unwrap();
        assert_eq!(out, w);
    }

    #[test]
    fn invariant_subspace_rotation_kills_line() {
        let rot = Matrix::from_int_rows(&[&[0, -1], &[1, 0]]);
        let w = Subspace::from_rows(2, vec![vec![scalar(1), scalar(0)]]);
        let out = largest_invariant_subspace(&[rot], &w).unwrap();
        assert_eq!(out.dim(), 0);
    }

    #[test]
    fn parse_rational_accepts_fractions_and_rejects_zero_denominator() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), scalar(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn rref_with_transcript_reconstructs_rows() {
        let rows = vec![
            vec![scalar(2), scalar(4), scalar(0)],
            vec![scalar(1), scalar(2), scalar(1)],
            vec![scalar(3), scalar(6), scalar(1)],
        ];
        let (basis, pivots, transcript) = rref_with_transcript(rows.clone(), 3);
        assert_eq!(basis.rows(), pivots.len());
        for i in 0..basis.rows() {
            let mut acc = vec![Scalar::zero(); 3];
            for (j, r) in rows.iter().enumerate() {
                for c in 0..3 {
                    acc[c] += &transcript[(i, j)] * &r[c];
                }
            }
            assert_eq!(&acc[..], basis.row(i));
        }
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-4i64..=4, rows * cols).prop_map(move |data| {
            Matrix::from_fn(rows, cols, |i, j| scalar(data[i * cols + j]))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix(4, 5)) {
            prop_assert_eq!(kernel(&m).dim() + m.rank(), m.cols());
        }

        #[test]
        fn modular_dimension_law(a in small_matrix(3, 5), b in small_matrix(3, 5)) {
            let sa = Subspace::from_matrix(&a);
            let sb = Subspace::from_matrix(&b);
            let sum = sa.sum(&sb).unwrap();
            let meet = sa.intersect(&sb).unwrap();
            prop_assert_eq!(sa.dim() + sb.dim(), sum.dim() + meet.dim());
        }

        #[test]
        fn reduction_is_projection(m in small_matrix(3, 4), v in proptest::collection::vec(-4i64..=4, 4)) {
            let s = Subspace::from_matrix(&m);
            let vv: Vec<Scalar> = v.into_iter().map(scalar).collect();
            let r = s.reduce(&vv);
            // residual is unchanged by a second reduction
            prop_assert_eq!(s.reduce(&r), r);
        }
    }
}
