//! Z-graded vector spaces on a finite degree window.
//!
//! Parity is never stored: an element of degree k is even or odd according
//! to k mod 2, so inconsistent parities cannot be represented at all.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::linalg::{is_zero_vec, Matrix, Scalar};
use crate::Result;
use num_traits::Zero;

/// Parity of a degree: 0 for even, 1 for odd.
pub fn parity(degree: i64) -> u8 {
    (degree.rem_euclid(2)) as u8
}

/// Koszul sign (-1)^{parity(i) parity(j)} as +1/-1.
pub fn koszul_sign(i: i64, j: i64) -> i64 {
    if parity(i) == 1 && parity(j) == 1 {
        -1
    } else {
        1
    }
}

/// Inclusive degree window [min, max].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Window {
    min: i64,
    max: i64,
}

impl Window {
    pub fn new(min: i64, max: i64) -> Result<Window> {
        if min > max {
            return Err(Error::InvalidInput(format!(
                "window min {} exceeds max {}",
                min, max
            )));
        }
        Ok(Window { min, max })
    }

    pub fn min(&self) -> i64 {
        self.min
    }

    pub fn max(&self) -> i64 {
        self.max
    }

    pub fn contains(&self, k: i64) -> bool {
        self.min <= k && k <= self.max
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.min..=self.max
    }

    pub fn shifted(&self, s: i64) -> Result<Window> {
        let min = self
            .min
            .checked_sub(s)
            .ok_or_else(|| Error::InvalidInput("shifted window not representable".into()))?;
        let max = self
            .max
            .checked_sub(s)
            .ok_or_else(|| Error::InvalidInput("shifted window not representable".into()))?;
        Window::new(min, max)
    }
}

/// Finite family of ordered bases indexed by degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedSpace {
    window: Window,
    labels: BTreeMap<i64, Vec<String>>,
}

impl GradedSpace {
    pub fn empty(window: Window) -> Self {
        GradedSpace {
            window,
            labels: BTreeMap::new(),
        }
    }

    /// Space concentrated in one degree with auto-generated labels.
    pub fn concentrated(window: Window, degree: i64, dim: usize) -> Result<Self> {
        let mut s = GradedSpace::empty(window);
        s.set_component_dim(degree, dim)?;
        Ok(s)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn set_component(&mut self, degree: i64, labels: Vec<String>) -> Result<()> {
        if !self.window.contains(degree) {
            return Err(Error::InvalidInput(format!(
                "degree {} outside window [{}, {}]",
                degree,
                self.window.min,
                self.window.max
            )));
        }
        if labels.is_empty() {
            self.labels.remove(&degree);
        } else {
            self.labels.insert(degree, labels);
        }
        Ok(())
    }

    pub fn set_component_dim(&mut self, degree: i64, dim: usize) -> Result<()> {
        self.set_component(degree, default_labels(degree, dim))
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.labels.get(&degree).map_or(0, |l| l.len())
    }

    pub fn labels(&self, degree: i64) -> &[String] {
        self.labels.get(&degree).map_or(&[], |l| l.as_slice())
    }

    /// All in-window degrees with their dimensions, zeros included.
    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.window.iter().map(|k| (k, self.dim(k))).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.labels.values().map(|l| l.len()).sum()
    }

    pub fn nonzero_degrees(&self) -> Vec<i64> {
        self.labels.keys().copied().collect()
    }
}

pub fn default_labels(degree: i64, dim: usize) -> Vec<String> {
    (0..dim).map(|i| format!("d{}.{}", degree, i)).collect()
}

/// Shift every degree: the output component at degree k is the input
/// component at degree k + s, so V[-1] of a degree-0 space sits at +1.
pub fn shift_space(space: &GradedSpace, s: i64) -> Result<GradedSpace> {
    let window = space.window().shifted(s)?;
    let mut out = GradedSpace::empty(window);
    for k in window.iter() {
        let src = k + s;
        if space.dim(src) > 0 {
            out.set_component(k, space.labels(src).to_vec())?;
        }
    }
    Ok(out)
}

/// Vector with homogeneous components indexed by degree. Absent components
/// are zero; stored components are kept only when nonzero, which makes
/// equality canonical.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GradedVector {
    components: BTreeMap<i64, Vec<Scalar>>,
}

impl GradedVector {
    pub fn zero() -> Self {
        GradedVector::default()
    }

    pub fn from_component(degree: i64, coords: Vec<Scalar>) -> Self {
        let mut v = GradedVector::zero();
        v.set_component(degree, coords);
        v
    }

    pub fn basis_vector(degree: i64, index: usize, dim: usize) -> Self {
        let mut coords = vec![Scalar::zero(); dim];
        coords[index] = num_traits::One::one();
        GradedVector::from_component(degree, coords)
    }

    pub fn set_component(&mut self, degree: i64, coords: Vec<Scalar>) {
        if is_zero_vec(&coords) {
            self.components.remove(&degree);
        } else {
            self.components.insert(degree, coords);
        }
    }

    pub fn component(&self, degree: i64) -> Option<&[Scalar]> {
        self.components.get(&degree).map(|v| v.as_slice())
    }

    pub fn components(&self) -> impl Iterator<Item = (i64, &[Scalar])> {
        self.components.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_homogeneous(&self) -> Option<i64> {
        if self.components.len() == 1 {
            self.components.keys().next().copied()
        } else {
            None
        }
    }

    pub fn add_assign(&mut self, other: &GradedVector) {
        for (k, coords) in &other.components {
            match self.components.get_mut(k) {
                Some(mine) => {
                    for (a, b) in mine.iter_mut().zip(coords) {
                        *a += b;
                    }
                    if is_zero_vec(mine) {
                        self.components.remove(k);
                    }
                }
                None => {
                    self.components.insert(*k, coords.clone());
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> GradedVector {
        if c.is_zero() {
            return GradedVector::zero();
        }
        let mut out = GradedVector::zero();
        for (k, coords) in &self.components {
            out.set_component(*k, coords.iter().map(|x| x * c).collect());
        }
        out
    }
}

/// Homogeneous map of graded spaces: a block per degree, sending degree k
/// to degree k + shift.
#[derive(Clone, Debug)]
pub struct GradedMap {
    shift: i64,
    blocks: BTreeMap<i64, Matrix>,
}

impl GradedMap {
    pub fn new(shift: i64) -> Self {
        GradedMap {
            shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn set_block(&mut self, degree: i64, block: Matrix) {
        self.blocks.insert(degree, block);
    }

    pub fn block(&self, degree: i64) -> Option<&Matrix> {
        self.blocks.get(&degree)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.blocks.keys().copied()
    }

    /// Applies the map; the flag is set when a nonzero component would land
    /// outside the window and was dropped.
    pub fn apply(&self, x: &GradedVector, window: &Window) -> (GradedVector, bool) {
        let mut out = GradedVector::zero();
        let mut truncated = false;
        for (k, coords) in x.components() {
            let target = k + self.shift;
            if !window.contains(target) {
                truncated = true;
                continue;
            }
            if let Some(block) = self.blocks.get(&k) {
                let image = block.mul_vec(coords);
                let mut part = GradedVector::zero();
                part.set_component(target, image);
                out.add_assign(&part);
            }
        }
        (out, truncated)
    }

    /// self after other (degrees add).
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        let mut out = GradedMap::new(self.shift + other.shift);
        for (&k, first) in &other.blocks {
            if let Some(second) = self.blocks.get(&(k + other.shift)) {
                out.set_block(k, second.mul(first));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar;

    #[test]
    fn shift_moves_degree_zero_to_one() {
        let w = Window::new(0, 0).unwrap();
        let v = GradedSpace::concentrated(w, 0, 3).unwrap();
        let shifted = shift_space(&v, -1).unwrap();
        assert_eq!(shifted.window(), Window::new(1, 1).unwrap());
        assert_eq!(shifted.dim(1), 3);
    }

    #[test]
    fn zero_shift_is_identity() {
        let w = Window::new(-1, 2).unwrap();
        let mut v = GradedSpace::empty(w);
        v.set_component_dim(1, 2).unwrap();
        assert_eq!(shift_space(&v, 0).unwrap(), v);
    }

    #[test]
    fn shifts_compose_to_identity() {
        let w = Window::new(-2, 2).unwrap();
        let mut v = GradedSpace::empty(w);
        v.set_component_dim(0, 1).unwrap();
        v.set_component_dim(-1, 4).unwrap();
        let back = shift_space(&shift_space(&v, -1).unwrap(), 1).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn parity_is_degree_mod_two() {
        assert_eq!(parity(-3), 1);
        assert_eq!(parity(-2), 0);
        assert_eq!(parity(0), 0);
        assert_eq!(parity(5), 1);
        assert_eq!(koszul_sign(-1, 1), -1);
        assert_eq!(koszul_sign(-2, 1), 1);
    }

    #[test]
    fn apply_zero_and_identity_blocks() {
        let w = Window::new(0, 1).unwrap();
        let x = GradedVector::from_component(1, vec![scalar(2), scalar(3)]);

        let zero = GradedMap::new(-1);
        let (y, truncated) = zero.apply(&x, &w);
        assert!(y.is_zero());
        assert!(!truncated);

        let mut id = GradedMap::new(0);
        id.set_block(1, Matrix::identity(2));
        let (y, truncated) = id.apply(&x, &w);
        assert_eq!(y, x);
        assert!(!truncated);
    }

    #[test]
    fn apply_flags_window_overflow() {
        let w = Window::new(0, 1).unwrap();
        let mut down = GradedMap::new(-1);
        down.set_block(0, Matrix::identity(1));
        let x = GradedVector::from_component(0, vec![scalar(1)]);
        let (y, truncated) = down.apply(&x, &w);
        assert!(y.is_zero());
        assert!(truncated);
    }

    #[test]
    fn graded_vector_add_cancels_to_zero() {
        let x = GradedVector::from_component(2, vec![scalar(1), scalar(-1)]);
        let mut y = x.clone();
        y.add_assign(&x.scale(&scalar(-1)));
        assert!(y.is_zero());
    }
}
