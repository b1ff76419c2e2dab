//! Finitely supported sequences `x = ∑ x_i ⊗ t_i` with matrix coefficients.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Relative tolerance used to pick the reference entry of a coefficient when
/// normalising phases; entries within this factor of the largest count as tied.
const PHASE_TIE: f64 = 1e-9;

/// A finitely supported sequence of matrix coefficients sharing one shape.
///
/// Only nonzero coefficients are stored, so the key set is exactly the support.
#[derive(Debug, Clone, PartialEq)]
pub struct OpVector {
    shape: (usize, usize),
    coeffs: BTreeMap<usize, CMatrix>,
}

impl OpVector {
    /// The zero vector with coefficients of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyShape);
        }
        Ok(OpVector {
            shape: (rows, cols),
            coeffs: BTreeMap::new(),
        })
    }

    /// Builds a vector from `(index, coefficient)` pairs.
    ///
    /// Coefficients of different shapes are zero-padded to the componentwise
    /// maximum shape. Repeated indices are summed.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, CMatrix)>,
    {
        let pairs: Vec<(usize, CMatrix)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(Error::Empty);
        }
        let rows = pairs.iter().map(|(_, m)| m.rows()).max().unwrap_or(1);
        let cols = pairs.iter().map(|(_, m)| m.cols()).max().unwrap_or(1);
        let mut out = OpVector::zero(rows, cols)?;
        for (i, m) in pairs {
            if i == 0 {
                return Err(Error::ZeroIndex);
            }
            let m = m.pad_to(rows, cols);
            let sum = match out.coeffs.remove(&i) {
                Some(prev) => prev.add(&m),
                None => m,
            };
            out.put(i, sum);
        }
        Ok(out)
    }

    /// Scalar (1x1) coefficients.
    pub fn from_scalars<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Complex64)>,
    {
        let mut out = OpVector::zero(1, 1)?;
        for (i, z) in pairs {
            if i == 0 {
                return Err(Error::ZeroIndex);
            }
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite);
            }
            let prev = out.get(i).map_or(Complex64::new(0.0, 0.0), |m| m[(0, 0)]);
            out.put(i, CMatrix::scalar(prev + z));
        }
        Ok(out)
    }

    /// Real scalar coefficients `values[j]` at index `j + 1`.
    pub fn from_real_sequence(values: &[f64]) -> Result<Self> {
        OpVector::from_scalars(
            values
                .iter()
                .enumerate()
                .map(|(j, &v)| (j + 1, Complex64::new(v, 0.0))),
        )
    }

    /// Sets coefficient `i`, dropping it when zero.
    pub fn insert(&mut self, i: usize, m: CMatrix) -> Result<()> {
        if i == 0 {
            return Err(Error::ZeroIndex);
        }
        if m.shape() != self.shape {
            return Err(Error::ShapeMismatch {
                expected: self.shape,
                found: m.shape(),
            });
        }
        self.put(i, m);
        Ok(())
    }

    fn put(&mut self, i: usize, m: CMatrix) {
        if m.is_zero() {
            self.coeffs.remove(&i);
        } else {
            self.coeffs.insert(i, m);
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn is_scalar(&self) -> bool {
        self.shape == (1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&CMatrix> {
        self.coeffs.get(&i)
    }

    /// Sorted support.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(index, coefficient)` in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &CMatrix)> {
        self.coeffs.iter().map(|(&i, m)| (i, m))
    }

    /// Coefficients in support order.
    pub fn matrices(&self) -> Vec<CMatrix> {
        self.coeffs.values().cloned().collect()
    }

    /// Scalar coefficients in support order. Panics unless the shape is 1x1.
    pub fn scalars(&self) -> Vec<Complex64> {
        assert!(self.is_scalar(), "scalars() on matrix coefficients");
        self.coeffs.values().map(|m| m[(0, 0)]).collect()
    }

    /// `Ex`: the coefficients with index in `set`.
    pub fn restrict<I: IntoIterator<Item = usize>>(&self, set: I) -> OpVector {
        let mut out = OpVector {
            shape: self.shape,
            coeffs: BTreeMap::new(),
        };
        for i in set {
            if let Some(m) = self.coeffs.get(&i) {
                out.coeffs.insert(i, m.clone());
            }
        }
        out
    }

    /// Coefficients with index in `lo..=hi`.
    pub fn restrict_range(&self, lo: usize, hi: usize) -> OpVector {
        OpVector {
            shape: self.shape,
            coeffs: self
                .coeffs
                .range(lo..=hi)
                .map(|(&i, m)| (i, m.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &OpVector) -> Result<OpVector> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                expected: self.shape,
                found: other.shape,
            });
        }
        let mut out = self.clone();
        for (&i, m) in &other.coeffs {
            let sum = match out.coeffs.remove(&i) {
                Some(prev) => prev.add(m),
                None => m.clone(),
            };
            out.put(i, sum);
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> OpVector {
        let mut out = OpVector {
            shape: self.shape,
            coeffs: BTreeMap::new(),
        };
        for (&i, m) in &self.coeffs {
            out.put(i, m.scale(s));
        }
        out
    }

    pub fn scale_real(&self, s: f64) -> OpVector {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Coefficientwise adjoint, the symmetry exchanging rows and columns.
    pub fn adjoint(&self) -> OpVector {
        OpVector {
            shape: (self.shape.1, self.shape.0),
            coeffs: self.coeffs.iter().map(|(&i, m)| (i, m.adjoint())).collect(),
        }
    }

    /// `∑ a_i x_i ⊗ t_i`; indices missing from `phases` keep multiplier 1.
    pub fn phased(&self, phases: &BTreeMap<usize, Complex64>) -> OpVector {
        let mut out = self.clone();
        for (i, a) in phases {
            if let Some(m) = self.coeffs.get(i) {
                out.put(*i, m.scale(*a));
            }
        }
        out
    }

    /// Same support and data moved into the top-left corner of a larger shape.
    pub fn padded(&self, rows: usize, cols: usize) -> OpVector {
        OpVector {
            shape: (rows.max(self.shape.0), cols.max(self.shape.1)),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&i, m)| (i, m.pad_to(rows.max(self.shape.0), cols.max(self.shape.1))))
                .collect(),
        }
    }

    /// Rotates every coefficient by a unimodular scalar so that its reference
    /// entry (the first entry, row-major, whose modulus ties the largest) is
    /// real and positive. Returns the rotated vector and the multipliers used.
    ///
    /// Every norm in this crate is invariant under such rotations, so engines
    /// work on this representative.
    pub fn canonical_phases(&self) -> (OpVector, BTreeMap<usize, Complex64>) {
        let mut phases = BTreeMap::new();
        let mut out = self.clone();
        for (&i, m) in &self.coeffs {
            let a = canonical_phase(m);
            phases.insert(i, a);
            out.coeffs.insert(i, m.scale(a));
        }
        (out, phases)
    }
}

/// Unimodular `a` making the reference entry of `a·m` real positive.
pub fn canonical_phase(m: &CMatrix) -> Complex64 {
    let top = m.max_abs();
    if top == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let z = m
        .data()
        .iter()
        .find(|z| z.norm() >= top * (1.0 - PHASE_TIE))
        .cloned()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let a = z.conj() / z.norm();
    a / a.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn support_tracks_nonzero() {
        let x = OpVector::from_scalars([(1, c(1.0, 0.0)), (3, c(0.0, 0.0)), (4, c(0.0, 2.0))]).unwrap();
        assert_eq!(x.support(), vec![1, 4]);
        assert!(OpVector::from_scalars([(0, c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn restrict_partition_reassembles() {
        let x = OpVector::from_real_sequence(&[1.0, -2.0, 3.0, 0.5]).unwrap();
        assert!(x.restrict([]).is_zero());
        assert_eq!(x.restrict(x.support()), x);
        let a = x.restrict([1, 3]);
        let b = x.restrict([2, 4]);
        assert_eq!(a.add(&b).unwrap(), x);
        assert_eq!(x.restrict([2, 9]).support(), vec![2]);
    }

    #[test]
    fn mixed_shapes_are_padded() {
        let x = OpVector::from_pairs([
            (1, CMatrix::scalar(c(1.0, 0.0))),
            (2, CMatrix::identity(2)),
        ])
        .unwrap();
        assert_eq!(x.shape(), (2, 2));
        assert_eq!(x.get(1).unwrap(), &CMatrix::unit(2, 2, 0, 0));
        assert_eq!(x.support(), vec![1, 2]);
    }

    #[test]
    fn canonical_phase_is_positive() {
        let m = CMatrix::new(1, 2, vec![c(0.0, 0.5), c(0.0, -2.0)]).unwrap();
        let x = OpVector::from_pairs([(2, m)]).unwrap();
        let (y, _) = x.canonical_phases();
        let r = y.get(2).unwrap()[(0, 1)];
        assert!((r.re - 2.0).abs() < 1e-15 && r.im.abs() < 1e-15);
    }
}
