//! Dense complex matrices and their singular value decomposition.
//!
//! Matrices here are small (the engines never go past 64x64), so the SVD is a
//! one-sided Jacobi sweep over columns. It is slower than bidiagonalization
//! but accurate to working precision for every singular value, including the
//! tiny ones that decide ranks.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Singular values below this (relative to the largest) are treated as zero.
pub const RANK_TOL: f64 = 1e-12;

const JACOBI_EPS: f64 = 1e-15;
const MAX_SWEEPS: usize = 80;

/// Schatten exponent `p` in `[1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            Ok(Exponent::Infinity)
        } else {
            Ok(Exponent::Finite(p))
        }
    }

    /// The Hölder conjugate `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(1.0) => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    /// `(∑ v_i^p)^{1/p}` (or the max) of nonnegative values, scaled against overflow.
    pub fn lp_combine<I: IntoIterator<Item = f64>>(self, values: I) -> f64 {
        let values: Vec<f64> = values.into_iter().collect();
        let top = values.iter().cloned().fold(0.0, f64::max);
        match self {
            Exponent::Infinity => top,
            Exponent::Finite(_) if top == 0.0 => 0.0,
            Exponent::Finite(p) => {
                let s: f64 = values.iter().map(|v| (v / top).powf(p)).sum();
                top * s.powf(1.0 / p)
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{}", p),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// A dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                let z = self[(r, c)];
                write!(f, "{}{:+}i", z.re, z.im)?;
            }
        }
        write!(f, "]")
    }
}

impl core::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyShape);
        }
        if data.len() != rows * cols {
            return Err(Error::DataLength {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DataLength {
                expected: r * c,
                found: rows.iter().map(Vec::len).sum(),
            });
        }
        CMatrix::new(r, c, rows.iter().flatten().cloned().collect())
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        CMatrix::new(rows, cols, data.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Matrix unit `e_{ij}` (zero-based) of the given shape.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = CMatrix::zeros(rows, cols);
        m[(i, j)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn scalar(z: Complex64) -> Self {
        CMatrix {
            rows: 1,
            cols: 1,
            data: vec![z],
        }
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        debug_assert_eq!(self.shape(), other.shape());
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        debug_assert_eq!(self.shape(), other.shape());
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// `self + s * other`
    pub fn axpy(&self, s: f64, other: &CMatrix) -> CMatrix {
        debug_assert_eq!(self.shape(), other.shape());
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b * s)
                .collect(),
        }
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other[(k, c)];
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        let mut out = CMatrix::zeros(r1 * r2, c1 * c2);
        for a in 0..r1 {
            for b in 0..c1 {
                let s = self[(a, b)];
                for i in 0..r2 {
                    for j in 0..c2 {
                        out[(a * r2 + i, b * c2 + j)] = s * other[(i, j)];
                    }
                }
            }
        }
        out
    }

    /// Real inner product `Re tr(self^* other)`.
    pub fn real_dot(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    /// Frobenius inner product `tr(self^* other)`.
    pub fn dot(&self, other: &CMatrix) -> Complex64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Embed into the top-left corner of a larger zero matrix.
    pub fn pad_to(&self, rows: usize, cols: usize) -> CMatrix {
        assert!(rows >= self.rows && cols >= self.cols);
        let mut out = CMatrix::zeros(rows, cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)];
            }
        }
        out
    }

    /// Block rows `[x_1; x_2; …]`. All blocks must share a shape.
    pub fn vstack(blocks: &[CMatrix]) -> Result<CMatrix> {
        let (r, c) = common_shape(blocks)?;
        let mut data = Vec::with_capacity(blocks.len() * r * c);
        for b in blocks {
            data.extend_from_slice(&b.data);
        }
        Ok(CMatrix {
            rows: r * blocks.len(),
            cols: c,
            data,
        })
    }

    /// Block columns `[x_1 x_2 …]`. All blocks must share a shape.
    pub fn hstack(blocks: &[CMatrix]) -> Result<CMatrix> {
        let (r, c) = common_shape(blocks)?;
        let n = blocks.len();
        let mut out = CMatrix::zeros(r, c * n);
        for (k, b) in blocks.iter().enumerate() {
            for i in 0..r {
                for j in 0..c {
                    out[(i, k * c + j)] = b[(i, j)];
                }
            }
        }
        Ok(out)
    }

    /// Inverse of [`CMatrix::vstack`] for `n` equal blocks.
    pub fn vsplit(&self, n: usize) -> Vec<CMatrix> {
        assert!(n > 0 && self.rows.is_multiple_of(n));
        let r = self.rows / n;
        (0..n)
            .map(|k| CMatrix {
                rows: r,
                cols: self.cols,
                data: self.data[k * r * self.cols..(k + 1) * r * self.cols].to_vec(),
            })
            .collect()
    }

    /// Inverse of [`CMatrix::hstack`] for `n` equal blocks.
    pub fn hsplit(&self, n: usize) -> Vec<CMatrix> {
        assert!(n > 0 && self.cols.is_multiple_of(n));
        let c = self.cols / n;
        (0..n)
            .map(|k| {
                let mut m = CMatrix::zeros(self.rows, c);
                for i in 0..self.rows {
                    for j in 0..c {
                        m[(i, j)] = self[(i, k * c + j)];
                    }
                }
                m
            })
            .collect()
    }

    /// Column-stacked vectorisation.
    pub fn vec_column(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.push(self[(r, c)]);
            }
        }
        out
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.svd().s
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.singular_values().first().cloned().unwrap_or(0.0)
    }

    /// Thin SVD `self = U diag(s) V^*` with `s` sorted decreasingly.
    pub fn svd(&self) -> Svd {
        if self.rows >= self.cols {
            jacobi_svd(self)
        } else {
            let t = jacobi_svd(&self.adjoint());
            Svd {
                u: t.v,
                s: t.s,
                v: t.u,
            }
        }
    }
}

fn common_shape(blocks: &[CMatrix]) -> Result<(usize, usize)> {
    let first = blocks.first().ok_or(Error::Empty)?;
    let shape = first.shape();
    for b in blocks {
        if b.shape() != shape {
            return Err(Error::ShapeMismatch {
                expected: shape,
                found: b.shape(),
            });
        }
    }
    Ok(shape)
}

/// Thin singular value decomposition.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `m x r` with orthonormal columns (zero columns for null singular values).
    pub u: CMatrix,
    pub s: Vec<f64>,
    /// `n x r` with orthonormal columns.
    pub v: CMatrix,
}

impl Svd {
    /// `U diag(f(s)) V^*`.
    pub fn reassemble<F: Fn(f64) -> f64>(&self, f: F) -> CMatrix {
        let m = self.u.rows();
        let n = self.v.rows();
        let mut out = CMatrix::zeros(m, n);
        for (k, &sk) in self.s.iter().enumerate() {
            let w = f(sk);
            if w == 0.0 {
                continue;
            }
            for i in 0..m {
                let ui = self.u[(i, k)] * w;
                if ui.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += ui * self.v[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// One-sided (Hestenes) Jacobi on the columns of a tall matrix.
fn jacobi_svd(a: &CMatrix) -> Svd {
    let m = a.rows();
    let n = a.cols();
    let mut w: Vec<Vec<Complex64>> = (0..n).map(|c| (0..m).map(|r| a[(r, c)]).collect()).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|c| {
            let mut col = vec![Complex64::zero(); n];
            col[c] = Complex64::new(1.0, 0.0);
            col
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha: f64 = w[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[j].iter().map(|z| z.norm_sqr()).sum();
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma: Complex64 = w[i].iter().zip(&w[j]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= JACOBI_EPS * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let ph = phase.conj();
                rotate(&mut w, i, j, c, s, ph);
                rotate(&mut v, i, j, c, s, ph);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(usize, f64)> = w
        .iter()
        .enumerate()
        .map(|(k, col)| (k, col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()))
        .collect();
    order.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(core::cmp::Ordering::Equal).then(a.0.cmp(&b.0)));

    let mut u = CMatrix::zeros(m, n);
    let mut vm = CMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    let top = order.first().map_or(0.0, |o| o.1);
    for (k, &(col, sigma)) in order.iter().enumerate() {
        s.push(sigma);
        if sigma > 0.0 && sigma > top * f64::EPSILON * 1e-3 {
            for r in 0..m {
                u[(r, k)] = w[col][r] / sigma;
            }
        }
        for r in 0..n {
            vm[(r, k)] = v[col][r];
        }
    }
    Svd { u, s, v: vm }
}

/// Columns `(i, j) <- (c a_i - s ph a_j, s a_i + c ph a_j)`.
fn rotate(cols: &mut [Vec<Complex64>], i: usize, j: usize, c: f64, s: f64, ph: Complex64) {
    let (left, right) = cols.split_at_mut(j);
    let ci = &mut left[i];
    let cj = &mut right[0];
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let b = *y * ph;
        let xi = *x;
        *x = xi * c - b * s;
        *y = xi * s + b * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponent_rejects_below_one() {
        assert!(Exponent::new(0.5).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
        assert_eq!(Exponent::new(f64::INFINITY).unwrap(), Exponent::Infinity);
        assert_eq!(Exponent::Finite(1.0).conjugate(), Exponent::Infinity);
        assert_eq!(Exponent::Finite(2.0).conjugate(), Exponent::Finite(2.0));
    }

    #[test]
    fn rejects_non_finite() {
        assert_eq!(
            CMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).unwrap_err(),
            Error::NonFinite
        );
        assert!(CMatrix::new(2, 2, vec![c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn svd_reconstructs() {
        let a = CMatrix::new(
            3,
            2,
            vec![c(1.0, 2.0), c(0.5, -1.0), c(-0.3, 0.0), c(2.0, 0.1), c(0.0, 1.0), c(1.0, 1.0)],
        )
        .unwrap();
        for m in [a.clone(), a.adjoint()] {
            let svd = m.svd();
            let back = svd.reassemble(|s| s);
            for (x, y) in back.data().iter().zip(m.data()) {
                assert_abs_diff_eq!(x.re, y.re, epsilon = 1e-13);
                assert_abs_diff_eq!(x.im, y.im, epsilon = 1e-13);
            }
            assert!(svd.s[0] >= svd.s[1]);
        }
    }

    #[test]
    fn rank_deficient_svd() {
        let a = CMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        let s = a.singular_values();
        assert_abs_diff_eq!(s[0], 5.0, epsilon = 1e-13);
        assert!(s[1] < 1e-13);
    }

    #[test]
    fn stacking_round_trips() {
        let a = CMatrix::unit(2, 2, 0, 1);
        let b = CMatrix::identity(2);
        let v = CMatrix::vstack(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(v.shape(), (4, 2));
        assert_eq!(v.vsplit(2), vec![a.clone(), b.clone()]);
        let h = CMatrix::hstack(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(h.shape(), (2, 4));
        assert_eq!(h.hsplit(2), vec![a, b]);
        assert!(CMatrix::hstack(&[CMatrix::identity(1), CMatrix::identity(2)]).is_err());
    }
}
