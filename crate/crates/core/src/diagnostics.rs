//! One-sided estimators for 2-summing type quantities of maps between
//! concrete matrix spaces.
//!
//! Everything here is a lower bound found by search; nothing certifies the
//! other side.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::rng::{complex_gaussian, seeded_stream};
#[allow(unused_imports)]
use num_traits::Float;

/// Smallest accepted singular value of the Gram matrix, relative to the largest.
pub const GRAM_TOL: f64 = 1e-10;

/// A subspace `E ⊆ M_{rows×cols}` given by a linearly independent basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcreteSubspace {
    rows: usize,
    cols: usize,
    basis: Vec<CMatrix>,
}

impl ConcreteSubspace {
    pub fn new(basis: Vec<CMatrix>) -> Result<Self> {
        let first = basis.first().ok_or(Error::Empty)?;
        let (rows, cols) = first.shape();
        for b in &basis {
            if b.shape() != (rows, cols) {
                return Err(Error::ShapeMismatch {
                    expected: (rows, cols),
                    found: b.shape(),
                });
            }
        }
        let gram = gram(&basis);
        let s = gram.singular_values();
        let top = s.first().copied().unwrap_or(0.0);
        let bottom = s.last().copied().unwrap_or(0.0);
        if !(top > 0.0 && bottom > GRAM_TOL * top.max(1.0)) {
            return Err(Error::Precondition(alloc::format!(
                "basis is linearly dependent (Gram singular values {top:e} .. {bottom:e})"
            )));
        }
        Ok(ConcreteSubspace { rows, cols, basis })
    }

    pub fn ambient(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `∑_l c_l b_l`.
    pub fn combine(&self, c: &[Complex64]) -> CMatrix {
        combine(&self.basis, c)
    }
}

/// A linear map on a [`ConcreteSubspace`], given by the images of the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    pub domain: ConcreteSubspace,
    pub images: Vec<CMatrix>,
}

impl LinearMap {
    pub fn new(domain: ConcreteSubspace, images: Vec<CMatrix>) -> Result<Self> {
        if images.len() != domain.dim() {
            return Err(Error::Precondition(alloc::format!(
                "{} images for a {}-dimensional domain",
                images.len(),
                domain.dim()
            )));
        }
        if let Some(first) = images.first() {
            for m in &images {
                if m.shape() != first.shape() {
                    return Err(Error::ShapeMismatch {
                        expected: first.shape(),
                        found: m.shape(),
                    });
                }
            }
        }
        Ok(LinearMap { domain, images })
    }

    /// The identity of `domain`.
    pub fn identity(domain: ConcreteSubspace) -> Self {
        let images = domain.basis().to_vec();
        LinearMap { domain, images }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        LinearMap {
            domain: self.domain.clone(),
            images: self.images.iter().map(|m| m.scale(c)).collect(),
        }
    }

    /// Image of `∑_l c_l b_l`.
    pub fn apply(&self, c: &[Complex64]) -> CMatrix {
        combine(&self.images, c)
    }
}

fn combine(ms: &[CMatrix], c: &[Complex64]) -> CMatrix {
    let (r, k) = ms[0].shape();
    let mut acc = CMatrix::zeros(r, k);
    for (m, &w) in ms.iter().zip(c) {
        acc = acc.add(&m.scale(w));
    }
    acc
}

fn gram(basis: &[CMatrix]) -> CMatrix {
    let n = basis.len();
    let mut data = Vec::with_capacity(n * n);
    for a in basis {
        for b in basis {
            data.push(a.dot(b));
        }
    }
    CMatrix::new(n, n, data).expect("finite Gram entries")
}

/// `‖(∑_k X_k^* X_k)^{1/2}‖`, the cb norm of the map `R_n → M_N` sending
/// `e_k` to `X_k` (equivalently, the norm of the column with entries `X_k`).
pub fn cb_norm_from_column(images: &[CMatrix]) -> Result<f64> {
    if images.is_empty() {
        return Err(Error::Empty);
    }
    Ok(CMatrix::vstack(images)?.operator_norm())
}

/// `‖(∑_k X_k X_k^*)^{1/2}‖`, the cb norm of the map `C_n → M_N` sending `e_k` to `X_k`.
pub fn cb_norm_from_row(images: &[CMatrix]) -> Result<f64> {
    if images.is_empty() {
        return Err(Error::Empty);
    }
    Ok(CMatrix::hstack(images)?.operator_norm())
}

/// Which Hilbertian space `H`; maps are taken from its dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Hilbertian {
    /// `H = C`, so `S : R → E` with the column formula.
    Column,
    /// `H = R`, so `S : C → E` with the row formula.
    Row,
}

impl Hilbertian {
    fn cb_norm(self, images: &[CMatrix]) -> Result<f64> {
        match self {
            Hilbertian::Column => cb_norm_from_column(images),
            Hilbertian::Row => cb_norm_from_row(images),
        }
    }
}

/// Result of [`pi2h_lower_estimate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Pi2hEstimate {
    /// Best quotient found. A lower bound only.
    pub value: f64,
    /// Images `S e_k` of the best map found.
    pub witness: Vec<CMatrix>,
    pub trials: usize,
    /// `(∑_l ‖T o_l‖_2²)^{1/2} √d` over a Frobenius-orthonormal basis `(o_l)` of `E`,
    /// with `d` the ambient size on the side the cb formula sums over.
    /// No quotient can exceed it.
    pub cap: f64,
    pub lower_bound_only: bool,
}

/// Local improvement steps per trial.
const CLIMB_STEPS: usize = 40;

/// Lower estimate of `π_{2,H}(T) = sup (∑_k ‖T S e_k‖²)^{1/2} / ‖S : H^* → E‖_cb`.
///
/// Trial 0 is the map sending `e_k` to the `k`-th basis vector; trial `t ≥ 1`
/// starts from a Gaussian map drawn from stream `t` of `seed`. Each trial is
/// improved by random perturbations with a shrinking step, and the best
/// quotient over all trials is returned, so more trials never give less.
pub fn pi2h_lower_estimate(t: &LinearMap, h: Hilbertian, trials: usize, seed: u64) -> Result<Pi2hEstimate> {
    let dim = t.domain.dim();
    let quotient = |c: &[Vec<Complex64>]| -> Result<Option<(f64, Vec<CMatrix>)>> {
        let s: Vec<CMatrix> = c.iter().map(|row| t.domain.combine(row)).collect();
        let cb = h.cb_norm(&s)?;
        if !(cb >= 1e-12) {
            return Ok(None);
        }
        let num = c.iter().map(|row| t.apply(row).operator_norm().powi(2)).sum::<f64>().sqrt();
        Ok(Some((num / cb, s)))
    };

    let mut best = (0.0, t.domain.basis().to_vec());
    for trial in 0..trials.max(1) {
        let mut rng = seeded_stream(seed, trial as u64);
        let mut c: Vec<Vec<Complex64>> = if trial == 0 {
            (0..dim)
                .map(|k| (0..dim).map(|l| Complex64::new(if k == l { 1.0 } else { 0.0 }, 0.0)).collect())
                .collect()
        } else {
            (0..dim).map(|_| (0..dim).map(|_| complex_gaussian(&mut rng)).collect()).collect()
        };
        let Some(mut cur) = quotient(&c)? else {
            continue;
        };
        let mut step = 0.5;
        for _ in 0..CLIMB_STEPS {
            let cand: Vec<Vec<Complex64>> = c
                .iter()
                .map(|row| row.iter().map(|&z| z + complex_gaussian(&mut rng) * step).collect())
                .collect();
            match quotient(&cand)? {
                Some(q) if q.0 > cur.0 => {
                    c = cand;
                    cur = q;
                }
                _ => step *= 0.7,
            }
        }
        if cur.0 > best.0 {
            best = cur;
        }
    }

    Ok(Pi2hEstimate {
        value: best.0,
        witness: best.1,
        trials: trials.max(1),
        cap: sanity_cap(t, h),
        lower_bound_only: true,
    })
}

/// See [`Pi2hEstimate::cap`].
fn sanity_cap(t: &LinearMap, h: Hilbertian) -> f64 {
    // Gram-Schmidt in the trace inner product, tracking coefficients.
    let basis = t.domain.basis();
    let dim = basis.len();
    let mut ortho: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for l in 0..dim {
        let mut c = alloc::vec![Complex64::new(0.0, 0.0); dim];
        c[l] = Complex64::new(1.0, 0.0);
        for o in &ortho {
            let proj = t.domain.combine(o).dot(&basis[l]);
            for (ci, oi) in c.iter_mut().zip(o) {
                *ci -= proj * oi;
            }
        }
        let norm = t.domain.combine(&c).frobenius();
        ortho.push(c.into_iter().map(|z| z / norm).collect());
    }
    let hs = ortho.iter().map(|o| t.apply(o).frobenius().powi(2)).sum::<f64>().sqrt();
    let (rows, cols) = t.domain.ambient();
    let side = match h {
        Hilbertian::Column => cols,
        Hilbertian::Row => rows,
    };
    hs * (side as f64).sqrt()
}
