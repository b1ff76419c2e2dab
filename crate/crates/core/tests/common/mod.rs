#![allow(dead_code)]

use nalgebra::DMatrix;
use proptest::prelude::*;
use tsirelson_core::{CMatrix, Complex64};

pub fn to_na(m: &CMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

pub fn from_na(m: &DMatrix<Complex64>) -> CMatrix {
    let data = (0..m.nrows())
        .flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)]))
        .collect();
    CMatrix::new(m.nrows(), m.ncols(), data).unwrap()
}

/// Singular values by nalgebra, decreasing.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().cloned().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

pub fn schatten(m: &DMatrix<Complex64>, p: f64) -> f64 {
    let s = singular_values(m);
    if p.is_infinite() {
        s.first().cloned().unwrap_or(0.0)
    } else {
        s.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

pub fn vstack(xs: &[CMatrix]) -> DMatrix<Complex64> {
    let (r, c) = xs[0].shape();
    DMatrix::from_fn(r * xs.len(), c, |i, j| xs[i / r][(i % r, j)])
}

pub fn hstack(xs: &[CMatrix]) -> DMatrix<Complex64> {
    let (r, c) = xs[0].shape();
    DMatrix::from_fn(r, c * xs.len(), |i, j| xs[j / c][(i, j % c)])
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

prop_compose! {
    pub fn arb_matrix(max_rows: usize, max_cols: usize)
        (rows in 1..=max_rows, cols in 1..=max_cols)
        (data in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), rows * cols), rows in Just(rows), cols in Just(cols))
        -> CMatrix {
        CMatrix::new(rows, cols, data.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap()
    }
}

prop_compose! {
    /// `n` matrices of one random shape.
    pub fn arb_coeffs(max_n: usize, max_rows: usize, max_cols: usize)
        (n in 1..=max_n, rows in 1..=max_rows, cols in 1..=max_cols)
        (data in proptest::collection::vec(proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), rows * cols), n),
         rows in Just(rows), cols in Just(cols))
        -> Vec<CMatrix> {
        data.into_iter()
            .map(|d| CMatrix::new(rows, cols, d.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
            .collect()
    }
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
