//! Schatten norms and the closed-form vector-valued norms at the `S_p` level.
//!
//! For coefficients `x_1, …, x_n` of a common shape:
//!
//! * `S_p(C_p)`: `‖(∑ x_i^* x_i)^{1/2}‖_p`, the Schatten norm of the column stack;
//! * `S_p(R_p)`: `‖(∑ x_i x_i^*)^{1/2}‖_p`, the Schatten norm of the row stack;
//! * `S_p(ℓ_p)`: `(∑ ‖x_i‖_p^p)^{1/p}`.

use alloc::vec::Vec;


use crate::error::{Error, Result};
use crate::matrix::{CMatrix, Exponent};
#[allow(unused_imports)]
use num_traits::Float;

/// `(∑ σ_i^p)^{1/p}` of nonnegative values, or the largest for `p = ∞`.
pub fn schatten_of_values(values: &[f64], p: Exponent) -> f64 {
    p.lp_combine(values.iter().cloned())
}

/// `∑ σ_i^p` for finite `p`.
pub fn schatten_pow(values: &[f64], p: f64) -> f64 {
    values.iter().map(|s| s.powf(p)).sum()
}

/// Schatten-`p` norm of a matrix.
pub fn schatten_norm(a: &CMatrix, p: Exponent) -> f64 {
    schatten_of_values(&a.singular_values(), p)
}

/// Schatten-`p` norm with `p` given as a float; rejects `p < 1` and NaN.
pub fn schatten_norm_f64(a: &CMatrix, p: f64) -> Result<f64> {
    Ok(schatten_norm(a, Exponent::new(p)?))
}

/// Norm of `∑ x_i ⊗ e_{i1}` in `S_p(C_p)`.
pub fn sp_cp_norm(xs: &[CMatrix], p: Exponent) -> Result<f64> {
    Ok(schatten_norm(&CMatrix::vstack(xs)?, p))
}

/// Norm of `∑ x_i ⊗ e_{1i}` in `S_p(R_p)`.
pub fn sp_rp_norm(xs: &[CMatrix], p: Exponent) -> Result<f64> {
    Ok(schatten_norm(&CMatrix::hstack(xs)?, p))
}

/// Norm of `∑ x_i ⊗ e_i` in `S_p(ℓ_p)`.
pub fn sp_lp_norm(xs: &[CMatrix], p: Exponent) -> Result<f64> {
    check_shapes(xs)?;
    Ok(p.lp_combine(xs.iter().map(|x| schatten_norm(x, p))))
}

/// `‖(∑ x_i^* x_i)^{1/2}‖_p` through the positive square root of `∑ x_i^* x_i`.
///
/// Squares the condition number, so it is kept as a cross-check for
/// [`sp_cp_norm`] rather than used by the engines.
pub fn sp_cp_norm_sqrt_form(xs: &[CMatrix], p: Exponent) -> Result<f64> {
    let (_, cols) = check_shapes(xs)?;
    let mut gram = CMatrix::zeros(cols, cols);
    for x in xs {
        gram = gram.add(&x.adjoint().mul(x));
    }
    // Singular values of a positive matrix are its eigenvalues.
    let roots: Vec<f64> = gram.singular_values().iter().map(|e| e.max(0.0).sqrt()).collect();
    Ok(schatten_of_values(&roots, p))
}

/// `‖∑ x_i ⊗ t_i‖` in `S_2(OH)`, which is `(∑ ‖x_i‖_2^2)^{1/2}`.
pub fn oh_s2_norm(xs: &[CMatrix]) -> Result<f64> {
    check_shapes(xs)?;
    Ok(Exponent::Finite(2.0).lp_combine(xs.iter().map(CMatrix::frobenius)))
}

/// `‖∑ x_i ⊗ t_i‖` in `B(ℓ_2) ⊗_min OH`, which is `‖∑ x_i ⊗ x̄_i‖^{1/2}`.
pub fn oh_operator_norm(xs: &[CMatrix]) -> Result<f64> {
    let (r, c) = check_shapes(xs)?;
    let mut acc = CMatrix::zeros(r * r, c * c);
    for x in xs {
        acc = acc.add(&x.kron(&x.conj()));
    }
    Ok(acc.operator_norm().sqrt())
}

/// Largest `‖∑ ξ̄_i x_i‖_2` over unit `ξ`, i.e. the largest singular value of
/// the matrix whose columns are the vectorised `x_i`.
pub fn max_s2_functional(xs: &[CMatrix]) -> Result<f64> {
    let (r, c) = check_shapes(xs)?;
    let mut m = CMatrix::zeros(r * c, xs.len());
    for (j, x) in xs.iter().enumerate() {
        for (i, z) in x.vec_column().into_iter().enumerate() {
            m[(i, j)] = z;
        }
    }
    Ok(m.operator_norm())
}

pub(crate) fn check_shapes(xs: &[CMatrix]) -> Result<(usize, usize)> {
    let first = xs.first().ok_or(Error::Empty)?;
    let shape = first.shape();
    for x in xs {
        if x.shape() != shape {
            return Err(Error::ShapeMismatch {
                expected: shape,
                found: x.shape(),
            });
        }
    }
    Ok(shape)
}
