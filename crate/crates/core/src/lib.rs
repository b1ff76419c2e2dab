//! Recursive Tsirelson-type operator space norms.
//!
//! The spaces `X_{C_p}`, `X_{R_p}`, `X_{OH}` and `T_{OH}` are built from a base
//! norm by the recursion
//!
//! ```text
//! ‖x‖_{n+1} = max( ‖x‖_n , θ sup ‖ (E_j x)_j ‖ )
//! ```
//!
//! over allowable families `(E_j)`. This crate evaluates those norms on finitely
//! supported vectors with matrix coefficients: exactly where a closed form
//! exists, and as certified intervals otherwise.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod allowable;
pub mod bound;
pub mod diagnostics;
pub mod engine;
pub mod error;
pub mod matrix;
pub mod rng;
pub mod schatten;
pub mod sum_spaces;
pub mod verification;
pub mod vector;

pub use error::{Error, Result};
pub use matrix::{CMatrix, Exponent};
pub use num_complex::Complex64;
pub use vector::OpVector;
