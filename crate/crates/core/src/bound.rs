//! Certified intervals and the objects that certify them.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::allowable::AllowableFamily;
use crate::matrix::CMatrix;

/// Intervals narrower than this are reported as exact values.
pub const EXACT_TOL: f64 = 1e-9;

/// A split `x_i = y_i + z_i` of a coefficient list.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Decomposition {
    pub ys: Vec<CMatrix>,
    pub zs: Vec<CMatrix>,
}

impl Decomposition {
    /// `z_i = x_i - y_i`.
    pub fn complete(xs: &[CMatrix], ys: Vec<CMatrix>) -> Self {
        let zs = xs.iter().zip(&ys).map(|(x, y)| x.sub(y)).collect();
        Decomposition { ys, zs }
    }
}

/// Recursive record of the allowable families realising a value.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilyTree {
    pub support: Vec<usize>,
    pub value: f64,
    /// `None` when the base norm is attained.
    pub family: Option<AllowableFamily>,
    pub children: Vec<FamilyTree>,
}

impl FamilyTree {
    pub fn depth(&self) -> usize {
        self.children.iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }
}

/// What certifies the lower end of a [`NormBound`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Witness {
    /// Both ends come from a closed formula.
    ClosedForm,
    /// Best decomposition found; its value is the upper end.
    Decomposition(Decomposition),
    /// A unit scalar sequence `ξ` attaining the lower end.
    UnitVector(Vec<Complex64>),
    /// Maximising families of a recursion.
    Tree(FamilyTree),
    /// A chain of families applied in turn; `leaves` are the final index groups.
    Chain {
        families: Vec<AllowableFamily>,
        leaves: Vec<Vec<usize>>,
    },
}

/// A certified interval `[lower, upper]` containing a norm.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormBound {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    pub witness: Witness,
}

impl NormBound {
    /// Builds an interval. A lower end that overshoots the upper end by rounding
    /// is pulled back onto it.
    pub fn new(lower: f64, upper: f64, witness: Witness) -> Self {
        let upper = upper.max(0.0);
        let lower = lower.max(0.0).min(upper);
        NormBound {
            lower,
            upper,
            exact: upper - lower <= EXACT_TOL,
            witness,
        }
    }

    pub fn exact(value: f64, witness: Witness) -> Self {
        NormBound::new(value, value, witness)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, value: f64, slack: f64) -> bool {
        self.lower - slack <= value && value <= self.upper + slack
    }
}
