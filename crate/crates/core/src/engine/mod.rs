//! The recursive norms of `X_{C_p}`, `X_{R_p}`, `X_{OH}` and `T_{OH}`.
//!
//! Each engine reports the level sequence `‖x‖_0 ≤ ‖x‖_1 ≤ …` as a
//! [`RecursionTrace`] together with a certified interval for the limit norm.
//!
//! * `T_{OH}` (scalar coefficients) and `X_{OH}` at the `S_2` level recurse over
//!   subsets of the support with an ℓ₂ combination over the family, which is
//!   evaluated exactly as a maximum-weight set partition.
//! * `X_{OH}` at the operator level propagates upper bounds the same way and
//!   keeps the base lower bound.
//! * `X_{C_p}` works at the `S_p` level: the interval runs from the best chain
//!   of families found (see [`xcp`]) to the `S_p(C_p)` norm.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::allowable::{AllowableFamily, Budget};
use crate::bound::NormBound;
use crate::error::{Error, Result};
use crate::sum_spaces::SolverOptions;
use crate::vector::OpVector;

mod oh;
mod recursion;
pub mod xcp;

pub use oh::{toh_scalar_norm, xoh_norm_bounds};
pub use xcp::xcp_norm_bounds;

/// Which construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Variant {
    XCp,
    XRp,
    XOh,
    TOh,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::XCp => "xcp",
            Variant::XRp => "xrp",
            Variant::XOh => "xoh",
            Variant::TOh => "toh",
        }
    }

    /// Whether the exponent `p` is a parameter (it is fixed to 2 for the OH variants).
    pub fn uses_p(self) -> bool {
        matches!(self, Variant::XCp | Variant::XRp)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xcp" => Ok(Variant::XCp),
            "xrp" => Ok(Variant::XRp),
            "xoh" => Ok(Variant::XOh),
            "toh" => Ok(Variant::TOh),
            other => Err(Error::Precondition(alloc::format!("unknown variant {other:?}"))),
        }
    }
}

/// Matrix level at which a norm is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Level {
    /// `B(ℓ_2) ⊗_min X`.
    Operator,
    /// `S_2[X]`.
    S2,
    /// `S_p[X]`.
    Sp,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Operator => "operator",
            Level::S2 => "s2",
            Level::Sp => "sp",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "operator" => Ok(Level::Operator),
            "s2" => Ok(Level::S2),
            "sp" => Ok(Level::Sp),
            other => Err(Error::Precondition(alloc::format!("unknown level {other:?}"))),
        }
    }
}

/// Parameters of a construction and of its evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSpec {
    pub variant: Variant,
    /// Exponent for `X_{C_p}` / `X_{R_p}`; 2 for the OH variants.
    pub p: f64,
    pub theta: f64,
    pub budget: Budget,
    /// Largest recursion level computed.
    pub max_depth: usize,
    /// Consecutive levels closer than this count as equal.
    pub tol: f64,
    /// Longest chain of families searched for `X_{C_p}` lower bounds.
    pub chain_depth: usize,
    /// Largest support accepted.
    pub support_cap: usize,
    pub solver: SolverOptions,
}

impl SpaceSpec {
    pub fn new(variant: Variant, p: f64, theta: f64) -> Result<Self> {
        let spec = SpaceSpec {
            variant,
            p: if variant.uses_p() { p } else { 2.0 },
            theta,
            budget: Budget::Tsirelson,
            max_depth: 32,
            tol: 1e-9,
            chain_depth: 3,
            support_cap: 12,
            solver: SolverOptions::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn t_oh(theta: f64) -> Result<Self> {
        SpaceSpec::new(Variant::TOh, 2.0, theta)
    }

    pub fn x_oh(theta: f64) -> Result<Self> {
        SpaceSpec::new(Variant::XOh, 2.0, theta)
    }

    pub fn x_cp(p: f64, theta: f64) -> Result<Self> {
        SpaceSpec::new(Variant::XCp, p, theta)
    }

    pub fn x_rp(p: f64, theta: f64) -> Result<Self> {
        SpaceSpec::new(Variant::XRp, p, theta)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::InvalidTheta(self.theta));
        }
        if self.variant.uses_p() && !(1.0..2.0).contains(&self.p) {
            return Err(Error::ExponentOutOfRange {
                p: self.p,
                variant: self.variant.name(),
            });
        }
        if !(self.tol > 0.0) {
            return Err(Error::Precondition(alloc::format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }

    /// The level an engine uses when none is requested.
    pub fn default_level(&self) -> Level {
        match self.variant {
            Variant::XCp | Variant::XRp => Level::Sp,
            Variant::XOh | Variant::TOh => Level::S2,
        }
    }
}

/// One level `n` of the recursion.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceLevel {
    pub n: usize,
    pub bound: NormBound,
    /// Family maximising the recursive branch at this level (none at level 0).
    pub family: Option<AllowableFamily>,
    /// Whether the recursive branch exceeds the base norm here.
    pub binding: bool,
}

/// The sequence of level bounds of a recursion.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecursionTrace {
    pub levels: Vec<TraceLevel>,
    /// First level from which every computed level agrees within the tolerance;
    /// `None` when the computation stopped before a fixed point was certified.
    pub stabilized_at: Option<usize>,
}

impl RecursionTrace {
    pub fn last(&self) -> &TraceLevel {
        self.levels.last().expect("a trace always has level 0")
    }

    /// Bound at level `n`, or the last computed level when `n` is beyond it
    /// and the trace stabilised.
    pub fn level(&self, n: usize) -> Option<&NormBound> {
        match self.levels.get(n) {
            Some(l) => Some(&l.bound),
            None if self.stabilized_at.is_some() => Some(&self.last().bound),
            None => None,
        }
    }
}

/// Interval for the limit norm plus the level trace.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EngineOutput {
    pub bound: NormBound,
    pub trace: RecursionTrace,
}

impl EngineOutput {
    /// Certified interval for `‖x‖_n` at any `n`.
    ///
    /// Beyond the computed levels the last level is a lower end (levels only
    /// grow) and the interval for the limit norm is an upper end.
    pub fn level_bound(&self, n: usize) -> NormBound {
        match self.trace.levels.get(n) {
            Some(l) => l.bound.clone(),
            None => {
                let last = &self.trace.last().bound;
                if self.trace.stabilized_at.is_some() && last.upper <= self.bound.upper {
                    last.clone()
                } else {
                    NormBound::new(last.lower, self.bound.upper, last.witness.clone())
                }
            }
        }
    }
}

/// Evaluates `x` with the engine selected by `spec.variant` at `level`.
pub fn norm_bounds(x: &OpVector, spec: &SpaceSpec, level: Level) -> Result<EngineOutput> {
    spec.validate()?;
    match spec.variant {
        Variant::TOh => toh_scalar_norm(x, spec),
        Variant::XOh => xoh_norm_bounds(x, spec, level),
        Variant::XCp | Variant::XRp => {
            if level != Level::Sp {
                return Err(Error::Precondition(alloc::format!(
                    "{} is evaluated at the sp level only",
                    spec.variant
                )));
            }
            xcp_norm_bounds(x, spec)
        }
    }
}

/// Level trace at the variant's default level.
pub fn norm_trace(x: &OpVector, spec: &SpaceSpec) -> Result<RecursionTrace> {
    Ok(norm_bounds(x, spec, spec.default_level())?.trace)
}

/// First index from which all values agree with it within `tol`.
pub(crate) fn stabilization_index(lows: &[f64], highs: &[f64], tol: f64) -> usize {
    let n = lows.len();
    let mut start = n.saturating_sub(1);
    while start > 0 {
        let j = start - 1;
        let same = (j..n).all(|m| (lows[m] - lows[j]).abs() <= tol && (highs[m] - highs[j]).abs() <= tol);
        if same {
            start = j;
        } else {
            break;
        }
    }
    start
}

pub(crate) fn check_support(x: &OpVector, spec: &SpaceSpec) -> Result<()> {
    if x.len() > spec.support_cap {
        return Err(Error::SupportTooLarge {
            size: x.len(),
            cap: spec.support_cap,
        });
    }
    Ok(())
}
