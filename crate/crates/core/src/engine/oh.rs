//! `T_{OH}` and `X_{OH}`: recursions with an ℓ₂ combination over the family.

use alloc::format;
use alloc::vec::Vec;

use super::recursion::{Lattice, Tables};
use super::{check_support, stabilization_index, EngineOutput, Level, RecursionTrace, SpaceSpec, TraceLevel, Variant};
use crate::bound::{NormBound, Witness};
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, Exponent};
use crate::schatten::{max_s2_functional, oh_operator_norm, oh_s2_norm, sp_cp_norm, sp_rp_norm};
use crate::sum_spaces::min_l2_norm_bounds;
use crate::vector::OpVector;

fn expect_variant(spec: &SpaceSpec, variant: Variant) -> Result<()> {
    spec.validate()?;
    if spec.variant != variant {
        return Err(Error::Precondition(format!(
            "engine for {} called with variant {}",
            variant, spec.variant
        )));
    }
    Ok(())
}

fn zero_output() -> EngineOutput {
    let level = TraceLevel {
        n: 0,
        bound: NormBound::exact(0.0, Witness::ClosedForm),
        family: None,
        binding: false,
    };
    EngineOutput {
        bound: NormBound::exact(0.0, Witness::ClosedForm),
        trace: RecursionTrace {
            levels: alloc::vec![level],
            stabilized_at: Some(0),
        },
    }
}

/// Values of `f` on every nonempty subset of the support (bitmask over positions).
fn per_subset<F: FnMut(&[CMatrix]) -> Result<f64>>(xs: &[CMatrix], mut f: F) -> Result<Vec<f64>> {
    let n = xs.len();
    let mut out = alloc::vec![0.0; 1 << n];
    for (s, slot) in out.iter_mut().enumerate().skip(1) {
        let part: Vec<CMatrix> = (0..n).filter(|&j| s >> j & 1 == 1).map(|j| xs[j].clone()).collect();
        *slot = f(&part)?;
    }
    Ok(out)
}

/// Builds trace levels from per-level lower and upper values at the full support.
fn trace_from(
    tables: &Tables,
    lat: &Lattice,
    spec: &SpaceSpec,
    lows: &[f64],
    highs: &[f64],
    base_branch: f64,
) -> RecursionTrace {
    let full = lat.full();
    let mut levels = Vec::with_capacity(lows.len());
    for n in 0..lows.len() {
        let (branch, family) = if n == 0 {
            (0.0, None)
        } else {
            tables.branch(lat, spec.theta, n - 1, full)
        };
        levels.push(TraceLevel {
            n,
            bound: NormBound::new(lows[n], highs[n], Witness::ClosedForm),
            family,
            binding: n > 0 && branch > base_branch + spec.tol,
        });
    }
    let stabilized_at = tables.fixed.then(|| stabilization_index(lows, highs, spec.tol));
    RecursionTrace { levels, stabilized_at }
}

/// Exact `T_{OH}` norm of a vector with scalar coefficients.
///
/// The base norm is `max |x_i|`. Levels are iterated until every subset of
/// the support has reached its fixed point, which happens by level `|supp x|`.
pub fn toh_scalar_norm(x: &OpVector, spec: &SpaceSpec) -> Result<EngineOutput> {
    expect_variant(spec, Variant::TOh)?;
    if !x.is_scalar() {
        return Err(Error::NotScalar);
    }
    check_support(x, spec)?;
    if x.is_zero() {
        return Ok(zero_output());
    }
    let moduli: Vec<f64> = x.scalars().iter().map(|z| z.norm()).collect();
    let lat = Lattice::new(x.support(), spec.budget);
    let n = lat.n();
    let mut base = alloc::vec![0.0f64; 1 << n];
    for s in 1..base.len() {
        base[s] = (0..n).filter(|&j| s >> j & 1 == 1).map(|j| moduli[j]).fold(0.0, f64::max);
    }
    let tables = Tables::run(&lat, base, None, spec.theta, spec.max_depth);
    let full = lat.full();
    let lows: Vec<f64> = tables.vals.iter().map(|v| v[full]).collect();
    let l2 = Exponent::Finite(2.0).lp_combine(moduli.iter().cloned());
    let trace = trace_from(&tables, &lat, spec, &lows, &lows, lows[0]);

    let last = *lows.last().expect("level 0");
    let tree = tables.tree(&lat, tables.levels() - 1, full);
    let upper = if tables.fixed { last } else { l2.max(last) };
    Ok(EngineOutput {
        bound: NormBound::new(last, upper, Witness::Tree(tree)),
        trace,
    })
}

/// Certified interval for the `X_{OH}` norm at the `S_2` or operator level.
///
/// * `S_2`: the lower recursion starts from `sup_ξ ‖∑ ξ̄_i x_i‖_2` on every
///   subset and combines exactly; the upper end is `(∑ ‖x_i‖_2²)^{1/2}`.
/// * Operator: the lower end is the certified `min ℓ₂` value; the upper
///   recursion starts from `min(‖(∑ x_i x_i^*)^{1/2}‖, ‖(∑ x_i^* x_i)^{1/2}‖)` on
///   every subset, combines in ℓ₂ and is clipped by `‖∑ x_i ⊗ x̄_i‖^{1/2}`.
pub fn xoh_norm_bounds(x: &OpVector, spec: &SpaceSpec, level: Level) -> Result<EngineOutput> {
    expect_variant(spec, Variant::XOh)?;
    let (r, c) = x.shape();
    if r != c {
        return Err(Error::NotSquare);
    }
    check_support(x, spec)?;
    if x.is_zero() {
        return Ok(zero_output());
    }
    let (x, _) = x.canonical_phases();
    let xs = x.matrices();
    let lat = Lattice::new(x.support(), spec.budget);
    let full = lat.full();

    match level {
        Level::S2 | Level::Sp => {
            let base = per_subset(&xs, max_s2_functional)?;
            let tables = Tables::run(&lat, base, None, spec.theta, spec.max_depth);
            let upper = oh_s2_norm(&xs)?;
            let lows: Vec<f64> = tables.vals.iter().map(|v| v[full].min(upper)).collect();
            let highs = alloc::vec![upper; lows.len()];
            let trace = trace_from(&tables, &lat, spec, &lows, &highs, lows[0]);
            let tree = tables.tree(&lat, tables.levels() - 1, full);
            let last = *lows.last().expect("level 0");
            Ok(EngineOutput {
                bound: NormBound::new(last, upper, Witness::Tree(tree)),
                trace,
            })
        }
        Level::Operator => {
            let base_lower = min_l2_norm_bounds(&xs, &spec.solver)?;
            let cap = per_subset(&xs, oh_operator_norm)?;
            let mut base = per_subset(&xs, |part| {
                Ok(sp_rp_norm(part, Exponent::Infinity)?.min(sp_cp_norm(part, Exponent::Infinity)?))
            })?;
            for (b, c) in base.iter_mut().zip(&cap) {
                *b = b.min(*c);
            }
            let tables = Tables::run(&lat, base, Some(&cap), spec.theta, spec.max_depth);
            let highs: Vec<f64> = tables.vals.iter().map(|v| v[full]).collect();
            let lows = alloc::vec![base_lower.lower; highs.len()];
            let trace = trace_from(&tables, &lat, spec, &lows, &highs, highs[0]);
            let upper = if tables.fixed {
                *highs.last().expect("level 0")
            } else {
                cap[full]
            };
            Ok(EngineOutput {
                bound: NormBound::new(base_lower.lower, upper, base_lower.witness),
                trace,
            })
        }
    }
}
