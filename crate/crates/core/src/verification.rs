//! Machine checks of the inequalities satisfied by the recursive norms.
//!
//! Every check compares certified quantities in the sound direction: when an
//! inequality `a ≤ b` between true norms is tested, the left side is a
//! certified lower end of `a` (or an exact value) and the right side a
//! certified upper end of `b`. A check passes when its margin is at least
//! `-MARGIN_SLACK`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::allowable::Budget;
use crate::engine::{norm_bounds, EngineOutput, Level, SpaceSpec, Variant};
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, Exponent};
use crate::rng::{complex_gaussian, gaussian_matrix, seeded_stream, unimodular, DetRng};
use crate::schatten::{max_s2_functional, oh_operator_norm, oh_s2_norm, sp_cp_norm, sp_rp_norm};
use crate::sum_spaces::{min_l2_norm_bounds, rp_plus_cp_norm};
use crate::vector::OpVector;
#[allow(unused_imports)]
use num_traits::Float;

/// A check passes when `margin >= -MARGIN_SLACK`.
pub const MARGIN_SLACK: f64 = 1e-9;

/// Outcome of one check on one instance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CheckReport {
    pub check: String,
    pub instance: String,
    /// Side that must not exceed the right side (after slack).
    pub left: f64,
    pub right: f64,
    pub margin: f64,
    pub passed: bool,
    /// Which computation produced each side.
    pub provenance: String,
    /// Auxiliary values worth logging.
    pub details: Vec<(String, f64)>,
}

impl CheckReport {
    fn new(check: &str, instance: String, left: f64, right: f64, margin: f64, provenance: String) -> Self {
        CheckReport {
            check: check.to_string(),
            instance,
            left,
            right,
            margin,
            passed: margin >= -MARGIN_SLACK,
            provenance,
            details: Vec::new(),
        }
    }

    fn with(mut self, name: &str, value: f64) -> Self {
        self.details.push((name.to_string(), value));
        self
    }
}

/// Anything that produces engine outputs; the checks are generic over it so
/// the harness itself can be tested against a faulty engine.
pub trait NormEngine {
    fn name(&self) -> &str;
    fn evaluate(&self, x: &OpVector, spec: &SpaceSpec, level: Level) -> Result<EngineOutput>;
}

/// The engines of this crate.
#[derive(Debug, Clone, Copy, Default)]
pub struct RecursiveEngine;

impl NormEngine for RecursiveEngine {
    fn name(&self) -> &str {
        "recursive"
    }

    fn evaluate(&self, x: &OpVector, spec: &SpaceSpec, level: Level) -> Result<EngineOutput> {
        norm_bounds(x, spec, level)
    }
}

fn describe(x: &OpVector, spec: &SpaceSpec, level: Level) -> String {
    let (r, c) = x.shape();
    let p = if spec.variant.uses_p() {
        format!(" p={}", spec.p)
    } else {
        String::new()
    };
    format!(
        "{}{} theta={} level={} shape={}x{} support={:?}",
        spec.variant,
        p,
        spec.theta,
        level,
        r,
        c,
        x.support()
    )
}

/// The exponent of the level at which a variant is compared with its ends.
fn level_exponent(spec: &SpaceSpec, level: Level) -> f64 {
    match (spec.variant, level) {
        (Variant::XCp | Variant::XRp, _) => spec.p,
        _ => 2.0,
    }
}

/// Certified lower end of the base norm and exact upper norm of a vector.
fn ends(x: &OpVector, spec: &SpaceSpec, level: Level) -> Result<((f64, &'static str), (f64, &'static str))> {
    let xs = x.matrices();
    if xs.is_empty() {
        return Ok(((0.0, "zero"), (0.0, "zero")));
    }
    let p = Exponent::Finite(spec.p);
    Ok(match (spec.variant, level) {
        (Variant::XCp, _) => (
            (rp_plus_cp_norm(&xs, p, &spec.solver)?.lower, "rp_plus_cp lower"),
            (sp_cp_norm(&xs, p)?, "sp_cp"),
        ),
        (Variant::XRp, _) => {
            let adj: Vec<CMatrix> = xs.iter().map(CMatrix::adjoint).collect();
            (
                (rp_plus_cp_norm(&adj, p, &spec.solver)?.lower, "rp_plus_cp lower of adjoint"),
                (sp_rp_norm(&xs, p)?, "sp_rp"),
            )
        }
        (Variant::XOh, Level::Operator) => (
            (min_l2_norm_bounds(&xs, &spec.solver)?.lower, "min_l2 lower"),
            (oh_operator_norm(&xs)?, "oh operator"),
        ),
        (Variant::XOh, _) => ((max_s2_functional(&xs)?, "min_l2 s2 lower"), (oh_s2_norm(&xs)?, "oh s2")),
        (Variant::TOh, _) => {
            let moduli = x.scalars().iter().map(|z| z.norm()).collect::<Vec<_>>();
            (
                (moduli.iter().cloned().fold(0.0, f64::max), "c0"),
                (Exponent::Finite(2.0).lp_combine(moduli), "l2"),
            )
        }
    })
}

/// The side of a trace level that the recursion moves.
fn recursive_side(spec: &SpaceSpec, level: Level, lower: f64, upper: f64) -> f64 {
    match (spec.variant, level) {
        (Variant::XOh, Level::Operator) => upper,
        _ => lower,
    }
}

/// Runs the checks with a chosen engine.
pub struct Verifier<'e> {
    pub engine: &'e dyn NormEngine,
}

impl Default for Verifier<'static> {
    fn default() -> Self {
        Verifier {
            engine: &RecursiveEngine,
        }
    }
}

impl<'e> Verifier<'e> {
    pub fn new(engine: &'e dyn NormEngine) -> Self {
        Verifier { engine }
    }

    fn provenance(&self, left: &str, right: &str) -> String {
        format!("left: {left}; right: {right}; engine: {}", self.engine.name())
    }

    /// Base lower end ≤ engine lower end and engine upper end ≤ upper norm,
    /// at every computed level and for the limit.
    pub fn sandwich(&self, x: &OpVector, spec: &SpaceSpec, level: Level) -> Result<CheckReport> {
        let out = self.engine.evaluate(x, spec, level)?;
        self.sandwich_of(x, spec, level, &out)
    }

    fn sandwich_of(&self, x: &OpVector, spec: &SpaceSpec, level: Level, out: &EngineOutput) -> Result<CheckReport> {
        let ((base, base_src), (top, top_src)) = ends(x, spec, level)?;
        let lows = out.trace.levels.iter().map(|l| l.bound.lower).chain([out.bound.lower]);
        let highs = out.trace.levels.iter().map(|l| l.bound.upper).chain([out.bound.upper]);
        let low = lows.fold(f64::INFINITY, f64::min);
        let high = highs.fold(0.0, f64::max);
        let lower_margin = low - base;
        let upper_margin = top - high;
        let report = if lower_margin <= upper_margin {
            CheckReport::new(
                "sandwich",
                describe(x, spec, level),
                base,
                low,
                lower_margin,
                self.provenance(base_src, "least engine lower end"),
            )
        } else {
            CheckReport::new(
                "sandwich",
                describe(x, spec, level),
                high,
                top,
                upper_margin,
                self.provenance("greatest engine upper end", top_src),
            )
        };
        Ok(report.with("lower_margin", lower_margin).with("upper_margin", upper_margin))
    }

    /// Level bounds never decrease with `n`.
    pub fn monotone_levels(&self, x: &OpVector, spec: &SpaceSpec, level: Level) -> Result<CheckReport> {
        let out = self.engine.evaluate(x, spec, level)?;
        Ok(self.monotone_of(x, spec, level, &out))
    }

    fn monotone_of(&self, x: &OpVector, spec: &SpaceSpec, level: Level, out: &EngineOutput) -> CheckReport {
        let mut worst = (0.0, 0.0, f64::INFINITY);
        for w in out.trace.levels.windows(2) {
            for (a, b) in [(w[0].bound.lower, w[1].bound.lower), (w[0].bound.upper, w[1].bound.upper)] {
                if b - a < worst.2 {
                    worst = (a, b, b - a);
                }
            }
        }
        if worst.2 == f64::INFINITY {
            worst = (0.0, 0.0, 0.0);
        }
        CheckReport::new(
            "monotone_levels",
            describe(x, spec, level),
            worst.0,
            worst.1,
            worst.2,
            self.provenance("level n end", "level n+1 end"),
        )
    }

    /// Where the recursive branch never exceeded the base norm, the level
    /// value equals the base value.
    pub fn recursion_collapse(&self, x: &OpVector, spec: &SpaceSpec, level: Level) -> Result<CheckReport> {
        let out = self.engine.evaluate(x, spec, level)?;
        Ok(self.collapse_of(x, spec, level, &out))
    }

    fn collapse_of(&self, x: &OpVector, spec: &SpaceSpec, level: Level, out: &EngineOutput) -> CheckReport {
        let side = |l: &crate::engine::TraceLevel| recursive_side(spec, level, l.bound.lower, l.bound.upper);
        let base = side(&out.trace.levels[0]);
        let mut value = base;
        let mut dev = 0.0;
        let mut idle = 0usize;
        for l in out.trace.levels.iter().skip(1).filter(|l| !l.binding) {
            idle += 1;
            let d = (side(l) - base).abs();
            if d > dev {
                dev = d;
                value = side(l);
            }
        }
        CheckReport::new(
            "recursion_collapse",
            describe(x, spec, level),
            value,
            base,
            -dev,
            self.provenance("non-binding level value", "level 0 value"),
        )
        .with("non_binding_levels", idle as f64)
    }

    /// `θ ‖∑ b_j ⊗ e_{j1}‖ - ε ≤ ‖∑ b_j ⊗ y_j‖ ≤ ‖∑ b_j ⊗ e_{j1}‖ + ε` for disjoint
    /// blocks `y_j` rescaled to engine norm one.
    ///
    /// `A` is `‖(b_j)‖_{S_p(C_p)}` for `X_{C_p}`, `‖(b_j)‖_{S_p(R_p)}` for
    /// `X_{R_p}` and `(∑ ‖b_j‖_2²)^{1/2}` for `X_{OH}`. Each block is divided by
    /// the midpoint of its certified interval; the relative half-width `δ`
    /// enters the slack as `ε = 1e-6 + δ A`.
    pub fn block_isomorphism(&self, blocks: &[OpVector], coeffs: &[CMatrix], spec: &SpaceSpec) -> Result<CheckReport> {
        if blocks.is_empty() {
            return Err(Error::Empty);
        }
        if blocks.len() != coeffs.len() {
            return Err(Error::Precondition(format!(
                "{} blocks but {} coefficients",
                blocks.len(),
                coeffs.len()
            )));
        }
        if spec.variant == Variant::TOh {
            return Err(Error::Precondition(
                "block isomorphism is checked for xcp, xrp and xoh".to_string(),
            ));
        }
        let mut seen = BTreeMap::new();
        for (j, y) in blocks.iter().enumerate() {
            if !y.is_scalar() {
                return Err(Error::NotScalar);
            }
            if y.is_zero() {
                return Err(Error::Precondition(format!("block {j} is zero")));
            }
            for i in y.support() {
                if seen.insert(i, j).is_some() {
                    return Err(Error::OverlappingSupports);
                }
            }
        }
        let k = *seen.keys().next().expect("nonempty blocks");
        if !spec.budget.allows(k, blocks.len()) {
            return Err(Error::Precondition(format!(
                "{} blocks starting at {k} are not allowable",
                blocks.len()
            )));
        }

        let level = spec.default_level();
        let (mut rows, mut cols) = coeffs.iter().fold((1, 1), |(r, c), b| (r.max(b.rows()), c.max(b.cols())));
        if spec.variant == Variant::XOh {
            rows = rows.max(cols);
            cols = rows;
        }
        let bs: Vec<CMatrix> = coeffs.iter().map(|b| b.pad_to(rows, cols)).collect();
        let mut delta: f64 = 0.0;
        let mut pairs = Vec::new();
        for (y, b) in blocks.iter().zip(&bs) {
            let nb = self.engine.evaluate(y, spec, level)?.bound;
            let m = nb.midpoint();
            if !(m > 0.0) {
                return Err(Error::Precondition("block with zero certified norm".to_string()));
            }
            delta = delta.max(nb.upper / m - 1.0).max(1.0 - nb.lower / m);
            for (i, c) in y.iter() {
                pairs.push((i, b.scale(c.data()[0] / m)));
            }
        }
        let x = OpVector::from_pairs(pairs)?;
        let p = Exponent::Finite(spec.p);
        let (a, a_src) = match spec.variant {
            Variant::XCp => (sp_cp_norm(&bs, p)?, "theta * sp_cp of coefficients"),
            Variant::XRp => (sp_rp_norm(&bs, p)?, "theta * sp_rp of coefficients"),
            _ => (oh_s2_norm(&bs)?, "theta * l2 of coefficient s2 norms"),
        };
        let eps = 1e-6 + delta * a;
        let out = self.engine.evaluate(&x, spec, level)?;
        let lower_margin = out.bound.lower - (spec.theta * a - eps);
        let upper_margin = (a + eps) - out.bound.upper;
        let instance = format!("{} blocks={}", describe(&x, spec, level), blocks.len());
        let report = if lower_margin <= upper_margin {
            CheckReport::new(
                "block_isomorphism",
                instance,
                spec.theta * a - eps,
                out.bound.lower,
                lower_margin,
                self.provenance(a_src, "engine lower end"),
            )
        } else {
            CheckReport::new(
                "block_isomorphism",
                instance,
                out.bound.upper,
                a + eps,
                upper_margin,
                self.provenance("engine upper end", "coefficient norm"),
            )
        };
        Ok(report.with("A", a).with("epsilon", eps).with("delta", delta))
    }

    /// `‖y+z‖_{n+1} ≤ max(‖y‖_{n+1} + α‖z‖_n, ‖z‖_{n+1})` for `supp y ⊆ {1..N}`,
    /// `supp z ⊆ {N+1, …}`, with `α = max(1, θ√f(N))` for the OH variants and
    /// `max(1, θ f(N))` for `X_{C_p}` / `X_{R_p}`.
    pub fn split_inequality(&self, y: &OpVector, z: &OpVector, big_n: usize, n: usize, spec: &SpaceSpec) -> Result<CheckReport> {
        if big_n == 0 {
            return Err(Error::ZeroIndex);
        }
        if y.support().iter().any(|&i| i > big_n) || z.support().iter().any(|&i| i <= big_n) {
            return Err(Error::OverlappingSupports);
        }
        let level = spec.default_level();
        let f = budget_f64(&spec.budget, big_n);
        let alpha = match spec.variant {
            Variant::XCp | Variant::XRp => (spec.theta * f).max(1.0),
            _ => (spec.theta * f.sqrt()).max(1.0),
        };
        let sum = y.add(z)?;
        let oy = self.engine.evaluate(y, spec, level)?;
        let oz = self.engine.evaluate(z, spec, level)?;
        let os = self.engine.evaluate(&sum, spec, level)?;
        let left = os.level_bound(n + 1).lower;
        let yn1 = oy.level_bound(n + 1).upper;
        let zn = oz.level_bound(n).upper;
        let zn1 = oz.level_bound(n + 1).upper;
        let right = (yn1 + alpha * zn).max(zn1);
        let widths = [os.level_bound(n + 1), oy.level_bound(n + 1), oz.level_bound(n), oz.level_bound(n + 1)]
            .iter()
            .map(|b| b.width())
            .fold(0.0, f64::max);
        Ok(CheckReport::new(
            "split_inequality",
            format!("{} N={big_n} n={n} y={:?} z={:?}", describe(&sum, spec, level), y.support(), z.support()),
            left,
            right,
            right - left,
            self.provenance(
                "engine lower end of the sum at level n+1",
                "engine upper ends of the parts at levels n, n+1",
            ),
        )
        .with("alpha", alpha)
        .with("max_width", widths))
    }

    /// `‖x‖^p ≤ ‖x‖_n^p + θ^{pn} ‖x‖_{upper}^p`, with `p = 2` for the OH variants.
    pub fn theta_tail(&self, x: &OpVector, n: usize, spec: &SpaceSpec) -> Result<CheckReport> {
        let level = spec.default_level();
        let out = self.engine.evaluate(x, spec, level)?;
        self.theta_tail_of(x, n, spec, level, &out)
    }

    fn theta_tail_of(&self, x: &OpVector, n: usize, spec: &SpaceSpec, level: Level, out: &EngineOutput) -> Result<CheckReport> {
        if level == Level::Operator {
            return Err(Error::Precondition(
                "the tail bound is checked at the s2 and sp levels".to_string(),
            ));
        }
        let q = level_exponent(spec, level);
        let (_, (top, top_src)) = ends(x, spec, level)?;
        let left = out.bound.lower.powf(q);
        let right = out.level_bound(n).upper.powf(q) + spec.theta.powf(q * n as f64) * top.powf(q);
        Ok(CheckReport::new(
            "theta_tail",
            format!("{} n={n}", describe(x, spec, level)),
            left,
            right,
            right - left,
            self.provenance("engine lower end, to the power p", &format!("level n upper end and {top_src}")),
        ))
    }

    /// Multiplying the coefficients by unimodular scalars leaves the engine
    /// output unchanged within `MARGIN_SLACK`.
    pub fn unconditionality(
        &self,
        x: &OpVector,
        phases: &BTreeMap<usize, Complex64>,
        spec: &SpaceSpec,
        level: Level,
    ) -> Result<CheckReport> {
        for a in phases.values() {
            let m = a.norm();
            if !((m - 1.0).abs() <= 1e-12) {
                return Err(Error::NonUnimodular(m));
            }
        }
        let a = self.engine.evaluate(x, spec, level)?;
        let b = self.engine.evaluate(&x.phased(phases), spec, level)?;
        Ok(self.compare_outputs(x, spec, level, &a, &b))
    }

    fn compare_outputs(&self, x: &OpVector, spec: &SpaceSpec, level: Level, a: &EngineOutput, b: &EngineOutput) -> CheckReport {
        let dl = (a.bound.lower - b.bound.lower).abs();
        let du = (a.bound.upper - b.bound.upper).abs();
        let (left, right) = if dl >= du {
            (a.bound.lower, b.bound.lower)
        } else {
            (a.bound.upper, b.bound.upper)
        };
        CheckReport::new(
            "unconditionality",
            describe(x, spec, level),
            left,
            right,
            -dl.max(du),
            self.provenance("engine end for x", "engine end for the phased x"),
        )
    }
}

fn budget_f64(budget: &Budget, k: usize) -> f64 {
    budget.value(k).to_f64().unwrap_or(f64::INFINITY)
}

/// [`Verifier::sandwich`] at the variant's default level with the built-in engines.
pub fn check_sandwich(x: &OpVector, spec: &SpaceSpec) -> Result<CheckReport> {
    Verifier::default().sandwich(x, spec, spec.default_level())
}

/// [`Verifier::block_isomorphism`] with the built-in engines.
pub fn check_block_isomorphism(blocks: &[OpVector], coeffs: &[CMatrix], spec: &SpaceSpec) -> Result<CheckReport> {
    Verifier::default().block_isomorphism(blocks, coeffs, spec)
}

/// [`Verifier::split_inequality`] with the built-in engines.
pub fn check_split_inequality(y: &OpVector, z: &OpVector, big_n: usize, n: usize, spec: &SpaceSpec) -> Result<CheckReport> {
    Verifier::default().split_inequality(y, z, big_n, n, spec)
}

/// [`Verifier::theta_tail`] with the built-in engines.
pub fn check_theta_tail(x: &OpVector, n: usize, spec: &SpaceSpec) -> Result<CheckReport> {
    Verifier::default().theta_tail(x, n, spec)
}

/// [`Verifier::unconditionality`] at the default level with the built-in engines.
pub fn check_unconditionality(x: &OpVector, phases: &BTreeMap<usize, Complex64>, spec: &SpaceSpec) -> Result<CheckReport> {
    Verifier::default().unconditionality(x, phases, spec, spec.default_level())
}

/// [`Verifier::recursion_collapse`] at the default level with the built-in engines.
pub fn check_recursion_collapse(x: &OpVector, spec: &SpaceSpec) -> Result<CheckReport> {
    Verifier::default().recursion_collapse(x, spec, spec.default_level())
}

/// Largest `M` accepted by [`c0_sequence_demo`].
pub const C0_MAX_TERMS: usize = 16;

/// The `c_0` behaviour of `∑_j b_j e_{j1} ⊗ t_j` with `b_j = 1`, `j ≤ M`.
///
/// See [`c0_sequence_demo_with`].
pub fn c0_sequence_demo(m: usize, p: f64) -> Result<CheckReport> {
    c0_sequence_demo_with(&alloc::vec![1.0; m], p)
}

/// The `c_0` behaviour of `∑_j b_j e_{j1} ⊗ t_j`.
///
/// In `C_p ⊗_min (R_p +_p C_p)` the map `e_{j1} ⊗ t_j ↦ e_{jj}` is isometric,
/// so the sum has norm `‖∑ b_j e_{jj}‖ = max |b_j|`, while every nonzero summand
/// has norm at least `min |b_j| · 2^{1/p-1}`, its `S_p(R_p +_p C_p)` value. The
/// check asserts the sum stays below 2 and the summands above a positive
/// constant. The `S_p`-level quotient norm of the sum, which grows with the
/// number of terms, is logged as `sp_level_value`.
pub fn c0_sequence_demo_with(b: &[f64], p: f64) -> Result<CheckReport> {
    let m = b.len();
    if m == 0 || m > C0_MAX_TERMS {
        return Err(Error::Precondition(format!(
            "the c0 demo takes between 1 and {C0_MAX_TERMS} terms, got {m}"
        )));
    }
    let exp = Exponent::new(p)?;
    let opts = crate::sum_spaces::SolverOptions::default();
    let terms: Vec<CMatrix> = b
        .iter()
        .enumerate()
        .filter(|(_, &bj)| bj != 0.0)
        .map(|(j, &bj)| CMatrix::unit(m, 1, j, 0).scale_real(bj))
        .collect();
    if terms.is_empty() {
        return Err(Error::Precondition("all coefficients vanish".to_string()));
    }
    let diag = CMatrix::diag(&b.iter().map(|&v| Complex64::new(v, 0.0)).collect::<Vec<_>>());
    let value = diag.operator_norm();
    let sp_value = rp_plus_cp_norm(&terms, exp, &opts)?;
    let mut summand: f64 = f64::INFINITY;
    for t in &terms {
        summand = summand.min(rp_plus_cp_norm(core::slice::from_ref(t), exp, &opts)?.lower);
    }
    let bound = 2.0;
    let margin = (bound - value).min(summand);
    Ok(CheckReport::new(
        "c0_sequence",
        format!("p={p} M={m} b={b:?}"),
        value,
        bound,
        margin,
        "left: operator norm of the diagonal image; right: constant 2".to_string(),
    )
    .with("summand_lower", summand)
    .with("sp_level_value", sp_value.upper))
}

/// Instance grid for [`run_suite`].
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteGrid {
    pub thetas: Vec<f64>,
    /// Exponents for `X_{C_p}` and `X_{R_p}`.
    pub ps: Vec<f64>,
    pub variants: Vec<Variant>,
    /// Random vectors per variant, exponent and `θ`.
    pub instances: usize,
    pub max_support: usize,
    /// Largest coefficient dimension.
    pub max_dim: usize,
    /// The tail bound is checked for `n = 0, …, tail_levels`.
    pub tail_levels: usize,
    /// Split-inequality instances per exact-mode variant and `θ`.
    pub split_instances: usize,
    /// Block families per variant, exponent and `θ`.
    pub block_instances: usize,
    /// Numbers of terms for the `c_0` demo, run for every exponent in `ps`.
    pub c0_terms: Vec<usize>,
}

impl Default for SuiteGrid {
    fn default() -> Self {
        SuiteGrid {
            thetas: alloc::vec![0.5, 0.8, 0.95],
            ps: alloc::vec![1.0, 1.5],
            variants: alloc::vec![Variant::XCp, Variant::XRp, Variant::XOh, Variant::TOh],
            instances: 4,
            max_support: 6,
            max_dim: 3,
            tail_levels: 6,
            split_instances: 12,
            block_instances: 3,
            c0_terms: alloc::vec![1, 2, 8],
        }
    }
}

impl SuiteGrid {
    /// A grid with no instances.
    pub fn empty() -> Self {
        SuiteGrid {
            thetas: Vec::new(),
            ps: Vec::new(),
            variants: Vec::new(),
            instances: 0,
            max_support: 0,
            max_dim: 0,
            tail_levels: 0,
            split_instances: 0,
            block_instances: 0,
            c0_terms: Vec::new(),
        }
    }
}

/// All check reports of a suite run, sorted by check name and instance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuiteReport {
    pub seed: u64,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Random vector with `len` coefficients of shape `rows × cols` at distinct
/// indices in `1..=span`.
pub fn random_vector(rng: &mut DetRng, len: usize, span: usize, rows: usize, cols: usize) -> OpVector {
    let mut idx: Vec<usize> = (1..=span.max(len)).collect();
    for i in (1..idx.len()).rev() {
        idx.swap(i, rng.random_range(0..=i));
    }
    idx.truncate(len);
    let scale = rng.random_range(0.5..2.0);
    let pairs = idx.into_iter().map(|i| (i, gaussian_matrix(rng, rows, cols).scale_real(scale)));
    OpVector::from_pairs(pairs).expect("generated coefficients share a shape")
}

fn random_scalars(rng: &mut DetRng, indices: impl Iterator<Item = usize>) -> OpVector {
    let pairs: Vec<(usize, Complex64)> = indices.map(|i| (i, complex_gaussian(rng))).collect();
    OpVector::from_scalars(pairs).expect("finite scalars")
}

fn random_phases(rng: &mut DetRng, x: &OpVector) -> BTreeMap<usize, Complex64> {
    x.support().into_iter().map(|i| (i, unimodular(rng))).collect()
}

/// Variant, exponent and levels of each suite cell.
fn cells(grid: &SuiteGrid) -> Vec<(Variant, f64, Vec<Level>)> {
    let mut out = Vec::new();
    for &v in &grid.variants {
        match v {
            Variant::XCp | Variant::XRp => {
                for &p in &grid.ps {
                    out.push((v, p, alloc::vec![Level::Sp]));
                }
            }
            Variant::XOh => out.push((v, 2.0, alloc::vec![Level::S2, Level::Operator])),
            Variant::TOh => out.push((v, 2.0, alloc::vec![Level::S2])),
        }
    }
    out
}

/// Runs every check over the instance grid with the built-in engines.
pub fn run_suite(grid: &SuiteGrid, seed: u64) -> Result<SuiteReport> {
    run_suite_with(&RecursiveEngine, grid, seed)
}

/// Runs every check over the instance grid with `engine`.
///
/// Each instance draws from its own stream of the seeded generator, so the
/// report depends only on the grid and the seed.
pub fn run_suite_with(engine: &dyn NormEngine, grid: &SuiteGrid, seed: u64) -> Result<SuiteReport> {
    let v = Verifier::new(engine);
    let mut checks = Vec::new();
    let mut stream = 0u64;
    let mut next_rng = || {
        stream += 1;
        seeded_stream(seed, stream)
    };

    for &theta in &grid.thetas {
        for (variant, p, levels) in cells(grid) {
            let spec = SpaceSpec::new(variant, p, theta)?;
            for _ in 0..grid.instances {
                let mut rng = next_rng();
                let len = rng.random_range(1..=grid.max_support.max(1));
                let (rows, cols) = match variant {
                    Variant::TOh => (1, 1),
                    Variant::XOh => {
                        let d = rng.random_range(1..=grid.max_dim.max(1));
                        (d, d)
                    }
                    _ => (
                        rng.random_range(1..=grid.max_dim.max(1)),
                        rng.random_range(1..=grid.max_dim.max(1)),
                    ),
                };
                let x = random_vector(&mut rng, len, grid.max_support + 2, rows, cols);
                let phases = random_phases(&mut rng, &x);
                for &level in &levels {
                    let out = engine.evaluate(&x, &spec, level)?;
                    checks.push(v.sandwich_of(&x, &spec, level, &out)?);
                    checks.push(v.monotone_of(&x, &spec, level, &out));
                    checks.push(v.collapse_of(&x, &spec, level, &out));
                    let phased = engine.evaluate(&x.phased(&phases), &spec, level)?;
                    checks.push(v.compare_outputs(&x, &spec, level, &out, &phased));
                    if level != Level::Operator {
                        for n in 0..=grid.tail_levels {
                            checks.push(v.theta_tail_of(&x, n, &spec, level, &out)?);
                        }
                    }
                }
            }

            let exact_mode = match variant {
                Variant::TOh | Variant::XOh => true,
                Variant::XCp | Variant::XRp => p == 1.0,
            };
            if exact_mode {
                for _ in 0..grid.split_instances {
                    let mut rng = next_rng();
                    let (y, z, big_n, n) = split_instance(&mut rng);
                    checks.push(v.split_inequality(&y, &z, big_n, n, &spec)?);
                }
            }

            if variant != Variant::TOh {
                for _ in 0..grid.block_instances {
                    let mut rng = next_rng();
                    let (blocks, coeffs) = block_instance(&mut rng, variant, grid.max_dim.max(1));
                    checks.push(v.block_isomorphism(&blocks, &coeffs, &spec)?);
                }
            }
        }
    }

    for &p in &grid.ps {
        for &m in &grid.c0_terms {
            checks.push(c0_sequence_demo(m, p)?);
        }
    }

    checks.sort_by(|a, b| a.check.cmp(&b.check).then_with(|| a.instance.cmp(&b.instance)));
    Ok(SuiteReport { seed, checks })
}

/// Scalar `y` on `{1..N}`, scalar `z` beyond `N`, and a level `n`.
pub fn split_instance(rng: &mut DetRng) -> (OpVector, OpVector, usize, usize) {
    let big_n = rng.random_range(1..=3);
    let ylen = rng.random_range(1..=big_n);
    let zlen = rng.random_range(0..=3);
    let mut ys: Vec<usize> = (1..=big_n).collect();
    for i in (1..ys.len()).rev() {
        ys.swap(i, rng.random_range(0..=i));
    }
    ys.truncate(ylen);
    ys.sort_unstable();
    let y = random_scalars(rng, ys.into_iter());
    let z = random_scalars(rng, big_n + 1..=big_n + zlen);
    let n = rng.random_range(0..=3);
    (y, z, big_n, n)
}

/// Up to four disjoint scalar blocks starting at `k ∈ {1, 2}` with random coefficients.
pub fn block_instance(rng: &mut DetRng, variant: Variant, max_dim: usize) -> (Vec<OpVector>, Vec<CMatrix>) {
    let count = rng.random_range(1..=4);
    let mut next = rng.random_range(1..=2);
    let (rows, cols) = match variant {
        Variant::XOh => {
            let d = rng.random_range(1..=max_dim);
            (d, d)
        }
        _ => (rng.random_range(1..=max_dim), rng.random_range(1..=max_dim)),
    };
    let mut blocks = Vec::new();
    let mut coeffs = Vec::new();
    for _ in 0..count {
        let len = if count <= 2 && rng.random_bool(0.5) { 2 } else { 1 };
        blocks.push(random_scalars(rng, next..next + len));
        next += len;
        coeffs.push(gaussian_matrix(rng, rows, cols));
    }
    (blocks, coeffs)
}
