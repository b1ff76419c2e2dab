//! Report formats: JSON with full witnesses, CSV rows, and plain text.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};
use tsirelson_core::allowable::AllowableFamily;
use tsirelson_core::engine::{EngineOutput, Level, SpaceSpec};
use tsirelson_core::verification::{CheckReport, SuiteReport};
use tsirelson_core::OpVector;

/// Column names of [`SweepRow`], in order.
pub const CSV_HEADER: [&str; 9] = ["variant", "p", "theta", "support", "level", "lower", "upper", "exact", "stabilized_at"];

/// One evaluated `(variant, p, θ, level)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub variant: String,
    pub p: f64,
    pub theta: f64,
    /// Indices joined with `;`.
    pub support: String,
    pub level: String,
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    pub stabilized_at: Option<usize>,
}

impl SweepRow {
    pub fn new(x: &OpVector, spec: &SpaceSpec, level: Level, out: &EngineOutput) -> Self {
        SweepRow {
            variant: spec.variant.name().to_string(),
            p: spec.p,
            theta: spec.theta,
            support: support_string(x, ";"),
            level: level.name().to_string(),
            lower: out.bound.lower,
            upper: out.bound.upper,
            exact: out.bound.exact,
            stabilized_at: out.trace.stabilized_at,
        }
    }
}

pub fn support_string(x: &OpVector, sep: &str) -> String {
    x.support().iter().map(usize::to_string).collect::<Vec<_>>().join(sep)
}

/// Writes the header and `rows`.
pub fn write_csv<W: Write>(w: W, rows: &[SweepRow]) -> csv::Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

/// Everything about one evaluation, with the parsed `θ` and `p` echoed.
pub fn norm_json(x: &OpVector, spec: &SpaceSpec, level: Level, out: &EngineOutput) -> Value {
    let (rows, cols) = x.shape();
    let trace: Vec<Value> = out
        .trace
        .levels
        .iter()
        .map(|l| {
            json!({
                "n": l.n,
                "lower": l.bound.lower,
                "upper": l.bound.upper,
                "binding": l.binding,
                "family": l.family.as_ref().map(family_json),
            })
        })
        .collect();
    json!({
        "variant": spec.variant.name(),
        "p": spec.p,
        "theta": spec.theta,
        "level": level.name(),
        "support": x.support(),
        "shape": [rows, cols],
        "lower": out.bound.lower,
        "upper": out.bound.upper,
        "exact": out.bound.exact,
        "stabilized_at": out.trace.stabilized_at,
        "witness": serde_json::to_value(&out.bound.witness).expect("witnesses serialise"),
        "trace": trace,
    })
}

pub fn family_json(f: &AllowableFamily) -> Value {
    json!({ "k": f.k, "sets": f.sets })
}

/// Header line shared by the text outputs.
pub fn header_text(x: &OpVector, spec: &SpaceSpec, level: Level) -> String {
    format!(
        "{} theta={} p={} level={} support={}",
        spec.variant,
        spec.theta,
        spec.p,
        level,
        support_string(x, ",")
    )
}

pub fn norm_text(x: &OpVector, spec: &SpaceSpec, level: Level, out: &EngineOutput) -> String {
    let value = if out.bound.exact {
        format!("norm = {}", out.bound.lower)
    } else {
        format!("norm in [{}, {}]", out.bound.lower, out.bound.upper)
    };
    let stable = match out.trace.stabilized_at {
        Some(n) => format!("stabilized at level {n}"),
        None => format!("not stabilized within {} levels", out.trace.levels.len() - 1),
    };
    format!("{}\n{value}\n{stable}\n", header_text(x, spec, level))
}

pub fn trace_text(x: &OpVector, spec: &SpaceSpec, level: Level, out: &EngineOutput) -> String {
    let mut s = header_text(x, spec, level);
    s.push_str("\nn\tlower\tupper\tbinding\tfamily\n");
    for l in &out.trace.levels {
        let fam = l.family.as_ref().map_or_else(|| "-".to_string(), |f| f.to_string());
        s.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", l.n, l.bound.lower, l.bound.upper, l.binding, fam));
    }
    s.push_str(&format!(
        "limit\t{}\t{}\nstabilized_at\t{}\n",
        out.bound.lower,
        out.bound.upper,
        out.trace.stabilized_at.map_or_else(|| "none".to_string(), |n| n.to_string())
    ));
    s
}

pub fn check_json(c: &CheckReport) -> Value {
    let details: serde_json::Map<String, Value> = c.details.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    json!({
        "check": c.check,
        "instance": c.instance,
        "left": c.left,
        "right": c.right,
        "margin": c.margin,
        "passed": c.passed,
        "provenance": c.provenance,
        "details": details,
    })
}

pub fn check_text(c: &CheckReport) -> String {
    format!(
        "{} {} | {} <= {} | margin {:e}\n",
        if c.passed { "PASS" } else { "FAIL" },
        c.check,
        c.left,
        c.right,
        c.margin
    )
}

pub fn suite_json(r: &SuiteReport) -> Value {
    let failed = r.failures().count();
    json!({
        "seed": r.seed,
        "total": r.checks.len(),
        "failed": failed,
        "passed": failed == 0,
        "checks": r.checks.iter().map(check_json).collect::<Vec<_>>(),
    })
}

pub fn suite_text(r: &SuiteReport) -> String {
    let mut s = String::new();
    for c in &r.checks {
        s.push_str(&format!("{}  [{}]\n", check_text(c).trim_end(), c.instance));
    }
    let failed = r.failures().count();
    s.push_str(&format!("seed {}: {} checks, {} failed\n", r.seed, r.checks.len(), failed));
    s
}
