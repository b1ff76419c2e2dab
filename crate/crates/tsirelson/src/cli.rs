//! Command-line interface.
//!
//! Exit codes: 0 when everything ran and every check passed, 1 when a check
//! failed, 2 for usage and input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use tsirelson_core::allowable::{enumerate_allowable, Budget, EnumerationOptions};
use tsirelson_core::engine::{norm_bounds, EngineOutput, Level, SpaceSpec, Variant};
use tsirelson_core::sum_spaces::SolverOptions;
use tsirelson_core::verification::{c0_sequence_demo, run_suite, SuiteGrid};
use tsirelson_core::OpVector;

use crate::report;
use crate::vector_io::{parse_inline, parse_vector};

#[derive(Debug, Parser)]
#[command(name = "tsirelson", version, about = "Recursive Tsirelson-type operator space norms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified interval for the norm of a vector.
    Norm(NormArgs),
    /// The level sequence of the recursion.
    Trace(NormArgs),
    /// Run the inequality checks over the default instance grid.
    Verify(VerifyArgs),
    /// List the allowable families on a support.
    Enumerate(EnumerateArgs),
    /// Evaluate one vector over a grid of variants, exponents and θ; CSV by default.
    Sweep(SweepArgs),
    /// The bounded-sum behaviour of the unit vectors e_{j1} ⊗ t_j.
    #[command(name = "demo-c0")]
    DemoC0(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct InputArgs {
    /// JSON vector document.
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,
    /// Inline scalar vector such as "t1+t2" or "0.5*t3".
    #[arg(long, group = "source", allow_hyphen_values = true)]
    pub inline: Option<String>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    /// Largest recursion level.
    #[arg(long, default_value_t = 32)]
    pub depth: usize,
    /// Longest chain of families searched for xcp/xrp lower bounds.
    #[arg(long, default_value_t = 3)]
    pub chain_depth: usize,
    /// Consecutive levels closer than this count as equal.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Largest accepted support.
    #[arg(long, default_value_t = 12)]
    pub cap: usize,
    /// Seed of the randomised solver starts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[arg(long, value_parser = parse_variant)]
    pub variant: Variant,
    /// Exponent in [1, 2) for xcp and xrp; ignored by xoh and toh.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub theta: f64,
    /// operator, s2 or sp; defaults to sp for xcp/xrp and s2 otherwise.
    #[arg(long, value_parser = parse_level)]
    pub level: Option<Level>,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Random vectors per cell of the grid.
    #[arg(long)]
    pub instances: Option<usize>,
    /// Comma-separated θ values of the grid.
    #[arg(long, value_delimiter = ',')]
    pub thetas: Option<Vec<f64>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BudgetArg {
    Tsirelson,
    Linear,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Comma-separated indices.
    #[arg(long, value_delimiter = ',', required = true)]
    pub support: Vec<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 12)]
    pub cap: usize,
    #[arg(long, value_enum, default_value_t = BudgetArg::Tsirelson)]
    pub budget: BudgetArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_variant, required = true)]
    pub variant: Vec<Variant>,
    /// Exponents for xcp and xrp.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub theta: Vec<f64>,
    /// Levels to evaluate; each variant's default when omitted.
    #[arg(long, value_delimiter = ',', value_parser = parse_level)]
    pub level: Vec<Level>,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// Number of terms.
    #[arg(long, default_value_t = 8)]
    pub m: usize,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: tsirelson_core::Error| e.to_string())
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse().map_err(|e: tsirelson_core::Error| e.to_string())
}

/// A validated norm or trace job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub spec: SpaceSpec,
    pub level: Level,
    pub vector: OpVector,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl JobConfig {
    pub fn from_args(a: &NormArgs, default_format: Format) -> anyhow::Result<Self> {
        let p = match (a.variant.uses_p(), a.p) {
            (true, Some(p)) => p,
            (true, None) => bail!("--p is required for {}", a.variant),
            (false, _) => 2.0,
        };
        let spec = build_spec(a.variant, p, a.theta, &a.engine)?;
        let level = a.level.unwrap_or_else(|| spec.default_level());
        Ok(JobConfig {
            spec,
            level,
            vector: read_input(&a.input)?,
            format: a.output.format.unwrap_or(default_format),
            out: a.output.out.clone(),
        })
    }
}

fn build_spec(variant: Variant, p: f64, theta: f64, e: &EngineArgs) -> anyhow::Result<SpaceSpec> {
    let mut spec = SpaceSpec::new(variant, p, theta)?;
    spec.max_depth = e.depth;
    spec.chain_depth = e.chain_depth;
    spec.tol = e.tol;
    spec.support_cap = e.cap;
    spec.solver = SolverOptions {
        seed: e.seed,
        ..SolverOptions::default()
    };
    spec.validate()?;
    Ok(spec)
}

fn read_input(a: &InputArgs) -> anyhow::Result<OpVector> {
    if let Some(expr) = &a.inline {
        return parse_inline(expr).map_err(|e| anyhow!("[{}] {e}", e.code()));
    }
    let path = a.input.as_ref().expect("clap requires one input");
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_vector(&text).map_err(|e| anyhow!("[{}] {}: {e}", e.code(), path.display()))
}

/// How a command ended.
enum Failure {
    /// Bad arguments or input.
    Usage(anyhow::Error),
    /// Everything ran and some check failed.
    Check,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<tsirelson_core::Error> for Failure {
    fn from(e: tsirelson_core::Error) -> Self {
        Failure::Usage(e.into())
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli.command, stdout) {
        Ok(()) => 0,
        Err(Failure::Check) => 1,
        Err(Failure::Usage(e)) => {
            let _ = writeln!(stderr, "error: {e:#}");
            2
        }
    }
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, body: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => stdout.write_all(body.as_bytes()).context("writing to standard output"),
    }
}

fn json_body(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialise");
    s.push('\n');
    s
}

fn csv_body(rows: &[report::SweepRow]) -> anyhow::Result<String> {
    let mut buf = Vec::new();
    report::write_csv(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

fn evaluate(job: &JobConfig) -> anyhow::Result<EngineOutput> {
    norm_bounds(&job.vector, &job.spec, job.level).with_context(|| report::header_text(&job.vector, &job.spec, job.level))
}

fn dispatch(cmd: &Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Norm(a) => {
            let job = JobConfig::from_args(a, Format::Text)?;
            let out = evaluate(&job)?;
            let body = match job.format {
                Format::Text => report::norm_text(&job.vector, &job.spec, job.level, &out),
                Format::Json => json_body(&report::norm_json(&job.vector, &job.spec, job.level, &out)),
                Format::Csv => csv_body(&[report::SweepRow::new(&job.vector, &job.spec, job.level, &out)])?,
            };
            emit(&job.out, stdout, &body)?;
        }
        Command::Trace(a) => {
            let job = JobConfig::from_args(a, Format::Text)?;
            let out = evaluate(&job)?;
            let body = match job.format {
                Format::Text => report::trace_text(&job.vector, &job.spec, job.level, &out),
                Format::Json => json_body(&report::norm_json(&job.vector, &job.spec, job.level, &out)),
                Format::Csv => return Err(anyhow!("trace has json and text output").into()),
            };
            emit(&job.out, stdout, &body)?;
        }
        Command::Verify(a) => {
            let mut grid = SuiteGrid::default();
            if let Some(n) = a.instances {
                grid.instances = n;
            }
            if let Some(t) = &a.thetas {
                grid.thetas = t.clone();
            }
            let suite = run_suite(&grid, a.seed)?;
            let body = match a.output.format.unwrap_or(Format::Json) {
                Format::Json => json_body(&report::suite_json(&suite)),
                Format::Text => report::suite_text(&suite),
                Format::Csv => return Err(anyhow!("verify has json and text output").into()),
            };
            emit(&a.output.out, stdout, &body)?;
            if !suite.passed() {
                return Err(Failure::Check);
            }
        }
        Command::Enumerate(a) => {
            let opts = EnumerationOptions {
                cap: a.cap,
                k: a.k,
                budget: match a.budget {
                    BudgetArg::Tsirelson => Budget::Tsirelson,
                    BudgetArg::Linear => Budget::Linear,
                },
            };
            let families: Vec<_> = enumerate_allowable(&a.support, &opts)?.collect();
            let body = match a.output.format.unwrap_or(Format::Text) {
                Format::Text => {
                    let mut s: String = families.iter().map(|f| format!("{f}\n")).collect();
                    s.push_str(&format!("{} families\n", families.len()));
                    s
                }
                Format::Json => json_body(&json!({
                    "support": a.support,
                    "k": a.k,
                    "count": families.len(),
                    "families": families.iter().map(report::family_json).collect::<Vec<_>>(),
                })),
                Format::Csv => return Err(anyhow!("enumerate has json and text output").into()),
            };
            emit(&a.output.out, stdout, &body)?;
        }
        Command::Sweep(a) => {
            let x = read_input(&a.input)?;
            let mut rows = Vec::new();
            let mut outputs = Vec::new();
            for &variant in &a.variant {
                let ps: &[f64] = if variant.uses_p() { &a.p } else { &[2.0] };
                for &p in ps {
                    for &theta in &a.theta {
                        let spec = build_spec(variant, p, theta, &a.engine)?;
                        let levels = if a.level.is_empty() { vec![spec.default_level()] } else { a.level.clone() };
                        for level in levels {
                            let out = norm_bounds(&x, &spec, level)
                                .with_context(|| report::header_text(&x, &spec, level))?;
                            rows.push(report::SweepRow::new(&x, &spec, level, &out));
                            outputs.push(report::norm_json(&x, &spec, level, &out));
                        }
                    }
                }
            }
            let body = match a.output.format.unwrap_or(Format::Csv) {
                Format::Csv => csv_body(&rows)?,
                Format::Json => json_body(&serde_json::Value::Array(outputs)),
                Format::Text => {
                    let mut s = report::CSV_HEADER.join("\t");
                    s.push('\n');
                    for r in &rows {
                        s.push_str(&format!(
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                            r.variant,
                            r.p,
                            r.theta,
                            r.support,
                            r.level,
                            r.lower,
                            r.upper,
                            r.exact,
                            r.stabilized_at.map_or_else(|| "none".to_string(), |n| n.to_string())
                        ));
                    }
                    s
                }
            };
            emit(&a.output.out, stdout, &body)?;
        }
        Command::DemoC0(a) => {
            let r = c0_sequence_demo(a.m, a.p)?;
            let body = match a.output.format.unwrap_or(Format::Text) {
                Format::Text => {
                    let mut s = report::check_text(&r);
                    for (k, v) in &r.details {
                        s.push_str(&format!("{k} {v}\n"));
                    }
                    s
                }
                Format::Json => json_body(&report::check_json(&r)),
                Format::Csv => return Err(anyhow!("demo-c0 has json and text output").into()),
            };
            emit(&a.output.out, stdout, &body)?;
            if !r.passed {
                return Err(Failure::Check);
            }
        }
    }
    Ok(())
}
