//! Command-line front end. Every subcommand prints one JSON document on
//! standard output; diagnostics go to standard error.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when a computation does
//! not converge, 64 on usage errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::barnes::{self, BarnesError, ContourConfig, EpsilonSign, Lemma3Settings};
use crate::hyperseries::{self, HParams, SeriesError};
use crate::identity::{self, IdentityError, VerifySettings};
use crate::multint::{self, ABParams, IntegralError, McConfig, SParams};
use crate::numctx::{make_context, ExactRational, HPReal, NumError, PrecisionContext};
use crate::zetaforms::{self, ZetaFormError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Settings shared by all subcommands, echoed in every document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub precision_bits: u32,
    pub rel_tol: f64,
    pub mc_samples: u64,
    pub mc_seed: u64,
    pub mc_chunks: u32,
    pub quad_nodes: usize,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            precision_bits: 128,
            rel_tol: 1e-20,
            mc_samples: 1_000_000,
            mc_seed: 42,
            mc_chunks: 16,
            quad_nodes: 64,
            output_path: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("no convergence: {0}")]
    NotConverged(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::NotConverged(_) => EXIT_NOT_CONVERGED,
            _ => EXIT_INVALID,
        }
    }
}

fn invalid(e: impl ToString) -> CliError {
    CliError::Invalid(e.to_string())
}

impl From<NumError> for CliError {
    fn from(e: NumError) -> Self {
        invalid(e)
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        invalid(e)
    }
}

impl From<IntegralError> for CliError {
    fn from(e: IntegralError) -> Self {
        invalid(e)
    }
}

impl From<BarnesError> for CliError {
    fn from(e: BarnesError) -> Self {
        match e {
            BarnesError::Truncation { .. } | BarnesError::NotConverged | BarnesError::BranchMismatch { .. } => {
                CliError::NotConverged(e.to_string())
            }
            _ => invalid(e),
        }
    }
}

impl From<ZetaFormError> for CliError {
    fn from(e: ZetaFormError) -> Self {
        invalid(e)
    }
}

impl From<IdentityError> for CliError {
    fn from(e: IdentityError) -> Self {
        invalid(e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "wellpoised", version, about = "Very-well-poised series, their integrals and zeta linear forms")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Working precision in bits.
    #[arg(long = "prec", global = true, default_value_t = 128)]
    prec: u32,
    /// Relative tolerance for series summation.
    #[arg(long = "tol", global = true, default_value_t = 1e-20)]
    tol: f64,
    #[arg(long = "mc-samples", global = true, default_value_t = 1_000_000)]
    mc_samples: u64,
    #[arg(long = "mc-seed", global = true, default_value_t = 42)]
    mc_seed: u64,
    #[arg(long = "mc-chunks", global = true, default_value_t = 16)]
    mc_chunks: u32,
    /// Coarse quadrature nodes per dimension.
    #[arg(long = "quad-nodes", global = true, default_value_t = 64)]
    quad_nodes: usize,
    /// Also write the JSON document to this file.
    #[arg(long = "out", global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sum F(h0; h1, ..., h_m).
    Series {
        /// h0,h1,...,h_m
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// Evaluate the multiple integral J_k.
    Integral {
        /// a0,a1,...,a_k
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// b1,...,b_k
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Monte Carlo estimate of the S integral.
    SIntegral {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Strictly increasing prefix lengths, the last equal to k.
        #[arg(long)]
        r: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Check the series/integral identity at the given h.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        /// Expected rank; checked against the length of h.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Compare the Euler, Barnes and Gauss forms of the one-dimensional integral.
    Barnes {
        /// a0,a
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Dimension reduction of J_k through a Barnes integral.
    Lemma3 {
        /// a0,a1,...,a_k
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// b1,...,b_k
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Exact linear form in zeta values of the specialised series.
    Zetaform {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        #[arg(long = "r-mult", default_value_t = 1)]
        r_mult: u64,
    },
    /// Integrality of D_n^{k+1} Phi_n^{-1} J_{k,n}.
    Inclusion {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
    },
    /// D_n, Phi_n and ln(Phi_n)/n.
    Phi {
        #[arg(long)]
        n: u64,
    },
    /// Orders of the permutation group with and without the involution.
    Group {
        #[arg(long)]
        k: usize,
    },
}

/// Parses one number, accepting `p/q`, integers and decimals.
fn parse_number(s: &str) -> Result<f64, CliError> {
    let t = s.trim();
    if t.contains('/') {
        let q: ExactRational = t.parse()?;
        return Ok(q.to_f64());
    }
    t.parse::<f64>().map_err(|_| invalid(format!("not a number: {t:?}")))
}

fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(parse_number).collect()
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| invalid(format!("not an index: {t:?}")))).collect()
}

fn digits_for(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor() as usize
}

fn hp_string(x: &HPReal, cfg: &RunConfig) -> String {
    x.to_decimal_string(digits_for(cfg.precision_bits).max(2))
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize to JSON")
}

struct Report {
    body: Value,
    converged: bool,
}

impl Report {
    fn ok(body: Value) -> Self {
        Self { body, converged: true }
    }
}

fn split_ab(a: &str, b: &str) -> Result<ABParams, CliError> {
    let a = parse_list(a)?;
    let b = parse_list(b)?;
    let (a0, rest) = a.split_first().ok_or_else(|| invalid("--a needs a0 followed by a_1..a_k"))?;
    Ok(ABParams::new(*a0, rest.to_vec(), b)?)
}

fn mc_config(cfg: &RunConfig) -> Result<McConfig, CliError> {
    Ok(McConfig::new(cfg.mc_samples, cfg.mc_seed, cfg.mc_chunks)?)
}

fn execute(cmd: &Command, cfg: &RunConfig, ctx: &PrecisionContext) -> Result<Report, CliError> {
    match cmd {
        Command::Series { h } => {
            let hp = HParams::from_slice(&parse_list(h)?)?;
            let v = hyperseries::eval_F(&hp, ctx)?;
            let conditions = if hp.k() >= 3 { Some(to_json(&hyperseries::check_conditions(&hp))) } else { None };
            Ok(Report {
                converged: v.converged,
                body: json!({
                    "value": hp_string(&v.value, cfg),
                    "converged": v.converged,
                    "slow_convergence": v.slow_convergence,
                    "abel_summed": v.abel_summed,
                    "terms": v.terms,
                    "error_estimate": v.error_estimate,
                    "conditions": conditions,
                }),
            })
        }
        Command::Integral { a, b } => {
            let ab = split_ab(a, b)?;
            let margin = multint::singularity_margin(&ab);
            if ab.k() <= 3 {
                let q = multint::eval_j_quad(&ab, cfg.quad_nodes, ctx)?;
                Ok(Report::ok(json!({
                    "k": ab.k(),
                    "method": "quadrature",
                    "value": q.value.to_f64(),
                    "rel_err": q.rel_err,
                    "nodes_per_dim": q.nodes_per_dim,
                    "rule": to_json(&q.rule),
                    "margin": margin,
                })))
            } else {
                let m = multint::eval_j_mc(&ab, &mc_config(cfg)?)?;
                Ok(Report::ok(json!({
                    "k": ab.k(),
                    "method": "monte-carlo",
                    "value": m.estimate,
                    "mc": to_json(&m),
                    "margin": margin,
                })))
            }
        }
        Command::SIntegral { a, b, c, r, z } => {
            let sp = SParams::new(parse_list(a)?, parse_list(b)?, parse_list(c)?, parse_usize_list(r)?, parse_number(z)?)?;
            let m = multint::eval_s_mc(&sp, &mc_config(cfg)?)?;
            Ok(Report::ok(json!({ "params": to_json(&sp), "mc": to_json(&m) })))
        }
        Command::Verify { h, k } => {
            let hp = HParams::from_slice(&parse_list(h)?)?;
            let rank = identity::rank_of(&hp)?;
            if let Some(k) = k {
                if *k != rank {
                    return Err(invalid(format!("--k {k} does not match the {} lower parameters of --h", hp.k())));
                }
            }
            let settings = VerifySettings { mc: mc_config(cfg)?, ..VerifySettings::default() };
            let t = identity::verify_theorem(&hp, ctx, &settings)?;
            let mut body = to_json(&t);
            body["ab"] = to_json(&identity::h_to_ab(&hp)?);
            Ok(Report::ok(body))
        }
        Command::Barnes { a, b, z } => {
            let a = parse_list(a)?;
            let [a0, a1] = a[..] else {
                return Err(invalid("--a needs exactly a0,a"));
            };
            let (b, z) = (parse_number(b)?, parse_number(z)?);
            let euler = barnes::euler_side(a0, a1, b, z, ctx)?;
            let side = |r: Result<Value, BarnesError>| match r {
                Ok(v) => v,
                Err(e) => json!({ "error": e.to_string() }),
            };
            let gauss = side(barnes::gauss_2f1_side(a0, a1, b, z, ctx).map(|g| json!(hp_string(&g, cfg))));
            let cc = ContourConfig::new(0.5 * a0.min(a1));
            let contour = side(barnes::barnes_side(a0, a1, b, z, &cc, ctx).map(|v| to_json(&v)));
            Ok(Report::ok(json!({
                "euler": hp_string(&euler, cfg),
                "gauss": gauss,
                "barnes": contour,
                "contour": to_json(&cc),
            })))
        }
        Command::Lemma3 { a, b } => {
            let ab = split_ab(a, b)?;
            let k = ab.k();
            let signs: &[i8] = if k % 2 == 0 { &[0] } else { &[1, -1] };
            let cc = ContourConfig::new(0.5 * ab.a0().min(ab.a().iter().copied().fold(f64::INFINITY, f64::min)));
            let settings = Lemma3Settings::default();
            let mut results = Vec::new();
            for &s in signs {
                let eps = EpsilonSign::new(k, s)?;
                let v = barnes::lemma3_check(&ab, eps, &cc, &settings, ctx)?;
                let mut j = to_json(&v);
                j["epsilon"] = json!(s);
                results.push(j);
            }
            Ok(Report::ok(json!({ "k": k, "results": results })))
        }
        Command::Zetaform { k, n, r_mult } => {
            let form = zetaforms::linear_form_for(*k, *n, *r_mult)?;
            let value = form.value(ctx)?;
            let h = zetaforms::specialization(*k, *n, *r_mult)?;
            Ok(Report::ok(json!({
                "k": k,
                "n": n,
                "r": r_mult,
                "h": h.to_vec(),
                "form": to_json(&form),
                "value": hp_string(&value, cfg),
            })))
        }
        Command::Inclusion { k, n } => Ok(Report::ok(to_json(&zetaforms::inclusion_report(*k, *n)?))),
        Command::Phi { n } => {
            let mut body = to_json(&zetaforms::normalizers(*n));
            body["log_phi_over_n"] = json!(zetaforms::phi_growth(*n));
            Ok(Report::ok(body))
        }
        Command::Group { k } => {
            let mut gens = identity::permutation_generators(*k);
            let plain = identity::group_closure(&gens)?.order;
            let c = identity::c_transform(*k)?;
            gens.push(c.clone());
            let full = identity::group_closure(&gens)?.order;
            Ok(Report::ok(json!({
                "k": k,
                "order_without_c": plain,
                "order_with_c": full,
                "c": to_json(&c),
                "generators": to_json(&gens),
            })))
        }
    }
}

/// Runs the tool on `argv` (including the program name), writing JSON to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                EXIT_OK
            } else {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            };
        }
    };
    let cfg = RunConfig {
        precision_bits: cli.common.prec,
        rel_tol: cli.common.tol,
        mc_samples: cli.common.mc_samples,
        mc_seed: cli.common.mc_seed,
        mc_chunks: cli.common.mc_chunks,
        quad_nodes: cli.common.quad_nodes,
        output_path: cli.common.out.clone(),
    };
    let result = make_context(cfg.precision_bits, cfg.rel_tol)
        .map_err(CliError::from)
        .and_then(|ctx| execute(&cli.command, &cfg, &ctx))
        .and_then(|report| emit(report, &cfg, out));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(report: Report, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut doc = report.body;
    doc["config"] = to_json(cfg);
    doc["tool_version"] = json!(env!("CARGO_PKG_VERSION"));
    let text = serde_json::to_string_pretty(&doc).expect("JSON values always serialize") + "\n";
    out.write_all(text.as_bytes())?;
    if let Some(path) = &cfg.output_path {
        std::fs::write(path, &text)?;
    }
    Ok(if report.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

/// Runs the tool with the process streams.
pub fn run(argv: &[String]) -> i32 {
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
