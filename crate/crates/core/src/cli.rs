//! The `fscalc` command line.
//!
//! Every command prints JSON (compact, or indented with `--pretty`) and
//! exits with 0 on success, 1 on a domain-level negative answer and 2 on
//! usage or contract errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bootstrap::{plan_bootstrap, validate_inner};
use crate::composition::{delta, loss_d, membership, sigma, SigmaMode};
use crate::embedding::{embeds, lebesgue_verdict};
use crate::error::CalcError;
use crate::numeric::{format_rational, parse_ext, parse_rational, Rational};
use crate::plot::{render_svg, PlotSpec};
use crate::remarks::verify_remarks;
use crate::space::{trace_target, Base, OperatorSpec, Scale, SpaceParams};

#[derive(Parser, Debug)]
#[command(name = "fscalc", version, about = "Exact parameter calculus for Besov and Triebel-Lizorkin spaces")]
pub struct Cli {
    /// Compact JSON (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    pub json: bool,
    /// Indented JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Write the output to PATH instead of standard output.
    #[arg(short = 'o', long = "output", global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Membership of E^s_{p,q} in the parameter domain.
    Check {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        op: OperatorArgs,
    },
    /// Composition smoothness sigma(s,p) and margin delta.
    Sigma {
        /// Smoothness, e.g. 3/2 or 6-eps.
        s: String,
        /// Integrability p, or inf.
        p: String,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "f")]
        scale: ScaleArg,
        /// Sum exponent q, or inf.
        #[arg(long, default_value = "inf")]
        q: String,
        #[arg(long, value_enum, default_value = "proved")]
        mode: ModeArg,
    },
    /// Derive an embedding between two spaces, or into a Lebesgue space.
    Embed {
        scale: ScaleArg,
        s: String,
        p: String,
        q: String,
        /// Target space as SCALE S P Q; omit when --lebesgue is given.
        #[arg(num_args = 0..=4, value_name = "TARGET")]
        target: Vec<String>,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "bounded")]
        base: BaseArg,
        /// Target L_r with r given as a number or inf.
        #[arg(long, value_name = "R")]
        lebesgue: Option<String>,
    },
    /// Boundary space of the trace operator.
    TraceTarget {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        op: OperatorArgs,
    },
    /// Bootstrap certificate from an initial space to a target space.
    Plan {
        scale: ScaleArg,
        s: String,
        p: String,
        q: String,
        target_scale: ScaleArg,
        target_s: String,
        target_p: String,
        target_q: String,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        op: OperatorArgs,
    },
    /// SVG picture of the parameter domain.
    Plot {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        r: u8,
        /// Right end of the n/p axis (default max(2n, 12)).
        #[arg(long)]
        t_max: Option<String>,
        #[arg(long)]
        s_min: Option<String>,
        #[arg(long)]
        s_max: Option<String>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Exact checks of the implications between the domain conditions.
    VerifyRemarks {
        #[arg(long, default_value_t = 50)]
        n_max: u32,
    },
}

#[derive(Args, Debug)]
pub struct SpaceArgs {
    pub scale: ScaleArg,
    /// Smoothness, e.g. 3/2 or 6-eps.
    pub s: String,
    /// Integrability p, or inf.
    pub p: String,
    /// Sum exponent q, or inf.
    pub q: String,
    #[arg(long)]
    pub n: u32,
}

#[derive(Args, Debug)]
pub struct OperatorArgs {
    /// Trace class r (1 or 2).
    #[arg(long, default_value_t = 1)]
    pub r: u8,
    /// Order d of the boundary operator (default r - 1).
    #[arg(long)]
    pub d: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ScaleArg {
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "F", alias = "f")]
    F,
}

impl From<ScaleArg> for Scale {
    fn from(s: ScaleArg) -> Scale {
        match s {
            ScaleArg::B => Scale::B,
            ScaleArg::F => Scale::F,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BaseArg {
    Full,
    Bounded,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Proved,
    Conjectured,
}

/// `p` (or `q`) on the command line to its reciprocal; `inf` gives 0.
pub fn parse_reciprocal(text: &str) -> Result<Rational, CalcError> {
    if text.trim().eq_ignore_ascii_case("inf") {
        return Ok(Rational::zero());
    }
    let value = parse_rational(text)?;
    if value <= Rational::zero() {
        return Err(CalcError::Parse(format!("exponent must be positive or inf, got `{text}`")));
    }
    Ok(value.recip())
}

fn build_space(scale: ScaleArg, s: &str, p: &str, q: &str, n: u32, base: Base) -> Result<SpaceParams, CalcError> {
    SpaceParams::new(scale.into(), parse_ext(s)?, parse_reciprocal(p)?, parse_reciprocal(q)?, n, base)
}

fn build_operator(args: &OperatorArgs) -> Result<OperatorSpec, CalcError> {
    match &args.d {
        None => OperatorSpec::with_class(args.r),
        Some(d) => OperatorSpec::new(args.r, parse_rational(d)?, false, true),
    }
}

/// Result of one command: a JSON document (or raw text) and an exit code.
pub enum Output {
    Json(Value),
    Text(String),
}

pub struct Outcome {
    pub output: Output,
    pub code: i32,
}

fn to_json<T: Serialize>(value: &T) -> Result<Value, CalcError> {
    serde_json::to_value(value).map_err(|e| CalcError::Internal(e.to_string()))
}

fn verdict(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

pub fn execute(command: &Command) -> Result<Outcome, CalcError> {
    match command {
        Command::Check { space, op } => {
            let sp = build_space(space.scale, &space.s, &space.p, &space.q, space.n, Base::BoundedDomain)?;
            let op = build_operator(op)?;
            let report = membership(&sp, &op)?;
            let code = verdict(report.in_domain);
            let mut value = to_json(&report)?;
            value["space"] = to_json(&sp)?;
            Ok(Outcome { output: Output::Json(value), code })
        }
        Command::Sigma { s, p, n, scale, q, mode } => {
            let s = parse_ext(s)?;
            let u = parse_reciprocal(p)?;
            let v = parse_reciprocal(q)?;
            let mode = match mode {
                ModeArg::Proved => SigmaMode::Proved,
                ModeArg::Conjectured => SigmaMode::Conjectured,
            };
            let value = sigma(&s, &u, *n, (*scale).into(), &v, mode)?;
            let margin = delta(&s, &u, *n)?;
            let t = &u * Rational::from_integer((*n).into());
            let loss = if s.is_exact() && s.base > Rational::one() && s.base < t {
                Some(format_rational(&loss_d(&s.base, &u, *n)?))
            } else {
                None
            };
            let doc = json!({
                "s": s,
                "np": format_rational(&t),
                "sigma": value,
                "delta": margin,
                "lossD": loss,
            });
            Ok(Outcome { output: Output::Json(doc), code: 0 })
        }
        Command::Embed { scale, s, p, q, target, n, base, lebesgue } => {
            let base = match base {
                BaseArg::Full => Base::FullSpace,
                BaseArg::Bounded => Base::BoundedDomain,
            };
            let src = build_space(*scale, s, p, q, *n, base)?;
            match (lebesgue, target.as_slice()) {
                (Some(r), []) => {
                    let r = parse_reciprocal(r)?;
                    let verdict_doc = lebesgue_verdict(&src, &r)?;
                    let code = verdict(verdict_doc.holds);
                    Ok(Outcome { output: Output::Json(to_json(&verdict_doc)?), code })
                }
                (None, [t_scale, t_s, t_p, t_q]) => {
                    let t_scale = ScaleArg::from_str(t_scale, true)
                        .map_err(|_| CalcError::Parse(format!("unknown scale `{t_scale}`")))?;
                    let dst = build_space(t_scale, t_s, t_p, t_q, *n, base)?;
                    let proof = embeds(&src, &dst)?;
                    let code = verdict(proof.is_some());
                    let doc = json!({
                        "source": to_json(&src)?,
                        "target": to_json(&dst)?,
                        "derivable": proof.is_some(),
                        "proof": proof,
                    });
                    Ok(Outcome { output: Output::Json(doc), code })
                }
                _ => Err(CalcError::Parse("embed needs either a target SCALE S P Q or --lebesgue R".into())),
            }
        }
        Command::TraceTarget { space, op } => {
            let sp = build_space(space.scale, &space.s, &space.p, &space.q, space.n, Base::BoundedDomain)?;
            let op = build_operator(op)?;
            let target = trace_target(&sp, &op)?;
            Ok(Outcome { output: Output::Json(json!({ "space": sp, "trace": target })), code: 0 })
        }
        Command::Plan { scale, s, p, q, target_scale, target_s, target_p, target_q, n, op } => {
            let op = build_operator(op)?;
            let initial = build_space(*scale, s, p, q, *n, Base::BoundedDomain)?;
            let target = build_space(*target_scale, target_s, target_p, target_q, *n, Base::BoundedDomain)?;
            let cert = match plan_bootstrap(&initial, &target, &op) {
                Ok(cert) => cert,
                Err(CalcError::NotInDomain(msg)) => {
                    return Ok(Outcome { output: Output::Json(json!({ "error": "not in domain", "detail": msg })), code: 1 })
                }
                Err(e) => return Err(e),
            };
            validate_inner(&cert, &op).map_err(|e| CalcError::Internal(format!("certificate failed validation: {e}")))?;
            Ok(Outcome { output: Output::Json(to_json(&cert)?), code: 0 })
        }
        Command::Plot { n, r, t_max, s_min, s_max, samples } => {
            let standard = PlotSpec::standard(*n, *r)?;
            let pick = |arg: &Option<String>, fallback: &Rational| -> Result<Rational, CalcError> {
                arg.as_deref().map(parse_rational).transpose().map(|v| v.unwrap_or_else(|| fallback.clone()))
            };
            let cfg = PlotSpec::new(
                *n,
                *r,
                pick(t_max, &standard.t_max)?,
                pick(s_min, &standard.s_min)?,
                pick(s_max, &standard.s_max)?,
                *samples,
            )?;
            Ok(Outcome { output: Output::Text(render_svg(&cfg)?), code: 0 })
        }
        Command::VerifyRemarks { n_max } => {
            let report = verify_remarks(*n_max)?;
            let code = verdict(report.passed);
            Ok(Outcome { output: Output::Json(to_json(&report)?), code })
        }
    }
}

fn render(output: &Output, pretty: bool) -> String {
    match output {
        Output::Text(text) => text.clone(),
        Output::Json(value) => {
            let mut text = if pretty {
                serde_json::to_string_pretty(value).expect("JSON values serialise")
            } else {
                serde_json::to_string(value).expect("JSON values serialise")
            };
            text.push('\n');
            text
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let text = err.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    let outcome = execute(&cli.command);
    let (text, code) = match outcome {
        Ok(outcome) => (render(&outcome.output, cli.pretty), outcome.code),
        Err(err) => {
            let _ = writeln!(stderr, "fscalc: {err}");
            return 2;
        }
    };
    match &cli.output {
        Some(path) => {
            if let Err(err) = std::fs::write(path, text.as_bytes()) {
                let _ = writeln!(stderr, "fscalc: cannot write {}: {err}", path.display());
                return 2;
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    code
}
