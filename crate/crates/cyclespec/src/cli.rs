//! Command-line surface for sums, L-values, kernels, verification suites,
//! and batch tables.
//!
//! Every job is reproducible from its serialized echo: the output embeds
//! the parsed parameters, the precision, the methods used, values with
//! exact rationals rendered as "p/q" where available, and cross-check
//! deltas. Identical jobs produce byte-identical output.
//!
//! Exit codes: 0 success, 2 usage/domain violations (the message names the
//! violated condition), 3 internal cross-check failure (route disagreement
//! beyond budget or a failed verification suite).

use crate::error::Error;
use crate::heat::{heat_kernel_cycle, CycleParams, KernelMethod};
use crate::lfn;
use crate::numeric::{parse_rational, CNum, Rational, Tolerance, DEFAULT_PRECISION_BITS};
use crate::resolvent::{self, Normalization};
use crate::trigsums::{self, SumKind, SumSpec};
use crate::verify::{self, CheckOutcome, SuiteConfig};
use clap::{Parser, Subcommand, ValueEnum};
use rug::Float;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

#[derive(Parser, Debug)]
#[command(
    name = "cyclespec",
    about = "Twisted cosecant/secant sums, heat and resolvent kernels on the discrete circle, and spectral L-function values, with built-in cross-verification",
    version
)]
struct Cli {
    /// Working precision in bits (>= 53); defaults to 128 or
    /// CYCLESPEC_PRECISION_BITS.
    #[arg(long, global = true)]
    precision_bits: Option<u32>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one twisted trigonometric sum by both routes.
    Sum {
        /// Sum family: cosecant, secant, cosecant-double, secant-double,
        /// cosecant-noshift, secant-noshift, cosecant-double-noshift,
        /// cotangent, tangent, alternating-cosecant.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        m: u32,
        /// Additive twist r (reduced mod m internally).
        #[arg(long, default_value_t = 0)]
        r: i64,
        /// Shift β as "p/q" or a decimal (0.3 means exactly 3/10).
        #[arg(long)]
        beta: Option<String>,
        /// Shift α for the secant families (alias of --beta).
        #[arg(long)]
        alpha: Option<String>,
        /// Series index n (exponent 2n for single-argument kinds, n for
        /// double-argument kinds).
        #[arg(long)]
        n: u32,
        /// Route: both, direct, or closed.
        #[arg(long, default_value = "both")]
        method: String,
    },
    /// Closed-form coefficient lists C_{m,r}(β,n) for n = 1..count.
    Series {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        r: i64,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        count: u32,
        /// generating | recurrence | direct
        #[arg(long, default_value = "recurrence")]
        method: String,
    },
    /// Spectral L-function values by all applicable routes.
    Lvalue {
        /// Modulus of the character.
        #[arg(long)]
        m: u32,
        /// Index of the character in the canonical enumeration.
        #[arg(long = "char")]
        char_index: usize,
        #[arg(long)]
        n: u32,
        /// standard | tilde | hat
        #[arg(long, default_value = "standard")]
        variant: String,
    },
    /// Twisted heat kernel values on the cycle graph.
    Heat {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "0")]
        beta: String,
        #[arg(long)]
        x: i64,
        #[arg(long)]
        y: i64,
        /// Time, as a decimal or "p/q".
        #[arg(long)]
        t: String,
        /// both | image | spectral
        #[arg(long, default_value = "both")]
        method: String,
    },
    /// Twisted resolvent kernel values by up to four routes.
    Resolvent {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "0")]
        beta: String,
        #[arg(long, default_value_t = 0)]
        r: i64,
        /// Complex s as "a+bi" (e.g. "1.5+0.2i", "2", "-1i").
        #[arg(long)]
        s: String,
        /// all | spectral | chebyshev | hyperbolic | laplace
        #[arg(long, default_value = "all")]
        form: String,
        /// Phase convention: cancelled (generating function) or full.
        #[arg(long, default_value = "cancelled")]
        normalization: String,
        /// Integration horizon for the Laplace route.
        #[arg(long, default_value = "60")]
        horizon: String,
    },
    /// Pole locations of the resolvent with exact multiplicities.
    Poles {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "0")]
        beta: String,
    },
    /// Run the cross-verification suites (CI entry point).
    Verify {
        /// all | acceptance (synonyms)
        #[arg(long, default_value = "all")]
        suite: String,
        /// Cap on the modulus grids.
        #[arg(long, default_value_t = 30)]
        max_m: u32,
    },
    /// Per-n cross-check table for one sum family.
    Table {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        r: i64,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        count: u32,
    },
}

/// A rendered complex value: decimal strings at precision-determined digit
/// counts, plus the exact rational "p/q" when one exists.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ValueOut {
    pub re: String,
    pub im: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

/// One labelled result row.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Row {
    pub label: String,
    pub value: ValueOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<String>,
}

/// Echo of the fully-parsed job; jobs are reproducible from this alone.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct JobEcho {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub precision_bits: u32,
    pub output_format: String,
}

/// Complete, deterministic job report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct JobOutput {
    pub job: JobEcho,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<Row>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckOutcome>,
}

fn digits_for(precision_bits: u32) -> usize {
    ((precision_bits as f64) * std::f64::consts::LN_2 / std::f64::consts::LN_10).floor() as usize
}

fn format_float(f: &Float, precision_bits: u32) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    f.to_string_radix(10, Some(digits_for(precision_bits)))
}

fn value_out(v: &CNum, exact: Option<&Rational>, precision_bits: u32) -> ValueOut {
    ValueOut {
        re: format_float(v.re(), precision_bits),
        im: format_float(v.im(), precision_bits),
        exact: exact.map(|q| q.to_string()),
    }
}

struct Ctx {
    precision_bits: u32,
    format: OutputFormat,
}

fn cross_delta(a: &CNum, b: &CNum) -> Float {
    a.sub(b).abs()
}

type CliResult = std::result::Result<JobOutput, CliFailure>;

enum CliFailure {
    /// usage or domain violation → exit 2
    Usage(String),
    /// route disagreement or failed suite → exit 3 (report still printed)
    CrossCheck(Box<JobOutput>, String),
}

impl From<Error> for CliFailure {
    fn from(e: Error) -> Self {
        CliFailure::Usage(e.to_string())
    }
}

fn shift_from(beta: &Option<String>, alpha: &Option<String>) -> std::result::Result<Rational, CliFailure> {
    match (beta, alpha) {
        (Some(_), Some(_)) => Err(CliFailure::Usage(
            "--beta and --alpha are aliases; give exactly one".into(),
        )),
        (Some(b), None) => Ok(parse_rational(b)?),
        (None, Some(a)) => Ok(parse_rational(a)?),
        (None, None) => Ok(Rational::from(0)),
    }
}

fn parse_complex(s: &str, precision_bits: u32) -> std::result::Result<CNum, CliFailure> {
    let t = s.trim().replace(' ', "");
    let parse_part = |txt: &str| -> std::result::Result<Float, CliFailure> {
        let q = parse_rational(txt)?;
        Ok(Float::with_val(precision_bits, &q))
    };
    if let Some(body) = t.strip_suffix('i') {
        // find the split between real and imaginary parts: the last +/-
        // that is not the leading sign
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if bytes[i] == b'+' || bytes[i] == b'-' {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re = parse_part(&body[..i])?;
                let im_txt = &body[i..];
                let im = if im_txt == "+" {
                    Float::with_val(precision_bits, 1)
                } else if im_txt == "-" {
                    Float::with_val(precision_bits, -1)
                } else {
                    parse_part(im_txt)?
                };
                Ok(CNum::new(re, im))
            }
            None => {
                let im = if body.is_empty() {
                    Float::with_val(precision_bits, 1)
                } else {
                    parse_part(body)?
                };
                Ok(CNum::new(Float::with_val(precision_bits, 0), im))
            }
        }
    } else {
        Ok(CNum::from_real(parse_part(&t)?))
    }
}

fn echo(
    ctx: &Ctx,
    command: &str,
    params: impl IntoIterator<Item = (&'static str, String)>,
) -> JobEcho {
    JobEcho {
        command: command.to_string(),
        parameters: params
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        precision_bits: ctx.precision_bits,
        output_format: format!("{:?}", ctx.format).to_lowercase(),
    }
}

fn run_sum(
    ctx: &Ctx,
    kind: &str,
    m: u32,
    r: i64,
    shift: Rational,
    n: u32,
    method: &str,
) -> CliResult {
    let p = ctx.precision_bits;
    let sum_kind = SumKind::parse(kind)?;
    let spec = SumSpec::new(sum_kind, m, r, shift.clone(), n)?;
    let job = echo(
        ctx,
        "sum",
        [
            ("kind", sum_kind.as_str().to_string()),
            ("m", m.to_string()),
            ("r", r.to_string()),
            ("shift", shift.to_string()),
            ("n", n.to_string()),
            ("method", method.to_string()),
        ],
    );
    let mut rows = Vec::new();
    let mut failure: Option<String> = None;
    match method {
        "direct" => {
            let res = trigsums::direct_sum(&spec, p)?;
            rows.push(Row {
                label: "value".into(),
                value: value_out(&res.value, res.exact.as_ref(), p),
                method: Some("direct".into()),
                delta: None,
                budget: None,
            });
        }
        "closed" => {
            let res = trigsums::closed_sum(&spec, p)?;
            rows.push(Row {
                label: "value".into(),
                value: value_out(&res.value, res.exact.as_ref(), p),
                method: Some(format!("{:?}", res.method).to_lowercase()),
                delta: None,
                budget: None,
            });
        }
        "both" => {
            let direct = trigsums::direct_sum(&spec, p)?;
            let closed = trigsums::closed_sum(&spec, p)?;
            let delta = cross_delta(&direct.value, &closed.value);
            let budget = Tolerance::default_for(p).abs_eps;
            rows.push(Row {
                label: "direct".into(),
                value: value_out(&direct.value, None, p),
                method: Some("direct".into()),
                delta: None,
                budget: None,
            });
            rows.push(Row {
                label: "closed".into(),
                value: value_out(&closed.value, closed.exact.as_ref(), p),
                method: Some(format!("{:?}", closed.method).to_lowercase()),
                delta: Some(format_float(&delta, p)),
                budget: Some(format_float(&budget, p)),
            });
            if delta > budget {
                failure = Some(format!(
                    "direct and closed routes disagree beyond budget: |Δ| = {}",
                    format_float(&delta, p)
                ));
            }
        }
        other => {
            return Err(CliFailure::Usage(format!(
                "unknown method '{other}' (expected both, direct, or closed)"
            )))
        }
    }
    let out = JobOutput {
        job,
        rows,
        checks: Vec::new(),
    };
    match failure {
        Some(msg) => Err(CliFailure::CrossCheck(Box::new(out), msg)),
        None => Ok(out),
    }
}

fn run_series(
    ctx: &Ctx,
    kind: &str,
    m: u32,
    r: i64,
    shift: Rational,
    count: u32,
    method: &str,
) -> CliResult {
    let p = ctx.precision_bits;
    let sum_kind = SumKind::parse(kind)?;
    let job = echo(
        ctx,
        "series",
        [
            ("kind", sum_kind.as_str().to_string()),
            ("m", m.to_string()),
            ("r", r.to_string()),
            ("shift", shift.to_string()),
            ("count", count.to_string()),
            ("method", method.to_string()),
        ],
    );
    let mut rows = Vec::new();
    for n in 1..=count {
        let spec = SumSpec::new(sum_kind, m, r, shift.clone(), n)?;
        let res = match method {
            "direct" => trigsums::direct_sum(&spec, p)?,
            "recurrence" | "closed" => trigsums::closed_sum(&spec, p)?,
            "generating" => match sum_kind {
                SumKind::Cosecant => {
                    let coeffs =
                        trigsums::coeffs_from_generating_function(m, r, &shift, n as usize, p)?;
                    trigsums::SumResult {
                        spec: spec.clone(),
                        value: coeffs[n as usize - 1].clone(),
                        exact: None,
                        method: trigsums::SumMethod::GeneratingFunction,
                    }
                }
                _ => trigsums::closed_sum(&spec, p)?,
            },
            other => {
                return Err(CliFailure::Usage(format!(
                    "unknown method '{other}' (expected recurrence, generating, or direct)"
                )))
            }
        };
        rows.push(Row {
            label: format!("n={n}"),
            value: value_out(&res.value, res.exact.as_ref(), p),
            method: Some(format!("{:?}", res.method).to_lowercase()),
            delta: None,
            budget: None,
        });
    }
    Ok(JobOutput {
        job,
        rows,
        checks: Vec::new(),
    })
}

fn run_lvalue(ctx: &Ctx, m: u32, char_index: usize, n: u32, variant: &str) -> CliResult {
    let p = ctx.precision_bits;
    let chars = crate::characters::enumerate_characters(m)?;
    let chi = chars.get(char_index).ok_or_else(|| {
        CliFailure::Usage(format!(
            "character index {char_index} out of range: modulus {m} has {} characters",
            chars.len()
        ))
    })?;
    let job = echo(
        ctx,
        "lvalue",
        [
            ("m", m.to_string()),
            ("char", char_index.to_string()),
            ("n", n.to_string()),
            ("variant", variant.to_string()),
            ("parity", if chi.is_even() { "even" } else { "odd" }.to_string()),
            ("conductor", chi.conductor().to_string()),
        ],
    );
    let mut rows = Vec::new();
    let mut values: Vec<CNum> = Vec::new();
    let push = |label: &str, v: &lfn::LValue, rows: &mut Vec<Row>, values: &mut Vec<CNum>| {
        let exact = if v.identically_zero {
            Some(Rational::from(0))
        } else {
            None
        };
        rows.push(Row {
            label: label.to_string(),
            value: value_out(&v.value, exact.as_ref(), p),
            method: Some(format!("{:?}", v.route).to_lowercase()),
            delta: None,
            budget: Some(format_float(&v.error_budget, p)),
        });
        values.push(v.value.clone());
    };
    match variant {
        "standard" => {
            push("direct", &lfn::l_direct(chi, n, p)?, &mut rows, &mut values);
            if chi.is_primitive() {
                push("gauss", &lfn::l_via_gauss(chi, n, p)?, &mut rows, &mut values);
                push(
                    "polynomial",
                    &lfn::l_polynomial(chi, n, p)?,
                    &mut rows,
                    &mut values,
                );
            }
        }
        "tilde" => {
            push("direct", &lfn::l_tilde_direct(chi, n, p)?, &mut rows, &mut values);
            if chi.is_primitive() && chi.is_odd() {
                push(
                    "beta-derivative",
                    &lfn::l_tilde_derivative(chi, n, p)?,
                    &mut rows,
                    &mut values,
                );
            }
        }
        "hat" => {
            push("direct", &lfn::l_hat_direct(chi, n, p)?, &mut rows, &mut values);
            if chi.is_primitive() {
                push("closed", &lfn::l_hat_closed(chi, n, p)?, &mut rows, &mut values);
            }
        }
        other => {
            return Err(CliFailure::Usage(format!(
                "unknown variant '{other}' (expected standard, tilde, or hat)"
            )))
        }
    }
    // pairwise deltas against the first route
    let mut worst = Float::with_val(p, 0);
    for i in 1..values.len() {
        let d = cross_delta(&values[0], &values[i]);
        if d > worst {
            worst = d.clone();
        }
        rows[i].delta = Some(format_float(&d, p));
    }
    let budget = Float::with_val(p, Tolerance::pow2(-(p as i32) + 68, p).abs_eps);
    let out = JobOutput {
        job,
        rows,
        checks: Vec::new(),
    };
    if worst > budget {
        return Err(CliFailure::CrossCheck(
            Box::new(out),
            format!(
                "L-value routes disagree beyond budget: |Δ| = {}",
                format_float(&worst, p)
            ),
        ));
    }
    Ok(out)
}

fn run_heat(
    ctx: &Ctx,
    m: u32,
    beta: Rational,
    x: i64,
    y: i64,
    t_str: &str,
    method: &str,
) -> CliResult {
    let p = ctx.precision_bits;
    let t_q = parse_rational(t_str)?;
    let t = Float::with_val(p, &t_q);
    let params = CycleParams::new(m, beta.clone(), p)?;
    let job = echo(
        ctx,
        "heat",
        [
            ("m", m.to_string()),
            ("beta", beta.to_string()),
            ("x", x.to_string()),
            ("y", y.to_string()),
            ("t", t_q.to_string()),
            ("method", method.to_string()),
        ],
    );
    let mut rows = Vec::new();
    let mut failure = None;
    match method {
        "image" | "spectral" => {
            let kernel_method = if method == "image" {
                KernelMethod::Image
            } else {
                KernelMethod::Spectral
            };
            let v = heat_kernel_cycle(&params, x, y, &t, kernel_method)?;
            rows.push(Row {
                label: "value".into(),
                value: value_out(&v.value, None, p),
                method: Some(method.to_string()),
                delta: None,
                budget: Some(format_float(&v.tail_bound, p)),
            });
        }
        "both" => {
            let img = heat_kernel_cycle(&params, x, y, &t, KernelMethod::Image)?;
            let spec = heat_kernel_cycle(&params, x, y, &t, KernelMethod::Spectral)?;
            let delta = cross_delta(&img.value, &spec.value);
            let budget =
                Float::with_val(p, &img.tail_bound + &Tolerance::default_for(p).abs_eps);
            rows.push(Row {
                label: "spectral".into(),
                value: value_out(&spec.value, None, p),
                method: Some("spectral".into()),
                delta: None,
                budget: None,
            });
            rows.push(Row {
                label: "image".into(),
                value: value_out(&img.value, None, p),
                method: Some("image".into()),
                delta: Some(format_float(&delta, p)),
                budget: Some(format_float(&budget, p)),
            });
            if delta > budget {
                failure = Some(format!(
                    "image and spectral kernels disagree beyond the certified budget: |Δ| = {}",
                    format_float(&delta, p)
                ));
            }
        }
        other => {
            return Err(CliFailure::Usage(format!(
                "unknown method '{other}' (expected both, image, or spectral)"
            )))
        }
    }
    let out = JobOutput {
        job,
        rows,
        checks: Vec::new(),
    };
    match failure {
        Some(msg) => Err(CliFailure::CrossCheck(Box::new(out), msg)),
        None => Ok(out),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_resolvent(
    ctx: &Ctx,
    m: u32,
    beta: Rational,
    r: i64,
    s_str: &str,
    form: &str,
    normalization: &str,
    horizon_str: &str,
) -> CliResult {
    let p = ctx.precision_bits;
    let s = parse_complex(s_str, p)?;
    let norm = match normalization {
        "cancelled" => Normalization::Cancelled,
        "full" => Normalization::Full,
        other => {
            return Err(CliFailure::Usage(format!(
                "unknown normalization '{other}' (expected cancelled or full)"
            )))
        }
    };
    let job = echo(
        ctx,
        "resolvent",
        [
            ("m", m.to_string()),
            ("beta", beta.to_string()),
            ("r", r.to_string()),
            ("s", s_str.trim().to_string()),
            ("form", form.to_string()),
            ("normalization", normalization.to_string()),
        ],
    );
    let mut rows = Vec::new();
    let mut values: Vec<CNum> = Vec::new();
    let add = |label: &str, v: CNum, budget: Option<String>, rows: &mut Vec<Row>, values: &mut Vec<CNum>| {
        rows.push(Row {
            label: label.into(),
            value: value_out(&v, None, p),
            method: Some(label.into()),
            delta: None,
            budget,
        });
        values.push(v);
    };
    let want = |name: &str| form == "all" || form == name;
    if want("spectral") {
        add(
            "spectral",
            resolvent::resolvent_spectral(m, &beta, r, &s, norm, p)?,
            None,
            &mut rows,
            &mut values,
        );
    }
    if want("chebyshev") {
        add(
            "chebyshev",
            resolvent::resolvent_closed(m, &beta, r, &s, norm, p)?,
            None,
            &mut rows,
            &mut values,
        );
    }
    if want("hyperbolic") && s.re() > &0 {
        add(
            "hyperbolic",
            resolvent::resolvent_hyperbolic(m, &beta, r, &s, norm, p)?,
            None,
            &mut rows,
            &mut values,
        );
    }
    if want("laplace") && s.re() > &0 && norm == Normalization::Full {
        let horizon = Float::with_val(p, &parse_rational(horizon_str)?);
        let lap = resolvent::resolvent_from_laplace(m, &beta, r, 0, &s, &horizon, p)?;
        let budget = Float::with_val(p, &lap.quad_error + &lap.tail_bound);
        add(
            "laplace",
            lap.value,
            Some(format_float(&budget, p)),
            &mut rows,
            &mut values,
        );
    }
    if rows.is_empty() {
        return Err(CliFailure::Usage(format!(
            "form '{form}' produced no evaluable route at this s (hyperbolic and laplace need Re(s) > 0; laplace needs --normalization full)"
        )));
    }
    let mut worst = Float::with_val(p, 0);
    for i in 1..values.len() {
        let d = cross_delta(&values[0], &values[i]);
        if d > worst {
            worst = d.clone();
        }
        rows[i].delta = Some(format_float(&d, p));
    }
    let budget = Tolerance::default_for(p).abs_eps;
    let out = JobOutput {
        job,
        rows,
        checks: Vec::new(),
    };
    // the Laplace route has its own (larger) budget; only gate the exact routes
    if values.len() >= 2 && worst > Float::with_val(p, &budget * 1000u32) {
        return Err(CliFailure::CrossCheck(
            Box::new(out),
            format!(
                "resolvent routes disagree beyond budget: |Δ| = {}",
                format_float(&worst, p)
            ),
        ));
    }
    Ok(out)
}

fn run_poles(ctx: &Ctx, m: u32, beta: Rational) -> CliResult {
    let p = ctx.precision_bits;
    let poles = resolvent::resolvent_poles(m, &beta, p)?;
    let job = echo(
        ctx,
        "poles",
        [
            ("m", m.to_string()),
            ("beta", beta.to_string()),
            ("coincidences", poles.has_coincidence.to_string()),
        ],
    );
    let rows = poles
        .values
        .iter()
        .zip(&poles.multiplicities)
        .enumerate()
        .map(|(i, (v, mult))| Row {
            label: format!("pole {i} (multiplicity {mult})"),
            value: ValueOut {
                re: format_float(v, p),
                im: "0".into(),
                exact: None,
            },
            method: None,
            delta: None,
            budget: None,
        })
        .collect();
    Ok(JobOutput {
        job,
        rows,
        checks: Vec::new(),
    })
}

fn run_verify(ctx: &Ctx, suite: &str, max_m: u32) -> CliResult {
    let job = echo(
        ctx,
        "verify",
        [("suite", suite.to_string()), ("max_m", max_m.to_string())],
    );
    let checks = match suite {
        "all" | "acceptance" => verify::run_all(&SuiteConfig {
            max_m,
            precision_bits: ctx.precision_bits,
        })?,
        other => {
            return Err(CliFailure::Usage(format!(
                "unknown suite '{other}' (expected all or acceptance)"
            )))
        }
    };
    let failed: Vec<&CheckOutcome> = checks.iter().filter(|c| !c.passed).collect();
    let out = JobOutput {
        job,
        rows: Vec::new(),
        checks: checks.clone(),
    };
    if !failed.is_empty() {
        let names: Vec<&str> = failed.iter().map(|c| c.name.as_str()).collect();
        return Err(CliFailure::CrossCheck(
            Box::new(out),
            format!("{} verification check(s) failed: {}", names.len(), names.join(", ")),
        ));
    }
    Ok(out)
}

fn run_table(
    ctx: &Ctx,
    kind: &str,
    m: u32,
    r: i64,
    shift: Rational,
    count: u32,
) -> CliResult {
    let p = ctx.precision_bits;
    let sum_kind = SumKind::parse(kind)?;
    let job = echo(
        ctx,
        "table",
        [
            ("kind", sum_kind.as_str().to_string()),
            ("m", m.to_string()),
            ("r", r.to_string()),
            ("shift", shift.to_string()),
            ("count", count.to_string()),
        ],
    );
    let mut rows = Vec::new();
    let budget = Tolerance::default_for(p).abs_eps;
    let mut failure = None;
    for n in 1..=count {
        let spec = SumSpec::new(sum_kind, m, r, shift.clone(), n)?;
        let direct = trigsums::direct_sum(&spec, p)?;
        let closed = trigsums::closed_sum(&spec, p)?;
        let delta = cross_delta(&direct.value, &closed.value);
        if delta > budget && failure.is_none() {
            failure = Some(format!("row n={n} disagrees: |Δ| = {}", format_float(&delta, p)));
        }
        rows.push(Row {
            label: format!("n={n}"),
            value: value_out(&closed.value, closed.exact.as_ref(), p),
            method: Some("closed vs direct".into()),
            delta: Some(format_float(&delta, p)),
            budget: Some(format_float(&budget, p)),
        });
    }
    let out = JobOutput {
        job,
        rows,
        checks: Vec::new(),
    };
    match failure {
        Some(msg) => Err(CliFailure::CrossCheck(Box::new(out), msg)),
        None => Ok(out),
    }
}

fn render(out: &JobOutput, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(out).expect("serializable") + "\n",
        OutputFormat::Csv => {
            let mut s = String::new();
            if !out.checks.is_empty() {
                s.push_str("name,passed,max_delta,elapsed_ms,detail\n");
                for c in &out.checks {
                    s.push_str(&format!(
                        "{},{},{},{},\"{}\"\n",
                        c.name,
                        c.passed,
                        c.max_delta.clone().unwrap_or_default(),
                        c.elapsed_ms,
                        c.detail.replace('"', "'")
                    ));
                }
            } else {
                s.push_str("label,value,exact,method,delta,budget\n");
                for r in &out.rows {
                    let complex = if r.value.im == "0" {
                        r.value.re.clone()
                    } else if r.value.im.starts_with('-') {
                        format!("{}{}i", r.value.re, r.value.im)
                    } else {
                        format!("{}+{}i", r.value.re, r.value.im)
                    };
                    s.push_str(&format!(
                        "{},\"{}\",{},{},{},{}\n",
                        r.label,
                        complex,
                        r.value.exact.clone().unwrap_or_default(),
                        r.method.clone().unwrap_or_default(),
                        r.delta.clone().unwrap_or_default(),
                        r.budget.clone().unwrap_or_default(),
                    ));
                }
            }
            s
        }
        OutputFormat::Text => {
            let mut s = String::new();
            s.push_str(&format!(
                "command: {} (precision {} bits)\n",
                out.job.command, out.job.precision_bits
            ));
            for (k, v) in &out.job.parameters {
                s.push_str(&format!("  {k} = {v}\n"));
            }
            for r in &out.rows {
                let complex = if r.value.im == "0" {
                    r.value.re.clone()
                } else if r.value.im.starts_with('-') {
                    format!("{} {}i", r.value.re, r.value.im)
                } else {
                    format!("{} +{}i", r.value.re, r.value.im)
                };
                s.push_str(&format!("{}: {}", r.label, complex));
                if let Some(e) = &r.value.exact {
                    s.push_str(&format!("  (exact {e})"));
                }
                if let Some(d) = &r.delta {
                    s.push_str(&format!("  |Δ| = {d}"));
                }
                if let Some(b) = &r.budget {
                    s.push_str(&format!("  budget {b}"));
                }
                s.push('\n');
            }
            for c in &out.checks {
                s.push_str(&format!(
                    "{} [{:>6} ms] {}: {}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.elapsed_ms,
                    c.name,
                    c.detail
                ));
            }
            s
        }
    }
}

/// Parse arguments and execute; returns (exit code, rendered report).
pub fn execute<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own message; usage errors exit 2
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    let precision_bits = cli
        .precision_bits
        .or_else(|| {
            std::env::var("CYCLESPEC_PRECISION_BITS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_PRECISION_BITS);
    if precision_bits < crate::numeric::MIN_PRECISION_BITS {
        return (
            2,
            format!(
                "error: precision_bits must be at least {}\n",
                crate::numeric::MIN_PRECISION_BITS
            ),
        );
    }
    let ctx = Ctx {
        precision_bits,
        format: cli.format,
    };
    let result: CliResult = match &cli.command {
        Command::Sum {
            kind,
            m,
            r,
            beta,
            alpha,
            n,
            method,
        } => shift_from(beta, alpha)
            .and_then(|shift| run_sum(&ctx, kind, *m, *r, shift, *n, method)),
        Command::Series {
            kind,
            m,
            r,
            beta,
            alpha,
            count,
            method,
        } => shift_from(beta, alpha)
            .and_then(|shift| run_series(&ctx, kind, *m, *r, shift, *count, method)),
        Command::Lvalue {
            m,
            char_index,
            n,
            variant,
        } => run_lvalue(&ctx, *m, *char_index, *n, variant),
        Command::Heat {
            m,
            beta,
            x,
            y,
            t,
            method,
        } => parse_rational(beta)
            .map_err(CliFailure::from)
            .and_then(|b| run_heat(&ctx, *m, b, *x, *y, t, method)),
        Command::Resolvent {
            m,
            beta,
            r,
            s,
            form,
            normalization,
            horizon,
        } => parse_rational(beta)
            .map_err(CliFailure::from)
            .and_then(|b| run_resolvent(&ctx, *m, b, *r, s, form, normalization, horizon)),
        Command::Poles { m, beta } => parse_rational(beta)
            .map_err(CliFailure::from)
            .and_then(|b| run_poles(&ctx, *m, b)),
        Command::Verify { suite, max_m } => run_verify(&ctx, suite, *max_m),
        Command::Table {
            kind,
            m,
            r,
            beta,
            alpha,
            count,
        } => shift_from(beta, alpha)
            .and_then(|shift| run_table(&ctx, kind, *m, *r, shift, *count)),
    };
    let (code, report) = match result {
        Ok(out) => (0, render(&out, cli.format)),
        Err(CliFailure::Usage(msg)) => (2, format!("error: {msg}\n")),
        Err(CliFailure::CrossCheck(out, msg)) => {
            let mut report = render(&out, cli.format);
            report.push_str(&format!("error: {msg}\n"));
            (3, report)
        }
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &report) {
            return (2, format!("error: cannot write {}: {e}\n", path.display()));
        }
        return (code, String::new());
    }
    (code, report)
}

/// CLI entry point: executes and sets the process exit code.
pub fn run() {
    let (code, report) = execute(std::env::args_os());
    if code == 0 || code == 3 {
        print!("{report}");
    } else {
        let _ = write!(std::io::stderr(), "{report}");
    }
    std::process::exit(code);
}
