//! `algid`: identify algebraic numbers from decimal approximations, find
//! integer relations, factor integer polynomials, and query digit budgets.
//!
//! Exit codes: 0 success, 2 unverified/indeterminate result, 3 invalid input.

use std::process::ExitCode;
use std::str::FromStr;

use algid::minpoly::{
    epsilon_bound_general, epsilon_bound_quadratic, recover_quadratic, required_digits,
    AlgebraicTriple,
};
use algid::numerics::{parse_decimal, Abs, Int, NumericContext, Real, DEFAULT_GUARD_DIGITS};
use algid::polyarith::IntPolynomial;
use algid::pslq::{find_relation, PslqParams};
use algid::factorizer::{factor_over_integers, CertTag, FactorJob};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

const EXIT_OK: u8 = 0;
const EXIT_INDETERMINATE: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser)]
#[command(
    name = "algid",
    about = "Exact algebraic numbers and polynomial factors from decimal approximations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct the minimal polynomial (and closed form for degree ≤ 2)
    Identify(IdentifyArgs),
    /// Reconstruct the minimal polynomial only
    Minpoly(IdentifyArgs),
    /// Find an integer relation for a vector of decimal values
    Relation(RelationArgs),
    /// Factor a univariate integer polynomial
    Factor(FactorArgs),
    /// Error threshold and digit budget for a (degree, height) pair
    Digits(DigitsArgs),
}

#[derive(Args)]
struct IdentifyArgs {
    /// Decimal approximation of the unknown algebraic number
    approx: String,
    /// Degree bound on the minimal polynomial
    #[arg(long, short = 'n')]
    degree: u32,
    /// Height bound on the minimal polynomial
    #[arg(long, short = 'N')]
    height: String,
    /// Working precision in decimal digits (raises the default, never lowers)
    #[arg(long)]
    precision: Option<u32>,
    /// Selection/quality parameter γ (τ defaults to γ)
    #[arg(long)]
    gamma: Option<f64>,
    /// Emit JSON on stdout
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RelationArgs {
    /// Vector components (decimal literals), at least two
    #[arg(required = true, num_args = 2..)]
    values: Vec<String>,
    /// Detection threshold on the residual |m·x|/|x|
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FactorArgs {
    /// Polynomial in x, e.g. "x^2-8*x-47"
    polynomial: String,
    /// Use this height bound instead of the per-degree Mignotte bound
    #[arg(long)]
    height_override: Option<String>,
    /// Highest factor degree scanned per root (default: half the degree)
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DigitsArgs {
    #[arg(long, short = 'n')]
    degree: u32,
    #[arg(long, short = 'N')]
    height: String,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Identify(args) => cmd_identify(&args, true),
        Command::Minpoly(args) => cmd_identify(&args, false),
        Command::Relation(args) => cmd_relation(&args),
        Command::Factor(args) => cmd_factor(&args),
        Command::Digits(args) => cmd_digits(&args),
    };
    ExitCode::from(code)
}

fn guard_digits() -> u32 {
    std::env::var("ALGID_GUARD_DIGITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_GUARD_DIGITS)
}

fn parse_height(text: &str) -> Result<Int, String> {
    let h = Int::from_str(text).map_err(|_| format!("invalid height bound: {text}"))?;
    if h < Int::ONE {
        return Err("height bound must be >= 1".into());
    }
    Ok(h)
}

fn fail(json_mode: bool, message: &str) -> u8 {
    if json_mode {
        let doc = json!({"status": "error", "result": Value::Null,
                         "diagnostics": {"message": message}});
        println!("{doc}");
    } else {
        eprintln!("error: {message}");
    }
    EXIT_INVALID
}

fn params_from(gamma: Option<f64>) -> Result<PslqParams, String> {
    match gamma {
        None => Ok(PslqParams::default()),
        Some(g) => {
            if !(g > f64::sqrt(4.0 / 3.0)) {
                return Err(format!("gamma must exceed sqrt(4/3) ≈ 1.1547, got {g}"));
            }
            let real = Real::from_str(&format!("{g}"))
                .map_err(|_| format!("cannot parse gamma {g}"))?;
            Ok(PslqParams::with_gamma(real))
        }
    }
}

/// Working precision: required digits for (n, N) plus what the literal
/// supplies, plus guard digits; --precision raises it further.
fn context_for(
    required: u32,
    supplied_digits: u32,
    precision: Option<u32>,
) -> Result<NumericContext, String> {
    let guard = guard_digits();
    let base = required.max(supplied_digits) + guard;
    let digits = precision.map_or(base, |p| p.max(base));
    NumericContext::with_guard(digits, guard).map_err(|e| e.to_string())
}

fn coeff_strings(p: &IntPolynomial) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn cmd_identify(args: &IdentifyArgs, with_closed_form: bool) -> u8 {
    let height = match parse_height(&args.height) {
        Ok(h) => h,
        Err(m) => return fail(args.json, &m),
    };
    if args.degree < 1 {
        return fail(args.json, "degree must be >= 1");
    }
    let required = required_digits(args.degree, &height);
    let probe_ctx = match NumericContext::with_guard(required + guard_digits(), guard_digits()) {
        Ok(c) => c,
        Err(e) => return fail(args.json, &e.to_string()),
    };
    let parsed = match parse_decimal(&args.approx, &probe_ctx) {
        Ok(p) => p,
        Err(e) => return fail(args.json, &e.to_string()),
    };
    let supplied = parsed.significant_digits;
    let ctx = match context_for(required, supplied, args.precision) {
        Ok(c) => c,
        Err(m) => return fail(args.json, &m),
    };
    let parsed = match parse_decimal(&args.approx, &ctx) {
        Ok(p) => p,
        Err(e) => return fail(args.json, &e.to_string()),
    };
    if supplied < required {
        eprintln!(
            "warning: {supplied} significant digits supplied, {required} required for \
             guaranteed reconstruction at degree {}, height {}; result may be unverified",
            args.degree, height
        );
    }
    let params = match params_from(args.gamma) {
        Ok(p) => p,
        Err(m) => return fail(args.json, &m),
    };

    let want_quadratic = with_closed_form && args.degree == 2;
    let (report, closed_form) = if want_quadratic {
        match recover_quadratic(&parsed.value, &height, &ctx) {
            Ok(rec) => (rec.report, Some(rec.closed_form)),
            Err(e) => return fail(args.json, &e.to_string()),
        }
    } else {
        let triple = match AlgebraicTriple::new(parsed.value.clone(), args.degree, height.clone())
        {
            Ok(t) => t,
            Err(e) => return fail(args.json, &e.to_string()),
        };
        match algid::minpoly::reconstruct_with_params(&triple, &ctx, params) {
            Ok(r) => (r, None),
            Err(e) => return fail(args.json, &e.to_string()),
        }
    };

    let status = if report.verified { "ok" } else { "unverified" };
    if args.json {
        let mut result = json!({
            "minimal_polynomial": report.polynomial.to_string(),
            "coefficients": coeff_strings(&report.polynomial),
            "verified": report.verified,
        });
        if let Some(cf) = &closed_form {
            result["closed_form"] = Value::String(cf.to_string());
        }
        let doc = json!({
            "status": status,
            "result": result,
            "diagnostics": {
                "epsilon_used": format!("{:e}", report.epsilon_used),
                "residual": format!("{:e}", report.residual),
                "required_digits": required,
                "supplied_digits": supplied,
                "precision": ctx.digits,
                "iterations": report.pslq.iterations,
                "relation_norm_bound": format!("{:e}", report.pslq.norm_bound_at_exit),
                "gamma": report.pslq.gamma.to_string(),
                "tau": report.pslq.tau.to_string(),
            }
        });
        println!("{doc}");
    } else {
        println!("minimal polynomial: {}", report.polynomial);
        if let Some(cf) = &closed_form {
            println!("closed form: {cf}");
        }
        println!("verified: {}", report.verified);
        println!("epsilon used: {:e}", report.epsilon_used);
        println!("residual |G(approx)|: {:e}", report.residual);
        println!("digits: required {required}, supplied {supplied}");
        println!("iterations: {}", report.pslq.iterations);
    }
    if report.verified {
        EXIT_OK
    } else {
        EXIT_INDETERMINATE
    }
}

fn cmd_relation(args: &RelationArgs) -> u8 {
    let max_sig = {
        let probe = NumericContext::with_guard(30, guard_digits()).unwrap();
        let mut max_sig = 1u32;
        for v in &args.values {
            match parse_decimal(v, &probe) {
                Ok(p) => max_sig = max_sig.max(p.significant_digits),
                Err(e) => return fail(args.json, &e.to_string()),
            }
        }
        max_sig
    };
    let ctx = match context_for(max_sig, max_sig, args.precision) {
        Ok(c) => c,
        Err(m) => return fail(args.json, &m),
    };
    let mut x = Vec::with_capacity(args.values.len());
    // Track the coarsest relative resolution among fractional literals:
    // integer literals are exact, fractional ones are approximations good
    // to their last printed digit.
    let mut coarsest = Real::ZERO;
    for v in &args.values {
        match parse_decimal(v, &ctx) {
            Ok(p) => {
                if p.decimal_places > 0 && p.value != Real::ZERO {
                    let rel = algid::numerics::resolution(&p.value) / p.value.clone().abs();
                    if rel > coarsest {
                        coarsest = rel;
                    }
                }
                x.push(p.value);
            }
            Err(e) => return fail(args.json, &e.to_string()),
        }
    }
    let epsilon = match &args.epsilon {
        // default: two digits of slack over what the literals can promise
        None if coarsest > Real::ZERO => coarsest * Real::from_str("100").unwrap(),
        None => ctx.detection_floor(),
        Some(text) => match Real::from_str(text) {
            Ok(e) if e > Real::ZERO => e,
            _ => return fail(args.json, &format!("invalid epsilon: {:?}", args.epsilon)),
        },
    };
    let params = match params_from(args.gamma) {
        Ok(p) => p,
        Err(m) => return fail(args.json, &m),
    };

    match find_relation(&x, &epsilon, &ctx, None, params) {
        Ok(r) => {
            let vector: Vec<String> = r.relation.iter().map(|c| c.to_string()).collect();
            if args.json {
                let doc = json!({
                    "status": "ok",
                    "result": {"relation": vector},
                    "diagnostics": {
                        "iterations": r.iterations,
                        "residual": format!("{:e}", r.residual),
                        "norm_bound": format!("{:e}", r.norm_bound_at_exit),
                        "gamma": r.gamma.to_string(),
                        "tau": r.tau.to_string(),
                        "precision": ctx.digits,
                    }
                });
                println!("{doc}");
            } else {
                println!("relation: ({})", vector.join(", "));
                println!("iterations: {}", r.iterations);
                println!("residual: {:e}", r.residual);
                println!("norm bound at exit: {:e}", r.norm_bound_at_exit);
            }
            EXIT_OK
        }
        Err(failure) => {
            let cert = failure.certificate();
            if args.json {
                let diag = match cert {
                    Some(c) => json!({
                        "norm_lower_bound": format!("{:e}", c.norm_lower_bound),
                        "iterations": c.iterations,
                        "message": failure.to_string(),
                    }),
                    None => json!({"message": failure.to_string()}),
                };
                let doc = json!({"status": "no-relation", "result": Value::Null,
                                 "diagnostics": diag});
                println!("{doc}");
            } else {
                eprintln!("no relation found: {failure}");
                if let Some(c) = cert {
                    println!(
                        "certificate: no relation of norm below {:e} exists ({} iterations)",
                        c.norm_lower_bound, c.iterations
                    );
                }
            }
            match cert {
                Some(_) => EXIT_INDETERMINATE,
                None => EXIT_INVALID,
            }
        }
    }
}

fn cmd_factor(args: &FactorArgs) -> u8 {
    let poly = match IntPolynomial::from_str(&args.polynomial) {
        Ok(p) => p,
        Err(e) => return fail(args.json, &e.to_string()),
    };
    if poly.degree().map_or(true, |d| d < 1) {
        return fail(args.json, "polynomial must have degree >= 1");
    }
    let height_override = match &args.height_override {
        None => None,
        Some(text) => match parse_height(text) {
            Ok(h) => Some(h),
            Err(m) => return fail(args.json, &m),
        },
    };
    let guard = guard_digits();
    let digits = args.precision.unwrap_or(20).max(12) + guard;
    let ctx = match NumericContext::with_guard(digits, guard) {
        Ok(c) => c,
        Err(e) => return fail(args.json, &e.to_string()),
    };
    let mut job = FactorJob::new(poly, ctx);
    job.max_scan_degree = args.max_degree;
    job.height_override = height_override;

    match factor_over_integers(&job) {
        Ok(list) => {
            let tag_name = |t: CertTag| match t {
                CertTag::Exact => "exact",
                CertTag::Heuristic => "heuristic",
            };
            if args.json {
                let factors: Vec<Value> = list
                    .factors
                    .iter()
                    .map(|(f, m, t)| {
                        json!({
                            "polynomial": f.to_string(),
                            "coefficients": coeff_strings(f),
                            "multiplicity": m,
                            "certificate": tag_name(*t),
                        })
                    })
                    .collect();
                let doc = json!({
                    "status": if list.partial { "partial" } else { "ok" },
                    "result": {
                        "content": list.content.to_string(),
                        "factors": factors,
                    },
                    "diagnostics": {"precision": ctx.digits}
                });
                println!("{doc}");
            } else {
                println!("content: {}", list.content);
                for (f, m, t) in &list.factors {
                    let mult = if *m > 1 { format!("^{m}") } else { String::new() };
                    println!("factor: ({f}){mult} [{}]", tag_name(*t));
                }
                let display: String = list
                    .factors
                    .iter()
                    .map(|(f, m, _)| {
                        if *m > 1 {
                            format!("({f})^{m}")
                        } else {
                            format!("({f})")
                        }
                    })
                    .collect();
                let content_prefix = if list.content == Int::ONE && !list.factors.is_empty() {
                    String::new()
                } else {
                    list.content.to_string()
                };
                println!("factorization: {content_prefix}{display}");
            }
            if list.partial {
                EXIT_INDETERMINATE
            } else {
                EXIT_OK
            }
        }
        Err(e) => fail(args.json, &e.to_string()),
    }
}

fn cmd_digits(args: &DigitsArgs) -> u8 {
    let height = match parse_height(&args.height) {
        Ok(h) => h,
        Err(m) => return fail(args.json, &m),
    };
    if args.degree < 1 {
        return fail(args.json, "degree must be >= 1");
    }
    let ctx = NumericContext::with_guard(30, guard_digits()).unwrap();
    let bound = epsilon_bound_general(args.degree, &height);
    let eps = bound.to_real_floor(&ctx);
    let required = required_digits(args.degree, &height);
    let exact = bound.as_rational().map(|q| q.to_string());

    if args.json {
        let mut diag = json!({
            "epsilon": format!("{:e}", eps),
            "epsilon_exact_rational": exact,
        });
        if args.degree == 2 {
            let quad = epsilon_bound_quadratic(&height).to_real_floor(&ctx);
            diag["epsilon_quadratic_formula"] = Value::String(format!("{quad:e}"));
        }
        let doc = json!({
            "status": "ok",
            "result": {"required_digits": required},
            "diagnostics": diag,
        });
        println!("{doc}");
    } else {
        println!("epsilon (general formula): {eps:e}");
        if let Some(q) = &exact {
            println!("epsilon exact rational: {q}");
        }
        if args.degree == 2 {
            let quad = epsilon_bound_quadratic(&height).to_real_floor(&ctx);
            println!("epsilon (quadratic formula): {quad:e}");
        }
        println!("required digits: {required}");
    }
    EXIT_OK
}
