use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use logiw::classgroups::ClassGroup;
use logiw::growth::{
    fit_invariants, fit_with_known_mu, gold_lambda_at, quotient_order_exponent, ElementaryModule,
    FiniteQuotients, InvariantTriple, Stabilization,
};
use logiw::lambda::{DistinguishedPoly, LambdaError, LambdaRing};
use logiw::localfields::AbelianLocalField;
use logiw::padic::{parse_rational, LogContext, DEFAULT_PRECISION};
use logiw::poly;
use logiw::tables::{parse_tables, verify, Status, VerificationReport};

#[derive(Parser)]
#[command(name = "logiw", version, about = "Logarithmic class groups and Iwasawa invariants")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Logarithmic valuation ṽ_p(x) of a rational number.
    Logval {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        p: u64,
        /// NUM/DEN or an integer.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        prec: u32,
    },
    /// Logarithmic principal divisor of a rational number and its degree.
    Divisor {
        #[arg(long)]
        ell: u64,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        prec: u32,
    },
    /// Classical and logarithmic ramification and inertia indices.
    Localidx {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
        /// Generators of H ⊆ (Z/m)^×; empty for the whole field Q_p(μ_m).
        #[arg(long, value_delimiter = ',')]
        subgroup: Vec<u64>,
    },
    /// Weierstrass preparation of a power series given by its coefficients.
    Weierstrass {
        #[arg(long)]
        ell: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        coeffs: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        prec: u32,
        /// Truncation degree M (default: number of coefficients).
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Quotient orders |E/ω_n E| of an elementary Λ-module along the tower.
    Growth {
        #[arg(long)]
        ell: u64,
        /// Exponents m_i of the summands Λ/(ℓ^{m_i}).
        #[arg(long, value_delimiter = ',')]
        ell_parts: Vec<u32>,
        /// Distinguished polynomials separated by ';', e.g. "T^2+3;T-3".
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        polys: String,
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        /// ℓ-adic precision of the Smith-form cross-check.
        #[arg(long, default_value_t = 64)]
        prec: u32,
    },
    /// Fit e_n = μℓ^n + λn + ν to exponents e_0, e_1, … of ℓ-group orders.
    Fit {
        #[arg(long)]
        ell: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        orders: Vec<i64>,
        /// Known μ; λ and ν then come from the last two layers.
        #[arg(long)]
        mu: Option<i64>,
        /// With --mu: require the formula to hold from layer 0.
        #[arg(long, requires = "mu")]
        stable_from_zero: bool,
    },
    /// Gold's criterion on exponents e′_0, e′_1, … of |Cl′_n|.
    Gold {
        #[arg(long)]
        ell: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        orders: Vec<i64>,
    },
    /// Class number, ℓ-part and Cl′ of Q(√d), d < 0.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        ell: u64,
    },
    /// Check tabulated tower data and print a verification report.
    VerifyTables {
        #[arg(long)]
        input: PathBuf,
        /// Also write the JSON report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Errors in the user's input; mapped to exit code 2.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(InputError(msg.into()))
}

struct Output {
    json: Value,
    text: String,
    failed: bool,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, failed: false }
    }
}

fn triple_json(t: &InvariantTriple) -> Value {
    json!({"mu": t.mu.to_string(), "lambda": t.lambda.to_string(), "nu": t.nu.to_string(), "n0": t.n0.to_string()})
}

fn triple_text(t: &InvariantTriple) -> String {
    format!("mu = {}, lambda = {}, nu = {} (from n = {})", t.mu, t.lambda, t.nu, t.n0)
}

fn run(command: Command) -> anyhow::Result<Output> {
    match command {
        Command::Logval { ell, p, x, prec } => {
            let ctx = LogContext::new(ell, prec).map_err(|e| input_err(e.to_string()))?;
            let xr = parse_rational(&x).map_err(input_err)?;
            let v = ctx.log_valuation(p, &xr)?;
            Ok(Output::ok(
                json!({"ell": ell.to_string(), "p": p.to_string(), "x": xr.to_string(), "prec": prec.to_string(),
                       "value": v.value().to_string(), "centered": v.centered().to_string()}),
                format!("v~_{p}({xr}) = {} (mod {ell}^{prec})", v.centered()),
            ))
        }
        Command::Divisor { ell, x, prec } => {
            let ctx = LogContext::new(ell, prec).map_err(|e| input_err(e.to_string()))?;
            let xr = parse_rational(&x).map_err(input_err)?;
            let div = ctx.principal_divisor(&xr)?;
            let degree = ctx.divisor_degree(&div)?;
            let mut entries = serde_json::Map::new();
            let mut text = format!("div~({xr}) =");
            for (p, a) in div.iter() {
                entries.insert(p.to_string(), Value::String(a.centered().to_string()));
                write!(text, " {}·[{p}]", a.centered())?;
            }
            write!(text, "\ndegree = {} (mod {ell}^{prec})", degree.centered())?;
            Ok(Output::ok(
                json!({"ell": ell.to_string(), "prec": prec.to_string(), "x": xr.to_string(),
                       "divisor": entries, "degree": degree.value().to_string()}),
                text,
            ))
        }
        Command::Localidx { p, m, subgroup } => {
            let field = AbelianLocalField::new(p, m, &subgroup).map_err(|e| input_err(e.to_string()))?;
            let q = field.indices();
            Ok(Output::ok(
                json!({"e": q.e.to_string(), "f": q.f.to_string(), "e_log": q.e_log.to_string(), "f_log": q.f_log.to_string()}),
                format!("e = {}, f = {}, e~ = {}, f~ = {} (degree {})", q.e, q.f, q.e_log, q.f_log, q.degree()),
            ))
        }
        Command::Weierstrass { ell, coeffs, prec, bound } => {
            let parsed: Vec<num_bigint::BigInt> = coeffs
                .iter()
                .map(|c| c.trim().parse().map_err(|_| input_err(format!("bad coefficient '{c}'"))))
                .collect::<Result<_, _>>()?;
            let bound = bound.unwrap_or(parsed.len()).max(1);
            let ring = LambdaRing::new(ell, prec, bound).map_err(|e| input_err(e.to_string()))?;
            let f = ring.from_poly(&parsed).map_err(|e| input_err(e.to_string()))?;
            let w = f.weierstrass().map_err(|e| match e {
                LambdaError::ZeroSeries | LambdaError::PrecisionExhausted { .. } => input_err(e.to_string()),
                other => anyhow::Error::from(other),
            })?;
            let u = poly::format(&w.u.centered());
            Ok(Output::ok(
                json!({"mu": w.mu.to_string(), "lambda": w.lambda().to_string(),
                       "p": serde_json::to_value(&w.p)?, "u": serde_json::to_value(&w.u)?}),
                format!("mu = {}, lambda = {}\nP = {}\nU = {u} (mod {ell}^{}, T^{bound})", w.mu, w.lambda(), w.p, prec - w.mu),
            ))
        }
        Command::Growth { ell, ell_parts, polys, max_n, prec } => {
            let mut parts = Vec::new();
            for s in polys.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                let p = poly::parse(s).map_err(input_err)?;
                parts.push(DistinguishedPoly::new(ell, p).map_err(|e| input_err(e.to_string()))?);
            }
            let module = ElementaryModule::new(ell, ell_parts, parts).map_err(|e| input_err(e.to_string()))?;
            let mut layers = Vec::new();
            let mut exps = Vec::new();
            let mut text = format!("mu = {}, lambda = {}\n", module.mu(), module.lambda());
            let mut failed = false;
            for n in 0..=max_n {
                let res = quotient_order_exponent(&module, n);
                let snf = module.quotient_order_snf(n, prec);
                match (&res, &snf) {
                    (Ok(a), Ok(b)) => {
                        failed |= a != b;
                        exps.push(*a as i64);
                        layers.push(json!({"n": n.to_string(), "resultant": a.to_string(), "snf": b.to_string(), "agree": a == b}));
                        writeln!(text, "n = {n}: e_n = {a} (resultant), {b} (Smith form)")?;
                    }
                    _ => {
                        let msg = |r: &Result<u64, _>| match r {
                            Ok(v) => v.to_string(),
                            Err(e) => format!("{e}"),
                        };
                        layers.push(json!({"n": n.to_string(), "resultant": msg(&res), "snf": msg(&snf)}));
                        writeln!(text, "n = {n}: {} / {}", msg(&res), msg(&snf))?;
                    }
                }
            }
            // A sequence that has not stabilized yet is reported, not treated as an error.
            let fit = match (exps.len() == layers.len() && exps.len() >= 3).then(|| fit_invariants(&exps, ell)) {
                None => Value::Null,
                Some(Ok(t)) => {
                    writeln!(text, "fit: {}", triple_text(&t))?;
                    triple_json(&t)
                }
                Some(Err(e)) => {
                    writeln!(text, "fit: {e}")?;
                    json!({"error": e.to_string()})
                }
            };
            Ok(Output {
                json: json!({"mu": module.mu().to_string(), "lambda": module.lambda().to_string(),
                             "layers": layers, "fit": fit}),
                text: text.trim_end().to_string(),
                failed,
            })
        }
        Command::Fit { ell, orders, mu, stable_from_zero } => {
            let t = match mu {
                None => fit_invariants(&orders, ell)?,
                Some(mu) => {
                    let stab = if stable_from_zero { Stabilization::AssumeFromZero } else { Stabilization::Detect };
                    fit_with_known_mu(&orders, ell, mu, stab)?
                }
            };
            Ok(Output::ok(triple_json(&t), triple_text(&t)))
        }
        Command::Gold { ell, orders } => {
            let r = gold_lambda_at(&orders, ell);
            Ok(match r {
                Some((n, l)) => Output::ok(
                    json!({"lambda_prime": l.to_string(), "n": n.to_string()}),
                    format!("lambda' = {l} (criterion fires at n = {n})"),
                ),
                None => Output::ok(json!({"lambda_prime": null}), "criterion does not fire".to_string()),
            })
        }
        Command::Classgroup { d, ell } => {
            let g = ClassGroup::new(d).map_err(|e| input_err(e.to_string()))?;
            let part = g.ell_part(ell).map_err(|e| input_err(e.to_string()))?;
            let clp = g.cl_prime(ell)?;
            let strs = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
            Ok(Output::ok(
                json!({"h": g.order().to_string(), "ell_part": strs(part.factors()), "cl_prime": strs(clp.factors())}),
                format!("h = {}, {ell}-part {part}, Cl' {clp}", g.order()),
            ))
        }
        Command::VerifyTables { input, report } => {
            let rows = parse_tables(&input).map_err(|e| input_err(e.to_string()))?;
            let rep = verify(&rows);
            let json = serde_json::to_value(&rep)?;
            if let Some(path) = report {
                let body = serde_json::to_string_pretty(&rep)? + "\n";
                std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(Output { text: report_text(&rep), failed: rep.failures() > 0, json })
        }
    }
}

fn report_text(rep: &VerificationReport) -> String {
    let mut out = String::new();
    for row in &rep.rows {
        let _ = write!(out, "ell = {}, d = {}, {}", row.ell, row.d, row.tower);
        if let Some(f) = &row.fit {
            let _ = write!(out, "  [{}: mu = {}, lambda = {}, nu = {}, n0 = {}]", f.route, f.mu, f.lambda, f.nu, f.n0);
        }
        out.push('\n');
        for c in &row.checks {
            let _ = write!(out, "  {:<7} {:<13} {}", c.status.to_string(), c.tag, c.name);
            match (&c.expected, &c.computed) {
                (Some(_), Some(v)) if c.status == Status::Pass => {
                    let _ = write!(out, ": {v}");
                }
                (Some(e), Some(v)) => {
                    let _ = write!(out, ": expected {e}, got {v}");
                }
                (None, Some(v)) => {
                    let _ = write!(out, ": {v}");
                }
                _ => {}
            }
            if let Some(d) = &c.detail {
                let _ = write!(out, " ({d})");
            }
            out.push('\n');
        }
    }
    let s = &rep.summary;
    let _ = write!(out, "{} rows: {} pass, {} fail, {} skipped, {} info", s.rows, s.pass, s.fail, s.skipped, s.info);
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli.command) {
        Ok(out) => {
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable"),
                Format::Text => out.text,
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
