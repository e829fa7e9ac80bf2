use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hyperftc::expr::{self, Expr};
use hyperftc::integrate::{self, definite_0_to_1, definite_0_to_inf};
use hyperftc::{oracle, transforms};
use num_complex::Complex64;

mod record;
mod suite;

use record::Record;

#[derive(Parser)]
#[command(name = "hyperftc", version, about = "Definite integrals and values through hypergeometric series")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression at a point.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Point of evaluation; any constant expression such as 1/3 or 2i.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        /// Report the jet coefficients up to this order.
        #[arg(long)]
        jet: Option<usize>,
    },
    /// Integrate an expression over [0, 1] or [0, inf).
    Integrate {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        from: String,
        #[arg(long)]
        to: String,
        /// Cross-check with adaptive quadrature of the expression itself.
        #[arg(long)]
        oracle: bool,
    },
    /// Reproduce the published results or the identity suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// List catalog entries or show one.
    Catalog {
        name: Option<String>,
        /// Point for entries that are functions of x.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<f64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Published reference values.
    #[value(name = "paper")]
    Reference,
    Identities,
    All,
}

/// A failure and the exit code it maps to.
enum Failure {
    Usage(String),
    Rejected(String),
}

impl From<hyperftc::Error> for Failure {
    fn from(e: hyperftc::Error) -> Self {
        match e {
            hyperftc::Error::UnknownName(_) => Failure::Usage(e.to_string()),
            _ => Failure::Rejected(e.to_string()),
        }
    }
}

impl From<expr::ParseError> for Failure {
    fn from(e: expr::ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

const TOL: f64 = 1e-13;

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn parse_point(text: &str) -> Result<Complex64, Failure> {
    let e = expr::parse(text)?;
    if e.contains_x() || e.contains_eps() {
        return Err(Failure::Usage(format!("--at must be a constant, got '{text}'")));
    }
    Ok(e.eval_scalar(Complex64::new(0.0, 0.0), TOL)?)
}

fn run_eval(text: &str, at: Option<&str>, jet: Option<usize>) -> Result<Record, Failure> {
    let e = expr::parse(text)?;
    let x = match at {
        Some(a) => parse_point(a)?,
        None if e.contains_x() => return Err(Failure::Usage("the expression depends on x; pass --at".into())),
        None => Complex64::new(0.0, 0.0),
    };
    if let Some(k) = jet {
        if k > hyperftc::jets::MAX_ORDER {
            return Err(Failure::Usage(format!("--jet {k} exceeds the maximum order {}", hyperftc::jets::MAX_ORDER)));
        }
    }
    let j = e.eval(x, jet.unwrap_or(0), TOL)?;
    let mut r = Record::new(text, j.value());
    if jet.is_some() {
        r.jet = j.coeffs().iter().map(|&c| c.into()).collect();
    }
    r.trace.push(format!("parsed {e}"));
    if at.is_some() {
        r.trace.push(format!("at x = {}", hyperftc::display::fmt_complex(x)));
    }
    Ok(r)
}

fn oracle_value(e: &Expr, to_inf: bool) -> Result<f64, String> {
    let f = |x: f64| e.eval_scalar(Complex64::new(x, 0.0), TOL).map(|v| v.re).unwrap_or(f64::NAN);
    let q = if to_inf {
        oracle::quad_halfline(f, 1e-12)
    } else {
        oracle::quad_finite(f, 0.0, 1.0, 1e-12)
    };
    q.map(|q| q.value).map_err(|e| e.to_string())
}

fn run_integrate(text: &str, from: &str, to: &str, with_oracle: bool) -> Result<Record, Failure> {
    if from.trim() != "0" {
        return Err(Failure::Usage(format!("--from must be 0, got '{from}'")));
    }
    let to_inf = match to.trim() {
        "1" => false,
        "inf" | "infinity" | "oo" => true,
        other => return Err(Failure::Usage(format!("--to must be 1 or inf, got '{other}'"))),
    };
    let e = expr::parse(text)?;
    let spec = expr::to_integrand(&e)?;
    let res = if to_inf { definite_0_to_inf(&spec, TOL)? } else { definite_0_to_1(&spec, TOL)? };
    let mut r = Record::new(text, res.scalar);
    r.closed_form = res.closed_form.clone();
    r.trace = res.method.clone();
    if with_oracle {
        match oracle_value(&e, to_inf) {
            Ok(v) => {
                let res = res.with_oracle(v);
                r.oracle = res.oracle_value;
                r.discrepancy = res.discrepancy;
            }
            Err(msg) => r.trace.push(format!("oracle unavailable: {msg}")),
        }
    }
    Ok(r)
}

fn run_catalog(name: &str, at: Option<f64>) -> Result<Vec<Record>, Failure> {
    if let Some(c) = integrate::integrand_catalog()?.into_iter().find(|c| c.name == name) {
        let form = integrate::antiderivative(&c.spec)?;
        let x = at.unwrap_or(0.5);
        let mut r = Record::new(name, c.spec.eval(x, TOL)?);
        r.trace.push(format!("integrand {}", c.spec));
        r.trace.push(format!("antiderivative {form}"));
        r.trace.push(format!("value at x = {x}"));
        return Ok(vec![r]);
    }
    let rep = transforms::catalog(name)?;
    let x = if rep.is_constant() {
        0.0
    } else {
        at.ok_or_else(|| Failure::Usage(format!("'{name}' is a function of x; pass --at")))?
    };
    let v = rep.eval(x, TOL)?;
    let mut r = Record::new(name, v);
    r.closed_form = Some(rep.formula.clone());
    if let Some(reference) = rep.reference(x) {
        r.oracle = Some(reference.re);
        r.discrepancy = Some((v - reference).norm());
    }
    for t in &rep.terms {
        r.trace.push(format!("term {} * x^{} * [eps^{}] {}", hyperftc::display::fmt_complex(t.coeff), t.x_power, t.extract, t.spec));
    }
    if !rep.is_constant() {
        r.trace.push(format!("at x = {x}"));
    }
    Ok(vec![r])
}

fn list_catalog(json: bool) {
    let functions: Vec<&str> = transforms::CATALOG_NAMES.to_vec();
    let integrands: Vec<(String, String)> = integrate::integrand_catalog()
        .map(|c| c.into_iter().map(|c| (c.name.to_string(), c.spec.to_string())).collect())
        .unwrap_or_default();
    if json {
        let v = serde_json::json!({
            "functions": functions,
            "integrands": integrands.iter().map(|(n, s)| serde_json::json!({"name": n, "integrand": s})).collect::<Vec<_>>(),
        });
        out(&format!("{}\n", serde_json::to_string_pretty(&v).expect("catalog serializes")));
    } else {
        let mut text = String::from("functions and constants:\n");
        for n in functions {
            text.push_str(&format!("  {n}\n"));
        }
        text.push_str("integrands:\n");
        for (n, s) in integrands {
            text.push_str(&format!("  {n:<16} {s}\n"));
        }
        out(&text);
    }
}

fn emit(records: &[Record], json: bool, single: bool) {
    if json {
        let s = if single && records.len() == 1 {
            serde_json::to_string_pretty(&records[0])
        } else {
            serde_json::to_string_pretty(records)
        };
        out(&format!("{}\n", s.expect("records serialize")));
    } else {
        let text: Vec<String> = records.iter().map(Record::text).collect();
        out(&text.join("\n"));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let result = match &cli.command {
        Command::Eval { expr, at, jet } => run_eval(expr, at.as_deref(), *jet).map(|r| (vec![r], true)),
        Command::Integrate { expr, from, to, oracle } => run_integrate(expr, from, to, *oracle).map(|r| (vec![r], true)),
        Command::Catalog { name: None, .. } => {
            list_catalog(json);
            return ExitCode::SUCCESS;
        }
        Command::Catalog { name: Some(name), at } => run_catalog(name, *at).map(|r| (r, true)),
        Command::Verify { suite } => {
            let rows = suite::run(*suite);
            let failed = rows.iter().filter(|r| !r.pass).count();
            if json {
                let recs: Vec<Record> = rows.iter().map(suite::Row::record).collect();
                emit(&recs, true, false);
            } else {
                out(&suite::table(&rows));
            }
            return if failed == 0 {
                ExitCode::SUCCESS
            } else {
                eprintln!("{failed} row(s) failed");
                ExitCode::from(1)
            };
        }
    };
    match result {
        Ok((records, single)) => {
            emit(&records, json, single);
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Rejected(msg)) => {
            eprintln!("rejected: {msg}");
            ExitCode::from(1)
        }
    }
}
