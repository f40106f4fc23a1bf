//! Command-line front end. Every subcommand prints either a short text
//! summary or a JSON document (`--format json`).
//!
//! Exit codes: 0 on success, 1 for usage or input errors, 2 when a
//! computation fails.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::capitulation::{self, CapitulationStatus, DEFAULT_BOUND, DEFAULT_BUDGET};
use crate::claims::{self, Bounds, ClaimConfig, ClaimId, Format};
use crate::classgroup::{self, minkowski_bound};
use crate::cyclotomic;
use crate::error::Error;
use crate::ideals::FractionalIdeal;
use crate::quadfield::{fundamental_unit, FieldElement, QuadraticField};
use crate::splitting;
use crate::util::{factor_text, fmt_rational, rational_json};

#[derive(Debug, Parser)]
#[command(name = "quadcap", version, about = "Exact arithmetic workbench for quadratic fields")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = OutFormat::Text)]
    pub format: OutFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Text,
}

/// A field given either positionally (`-5`, `-- -5`) or as `--d=-5`.
#[derive(Debug, Args)]
pub struct FieldArg {
    #[arg(value_name = "D", allow_negative_numbers = true, conflicts_with = "d_flag")]
    d: Option<i64>,
    #[arg(long = "d", id = "d_flag", value_name = "D", allow_negative_numbers = true)]
    d_flag: Option<i64>,
}

impl FieldArg {
    fn value(&self) -> Result<i64, CliError> {
        self.d
            .or(self.d_flag)
            .ok_or_else(|| CliError::Usage("missing field discriminant <D>".into()))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discriminant, integral basis, ramified primes and Minkowski bound.
    Field(FieldArg),
    /// The ideal generated by the given elements (`w` stands for ω, `s` for √d).
    Ideal {
        #[arg(long = "d", value_name = "D", allow_negative_numbers = true)]
        d_flag: Option<i64>,
        /// `<D> <gens…>`, or just `<gens…>` when `--d` is given. Generators
        /// starting with `-` go after `--`.
        #[arg(value_name = "ARGS", allow_negative_numbers = true, num_args = 1.., required = true)]
        values: Vec<String>,
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        norm: bool,
        #[arg(long)]
        principal: bool,
        #[arg(long)]
        order: bool,
    },
    /// Class number, structure and generators.
    Classgroup(FieldArg),
    /// Class group with the primes above S inverted.
    Sclass {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<i64>,
    },
    /// A product of irreducibles with two different factorisations.
    Witness(FieldArg),
    /// Make an ideal principal in a cyclic extension.
    Capitulate {
        #[command(flatten)]
        field: FieldArg,
        /// Comma-separated generators.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        ideal: Vec<String>,
        /// Per-coordinate search bound.
        #[arg(long, env = "WORKBENCH_BOUND", default_value_t = DEFAULT_BOUND)]
        bound: u64,
        /// Total number of candidates tried.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// The quadratic Gauss sum of an odd prime.
    Gauss { p: i64 },
    /// √d as an element of a cyclotomic ring.
    SqrtEmbed(FieldArg),
    /// Check every claim on a list of fields.
    Claims {
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            conflicts_with = "config"
        )]
        fields: Option<Vec<i64>>,
        /// JSON file `{fields: [...], bounds: {...}}`.
        #[arg(long)]
        config: Option<std::path::PathBuf>,
        /// Only these claims (comma-separated ids such as `L1.2,T2.3`).
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        #[arg(long, env = "WORKBENCH_BOUND")]
        bound: Option<u64>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(Error),
    Compute(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::GeneratorNotFound(_) => CliError::Compute(e),
            other => CliError::Input(other),
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliOutput {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => CliOutput {
                    code: 1,
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };
    match execute(&cli) {
        Ok((value, text)) => {
            let stdout = match cli.format {
                OutFormat::Json => format!("{}\n", serde_json::to_string_pretty(&value).expect("json")),
                OutFormat::Text => text,
            };
            CliOutput {
                code: 0,
                stdout,
                stderr: String::new(),
            }
        }
        Err(CliError::Usage(msg)) => CliOutput {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(CliError::Input(e)) => CliOutput {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
        Err(CliError::Compute(e)) => CliOutput {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn field_of(d: i64) -> Result<QuadraticField, CliError> {
    Ok(QuadraticField::new(d)?)
}

fn parse_ideal(field: QuadraticField, gens: &[String]) -> Result<FractionalIdeal, CliError> {
    let elems = gens
        .iter()
        .map(|g| FieldElement::parse(field, g))
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(FractionalIdeal::from_generators(field, &elems)?)
}

type Rendered = (Value, String);

fn execute(cli: &Cli) -> Result<Rendered, CliError> {
    match &cli.command {
        Command::Field(f) => cmd_field(f.value()?),
        Command::Ideal {
            d_flag,
            values,
            dual,
            norm,
            principal,
            order,
        } => {
            let (d, gens) = match d_flag {
                Some(d) => (*d, &values[..]),
                None => {
                    let d = values[0]
                        .parse::<i64>()
                        .map_err(|_| CliError::Usage(format!("`{}` is not an integer", values[0])))?;
                    (d, &values[1..])
                }
            };
            if gens.is_empty() {
                return Err(CliError::Usage("at least one generator is required".into()));
            }
            cmd_ideal(d, gens, *dual, *norm, *principal, *order)
        }
        Command::Classgroup(f) => cmd_classgroup(f.value()?),
        Command::Sclass { field, primes } => cmd_sclass(field.value()?, primes),
        Command::Witness(f) => cmd_witness(f.value()?),
        Command::Capitulate {
            field,
            ideal,
            bound,
            budget,
        } => cmd_capitulate(field.value()?, ideal, *bound, *budget),
        Command::Gauss { p } => cmd_gauss(*p),
        Command::SqrtEmbed(f) => cmd_sqrt_embed(f.value()?),
        Command::Claims {
            fields,
            config,
            only,
            bound,
        } => {
            let mut cfg = match (fields, config) {
                (Some(fs), None) => ClaimConfig::new(fs.clone()),
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                    serde_json::from_str::<ClaimConfig>(&text)
                        .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?
                }
                _ => ClaimConfig::default_fields(),
            };
            if let Some(b) = bound {
                cfg.bounds = Bounds {
                    capitulation: *b,
                    ..cfg.bounds
                };
            }
            if let Some(ids) = only {
                let parsed = ids
                    .iter()
                    .map(|s| ClaimId::parse(s).ok_or_else(|| CliError::Usage(format!("unknown claim `{s}`"))))
                    .collect::<Result<Vec<_>, _>>()?;
                cfg.claims = Some(parsed);
            }
            let report = claims::run_claims(&cfg)?;
            let value = serde_json::to_value(&report).expect("report serializes");
            Ok((value, claims::render_report(&report, Format::Text)))
        }
    }
}

fn cmd_field(d: i64) -> Result<Rendered, CliError> {
    let field = field_of(d)?;
    let ramified = splitting::ramified_set(field);
    let bound = minkowski_bound(field);
    let unit = if field.is_real() {
        Some(fundamental_unit(field)?.to_string())
    } else {
        None
    };
    let value = json!({
        "d": d,
        "D": field.discriminant(),
        "omega": field.omega_description(),
        "ramified": ramified,
        "minkowski": rational_json(&bound),
        "fundamental_unit": unit,
    });
    let mut text = format!(
        "d = {d}\nD = {}\nω = {}\nramified = {:?}\nMinkowski bound ≤ {} (≈ {:.4})\n",
        field.discriminant(),
        field.omega_description(),
        ramified,
        fmt_rational(&bound),
        approx(&bound),
    );
    if let Some(u) = unit {
        text.push_str(&format!("fundamental unit = {u}\n"));
    }
    Ok((value, text))
}

/// Decimal approximation for display only.
fn approx(r: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn cmd_ideal(
    d: i64,
    gens: &[String],
    dual: bool,
    norm: bool,
    principal: bool,
    order: bool,
) -> Result<Rendered, CliError> {
    let field = field_of(d)?;
    let ideal = parse_ideal(field, gens)?;
    let mut value = json!({ "ideal": ideal.to_json(), "text": ideal.to_text(), "generators": ideal.generators_text() });
    let mut text = format!("I = {} = {}\n", ideal.generators_text(), ideal.to_text());
    if dual {
        let m = ideal.dual();
        value["dual"] = m.to_json();
        text.push_str(&format!("dual = {} = {}\n", m.generators_text(), m.to_text()));
    }
    if norm {
        let n = ideal.norm();
        value["norm"] = rational_json(&n);
        text.push_str(&format!("norm = {}\n", fmt_rational(&n)));
    }
    if principal {
        let g = ideal.is_principal();
        value["principal"] = json!(g.as_ref().map(|g| g.to_string()));
        match g {
            Some(g) => text.push_str(&format!("principal, generated by {g}\n")),
            None => text.push_str("not principal\n"),
        }
    }
    if order {
        let n = ideal.class_order()?;
        value["order"] = json!(n);
        text.push_str(&format!("class order = {n}\n"));
    }
    Ok((value, text))
}

fn cmd_classgroup(d: i64) -> Result<Rendered, CliError> {
    let field = field_of(d)?;
    let cl = classgroup::class_group(field);
    let mut value = cl.to_json();
    value["structure"] = json!(cl.structure());
    value["generators"] = json!(cl.generators.iter().map(FractionalIdeal::to_json).collect::<Vec<_>>());
    let gens: Vec<String> = cl.generators.iter().map(FractionalIdeal::generators_text).collect();
    let text = match gens.len() {
        0 => format!("h = {}, {}\n", cl.h, cl.structure()),
        1 => format!("h = {}, {}, generator {}\n", cl.h, cl.structure(), gens[0]),
        _ => format!("h = {}, {}, generators {}\n", cl.h, cl.structure(), gens.join(", ")),
    };
    Ok((value, text))
}

fn cmd_sclass(d: i64, primes: &[i64]) -> Result<Rendered, CliError> {
    let field = field_of(d)?;
    for &p in primes {
        if !crate::util::is_prime(p) {
            return Err(Error::NotPrime(p).into());
        }
    }
    let cl = classgroup::s_class_group(field, primes);
    let value = json!({
        "d": d,
        "S": primes,
        "h": cl.h,
        "divisors": cl.divisors,
        "structure": cl.structure(),
    });
    let text = format!("S = {primes:?}: h_S = {}, {}\n", cl.h, cl.structure());
    Ok((value, text))
}

fn cmd_witness(d: i64) -> Result<Rendered, CliError> {
    let field = field_of(d)?;
    Ok(match splitting::nonufd_witness(field) {
        Some(w) => {
            let [p1, p2, q1, q2] = [&w.p1, &w.p2, &w.q1, &w.q2].map(|e| factor_text(&e.to_string()));
            let text = format!("{p1}·{p2} = {q1}·{q2}\n");
            (w.to_json(), text)
        }
        None => (
            Value::Null,
            format!(
                "no witness with rational primes ≤ {} (h = {})\n",
                splitting::WITNESS_PRIME_BOUND,
                classgroup::class_number(field)
            ),
        ),
    })
}

fn cmd_capitulate(d: i64, gens: &[String], bound: u64, budget: u64) -> Result<Rendered, CliError> {
    let field = field_of(d)?;
    let ideal = parse_ideal(field, gens)?;
    let cert = capitulation::capitulate(&ideal, bound, budget)?;
    let mut text = format!("ideal {}\nn = {}\n", ideal.generators_text(), cert.degree());
    if let Some(a) = cert.alpha() {
        if cert.order.is_some() {
            text.push_str(&format!("L = K[x]/(x^{} - ({a}))\n", cert.degree()));
        }
    }
    match cert.status {
        CapitulationStatus::Found => text.push_str(&format!(
            "FOUND γ = {}\nverified = {}\n",
            cert.gamma_text().unwrap_or_default(),
            cert.verify()
        )),
        CapitulationStatus::Undecided => text.push_str(&format!("UNDECIDED (bound {bound}, budget {budget})\n")),
    }
    Ok((cert.to_json(), text))
}

fn cmd_gauss(p: i64) -> Result<Rendered, CliError> {
    let g = cyclotomic::gauss_sum(p)?;
    let square = (&g * &g).as_rational();
    let verified = cyclotomic::verify_gauss_square(p)?;
    let square_text = square.as_ref().map(fmt_rational);
    let value = json!({
        "p": p,
        "n": g.conductor(),
        "coeffs": g.coeffs().iter().map(crate::util::int_json).collect::<Vec<_>>(),
        "den": crate::util::int_json(g.den()),
        "square": square_text,
        "verified": verified,
    });
    let text = format!(
        "g({p}) = {g}\ng² = {}\nverified = {verified}\n",
        square_text.unwrap_or_else(|| "not rational".into())
    );
    Ok((value, text))
}

fn cmd_sqrt_embed(d: i64) -> Result<Rendered, CliError> {
    let (n, w) = cyclotomic::embed_sqrt(d)?;
    let value = cyclotomic::sqrt_witness_json(d, n, &w);
    let text = format!("√{d} = {w}\nconductor = {n}\nverified = {}\n", value["verified"]);
    Ok((value, text))
}

/// Binary entry point: run on the process arguments and exit.
pub fn main_entry() -> ! {
    let out = run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> CliOutput {
        run(std::iter::once("quadcap").chain(args.iter().copied()))
    }

    #[test]
    fn classgroup_text() {
        let out = call(&["classgroup", "-5"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert_eq!(out.stdout, "h = 2, C2, generator (2, 1+√-5)\n");
    }

    #[test]
    fn negative_field_forms() {
        let a = call(&["classgroup", "--d=-5"]);
        let b = call(&["classgroup", "--", "-5"]);
        assert_eq!(a, call(&["classgroup", "-5"]));
        assert_eq!(b.stdout, a.stdout);
    }

    #[test]
    fn exit_codes() {
        let out = call(&["field", "12"]);
        assert_eq!(out.code, 1);
        assert!(out.stderr.contains("not squarefree"));
        assert_eq!(call(&["frobnicate"]).code, 1);
        assert_eq!(call(&["gauss", "9"]).code, 1);
        assert_eq!(call(&["--help"]).code, 0);
    }

    #[test]
    fn gauss_json() {
        let out = call(&["gauss", "5", "--format", "json"]);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["coeffs"], json!([-1, 0, -2, -2]));
        assert_eq!(v["square"], json!("5"));
        assert_eq!(v["verified"], json!(true));
    }

    #[test]
    fn ideal_operations() {
        let out = call(&["ideal", "-5", "2", "1+w", "--dual", "--norm", "--principal", "--order"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.contains("norm = 2"));
        assert!(out.stdout.contains("not principal"));
        assert!(out.stdout.contains("class order = 2"));
        let flagged = call(&["ideal", "--d=-5", "2", "1+w", "--norm"]);
        assert!(flagged.stdout.contains("norm = 2"));
    }

    #[test]
    fn capitulate_finds_x() {
        let out = call(&["capitulate", "-5", "--ideal", "2,1+w", "--format", "json"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["status"], json!("FOUND"));
        assert_eq!(v["verified"], json!(true));
        assert_eq!(v["n"], json!(2));
    }
}
