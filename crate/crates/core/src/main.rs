use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use dye_algebra::algebra::{classify, CuntzAlgebra, CuntzElement, DEFAULT_BUDGET};
use dye_algebra::factor::{
    assemble_factorization, diag_identity_check, triple_frame, verify_factorization, BlockVariant,
};
use dye_algebra::iso::{eta, eta_inv, CuntzMatrix};
use dye_algebra::ktheory::{conjugate_test, involution_type, k0_class};
use dye_algebra::matalg::{dye, StarMatrix};
use dye_algebra::numeric::{decompose2, rank1_obstruction3, values, NumScalar, DEFAULT_TOL};
use dye_algebra::serial::{
    element_from_value, element_to_value, matrix_from_value, matrix_to_value, numeric_from_value,
};
use dye_algebra::suite::{run_suite, SuiteConfig};
use dye_algebra::{Error, Result};

/// Exact computations with Dye projections over Cuntz algebras.
///
/// Elements are given as expressions such as "s1*s2' + s2*s1'" or as JSON.
/// Any VALUE argument may be an expression, inline JSON, or @path to a JSON file.
#[derive(Parser, Debug)]
#[command(name = "dye", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Number of generators of the Cuntz algebra.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Maximum number of terms a single normalization may produce.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Tolerance for numeric comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Indented output with elements and matrices written as expressions.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalize an element.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Report which operator identities an element or matrix satisfies.
    Check {
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Build the Dye projection P_{i,j}(omega) in dimension DIM.
    Dye {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        dim: usize,
        /// Symbolic parameter.
        #[arg(long, conflicts_with = "complex", allow_hyphen_values = true)]
        omega: Option<String>,
        /// Numeric parameter "re,im".
        #[arg(long, allow_hyphen_values = true)]
        complex: Option<String>,
    },
    /// Map an n×n matrix over the algebra to a single element.
    Eta {
        #[arg(long)]
        matrix: String,
    },
    /// Map an element to its n×n matrix.
    EtaInv {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Dye parameters of a 2×2 numeric projection.
    Decompose2 {
        #[arg(long)]
        matrix: String,
    },
    /// Decide whether a numeric projection is a Dye projection.
    Obstruct3 {
        #[arg(long)]
        matrix: String,
    },
    /// K₀ class of a degree-zero projection.
    K0 {
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
        #[arg(long)]
        matrix: Option<String>,
    },
    /// K₀ class of (1 − z)/2 for an involution z.
    Type {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Whether two involutions have the same type.
    Conjugate {
        #[arg(allow_hyphen_values = true)]
        first: String,
        #[arg(allow_hyphen_values = true)]
        second: String,
    },
    /// Check the 3×3 block identity for a unitary alpha.
    DiagIdentity {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// "1,2" or "1,3"; both when omitted.
        #[arg(long)]
        variant: Option<String>,
    },
    /// Build u = z1 v1 v2 v3 v4 z2 z3 from unitaries alpha, gamma and involutions z.
    Assemble41 {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        z1: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        z2: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        z3: String,
    },
    /// Check that a list of involutions multiplies to u.
    VerifyFactorization {
        /// JSON object {"u": VALUE, "factors": [VALUE, ...]}.
        #[arg(long, conflicts_with_all = ["u", "factor"])]
        input: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long = "factor", allow_hyphen_values = true)]
        factor: Vec<String>,
    },
    /// Run the verification suite.
    Suite {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Run only the named checks.
        #[arg(long)]
        only: Vec<String>,
        /// Include wall time per check.
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        pool_size: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

enum Outcome {
    Done(Value),
    Verified(Value, bool),
}

struct Ctx {
    alg: CuntzAlgebra,
    tol: f64,
    pretty: bool,
}

impl Ctx {
    fn value(&self, text: &str) -> Result<Value> {
        if let Some(path) = text.strip_prefix('@') {
            let raw =
                std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{path}: {e}")))?;
            return serde_json::from_str(&raw).map_err(|e| Error::Format(format!("{path}: {e}")));
        }
        let t = text.trim_start();
        if t.starts_with('{') || t.starts_with('[') {
            return serde_json::from_str(t).map_err(|e| Error::Format(e.to_string()));
        }
        Ok(Value::String(text.to_string()))
    }

    fn element(&self, text: &str) -> Result<CuntzElement> {
        element_from_value(&self.value(text)?, self.alg)
    }

    fn matrix(&self, text: &str) -> Result<CuntzMatrix> {
        matrix_from_value(&self.value(text)?, self.alg)
    }

    fn show(&self, x: &CuntzElement) -> Value {
        let x = &x.contract();
        if self.pretty {
            Value::String(x.to_string())
        } else {
            element_to_value(x)
        }
    }

    fn show_matrix(&self, m: &CuntzMatrix) -> Value {
        let entries = m.entries().iter().map(CuntzElement::contract).collect();
        let m = &StarMatrix::from_entries(m.dim(), entries).expect("same shape");
        if !self.pretty {
            return matrix_to_value(m);
        }
        let rows: Vec<Vec<String>> = (1..=m.dim())
            .map(|r| (1..=m.dim()).map(|c| m.entry(r, c).to_string()).collect())
            .collect();
        json!({ "dim": m.dim(), "rows": rows })
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("output is always serializable")
}

fn parse_complex(text: &str) -> Result<Complex64> {
    let bad = || Error::Config(format!("expected RE,IM, found {text:?}"));
    let (re, im) = text.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(
        re.trim().parse().map_err(|_| bad())?,
        im.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_variant(text: &str) -> Result<BlockVariant> {
    match text.replace(' ', "").as_str() {
        "1,2" => Ok(BlockVariant::OneTwo),
        "1,3" => Ok(BlockVariant::OneThree),
        other => Err(Error::Config(format!(
            "variant must be 1,2 or 1,3, found {other:?}"
        ))),
    }
}

fn one_of<'a>(
    expr: &'a Option<String>,
    matrix: &'a Option<String>,
) -> Result<(Option<&'a str>, Option<&'a str>)> {
    match (expr, matrix) {
        (Some(_), Some(_)) | (None, None) => {
            Err(Error::Config("give exactly one of EXPR or --matrix".into()))
        }
        (e, m) => Ok((e.as_deref(), m.as_deref())),
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let g = &cli.global;
    if !(g.tol.is_finite() && g.tol > 0.0) {
        return Err(Error::Config("tolerance must be positive".into()));
    }
    if g.budget == 0 {
        return Err(Error::Config("budget must be positive".into()));
    }
    let ctx = Ctx {
        alg: CuntzAlgebra::new(g.n)?.with_budget(g.budget),
        tol: g.tol,
        pretty: g.pretty,
    };
    let out = match cli.command {
        Command::Eval { expr } => {
            let x = ctx.element(&expr)?;
            json!({ "element": ctx.show(&x), "text": x.contract().to_string() })
        }
        Command::Check { expr, matrix } => {
            let c = match one_of(&expr, &matrix)? {
                (Some(e), _) => classify(&ctx.element(e)?)?,
                (_, Some(m)) => classify(&ctx.matrix(m)?)?,
                _ => unreachable!(),
            };
            json!({ "classification": c, "flags": c.flags() })
        }
        Command::Dye {
            i,
            j,
            dim,
            omega,
            complex,
        } => match (omega, complex) {
            (_, Some(c)) => {
                let p = dye(i, j, &NumScalar::new(parse_complex(&c)?, ctx.tol), dim)?;
                let entries: Vec<_> = values(&p).iter().map(|z| json!([z.re, z.im])).collect();
                json!({ "i": i, "j": j, "matrix": { "dim": dim, "entries": entries }, "classification": classify(&p)? })
            }
            (omega, None) => {
                let w = ctx.element(omega.as_deref().unwrap_or("1"))?;
                let p = dye(i, j, &w, dim)?;
                json!({ "i": i, "j": j, "matrix": ctx.show_matrix(&p), "classification": classify(&p)? })
            }
        },
        Command::Eta { matrix } => json!({ "element": ctx.show(&eta(&ctx.matrix(&matrix)?)?) }),
        Command::EtaInv { expr } => {
            json!({ "matrix": ctx.show_matrix(&eta_inv(&ctx.element(&expr)?)?) })
        }
        Command::Decompose2 { matrix } => to_value(&decompose2(&numeric_from_value(
            &ctx.value(&matrix)?,
            ctx.tol,
        )?)?),
        Command::Obstruct3 { matrix } => to_value(&rank1_obstruction3(&numeric_from_value(
            &ctx.value(&matrix)?,
            ctx.tol,
        )?)?),
        Command::K0 { expr, matrix } => match one_of(&expr, &matrix)? {
            (Some(e), _) => to_value(&k0_class(&ctx.element(e)?)?),
            (_, Some(m)) => to_value(&k0_class(&ctx.matrix(m)?)?),
            _ => unreachable!(),
        },
        Command::Type { expr } => to_value(&involution_type(&ctx.element(&expr)?)?),
        Command::Conjugate { first, second } => {
            let (a, b) = (ctx.element(&first)?, ctx.element(&second)?);
            json!({
                "conjugate": conjugate_test(&a, &b)?,
                "types": [involution_type(&a)?, involution_type(&b)?],
            })
        }
        Command::DiagIdentity { alpha, variant } => {
            let a = ctx.element(&alpha)?;
            let variants = match variant {
                Some(v) => vec![parse_variant(&v)?],
                None => vec![BlockVariant::OneTwo, BlockVariant::OneThree],
            };
            let mut checks = Vec::new();
            let mut all = true;
            for v in variants {
                let pass = diag_identity_check(&a, v)?;
                all &= pass;
                checks.push(json!({ "variant": v, "pass": pass }));
            }
            return Ok(Outcome::Verified(
                json!({ "pass": all, "checks": checks }),
                all,
            ));
        }
        Command::Assemble41 {
            alpha,
            gamma,
            z1,
            z2,
            z3,
        } => {
            let frame = triple_frame(ctx.alg)?;
            let z = [ctx.element(&z1)?, ctx.element(&z2)?, ctx.element(&z3)?];
            let asm = assemble_factorization(
                &ctx.element(&alpha)?,
                &ctx.element(&gamma)?,
                [&z[0], &z[1], &z[2]],
                &frame,
            )?;
            let report = verify_factorization(&asm.u, &asm.factors(), &frame);
            let pass = report.all_pass();
            let factors: Vec<_> = asm.factors().iter().map(|f| ctx.show(f)).collect();
            let out = json!({ "u": ctx.show(&asm.u), "factors": factors, "report": report });
            return Ok(Outcome::Verified(out, pass));
        }
        Command::VerifyFactorization { input, u, factor } => {
            let (u, factors) = match input {
                Some(text) => {
                    let v = ctx.value(&text)?;
                    let u = element_from_value(
                        v.get("u")
                            .ok_or_else(|| Error::Format("missing field \"u\"".into()))?,
                        ctx.alg,
                    )?;
                    let list = v
                        .get("factors")
                        .and_then(Value::as_array)
                        .ok_or_else(|| Error::Format("missing array \"factors\"".into()))?;
                    let fs = list
                        .iter()
                        .map(|f| element_from_value(f, ctx.alg))
                        .collect::<Result<Vec<_>>>()?;
                    (u, fs)
                }
                None => {
                    let u = u.ok_or_else(|| Error::Config("give --u or --input".into()))?;
                    let fs = factor
                        .iter()
                        .map(|f| ctx.element(f))
                        .collect::<Result<Vec<_>>>()?;
                    (ctx.element(&u)?, fs)
                }
            };
            let report = verify_factorization(&u, &factors, &triple_frame(ctx.alg)?);
            let pass = report.all_pass();
            return Ok(Outcome::Verified(to_value(&report), pass));
        }
        Command::Suite {
            seed,
            only,
            timings,
            pool_size,
            samples,
        } => {
            let mut cfg = SuiteConfig {
                seed,
                budget: g.budget,
                tol: g.tol,
                only,
                timings,
                ..SuiteConfig::default()
            };
            if let Some(p) = pool_size {
                cfg.pool_size = p;
            }
            if let Some(s) = samples {
                cfg.roundtrips = s;
                cfg.obstruction_cases = s;
                cfg.eta_pairs = s;
                cfg.orthogonal_pairs = s;
                cfg.ring_triples = s;
            }
            let report = run_suite(&cfg)?;
            let pass = report.exit_code() == 0;
            return Ok(Outcome::Verified(to_value(&report), pass));
        }
    };
    Ok(Outcome::Done(out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.global.pretty;
    let print = |v: &Value| {
        let text = if pretty {
            serde_json::to_string_pretty(v)
        } else {
            serde_json::to_string(v)
        };
        let _ = writeln!(
            std::io::stdout(),
            "{}",
            text.expect("output is always serializable")
        );
    };
    match run(cli) {
        Ok(Outcome::Done(v)) => {
            print(&v);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Verified(v, pass)) => {
            print(&v);
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
