use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use cda_core::albert::{self, anisotropy_sample_test, tensor_product};
use cda_core::anagram;
use cda_core::cyclic::{self, AlgebraElement};
use cda_core::harness::{self, AlgebraSpec, SuiteConfig, CLAIMS};
use cda_core::kummer::{is_norm, KummerContext, KummerElement};
use cda_core::series::{Domain, Exponent};
use cda_core::Error;

#[derive(Parser)]
#[command(name = "cda", version, about = "Cyclic algebras over iterated power-series fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Anagram classes of F_q^q with level counts and norm coefficients.
    AnagramTable {
        #[arg(long)]
        q: u64,
        /// Only classes with coordinate sum divisible by q.
        #[arg(long)]
        c0: bool,
    },
    /// Norm of b0 + b1*u + ... from K = F(u), u^q = t.
    Norm {
        #[command(flatten)]
        kummer: KummerArgs,
        /// Coordinates b0; b1; ...
        #[arg(long, allow_hyphen_values = true)]
        coords: String,
    },
    /// Decides whether x is a norm from K, with a certificate.
    IsNorm {
        #[command(flatten)]
        kummer: KummerArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Cyclic algebra (K/F, sigma, alpha) with K = F(u), u^q = t.
    Algebra {
        #[command(subcommand)]
        command: AlgebraCommand,
    },
    /// Samples the Albert form of (X, -1) ⊗ (-X, Y) over Q((X))((Y)).
    Albert {
        #[arg(long, default_value_t = 5000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample over Q((X))((Y))(g), g^2 = 2 + 2X^2.
        #[arg(long)]
        extension: bool,
    },
    /// Biquaternion algebra (X, -1) ⊗ (-X, Y).
    Biquat {
        #[command(subcommand)]
        command: BiquatCommand,
    },
    /// Runs the verification suite and prints one JSON report per line.
    Verify {
        /// TOML file; flags take precedence over its values.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        precision: Option<i64>,
        #[arg(long)]
        oracle_precision: Option<i64>,
        #[arg(long)]
        trials: Option<usize>,
        /// Comma-separated claim ids.
        #[arg(long, value_delimiter = ',')]
        claims: Option<Vec<String>>,
        /// Add elapsed_ms to each report.
        #[arg(long)]
        timings: bool,
        /// Print the claim ids and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand)]
enum AlgebraCommand {
    /// Describes (K/F, σ, α).
    Build(AlgebraArgs),
    /// Division or not, with the norm certificate.
    Certify(AlgebraArgs),
    /// Product of two elements given by coordinates.
    Mul {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// q² coordinates over the basis u^i X^j, separated by ';'.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Inverse by a linear solve; exit 1 with a kernel vector when singular.
    Invert {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, env = "CDA_PRECISION", default_value_t = 20)]
        precision: i64,
    },
    /// Writes the structure constants as JSON and re-checks the file.
    Constants {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum BiquatCommand {
    /// Structure constants of (X, -1) ⊗ (-X, Y) over Q((X))((Y)).
    Constants {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct KummerArgs {
    #[arg(long, default_value = "F7((t))")]
    field: String,
    #[arg(long, default_value_t = 3)]
    q: u64,
    #[arg(long, default_value = "t", allow_hyphen_values = true)]
    t: String,
}

#[derive(Args)]
struct AlgebraArgs {
    #[arg(long, default_value = "F7((t))")]
    field: String,
    #[arg(long, default_value_t = 3)]
    q: u64,
    #[arg(long, default_value = "t", allow_hyphen_values = true)]
    t: String,
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
}

impl KummerArgs {
    fn context(&self) -> Result<std::sync::Arc<KummerContext>, Error> {
        let field: Domain = self.field.parse()?;
        let t = field.parse(&self.t)?;
        KummerContext::new(field, self.q, t)
    }
}

impl AlgebraArgs {
    fn spec(&self) -> AlgebraSpec {
        AlgebraSpec { field: self.field.clone(), q: self.q, t: self.t.clone(), alpha: self.alpha.clone() }
    }
}

fn split_coords(text: &str) -> Vec<&str> {
    text.trim().trim_start_matches('[').trim_end_matches(']').split(';').map(str::trim).collect()
}

fn parse_coords(field: &Domain, text: &str) -> Result<Vec<cda_core::series::Elem>, Error> {
    split_coords(text).into_iter().map(|c| field.parse(c)).collect()
}

/// What a subcommand produced: JSON lines and whether every check passed.
struct Outcome {
    lines: Vec<String>,
    passed: bool,
}

impl Outcome {
    fn ok(value: serde_json::Value) -> Self {
        Self { lines: vec![value.to_string()], passed: true }
    }
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::AnagramTable { q, c0 } => {
            let classes = if c0 { anagram::c0_classes(q)? } else { anagram::all_classes(q)? };
            let lines = classes.iter().map(|c| serde_json::to_string(c).expect("class serializes")).collect();
            Ok(Outcome { lines, passed: true })
        }
        Command::Norm { kummer, coords } => {
            let ctx = kummer.context()?;
            let a = KummerElement::new(&ctx, parse_coords(ctx.field(), &coords)?)?;
            let formula = a.norm_formula()?;
            let oracle = a.norm_oracle()?;
            let valuation = a.norm_valuation().ok().map(|v| v.to_string());
            Ok(Outcome {
                passed: formula.eq_to_precision(&oracle),
                lines: vec![json!({
                    "element": a.to_string(),
                    "formula": formula.to_string(),
                    "oracle": oracle.to_string(),
                    "valuation": valuation,
                })
                .to_string()],
            })
        }
        Command::IsNorm { kummer, x } => {
            let ctx = kummer.context()?;
            let decision = is_norm(&ctx, &ctx.field().parse(&x)?)?;
            Ok(Outcome::ok(serde_json::to_value(&decision)?))
        }
        Command::Algebra { command } => run_algebra(command),
        Command::Albert { trials, seed, extension } => {
            let start = Instant::now();
            let field = Domain::rational_laurent_tower();
            let (d1, d2) = albert::standard_pair(&field)?;
            let phi = albert::albert_form(&d1, &d2)?;
            let domain = if extension { albert::nonsquare_extension(&field)? } else { field };
            let report = anisotropy_sample_test(&phi, &domain, trials, seed)?;
            Ok(Outcome {
                passed: report.failures == 0,
                lines: vec![json!({
                    "trials": report.trials,
                    "failures": report.failures,
                    "counterexamples": report.counterexamples,
                    "elapsed_ms": start.elapsed().as_millis() as u64,
                    "extension": report.extension,
                    "seed": seed,
                })
                .to_string()],
            })
        }
        Command::Biquat { command: BiquatCommand::Constants { out } } => {
            let field = Domain::rational_laurent_tower();
            let (d1, d2) = albert::standard_pair(&field)?;
            let algebra = tensor_product(&d1, &d2)?;
            algebra.constants().save(&out)?;
            let associative = algebra.constants().associativity_failures()?.is_empty();
            Ok(Outcome {
                passed: associative,
                lines: vec![json!({"n": 16, "out": out.display().to_string(), "associative": associative}).to_string()],
            })
        }
        Command::Verify { config, seed, precision, oracle_precision, trials, claims, timings, list } => {
            if list {
                return Ok(Outcome { lines: CLAIMS.iter().map(|c| c.to_string()).collect(), passed: true });
            }
            let mut cfg = SuiteConfig::load(config.as_deref())?;
            if let Some(v) = seed {
                cfg.seed = v;
            }
            if let Some(v) = precision {
                cfg.precision = v;
            }
            if let Some(v) = oracle_precision {
                cfg.oracle_precision = v;
            }
            if trials.is_some() {
                cfg.trials = trials;
            }
            if claims.is_some() {
                cfg.claims = claims;
            }
            cfg.timings |= timings;
            let reports = harness::run_suite(&cfg)?;
            for r in reports.iter().filter(|r| !r.passed()) {
                eprintln!("FAIL {}: {} of {} trials failed", r.claim, r.failures, r.trials);
            }
            Ok(Outcome {
                passed: reports.iter().all(|r| r.passed()),
                lines: reports.iter().map(|r| r.to_json_line()).collect(),
            })
        }
    }
}

fn run_algebra(command: AlgebraCommand) -> Result<Outcome, Error> {
    match command {
        AlgebraCommand::Build(args) => {
            let alg = args.spec().build()?;
            Ok(Outcome::ok(json!({
                "field": alg.field().to_string(),
                "q": alg.q(),
                "t": alg.kummer().t().to_string(),
                "xi": alg.kummer().xi().to_string(),
                "alpha": alg.alpha().to_string(),
                "dimension": alg.n(),
                "basis": alg.basis_labels(),
            })))
        }
        AlgebraCommand::Certify(args) => {
            let alg = args.spec().build()?;
            Ok(Outcome::ok(serde_json::to_value(cyclic::is_division(&alg)?)?))
        }
        AlgebraCommand::Mul { algebra, a, b } => {
            let alg = algebra.spec().build()?;
            let a = AlgebraElement::new(&alg, parse_coords(alg.field(), &a)?)?;
            let b = AlgebraElement::new(&alg, parse_coords(alg.field(), &b)?)?;
            let p = a.relation_mul(&b)?;
            let coords: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
            Ok(Outcome::ok(json!({"product": p.to_string(), "coords": coords})))
        }
        AlgebraCommand::Invert { algebra, a, precision } => {
            let alg = algebra.spec().build()?;
            let d = AlgebraElement::new(&alg, parse_coords(alg.field(), &a)?)?;
            match cyclic::invert(&d, Exponent::integer(precision)) {
                Ok(x) => {
                    let coords: Vec<String> = x.coords().iter().map(|c| c.to_string()).collect();
                    Ok(Outcome::ok(json!({"inverse": x.to_string(), "coords": coords})))
                }
                Err(Error::Singular { kernel }) => {
                    let k = AlgebraElement::new(&alg, kernel)?;
                    Ok(Outcome {
                        passed: false,
                        lines: vec![json!({"invertible": false, "annihilated_by": k.to_string()}).to_string()],
                    })
                }
                Err(e) => Err(e),
            }
        }
        AlgebraCommand::Constants { algebra, out, seed } => {
            let constants = harness::export_constants(&algebra.spec(), &out, seed)?;
            Ok(Outcome::ok(json!({"n": constants.n(), "out": out.display().to_string(), "round_trip": true})))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(outcome) => {
            for line in outcome.lines {
                println!("{line}");
            }
            if outcome.passed { ExitCode::SUCCESS } else { ExitCode::from(1) }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
