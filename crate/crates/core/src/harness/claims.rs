use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{SuiteConfig, VerificationReport, MAX_WITNESSES};
use crate::albert::{self, anisotropy_sample_test, sos_leading_data, tensor_product};
use crate::anagram::{self, FConvention, NormMonomial, SUPPORTED_Q};
use crate::base_fields::qth_power_set;
use crate::cyclic::{
    self, constants_mul, is_division, norm_zero_divisors, structure_constants, zero_divisor_witness, AlgebraElement,
    CyclicAlgebra,
};
use crate::error::{Error, Result};
use crate::kummer::{is_norm, KummerContext, KummerElement, NormCertificate};
use crate::sampling::{self, Shape};
use crate::series::{Domain, Elem, Exponent};
use crate::structure::StructureConstants;

pub(super) fn run(claim: &str, config: &SuiteConfig) -> Result<VerificationReport> {
    match claim {
        "anagram-level-symmetry" => anagram_level_symmetry(config),
        "anagram-zero-level-divisibility" => anagram_zero_level_divisibility(config),
        "norm-formula-oracle" => norm_formula_oracle(config),
        "norm-closed-forms" => norm_closed_forms(config),
        "norm-valuation" => norm_valuation(config),
        "norm-residue" => norm_residue(config),
        "division-certificate" => division_certificate(config),
        "structure-constants" => structure_constants_claim(config),
        "hahn-tower-division" => hahn_tower_division(config),
        "albert-anisotropy" => albert_anisotropy(config),
        other => Err(Error::InvalidConfig(format!("unknown claim {other:?}"))),
    }
}

/// Accumulates trial outcomes into a report.
struct Tally {
    trials: usize,
    failures: usize,
    witnesses: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self { trials: 0, failures: 0, witnesses: Vec::new() }
    }

    fn record(&mut self, failure: Option<String>) {
        self.trials += 1;
        if let Some(w) = failure {
            self.failures += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }

    /// One check; an error counts as a failure.
    fn check(&mut self, label: &str, outcome: Result<Option<String>>) {
        self.record(match outcome {
            Ok(None) => None,
            Ok(Some(w)) => Some(format!("{label}: {w}")),
            Err(e) => Some(format!("{label}: error: {e}")),
        });
    }

    /// `trials` seeded checks run in parallel; trial i draws from
    /// stream (seed, tag, i).
    fn sample<F>(&mut self, seed: u64, tag: &str, trials: usize, f: F)
    where
        F: Fn(&mut ChaCha8Rng) -> Result<Option<String>> + Sync,
    {
        let outcomes: Vec<_> = (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = sampling::stream(seed, tag, i as u64);
                (i, f(&mut rng))
            })
            .collect();
        for (i, outcome) in outcomes {
            self.check(&format!("{tag} trial {i}"), outcome);
        }
    }

    fn report(self, claim: &str, config: &SuiteConfig, parameters: serde_json::Value) -> VerificationReport {
        VerificationReport {
            claim: claim.to_string(),
            parameters,
            trials: self.trials,
            failures: self.failures,
            witnesses: self.witnesses,
            seed: config.seed,
            elapsed_ms: None,
        }
    }
}

fn fails_unless(ok: bool, witness: impl FnOnce() -> String) -> Result<Option<String>> {
    Ok(if ok { None } else { Some(witness()) })
}

fn laurent_context(p: u64, q: u64, precision: i64) -> Result<Arc<KummerContext>> {
    let field = Domain::laurent(Domain::prime(p)?, "t").with_default_precision(Exponent::integer(precision));
    let t = field.variable()?;
    KummerContext::new(field, q, t)
}

fn random_kummer(ctx: &Arc<KummerContext>, rng: &mut ChaCha8Rng, shape: &Shape) -> Result<KummerElement> {
    let coords = sampling::nonzero_tuple(ctx.field(), rng, shape, ctx.q() as usize, 0.25);
    KummerElement::new(ctx, coords)
}

fn random_algebra_element(alg: &Arc<CyclicAlgebra>, rng: &mut ChaCha8Rng, shape: &Shape) -> Result<AlgebraElement> {
    AlgebraElement::new(alg, sampling::nonzero_tuple(alg.field(), rng, shape, alg.n(), 0.3))
}

fn truncate(x: &Elem, bound: Exponent) -> Elem {
    match x {
        Elem::Series(s) => Elem::Series(s.truncate(bound)),
        other => other.clone(),
    }
}

fn contexts_json(config: &SuiteConfig) -> serde_json::Value {
    json!(config.contexts.iter().map(|(p, q)| json!({"p": p, "q": q})).collect::<Vec<_>>())
}

fn anagram_level_symmetry(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    for q in SUPPORTED_Q {
        for check in anagram::verify_level_symmetry(q)? {
            tally.record((!check.passed()).then(|| format!("q={q} class {:?}: {}", check.rep, check.problems.join("; "))));
        }
    }
    Ok(tally.report("anagram-level-symmetry", config, json!({"q": SUPPORTED_Q})))
}

fn anagram_zero_level_divisibility(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    for q in SUPPORTED_Q {
        let failures = anagram::zero_level_divisibility_failures(q)?;
        let mixed = anagram::c0_classes(q)?.into_iter().filter(|c| c.is_mixed()).count();
        for (rep, n0) in &failures {
            tally.record(Some(format!("q={q} class {rep:?}: N0 = {n0} is not divisible by {}", q * (q - 1))));
        }
        for _ in failures.len()..mixed {
            tally.record(None);
        }
    }
    Ok(tally.report("anagram-zero-level-divisibility", config, json!({"q": SUPPORTED_Q, "divisor": "q(q-1)"})))
}

const FORMULA_TRIALS: usize = 500;

fn norm_formula_oracle(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    let bound = Exponent::integer(config.oracle_precision);
    let shape = Shape::default().exponents(-3, 6).terms(4);
    for &(p, q) in &config.contexts {
        let ctx = laurent_context(p, q, config.precision)?;
        tally.sample(config.seed, &format!("norm-formula-oracle/F{p}/q{q}"), config.trials_or(FORMULA_TRIALS), |rng| {
            let coords = sampling::nonzero_tuple(ctx.field(), rng, &shape, q as usize, 0.25);
            let a = KummerElement::new(&ctx, coords.iter().map(|c| truncate(c, bound)).collect())?;
            let (formula, oracle) = (a.norm_formula()?, a.norm_oracle()?);
            fails_unless(formula.eq_to_precision(&oracle), || format!("{a}: formula {formula}, oracle {oracle}"))
        });
    }
    let parameters = json!({"contexts": contexts_json(config), "input_precision": config.oracle_precision, "f": "N0 - N1"});
    Ok(tally.report("norm-formula-oracle", config, parameters))
}

/// b₀² − t·b₁² and b₀³ + t·b₁³ + t²·b₂³ − 3t·b₀b₁b₂.
pub(crate) fn closed_form(q: u64) -> Vec<NormMonomial> {
    let m = |e: &[u64], t: u64, c: i64| NormMonomial { exponents: e.to_vec(), t_power: t, coefficient: c };
    let mut out = match q {
        2 => vec![m(&[2, 0], 0, 1), m(&[0, 2], 1, -1)],
        3 => vec![m(&[3, 0, 0], 0, 1), m(&[0, 3, 0], 1, 1), m(&[0, 0, 3], 2, 1), m(&[1, 1, 1], 1, -3)],
        _ => unreachable!("closed forms are stated for q = 2, 3"),
    };
    out.sort();
    out
}

fn norm_closed_forms(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    for q in [2, 3] {
        let generated = anagram::norm_polynomial(q, FConvention::LevelDifference);
        tally.check(
            &format!("q={q}"),
            generated.map(|g| (g != closed_form(q)).then(|| format!("generated {g:?}"))),
        );
    }
    Ok(tally.report("norm-closed-forms", config, json!({"q": [2, 3]})))
}

const VALUATION_TRIALS: usize = 500;

fn norm_valuation(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    let shape = Shape::default().exponents(-5, 5).terms(3);
    for &(p, q) in &config.contexts {
        let ctx = laurent_context(p, q, config.precision)?;
        tally.sample(config.seed, &format!("norm-valuation/F{p}/q{q}"), config.trials_or(VALUATION_TRIALS), |rng| {
            let a = random_kummer(&ctx, rng, &shape)?;
            let predicted = a.norm_valuation()?;
            let actual = a.norm_oracle()?.as_series().expect("series").valuation()?;
            fails_unless(actual == Some(predicted), || format!("{a}: predicted {predicted}, oracle {actual:?}"))
        });
    }
    let parameters = json!({"contexts": contexts_json(config), "coordinate_valuations": [-5, 5]});
    Ok(tally.report("norm-valuation", config, parameters))
}

const RESIDUE_TRIALS: usize = 500;

fn norm_residue(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    let mut powers_json = Vec::new();
    for &(p, q) in &config.contexts {
        let ctx = laurent_context(p, q, config.precision)?;
        let field = ctx.field().clone();
        let powers: Vec<u64> = qth_power_set(p, q)?.iter().map(|x| x.value()).collect();
        powers_json.push(json!({"p": p, "q": q, "qth_powers": powers}));
        let unit_shape = Shape::default().exponents(0, 4);
        tally.sample(config.seed, &format!("norm-residue/F{p}/q{q}"), config.trials_or(RESIDUE_TRIALS), |rng| {
            let mut coords = vec![sampling::unit(&field, rng, &unit_shape)];
            coords.extend((1..q).map(|_| sampling::maybe_zero(&field, rng, &unit_shape, 0.3)));
            let a = KummerElement::new(&ctx, coords)?;
            let residue = a.norm_oracle()?.as_series().expect("series").residue()?;
            let value = residue.as_prime().map(|r| r.value());
            fails_unless(value.is_some_and(|v| powers.contains(&v)), || format!("{a}: residue {residue}"))
        });
        // Every nonzero residue: q-th powers come with a preimage whose
        // norm gives back the element, the rest are certified non-norms.
        for r in 1..p {
            let x = field.from_int(r as i64);
            let outcome = is_norm(&ctx, &x).and_then(|d| match (powers.contains(&r), d.preimage()) {
                (true, Some(pre)) => {
                    let back = pre.norm_oracle()?;
                    fails_unless(back.eq_to_precision(&x), || format!("N({pre}) = {back}"))
                }
                (false, None) if !d.verdict => Ok(None),
                _ => Ok(Some(format!("unexpected decision {}", serde_json::to_string(&d).unwrap_or_default()))),
            });
            tally.check(&format!("F{p} q={q} residue {r}"), outcome);
        }
    }
    Ok(tally.report("norm-residue", config, json!({"contexts": powers_json})))
}

const PRODUCT_TRIALS: usize = 2000;
const INVERSION_TRIALS: usize = 200;

fn division_certificate(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    let ctx = laurent_context(7, 3, config.precision)?;
    let field = ctx.field().clone();
    let target = Exponent::integer(config.precision);

    let division = CyclicAlgebra::new(&ctx, field.from_int(2))?;
    let cert = is_division(&division)?;
    tally.check(
        "alpha=2 certificate",
        fails_unless(cert.division && matches!(cert.norm.certificate, NormCertificate::ResidueNotQthPower { .. }), || {
            format!("{:?}", cert.norm.certificate)
        }),
    );
    let shape = Shape::default().exponents(-2, 3);
    tally.sample(config.seed, "division-certificate/products", config.trials_or(PRODUCT_TRIALS), |rng| {
        let a = random_algebra_element(&division, rng, &shape)?;
        let b = random_algebra_element(&division, rng, &shape)?;
        fails_unless(!a.relation_mul(&b)?.is_zero(), || format!("({a})·({b}) = 0"))
    });
    tally.sample(config.seed, "division-certificate/inverses", config.trials_or(INVERSION_TRIALS), |rng| {
        let d = random_algebra_element(&division, rng, &shape)?;
        let x = cyclic::invert(&d, target)?;
        let one = AlgebraElement::one(&division);
        let right = d.relation_mul(&x)?.try_sub(&one)?;
        let left = x.relation_mul(&d)?.try_sub(&one)?;
        fails_unless(right.vanishes_below(target) && left.vanishes_below(target), || format!("{d}: inverse {x}"))
    });

    let split = CyclicAlgebra::new(&ctx, field.from_int(6))?;
    tally.check(
        "alpha=6 witness",
        (|| {
            let cert = is_division(&split)?;
            let (a, b) = zero_divisor_witness(&split, &field.from_int(3))?;
            let exact = a.to_string() == "(4) + (1)*X" && b.to_string() == "(2) + (3)*X + (1)*X^2";
            fails_unless(!cert.division && exact && a.relation_mul(&b)?.is_zero(), || format!("({a})·({b})"))
        })(),
    );

    let split_t = CyclicAlgebra::new(&ctx, field.variable()?)?;
    tally.check(
        "alpha=t witness",
        (|| {
            let cert = is_division(&split_t)?;
            let u = KummerElement::u_power(&ctx, 1);
            let is_u = cert.norm.preimage().is_some_and(|pre| pre.to_string() == u.to_string());
            let (a, b) = norm_zero_divisors(&split_t, &u)?;
            fails_unless(!cert.division && is_u && a.relation_mul(&b)?.is_zero(), || {
                format!("certificate {:?}", cert.norm.certificate)
            })
        })(),
    );

    let parameters = json!({
        "field": "F7((t))", "q": 3, "t": "t", "division_alpha": "2", "split_alphas": ["6", "t"],
        "precision": config.precision,
    });
    Ok(tally.report("division-certificate", config, parameters))
}

const CONSTANTS_TRIALS: usize = 500;

fn structure_constants_claim(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    let rationals = Domain::rationals();
    let hamilton_ctx = KummerContext::new(rationals.clone(), 2, rationals.from_int(-1))?;
    let hamilton = CyclicAlgebra::new(&hamilton_ctx, rationals.from_int(-1))?;
    let f7 = laurent_context(7, 3, config.precision)?;
    let f7_algebra = CyclicAlgebra::new(&f7, f7.field().from_int(2))?;
    let shape = Shape::default().exponents(-2, 3);
    for (name, alg) in [("hamilton", &hamilton), ("F7-q3-alpha2", &f7_algebra)] {
        let constants = structure_constants(alg)?;
        tally.sample(config.seed, &format!("structure-constants/{name}"), config.trials_or(CONSTANTS_TRIALS), |rng| {
            let a = random_algebra_element(alg, rng, &shape)?;
            let b = random_algebra_element(alg, rng, &shape)?;
            let (by_table, by_relations) = (constants_mul(&a, &b, &constants)?, a.relation_mul(&b)?);
            fails_unless(by_table.eq_to_precision(&by_relations), || format!("({a})·({b}): {by_table} vs {by_relations}"))
        });
        tally.check(
            &format!("{name} json"),
            (|| {
                let text = constants.to_json();
                let loaded = StructureConstants::from_json(&text)?;
                let one = AlgebraElement::one(alg);
                let x = AlgebraElement::monomial(alg, 1, 1);
                let same = loaded.to_json() == text
                    && constants_mul(&x, &x, &loaded)?.eq_to_precision(&x.relation_mul(&x)?)
                    && constants_mul(&one, &x, &loaded)?.eq_to_precision(&x);
                fails_unless(same, || "reloaded table differs".into())
            })(),
        );
    }
    let parameters = json!({"algebras": [
        {"field": "Q", "q": 2, "t": "-1", "alpha": "-1"},
        {"field": "F7((t))", "q": 3, "t": "t", "alpha": "2"},
    ]});
    Ok(tally.report("structure-constants", config, parameters))
}

const HAHN_TRIALS: usize = 200;

fn hahn_tower_division(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    let field = Domain::hahn_tower(7)?.with_default_precision(Exponent::integer(config.precision));
    let x = field.embed(&field.residue_domain().expect("series").variable()?)?;
    let ctx = KummerContext::new(field.clone(), 3, field.variable()?)?;
    let alg = CyclicAlgebra::new(&ctx, x)?;
    let cert = is_division(&alg)?;
    tally.check(
        "alpha=x certificate",
        fails_unless(cert.division && matches!(cert.norm.certificate, NormCertificate::ResidueNotQthPower { .. }), || {
            format!("{:?}", cert.norm.certificate)
        }),
    );
    let shape = Shape::default().exponents(-1, 2).terms(2);
    tally.sample(config.seed, "hahn-tower-division/products", config.trials_or(HAHN_TRIALS), |rng| {
        let a = random_algebra_element(&alg, rng, &shape)?;
        let b = random_algebra_element(&alg, rng, &shape)?;
        fails_unless(!a.relation_mul(&b)?.is_zero(), || format!("({a})·({b}) = 0"))
    });
    let parameters = json!({"field": field.to_string(), "q": 3, "t": "t", "alpha": "x"});
    Ok(tally.report("hahn-tower-division", config, parameters))
}

const FORM_TRIALS: usize = 5000;
const BIQUATERNION_PRODUCTS: usize = 2000;
const ASSOCIATIVITY_TRIALS: usize = 500;
const SOS_TRIALS: usize = 1000;

fn albert_anisotropy(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    let field = Domain::rational_laurent_tower();
    let (d1, d2) = albert::standard_pair(&field)?;
    let phi = albert::albert_form(&d1, &d2)?;
    let witness = albert::nonsquare_witness(&field)?;
    tally.check("2+2X^2 is not a square", fails_unless(!witness.is_square, || witness.element.to_string()));
    let extension = albert::nonsquare_extension(&field)?;
    for domain in [&field, &extension] {
        let report = anisotropy_sample_test(&phi, domain, config.trials_or(FORM_TRIALS), config.seed)?;
        tally.trials += report.trials - report.failures;
        for tuple in report.counterexamples {
            tally.record(Some(format!("form vanishes over {domain} at ({})", tuple.join(", "))));
        }
    }

    let biquaternions = tensor_product(&d1, &d2)?;
    let shape = Shape::default().exponents(-1, 2).terms(2);
    let sample = |rng: &mut ChaCha8Rng| sampling::nonzero_tuple(&field, rng, &shape, 16, 0.6);
    let show = |v: &[Elem]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    tally.sample(config.seed, "albert-anisotropy/biquaternion-products", config.trials_or(BIQUATERNION_PRODUCTS), |rng| {
        let (a, b) = (sample(rng), sample(rng));
        let p = biquaternions.mul(&a, &b)?;
        fails_unless(p.iter().any(|c| !c.is_zero()), || format!("[{}]·[{}] = 0", show(&a), show(&b)))
    });
    tally.sample(config.seed, "albert-anisotropy/associativity", config.trials_or(ASSOCIATIVITY_TRIALS), |rng| {
        let (a, b, c) = (sample(rng), sample(rng), sample(rng));
        let left = biquaternions.mul(&biquaternions.mul(&a, &b)?, &c)?;
        let right = biquaternions.mul(&a, &biquaternions.mul(&b, &c)?)?;
        let same = left.iter().zip(&right).all(|(x, y)| x.eq_to_precision(y));
        fails_unless(same, || format!("[{}], [{}], [{}]", show(&a), show(&b), show(&c)))
    });
    let sos_shape = Shape::default().exponents(-3, 3).terms(3);
    tally.sample(config.seed, "albert-anisotropy/square-sums", config.trials_or(SOS_TRIALS), |rng| {
        use rand::Rng;
        let count = rng.gen_range(1..=4);
        let summands: Vec<Elem> = (0..count).map(|_| sampling::nonzero(&field, rng, &sos_shape)).collect();
        let data = sos_leading_data(&summands)?;
        let problems = data.violations();
        fails_unless(problems.is_empty(), || format!("[{}]: {}", show(&summands), problems.join("; ")))
    });

    let parameters = json!({
        "field": field.to_string(),
        "form": phi.to_string(),
        "extension": extension.to_string(),
    });
    Ok(tally.report("albert-anisotropy", config, parameters))
}
