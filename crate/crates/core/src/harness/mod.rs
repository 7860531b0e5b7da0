//! Seeded verification campaigns: configuration, reports and the suite
//! runner behind `cda verify`.

mod claims;

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::anagram::SUPPORTED_Q;
use crate::base_fields::is_prime;
use crate::cyclic::{constants_mul, structure_constants, AlgebraElement, CyclicAlgebra};
use crate::error::{Error, Result};
use crate::kummer::KummerContext;
use crate::sampling::{self, Shape};
use crate::series::Domain;
use crate::structure::StructureConstants;

/// Claim ids in the order the suite runs and reports them.
pub const CLAIMS: [&str; 10] = [
    "anagram-level-symmetry",
    "anagram-zero-level-divisibility",
    "norm-formula-oracle",
    "norm-closed-forms",
    "norm-valuation",
    "norm-residue",
    "division-certificate",
    "structure-constants",
    "hahn-tower-division",
    "albert-anisotropy",
];

/// Witness strings kept per report; the failure count is always complete.
pub const MAX_WITNESSES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Absolute precision for inversions and other truncated results.
    pub precision: i64,
    /// Precision of inputs in the formula/oracle comparison.
    pub oracle_precision: i64,
    /// Overrides every claim's own trial count when set.
    pub trials: Option<usize>,
    /// (p, q) pairs for the Kummer claims over F_p((t)).
    pub contexts: Vec<(u64, u64)>,
    /// Subset of [`CLAIMS`] to run; all when `None`.
    pub claims: Option<Vec<String>>,
    /// Record wall-clock time in each report (breaks byte-for-byte replay).
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            precision: 20,
            oracle_precision: 30,
            trials: None,
            contexts: vec![(7, 3), (13, 3), (11, 5)],
            claims: None,
            timings: false,
        }
    }
}

/// Keys accepted in a TOML config file; absent keys keep their value.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    precision: Option<i64>,
    oracle_precision: Option<i64>,
    trials: Option<usize>,
    contexts: Option<Vec<(u64, u64)>>,
    claims: Option<Vec<String>>,
    timings: Option<bool>,
}

pub const PRECISION_ENV: &str = "CDA_PRECISION";

impl SuiteConfig {
    /// Defaults, then `CDA_PRECISION`, then the optional TOML file.
    /// Command-line flags are applied on top by the caller.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut config = Self::default();
        if let Ok(value) = std::env::var(PRECISION_ENV) {
            config.precision = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("{PRECISION_ENV}={value} is not an integer")))?;
        }
        if let Some(path) = path {
            config.apply_toml(&std::fs::read_to_string(path)?)?;
        }
        Ok(config)
    }

    pub fn apply_toml(&mut self, text: &str) -> Result<()> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        macro_rules! overlay {
            ($($field:ident),*) => { $(if let Some(v) = file.$field { self.$field = v; })* };
        }
        overlay!(seed, precision, oracle_precision, contexts, timings);
        if file.trials.is_some() {
            self.trials = file.trials;
        }
        if file.claims.is_some() {
            self.claims = file.claims;
        }
        Ok(())
    }

    /// Rejects bad input before any computation starts.
    pub fn validate(&self) -> Result<()> {
        if self.precision < 1 || self.oracle_precision < 1 {
            return Err(Error::InvalidConfig("precisions must be positive".into()));
        }
        if self.trials == Some(0) {
            return Err(Error::InvalidConfig("trials must be positive".into()));
        }
        for &(p, q) in &self.contexts {
            if !is_prime(p) {
                return Err(Error::InvalidConfig(format!("context ({p}, {q}): {p} is not prime")));
            }
            if !SUPPORTED_Q.contains(&q) {
                return Err(Error::InvalidConfig(format!("context ({p}, {q}): q must be one of {SUPPORTED_Q:?}")));
            }
            if (p - 1) % q != 0 {
                return Err(Error::InvalidConfig(format!("context ({p}, {q}): {q} does not divide {}", p - 1)));
            }
        }
        if let Some(claims) = &self.claims {
            if let Some(bad) = claims.iter().find(|c| !CLAIMS.contains(&c.as_str())) {
                return Err(Error::InvalidConfig(format!("unknown claim {bad:?}")));
            }
        }
        Ok(())
    }

    pub(crate) fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    fn selected(&self) -> Vec<&'static str> {
        CLAIMS
            .iter()
            .copied()
            .filter(|c| self.claims.as_ref().is_none_or(|list| list.iter().any(|x| x == c)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub parameters: serde_json::Value,
    pub trials: usize,
    pub failures: usize,
    /// Failing cases, each naming its trial index so it can be replayed.
    pub witnesses: Vec<String>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Runs the selected claims. Claims run concurrently; the output keeps the
/// order of [`CLAIMS`].
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    config.validate()?;
    config
        .selected()
        .par_iter()
        .map(|&claim| {
            let start = Instant::now();
            let mut report = claims::run(claim, config)?;
            if config.timings {
                report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
            }
            Ok(report)
        })
        .collect()
}

/// Data for building a cyclic algebra from text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub field: String,
    pub q: u64,
    pub t: String,
    pub alpha: String,
}

impl AlgebraSpec {
    /// (Q, q = 2, t = −1, α = −1): the real quaternions restricted to Q.
    pub fn hamilton() -> Self {
        Self { field: "Q".into(), q: 2, t: "-1".into(), alpha: "-1".into() }
    }

    pub fn build(&self) -> Result<Arc<CyclicAlgebra>> {
        let field: Domain = self.field.parse()?;
        let t = field.parse(&self.t)?;
        let kummer = KummerContext::new(field.clone(), self.q, t)?;
        CyclicAlgebra::new(&kummer, field.parse(&self.alpha)?)
    }
}

/// Pairs re-checked after reloading an exported table.
const EXPORT_CHECKS: u64 = 20;

/// Writes the structure constants of the algebra to `path`, reloads them
/// and checks the reloaded table against the defining relations.
pub fn export_constants(spec: &AlgebraSpec, path: &Path, seed: u64) -> Result<StructureConstants> {
    let algebra = spec.build()?;
    let constants = structure_constants(&algebra)?;
    constants.save(path)?;
    let loaded = StructureConstants::load(path)?;
    let shape = Shape::default().exponents(-2, 3);
    for i in 0..EXPORT_CHECKS {
        let mut rng = sampling::stream(seed, "export-constants", i);
        let a = AlgebraElement::new(&algebra, sampling::nonzero_tuple(algebra.field(), &mut rng, &shape, algebra.n(), 0.3))?;
        let b = AlgebraElement::new(&algebra, sampling::nonzero_tuple(algebra.field(), &mut rng, &shape, algebra.n(), 0.3))?;
        if !constants_mul(&a, &b, &loaded)?.eq_to_precision(&a.relation_mul(&b)?) {
            return Err(Error::InvalidContext(format!("reloaded constants disagree on pair {i}")));
        }
    }
    Ok(loaded)
}
