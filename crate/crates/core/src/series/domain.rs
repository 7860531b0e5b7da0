use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::base_fields::{primitive_qth_root, PrimeFieldElement, RationalElement};
use crate::error::{Error, Result};

use super::quadratic::QuadraticElement;
use super::{Elem, Exponent, Precision, Series, ValueGroup};

/// Default truncation bound per series variable.
pub const DEFAULT_PRECISION: i64 = 20;

/// Descriptor of a coefficient field. Towers are built by nesting: the
/// coefficient field of a series domain is itself a `Domain`.
#[derive(Clone, Debug)]
pub enum Domain {
    Prime(u64),
    Rationals,
    Series(Arc<SeriesDomain>),
    Quadratic(Arc<QuadraticDomain>),
}

/// k((var^G)) over the coefficient field `coefficients`.
#[derive(Debug)]
pub struct SeriesDomain {
    var: String,
    coefficients: Domain,
    group: ValueGroup,
    default_precision: Exponent,
}

/// base(g) with g² = `gamma_sq`, elements stored as pairs (b, c) ↦ b + g·c.
#[derive(Debug)]
pub struct QuadraticDomain {
    var: String,
    base: Domain,
    gamma_sq: Elem,
}

impl SeriesDomain {
    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coefficients(&self) -> &Domain {
        &self.coefficients
    }

    pub fn group(&self) -> ValueGroup {
        self.group
    }

    pub fn default_precision(&self) -> Exponent {
        self.default_precision
    }
}

impl QuadraticDomain {
    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn base(&self) -> &Domain {
        &self.base
    }

    pub fn gamma_sq(&self) -> &Elem {
        &self.gamma_sq
    }
}

impl PartialEq for SeriesDomain {
    fn eq(&self, other: &Self) -> bool {
        self.var == other.var && self.group == other.group && self.coefficients == other.coefficients
    }
}

impl PartialEq for Domain {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Domain::Prime(p), Domain::Prime(r)) => p == r,
            (Domain::Rationals, Domain::Rationals) => true,
            (Domain::Series(a), Domain::Series(b)) => Arc::ptr_eq(a, b) || **a == **b,
            (Domain::Quadratic(a), Domain::Quadratic(b)) => {
                Arc::ptr_eq(a, b)
                    || (a.var == b.var && a.base == b.base && a.gamma_sq.eq_to_precision(&b.gamma_sq))
            }
            _ => false,
        }
    }
}

impl Domain {
    pub fn prime(p: u64) -> Result<Self> {
        PrimeFieldElement::new(p, 0)?;
        Ok(Domain::Prime(p))
    }

    pub fn rationals() -> Self {
        Domain::Rationals
    }

    /// Laurent series coeffs((var)) with integer exponents.
    pub fn laurent(coefficients: Domain, var: &str) -> Self {
        Self::series(coefficients, var, ValueGroup::Integers, Exponent::integer(DEFAULT_PRECISION))
    }

    /// Hahn-type series coeffs((var^Z[1/p])).
    pub fn hahn(coefficients: Domain, var: &str, p: u64) -> Result<Self> {
        let group = ValueGroup::p_divisible(p)?;
        Ok(Self::series(coefficients, var, group, Exponent::integer(DEFAULT_PRECISION)))
    }

    pub fn series(coefficients: Domain, var: &str, group: ValueGroup, default_precision: Exponent) -> Self {
        Domain::Series(Arc::new(SeriesDomain { var: var.to_string(), coefficients, group, default_precision }))
    }

    /// base(g), g² = `gamma_sq`. Rejects `gamma_sq` that is decidably a square.
    pub fn quadratic(base: Domain, var: &str, gamma_sq: Elem) -> Result<Self> {
        let gamma_sq = base.embed(&gamma_sq)?;
        if gamma_sq.is_zero() {
            return Err(Error::ZeroInput);
        }
        if base.characteristic() == 2 {
            return Err(Error::CharacteristicEqualsQ(2));
        }
        if let Ok(true) = gamma_sq.is_qth_power(2) {
            return Err(Error::Unsupported(format!("{gamma_sq} is a square; the extension is not a field")));
        }
        Ok(Domain::Quadratic(Arc::new(QuadraticDomain { var: var.to_string(), base, gamma_sq })))
    }

    /// F_p((x^Z[1/p]))((t^Z[1/p])), the two-level Hahn tower.
    pub fn hahn_tower(p: u64) -> Result<Self> {
        let inner = Domain::hahn(Domain::prime(p)?, "x", p)?;
        Domain::hahn(inner, "t", p)
    }

    /// Q((X))((Y)).
    pub fn rational_laurent_tower() -> Self {
        Domain::laurent(Domain::laurent(Domain::Rationals, "X"), "Y")
    }

    /// Same tower with every series level's default precision replaced.
    pub fn with_default_precision(&self, precision: Exponent) -> Domain {
        match self {
            Domain::Series(sd) => Domain::series(
                sd.coefficients.with_default_precision(precision),
                &sd.var,
                sd.group,
                precision,
            ),
            Domain::Quadratic(qd) => {
                let base = qd.base.with_default_precision(precision);
                let gamma_sq = base.embed(&qd.gamma_sq).unwrap_or_else(|_| qd.gamma_sq.clone());
                Domain::Quadratic(Arc::new(QuadraticDomain { var: qd.var.clone(), base, gamma_sq }))
            }
            other => other.clone(),
        }
    }

    pub fn as_series(&self) -> Option<&Arc<SeriesDomain>> {
        match self {
            Domain::Series(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_quadratic(&self) -> Option<&Arc<QuadraticDomain>> {
        match self {
            Domain::Quadratic(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_valued(&self) -> bool {
        matches!(self, Domain::Series(_))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Domain::Prime(p) => *p,
            Domain::Rationals => 0,
            Domain::Series(s) => s.coefficients.characteristic(),
            Domain::Quadratic(q) => q.base.characteristic(),
        }
    }

    /// The innermost field of the tower.
    pub fn base_field(&self) -> Domain {
        match self {
            Domain::Series(s) => s.coefficients.base_field(),
            Domain::Quadratic(q) => q.base.base_field(),
            other => other.clone(),
        }
    }

    pub fn is_rooted_at_rationals(&self) -> bool {
        matches!(self.base_field(), Domain::Rationals)
    }

    /// Levels from the innermost field up to `self`.
    pub fn tower(&self) -> Vec<Domain> {
        let mut levels = match self {
            Domain::Series(s) => s.coefficients.tower(),
            Domain::Quadratic(q) => q.base.tower(),
            _ => Vec::new(),
        };
        levels.push(self.clone());
        levels
    }

    /// The field the residue map lands in.
    pub fn residue_domain(&self) -> Option<&Domain> {
        self.as_series().map(|s| &s.coefficients)
    }

    pub fn zero(&self) -> Elem {
        match self {
            Domain::Prime(p) => Elem::Prime(PrimeFieldElement::from_raw(*p, 0)),
            Domain::Rationals => Elem::Rational(RationalElement::zero()),
            Domain::Series(s) => Elem::Series(Series::exact_zero(s)),
            Domain::Quadratic(q) => {
                Elem::Quadratic(Box::new(QuadraticElement::from_parts(q.clone(), q.base.zero(), q.base.zero())))
            }
        }
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Elem {
        self.from_bigint(&BigInt::from(n))
    }

    /// Image of an integer under Z → prime subfield → self.
    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        match self {
            Domain::Prime(p) => Elem::Prime(PrimeFieldElement::from_bigint(*p, n)),
            Domain::Rationals => Elem::Rational(RationalElement::from_integer(n.clone())),
            Domain::Series(s) => Elem::Series(Series::constant(s, s.coefficients.from_bigint(n))),
            Domain::Quadratic(q) => Elem::Quadratic(Box::new(QuadraticElement::from_parts(
                q.clone(),
                q.base.from_bigint(n),
                q.base.zero(),
            ))),
        }
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Elem> {
        if r.denom().is_one() {
            return Ok(self.from_bigint(r.numer()));
        }
        match self {
            Domain::Rationals => Ok(Elem::Rational(RationalElement::from_ratio(r.clone()))),
            _ => {
                let n = self.from_bigint(r.numer());
                let d = self.from_bigint(r.denom());
                if d.is_zero() {
                    return Err(Error::NotInvertible(format!("{} in {self}", r.denom())));
                }
                n.try_mul(&d.inv()?)
            }
        }
    }

    /// Lifts an element of any level of this tower into `self`.
    pub fn embed(&self, x: &Elem) -> Result<Elem> {
        let xd = x.domain();
        if xd == *self {
            return Ok(x.clone());
        }
        match self {
            Domain::Series(s) => {
                let inner = s.coefficients.embed(x).map_err(|_| mismatch(&xd, self))?;
                Ok(Elem::Series(Series::constant(s, inner)))
            }
            Domain::Quadratic(q) => {
                let inner = q.base.embed(x).map_err(|_| mismatch(&xd, self))?;
                Ok(Elem::Quadratic(Box::new(QuadraticElement::from_parts(q.clone(), inner, q.base.zero()))))
            }
            _ => Err(mismatch(&xd, self)),
        }
    }

    /// The element `var^e` of this series domain.
    pub fn monomial(&self, coefficient: Elem, e: Exponent) -> Result<Elem> {
        let s = self.as_series().ok_or_else(|| Error::Unsupported(format!("{self} has no series variable")))?;
        s.group.require(&e)?;
        let c = s.coefficients.embed(&coefficient)?;
        Ok(Elem::Series(Series::from_terms_unchecked(s, [(e, c)], Precision::Exact)))
    }

    pub fn variable(&self) -> Result<Elem> {
        let one = self.residue_domain().map(|d| d.one()).unwrap_or_else(|| self.one());
        self.monomial(one, Exponent::ONE)
    }

    /// The generator of a quadratic extension.
    pub fn gamma(&self) -> Result<Elem> {
        let q = self.as_quadratic().ok_or_else(|| Error::Unsupported(format!("{self} is not quadratic")))?;
        Ok(Elem::Quadratic(Box::new(QuadraticElement::from_parts(q.clone(), q.base.zero(), q.base.one()))))
    }

    /// A primitive q-th root of unity from the prime field, lifted into `self`.
    pub fn primitive_qth_root(&self, q: u64) -> Result<Elem> {
        let root = match self.base_field() {
            Domain::Prime(p) => Elem::Prime(primitive_qth_root(p, q)?),
            Domain::Rationals if q == 2 => Elem::Rational(RationalElement::from_integer(-1)),
            Domain::Rationals => return Err(Error::NoPrimitiveRoot { p: 0, q }),
            _ => unreachable!("base field is prime or rational"),
        };
        self.embed(&root)
    }

    pub fn default_precision(&self) -> Option<Exponent> {
        self.as_series().map(|s| s.default_precision)
    }
}

pub(crate) fn mismatch(a: &Domain, b: &Domain) -> Error {
    Error::DomainMismatch { left: a.to_string(), right: b.to_string() }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Prime(p) => write!(f, "F{p}"),
            Domain::Rationals => write!(f, "Q"),
            Domain::Series(s) => match s.group {
                ValueGroup::Integers => write!(f, "{}(({}))", s.coefficients, s.var),
                ValueGroup::PDivisible(p) => write!(f, "{}(({}^Z[1/{p}]))", s.coefficients, s.var),
            },
            Domain::Quadratic(q) => write!(f, "{}[{}^2 = {}]", q.base, q.var, q.gamma_sq),
        }
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;

    /// Parses descriptors such as `F7((t))`, `Q((X))((Y))`,
    /// `F7((x^Z[1/7]))((t^Z[1/7]))` and `Q((X))((Y))[g^2 = 2 + 2*X^2]`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |why: &str| Error::Parse(format!("bad field descriptor '{s}': {why}"));
        let mut rest = s.as_str();
        let mut domain = if let Some(r) = rest.strip_prefix('Q') {
            rest = r;
            Domain::Rationals
        } else if let Some(r) = rest.strip_prefix('F') {
            let digits: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
            let p = digits.parse::<u64>().map_err(|_| bad("expected prime after F"))?;
            rest = &r[digits.len()..];
            Domain::prime(p)?
        } else {
            return Err(bad("expected Q or F<p>"));
        };
        while let Some(r) = rest.strip_prefix("((") {
            let end = r.find("))").ok_or_else(|| bad("unclosed (("))?;
            let body = &r[..end];
            rest = &r[end + 2..];
            domain = match body.split_once("^Z[1/") {
                Some((var, tail)) => {
                    let p = tail.strip_suffix(']').ok_or_else(|| bad("expected ]"))?;
                    let p = p.parse::<u64>().map_err(|_| bad("bad group prime"))?;
                    Domain::hahn(domain, var, p)?
                }
                None => Domain::laurent(domain, body),
            };
        }
        if let Some(r) = rest.strip_prefix('[') {
            let body = r.strip_suffix(']').ok_or_else(|| bad("expected ]"))?;
            let (var, elem) = body.split_once("^2=").ok_or_else(|| bad("expected g^2 = ..."))?;
            let gamma_sq = domain.parse(elem)?;
            domain = Domain::quadratic(domain, var, gamma_sq)?;
            rest = "";
        }
        if !rest.is_empty() {
            return Err(bad("trailing input"));
        }
        Ok(domain)
    }
}
