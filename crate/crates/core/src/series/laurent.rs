use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::domain::{mismatch, Domain, SeriesDomain};
use super::{Elem, Exponent, Precision};

/// A finitely supported generalized power series, possibly truncated.
///
/// Invariants: exponents lie in the domain's value group, no stored
/// coefficient is exactly zero, and every exponent is admitted by
/// `precision`. A stored coefficient may be a bare O-term of the coefficient
/// field when cancellation left nothing known; it is kept so that its
/// uncertainty keeps propagating.
#[derive(Clone, Debug)]
pub struct Series {
    domain: Arc<SeriesDomain>,
    terms: BTreeMap<Exponent, Elem>,
    precision: Precision,
}

impl Series {
    /// Validating constructor.
    pub fn new(
        domain: &Arc<SeriesDomain>,
        terms: impl IntoIterator<Item = (Exponent, Elem)>,
        precision: Precision,
    ) -> Result<Self> {
        let coeff_domain = domain.coefficients();
        let mut checked = Vec::new();
        for (e, c) in terms {
            domain.group().require(&e)?;
            let c = coeff_domain.embed(&c)?;
            checked.push((e, c));
        }
        if let Precision::Bounded(b) = precision {
            domain.group().require(&b)?;
        }
        Ok(Self::from_terms_unchecked(domain, checked, precision))
    }

    /// Sums duplicate exponents, drops exact zeros and terms beyond
    /// `precision`. Exponents and coefficient domains are trusted.
    pub(crate) fn from_terms_unchecked(
        domain: &Arc<SeriesDomain>,
        terms: impl IntoIterator<Item = (Exponent, Elem)>,
        precision: Precision,
    ) -> Self {
        let mut map: BTreeMap<Exponent, Elem> = BTreeMap::new();
        for (e, c) in terms {
            if !precision.admits(&e) {
                continue;
            }
            match map.get_mut(&e) {
                Some(existing) => *existing = &*existing + &c,
                None => {
                    map.insert(e, c);
                }
            }
        }
        map.retain(|_, c| !is_exact_zero(c));
        Series { domain: domain.clone(), terms: map, precision }
    }

    fn from_map(domain: &Arc<SeriesDomain>, mut terms: BTreeMap<Exponent, Elem>, precision: Precision) -> Self {
        terms.retain(|e, c| precision.admits(e) && !is_exact_zero(c));
        Series { domain: domain.clone(), terms, precision }
    }

    pub fn exact_zero(domain: &Arc<SeriesDomain>) -> Self {
        Series { domain: domain.clone(), terms: BTreeMap::new(), precision: Precision::Exact }
    }

    /// O(var^bound): nothing known below `bound`.
    pub fn big_o(domain: &Arc<SeriesDomain>, bound: Exponent) -> Self {
        Series { domain: domain.clone(), terms: BTreeMap::new(), precision: Precision::Bounded(bound) }
    }

    pub fn constant(domain: &Arc<SeriesDomain>, c: Elem) -> Self {
        Self::from_terms_unchecked(domain, [(Exponent::ZERO, c)], Precision::Exact)
    }

    pub fn domain(&self) -> &Arc<SeriesDomain> {
        &self.domain
    }

    pub fn field(&self) -> Domain {
        Domain::Series(self.domain.clone())
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Elem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// No known nonzero coefficient; bare O-coefficients may be stored.
    pub fn is_structurally_zero(&self) -> bool {
        self.terms.values().all(Elem::is_zero)
    }

    /// Exact at this level and at every coefficient level.
    pub fn is_exact(&self) -> bool {
        self.precision.is_exact() && self.terms.values().all(Elem::is_exact)
    }

    pub fn coefficient(&self, e: &Exponent) -> Elem {
        self.terms.get(e).cloned().unwrap_or_else(|| self.domain.coefficients().zero())
    }

    /// Minimum support exponent; `None` for the exact zero series.
    /// Errors when nothing is known below a finite precision.
    pub fn valuation(&self) -> Result<Option<Exponent>> {
        match self.terms.iter().next() {
            Some((_, c)) if c.is_zero() => Err(Error::ValuationUnknown),
            Some((e, _)) => Ok(Some(*e)),
            None if self.precision.is_exact() => Ok(None),
            None => Err(Error::ValuationUnknown),
        }
    }

    /// Known lower bound for the valuation; `None` means +∞.
    pub fn valuation_lower_bound(&self) -> Option<Exponent> {
        self.terms.keys().next().copied().or(self.precision.bound())
    }

    /// First exponent carrying a known nonzero coefficient, else the
    /// precision bound. Bare O-coefficients before it are skipped.
    pub(crate) fn known_order(&self) -> Option<Exponent> {
        self.terms.iter().find(|(_, c)| !c.is_zero()).map(|(e, _)| *e).or(self.precision.bound())
    }

    /// Coefficient at exponent 0 on the valuation ring, zero outside it.
    pub fn residue(&self) -> Result<Elem> {
        let zero = self.domain.coefficients().zero();
        match self.terms.iter().next() {
            Some((v, c)) if v.is_negative() && c.is_zero() => Err(Error::InsufficientPrecision(format!(
                "leading coefficient at {}^{v} is undetermined",
                self.domain.var()
            ))),
            Some((v, _)) if v.is_negative() => Ok(zero),
            Some(_) => Ok(self.coefficient(&Exponent::ZERO)),
            None => match self.precision {
                Precision::Exact => Ok(zero),
                Precision::Bounded(b) if b.is_positive() => Ok(zero),
                Precision::Bounded(b) => Err(Error::InsufficientPrecision(format!(
                    "residue of O({}^{b}) is undetermined",
                    self.domain.var()
                ))),
            },
        }
    }

    /// Coefficient of the minimal-exponent monomial.
    pub fn angular_component(&self) -> Result<Elem> {
        match self.terms.values().next() {
            Some(c) if c.is_zero() => Err(Error::ValuationUnknown),
            Some(c) => Ok(c.clone()),
            None if self.precision.is_exact() => Err(Error::ZeroInput),
            None => Err(Error::ValuationUnknown),
        }
    }

    fn check_domain(&self, other: &Series) -> Result<()> {
        if Arc::ptr_eq(&self.domain, &other.domain) || *self.domain == *other.domain {
            Ok(())
        } else {
            Err(mismatch(&self.field(), &other.field()))
        }
    }

    pub fn try_add(&self, other: &Series) -> Result<Series> {
        self.check_domain(other)?;
        let precision = self.precision.min(other.precision);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            if !precision.admits(e) {
                continue;
            }
            match terms.get_mut(e) {
                Some(existing) => *existing = existing.try_add(c)?,
                None => {
                    terms.insert(*e, c.clone());
                }
            }
        }
        Ok(Self::from_map(&self.domain, terms, precision))
    }

    pub fn try_sub(&self, other: &Series) -> Result<Series> {
        self.try_add(&other.neg())
    }

    /// Product. Precision is min(π₁ + v(s₂), π₂ + v(s₁)) with v replaced by
    /// its known lower bound.
    pub fn try_mul(&self, other: &Series) -> Result<Series> {
        self.check_domain(other)?;
        let exact_zero = |s: &Series| s.terms.is_empty() && s.precision.is_exact();
        if exact_zero(self) || exact_zero(other) {
            return Ok(Series::exact_zero(&self.domain));
        }
        let lo_self = self.valuation_lower_bound().expect("nonzero");
        let lo_other = other.valuation_lower_bound().expect("nonzero");
        let precision = self.precision.shift(lo_other).min(other.precision.shift(lo_self));
        let mut terms: BTreeMap<Exponent, Elem> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = *e1 + *e2;
                if !precision.admits(&e) {
                    // exponents in `other` are increasing
                    break;
                }
                let prod = c1.try_mul(c2)?;
                match terms.get_mut(&e) {
                    Some(existing) => *existing = existing.try_add(&prod)?,
                    None => {
                        terms.insert(e, prod);
                    }
                }
            }
        }
        Ok(Self::from_map(&self.domain, terms, precision))
    }

    pub fn neg(&self) -> Series {
        Series {
            domain: self.domain.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
            precision: self.precision,
        }
    }

    /// Drops everything at or above `bound` and records the truncation.
    pub fn truncate(&self, bound: Exponent) -> Series {
        let precision = self.precision.min(Precision::Bounded(bound));
        let terms = self.terms.range(..bound).map(|(e, c)| (*e, c.clone())).collect();
        Series { domain: self.domain.clone(), terms, precision }
    }

    /// Multiplication by var^by.
    pub fn shift(&self, by: Exponent) -> Series {
        Series {
            domain: self.domain.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e + by, c.clone())).collect(),
            precision: self.precision.shift(by),
        }
    }

    /// Multiplication by a coefficient-field element.
    pub fn scale(&self, c: &Elem) -> Result<Series> {
        let mut terms = BTreeMap::new();
        for (e, x) in &self.terms {
            terms.insert(*e, x.try_mul(c)?);
        }
        Ok(Self::from_map(&self.domain, terms, self.precision))
    }

    pub fn pow(&self, e: u64) -> Series {
        match Elem::Series(self.clone()).pow(e) {
            Elem::Series(s) => s,
            _ => unreachable!(),
        }
    }

    /// Agreement on every jointly known coefficient.
    pub fn eq_to_precision(&self, other: &Series) -> bool {
        if self.check_domain(other).is_err() {
            return false;
        }
        let joint = self.precision.min(other.precision);
        let zero = self.domain.coefficients().zero();
        let exps = self.terms.keys().chain(other.terms.keys()).filter(|e| joint.admits(e));
        for e in exps {
            let a = self.terms.get(e).unwrap_or(&zero);
            let b = other.terms.get(e).unwrap_or(&zero);
            if !a.eq_to_precision(b) {
                return false;
            }
        }
        true
    }
}

fn is_exact_zero(c: &Elem) -> bool {
    c.is_zero() && c.is_exact()
}
