//! Inversion, Newton lifting of q-th roots, and power tests in series towers.

use crate::error::{Error, Result};

use super::{Elem, Exponent, Precision, Series};

impl Series {
    /// Splits s = c · var^v · (1 + h) and returns (v, c, c⁻¹, 1 + h).
    fn normalize(&self) -> Result<(Exponent, Elem, Elem, Series)> {
        let v = self.valuation()?.ok_or(Error::ZeroInput)?;
        let lead = self.angular_component()?;
        let lead_inv = lead.inv()?;
        let unit = self.shift(-v).scale(&lead_inv)?;
        Ok((v, lead, lead_inv, unit))
    }

    /// 1/s known up to (absolute) exponent `target`, by leading-term division
    /// and a geometric series in the tail.
    pub fn invert(&self, target: Exponent) -> Result<Series> {
        let v = self.valuation()?.ok_or(Error::ZeroInput)?;
        let lead_inv = self.angular_component()?.inv()?;
        let shifted = self.shift(-v);
        let tail = shifted.terms().filter(|(e, _)| !e.is_zero()).map(|(e, c)| (*e, c.clone()));
        let tail = Series::from_terms_unchecked(self.domain(), tail, shifted.precision());
        // h = tail / lead, not unit − 1: an inexact lead_inv would leave a
        // spurious O-term in the constant coefficient
        let h = tail.scale(&lead_inv)?;
        let one = Series::constant(self.domain(), self.domain().coefficients().one());
        if h.is_empty() && h.precision().is_exact() {
            return Ok(Series::constant(self.domain(), lead_inv).shift(-v));
        }
        // relative precision needed for the unit part
        let relative = target + v;
        if let Precision::Bounded(available) = h.precision() {
            if relative > available {
                return Err(Error::InsufficientPrecision(format!(
                    "input known to O({}^{}), inverse requested to O({}^{target})",
                    self.domain().var(),
                    available + v,
                    self.domain().var()
                )));
            }
        }
        let minus_h = h.neg();
        let mut acc = one.truncate(relative);
        let mut term = one.truncate(relative);
        loop {
            term = term.try_mul(&minus_h)?.truncate(relative);
            if term.is_empty() {
                break;
            }
            acc = acc.try_add(&term)?;
        }
        acc.shift(-v).scale(&lead_inv)
    }

    /// Inverse to relative precision `relative` (domain default when
    /// `None`), clamped to what the input supports.
    pub(crate) fn invert_relative(&self, relative: Option<Exponent>) -> Result<Series> {
        let v = self.valuation()?.ok_or(Error::ZeroInput)?;
        let mut rel = relative.unwrap_or(self.domain().default_precision());
        if let Precision::Bounded(b) = self.precision() {
            rel = rel.min(b - v);
        }
        self.invert(rel - v)
    }

    /// r with r^q = s to precision `target`, starting from the smallest
    /// q-th root of the residue and doubling precision by Newton steps.
    pub fn hensel_qth_root(&self, q: u64, target: Exponent) -> Result<Series> {
        let v = self.valuation()?.ok_or(Error::ZeroInput)?;
        if !v.is_zero() {
            return Err(Error::Unsupported(format!("Hensel lifting needs valuation 0, got {v}")));
        }
        let coeffs = self.domain().coefficients().clone();
        if coeffs.characteristic() == q {
            return Err(Error::CharacteristicEqualsQ(q));
        }
        if let Precision::Bounded(b) = self.precision() {
            if target > b {
                return Err(Error::InsufficientPrecision(format!(
                    "input known to O({}^{b}), root requested to O({}^{target})",
                    self.domain().var(),
                    self.domain().var()
                )));
            }
        }
        let residue = self.residue()?;
        let root0 = residue
            .qth_root(q, None)?
            .ok_or_else(|| Error::NotQthPower { value: residue.to_string(), q })?;
        let mut y = Series::constant(self.domain(), root0);
        let residual = |y: &Series| -> Result<Series> { y.pow(q).try_sub(self) };

        let mut r = residual(&y)?;
        // nothing known nonzero at any exponent: y is a root up to the
        // precision of its coefficients
        let Some(mut known) = r.known_order() else {
            return Ok(y);
        };
        let q_elem = coeffs.from_int(q as i64);
        // y is kept as an exact polynomial; its accuracy is tracked by `known`
        let polynomial = |s: &Series, bound: Exponent| {
            let terms = s.terms().filter(|(e, _)| **e < bound).map(|(e, c)| (*e, c.clone()));
            Series::from_terms_unchecked(s.domain(), terms, Precision::Exact)
        };
        while known < target {
            let next = target.min(known.scale(2));
            let derivative = y.pow(q - 1).scale(&q_elem)?;
            // r's known part starts at `known`, but bare O-coefficients can
            // sit below it and the inverse must cover them too
            let low = r.valuation_lower_bound().map_or(known, |b| b.min(known));
            let step = r.truncate(next).try_mul(&derivative.invert(next - low)?)?;
            y = polynomial(&y.try_sub(&step)?, next);
            r = residual(&y)?;
            let now = r.known_order().unwrap_or(target);
            if now <= known {
                return Err(Error::InsufficientPrecision(format!("Newton iteration stalled at {known}")));
            }
            known = now;
        }
        Ok(y.truncate(target))
    }

    /// Some q-th root when `self` is a q-th power; lifted to `relative`
    /// precision (domain default when `None`).
    pub(crate) fn qth_root(&self, q: u64, relative: Option<Exponent>) -> Result<Option<Series>> {
        let Some(v) = self.valuation()? else {
            return Ok(Some(self.clone()));
        };
        let group = self.domain().group();
        let Some(m) = group.divide(&v, q) else {
            return Ok(None);
        };
        let (_, lead, _, unit) = self.normalize()?;
        let Some(lead_root) = lead.qth_root(q, None)? else {
            return Ok(None);
        };
        let mut rel = relative.unwrap_or(self.domain().default_precision());
        if let Precision::Bounded(b) = unit.precision() {
            rel = rel.min(b);
        }
        let unit_root = unit.hensel_qth_root(q, rel)?;
        Ok(Some(unit_root.scale(&lead_root)?.shift(m)))
    }

    pub(crate) fn is_qth_power(&self, q: u64) -> Result<bool> {
        let v = self.valuation()?.ok_or(Error::ZeroInput)?;
        if self.domain().coefficients().characteristic() == q {
            return Err(Error::CharacteristicEqualsQ(q));
        }
        if !self.domain().group().in_multiple(&v, q) {
            return Ok(false);
        }
        self.angular_component()?.is_qth_power(q)
    }
}

/// Exact squareness in a tower rooted at Q: even valuation and a square
/// leading coefficient at every level, down to a rational square test.
pub fn is_square_in_tower(s: &Elem) -> Result<bool> {
    if !s.is_exact() {
        return Err(Error::InsufficientPrecision("squareness is not decided for truncated input".into()));
    }
    if !s.domain().is_rooted_at_rationals() {
        return Err(Error::Unsupported(format!("{} is not rooted at Q", s.domain())));
    }
    if matches!(s, Elem::Quadratic(_)) {
        return Err(Error::Unsupported("squareness in a quadratic extension".into()));
    }
    s.is_qth_power(2)
}
