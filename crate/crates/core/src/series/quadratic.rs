use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::domain::{mismatch, Domain, QuadraticDomain};
use super::Elem;

/// b + g·c in base(g), g² = γ².
#[derive(Clone, Debug)]
pub struct QuadraticElement {
    domain: Arc<QuadraticDomain>,
    re: Elem,
    im: Elem,
}

impl QuadraticElement {
    pub(crate) fn from_parts(domain: Arc<QuadraticDomain>, re: Elem, im: Elem) -> Self {
        Self { domain, re, im }
    }

    pub fn new(domain: &Domain, re: Elem, im: Elem) -> Result<Self> {
        let qd = domain.as_quadratic().ok_or_else(|| Error::Unsupported(format!("{domain} is not quadratic")))?;
        let re = qd.base().embed(&re)?;
        let im = qd.base().embed(&im)?;
        Ok(Self { domain: qd.clone(), re, im })
    }

    pub fn domain(&self) -> &Arc<QuadraticDomain> {
        &self.domain
    }

    pub fn re(&self) -> &Elem {
        &self.re
    }

    pub fn im(&self) -> &Elem {
        &self.im
    }

    fn check(&self, other: &Self) -> Result<()> {
        let a = Domain::Quadratic(self.domain.clone());
        let b = Domain::Quadratic(other.domain.clone());
        if a == b {
            Ok(())
        } else {
            Err(mismatch(&a, &b))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { domain: self.domain.clone(), re: self.re.try_add(&other.re)?, im: self.im.try_add(&other.im)? })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let g2 = self.domain.gamma_sq();
        let re = self.re.try_mul(&other.re)?.try_add(&g2.try_mul(&self.im.try_mul(&other.im)?)?)?;
        let im = self.re.try_mul(&other.im)?.try_add(&self.im.try_mul(&other.re)?)?;
        Ok(Self { domain: self.domain.clone(), re, im })
    }

    pub fn neg(&self) -> Self {
        Self { domain: self.domain.clone(), re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conjugate(&self) -> Self {
        Self { domain: self.domain.clone(), re: self.re.clone(), im: self.im.neg() }
    }

    /// b² − γ²c², the norm down to the base field.
    pub fn norm(&self) -> Elem {
        &(&self.re * &self.re) - &(self.domain.gamma_sq() * &(&self.im * &self.im))
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let n_inv = n.inv()?;
        let c = self.conjugate();
        Ok(Self { domain: self.domain.clone(), re: c.re.try_mul(&n_inv)?, im: c.im.try_mul(&n_inv)? })
    }
}

impl fmt::Display for QuadraticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.domain.var();
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "{}", self.re),
            (false, true) => write!(f, "({})", self.re),
            (true, false) => write!(f, "({})*{var}", self.im),
            (false, false) => write!(f, "({}) + ({})*{var}", self.re, self.im),
        }
    }
}
