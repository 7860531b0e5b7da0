use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::base_fields::{fp_is_qth_power, fp_qth_root, PrimeFieldElement, RationalElement};
use crate::error::{Error, Result};

use super::domain::{mismatch, Domain};
use super::quadratic::QuadraticElement;
use super::{Exponent, Series};

/// An element of some field in a tower.
///
/// There is deliberately no `PartialEq`: truncated series only admit
/// comparison on jointly known coefficients, see [`Elem::eq_to_precision`].
#[derive(Clone, Debug)]
pub enum Elem {
    Prime(PrimeFieldElement),
    Rational(RationalElement),
    Series(Series),
    Quadratic(Box<QuadraticElement>),
}

impl Elem {
    pub fn domain(&self) -> Domain {
        match self {
            Elem::Prime(x) => Domain::Prime(x.modulus()),
            Elem::Rational(_) => Domain::Rationals,
            Elem::Series(s) => Domain::Series(s.domain().clone()),
            Elem::Quadratic(q) => Domain::Quadratic(q.domain().clone()),
        }
    }

    /// Structurally zero: exact zero, or a truncated series with no known
    /// nonzero coefficient.
    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Prime(x) => x.is_zero(),
            Elem::Rational(x) => x.is_zero(),
            Elem::Series(s) => s.is_structurally_zero(),
            Elem::Quadratic(q) => q.re().is_zero() && q.im().is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Elem::Prime(x) => x.is_one(),
            Elem::Rational(x) => x.is_one(),
            Elem::Series(s) => s.is_exact() && s.len() == 1 && s.terms().next().is_some_and(|(e, c)| e.is_zero() && c.is_one()),
            Elem::Quadratic(q) => q.re().is_one() && q.im().is_zero() && q.im().is_exact(),
        }
    }

    /// No truncation anywhere in the tower.
    pub fn is_exact(&self) -> bool {
        match self {
            Elem::Prime(_) | Elem::Rational(_) => true,
            Elem::Series(s) => s.is_exact(),
            Elem::Quadratic(q) => q.re().is_exact() && q.im().is_exact(),
        }
    }

    pub fn as_series(&self) -> Option<&Series> {
        match self {
            Elem::Series(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&RationalElement> {
        match self {
            Elem::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_prime(&self) -> Option<&PrimeFieldElement> {
        match self {
            Elem::Prime(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_quadratic(&self) -> Option<&QuadraticElement> {
        match self {
            Elem::Quadratic(q) => Some(q),
            _ => None,
        }
    }

    pub fn try_add(&self, other: &Elem) -> Result<Elem> {
        match (self, other) {
            (Elem::Prime(a), Elem::Prime(b)) if a.modulus() == b.modulus() => Ok(Elem::Prime(*a + *b)),
            (Elem::Rational(a), Elem::Rational(b)) => Ok(Elem::Rational(a + b)),
            (Elem::Series(a), Elem::Series(b)) => Ok(Elem::Series(a.try_add(b)?)),
            (Elem::Quadratic(a), Elem::Quadratic(b)) => Ok(Elem::Quadratic(Box::new(a.try_add(b)?))),
            _ => Err(mismatch(&self.domain(), &other.domain())),
        }
    }

    pub fn try_sub(&self, other: &Elem) -> Result<Elem> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Elem) -> Result<Elem> {
        match (self, other) {
            (Elem::Prime(a), Elem::Prime(b)) if a.modulus() == b.modulus() => Ok(Elem::Prime(*a * *b)),
            (Elem::Rational(a), Elem::Rational(b)) => Ok(Elem::Rational(a * b)),
            (Elem::Series(a), Elem::Series(b)) => Ok(Elem::Series(a.try_mul(b)?)),
            (Elem::Quadratic(a), Elem::Quadratic(b)) => Ok(Elem::Quadratic(Box::new(a.try_mul(b)?))),
            _ => Err(mismatch(&self.domain(), &other.domain())),
        }
    }

    pub fn neg(&self) -> Elem {
        match self {
            Elem::Prime(a) => Elem::Prime(-*a),
            Elem::Rational(a) => Elem::Rational(-a),
            Elem::Series(s) => Elem::Series(s.neg()),
            Elem::Quadratic(q) => Elem::Quadratic(Box::new(q.neg())),
        }
    }

    /// Multiplicative inverse. Series are inverted to the domain's default
    /// relative precision (exactly, when the input is an exact monomial).
    pub fn inv(&self) -> Result<Elem> {
        self.inv_relative(None)
    }

    /// Inverse with the top-level series truncated to relative precision
    /// `relative`; inner levels use their default precision.
    pub fn inv_relative(&self, relative: Option<Exponent>) -> Result<Elem> {
        match self {
            Elem::Prime(a) => Ok(Elem::Prime(a.inv()?)),
            Elem::Rational(a) => Ok(Elem::Rational(a.inv()?)),
            Elem::Series(s) => Ok(Elem::Series(s.invert_relative(relative)?)),
            Elem::Quadratic(q) => Ok(Elem::Quadratic(Box::new(q.inv()?))),
        }
    }

    pub fn try_div(&self, other: &Elem) -> Result<Elem> {
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Elem {
        let mut acc = self.domain().one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// n · self, with n mapped through the prime subfield.
    pub fn scale_int(&self, n: i64) -> Elem {
        self * &self.domain().from_int(n)
    }

    /// Agreement on every jointly known coefficient (plain equality for
    /// exact elements).
    pub fn eq_to_precision(&self, other: &Elem) -> bool {
        match (self, other) {
            (Elem::Prime(a), Elem::Prime(b)) => a == b,
            (Elem::Rational(a), Elem::Rational(b)) => a == b,
            (Elem::Series(a), Elem::Series(b)) => a.eq_to_precision(b),
            (Elem::Quadratic(a), Elem::Quadratic(b)) => {
                a.re().eq_to_precision(b.re()) && a.im().eq_to_precision(b.im())
            }
            _ => false,
        }
    }

    /// Whether `self` is a q-th power. Series use Hensel's lemma, so `q`
    /// must differ from the characteristic; the valuation must be known.
    pub fn is_qth_power(&self, q: u64) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        match self {
            Elem::Prime(x) => Ok(fp_is_qth_power(*x, q)),
            Elem::Rational(x) => Ok(x.qth_root(q as u32).is_some()),
            Elem::Series(s) => s.is_qth_power(q),
            Elem::Quadratic(_) => Err(Error::Unsupported("q-th power test in a quadratic extension".into())),
        }
    }

    /// A q-th root if one exists (smallest representative in F_p, positive
    /// root in Q for even q). Series roots are lifted by Newton iteration to
    /// `relative` precision, or the domain default.
    pub fn qth_root(&self, q: u64, relative: Option<Exponent>) -> Result<Option<Elem>> {
        match self {
            Elem::Prime(x) => Ok(fp_qth_root(*x, q).map(Elem::Prime)),
            Elem::Rational(x) => Ok(x.qth_root(q as u32).map(Elem::Rational)),
            Elem::Series(s) => Ok(s.qth_root(q, relative)?.map(Elem::Series)),
            Elem::Quadratic(_) => Err(Error::Unsupported("q-th roots in a quadratic extension".into())),
        }
    }

    /// Sign under the ordering where each series variable is a positive
    /// infinitesimal: the sign of the innermost leading coefficient.
    /// Only defined for towers rooted at Q.
    pub fn ordered_sign(&self) -> Result<std::cmp::Ordering> {
        use std::cmp::Ordering;
        match self {
            Elem::Rational(r) => Ok(if r.is_zero() {
                Ordering::Equal
            } else if r.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }),
            Elem::Series(s) => {
                if s.is_empty() {
                    return if s.is_exact() { Ok(Ordering::Equal) } else { Err(Error::ValuationUnknown) };
                }
                s.angular_component()?.ordered_sign()
            }
            _ => Err(Error::Unsupported("ordering needs a tower rooted at Q".into())),
        }
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Elem> for &Elem {
            type Output = Elem;
            fn $method(self, rhs: &Elem) -> Elem {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $trait<Elem> for Elem {
            type Output = Elem;
            fn $method(self, rhs: Elem) -> Elem {
                (&self).$try(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        Elem::neg(self)
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        Elem::neg(&self)
    }
}

impl From<PrimeFieldElement> for Elem {
    fn from(x: PrimeFieldElement) -> Self {
        Elem::Prime(x)
    }
}

impl From<RationalElement> for Elem {
    fn from(x: RationalElement) -> Self {
        Elem::Rational(x)
    }
}

impl From<Series> for Elem {
    fn from(s: Series) -> Self {
        Elem::Series(s)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Prime(x) => write!(f, "{x}"),
            Elem::Rational(x) => write!(f, "{x}"),
            Elem::Series(s) => write!(f, "{s}"),
            Elem::Quadratic(q) => write!(f, "{q}"),
        }
    }
}
