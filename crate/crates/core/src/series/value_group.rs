use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::base_fields::is_prime;
use crate::error::{Error, Result};

/// An exponent of a generalized power series: an exact rational.
///
/// Arithmetic is checked; overflow panics rather than wrapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(Ratio<i64>);

impl Exponent {
    pub const ZERO: Exponent = Exponent(Ratio::new_raw(0, 1));
    pub const ONE: Exponent = Exponent(Ratio::new_raw(1, 1));

    pub fn integer(n: i64) -> Self {
        Exponent(Ratio::from_integer(n))
    }

    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::ZeroInput);
        }
        Ok(Exponent(Ratio::new(numer, denom)))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn scale(&self, k: i64) -> Self {
        Exponent(self.0.checked_mul(&Ratio::from_integer(k)).expect("exponent overflow"))
    }

    pub fn div_int(&self, k: i64) -> Self {
        Exponent(self.0 / k)
    }

    /// Floor as an integer.
    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> i64 {
        self.0.ceil().to_integer()
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        Exponent(self.0.checked_add(&rhs.0).expect("exponent overflow"))
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, rhs: Exponent) -> Exponent {
        Exponent(self.0.checked_sub(&rhs.0).expect("exponent overflow"))
    }
}

impl Mul<i64> for Exponent {
    type Output = Exponent;
    fn mul(self, rhs: i64) -> Exponent {
        self.scale(rhs)
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::integer(n)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().replace('−', "-");
        let bad = || Error::Parse(format!("bad exponent '{s}'"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n = n.trim().parse::<i64>().map_err(|_| bad())?;
                let d = d.trim().parse::<i64>().map_err(|_| bad())?;
                Exponent::new(n, d)
            }
            None => Ok(Exponent::integer(s.parse::<i64>().map_err(|_| bad())?)),
        }
    }
}

/// The value group of a series variable: Z, or Z[1/p] (rationals whose
/// denominator is a power of p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValueGroup {
    Integers,
    PDivisible(u64),
}

impl ValueGroup {
    pub fn p_divisible(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(ValueGroup::PDivisible(p))
    }

    pub fn contains(&self, e: &Exponent) -> bool {
        match self {
            ValueGroup::Integers => e.is_integer(),
            ValueGroup::PDivisible(p) => {
                let mut d = e.denom();
                let p = *p as i64;
                while d % p == 0 {
                    d /= p;
                }
                d == 1
            }
        }
    }

    pub fn require(&self, e: &Exponent) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::NotInValueGroup { exponent: e.to_string(), group: self.to_string() })
        }
    }

    /// Whether `e` lies in qG.
    pub fn in_multiple(&self, e: &Exponent, q: u64) -> bool {
        match self {
            ValueGroup::Integers => e.is_integer() && e.numer() % q as i64 == 0,
            ValueGroup::PDivisible(p) if *p == q => true,
            // e = a / p^k with gcd(a, p) = 1 after reduction; q ≠ p prime
            ValueGroup::PDivisible(_) => e.numer() % q as i64 == 0,
        }
    }

    /// e / q when it lies in the group.
    pub fn divide(&self, e: &Exponent, q: u64) -> Option<Exponent> {
        if self.in_multiple(e, q) {
            let r = e.div_int(q as i64);
            debug_assert!(self.contains(&r));
            Some(r)
        } else {
            None
        }
    }

    /// Whether qG, qG + γ, …, qG + (q−1)γ are pairwise distinct cosets.
    pub fn is_coset_separating(&self, gamma: &Exponent, q: u64) -> Result<bool> {
        self.require(gamma)?;
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        // G/qG has prime exponent q, so the cosets are distinct iff γ ∉ qG.
        Ok(!self.in_multiple(gamma, q))
    }
}

impl fmt::Display for ValueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueGroup::Integers => write!(f, "Z"),
            ValueGroup::PDivisible(p) => write!(f, "Z[1/{p}]"),
        }
    }
}

/// Absolute truncation bound of a series: terms with exponent ≥ the bound
/// are unknown. `Exact` means finitely supported with nothing truncated.
///
/// Ordered so that `Bounded(_) < Exact`, hence `min` combines precisions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Precision {
    Bounded(Exponent),
    Exact,
}

impl Precision {
    pub fn is_exact(&self) -> bool {
        matches!(self, Precision::Exact)
    }

    pub fn bound(&self) -> Option<Exponent> {
        match self {
            Precision::Bounded(e) => Some(*e),
            Precision::Exact => None,
        }
    }

    /// Whether a term with exponent `e` is known.
    pub fn admits(&self, e: &Exponent) -> bool {
        match self {
            Precision::Bounded(b) => e < b,
            Precision::Exact => true,
        }
    }

    pub fn shift(&self, by: Exponent) -> Precision {
        match self {
            Precision::Bounded(b) => Precision::Bounded(*b + by),
            Precision::Exact => Precision::Exact,
        }
    }
}
