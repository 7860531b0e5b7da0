//! Prime fields F_p, the rationals, and q-th power bookkeeping.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Deterministic trial division. Intended for the moduli used here (< 10^6),
/// correct for any `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn require_prime(n: u64) -> Result<()> {
    if is_prime(n) {
        Ok(())
    } else {
        Err(Error::NotPrime(n))
    }
}

/// An element of F_p stored by its canonical representative in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeFieldElement {
    p: u64,
    value: u64,
}

impl PrimeFieldElement {
    pub fn new(p: u64, value: u64) -> Result<Self> {
        require_prime(p)?;
        Ok(Self::from_raw(p, value))
    }

    /// Skips the primality check; `p` must already be known prime.
    pub(crate) fn from_raw(p: u64, value: u64) -> Self {
        Self { p, value: value % p }
    }

    pub(crate) fn from_bigint(p: u64, v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(p));
        let value = r.to_string().parse::<u64>().expect("reduced residue fits in u64");
        Self { p, value }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::from_raw(self.p, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::ZeroInput);
        }
        Ok(self.pow(self.p - 2))
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mismatched prime field moduli");
    }
}

impl fmt::Display for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for PrimeFieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        let s = (self.value as u128 + rhs.value as u128) % self.p as u128;
        Self { p: self.p, value: s as u64 }
    }
}

impl Sub for PrimeFieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for PrimeFieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check(&rhs);
        let m = (self.value as u128 * rhs.value as u128) % self.p as u128;
        Self { p: self.p, value: m as u64 }
    }
}

impl Neg for PrimeFieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self { p: self.p, value: (self.p - self.value) % self.p }
    }
}

/// A reduced fraction with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalElement(BigRational);

impl RationalElement {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Self> {
        let d: BigInt = denominator.into();
        if d.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(Self(BigRational::new(numerator.into(), d)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(r: BigRational) -> Self {
        Self(r)
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.0.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(Self(self.0.recip()))
    }

    pub fn pow(&self, e: u32) -> Self {
        Self(num_traits::pow(self.0.clone(), e as usize))
    }

    /// The exact q-th root, if the fraction is a q-th power in Q.
    /// For even `q` the positive root is returned.
    pub fn qth_root(&self, q: u32) -> Option<Self> {
        if self.0.is_zero() {
            return Some(self.clone());
        }
        let neg = self.0.is_negative();
        if neg && q.is_multiple_of(2) {
            return None;
        }
        let n = self.0.numer().abs();
        let d = self.0.denom().clone();
        let rn = n.nth_root(q);
        let rd = d.nth_root(q);
        if num_traits::pow(rn.clone(), q as usize) != n || num_traits::pow(rd.clone(), q as usize) != d {
            return None;
        }
        let r = BigRational::new(if neg { -rn } else { rn }, rd);
        Some(Self(r))
    }
}

impl fmt::Display for RationalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Add for &RationalElement {
    type Output = RationalElement;
    fn add(self, rhs: Self) -> RationalElement {
        RationalElement(&self.0 + &rhs.0)
    }
}

impl Sub for &RationalElement {
    type Output = RationalElement;
    fn sub(self, rhs: Self) -> RationalElement {
        RationalElement(&self.0 - &rhs.0)
    }
}

impl Mul for &RationalElement {
    type Output = RationalElement;
    fn mul(self, rhs: Self) -> RationalElement {
        RationalElement(&self.0 * &rhs.0)
    }
}

impl Neg for &RationalElement {
    type Output = RationalElement;
    fn neg(self) -> RationalElement {
        RationalElement(-&self.0)
    }
}

/// The smallest ξ in F_p with ξ^q = 1, ξ ≠ 1.
pub fn primitive_qth_root(p: u64, q: u64) -> Result<PrimeFieldElement> {
    require_prime(p)?;
    require_prime(q)?;
    if !(p - 1).is_multiple_of(q) {
        return Err(Error::NoPrimitiveRoot { p, q });
    }
    (2..p)
        .map(|x| PrimeFieldElement::from_raw(p, x))
        .find(|x| x.pow(q).is_one())
        .ok_or(Error::NoPrimitiveRoot { p, q })
}

/// {x^q : x ∈ F_p^×}.
pub fn qth_power_set(p: u64, q: u64) -> Result<BTreeSet<PrimeFieldElement>> {
    require_prime(p)?;
    require_prime(q)?;
    Ok((1..p).map(|x| PrimeFieldElement::from_raw(p, x).pow(q)).collect())
}

pub fn is_qth_power(p: u64, q: u64, x: PrimeFieldElement) -> Result<bool> {
    require_prime(p)?;
    require_prime(q)?;
    if x.modulus() != p {
        return Err(Error::DomainMismatch { left: format!("F{p}"), right: format!("F{}", x.modulus()) });
    }
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(fp_is_qth_power(x, q))
}

pub(crate) fn fp_is_qth_power(x: PrimeFieldElement, q: u64) -> bool {
    let p = x.modulus();
    if x.is_zero() {
        return true;
    }
    if !(p - 1).is_multiple_of(q) {
        // x ↦ x^q is a bijection on F_p^×
        return true;
    }
    x.pow((p - 1) / q).is_one()
}

/// Smallest representative r with r^q = x, if any.
pub fn fp_qth_root(x: PrimeFieldElement, q: u64) -> Option<PrimeFieldElement> {
    let p = x.modulus();
    if x.is_zero() {
        return Some(x);
    }
    if !fp_is_qth_power(x, q) {
        return None;
    }
    (1..p).map(|r| PrimeFieldElement::from_raw(p, r)).find(|r| r.pow(q) == x)
}

/// Primes p ≤ bound with q | p − 1, ascending.
pub fn dirichlet_primes(q: u64, bound: u64) -> Vec<u64> {
    if q == 0 {
        return Vec::new();
    }
    (2..=bound).filter(|&p| is_prime(p) && (p - 1) % q == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, v: u64) -> PrimeFieldElement {
        PrimeFieldElement::new(p, v).unwrap()
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_qth_root(7, 3).unwrap().value(), 2);
        // 3^5 = 243 = 22·11 + 1, so 3 (not 4) is the smallest
        assert_eq!(primitive_qth_root(11, 5).unwrap().value(), 3);
        assert_eq!(PrimeFieldElement::new(11, 4).unwrap().pow(5).value(), 1);
        assert!(matches!(primitive_qth_root(7, 5), Err(Error::NoPrimitiveRoot { .. })));
        assert!(matches!(primitive_qth_root(8, 7), Err(Error::NotPrime(8))));
    }

    #[test]
    fn power_sets() {
        let vals = |s: BTreeSet<PrimeFieldElement>| s.iter().map(|x| x.value()).collect::<Vec<_>>();
        assert_eq!(vals(qth_power_set(7, 3).unwrap()), vec![1, 6]);
        assert_eq!(vals(qth_power_set(5, 3).unwrap()), vec![1, 2, 3, 4]);
        assert_eq!(vals(qth_power_set(11, 5).unwrap()), vec![1, 10]);
    }

    #[test]
    fn qth_power_membership() {
        assert!(!is_qth_power(7, 3, fp(7, 2)).unwrap());
        assert!(is_qth_power(7, 3, fp(7, 6)).unwrap());
        assert!(is_qth_power(7, 3, fp(7, 1)).unwrap());
        assert!(matches!(is_qth_power(7, 3, fp(7, 0)), Err(Error::ZeroInput)));
    }

    #[test]
    fn qth_power_agrees_with_enumeration() {
        for p in (2..=100).filter(|&p| is_prime(p)) {
            for q in [2u64, 3, 5, 7] {
                let set = qth_power_set(p, q).unwrap();
                let expected = if (p - 1) % q == 0 { (p - 1) / q } else { p - 1 };
                assert_eq!(set.len() as u64, expected, "p={p} q={q}");
                for x in 1..p {
                    let x = fp(p, x);
                    assert_eq!(fp_is_qth_power(x, q), set.contains(&x), "p={p} q={q} x={x}");
                }
            }
        }
    }

    #[test]
    fn roots_of_unity_distinct() {
        for q in [2u64, 3, 5, 7] {
            for p in dirichlet_primes(q, 200) {
                let xi = primitive_qth_root(p, q).unwrap();
                assert!(xi.pow(q).is_one());
                let powers: BTreeSet<_> = (0..q).map(|k| xi.pow(k)).collect();
                assert_eq!(powers.len() as u64, q);
            }
        }
    }

    #[test]
    fn dirichlet() {
        assert_eq!(dirichlet_primes(3, 50), vec![7, 13, 19, 31, 37, 43]);
        assert_eq!(dirichlet_primes(5, 35), vec![11, 31]);
        assert!(dirichlet_primes(3, 6).is_empty());
    }

    #[test]
    fn rational_roots() {
        let r = RationalElement::new(9, 4).unwrap();
        assert_eq!(r.qth_root(2).unwrap(), RationalElement::new(3, 2).unwrap());
        assert!(RationalElement::from_integer(2).qth_root(2).is_none());
        assert!(RationalElement::from_integer(-1).qth_root(2).is_none());
        assert_eq!(
            RationalElement::from_integer(-27).qth_root(3).unwrap(),
            RationalElement::from_integer(-3)
        );
        assert_eq!(RationalElement::new(-3, 4).unwrap().to_string(), "-3/4");
    }

    #[test]
    fn fp_roots_smallest() {
        assert_eq!(fp_qth_root(fp(7, 6), 3).unwrap().value(), 3);
        assert_eq!(fp_qth_root(fp(11, 10), 5).unwrap().value(), 2);
        assert!(fp_qth_root(fp(7, 2), 3).is_none());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rat() -> impl Strategy<Value = RationalElement> {
            (-50i64..50, 1i64..20).prop_map(|(n, d)| RationalElement::new(n, d).unwrap())
        }

        proptest! {
            #[test]
            fn rational_field_axioms(a in rat(), b in rat(), c in rat()) {
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                if !a.is_zero() {
                    prop_assert!((&a * &a.inv().unwrap()).is_one());
                }
                prop_assert!((&a + &(-&a)).is_zero());
            }

            #[test]
            fn fp_inverse(v in 1u64..1009) {
                let x = PrimeFieldElement::from_raw(1009, v);
                prop_assert!((x * x.inv().unwrap()).is_one());
            }
        }
    }
}
