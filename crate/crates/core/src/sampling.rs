//! Seeded random elements of field towers, used by the verification suite
//! and the property tests.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::series::{Domain, Elem, Exponent, Precision, QuadraticElement, Series, ValueGroup};

/// Size limits for sampled elements, applied at every series level.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub min_exp: i64,
    pub max_exp: i64,
    pub max_terms: usize,
    /// Rationals are n/d with |n| ≤ num_bound, 1 ≤ d ≤ den_bound.
    pub num_bound: i64,
    pub den_bound: i64,
    /// Largest k in exponent denominators p^k for Z[1/p] groups.
    pub denom_depth: u32,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { min_exp: 0, max_exp: 4, max_terms: 3, num_bound: 5, den_bound: 3, denom_depth: 1 }
    }
}

impl Shape {
    pub fn exponents(self, min_exp: i64, max_exp: i64) -> Self {
        Shape { min_exp, max_exp, ..self }
    }

    pub fn terms(self, max_terms: usize) -> Self {
        Shape { max_terms, ..self }
    }
}

/// One independent stream per (seed, tag, index), so trials can run in
/// any order and still replay.
pub fn stream(seed: u64, tag: &str, index: u64) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ h);
    rng.set_stream(index);
    rng
}

fn exponent<R: Rng>(rng: &mut R, group: ValueGroup, min: i64, max: i64, depth: u32) -> Exponent {
    match group {
        ValueGroup::Integers => Exponent::integer(rng.gen_range(min..=max)),
        ValueGroup::PDivisible(p) => {
            let k = rng.gen_range(0..=depth);
            let d = (p as i64).pow(k);
            let a = rng.gen_range(min * d..=max * d);
            Exponent::new(a, d).expect("nonzero denominator")
        }
    }
}

/// A nonzero element of the base field (F_p or Q).
fn base_nonzero<R: Rng>(domain: &Domain, rng: &mut R, shape: &Shape) -> Elem {
    match domain {
        Domain::Prime(p) => domain.from_int(rng.gen_range(1..*p) as i64),
        Domain::Rationals => {
            let mut n = 0;
            while n == 0 {
                n = rng.gen_range(-shape.num_bound..=shape.num_bound);
            }
            let d = rng.gen_range(1..=shape.den_bound);
            domain.from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d))).expect("rational")
        }
        _ => unreachable!("base field"),
    }
}

/// A nonzero exact element; series get between one and `max_terms` terms
/// with exponents in `[min_exp, max_exp]`.
pub fn nonzero<R: Rng>(domain: &Domain, rng: &mut R, shape: &Shape) -> Elem {
    match domain {
        Domain::Prime(_) | Domain::Rationals => base_nonzero(domain, rng, shape),
        Domain::Series(sd) => {
            let count = rng.gen_range(1..=shape.max_terms.max(1));
            let mut terms = Vec::with_capacity(count);
            for _ in 0..count {
                let e = exponent(rng, sd.group(), shape.min_exp, shape.max_exp, shape.denom_depth);
                terms.push((e, nonzero(sd.coefficients(), rng, shape)));
            }
            let s = Series::new(sd, terms, Precision::Exact).expect("sampled terms are valid");
            if s.is_empty() {
                // coincident exponents cancelled
                nonzero(domain, rng, shape)
            } else {
                Elem::Series(s)
            }
        }
        Domain::Quadratic(qd) => {
            let (re, im) = match rng.gen_range(0..3) {
                0 => (nonzero(qd.base(), rng, shape), qd.base().zero()),
                1 => (qd.base().zero(), nonzero(qd.base(), rng, shape)),
                _ => (nonzero(qd.base(), rng, shape), nonzero(qd.base(), rng, shape)),
            };
            Elem::Quadratic(Box::new(QuadraticElement::new(domain, re, im).expect("same base")))
        }
    }
}

/// An exact element that is zero with probability `zero_chance`.
pub fn maybe_zero<R: Rng>(domain: &Domain, rng: &mut R, shape: &Shape, zero_chance: f64) -> Elem {
    if rng.gen_bool(zero_chance) {
        domain.zero()
    } else {
        nonzero(domain, rng, shape)
    }
}

/// A series of valuation exactly `v` at the top level (the leading
/// coefficient is a random nonzero element of the coefficient field).
pub fn with_valuation<R: Rng>(domain: &Domain, rng: &mut R, shape: &Shape, v: Exponent) -> Elem {
    let sd = domain.as_series().expect("series domain");
    let lead = nonzero(sd.coefficients(), rng, shape);
    let tail = nonzero(domain, rng, &shape.exponents(1, shape.max_exp.max(1) + 1));
    let tail = tail.as_series().expect("series").shift(v);
    let head = Series::new(sd, [(v, lead)], Precision::Exact).expect("valid exponent");
    let s = if rng.gen_bool(0.3) { head } else { head.try_add(&tail).expect("same domain") };
    Elem::Series(s)
}

/// A top-level unit: valuation 0.
pub fn unit<R: Rng>(domain: &Domain, rng: &mut R, shape: &Shape) -> Elem {
    with_valuation(domain, rng, shape, Exponent::ZERO)
}

/// Nonzero exact tuple of length `n` (at least one entry nonzero).
pub fn nonzero_tuple<R: Rng>(domain: &Domain, rng: &mut R, shape: &Shape, n: usize, zero_chance: f64) -> Vec<Elem> {
    loop {
        let v: Vec<Elem> = (0..n).map(|_| maybe_zero(domain, rng, shape, zero_chance)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}
