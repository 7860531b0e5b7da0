//! Anagram classes of F_q^q: orbits of q-tuples under permutation of
//! positions, split into levels by the weighted sum Σ̃(d) = Σ i·d_i mod q.
//!
//! The norm of b₀ + b₁u + … + b_{q−1}u^{q−1} groups its expansion by these
//! classes, and only classes with coordinate sum ≡ 0 (mod q) survive.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::base_fields::is_prime;
use crate::error::{Error, Result};

pub const SUPPORTED_Q: [u64; 4] = [2, 3, 5, 7];

/// How the integer coefficient of a class in the norm expansion is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum FConvention {
    /// N₀ − N₁.
    #[default]
    LevelDifference,
    /// |An(c)|·(N₀ − N₁). Kept to show it disagrees with direct expansion.
    ScaledByClassSize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnagramClass {
    pub q: u64,
    /// Sorted ascending.
    pub rep: Vec<u64>,
    /// Multiplicity of each distinct entry, in ascending entry order.
    pub multiplicities: Vec<u64>,
    pub class_size: u64,
    /// N_λ = number of class members d with Σ̃(d) = λ.
    pub level_counts: Vec<u64>,
    pub f: i64,
}

impl AnagramClass {
    /// Σ c_i as an integer (not reduced).
    pub fn coordinate_sum(&self) -> u64 {
        self.rep.iter().sum()
    }

    pub fn in_c0(&self) -> bool {
        self.coordinate_sum().is_multiple_of(self.q)
    }

    /// At least two distinct entries.
    pub fn is_mixed(&self) -> bool {
        self.multiplicities.len() > 1
    }
}

fn check_q(q: u64) -> Result<()> {
    if SUPPORTED_Q.contains(&q) {
        Ok(())
    } else {
        Err(Error::UnsupportedQ(q))
    }
}

fn check_tuple(q: u64, d: &[u64]) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if d.len() as u64 != q {
        return Err(Error::InvalidTuple(format!("expected {q} entries, got {}", d.len())));
    }
    if let Some(bad) = d.iter().find(|&&x| x >= q) {
        return Err(Error::InvalidTuple(format!("entry {bad} is outside 0..{q}")));
    }
    Ok(())
}

pub fn tilde_sigma(q: u64, d: &[u64]) -> Result<u64> {
    check_tuple(q, d)?;
    Ok(weighted_sum(q, d))
}

fn weighted_sum(q: u64, d: &[u64]) -> u64 {
    d.iter().enumerate().map(|(i, &x)| i as u64 * x).sum::<u64>() % q
}

/// Rearranges `v` into the next lexicographic permutation; false when
/// `v` was the last one.
fn next_permutation(v: &mut [u64]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

pub fn coefficient_f(class: &AnagramClass, convention: FConvention) -> i64 {
    let diff = class.level_counts[0] as i64 - class.level_counts[1] as i64;
    match convention {
        FConvention::LevelDifference => diff,
        FConvention::ScaledByClassSize => class.class_size as i64 * diff,
    }
}

/// The class of `d`, with level counts from enumerating its distinct
/// permutations.
pub fn class_of(q: u64, d: &[u64]) -> Result<AnagramClass> {
    check_tuple(q, d)?;
    let mut rep = d.to_vec();
    rep.sort_unstable();
    let mut multiplicities = Vec::new();
    for run in rep.chunk_by(|a, b| a == b) {
        multiplicities.push(run.len() as u64);
    }
    let mut level_counts = vec![0u64; q as usize];
    let mut perm = rep.clone();
    loop {
        level_counts[weighted_sum(q, &perm) as usize] += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let class_size = factorial(q) / multiplicities.iter().map(|&l| factorial(l)).product::<u64>();
    let mut class = AnagramClass { q, rep, multiplicities, class_size, level_counts, f: 0 };
    class.f = coefficient_f(&class, FConvention::LevelDifference);
    Ok(class)
}

/// Ascending multisets of size q over {0, …, q−1}, lexicographic order.
fn multisets(q: u64) -> Vec<Vec<u64>> {
    fn go(q: u64, start: u64, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if current.len() as u64 == q {
            out.push(current.clone());
            return;
        }
        for x in start..q {
            current.push(x);
            go(q, x, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(q, 0, &mut Vec::new(), &mut out);
    out
}

pub fn all_classes(q: u64) -> Result<Vec<AnagramClass>> {
    check_q(q)?;
    multisets(q).par_iter().map(|rep| class_of(q, rep)).collect()
}

pub fn c0_classes(q: u64) -> Result<Vec<AnagramClass>> {
    Ok(all_classes(q)?.into_iter().filter(AnagramClass::in_c0).collect())
}

/// One monomial coefficient·t^{t_power}·Π b_i^{exponents[i]} of the norm.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct NormMonomial {
    pub exponents: Vec<u64>,
    pub t_power: u64,
    pub coefficient: i64,
}

/// The norm of b₀ + b₁u + … + b_{q−1}u^{q−1} as a polynomial in the b_i
/// and t, read off the C₀ classes. Monomials with zero coefficient are
/// dropped; the result is sorted.
pub fn norm_polynomial(q: u64, convention: FConvention) -> Result<Vec<NormMonomial>> {
    let mut out: Vec<NormMonomial> = c0_classes(q)?
        .iter()
        .map(|c| {
            let mut exponents = vec![0; q as usize];
            for &i in &c.rep {
                exponents[i as usize] += 1;
            }
            NormMonomial { exponents, t_power: c.coordinate_sum() / q, coefficient: coefficient_f(c, convention) }
        })
        .filter(|m| m.coefficient != 0)
        .collect();
    out.sort();
    Ok(out)
}

/// Level counts for every class by scanning all q^q tuples; independent
/// of the permutation enumeration in [`class_of`].
pub fn level_counts_by_scan(q: u64) -> Result<BTreeMap<Vec<u64>, Vec<u64>>> {
    check_q(q)?;
    let total = q.pow(q as u32);
    let mut out: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new();
    let mut d = vec![0u64; q as usize];
    for mut code in 0..total {
        for x in d.iter_mut() {
            *x = code % q;
            code /= q;
        }
        let level = weighted_sum(q, &d) as usize;
        let mut key = d.clone();
        key.sort_unstable();
        out.entry(key).or_insert_with(|| vec![0; q as usize])[level] += 1;
    }
    Ok(out)
}

/// d ↦ d^{σ_ν}, (d^{σ_ν})_i = d_{νi mod q}. Sends level λ to ν⁻¹λ.
pub fn reindex(q: u64, d: &[u64], nu: u64) -> Vec<u64> {
    (0..q).map(|i| d[((nu * i) % q) as usize]).collect()
}

/// d ↦ (d₁, …, d_{q−1}, d₀). Changes Σ̃ by −Σ d_i.
pub fn cyclic_shift(d: &[u64]) -> Vec<u64> {
    let mut out = d[1..].to_vec();
    out.push(d[0]);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassCheck {
    pub rep: Vec<u64>,
    pub problems: Vec<String>,
}

impl ClassCheck {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Checks every class for q: the nonzero levels are equally populated;
/// for mixed classes N₀ = N₁ exactly when the coordinate sum is nonzero
/// mod q; the counts match a full tuple scan; q | N₀ on mixed C₀ classes
/// (translation acts freely on level 0) and N_λ = (q−1)!/∏l_i! off C₀.
pub fn verify_level_symmetry(q: u64) -> Result<Vec<ClassCheck>> {
    let classes = all_classes(q)?;
    let scanned = level_counts_by_scan(q)?;
    let mut total = 0;
    let checks = classes
        .iter()
        .map(|c| {
            total += c.class_size;
            let mut problems = Vec::new();
            let n = &c.level_counts;
            if scanned.get(&c.rep) != Some(n) {
                problems.push(format!("permutation counts {n:?} differ from tuple scan {:?}", scanned.get(&c.rep)));
            }
            if n.iter().sum::<u64>() != c.class_size {
                problems.push(format!("levels sum to {} but the class has {} members", n.iter().sum::<u64>(), c.class_size));
            }
            if n[1..].iter().any(|&x| x != n[1]) {
                problems.push(format!("nonzero levels differ: {:?}", &n[1..]));
            }
            if c.is_mixed() {
                let sum_nonzero = !c.in_c0();
                if (n[0] == n[1]) != sum_nonzero {
                    problems.push(format!("N0 = {}, N1 = {} but coordinate sum {}", n[0], n[1], c.coordinate_sum()));
                }
                if c.in_c0() && n[0] % q != 0 {
                    problems.push(format!("q = {q} does not divide N0 = {}", n[0]));
                }
                if !c.in_c0() {
                    let expected = factorial(q - 1) / c.multiplicities.iter().map(|&l| factorial(l)).product::<u64>();
                    if n.iter().any(|&x| x != expected) {
                        problems.push(format!("expected every level to hold {expected}, got {n:?}"));
                    }
                }
            }
            if c.in_c0() && c.f == 0 {
                problems.push("f vanishes on a class with zero coordinate sum".into());
            }
            ClassCheck { rep: c.rep.clone(), problems }
        })
        .collect::<Vec<_>>();
    if total != q.pow(q as u32) {
        return Err(Error::InvalidTuple(format!("classes cover {total} tuples, expected {}", q.pow(q as u32))));
    }
    Ok(checks)
}

/// Mixed C₀ classes where q(q−1) does not divide N₀, as (rep, N₀).
///
/// Translation and scaling both act on level 0, but scaling need not act
/// freely (a tuple with d_i = d_{−i} is fixed by ν = −1), so the stronger
/// divisibility fails from q = 5 on; e.g. (0,0,1,1,3) has N₀ = 10.
pub fn zero_level_divisibility_failures(q: u64) -> Result<Vec<(Vec<u64>, u64)>> {
    Ok(all_classes(q)?
        .into_iter()
        .filter(|c| c.is_mixed() && c.in_c0() && c.level_counts[0] % (q * (q - 1)) != 0)
        .map(|c| (c.rep, c.level_counts[0]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn norm_polynomial_small_degrees() {
        let m = |e: &[u64], t: u64, c: i64| NormMonomial { exponents: e.to_vec(), t_power: t, coefficient: c };
        let mut two = vec![m(&[2, 0], 0, 1), m(&[0, 2], 1, -1)];
        two.sort();
        assert_eq!(norm_polynomial(2, FConvention::LevelDifference).unwrap(), two);
        let mut three = vec![m(&[3, 0, 0], 0, 1), m(&[0, 3, 0], 1, 1), m(&[0, 0, 3], 2, 1), m(&[1, 1, 1], 1, -3)];
        three.sort();
        assert_eq!(norm_polynomial(3, FConvention::LevelDifference).unwrap(), three);
        assert_ne!(norm_polynomial(3, FConvention::ScaledByClassSize).unwrap(), three);
    }

    #[test]
    fn tilde_sigma_examples() {
        assert_eq!(tilde_sigma(3, &[0, 1, 2]).unwrap(), 2);
        assert_eq!(tilde_sigma(2, &[1, 1]).unwrap(), 1);
        assert_eq!(tilde_sigma(5, &[0; 5]).unwrap(), 0);
        assert!(tilde_sigma(3, &[0, 1]).is_err());
        assert!(tilde_sigma(3, &[0, 1, 3]).is_err());
    }

    #[test]
    fn class_examples() {
        let c = class_of(3, &[2, 1, 0]).unwrap();
        assert_eq!(c.rep, vec![0, 1, 2]);
        assert_eq!(c.class_size, 6);
        assert_eq!(c.level_counts, vec![0, 3, 3]);
        assert_eq!(c.f, -3);
        let c = class_of(3, &[0, 0, 1]).unwrap();
        assert_eq!((c.class_size, c.level_counts.clone()), (3, vec![1, 1, 1]));
        let c = class_of(2, &[1, 1]).unwrap();
        assert_eq!((c.class_size, c.level_counts.clone(), c.f), (1, vec![0, 1], -1));
        assert_eq!(class_of(3, &[1, 1, 1]).unwrap().f, 1);
    }

    #[test]
    fn scaled_convention_differs() {
        let c = class_of(3, &[0, 1, 2]).unwrap();
        assert_eq!(coefficient_f(&c, FConvention::ScaledByClassSize), -18);
    }

    #[test]
    fn c0_listing() {
        let reps = |q| c0_classes(q).unwrap().into_iter().map(|c| c.rep).collect::<Vec<_>>();
        assert_eq!(reps(3), vec![vec![0, 0, 0], vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]]);
        assert_eq!(reps(2), vec![vec![0, 0], vec![1, 1]]);
        assert!(c0_classes(5).unwrap().iter().all(|c| c.coordinate_sum() % 5 == 0));
        assert_eq!(all_classes(3).unwrap().len(), 10);
        assert!(matches!(all_classes(11), Err(Error::UnsupportedQ(11))));
    }

    #[test]
    fn level_symmetry_small_q() {
        for q in [2, 3, 5] {
            let checks = verify_level_symmetry(q).unwrap();
            assert!(checks.iter().all(ClassCheck::passed), "{checks:?}");
        }
        let c = class_of(3, &[0, 1, 2]).unwrap();
        assert_eq!(c.level_counts[0] % 6, 0);
    }

    #[test]
    fn zero_level_divisibility_by_q_times_q_minus_one() {
        assert!(zero_level_divisibility_failures(2).unwrap().is_empty());
        assert!(zero_level_divisibility_failures(3).unwrap().is_empty());
        let failures = zero_level_divisibility_failures(5).unwrap();
        assert!(failures.contains(&(vec![0, 0, 1, 1, 3], 10)));
        // hand count: (3,0,1,1,0) is one of the ten level-0 arrangements and
        // is fixed by i ↦ −i
        let d = [3, 0, 1, 1, 0];
        assert_eq!(tilde_sigma(5, &d).unwrap(), 0);
        assert_eq!(reindex(5, &d, 4), d.to_vec());
    }

    proptest! {
        #[test]
        fn reindexing_scales_levels(q in prop::sample::select(vec![3u64, 5, 7]), seed in prop::collection::vec(0u64..7, 7), nu in 1u64..7) {
            let nu = nu % q;
            prop_assume!(nu != 0);
            let d: Vec<u64> = seed.iter().take(q as usize).map(|x| x % q).collect();
            let lambda = weighted_sum(q, &d);
            let moved = weighted_sum(q, &reindex(q, &d, nu));
            // ν · Σ̃(d^{σ_ν}) = Σ̃(d)
            prop_assert_eq!((nu * moved) % q, lambda);
        }

        #[test]
        fn shift_changes_level_by_sum(q in prop::sample::select(vec![2u64, 3, 5, 7]), seed in prop::collection::vec(0u64..7, 7)) {
            let d: Vec<u64> = seed.iter().take(q as usize).map(|x| x % q).collect();
            let sum: u64 = d.iter().sum();
            let before = weighted_sum(q, &d);
            let after = weighted_sum(q, &cyclic_shift(&d));
            prop_assert_eq!((after + sum) % q, before);
        }
    }
}
