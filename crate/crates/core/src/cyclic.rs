//! Cyclic algebras (K/F, σ₀, α) = ⊕ K·X^j with X^q = α and X·b = σ₀(b)·X.
//!
//! Elements are stored over F in the basis u^i X^j, index i + q·j.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kummer::{is_norm, KummerContext, KummerElement, NormDecision};
use crate::linalg::{self, Matrix};
use crate::series::{Domain, Elem, Exponent};
use crate::structure::StructureConstants;

#[derive(Debug)]
pub struct CyclicAlgebra {
    kummer: Arc<KummerContext>,
    alpha: Elem,
}

impl CyclicAlgebra {
    pub fn new(kummer: &Arc<KummerContext>, alpha: Elem) -> Result<Arc<Self>> {
        let alpha = kummer.field().embed(&alpha)?;
        if alpha.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(Arc::new(Self { kummer: kummer.clone(), alpha }))
    }

    pub fn kummer(&self) -> &Arc<KummerContext> {
        &self.kummer
    }

    pub fn field(&self) -> &Domain {
        self.kummer.field()
    }

    pub fn alpha(&self) -> &Elem {
        &self.alpha
    }

    pub fn q(&self) -> usize {
        self.kummer.q() as usize
    }

    /// Dimension q² over F.
    pub fn n(&self) -> usize {
        self.q() * self.q()
    }

    pub fn basis_labels(&self) -> Vec<String> {
        let power = |name: &str, k: usize| match k {
            0 => String::new(),
            1 => name.to_string(),
            _ => format!("{name}^{k}"),
        };
        (0..self.n())
            .map(|idx| {
                let (i, j) = (idx % self.q(), idx / self.q());
                let label = format!("{}{}", power("u", i), power("X", j));
                if label.is_empty() { "1".to_string() } else { label }
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraElement {
    algebra: Arc<CyclicAlgebra>,
    coords: Vec<Elem>,
}

impl AlgebraElement {
    pub fn new(algebra: &Arc<CyclicAlgebra>, coords: Vec<Elem>) -> Result<Self> {
        if coords.len() != algebra.n() {
            return Err(Error::InvalidTuple(format!("expected {} coordinates, got {}", algebra.n(), coords.len())));
        }
        let coords = coords.iter().map(|c| algebra.field().embed(c)).collect::<Result<_>>()?;
        Ok(Self { algebra: algebra.clone(), coords })
    }

    pub fn zero(algebra: &Arc<CyclicAlgebra>) -> Self {
        Self { algebra: algebra.clone(), coords: vec![algebra.field().zero(); algebra.n()] }
    }

    pub fn basis(algebra: &Arc<CyclicAlgebra>, index: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.coords[index] = algebra.field().one();
        e
    }

    pub fn one(algebra: &Arc<CyclicAlgebra>) -> Self {
        Self::basis(algebra, 0)
    }

    /// u^i X^j.
    pub fn monomial(algebra: &Arc<CyclicAlgebra>, i: usize, j: usize) -> Self {
        Self::basis(algebra, i + algebra.q() * j)
    }

    pub fn from_base(algebra: &Arc<CyclicAlgebra>, f: &Elem) -> Result<Self> {
        let mut e = Self::zero(algebra);
        e.coords[0] = algebra.field().embed(f)?;
        Ok(e)
    }

    /// Σ_j parts[j]·X^j with parts in K.
    pub fn from_k_parts(algebra: &Arc<CyclicAlgebra>, parts: &[KummerElement]) -> Result<Self> {
        let q = algebra.q();
        if parts.len() != q {
            return Err(Error::InvalidTuple(format!("expected {q} parts")));
        }
        let mut coords = Vec::with_capacity(algebra.n());
        for part in parts {
            coords.extend(part.coords().iter().cloned());
        }
        Ok(Self { algebra: algebra.clone(), coords })
    }

    /// The coefficient of X^j, an element of K.
    pub fn k_part(&self, j: usize) -> KummerElement {
        let q = self.algebra.q();
        KummerElement::new(self.algebra.kummer(), self.coords[j * q..(j + 1) * q].to_vec())
            .expect("q coordinates from the same field")
    }

    pub fn algebra(&self) -> &Arc<CyclicAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Elem::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) {
            Ok(())
        } else {
            Err(Error::InvalidContext("elements belong to different algebras".into()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        Ok(Self { algebra: self.algebra.clone(), coords })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { algebra: self.algebra.clone(), coords: self.coords.iter().map(Elem::neg).collect() }
    }

    pub fn scale(&self, c: &Elem) -> Result<Self> {
        let coords = self.coords.iter().map(|a| a.try_mul(c)).collect::<Result<_>>()?;
        Ok(Self { algebra: self.algebra.clone(), coords })
    }

    /// Product by the defining relations: (Σ A_j X^j)(Σ B_l X^l) =
    /// Σ A_j σ₀^j(B_l) X^{j+l}, then X^q = α.
    pub fn relation_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let alg = &self.algebra;
        let q = alg.q();
        let mut parts = vec![KummerElement::zero(alg.kummer()); q];
        for j in 0..q {
            let a = self.k_part(j);
            if a.is_zero() {
                continue;
            }
            for l in 0..q {
                let b = other.k_part(l);
                if b.is_zero() {
                    continue;
                }
                let mut prod = a.try_mul(&b.galois_sigma(j as u64)?)?;
                let mut k = j + l;
                if k >= q {
                    prod = prod.scale(&alg.alpha)?;
                    k -= q;
                }
                parts[k] = parts[k].try_add(&prod)?;
            }
        }
        Self::from_k_parts(alg, &parts)
    }

    /// Every coordinate known to vanish below `target`.
    pub fn vanishes_below(&self, target: Exponent) -> bool {
        self.coords.iter().all(|c| match c {
            Elem::Series(s) => {
                s.terms().all(|(e, _)| *e >= target) && s.precision().bound().is_none_or(|b| b >= target)
            }
            other => other.is_zero(),
        })
    }

    pub fn eq_to_precision(&self, other: &Self) -> bool {
        self.coords.iter().zip(&other.coords).all(|(a, b)| a.eq_to_precision(b))
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.algebra.basis_labels();
        let mut first = true;
        for (c, label) in self.coords.iter().zip(&labels) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if label == "1" {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{label}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn structure_constants(algebra: &Arc<CyclicAlgebra>) -> Result<StructureConstants> {
    StructureConstants::from_products(algebra.field(), algebra.basis_labels(), |i, j| {
        let a = AlgebraElement::basis(algebra, i);
        let b = AlgebraElement::basis(algebra, j);
        Ok(a.relation_mul(&b)?.coords)
    })
}

pub fn constants_mul(a: &AlgebraElement, b: &AlgebraElement, constants: &StructureConstants) -> Result<AlgebraElement> {
    a.check(b)?;
    let coords = constants.mul(&a.coords, &b.coords)?;
    Ok(AlgebraElement { algebra: a.algebra.clone(), coords })
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisionCertificate {
    pub division: bool,
    pub norm: NormDecision,
}

/// D is a division algebra iff α is not a norm from K.
pub fn is_division(algebra: &Arc<CyclicAlgebra>) -> Result<DivisionCertificate> {
    let norm = is_norm(algebra.kummer(), &algebra.alpha)?;
    Ok(DivisionCertificate { division: !norm.verdict, norm })
}

/// Matrix of x ↦ d·x; column j holds d·(basis j).
pub fn left_mul_matrix(d: &AlgebraElement) -> Result<Matrix> {
    let n = d.algebra.n();
    let columns = (0..n)
        .map(|j| Ok(d.relation_mul(&AlgebraElement::basis(&d.algebra, j))?.coords))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..n).map(|r| (0..n).map(|c| columns[c][r].clone()).collect()).collect())
}

/// Two-sided inverse, with d·x − 1 and x·d − 1 known to vanish below
/// `target`. The working precision of the solve is raised until both
/// checks pass.
pub fn invert(d: &AlgebraElement, target: Exponent) -> Result<AlgebraElement> {
    if d.is_zero() {
        return Err(Error::ZeroInput);
    }
    let alg = &d.algebra;
    let matrix = left_mul_matrix(d)?;
    let mut rhs = vec![alg.field().zero(); alg.n()];
    rhs[0] = alg.field().one();
    let one = AlgebraElement::one(alg);
    let mut relative = target + Exponent::integer(8);
    for _ in 0..5 {
        let x = linalg::solve(&matrix, &rhs, alg.field(), Some(relative))?;
        let x = AlgebraElement { algebra: alg.clone(), coords: x };
        let right = d.relation_mul(&x)?.try_sub(&one)?;
        let left = x.relation_mul(d)?.try_sub(&one)?;
        if right.vanishes_below(target) && left.vanishes_below(target) {
            return Ok(x);
        }
        if !alg.field().is_valued() {
            return Err(Error::NotInvertible(d.to_string()));
        }
        relative = relative.scale(2);
    }
    Err(Error::InsufficientPrecision(format!("inverse not reached to O(var^{target})")))
}

/// For α = β^q with β ∈ F: (X − β)·(Σ β^{q−1−i} X^i) = X^q − β^q = 0.
pub fn zero_divisor_witness(algebra: &Arc<CyclicAlgebra>, beta: &Elem) -> Result<(AlgebraElement, AlgebraElement)> {
    let q = algebra.q();
    let beta = algebra.field().embed(beta)?;
    if !beta.pow(q as u64).eq_to_precision(algebra.alpha()) || beta.is_zero() {
        return Err(Error::InvalidContext(format!("{beta}^{q} is not α = {}", algebra.alpha())));
    }
    let x = AlgebraElement::monomial(algebra, 0, 1);
    let left = x.try_sub(&AlgebraElement::from_base(algebra, &beta)?)?;
    let mut right = AlgebraElement::zero(algebra);
    for i in 0..q {
        let term = AlgebraElement::monomial(algebra, 0, i).scale(&beta.pow((q - 1 - i) as u64))?;
        right = right.try_add(&term)?;
    }
    Ok((left, right))
}

/// For N(c) = α with c ∈ K: (X − c)·Σ_i P_i X^i = 0, where
/// P_i = σ₀^i(c)·σ₀^{i+1}(c)⋯σ₀^{q−1}(c). No inversion is involved, so the
/// product vanishes to the precision of α − N(c).
pub fn norm_zero_divisors(algebra: &Arc<CyclicAlgebra>, c: &KummerElement) -> Result<(AlgebraElement, AlgebraElement)> {
    let q = algebra.q();
    if c.is_zero() {
        return Err(Error::ZeroInput);
    }
    let kummer = algebra.kummer();
    let zero = KummerElement::zero(kummer);
    let mut left_parts = vec![zero.clone(); q];
    left_parts[0] = c.neg();
    left_parts[1] = KummerElement::one(kummer);
    let mut right_parts = vec![zero; q];
    let mut acc = KummerElement::one(kummer);
    for i in (0..q).rev() {
        acc = c.galois_sigma(i as u64)?.try_mul(&acc)?;
        right_parts[i] = acc.clone();
    }
    Ok((AlgebraElement::from_k_parts(algebra, &left_parts)?, AlgebraElement::from_k_parts(algebra, &right_parts)?))
}

/// Dimension over F of {x : x·u = u·x, x·X = X·x}.
pub fn commutant_dimension(algebra: &Arc<CyclicAlgebra>) -> Result<usize> {
    let n = algebra.n();
    let u = AlgebraElement::monomial(algebra, 1, 0);
    let x = AlgebraElement::monomial(algebra, 0, 1);
    let mut rows: Matrix = vec![Vec::with_capacity(n); 2 * n];
    for j in 0..n {
        let b = AlgebraElement::basis(algebra, j);
        let cu = b.relation_mul(&u)?.try_sub(&u.relation_mul(&b)?)?;
        let cx = b.relation_mul(&x)?.try_sub(&x.relation_mul(&b)?)?;
        for r in 0..n {
            rows[r].push(cu.coords[r].clone());
            rows[n + r].push(cx.coords[r].clone());
        }
    }
    Ok(n - linalg::rank(rows)?)
}

/// Truncates every coordinate to absolute precision `bound` (series fields
/// only; other fields are returned unchanged).
pub fn truncate(d: &AlgebraElement, bound: Exponent) -> AlgebraElement {
    let coords = d
        .coords
        .iter()
        .map(|c| match c {
            Elem::Series(s) => Elem::Series(s.truncate(bound)),
            other => other.clone(),
        })
        .collect();
    AlgebraElement { algebra: d.algebra.clone(), coords }
}

/// Whether the product is known to be nonzero (some coordinate has a known
/// nonzero coefficient). An exact product is decided outright.
pub fn product_is_nonzero(a: &AlgebraElement, b: &AlgebraElement) -> Result<bool> {
    Ok(!a.relation_mul(b)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{self, Shape};

    fn f7() -> Domain {
        Domain::laurent(Domain::prime(7).unwrap(), "t")
    }

    fn algebra(alpha: &str) -> Arc<CyclicAlgebra> {
        let f = f7();
        let k = KummerContext::new(f.clone(), 3, f.variable().unwrap()).unwrap();
        CyclicAlgebra::new(&k, f.parse(alpha).unwrap()).unwrap()
    }

    fn hamilton() -> Arc<CyclicAlgebra> {
        let q = Domain::rationals();
        let k = KummerContext::new(q.clone(), 2, q.from_int(-1)).unwrap();
        CyclicAlgebra::new(&k, q.from_int(-1)).unwrap()
    }

    fn el(alg: &Arc<CyclicAlgebra>, coords: &[i64]) -> AlgebraElement {
        AlgebraElement::new(alg, coords.iter().map(|&c| alg.field().from_int(c)).collect()).unwrap()
    }

    #[test]
    fn relation_examples() {
        let alg = algebra("2");
        let x = AlgebraElement::monomial(&alg, 0, 1);
        let u = AlgebraElement::monomial(&alg, 1, 0);
        // X·u = ξ·uX with ξ = 2
        assert_eq!(x.relation_mul(&u).unwrap().to_string(), "(2)*uX");
        let x2 = AlgebraElement::monomial(&alg, 0, 2);
        assert_eq!(x2.relation_mul(&x).unwrap().to_string(), "(2)");
        let d = AlgebraElement::monomial(&alg, 2, 1).scale(&f7().parse("1 + t").unwrap()).unwrap();
        assert!(AlgebraElement::one(&alg).relation_mul(&d).unwrap().eq_to_precision(&d));
        assert_eq!(alg.basis_labels(), ["1", "u", "u^2", "X", "uX", "u^2X", "X^2", "uX^2", "u^2X^2"]);
    }

    #[test]
    fn constants_examples() {
        let alg = algebra("2");
        let s = structure_constants(&alg).unwrap();
        // u·u = u²
        assert_eq!(s.product_terms(1, 1).len(), 1);
        assert_eq!(s.product_terms(1, 1)[0].0, 2);
        assert!(s.product_terms(1, 1)[0].1.is_one());
        // X·u = ξ·uX
        let terms = s.product_terms(3, 1);
        assert_eq!((terms.len(), terms[0].0, terms[0].1.to_string()), (1, 4, "2".to_string()));
        assert_eq!(s.unit_index(), Some(0));
        assert!(s.associativity_failures().unwrap().is_empty());
    }

    #[test]
    fn hamilton_table() {
        let h = hamilton();
        let s = structure_constants(&h).unwrap();
        // i = u, j = X, k = uX; i² = j² = k² = −1, ij = k, ji = −k
        let check = |i: usize, j: usize, k: usize, c: i64| {
            let terms = s.product_terms(i, j);
            assert_eq!(terms.len(), 1, "{i}·{j}");
            assert_eq!(terms[0].0, k);
            assert!(terms[0].1.eq_to_precision(&h.field().from_int(c)), "{i}·{j}");
        };
        check(1, 1, 0, -1);
        check(2, 2, 0, -1);
        check(3, 3, 0, -1);
        check(1, 2, 3, 1);
        check(2, 1, 3, -1);
        check(2, 3, 1, 1);
        check(3, 1, 2, 1);
    }

    #[test]
    fn hamilton_inverse() {
        let h = hamilton();
        let d = el(&h, &[1, 1, 1, 1]);
        let inv = invert(&d, Exponent::ZERO).unwrap();
        let expected = el(&h, &[1, -1, -1, -1]).scale(&h.field().parse("1/4").unwrap()).unwrap();
        assert!(inv.eq_to_precision(&expected));
    }

    #[test]
    fn x_inverse_is_alpha_inverse_times_x_power() {
        let alg = algebra("2 + t");
        let x = AlgebraElement::monomial(&alg, 0, 1);
        let inv = invert(&x, Exponent::integer(10)).unwrap();
        let alpha_inv = alg.alpha().inv().unwrap();
        let expected = AlgebraElement::monomial(&alg, 0, 2).scale(&alpha_inv).unwrap();
        assert!(inv.eq_to_precision(&expected));
    }

    #[test]
    fn certification_examples() {
        assert!(is_division(&algebra("2")).unwrap().division);
        let c = is_division(&algebra("6")).unwrap();
        assert!(!c.division);
        assert_eq!(c.norm.preimage().unwrap().coords()[0].to_string(), "3");
        let c = is_division(&algebra("t")).unwrap();
        assert!(!c.division);
        assert_eq!(c.norm.preimage().unwrap().to_string(), "[0; 1; 0]");
    }

    #[test]
    fn witness_for_six() {
        let alg = algebra("6");
        let (a, b) = zero_divisor_witness(&alg, &f7().from_int(3)).unwrap();
        assert_eq!(a.to_string(), "(4) + (1)*X");
        assert_eq!(b.to_string(), "(2) + (3)*X + (1)*X^2");
        assert!(a.relation_mul(&b).unwrap().is_zero());
        assert!(zero_divisor_witness(&alg, &f7().from_int(2)).is_err());
        match invert(&a, Exponent::integer(5)) {
            Err(Error::Singular { kernel }) => {
                let k = AlgebraElement::new(&alg, kernel).unwrap();
                assert!(!k.is_zero());
                assert!(a.relation_mul(&k).unwrap().is_zero());
            }
            other => panic!("expected a singular system, got {other:?}"),
        }
    }

    #[test]
    fn witness_for_t() {
        let alg = algebra("t");
        let u = KummerElement::u_power(alg.kummer(), 1);
        let (a, b) = norm_zero_divisors(&alg, &u).unwrap();
        assert!(!a.is_zero() && !b.is_zero());
        assert!(a.relation_mul(&b).unwrap().is_zero());
        assert_eq!(b.to_string(), "(t) + (1)*u^2X + (4)*uX^2");
    }

    #[test]
    fn center_is_the_base_field() {
        assert_eq!(commutant_dimension(&algebra("2")).unwrap(), 1);
        assert_eq!(commutant_dimension(&hamilton()).unwrap(), 1);
    }

    #[test]
    fn random_inverses_in_division_algebra() {
        let alg = algebra("2");
        let shape = Shape::default().exponents(-2, 3);
        for i in 0..10 {
            let mut rng = sampling::stream(3, "cyclic-inverse", i);
            let coords = sampling::nonzero_tuple(alg.field(), &mut rng, &shape, alg.n(), 0.3);
            let d = AlgebraElement::new(&alg, coords).unwrap();
            let target = Exponent::integer(20);
            let inv = invert(&d, target).unwrap();
            assert!(d.relation_mul(&inv).unwrap().try_sub(&AlgebraElement::one(&alg)).unwrap().vanishes_below(target));
        }
    }
}
