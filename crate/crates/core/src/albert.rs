//! Quaternion algebras (u, v / F), biquaternion tensor products and the
//! Albert quadratic form, with sampled anisotropy checks over towers
//! rooted at Q.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling::{self, Shape};
use crate::series::{is_square_in_tower, Domain, Elem, Exponent};
use crate::structure::StructureConstants;

pub const QUATERNION_LABELS: [&str; 4] = ["1", "i", "j", "ij"];

/// i² = u, j² = v, ij = −ji.
#[derive(Debug)]
pub struct QuaternionAlgebra {
    field: Domain,
    u: Elem,
    v: Elem,
}

impl QuaternionAlgebra {
    pub fn new(field: &Domain, u: &Elem, v: &Elem) -> Result<Arc<Self>> {
        if field.characteristic() == 2 {
            return Err(Error::CharacteristicEqualsQ(2));
        }
        let (u, v) = (field.embed(u)?, field.embed(v)?);
        if u.is_zero() || v.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(Arc::new(Self { field: field.clone(), u, v }))
    }

    pub fn field(&self) -> &Domain {
        &self.field
    }

    pub fn u(&self) -> &Elem {
        &self.u
    }

    pub fn v(&self) -> &Elem {
        &self.v
    }
}

/// a + b·i + c·j + d·ij.
#[derive(Clone, Debug)]
pub struct Quaternion {
    algebra: Arc<QuaternionAlgebra>,
    coords: [Elem; 4],
}

impl Quaternion {
    pub fn new(algebra: &Arc<QuaternionAlgebra>, coords: [Elem; 4]) -> Result<Self> {
        let f = &algebra.field;
        let [a, b, c, d] = coords;
        let coords = [f.embed(&a)?, f.embed(&b)?, f.embed(&c)?, f.embed(&d)?];
        Ok(Self { algebra: algebra.clone(), coords })
    }

    pub fn basis(algebra: &Arc<QuaternionAlgebra>, k: usize) -> Self {
        let f = &algebra.field;
        let coords = std::array::from_fn(|i| if i == k { f.one() } else { f.zero() });
        Self { algebra: algebra.clone(), coords }
    }

    pub fn algebra(&self) -> &Arc<QuaternionAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[Elem; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Elem::is_zero)
    }

    pub fn conjugate(&self) -> Self {
        let [a, b, c, d] = &self.coords;
        Self { algebra: self.algebra.clone(), coords: [a.clone(), b.neg(), c.neg(), d.neg()] }
    }

    pub fn scale(&self, s: &Elem) -> Result<Self> {
        let [a, b, c, d] = &self.coords;
        Ok(Self { algebra: self.algebra.clone(), coords: [a.try_mul(s)?, b.try_mul(s)?, c.try_mul(s)?, d.try_mul(s)?] })
    }

    /// Inverse via the conjugate: x⁻¹ = x̄ / Nrd(x).
    pub fn inv(&self) -> Result<Self> {
        let n = reduced_norm(self);
        if n.is_zero() {
            return Err(Error::NotInvertible(self.to_string()));
        }
        self.conjugate().scale(&n.inv()?)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .zip(QUATERNION_LABELS)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| if l == "1" { format!("({c})") } else { format!("({c})*{l}") })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn quat_mul(x: &Quaternion, y: &Quaternion) -> Result<Quaternion> {
    if !Arc::ptr_eq(&x.algebra, &y.algebra) {
        return Err(Error::InvalidContext("quaternions from different algebras".into()));
    }
    let (u, v) = (&x.algebra.u, &x.algebra.v);
    let uv = u.try_mul(v)?;
    let [a, b, c, d] = &x.coords;
    let [a2, b2, c2, d2] = &y.coords;
    let m = |p: &Elem, q: &Elem| p.try_mul(q);
    let one = m(a, a2)? + m(u, &m(b, b2)?)? + m(v, &m(c, c2)?)? - m(&uv, &m(d, d2)?)?;
    let i = m(a, b2)? + m(b, a2)? - m(v, &m(c, d2)?)? + m(v, &m(d, c2)?)?;
    let j = m(a, c2)? + m(c, a2)? + m(u, &m(b, d2)?)? - m(u, &m(d, b2)?)?;
    let k = m(a, d2)? + m(d, a2)? + m(b, c2)? - m(c, b2)?;
    Ok(Quaternion { algebra: x.algebra.clone(), coords: [one, i, j, k] })
}

/// a² − u·b² − v·c² + uv·d².
pub fn reduced_norm(x: &Quaternion) -> Elem {
    let (u, v) = (&x.algebra.u, &x.algebra.v);
    let [a, b, c, d] = &x.coords;
    &(&(a * a) - &(u * &(b * b))) - &(&(v * &(c * c)) - &(&(u * v) * &(d * d)))
}

/// D₁ ⊗_F D₂ in the basis e_s ⊗ f_t, index 4s + t.
#[derive(Debug)]
pub struct BiquaternionAlgebra {
    d1: Arc<QuaternionAlgebra>,
    d2: Arc<QuaternionAlgebra>,
    constants: StructureConstants,
}

impl BiquaternionAlgebra {
    pub fn d1(&self) -> &Arc<QuaternionAlgebra> {
        &self.d1
    }

    pub fn d2(&self) -> &Arc<QuaternionAlgebra> {
        &self.d2
    }

    pub fn field(&self) -> &Domain {
        self.d1.field()
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Result<Vec<Elem>> {
        self.constants.mul(a, b)
    }

    pub fn unit(&self) -> Vec<Elem> {
        let mut e = vec![self.field().zero(); 16];
        e[0] = self.field().one();
        e
    }
}

pub fn tensor_labels() -> Vec<String> {
    let second = ["1", "i'", "j'", "i'j'"];
    let mut labels = Vec::with_capacity(16);
    for s in QUATERNION_LABELS {
        for t in second {
            labels.push(format!("{s}⊗{t}"));
        }
    }
    labels
}

pub fn tensor_product(d1: &Arc<QuaternionAlgebra>, d2: &Arc<QuaternionAlgebra>) -> Result<BiquaternionAlgebra> {
    if d1.field() != d2.field() {
        return Err(Error::DomainMismatch { left: d1.field().to_string(), right: d2.field().to_string() });
    }
    let field = d1.field().clone();
    let e: Vec<Quaternion> = (0..4).map(|s| Quaternion::basis(d1, s)).collect();
    let f: Vec<Quaternion> = (0..4).map(|t| Quaternion::basis(d2, t)).collect();
    let constants = StructureConstants::from_products(&field, tensor_labels(), |a, b| {
        let left = quat_mul(&e[a / 4], &e[b / 4])?;
        let right = quat_mul(&f[a % 4], &f[b % 4])?;
        let mut out = Vec::with_capacity(16);
        for x in &left.coords {
            for y in &right.coords {
                out.push(x.try_mul(y)?);
            }
        }
        Ok(out)
    })?;
    Ok(BiquaternionAlgebra { d1: d1.clone(), d2: d2.clone(), constants })
}

/// Σ c_k a_k².
#[derive(Clone, Debug)]
pub struct AlbertForm {
    coefficients: [Elem; 6],
}

impl AlbertForm {
    pub fn new(coefficients: [Elem; 6]) -> Result<Self> {
        if coefficients.iter().any(Elem::is_zero) {
            return Err(Error::ZeroInput);
        }
        Ok(Self { coefficients })
    }

    pub fn coefficients(&self) -> &[Elem; 6] {
        &self.coefficients
    }

    /// Evaluates at a tuple over the coefficient field or an extension of it.
    pub fn evaluate(&self, a: &[Elem]) -> Result<Elem> {
        if a.len() != 6 {
            return Err(Error::InvalidTuple(format!("expected 6 entries, got {}", a.len())));
        }
        let domain = a[0].domain();
        let mut sum = domain.zero();
        for (c, x) in self.coefficients.iter().zip(a) {
            let c = domain.embed(c)?;
            let x = domain.embed(x)?;
            sum = sum.try_add(&c.try_mul(&x.try_mul(&x)?)?)?;
        }
        Ok(sum)
    }
}

impl fmt::Display for AlbertForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(|c| c.to_string()).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

/// (u, v, −uv, −u′, −v′, u′v′).
pub fn albert_form(d1: &QuaternionAlgebra, d2: &QuaternionAlgebra) -> Result<AlbertForm> {
    if d1.field() != d2.field() {
        return Err(Error::DomainMismatch { left: d1.field().to_string(), right: d2.field().to_string() });
    }
    AlbertForm::new([
        d1.u.clone(),
        d1.v.clone(),
        d1.u.try_mul(&d1.v)?.neg(),
        d2.u.neg(),
        d2.v.neg(),
        d2.u.try_mul(&d2.v)?,
    ])
}

/// The pair (X, −1 / F), (−X, Y / F) over F = Q((X))((Y)) (or any tower
/// whose two outermost variables play the roles of X and Y).
pub fn standard_pair(field: &Domain) -> Result<(Arc<QuaternionAlgebra>, Arc<QuaternionAlgebra>)> {
    let (x, y) = outer_variables(field)?;
    let d1 = QuaternionAlgebra::new(field, &x, &field.from_int(-1))?;
    let d2 = QuaternionAlgebra::new(field, &x.neg(), &y)?;
    Ok((d1, d2))
}

/// (X, Y) for a two-level tower ·((X))((Y)), both embedded at the top.
fn outer_variables(field: &Domain) -> Result<(Elem, Elem)> {
    let top = field.as_series().ok_or_else(|| Error::Unsupported(format!("{field} is not a series field")))?;
    let inner = top.coefficients();
    if inner.as_series().is_none() {
        return Err(Error::Unsupported(format!("{field} needs two series levels")));
    }
    Ok((field.embed(&inner.variable()?)?, field.variable()?))
}

#[derive(Clone, Debug, Serialize)]
pub struct AnisotropyReport {
    pub trials: usize,
    pub failures: usize,
    /// Nonzero tuples on which the form vanished.
    pub counterexamples: Vec<Vec<String>>,
    pub extension: Option<String>,
}

pub fn anisotropy_shape() -> Shape {
    Shape::default().exponents(-2, 3).terms(3)
}

/// Evaluates the form on `trials` random nonzero exact 6-tuples over
/// `field`. Trial i draws from stream (seed, "albert-anisotropy", i).
pub fn anisotropy_sample_test(phi: &AlbertForm, field: &Domain, trials: usize, seed: u64) -> Result<AnisotropyReport> {
    let shape = anisotropy_shape();
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::stream(seed, "albert-anisotropy", i as u64);
            let a = sampling::nonzero_tuple(field, &mut rng, &shape, 6, 0.3);
            let value = phi.evaluate(&a)?;
            Ok(value.is_zero().then(|| a.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
        })
        .collect::<Result<Vec<_>>>()?;
    let counterexamples: Vec<_> = outcomes.into_iter().flatten().collect();
    Ok(AnisotropyReport {
        trials,
        failures: counterexamples.len(),
        counterexamples,
        extension: field.as_quadratic().map(|_| field.to_string()),
    })
}

/// Leading data of s = Σ xᵢ² in Q((X))((Y)).
#[derive(Clone, Debug)]
pub struct SosLeadingData {
    pub sum: Elem,
    pub valuation_y: Exponent,
    pub ac_y: Elem,
    pub valuation_x: Exponent,
    pub ac_x: Elem,
}

impl SosLeadingData {
    /// Violations of: v_Y(s) even, v_X(ac_Y(s)) even, ac_X(ac_Y(s)) > 0.
    pub fn violations(&self) -> Vec<String> {
        let even = |e: &Exponent| e.is_integer() && e.numer() % 2 == 0;
        let mut out = Vec::new();
        if !even(&self.valuation_y) {
            out.push(format!("v_Y = {} is odd", self.valuation_y));
        }
        if !even(&self.valuation_x) {
            out.push(format!("v_X(ac_Y) = {} is odd", self.valuation_x));
        }
        if self.ac_x.ordered_sign().ok() != Some(std::cmp::Ordering::Greater) {
            out.push(format!("leading rational {} is not positive", self.ac_x));
        }
        out
    }
}

pub fn sos_leading_data(summands: &[Elem]) -> Result<SosLeadingData> {
    let first = summands.first().ok_or(Error::ZeroInput)?;
    let domain = first.domain();
    let mut sum = domain.zero();
    for x in summands {
        if !x.is_exact() {
            return Err(Error::InsufficientPrecision("summands must be exact".into()));
        }
        sum = sum.try_add(&x.try_mul(x)?)?;
    }
    if sum.is_zero() {
        return Err(Error::ZeroInput);
    }
    let leading = |e: &Elem| -> Result<(Exponent, Elem)> {
        let s = e.as_series().ok_or_else(|| Error::Unsupported(format!("{} is not a series field", e.domain())))?;
        let v = s.valuation()?.ok_or(Error::ZeroInput)?;
        Ok((v, s.angular_component()?))
    };
    let (valuation_y, ac_y) = leading(&sum)?;
    let (valuation_x, ac_x) = leading(&ac_y)?;
    Ok(SosLeadingData { sum, valuation_y, ac_y, valuation_x, ac_x })
}

#[derive(Clone, Debug)]
pub struct NonsquareWitness {
    /// 2 + 2X², the numerator of 1/(1−X)² + 1/(1+X)² over (1−X²)².
    pub element: Elem,
    pub is_square: bool,
}

/// 2 + 2X² = (1+X)² + (1−X)² in the innermost series level over Q,
/// embedded at the top of `field`.
pub fn nonsquare_witness(field: &Domain) -> Result<NonsquareWitness> {
    if !field.is_rooted_at_rationals() {
        return Err(Error::Unsupported(format!("{field} is not rooted at Q")));
    }
    let inner = field
        .tower()
        .into_iter()
        .find(|d| d.as_series().is_some())
        .ok_or_else(|| Error::Unsupported(format!("{field} has no series level")))?;
    let x = field.embed(&inner.variable()?)?;
    let one = field.one();
    let plus = one.try_add(&x)?;
    let minus = one.try_sub(&x)?;
    let element = plus.try_mul(&plus)?.try_add(&minus.try_mul(&minus)?)?;
    let is_square = is_square_in_tower(&element)?;
    Ok(NonsquareWitness { element, is_square })
}

/// F(g) with g² = 2 + 2X².
pub fn nonsquare_extension(field: &Domain) -> Result<Domain> {
    let w = nonsquare_witness(field)?;
    Domain::quadratic(field.clone(), "g", w.element)
}
