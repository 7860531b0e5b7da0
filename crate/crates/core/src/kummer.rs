//! Kummer extensions K = F(u), u^q = t, their Galois action and norm.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::anagram::{c0_classes, coefficient_f, FConvention};
use crate::base_fields::is_prime;
use crate::error::{Error, Result};
use crate::series::{Domain, Elem, Exponent};

/// One surviving class of the norm expansion: its multiset of indices and
/// integer coefficient.
#[derive(Clone, Debug)]
struct NormTerm {
    rep: Vec<u64>,
    f: i64,
}

#[derive(Debug)]
pub struct KummerContext {
    field: Domain,
    q: u64,
    t: Elem,
    xi: Elem,
    xi_powers: Vec<Elem>,
    terms: Vec<NormTerm>,
    scaled_terms: Vec<NormTerm>,
}

impl KummerContext {
    /// Validates the data: q prime and not the characteristic, F containing
    /// a primitive q-th root of unity, and t generating a degree-q
    /// extension. Over a series field the last condition is checked as
    /// coset separation of v(t); over Q or F_p, as t not being a q-th power.
    pub fn new(field: Domain, q: u64, t: Elem) -> Result<Arc<Self>> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if field.characteristic() == q {
            return Err(Error::CharacteristicEqualsQ(q));
        }
        let t = field.embed(&t)?;
        if t.is_zero() {
            return Err(Error::ZeroInput);
        }
        match &field {
            Domain::Series(sd) => {
                let v = t.as_series().expect("series").valuation()?.ok_or(Error::ZeroInput)?;
                if !sd.group().is_coset_separating(&v, q)? {
                    return Err(Error::InvalidContext(format!(
                        "v(t) = {v} lies in {q}·{}; the cosets are not distinct",
                        sd.group()
                    )));
                }
            }
            Domain::Prime(_) | Domain::Rationals => {
                if t.is_qth_power(q)? {
                    return Err(Error::InvalidContext(format!("t = {t} is a {q}-th power in {field}")));
                }
            }
            Domain::Quadratic(_) => return Err(Error::Unsupported("Kummer extensions of a quadratic extension".into())),
        }
        let xi = field.primitive_qth_root(q)?;
        let xi_powers = (0..q).map(|k| xi.pow(k)).collect();
        let classes = c0_classes(q)?;
        let terms = classes.iter().map(|c| NormTerm { rep: c.rep.clone(), f: c.f }).collect();
        let scaled_terms = classes
            .iter()
            .map(|c| NormTerm { rep: c.rep.clone(), f: coefficient_f(c, FConvention::ScaledByClassSize) })
            .collect();
        Ok(Arc::new(Self { field, q, t, xi, xi_powers, terms, scaled_terms }))
    }

    pub fn field(&self) -> &Domain {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn t(&self) -> &Elem {
        &self.t
    }

    pub fn xi(&self) -> &Elem {
        &self.xi
    }

    /// ξ^k for any integer k.
    pub fn xi_pow(&self, k: u64) -> &Elem {
        &self.xi_powers[(k % self.q) as usize]
    }

    /// N(u) = (−1)^{q−1}·t.
    pub fn norm_of_u(&self) -> Elem {
        if self.q == 2 {
            self.t.neg()
        } else {
            self.t.clone()
        }
    }
}

#[derive(Clone, Debug)]
pub struct KummerElement {
    ctx: Arc<KummerContext>,
    coords: Vec<Elem>,
}

impl KummerElement {
    pub fn new(ctx: &Arc<KummerContext>, coords: Vec<Elem>) -> Result<Self> {
        if coords.len() as u64 != ctx.q {
            return Err(Error::InvalidTuple(format!("expected {} coordinates, got {}", ctx.q, coords.len())));
        }
        let coords = coords.iter().map(|c| ctx.field.embed(c)).collect::<Result<_>>()?;
        Ok(Self { ctx: ctx.clone(), coords })
    }

    /// b embedded as (b, 0, …, 0).
    pub fn from_base(ctx: &Arc<KummerContext>, b: Elem) -> Result<Self> {
        let mut coords = vec![ctx.field.zero(); ctx.q as usize];
        coords[0] = ctx.field.embed(&b)?;
        Ok(Self { ctx: ctx.clone(), coords })
    }

    /// u^i for 0 ≤ i < q.
    pub fn u_power(ctx: &Arc<KummerContext>, i: usize) -> Self {
        let mut coords = vec![ctx.field.zero(); ctx.q as usize];
        coords[i] = ctx.field.one();
        Self { ctx: ctx.clone(), coords }
    }

    pub fn zero(ctx: &Arc<KummerContext>) -> Self {
        Self { ctx: ctx.clone(), coords: vec![ctx.field.zero(); ctx.q as usize] }
    }

    pub fn one(ctx: &Arc<KummerContext>) -> Self {
        Self::u_power(ctx, 0)
    }

    pub fn context(&self) -> &Arc<KummerContext> {
        &self.ctx
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Elem::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::InvalidContext("elements belong to different Kummer contexts".into()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        Ok(Self { ctx: self.ctx.clone(), coords })
    }

    pub fn neg(&self) -> Self {
        Self { ctx: self.ctx.clone(), coords: self.coords.iter().map(Elem::neg).collect() }
    }

    pub fn scale(&self, c: &Elem) -> Result<Self> {
        let coords = self.coords.iter().map(|a| a.try_mul(c)).collect::<Result<_>>()?;
        Ok(Self { ctx: self.ctx.clone(), coords })
    }

    /// Product with u^i·u^j reduced by u^q = t.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let q = self.ctx.q as usize;
        let mut low = vec![self.ctx.field.zero(); q];
        let mut high = vec![self.ctx.field.zero(); q];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a.try_mul(b)?;
                let k = i + j;
                if k < q {
                    low[k] = low[k].try_add(&prod)?;
                } else {
                    high[k - q] = high[k - q].try_add(&prod)?;
                }
            }
        }
        for (k, h) in high.iter().enumerate() {
            if !h.is_zero() {
                low[k] = low[k].try_add(&h.try_mul(&self.ctx.t)?)?;
            }
        }
        Ok(Self { ctx: self.ctx.clone(), coords: low })
    }

    /// σ₀^k: b_i ↦ ξ^{ik}·b_i.
    pub fn galois_sigma(&self, k: u64) -> Result<Self> {
        if k >= self.ctx.q {
            return Err(Error::OutOfRange { index: k as usize, bound: self.ctx.q as usize });
        }
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, b)| b.try_mul(self.ctx.xi_pow(i as u64 * k)))
            .collect::<Result<_>>()?;
        Ok(Self { ctx: self.ctx.clone(), coords })
    }

    /// The product of all conjugates. Its u-coordinates must vanish; a
    /// known nonzero coefficient there is reported as an error.
    pub fn norm_oracle(&self) -> Result<Elem> {
        let mut acc = self.clone();
        for k in 1..self.ctx.q {
            acc = acc.try_mul(&self.galois_sigma(k)?)?;
        }
        for (index, c) in acc.coords.iter().enumerate().skip(1) {
            if !c.is_zero() {
                return Err(Error::NormNotInBase { index, value: c.to_string() });
            }
        }
        Ok(acc.coords[0].clone())
    }

    /// Σ_{c ∈ C₀} f(c)·b_{c₀}⋯b_{c_{q−1}}·t^{Σc/q}.
    pub fn norm_formula(&self) -> Result<Elem> {
        self.norm_formula_with(FConvention::LevelDifference)
    }

    pub fn norm_formula_with(&self, convention: FConvention) -> Result<Elem> {
        let terms = match convention {
            FConvention::LevelDifference => &self.ctx.terms,
            FConvention::ScaledByClassSize => &self.ctx.scaled_terms,
        };
        let field = &self.ctx.field;
        let mut t_powers = vec![field.one()];
        let mut acc = field.zero();
        for term in terms {
            if term.rep.iter().any(|&i| self.coords[i as usize].is_zero()) {
                continue;
            }
            let mut prod = field.from_int(term.f);
            for &i in &term.rep {
                prod = prod.try_mul(&self.coords[i as usize])?;
            }
            let e = (term.rep.iter().sum::<u64>() / self.ctx.q) as usize;
            while t_powers.len() <= e {
                let next = t_powers.last().expect("nonempty").try_mul(&self.ctx.t)?;
                t_powers.push(next);
            }
            acc = acc.try_add(&prod.try_mul(&t_powers[e])?)?;
        }
        Ok(acc)
    }

    /// min over nonzero b_i of i·v(t) + q·v(b_i).
    pub fn norm_valuation(&self) -> Result<Exponent> {
        let vt = valuation(&self.ctx.t)?.ok_or(Error::ZeroInput)?;
        let mut best: Option<Exponent> = None;
        for (i, b) in self.coords.iter().enumerate() {
            if b.is_zero() && b.is_exact() {
                continue;
            }
            let Some(vb) = valuation(b)? else { continue };
            let candidate = vt.scale(i as i64) + vb.scale(self.ctx.q as i64);
            best = Some(best.map_or(candidate, |x| x.min(candidate)));
        }
        best.ok_or(Error::ZeroInput)
    }
}

fn valuation(x: &Elem) -> Result<Option<Exponent>> {
    match x {
        Elem::Series(s) => s.valuation(),
        _ => Err(Error::Unsupported(format!("{} carries no valuation", x.domain()))),
    }
}

impl fmt::Display for KummerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join("; "))
    }
}

/// Residues of norms of the given elements, with a flag per sample telling
/// whether the residue is zero or a nonzero q-th power.
pub fn residue_of_norms(samples: &[KummerElement]) -> Result<Vec<(Elem, bool)>> {
    samples
        .iter()
        .map(|a| {
            let n = a.norm_oracle()?;
            let s = n.as_series().ok_or_else(|| Error::Unsupported("residues need a series field".into()))?;
            let r = s.residue()?;
            let ok = r.is_zero() || r.is_qth_power(a.ctx.q)?;
            Ok((r, ok))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormCertificate {
    /// N(preimage) = x.
    Preimage { preimage: Vec<String>, #[serde(skip)] element: Box<Option<KummerElement>> },
    /// v(x) lies in no coset qΓ + i·v(t).
    ValuationOutsideCosets { valuation: String },
    /// After removing N(u)^i and a q-th power of the uniformizer, the residue
    /// is not a q-th power.
    ResidueNotQthPower { index: u64, residue: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct NormDecision {
    pub verdict: bool,
    pub certificate: NormCertificate,
}

impl NormDecision {
    pub fn preimage(&self) -> Option<&KummerElement> {
        match &self.certificate {
            NormCertificate::Preimage { element, .. } => element.as_ref().as_ref(),
            _ => None,
        }
    }
}

fn preimage_decision(element: KummerElement) -> NormDecision {
    NormDecision {
        verdict: true,
        certificate: NormCertificate::Preimage {
            preimage: element.coords.iter().map(|c| c.to_string()).collect(),
            element: Box::new(Some(element)),
        },
    }
}

/// Decides whether x ∈ N(K^×).
///
/// Over a series field: pick i with v(x) − i·v(t) ∈ qΓ, write
/// x = N(u)^i · ϖ^{qm} · y with v(y) = 0 and ϖ the series variable, and
/// test res(y) for being a q-th power. When it is, y = w^q by Hensel and
/// the preimage is ϖ^m·w·u^i. Over Q or F_p only preimages of the form
/// β·u^i are searched for, and a miss is reported as unsupported.
pub fn is_norm(ctx: &Arc<KummerContext>, x: &Elem) -> Result<NormDecision> {
    let x = ctx.field.embed(x)?;
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let q = ctx.q;
    let Domain::Series(sd) = &ctx.field else {
        for i in 0..q as usize {
            let y = x.try_div(&ctx.norm_of_u().pow(i as u64))?;
            if let Some(beta) = y.qth_root(q, None)? {
                let mut coords = vec![ctx.field.zero(); q as usize];
                coords[i] = beta;
                return Ok(preimage_decision(KummerElement { ctx: ctx.clone(), coords }));
            }
        }
        return Err(Error::Unsupported(format!("norm membership over {} beyond β·u^i", ctx.field)));
    };
    let vx = valuation(&x)?.ok_or(Error::ZeroInput)?;
    let vt = valuation(&ctx.t)?.ok_or(Error::ZeroInput)?;
    let group = sd.group();
    let found = (0..q).find_map(|i| group.divide(&(vx - vt.scale(i as i64)), q).map(|m| (i, m)));
    let Some((i, m)) = found else {
        return Ok(NormDecision {
            verdict: false,
            certificate: NormCertificate::ValuationOutsideCosets { valuation: vx.to_string() },
        });
    };
    let coefficient_one = sd.coefficients().one();
    let uniformizer_m = ctx.field.monomial(coefficient_one.clone(), m)?;
    let removed = ctx.norm_of_u().pow(i).try_mul(&uniformizer_m.pow(q))?;
    let y = x.try_div(&removed)?;
    let residue = y.as_series().expect("series").residue()?;
    if !residue.is_qth_power(q)? {
        return Ok(NormDecision {
            verdict: false,
            certificate: NormCertificate::ResidueNotQthPower { index: i, residue: residue.to_string() },
        });
    }
    let w = y.qth_root(q, None)?.expect("residue is a q-th power, so Hensel applies");
    let mut coords = vec![ctx.field.zero(); q as usize];
    coords[i as usize] = uniformizer_m.try_mul(&w)?;
    Ok(preimage_decision(KummerElement { ctx: ctx.clone(), coords }))
}
