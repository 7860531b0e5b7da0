//! Series fields, valuations and Kummer norms through the public API.

use cda_core::base_fields::{primitive_qth_root, qth_power_set};
use cda_core::kummer::{is_norm, KummerContext, KummerElement, NormCertificate};
use cda_core::sampling::{self, Shape};
use cda_core::series::{is_square_in_tower, Domain, Elem, Exponent};
use cda_core::Error;
use proptest::prelude::*;

fn f(p: u64) -> Domain {
    Domain::laurent(Domain::prime(p).unwrap(), "t")
}

fn ctx(p: u64, q: u64) -> std::sync::Arc<KummerContext> {
    KummerContext::new(f(p), q, f(p).variable().unwrap()).unwrap()
}

fn random_element(ctx: &std::sync::Arc<KummerContext>, seed: u64, tag: &str) -> KummerElement {
    let mut rng = sampling::stream(seed, tag, 0);
    let shape = Shape::default().exponents(-2, 4);
    KummerElement::new(ctx, sampling::nonzero_tuple(ctx.field(), &mut rng, &shape, ctx.q() as usize, 0.3)).unwrap()
}

#[test]
fn parses_and_prints_towers() {
    for text in ["F7((t))", "Q((X))((Y))", "F7((x^Z[1/7]))((t^Z[1/7]))"] {
        let d: Domain = text.parse().unwrap();
        assert_eq!(d.to_string(), text);
    }
    let d = f(7);
    let x = d.parse("3*t^(-1) + 2 + O(t^5)").unwrap();
    assert_eq!(x.to_string(), "3*t^(-1) + 2 + O(t^5)");
    assert_eq!(x.as_series().unwrap().valuation().unwrap(), Some(Exponent::integer(-1)));
    assert!(matches!(d.parse("2 + "), Err(Error::Parse(_))));
}

#[test]
fn mixing_fields_is_an_error() {
    let a = f(7).parse("1 + t").unwrap();
    let b = f(11).parse("1 + t").unwrap();
    assert!(matches!(a.try_add(&b), Err(Error::DomainMismatch { .. })));
}

#[test]
fn roots_of_unity_and_powers() {
    assert_eq!(primitive_qth_root(7, 3).unwrap().value(), 2);
    assert_eq!(primitive_qth_root(13, 3).unwrap().value(), 3);
    let cubes: Vec<u64> = qth_power_set(7, 3).unwrap().iter().map(|x| x.value()).collect();
    assert_eq!(cubes, [1, 6]);
    assert!(primitive_qth_root(5, 3).is_err());
}

#[test]
fn hensel_roots_in_series_fields() {
    let d = f(7);
    let x = d.parse("6 + 6*t").unwrap();
    let r = x.qth_root(3, None).unwrap().expect("residue 6 is a cube");
    assert!(r.pow(3).eq_to_precision(&x));
    assert!(d.parse("2 + t").unwrap().qth_root(3, None).unwrap().is_none());
    let q = Domain::laurent(Domain::rationals(), "X");
    assert!(is_square_in_tower(&q.parse("4 + X").unwrap()).unwrap());
    assert!(!is_square_in_tower(&q.parse("2 + X").unwrap()).unwrap());
    assert!(!is_square_in_tower(&q.parse("X").unwrap()).unwrap());
}

#[test]
fn norm_examples() {
    let c = ctx(7, 3);
    let u = KummerElement::u_power(&c, 1);
    assert_eq!(u.norm_oracle().unwrap().to_string(), "t");
    let c2 = ctx(7, 2);
    assert_eq!(KummerElement::u_power(&c2, 1).norm_oracle().unwrap().to_string(), "6*t");
    let d = is_norm(&c, &f(7).parse("t^2").unwrap()).unwrap();
    assert!(d.verdict);
    let d = is_norm(&c, &f(7).from_int(3)).unwrap();
    assert!(matches!(d.certificate, NormCertificate::ResidueNotQthPower { .. }));
}

#[test]
fn contexts_are_validated() {
    assert!(KummerContext::new(f(7), 3, f(7).parse("t^3").unwrap()).is_err());
    assert!(KummerContext::new(f(5), 3, f(5).variable().unwrap()).is_err());
    assert!(KummerContext::new(f(7), 7, f(7).variable().unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_is_multiplicative(seed in any::<u64>()) {
        let c = ctx(13, 3);
        let a = random_element(&c, seed, "a");
        let b = random_element(&c, seed, "b");
        let lhs = a.try_mul(&b).unwrap().norm_oracle().unwrap();
        let rhs = a.norm_oracle().unwrap().try_mul(&b.norm_oracle().unwrap()).unwrap();
        prop_assert!(lhs.eq_to_precision(&rhs));
    }

    #[test]
    fn formula_agrees_with_conjugates(seed in any::<u64>(), which in 0usize..3) {
        let (p, q) = [(7, 3), (13, 3), (11, 5)][which];
        let a = random_element(&ctx(p, q), seed, "formula");
        prop_assert!(a.norm_formula().unwrap().eq_to_precision(&a.norm_oracle().unwrap()));
        prop_assert_eq!(
            a.norm_oracle().unwrap().as_series().unwrap().valuation().unwrap(),
            Some(a.norm_valuation().unwrap())
        );
    }

    #[test]
    fn galois_action_is_a_ring_map(seed in any::<u64>(), k in 0u64..5) {
        let c = ctx(11, 5);
        let a = random_element(&c, seed, "a");
        let b = random_element(&c, seed, "b");
        let lhs = a.try_mul(&b).unwrap().galois_sigma(k).unwrap();
        let rhs = a.galois_sigma(k).unwrap().try_mul(&b.galois_sigma(k).unwrap()).unwrap();
        prop_assert_eq!(lhs.to_string(), rhs.to_string());
        let mut iterated = a.clone();
        for _ in 0..5 {
            iterated = iterated.galois_sigma(1).unwrap();
        }
        prop_assert_eq!(iterated.to_string(), a.to_string());
        prop_assert!(a.galois_sigma(5).is_err());
    }

    #[test]
    fn norms_are_recognised_with_preimages(seed in any::<u64>()) {
        let c = ctx(7, 3);
        let a = random_element(&c, seed, "preimage");
        let n = a.norm_oracle().unwrap();
        let d = is_norm(&c, &n).unwrap();
        prop_assert!(d.verdict);
        let back = d.preimage().unwrap().norm_oracle().unwrap();
        prop_assert!(back.eq_to_precision(&n));
    }

    #[test]
    fn squares_stay_squares(seed in any::<u64>()) {
        let d = Domain::rational_laurent_tower();
        let mut rng = sampling::stream(seed, "squares", 0);
        let x = sampling::nonzero(&d, &mut rng, &Shape::default().exponents(-2, 2));
        let y = sampling::nonzero(&d, &mut rng, &Shape::default().exponents(-2, 2));
        let square = x.try_mul(&x).unwrap().try_mul(&y.try_mul(&y).unwrap()).unwrap();
        prop_assert!(is_square_in_tower(&square).unwrap());
        let two: Elem = d.from_int(2);
        prop_assert!(!is_square_in_tower(&square.try_mul(&two).unwrap()).unwrap());
    }
}
