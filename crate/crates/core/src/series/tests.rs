use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::sampling::{self, Shape};

fn f7t() -> Domain {
    Domain::laurent(Domain::prime(7).unwrap(), "t")
}

fn qx() -> Domain {
    Domain::laurent(Domain::rationals(), "X")
}

fn e(n: i64) -> Exponent {
    Exponent::integer(n)
}

fn series(d: &Domain, text: &str) -> Series {
    d.parse(text).unwrap().as_series().unwrap().clone()
}

#[test]
fn valuation_examples() {
    let d = f7t();
    assert_eq!(series(&d, "t^2 + t^3").valuation().unwrap(), Some(e(2)));
    assert_eq!(series(&d, "0").valuation().unwrap(), None);
    assert!(matches!(series(&d, "O(t^5)").valuation(), Err(Error::ValuationUnknown)));
}

#[test]
fn residue_examples() {
    let d = f7t();
    assert_eq!(series(&d, "3 + t").residue().unwrap().to_string(), "3");
    assert!(series(&d, "t^(-1)").residue().unwrap().is_zero());
    assert!(series(&d, "5*t^2").residue().unwrap().is_zero());
    assert!(series(&d, "O(t^3)").residue().unwrap().is_zero());
    assert!(series(&d, "O(t^0)").residue().is_err());
}

#[test]
fn angular_component_examples() {
    let d = f7t();
    assert_eq!(series(&d, "2*t^3 + t^4").angular_component().unwrap().to_string(), "2");
    assert_eq!(series(&d, "5").angular_component().unwrap().to_string(), "5");
    let tower = Domain::rational_laurent_tower();
    let s = series(&tower, "X*Y^2 + Y^3");
    assert_eq!(s.angular_component().unwrap().to_string(), "X");
    assert!(series(&d, "0").angular_component().is_err());
}

#[test]
fn arithmetic_examples() {
    let d = f7t();
    let p = series(&d, "1 + t").try_mul(&series(&d, "1 - t")).unwrap();
    assert_eq!(p.to_string(), "1 + 6*t^2");
    let s = series(&d, "t").try_add(&series(&d, "t^2")).unwrap();
    assert_eq!(s.valuation().unwrap(), Some(e(1)));
    let a = series(&d, "1 + t + O(t^3)");
    let b = series(&d, "2 + t^2 + O(t^3)");
    assert_eq!(a.try_mul(&b).unwrap().precision(), Precision::Bounded(e(3)));
    let shifted = series(&d, "t^2 + O(t^5)").try_mul(&series(&d, "t + O(t^3)")).unwrap();
    assert_eq!(shifted.precision(), Precision::Bounded(e(5)));
    assert_eq!(a.try_add(&series(&d, "1 + O(t^2)")).unwrap().precision(), Precision::Bounded(e(2)));
}

#[test]
fn domain_mismatch_is_an_error() {
    let a = series(&f7t(), "1 + t");
    let b = series(&Domain::laurent(Domain::prime(5).unwrap(), "t"), "1 + t");
    assert!(matches!(a.try_add(&b), Err(Error::DomainMismatch { .. })));
}

#[test]
fn cancelled_coefficients_stay_uncertain() {
    let d = Domain::rational_laurent_tower();
    let a = series(&d, "(1 + X + O(X^3)) + Y");
    let b = series(&d, "(1 + X) + Y");
    let diff = a.try_sub(&b).unwrap();
    assert_eq!(diff.to_string(), "(O(X^3))");
    assert!(diff.is_structurally_zero() && !diff.is_empty());
    assert!(matches!(diff.valuation(), Err(Error::ValuationUnknown)));
    // X^(-2) * O(X^3) is O(X), not zero
    let scaled = diff.try_mul(&series(&d, "(X^(-2))")).unwrap();
    assert_eq!(scaled.to_string(), "(O(X))");
}

#[test]
fn invert_examples() {
    let d = f7t();
    let inv = series(&d, "1 - t").invert(e(4)).unwrap();
    assert_eq!(inv.to_string(), "1 + t + t^2 + t^3 + O(t^4)");
    let inv = series(&d, "t").invert(e(4)).unwrap();
    assert_eq!(inv.to_string(), "t^(-1)");
    let q = qx();
    let s = series(&q, "2 + 2*X^2");
    let inv = s.invert(e(4)).unwrap();
    assert_eq!(inv.to_string(), "1/2 - 1/2*X^2 + O(X^4)");
    assert!(s.try_mul(&inv).unwrap().eq_to_precision(&series(&q, "1")));
    assert!(matches!(series(&d, "0").invert(e(3)), Err(Error::ZeroInput)));
    assert!(matches!(series(&d, "1 + t + O(t^2)").invert(e(5)), Err(Error::InsufficientPrecision(_))));
}

#[test]
fn hensel_examples() {
    let d = f7t();
    let r = series(&d, "1 + t").hensel_qth_root(3, e(2)).unwrap();
    assert_eq!(r.to_string(), "1 + 5*t + O(t^2)");
    let one = series(&d, "1").hensel_qth_root(3, e(10)).unwrap();
    assert!(one.eq_to_precision(&series(&d, "1")));
    let err = series(&qx(), "2 + 2*X^2").hensel_qth_root(2, e(6));
    assert!(matches!(err, Err(Error::NotQthPower { .. })));
    let f3 = Domain::laurent(Domain::prime(3).unwrap(), "t");
    assert!(matches!(series(&f3, "1 + t").hensel_qth_root(3, e(4)), Err(Error::CharacteristicEqualsQ(3))));
}

#[test]
fn hensel_six_over_f7() {
    let d = f7t();
    let x = series(&d, "6 + 6*t");
    let r = x.hensel_qth_root(3, e(12)).unwrap();
    assert_eq!(r.residue().unwrap().to_string(), "3");
    assert!(r.pow(3).eq_to_precision(&x));
}

#[test]
fn coset_examples() {
    assert!(ValueGroup::Integers.is_coset_separating(&e(1), 3).unwrap());
    assert!(!ValueGroup::Integers.is_coset_separating(&e(3), 3).unwrap());
    let z7 = ValueGroup::p_divisible(7).unwrap();
    assert!(z7.is_coset_separating(&e(1), 3).unwrap());
    assert!(z7.is_coset_separating(&Exponent::new(2, 49).unwrap(), 3).unwrap());
    assert!(!z7.is_coset_separating(&Exponent::new(3, 7).unwrap(), 3).unwrap());
    assert!(ValueGroup::Integers.is_coset_separating(&Exponent::new(1, 2).unwrap(), 3).is_err());
}

#[test]
fn square_examples() {
    let d = qx();
    assert!(is_square_in_tower(&d.parse("(1 + X)^2").unwrap()).unwrap());
    assert!(!is_square_in_tower(&d.parse("2 + 2*X^2").unwrap()).unwrap());
    assert!(!is_square_in_tower(&d.parse("X").unwrap()).unwrap());
    assert!(is_square_in_tower(&d.parse("1 + X").unwrap()).unwrap());
    assert!(is_square_in_tower(&d.parse("1 + X + O(X^4)").unwrap()).is_err());
    let tower = Domain::rational_laurent_tower();
    assert!(is_square_in_tower(&tower.parse("X^2*Y^4 + Y^5").unwrap()).unwrap());
    assert!(!is_square_in_tower(&tower.parse("X*Y^4").unwrap()).unwrap());
}

#[test]
fn quadratic_extension_rejects_squares() {
    let tower = Domain::rational_laurent_tower();
    assert!(Domain::quadratic(tower.clone(), "g", tower.parse("1 + X").unwrap()).is_err());
    let k = Domain::quadratic(tower.clone(), "g", tower.parse("2 + 2*X^2").unwrap()).unwrap();
    let g = k.gamma().unwrap();
    let g2 = &g * &g;
    assert!(g2.eq_to_precision(&k.parse("2 + 2*X^2").unwrap()));
}

#[test]
fn ordered_sign_uses_innermost_leading_coefficient() {
    use std::cmp::Ordering;
    let tower = Domain::rational_laurent_tower();
    assert_eq!(tower.parse("-X + 5*Y").unwrap().ordered_sign().unwrap(), Ordering::Less);
    assert_eq!(tower.parse("(X^3 - 100*X^4)*Y").unwrap().ordered_sign().unwrap(), Ordering::Greater);
}

fn towers() -> Vec<Domain> {
    vec![
        f7t(),
        Domain::laurent(Domain::prime(13).unwrap(), "t"),
        qx(),
        Domain::rational_laurent_tower(),
        Domain::hahn_tower(7).unwrap(),
    ]
}

fn valuation(x: &Elem) -> Exponent {
    x.as_series().unwrap().valuation().unwrap().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuation_laws(seed in any::<u64>(), which in 0usize..5) {
        let d = &towers()[which];
        let shape = Shape::default().exponents(-3, 3);
        let mut rng = sampling::stream(seed, "valuation", 0);
        let x = sampling::nonzero(d, &mut rng, &shape);
        let y = sampling::nonzero(d, &mut rng, &shape);
        prop_assert_eq!(valuation(&(&x * &y)), valuation(&x) + valuation(&y));
        let sum = &x + &y;
        if !sum.is_zero() {
            let (vx, vy, vs) = (valuation(&x), valuation(&y), valuation(&sum));
            prop_assert!(vs >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(vs, vx.min(vy));
            }
        }
    }

    #[test]
    fn residue_is_multiplicative_and_additive(seed in any::<u64>(), which in 0usize..5) {
        let d = &towers()[which];
        let shape = Shape::default();
        let mut rng = sampling::stream(seed, "residue", 0);
        let x = sampling::unit(d, &mut rng, &shape);
        let y = sampling::unit(d, &mut rng, &shape);
        let res = |z: &Elem| z.as_series().unwrap().residue().unwrap();
        prop_assert!(res(&(&x * &y)).eq_to_precision(&(&res(&x) * &res(&y))));
        let a = sampling::nonzero(d, &mut rng, &shape);
        let b = sampling::nonzero(d, &mut rng, &shape);
        prop_assert!(res(&(&a + &b)).eq_to_precision(&(&res(&a) + &res(&b))));
    }

    #[test]
    fn invert_round_trip(seed in any::<u64>(), which in 0usize..5) {
        let d = &towers()[which];
        let mut rng = sampling::stream(seed, "invert", 0);
        let x = sampling::nonzero(d, &mut rng, &Shape::default().exponents(-3, 3));
        let s = x.as_series().unwrap();
        let target = e(8);
        let inv = s.invert(target).unwrap();
        let prod = s.try_mul(&inv).unwrap();
        prop_assert!(prod.eq_to_precision(&series(d, "1")));
        prop_assert!(prod.precision().bound().is_none_or(|b| b >= target + valuation(&x)));
    }

    #[test]
    fn hensel_root_powers_back(seed in any::<u64>(), which in 0usize..5, q in prop::sample::select(vec![2u64, 3, 5])) {
        let d = &towers()[which];
        if d.characteristic() == q {
            return Ok(());
        }
        let mut rng = sampling::stream(seed, "hensel", 0);
        let r0 = sampling::unit(d, &mut rng, &Shape::default());
        let x = r0.pow(q);
        let s = x.as_series().unwrap();
        let root = s.hensel_qth_root(q, e(6)).unwrap();
        prop_assert!(root.pow(q).eq_to_precision(s));
        let chosen = s.residue().unwrap().qth_root(q, None).unwrap().unwrap();
        prop_assert!(root.residue().unwrap().eq_to_precision(&chosen));
    }

    #[test]
    fn squares_are_recognised(seed in any::<u64>(), nested in any::<bool>()) {
        let d = if nested { Domain::rational_laurent_tower() } else { qx() };
        let mut rng = sampling::stream(seed, "square", 0);
        let s = sampling::nonzero(&d, &mut rng, &Shape::default().exponents(-2, 3));
        let sq = &s * &s;
        prop_assert!(is_square_in_tower(&sq).unwrap());
        let u = d.parse("2 + 2*X^2").unwrap();
        prop_assert!(!is_square_in_tower(&(&u * &sq)).unwrap());
    }

    #[test]
    fn hahn_exponents_stay_in_group(seed in any::<u64>()) {
        let d = Domain::hahn_tower(7).unwrap();
        let mut rng = sampling::stream(seed, "hahn", 0);
        let shape = Shape::default().exponents(-2, 2);
        let x = sampling::nonzero(&d, &mut rng, &shape);
        let y = sampling::nonzero(&d, &mut rng, &shape);
        let z = &(&x * &y) + &x.inv().unwrap();
        let group = ValueGroup::p_divisible(7).unwrap();
        for (exp, c) in z.as_series().unwrap().terms() {
            prop_assert!(group.contains(exp));
            for (inner, _) in c.as_series().unwrap().terms() {
                prop_assert!(group.contains(inner));
            }
        }
    }

    #[test]
    fn text_round_trips(seed in any::<u64>(), which in 0usize..5) {
        let d = &towers()[which];
        let mut rng = sampling::stream(seed, "text", 0);
        let x = sampling::nonzero(d, &mut rng, &Shape::default().exponents(-3, 3));
        let back = d.parse(&x.to_string()).unwrap();
        prop_assert!(back.eq_to_precision(&x));
        prop_assert_eq!(back.to_string(), x.to_string());
    }
}
