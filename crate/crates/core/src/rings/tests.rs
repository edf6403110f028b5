use super::*;
use proptest::prelude::*;

fn z2() -> Ring {
    Ring::localize_powers(&Ring::integers(), Elem::int(2)).unwrap()
}

#[test]
fn zmod_units_by_exhaustion() {
    let r = Ring::zmod(9).unwrap();
    // oracle: scan 0..9 for x with 5x = 1 mod 9
    let want = (0..9).find(|x| (5 * x) % 9 == 1).unwrap();
    assert_eq!(r.is_unit(&r.from_int(5)).unwrap(), Some(r.from_int(want)));
    assert_eq!(want, 2);
    assert!((0..9).all(|x| (3 * x) % 9 != 1));
    assert_eq!(r.is_unit(&r.from_int(3)).unwrap(), None);
}

#[test]
fn poly_unit_with_nilpotent_part() {
    let r = Ring::poly(&Ring::zmod(9).unwrap(), &["x"]).unwrap();
    let a = r.parse("1 + 3*x").unwrap();
    let inv = r.is_unit(&a).unwrap().unwrap();
    assert!(r.eq(&inv, &r.parse("1 - 3*x").unwrap()));
    assert!(r.is_one(&r.mul(&a, &inv)));
    assert_eq!(r.is_unit(&r.parse("1 + x").unwrap()).unwrap(), None);
}

#[test]
fn nilpotency_index() {
    let r = Ring::zmod(72).unwrap();
    // 6^2 = 36, 6^3 = 216 = 3 * 72
    let six = r.from_int(6);
    assert!(r.eq(&r.pow(&six, 2), &r.from_int(36)));
    assert!(r.is_zero(&r.pow(&six, 3)));
    assert_eq!(r.is_nilpotent(&r.from_int(6)).unwrap(), Some(3));
    assert_eq!(r.is_nilpotent(&r.zero()).unwrap(), Some(1));
    assert_eq!(r.is_nilpotent(&r.from_int(5)).unwrap(), None);
    let z = Ring::integers();
    assert_eq!(z.is_nilpotent(&z.from_int(2)).unwrap(), None);
    let p = Ring::poly(&r, &["x"]).unwrap();
    let a = p.parse("6 + 12*x").unwrap();
    let l = p.is_nilpotent(&a).unwrap().unwrap();
    assert!(p.is_zero(&p.pow(&a, l)));
    assert!(!p.is_zero(&p.pow(&a, l - 1)));
}

#[test]
fn localization_normalizes() {
    let r = z2();
    let a = r.parse("2/4").unwrap();
    let b = r.parse("1/2").unwrap();
    assert!(r.eq(&a, &b));
    assert_eq!(a, b);
    assert_eq!(r.is_unit(&r.from_int(3)).unwrap(), None);
    assert!(r.is_unit(&r.from_int(8)).unwrap().is_some());
}

#[test]
fn localizing_at_a_nilpotent_gives_the_zero_ring() {
    let r = Ring::localize_powers(&Ring::zmod(8).unwrap(), Elem::int(2)).unwrap();
    assert!(r.eq(&r.one(), &r.zero()));
}

#[test]
fn localization_at_zero_rejected() {
    assert!(matches!(Ring::localize_powers(&Ring::integers(), Elem::int(0)), Err(Error::InvalidSpec(_))));
    let zx = Ring::poly(&Ring::zmod(4).unwrap(), &["x"]).unwrap();
    let x = zx.var("x").unwrap();
    assert!(matches!(Ring::localize_powers(&zx, x), Err(Error::InvalidSpec(_))));
}

#[test]
fn quotient_must_be_monic() {
    let z = Ring::integers();
    assert!(Ring::quotient(&z, "t", vec![z.from_int(1), z.from_int(2)]).is_err());
    let r = Ring::quotient(&z, "t", vec![z.from_int(1), z.zero(), z.one()]).unwrap();
    let t = r.var("t").unwrap();
    assert!(r.eq(&r.mul(&t, &t), &r.from_int(-1)));
}

#[test]
fn polynomial_identities() {
    let r = Ring::poly(&Ring::rationals(), &["x"]).unwrap();
    let a = r.parse("(x+1)^2").unwrap();
    let b = r.parse("x^2 + 2*x + 1").unwrap();
    assert!(r.eq(&a, &b));
}

#[test]
fn substitution_examples() {
    let r = Ring::poly(&Ring::integers(), &["X", "T"]).unwrap();
    let p = r.parse("X*T^2").unwrap();
    let out = r.substitute(&p, "T", &r.parse("2*T").unwrap()).unwrap();
    assert!(r.eq(&out, &r.parse("4*X*T^2").unwrap()));
    let t = r.var("T").unwrap();
    assert!(r.eq(&r.substitute(&t, "T", &r.one()).unwrap(), &r.one()));
    assert!(matches!(r.substitute(&t, "Z", &r.one()), Err(Error::VariableUnknown(_))));

    let s = Ring::poly(&z2(), &["X"]).unwrap();
    let p = s.parse("X/2").unwrap();
    let out = s.substitute(&p, "X", &s.parse("2*X").unwrap()).unwrap();
    assert!(s.eq(&out, &s.var("X").unwrap()));
}

#[test]
fn restrict_detects_denominators() {
    let s = Ring::poly(&z2(), &["X"]).unwrap();
    let a = Ring::poly(&Ring::integers(), &["X"]).unwrap();
    let p = s.parse("4*X/2 + 3").unwrap();
    assert!(a.eq(&a.restrict(&s, &p).unwrap(), &a.parse("2*X + 3").unwrap()));
    assert!(a.restrict(&s, &s.parse("X/2").unwrap()).is_err());
}

#[test]
fn one_plus_localization() {
    let z = Ring::integers();
    let r = Ring::localize(&z, MultSet::OnePlus(Elem::int(2))).unwrap();
    // 3 = 1 + 2 is invertible, 2 is not
    let inv = r.is_unit(&r.from_int(3)).unwrap().unwrap();
    assert!(r.is_one(&r.mul(&inv, &r.from_int(3))));
    assert!(r.is_unit(&r.from_int(5)).unwrap().is_some());
    assert_eq!(r.is_unit(&r.from_int(2)).unwrap(), None);
    assert_eq!(r.is_unit(&r.from_int(6)).unwrap(), None);
}

#[test]
fn quadratic_extension_involution() {
    let r = Ring::quad_ext(&Ring::integers(), Elem::int(-1)).unwrap();
    let a = r.parse("2 + 3*t").unwrap();
    let c = r.conj(&a);
    assert!(r.eq(&c, &r.parse("2 - 3*t").unwrap()));
    assert!(r.eq(&r.mul(&a, &c), &r.from_int(13)));
    assert!(r.is_unit(&r.var("t").unwrap()).unwrap().is_some());
    assert!(!r.has_trivial_involution());
}

#[test]
fn stable_range_small_rings() {
    for q in [2u64, 3, 5, 7] {
        assert!(stable_range_holds(&Ring::zmod(q).unwrap(), 1).unwrap());
    }
    assert!(stable_range_holds(&Ring::zmod(12).unwrap(), 1).unwrap());
    assert!(stable_range_holds(&Ring::zmod(8).unwrap(), 1).unwrap());
    assert!(matches!(stable_range_holds(&Ring::integers(), 1), Err(Error::InfiniteRing)));
}

#[test]
fn field_quotient_inverse() {
    let f = Ring::zmod(5).unwrap();
    // GF(25) = GF(5)[t]/(t^2 - 2)
    let r = Ring::quotient(&f, "t", vec![f.from_int(-2), f.zero(), f.one()]).unwrap();
    for a in r.elements().unwrap() {
        if r.is_zero(&a) {
            continue;
        }
        let inv = r.is_unit(&a).unwrap().expect("field");
        assert!(r.is_one(&r.mul(&a, &inv)));
    }
}

#[test]
fn json_round_trip() {
    let spec: RingSpec = serde_json::from_str(
        r#"{"kind":"poly","parent":{"kind":"localize","parent":{"kind":"Z"},"multset":{"shape":"powers","s":"2"}},"vars":["X","Y"]}"#,
    )
    .unwrap();
    let r = make_ring(&spec).unwrap();
    assert_eq!(r.spec(), spec);
    let a = r.parse("X/2 + 3*Y^2 - 1").unwrap();
    let j = r.to_json(&a);
    assert!(r.eq(&r.from_json(&j).unwrap(), &a));
    let q: RingSpec = serde_json::from_str(r#"{"kind":"quotient","parent":{"kind":"Zmod","n":9},"modulus":"t^2+1"}"#).unwrap();
    let r = make_ring(&q).unwrap();
    let t = r.var("t").unwrap();
    assert!(r.eq(&r.mul(&t, &t), &r.from_int(-1)));
}

fn ring_zoo() -> Vec<(Ring, Vec<&'static str>)> {
    let z = Ring::integers();
    let q = Ring::rationals();
    let z9 = Ring::zmod(9).unwrap();
    vec![
        (z.clone(), vec!["1", "-3", "7", "0", "12"]),
        (Ring::poly(&q, &["x", "y"]).unwrap(), vec!["x/2 + y", "3*x*y - 1", "y^2", "2/3"]),
        (Ring::poly(&z9, &["x"]).unwrap(), vec!["1 + 3*x", "x^2 + 4", "6*x"]),
        (z2(), vec!["1/2", "3/8", "5", "-7/4"]),
        (Ring::quad_ext(&z, Elem::int(-1)).unwrap(), vec!["1 + t", "2 - 3*t", "t"]),
        (Ring::localize_powers(&Ring::zmod(12).unwrap(), Elem::int(2)).unwrap(), vec!["1", "2", "3", "5"]),
    ]
}

proptest! {
    #[test]
    fn ring_axioms(i in 0usize..6, a in 0usize..8, b in 0usize..8, c in 0usize..8) {
        let zoo = ring_zoo();
        let (r, names) = &zoo[i];
        let pick = |k: usize| r.parse(names[k % names.len()]).unwrap();
        let (x, y, z) = (pick(a), pick(b), pick(c));
        prop_assert!(r.eq(&r.mul(&r.mul(&x, &y), &z), &r.mul(&x, &r.mul(&y, &z))));
        prop_assert!(r.eq(&r.mul(&x, &r.add(&y, &z)), &r.add(&r.mul(&x, &y), &r.mul(&x, &z))));
        prop_assert!(r.eq(&r.mul(&r.one(), &x), &x));
        prop_assert!(r.eq(&r.conj(&r.conj(&x)), &x));
        prop_assert!(r.eq(&r.conj(&r.mul(&x, &y)), &r.mul(&r.conj(&x), &r.conj(&y))));
        if let Ok(Some(inv)) = r.is_unit(&x) {
            prop_assert!(r.is_one(&r.mul(&x, &inv)));
        }
    }

    #[test]
    fn substitution_is_multiplicative(a in -5i64..5, b in -5i64..5, k in -3i64..3) {
        let r = Ring::poly(&Ring::integers(), &["X", "T"]).unwrap();
        let p = r.parse(&format!("{a}*X*T + T^2 - {b}")).unwrap();
        let q = r.parse(&format!("X^2 + {b}*T")).unwrap();
        let v = r.parse(&format!("{k}*X + T")).unwrap();
        let lhs = r.substitute(&r.mul(&p, &q), "T", &v).unwrap();
        let rhs = r.mul(&r.substitute(&p, "T", &v).unwrap(), &r.substitute(&q, "T", &v).unwrap());
        prop_assert!(r.eq(&lhs, &rhs));
        prop_assert!(r.is_one(&r.substitute(&r.one(), "T", &v).unwrap()));
    }
}
