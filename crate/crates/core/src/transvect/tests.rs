use super::*;
use crate::matform::{check_membership, standard_form};
use proptest::prelude::*;

fn ints(ring: &Ring, v: &[i64]) -> Vec<Elem> {
    v.iter().map(|&x| ring.from_int(x)).collect()
}

fn e(ring: &Ring, n: usize, k: usize) -> Vec<Elem> {
    let mut v = vec![ring.zero(); n];
    v[k - 1] = ring.one();
    v
}

#[test]
fn linear_example() {
    let z = Ring::integers();
    let t = make_transvection(
        &z,
        TransvectionData::Linear { phi: ints(&z, &[0, 1]), q: ints(&z, &[1, 0]) },
        UnimodularCert::Vector(ints(&z, &[1, 0])),
    )
    .unwrap();
    let out = t.apply(&ints(&z, &[5, 7])).unwrap();
    assert_eq!(out, ints(&z, &[12, 7]));
    assert_eq!(t.invert().apply(&out).unwrap(), ints(&z, &[5, 7]));
    let bad = make_transvection(
        &z,
        TransvectionData::Linear { phi: ints(&z, &[1, 1]), q: ints(&z, &[1, 0]) },
        UnimodularCert::Vector(ints(&z, &[1, 0])),
    );
    assert!(matches!(bad, Err(Error::OrthogonalityViolated(_))));
}

#[test]
fn symplectic_examples() {
    let z = Ring::integers();
    let t = make_transvection(
        &z,
        TransvectionData::Symplectic { u: e(&z, 4, 1), v: e(&z, 4, 3) },
        UnimodularCert::Vector(e(&z, 4, 3)),
    )
    .unwrap();
    for k in 1..=4 {
        let p = e(&z, 4, k);
        assert_eq!(t.invert().apply(&t.apply(&p).unwrap()).unwrap(), p);
    }
    // u = e1, v = 0: <e1, e2> = 1, so e2 -> e2 + e1
    let t = make_transvection(
        &z,
        TransvectionData::Symplectic { u: e(&z, 4, 1), v: vec![z.zero(); 4] },
        UnimodularCert::Functional(e(&z, 4, 2)),
    )
    .unwrap();
    assert_eq!(t.apply(&e(&z, 4, 2)).unwrap(), ints(&z, &[1, 1, 0, 0]));
    let bad = make_transvection(
        &z,
        TransvectionData::Symplectic { u: e(&z, 4, 1), v: e(&z, 4, 2) },
        UnimodularCert::Vector(e(&z, 4, 2)),
    );
    assert!(matches!(bad, Err(Error::OrthogonalityViolated(_))));
}

#[test]
fn orthogonal_examples() {
    let z = Ring::integers();
    let t = make_transvection(
        &z,
        TransvectionData::Orthogonal { u: e(&z, 4, 1), v: e(&z, 4, 1) },
        UnimodularCert::Vector(e(&z, 4, 1)),
    );
    assert!(t.is_ok());
    let t = make_transvection(
        &z,
        TransvectionData::Orthogonal { u: e(&z, 4, 1), v: e(&z, 4, 3) },
        UnimodularCert::Vector(e(&z, 4, 3)),
    )
    .unwrap();
    for k in 1..=4 {
        let p = e(&z, 4, k);
        assert_eq!(t.invert().apply(&t.apply(&p).unwrap()).unwrap(), p);
    }
    let bad = make_transvection(
        &z,
        TransvectionData::Orthogonal { u: ints(&z, &[1, 1, 0, 0]), v: e(&z, 4, 3) },
        UnimodularCert::Vector(e(&z, 4, 3)),
    );
    assert!(matches!(bad, Err(Error::NotIsotropic(_))));
}

#[test]
fn identity_cases() {
    let z = Ring::integers();
    let zero = vec![z.zero(); 4];
    let t = make_transvection(
        &z,
        TransvectionData::Symplectic { u: zero.clone(), v: zero.clone() },
        UnimodularCert::OrderIdeal { functionals: vec![], weights: vec![] },
    );
    // the zero vector is never unimodular
    assert!(matches!(t, Err(Error::BadCertificate(_))));
    let t = make_transvection(
        &z,
        TransvectionData::Orthogonal { u: zero.clone(), v: e(&z, 4, 1) },
        UnimodularCert::Vector(e(&z, 4, 1)),
    )
    .unwrap();
    let p = ints(&z, &[3, -1, 4, 1]);
    assert_eq!(t.apply(&p).unwrap(), p);
    assert!(matches!(t.apply(&p[..3]), Err(Error::DimensionMismatch(_))));
}

#[test]
fn unimodular_checks() {
    let z = Ring::integers();
    assert!(check_unimodular(&z, &ints(&z, &[2, 3]), &UnimodularCert::Vector(ints(&z, &[-1, 1]))));
    assert!(!is_unimodular(&z, &ints(&z, &[2, 4])).unwrap());
    assert!(is_unimodular(&z, &ints(&z, &[2, 3])).unwrap());
    assert!(check_unimodular(&z, &e(&z, 3, 1), &UnimodularCert::Vector(ints(&z, &[1, 0, 0]))));
    let order = UnimodularCert::OrderIdeal {
        functionals: vec![ints(&z, &[1, 0]), ints(&z, &[0, 1])],
        weights: ints(&z, &[-1, 1]),
    };
    assert!(check_unimodular(&z, &ints(&z, &[2, 3]), &order));
    let qx = Ring::poly(&Ring::rationals(), &["x"]).unwrap();
    let v = vec![qx.parse("x^2 - 1").unwrap(), qx.parse("x + 2").unwrap()];
    assert!(is_unimodular(&qx, &v).unwrap());
    let v = vec![qx.parse("x^2 - 1").unwrap(), qx.parse("x + 1").unwrap()];
    assert!(!is_unimodular(&qx, &v).unwrap());
}

#[test]
fn elementary_transvection_examples() {
    let z = Ring::integers();
    let m = QModule::new(&z, FormKind::Linear, ModuleP::Free(2)).unwrap();
    let t = elem_transvection(&m, &ElemTransvection::LinearColumn(ints(&z, &[1, 0]))).unwrap();
    let mut want = Mat::identity(&z, 3);
    want.set(0, 2, z.one());
    assert!(t.eq(&z, &want));

    let m = QModule::new(&z, FormKind::Symplectic, ModuleP::Free(4)).unwrap();
    let t = elem_transvection(&m, &ElemTransvection::SymplecticA(e(&z, 4, 1))).unwrap();
    assert_eq!(t.n, 6);
    assert!(check_membership(&z, &t, FormKind::Symplectic, true));

    let m = QModule::new(&z, FormKind::Orthogonal, ModuleP::Free(4)).unwrap();
    let t = elem_transvection(&m, &ElemTransvection::OrthogonalA(vec![z.zero(); 4])).unwrap();
    assert!(t.is_identity(&z));
}

#[test]
fn projective_summand() {
    let z = Ring::integers();
    // e projects onto the first coordinate along (1, 1)
    let e = Mat::parse(&z, &[&["1", "1"], &["0", "0"]]).unwrap();
    let m = QModule::new(&z, FormKind::Linear, ModuleP::Idempotent(e)).unwrap();
    assert!(elem_transvection(&m, &ElemTransvection::LinearColumn(ints(&z, &[3, 0]))).is_ok());
    assert!(matches!(
        elem_transvection(&m, &ElemTransvection::LinearColumn(ints(&z, &[0, 1]))),
        Err(Error::NotInModule(_))
    ));
}

#[test]
fn elementary_transvections_preserve_the_form() {
    let r = Ring::poly(&Ring::integers(), &["a", "b", "c", "d"]).unwrap();
    let q: Vec<Elem> = ["a", "b", "c", "d"].iter().map(|v| r.var(v).unwrap()).collect();
    for (kind, shapes) in [
        (FormKind::Symplectic, vec![ElemTransvection::SymplecticA(q.clone()), ElemTransvection::SymplecticB(q.clone())]),
        (FormKind::Orthogonal, vec![]),
    ] {
        let m = QModule::new(&r, kind, ModuleP::Free(4)).unwrap();
        for s in shapes {
            let t = elem_transvection(&m, &s).unwrap();
            assert!(check_membership(&r, &t, kind, true), "{s:?}");
        }
    }
    // orthogonal shapes need an isotropic q: take q = (a, 0, c, 0)
    let q = vec![r.var("a").unwrap(), r.zero(), r.var("c").unwrap(), r.zero()];
    let m = QModule::new(&r, FormKind::Orthogonal, ModuleP::Free(4)).unwrap();
    for s in [ElemTransvection::OrthogonalA(q.clone()), ElemTransvection::OrthogonalB(q.clone())] {
        let t = elem_transvection(&m, &s).unwrap();
        assert!(check_membership(&r, &t, FormKind::Orthogonal, true), "{s:?}");
    }
}

#[test]
fn json_round_trip() {
    let z = Ring::integers();
    let t = make_transvection(
        &z,
        TransvectionData::Orthogonal { u: e(&z, 4, 1), v: e(&z, 4, 3) },
        UnimodularCert::Functional(e(&z, 4, 2)),
    )
    .unwrap();
    let back = Transvection::from_json(&z, &t.to_json()).unwrap();
    assert!(back.matrix().eq(&z, &t.matrix()));
}

/// Random isotropic, mutually orthogonal pair built from disjoint hyperbolic planes.
fn random_pair(ring: &Ring, n: usize, seed: &[i64], kind: FormKind) -> (Vec<Elem>, Vec<Elem>) {
    // u lives on the odd coordinates of the first half of the planes, v on the rest,
    // so every pairing between them vanishes
    let half = n / 2;
    let mut u = vec![ring.zero(); n];
    let mut v = vec![ring.zero(); n];
    for l in 0..half {
        let x = ring.from_int(seed[l % seed.len()]);
        let y = ring.from_int(seed[(l + 3) % seed.len()]);
        if l % 2 == 0 {
            u[2 * l] = x;
            v[2 * l] = y;
        } else {
            u[2 * l] = y;
            v[2 * l] = x;
        }
    }
    if kind == FormKind::Symplectic {
        // symplectic allows <u,u> != 0 in principle; mixing in a second
        // coordinate of u still keeps <u,v> = 0 because v has no even part
        u[1] = ring.from_int(seed[1 % seed.len()]);
        if !ring.is_zero(&form_value(ring, kind, &u, &v).unwrap()) {
            u[1] = ring.zero();
        }
    }
    (u, v)
}

proptest! {
    #[test]
    fn transvections_preserve_the_form(n2 in 2usize..5, seed in prop::collection::vec(-5i64..6, 6), ps in prop::collection::vec(-7i64..8, 16), sym in any::<bool>()) {
        let z = Ring::integers();
        let n = 2 * n2;
        let kind = if sym { FormKind::Symplectic } else { FormKind::Orthogonal };
        let (u, v) = random_pair(&z, n, &seed, kind);
        let data = if sym { TransvectionData::Symplectic { u: u.clone(), v: v.clone() } } else { TransvectionData::Orthogonal { u: u.clone(), v: v.clone() } };
        let t = Transvection { ring: z.clone(), data, cert: UnimodularCert::Vector(vec![]) };
        let p: Vec<Elem> = ps[..n].iter().map(|&x| z.from_int(x)).collect();
        let p2: Vec<Elem> = ps[n..].iter().chain(ps.iter()).take(n).map(|&x| z.from_int(x)).collect();
        let (tp, tp2) = (t.apply(&p).unwrap(), t.apply(&p2).unwrap());
        prop_assert!(z.eq(&form_value(&z, kind, &tp, &tp2).unwrap(), &form_value(&z, kind, &p, &p2).unwrap()));
        prop_assert_eq!(t.invert().apply(&tp).unwrap(), p);
        let psi = standard_form(kind, n, &z).unwrap();
        let m = t.matrix();
        prop_assert!(m.transpose().mul(&z, &psi).mul(&z, &m).eq(&z, &psi));
    }

    #[test]
    fn elementary_transvections_lift(q in prop::collection::vec(-20i64..21, 4), modulus in 2u64..30) {
        let z = Ring::integers();
        let zn = Ring::zmod(modulus).unwrap();
        let qz: Vec<Elem> = q.iter().map(|&x| z.from_int(x)).collect();
        let qn: Vec<Elem> = q.iter().map(|&x| zn.from_int(x)).collect();
        for kind in [FormKind::Linear, FormKind::Symplectic] {
            let (mz, mn) = (QModule::new(&z, kind, ModuleP::Free(4)).unwrap(), QModule::new(&zn, kind, ModuleP::Free(4)).unwrap());
            let (sz, sn) = if kind.is_linear() {
                (ElemTransvection::LinearRow(qz.clone()), ElemTransvection::LinearRow(qn.clone()))
            } else {
                (ElemTransvection::SymplecticB(qz.clone()), ElemTransvection::SymplecticB(qn.clone()))
            };
            let big = elem_transvection(&mz, &sz).unwrap();
            let small = elem_transvection(&mn, &sn).unwrap();
            let reduced = big.try_map(|x| zn.embed(&z, x)).unwrap();
            prop_assert!(reduced.eq(&zn, &small));
            prop_assert!(z.is_one(&big.det(&z)));
        }
    }
}
