use super::*;
use crate::matform::{commutator, elem_gen, roots};
use proptest::prelude::*;

fn zxy() -> (Ring, Elem, Elem) {
    let r = Ring::poly(&Ring::integers(), &["x", "y"]).unwrap();
    let (x, y) = (r.var("x").unwrap(), r.var("y").unwrap());
    (r, x, y)
}

fn literal_commutator(ring: &Ring, kind: FormKind, n: usize, g1: (usize, usize, &Elem), g2: (usize, usize, &Elem)) -> Mat {
    let a = elem_gen(ring, kind, n, g1.0, g1.1, g1.2).unwrap();
    let b = elem_gen(ring, kind, n, g2.0, g2.1, g2.2).unwrap();
    commutator(ring, &a, &b).unwrap()
}

#[test]
fn linear_relation_is_plain_product() {
    let (r, x, y) = zxy();
    let (z, w) = commutator_relation(&r, FormKind::Linear, 3, 1, 3, 2, &x, &y).unwrap();
    assert_eq!(z, Some(1));
    assert_eq!(w.len(), 1);
    assert_eq!((w.gens[0].i, w.gens[0].j), (1, 2));
    assert!(r.eq(&w.gens[0].value(&r), &r.mul(&x, &y)));
}

#[test]
fn commuting_generators_give_empty_word() {
    let (r, x, y) = zxy();
    let w = commutator_word(&r, FormKind::Linear, 4, (1, 2, &x), (3, 4, &y)).unwrap();
    assert!(w.is_empty());
    let w = commutator_word(&r, FormKind::Linear, 4, (1, 2, &x), (1, 3, &y)).unwrap();
    assert!(w.is_empty());
}

#[test]
fn relation_preconditions() {
    let (r, x, y) = zxy();
    let clash = |res: Result<(Option<i64>, Word)>| matches!(res, Err(Error::IndexClash(_)));
    assert!(clash(commutator_relation(&r, FormKind::Linear, 3, 1, 1, 2, &x, &y)));
    assert!(clash(commutator_relation(&r, FormKind::Linear, 3, 1, 2, 1, &x, &y)));
    assert!(clash(commutator_relation(&r, FormKind::Symplectic, 6, 1, 3, 2, &x, &y)));
    assert!(clash(commutator_relation(&r, FormKind::Orthogonal, 6, 1, 2, 3, &x, &y)));
    let gi = Ring::quad_ext(&Ring::integers(), Elem::int(-1)).unwrap();
    assert!(matches!(
        commutator_relation(&gi, FormKind::Linear, 3, 1, 3, 2, &gi.one(), &gi.one()),
        Err(Error::UnsupportedInvolution(_))
    ));
}

/// Every admissible index triple of the form groups of size 6 yields a
/// verified relation; long-root targets are a single generator with z = +-1.
#[test]
fn form_group_relations_size_six() {
    let (r, x, y) = zxy();
    for kind in [FormKind::Symplectic, FormKind::Orthogonal] {
        let mut singles = 0;
        for i in 1..=6 {
            for k in 1..=6 {
                for j in 1..=6 {
                    let res = commutator_relation(&r, kind, 6, i, k, j, &x, &y);
                    let Ok((z, w)) = res else {
                        assert!(matches!(res, Err(Error::IndexClash(_))));
                        continue;
                    };
                    let lit = literal_commutator(&r, kind, 6, (i, k, &x), (k, j, &y));
                    assert!(w.eval().eq(&r, &lit));
                    let short_leg = is_short(kind, i, k) || is_short(kind, k, j);
                    if !short_leg {
                        let z = z.expect("long roots give a single generator");
                        assert_eq!(z.abs(), 1, "{kind:?} ({i},{k},{j})");
                        singles += 1;
                    }
                }
            }
        }
        assert!(singles > 0);
    }
}

/// z is a property of the index pattern: the same relation holds after any
/// specialization of x and y.
#[test]
fn relation_constant_under_specialization() {
    let z = Ring::integers();
    let (r, x, y) = zxy();
    for (i, k, j) in [(1, 3, 5), (3, 1, 5), (1, 4, 5), (5, 2, 3)] {
        let (zz, _) = commutator_relation(&r, FormKind::Symplectic, 6, i, k, j, &x, &y).unwrap();
        let zz = zz.unwrap();
        for (a, b) in [(2, 3), (-1, 5), (7, -4)] {
            let (za, _) = commutator_relation(&z, FormKind::Symplectic, 6, i, k, j, &z.from_int(a), &z.from_int(b)).unwrap();
            assert_eq!(za, Some(zz));
        }
    }
}

#[test]
fn split_square_linear_example() {
    let r = Ring::poly(&Ring::integers(), &["mu", "T"]).unwrap();
    let (mu, t) = (r.var("mu").unwrap(), r.var("T").unwrap());
    let w = split_square(&r, FormKind::Linear, 3, 2, 3, &mu, "T").unwrap();
    let tm = r.mul(&t, &mu);
    let want = [(2, 1, tm.clone()), (1, 3, t.clone()), (2, 1, r.neg(&tm)), (1, 3, r.neg(&t))];
    assert_eq!(w.len(), 4);
    for (g, (i, j, p)) in w.gens.iter().zip(want) {
        assert_eq!((g.i, g.j), (i, j));
        assert!(r.eq(&g.value(&r), &p));
    }
    assert!(matches!(split_square(&r, FormKind::Linear, 3, 1, 3, &mu, "T"), Err(Error::IndexOne(_))));
}

#[test]
fn split_square_form_groups() {
    let q = Ring::poly(&Ring::rationals(), &["mu", "T"]).unwrap();
    let mu = q.var("mu").unwrap();
    for kind in [FormKind::Symplectic, FormKind::Orthogonal] {
        for (i, j) in roots(kind, 6) {
            if i == 1 || j == 1 {
                continue;
            }
            let w = split_square(&q, kind, 6, i, j, &mu, "T").unwrap();
            for g in &w.gens {
                assert!(touches_one(kind, g.i, g.j), "{kind:?} ({i},{j}) -> ({},{})", g.i, g.j);
                assert!(q.min_degree_in(&g.param, "T").unwrap() >= 1);
            }
        }
    }
    // the short root (3,4) needs 1/2
    let z = Ring::poly(&Ring::integers(), &["mu", "T"]).unwrap();
    let muz = z.var("mu").unwrap();
    assert_eq!(split_square(&z, FormKind::Symplectic, 6, 3, 4, &muz, "T").unwrap_err(), Error::TwoNotInvertible);
    assert!(split_square(&z, FormKind::Symplectic, 6, 3, 5, &muz, "T").is_ok());
}

#[test]
fn conjugation_expand_trivial_and_example() {
    let r = Ring::poly(&Ring::integers(), &["X", "Y"]).unwrap();
    let (x, y) = (r.var("X").unwrap(), r.var("Y").unwrap());
    let e = Word::empty(&r, FormKind::Linear, 3);
    let out = conjugation_expand(&e, 1, 3, 1, "X", &y).unwrap();
    assert_eq!(out.word.len(), 1);
    assert!(r.eq(&out.word.gens[0].value(&r), &r.mul(&x, &y)));
    assert!(r.eq(&out.h[0], &y));

    let eps = Word::single(&r, FormKind::Linear, 3, 1, 2, r.one()).unwrap();
    let out = conjugation_expand(&eps, 1, 3, 1, "X", &y).unwrap();
    // e12(1) commutes with e13
    assert_eq!(out.word.len(), 1);
    let eps = Word::single(&r, FormKind::Linear, 3, 3, 1, r.one()).unwrap();
    let out = conjugation_expand(&eps, 1, 3, 1, "X", &y).unwrap();
    for g in &out.word.gens {
        assert!(r.min_degree_in(&g.param, "X").unwrap() >= 1);
    }
    let mut want = eps.clone();
    want.push(1, 3, r.mul(&r.pow(&x, 2), &y)).unwrap();
    want.extend(&eps.inverse());
    assert!(out.word.eval().eq(&r, &want.eval()));
}

fn random_eps(ring: &Ring, kind: FormKind, n: usize, picks: &[(usize, i64)]) -> Word {
    let pos = roots(kind, n);
    let mut w = Word::empty(ring, kind, n);
    for &(p, a) in picks {
        let (i, j) = pos[p % pos.len()];
        w.push(i, j, ring.from_int(a)).unwrap();
    }
    w
}

/// Length growth bound used in the docs: at most 16 * 4^r letters for r <= 4
/// in the linear kind.
#[test]
fn expansion_length_growth() {
    let r = Ring::poly(&Ring::integers(), &["X", "Y"]).unwrap();
    let y = r.var("Y").unwrap();
    let mut worst = 0.0f64;
    for seed in 0..40usize {
        let len = seed % 5;
        let picks: Vec<(usize, i64)> = (0..len).map(|t| (seed * 7 + t * 13, (t as i64 % 3) + 1)).collect();
        let eps = random_eps(&r, FormKind::Linear, 4, &picks);
        let out = conjugation_expand(&eps, 1 + seed % 4, 1 + (seed + 1) % 4, 1, "X", &y).unwrap();
        let ratio = out.word.len() as f64 / 4f64.powi(len as i32);
        worst = worst.max(ratio);
    }
    assert!(worst <= 16.0, "growth constant {worst}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn expansion_over_integers(
        n in 3usize..=6,
        picks in prop::collection::vec((0usize..100, -3i64..=3), 0..=3),
        pq in 0usize..100,
        m in 1u32..=2,
    ) {
        let r = Ring::poly(&Ring::integers(), &["X", "Y"]).unwrap();
        let y = r.var("Y").unwrap();
        let eps = random_eps(&r, FormKind::Linear, n, &picks);
        let (p, q) = roots(FormKind::Linear, n)[pq % (n * (n - 1))];
        let out = conjugation_expand(&eps, p, q, m, "X", &y).unwrap();
        for g in &out.word.gens {
            prop_assert!(r.min_degree_in(&g.param, "X").unwrap() >= m);
        }
        let at0 = out.word.map_params(&r, |a| r.substitute(a, "X", &r.zero())).unwrap();
        prop_assert!(at0.eval().is_identity(&r));
    }

    #[test]
    fn expansion_form_groups(
        picks in prop::collection::vec((0usize..100, -2i64..=2), 0..=2),
        pq in 0usize..100,
        symplectic in any::<bool>(),
    ) {
        // orthogonal over Z; symplectic needs 1/2 for its short roots
        let (kind, base) = if symplectic {
            (FormKind::Symplectic, Ring::localize_powers(&Ring::integers(), Elem::int(2)).unwrap())
        } else {
            (FormKind::Orthogonal, Ring::integers())
        };
        let r = Ring::poly(&base, &["X", "Y"]).unwrap();
        let y = r.var("Y").unwrap();
        let eps = random_eps(&r, kind, 6, &picks);
        let pos = roots(kind, 6);
        let (p, q) = pos[pq % pos.len()];
        let out = conjugation_expand(&eps, p, q, 1, "X", &y).unwrap();
        for g in &out.word.gens {
            prop_assert!(r.min_degree_in(&g.param, "X").unwrap() >= 1);
        }
    }
}
