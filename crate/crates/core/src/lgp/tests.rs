use super::*;
use crate::matform::{elem_gen, roots};
use proptest::prelude::*;

fn zs_x(s: i64) -> (Ring, Ring) {
    let loc = Ring::localize_powers(&Ring::integers(), Elem::int(s)).unwrap();
    let r = Ring::poly(&loc, &["X"]).unwrap();
    (loc, r)
}

fn no_denominators(w: &Word) -> bool {
    // the word's ring is A[X] with A free of localizations, so parameters
    // are syntactically denominator-free exactly when they live there
    w.ring.coeff_ring().map(|c| c.mult_set().is_none()).unwrap_or(false)
}

#[test]
fn dilate_half_example() {
    let (_, r) = zs_x(2);
    let half_x = r.parse("X/2").unwrap();
    let w = Word::single(&r, FormKind::Linear, 3, 1, 2, half_x).unwrap();
    let out = dilate(&w, &Elem::int(2), None).unwrap();
    assert_eq!(out.l, 1);
    assert_eq!(out.d, 1);
    let z = Ring::integers();
    assert!(z.eq(&out.b, &z.from_int(4)));
    assert!(no_denominators(&out.word));
    let g = &out.word.ring;
    let want = elem_gen(g, FormKind::Linear, 3, 1, 2, &g.parse("2*X").unwrap()).unwrap();
    assert!(out.word.eval().eq(g, &want));
}

#[test]
fn dilate_global_and_identity_inputs() {
    let (_, r) = zs_x(2);
    let w = Word::single(&r, FormKind::Linear, 3, 1, 2, r.var("X").unwrap()).unwrap();
    let out = dilate(&w, &Elem::int(2), None).unwrap();
    assert_eq!(out.l, 1);

    let (_, r3) = zs_x(3);
    let mut w = Word::empty(&r3, FormKind::Linear, 3);
    w.push(2, 1, r3.parse("X/3").unwrap()).unwrap();
    w.push(2, 1, r3.parse("-X/3").unwrap()).unwrap();
    let out = dilate(&w, &Elem::int(3), None).unwrap();
    assert!(out.word.eval().is_identity(&out.word.ring));
}

#[test]
fn dilate_errors() {
    let (_, r) = zs_x(2);
    let w = Word::single(&r, FormKind::Linear, 3, 1, 2, r.parse("1+X").unwrap()).unwrap();
    assert_eq!(dilate(&w, &Elem::int(2), None).unwrap_err(), Error::NotBasedAtIdentity);
    let z8 = Ring::zmod(8).unwrap();
    let loc = Ring::localize_powers(&z8, Elem::int(2)).unwrap();
    let r8 = Ring::poly(&loc, &["X"]).unwrap();
    let w = Word::single(&r8, FormKind::Linear, 3, 1, 2, r8.var("X").unwrap()).unwrap();
    assert_eq!(dilate(&w, &Elem::int(2), None).unwrap_err(), Error::NilpotentS);
}

/// Conjugated generators exercise the expansion and the square splitting.
#[test]
fn dilate_conjugated_words() {
    let (_, r) = zs_x(2);
    let mut w = Word::empty(&r, FormKind::Linear, 3);
    w.push(2, 1, r.parse("1/2").unwrap()).unwrap();
    w.push(1, 2, r.parse("X/4").unwrap()).unwrap();
    w.push(3, 2, r.parse("3*X^2").unwrap()).unwrap();
    w.push(2, 1, r.parse("-1/2").unwrap()).unwrap();
    let out = dilate(&w, &Elem::int(2), None).unwrap();
    assert!(no_denominators(&out.word));
    assert!(out.l >= 2);

    let q = Ring::poly(&Ring::rationals(), &["y"]).unwrap();
    let y = q.var("y").unwrap();
    let loc = Ring::localize_powers(&q, y.clone()).unwrap();
    let r = Ring::poly(&loc, &["X"]).unwrap();
    let mut w = Word::empty(&r, FormKind::Symplectic, 6);
    w.push(3, 1, r.parse("1/y").unwrap()).unwrap();
    w.push(1, 3, r.parse("X/y").unwrap()).unwrap();
    w.push(3, 1, r.parse("-1/y").unwrap()).unwrap();
    let out = dilate(&w, &y, None).unwrap();
    assert!(no_denominators(&out.word));
}

#[test]
fn dilate_shift_variant() {
    let (_, r) = zs_x(3);
    let mut w = Word::empty(&r, FormKind::Linear, 3);
    w.push(1, 3, r.parse("X/3").unwrap()).unwrap();
    w.push(3, 2, r.parse("X").unwrap()).unwrap();
    let out = dilate(&w, &Elem::int(3), Some("Y")).unwrap();
    assert_eq!(out.word.ring.vars(), &["X".to_string(), "Y".to_string()]);
    assert!(no_denominators(&out.word));
}

fn cover23() -> ComaximalCover {
    ComaximalCover::new(&Ring::integers(), vec![Elem::int(2), Elem::int(3)], vec![Elem::int(-1), Elem::int(1)]).unwrap()
}

#[test]
fn power_certificate_identity() {
    let z = Ring::integers();
    let c = cover23();
    let p = c.power_certificate(&z, &[3, 2]).unwrap();
    let sum = z.add(&z.mul(&p[0], &z.from_int(8)), &z.mul(&p[1], &z.from_int(9)));
    assert!(z.is_one(&sum));
    assert!(matches!(ComaximalCover::new(&z, vec![Elem::int(2), Elem::int(4)], vec![Elem::int(1), Elem::int(1)]), Err(Error::BadCertificate(_))));
}

#[test]
fn patch_examples() {
    let z = Ring::integers();
    let zx = Ring::poly(&z, &["X"]).unwrap();
    let sigma = elem_gen(&zx, FormKind::Linear, 3, 1, 2, &zx.var("X").unwrap()).unwrap();
    let (_, r2) = zs_x(2);
    let (_, r3) = zs_x(3);
    let w2 = Word::single(&r2, FormKind::Linear, 3, 1, 2, r2.var("X").unwrap()).unwrap();
    let mut w3 = Word::empty(&r3, FormKind::Linear, 3);
    w3.push(2, 3, r3.parse("1/3").unwrap()).unwrap();
    w3.push(1, 2, r3.var("X").unwrap()).unwrap();
    w3.push(1, 3, r3.parse("X/3").unwrap()).unwrap();
    w3.push(2, 3, r3.parse("-1/3").unwrap()).unwrap();
    assert!(w3.eval().eq(&r3, &sigma.map(|e| r3.embed(&zx, e).unwrap())));
    let out = patch(&zx, FormKind::Linear, &sigma, &cover23(), &[w2.clone(), w3]).unwrap();
    assert!(out.eval().eq(&zx, &sigma));

    let id = Mat::identity(&zx, 3);
    let e2 = Word::empty(&r2, FormKind::Linear, 3);
    let e3 = Word::empty(&r3, FormKind::Linear, 3);
    let out = patch(&zx, FormKind::Linear, &id, &cover23(), &[e2.clone(), e3.clone()]).unwrap();
    assert!(out.eval().is_identity(&zx));

    let wrong = Word::single(&r2, FormKind::Linear, 3, 2, 1, r2.var("X").unwrap()).unwrap();
    let w3 = Word::single(&r3, FormKind::Linear, 3, 1, 2, r3.var("X").unwrap()).unwrap();
    assert!(matches!(patch(&zx, FormKind::Linear, &sigma, &cover23(), &[wrong, w3]), Err(Error::BadLocalData(_))));
}

#[test]
fn diagonal_reduce_examples() {
    let z9 = Ring::zmod(9).unwrap();
    let three = vec![z9.from_int(3)];
    let out = diagonal_reduce(&z9, &Mat::identity(&z9, 3), &three, FormKind::Linear).unwrap();
    assert!(out.eps.is_empty());
    assert!(out.d.is_identity(&z9));

    let mut w = Word::empty(&z9, FormKind::Linear, 3);
    w.push(1, 2, z9.from_int(3)).unwrap();
    w.push(2, 1, z9.from_int(6)).unwrap();
    let beta = w.eval();
    let out = diagonal_reduce(&z9, &beta, &three, FormKind::Linear).unwrap();
    assert!(beta.mul(&z9, &out.eps.eval()).eq(&z9, &out.d));
    let mut prod = z9.one();
    for i in 0..3 {
        let d = out.d.get(i, i);
        assert!(ideal_contains(&z9, &three, &z9.sub(d, &z9.one())).unwrap());
        prod = z9.mul(&prod, d);
    }
    assert!(z9.is_one(&prod));

    let beta = elem_gen(&z9, FormKind::Symplectic, 6, 1, 3, &z9.from_int(3)).unwrap();
    let out = diagonal_reduce(&z9, &beta, &three, FormKind::Symplectic).unwrap();
    assert_eq!(out.eps.len(), 1);
    assert_eq!((out.eps.gens[0].i, out.eps.gens[0].j), (1, 3));
    assert!(z9.eq(&out.eps.gens[0].value(&z9), &z9.from_int(-3)));
    assert!(out.d.is_identity(&z9));

    let bad = elem_gen(&z9, FormKind::Linear, 3, 1, 2, &z9.one()).unwrap();
    assert_eq!(diagonal_reduce(&z9, &bad, &three, FormKind::Linear).unwrap_err(), Error::NotCongruentToIdentity);
    let z12 = Ring::zmod(12).unwrap();
    assert!(matches!(diagonal_reduce(&z12, &Mat::identity(&z12, 3), &[], FormKind::Linear), Err(Error::NotLocalRing(_))));
}

#[test]
fn congruence_commutator_example() {
    let z = Ring::integers();
    let r = Ring::localize(&z, MultSet::OnePlus(Elem::int(2))).unwrap();
    let ninth = r.is_unit(&r.from_int(9)).unwrap().unwrap();
    let d = Mat::diagonal(&r, &[r.from_int(9), r.one(), ninth]);
    let (w, level) = congruence_commutator(&r, FormKind::Linear, 1, 2, &r.one(), &r.from_int(2), &d, 3, "X").unwrap();
    assert_eq!(level, 2);
    assert_eq!(w.len(), 1);
    let rx = &w.ring;
    assert!(rx.eq(&w.gens[0].value(rx), &rx.parse("-4*X").unwrap()));

    let (w, _) = congruence_commutator(&r, FormKind::Linear, 1, 2, &r.one(), &r.from_int(2), &Mat::identity(&r, 3), 3, "X").unwrap();
    assert!(w.is_empty());
    assert_eq!(
        congruence_commutator(&r, FormKind::Linear, 1, 2, &r.one(), &r.from_int(2), &d, 1, "X").unwrap_err(),
        Error::InsufficientCongruence(1)
    );
    let nd = Mat::identity(&r, 3).add(&r, &Mat::from_rows(vec![vec![r.zero(), r.one(), r.zero()], vec![r.zero(); 3], vec![r.zero(); 3]]).unwrap());
    assert_eq!(congruence_commutator(&r, FormKind::Linear, 1, 2, &r.one(), &r.from_int(2), &nd, 3, "X").unwrap_err(), Error::NotDiagonal);
}

#[test]
fn nilpotent_power_examples() {
    let z8 = Ring::zmod(8).unwrap();
    let two = z8.from_int(2);
    let alpha = Mat::from_rows(vec![vec![two.clone(), two.clone()], vec![two.clone(), two.clone()]]).unwrap();
    assert_eq!(nilpotent_power(&z8, &alpha).unwrap(), 2);
    assert_eq!(nilpotent_power(&z8, &Mat::zero(&z8, 2)).unwrap(), 1);
    let z = Ring::integers();
    let upper = Mat::from_rows(vec![
        vec![z.zero(), z.from_int(5), z.from_int(-2)],
        vec![z.zero(), z.zero(), z.from_int(7)],
        vec![z.zero(), z.zero(), z.zero()],
    ])
    .unwrap();
    assert_eq!(nilpotent_power(&z, &upper).unwrap(), 3);
    assert_eq!(nilpotent_power(&z, &Mat::identity(&z, 2)).unwrap_err(), Error::EntryNotNilpotent(1, 1));
}

#[test]
fn nilpotent_power_exhaustive_z8() {
    let z8 = Ring::zmod(8).unwrap();
    let nil = [0, 2, 4, 6];
    for a in nil {
        for b in nil {
            for c in nil {
                for d in nil {
                    let m = Mat::from_rows(vec![vec![z8.from_int(a), z8.from_int(b)], vec![z8.from_int(c), z8.from_int(d)]]).unwrap();
                    let e = nilpotent_power(&z8, &m).unwrap();
                    // l <= 3, r = 2: 2^4 > 12
                    assert!(e <= 16);
                    assert!(m.pow(&z8, e).eq(&z8, &Mat::zero(&z8, 2)));
                    if e > 1 {
                        assert!(!m.pow(&z8, e - 1).eq(&z8, &Mat::zero(&z8, 2)));
                    }
                }
            }
        }
    }
}

#[test]
fn nil_homotopy_examples() {
    let z8 = Ring::zmod(8).unwrap();
    let theta = nil_homotopy(&z8, FormKind::Linear, &Mat::identity(&z8, 3), "X").unwrap();
    assert!(theta.is_identity(&Ring::poly(&z8, &["X"]).unwrap()));
    let tau = elem_gen(&z8, FormKind::Linear, 3, 1, 2, &z8.from_int(2)).unwrap();
    let theta = nil_homotopy(&z8, FormKind::Linear, &tau, "X").unwrap();
    let zx = Ring::poly(&z8, &["X"]).unwrap();
    assert!(zx.eq(theta.get(0, 1), &zx.parse("2*X").unwrap()));
    let not_unip = elem_gen(&z8, FormKind::Linear, 3, 1, 2, &z8.one()).unwrap();
    assert_eq!(nil_homotopy(&z8, FormKind::Linear, &not_unip, "X").unwrap_err(), Error::NotUnipotentModNil);

    let mut w = Word::empty(&z8, FormKind::Symplectic, 4);
    w.push(1, 3, z8.from_int(2)).unwrap();
    w.push(3, 1, z8.from_int(2)).unwrap();
    assert_eq!(nil_homotopy(&z8, FormKind::Symplectic, &w.eval(), "X").unwrap_err(), Error::FormNotPreserved);
}

#[test]
fn lift_mod_nil_examples() {
    let z8 = Ring::zmod(8).unwrap();
    let z2 = Ring::zmod(2).unwrap();
    let w = Word::single(&z8, FormKind::Linear, 3, 1, 2, z8.from_int(3)).unwrap();
    let out = lift_mod_nil(&z8, FormKind::Linear, &w.eval(), &[z8.zero()], &w).unwrap();
    assert_eq!(out.len(), 1);

    let alpha = elem_gen(&z8, FormKind::Linear, 3, 1, 2, &z8.from_int(3)).unwrap();
    let bar = Word::single(&z2, FormKind::Linear, 3, 1, 2, z2.one()).unwrap();
    let out = lift_mod_nil(&z8, FormKind::Linear, &alpha, &[z8.from_int(2)], &bar).unwrap();
    assert!(out.eval().eq(&z8, &alpha));
    assert!(z8.eq(&out.gens[0].value(&z8), &z8.one()));

    let alpha = Mat::diagonal(&z8, &[z8.from_int(3), z8.from_int(3), z8.one()]);
    let out = lift_mod_nil(&z8, FormKind::Linear, &alpha, &[z8.from_int(2)], &Word::empty(&z2, FormKind::Linear, 3)).unwrap();
    assert!(out.eval().eq(&z8, &alpha));
    assert_eq!(out.len(), 4);

    let wrong = Word::single(&z2, FormKind::Linear, 3, 2, 1, z2.one()).unwrap();
    assert!(matches!(lift_mod_nil(&z8, FormKind::Linear, &alpha, &[z8.from_int(2)], &wrong), Err(Error::BadWord(_))));
}

#[test]
fn whitehead_template_all_kinds() {
    let z25 = Ring::zmod(25).unwrap();
    let u = z25.from_int(6);
    let ui = z25.is_unit(&u).unwrap().unwrap();
    for kind in [FormKind::Linear, FormKind::Symplectic, FormKind::Orthogonal] {
        for (i, j) in roots(kind, 6) {
            if i == j || (!kind.is_linear() && j == sigma(i)) {
                continue;
            }
            let m = whitehead_word(&z25, kind, 6, i, j, &u).unwrap().eval();
            assert!(m.is_diagonal(&z25));
            assert!(z25.eq(m.get(i - 1, i - 1), &u));
            assert!(z25.eq(m.get(j - 1, j - 1), &ui));
        }
    }
}

/// Random I-congruent generator word times an admissible diagonal.
fn random_beta(ring: &Ring, kind: FormKind, n: usize, p: i64, picks: &[(usize, i64)], units: &[i64]) -> Mat {
    let pos = roots(kind, n);
    let mut w = Word::empty(ring, kind, n);
    for &(k, a) in picks {
        let (i, j) = pos[k % pos.len()];
        w.push(i, j, ring.from_int(p * a)).unwrap();
    }
    let unit = |k: usize| ring.from_int(1 + p * units[k % units.len()]);
    let inv = |e: &Elem| ring.is_unit(e).unwrap().unwrap();
    let mut d = vec![ring.one(); n];
    if kind.is_linear() {
        let mut prod = ring.one();
        for (k, dk) in d.iter_mut().enumerate().take(n - 1) {
            *dk = unit(k);
            prod = ring.mul(&prod, dk);
        }
        d[n - 1] = inv(&prod);
    } else {
        for k in (0..n).step_by(2) {
            d[k] = unit(k);
            d[k + 1] = inv(&d[k]);
        }
    }
    w.eval().mul(ring, &Mat::diagonal(ring, &d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn diagonal_reduction_invariants(
        p in prop::sample::select(vec![3i64, 5]),
        shape in 0usize..5,
        picks in prop::collection::vec((0usize..100, -4i64..=4), 0..6),
        units in prop::collection::vec(-4i64..=4, 1..6),
    ) {
        let ring = Ring::zmod((p * p) as u64).unwrap();
        let (kind, n) = match shape {
            0 => (FormKind::Linear, 3),
            1 => (FormKind::Linear, 4),
            2 => (FormKind::Linear, 5),
            3 => (FormKind::Symplectic, 6),
            _ => (FormKind::Orthogonal, 6),
        };
        let beta = random_beta(&ring, kind, n, p, &picks, &units);
        let ideal = vec![ring.from_int(p)];
        let out = diagonal_reduce(&ring, &beta, &ideal, kind).unwrap();
        prop_assert!(beta.mul(&ring, &out.eps.eval()).eq(&ring, &out.d));
        for g in &out.eps.gens {
            prop_assert!(ideal_contains(&ring, &ideal, &g.param).unwrap());
        }
        for i in 1..=n {
            prop_assert!(ring.is_unit(out.d.get(i - 1, i - 1)).unwrap().is_some());
            if !kind.is_linear() {
                prop_assert!(ring.is_one(&ring.mul(out.d.get(sigma(i) - 1, sigma(i) - 1), out.d.get(i - 1, i - 1))));
            }
        }
    }

    #[test]
    fn congruence_commutator_matches_literal(
        a in -5i64..=5,
        lam in prop::collection::vec(-3i64..=3, 3),
        l in 2u32..=4,
        s in prop::sample::select(vec![2i64, 3]),
        ij in 0usize..6,
    ) {
        let r = Ring::localize(&Ring::integers(), MultSet::OnePlus(Elem::int(s))).unwrap();
        let sl = s.pow(l);
        let d1 = r.from_int(1 + sl * lam[0]);
        let d2 = r.from_int(1 + sl * lam[1]);
        let inv = |e: &Elem| r.is_unit(e).unwrap();
        prop_assume!(inv(&d1).is_some() && inv(&d2).is_some());
        let d3 = inv(&r.mul(&d1, &d2)).unwrap();
        let d = Mat::diagonal(&r, &[d1, d2, d3]);
        let (i, j) = roots(FormKind::Linear, 3)[ij];
        let (w, level) = congruence_commutator(&r, FormKind::Linear, i, j, &r.from_int(a), &r.from_int(s), &d, l, "X").unwrap();
        prop_assert_eq!(level, l - 1);
        prop_assert!(w.len() <= 1);
    }
}
