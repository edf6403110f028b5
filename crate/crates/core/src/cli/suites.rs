//! Randomized property suites. Cases are drawn from a ChaCha8 stream seeded
//! by the caller, so `(name, seed, max_size)` determines the report byte for
//! byte. Reports carry no timing data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::scenario::run_scenario_str;
use super::{Check, Report};
use crate::commcalc::{commutator_relation, commutator_word, conjugation_expand, split_square, touches_one};
use crate::error::{Error, Result};
use crate::lgp::{congruence_commutator, diagonal_reduce, dilate, nil_homotopy, nilpotent_power, patch, ComaximalCover};
use crate::matform::{check_membership, commutator, elem_gen, form_value, roots, sigma, standard_form, FormKind, Mat, Word};
use crate::rings::{stable_range_holds, Elem, MultSet, Node, Ring};
use crate::transvect::{elem_transvection, make_transvection, ElemTransvection, ModuleP, QModule, TransvectionData, UnimodularCert};

type SuiteFn = fn(&mut Runner) -> Result<()>;
type Outcome = Vec<(&'static str, bool)>;

const SUITES: &[(&str, SuiteFn)] = &[
    ("ring-axioms", ring_axioms),
    ("generator-soundness", generator_soundness),
    ("standard-form", standard_form_suite),
    ("word-homomorphism", word_homomorphism),
    ("form-preservation", form_preservation),
    ("elem-transvection", elem_transvection_suite),
    ("commutator-relation", commutator_relation_suite),
    ("split-square", split_square_suite),
    ("conjugation-expansion", conjugation_expansion),
    ("length-growth", length_growth),
    ("dilation-soundness", dilation_soundness),
    ("patch-soundness", patch_soundness),
    ("diagonal-reduction", diagonal_reduction),
    ("congruence-commutator", congruence_commutator_suite),
    ("nilpotent-power", nilpotent_power_suite),
    ("nil-homotopy", nil_homotopy_suite),
    ("stable-range", stable_range),
    ("reproducibility", reproducibility),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// Run a registered suite. `max_size` bounds the magnitude of random
/// parameters.
pub fn run_suite(name: &str, seed: u64, max_size: u32) -> Result<Report> {
    let f = SUITES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))?
        .1;
    let mut runner = Runner::new(seed, max_size);
    f(&mut runner)?;
    Ok(runner.finish(name, seed, max_size))
}

/// Case bookkeeping: per-check tallies and the first counterexample.
pub struct Runner {
    pub rng: ChaCha8Rng,
    pub size: i64,
    cases: usize,
    failures: usize,
    first: Option<Value>,
    tallies: Vec<(&'static str, usize, usize)>,
}

impl Runner {
    fn new(seed: u64, max_size: u32) -> Runner {
        Runner {
            rng: ChaCha8Rng::seed_from_u64(seed),
            size: i64::from(max_size.max(1)),
            cases: 0,
            failures: 0,
            first: None,
            tallies: Vec::new(),
        }
    }

    fn tally(&mut self, name: &'static str, ok: bool) {
        let pos = match self.tallies.iter().position(|t| t.0 == name) {
            Some(p) => p,
            None => {
                self.tallies.push((name, 0, 0));
                self.tallies.len() - 1
            }
        };
        let t = &mut self.tallies[pos];
        t.1 += usize::from(ok);
        t.2 += 1;
    }

    fn record(&mut self, case: impl FnOnce() -> Value, outcome: Result<Outcome>) {
        self.cases += 1;
        let failed: Vec<String> = match outcome {
            Ok(list) => {
                self.tally("no-error", true);
                let mut bad = Vec::new();
                for (name, ok) in list {
                    self.tally(name, ok);
                    if !ok {
                        bad.push(name.to_string());
                    }
                }
                bad
            }
            Err(e) => {
                self.tally("no-error", false);
                vec![format!("error: {e}")]
            }
        };
        if !failed.is_empty() {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(json!({ "case": case(), "failed": failed }));
            }
        }
    }

    fn finish(self, name: &str, seed: u64, max_size: u32) -> Report {
        let checks = self
            .tallies
            .iter()
            .map(|&(n, ok, total)| Check::new(n, ok == total, format!("{ok}/{total}")))
            .collect();
        let witness = json!({
            "suite": name,
            "seed": seed,
            "max_size": max_size,
            "cases": self.cases,
            "failures": self.failures,
            "first_counterexample": self.first,
        });
        Report::from_checks(witness, checks)
    }

    fn int(&mut self) -> i64 {
        self.rng.gen_range(-self.size..=self.size)
    }

    fn nonzero(&mut self) -> i64 {
        let v = self.rng.gen_range(1..=self.size);
        if self.rng.gen_bool(0.5) {
            v
        } else {
            -v
        }
    }

    fn pick<T: Clone>(&mut self, items: &[T]) -> T {
        items[self.rng.gen_range(0..items.len())].clone()
    }
}

/// A random element of any constructible ring, with integer parts bounded
/// by `size`.
pub fn random_elem(ring: &Ring, rng: &mut impl Rng, size: i64) -> Elem {
    let size = size.max(1);
    match ring.node() {
        Node::Integers => ring.from_int(rng.gen_range(-size..=size)),
        Node::Rationals => ring.from_ratio(rng.gen_range(-size..=size), rng.gen_range(1..=size)).expect("nonzero denominator"),
        Node::Zmod(_) => ring.from_int(rng.gen_range(0..=i64::from(u32::MAX))),
        Node::Poly { coeff, vars } => {
            let mut acc = ring.zero();
            for _ in 0..rng.gen_range(0..=3) {
                let mut t = ring.from_parent(&random_elem(coeff, rng, size));
                for v in vars {
                    let x = ring.var(v).expect("own variable");
                    t = ring.mul(&t, &ring.pow(&x, rng.gen_range(0..=2)));
                }
                acc = ring.add(&acc, &t);
            }
            acc
        }
        Node::Quotient { parent, var, modulus } => {
            let t = ring.var(var).expect("own variable");
            let (mut acc, mut p) = (ring.zero(), ring.one());
            for _ in 1..modulus.len() {
                acc = ring.add(&acc, &ring.mul(&ring.from_parent(&random_elem(parent, rng, size)), &p));
                p = ring.mul(&p, &t);
            }
            acc
        }
        Node::Localize { parent, mult } => {
            let num = ring.from_parent(&random_elem(parent, rng, size));
            let den = match mult {
                MultSet::Powers(s) => parent.pow(s, rng.gen_range(0..=2)),
                MultSet::OnePlus(s) => parent.add(&parent.one(), &parent.mul(s, &random_elem(parent, rng, size))),
            };
            ring.divide(&num, &ring.from_parent(&den)).unwrap_or(num)
        }
        Node::QuadExt { parent, .. } => {
            let t = ring.var("t").expect("extension generator");
            let a = ring.from_parent(&random_elem(parent, rng, size));
            let b = ring.from_parent(&random_elem(parent, rng, size));
            ring.add(&a, &ring.mul(&b, &t))
        }
    }
}

fn random_word(run: &mut Runner, ring: &Ring, kind: FormKind, n: usize, len: usize) -> Result<Word> {
    let pos = roots(kind, n);
    let mut w = Word::empty(ring, kind, n);
    for _ in 0..len {
        let (i, j) = run.pick(&pos);
        let a = random_elem(ring, &mut run.rng, run.size);
        w.push(i, j, a)?;
    }
    Ok(w)
}

fn int_word(run: &mut Runner, ring: &Ring, kind: FormKind, n: usize, len: usize) -> Result<Word> {
    let pos = roots(kind, n);
    let mut w = Word::empty(ring, kind, n);
    for _ in 0..len {
        let (i, j) = run.pick(&pos);
        let a = run.nonzero();
        w.push(i, j, ring.from_int(a))?;
    }
    Ok(w)
}

// ---- rings ----------------------------------------------------------------

fn axiom_rings() -> Result<Vec<Ring>> {
    let z = Ring::integers();
    let q = Ring::rationals();
    let qy = Ring::poly(&q, &["y"])?;
    let y = qy.var("y")?;
    Ok(vec![
        z.clone(),
        q.clone(),
        Ring::zmod(12)?,
        Ring::poly(&Ring::zmod(9)?, &["x"])?,
        Ring::poly(&z, &["x", "y"])?,
        Ring::quotient(&q, "t", vec![q.one(), q.zero(), q.one()])?,
        Ring::localize_powers(&z, Elem::int(2))?,
        Ring::localize(&z, MultSet::OnePlus(Elem::int(3)))?,
        Ring::localize_powers(&qy, y)?,
        Ring::quad_ext(&z, Elem::int(-1))?,
        Ring::quad_ext(&Ring::zmod(5)?, Elem::int(2))?,
    ])
}

fn ring_axioms(run: &mut Runner) -> Result<()> {
    for ring in axiom_rings()? {
        for _ in 0..15 {
            let a = random_elem(&ring, &mut run.rng, run.size);
            let b = random_elem(&ring, &mut run.rng, run.size);
            let c = random_elem(&ring, &mut run.rng, run.size);
            let k = run.int();
            let sub_val = random_elem(&ring, &mut run.rng, run.size);
            let r = &ring;
            let outcome = (|| -> Result<Outcome> {
                let eq = |x: &Elem, y: &Elem| r.eq(x, y);
                let assoc = eq(&r.add(&r.add(&a, &b), &c), &r.add(&a, &r.add(&b, &c)))
                    && eq(&r.mul(&r.mul(&a, &b), &c), &r.mul(&a, &r.mul(&b, &c)));
                let comm = eq(&r.add(&a, &b), &r.add(&b, &a)) && eq(&r.mul(&a, &b), &r.mul(&b, &a));
                let distrib = eq(&r.mul(&a, &r.add(&b, &c)), &r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
                let ident = eq(&r.mul(&r.one(), &a), &a) && eq(&r.add(&a, &r.zero()), &a) && r.is_zero(&r.add(&a, &r.neg(&a)));
                let inv = eq(&r.conj(&r.conj(&a)), &a)
                    && eq(&r.conj(&r.mul(&a, &b)), &r.mul(&r.conj(&a), &r.conj(&b)))
                    && eq(&r.conj(&r.add(&a, &b)), &r.add(&r.conj(&a), &r.conj(&b)))
                    && eq(&r.conj(&r.from_int(k)), &r.from_int(k));
                let json = eq(&r.from_json(&r.to_json(&a))?, &a);
                let equality = eq(&a, &a) && eq(&a, &b) == eq(&b, &a) && eq(&r.sub(&r.add(&a, &b), &b), &a);
                let units = match r.is_unit(&a) {
                    Ok(Some(ai)) => r.is_one(&r.mul(&a, &ai)),
                    _ => true,
                };
                let nil = match r.is_nilpotent(&a) {
                    Ok(Some(l)) => r.is_zero(&r.pow(&a, l)) && !r.is_zero(&r.pow(&a, l.saturating_sub(1))),
                    _ => true,
                };
                let subst = match r.vars().first() {
                    Some(v) => {
                        let s = |x: &Elem| r.substitute(x, v, &sub_val);
                        eq(&s(&r.mul(&a, &b))?, &r.mul(&s(&a)?, &s(&b)?)) && eq(&s(&r.add(&a, &b))?, &r.add(&s(&a)?, &s(&b)?))
                    }
                    None => true,
                };
                Ok(vec![
                    ("associativity", assoc),
                    ("commutativity", comm),
                    ("distributivity", distrib),
                    ("identities", ident),
                    ("involution", inv),
                    ("json-roundtrip", json),
                    ("equality", equality),
                    ("units", units),
                    ("nilpotents", nil),
                    ("substitution", subst),
                ])
            })();
            run.record(|| json!({ "ring": r.to_string(), "a": r.to_json(&a), "b": r.to_json(&b), "c": r.to_json(&c) }), outcome);
        }
    }
    Ok(())
}

// ---- matrices and words ---------------------------------------------------

fn generator_soundness(run: &mut Runner) -> Result<()> {
    let rings = [Ring::rationals(), Ring::zmod(25)?, Ring::poly(&Ring::zmod(9)?, &["x"])?];
    let shapes: &[(FormKind, &[usize])] = &[
        (FormKind::Linear, &[3, 4, 6, 8]),
        (FormKind::Symplectic, &[4, 6, 8]),
        (FormKind::Orthogonal, &[4, 6, 8]),
    ];
    for ring in &rings {
        for &(kind, sizes) in shapes {
            for &n in sizes {
                for (i, j) in roots(kind, n) {
                    for _ in 0..50 {
                        let a = random_elem(ring, &mut run.rng, run.size);
                        let outcome = (|| -> Result<Outcome> {
                            let g = elem_gen(ring, kind, n, i, j, &a)?;
                            let gi = elem_gen(ring, kind, n, i, j, &ring.neg(&a))?;
                            Ok(vec![
                                ("membership", check_membership(ring, &g, kind, true)),
                                ("det-one", ring.is_one(&g.det(ring))),
                                ("inverse", g.mul(ring, &gi).is_identity(ring)),
                            ])
                        })();
                        run.record(|| json!({ "ring": ring.to_string(), "kind": kind, "n": n, "i": i, "j": j, "a": ring.to_json(&a) }), outcome);
                    }
                }
            }
        }
    }
    Ok(())
}

fn standard_form_suite(run: &mut Runner) -> Result<()> {
    for ring in [Ring::integers(), Ring::rationals(), Ring::zmod(9)?] {
        for kind in [FormKind::Symplectic, FormKind::Orthogonal] {
            for n in [2, 4, 6, 8] {
                let outcome = (|| -> Result<Outcome> {
                    let psi = standard_form(kind, n, &ring)?;
                    let id = Mat::identity(&ring, n);
                    let (sym, sq) = match kind {
                        FormKind::Symplectic => (psi.transpose().eq(&ring, &psi.scale(&ring, &ring.from_int(-1))), id.scale(&ring, &ring.from_int(-1))),
                        _ => (psi.transpose().eq(&ring, &psi), id),
                    };
                    Ok(vec![("symmetry", sym), ("square", psi.mul(&ring, &psi).eq(&ring, &sq))])
                })();
                run.record(|| json!({ "ring": ring.to_string(), "kind": kind, "n": n }), outcome);
            }
        }
    }
    Ok(())
}

fn word_homomorphism(run: &mut Runner) -> Result<()> {
    let rings = [Ring::rationals(), Ring::poly(&Ring::zmod(9)?, &["x"])?, Ring::localize_powers(&Ring::integers(), Elem::int(2))?];
    let shapes = [(FormKind::Linear, 3), (FormKind::Linear, 4), (FormKind::Symplectic, 4), (FormKind::Orthogonal, 6)];
    for _ in 0..60 {
        let ring = run.pick(&rings);
        let (kind, n) = run.pick(&shapes);
        let (l1, l2) = (run.rng.gen_range(0..=4), run.rng.gen_range(0..=4));
        let w1 = random_word(run, &ring, kind, n, l1)?;
        let w2 = random_word(run, &ring, kind, n, l2)?;
        let outcome = Ok(vec![
            ("concat", w1.concat(&w2).eval().eq(&ring, &w1.eval().mul(&ring, &w2.eval()))),
            ("inverse", w1.eval().mul(&ring, &w1.inverse().eval()).is_identity(&ring)),
        ]);
        run.record(|| json!({ "ring": ring.to_string(), "w1": w1.to_json(), "w2": w2.to_json() }), outcome);
    }
    Ok(())
}

// ---- transvections ----------------------------------------------------------

/// `u, v` in a random Lagrangian (one coordinate per hyperbolic plane) moved
/// by a random elementary matrix `g`; `v` has a `1` in its first chosen
/// coordinate, so a row of `g^{-1}` certifies it. In the symplectic case `u`
/// may also leave the Lagrangian on a plane where `v` vanishes.
fn random_transvection_data(run: &mut Runner, ring: &Ring, kind: FormKind, n: usize) -> Result<(TransvectionData, UnimodularCert)> {
    let planes = n / 2;
    let coords: Vec<usize> = (0..planes).map(|l| 2 * l + run.rng.gen_range(0..2)).collect();
    let mut u0 = vec![ring.zero(); n];
    let mut v0 = vec![ring.zero(); n];
    for (l, &c) in coords.iter().enumerate() {
        u0[c] = ring.from_int(run.int());
        v0[c] = if l == 0 { ring.one() } else { ring.from_int(run.int()) };
    }
    if kind == FormKind::Symplectic && planes > 1 && run.rng.gen_bool(0.5) {
        let l = run.rng.gen_range(1..planes);
        v0[coords[l]] = ring.zero();
        u0[coords[l] ^ 1] = ring.from_int(run.nonzero());
    }
    let len = run.rng.gen_range(0..=3);
    let g = int_word(run, ring, kind, n, len)?;
    let (gm, ginv) = (g.eval(), g.inverse().eval());
    let u = gm.mul_vec(ring, &u0);
    let v = gm.mul_vec(ring, &v0);
    let cert = ginv.rows()[coords[0]].clone();
    let data = match kind {
        FormKind::Symplectic => TransvectionData::Symplectic { u, v },
        _ => TransvectionData::Orthogonal { u, v },
    };
    Ok((data, UnimodularCert::Vector(cert)))
}

fn form_preservation(run: &mut Runner) -> Result<()> {
    let z = Ring::integers();
    for _ in 0..200 {
        let kind = run.pick(&[FormKind::Symplectic, FormKind::Orthogonal]);
        let n = run.pick(&[4usize, 6, 8]);
        let (data, cert) = random_transvection_data(run, &z, kind, n)?;
        let p: Vec<Elem> = (0..n).map(|_| z.from_int(run.int())).collect();
        let p2: Vec<Elem> = (0..n).map(|_| z.from_int(run.int())).collect();
        let desc_data = format!("{data:?}");
        let outcome = (|| -> Result<Outcome> {
            let t = make_transvection(&z, data, cert)?;
            let (tp, tp2) = (t.apply(&p)?, t.apply(&p2)?);
            let preserved = z.eq(&form_value(&z, kind, &tp, &tp2)?, &form_value(&z, kind, &p, &p2)?);
            let same = |a: &[Elem], b: &[Elem]| a.iter().zip(b).all(|(x, y)| z.eq(x, y));
            let round = same(&t.invert().apply(&tp)?, &p) && same(&t.apply(&t.invert().apply(&p)?)?, &p);
            let m = t.matrix();
            let matrix = same(&m.mul_vec(&z, &p), &tp) && check_membership(&z, &m, kind, false);
            Ok(vec![("form-preserved", preserved), ("round-trip", round), ("matrix", matrix)])
        })();
        run.record(|| json!({ "kind": kind, "n": n, "data": desc_data }), outcome);
    }
    Ok(())
}

fn elem_transvection_suite(run: &mut Runner) -> Result<()> {
    let z = Ring::integers();
    for _ in 0..60 {
        let kind = run.pick(&[FormKind::Linear, FormKind::Symplectic, FormKind::Orthogonal]);
        let n = if kind.is_linear() { run.rng.gen_range(2..=4) } else { run.pick(&[4usize, 6]) };
        let mut q: Vec<i64> = (0..n).map(|_| run.int()).collect();
        if kind == FormKind::Orthogonal {
            // isotropic: one nonzero coordinate per plane
            for l in 0..n / 2 {
                let drop = 2 * l + run.rng.gen_range(0..2);
                q[drop] = 0;
            }
        }
        let second = run.rng.gen_bool(0.5);
        let modulus = run.pick(&[4u64, 6, 9]);
        let make = |q: Vec<Elem>| match (kind, second) {
            (FormKind::Linear, false) => ElemTransvection::LinearColumn(q),
            (FormKind::Linear, true) => ElemTransvection::LinearRow(q),
            (FormKind::Symplectic, false) => ElemTransvection::SymplecticA(q),
            (FormKind::Symplectic, true) => ElemTransvection::SymplecticB(q),
            (FormKind::Orthogonal, false) => ElemTransvection::OrthogonalA(q),
            (FormKind::Orthogonal, true) => ElemTransvection::OrthogonalB(q),
        };
        let outcome = (|| -> Result<Outcome> {
            let module = QModule::new(&z, kind, ModuleP::Free(n))?;
            let m = elem_transvection(&module, &make(q.iter().map(|&x| z.from_int(x)).collect()))?;
            let zn = Ring::zmod(modulus)?;
            let module_n = QModule::new(&zn, kind, ModuleP::Free(n))?;
            let mn = elem_transvection(&module_n, &make(q.iter().map(|&x| zn.from_int(x)).collect()))?;
            let reduced = m.try_map(|e| zn.embed(&z, e))?;
            Ok(vec![
                ("det-one", z.is_one(&m.det(&z))),
                ("membership", check_membership(&z, &m, kind, true)),
                ("lift", reduced.eq(&zn, &mn)),
            ])
        })();
        run.record(|| json!({ "kind": kind, "n": n, "q": q, "second_shape": second, "modulus": modulus }), outcome);
    }
    Ok(())
}

// ---- commutator calculus --------------------------------------------------

/// Index triples whose legs and target are long roots: `i, k, j` distinct,
/// and for the form kinds `j != sigma i`, `k` not paired with `i` or `j`.
pub fn long_triple(kind: FormKind, i: usize, k: usize, j: usize) -> bool {
    let distinct = i != k && k != j && i != j;
    if kind.is_linear() {
        return distinct;
    }
    distinct && j != sigma(i) && k != sigma(i) && k != sigma(j)
}

fn commutator_relation_suite(run: &mut Runner) -> Result<()> {
    let zxy = Ring::poly(&Ring::integers(), &["x", "y"])?;
    let (x, y) = (zxy.var("x")?, zxy.var("y")?);
    let xy = zxy.mul(&x, &y);
    let z = Ring::integers();
    let shapes: &[(FormKind, &[usize])] = &[
        (FormKind::Linear, &[3, 4, 5, 6]),
        (FormKind::Symplectic, &[4, 6]),
        (FormKind::Orthogonal, &[4, 6]),
    ];
    for &(kind, sizes) in shapes {
        for &n in sizes {
            for i in 1..=n {
                for k in 1..=n {
                    for j in 1..=n {
                        if !long_triple(kind, i, k, j) {
                            continue;
                        }
                        let specs: Vec<(i64, i64)> = (0..3).map(|_| (run.nonzero(), run.nonzero())).collect();
                        let outcome = (|| -> Result<Outcome> {
                            let (zz, w) = commutator_relation(&zxy, kind, n, i, k, j, &x, &y)?;
                            let Some(zz) = zz else { return Ok(vec![("single-generator", false)]) };
                            let lit = commutator(&zxy, &elem_gen(&zxy, kind, n, i, k, &x)?, &elem_gen(&zxy, kind, n, k, j, &y)?)?;
                            let target = elem_gen(&zxy, kind, n, i, j, &zxy.mul(&zxy.from_int(zz), &xy))?;
                            let exact = lit.eq(&zxy, &target) && w.eval().eq(&zxy, &target);
                            let mut constant = true;
                            for &(a, b) in &specs {
                                let (za, zb) = (z.from_int(a), z.from_int(b));
                                let (zs, _) = commutator_relation(&z, kind, n, i, k, j, &za, &zb)?;
                                let lit = commutator(&z, &elem_gen(&z, kind, n, i, k, &za)?, &elem_gen(&z, kind, n, k, j, &zb)?)?;
                                let want = elem_gen(&z, kind, n, i, j, &z.from_int(zz * a * b))?;
                                constant &= zs == Some(zz) && lit.eq(&z, &want);
                            }
                            Ok(vec![("single-generator", true), ("exact", exact), ("z-constant", constant)])
                        })();
                        run.record(|| json!({ "kind": kind, "n": n, "i": i, "k": k, "j": j }), outcome);
                    }
                }
            }
        }
    }
    Ok(())
}

fn split_square_suite(run: &mut Runner) -> Result<()> {
    let zr = Ring::poly(&Ring::integers(), &["mu", "T"])?;
    let qr = Ring::poly(&Ring::rationals(), &["mu", "T"])?;
    for _ in 0..50 {
        let (kind, n, ring) = match run.rng.gen_range(0..4) {
            0 | 1 => (FormKind::Linear, run.rng.gen_range(3..=5), zr.clone()),
            2 => (FormKind::Symplectic, 6, qr.clone()),
            _ => (FormKind::Orthogonal, 6, qr.clone()),
        };
        let pos: Vec<(usize, usize)> = roots(kind, n).into_iter().filter(|&(i, j)| i != 1 && j != 1).collect();
        let (i, j) = run.pick(&pos);
        let (c, d) = (run.nonzero(), run.int());
        let mu = ring.add(&ring.mul(&ring.from_int(c), &ring.var("mu")?), &ring.from_int(d));
        let outcome = (|| -> Result<Outcome> {
            let w = split_square(&ring, kind, n, i, j, &mu, "T")?;
            let t = ring.var("T")?;
            let want = elem_gen(&ring, kind, n, i, j, &ring.mul(&ring.mul(&t, &t), &mu))?;
            let mut div = true;
            for g in &w.gens {
                div &= ring.min_degree_in(&g.param, "T")? >= 1;
            }
            Ok(vec![
                ("exact", w.eval().eq(&ring, &want)),
                ("row-or-column-one", w.gens.iter().all(|g| touches_one(kind, g.i, g.j))),
                ("divisible-by-t", div),
            ])
        })();
        run.record(|| json!({ "kind": kind, "n": n, "i": i, "j": j, "mu": ring.to_json(&mu) }), outcome);
    }
    Ok(())
}

/// Every parameter divisible by `x^m`, `x = 0` gives the identity.
fn divisibility_checks(w: &Word, x: &str, m: u32) -> Result<(bool, bool)> {
    let r = &w.ring;
    let mut div = true;
    for g in &w.gens {
        div &= r.is_zero(&g.param) || r.min_degree_in(&g.param, x)? >= m;
    }
    let at0 = w.map_params(r, |p| r.substitute(p, x, &r.zero()))?.eval().is_identity(r);
    Ok((div, at0))
}

fn conjugation_expansion(run: &mut Runner) -> Result<()> {
    let zxy = Ring::poly(&Ring::integers(), &["X", "Y"])?;
    let half = Ring::poly(&Ring::localize_powers(&Ring::integers(), Elem::int(2))?, &["X", "Y"])?;
    for _ in 0..100 {
        // the symplectic kind halves short roots, so it runs over Z[1/2]
        let (kind, n, ring) = match run.rng.gen_range(0..5) {
            0..=2 => (FormKind::Linear, run.rng.gen_range(3..=6), zxy.clone()),
            3 => (FormKind::Orthogonal, 6, zxy.clone()),
            _ => (FormKind::Symplectic, 6, half.clone()),
        };
        let r = run.rng.gen_range(0..=3);
        let eps = int_word(run, &ring, kind, n, r)?;
        let (p, q) = run.pick(&roots(kind, n));
        let m = run.rng.gen_range(1..=2u32);
        let c = run.nonzero();
        let outcome = (|| -> Result<Outcome> {
            let y = ring.mul(&ring.from_int(c), &ring.var("Y")?);
            let out = conjugation_expand(&eps, p, q, m, "X", &y)?;
            let param = ring.mul(&ring.pow(&ring.var("X")?, (1 << r) * m), &y);
            let want = eps.eval().mul(&ring, &elem_gen(&ring, kind, n, p, q, &param)?).mul(&ring, &eps.inverse().eval());
            let (div, at0) = divisibility_checks(&out.word, "X", m)?;
            Ok(vec![("exact", out.word.eval().eq(&ring, &want)), ("divisible", div), ("identity-at-zero", at0)])
        })();
        run.record(|| json!({ "ring": ring.to_string(), "eps": eps.to_json(), "p": p, "q": q, "m": m, "c": c }), outcome);
    }
    Ok(())
}

fn length_growth(run: &mut Runner) -> Result<()> {
    let ring = Ring::poly(&Ring::integers(), &["X", "Y"])?;
    for _ in 0..40 {
        let r = run.rng.gen_range(0..=4usize);
        let eps = int_word(run, &ring, FormKind::Linear, 4, r)?;
        let (p, q) = run.pick(&roots(FormKind::Linear, 4));
        let outcome = (|| -> Result<Outcome> {
            let out = conjugation_expand(&eps, p, q, 1, "X", &ring.var("Y")?)?;
            Ok(vec![("growth", out.word.len() <= 16 * 4usize.pow(r as u32))])
        })();
        run.record(|| json!({ "eps": eps.to_json(), "p": p, "q": q }), outcome);
    }
    Ok(())
}

// ---- local-global -----------------------------------------------------------

/// `c_1 x.. c_2 x.. c_2^{-1} c_1^{-1}`: constant letters with `s`-denominators
/// around letters divisible by `X`, so the word is `I` at `X = 0`.
fn random_based_word(run: &mut Runner, base: &Ring, s: &Elem, wr: &Ring, kind: FormKind, n: usize) -> Result<Word> {
    let loc = wr.coeff_ring().expect("A_s[X]").clone();
    let pos = roots(kind, n);
    let x = wr.var("X")?;
    let frac = |run: &mut Runner| -> Result<Elem> {
        let mut c = random_elem(base, &mut run.rng, run.size);
        if base.is_zero(&c) {
            c = base.one();
        }
        let k = run.rng.gen_range(0..=2);
        Ok(wr.from_parent(&loc.divide(&loc.from_parent(&c), &loc.from_parent(&base.pow(s, k)))?))
    };
    let nconst = run.rng.gen_range(0..=2usize);
    let nx = run.rng.gen_range(1..=5 - 2 * nconst);
    let mut consts = Vec::new();
    for _ in 0..nconst {
        consts.push((run.pick(&pos), frac(run)?));
    }
    let mut slots = vec![Vec::new(); nconst + 1];
    for _ in 0..nx {
        let e = run.rng.gen_range(1..=2);
        let a = wr.mul(&frac(run)?, &wr.pow(&x, e));
        let slot = run.rng.gen_range(0..=nconst);
        slots[slot].push((run.pick(&pos), a));
    }
    let mut w = Word::empty(wr, kind, n);
    for ((i, j), a) in &slots[0] {
        w.push(*i, *j, a.clone())?;
    }
    for (t, ((i, j), c)) in consts.iter().enumerate() {
        w.push(*i, *j, c.clone())?;
        for ((i, j), a) in &slots[t + 1] {
            w.push(*i, *j, a.clone())?;
        }
    }
    for ((i, j), c) in consts.iter().rev() {
        w.push(*i, *j, wr.neg(c))?;
    }
    Ok(w)
}

fn dilation_soundness(run: &mut Runner) -> Result<()> {
    let z = Ring::integers();
    let qy = Ring::poly(&Ring::rationals(), &["y"])?;
    let y = qy.var("y")?;
    // Z[1/3] has no 1/2, so its symplectic short roots cannot be halved
    let setups = [
        (z.clone(), Elem::int(2), vec![(FormKind::Linear, 3), (FormKind::Linear, 4), (FormKind::Symplectic, 4)]),
        (z.clone(), Elem::int(3), vec![(FormKind::Linear, 3), (FormKind::Linear, 4), (FormKind::Orthogonal, 6)]),
        (qy.clone(), y, vec![(FormKind::Linear, 3), (FormKind::Symplectic, 4), (FormKind::Orthogonal, 6)]),
    ];
    for case in 0..50 {
        let (base, s, shapes) = &setups[case % setups.len()];
        let (kind, n) = run.pick(shapes);
        let loc = Ring::localize_powers(base, s.clone())?;
        let wr = Ring::poly(&loc, &["X"])?;
        let w = random_based_word(run, base, s, &wr, kind, n)?;
        let outcome = (|| -> Result<Outcome> {
            let out = dilate(&w, s, None)?;
            let g = &out.word.ring;
            let free = g.coeff_ring() == Some(base) && g.vars() == ["X".to_string()];
            let bx = wr.mul(&wr.embed(base, &out.b)?, &wr.var("X")?);
            let want = w.map_params(&wr, |p| wr.substitute(p, "X", &bx))?.eval();
            let got = out.word.map_params(&wr, |p| wr.embed(g, p))?.eval();
            let b_ok = base.try_div(&out.b, &base.pow(s, out.l)).is_some();
            Ok(vec![("denominator-free", free), ("localizes", got.eq(&wr, &want)), ("b-in-ideal", b_ok)])
        })();
        run.record(|| json!({ "ring": wr.to_string(), "word": w.to_json() }), outcome);
    }
    Ok(())
}

fn patch_soundness(run: &mut Runner) -> Result<()> {
    let z = Ring::integers();
    let zx = Ring::poly(&z, &["X"])?;
    let cover = ComaximalCover::new(&z, vec![Elem::int(2), Elem::int(3)], vec![Elem::int(-1), Elem::int(1)])?;
    let locals: Vec<(i64, Ring)> = [2i64, 3]
        .iter()
        .map(|&s| Ok((s, Ring::poly(&Ring::localize_powers(&z, Elem::int(s))?, &["X"])?)))
        .collect::<Result<_>>()?;
    let (kind, n) = (FormKind::Linear, 3);
    let pos = roots(kind, n);
    for _ in 0..25 {
        let mut global = Word::empty(&zx, kind, n);
        for _ in 0..run.rng.gen_range(1..=2) {
            let (i, j) = run.pick(&pos);
            let e = run.rng.gen_range(1..=2);
            let a = zx.mul(&zx.from_int(run.nonzero()), &zx.pow(&zx.var("X")?, e));
            global.push(i, j, a)?;
        }
        // local words: u * prod([u^{-1}, g] g) * u^{-1} with u = ge(c/s)
        let mut local_words = Vec::new();
        for (s, rs) in &locals {
            let allowed: Vec<(usize, usize)> = pos.iter().copied().filter(|&(i, j)| global.gens.iter().all(|g| (g.j, g.i) != (i, j))).collect();
            let (ui, uj) = run.pick(&allowed);
            let cu = rs.from_ratio(run.nonzero(), *s)?;
            let neg = rs.neg(&cu);
            let mut w = Word::single(rs, kind, n, ui, uj, cu.clone())?;
            for g in &global.gens {
                let a = rs.embed(&zx, &g.param)?;
                w.extend(&commutator_word(rs, kind, n, (ui, uj, &neg), (g.i, g.j, &a))?);
                w.push(g.i, g.j, a)?;
            }
            w.push(ui, uj, neg)?;
            local_words.push(w);
        }
        let sigma_m = global.eval();
        let outcome = (|| -> Result<Outcome> {
            let mut local_ok = true;
            for w in &local_words {
                local_ok &= w.eval().eq(&w.ring, &sigma_m.try_map(|e| w.ring.embed(&zx, e))?);
            }
            let out = patch(&zx, kind, &sigma_m, &cover, &local_words)?;
            Ok(vec![("local-data", local_ok), ("exact", out.eval().eq(&zx, &sigma_m)), ("denominator-free", out.ring == zx)])
        })();
        run.record(|| json!({ "sigma": global.to_json(), "local": local_words.iter().map(Word::to_json).collect::<Vec<_>>() }), outcome);
    }
    Ok(())
}

fn diagonal_reduction(run: &mut Runner) -> Result<()> {
    let shapes = [
        (FormKind::Linear, 3),
        (FormKind::Linear, 4),
        (FormKind::Linear, 5),
        (FormKind::Symplectic, 6),
        (FormKind::Orthogonal, 6),
    ];
    for _ in 0..50 {
        let p = run.pick(&[3i64, 5]);
        let ring = Ring::zmod((p * p) as u64)?;
        let (kind, n) = run.pick(&shapes);
        let pos = roots(kind, n);
        let mut w = Word::empty(&ring, kind, n);
        for _ in 0..run.rng.gen_range(0..=5) {
            let (i, j) = run.pick(&pos);
            w.push(i, j, ring.from_int(p * run.int()))?;
        }
        let mut d = vec![ring.one(); n];
        let unit = |run: &mut Runner| ring.from_int(1 + p * run.int());
        let inv = |e: &Elem| ring.is_unit(e).ok().flatten().expect("1 + p r is a unit");
        if kind.is_linear() {
            let mut prod = ring.one();
            for dk in d.iter_mut().take(n - 1) {
                *dk = unit(run);
                prod = ring.mul(&prod, dk);
            }
            d[n - 1] = inv(&prod);
        } else {
            for k in (0..n).step_by(2) {
                d[k] = unit(run);
                d[k + 1] = inv(&d[k]);
            }
        }
        let beta = w.eval().mul(&ring, &Mat::diagonal(&ring, &d));
        let pe = ring.from_int(p);
        let outcome = (|| -> Result<Outcome> {
            let out = diagonal_reduce(&ring, &beta, std::slice::from_ref(&pe), kind)?;
            let diag = out.d.is_diagonal(&ring) && beta.mul(&ring, &out.eps.eval()).eq(&ring, &out.d);
            // in Z/p^2 the maximal ideal is the annihilator of p
            let congruent = out.eps.gens.iter().all(|g| ring.is_zero(&ring.mul(&pe, &g.param)));
            let dd = |i: usize| out.d.get(i - 1, i - 1).clone();
            let units = (1..=n).all(|i| matches!(ring.is_unit(&dd(i)), Ok(Some(_))));
            let pairing = kind.is_linear() || (1..=n).all(|i| ring.is_one(&ring.mul(&dd(sigma(i)), &ring.conj(&dd(i)))));
            Ok(vec![("diagonal", diag), ("congruent", congruent), ("units", units), ("pairing", pairing)])
        })();
        run.record(|| json!({ "ring": ring.to_string(), "kind": kind, "beta": beta.to_json(&ring) }), outcome);
    }
    Ok(())
}

fn congruence_commutator_suite(run: &mut Runner) -> Result<()> {
    let z = Ring::integers();
    let shapes = [(FormKind::Linear, 3), (FormKind::Linear, 4), (FormKind::Symplectic, 4), (FormKind::Orthogonal, 6)];
    for _ in 0..100 {
        let s = run.pick(&[2i64, 3]);
        let r = Ring::localize(&z, MultSet::OnePlus(Elem::int(s)))?;
        let l = run.rng.gen_range(2..=4u32);
        let (kind, n) = run.pick(&shapes);
        let sl = s.pow(l);
        let inv = |e: &Elem| r.is_unit(e).ok().flatten().expect("1 + s^l r is a unit");
        let mut d = vec![r.one(); n];
        if kind.is_linear() {
            let mut prod = r.one();
            for dk in d.iter_mut().take(n - 1) {
                *dk = r.from_int(1 + sl * run.int());
                prod = r.mul(&prod, dk);
            }
            d[n - 1] = inv(&prod);
        } else {
            for k in (0..n).step_by(2) {
                d[k] = r.from_int(1 + sl * run.int());
                d[k + 1] = inv(&d[k]);
            }
        }
        let dm = Mat::diagonal(&r, &d);
        let (i, j) = run.pick(&roots(kind, n));
        let a = r.from_int(run.int());
        let se = r.from_int(s);
        let outcome = (|| -> Result<Outcome> {
            let (w, level) = congruence_commutator(&r, kind, i, j, &a, &se, &dm, l, "X")?;
            let loc = Ring::localize_powers(&r, se.clone())?;
            let lx = Ring::poly(&loc, &["X"])?;
            let a_s = loc.divide(&loc.from_parent(&a), &loc.from_parent(&se))?;
            let g = elem_gen(&lx, kind, n, i, j, &lx.mul(&lx.from_parent(&a_s), &lx.var("X")?))?;
            let lit = commutator(&lx, &g, &dm.try_map(|e| lx.embed(&r, e))?)?;
            let exact = w.map_params(&lx, |p| lx.embed(&w.ring, p))?.eval().eq(&lx, &lit);
            let rx = &w.ring;
            let sl1 = rx.from_parent(&r.pow(&se, l - 1));
            let lvl = level == l - 1
                && w.eval().sub(rx, &Mat::identity(rx, n)).entries.iter().all(|v| rx.try_div(v, &sl1).is_some());
            let ratio = r.divide(&d[i - 1], &d[j - 1])?;
            let lambda = r.try_div(&r.sub(&ratio, &r.one()), &r.pow(&se, l)).ok_or(Error::NotCongruentToIdentity)?;
            let want = r.neg(&r.mul(&r.mul(&a, &r.pow(&se, l - 1)), &lambda));
            let closed = match w.gens.as_slice() {
                [] => r.is_zero(&want),
                [g] => (g.i, g.j) == (i, j) && rx.eq(&g.value(rx), &rx.mul(&rx.from_parent(&want), &rx.var("X")?)),
                _ => false,
            };
            Ok(vec![("exact", exact), ("level", lvl), ("closed-form", closed)])
        })();
        run.record(|| json!({ "s": s, "l": l, "kind": kind, "i": i, "j": j, "a": r.to_json(&a), "d": d.iter().map(|e| r.to_json(e)).collect::<Vec<_>>() }), outcome);
    }
    Ok(())
}

fn nilpotent_power_suite(run: &mut Runner) -> Result<()> {
    let z8 = Ring::zmod(8)?;
    let nil = [0i64, 2, 4, 6];
    let index = |e: &Elem| (1..=8u32).find(|&k| z8.is_zero(&z8.pow(e, k))).expect("nilpotent");
    for code in 0..256usize {
        let v: Vec<i64> = (0..4).map(|t| nil[(code >> (2 * t)) & 3]).collect();
        let m = Mat::from_rows(vec![vec![z8.from_int(v[0]), z8.from_int(v[1])], vec![z8.from_int(v[2]), z8.from_int(v[3])]])?;
        let outcome = (|| -> Result<Outcome> {
            let e = nilpotent_power(&z8, &m)?;
            let l = m.entries.iter().map(index).max().unwrap_or(1);
            let r = 2u32;
            let mut pow2 = 1u32;
            while pow2 <= l * r * r {
                pow2 *= 2;
            }
            let zero = Mat::zero(&z8, 2);
            Ok(vec![
                ("vanishes", m.pow(&z8, e).eq(&z8, &zero)),
                ("minimal", e <= 1 || !m.pow(&z8, e - 1).eq(&z8, &zero)),
                ("bound", e <= pow2),
            ])
        })();
        run.record(|| json!({ "alpha": v }), outcome);
    }
    Ok(())
}

fn nil_homotopy_suite(run: &mut Runner) -> Result<()> {
    for _ in 0..40 {
        let p = run.pick(&[2i64, 3]);
        let ring = Ring::zmod(if p == 2 { 8 } else { 9 })?;
        let kind = run.pick(&[FormKind::Linear, FormKind::Linear, FormKind::Symplectic, FormKind::Orthogonal]);
        let tau = if kind.is_linear() {
            let n = run.rng.gen_range(2..=3);
            let mut t = Mat::identity(&ring, n);
            for r in 0..n {
                for c in 0..n {
                    let v = ring.add(t.get(r, c), &ring.from_int(p * run.int()));
                    t.set(r, c, v);
                }
            }
            t
        } else {
            let (i, j) = run.pick(&roots(kind, 4));
            elem_gen(&ring, kind, 4, i, j, &ring.from_int(p * run.nonzero()))?
        };
        let outcome = (|| -> Result<Outcome> {
            let theta = nil_homotopy(&ring, kind, &tau, "X")?;
            let rx = Ring::poly(&ring, &["X"])?;
            let at = |v: &Elem| theta.try_map(|e| rx.substitute(e, "X", v));
            let det_unit = matches!(rx.is_unit(&theta.det(&rx)), Ok(Some(_)));
            let member = kind.is_linear() || check_membership(&rx, &theta, kind, false);
            Ok(vec![
                ("at-zero", at(&rx.zero())?.is_identity(&rx)),
                ("at-one", at(&rx.one())?.eq(&rx, &tau.map(|e| rx.from_parent(e)))),
                ("det-unit", det_unit),
                ("membership", member),
            ])
        })();
        run.record(|| json!({ "ring": ring.to_string(), "kind": kind, "tau": tau.to_json(&ring) }), outcome);
    }
    Ok(())
}

fn stable_range(run: &mut Runner) -> Result<()> {
    for n in [2u64, 3, 5, 7, 12] {
        let outcome = (|| -> Result<Outcome> { Ok(vec![("holds", stable_range_holds(&Ring::zmod(n)?, 1)?)]) })();
        run.record(|| json!({ "ring": format!("Z/{n}"), "m": 1 }), outcome);
    }
    Ok(())
}

fn reproducibility(run: &mut Runner) -> Result<()> {
    let shapes = [(FormKind::Linear, 3), (FormKind::Symplectic, 4), (FormKind::Orthogonal, 6)];
    for _ in 0..20 {
        let (kind, n) = run.pick(&shapes);
        let (i, j) = run.pick(&roots(kind, n));
        let ring = run.pick(&[json!({"kind": "Q"}), json!({"kind": "Zmod", "n": 25})]);
        let a = format!("{}", run.int());
        let text = json!({ "ring": ring, "task": "elem-gen", "params": { "kind": kind, "n": n, "i": i, "j": j, "a": a } }).to_string();
        let first = run_scenario_str(&text).to_json_string();
        let second = run_scenario_str(&text).to_json_string();
        let passed = first.contains("\"status\": \"pass\"");
        run.record(|| json!({ "scenario": text }), Ok(vec![("byte-identical", first == second), ("scenario-passes", passed)]));
    }
    let seed = run.rng.gen::<u64>();
    let a = run_suite("stable-range", seed, 3)?.to_json_string();
    let b = run_suite("stable-range", seed, 3)?.to_json_string();
    run.record(|| json!({ "suite": "stable-range", "seed": seed }), Ok(vec![("byte-identical", a == b)]));
    Ok(())
}
