//! Local-global machinery: dilation of localized words, patching over a
//! comaximal cover, diagonal reduction over local rings, the congruence
//! commutator identity, nilpotent matrix powers and lifting modulo a
//! nilpotent ideal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::commcalc::{expand_conjugate, split_square, touches_one};
use crate::error::{Error, Result};
use crate::matform::{check_membership, sigma, FormKind, Mat, Word};
use crate::rings::{Elem, MultSet, Ring};

/// A variable name not already used by `ring`.
fn fresh(ring: &Ring, base: &str, also: &[&str]) -> String {
    let taken = |v: &str| ring.vars().iter().any(|x| x == v) || also.contains(&v);
    let mut name = base.to_string();
    while taken(&name) {
        name.push('_');
    }
    name
}

/// `(A, s, X)` for a word over `A_s[X]`.
fn localized_poly_parts(ring: &Ring) -> Result<(Ring, Elem, String)> {
    let bad = || Error::InvalidSpec(format!("expected a ring of the form A_s[X], got {ring}"));
    let (Some(loc), [x]) = (ring.coeff_ring(), ring.vars()) else { return Err(bad()) };
    let (Some(a), Some(MultSet::Powers(s))) = (loc.parent(), loc.mult_set()) else { return Err(bad()) };
    Ok((a.clone(), s.clone(), x.clone()))
}

fn at_zero(word: &Word, x: &str) -> Result<Mat> {
    let r = &word.ring;
    Ok(word.map_params(r, |p| r.substitute(p, x, &r.zero()))?.eval())
}

/// Output of [`dilate`].
#[derive(Clone, Debug)]
pub struct DilationResult {
    /// Word over `A[X]` (or `A[X, Y]` for the shift variant).
    pub word: Word,
    pub l: u32,
    /// `b = s^{2 d l}`.
    pub b: Elem,
    /// `X` was replaced by `X T^{2d}` before expanding.
    pub d: u32,
    pub base: Ring,
}

impl DilationResult {
    pub fn to_json(&self) -> Value {
        json!({
            "word": self.word.to_json(),
            "l": self.l,
            "b": self.base.to_json(&self.b),
            "d": self.d,
        })
    }
}

/// Dilation of a word `w(X)` over `A_s[X]`.
///
/// Without `shift`, requires `w(0) = I` and returns a word over `A[X]`
/// that localizes to `w(bX)`. With `shift = Some(y)`, returns a word over
/// `A[X, y]` that localizes to `w(y + bX) * w(y)^{-1}`.
///
/// `w` is written as `prod_k g_k ge(delta_k) g_k^{-1}` with `g_k` the
/// prefix of constant parts and `delta_k(0) = 0`. After `X -> X T^{2d}`,
/// `d = 2^r` for the longest prefix `r`, each conjugate is expanded so that
/// every parameter is divisible by `T^2`, every generator is moved to row
/// or column 1, and `T -> s^l` clears all denominators.
pub fn dilate(w: &Word, s: &Elem, shift: Option<&str>) -> Result<DilationResult> {
    let pr = &w.ring;
    let (a, s0, x) = localized_poly_parts(pr)?;
    if !a.eq(&s0, s) {
        return Err(Error::InvalidSpec(format!("word is localized at {}, not {}", a.show(&s0), a.show(s))));
    }
    if a.is_nilpotent(s)?.is_some() {
        return Err(Error::NilpotentS);
    }
    if shift.is_none() && !at_zero(w, &x)?.is_identity(pr) {
        return Err(Error::NotBasedAtIdentity);
    }
    if shift == Some(x.as_str()) {
        return Err(Error::InvalidSpec("shift variable must differ from the word's variable".into()));
    }
    let loc = pr.coeff_ring().expect("checked").clone();
    let t = fresh(pr, "T", &shift.into_iter().collect::<Vec<_>>());
    let mut names = vec![x.clone()];
    names.extend(shift.map(str::to_string));
    let outer = Ring::poly_owned(&loc, names.clone())?;
    names.push(t.clone());
    let wr = Ring::poly_owned(&loc, names.clone())?;
    let xv = wr.var(&x)?;
    let tv = wr.var(&t)?;

    // prefixes of constant parts and the increments delta_k
    let mut prefix = Word::empty(&wr, w.kind, w.n);
    let mut pieces = Vec::new();
    for g in &w.gens {
        let ak = wr.embed(pr, &g.value(pr))?;
        let (ck, dk) = match shift {
            None => {
                let c = wr.substitute(&ak, &x, &wr.zero())?;
                let d = wr.sub(&ak, &c);
                (c, d)
            }
            Some(y) => {
                let yv = wr.var(y)?;
                let c = wr.substitute(&ak, &x, &yv)?;
                let d = wr.sub(&wr.substitute(&ak, &x, &wr.add(&yv, &xv))?, &c);
                (c, d)
            }
        };
        if !wr.is_zero(&ck) {
            prefix.push(g.i, g.j, ck)?;
        }
        if !wr.is_zero(&dk) {
            pieces.push((prefix.clone(), g.i, g.j, dk));
        }
    }
    let r_max = pieces.iter().map(|p| p.0.len()).max().unwrap_or(0) as u32;
    let e = 1u32 << (r_max + 1);
    let xt = wr.mul(&xv, &wr.pow(&tv, e));
    let t2 = wr.mul(&tv, &tv);

    let mut wt = Word::empty(&wr, w.kind, w.n);
    for (eps, i, j, delta) in &pieces {
        let param = wr.substitute(delta, &x, &xt)?;
        let expanded = expand_conjugate(eps, *i, *j, &t, param, e)?;
        for g in &expanded.gens {
            let p = g.value(&wr);
            if touches_one(w.kind, g.i, g.j) {
                wt.push(g.i, g.j, p)?;
            } else {
                let mu = wr.try_div(&p, &t2).ok_or_else(|| Error::NoDecomposition("parameter not divisible by T^2".into()))?;
                wt.extend(&split_square(&wr, w.kind, w.n, g.i, g.j, &mu, &t)?);
            }
        }
    }

    // largest power of s in a denominator
    let mut k1 = 0u32;
    for g in &wt.gens {
        if wr.min_degree_in(&g.param, &t)? == 0 {
            return Err(Error::NoDecomposition("parameter not divisible by T".into()));
        }
        let Elem::Poly(p) = &g.param else { unreachable!() };
        for (_, c) in p.terms() {
            if let Elem::Pow { exp, .. } = c {
                k1 = k1.max(*exp);
            }
        }
    }
    let l = k1.max(1);
    let sl = wr.pow(&wr.embed(&a, s)?, l);
    let names_ref: Vec<&str> = names[..names.len() - 1].iter().map(String::as_str).collect();
    let global = Ring::poly(&a, &names_ref)?;
    let word = wt.map_params(&global, |p| global.restrict(&wr, &wr.substitute(p, &t, &sl)?))?;
    let b = a.pow(s, l * e);

    // localize and compare
    let back = word.map_params(&outer, |p| outer.embed(&global, p))?;
    let bx = outer.mul(&outer.embed(&a, &b)?, &outer.var(&x)?);
    let lifted = w.map_params(&outer, |p| outer.embed(pr, p))?;
    let want = match shift {
        None => lifted.map_params(&outer, |p| outer.substitute(p, &x, &bx))?.eval(),
        Some(y) => {
            let yv = outer.var(y)?;
            let moved = lifted.map_params(&outer, |p| outer.substitute(p, &x, &outer.add(&yv, &bx)))?;
            let base = lifted.map_params(&outer, |p| outer.substitute(p, &x, &yv))?;
            moved.concat(&base.inverse()).eval()
        }
    };
    if !back.eval().eq(&outer, &want) {
        return Err(Error::NoDecomposition("dilated word does not localize to w(bX)".into()));
    }
    if !at_zero(&word, &x)?.is_identity(&global) {
        return Err(Error::NoDecomposition("dilated word is not the identity at X = 0".into()));
    }
    Ok(DilationResult { word, l, b, d: e / 2, base: a })
}

/// Elements `s_i` with a certificate `sum c_i s_i = 1`.
#[derive(Clone, Debug)]
pub struct ComaximalCover {
    pub s: Vec<Elem>,
    pub cert: Vec<Elem>,
}

impl ComaximalCover {
    pub fn new(ring: &Ring, s: Vec<Elem>, cert: Vec<Elem>) -> Result<ComaximalCover> {
        let c = ComaximalCover { s, cert };
        c.check(ring)?;
        Ok(c)
    }

    pub fn check(&self, ring: &Ring) -> Result<()> {
        if self.s.len() != self.cert.len() || self.s.is_empty() {
            return Err(Error::BadCertificate("cover and certificate lengths differ".into()));
        }
        let sum = self.s.iter().zip(&self.cert).fold(ring.zero(), |acc, (s, c)| ring.add(&acc, &ring.mul(s, c)));
        if !ring.is_one(&sum) {
            return Err(Error::BadCertificate(format!("sum c_i s_i = {}", ring.show(&sum))));
        }
        Ok(())
    }

    /// `c'_i` with `sum c'_i s_i^{n_i} = 1`, read off the multinomial
    /// expansion of `(sum c_i s_i)^K`, `K = sum (n_i - 1) + 1`: every term
    /// has some exponent `e_i >= n_i` and goes to the first such `i`.
    pub fn power_certificate(&self, ring: &Ring, exps: &[u32]) -> Result<Vec<Elem>> {
        self.check(ring)?;
        let k = self.s.len();
        if exps.len() != k || exps.contains(&0) {
            return Err(Error::BadCertificate("one positive exponent per cover element".into()));
        }
        let total: u32 = exps.iter().map(|e| e - 1).sum::<u32>() + 1;
        let cs: Vec<Elem> = self.s.iter().zip(&self.cert).map(|(s, c)| ring.mul(s, c)).collect();
        let mut out = vec![ring.zero(); k];
        let mut e = vec![0u32; k];
        let fact = |n: u32| (1..=n).fold(BigInt::one(), |acc, i| acc * i);
        let kfact = fact(total);
        fn walk(pos: usize, left: u32, e: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
            if pos + 1 == e.len() {
                e[pos] = left;
                f(e);
                return;
            }
            for v in 0..=left {
                e[pos] = v;
                walk(pos + 1, left - v, e, f);
            }
        }
        walk(0, total, &mut e, &mut |e: &[u32]| {
            let i = (0..k).find(|&i| e[i] >= exps[i]).expect("pigeonhole");
            let denom = e.iter().fold(BigInt::one(), |acc, &x| acc * fact(x));
            let mut term = ring.from_bigint(&(&kfact / denom));
            for j in 0..k {
                if j == i {
                    term = ring.mul(&term, &ring.pow(&self.cert[i], e[i]));
                    term = ring.mul(&term, &ring.pow(&self.s[i], e[i] - exps[i]));
                } else {
                    term = ring.mul(&term, &ring.pow(&cs[j], e[j]));
                }
            }
            out[i] = ring.add(&out[i], &term);
        });
        let sum = (0..k).fold(ring.zero(), |acc, i| ring.add(&acc, &ring.mul(&out[i], &ring.pow(&self.s[i], exps[i]))));
        if !ring.is_one(&sum) {
            return Err(Error::BadCertificate("power certificate failed".into()));
        }
        Ok(out)
    }

    pub fn to_json(&self, ring: &Ring) -> Value {
        json!({
            "s": self.s.iter().map(|x| ring.to_json(x)).collect::<Vec<_>>(),
            "cert": self.cert.iter().map(|x| ring.to_json(x)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(ring: &Ring, v: &Value) -> Result<ComaximalCover> {
        let list = |key: &str| -> Result<Vec<Elem>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::BadCertificate(format!("missing `{key}`")))?
                .iter()
                .map(|x| ring.from_json(x))
                .collect()
        };
        ComaximalCover::new(ring, list("s")?, list("cert")?)
    }
}

/// Patch local elementary factorizations of `sigma(X)` (over `A[X]`) into a
/// global one. `local_words[i]` lives over `A_{s_i}[X]`.
///
/// With `b_i = c'_i s_i^{N_i}` summing to 1 and `a_i = b_1 + ... + b_i`,
/// `sigma(X) = prod_{i = k..1} sigma(a_i X) sigma(a_{i-1} X)^{-1}` and each
/// factor comes from the shift dilation of the `i`-th local word.
pub fn patch(ring: &Ring, kind: FormKind, sigma: &Mat, cover: &ComaximalCover, local_words: &[Word]) -> Result<Word> {
    let bad = || Error::InvalidSpec(format!("patching needs a ring A[X], got {ring}"));
    let (Some(a), [x]) = (ring.coeff_ring(), ring.vars()) else { return Err(bad()) };
    cover.check(a)?;
    if local_words.len() != cover.s.len() {
        return Err(Error::BadLocalData(format!("{} local words for {} cover elements", local_words.len(), cover.s.len())));
    }
    let at0 = sigma.try_map(|e| ring.substitute(e, x, &ring.zero()))?;
    if !at0.is_identity(ring) {
        return Err(Error::NotBasedAtIdentity);
    }
    for (i, (lw, s)) in local_words.iter().zip(&cover.s).enumerate() {
        let (la, ls, lx) = localized_poly_parts(&lw.ring).map_err(|e| Error::BadLocalData(format!("word {i}: {e}")))?;
        if la != *a || !a.eq(&ls, s) || lx != *x || lw.kind != kind || lw.n != sigma.n {
            return Err(Error::BadLocalData(format!("word {i} is not over the localization at {}", a.show(s))));
        }
        let local = sigma.try_map(|e| lw.ring.embed(ring, e))?;
        if !lw.eval().eq(&lw.ring, &local) {
            return Err(Error::BadLocalData(format!("word {i} does not evaluate to sigma")));
        }
    }
    let y = fresh(ring, "Y", &[]);
    let dilated: Vec<Result<DilationResult>> = std::thread::scope(|scope| {
        let handles: Vec<_> = local_words
            .iter()
            .zip(&cover.s)
            .map(|(lw, s)| {
                let y = y.as_str();
                scope.spawn(move || dilate(lw, s, Some(y)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("dilation thread panicked")).collect()
    });
    let dilated = dilated.into_iter().collect::<Result<Vec<_>>>()?;
    let exps: Vec<u32> = dilated.iter().map(|d| d.l * 2 * d.d).collect();
    let cprime = cover.power_certificate(a, &exps)?;

    let mut acc = a.zero();
    let mut factors = Vec::new();
    for (i, dr) in dilated.iter().enumerate() {
        let g = &dr.word.ring;
        let cx = g.mul(&g.embed(a, &cprime[i])?, &g.var(x)?);
        let ax = g.mul(&g.embed(a, &acc)?, &g.var(x)?);
        let f = dr.word.map_params(ring, |p| {
            let q = g.substitute_many(p, &[(x.as_str(), cx.clone()), (y.as_str(), ax.clone())])?;
            ring.restrict(g, &q)
        })?;
        factors.push(f);
        acc = a.add(&acc, &a.mul(&cprime[i], &a.pow(&cover.s[i], exps[i])));
    }
    let mut out = Word::empty(ring, kind, sigma.n);
    for f in factors.iter().rev() {
        out.extend(f);
    }
    if !out.eval().eq(ring, sigma) {
        return Err(Error::NoDecomposition("patched word does not evaluate to sigma".into()));
    }
    Ok(out)
}

/// Ideal membership for the rings where it is decidable here.
pub fn ideal_contains(ring: &Ring, gens: &[Elem], x: &Elem) -> Result<bool> {
    if ring.is_zero(x) {
        return Ok(true);
    }
    let nonzero: Vec<&Elem> = gens.iter().filter(|g| !ring.is_zero(g)).collect();
    if nonzero.is_empty() {
        return Ok(false);
    }
    if ring.is_field() {
        return Ok(true);
    }
    if let Some(n) = zmod_modulus(ring).or_else(|| (ring == &Ring::integers()).then(BigInt::zero)) {
        let g = nonzero.iter().fold(n, |acc, e| acc.gcd(int_of(e)));
        return Ok(int_of(x).mod_floor(&g).is_zero());
    }
    for g in nonzero {
        if ring.try_div(x, g).is_some() {
            return Ok(true);
        }
    }
    Err(Error::Undecidable(format!("ideal membership in {ring}")))
}

fn int_of(x: &Elem) -> &BigInt {
    match x {
        Elem::Int(n) => n,
        _ => unreachable!("integer payload expected"),
    }
}

fn zmod_modulus(ring: &Ring) -> Option<BigInt> {
    match ring.spec() {
        crate::rings::RingSpec::Zmod { n } => Some(BigInt::from(n)),
        _ => None,
    }
}

/// Structurally local: a field or `Z/p^k`.
pub fn is_local(ring: &Ring) -> bool {
    if ring.is_field() {
        return true;
    }
    let Some(n) = zmod_modulus(ring) else { return false };
    let mut m = n.abs();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        if (&m % &p).is_zero() {
            while (&m % &p).is_zero() {
                m /= &p;
            }
            return m.is_one();
        }
        p += 1;
    }
    m > BigInt::one()
}

/// Output of [`diagonal_reduce`]: `beta * eval(eps) = d`.
#[derive(Clone, Debug)]
pub struct DiagReduction {
    pub eps: Word,
    pub d: Mat,
}

impl DiagReduction {
    pub fn to_json(&self) -> Value {
        json!({ "eps": self.eps.to_json(), "d": self.d.to_json(&self.eps.ring) })
    }
}

/// Clear the off-diagonal part of `beta` by right multiplication with
/// generators whose parameters lie in the ideal `I` (given by generators).
///
/// Rows are handled in order; for the form kinds a row `p` is cleared
/// outside its pair first, then the entry `(p, sigma p)` by a short root
/// (symplectic) or it vanishes on its own (orthogonal, `2` a unit).
/// Entries of `p` in columns of earlier pairs vanish by form preservation.
pub fn diagonal_reduce(ring: &Ring, beta: &Mat, ideal: &[Elem], kind: FormKind) -> Result<DiagReduction> {
    if !is_local(ring) {
        return Err(Error::NotLocalRing(ring.to_string()));
    }
    let n = beta.n;
    if (kind.is_linear() && n < 3) || (!kind.is_linear() && n < 6) {
        return Err(Error::DimensionMismatch(format!("size {n} is too small for {}", kind.name())));
    }
    for g in ideal {
        if ring.is_unit(g)?.is_some() {
            return Err(Error::NotCongruentToIdentity);
        }
    }
    let diff = beta.sub(ring, &Mat::identity(ring, n));
    for e in &diff.entries {
        if !ideal_contains(ring, ideal, e)? {
            return Err(Error::NotCongruentToIdentity);
        }
    }
    if !check_membership(ring, beta, kind, true) {
        return Err(Error::NotInGroup(format!("beta is not in the {} group", kind.name())));
    }
    let mut m = beta.clone();
    let mut eps = Word::empty(ring, kind, n);
    let mut apply = |m: &mut Mat, i: usize, j: usize, t: Elem| -> Result<()> {
        if !ring.is_zero(&t) {
            Word::apply_gen(ring, kind, m, i, j, &t);
            eps.push(i, j, t)?;
        }
        Ok(())
    };
    let unit_inv = |m: &Mat, r: usize| -> Result<Elem> {
        ring.is_unit(m.get(r - 1, r - 1))?.ok_or_else(|| Error::NotInGroup(format!("pivot ({r},{r}) is not a unit")))
    };
    if kind.is_linear() {
        for r in 1..=n {
            let inv = unit_inv(&m, r)?;
            for j in 1..=n {
                if j != r {
                    let t = ring.neg(&ring.mul(&inv, m.get(r - 1, j - 1)));
                    apply(&mut m, r, j, t)?;
                }
            }
        }
    } else {
        for pair in 0..n / 2 {
            for p in [2 * pair + 1, 2 * pair + 2] {
                let inv = unit_inv(&m, p)?;
                for j in 2 * pair + 3..=n {
                    let t = ring.neg(&ring.mul(&inv, m.get(p - 1, j - 1)));
                    apply(&mut m, p, j, t)?;
                }
                if kind == FormKind::Symplectic {
                    let t = ring.neg(&ring.mul(&inv, m.get(p - 1, sigma(p) - 1)));
                    apply(&mut m, p, sigma(p), t)?;
                }
            }
        }
    }
    let mut checked = beta.clone();
    for g in &eps.gens {
        Word::apply_gen(ring, kind, &mut checked, g.i, g.j, &g.value(ring));
    }
    if !checked.eq(ring, &m) || !m.is_diagonal(ring) {
        return Err(Error::NotInGroup("elimination did not reach a diagonal matrix".into()));
    }
    for g in &eps.gens {
        if !ideal_contains(ring, ideal, &g.param)? {
            return Err(Error::NotCongruentToIdentity);
        }
    }
    for i in 1..=n {
        if ring.is_unit(m.get(i - 1, i - 1))?.is_none() {
            return Err(Error::NotInGroup(format!("diagonal entry {i} is not a unit")));
        }
        if !kind.is_linear() {
            let prod = ring.mul(m.get(sigma(i) - 1, sigma(i) - 1), &ring.conj(m.get(i - 1, i - 1)));
            if !ring.is_one(&prod) {
                return Err(Error::NotInGroup(format!("d_{} d_{i}* != 1", sigma(i))));
            }
        }
    }
    Ok(DiagReduction { eps, d: m })
}

/// `[ge_ij((a/s) X), D]` for a diagonal `D` over `R` with `d_i d_j^{-1} =
/// 1 + s^l lambda`: equals `ge_ij(-a s^{l-1} lambda X)`, a word over `R[X]`
/// whose evaluation is congruent to `I` modulo `s^{l-1}`. Returns the word
/// and that level. The identity is checked against the literal commutator
/// over `R_s[X]`.
#[allow(clippy::too_many_arguments)]
pub fn congruence_commutator(
    ring: &Ring,
    kind: FormKind,
    i: usize,
    j: usize,
    a: &Elem,
    s: &Elem,
    d: &Mat,
    l: u32,
    x: &str,
) -> Result<(Word, u32)> {
    if l < 2 {
        return Err(Error::InsufficientCongruence(l));
    }
    if !d.is_diagonal(ring) {
        return Err(Error::NotDiagonal);
    }
    let n = d.n;
    crate::matform::check_indices(kind, n, i, j)?;
    let dg = |k: usize| d.get(k - 1, k - 1).clone();
    for k in 1..=n {
        if ring.is_unit(&dg(k))?.is_none() {
            return Err(Error::NotInGroup(format!("d_{k} is not a unit")));
        }
        if !kind.is_linear() && !ring.is_one(&ring.mul(&dg(sigma(k)), &ring.conj(&dg(k)))) {
            return Err(Error::NotInGroup(format!("d_{} d_{k}* != 1", sigma(k))));
        }
    }
    let dj_inv = ring.is_unit(&dg(j))?.expect("checked");
    let ratio = ring.mul(&dg(i), &dj_inv);
    let sl = ring.pow(s, l);
    let lambda = ring
        .try_div(&ring.sub(&ratio, &ring.one()), &sl)
        .ok_or(Error::NotCongruentToIdentity)?;
    let rx = Ring::poly(ring, &[x])?;
    let xv = rx.var(x)?;
    let mut word = Word::empty(&rx, kind, n);
    if !ring.is_zero(&lambda) {
        let coef = ring.neg(&ring.mul(&ring.mul(a, &ring.pow(s, l - 1)), &lambda));
        word.push(i, j, rx.mul(&rx.from_parent(&coef), &xv))?;
    }
    // literal commutator over R_s[X]
    let loc = Ring::localize_powers(ring, s.clone())?;
    let lx = Ring::poly(&loc, &[x])?;
    let a_over_s = loc.mul(&loc.from_parent(a), &loc.is_unit(&loc.from_parent(s))?.ok_or(Error::NilpotentS)?);
    let g = crate::matform::elem_gen(&lx, kind, n, i, j, &lx.mul(&lx.from_parent(&a_over_s), &lx.var(x)?))?;
    let dl = d.try_map(|e| lx.embed(ring, e))?;
    let lit = crate::matform::commutator(&lx, &g, &dl)?;
    let got = word.map_params(&lx, |p| lx.embed(&rx, p))?.eval();
    if !got.eq(&lx, &lit) {
        return Err(Error::NoDecomposition("closed form differs from the literal commutator".into()));
    }
    // congruence level: every entry of eval - I divisible by s^{l-1}
    let level = l - 1;
    let sl1 = rx.from_parent(&ring.pow(s, level));
    let e = word.eval().sub(&rx, &Mat::identity(&rx, n));
    for v in &e.entries {
        if rx.try_div(v, &sl1).is_none() {
            return Err(Error::NoDecomposition("congruence level not reached".into()));
        }
    }
    Ok((word, level))
}

/// Smallest `e` with `alpha^e = 0`. With all entries nilpotent of index at
/// most `l`, `e <= 2^m` for the least `m` with `2^m > l r^2`, and
/// `alpha^{2^m} = 0` is confirmed by squaring. A matrix with some
/// non-nilpotent entry is accepted only if `alpha^r = 0`.
pub fn nilpotent_power(ring: &Ring, alpha: &Mat) -> Result<u32> {
    let r = alpha.n as u32;
    let mut l = 1u32;
    let mut bad = None;
    for row in 0..alpha.n {
        for col in 0..alpha.n {
            match ring.is_nilpotent(alpha.get(row, col))? {
                Some(k) => l = l.max(k),
                None => bad = bad.or(Some((row + 1, col + 1))),
            }
        }
    }
    let cap = match bad {
        None => {
            let mut m = 0u32;
            while (1u64 << m) <= (l as u64) * (r as u64) * (r as u64) {
                m += 1;
            }
            let mut sq = alpha.clone();
            for _ in 0..m {
                sq = sq.mul(ring, &sq);
            }
            if !sq.eq(ring, &Mat::zero(ring, alpha.n)) {
                return Err(Error::NoDecomposition("nilpotency bound violated".into()));
            }
            1u32 << m
        }
        Some(_) => r.max(1),
    };
    let zero = Mat::zero(ring, alpha.n);
    let mut p = alpha.clone();
    for e in 1..=cap {
        if p.eq(ring, &zero) {
            return Ok(e);
        }
        p = p.mul(ring, alpha);
    }
    let (i, j) = bad.unwrap_or((1, 1));
    Err(Error::EntryNotNilpotent(i, j))
}

/// `theta(X) = I + X (tau - I)` over `R[X]` (the variable is `x`).
pub fn nil_homotopy(ring: &Ring, kind: FormKind, tau: &Mat, x: &str) -> Result<Mat> {
    let n = tau.n;
    let gamma = tau.sub(ring, &Mat::identity(ring, n));
    for e in &gamma.entries {
        if ring.is_nilpotent(e)?.is_none() {
            return Err(Error::NotUnipotentModNil);
        }
    }
    let rx = Ring::poly(ring, &[x])?;
    let xv = rx.var(x)?;
    let theta = Mat::identity(&rx, n).add(&rx, &gamma.map(|e| rx.mul(&rx.from_parent(e), &xv)));
    let at = |v: &Elem| theta.try_map(|e| rx.substitute(e, x, v));
    if !at(&rx.zero())?.is_identity(&rx) || !at(&rx.one())?.eq(&rx, &tau.map(|e| rx.from_parent(e))) {
        return Err(Error::NoDecomposition("theta endpoints".into()));
    }
    nilpotent_power(ring, &gamma)?;
    if rx.is_unit(&theta.det(&rx))?.is_none() {
        return Err(Error::NoDecomposition("det theta is not a unit".into()));
    }
    if !kind.is_linear() && !check_membership(&rx, &theta, kind, false) {
        return Err(Error::FormNotPreserved);
    }
    Ok(theta)
}

/// `diag(u, u^{-1})` on the root subgroup of `(i, j)` and its negative,
/// `x(u - 1) x'(1) x(u^{-1} - 1) x'(-u)`.
pub fn whitehead_word(ring: &Ring, kind: FormKind, n: usize, i: usize, j: usize, u: &Elem) -> Result<Word> {
    let inv = ring.is_unit(u)?.ok_or_else(|| Error::NotElementary(format!("{} is not a unit", ring.show(u))))?;
    let one = ring.one();
    let mut w = Word::empty(ring, kind, n);
    if ring.is_one(u) {
        return Ok(w);
    }
    w.push(i, j, ring.sub(u, &one))?;
    w.push(j, i, one.clone())?;
    w.push(i, j, ring.sub(&inv, &one))?;
    w.push(j, i, ring.neg(u))?;
    Ok(w)
}

/// Elementary word for a diagonal matrix (`det = 1`, resp. `d_{sigma i}
/// d_i = 1`), built from [`whitehead_word`] and verified.
pub fn diagonal_word(ring: &Ring, kind: FormKind, d: &Mat) -> Result<Word> {
    let n = d.n;
    let dg = |k: usize| d.get(k - 1, k - 1).clone();
    let mut w = Word::empty(ring, kind, n);
    match kind {
        FormKind::Linear => {
            let mut p = ring.one();
            for k in 1..n {
                p = ring.mul(&p, &dg(k));
                w.extend(&whitehead_word(ring, kind, n, k, k + 1, &p)?);
            }
        }
        FormKind::Symplectic => {
            for k in (1..=n).step_by(2) {
                w.extend(&whitehead_word(ring, kind, n, k, k + 1, &dg(k))?);
            }
        }
        FormKind::Orthogonal => {
            let mut p = ring.one();
            for k in (1..n - 1).step_by(2) {
                p = ring.mul(&p, &dg(k));
                w.extend(&whitehead_word(ring, kind, n, k, k + 2, &p)?);
            }
        }
    }
    if !w.eval().eq(ring, d) {
        return Err(Error::NotElementary(format!("{} is not reached by root subgroup tori", d.show(ring))));
    }
    Ok(w)
}

/// Lift `word_bar` (over `R/I`, `I` nilpotent) to a word over `R`
/// evaluating to `alpha`.
pub fn lift_mod_nil(ring: &Ring, kind: FormKind, alpha: &Mat, ideal: &[Elem], word_bar: &Word) -> Result<Word> {
    let rbar = &word_bar.ring;
    let reduce = |e: &Elem| rbar.embed(ring, e);
    if !alpha.try_map(reduce)?.eq(rbar, &word_bar.eval()) {
        return Err(Error::BadWord("alpha does not reduce to the word".into()));
    }
    let lifted = word_bar.map_params(ring, |p| ring.residue(rbar, p))?;
    if ideal.iter().all(|g| ring.is_zero(g)) {
        if !lifted.eval().eq(ring, alpha) {
            return Err(Error::BadWord("alpha differs from the word".into()));
        }
        return Ok(lifted);
    }
    if !is_local(ring) {
        return Err(Error::NotLocalRing(ring.to_string()));
    }
    for g in ideal {
        if ring.is_nilpotent(g)?.is_none() {
            return Err(Error::NotUnipotentModNil);
        }
    }
    let rho = lifted.eval().inverse(ring)?.mul(ring, alpha);
    let red = diagonal_reduce(ring, &rho, ideal, kind)?;
    // alpha = lifted * D * eps^{-1}
    let mut out = lifted;
    out.extend(&diagonal_word(ring, kind, &red.d)?);
    out.extend(&red.eps.inverse());
    if !out.eval().eq(ring, alpha) {
        return Err(Error::BadWord("lifted word does not evaluate to alpha".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
