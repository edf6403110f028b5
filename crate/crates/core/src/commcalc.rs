//! Commutator calculus on words of elementary generators.
//!
//! Every generator `ge_ij` has a root `w(i) - w(j)`, where for the linear
//! kind `w(i)` is the `i`-th unit vector and for the other kinds
//! `w(2l-1) = +e_l`, `w(2l) = -e_l`. The commutator of two generators whose
//! roots are not opposite is a product of generators on the roots
//! `p alpha + q beta` (`p, q >= 1`). Those products are computed once per
//! position pair by expanding the commutator over `Z[a, b]` and peeling off
//! generators in order of increasing height; the result is checked to
//! reproduce the commutator exactly and then cached.
//!
//! Two consequences used everywhere below:
//!
//! * for the linear kind `[e_ik(x), e_kj(y)] = e_ij(xy)`;
//! * a long root of a symplectic or orthogonal group splits as a sum of
//!   two roots with commutator coefficient `+-1`; a short symplectic root
//!   only with coefficient `+-2`, so halving it needs `1/2`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matform::{check_indices, is_short, pair_sign, sigma, FormKind, Mat, Word};
use crate::rings::{Elem, Ring};

pub type Root = Vec<i32>;

/// Weight of coordinate `i` (1-based).
pub fn weight(kind: FormKind, n: usize, i: usize) -> Root {
    if kind.is_linear() {
        let mut w = vec![0; n];
        w[i - 1] = 1;
        w
    } else {
        let mut w = vec![0; n / 2];
        w[(i - 1) / 2] = if i % 2 == 1 { 1 } else { -1 };
        w
    }
}

pub fn root_of(kind: FormKind, n: usize, i: usize, j: usize) -> Root {
    weight(kind, n, i).iter().zip(weight(kind, n, j)).map(|(a, b)| a - b).collect()
}

/// First generator position (in row-major order) carrying `root`.
pub fn position_of(kind: FormKind, n: usize, root: &[i32]) -> Option<(usize, usize)> {
    crate::matform::roots(kind, n).into_iter().find(|&(i, j)| root_of(kind, n, i, j) == root)
}

fn neg_root(r: &[i32]) -> Root {
    r.iter().map(|x| -x).collect()
}

/// Rewrite `ge_uv(f)` as the same matrix on the paired position.
fn paired(kind: FormKind, u: usize, v: usize, ring: &Ring, f: &Elem) -> (usize, usize, Elem) {
    (sigma(v), sigma(u), ring.mul(&ring.from_int(pair_sign(kind, u, v)), f))
}

/// Put `ge_uv(f)` at position `(i, j)` when both carry the same root.
fn at_position(kind: FormKind, ring: &Ring, (u, v): (usize, usize), f: &Elem, (i, j): (usize, usize)) -> Elem {
    if (u, v) == (i, j) {
        f.clone()
    } else {
        debug_assert_eq!((sigma(v), sigma(u)), (i, j));
        paired(kind, u, v, ring, f).2
    }
}

/// One factor of a commutator formula: `ge_ij(sum coeff * a^pa * b^pb)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormulaTerm {
    pub i: usize,
    pub j: usize,
    pub monomials: Vec<(i64, u32, u32)>,
}

type FormulaKey = (FormKind, usize, (usize, usize), (usize, usize));

fn formula_cache() -> &'static Mutex<HashMap<FormulaKey, Arc<Vec<FormulaTerm>>>> {
    static CACHE: OnceLock<Mutex<HashMap<FormulaKey, Arc<Vec<FormulaTerm>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Factors of `[ge_{g1}(a), ge_{g2}(b)]` in order, derived over `Z[a, b]`.
pub fn commutator_formula(kind: FormKind, n: usize, g1: (usize, usize), g2: (usize, usize)) -> Result<Arc<Vec<FormulaTerm>>> {
    check_indices(kind, n, g1.0, g1.1)?;
    check_indices(kind, n, g2.0, g2.1)?;
    let key = (kind, n, g1, g2);
    if let Some(f) = formula_cache().lock().expect("cache poisoned").get(&key) {
        return Ok(f.clone());
    }
    let alpha = root_of(kind, n, g1.0, g1.1);
    let beta = root_of(kind, n, g2.0, g2.1);
    if alpha == neg_root(&beta) {
        return Err(Error::IndexClash(format!("roots of {g1:?} and {g2:?} are opposite")));
    }
    let zab = Ring::poly(&Ring::integers(), &["a", "b"])?;
    let (a, b) = (zab.var("a")?, zab.var("b")?);
    let mut w = Word::empty(&zab, kind, n);
    w.push(g1.0, g1.1, a.clone())?;
    w.push(g2.0, g2.1, b.clone())?;
    let w = w.concat(&{
        let mut inv = Word::empty(&zab, kind, n);
        inv.push(g1.0, g1.1, zab.neg(&a))?;
        inv.push(g2.0, g2.1, zab.neg(&b))?;
        inv
    });
    let target = w.eval();
    let mut candidates = Vec::new();
    for h in 2..=4i32 {
        for p in 1..h {
            let q = h - p;
            let gamma: Root = alpha.iter().zip(&beta).map(|(x, y)| p * x + q * y).collect();
            if let Some(pos) = position_of(kind, n, &gamma) {
                candidates.push(pos);
            }
        }
    }
    let terms = peel(&zab, kind, n, &target, &candidates)
        .ok_or_else(|| Error::NoDecomposition(format!("commutator of {g1:?} and {g2:?}")))?;
    let out: Vec<FormulaTerm> = terms
        .into_iter()
        .map(|(i, j, f)| {
            let Elem::Poly(p) = &f else { unreachable!() };
            let monomials = p
                .terms()
                .map(|(m, c)| {
                    let Elem::Int(c) = c else { unreachable!() };
                    (i64::try_from(c).expect("small coefficient"), m.0[0], m.0[1])
                })
                .collect();
            FormulaTerm { i, j, monomials }
        })
        .collect();
    let out = Arc::new(out);
    formula_cache().lock().expect("cache poisoned").insert(key, out.clone());
    Ok(out)
}

/// Write `m` as `prod ge_{c_k}(f_k)` over the candidate positions (in the
/// given order) by reading the entry at each position and left-cancelling.
fn peel(ring: &Ring, kind: FormKind, n: usize, m: &Mat, candidates: &[(usize, usize)]) -> Option<Vec<(usize, usize, Elem)>> {
    let mut rest = m.clone();
    let mut out = Vec::new();
    for &(i, j) in candidates {
        let f = rest.get(i - 1, j - 1).clone();
        if ring.is_zero(&f) {
            continue;
        }
        let inv = crate::matform::elem_gen(ring, kind, n, i, j, &ring.neg(&f)).ok()?;
        rest = inv.mul(ring, &rest);
        out.push((i, j, f));
    }
    rest.is_identity(ring).then_some(out)
}

fn eval_formula(ring: &Ring, mono: &[(i64, u32, u32)], a: &Elem, b: &Elem) -> Elem {
    let mut acc = ring.zero();
    for &(c, pa, pb) in mono {
        let t = ring.mul(&ring.from_int(c), &ring.mul(&ring.pow(a, pa), &ring.pow(b, pb)));
        acc = ring.add(&acc, &t);
    }
    acc
}

fn require_trivial_involution(ring: &Ring) -> Result<()> {
    if ring.has_trivial_involution() {
        Ok(())
    } else {
        Err(Error::UnsupportedInvolution("commutator calculus".into()))
    }
}

/// `[ge_{g1}(a), ge_{g2}(b)]` as a word over `ring`.
pub fn commutator_word(ring: &Ring, kind: FormKind, n: usize, g1: (usize, usize, &Elem), g2: (usize, usize, &Elem)) -> Result<Word> {
    require_trivial_involution(ring)?;
    let f = commutator_formula(kind, n, (g1.0, g1.1), (g2.0, g2.1))?;
    let mut w = Word::empty(ring, kind, n);
    for t in f.iter() {
        w.push(t.i, t.j, eval_formula(ring, &t.monomials, g1.2, g2.2))?;
    }
    Ok(w)
}

/// `[ge_ik(x), ge_kj(y)]`: returns `z` and `[ge_ij(z x y)]` when the
/// commutator is a single generator on the `(i, j)` root, otherwise `None`
/// and the full verified expansion.
#[allow(clippy::too_many_arguments)]
pub fn commutator_relation(
    ring: &Ring,
    kind: FormKind,
    n: usize,
    i: usize,
    k: usize,
    j: usize,
    x: &Elem,
    y: &Elem,
) -> Result<(Option<i64>, Word)> {
    require_trivial_involution(ring)?;
    let clash = |why: &str| Err(Error::IndexClash(format!("({i},{k},{j}): {why}")));
    if i == k || k == j || i == j {
        return clash("indices must be distinct");
    }
    if !kind.is_linear() && j == sigma(i) {
        return clash("j = sigma(i)");
    }
    if check_indices(kind, n, i, k).is_err() || check_indices(kind, n, k, j).is_err() || check_indices(kind, n, i, j).is_err() {
        return clash("not generator positions");
    }
    let f = commutator_formula(kind, n, (i, k), (k, j))?;
    let target_root = root_of(kind, n, i, j);
    let mut z = None;
    if let [t] = f.as_slice() {
        if root_of(kind, n, t.i, t.j) == target_root {
            if let [(c, 1, 1)] = t.monomials.as_slice() {
                let zz = if (t.i, t.j) == (i, j) { *c } else { c * pair_sign(kind, t.i, t.j) };
                z = Some(zz);
            }
        }
    }
    let word = match z {
        Some(zz) => Word::single(ring, kind, n, i, j, ring.mul(&ring.from_int(zz), &ring.mul(x, y)))?,
        None => commutator_word(ring, kind, n, (i, k, x), (k, j, y))?,
    };
    // matrix oracle
    let lit = crate::matform::commutator(
        ring,
        &crate::matform::elem_gen(ring, kind, n, i, k, x)?,
        &crate::matform::elem_gen(ring, kind, n, k, j, y)?,
    )?;
    if !word.eval().eq(ring, &lit) {
        return Err(Error::NoDecomposition(format!("commutator relation ({i},{k},{j})")));
    }
    Ok((z, word))
}

/// A way to write `x_beta(z s t)` as `[x_b1(s), x_b2(t)]` times further
/// factors on higher roots.
#[derive(Clone, Debug)]
struct Split {
    b1: (usize, usize),
    b2: (usize, usize),
    z: i64,
    /// factors after the leading one, as returned by the formula
    extra: Vec<FormulaTerm>,
}

type SplitKey = (FormKind, usize, Root);

fn split_cache() -> &'static Mutex<HashMap<SplitKey, Arc<Vec<Split>>>> {
    static CACHE: OnceLock<Mutex<HashMap<SplitKey, Arc<Vec<Split>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All splits of `beta` into two roots, best first (unit coefficient, few
/// extra factors).
fn splits(kind: FormKind, n: usize, beta: &[i32]) -> Result<Arc<Vec<Split>>> {
    let key = (kind, n, beta.to_vec());
    if let Some(s) = split_cache().lock().expect("cache poisoned").get(&key) {
        return Ok(s.clone());
    }
    let mut out = Vec::new();
    let positions = crate::matform::roots(kind, n);
    for &b1 in &positions {
        let r1 = root_of(kind, n, b1.0, b1.1);
        let r2: Root = beta.iter().zip(&r1).map(|(x, y)| x - y).collect();
        let Some(b2) = position_of(kind, n, &r2) else { continue };
        // one representative per pair of roots
        if position_of(kind, n, &r1) != Some(b1) {
            continue;
        }
        let f = commutator_formula(kind, n, b1, b2)?;
        let Some(first) = f.first() else { continue };
        if root_of(kind, n, first.i, first.j) != beta {
            continue;
        }
        let [(c, 1, 1)] = first.monomials.as_slice() else { continue };
        out.push(Split { b1, b2, z: *c, extra: f[1..].to_vec() });
    }
    out.sort_by_key(|s| (s.z.abs(), s.extra.len()));
    let out = Arc::new(out);
    split_cache().lock().expect("cache poisoned").insert(key, out.clone());
    Ok(out)
}

/// Generator with a lower bound on the power of the tracked variable dividing its parameter.
#[derive(Clone, Debug)]
struct Letter {
    i: usize,
    j: usize,
    param: Elem,
    k: u32,
}

struct Expander<'a> {
    ring: &'a Ring,
    kind: FormKind,
    n: usize,
    var: Elem,
    var_name: String,
}

impl Expander<'_> {
    /// `x_beta(var^k h)` as a product of letters on roots other than `-avoid`,
    /// each parameter divisible by about `var^{k/2}`.
    fn halve(&self, l: &Letter, avoid: &[i32]) -> Result<Vec<Letter>> {
        let ring = self.ring;
        let beta = root_of(self.kind, self.n, l.i, l.j);
        let cands = splits(self.kind, self.n, &beta)?;
        let two_unit = ring.is_unit(&ring.from_int(2)).ok().flatten().is_some();
        let choice = cands
            .iter()
            .filter(|s| s.z.abs() == 1 || (s.z.abs() == 2 && two_unit))
            .find(|s| root_of(self.kind, self.n, s.b1.0, s.b1.1) != avoid && root_of(self.kind, self.n, s.b2.0, s.b2.1) != avoid)
            .ok_or_else(|| {
                if cands.iter().any(|s| s.z.abs() == 2) {
                    Error::TwoNotInvertible
                } else {
                    Error::NoDecomposition(format!("root of ({},{}) does not split in size {}", l.i, l.j, self.n))
                }
            })?;
        // parameter at the split's own position for beta
        let pos = position_of(self.kind, self.n, &beta).expect("root");
        let b = at_position(self.kind, ring, (l.i, l.j), &l.param, pos);
        let vk = ring.pow(&self.var, l.k);
        let h = ring.try_div(&b, &vk).ok_or_else(|| Error::NoDecomposition("tracked exponent is wrong".into()))?;
        let (k1, k2) = (l.k.div_ceil(2), l.k / 2);
        let zinv = ring.is_unit(&ring.from_int(choice.z))?.expect("unit checked");
        let s = ring.mul(&zinv, &ring.mul(&ring.pow(&self.var, k1), &h));
        let t = ring.pow(&self.var, k2);
        let mut out = vec![
            Letter { i: choice.b1.0, j: choice.b1.1, param: s.clone(), k: k1 },
            Letter { i: choice.b2.0, j: choice.b2.1, param: t.clone(), k: k2 },
            Letter { i: choice.b1.0, j: choice.b1.1, param: ring.neg(&s), k: k1 },
            Letter { i: choice.b2.0, j: choice.b2.1, param: ring.neg(&t), k: k2 },
        ];
        // the commutator is x_beta(b) * extra; cancel the extra factors
        for term in choice.extra.iter().rev() {
            let f = eval_formula(ring, &term.monomials, &s, &t);
            let k = term.monomials.iter().map(|&(_, pa, pb)| pa * k1 + pb * k2).min().unwrap_or(0);
            out.push(Letter { i: term.i, j: term.j, param: ring.neg(&f), k });
        }
        Ok(out)
    }

    /// `x_alpha(a) * L * x_alpha(-a)` as letters, keeping divisibility.
    fn conjugate(&self, alpha: (usize, usize, &Elem), l: Letter) -> Result<Vec<Letter>> {
        let ring = self.ring;
        let ra = root_of(self.kind, self.n, alpha.0, alpha.1);
        let rb = root_of(self.kind, self.n, l.i, l.j);
        if ring.is_zero(alpha.2) || ring.is_zero(&l.param) {
            return Ok(vec![l]);
        }
        if ra == neg_root(&rb) {
            let parts = self.halve(&l, &ra)?;
            let mut out = Vec::new();
            for p in parts {
                out.extend(self.conjugate(alpha, p)?);
            }
            return Ok(out);
        }
        // e x e^{-1} = [e, x] x
        let f = commutator_formula(self.kind, self.n, (alpha.0, alpha.1), (l.i, l.j))?;
        let mut out = Vec::with_capacity(f.len() + 1);
        for t in f.iter() {
            let p = eval_formula(ring, &t.monomials, alpha.2, &l.param);
            let k = t.monomials.iter().map(|&(_, _, pb)| pb * l.k).min().unwrap_or(l.k);
            out.push(Letter { i: t.i, j: t.j, param: p, k });
        }
        out.push(l);
        Ok(out)
    }

    fn conjugate_by_word(&self, eps: &Word, letters: Vec<Letter>) -> Result<Vec<Letter>> {
        let mut cur = letters;
        for g in eps.gens.iter().rev() {
            let a = g.value(self.ring);
            let mut next = Vec::with_capacity(cur.len() * 2);
            for l in cur {
                next.extend(self.conjugate((g.i, g.j, &a), l)?);
            }
            cur = merge_letters(self.ring, next);
        }
        Ok(cur)
    }
}

/// Merge adjacent letters on the same position, drop zero letters.
fn merge_letters(ring: &Ring, letters: Vec<Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for l in letters {
        if ring.is_zero(&l.param) {
            continue;
        }
        if let Some(last) = out.last_mut() {
            if last.i == l.i && last.j == l.j {
                last.param = ring.add(&last.param, &l.param);
                last.k = last.k.min(l.k);
                if ring.is_zero(&last.param) {
                    out.pop();
                }
                continue;
            }
        }
        out.push(l);
    }
    out
}

/// Output of [`conjugation_expand`].
#[derive(Clone, Debug)]
pub struct ConjugationExpansion {
    /// Letters `ge_{p_t q_t}(X^m h_t)`.
    pub word: Word,
    /// The cofactors `h_t`.
    pub h: Vec<Elem>,
    pub m: u32,
}

impl ConjugationExpansion {
    pub fn to_json(&self) -> Value {
        json!({
            "word": self.word.to_json(),
            "h": self.h.iter().map(|x| self.word.ring.to_json(x)).collect::<Vec<_>>(),
            "m": self.m,
        })
    }
}

/// `eps * ge_pq(X^{2^r m} y) * eps^{-1}` as a word whose parameters are all
/// divisible by `X^m`, where `r` is the length of `eps`. The ring of `eps`
/// must be a polynomial ring containing the variable `x`.
pub fn conjugation_expand(eps: &Word, p: usize, q: usize, m: u32, x: &str, y: &Elem) -> Result<ConjugationExpansion> {
    let ring = &eps.ring;
    let r = eps.len() as u32;
    let k = (1u32 << r) * m;
    let xv = ring.var(x)?;
    let param = ring.mul(&ring.pow(&xv, k), y);
    let word = expand_conjugate(eps, p, q, x, param, k)?;
    let xm = ring.pow(&xv, m);
    let h = word
        .gens
        .iter()
        .map(|g| ring.try_div(&g.param, &xm).ok_or_else(|| Error::NoDecomposition("parameter not divisible by X^m".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConjugationExpansion { word, h, m })
}

/// `eps * ge_pq(param) * eps^{-1}` where `param` is divisible by `x^k`;
/// output parameters are divisible by `x^{k / 2^r}`. Verified exactly.
pub fn expand_conjugate(eps: &Word, p: usize, q: usize, x: &str, param: Elem, k: u32) -> Result<Word> {
    let ring = &eps.ring;
    require_trivial_involution(ring)?;
    check_indices(eps.kind, eps.n, p, q)?;
    let ex = Expander { ring, kind: eps.kind, n: eps.n, var: ring.var(x)?, var_name: x.to_string() };
    let letters = ex.conjugate_by_word(eps, vec![Letter { i: p, j: q, param: param.clone(), k }])?;
    let mut out = Word::empty(ring, eps.kind, eps.n);
    for l in &letters {
        out.push(l.i, l.j, l.param.clone())?;
    }
    let mut want = eps.clone();
    want.push(p, q, param)?;
    want.extend(&eps.inverse());
    if !out.eval().eq(ring, &want.eval()) {
        return Err(Error::NoDecomposition("conjugation expansion failed verification".into()));
    }
    let need = k >> eps.len().min(31);
    for g in &out.gens {
        if ring.min_degree_in(&g.param, &ex.var_name)? < need {
            return Err(Error::NoDecomposition("conjugation expansion lost divisibility".into()));
        }
    }
    Ok(out)
}

/// Whether a generator's matrix already touches row or column 1.
pub fn touches_one(kind: FormKind, i: usize, j: usize) -> bool {
    i == 1 || j == 1 || (!kind.is_linear() && !is_short(kind, i, j) && (i == 2 || j == 2))
}

/// `ge_ij(T^2 mu)` as a word of generators each with row or column index 1
/// (after rewriting long roots through their paired position).
pub fn split_square(ring: &Ring, kind: FormKind, n: usize, i: usize, j: usize, mu: &Elem, t: &str) -> Result<Word> {
    require_trivial_involution(ring)?;
    check_indices(kind, n, i, j)?;
    if i == 1 || j == 1 {
        return Err(Error::IndexOne(format!("({i},{j})")));
    }
    let tv = ring.var(t)?;
    let target = ring.mul(&ring.mul(&tv, &tv), mu);
    let mut w = Word::empty(ring, kind, n);
    if ring.is_zero(mu) {
        return Ok(w);
    }
    let tm = ring.mul(&tv, mu);
    if kind.is_linear() {
        w.push(i, 1, tm.clone())?;
        w.push(1, j, tv.clone())?;
        w.push(i, 1, ring.neg(&tm))?;
        w.push(1, j, ring.neg(&tv))?;
    } else if !is_short(kind, i, j) && (i == 2 || j == 2) {
        let (u, v, f) = paired(kind, i, j, ring, &target);
        w.push(u, v, f)?;
    } else {
        // [ge_{i1}(z T mu), ge_{1, j'}(T)] with j' chosen so that the roots add up
        let beta = root_of(kind, n, i, j);
        let a_root = root_of(kind, n, i, 1);
        let b_root: Root = beta.iter().zip(&a_root).map(|(x, y)| x - y).collect();
        let (u, v) = position_of(kind, n, &b_root).ok_or_else(|| Error::NoDecomposition(format!("({i},{j})")))?;
        // bring the second generator to a position with row 1
        let (bu, bv) = if u == 1 { (u, v) } else { (sigma(v), sigma(u)) };
        let f = commutator_formula(kind, n, (i, 1), (bu, bv))?;
        let [term] = f.as_slice() else {
            return Err(Error::NoDecomposition(format!("split of ({i},{j}) has extra factors")));
        };
        let [(c, 1, 1)] = term.monomials.as_slice() else {
            return Err(Error::NoDecomposition(format!("split of ({i},{j})")));
        };
        let c = if (term.i, term.j) == (i, j) { *c } else { c * pair_sign(kind, term.i, term.j) };
        let cinv = ring.is_unit(&ring.from_int(c))?.ok_or(if c.abs() == 2 { Error::TwoNotInvertible } else { Error::NoDecomposition(format!("coefficient {c}")) })?;
        let t_at = tv.clone();
        let s = ring.mul(&cinv, &tm);
        w.push(i, 1, s.clone())?;
        w.push(bu, bv, t_at.clone())?;
        w.push(i, 1, ring.neg(&s))?;
        w.push(bu, bv, ring.neg(&t_at))?;
    }
    let want = crate::matform::elem_gen(ring, kind, n, i, j, &target)?;
    if !w.eval().eq(ring, &want) {
        return Err(Error::NoDecomposition(format!("split of ({i},{j}) failed verification")));
    }
    Ok(w)
}

/// Parameters of `w` with the tracked variable's exponent: smallest power of
/// `var` over all letters.
pub fn min_var_degree(w: &Word, var: &str) -> Result<u32> {
    let mut d = u32::MAX;
    for g in &w.gens {
        d = d.min(w.ring.min_degree_in(&g.param, var)?);
    }
    Ok(d)
}

#[cfg(test)]
mod tests;
