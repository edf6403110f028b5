//! Dense matrices over a ring, the standard symplectic and orthogonal forms,
//! elementary generators of the three families, and words of generators.
//!
//! Indices of generators are 1-based throughout the public API. The pairing
//! permutation is `sigma(2l - 1) = 2l`, `sigma(2l) = 2l - 1`.
//!
//! Generator shapes (`c` is fixed by requiring `M* psi M = psi`):
//!
//! | kind        | roots                  | matrix                                   |
//! |-------------|------------------------|------------------------------------------|
//! | linear      | `i != j`               | `I + a E_ij`                             |
//! | symplectic  | `j != sigma(i)`        | `I + a E_ij + c a* E_{sigma j, sigma i}`, `c = -e_i e_j` |
//! | symplectic  | `j = sigma(i)`         | `I + a E_{i, sigma i}`                   |
//! | orthogonal  | `j != sigma(i)`        | `I + a E_ij - a* E_{sigma j, sigma i}`   |
//!
//! with `e_i = +1` for odd `i` and `-1` for even `i`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rings::{Elem, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Linear,
    Symplectic,
    Orthogonal,
}

impl FormKind {
    pub fn is_linear(self) -> bool {
        self == FormKind::Linear
    }

    pub fn name(self) -> &'static str {
        match self {
            FormKind::Linear => "linear",
            FormKind::Symplectic => "symplectic",
            FormKind::Orthogonal => "orthogonal",
        }
    }
}

/// The pairing permutation on `1..=n`.
pub fn sigma(i: usize) -> usize {
    if i % 2 == 1 {
        i + 1
    } else {
        i - 1
    }
}

/// `+1` on odd indices, `-1` on even ones: the sign of `psi[i][sigma i]`.
pub fn parity_sign(i: usize) -> i64 {
    if i % 2 == 1 {
        1
    } else {
        -1
    }
}

/// The sign `c` in `I + a E_ij + c a* E_{sigma j, sigma i}`.
pub fn pair_sign(kind: FormKind, i: usize, j: usize) -> i64 {
    match kind {
        FormKind::Linear => 0,
        FormKind::Symplectic => -parity_sign(i) * parity_sign(j),
        FormKind::Orthogonal => -1,
    }
}

/// Square matrix, row-major, 0-based storage.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub n: usize,
    pub entries: Vec<Elem>,
}

impl Mat {
    pub fn zero(ring: &Ring, n: usize) -> Mat {
        Mat { n, entries: vec![ring.zero(); n * n] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Mat {
        let mut m = Mat::zero(ring, n);
        for k in 0..n {
            m.entries[k * n + k] = ring.one();
        }
        m
    }

    pub fn diagonal(ring: &Ring, d: &[Elem]) -> Mat {
        let mut m = Mat::zero(ring, d.len());
        for (k, x) in d.iter().enumerate() {
            m.entries[k * d.len() + k] = x.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Mat> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix must be square".into()));
        }
        Ok(Mat { n, entries: rows.into_iter().flatten().collect() })
    }

    /// Parse a matrix from integer-or-expression strings.
    pub fn parse(ring: &Ring, rows: &[&[&str]]) -> Result<Mat> {
        let rows: Result<Vec<Vec<Elem>>> = rows.iter().map(|r| r.iter().map(|s| ring.parse(s)).collect()).collect();
        Mat::from_rows(rows?)
    }

    /// Entry at 0-based `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> &Elem {
        &self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.entries[r * self.n + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.n).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.entries.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut out = self.clone();
        for r in 0..n {
            for c in 0..n {
                out.entries[c * n + r] = self.entries[r * n + c].clone();
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&Elem) -> Elem) -> Mat {
        Mat { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&Elem) -> Result<Elem>) -> Result<Mat> {
        Ok(Mat { n: self.n, entries: self.entries.iter().map(f).collect::<Result<_>>()? })
    }

    /// Entrywise involution.
    pub fn conj(&self, ring: &Ring) -> Mat {
        self.map(|x| ring.conj(x))
    }

    pub fn mul(&self, ring: &Ring, other: &Mat) -> Mat {
        let n = self.n;
        assert_eq!(n, other.n, "matrix sizes differ");
        let mut out = Mat::zero(ring, n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if ring.is_zero(a) {
                    continue;
                }
                for c in 0..n {
                    let b = other.get(k, c);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let idx = r * n + c;
                    out.entries[idx] = ring.add(&out.entries[idx], &ring.mul(a, b));
                }
            }
        }
        out
    }

    pub fn add(&self, ring: &Ring, other: &Mat) -> Mat {
        Mat { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| ring.add(a, b)).collect() }
    }

    pub fn sub(&self, ring: &Ring, other: &Mat) -> Mat {
        Mat { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| ring.sub(a, b)).collect() }
    }

    pub fn scale(&self, ring: &Ring, c: &Elem) -> Mat {
        self.map(|x| ring.mul(x, c))
    }

    pub fn mul_vec(&self, ring: &Ring, v: &[Elem]) -> Vec<Elem> {
        (0..self.n)
            .map(|r| {
                let mut acc = ring.zero();
                for (c, x) in v.iter().enumerate() {
                    acc = ring.add(&acc, &ring.mul(self.get(r, c), x));
                }
                acc
            })
            .collect()
    }

    pub fn eq(&self, ring: &Ring, other: &Mat) -> bool {
        self.n == other.n && self.entries.iter().zip(&other.entries).all(|(a, b)| ring.eq(a, b))
    }

    pub fn is_identity(&self, ring: &Ring) -> bool {
        self.eq(ring, &Mat::identity(ring, self.n))
    }

    pub fn is_diagonal(&self, ring: &Ring) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| r == c || ring.is_zero(self.get(r, c))))
    }

    pub fn pow(&self, ring: &Ring, mut e: u32) -> Mat {
        let mut base = self.clone();
        let mut acc = Mat::identity(ring, self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ring, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(ring, &base);
            }
        }
        acc
    }

    /// Coefficients `[1, c_1, ..., c_n]` of `det(t I - M)` by Berkowitz's
    /// division-free algorithm.
    pub fn char_poly(&self, ring: &Ring) -> Vec<Elem> {
        let n = self.n;
        if n == 0 {
            return vec![ring.one()];
        }
        let mut c = vec![ring.one(), ring.neg(self.get(0, 0))];
        for k in 1..n {
            // leading (k+1) x (k+1) block: M (k x k), column S, row R, corner a
            let a = self.get(k, k);
            let s: Vec<Elem> = (0..k).map(|r| self.get(r, k).clone()).collect();
            let row: Vec<Elem> = (0..k).map(|cc| self.get(k, cc).clone()).collect();
            let mut col = vec![ring.one(), ring.neg(a)];
            let mut v = s.clone();
            for _ in 0..k {
                let rv = dot(ring, &row, &v);
                col.push(ring.neg(&rv));
                v = (0..k)
                    .map(|r| {
                        let mut acc = ring.zero();
                        for (cc, x) in v.iter().enumerate() {
                            let m = self.get(r, cc);
                            if !ring.is_zero(x) && !ring.is_zero(m) {
                                acc = ring.add(&acc, &ring.mul(m, x));
                            }
                        }
                        acc
                    })
                    .collect();
            }
            // Toeplitz (k+2) x (k+1) lower triangular times c
            let mut next = vec![ring.zero(); k + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = ring.zero();
                for (j, cj) in c.iter().enumerate() {
                    if i >= j && !ring.is_zero(cj) && !ring.is_zero(&col[i - j]) {
                        acc = ring.add(&acc, &ring.mul(&col[i - j], cj));
                    }
                }
                *slot = acc;
            }
            c = next;
        }
        c
    }

    pub fn det(&self, ring: &Ring) -> Elem {
        let c = self.char_poly(ring);
        let last = c[self.n].clone();
        if self.n % 2 == 0 {
            last
        } else {
            ring.neg(&last)
        }
    }

    /// Adjugate via Cayley-Hamilton: `adj(M) = (-1)^{n+1} sum_k c_k M^{n-1-k}`.
    pub fn adjugate(&self, ring: &Ring) -> Mat {
        let n = self.n;
        let c = self.char_poly(ring);
        // Horner: Q = ((M + c1) M + c2) M + ... + c_{n-1}
        let mut q = Mat::identity(ring, n);
        for ck in c.iter().take(n).skip(1) {
            q = q.mul(ring, self).add(ring, &Mat::identity(ring, n).scale(ring, ck));
        }
        if n % 2 == 0 {
            q.map(|x| ring.neg(x))
        } else {
            q
        }
    }

    /// Exact inverse when the determinant is a unit.
    pub fn inverse(&self, ring: &Ring) -> Result<Mat> {
        let d = self.det(ring);
        let inv = ring.is_unit(&d)?.ok_or(Error::NotInvertible)?;
        Ok(self.adjugate(ring).scale(ring, &inv))
    }

    pub fn to_json(&self, ring: &Ring) -> Value {
        Value::Array(self.rows().iter().map(|r| Value::Array(r.iter().map(|x| ring.to_json(x)).collect())).collect())
    }

    pub fn from_json(ring: &Ring, v: &Value) -> Result<Mat> {
        let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
        let rows: Result<Vec<Vec<Elem>>> = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                    .iter()
                    .map(|x| ring.from_json(x))
                    .collect()
            })
            .collect();
        Mat::from_rows(rows?)
    }

    pub fn show(&self, ring: &Ring) -> String {
        self.rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| ring.show(x)).collect::<Vec<_>>().join(", ")))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn dot(ring: &Ring, a: &[Elem], b: &[Elem]) -> Elem {
    let mut acc = ring.zero();
    for (x, y) in a.iter().zip(b) {
        if !ring.is_zero(x) && !ring.is_zero(y) {
            acc = ring.add(&acc, &ring.mul(x, y));
        }
    }
    acc
}

/// `A B A^{-1} B^{-1}`.
pub fn commutator(ring: &Ring, a: &Mat, b: &Mat) -> Result<Mat> {
    let ai = a.inverse(ring)?;
    let bi = b.inverse(ring)?;
    Ok(a.mul(ring, b).mul(ring, &ai).mul(ring, &bi))
}

/// `psi_n` (blocks `[[0,1],[-1,0]]`) or `psi~_n` (blocks `[[0,1],[1,0]]`).
pub fn standard_form(kind: FormKind, n: usize, ring: &Ring) -> Result<Mat> {
    if kind.is_linear() {
        return Err(Error::LinearHasNoForm);
    }
    if n == 0 || n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    let mut m = Mat::zero(ring, n);
    for l in 0..n / 2 {
        m.set(2 * l, 2 * l + 1, ring.one());
        let low = if kind == FormKind::Symplectic { ring.from_int(-1) } else { ring.one() };
        m.set(2 * l + 1, 2 * l, low);
    }
    Ok(m)
}

/// `x* psi y` for the standard form of `kind`.
pub fn form_value(ring: &Ring, kind: FormKind, x: &[Elem], y: &[Elem]) -> Result<Elem> {
    if kind.is_linear() {
        return Err(Error::LinearHasNoForm);
    }
    if x.len() != y.len() || x.len() % 2 == 1 {
        return Err(Error::DimensionMismatch(format!("{} vs {}", x.len(), y.len())));
    }
    let mut acc = ring.zero();
    for l in 0..x.len() / 2 {
        let (a, b) = (2 * l, 2 * l + 1);
        let up = ring.mul(&ring.conj(&x[a]), &y[b]);
        let down = ring.mul(&ring.conj(&x[b]), &y[a]);
        acc = ring.add(&acc, &up);
        acc = if kind == FormKind::Symplectic { ring.sub(&acc, &down) } else { ring.add(&acc, &down) };
    }
    Ok(acc)
}

/// Validate generator indices (1-based).
pub fn check_indices(kind: FormKind, n: usize, i: usize, j: usize) -> Result<()> {
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::BadIndices(format!("({i},{j}) outside 1..={n}")));
    }
    if i == j {
        return Err(Error::BadIndices(format!("i = j = {i}")));
    }
    if !kind.is_linear() {
        if n % 2 == 1 {
            return Err(Error::OddSize(n));
        }
        if kind == FormKind::Orthogonal && j == sigma(i) {
            return Err(Error::BadIndices(format!("({i},{j}) is not a root of the orthogonal group")));
        }
    }
    Ok(())
}

/// Whether `ge_ij` is a short root (symplectic, `j = sigma(i)`).
pub fn is_short(kind: FormKind, i: usize, j: usize) -> bool {
    kind == FormKind::Symplectic && j == sigma(i)
}

/// Matrix of the elementary generator `ge_ij(a)`.
pub fn elem_gen(ring: &Ring, kind: FormKind, n: usize, i: usize, j: usize, a: &Elem) -> Result<Mat> {
    check_indices(kind, n, i, j)?;
    let mut m = Mat::identity(ring, n);
    m.set(i - 1, j - 1, a.clone());
    if !kind.is_linear() && !is_short(kind, i, j) {
        let c = ring.from_int(pair_sign(kind, i, j));
        m.set(sigma(j) - 1, sigma(i) - 1, ring.mul(&c, &ring.conj(a)));
    } else if is_short(kind, i, j) && !ring.eq(a, &ring.conj(a)) {
        return Err(Error::UnsupportedInvolution("short-root parameter must be fixed by the involution".into()));
    }
    Ok(m)
}

/// Group membership. Linear: `det` a unit (`strict`: `det = 1`).
/// Symplectic/orthogonal: `M* psi M = psi` (`strict` adds `det = 1`).
pub fn check_membership(ring: &Ring, m: &Mat, kind: FormKind, strict: bool) -> bool {
    let det = m.det(ring);
    let det_ok = if strict { ring.is_one(&det) } else { matches!(ring.is_unit(&det), Ok(Some(_))) };
    if kind.is_linear() {
        return det_ok;
    }
    let Ok(psi) = standard_form(kind, m.n, ring) else { return false };
    let lhs = m.conj(ring).transpose().mul(ring, &psi).mul(ring, m);
    lhs.eq(ring, &psi) && (!strict || det_ok)
}

/// One letter of a word: `ge_ij(sign * param)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElemGen {
    pub i: usize,
    pub j: usize,
    pub param: Elem,
    /// `-1` marks the inverse letter, i.e. `ge_ij(-param)`.
    pub sign: i8,
}

impl ElemGen {
    pub fn new(i: usize, j: usize, param: Elem) -> ElemGen {
        ElemGen { i, j, param, sign: 1 }
    }

    /// The effective parameter `sign * param`.
    pub fn value(&self, ring: &Ring) -> Elem {
        if self.sign < 0 {
            ring.neg(&self.param)
        } else {
            self.param.clone()
        }
    }
}

/// A product of elementary generators of one kind and size over one ring.
#[derive(Clone, Debug)]
pub struct Word {
    pub ring: Ring,
    pub kind: FormKind,
    pub n: usize,
    pub gens: Vec<ElemGen>,
}

impl Word {
    pub fn empty(ring: &Ring, kind: FormKind, n: usize) -> Word {
        Word { ring: ring.clone(), kind, n, gens: Vec::new() }
    }

    pub fn single(ring: &Ring, kind: FormKind, n: usize, i: usize, j: usize, a: Elem) -> Result<Word> {
        let mut w = Word::empty(ring, kind, n);
        w.push(i, j, a)?;
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn push(&mut self, i: usize, j: usize, a: Elem) -> Result<()> {
        check_indices(self.kind, self.n, i, j)?;
        self.gens.push(ElemGen::new(i, j, a));
        Ok(())
    }

    pub fn extend(&mut self, other: &Word) {
        debug_assert!(self.ring == other.ring && self.kind == other.kind && self.n == other.n);
        self.gens.extend(other.gens.iter().cloned());
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend(other);
        w
    }

    /// The inverse word: reversed, each letter negated.
    pub fn inverse(&self) -> Word {
        let gens = self
            .gens
            .iter()
            .rev()
            .map(|g| ElemGen { i: g.i, j: g.j, param: g.param.clone(), sign: -g.sign })
            .collect();
        Word { ring: self.ring.clone(), kind: self.kind, n: self.n, gens }
    }

    /// Right-multiply `m` by `ge_ij(a)` in place using column operations.
    pub fn apply_gen(ring: &Ring, kind: FormKind, m: &mut Mat, i: usize, j: usize, a: &Elem) {
        let n = m.n;
        if ring.is_zero(a) {
            return;
        }
        // col j += a * col i
        for r in 0..n {
            let v = ring.mul(m.get(r, i - 1), a);
            if !ring.is_zero(&v) {
                let cur = ring.add(m.get(r, j - 1), &v);
                m.set(r, j - 1, cur);
            }
        }
        if !kind.is_linear() && !is_short(kind, i, j) {
            // col sigma(i) += c a* col sigma(j)
            let ca = ring.mul(&ring.from_int(pair_sign(kind, i, j)), &ring.conj(a));
            let (si, sj) = (sigma(i) - 1, sigma(j) - 1);
            for r in 0..n {
                let v = ring.mul(m.get(r, sj), &ca);
                if !ring.is_zero(&v) {
                    let cur = ring.add(m.get(r, si), &v);
                    m.set(r, si, cur);
                }
            }
        }
    }

    pub fn eval(&self) -> Mat {
        let mut m = Mat::identity(&self.ring, self.n);
        for g in &self.gens {
            Word::apply_gen(&self.ring, self.kind, &mut m, g.i, g.j, &g.value(&self.ring));
        }
        m
    }

    /// The same word with every parameter mapped into `target`.
    pub fn map_params(&self, target: &Ring, f: impl Fn(&Elem) -> Result<Elem>) -> Result<Word> {
        let gens = self
            .gens
            .iter()
            .map(|g| Ok(ElemGen { i: g.i, j: g.j, param: f(&g.value(&self.ring))?, sign: 1 }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { ring: target.clone(), kind: self.kind, n: self.n, gens })
    }

    /// Drop zero letters and merge adjacent letters on the same root.
    pub fn simplify(&self) -> Word {
        let ring = &self.ring;
        let mut out: Vec<ElemGen> = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            let v = g.value(ring);
            if ring.is_zero(&v) {
                continue;
            }
            let mut merged = false;
            if let Some(last) = out.last_mut() {
                let same = (last.i == g.i && last.j == g.j)
                    || (!self.kind.is_linear()
                        && !is_short(self.kind, g.i, g.j)
                        && last.i == sigma(g.j)
                        && last.j == sigma(g.i));
                if same && last.i == g.i {
                    last.param = ring.add(&last.value(ring), &v);
                    last.sign = 1;
                    merged = true;
                } else if same {
                    // ge_ij(a) = ge_{sigma j, sigma i}(c a*) for long roots
                    let c = ring.from_int(pair_sign(self.kind, g.i, g.j));
                    let moved = ring.mul(&c, &ring.conj(&v));
                    last.param = ring.add(&last.value(ring), &moved);
                    last.sign = 1;
                    merged = true;
                }
                if merged && ring.is_zero(&last.param) {
                    out.pop();
                }
            }
            if !merged {
                out.push(ElemGen { i: g.i, j: g.j, param: v, sign: 1 });
            }
        }
        Word { ring: self.ring.clone(), kind: self.kind, n: self.n, gens: out }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.gens
                .iter()
                .map(|g| {
                    json!({
                        "kind": self.kind,
                        "n": self.n,
                        "i": g.i,
                        "j": g.j,
                        "param": self.ring.to_json(&g.param),
                        "sign": g.sign,
                    })
                })
                .collect(),
        )
    }

    /// Decode a word; `kind` and `n` fall back to the given defaults when
    /// letters omit them (an empty list needs the defaults).
    pub fn from_json(ring: &Ring, v: &Value, kind: FormKind, n: usize) -> Result<Word> {
        let items = v.as_array().ok_or_else(|| Error::Parse("word must be an array".into()))?;
        let mut w = Word::empty(ring, kind, n);
        for it in items {
            let k: FormKind = match it.get("kind") {
                Some(k) => serde_json::from_value(k.clone()).map_err(|e| Error::Parse(e.to_string()))?,
                None => kind,
            };
            let nn = it.get("n").and_then(Value::as_u64).map(|x| x as usize).unwrap_or(n);
            if k != kind || nn != n {
                return Err(Error::Parse("all letters of a word must share kind and size".into()));
            }
            let idx = |name: &str| {
                it.get(name)
                    .and_then(Value::as_u64)
                    .map(|x| x as usize)
                    .ok_or_else(|| Error::Parse(format!("letter is missing `{name}`")))
            };
            let (i, j) = (idx("i")?, idx("j")?);
            let param = ring.from_json(it.get("param").ok_or_else(|| Error::Parse("letter is missing `param`".into()))?)?;
            let sign = match it.get("sign").and_then(Value::as_i64).unwrap_or(1) {
                1 => 1,
                -1 => -1,
                s => return Err(Error::Parse(format!("sign must be 1 or -1, got {s}"))),
            };
            check_indices(kind, n, i, j)?;
            w.gens.push(ElemGen { i, j, param, sign });
        }
        Ok(w)
    }

    pub fn show(&self) -> String {
        self.gens
            .iter()
            .map(|g| format!("e{}_{}({})", g.i, g.j, self.ring.show(&g.value(&self.ring))))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// All valid `(i, j)` root positions for a kind and size.
pub fn roots(kind: FormKind, n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if check_indices(kind, n, i, j).is_ok() {
                out.push((i, j));
            }
        }
    }
    out
}
