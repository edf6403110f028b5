use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{Elem, Ring};

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then lexicographic on the exponents with the first variable most significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse polynomial: monomial -> nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Elem>,
    nvars: usize,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: BTreeMap::new(), nvars: 0 }
    }

    pub(crate) fn with_nvars(nvars: usize) -> Poly {
        Poly { terms: BTreeMap::new(), nvars }
    }

    pub fn constant(coeff: &Ring, nvars: usize, c: Elem) -> Poly {
        Poly::monomial(coeff, Monomial::one(nvars), c)
    }

    pub fn monomial(coeff: &Ring, m: Monomial, c: Elem) -> Poly {
        let mut p = Poly { terms: BTreeMap::new(), nvars: m.0.len() };
        if !coeff.is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of a monomial, padding exponent vectors as needed.
    pub fn coeff(&self, coeff: &Ring, m: &Monomial) -> Elem {
        let key = self.pad(m);
        self.terms.get(&key).cloned().unwrap_or_else(|| coeff.zero())
    }

    pub fn constant_term(&self, coeff: &Ring) -> Elem {
        self.coeff(coeff, &Monomial(Vec::new()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn leading(&self) -> Option<(&Monomial, &Elem)> {
        self.terms.iter().next_back()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0.get(var).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    /// Exponent vectors are stored at full length once any non-constant term exists.
    fn pad(&self, m: &Monomial) -> Monomial {
        let n = self.nvars.max(m.0.len());
        let mut v = m.0.clone();
        v.resize(n, 0);
        Monomial(v)
    }

    fn width(&self, other: &Poly) -> usize {
        let mut w = self.nvars.max(other.nvars);
        for m in self.terms.keys().chain(other.terms.keys()) {
            w = w.max(m.0.len());
        }
        w
    }

    fn widened(&self, w: usize) -> Poly {
        if self.nvars == w && self.terms.keys().all(|m| m.0.len() == w) {
            return self.clone();
        }
        let mut out = Poly::with_nvars(w);
        for (m, c) in &self.terms {
            let mut v = m.0.clone();
            v.resize(w, 0);
            out.terms.insert(Monomial(v), c.clone());
        }
        out
    }

    pub(crate) fn insert_add(&mut self, coeff: &Ring, m: Monomial, c: Elem) {
        if coeff.is_zero(&c) {
            return;
        }
        let m = self.pad(&m);
        match self.terms.remove(&m) {
            Some(old) => {
                let s = coeff.add(&old, &c);
                if !coeff.is_zero(&s) {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, coeff: &Ring, other: &Poly) -> Poly {
        let w = self.width(other);
        let mut out = self.widened(w);
        for (m, c) in &other.terms {
            out.insert_add(coeff, m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self, coeff: &Ring) -> Poly {
        self.map_coeffs(coeff, |c| coeff.neg(c))
    }

    pub fn mul(&self, coeff: &Ring, other: &Poly) -> Poly {
        let w = self.width(other);
        let a = self.widened(w);
        let b = other.widened(w);
        let mut out = Poly::with_nvars(w);
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                out.insert_add(coeff, m1.mul(m2), coeff.mul(c1, c2));
            }
        }
        out
    }

    pub fn scale(&self, coeff: &Ring, c: &Elem) -> Poly {
        self.map_coeffs(coeff, |x| coeff.mul(x, c))
    }

    pub fn map_coeffs(&self, coeff: &Ring, f: impl Fn(&Elem) -> Elem) -> Poly {
        let mut out = Poly::with_nvars(self.nvars);
        for (m, c) in &self.terms {
            let v = f(c);
            if !coeff.is_zero(&v) {
                out.terms.insert(m.clone(), v);
            }
        }
        out
    }

    /// Division by `b` following leading terms; `None` when a leading
    /// coefficient fails to divide or a remainder is left.
    pub fn exact_div(&self, coeff: &Ring, b: &Poly) -> Option<Poly> {
        let (lm_b, lc_b) = b.leading()?;
        let (lm_b, lc_b) = (lm_b.clone(), lc_b.clone());
        let w = self.width(b);
        let lm_b = Monomial({
            let mut v = lm_b.0;
            v.resize(w, 0);
            v
        });
        let b = b.widened(w);
        let mut r = self.widened(w);
        let mut q = Poly::with_nvars(w);
        let mut steps = 0usize;
        while let Some((lm_r, lc_r)) = r.leading() {
            steps += 1;
            if steps > 100_000 {
                return None;
            }
            let m = lm_r.div(&lm_b)?;
            let c = coeff.try_div(lc_r, &lc_b)?;
            let t = Poly::monomial(coeff, m, c);
            let before = lm_r.clone();
            q = q.add(coeff, &t);
            r = r.add(coeff, &t.mul(coeff, &b).neg(coeff));
            if let Some((lm, _)) = r.leading() {
                if *lm >= before {
                    return None;
                }
            }
        }
        Some(q)
    }
}
