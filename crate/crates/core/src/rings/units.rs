//! Unit, nilpotency and exact-division tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Elem, MultSet, Node, Poly, Ring};
use crate::error::{Error, Result};

/// Rings below this size are searched exhaustively when no closed form applies.
const BRUTE_FORCE_LIMIT: u64 = 200_000;

pub(crate) fn is_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    match n.to_u64() {
        Some(v) => {
            if v < 4 {
                return true;
            }
            if v % 2 == 0 {
                return false;
            }
            let mut d = 3u64;
            while d.saturating_mul(d) <= v {
                if v % d == 0 {
                    return false;
                }
                d += 2;
            }
            true
        }
        // moduli this large never show up in practice; treat as composite
        None => false,
    }
}

/// Inverse of `a` modulo `m` when it exists.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

impl Ring {
    /// `Some(inverse)` when `a` is a unit, `None` when it is not.
    pub fn is_unit(&self, a: &Elem) -> Result<Option<Elem>> {
        match (self.node(), a) {
            (Node::Integers, Elem::Int(x)) => Ok(if x.abs().is_one() { Some(a.clone()) } else { None }),
            (Node::Rationals, Elem::Rat(x)) => Ok(if x.is_zero() { None } else { Some(Elem::Rat(x.recip())) }),
            (Node::Zmod(m), Elem::Int(x)) => Ok(mod_inverse(x, m).map(Elem::Int)),
            (Node::Poly { coeff, vars }, Elem::Poly(p)) => {
                let c0 = p.constant_term(coeff);
                let Some(v) = coeff.is_unit(&c0)? else { return Ok(None) };
                for (m, c) in p.terms() {
                    if !m.is_one() && coeff.is_nilpotent(c)?.is_none() {
                        return Ok(None);
                    }
                }
                // u^{-1} * sum_k (-u^{-1} N)^k terminates because N is nilpotent
                let vinv = Poly::constant(coeff, vars.len(), v.clone());
                let n = p.add(coeff, &Poly::constant(coeff, vars.len(), coeff.neg(&c0)));
                let step = n.scale(coeff, &coeff.neg(&v));
                let mut term = Poly::constant(coeff, vars.len(), coeff.one());
                let mut sum = Poly::with_nvars(vars.len());
                for _ in 0..100_000 {
                    if term.is_zero() {
                        return Ok(Some(Elem::Poly(sum.mul(coeff, &vinv))));
                    }
                    sum = sum.add(coeff, &term);
                    term = term.mul(coeff, &step);
                }
                Err(Error::Undecidable("geometric series did not terminate".into()))
            }
            (Node::Quotient { parent, modulus, .. }, Elem::Quo(v)) => {
                if parent.is_field() {
                    return Ok(field_quotient_inverse(parent, modulus, v).map(Elem::Quo));
                }
                self.brute_force_inverse(a)
            }
            (Node::Localize { parent, mult: MultSet::Powers(s) }, Elem::Pow { num, exp }) => {
                if parent.is_domain() {
                    // num * x = s^t for some t makes num/s^k invertible with inverse x s^k / s^t
                    let mut st = parent.one();
                    for t in 0..=64u32 {
                        if let Some(x) = parent.try_div(&st, num) {
                            let cand = self.canon_pow(parent.mul(&x, &parent.pow(s, *exp)), t);
                            debug_assert!(self.is_one(&self.mul(a, &cand)));
                            return Ok(Some(cand));
                        }
                        st = parent.mul(&st, s);
                    }
                    Ok(None)
                } else {
                    let elems = parent.elements()?;
                    for t in 0..=parent.nil_bound() {
                        for x in &elems {
                            let cand = Elem::Pow { num: Box::new(x.clone()), exp: t };
                            if self.is_one(&self.mul(a, &cand)) {
                                return Ok(Some(cand));
                            }
                        }
                    }
                    Ok(None)
                }
            }
            (Node::Localize { parent, mult: MultSet::OnePlus(s) }, Elem::Frac { num, den }) => {
                match (parent.node(), &**num, s) {
                    (Node::Integers, Elem::Int(p), Elem::Int(sv)) => {
                        if p.is_zero() {
                            return Ok(None);
                        }
                        let sa = sv.abs();
                        if sa.is_zero() {
                            // B = {1}: only +-1 are units, and they are their own inverses
                            return Ok(p.abs().is_one().then(|| a.clone()));
                        }
                        let Some(u) = mod_inverse(p, &sa) else { return Ok(None) };
                        // p*u lies in 1 + sZ, so (den*u)/(p*u) is the inverse
                        let u = if u.is_zero() { BigInt::one() } else { u };
                        let inv = self.canon_frac(Elem::Int(match &**den {
                            Elem::Int(d) => d * &u,
                            _ => unreachable!(),
                        }), Elem::Int(p * &u));
                        Ok(Some(inv))
                    }
                    _ if parent.is_field() => {
                        if parent.is_zero(num) {
                            Ok(None)
                        } else {
                            let inv = parent.is_unit(num)?.expect("field");
                            Ok(Some(self.canon_frac(parent.mul(den, &inv), parent.one())))
                        }
                    }
                    _ if parent.is_finite() => self.brute_force_inverse(a),
                    _ => Err(Error::Undecidable(format!("unit test in {self}"))),
                }
            }
            (Node::QuadExt { parent, d }, Elem::Quad(x, y)) => {
                let norm = parent.sub(&parent.mul(x, x), &parent.mul(d, &parent.mul(y, y)));
                match parent.is_unit(&norm)? {
                    Some(ni) => Ok(Some(Elem::Quad(
                        Box::new(parent.mul(x, &ni)),
                        Box::new(parent.neg(&parent.mul(y, &ni))),
                    ))),
                    None => Ok(None),
                }
            }
            _ => Err(Error::RingMismatch(format!("{a:?} is not an element of {self}"))),
        }
    }

    fn brute_force_inverse(&self, a: &Elem) -> Result<Option<Elem>> {
        if !self.is_finite() {
            return Err(Error::Undecidable(format!("unit test in {self}")));
        }
        let elems = self.elements()?;
        Ok(elems.into_iter().find(|x| self.is_one(&self.mul(a, x))))
    }

    /// Minimal `l` with `a^l = 0`, or `None` when `a` is not nilpotent.
    pub fn is_nilpotent(&self, a: &Elem) -> Result<Option<u32>> {
        if self.is_zero(a) {
            return Ok(Some(1));
        }
        if self.is_domain() {
            return Ok(None);
        }
        let bound = match self.node() {
            Node::Poly { coeff, .. } => {
                let Elem::Poly(p) = a else { unreachable!() };
                // a sum of nilpotents of indices l_i is killed by power sum(l_i - 1) + 1
                let mut total: u64 = 1;
                for (_, c) in p.terms() {
                    match coeff.is_nilpotent(c)? {
                        Some(l) => total += (l - 1) as u64,
                        None => return Ok(None),
                    }
                }
                total.min(u32::MAX as u64) as u32
            }
            Node::Zmod(_) | Node::Quotient { .. } | Node::Localize { .. } if self.is_finite() => self.nil_bound(),
            Node::QuadExt { .. } if self.is_finite() => self.nil_bound(),
            Node::Quotient { parent, .. } if parent.is_field() => self.nil_bound(),
            _ => 0,
        };
        if bound == 0 {
            // infinite non-domain: search a while, then give up honestly
            let mut p = a.clone();
            for l in 2..=64 {
                p = self.mul(&p, a);
                if self.is_zero(&p) {
                    return Ok(Some(l));
                }
            }
            return Err(Error::Undecidable(format!("nilpotency in {self}")));
        }
        let mut p = a.clone();
        for l in 2..=bound.max(2) {
            p = self.mul(&p, a);
            if self.is_zero(&p) {
                return Ok(Some(l));
            }
        }
        Ok(None)
    }

    /// `q` with `b q = a` when such a quotient is found; sound but not
    /// complete outside domains.
    pub fn try_div(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        match (self.node(), a, b) {
            (Node::Integers, Elem::Int(x), Elem::Int(y)) => {
                if y.is_zero() || !x.is_multiple_of(y) {
                    None
                } else {
                    Some(Elem::Int(x / y))
                }
            }
            (Node::Rationals, Elem::Rat(x), Elem::Rat(y)) => {
                if y.is_zero() {
                    None
                } else {
                    Some(Elem::Rat(x / y))
                }
            }
            (Node::Zmod(m), Elem::Int(x), Elem::Int(y)) => {
                // solve y q = x (mod m)
                let g = y.gcd(m);
                if g.is_zero() || !x.is_multiple_of(&g) {
                    return None;
                }
                let m2 = m / &g;
                if m2.is_one() {
                    return Some(Elem::Int(BigInt::zero()));
                }
                let inv = mod_inverse(&(y / &g), &m2)?;
                Some(Elem::Int(((x / &g) * inv).mod_floor(&m2)))
            }
            (Node::Poly { coeff, .. }, Elem::Poly(p), Elem::Poly(q)) => {
                if q.is_zero() {
                    return None;
                }
                let r = p.exact_div(coeff, q)?;
                let r = Elem::Poly(r);
                if coeff.is_domain() || self.eq(&self.mul(b, &r), a) {
                    Some(r)
                } else {
                    None
                }
            }
            (Node::Localize { parent, mult: MultSet::Powers(s) }, Elem::Pow { num: x, exp: i }, Elem::Pow { num: y, exp: j }) => {
                let bound = if parent.is_domain() { 64 } else { parent.nil_bound() };
                let mut xs = (**x).clone();
                for t in 0..=bound {
                    if let Some(q) = parent.try_div(&xs, y) {
                        let cand = self.canon_pow(parent.mul(&q, &parent.pow(s, *j)), i + t);
                        if self.eq(&self.mul(b, &cand), a) {
                            return Some(cand);
                        }
                    }
                    xs = parent.mul(&xs, s);
                }
                self.unit_div(a, b)
            }
            (Node::Localize { parent, .. }, Elem::Frac { num: x, den: d }, Elem::Frac { num: y, den: e }) => {
                if let Some(r) = parent.try_div(&parent.mul(x, e), y) {
                    let cand = self.canon_frac(r, (**d).clone());
                    if self.eq(&self.mul(b, &cand), a) {
                        return Some(cand);
                    }
                }
                self.unit_div(a, b)
            }
            (Node::QuadExt { parent, d }, _, Elem::Quad(y0, y1)) => {
                if let Some(q) = self.unit_div(a, b) {
                    return Some(q);
                }
                let norm = parent.sub(&parent.mul(y0, y0), &parent.mul(d, &parent.mul(y1, y1)));
                let Elem::Quad(n0, n1) = self.mul(a, &self.conj(b)) else { unreachable!() };
                let q0 = parent.try_div(&n0, &norm)?;
                let q1 = parent.try_div(&n1, &norm)?;
                let cand = Elem::Quad(Box::new(q0), Box::new(q1));
                if self.eq(&self.mul(b, &cand), a) {
                    Some(cand)
                } else {
                    None
                }
            }
            (Node::Quotient { .. }, _, _) => {
                if let Some(q) = self.unit_div(a, b) {
                    return Some(q);
                }
                if self.is_finite() && self.size().is_some_and(|n| n <= BigInt::from(BRUTE_FORCE_LIMIT)) {
                    let elems = self.elements().ok()?;
                    return elems.into_iter().find(|x| self.eq(&self.mul(b, x), a));
                }
                None
            }
            _ => None,
        }
    }

    fn unit_div(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        let inv = self.is_unit(b).ok().flatten()?;
        Some(self.mul(a, &inv))
    }
}

/// Inverse in `F[t]/(f)` by the extended Euclidean algorithm.
fn field_quotient_inverse(field: &Ring, modulus: &[Elem], v: &[Elem]) -> Option<Vec<Elem>> {
    let deg = modulus.len() - 1;
    let trim = |mut p: Vec<Elem>| {
        while p.last().is_some_and(|c| field.is_zero(c)) {
            p.pop();
        }
        p
    };
    let sub_scaled = |a: &[Elem], b: &[Elem], c: &Elem, shift: usize| {
        let mut out = a.to_vec();
        if out.len() < b.len() + shift {
            out.resize(b.len() + shift, field.zero());
        }
        for (k, x) in b.iter().enumerate() {
            out[k + shift] = field.sub(&out[k + shift], &field.mul(c, x));
        }
        trim(out)
    };
    let mul = |a: &[Elem], b: &[Elem]| {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![field.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = field.add(&out[i + j], &field.mul(x, y));
            }
        }
        trim(out)
    };
    // invariant: s_k * v = r_k (mod f)
    let (mut r0, mut r1) = (trim(modulus.to_vec()), trim(v.to_vec()));
    let (mut s0, mut s1): (Vec<Elem>, Vec<Elem>) = (Vec::new(), vec![field.one()]);
    while !r1.is_empty() {
        let mut q: Vec<Elem> = Vec::new();
        let mut r = r0.clone();
        let lead_inv = field.is_unit(r1.last().unwrap()).ok()??;
        while r.len() >= r1.len() && !r.is_empty() {
            let shift = r.len() - r1.len();
            let c = field.mul(r.last().unwrap(), &lead_inv);
            if q.len() < shift + 1 {
                q.resize(shift + 1, field.zero());
            }
            q[shift] = field.add(&q[shift], &c);
            r = sub_scaled(&r, &r1, &c, shift);
        }
        let qs1 = mul(&q, &s1);
        let mut s2 = s0.clone();
        if s2.len() < qs1.len() {
            s2.resize(qs1.len(), field.zero());
        }
        for (k, x) in qs1.iter().enumerate() {
            s2[k] = field.sub(&s2[k], x);
        }
        let s2 = trim(s2);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = field.is_unit(&r0[0]).ok()??;
    let mut out: Vec<Elem> = s0.iter().map(|x| field.mul(x, &c)).collect();
    // s0 may exceed the degree only if it was not reduced; reduce to be safe
    out.resize(out.len().max(deg), field.zero());
    while out.len() > deg {
        let k = out.len() - 1;
        let lead = out[k].clone();
        for (i, m) in modulus.iter().take(deg).enumerate() {
            let idx = k - deg + i;
            out[idx] = field.sub(&out[idx], &field.mul(&lead, m));
        }
        out.pop();
    }
    Some(out)
}

