//! Maps between rings of the tower: canonical injections, pulling back
//! denominator-free fractions, residue transport, and variable substitution.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Elem, MultSet, Node, Poly, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// Canonical ring homomorphism `src -> self`.
    Embed,
    /// Inverse of the injection `self -> src` (fails off its image).
    Restrict,
    /// Integer representatives: `Z/N <-> Z/M`, `Z -> Z/N` and back.
    Residue,
}

impl Ring {
    /// Image of `x` under the canonical homomorphism `src -> self`
    /// (`Z -> anything`, `A -> A[X]`, `A -> A_s`, `A[X] -> A[X, T]`, `Z[1/s] -> Q`, `Z/NM -> Z/N`, ...).
    pub fn embed(&self, src: &Ring, x: &Elem) -> Result<Elem> {
        self.transfer(src, x, Mode::Embed)
    }

    /// Pull `x` back along the injection `self -> src`; fails with
    /// `NotRepresentable` when `x` still carries a denominator.
    pub fn restrict(&self, src: &Ring, x: &Elem) -> Result<Elem> {
        self.transfer(src, x, Mode::Restrict)
    }

    /// Transport integer representatives between `Z`, `Z/N`, `Z/M`
    /// (coefficientwise through polynomial rings). Used to lift residues.
    pub fn residue(&self, src: &Ring, x: &Elem) -> Result<Elem> {
        self.transfer(src, x, Mode::Residue)
    }

    fn transfer(&self, src: &Ring, x: &Elem, mode: Mode) -> Result<Elem> {
        if self == src {
            return Ok(x.clone());
        }
        let fail = || Error::NotRepresentable(format!("{} from {src} into {self}", src.show(x)));
        match (self.node(), src.node()) {
            (Node::Poly { coeff, vars }, Node::Poly { coeff: c2, vars: v2 }) => {
                let Elem::Poly(p) = x else { return Err(fail()) };
                let var_imgs: Vec<Option<Elem>> = v2
                    .iter()
                    .map(|name| {
                        if vars.contains(name) || mode == Mode::Embed {
                            self.var(name).ok()
                        } else {
                            None
                        }
                    })
                    .collect();
                let mut out = self.zero();
                for (m, c) in p.terms() {
                    let mut t = self.from_parent(&coeff.transfer(c2, c, mode)?);
                    for (k, &e) in m.0.iter().enumerate() {
                        if e == 0 {
                            continue;
                        }
                        let img = var_imgs[k].as_ref().ok_or_else(fail)?;
                        t = self.mul(&t, &self.pow(img, e));
                    }
                    out = self.add(&out, &t);
                }
                Ok(out)
            }
            (_, Node::Poly { coeff: c2, .. }) => {
                // only constants survive leaving a polynomial ring
                let Elem::Poly(p) = x else { return Err(fail()) };
                if !p.is_constant() {
                    if let Ok(v) = self.embed_poly_by_vars(src, p) {
                        return Ok(v);
                    }
                    return Err(fail());
                }
                self.transfer(c2, &p.constant_term(c2), mode)
            }
            (Node::Poly { coeff, .. }, _) if !(mode == Mode::Restrict && matches!(src.node(), Node::Localize { .. })) => {
                Ok(self.from_parent(&coeff.transfer(src, x, mode)?))
            }
            (_, Node::Integers) => Ok(self.from_bigint(int_of(x)?)),
            (Node::Integers, Node::Zmod(_)) if mode == Mode::Residue => Ok(x.clone()),
            (Node::Zmod(n), Node::Zmod(m)) => {
                if mode == Mode::Residue || (mode == Mode::Embed && (m % n) == BigInt::from(0)) {
                    Ok(self.from_bigint(int_of(x)?))
                } else {
                    Err(fail())
                }
            }
            (Node::Rationals, Node::Localize { parent, mult }) if mode == Mode::Embed => {
                let q = |e: &Elem| -> Result<BigRational> {
                    match self.embed(parent, e)? {
                        Elem::Rat(r) => Ok(r),
                        _ => Err(fail()),
                    }
                };
                match (x, mult) {
                    (Elem::Pow { num, exp }, MultSet::Powers(s)) => {
                        let s = q(s)?;
                        Ok(Elem::Rat(q(num)? / num_traits::pow(s, *exp as usize)))
                    }
                    (Elem::Frac { num, den }, _) => Ok(Elem::Rat(q(num)? / q(den)?)),
                    _ => Err(fail()),
                }
            }
            (Node::Localize { parent, mult }, Node::Localize { parent: p2, mult: m2 }) => {
                let same_set = match (mult, m2) {
                    (MultSet::Powers(s), MultSet::Powers(s2)) | (MultSet::OnePlus(s), MultSet::OnePlus(s2)) => {
                        parent.transfer(p2, s2, mode).map(|t| parent.eq(&t, s)).unwrap_or(false)
                    }
                    _ => false,
                };
                if same_set {
                    return match x {
                        Elem::Pow { num, exp } => Ok(self.canon_pow(parent.transfer(p2, num, mode)?, *exp)),
                        Elem::Frac { num, den } => {
                            Ok(self.canon_frac(parent.transfer(p2, num, mode)?, parent.transfer(p2, den, mode)?))
                        }
                        _ => Err(fail()),
                    };
                }
                if mode == Mode::Embed {
                    // A_s -> (A_s)_t style nesting: go through the parent
                    if let Ok(v) = parent.transfer(src, x, mode) {
                        return Ok(self.from_parent(&v));
                    }
                    // (A_B)_s with src A_s: num / s^k = (num/1) * (1/s)^k
                    if let (Elem::Pow { num, exp }, MultSet::Powers(s2)) = (x, m2) {
                        let n = self.embed(p2, num)?;
                        let s = self.embed(p2, s2)?;
                        let inv = self.is_unit(&s)?.ok_or_else(fail)?;
                        return Ok(self.mul(&n, &self.pow(&inv, *exp)));
                    }
                }
                Err(fail())
            }
            (Node::Localize { parent, .. }, _) if mode != Mode::Restrict => {
                Ok(self.from_parent(&parent.transfer(src, x, mode)?))
            }
            (_, Node::Localize { parent: p2, mult }) if mode == Mode::Restrict => {
                let base = match (x, mult) {
                    (Elem::Pow { num, exp: 0 }, _) => (**num).clone(),
                    (Elem::Pow { num, exp }, MultSet::Powers(s)) => {
                        p2.try_div(num, &p2.pow(s, *exp)).ok_or_else(fail)?
                    }
                    (Elem::Frac { num, den }, _) => p2.try_div(num, den).ok_or_else(fail)?,
                    _ => return Err(fail()),
                };
                self.transfer(p2, &base, Mode::Embed)
            }
            (Node::Quotient { parent, .. } | Node::QuadExt { parent, .. }, _) => {
                Ok(self.from_parent(&parent.transfer(src, x, mode)?))
            }
            _ => Err(fail()),
        }
    }

    /// `A[X] -> B` where `B` contains the variables further down the tower.
    fn embed_poly_by_vars(&self, src: &Ring, p: &Poly) -> Result<Elem> {
        let Node::Poly { coeff: c2, vars: v2 } = src.node() else { unreachable!() };
        let mut out = self.zero();
        for (m, c) in p.terms() {
            let mut t = self.embed(c2, c)?;
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = self.mul(&t, &self.pow(&self.var(&v2[k])?, e));
                }
            }
            out = self.add(&out, &t);
        }
        Ok(out)
    }

    /// Replace `var` by `value` (both living in this polynomial ring).
    pub fn substitute(&self, p: &Elem, var: &str, value: &Elem) -> Result<Elem> {
        self.substitute_many(p, &[(var, value.clone())])
    }

    /// Simultaneous substitution of several variables.
    pub fn substitute_many(&self, p: &Elem, subs: &[(&str, Elem)]) -> Result<Elem> {
        let Node::Poly { coeff, vars } = self.node() else {
            return Err(Error::VariableUnknown(subs.first().map(|s| s.0.to_string()).unwrap_or_default()));
        };
        let mut images: Vec<Option<&Elem>> = vec![None; vars.len()];
        for (name, val) in subs {
            let k = vars.iter().position(|v| v == name).ok_or_else(|| Error::VariableUnknown(name.to_string()))?;
            images[k] = Some(val);
        }
        let Elem::Poly(p) = p else { return Err(Error::RingMismatch("substitute needs a polynomial".into())) };
        let mut cache: HashMap<(usize, u32), Elem> = HashMap::new();
        let mut out = Poly::with_nvars(vars.len());
        for (m, c) in p.terms() {
            let mut rest = m.0.clone();
            let mut factor: Option<Elem> = None;
            for (k, img) in images.iter().enumerate() {
                let e = m.0.get(k).copied().unwrap_or(0);
                if let (Some(img), true) = (img, e > 0) {
                    rest[k] = 0;
                    let pw = cache.entry((k, e)).or_insert_with(|| self.pow(img, e)).clone();
                    factor = Some(match factor {
                        None => pw,
                        Some(f) => self.mul(&f, &pw),
                    });
                }
            }
            let term = Poly::monomial(coeff, super::Monomial(rest), c.clone());
            match factor {
                None => out = out.add(coeff, &term),
                Some(f) => {
                    let Elem::Poly(f) = f else { unreachable!() };
                    out = out.add(coeff, &term.mul(coeff, &f));
                }
            }
        }
        Ok(Elem::Poly(out))
    }

    /// Largest `k` such that `var^k` divides every term of `p` (`u32::MAX` for zero).
    pub fn min_degree_in(&self, p: &Elem, var: &str) -> Result<u32> {
        let Node::Poly { vars, .. } = self.node() else { return Err(Error::VariableUnknown(var.into())) };
        let k = vars.iter().position(|v| v == var).ok_or_else(|| Error::VariableUnknown(var.into()))?;
        let Elem::Poly(p) = p else { return Err(Error::RingMismatch("expected a polynomial".into())) };
        Ok(p.terms().map(|(m, _)| m.0.get(k).copied().unwrap_or(0)).min().unwrap_or(u32::MAX))
    }

    /// Degree of `p` in `var`.
    pub fn degree_in(&self, p: &Elem, var: &str) -> Result<u32> {
        let Node::Poly { vars, .. } = self.node() else { return Err(Error::VariableUnknown(var.into())) };
        let k = vars.iter().position(|v| v == var).ok_or_else(|| Error::VariableUnknown(var.into()))?;
        let Elem::Poly(p) = p else { return Err(Error::RingMismatch("expected a polynomial".into())) };
        Ok(p.degree_in(k))
    }
}

fn int_of(x: &Elem) -> Result<&BigInt> {
    match x {
        Elem::Int(n) => Ok(n),
        _ => Err(Error::RingMismatch(format!("expected an integer payload, got {x:?}"))),
    }
}
