//! Exact arithmetic over a tower of commutative rings.
//!
//! A [`Ring`] is an immutable, cheaply clonable context. Elements ([`Elem`])
//! are plain payloads that only make sense relative to the ring that built
//! them; every arithmetic entry point lives on [`Ring`] and returns payloads
//! in canonical form.
//!
//! Supported constructors:
//!
//! * `Z`, `Q`, `Z/N`
//! * multivariate polynomials over any ring in the tower
//! * quotients by a monic univariate polynomial
//! * localizations at the powers of `s` or at `1 + sR`
//! * quadratic extensions `R[t]/(t^2 - d)` with the involution `t -> -t`
//!
//! Equality is `is_zero(a - b)`. Over domains the canonical forms make this
//! structural; localizations of finite non-domains use a bounded search over
//! the multiplicative set.

mod display;
mod finite;
mod hom;
mod json;
mod parse;
mod poly;
mod units;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use finite::stable_range_holds;
pub use json::{MultSetSpec, MultSetShape, RingSpec};
pub use poly::{Monomial, Poly};

/// An element payload. Interpret it only through the [`Ring`] it came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    /// Integers, and residues in `[0, N)` for `Z/N`.
    Int(BigInt),
    Rat(BigRational),
    Poly(Poly),
    /// Residue modulo a monic polynomial, coefficients low to high, length = degree.
    Quo(Vec<Elem>),
    /// `num / s^exp` in a localization at the powers of `s`.
    Pow { num: Box<Elem>, exp: u32 },
    /// `num / den` with `den` in `1 + sR`.
    Frac { num: Box<Elem>, den: Box<Elem> },
    /// `a + b t` with `t^2 = d`.
    Quad(Box<Elem>, Box<Elem>),
}

impl Elem {
    pub fn int(n: i64) -> Elem {
        Elem::Int(BigInt::from(n))
    }
}

/// Multiplicative subset used by a localization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MultSet {
    /// `{ s^k : k >= 0 }`
    Powers(Elem),
    /// `{ 1 + s r : r in R }`
    OnePlus(Elem),
}

#[derive(Debug, PartialEq, Eq)]
pub(crate) enum Node {
    Integers,
    Rationals,
    Zmod(BigInt),
    Poly { coeff: Ring, vars: Vec<String> },
    Quotient { parent: Ring, var: String, modulus: Vec<Elem> },
    Localize { parent: Ring, mult: MultSet },
    QuadExt { parent: Ring, d: Elem },
}

/// A ring context. Clones share the same node.
#[derive(Clone, Debug)]
pub struct Ring(Arc<Node>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Ring {}

/// Entry point matching the JSON ring description.
pub fn make_ring(spec: &RingSpec) -> Result<Ring> {
    json::build(spec)
}

impl Ring {
    pub(crate) fn node(&self) -> &Node {
        &self.0
    }

    pub fn integers() -> Ring {
        Ring(Arc::new(Node::Integers))
    }

    pub fn rationals() -> Ring {
        Ring(Arc::new(Node::Rationals))
    }

    pub fn zmod(n: u64) -> Result<Ring> {
        Ring::zmod_big(BigInt::from(n))
    }

    pub fn zmod_big(n: BigInt) -> Result<Ring> {
        if n < BigInt::from(2) {
            return Err(Error::InvalidSpec(format!("Z/N needs N >= 2, got {n}")));
        }
        Ok(Ring(Arc::new(Node::Zmod(n))))
    }

    pub fn poly(coeff: &Ring, vars: &[&str]) -> Result<Ring> {
        Ring::poly_owned(coeff, vars.iter().map(|v| v.to_string()).collect())
    }

    pub fn poly_owned(coeff: &Ring, vars: Vec<String>) -> Result<Ring> {
        if vars.is_empty() {
            return Err(Error::InvalidSpec("polynomial ring without variables".into()));
        }
        for (k, v) in vars.iter().enumerate() {
            if v.is_empty() || !v.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::InvalidSpec(format!("bad variable name `{v}`")));
            }
            if v.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                return Err(Error::InvalidSpec(format!("bad variable name `{v}`")));
            }
            if vars[..k].contains(v) {
                return Err(Error::InvalidSpec(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Ring(Arc::new(Node::Poly { coeff: coeff.clone(), vars })))
    }

    /// `parent[var] / (modulus)`; `modulus` lists coefficients low to high and must be monic.
    pub fn quotient(parent: &Ring, var: &str, modulus: Vec<Elem>) -> Result<Ring> {
        if modulus.len() < 2 {
            return Err(Error::InvalidSpec("quotient modulus must have degree >= 1".into()));
        }
        let lead = modulus.last().expect("nonempty");
        if !parent.eq(lead, &parent.one()) {
            return Err(Error::InvalidSpec("quotient modulus is not monic".into()));
        }
        Ok(Ring(Arc::new(Node::Quotient { parent: parent.clone(), var: var.to_string(), modulus })))
    }

    pub fn localize(parent: &Ring, mult: MultSet) -> Result<Ring> {
        let s = match &mult {
            MultSet::Powers(s) | MultSet::OnePlus(s) => s,
        };
        if parent.is_zero(s) && matches!(mult, MultSet::Powers(_)) {
            return Err(Error::InvalidSpec("localization at 0".into()));
        }
        if let MultSet::OnePlus(_) = mult {
            // 1 + sR contains 0 exactly when s is a unit
            if parent.is_unit(s).ok().flatten().is_some() {
                return Err(Error::InvalidSpec("1 + sR contains 0 for a unit s".into()));
            }
        }
        if !parent.is_domain() && !parent.is_finite() {
            return Err(Error::InvalidSpec(
                "localization of a non-domain is only supported over finite rings".into(),
            ));
        }
        Ok(Ring(Arc::new(Node::Localize { parent: parent.clone(), mult })))
    }

    pub fn localize_powers(parent: &Ring, s: Elem) -> Result<Ring> {
        Ring::localize(parent, MultSet::Powers(s))
    }

    pub fn quad_ext(parent: &Ring, d: Elem) -> Result<Ring> {
        if !parent.has_trivial_involution() {
            return Err(Error::InvalidSpec("quadratic extension needs a parent with trivial involution".into()));
        }
        Ok(Ring(Arc::new(Node::QuadExt { parent: parent.clone(), d })))
    }

    // ---- structure queries ------------------------------------------------

    pub fn is_domain(&self) -> bool {
        match self.node() {
            Node::Integers | Node::Rationals => true,
            Node::Zmod(n) => units::is_prime(n),
            Node::Poly { coeff, .. } => coeff.is_domain(),
            Node::Localize { parent, .. } => parent.is_domain(),
            Node::Quotient { .. } => false,
            Node::QuadExt { parent, d } => match parent.node() {
                Node::Integers => match d {
                    Elem::Int(v) => v.is_negative() || v.sqrt().pow(2) != *v,
                    _ => false,
                },
                Node::Rationals => match d {
                    Elem::Rat(q) => {
                        q.is_negative() || {
                            let (n, m) = (q.numer(), q.denom());
                            n.sqrt().pow(2) != *n || m.sqrt().pow(2) != *m
                        }
                    }
                    _ => false,
                },
                _ => false,
            },
        }
    }

    pub fn is_field(&self) -> bool {
        match self.node() {
            Node::Rationals => true,
            Node::Zmod(n) => units::is_prime(n),
            _ => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self.node() {
            Node::Zmod(_) => true,
            Node::Quotient { parent, .. } | Node::QuadExt { parent, .. } => parent.is_finite(),
            Node::Localize { parent, .. } => parent.is_finite(),
            _ => false,
        }
    }

    pub fn has_trivial_involution(&self) -> bool {
        match self.node() {
            Node::Integers | Node::Rationals | Node::Zmod(_) => true,
            Node::Poly { coeff, .. } => coeff.has_trivial_involution(),
            Node::Quotient { parent, .. } | Node::Localize { parent, .. } => parent.has_trivial_involution(),
            Node::QuadExt { .. } => false,
        }
    }

    /// Variable names of a polynomial ring (empty otherwise).
    pub fn vars(&self) -> &[String] {
        match self.node() {
            Node::Poly { vars, .. } => vars,
            _ => &[],
        }
    }

    /// Coefficient ring of a polynomial ring.
    pub fn coeff_ring(&self) -> Option<&Ring> {
        match self.node() {
            Node::Poly { coeff, .. } => Some(coeff),
            _ => None,
        }
    }

    /// Parent of a localization, quotient or extension.
    pub fn parent(&self) -> Option<&Ring> {
        match self.node() {
            Node::Localize { parent, .. } | Node::Quotient { parent, .. } | Node::QuadExt { parent, .. } => Some(parent),
            _ => None,
        }
    }

    pub fn mult_set(&self) -> Option<&MultSet> {
        match self.node() {
            Node::Localize { mult, .. } => Some(mult),
            _ => None,
        }
    }

    // ---- constants --------------------------------------------------------

    pub fn zero(&self) -> Elem {
        match self.node() {
            Node::Integers | Node::Zmod(_) => Elem::Int(BigInt::zero()),
            Node::Rationals => Elem::Rat(BigRational::zero()),
            Node::Poly { vars, .. } => Elem::Poly(Poly::with_nvars(vars.len())),
            Node::Quotient { parent, modulus, .. } => Elem::Quo(vec![parent.zero(); modulus.len() - 1]),
            Node::Localize { parent, mult: MultSet::Powers(_) } => {
                Elem::Pow { num: Box::new(parent.zero()), exp: 0 }
            }
            Node::Localize { parent, mult: MultSet::OnePlus(_) } => {
                Elem::Frac { num: Box::new(parent.zero()), den: Box::new(parent.one()) }
            }
            Node::QuadExt { parent, .. } => Elem::Quad(Box::new(parent.zero()), Box::new(parent.zero())),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_bigint(&BigInt::one())
    }

    pub fn from_int(&self, n: i64) -> Elem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        match self.node() {
            Node::Integers => Elem::Int(n.clone()),
            Node::Zmod(m) => Elem::Int(n.mod_floor(m)),
            Node::Rationals => Elem::Rat(BigRational::from_integer(n.clone())),
            Node::Poly { coeff, vars } => Elem::Poly(Poly::constant(coeff, vars.len(), coeff.from_bigint(n))),
            Node::Quotient { parent, modulus, .. } => {
                let mut v = vec![parent.zero(); modulus.len() - 1];
                v[0] = parent.from_bigint(n);
                Elem::Quo(v)
            }
            Node::Localize { parent, mult: MultSet::Powers(_) } => {
                Elem::Pow { num: Box::new(parent.from_bigint(n)), exp: 0 }
            }
            Node::Localize { parent, mult: MultSet::OnePlus(_) } => {
                Elem::Frac { num: Box::new(parent.from_bigint(n)), den: Box::new(parent.one()) }
            }
            Node::QuadExt { parent, .. } => Elem::Quad(Box::new(parent.from_bigint(n)), Box::new(parent.zero())),
        }
    }

    /// The rational `p/q` in a ring containing `Q`, or `p * q^{-1}` when `q` is a unit.
    pub fn from_ratio(&self, p: i64, q: i64) -> Result<Elem> {
        let num = self.from_int(p);
        let den = self.from_int(q);
        self.divide(&num, &den)
    }

    /// The polynomial variable (or quotient / extension generator) called `name`,
    /// searching down the tower.
    pub fn var(&self, name: &str) -> Result<Elem> {
        match self.node() {
            Node::Poly { coeff, vars } => {
                if let Some(k) = vars.iter().position(|v| v == name) {
                    let mut e = vec![0u32; vars.len()];
                    e[k] = 1;
                    Ok(Elem::Poly(Poly::monomial(coeff, Monomial(e), coeff.one())))
                } else {
                    let c = coeff.var(name)?;
                    Ok(Elem::Poly(Poly::constant(coeff, vars.len(), c)))
                }
            }
            Node::Quotient { parent, var, modulus } => {
                if var == name {
                    let mut v = vec![parent.zero(); modulus.len() - 1];
                    if v.len() == 1 {
                        // t = -m0 when the modulus is linear
                        return Ok(Elem::Quo(vec![parent.neg(&modulus[0])]));
                    }
                    v[1] = parent.one();
                    Ok(Elem::Quo(v))
                } else {
                    Ok(self.from_parent(&parent.var(name)?))
                }
            }
            Node::QuadExt { parent, .. } => {
                if name == "t" {
                    Ok(Elem::Quad(Box::new(parent.zero()), Box::new(parent.one())))
                } else {
                    Ok(self.from_parent(&parent.var(name)?))
                }
            }
            Node::Localize { parent, .. } => Ok(self.from_parent(&parent.var(name)?)),
            _ => Err(Error::VariableUnknown(name.to_string())),
        }
    }

    /// Canonical image of a parent (or coefficient) element.
    pub fn from_parent(&self, x: &Elem) -> Elem {
        match self.node() {
            Node::Poly { coeff, vars } => Elem::Poly(Poly::constant(coeff, vars.len(), x.clone())),
            Node::Quotient { parent, modulus, .. } => {
                let mut v = vec![parent.zero(); modulus.len() - 1];
                v[0] = x.clone();
                Elem::Quo(v)
            }
            Node::Localize { mult: MultSet::Powers(_), .. } => {
                self.canon_pow(x.clone(), 0)
            }
            Node::Localize { parent, mult: MultSet::OnePlus(_) } => {
                Elem::Frac { num: Box::new(x.clone()), den: Box::new(parent.one()) }
            }
            Node::QuadExt { parent, .. } => Elem::Quad(Box::new(x.clone()), Box::new(parent.zero())),
            _ => x.clone(),
        }
    }

    // ---- arithmetic -------------------------------------------------------

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (self.node(), a, b) {
            (Node::Integers, Elem::Int(x), Elem::Int(y)) => Elem::Int(x + y),
            (Node::Zmod(m), Elem::Int(x), Elem::Int(y)) => Elem::Int((x + y).mod_floor(m)),
            (Node::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (Node::Poly { coeff, .. }, Elem::Poly(p), Elem::Poly(q)) => Elem::Poly(p.add(coeff, q)),
            (Node::Quotient { parent, .. }, Elem::Quo(p), Elem::Quo(q)) => {
                Elem::Quo(p.iter().zip(q).map(|(x, y)| parent.add(x, y)).collect())
            }
            (Node::Localize { parent, mult: MultSet::Powers(s) }, Elem::Pow { num: x, exp: i }, Elem::Pow { num: y, exp: j }) => {
                let k = (*i).max(*j);
                let xs = parent.mul(x, &parent.pow(s, k - i));
                let ys = parent.mul(y, &parent.pow(s, k - j));
                self.canon_pow(parent.add(&xs, &ys), k)
            }
            (Node::Localize { parent, .. }, Elem::Frac { num: x, den: d }, Elem::Frac { num: y, den: e }) => {
                let num = parent.add(&parent.mul(x, e), &parent.mul(y, d));
                self.canon_frac(num, parent.mul(d, e))
            }
            (Node::QuadExt { parent, .. }, Elem::Quad(a0, a1), Elem::Quad(b0, b1)) => {
                Elem::Quad(Box::new(parent.add(a0, b0)), Box::new(parent.add(a1, b1)))
            }
            _ => panic!("element does not belong to ring {self}: {a:?} + {b:?}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (self.node(), a) {
            (Node::Integers, Elem::Int(x)) => Elem::Int(-x),
            (Node::Zmod(m), Elem::Int(x)) => Elem::Int((-x).mod_floor(m)),
            (Node::Rationals, Elem::Rat(x)) => Elem::Rat(-x),
            (Node::Poly { coeff, .. }, Elem::Poly(p)) => Elem::Poly(p.neg(coeff)),
            (Node::Quotient { parent, .. }, Elem::Quo(p)) => Elem::Quo(p.iter().map(|x| parent.neg(x)).collect()),
            (Node::Localize { parent, .. }, Elem::Pow { num, exp }) => {
                Elem::Pow { num: Box::new(parent.neg(num)), exp: *exp }
            }
            (Node::Localize { parent, .. }, Elem::Frac { num, den }) => {
                Elem::Frac { num: Box::new(parent.neg(num)), den: den.clone() }
            }
            (Node::QuadExt { parent, .. }, Elem::Quad(a0, a1)) => {
                Elem::Quad(Box::new(parent.neg(a0)), Box::new(parent.neg(a1)))
            }
            _ => panic!("element does not belong to ring {self}: -{a:?}"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self.node(), a, b) {
            (Node::Integers, Elem::Int(x), Elem::Int(y)) => Elem::Int(x * y),
            (Node::Zmod(m), Elem::Int(x), Elem::Int(y)) => Elem::Int((x * y).mod_floor(m)),
            (Node::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Node::Poly { coeff, .. }, Elem::Poly(p), Elem::Poly(q)) => Elem::Poly(p.mul(coeff, q)),
            (Node::Quotient { parent, modulus, .. }, Elem::Quo(p), Elem::Quo(q)) => {
                Elem::Quo(quo_mul(parent, modulus, p, q))
            }
            (Node::Localize { parent, mult: MultSet::Powers(_) }, Elem::Pow { num: x, exp: i }, Elem::Pow { num: y, exp: j }) => {
                self.canon_pow(parent.mul(x, y), i + j)
            }
            (Node::Localize { parent, .. }, Elem::Frac { num: x, den: d }, Elem::Frac { num: y, den: e }) => {
                self.canon_frac(parent.mul(x, y), parent.mul(d, e))
            }
            (Node::QuadExt { parent, d }, Elem::Quad(a0, a1), Elem::Quad(b0, b1)) => {
                let re = parent.add(&parent.mul(a0, b0), &parent.mul(d, &parent.mul(a1, b1)));
                let im = parent.add(&parent.mul(a0, b1), &parent.mul(a1, b0));
                Elem::Quad(Box::new(re), Box::new(im))
            }
            _ => panic!("element does not belong to ring {self}: {a:?} * {b:?}"),
        }
    }

    pub fn pow(&self, a: &Elem, mut e: u32) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match (self.node(), a) {
            (Node::Integers | Node::Zmod(_), Elem::Int(x)) => x.is_zero(),
            (Node::Rationals, Elem::Rat(x)) => x.is_zero(),
            (Node::Poly { .. }, Elem::Poly(p)) => p.is_zero(),
            (Node::Quotient { parent, .. }, Elem::Quo(p)) => p.iter().all(|x| parent.is_zero(x)),
            (Node::Localize { parent, mult }, Elem::Pow { num, .. } | Elem::Frac { num, .. }) => {
                if parent.is_zero(num) {
                    return true;
                }
                if parent.is_domain() {
                    return false;
                }
                // finite parent: x/u = 0 iff some m in the multiplicative set kills x
                match mult {
                    MultSet::Powers(s) => {
                        let mut m = s.clone();
                        for _ in 0..parent.nil_bound() {
                            if parent.is_zero(&parent.mul(&m, num)) {
                                return true;
                            }
                            m = parent.mul(&m, s);
                        }
                        false
                    }
                    MultSet::OnePlus(s) => {
                        let elems = parent.elements().expect("finite parent");
                        elems.iter().any(|r| {
                            let u = parent.add(&parent.one(), &parent.mul(s, r));
                            parent.is_zero(&parent.mul(&u, num))
                        })
                    }
                }
            }
            (Node::QuadExt { parent, .. }, Elem::Quad(a0, a1)) => parent.is_zero(a0) && parent.is_zero(a1),
            _ => panic!("element does not belong to ring {self}: {a:?}"),
        }
    }

    /// Ring equality.
    pub fn eq(&self, a: &Elem, b: &Elem) -> bool {
        if a == b {
            return true;
        }
        self.is_zero(&self.sub(a, b))
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        self.eq(a, &self.one())
    }

    /// The ring involution: conjugation `t -> -t` on quadratic extensions,
    /// identity on everything else, extended coefficientwise.
    pub fn conj(&self, a: &Elem) -> Elem {
        match (self.node(), a) {
            (Node::Poly { coeff, .. }, Elem::Poly(p)) => Elem::Poly(p.map_coeffs(coeff, |c| coeff.conj(c))),
            (Node::Quotient { parent, .. }, Elem::Quo(p)) => Elem::Quo(p.iter().map(|x| parent.conj(x)).collect()),
            (Node::Localize { parent, .. }, Elem::Pow { num, exp }) => {
                Elem::Pow { num: Box::new(parent.conj(num)), exp: *exp }
            }
            (Node::Localize { parent, .. }, Elem::Frac { num, den }) => {
                Elem::Frac { num: Box::new(parent.conj(num)), den: Box::new(parent.conj(den)) }
            }
            (Node::QuadExt { parent, .. }, Elem::Quad(a0, a1)) => {
                Elem::Quad(Box::new(parent.conj(a0)), Box::new(parent.neg(&parent.conj(a1))))
            }
            _ => a.clone(),
        }
    }

    /// Division when it is exact: over fields, by units, or when the divisor
    /// divides on the nose (`6/3` in `Z`, `X^2/X` in `Z[X]`, `1/2` in `Z[1/2]`).
    pub fn divide(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        if let Some(q) = self.try_div(a, b) {
            return Ok(q);
        }
        if let Some(inv) = self.is_unit(b)? {
            return Ok(self.mul(a, &inv));
        }
        Err(Error::NotRepresentable(format!("{} / {}", self.show(a), self.show(b))))
    }

    /// Upper bound on nilpotency indices / annihilator chains for finite rings.
    pub(crate) fn nil_bound(&self) -> u32 {
        match self.node() {
            Node::Zmod(n) => n.bits() as u32 + 1,
            Node::Quotient { parent, modulus, .. } => (modulus.len() as u32 - 1) * parent.nil_bound() + 1,
            Node::QuadExt { parent, .. } => 2 * parent.nil_bound() + 1,
            Node::Localize { parent, .. } => parent.nil_bound(),
            _ => 64,
        }
    }

    fn canon_pow(&self, num: Elem, exp: u32) -> Elem {
        let Node::Localize { parent, mult: MultSet::Powers(s) } = self.node() else {
            unreachable!("canon_pow on a non-localization")
        };
        if parent.is_zero(&num) {
            return Elem::Pow { num: Box::new(parent.zero()), exp: 0 };
        }
        let mut num = num;
        let mut exp = exp;
        if parent.is_domain() {
            while exp > 0 {
                match parent.try_div(&num, s) {
                    Some(q) => {
                        num = q;
                        exp -= 1;
                    }
                    None => break,
                }
            }
        }
        Elem::Pow { num: Box::new(num), exp }
    }

    fn canon_frac(&self, num: Elem, den: Elem) -> Elem {
        let Node::Localize { parent, mult: MultSet::OnePlus(s) } = self.node() else {
            unreachable!("canon_frac on a non-localization")
        };
        if parent.is_zero(&num) {
            return Elem::Frac { num: Box::new(parent.zero()), den: Box::new(parent.one()) };
        }
        if let (Node::Integers, Elem::Int(p), Elem::Int(q), Elem::Int(sv)) = (parent.node(), &num, &den, s) {
            let g = p.gcd(q);
            if !g.is_one() {
                let q2 = q / &g;
                if (&q2 - BigInt::one()).is_multiple_of(sv) {
                    return Elem::Frac { num: Box::new(Elem::Int(p / &g)), den: Box::new(Elem::Int(q2)) };
                }
            }
        }
        Elem::Frac { num: Box::new(num), den: Box::new(den) }
    }

    /// Membership in the multiplicative set of a localization.
    pub fn in_mult_set(&self, x: &Elem) -> bool {
        let Node::Localize { parent, mult } = self.node() else { return false };
        match mult {
            MultSet::OnePlus(s) => parent.try_div(&parent.sub(x, &parent.one()), s).is_some(),
            MultSet::Powers(s) => {
                let mut p = parent.one();
                for _ in 0..=256 {
                    if parent.eq(&p, x) {
                        return true;
                    }
                    p = parent.mul(&p, s);
                }
                false
            }
        }
    }
}

fn quo_mul(parent: &Ring, modulus: &[Elem], p: &[Elem], q: &[Elem]) -> Vec<Elem> {
    let deg = modulus.len() - 1;
    let mut prod = vec![parent.zero(); 2 * deg - 1];
    for (i, x) in p.iter().enumerate() {
        if parent.is_zero(x) {
            continue;
        }
        for (j, y) in q.iter().enumerate() {
            prod[i + j] = parent.add(&prod[i + j], &parent.mul(x, y));
        }
    }
    for k in (deg..prod.len()).rev() {
        let c = prod[k].clone();
        if parent.is_zero(&c) {
            continue;
        }
        for (i, m) in modulus.iter().take(deg).enumerate() {
            let idx = k - deg + i;
            prod[idx] = parent.sub(&prod[idx], &parent.mul(&c, m));
        }
        prod[k] = parent.zero();
    }
    prod.truncate(deg);
    prod
}

#[cfg(test)]
mod tests;
