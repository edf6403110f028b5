//! JSON encodings for ring descriptions and ring elements.
//!
//! Elements: integers and residues as decimal strings, rationals as `"p/q"`,
//! localized elements as `[num, den]` pairs, quadratic-extension elements as
//! `[a, b]` meaning `a + b t`, polynomials and quotient residues as monomial
//! lists `[[coeff, [exp, ...]], ...]` in ascending graded-lex order. Any
//! element may also be given as an expression string such as `"X/2 + 3*Y^2"`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Elem, Monomial, MultSet, Node, Poly, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RingSpec {
    Z,
    Q,
    Zmod {
        n: u64,
    },
    #[serde(rename = "poly")]
    Poly { parent: Box<RingSpec>, vars: Vec<String> },
    #[serde(rename = "quotient")]
    Quotient {
        parent: Box<RingSpec>,
        #[serde(default = "default_quotient_var")]
        var: String,
        modulus: Value,
    },
    #[serde(rename = "localize")]
    Localize { parent: Box<RingSpec>, multset: MultSetSpec },
    #[serde(rename = "quadext")]
    QuadExt { parent: Box<RingSpec>, d: Value },
}

fn default_quotient_var() -> String {
    "t".to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultSetSpec {
    pub shape: MultSetShape,
    pub s: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MultSetShape {
    Powers,
    Oneplus,
}

pub(super) fn build(spec: &RingSpec) -> Result<Ring> {
    match spec {
        RingSpec::Z => Ok(Ring::integers()),
        RingSpec::Q => Ok(Ring::rationals()),
        RingSpec::Zmod { n } => Ring::zmod(*n),
        RingSpec::Poly { parent, vars } => Ring::poly_owned(&build(parent)?, vars.clone()),
        RingSpec::Quotient { parent, var, modulus } => {
            let parent = build(parent)?;
            let aux = Ring::poly(&parent, &[var.as_str()])?;
            let m = aux.from_json(modulus).map_err(|e| Error::InvalidSpec(format!("modulus: {e}")))?;
            let Elem::Poly(p) = m else { unreachable!() };
            let deg = p.degree_in(0) as usize;
            let coeffs: Vec<Elem> = (0..=deg).map(|k| p.coeff(&parent, &Monomial(vec![k as u32]))).collect();
            Ring::quotient(&parent, var, coeffs)
        }
        RingSpec::Localize { parent, multset } => {
            let parent = build(parent)?;
            let s = parent.from_json(&multset.s).map_err(|e| Error::InvalidSpec(format!("multset: {e}")))?;
            let mult = match multset.shape {
                MultSetShape::Powers => MultSet::Powers(s),
                MultSetShape::Oneplus => MultSet::OnePlus(s),
            };
            Ring::localize(&parent, mult)
        }
        RingSpec::QuadExt { parent, d } => {
            let parent = build(parent)?;
            let d = parent.from_json(d).map_err(|e| Error::InvalidSpec(format!("d: {e}")))?;
            Ring::quad_ext(&parent, d)
        }
    }
}

impl Ring {
    /// Canonical description of this ring.
    pub fn spec(&self) -> RingSpec {
        match self.node() {
            Node::Integers => RingSpec::Z,
            Node::Rationals => RingSpec::Q,
            Node::Zmod(n) => RingSpec::Zmod { n: n.try_into().unwrap_or(u64::MAX) },
            Node::Poly { coeff, vars } => RingSpec::Poly { parent: Box::new(coeff.spec()), vars: vars.clone() },
            Node::Quotient { parent, var, modulus } => {
                let terms: Vec<Value> = modulus
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !parent.is_zero(c))
                    .map(|(k, c)| json!([parent.to_json(c), [k]]))
                    .collect();
                RingSpec::Quotient { parent: Box::new(parent.spec()), var: var.clone(), modulus: Value::Array(terms) }
            }
            Node::Localize { parent, mult } => {
                let (shape, s) = match mult {
                    MultSet::Powers(s) => (MultSetShape::Powers, s),
                    MultSet::OnePlus(s) => (MultSetShape::Oneplus, s),
                };
                RingSpec::Localize { parent: Box::new(parent.spec()), multset: MultSetSpec { shape, s: parent.to_json(s) } }
            }
            Node::QuadExt { parent, d } => RingSpec::QuadExt { parent: Box::new(parent.spec()), d: parent.to_json(d) },
        }
    }

    pub fn to_json(&self, a: &Elem) -> Value {
        match (self.node(), a) {
            (Node::Integers | Node::Zmod(_), Elem::Int(n)) => Value::String(n.to_string()),
            (Node::Rationals, Elem::Rat(q)) => Value::String(q.to_string()),
            (Node::Poly { coeff, .. }, Elem::Poly(p)) => poly_to_json(coeff, p),
            (Node::Quotient { parent, .. }, Elem::Quo(v)) => Value::Array(
                v.iter()
                    .enumerate()
                    .filter(|(_, c)| !parent.is_zero(c))
                    .map(|(k, c)| json!([parent.to_json(c), [k]]))
                    .collect(),
            ),
            (Node::Localize { parent, mult: MultSet::Powers(s) }, Elem::Pow { num, exp }) => {
                json!([parent.to_json(num), parent.to_json(&parent.pow(s, *exp))])
            }
            (Node::Localize { parent, .. }, Elem::Frac { num, den }) => {
                json!([parent.to_json(num), parent.to_json(den)])
            }
            (Node::QuadExt { parent, .. }, Elem::Quad(x, y)) => json!([parent.to_json(x), parent.to_json(y)]),
            _ => Value::Null,
        }
    }

    pub fn from_json(&self, v: &Value) -> Result<Elem> {
        match v {
            Value::String(s) => self.parse(s),
            Value::Number(n) => {
                let k = n.as_i64().ok_or_else(|| Error::Parse(format!("not an integer: {n}")))?;
                Ok(self.from_int(k))
            }
            Value::Array(items) => match self.node() {
                Node::Poly { coeff, vars } => {
                    let mut p = Poly::with_nvars(vars.len());
                    for it in items {
                        let (c, m) = monomial_entry(it, vars.len())?;
                        p.insert_add(coeff, m, coeff.from_json(c)?);
                    }
                    Ok(Elem::Poly(p))
                }
                Node::Quotient { parent, var, .. } => {
                    let aux = Ring::poly(parent, &[var.as_str()])?;
                    let Elem::Poly(p) = aux.from_json(v)? else { unreachable!() };
                    let t = self.var(var)?;
                    let mut out = self.zero();
                    for (m, c) in p.terms() {
                        let term = self.mul(&self.from_parent(c), &self.pow(&t, m.0[0]));
                        out = self.add(&out, &term);
                    }
                    Ok(out)
                }
                Node::Localize { parent, .. } => {
                    let [n, d] = items.as_slice() else {
                        return Err(Error::Parse("localized elements are [num, den] pairs".into()));
                    };
                    let n = self.from_parent(&parent.from_json(n)?);
                    let d = self.from_parent(&parent.from_json(d)?);
                    let inv = self
                        .is_unit(&d)?
                        .ok_or_else(|| Error::Parse(format!("denominator {} is not invertible", self.show(&d))))?;
                    Ok(self.mul(&n, &inv))
                }
                Node::QuadExt { parent, .. } => {
                    let [a, b] = items.as_slice() else {
                        return Err(Error::Parse("extension elements are [a, b] pairs".into()));
                    };
                    Ok(Elem::Quad(Box::new(parent.from_json(a)?), Box::new(parent.from_json(b)?)))
                }
                _ => Err(Error::Parse(format!("unexpected array for ring {self}"))),
            },
            _ => Err(Error::Parse(format!("cannot read element from {v}"))),
        }
    }
}

fn poly_to_json(coeff: &Ring, p: &Poly) -> Value {
    Value::Array(p.terms().map(|(m, c)| json!([coeff.to_json(c), m.0])).collect())
}

fn monomial_entry(v: &Value, nvars: usize) -> Result<(&Value, Monomial)> {
    let bad = || Error::Parse(format!("bad monomial entry {v}"));
    let arr = v.as_array().ok_or_else(bad)?;
    let [c, e] = arr.as_slice() else { return Err(bad()) };
    let exps = e.as_array().ok_or_else(bad)?;
    if exps.len() > nvars {
        return Err(bad());
    }
    let mut out = vec![0u32; nvars];
    for (k, x) in exps.iter().enumerate() {
        out[k] = x.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(bad)?;
    }
    Ok((c, Monomial(out)))
}
