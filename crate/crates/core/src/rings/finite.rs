//! Enumeration of finite rings and the brute-force stable range check.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{Elem, Node, Ring};
use crate::error::{Error, Result};

/// Enumeration refuses rings larger than this.
const ENUMERATION_LIMIT: u64 = 1 << 20;

impl Ring {
    /// Number of elements of a finite ring.
    pub fn size(&self) -> Option<BigInt> {
        match self.node() {
            Node::Zmod(n) => Some(n.clone()),
            Node::Quotient { parent, modulus, .. } => Some(num_traits::pow(parent.size()?, modulus.len() - 1)),
            Node::QuadExt { parent, .. } => {
                let s = parent.size()?;
                Some(&s * &s)
            }
            _ => None,
        }
    }

    /// All elements of a finite ring, each exactly once.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let size = self.size().ok_or_else(|| match self.node() {
            Node::Localize { .. } => Error::Undecidable(format!("enumerating {self}")),
            _ => Error::InfiniteRing,
        })?;
        if size > BigInt::from(ENUMERATION_LIMIT) {
            return Err(Error::Undecidable(format!("{self} has {size} elements")));
        }
        match self.node() {
            Node::Zmod(n) => {
                let n = n.to_u64().expect("bounded");
                Ok((0..n).map(|k| Elem::Int(BigInt::from(k))).collect())
            }
            Node::Quotient { parent, modulus, .. } => {
                let base = parent.elements()?;
                let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
                for _ in 0..modulus.len() - 1 {
                    out = out
                        .into_iter()
                        .flat_map(|v| {
                            base.iter().map(move |b| {
                                let mut w = v.clone();
                                w.push(b.clone());
                                w
                            })
                        })
                        .collect();
                }
                Ok(out.into_iter().map(Elem::Quo).collect())
            }
            Node::QuadExt { parent, .. } => {
                let base = parent.elements()?;
                let mut out = Vec::with_capacity(base.len() * base.len());
                for a in &base {
                    for b in &base {
                        out.push(Elem::Quad(Box::new(a.clone()), Box::new(b.clone())));
                    }
                }
                Ok(out)
            }
            _ => Err(Error::InfiniteRing),
        }
    }

    /// Whether `gens` generate the unit ideal, decided by gcd over `Z/N`
    /// and by closure under `R`-linear combinations in other finite rings.
    pub fn generates_unit_ideal(&self, gens: &[Elem]) -> Result<bool> {
        match self.node() {
            Node::Zmod(n) => {
                let mut g = n.clone();
                for x in gens {
                    let Elem::Int(v) = x else { return Err(Error::RingMismatch("expected residue".into())) };
                    g = g.gcd(v);
                }
                Ok(g.is_one())
            }
            Node::Integers => {
                let mut g = BigInt::zero();
                for x in gens {
                    let Elem::Int(v) = x else { return Err(Error::RingMismatch("expected integer".into())) };
                    g = g.gcd(v);
                }
                Ok(g.is_one())
            }
            _ if self.is_field() => Ok(gens.iter().any(|g| !self.is_zero(g))),
            _ => {
                let elems = self.elements()?;
                let mut ideal: HashSet<Elem> = HashSet::from([self.zero()]);
                for g in gens {
                    let multiples: HashSet<Elem> = elems.iter().map(|r| self.mul(r, g)).collect();
                    let mut next = HashSet::new();
                    for i in &ideal {
                        for m in &multiples {
                            next.insert(self.add(i, m));
                        }
                    }
                    ideal = next;
                    if ideal.contains(&self.one()) {
                        return Ok(true);
                    }
                }
                Ok(ideal.contains(&self.one()))
            }
        }
    }
}

/// Condition `(R_m)`: every unimodular `(a_1, ..., a_{m+1})` can be shortened
/// to a unimodular `(a_1 + a_{m+1} x_1, ..., a_m + a_{m+1} x_m)`. Decided by
/// exhaustive enumeration, so `ring` must be finite.
pub fn stable_range_holds(ring: &Ring, m: usize) -> Result<bool> {
    if m == 0 {
        return Err(Error::InvalidSpec("stable range index must be positive".into()));
    }
    if !ring.is_finite() {
        return Err(Error::InfiniteRing);
    }
    let elems = ring.elements()?;
    let q = elems.len();
    let mut idx = vec![0usize; m + 1];
    loop {
        let row: Vec<Elem> = idx.iter().map(|&k| elems[k].clone()).collect();
        if ring.generates_unit_ideal(&row)? && !shortens(ring, &elems, &row, m)? {
            return Ok(false);
        }
        // odometer step
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(true);
            }
            idx[k] += 1;
            if idx[k] < q {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn shortens(ring: &Ring, elems: &[Elem], row: &[Elem], m: usize) -> Result<bool> {
    let last = &row[m];
    let mut xs = vec![0usize; m];
    loop {
        let short: Vec<Elem> = (0..m).map(|i| ring.add(&row[i], &ring.mul(last, &elems[xs[i]]))).collect();
        if ring.generates_unit_ideal(&short)? {
            return Ok(true);
        }
        let mut k = 0;
        loop {
            if k == m {
                return Ok(false);
            }
            xs[k] += 1;
            if xs[k] < elems.len() {
                break;
            }
            xs[k] = 0;
            k += 1;
        }
    }
}
