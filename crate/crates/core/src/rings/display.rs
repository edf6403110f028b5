use std::fmt;

use super::{Elem, MultSet, Node, Ring};

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Integers => write!(f, "Z"),
            Node::Rationals => write!(f, "Q"),
            Node::Zmod(n) => write!(f, "Z/{n}"),
            Node::Poly { coeff, vars } => write!(f, "{coeff}[{}]", vars.join(",")),
            Node::Quotient { parent, var, modulus } => {
                let aux = Ring::poly(parent, &[var.as_str()]).expect("valid variable");
                let mut m = aux.zero();
                let t = aux.var(var).expect("variable");
                for (k, c) in modulus.iter().enumerate() {
                    m = aux.add(&m, &aux.mul(&aux.from_parent(c), &aux.pow(&t, k as u32)));
                }
                write!(f, "{parent}[{var}]/({})", aux.show(&m))
            }
            Node::Localize { parent, mult: MultSet::Powers(s) } => write!(f, "{parent}[1/{}]", parent.show(s)),
            Node::Localize { parent, mult: MultSet::OnePlus(s) } => {
                write!(f, "{parent}_(1+({}))", parent.show(s))
            }
            Node::QuadExt { parent, d } => write!(f, "{parent}[t]/(t^2-({}))", parent.show(d)),
        }
    }
}

impl Ring {
    /// Human-readable rendering of an element.
    pub fn show(&self, a: &Elem) -> String {
        match (self.node(), a) {
            (Node::Integers | Node::Zmod(_), Elem::Int(n)) => n.to_string(),
            (Node::Rationals, Elem::Rat(q)) => q.to_string(),
            (Node::Poly { coeff, vars }, Elem::Poly(p)) => {
                if p.is_zero() {
                    return "0".into();
                }
                let mut parts = Vec::new();
                for (m, c) in p.terms().rev() {
                    let mono: Vec<String> = m
                        .0
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(k, &e)| if e == 1 { vars[k].clone() } else { format!("{}^{e}", vars[k]) })
                        .collect();
                    let cs = coeff.show(c);
                    let cs = if cs.contains([' ', '/']) && !mono.is_empty() { format!("({cs})") } else { cs };
                    parts.push(if mono.is_empty() {
                        cs
                    } else if coeff.is_one(c) {
                        mono.join("*")
                    } else if coeff.is_one(&coeff.neg(c)) {
                        format!("-{}", mono.join("*"))
                    } else {
                        format!("{cs}*{}", mono.join("*"))
                    });
                }
                let mut s = parts[0].clone();
                for p in &parts[1..] {
                    if let Some(rest) = p.strip_prefix('-') {
                        s.push_str(" - ");
                        s.push_str(rest);
                    } else {
                        s.push_str(" + ");
                        s.push_str(p);
                    }
                }
                s
            }
            (Node::Quotient { parent, var, .. }, Elem::Quo(v)) => {
                let aux = Ring::poly(parent, &[var.as_str()]).expect("valid variable");
                let t = aux.var(var).expect("variable");
                let mut m = aux.zero();
                for (k, c) in v.iter().enumerate() {
                    m = aux.add(&m, &aux.mul(&aux.from_parent(c), &aux.pow(&t, k as u32)));
                }
                aux.show(&m)
            }
            (Node::Localize { parent, mult: MultSet::Powers(s) }, Elem::Pow { num, exp }) => match exp {
                0 => parent.show(num),
                1 => format!("({})/({})", parent.show(num), parent.show(s)),
                _ => format!("({})/({})^{exp}", parent.show(num), parent.show(s)),
            },
            (Node::Localize { parent, .. }, Elem::Frac { num, den }) => {
                if parent.is_one(den) {
                    parent.show(num)
                } else {
                    format!("({})/({})", parent.show(num), parent.show(den))
                }
            }
            (Node::QuadExt { parent, .. }, Elem::Quad(x, y)) => {
                format!("{} + ({})*t", parent.show(x), parent.show(y))
            }
            _ => format!("{a:?}"),
        }
    }
}
