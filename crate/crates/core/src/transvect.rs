//! Transvections of `A^n` and elementary transvections of `Q = P + A`
//! (linear) or `Q = P + A^2` (symplectic / orthogonal), with unimodularity
//! certificates.
//!
//! Coordinates on `Q` are `(p, b, a)`: `p` in `P`, then `b` at position
//! `n + 1` and `a` at `n + 2`, so the form on `Q` is the standard form of
//! size `n + 2`. Pairings are `<x, y> = x* psi y`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matform::{form_value, FormKind, Mat};
use crate::rings::{Elem, Ring};

/// Evidence that a vector or a functional is unimodular.
#[derive(Clone, Debug, PartialEq)]
pub enum UnimodularCert {
    /// Coefficients `c` with `sum c_i v_i = 1`.
    Vector(Vec<Elem>),
    /// Functionals `f_j` and weights `w_j` with `sum w_j f_j(v) = 1`:
    /// `1` lies in the order ideal of `v`.
    OrderIdeal { functionals: Vec<Vec<Elem>>, weights: Vec<Elem> },
    /// A vector `m` on which the certified functional takes the value `1`.
    Functional(Vec<Elem>),
}

fn dot(ring: &Ring, a: &[Elem], b: &[Elem]) -> Elem {
    let mut acc = ring.zero();
    for (x, y) in a.iter().zip(b) {
        acc = ring.add(&acc, &ring.mul(x, y));
    }
    acc
}

/// Check a certificate that `v` is unimodular.
pub fn check_unimodular(ring: &Ring, v: &[Elem], cert: &UnimodularCert) -> bool {
    match cert {
        UnimodularCert::Vector(c) => c.len() == v.len() && ring.is_one(&dot(ring, c, v)),
        UnimodularCert::OrderIdeal { functionals, weights } => {
            functionals.len() == weights.len()
                && functionals.iter().all(|f| f.len() == v.len())
                && {
                    let mut acc = ring.zero();
                    for (f, w) in functionals.iter().zip(weights) {
                        acc = ring.add(&acc, &ring.mul(w, &dot(ring, f, v)));
                    }
                    ring.is_one(&acc)
                }
        }
        UnimodularCert::Functional(_) => false,
    }
}

/// Certificate-free decision over `Z`, `Z/N`, fields and univariate
/// polynomials over a field.
pub fn is_unimodular(ring: &Ring, v: &[Elem]) -> Result<bool> {
    if ring.is_field() {
        return Ok(v.iter().any(|x| !ring.is_zero(x)));
    }
    if ring.is_finite() || ring.coeff_ring().is_none() && ring.parent().is_none() {
        return ring.generates_unit_ideal(v);
    }
    if let (Some(k), 1) = (ring.coeff_ring(), ring.vars().len()) {
        if k.is_field() {
            let var = ring.vars()[0].clone();
            let mut g = ring.zero();
            for x in v {
                g = poly_gcd(ring, &var, &g, x);
            }
            return Ok(!ring.is_zero(&g) && ring.degree_in(&g, &var)? == 0);
        }
    }
    Err(Error::Undecidable(format!("unimodularity over {ring} needs a certificate")))
}

fn poly_gcd(ring: &Ring, var: &str, a: &Elem, b: &Elem) -> Elem {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !ring.is_zero(&b) {
        let r = poly_rem(ring, var, &a, &b);
        a = std::mem::replace(&mut b, r);
    }
    a
}

fn poly_rem(ring: &Ring, var: &str, a: &Elem, b: &Elem) -> Elem {
    let k = ring.coeff_ring().expect("polynomial ring");
    let x = ring.var(var).expect("variable");
    let db = ring.degree_in(b, var).expect("polynomial");
    let lb = lead(ring, b, db);
    let lb_inv = k.is_unit(&lb).ok().flatten().expect("field coefficient");
    let mut r = a.clone();
    while !ring.is_zero(&r) {
        let dr = ring.degree_in(&r, var).expect("polynomial");
        if dr < db {
            break;
        }
        let c = k.mul(&lead(ring, &r, dr), &lb_inv);
        let t = ring.mul(&ring.from_parent(&c), &ring.pow(&x, dr - db));
        r = ring.sub(&r, &ring.mul(&t, b));
    }
    r
}

fn lead(ring: &Ring, p: &Elem, d: u32) -> Elem {
    let k = ring.coeff_ring().expect("polynomial ring");
    let Elem::Poly(p) = p else { unreachable!() };
    p.coeff(k, &crate::rings::Monomial(vec![d]))
}

/// Defining data of a transvection of `A^n`.
#[derive(Clone, Debug, PartialEq)]
pub enum TransvectionData {
    /// `p -> p + q phi(p)` with `phi(q) = 0`.
    Linear { phi: Vec<Elem>, q: Vec<Elem> },
    /// `p -> p + <u,p> v + <v,p> u + <u,p> u` with `<u,v> = 0`.
    Symplectic { u: Vec<Elem>, v: Vec<Elem> },
    /// `p -> p - <u,p> v + <v,p> u` with `u, v` isotropic and orthogonal.
    Orthogonal { u: Vec<Elem>, v: Vec<Elem> },
}

impl TransvectionData {
    pub fn kind(&self) -> FormKind {
        match self {
            TransvectionData::Linear { .. } => FormKind::Linear,
            TransvectionData::Symplectic { .. } => FormKind::Symplectic,
            TransvectionData::Orthogonal { .. } => FormKind::Orthogonal,
        }
    }

    fn dim(&self) -> usize {
        match self {
            TransvectionData::Linear { q, .. } => q.len(),
            TransvectionData::Symplectic { u, .. } | TransvectionData::Orthogonal { u, .. } => u.len(),
        }
    }
}

/// A validated transvection.
#[derive(Clone, Debug)]
pub struct Transvection {
    pub ring: Ring,
    pub data: TransvectionData,
    pub cert: UnimodularCert,
}

/// Validate orthogonality, isotropy and the certificate.
///
/// The certificate covers either `q` (resp. `v`) as a vector, or the
/// functional `phi` (resp. `<u, .>`) through a vector on which it is `1`.
pub fn make_transvection(ring: &Ring, data: TransvectionData, cert: UnimodularCert) -> Result<Transvection> {
    let zero = |x: &Elem| ring.is_zero(x);
    match &data {
        TransvectionData::Linear { phi, q } => {
            if phi.len() != q.len() {
                return Err(Error::DimensionMismatch(format!("phi has {} entries, q has {}", phi.len(), q.len())));
            }
            if !zero(&dot(ring, phi, q)) {
                return Err(Error::OrthogonalityViolated("phi(q) != 0".into()));
            }
            let ok = match &cert {
                UnimodularCert::Functional(m) => m.len() == phi.len() && ring.is_one(&dot(ring, phi, m)),
                c => check_unimodular(ring, q, c),
            };
            if !ok {
                return Err(Error::BadCertificate("neither q nor phi is certified unimodular".into()));
            }
        }
        TransvectionData::Symplectic { u, v } | TransvectionData::Orthogonal { u, v } => {
            let kind = data.kind();
            if u.len() != v.len() || u.len() % 2 == 1 {
                return Err(Error::DimensionMismatch(format!("u has {} entries, v has {}", u.len(), v.len())));
            }
            if !zero(&form_value(ring, kind, u, v)?) {
                return Err(Error::OrthogonalityViolated("<u,v> != 0".into()));
            }
            // automatic for the alternating form with trivial involution
            if kind == FormKind::Orthogonal || !ring.has_trivial_involution() {
                if !zero(&form_value(ring, kind, u, u)?) {
                    return Err(Error::NotIsotropic("<u,u> != 0".into()));
                }
                if !zero(&form_value(ring, kind, v, v)?) {
                    return Err(Error::NotIsotropic("<v,v> != 0".into()));
                }
            }
            let ok = match &cert {
                UnimodularCert::Functional(m) => m.len() == u.len() && ring.is_one(&form_value(ring, kind, u, m)?),
                c => check_unimodular(ring, v, c),
            };
            if !ok {
                return Err(Error::BadCertificate("neither v nor <u,.> is certified unimodular".into()));
            }
        }
    }
    Ok(Transvection { ring: ring.clone(), data, cert })
}

impl Transvection {
    pub fn kind(&self) -> FormKind {
        self.data.kind()
    }

    pub fn dim(&self) -> usize {
        self.data.dim()
    }

    fn image(&self, p: &[Elem], inverse: bool) -> Result<Vec<Elem>> {
        let ring = &self.ring;
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!("vector of length {} for rank {}", p.len(), self.dim())));
        }
        let axpy = |acc: &mut Vec<Elem>, x: &[Elem], c: &Elem| {
            for (a, xi) in acc.iter_mut().zip(x) {
                *a = ring.add(a, &ring.mul(xi, c));
            }
        };
        let sgn = |c: Elem| if inverse { ring.neg(&c) } else { c };
        let mut out = p.to_vec();
        match &self.data {
            TransvectionData::Linear { phi, q } => axpy(&mut out, q, &sgn(dot(ring, phi, p))),
            TransvectionData::Symplectic { u, v } => {
                let up = form_value(ring, FormKind::Symplectic, u, p)?;
                let vp = form_value(ring, FormKind::Symplectic, v, p)?;
                axpy(&mut out, v, &sgn(up.clone()));
                axpy(&mut out, u, &sgn(vp));
                axpy(&mut out, u, &sgn(up));
            }
            TransvectionData::Orthogonal { u, v } => {
                let up = form_value(ring, FormKind::Orthogonal, u, p)?;
                let vp = form_value(ring, FormKind::Orthogonal, v, p)?;
                axpy(&mut out, v, &sgn(ring.neg(&up)));
                axpy(&mut out, u, &sgn(vp));
            }
        }
        Ok(out)
    }

    pub fn apply(&self, p: &[Elem]) -> Result<Vec<Elem>> {
        self.image(p, false)
    }

    /// The inverse map given by the sign-flipped formula.
    pub fn invert(&self) -> InverseTransvection<'_> {
        InverseTransvection(self)
    }

    /// Matrix whose columns are the images of the standard basis.
    pub fn matrix(&self) -> Mat {
        self.matrix_of(false)
    }

    fn matrix_of(&self, inverse: bool) -> Mat {
        let ring = &self.ring;
        let n = self.dim();
        let mut m = Mat::zero(ring, n);
        for c in 0..n {
            let mut e = vec![ring.zero(); n];
            e[c] = ring.one();
            let col = self.image(&e, inverse).expect("dimension checked");
            for (r, x) in col.into_iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m
    }

    pub fn to_json(&self) -> Value {
        let r = &self.ring;
        let enc = |v: &[Elem]| Value::Array(v.iter().map(|x| r.to_json(x)).collect());
        let cert = match &self.cert {
            UnimodularCert::Vector(c) => enc(c),
            UnimodularCert::Functional(m) => json!({ "functional": enc(m) }),
            UnimodularCert::OrderIdeal { functionals, weights } => json!({
                "functionals": functionals.iter().map(|f| enc(f)).collect::<Vec<_>>(),
                "weights": enc(weights),
            }),
        };
        match &self.data {
            TransvectionData::Linear { phi, q } => json!({"kind": "linear", "phi": enc(phi), "q": enc(q), "cert": cert}),
            TransvectionData::Symplectic { u, v } | TransvectionData::Orthogonal { u, v } => {
                json!({"kind": self.kind(), "u": enc(u), "v": enc(v), "cert": cert})
            }
        }
    }

    pub fn from_json(ring: &Ring, v: &Value) -> Result<Transvection> {
        let vec_of = |key: &str, src: &Value| -> Result<Vec<Elem>> {
            src.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing array `{key}`")))?
                .iter()
                .map(|x| ring.from_json(x))
                .collect()
        };
        let list = |x: &Value| -> Result<Vec<Elem>> {
            x.as_array().ok_or_else(|| Error::Parse("expected an array".into()))?.iter().map(|e| ring.from_json(e)).collect()
        };
        let data = if v.get("phi").is_some() {
            TransvectionData::Linear { phi: vec_of("phi", v)?, q: vec_of("q", v)? }
        } else {
            let kind: FormKind = serde_json::from_value(v.get("kind").cloned().unwrap_or(Value::Null))
                .map_err(|e| Error::Parse(format!("kind: {e}")))?;
            let (u, w) = (vec_of("u", v)?, vec_of("v", v)?);
            match kind {
                FormKind::Symplectic => TransvectionData::Symplectic { u, v: w },
                FormKind::Orthogonal => TransvectionData::Orthogonal { u, v: w },
                FormKind::Linear => return Err(Error::Parse("linear transvections use phi and q".into())),
            }
        };
        let c = v.get("cert").ok_or_else(|| Error::Parse("missing `cert`".into()))?;
        let cert = if c.is_array() {
            UnimodularCert::Vector(list(c)?)
        } else if let Some(m) = c.get("functional") {
            UnimodularCert::Functional(list(m)?)
        } else {
            let fs = c
                .get("functionals")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("bad certificate".into()))?
                .iter()
                .map(list)
                .collect::<Result<Vec<_>>>()?;
            UnimodularCert::OrderIdeal { functionals: fs, weights: vec_of("weights", c)? }
        };
        make_transvection(ring, data, cert)
    }
}

pub struct InverseTransvection<'a>(&'a Transvection);

impl InverseTransvection<'_> {
    pub fn apply(&self, p: &[Elem]) -> Result<Vec<Elem>> {
        self.0.image(p, true)
    }

    pub fn matrix(&self) -> Mat {
        self.0.matrix_of(true)
    }
}

/// The projective module `P`: free, or the image of an idempotent matrix
/// (linear kind only).
#[derive(Clone, Debug)]
pub enum ModuleP {
    Free(usize),
    Idempotent(Mat),
}

/// `Q = P + A` (linear) or `P + A^2` with the standard form (nonlinear).
#[derive(Clone, Debug)]
pub struct QModule {
    pub ring: Ring,
    pub kind: FormKind,
    pub p: ModuleP,
}

impl QModule {
    pub fn new(ring: &Ring, kind: FormKind, p: ModuleP) -> Result<QModule> {
        let n = match &p {
            ModuleP::Free(n) => *n,
            ModuleP::Idempotent(e) => {
                if !kind.is_linear() {
                    return Err(Error::InvalidSpec("projective P is supported for the linear kind only".into()));
                }
                if !e.mul(ring, e).eq(ring, e) {
                    return Err(Error::InvalidSpec("e is not idempotent".into()));
                }
                e.n
            }
        };
        let min = if kind.is_linear() { 2 } else { 4 };
        if n < min {
            return Err(Error::DimensionMismatch(format!("P needs ambient rank >= {min}, got {n}")));
        }
        if !kind.is_linear() && n % 2 == 1 {
            return Err(Error::OddSize(n));
        }
        Ok(QModule { ring: ring.clone(), kind, p })
    }

    /// Ambient rank of `P`.
    pub fn rank_p(&self) -> usize {
        match &self.p {
            ModuleP::Free(n) => *n,
            ModuleP::Idempotent(e) => e.n,
        }
    }

    /// Rank of `Q`.
    pub fn rank_q(&self) -> usize {
        self.rank_p() + if self.kind.is_linear() { 1 } else { 2 }
    }

    fn in_p(&self, x: &[Elem]) -> bool {
        match &self.p {
            ModuleP::Free(_) => true,
            ModuleP::Idempotent(e) => {
                let ex = e.mul_vec(&self.ring, x);
                ex.iter().zip(x).all(|(a, b)| self.ring.eq(a, b))
            }
        }
    }
}

/// Which elementary transvection of `Q` to build.
#[derive(Clone, Debug, PartialEq)]
pub enum ElemTransvection {
    /// `(p, a) -> (p + a x, a)`, `x` in `P`.
    LinearColumn(Vec<Elem>),
    /// `(p, a) -> (p, a + f(p))`, `f` in `P*`.
    LinearRow(Vec<Elem>),
    /// `(p, b, a) -> (p + a q, b - <p,q> + a, a)`.
    SymplecticA(Vec<Elem>),
    /// `(p, b, a) -> (p + b q, b, a + <p,q> - b)`.
    SymplecticB(Vec<Elem>),
    /// `(p, b, a) -> (p - a q, b + <p,q>, a)`, `q` isotropic.
    OrthogonalA(Vec<Elem>),
    /// `(p, b, a) -> (p - b q, b, a + <p,q>)`, `q` isotropic.
    OrthogonalB(Vec<Elem>),
}

/// Matrix of an elementary transvection on `Q`.
pub fn elem_transvection(module: &QModule, t: &ElemTransvection) -> Result<Mat> {
    use ElemTransvection::*;
    let ring = &module.ring;
    let n = module.rank_p();
    let nq = module.rank_q();
    let kind_ok = match t {
        LinearColumn(_) | LinearRow(_) => module.kind == FormKind::Linear,
        SymplecticA(_) | SymplecticB(_) => module.kind == FormKind::Symplectic,
        OrthogonalA(_) | OrthogonalB(_) => module.kind == FormKind::Orthogonal,
    };
    if !kind_ok {
        return Err(Error::InvalidSpec(format!("{t:?} does not act on a {} module", module.kind.name())));
    }
    let (LinearColumn(x) | LinearRow(x) | SymplecticA(x) | SymplecticB(x) | OrthogonalA(x) | OrthogonalB(x)) = t;
    if x.len() != n {
        return Err(Error::DimensionMismatch(format!("parameter has {} entries, P has rank {n}", x.len())));
    }
    let mut m = Mat::identity(ring, nq);
    if module.kind.is_linear() {
        match t {
            LinearColumn(x) => {
                if !module.in_p(x) {
                    return Err(Error::NotInModule("e x != x".into()));
                }
                for (i, xi) in x.iter().enumerate() {
                    m.set(i, n, xi.clone());
                }
            }
            _ => {
                for (j, fj) in x.iter().enumerate() {
                    m.set(n, j, fj.clone());
                }
            }
        }
        return Ok(m);
    }
    if !ring.has_trivial_involution() {
        return Err(Error::UnsupportedInvolution("elementary transvections of P + A^2".into()));
    }
    let q = x;
    if matches!(t, OrthogonalA(_) | OrthogonalB(_)) && !ring.is_zero(&form_value(ring, module.kind, q, q)?) {
        return Err(Error::NotIsotropic("<q,q> != 0".into()));
    }
    // p -> <p, q> is the row r with r_k = (psi q)_k
    let r: Vec<Elem> = (0..n)
        .map(|k| {
            let mut e = vec![ring.zero(); n];
            e[k] = ring.one();
            form_value(ring, module.kind, &e, q).expect("even rank")
        })
        .collect();
    let (bi, ai) = (n, n + 1);
    let neg = |v: &Elem| ring.neg(v);
    match t {
        SymplecticA(_) => {
            for k in 0..n {
                m.set(k, ai, q[k].clone());
                m.set(bi, k, neg(&r[k]));
            }
            m.set(bi, ai, ring.one());
        }
        SymplecticB(_) => {
            for k in 0..n {
                m.set(k, bi, q[k].clone());
                m.set(ai, k, r[k].clone());
            }
            m.set(ai, bi, ring.from_int(-1));
        }
        OrthogonalA(_) => {
            for k in 0..n {
                m.set(k, ai, neg(&q[k]));
                m.set(bi, k, r[k].clone());
            }
        }
        OrthogonalB(_) => {
            for k in 0..n {
                m.set(k, bi, neg(&q[k]));
                m.set(ai, k, r[k].clone());
            }
        }
        LinearColumn(_) | LinearRow(_) => unreachable!(),
    }
    Ok(m)
}

#[cfg(test)]
mod tests;
