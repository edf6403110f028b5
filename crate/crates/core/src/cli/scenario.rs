//! JSON scenarios: one task over one ring, with the postconditions of the
//! underlying operation reported as named checks.
//!
//! ```json
//! { "ring": {"kind": "localize", "parent": {"kind": "Z"},
//!            "multset": {"shape": "powers", "s": "2"}},
//!   "task": "dilate",
//!   "params": {"kind": "linear", "n": 3,
//!              "word": [{"i": 1, "j": 2, "param": "X/2"}]} }
//! ```

use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use super::{Check, Report};
use crate::commcalc::{commutator_relation, conjugation_expand, split_square, touches_one};
use crate::error::{Error, Result};
use crate::lgp::{diagonal_reduce, dilate, ideal_contains, lift_mod_nil, nilpotent_power, patch, ComaximalCover};
use crate::matform::{check_membership, commutator, elem_gen, sigma, standard_form, FormKind, Mat, Word};
use crate::rings::{make_ring, stable_range_holds, Elem, MultSet, Ring, RingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    VerifyForm,
    ElemGen,
    EvalWord,
    Commutator,
    SplitSquare,
    ConjExpand,
    Dilate,
    Patch,
    ReduceDiagonal,
    NilpotentPower,
    LiftModNil,
    StableRange,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub ring: RingSpec,
    pub task: Task,
    #[serde(default)]
    pub params: Value,
    /// Accepted for reproducibility records; every task is deterministic.
    #[serde(default)]
    pub seed: Option<u64>,
}

pub fn run_scenario_file(path: &Path) -> Report {
    match std::fs::read_to_string(path) {
        Ok(text) => run_scenario_str(&text),
        Err(e) => Report::invalid(format!("cannot read {}: {e}", path.display())),
    }
}

pub fn run_scenario_str(text: &str) -> Report {
    match serde_json::from_str::<Scenario>(text) {
        Ok(sc) => run_scenario(&sc),
        Err(e) => Report::invalid(format!("malformed scenario: {e}")),
    }
}

pub fn run_scenario(sc: &Scenario) -> Report {
    let ring = match make_ring(&sc.ring) {
        Ok(r) => r,
        Err(e) => return Report::invalid(e.to_string()),
    };
    let p = Params(&sc.params);
    let out = match sc.task {
        Task::VerifyForm => verify_form(&ring, &p),
        Task::ElemGen => elem_gen_task(&ring, &p),
        Task::EvalWord => eval_word(&ring, &p),
        Task::Commutator => commutator_task(&ring, &p),
        Task::SplitSquare => split_square_task(&ring, &p),
        Task::ConjExpand => conj_expand(&ring, &p),
        Task::Dilate => dilate_task(&ring, &p),
        Task::Patch => patch_task(&ring, &p),
        Task::ReduceDiagonal => reduce_diagonal(&ring, &p),
        Task::NilpotentPower => nilpotent_power_task(&ring, &p),
        Task::LiftModNil => lift_mod_nil_task(&ring, &p),
        Task::StableRange => stable_range_task(&ring, &p),
    };
    match out {
        Ok(r) => r,
        Err(e) if is_input_error(&e) => Report::invalid(e.to_string()),
        Err(e) => Report::from_checks(json!({ "error": e.to_string() }), vec![Check::new(check_for(&e), false, e.to_string())]),
    }
}

/// Errors that mean the scenario itself is malformed rather than that an
/// operation rejected well-formed data.
fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidScenario(_)
            | Error::Parse(_)
            | Error::InvalidSpec(_)
            | Error::VariableUnknown(_)
            | Error::BadIndices(_)
            | Error::OddSize(_)
            | Error::DimensionMismatch(_)
            | Error::LinearHasNoForm
            | Error::IndexClash(_)
            | Error::IndexOne(_)
    )
}

fn check_for(e: &Error) -> &'static str {
    match e {
        Error::BadLocalData(_) => "local-data",
        Error::BadCertificate(_) => "certificate",
        Error::NotBasedAtIdentity => "based-at-identity",
        Error::NilpotentS => "s-not-nilpotent",
        Error::NotLocalRing(_) => "local-ring",
        Error::TwoNotInvertible => "two-invertible",
        _ => "operation",
    }
}

struct Params<'a>(&'a Value);

fn bad(msg: String) -> Error {
    Error::InvalidScenario(msg)
}

impl Params<'_> {
    fn get(&self, key: &str) -> Result<&Value> {
        self.0.get(key).ok_or_else(|| bad(format!("missing parameter `{key}`")))
    }

    fn kind(&self) -> Result<FormKind> {
        serde_json::from_value(self.get("kind")?.clone()).map_err(|e| bad(format!("kind: {e}")))
    }

    fn usize(&self, key: &str) -> Result<usize> {
        self.get(key)?
            .as_u64()
            .map(|x| x as usize)
            .ok_or_else(|| bad(format!("`{key}` must be a non-negative integer")))
    }

    fn str_or<'b>(&'b self, key: &str, default: &'b str) -> Result<&'b str> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v.as_str().ok_or_else(|| bad(format!("`{key}` must be a string"))),
        }
    }

    fn elem(&self, ring: &Ring, key: &str) -> Result<Elem> {
        ring.from_json(self.get(key)?)
    }

    fn elems(&self, ring: &Ring, key: &str) -> Result<Vec<Elem>> {
        self.get(key)?
            .as_array()
            .ok_or_else(|| bad(format!("`{key}` must be an array")))?
            .iter()
            .map(|v| ring.from_json(v))
            .collect()
    }

    fn mat(&self, ring: &Ring, key: &str) -> Result<Mat> {
        Mat::from_json(ring, self.get(key)?)
    }

    fn word(&self, ring: &Ring, key: &str, kind: FormKind, n: usize) -> Result<Word> {
        Word::from_json(ring, self.get(key)?, kind, n)
    }
}

/// `ring`, or `ring[x]` when `x` is not already its own variable.
fn with_var(ring: &Ring, x: &str) -> Result<Ring> {
    if ring.vars().iter().any(|v| v == x) {
        Ok(ring.clone())
    } else {
        Ring::poly(ring, &[x])
    }
}

fn verify_form(ring: &Ring, p: &Params) -> Result<Report> {
    let (kind, n) = (p.kind()?, p.usize("n")?);
    let psi = standard_form(kind, n, ring)?;
    let minus = ring.from_int(-1);
    let id = Mat::identity(ring, n);
    let (sym, sq) = match kind {
        FormKind::Symplectic => (psi.transpose().eq(ring, &psi.scale(ring, &minus)), id.scale(ring, &minus)),
        _ => (psi.transpose().eq(ring, &psi), id),
    };
    Ok(Report::from_checks(
        psi.to_json(ring),
        vec![
            Check::new("symmetry", sym, if kind == FormKind::Symplectic { "psi^T = -psi" } else { "psi^T = psi" }),
            Check::new("square", psi.mul(ring, &psi).eq(ring, &sq), "psi^2 = -I (symplectic) or I (orthogonal)"),
        ],
    ))
}

fn elem_gen_task(ring: &Ring, p: &Params) -> Result<Report> {
    let (kind, n, i, j) = (p.kind()?, p.usize("n")?, p.usize("i")?, p.usize("j")?);
    let a = p.elem(ring, "a")?;
    let g = elem_gen(ring, kind, n, i, j, &a)?;
    let gi = elem_gen(ring, kind, n, i, j, &ring.neg(&a))?;
    Ok(Report::from_checks(
        g.to_json(ring),
        vec![
            Check::new("membership", check_membership(ring, &g, kind, true), "in the group, det = 1"),
            Check::new("det-one", ring.is_one(&g.det(ring)), "det = 1"),
            Check::new("inverse", g.mul(ring, &gi).is_identity(ring), "ge(a) ge(-a) = I"),
        ],
    ))
}

fn eval_word(ring: &Ring, p: &Params) -> Result<Report> {
    let (kind, n) = (p.kind()?, p.usize("n")?);
    let w = p.word(ring, "word", kind, n)?;
    let m = w.eval();
    Ok(Report::from_checks(
        m.to_json(ring),
        vec![
            Check::new("membership", check_membership(ring, &m, kind, true), "elementary words land in the group"),
            Check::new("inverse-word", m.mul(ring, &w.inverse().eval()).is_identity(ring), "eval(w) eval(w^-1) = I"),
        ],
    ))
}

fn commutator_task(ring: &Ring, p: &Params) -> Result<Report> {
    let kind = p.kind()?;
    let (n, i, k, j) = (p.usize("n")?, p.usize("i")?, p.usize("k")?, p.usize("j")?);
    let (x, y) = (p.elem(ring, "x")?, p.elem(ring, "y")?);
    let (z, w) = commutator_relation(ring, kind, n, i, k, j, &x, &y)?;
    let lit = commutator(ring, &elem_gen(ring, kind, n, i, k, &x)?, &elem_gen(ring, kind, n, k, j, &y)?)?;
    Ok(Report::from_checks(
        json!({ "z": z, "word": w.to_json() }),
        vec![Check::new("literal", w.eval().eq(ring, &lit), "word equals [ge_ik(x), ge_kj(y)]")],
    ))
}

fn split_square_task(ring: &Ring, p: &Params) -> Result<Report> {
    let (kind, n, i, j) = (p.kind()?, p.usize("n")?, p.usize("i")?, p.usize("j")?);
    let t = p.str_or("t", "T")?;
    let mu = p.elem(ring, "mu")?;
    let w = split_square(ring, kind, n, i, j, &mu, t)?;
    let tv = ring.var(t)?;
    let want = elem_gen(ring, kind, n, i, j, &ring.mul(&ring.mul(&tv, &tv), &mu))?;
    let mut div = true;
    for g in &w.gens {
        div &= ring.min_degree_in(&g.param, t)? >= 1;
    }
    Ok(Report::from_checks(
        w.to_json(),
        vec![
            Check::new("exact", w.eval().eq(ring, &want), "eval equals ge_ij(T^2 mu)"),
            Check::new("row-or-column-one", w.gens.iter().all(|g| touches_one(kind, g.i, g.j)), "every letter touches row or column 1"),
            Check::new("divisible-by-t", div, "every parameter divisible by T"),
        ],
    ))
}

fn divisibility(w: &Word, x: &str, m: u32) -> Result<(bool, bool)> {
    let r = &w.ring;
    let mut div = true;
    for g in &w.gens {
        div &= r.is_zero(&g.param) || r.min_degree_in(&g.param, x)? >= m;
    }
    let at0 = w.map_params(r, |q| r.substitute(q, x, &r.zero()))?.eval().is_identity(r);
    Ok((div, at0))
}

fn conj_expand(ring: &Ring, p: &Params) -> Result<Report> {
    let (kind, n) = (p.kind()?, p.usize("n")?);
    let x = p.str_or("x", "X")?;
    let ring = with_var(ring, x)?;
    let eps = p.word(&ring, "eps", kind, n)?;
    let (pp, q) = (p.usize("p")?, p.usize("q")?);
    let m = p.usize("m")? as u32;
    let y = p.elem(&ring, "y")?;
    let out = conjugation_expand(&eps, pp, q, m, x, &y)?;
    let param = ring.mul(&ring.pow(&ring.var(x)?, (1u32 << eps.len().min(31)) * m), &y);
    let want = eps.eval().mul(&ring, &elem_gen(&ring, kind, n, pp, q, &param)?).mul(&ring, &eps.inverse().eval());
    let (div, at0) = divisibility(&out.word, x, m)?;
    Ok(Report::from_checks(
        out.to_json(),
        vec![
            Check::new("exact", out.word.eval().eq(&ring, &want), "eval equals eps ge_pq(X^(2^r m) y) eps^-1"),
            Check::new("divisible", div, "every parameter divisible by X^m"),
            Check::new("identity-at-zero", at0, "X = 0 gives I"),
        ],
    ))
}

fn dilate_task(ring: &Ring, p: &Params) -> Result<Report> {
    let (kind, n) = (p.kind()?, p.usize("n")?);
    let x = p.str_or("x", "X")?;
    let wr = with_var(ring, x)?;
    let (Some(loc), [_]) = (wr.coeff_ring(), wr.vars()) else {
        return Err(bad("dilate needs a ring A_s or A_s[X]".into()));
    };
    let (Some(base), Some(MultSet::Powers(s0))) = (loc.parent(), loc.mult_set()) else {
        return Err(bad("dilate needs a localization at the powers of s".into()));
    };
    let s = match p.0.get("s") {
        Some(v) => base.from_json(v)?,
        None => s0.clone(),
    };
    let shift = match p.0.get("shift") {
        None => None,
        Some(v) => Some(v.as_str().ok_or_else(|| bad("`shift` must be a variable name".into()))?),
    };
    let w = p.word(&wr, "word", kind, n)?;
    let out = dilate(&w, &s, shift)?;
    let g = &out.word.ring;
    let free = g.coeff_ring() == Some(base);
    let b_ok = base.try_div(&out.b, &base.pow(&s, out.l)).is_some();
    // compare over A_s[X] (or A_s[X, Y])
    let target = Ring::poly_owned(loc, g.vars().to_vec())?;
    let bx = target.mul(&target.embed(base, &out.b)?, &target.var(x)?);
    let lifted = w.map_params(&target, |q| target.embed(&wr, q))?;
    let want = match shift {
        None => lifted.map_params(&target, |q| target.substitute(q, x, &bx))?.eval(),
        Some(y) => {
            let yv = target.var(y)?;
            let moved = lifted.map_params(&target, |q| target.substitute(q, x, &target.add(&yv, &bx)))?.eval();
            let base_pt = lifted.map_params(&target, |q| target.substitute(q, x, &yv))?.inverse().eval();
            moved.mul(&target, &base_pt)
        }
    };
    let got = out.word.map_params(&target, |q| target.embed(g, q))?.eval();
    Ok(Report::from_checks(
        out.to_json(),
        vec![
            Check::new("denominator-free", free, format!("global word over {g}")),
            Check::new("localizes", got.eq(&target, &want), "localized global word equals the rescaled input"),
            Check::new("b-in-ideal", b_ok, "b is a multiple of s^l"),
        ],
    ))
}

fn patch_task(ring: &Ring, p: &Params) -> Result<Report> {
    let kind = p.kind()?;
    let x = p.str_or("x", "X")?;
    let rx = with_var(ring, x)?;
    let Some(a) = rx.coeff_ring() else { return Err(bad("patch needs a ring A or A[X]".into())) };
    let sigma_m = match p.0.get("sigma") {
        Some(v) => Mat::from_json(&rx, v)?,
        None => p.word(&rx, "sigma_word", kind, p.usize("n")?)?.eval(),
    };
    let n = sigma_m.n;
    let mut checks = Vec::new();
    let cover = match p.0.get("cover") {
        None => return Err(bad("missing parameter `cover`".into())),
        Some(v) => match ComaximalCover::from_json(a, v) {
            Ok(c) => c,
            Err(Error::BadCertificate(m)) => {
                checks.push(Check::new("certificate", false, m));
                return Ok(Report::from_checks(Value::Null, checks));
            }
            Err(e) => return Err(e),
        },
    };
    checks.push(Check::new("certificate", true, "sum c_i s_i = 1"));
    let at0 = sigma_m.try_map(|e| rx.substitute(e, x, &rx.zero()))?.is_identity(&rx);
    checks.push(Check::new("based-at-identity", at0, "sigma(0) = I"));
    let raw = p.get("local_words")?.as_array().ok_or_else(|| bad("`local_words` must be an array".into()))?;
    if raw.len() != cover.s.len() {
        return Err(bad(format!("{} local words for {} cover elements", raw.len(), cover.s.len())));
    }
    let mut local = Vec::new();
    let mut mismatched = Vec::new();
    for (k, (v, s)) in raw.iter().zip(&cover.s).enumerate() {
        let lr = Ring::poly(&Ring::localize_powers(a, s.clone())?, &[x])?;
        let w = Word::from_json(&lr, v, kind, n)?;
        if !w.eval().eq(&lr, &sigma_m.try_map(|e| lr.embed(&rx, e))?) {
            mismatched.push(k);
        }
        local.push(w);
    }
    let local_ok = mismatched.is_empty();
    checks.push(Check::new(
        "local-data",
        local_ok,
        if local_ok { "every local word evaluates to sigma".to_string() } else { format!("local words {mismatched:?} differ from sigma") },
    ));
    if !(local_ok && at0) {
        checks.push(Check::new("exact", false, "not attempted: preconditions failed"));
        return Ok(Report::from_checks(Value::Null, checks));
    }
    let out = patch(&rx, kind, &sigma_m, &cover, &local)?;
    checks.push(Check::new("exact", out.eval().eq(&rx, &sigma_m), "eval(patch) = sigma"));
    checks.push(Check::new("denominator-free", out.ring == rx, format!("word over {rx}")));
    Ok(Report::from_checks(out.to_json(), checks))
}

fn reduce_diagonal(ring: &Ring, p: &Params) -> Result<Report> {
    let kind = p.kind()?;
    let beta = p.mat(ring, "beta")?;
    let ideal = p.elems(ring, "ideal")?;
    let out = diagonal_reduce(ring, &beta, &ideal, kind)?;
    let n = beta.n;
    let diag = out.d.is_diagonal(ring) && beta.mul(ring, &out.eps.eval()).eq(ring, &out.d);
    let mut congruent = true;
    for g in &out.eps.gens {
        congruent &= ideal_contains(ring, &ideal, &g.param)?;
    }
    let dd = |i: usize| out.d.get(i - 1, i - 1).clone();
    let units = (1..=n).all(|i| matches!(ring.is_unit(&dd(i)), Ok(Some(_))));
    let pairing = kind.is_linear() || (1..=n).all(|i| ring.is_one(&ring.mul(&dd(sigma(i)), &ring.conj(&dd(i)))));
    Ok(Report::from_checks(
        out.to_json(),
        vec![
            Check::new("diagonal", diag, "beta eval(eps) = d is diagonal"),
            Check::new("congruent", congruent, "every letter of eps is congruent to I modulo the ideal"),
            Check::new("units", units, "diagonal entries are units"),
            Check::new("pairing", pairing, "d_(sigma i) conj(d_i) = 1"),
        ],
    ))
}

fn nilpotent_power_task(ring: &Ring, p: &Params) -> Result<Report> {
    let alpha = p.mat(ring, "alpha")?;
    let e = nilpotent_power(ring, &alpha)?;
    let zero = Mat::zero(ring, alpha.n);
    let mut l = Some(1u32);
    for x in &alpha.entries {
        l = match (l, ring.is_nilpotent(x)?) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
    }
    let bound = match l {
        Some(l) => {
            let r2 = (alpha.n * alpha.n) as u64;
            let mut pow2 = 1u64;
            while pow2 <= u64::from(l) * r2 {
                pow2 *= 2;
            }
            Check::new("bound", u64::from(e) <= pow2, format!("e <= 2^m = {pow2}"))
        }
        None => Check::new("bound", e as usize <= alpha.n.max(1), "some entry is not nilpotent: e <= size"),
    };
    Ok(Report::from_checks(
        json!({ "e": e }),
        vec![
            Check::new("vanishes", alpha.pow(ring, e).eq(ring, &zero), "alpha^e = 0"),
            Check::new("minimal", e <= 1 || !alpha.pow(ring, e - 1).eq(ring, &zero), "alpha^(e-1) != 0"),
            bound,
        ],
    ))
}

fn lift_mod_nil_task(ring: &Ring, p: &Params) -> Result<Report> {
    let kind = p.kind()?;
    let alpha = p.mat(ring, "alpha")?;
    let ideal = p.elems(ring, "ideal")?;
    let spec: RingSpec = serde_json::from_value(p.get("quotient_ring")?.clone()).map_err(|e| bad(format!("quotient_ring: {e}")))?;
    let rbar = make_ring(&spec)?;
    let word_bar = p.word(&rbar, "word_bar", kind, alpha.n)?;
    let out = lift_mod_nil(ring, kind, &alpha, &ideal, &word_bar)?;
    Ok(Report::from_checks(
        out.to_json(),
        vec![Check::new("eval", out.eval().eq(ring, &alpha), "eval(lift) = alpha")],
    ))
}

fn stable_range_task(ring: &Ring, p: &Params) -> Result<Report> {
    let m = p.usize("m")?;
    let holds = stable_range_holds(ring, m)?;
    let mut checks = vec![Check::new("decided", true, format!("condition with m = {m} decided by enumeration"))];
    if let Some(v) = p.0.get("expect") {
        let want = v.as_bool().ok_or_else(|| bad("`expect` must be a boolean".into()))?;
        checks.push(Check::new("expected", holds == want, format!("holds = {holds}")));
    }
    Ok(Report::from_checks(json!({ "holds": holds }), checks))
}
