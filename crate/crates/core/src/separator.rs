//! Typed Böhm-out: contexts sending two unequal product-free terms to arbitrary targets.

use crate::models::{define_functional, distinguish_with, kappa, Functional, ModelError, DEFAULT_LEAF_BUDGET};
use crate::normalize::{NormalizeError, Normalizer};
use crate::numerals::{church, lowering_pair};
use crate::syntax::{is_type_instance, numeral_type, substitute_types, Atom, Name, Term, Ty, TypeError, TypeSubst};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeparationError {
    #[error("the terms are provably equal")]
    EqualTerms,
    #[error("no distinguishing model with base at most {max_base}")]
    NotSeparable { max_base: u32 },
    #[error("ill-typed: {0}")]
    IllTyped(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("level {required} exceeds the maximum level {max}")]
    LevelTooLarge { required: usize, max: usize },
    #[error("invalid level {given}: {reason}")]
    InvalidLevel { given: usize, reason: String },
    #[error("resource budget exhausted: {0}")]
    ResourceExhausted(String),
    #[error(transparent)]
    Model(ModelError),
}

impl From<NormalizeError> for SeparationError {
    fn from(e: NormalizeError) -> SeparationError {
        match e {
            NormalizeError::ResourceExhausted { .. } => SeparationError::ResourceExhausted(e.to_string()),
            NormalizeError::TypeMismatch { .. } => SeparationError::IllTyped(e.to_string()),
        }
    }
}

impl From<ModelError> for SeparationError {
    fn from(e: ModelError) -> SeparationError {
        match e {
            ModelError::Overflow(s) => SeparationError::ResourceExhausted(s),
            ModelError::Normalize(n) => n.into(),
            e => SeparationError::Model(e),
        }
    }
}

impl From<TypeError> for SeparationError {
    fn from(e: TypeError) -> SeparationError {
        SeparationError::IllTyped(e.to_string())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SeparateOptions {
    pub max_base: u32,
    pub max_level: usize,
    /// Use this even level instead of the smallest admissible one.
    pub level: Option<usize>,
    pub leaf_budget: u64,
    pub normalizer: Normalizer,
}

impl Default for SeparateOptions {
    fn default() -> SeparateOptions {
        SeparateOptions {
            max_base: 3,
            max_level: 24,
            level: None,
            leaf_budget: DEFAULT_LEAF_BUDGET,
            normalizer: Normalizer::default(),
        }
    }
}

/// The finite model and arguments on which the closed, collapsed terms differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelWitness {
    pub base: u32,
    pub raw_args: Vec<Functional>,
    pub observed: (u64, u64),
    pub relabeling: Vec<u64>,
    pub args: Vec<Functional>,
    pub kappas: Vec<u64>,
}

/// Replayable evidence that `(λx_1..x_m. a') h_1 ... h_n = c` and `(λx_1..x_m. b') h_1 ... h_n = d`.
///
/// With `two_valued = Some((e, f))`, the targets `c, d` are `λxy.x, λxy.y` and the equalities
/// are checked after further applying to `e f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationCertificate {
    pub a: Term,
    pub b: Term,
    pub a_prime: Term,
    pub b_prime: Term,
    pub bound_vars: Vec<(Name, Ty)>,
    pub head_args: Vec<Term>,
    pub c: Term,
    pub d: Term,
    pub level: usize,
    pub witness: ModelWitness,
    pub two_valued: Option<(Term, Term)>,
}

pub fn separate(a: &Term, b: &Term, c: &Term, d: &Term) -> Result<SeparationCertificate, SeparationError> {
    separate_with(a, b, c, d, &SeparateOptions::default())
}

/// Contexts `K` with `K a e f = e` and `K b e f = f` for fresh `e, f : p`.
pub fn separate_two(a: &Term, b: &Term) -> Result<SeparationCertificate, SeparationError> {
    let p = Ty::p();
    separate_two_with(a, b, &Term::free("e", p), &Term::free("f", p), &SeparateOptions::default())
}

/// Contexts `K` with `K a e f = e` and `K b e f = f` for the given `e, f` of one type.
pub fn separate_two_with(
    a: &Term,
    b: &Term,
    e: &Term,
    f: &Term,
    opts: &SeparateOptions,
) -> Result<SeparationCertificate, SeparationError> {
    let t = e.ty();
    if f.ty() != t {
        return Err(SeparationError::IllTyped(format!("targets have types {} and {}", t.short(), f.ty().short())));
    }
    let (x, y) = (Term::free("x", t), Term::free("y", t));
    let c = Term::lam("x", t, Term::lam("y", t, x)?)?;
    let d = Term::lam("x", t, Term::lam("y", t, y)?)?;
    let mut cert = separate_with(a, b, &c, &d, opts)?;
    cert.two_valued = Some((e.clone(), f.clone()));
    Ok(cert)
}

fn collapse(t: &Term) -> Term {
    substitute_types(t, &TypeSubst::uniform(Ty::p()))
}

/// Free variables of `a`, then the new ones of `b`, leftmost first.
fn shared_free_vars(a: &Term, b: &Term) -> Result<Vec<(Name, Ty)>, SeparationError> {
    let mut out: Vec<(Name, Ty)> = Vec::new();
    for (n, t) in a.free_vars().into_iter().chain(b.free_vars()) {
        match out.iter().find(|(m, _)| *m == n) {
            Some((_, u)) if *u != t => {
                return Err(SeparationError::IllTyped(format!("variable {n} occurs at two types")));
            }
            Some(_) => {}
            None => out.push((n, t)),
        }
    }
    Ok(out)
}

fn close(t: &Term, vars: &[(Name, Ty)]) -> Result<Term, SeparationError> {
    let mut out = t.clone();
    for (n, ty) in vars.iter().rev() {
        out = Term::lam(n, *ty, out)?;
    }
    Ok(out)
}

pub fn separate_with(
    a: &Term,
    b: &Term,
    c: &Term,
    d: &Term,
    opts: &SeparateOptions,
) -> Result<SeparationCertificate, SeparationError> {
    if a.ty() != b.ty() {
        return Err(SeparationError::IllTyped(format!("terms have types {} and {}", a.ty().short(), b.ty().short())));
    }
    if c.ty() != d.ty() {
        return Err(SeparationError::IllTyped(format!("targets have types {} and {}", c.ty().short(), d.ty().short())));
    }
    if !a.is_product_free() || !b.is_product_free() {
        return Err(SeparationError::Unsupported("terms must be product-free".into()));
    }
    if opts.normalizer.decide_eq(a, b)? {
        return Err(SeparationError::EqualTerms);
    }
    let (a1, b1) = (collapse(a), collapse(b));
    let vars = shared_free_vars(&a1, &b1)?;
    let (a2, b2) = (close(&a1, &vars)?, close(&b1, &vars)?);
    let found = distinguish_with(&a2, &b2, opts.max_base, opts.leaf_budget)?
        .ok_or(SeparationError::NotSeparable { max_base: opts.max_base })?;
    let kappas = found.args.iter().map(kappa).collect::<Result<Vec<_>, _>>()?;
    let need = kappas.iter().copied().max().unwrap_or(0);
    let level = match opts.level {
        Some(l) if l % 2 == 1 => {
            return Err(SeparationError::InvalidLevel { given: l, reason: "the level must be even".into() })
        }
        Some(l) if (l as u64) < need => {
            return Err(SeparationError::InvalidLevel { given: l, reason: format!("below kappa = {need}") })
        }
        Some(l) => l,
        None => {
            if need > opts.max_level as u64 {
                return Err(SeparationError::LevelTooLarge { required: need as usize, max: opts.max_level });
            }
            (need as usize + 1) & !1
        }
    };
    if level > opts.max_level {
        return Err(SeparationError::LevelTooLarge { required: level, max: opts.max_level });
    }

    let target = c.ty();
    let to_target = TypeSubst::single(Atom::new("p"), target);
    let instance = TypeSubst::uniform(to_target.apply(numeral_type(level)));
    let a_prime = substitute_types(a, &instance);
    let b_prime = substitute_types(b, &instance);
    let bound_vars = vars
        .iter()
        .map(|(n, _)| {
            let orig = a.free_vars().into_iter().chain(b.free_vars()).find(|(m, _)| m == n).expect("collected");
            (n.clone(), instance.apply(orig.1))
        })
        .collect();

    let mut head_args = Vec::new();
    for phi in &found.args {
        head_args.push(substitute_types(&define_functional(phi, level)?, &to_target));
    }
    let mut j = level;
    while j >= 2 {
        let (c1, c2) = lowering_pair(j).expect("level at least 2");
        head_args.push(substitute_types(&c1, &to_target));
        head_args.push(substitute_types(&c2, &to_target));
        j -= 2;
    }
    head_args.push(Term::lam_raw(target, d.clone()));
    head_args.push(c.clone());

    Ok(SeparationCertificate {
        a: a.clone(),
        b: b.clone(),
        a_prime,
        b_prime,
        bound_vars,
        head_args,
        c: c.clone(),
        d: d.clone(),
        level,
        witness: ModelWitness {
            base: found.model.base(),
            raw_args: found.raw_args,
            observed: found.observed,
            relabeling: found.relabeling,
            args: found.args,
            kappas,
        },
        two_valued: None,
    })
}

impl SeparationCertificate {
    /// `(λx_1..x_m. side) h_1 ... h_n`, followed by `e f` for two-valued certificates.
    pub fn apply_context(&self, side: &Term) -> Result<Term, SeparationError> {
        let mut t = side.clone();
        for (n, ty) in self.bound_vars.iter().rev() {
            t = Term::lam(n, *ty, t)?;
        }
        t = Term::apps(t, &self.head_args)?;
        if let Some((e, f)) = &self.two_valued {
            t = Term::apps(t, &[e.clone(), f.clone()])?;
        }
        Ok(t)
    }

    /// The type substituted for every atom of `a` and `b`: `N_i` with `p` replaced by the target type.
    pub fn instance_type(&self) -> Ty {
        TypeSubst::single(Atom::new("p"), self.c.ty()).apply(numeral_type(self.level))
    }

    /// The targets the two sides must reach.
    pub fn targets(&self) -> (Term, Term) {
        match &self.two_valued {
            Some((e, f)) => (e.clone(), f.clone()),
            None => (self.c.clone(), self.d.clone()),
        }
    }
}

/// Checks both final equalities using normalization only.
pub fn verify(cert: &SeparationCertificate) -> Result<bool, SeparationError> {
    verify_with(cert, &Normalizer::default())
}

pub fn verify_with(cert: &SeparationCertificate, norm: &Normalizer) -> Result<bool, SeparationError> {
    if !is_type_instance(&cert.a, &cert.a_prime) || !is_type_instance(&cert.b, &cert.b_prime) {
        return Err(SeparationError::IllTyped("a' and b' must be type-instances of a and b".into()));
    }
    let lhs_a = cert.apply_context(&cert.a_prime)?;
    let lhs_b = cert.apply_context(&cert.b_prime)?;
    let (c, d) = cert.targets();
    if lhs_a.ty() != c.ty() || lhs_b.ty() != d.ty() {
        return Err(SeparationError::IllTyped(format!(
            "context yields type {}, targets have type {}",
            lhs_a.ty().short(),
            c.ty().short()
        )));
    }
    Ok(norm.decide_eq(&lhs_a, &c)? && norm.decide_eq(&lhs_b, &d)?)
}

/// Intermediate equalities of the construction, recomputed from the inputs and the witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StageReport {
    /// `a̲_2 φ_1^λ ... φ_k^λ = [0]_i` and `b̲_2 φ_1^λ ... φ_k^λ = [1]_i`.
    pub numerals: (bool, bool),
    /// After the lowering arguments: `[0]_0` and `[1]_0`.
    pub lowered: (bool, bool),
}

pub fn verify_stages(cert: &SeparationCertificate, norm: &Normalizer) -> Result<StageReport, SeparationError> {
    let (a1, b1) = (collapse(&cert.a), collapse(&cert.b));
    let vars = shared_free_vars(&a1, &b1)?;
    let i = cert.level;
    let under = TypeSubst::uniform(numeral_type(i));
    let a2 = substitute_types(&close(&a1, &vars)?, &under);
    let b2 = substitute_types(&close(&b1, &vars)?, &under);
    let definers = cert.witness.args.iter().map(|phi| define_functional(phi, i)).collect::<Result<Vec<_>, _>>()?;
    let sa = Term::apps(a2, &definers)?;
    let sb = Term::apps(b2, &definers)?;
    let numerals = (norm.decide_eq(&sa, &church(0, i))?, norm.decide_eq(&sb, &church(1, i))?);
    let mut lowering = Vec::new();
    let mut j = i;
    while j >= 2 {
        let (c1, c2) = lowering_pair(j).expect("level at least 2");
        lowering.push(c1);
        lowering.push(c2);
        j -= 2;
    }
    let la = Term::apps(sa, &lowering)?;
    let lb = Term::apps(sb, &lowering)?;
    let lowered = (norm.decide_eq(&la, &church(0, 0))?, norm.decide_eq(&lb, &church(1, 0))?);
    Ok(StageReport { numerals, lowered })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{read_term, Context};

    fn term(s: &str) -> Term {
        read_term(s, &Context::new()).unwrap()
    }

    #[test]
    fn church_one_two() {
        let cert = separate_two(&church(1, 0), &church(2, 0)).unwrap();
        assert!(cert.bound_vars.is_empty());
        assert_eq!(cert.witness.base, 2);
        assert_eq!(cert.level % 2, 0);
        assert!(verify(&cert).unwrap());
        let st = verify_stages(&cert, &Normalizer::default()).unwrap();
        assert_eq!(st, StageReport { numerals: (true, true), lowered: (true, true) });
    }

    #[test]
    fn swapped_targets_fail() {
        let ctx = Context::new().with("u", Ty::p()).unwrap().with("v", Ty::p()).unwrap();
        let c = read_term("u", &ctx).unwrap();
        let d = read_term("v", &ctx).unwrap();
        let mut cert = separate(&church(1, 0), &church(2, 0), &c, &d).unwrap();
        assert!(verify(&cert).unwrap());
        std::mem::swap(&mut cert.c, &mut cert.d);
        assert!(!verify(&cert).unwrap());
    }

    #[test]
    fn free_variables_are_bound() {
        let ctx = Context::new().with("g", Ty::atom("q")).unwrap();
        let a = read_term("\\x:q. g", &ctx).unwrap();
        let b = term("\\x:q. x");
        let cert = separate_two(&a, &b).unwrap();
        assert_eq!(cert.bound_vars.len(), 1);
        assert!(verify(&cert).unwrap());
    }

    #[test]
    fn equal_terms() {
        let a = term("\\f:p->p. f");
        let b = term("\\f:p->p. \\x:p. f x");
        assert_eq!(separate_two(&a, &b), Err(SeparationError::EqualTerms));
    }
}
