//! Deriving `p1[C,C] = p2[C,C]` from an unprovable equation between arrows.

use std::collections::HashMap;

use super::arrow::{arrow_type_of, match_instance, ArrowTerm};
use super::translate::{decide_ccc_eq_with, from_lambda, to_lambda};
use super::CccError;
use crate::normalize::Normalizer;
use crate::products::{separate_prod_with, ProductCertificate};
use crate::separator::SeparateOptions;
use crate::syntax::{Term, Ty, TypeSubst};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseCertificate {
    pub f: ArrowTerm,
    pub g: ArrowTerm,
    /// The object `C` at which the projections are identified.
    pub object: Ty,
    /// Separation of the translations of `f` and `g`.
    pub separation: ProductCertificate,
    /// The instances of `f` and `g` used as the hypothesis.
    pub f_prime: ArrowTerm,
    pub g_prime: ArrowTerm,
    /// `[λy λz c] : C×C ⊢ (A'→B')→C` with `c = π^i(h z) h_1 … h_l (p1 y)(p2 y)`.
    pub context: ArrowTerm,
}

impl CollapseCertificate {
    /// `eval . <context, curry[C*C, A'](hole . p2[C*C, A'])>`.
    pub fn plug(&self, hole: &ArrowTerm) -> ArrowTerm {
        let cc = Ty::prod(self.object, self.object);
        let a = hole.source();
        let fun = Ty::arrow(a, hole.target());
        ArrowTerm::compose(
            ArrowTerm::Eval(fun, self.object),
            ArrowTerm::pairing(
                self.context.clone(),
                ArrowTerm::curry(cc, a, ArrowTerm::compose(hole.clone(), ArrowTerm::Proj2(cc, a))),
            ),
        )
    }

    /// `(p1[C,C], p2[C,C])`.
    pub fn derived(&self) -> (ArrowTerm, ArrowTerm) {
        (ArrowTerm::Proj1(self.object, self.object), ArrowTerm::Proj2(self.object, self.object))
    }

    /// The final rule, for arbitrary `h1, h2 : E ⊢ C`.
    pub fn schema(&self) -> String {
        let c = crate::syntax::print_type(self.object);
        format!("h1 = p1[{c}, {c}] . <h1, h2> = p2[{c}, {c}] . <h1, h2> = h2  for all h1, h2 : E |- {c}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayStep {
    pub label: &'static str,
    pub equation: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseReplay {
    pub steps: Vec<ReplayStep>,
}

impl CollapseReplay {
    pub fn verified(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }
}

pub fn collapse(f: &ArrowTerm, g: &ArrowTerm) -> Result<CollapseCertificate, CccError> {
    collapse_with(f, g, Ty::atom("C"), &SeparateOptions::default())
}

pub fn collapse_with(
    f: &ArrowTerm,
    g: &ArrowTerm,
    object: Ty,
    opts: &SeparateOptions,
) -> Result<CollapseCertificate, CccError> {
    if decide_ccc_eq_with(f, g, &opts.normalizer)? {
        return Err(CccError::EqualArrows);
    }
    let (a, b) = (to_lambda(f)?, to_lambda(g)?);
    let separation = separate_prod_with(&a, &b, object, opts)?;
    let sigma = TypeSubst::uniform(separation.inner.instance_type());
    let (f_prime, g_prime) = (f.substitute(&sigma), g.substitute(&sigma));
    let fun = separation.a_prime.ty();
    let z = Term::free("z", fun);
    let body = separation.apply_context(&z)?;
    let cc = Ty::prod(object, object);
    let closed = Term::lam("x", cc, Term::lam("z", fun, body)?)?;
    let context = from_lambda(&closed)?;
    Ok(CollapseCertificate { f: f.clone(), g: g.clone(), object, separation, f_prime, g_prime, context })
}

pub fn replay(cert: &CollapseCertificate) -> Result<CollapseReplay, CccError> {
    replay_with(cert, &Normalizer::default())
}

/// Re-checks every stage with `decide_ccc_eq` and one use of the hypothesis `f = g`.
pub fn replay_with(cert: &CollapseCertificate, norm: &Normalizer) -> Result<CollapseReplay, CccError> {
    let mut steps = Vec::new();
    let mut step = |label, equation: String, holds| steps.push(ReplayStep { label, equation, holds });
    let (f, g, f1, g1) = (&cert.f, &cert.g, &cert.f_prime, &cert.g_prime);

    step("unprovable", format!("{f} = {g}"), !decide_ccc_eq_with(f, g, norm)?);

    let mut map = HashMap::new();
    let instance = match_instance(f, f1, &mut map)
        && match_instance(g, g1, &mut map)
        && arrow_type_of(f1).ok() == arrow_type_of(g1).ok();
    step("hypothesis instance", format!("{f1} = {g1}"), instance);

    let (lf, lg) = (cert.plug(f1), cert.plug(g1));
    let cc = Ty::prod(cert.object, cert.object);
    let typed =
        arrow_type_of(&lf).ok() == Some((cc, cert.object)) && arrow_type_of(&lg).ok() == Some((cc, cert.object));
    step("replacement", format!("{lf} = {lg}"), typed && instance);

    let (p1, p2) = cert.derived();
    let left = typed && decide_ccc_eq_with(&lf, &p1, norm)?;
    step("left", format!("{lf} = {p1}"), left);
    let right = typed && decide_ccc_eq_with(&lg, &p2, norm)?;
    step("right", format!("{lg} = {p2}"), right);
    step("derived", format!("{p1} = {p2}"), instance && typed && left && right);

    let (h1, h2) = (p1.clone(), p2.clone());
    let pair = ArrowTerm::pairing(h1.clone(), h2.clone());
    let schema = decide_ccc_eq_with(&ArrowTerm::compose(p1.clone(), pair.clone()), &h1, norm)?
        && decide_ccc_eq_with(&ArrowTerm::compose(p2.clone(), pair), &h2, norm)?;
    step("schema", cert.schema(), schema);
    Ok(CollapseReplay { steps })
}

pub fn verify_collapse(cert: &CollapseCertificate) -> Result<bool, CccError> {
    Ok(replay(cert)?.verified())
}
