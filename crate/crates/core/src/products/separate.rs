//! Separation of closed terms with products through a differing component.

use super::iso::{build_iso_with, IsoWitness};
use super::split::{component_count, differing_component_with, project};
use super::ProductError;
use crate::normalize::Normalizer;
use crate::separator::{separate_two_with, SeparateOptions, SeparationCertificate};
use crate::syntax::{is_type_instance, substitute_types, Term, Ty, TypeSubst};

/// Evidence that `π^i(h a') h_1 ... h_l (p¹x)(p²x) = p¹x` and the same with `b'` gives `p²x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductCertificate {
    pub a: Term,
    pub b: Term,
    /// `h : A → A^π` for the common type `A`.
    pub iso: IsoWitness,
    pub components: usize,
    /// 1-based index of the differing component.
    pub index: usize,
    pub a_prime: Term,
    pub b_prime: Term,
    /// `h` at the instantiated type.
    pub iso_prime: Term,
    /// Two-valued separation of the components, with targets `p¹x` and `p²x`.
    pub inner: SeparationCertificate,
}

impl ProductCertificate {
    /// `π^i(h side) h_1 ... h_l e f`.
    pub fn apply_context(&self, side: &Term) -> Result<Term, ProductError> {
        let hs = Term::app(self.iso_prime.clone(), side.clone())?;
        let mut t = project(&hs, self.components, self.index)?;
        t = Term::apps(t, &self.inner.head_args)?;
        if let Some((e, f)) = &self.inner.two_valued {
            t = Term::apps(t, &[e.clone(), f.clone()])?;
        }
        Ok(t)
    }
}

/// Separates closed terms with the targets `p¹x, p²x` for `x : p × p`.
pub fn separate_prod(a: &Term, b: &Term) -> Result<ProductCertificate, ProductError> {
    separate_prod_with(a, b, Ty::p(), &SeparateOptions::default())
}

/// As [`separate_prod`] with `x : C × C`.
pub fn separate_prod_with(
    a: &Term,
    b: &Term,
    c: Ty,
    opts: &SeparateOptions,
) -> Result<ProductCertificate, ProductError> {
    let norm = &opts.normalizer;
    if a.ty() != b.ty() {
        return Err(ProductError::IllTyped(format!("types {} and {}", a.ty().short(), b.ty().short())));
    }
    if !a.is_closed() || !b.is_closed() {
        return Err(ProductError::NotClosed);
    }
    if norm.decide_eq(a, b)? {
        return Err(ProductError::EqualTerms);
    }
    let iso = build_iso_with(a.ty(), norm)?;
    let components = component_count(iso.target());
    let index = differing_component_with(a, b, &iso, norm)?;
    let component = |t: &Term| -> Result<Term, ProductError> {
        let ht = Term::app(iso.forward.clone(), t.clone())?;
        let nf = norm.beta_eta_nf(&project(&ht, components, index)?)?.term;
        if !nf.is_product_free() {
            return Err(ProductError::Internal(format!("component {index} is not a pure term")));
        }
        Ok(nf)
    };
    let (ai, bi) = (component(a)?, component(b)?);
    let x = Term::free("x", Ty::prod(c, c));
    let e = Term::fst(x.clone())?;
    let f = Term::snd(x)?;
    let inner = separate_two_with(&ai, &bi, &e, &f, opts)?;
    let sigma = TypeSubst::uniform(inner.instance_type());
    Ok(ProductCertificate {
        a: a.clone(),
        b: b.clone(),
        a_prime: substitute_types(a, &sigma),
        b_prime: substitute_types(b, &sigma),
        iso_prime: substitute_types(&iso.forward, &sigma),
        iso,
        components,
        index,
        inner,
    })
}

pub fn verify_product(cert: &ProductCertificate) -> Result<bool, ProductError> {
    verify_product_with(cert, &Normalizer::default())
}

pub fn verify_product_with(cert: &ProductCertificate, norm: &Normalizer) -> Result<bool, ProductError> {
    if !is_type_instance(&cert.a, &cert.a_prime)
        || !is_type_instance(&cert.b, &cert.b_prime)
        || !is_type_instance(&cert.iso.forward, &cert.iso_prime)
    {
        return Err(ProductError::IllTyped("a', b' and h' must be type-instances".into()));
    }
    if !cert.inner.bound_vars.is_empty() {
        return Err(ProductError::IllTyped("the component separation must be closed".into()));
    }
    let (e, f) = cert.inner.targets();
    let lhs_a = cert.apply_context(&cert.a_prime)?;
    let lhs_b = cert.apply_context(&cert.b_prime)?;
    if lhs_a.ty() != e.ty() {
        return Err(ProductError::IllTyped(format!(
            "context yields {}, targets have type {}",
            lhs_a.ty().short(),
            e.ty().short()
        )));
    }
    Ok(norm.decide_eq(&lhs_a, &e)? && norm.decide_eq(&lhs_b, &f)?)
}
