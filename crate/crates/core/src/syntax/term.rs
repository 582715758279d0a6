//! Locally nameless, type-annotated terms of the calculus with products and `T`.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use super::types::{Ty, TyKind, TypeSubst};
use super::TypeError;

pub type Name = Arc<str>;

/// A well-typed term. Cheap to clone; immutable.
#[derive(Clone)]
pub struct Term(Arc<Node>);

struct Node {
    kind: TermKind,
    ty: Ty,
    /// One more than the largest dangling de Bruijn index (0 when locally closed).
    loose: u32,
    has_free: bool,
    size: u64,
}

#[derive(Clone, PartialEq, Eq)]
pub enum TermKind {
    /// De Bruijn index, counting enclosing binders from 0.
    Bound(u32),
    Free(Name),
    Lam(Ty, Term),
    App(Term, Term),
    Pair(Term, Term),
    Fst(Term),
    Snd(Term),
    Unit,
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ty == other.0.ty && self.0.size == other.0.size && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl Term {
    fn mk(kind: TermKind, ty: Ty) -> Term {
        let (loose, has_free, size) = match &kind {
            TermKind::Bound(i) => (i + 1, false, 1),
            TermKind::Free(_) => (0, true, 1),
            TermKind::Unit => (0, false, 1),
            TermKind::Lam(_, b) => (b.loose().saturating_sub(1), b.has_free(), b.size() + 1),
            TermKind::App(a, b) | TermKind::Pair(a, b) => (
                a.loose().max(b.loose()),
                a.has_free() || b.has_free(),
                a.size().saturating_add(b.size()).saturating_add(1),
            ),
            TermKind::Fst(a) | TermKind::Snd(a) => (a.loose(), a.has_free(), a.size() + 1),
        };
        Term(Arc::new(Node { kind, ty, loose, has_free, size }))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn ty(&self) -> Ty {
        self.0.ty
    }

    pub(crate) fn loose(&self) -> u32 {
        self.0.loose
    }

    pub fn has_free(&self) -> bool {
        self.0.has_free
    }

    pub fn is_closed(&self) -> bool {
        !self.0.has_free && self.0.loose == 0
    }

    /// Number of nodes (saturating).
    pub fn size(&self) -> u64 {
        self.0.size
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn free(name: &str, ty: Ty) -> Term {
        Term::mk(TermKind::Free(Arc::from(name)), ty)
    }

    pub fn unit() -> Term {
        Term::mk(TermKind::Unit, Ty::top())
    }

    pub(crate) fn bound(index: u32, ty: Ty) -> Term {
        Term::mk(TermKind::Bound(index), ty)
    }

    pub(crate) fn lam_raw(dom: Ty, body: Term) -> Term {
        let ty = Ty::arrow(dom, body.ty());
        Term::mk(TermKind::Lam(dom, body), ty)
    }

    pub(crate) fn app_raw(f: Term, a: Term) -> Term {
        let ty = match f.ty().kind() {
            TyKind::Arrow(_, b) => b,
            _ => unreachable!("app_raw on non-function"),
        };
        Term::mk(TermKind::App(f, a), ty)
    }

    pub(crate) fn fst_raw(a: Term) -> Term {
        let (l, _) = a.ty().as_prod().expect("fst_raw on non-product");
        Term::mk(TermKind::Fst(a), l)
    }

    pub(crate) fn snd_raw(a: Term) -> Term {
        let (_, r) = a.ty().as_prod().expect("snd_raw on non-product");
        Term::mk(TermKind::Snd(a), r)
    }

    /// `λname:dom. body`, binding every free occurrence of `name` in `body`.
    pub fn lam(name: &str, dom: Ty, body: Term) -> Result<Term, TypeError> {
        let body = abstract_free(&body, name, dom, 0)?;
        Ok(Term::lam_raw(dom, body))
    }

    pub fn app(f: Term, a: Term) -> Result<Term, TypeError> {
        match f.ty().kind() {
            TyKind::Arrow(d, _) if d == a.ty() => Ok(Term::app_raw(f, a)),
            TyKind::Arrow(d, _) => Err(TypeError::IllTyped {
                term: format!("{}", App2(&f, &a)),
                reason: format!("argument has type {} but {} was expected", a.ty().short(), d.short()),
            }),
            _ => Err(TypeError::IllTyped {
                term: format!("{}", App2(&f, &a)),
                reason: format!("head has non-function type {}", f.ty().short()),
            }),
        }
    }

    /// Left-nested application `f a1 ... an`.
    pub fn apps(f: Term, args: &[Term]) -> Result<Term, TypeError> {
        args.iter().try_fold(f, |acc, a| Term::app(acc, a.clone()))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        let ty = Ty::prod(a.ty(), b.ty());
        Term::mk(TermKind::Pair(a, b), ty)
    }

    pub fn fst(a: Term) -> Result<Term, TypeError> {
        if a.ty().as_prod().is_none() {
            return Err(TypeError::IllTyped {
                term: format!("p1 ({a})"),
                reason: format!("projection from non-product type {}", a.ty().short()),
            });
        }
        Ok(Term::fst_raw(a))
    }

    pub fn snd(a: Term) -> Result<Term, TypeError> {
        if a.ty().as_prod().is_none() {
            return Err(TypeError::IllTyped {
                term: format!("p2 ({a})"),
                reason: format!("projection from non-product type {}", a.ty().short()),
            });
        }
        Ok(Term::snd_raw(a))
    }

    /// Free variables in order of first (leftmost) occurrence.
    pub fn free_vars(&self) -> Vec<(Name, Ty)> {
        let mut out: Vec<(Name, Ty)> = Vec::new();
        let mut seen = HashSet::new();
        collect_free(self, &mut out, &mut seen);
        out
    }

    /// Whether the term mentions `T`, `*`, pairs or projections anywhere in its types.
    pub fn is_product_free(&self) -> bool {
        fn go(t: &Term) -> bool {
            if !t.ty().is_pure() {
                return false;
            }
            match t.kind() {
                TermKind::Lam(d, b) => d.is_pure() && go(b),
                TermKind::App(f, a) => go(f) && go(a),
                TermKind::Pair(..) | TermKind::Fst(_) | TermKind::Snd(_) | TermKind::Unit => false,
                TermKind::Bound(_) | TermKind::Free(_) => true,
            }
        }
        go(self)
    }

    /// Atoms occurring in any type annotation, leftmost first.
    pub fn atoms(&self) -> Vec<super::types::Atom> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        fn go(t: &Term, out: &mut Vec<super::types::Atom>, seen: &mut HashSet<Ty>) {
            t.ty().collect_atoms(out, seen);
            match t.kind() {
                TermKind::Lam(d, b) => {
                    d.collect_atoms(out, seen);
                    go(b, out, seen)
                }
                TermKind::App(a, b) | TermKind::Pair(a, b) => {
                    go(a, out, seen);
                    go(b, out, seen)
                }
                TermKind::Fst(a) | TermKind::Snd(a) => go(a, out, seen),
                _ => {}
            }
        }
        go(self, &mut out, &mut seen);
        out
    }
}

struct App2<'a>(&'a Term, &'a Term);

impl fmt::Display for App2<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) ({})", self.0, self.1)
    }
}

fn collect_free(t: &Term, out: &mut Vec<(Name, Ty)>, seen: &mut HashSet<Name>) {
    if !t.has_free() {
        return;
    }
    match t.kind() {
        TermKind::Free(n) => {
            if seen.insert(n.clone()) {
                out.push((n.clone(), t.ty()));
            }
        }
        TermKind::Lam(_, b) | TermKind::Fst(b) | TermKind::Snd(b) => collect_free(b, out, seen),
        TermKind::App(a, b) | TermKind::Pair(a, b) => {
            collect_free(a, out, seen);
            collect_free(b, out, seen);
        }
        TermKind::Bound(_) | TermKind::Unit => {}
    }
}

fn abstract_free(t: &Term, name: &str, ty: Ty, depth: u32) -> Result<Term, TypeError> {
    if !t.has_free() {
        return Ok(t.clone());
    }
    Ok(match t.kind() {
        TermKind::Free(n) if &**n == name => {
            if t.ty() != ty {
                return Err(TypeError::IllTyped {
                    term: name.to_string(),
                    reason: format!("variable used at type {} but bound at type {}", t.ty().short(), ty.short()),
                });
            }
            Term::bound(depth, ty)
        }
        TermKind::Free(_) | TermKind::Bound(_) | TermKind::Unit => t.clone(),
        TermKind::Lam(d, b) => Term::lam_raw(*d, abstract_free(b, name, ty, depth + 1)?),
        TermKind::App(f, a) => Term::app_raw(abstract_free(f, name, ty, depth)?, abstract_free(a, name, ty, depth)?),
        TermKind::Pair(a, b) => Term::pair(abstract_free(a, name, ty, depth)?, abstract_free(b, name, ty, depth)?),
        TermKind::Fst(a) => Term::fst_raw(abstract_free(a, name, ty, depth)?),
        TermKind::Snd(a) => Term::snd_raw(abstract_free(a, name, ty, depth)?),
    })
}

/// Adds `d` to every index `>= cutoff`.
pub(crate) fn shift(t: &Term, d: i64, cutoff: u32) -> Term {
    if t.loose() <= cutoff || d == 0 {
        return t.clone();
    }
    match t.kind() {
        TermKind::Bound(i) => Term::bound((*i as i64 + d) as u32, t.ty()),
        TermKind::Free(_) | TermKind::Unit => t.clone(),
        TermKind::Lam(dom, b) => Term::lam_raw(*dom, shift(b, d, cutoff + 1)),
        TermKind::App(f, a) => Term::app_raw(shift(f, d, cutoff), shift(a, d, cutoff)),
        TermKind::Pair(a, b) => Term::pair(shift(a, d, cutoff), shift(b, d, cutoff)),
        TermKind::Fst(a) => Term::fst_raw(shift(a, d, cutoff)),
        TermKind::Snd(a) => Term::snd_raw(shift(a, d, cutoff)),
    }
}

/// Replaces index `depth` by `value` (whose indices are relative to the outside) and
/// lowers the indices above it: the body of a binder applied to `value`.
pub(crate) fn instantiate(t: &Term, value: &Term, depth: u32) -> Term {
    if t.loose() <= depth {
        return t.clone();
    }
    match t.kind() {
        TermKind::Bound(i) if *i == depth => shift(value, depth as i64, 0),
        TermKind::Bound(i) if *i > depth => Term::bound(i - 1, t.ty()),
        TermKind::Bound(_) | TermKind::Free(_) | TermKind::Unit => t.clone(),
        TermKind::Lam(dom, b) => Term::lam_raw(*dom, instantiate(b, value, depth + 1)),
        TermKind::App(f, a) => Term::app_raw(instantiate(f, value, depth), instantiate(a, value, depth)),
        TermKind::Pair(a, b) => Term::pair(instantiate(a, value, depth), instantiate(b, value, depth)),
        TermKind::Fst(a) => Term::fst_raw(instantiate(a, value, depth)),
        TermKind::Snd(a) => Term::snd_raw(instantiate(a, value, depth)),
    }
}

/// Whether index `depth` occurs (relative to the current position).
pub(crate) fn mentions(t: &Term, depth: u32) -> bool {
    if t.loose() <= depth {
        return false;
    }
    match t.kind() {
        TermKind::Bound(i) => *i == depth,
        TermKind::Free(_) | TermKind::Unit => false,
        TermKind::Lam(_, b) => mentions(b, depth + 1),
        TermKind::App(a, b) | TermKind::Pair(a, b) => mentions(a, depth) || mentions(b, depth),
        TermKind::Fst(a) | TermKind::Snd(a) => mentions(a, depth),
    }
}

/// `a[x := b]`. Capture is impossible because binders are nameless.
pub fn substitute_term(a: &Term, x: &str, b: &Term) -> Result<Term, TypeError> {
    fn go(t: &Term, x: &str, b: &Term) -> Result<Term, TypeError> {
        if !t.has_free() {
            return Ok(t.clone());
        }
        Ok(match t.kind() {
            TermKind::Free(n) if &**n == x => {
                if t.ty() != b.ty() {
                    return Err(TypeError::TypeMismatch { expected: t.ty(), found: b.ty() });
                }
                b.clone()
            }
            TermKind::Free(_) | TermKind::Bound(_) | TermKind::Unit => t.clone(),
            TermKind::Lam(d, body) => Term::lam_raw(*d, go(body, x, b)?),
            TermKind::App(f, a) => Term::app_raw(go(f, x, b)?, go(a, x, b)?),
            TermKind::Pair(l, r) => Term::pair(go(l, x, b)?, go(r, x, b)?),
            TermKind::Fst(a) => Term::fst_raw(go(a, x, b)?),
            TermKind::Snd(a) => Term::snd_raw(go(a, x, b)?),
        })
    }
    go(a, x, b)
}

/// Rewrites every type annotation under `sub`.
pub fn substitute_types(a: &Term, sub: &TypeSubst) -> Term {
    match a.kind() {
        TermKind::Bound(i) => Term::bound(*i, sub.apply(a.ty())),
        TermKind::Free(n) => Term::mk(TermKind::Free(n.clone()), sub.apply(a.ty())),
        TermKind::Unit => a.clone(),
        TermKind::Lam(d, b) => Term::lam_raw(sub.apply(*d), substitute_types(b, sub)),
        TermKind::App(f, x) => Term::app_raw(substitute_types(f, sub), substitute_types(x, sub)),
        TermKind::Pair(l, r) => Term::pair(substitute_types(l, sub), substitute_types(r, sub)),
        TermKind::Fst(x) => Term::fst_raw(substitute_types(x, sub)),
        TermKind::Snd(x) => Term::snd_raw(substitute_types(x, sub)),
    }
}

/// Whether `b` is obtained from `a` by substituting types for atoms.
pub fn is_type_instance(a: &Term, b: &Term) -> bool {
    let mut map = std::collections::HashMap::new();
    fn ty_match(a: Ty, b: Ty, map: &mut std::collections::HashMap<super::types::Atom, Ty>) -> bool {
        match (a.kind(), b.kind()) {
            (TyKind::Atom(x), _) => match map.get(&x) {
                Some(&t) => t == b,
                None => {
                    map.insert(x, b);
                    true
                }
            },
            (TyKind::Top, TyKind::Top) => true,
            (TyKind::Arrow(a1, a2), TyKind::Arrow(b1, b2)) | (TyKind::Prod(a1, a2), TyKind::Prod(b1, b2)) => {
                ty_match(a1, b1, map) && ty_match(a2, b2, map)
            }
            _ => false,
        }
    }
    fn go(a: &Term, b: &Term, map: &mut std::collections::HashMap<super::types::Atom, Ty>) -> bool {
        if !ty_match(a.ty(), b.ty(), map) {
            return false;
        }
        match (a.kind(), b.kind()) {
            (TermKind::Bound(i), TermKind::Bound(j)) => i == j,
            (TermKind::Free(x), TermKind::Free(y)) => x == y,
            (TermKind::Unit, TermKind::Unit) => true,
            (TermKind::Lam(d, x), TermKind::Lam(e, y)) => ty_match(*d, *e, map) && go(x, y, map),
            (TermKind::App(f, x), TermKind::App(g, y)) | (TermKind::Pair(f, x), TermKind::Pair(g, y)) => {
                go(f, g, map) && go(x, y, map)
            }
            (TermKind::Fst(x), TermKind::Fst(y)) | (TermKind::Snd(x), TermKind::Snd(y)) => go(x, y, map),
            _ => false,
        }
    }
    go(a, b, &mut map)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_term(self))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.size() > 400 {
            write!(f, "Term(<size {}> : {})", self.size(), self.ty().short())
        } else {
            write!(f, "Term({} : {})", self, self.ty().short())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Ty {
        Ty::p()
    }

    #[test]
    fn lam_closes_over_name() {
        let x = Term::free("x", p());
        let id = Term::lam("x", p(), x.clone()).unwrap();
        assert_eq!(id.ty(), Ty::arrow(p(), p()));
        assert!(id.is_closed());
        let id2 = Term::lam("y", p(), Term::free("y", p())).unwrap();
        assert_eq!(id, id2);
    }

    #[test]
    fn app_checks_types() {
        let x = Term::free("x", p());
        let y = Term::free("y", p());
        assert!(matches!(Term::app(x, y), Err(TypeError::IllTyped { .. })));
    }

    #[test]
    fn substitution_avoids_capture() {
        // (λy. x)[x := y] must keep the free y distinct from the binder.
        let y = Term::free("y", p());
        let lam = Term::lam("y", p(), Term::free("x", p())).unwrap();
        let out = substitute_term(&lam, "x", &y).unwrap();
        match out.kind() {
            TermKind::Lam(_, body) => assert!(matches!(body.kind(), TermKind::Free(n) if &**n == "y")),
            _ => panic!(),
        }
        assert_eq!(out.free_vars().len(), 1);
        let wrong = Term::free("z", Ty::arrow(p(), p()));
        assert!(matches!(substitute_term(&lam, "x", &wrong), Err(TypeError::TypeMismatch { .. })));
    }

    #[test]
    fn instantiate_lowers_indices() {
        // body of λa.λb. a  applied to free z
        let body = Term::lam_raw(p(), Term::bound(1, p()));
        let z = Term::free("z", p());
        let out = instantiate(&body, &z, 0);
        assert_eq!(out, Term::lam_raw(p(), z));
    }

    #[test]
    fn type_instance() {
        let q = Ty::atom("q");
        let a = Term::lam("x", q, Term::free("x", q)).unwrap();
        let sub = TypeSubst::uniform(Ty::arrow(p(), p()));
        let b = substitute_types(&a, &sub);
        assert!(is_type_instance(&a, &b));
        assert!(!is_type_instance(&b, &a));
    }
}
