//! Translation between arrow terms and closed terms of the calculus with products.

use super::arrow::{arrow_type_of, ArrowTerm};
use super::CccError;
use crate::normalize::Normalizer;
use crate::syntax::{Term, TermKind, Ty};

/// The closed term `λx. …` of type `source → target` denoting `f`.
pub fn to_lambda(f: &ArrowTerm) -> Result<Term, CccError> {
    arrow_type_of(f)?;
    Ok(translate(f))
}

fn translate(f: &ArrowTerm) -> Term {
    stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || translate_inner(f))
}

fn translate_inner(f: &ArrowTerm) -> Term {
    let s = f.source();
    let x = || Term::bound(0, s);
    match f {
        ArrowTerm::Id(_) => Term::lam_raw(s, x()),
        ArrowTerm::Proj1(..) => Term::lam_raw(s, Term::fst_raw(x())),
        ArrowTerm::Proj2(..) => Term::lam_raw(s, Term::snd_raw(x())),
        ArrowTerm::Eval(..) => Term::lam_raw(s, Term::app_raw(Term::fst_raw(x()), Term::snd_raw(x()))),
        ArrowTerm::Bang(_) => Term::lam_raw(s, Term::unit()),
        ArrowTerm::Compose(g, h) => Term::lam_raw(s, Term::app_raw(translate(g), Term::app_raw(translate(h), x()))),
        ArrowTerm::Pairing(l, r) => {
            Term::lam_raw(s, Term::pair(Term::app_raw(translate(l), x()), Term::app_raw(translate(r), x())))
        }
        ArrowTerm::Curry(c, a, h) => {
            let pair = Term::pair(Term::bound(1, *c), Term::bound(0, *a));
            Term::lam_raw(*c, Term::lam_raw(*a, Term::app_raw(translate(h), pair)))
        }
    }
}

/// An arrow term `A ⊢ B` whose translation is equal to the closed term `t : A → B`.
pub fn from_lambda(t: &Term) -> Result<ArrowTerm, CccError> {
    if !t.is_closed() {
        return Err(CccError::IllFormed("only closed terms denote arrows".into()));
    }
    let Some((a, _)) = t.ty().as_arrow() else {
        return Err(CccError::IllFormed(format!("{} is not an arrow type", t.ty().short())));
    };
    let body = match t.kind() {
        TermKind::Lam(_, b) => b.clone(),
        _ => Term::app_raw(t.clone(), Term::bound(0, a)),
    };
    Ok(compile(&body, &[a]))
}

/// The object `((C_1 × C_2) × …) × C_n` of a context.
fn context_object(ctx: &[Ty]) -> Ty {
    ctx[1..].iter().fold(ctx[0], |acc, &t| Ty::prod(acc, t))
}

fn variable(ctx: &[Ty], index: usize) -> ArrowTerm {
    let n = ctx.len();
    if n == 1 {
        return ArrowTerm::Id(ctx[0]);
    }
    let rest = context_object(&ctx[..n - 1]);
    if index == 0 {
        ArrowTerm::Proj2(rest, ctx[n - 1])
    } else {
        ArrowTerm::compose(variable(&ctx[..n - 1], index - 1), ArrowTerm::Proj1(rest, ctx[n - 1]))
    }
}

fn compile(t: &Term, ctx: &[Ty]) -> ArrowTerm {
    stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || compile_inner(t, ctx))
}

fn compile_inner(t: &Term, ctx: &[Ty]) -> ArrowTerm {
    match t.kind() {
        TermKind::Bound(i) => variable(ctx, *i as usize),
        TermKind::Free(_) => unreachable!("closed term"),
        TermKind::Unit => ArrowTerm::Bang(context_object(ctx)),
        TermKind::Lam(d, b) => {
            let mut inner = ctx.to_vec();
            inner.push(*d);
            ArrowTerm::curry(context_object(ctx), *d, compile(b, &inner))
        }
        TermKind::App(f, a) => {
            let (dom, cod) = f.ty().as_arrow().expect("function");
            ArrowTerm::compose(ArrowTerm::Eval(dom, cod), ArrowTerm::pairing(compile(f, ctx), compile(a, ctx)))
        }
        TermKind::Pair(l, r) => ArrowTerm::pairing(compile(l, ctx), compile(r, ctx)),
        TermKind::Fst(a) => {
            let (l, r) = a.ty().as_prod().expect("product");
            ArrowTerm::compose(ArrowTerm::Proj1(l, r), compile(a, ctx))
        }
        TermKind::Snd(a) => {
            let (l, r) = a.ty().as_prod().expect("product");
            ArrowTerm::compose(ArrowTerm::Proj2(l, r), compile(a, ctx))
        }
    }
}

pub fn decide_ccc_eq(f: &ArrowTerm, g: &ArrowTerm) -> Result<bool, CccError> {
    decide_ccc_eq_with(f, g, &Normalizer::default())
}

/// Equality in the free cartesian closed category, by equality of translations.
pub fn decide_ccc_eq_with(f: &ArrowTerm, g: &ArrowTerm, norm: &Normalizer) -> Result<bool, CccError> {
    let (tf, tg) = (arrow_type_of(f)?, arrow_type_of(g)?);
    if tf != tg {
        return Err(CccError::TypeMismatch {
            left: format!("{} ⊢ {}", tf.0.short(), tf.1.short()),
            right: format!("{} ⊢ {}", tg.0.short(), tg.1.short()),
        });
    }
    Ok(norm.decide_eq(&translate(f), &translate(g))?)
}
