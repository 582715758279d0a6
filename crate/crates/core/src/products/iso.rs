//! Isomorphisms `h : A → A^π` composed along a type normal form trace.

use super::typenf::{subtype_at, type_nf, Dir, Rule, TypeNfTrace};
use crate::normalize::{NormalizeError, Normalizer};
use crate::syntax::{Term, Ty, TyKind};

/// Closed terms `forward : A → B` and `backward : B → A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub forward: Term,
    pub backward: Term,
}

impl IsoWitness {
    pub fn identity(ty: Ty) -> IsoWitness {
        let id = lam("x", ty, |x| x);
        IsoWitness { forward: id.clone(), backward: id }
    }

    pub fn source(&self) -> Ty {
        self.forward.ty().as_arrow().expect("arrow").0
    }

    pub fn target(&self) -> Ty {
        self.forward.ty().as_arrow().expect("arrow").1
    }

    /// Both round trips `λx. h'(h x) = λx. x` and `λy. h(h' y) = λy. y`.
    pub fn check(&self, norm: &Normalizer) -> Result<bool, NormalizeError> {
        let (s, t) = (self.source(), self.target());
        let there = lam("x", s, |x| ap(&self.backward, ap(&self.forward, x)));
        let back = lam("y", t, |y| ap(&self.forward, ap(&self.backward, y)));
        Ok(norm.decide_eq(&there, &IsoWitness::identity(s).forward)?
            && norm.decide_eq(&back, &IsoWitness::identity(t).forward)?)
    }
}

fn lam(name: &str, ty: Ty, body: impl FnOnce(Term) -> Term) -> Term {
    let x = Term::free(name, ty);
    Term::lam(name, ty, body(x)).expect("well-typed by construction")
}

fn ap(f: &Term, a: Term) -> Term {
    Term::app(f.clone(), a).expect("well-typed by construction")
}

fn p1(t: Term) -> Term {
    Term::fst(t).expect("product")
}

fn p2(t: Term) -> Term {
    Term::snd(t).expect("product")
}

/// The witness for one rule applied at the root of `redex`.
pub fn primitive(rule: Rule, redex: Ty) -> IsoWitness {
    let target = rule.contract(redex).expect("redex of the rule");
    let (forward, backward) = match rule {
        Rule::CurryCod => {
            let (a, _) = redex.as_arrow().unwrap();
            let fwd = lam("g", redex, |g| Term::pair(lam("x", a, |x| p1(ap(&g, x))), lam("x", a, |x| p2(ap(&g, x)))));
            let bwd = lam("q", target, |q| lam("x", a, |x| Term::pair(ap(&p1(q.clone()), x.clone()), ap(&p2(q), x))));
            (fwd, bwd)
        }
        Rule::CurryDom => {
            let (a, _) = redex.as_arrow().unwrap();
            let (a1, a2) = a.as_prod().unwrap();
            let fwd = lam("g", redex, |g| lam("x", a1, |x| lam("y", a2, |y| ap(&g, Term::pair(x, y)))));
            let bwd = lam("g", target, |g| lam("z", a, |z| ap(&ap(&g, p1(z.clone())), p2(z))));
            (fwd, bwd)
        }
        Rule::Assoc => {
            let fwd = lam("z", redex, |z| Term::pair(Term::pair(p1(z.clone()), p1(p2(z.clone()))), p2(p2(z))));
            let bwd = lam("z", target, |z| Term::pair(p1(p1(z.clone())), Term::pair(p2(p1(z.clone())), p2(z))));
            (fwd, bwd)
        }
        Rule::ArrT => {
            let (a, _) = redex.as_arrow().unwrap();
            (lam("g", redex, |_| Term::unit()), lam("t", target, |_| lam("x", a, |_| Term::unit())))
        }
        Rule::TArr => (lam("g", redex, |g| ap(&g, Term::unit())), lam("b", target, |b| lam("t", Ty::top(), |_| b))),
        Rule::ProdT => (lam("z", redex, p1), lam("a", target, |a| Term::pair(a, Term::unit()))),
        Rule::TProd => (lam("z", redex, p2), lam("a", target, |a| Term::pair(Term::unit(), a))),
    };
    IsoWitness { forward, backward }
}

/// Lifts an isomorphism of the subtype at `pos` to the whole of `ty`.
pub fn lift(ty: Ty, pos: &[Dir], inner: IsoWitness) -> IsoWitness {
    let Some((d, rest)) = pos.split_first() else {
        return inner;
    };
    match (d, ty.kind()) {
        (Dir::Dom, TyKind::Arrow(a, b)) => {
            let w = lift(a, rest, inner);
            let a2 = w.target();
            let fwd = lam("h", ty, |h| lam("x", a2, |x| ap(&h, ap(&w.backward, x))));
            let bwd = lam("k", Ty::arrow(a2, b), |k| lam("x", a, |x| ap(&k, ap(&w.forward, x))));
            IsoWitness { forward: fwd, backward: bwd }
        }
        (Dir::Cod, TyKind::Arrow(a, b)) => {
            let w = lift(b, rest, inner);
            let b2 = w.target();
            let fwd = lam("h", ty, |h| lam("x", a, |x| ap(&w.forward, ap(&h, x))));
            let bwd = lam("k", Ty::arrow(a, b2), |k| lam("x", a, |x| ap(&w.backward, ap(&k, x))));
            IsoWitness { forward: fwd, backward: bwd }
        }
        (Dir::Left, TyKind::Prod(a, b)) => {
            let w = lift(a, rest, inner);
            let a2 = w.target();
            let fwd = lam("z", ty, |z| Term::pair(ap(&w.forward, p1(z.clone())), p2(z)));
            let bwd = lam("z", Ty::prod(a2, b), |z| Term::pair(ap(&w.backward, p1(z.clone())), p2(z)));
            IsoWitness { forward: fwd, backward: bwd }
        }
        (Dir::Right, TyKind::Prod(a, b)) => {
            let w = lift(b, rest, inner);
            let b2 = w.target();
            let fwd = lam("z", ty, |z| Term::pair(p1(z.clone()), ap(&w.forward, p2(z))));
            let bwd = lam("z", Ty::prod(a, b2), |z| Term::pair(p1(z.clone()), ap(&w.backward, p2(z))));
            IsoWitness { forward: fwd, backward: bwd }
        }
        _ => panic!("position does not exist in {}", ty.short()),
    }
}

/// Composition `k ∘ h`.
fn compose(h: &IsoWitness, k: &IsoWitness) -> IsoWitness {
    let (s, t) = (h.source(), k.target());
    IsoWitness {
        forward: lam("x", s, |x| ap(&k.forward, ap(&h.forward, x))),
        backward: lam("y", t, |y| ap(&h.backward, ap(&k.backward, y))),
    }
}

/// Composes one primitive isomorphism per step of the trace.
pub fn iso_from_trace(trace: &TypeNfTrace) -> IsoWitness {
    let mut cur = trace.input;
    let mut acc = IsoWitness::identity(cur);
    for step in &trace.steps {
        let redex = subtype_at(cur, &step.position).expect("trace position");
        let w = lift(cur, &step.position, primitive(step.rule, redex));
        cur = w.target();
        acc = compose(&acc, &w);
    }
    acc
}

/// `h : A → A^π` and its inverse, in contracted normal form.
pub fn build_iso(ty: Ty) -> Result<IsoWitness, NormalizeError> {
    build_iso_with(ty, &Normalizer::default())
}

pub fn build_iso_with(ty: Ty, norm: &Normalizer) -> Result<IsoWitness, NormalizeError> {
    let trace = type_nf(ty);
    if trace.steps.is_empty() {
        return Ok(IsoWitness::identity(ty));
    }
    let w = iso_from_trace(&trace);
    Ok(IsoWitness { forward: norm.beta_eta_nf(&w.forward)?.term, backward: norm.beta_eta_nf(&w.backward)?.term })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_type, print_term};

    fn ty(s: &str) -> Ty {
        parse_type(s).unwrap()
    }

    #[test]
    fn every_rule_round_trips() {
        let n = Normalizer::default();
        for (rule, t) in [
            (Rule::CurryCod, "p->q*r"),
            (Rule::CurryDom, "p*q->r"),
            (Rule::Assoc, "p*(q*r)"),
            (Rule::ArrT, "p->T"),
            (Rule::TArr, "T->p"),
            (Rule::ProdT, "p*T"),
            (Rule::TProd, "T*p"),
        ] {
            let w = primitive(rule, ty(t));
            assert!(w.check(&n).unwrap(), "{rule}");
        }
    }

    #[test]
    fn normal_types_get_identity() {
        let w = build_iso(ty("p->q")).unwrap();
        assert_eq!(w, IsoWitness::identity(ty("p->q")));
    }

    #[test]
    fn composite_witnesses() {
        let w = build_iso(ty("p*T")).unwrap();
        assert_eq!(print_term(&w.forward), "\\x1:p*T. p1 x1");
        assert_eq!(print_term(&w.backward), "\\x1:p. <x1, k>");
        for t in ["p*q->r", "(p->T*q)*(T->r*(p*q))", "T", "(p*p->p)->(p->p)*p"] {
            let w = build_iso(ty(t)).unwrap();
            assert_eq!(w.target(), type_nf(ty(t)).output);
            assert!(w.check(&Normalizer::default()).unwrap(), "{t}");
        }
    }
}
