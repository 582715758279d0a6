//! Evaluation into closures and neutrals, typed readback and typed conversion.

use std::rc::Rc;

use super::NormalizeError;
use crate::syntax::{Name, Term, TermKind, Ty, TyKind};

const RED_ZONE: usize = 256 * 1024;
const GROW: usize = 16 * 1024 * 1024;

#[derive(Clone)]
pub(crate) struct Value(Rc<V>);

pub(crate) enum V {
    Lam(Env, Ty, Term),
    Pair(Value, Value),
    Unit,
    Neutral(Head, Spine),
}

#[derive(Clone)]
pub(crate) enum Head {
    Level(u32, Ty),
    Free(Name, Ty),
}

#[derive(Clone)]
pub(crate) enum Elim {
    App(Value),
    Fst,
    Snd,
}

pub(crate) type Spine = Option<Rc<SpineNode>>;

pub(crate) struct SpineNode {
    elim: Elim,
    prev: Spine,
}

pub(crate) type Env = Option<Rc<EnvNode>>;

pub(crate) struct EnvNode {
    value: Value,
    next: Env,
}

fn lookup(env: &Env, i: u32) -> Value {
    let mut e = env;
    let mut k = i;
    loop {
        let node = e.as_ref().expect("dangling de Bruijn index");
        if k == 0 {
            return node.value.clone();
        }
        k -= 1;
        e = &node.next;
    }
}

fn elims(sp: &Spine) -> Vec<Elim> {
    let mut out = Vec::new();
    let mut s = sp;
    while let Some(n) = s {
        out.push(n.elim.clone());
        s = &n.prev;
    }
    out.reverse();
    out
}

fn push(sp: &Spine, elim: Elim) -> Spine {
    Some(Rc::new(SpineNode { elim, prev: sp.clone() }))
}

pub(crate) struct Machine {
    steps: u64,
    limit: u64,
    share: bool,
    next_gen: u32,
}

const GEN_BASE: u32 = 1 << 31;

impl Machine {
    pub(crate) fn new(limit: u64) -> Machine {
        Machine { steps: 0, limit, share: true, next_gen: GEN_BASE }
    }

    /// Disables normalization of closure arguments before substitution.
    pub(crate) fn without_sharing(mut self) -> Machine {
        self.share = false;
        self
    }

    fn tick(&mut self) -> Result<(), NormalizeError> {
        self.steps += 1;
        if self.steps > self.limit {
            Err(NormalizeError::ResourceExhausted { steps: self.limit })
        } else {
            Ok(())
        }
    }

    pub(crate) fn fresh(lvl: u32, ty: Ty) -> Value {
        Value(Rc::new(V::Neutral(Head::Level(lvl, ty), None)))
    }

    pub(crate) fn eval(&mut self, t: &Term, env: &Env) -> Result<Value, NormalizeError> {
        stacker::maybe_grow(RED_ZONE, GROW, || self.eval_inner(t, env))
    }

    fn eval_inner(&mut self, t: &Term, env: &Env) -> Result<Value, NormalizeError> {
        self.tick()?;
        Ok(match t.kind() {
            TermKind::Bound(i) => lookup(env, *i),
            TermKind::Free(n) => match n.strip_prefix('#').and_then(|l| l.parse().ok()) {
                Some(l) => Machine::fresh(l, t.ty()),
                None => Value(Rc::new(V::Neutral(Head::Free(n.clone(), t.ty()), None))),
            },
            TermKind::Lam(d, b) => Value(Rc::new(V::Lam(env.clone(), *d, b.clone()))),
            TermKind::App(f, a) => {
                let fv = self.eval(f, env)?;
                let mut av = self.eval(a, env)?;
                if self.share && matches!(&*av.0, V::Lam(..)) {
                    let q = self.quote(&av)?;
                    av = self.eval(&q, &None)?;
                }
                self.apply(&fv, av)?
            }
            TermKind::Pair(a, b) => {
                let av = self.eval(a, env)?;
                let bv = self.eval(b, env)?;
                Value(Rc::new(V::Pair(av, bv)))
            }
            TermKind::Fst(a) => {
                let v = self.eval(a, env)?;
                self.fst(&v)
            }
            TermKind::Snd(a) => {
                let v = self.eval(a, env)?;
                self.snd(&v)
            }
            TermKind::Unit => Value(Rc::new(V::Unit)),
        })
    }

    pub(crate) fn apply(&mut self, f: &Value, a: Value) -> Result<Value, NormalizeError> {
        match &*f.0 {
            V::Lam(env, _, body) => {
                let env = Some(Rc::new(EnvNode { value: a, next: env.clone() }));
                self.eval(body, &env)
            }
            V::Neutral(h, sp) => Ok(Value(Rc::new(V::Neutral(h.clone(), push(sp, Elim::App(a)))))),
            _ => unreachable!("application of a non-function value"),
        }
    }

    pub(crate) fn fst(&mut self, v: &Value) -> Value {
        match &*v.0 {
            V::Pair(a, _) => a.clone(),
            V::Neutral(h, sp) => Value(Rc::new(V::Neutral(h.clone(), push(sp, Elim::Fst)))),
            _ => unreachable!("projection of a non-pair value"),
        }
    }

    pub(crate) fn snd(&mut self, v: &Value) -> Value {
        match &*v.0 {
            V::Pair(_, b) => b.clone(),
            V::Neutral(h, sp) => Value(Rc::new(V::Neutral(h.clone(), push(sp, Elim::Snd)))),
            _ => unreachable!("projection of a non-pair value"),
        }
    }

    /// Untyped readback into β-normal form. Neutral variables become `#n` names.
    fn quote(&mut self, v: &Value) -> Result<Term, NormalizeError> {
        stacker::maybe_grow(RED_ZONE, GROW, || self.quote_inner(v))
    }

    fn quote_inner(&mut self, v: &Value) -> Result<Term, NormalizeError> {
        self.tick()?;
        Ok(match &*v.0 {
            V::Lam(_, d, _) => {
                let g = self.next_gen;
                self.next_gen += 1;
                let body = self.apply(v, Machine::fresh(g, *d))?;
                let bt = self.quote(&body)?;
                Term::lam(&format!("#{g}"), *d, bt).expect("quoted body is well-typed")
            }
            V::Pair(a, b) => Term::pair(self.quote(a)?, self.quote(b)?),
            V::Unit => Term::unit(),
            V::Neutral(h, sp) => {
                let mut t = match h {
                    Head::Level(l, ty) => Term::free(&format!("#{l}"), *ty),
                    Head::Free(n, ty) => Term::free(n, *ty),
                };
                for e in elims(sp) {
                    t = match e {
                        Elim::App(a) => Term::app_raw(t, self.quote(&a)?),
                        Elim::Fst => Term::fst_raw(t),
                        Elim::Snd => Term::snd_raw(t),
                    };
                }
                t
            }
        })
    }

    /// Type-directed readback into the long normal form.
    pub(crate) fn readback(&mut self, v: &Value, ty: Ty, lvl: u32) -> Result<Term, NormalizeError> {
        stacker::maybe_grow(RED_ZONE, GROW, || self.readback_inner(v, ty, lvl))
    }

    fn readback_inner(&mut self, v: &Value, ty: Ty, lvl: u32) -> Result<Term, NormalizeError> {
        self.tick()?;
        match ty.kind() {
            TyKind::Top => Ok(Term::unit()),
            TyKind::Arrow(d, c) => {
                let x = Machine::fresh(lvl, d);
                let body = self.apply(v, x)?;
                Ok(Term::lam_raw(d, self.readback(&body, c, lvl + 1)?))
            }
            TyKind::Prod(l, r) => {
                let a = self.fst(v);
                let b = self.snd(v);
                Ok(Term::pair(self.readback(&a, l, lvl)?, self.readback(&b, r, lvl)?))
            }
            TyKind::Atom(_) => match &*v.0 {
                V::Neutral(h, sp) => self.readback_neutral(h, sp, lvl),
                _ => unreachable!("canonical value at atomic type"),
            },
        }
    }

    fn readback_neutral(&mut self, h: &Head, sp: &Spine, lvl: u32) -> Result<Term, NormalizeError> {
        let mut t = match h {
            Head::Level(l, ty) => Term::bound(lvl - 1 - l, *ty),
            Head::Free(n, ty) => Term::free(n, *ty),
        };
        for e in elims(sp) {
            t = match e {
                Elim::App(v) => {
                    let (d, _) = t.ty().as_arrow().expect("spine application at non-arrow type");
                    let a = self.readback(&v, d, lvl)?;
                    Term::app_raw(t, a)
                }
                Elim::Fst => Term::fst_raw(t),
                Elim::Snd => Term::snd_raw(t),
            };
        }
        Ok(t)
    }

    /// Whether two values of type `ty` have the same long normal form.
    pub(crate) fn conv(&mut self, a: &Value, b: &Value, ty: Ty, lvl: u32) -> Result<bool, NormalizeError> {
        stacker::maybe_grow(RED_ZONE, GROW, || self.conv_inner(a, b, ty, lvl))
    }

    fn conv_inner(&mut self, a: &Value, b: &Value, ty: Ty, lvl: u32) -> Result<bool, NormalizeError> {
        if ty.is_trivial() || Rc::ptr_eq(&a.0, &b.0) {
            return Ok(true);
        }
        self.tick()?;
        if let (V::Neutral(h1, s1), V::Neutral(h2, s2)) = (&*a.0, &*b.0) {
            return self.conv_neutral(h1, s1, h2, s2, lvl);
        }
        match ty.kind() {
            TyKind::Arrow(d, c) => {
                let x = Machine::fresh(lvl, d);
                let a2 = self.apply(a, x.clone())?;
                let b2 = self.apply(b, x)?;
                self.conv(&a2, &b2, c, lvl + 1)
            }
            TyKind::Prod(l, r) => {
                let (a1, b1) = (self.fst(a), self.fst(b));
                if !self.conv(&a1, &b1, l, lvl)? {
                    return Ok(false);
                }
                let (a2, b2) = (self.snd(a), self.snd(b));
                self.conv(&a2, &b2, r, lvl)
            }
            TyKind::Top => Ok(true),
            TyKind::Atom(_) => Ok(false),
        }
    }

    fn conv_neutral(&mut self, h1: &Head, s1: &Spine, h2: &Head, s2: &Spine, lvl: u32) -> Result<bool, NormalizeError> {
        let mut ty = match (h1, h2) {
            (Head::Level(a, t), Head::Level(b, _)) if a == b => *t,
            (Head::Free(a, t), Head::Free(b, u)) if a == b && t == u => *t,
            _ => return Ok(false),
        };
        let (e1, e2) = (elims(s1), elims(s2));
        if e1.len() != e2.len() {
            return Ok(false);
        }
        for (x, y) in e1.iter().zip(&e2) {
            match (x, y, ty.kind()) {
                (Elim::App(u), Elim::App(v), TyKind::Arrow(d, c)) => {
                    if !self.conv(u, v, d, lvl)? {
                        return Ok(false);
                    }
                    ty = c;
                }
                (Elim::Fst, Elim::Fst, TyKind::Prod(l, _)) => ty = l,
                (Elim::Snd, Elim::Snd, TyKind::Prod(_, r)) => ty = r,
                _ => return Ok(false),
            }
        }
        Ok(true)
    }
}
