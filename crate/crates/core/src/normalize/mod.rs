//! βη (with ×β, ×η and the `T` rule) normal forms and the decision procedure for equality.

mod nbe;
mod rewrite;

use crate::syntax::{mentions, shift, Term, TermKind, Ty};
use nbe::Machine;
use rewrite::Rewriter;

/// Default step budget for a single normalization or equality check.
pub const DEFAULT_STEP_BUDGET: u64 = 4_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error("resource budget of {steps} steps exhausted")]
    ResourceExhausted { steps: u64 },
    #[error("type mismatch: {} vs {}", .left.short(), .right.short())]
    TypeMismatch { left: Ty, right: Ty },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NfKind {
    Contracted,
    Expanded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub term: Term,
    pub kind: NfKind,
}

/// How normal forms are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Evaluate to closures and neutrals, then read back by type.
    Evaluation,
    /// Normal-order β/×β rewriting, then η-long expansion.
    Rewriting,
}

#[derive(Clone, Copy, Debug)]
pub struct Normalizer {
    pub max_steps: u64,
    pub strategy: Strategy,
    /// Normalize closure arguments once before substituting them (evaluation strategy only).
    pub sharing: bool,
}

impl Default for Normalizer {
    fn default() -> Normalizer {
        Normalizer { max_steps: DEFAULT_STEP_BUDGET, strategy: Strategy::Evaluation, sharing: true }
    }
}

impl Normalizer {
    pub fn with_budget(max_steps: u64) -> Normalizer {
        Normalizer { max_steps, ..Normalizer::default() }
    }

    pub fn rewriting() -> Normalizer {
        Normalizer { strategy: Strategy::Rewriting, ..Normalizer::default() }
    }

    fn machine(&self) -> Machine {
        let m = Machine::new(self.max_steps);
        if self.sharing {
            m
        } else {
            m.without_sharing()
        }
    }

    /// The η-long β-normal form.
    pub fn long_nf(&self, a: &Term) -> Result<NormalForm, NormalizeError> {
        let term = match self.strategy {
            Strategy::Evaluation => {
                let mut m = self.machine();
                let v = m.eval(a, &None)?;
                m.readback(&v, a.ty(), 0)?
            }
            Strategy::Rewriting => {
                let mut r = Rewriter::new(self.max_steps);
                let b = r.beta(a)?;
                r.long(&b, a.ty())?
            }
        };
        Ok(NormalForm { term, kind: NfKind::Expanded })
    }

    /// The β-normal, maximally η-contracted form.
    pub fn beta_eta_nf(&self, a: &Term) -> Result<NormalForm, NormalizeError> {
        let long = self.long_nf(a)?;
        Ok(NormalForm { term: contract(&long.term), kind: NfKind::Contracted })
    }

    /// β/×β normal form without any η step.
    pub fn beta_nf(&self, a: &Term) -> Result<Term, NormalizeError> {
        Rewriter::new(self.max_steps).beta(a)
    }

    /// Whether `a = b` is provable.
    pub fn decide_eq(&self, a: &Term, b: &Term) -> Result<bool, NormalizeError> {
        if a.ty() != b.ty() {
            return Err(NormalizeError::TypeMismatch { left: a.ty(), right: b.ty() });
        }
        match self.strategy {
            Strategy::Evaluation => {
                let mut m = self.machine();
                let va = m.eval(a, &None)?;
                let vb = m.eval(b, &None)?;
                m.conv(&va, &vb, a.ty(), 0)
            }
            Strategy::Rewriting => Ok(self.long_nf(a)?.term == self.long_nf(b)?.term),
        }
    }
}

pub fn long_nf(a: &Term) -> Result<NormalForm, NormalizeError> {
    Normalizer::default().long_nf(a)
}

pub fn beta_eta_nf(a: &Term) -> Result<NormalForm, NormalizeError> {
    Normalizer::default().beta_eta_nf(a)
}

pub fn decide_eq(a: &Term, b: &Term) -> Result<bool, NormalizeError> {
    Normalizer::default().decide_eq(a, b)
}

/// Maximal η/×η contraction of a long normal form.
fn contract(t: &Term) -> Term {
    match t.kind() {
        TermKind::Bound(_) | TermKind::Free(_) | TermKind::Unit => t.clone(),
        TermKind::Lam(d, b) => {
            let b = contract(b);
            if let TermKind::App(f, a) = b.kind() {
                let arg_is_var = matches!(a.kind(), TermKind::Bound(0));
                if !mentions(f, 0) && (arg_is_var || a.ty().is_trivial()) {
                    return shift(f, -1, 0);
                }
            }
            Term::lam_raw(*d, b)
        }
        TermKind::App(f, a) => Term::app_raw(contract(f), contract(a)),
        TermKind::Fst(a) => Term::fst_raw(contract(a)),
        TermKind::Snd(a) => Term::snd_raw(contract(a)),
        TermKind::Pair(a, b) => {
            let (a, b) = (contract(a), contract(b));
            let whole = Ty::prod(a.ty(), b.ty());
            match (a.kind(), b.kind()) {
                (TermKind::Fst(c), TermKind::Snd(e)) if c == e => return c.clone(),
                (TermKind::Fst(c), _) if b.ty().is_trivial() && c.ty() == whole => return c.clone(),
                (_, TermKind::Snd(c)) if a.ty().is_trivial() && c.ty() == whole => return c.clone(),
                _ => {}
            }
            Term::pair(a, b)
        }
    }
}
