//! Syntactic normalization: normal-order β/×β rewriting followed by η-long expansion.

use super::NormalizeError;
use crate::syntax::{instantiate, shift, Term, TermKind, Ty, TyKind};

pub(crate) struct Rewriter {
    steps: u64,
    limit: u64,
}

impl Rewriter {
    pub(crate) fn new(limit: u64) -> Rewriter {
        Rewriter { steps: 0, limit }
    }

    fn tick(&mut self) -> Result<(), NormalizeError> {
        self.steps += 1;
        if self.steps > self.limit {
            Err(NormalizeError::ResourceExhausted { steps: self.limit })
        } else {
            Ok(())
        }
    }

    /// β/×β normal form, no η.
    pub(crate) fn beta(&mut self, t: &Term) -> Result<Term, NormalizeError> {
        stacker::maybe_grow(256 * 1024, 16 * 1024 * 1024, || self.beta_inner(t))
    }

    fn beta_inner(&mut self, t: &Term) -> Result<Term, NormalizeError> {
        self.tick()?;
        Ok(match t.kind() {
            TermKind::Bound(_) | TermKind::Free(_) | TermKind::Unit => t.clone(),
            TermKind::Lam(d, b) => Term::lam_raw(*d, self.beta(b)?),
            TermKind::App(f, a) => {
                let f = self.beta(f)?;
                match f.kind() {
                    TermKind::Lam(_, body) => {
                        let r = instantiate(body, a, 0);
                        self.beta(&r)?
                    }
                    _ => Term::app_raw(f, self.beta(a)?),
                }
            }
            TermKind::Pair(a, b) => Term::pair(self.beta(a)?, self.beta(b)?),
            TermKind::Fst(p) => {
                let p = self.beta(p)?;
                match p.kind() {
                    TermKind::Pair(a, _) => a.clone(),
                    _ => Term::fst_raw(p),
                }
            }
            TermKind::Snd(p) => {
                let p = self.beta(p)?;
                match p.kind() {
                    TermKind::Pair(_, b) => b.clone(),
                    _ => Term::snd_raw(p),
                }
            }
        })
    }

    /// η-long expansion of a β-normal term.
    pub(crate) fn long(&mut self, t: &Term, ty: Ty) -> Result<Term, NormalizeError> {
        self.tick()?;
        Ok(match ty.kind() {
            TyKind::Top => Term::unit(),
            TyKind::Arrow(d, c) => match t.kind() {
                TermKind::Lam(_, b) => Term::lam_raw(d, self.long(b, c)?),
                _ => {
                    let x = self.long(&Term::bound(0, d), d)?;
                    let body = Term::app_raw(shift(t, 1, 0), x);
                    Term::lam_raw(d, self.long(&body, c)?)
                }
            },
            TyKind::Prod(l, r) => match t.kind() {
                TermKind::Pair(a, b) => Term::pair(self.long(a, l)?, self.long(b, r)?),
                _ => Term::pair(self.long(&Term::fst_raw(t.clone()), l)?, self.long(&Term::snd_raw(t.clone()), r)?),
            },
            TyKind::Atom(_) => self.spine(t)?,
        })
    }

    fn spine(&mut self, t: &Term) -> Result<Term, NormalizeError> {
        Ok(match t.kind() {
            TermKind::App(f, a) => Term::app_raw(self.spine(f)?, self.long(a, a.ty())?),
            TermKind::Fst(p) => Term::fst_raw(self.spine(p)?),
            TermKind::Snd(p) => Term::snd_raw(self.spine(p)?),
            _ => t.clone(),
        })
    }
}
