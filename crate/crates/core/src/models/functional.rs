//! Finite P-models: cardinalities and the canonical coding of functionals.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use super::ModelError;
use crate::syntax::{Ty, TyKind, TypeSubst};

/// Largest admissible cardinality.
pub const CARD_CAP: u64 = 1 << 63;

/// The full type hierarchy over the ordinal `P = {0, ..., base-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PModel {
    base: u32,
}

thread_local! {
    static CARDS: RefCell<HashMap<(u32, Ty), Option<u64>>> = RefCell::new(HashMap::new());
}

impl PModel {
    pub fn new(base: u32) -> Result<PModel, ModelError> {
        if base < 2 {
            return Err(ModelError::BadBase(base));
        }
        Ok(PModel { base })
    }

    pub fn base(self) -> u32 {
        self.base
    }

    /// Reads every atom as `P`. Types with `T` or products are not P-types.
    pub fn p_type(self, ty: Ty) -> Result<Ty, ModelError> {
        if !ty.is_pure() {
            return Err(ModelError::Unsupported(format!("{} is not a P-type", ty.short())));
        }
        Ok(TypeSubst::uniform(Ty::p()).apply(ty))
    }

    /// `|P| = base`, `|A -> B| = |B|^|A|`.
    pub fn cardinality(self, ty: Ty) -> Result<u64, ModelError> {
        let ty = self.p_type(ty)?;
        self.card(ty).ok_or_else(|| ModelError::Overflow(format!("cardinality of {}", ty.short())))
    }

    fn card(self, ty: Ty) -> Option<u64> {
        if let Some(c) = CARDS.with(|m| m.borrow().get(&(self.base, ty)).copied()) {
            return c;
        }
        let c = match ty.kind() {
            TyKind::Atom(_) => Some(self.base as u64),
            TyKind::Arrow(a, b) => {
                let (ca, cb) = (self.card(a), self.card(b));
                match (ca, cb) {
                    (Some(ca), Some(cb)) => checked_pow(cb, ca),
                    _ => None,
                }
            }
            _ => None,
        };
        CARDS.with(|m| m.borrow_mut().insert((self.base, ty), c));
        c
    }

    pub fn element(self, ty: Ty, code: u64) -> Result<Functional, ModelError> {
        let ty = self.p_type(ty)?;
        let card = self.cardinality(ty)?;
        if code >= card {
            return Err(ModelError::CodeOutOfRange { code, ty: ty.to_string() });
        }
        Ok(Functional { ty, code, base: self.base })
    }

    pub fn ordinal(self, n: u32) -> Result<Functional, ModelError> {
        self.element(Ty::p(), n as u64)
    }

    /// All elements of `ty` in canonical order.
    pub fn enumerate(self, ty: Ty) -> Result<impl Iterator<Item = Functional>, ModelError> {
        let ty = self.p_type(ty)?;
        let card = self.cardinality(ty)?;
        let base = self.base;
        Ok((0..card).map(move |code| Functional { ty, code, base }))
    }
}

/// `b^e` when it does not exceed the cap.
pub(crate) fn checked_pow(b: u64, e: u64) -> Option<u64> {
    match b {
        0 => Some(if e == 0 { 1 } else { 0 }),
        1 => Some(1),
        _ if e >= 64 => None,
        _ => b.checked_pow(e as u32).filter(|&v| v <= CARD_CAP),
    }
}

/// An element of a P-type. Elements of `A -> B` are coded as base-`|B|` numerals whose
/// least significant digit is the value at the first element of `A`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Functional {
    ty: Ty,
    code: u64,
    base: u32,
}

impl Functional {
    pub fn ty(&self) -> Ty {
        self.ty
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn model(&self) -> PModel {
        PModel { base: self.base }
    }

    pub fn is_ordinal(&self) -> bool {
        matches!(self.ty.kind(), TyKind::Atom(_))
    }

    pub fn apply(&self, arg: &Functional) -> Result<Functional, ModelError> {
        let (dom, cod) =
            self.ty.as_arrow().ok_or_else(|| ModelError::TypeMismatch(format!("{} is not a function", self)))?;
        if arg.ty != dom || arg.base != self.base {
            return Err(ModelError::TypeMismatch(format!("cannot apply {} to {}", self, arg)));
        }
        let m = self.model();
        let cb = m.cardinality(cod)?;
        let place = checked_pow(cb, arg.code).expect("digit place below cardinality");
        Ok(Functional { ty: cod, code: (self.code / place) % cb, base: self.base })
    }

    /// Applies to several arguments in turn.
    pub fn apply_all(&self, args: &[Functional]) -> Result<Functional, ModelError> {
        args.iter().try_fold(*self, |f, a| f.apply(a))
    }

    /// The values at every element of the domain, in canonical order.
    pub fn table(&self) -> Result<Vec<Functional>, ModelError> {
        let (dom, _) =
            self.ty.as_arrow().ok_or_else(|| ModelError::TypeMismatch(format!("{} is not a function", self)))?;
        self.model().enumerate(dom)?.map(|a| self.apply(&a)).collect()
    }

    /// Inverse of [`Functional::table`].
    pub fn from_table(model: PModel, ty: Ty, values: &[Functional]) -> Result<Functional, ModelError> {
        let ty = model.p_type(ty)?;
        let (dom, cod) =
            ty.as_arrow().ok_or_else(|| ModelError::TypeMismatch(format!("{} is not a function type", ty)))?;
        let ca = model.cardinality(dom)?;
        let cb = model.cardinality(cod)?;
        model.cardinality(ty)?;
        if values.len() as u64 != ca || values.iter().any(|v| v.ty != cod) {
            return Err(ModelError::TypeMismatch(format!("table does not match type {}", ty)));
        }
        let mut code = 0u64;
        for v in values.iter().rev() {
            code = code * cb + v.code;
        }
        Ok(Functional { ty, code, base: model.base })
    }
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}@P{}", self.ty, self.code, self.base)
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.ty, self.code)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;

    fn ty(s: &str) -> Ty {
        parse_type(s).unwrap()
    }

    #[test]
    fn cardinalities() {
        let m = PModel::new(2).unwrap();
        assert_eq!(m.cardinality(ty("p")).unwrap(), 2);
        assert_eq!(m.cardinality(ty("p->p")).unwrap(), 4);
        assert_eq!(m.cardinality(ty("(p->p)->p")).unwrap(), 16);
        assert_eq!(m.cardinality(ty("q->q")).unwrap(), 4);
        assert_eq!(m.cardinality(ty("((p->p)->p)->p->p")).unwrap(), 1 << 32);
        assert_eq!(m.cardinality(ty("((p->p)->p)->p")).unwrap(), 1 << 16);
        assert!(matches!(m.cardinality(ty("(((p->p)->p)->p)->p")), Err(ModelError::Overflow(_))));
        assert!(matches!(m.cardinality(ty("p*p")), Err(ModelError::Unsupported(_))));
        assert!(PModel::new(1).is_err());
        let m3 = PModel::new(3).unwrap();
        assert_eq!(m3.cardinality(ty("(p->p)->p")).unwrap(), 3u64.pow(27));
    }

    #[test]
    fn canonical_order_of_unary_functions() {
        let m = PModel::new(2).unwrap();
        let tables: Vec<Vec<u64>> =
            m.enumerate(ty("p->p")).unwrap().map(|f| f.table().unwrap().iter().map(|v| v.code()).collect()).collect();
        assert_eq!(tables, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn table_round_trip() {
        for base in [2, 3] {
            let m = PModel::new(base).unwrap();
            for t in ["p", "p->p", "p->p->p", "(p->p)->p"] {
                let t = ty(t);
                for f in m.enumerate(t).unwrap().take(2000) {
                    if f.is_ordinal() {
                        continue;
                    }
                    let back = Functional::from_table(m, t, &f.table().unwrap()).unwrap();
                    assert_eq!(back, f);
                }
            }
        }
    }
}
