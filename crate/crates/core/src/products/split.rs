//! Components of terms at product normal types, and the projections `π^i`.

use super::iso::IsoWitness;
use super::ProductError;
use crate::normalize::Normalizer;
use crate::syntax::{Term, TermKind, Ty, TyKind};

/// The long normal form of a term at a product normal type, taken apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Split {
    /// The type is `T` and the normal form is `k`.
    Unit,
    /// `Π_{i=1}^n a_i`, left-nested.
    Components(Vec<Term>),
}

/// Number of components of `×_{i=1}^n A_i`, reading left-nested products.
pub fn component_count(ty: Ty) -> usize {
    match ty.kind() {
        TyKind::Prod(a, _) => component_count(a) + 1,
        _ => 1,
    }
}

pub fn split(a: &Term) -> Result<Split, ProductError> {
    split_with(a, &Normalizer::default())
}

pub fn split_with(a: &Term, norm: &Normalizer) -> Result<Split, ProductError> {
    if !a.is_closed() {
        return Err(ProductError::NotClosed);
    }
    if !super::typenf::is_product_normal(a.ty()) {
        return Err(ProductError::IllTyped(format!("{} is not in product normal form", a.ty().short())));
    }
    if matches!(a.ty().kind(), TyKind::Top) {
        return Ok(Split::Unit);
    }
    let mut t = norm.long_nf(a)?.term;
    let mut out = Vec::new();
    while let TermKind::Pair(l, r) = t.kind() {
        out.push(r.clone());
        t = l.clone();
    }
    out.push(t);
    out.reverse();
    Ok(Split::Components(out))
}

/// `π^i a` for `a : ×_{j=1}^n A_j`: `a` when `n = 1`, `p² a` when `i = n`, else `π^i (p¹ a)`.
pub fn project(a: &Term, n: usize, i: usize) -> Result<Term, ProductError> {
    if i == 0 || i > n {
        return Err(ProductError::IndexOutOfRange { index: i, n });
    }
    if n == 1 {
        return Ok(a.clone());
    }
    let bad = || ProductError::IllTyped(format!("{} has fewer than {n} components", a.ty().short()));
    if i == n {
        Term::snd(a.clone()).map_err(|_| bad())
    } else {
        project(&Term::fst(a.clone()).map_err(|_| bad())?, n - 1, i)
    }
}

/// The closed term `λx:A. π^i x`.
pub fn projector(n: usize, i: usize, ty: Ty) -> Result<Term, ProductError> {
    let x = Term::free("x", ty);
    Ok(Term::lam("x", ty, project(&x, n, i)?).expect("well-typed"))
}

/// The least `i` with `π^i(h a) = π^i(h b)` unprovable.
pub fn differing_component(a: &Term, b: &Term, h: &IsoWitness) -> Result<usize, ProductError> {
    differing_component_with(a, b, h, &Normalizer::default())
}

pub fn differing_component_with(a: &Term, b: &Term, h: &IsoWitness, norm: &Normalizer) -> Result<usize, ProductError> {
    if a.ty() != b.ty() || a.ty() != h.source() {
        return Err(ProductError::IllTyped("terms and isomorphism disagree on the type".into()));
    }
    let n = component_count(h.target());
    let ha = Term::app(h.forward.clone(), a.clone())?;
    let hb = Term::app(h.forward.clone(), b.clone())?;
    if !matches!(h.target().kind(), TyKind::Top) {
        for i in 1..=n {
            if !norm.decide_eq(&project(&ha, n, i)?, &project(&hb, n, i)?)? {
                return Ok(i);
            }
        }
    }
    Err(ProductError::EqualTerms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::products::build_iso;
    use crate::syntax::{parse_type, print_term, read_term, Context};

    fn term(s: &str) -> Term {
        read_term(s, &Context::new()).unwrap()
    }

    #[test]
    fn projectors() {
        let t = parse_type("p*q*r").unwrap();
        assert_eq!(print_term(&projector(3, 3, t).unwrap()), "\\x1:p*q*r. p2 x1");
        assert_eq!(print_term(&projector(3, 1, t).unwrap()), "\\x1:p*q*r. p1 (p1 x1)");
        assert_eq!(print_term(&projector(1, 1, t).unwrap()), "\\x1:p*q*r. x1");
        assert!(matches!(projector(3, 4, t), Err(ProductError::IndexOutOfRange { .. })));
    }

    #[test]
    fn splitting() {
        assert_eq!(split(&term("k")).unwrap(), Split::Unit);
        let id = term("\\x:p. x");
        assert_eq!(split(&id).unwrap(), Split::Components(vec![id.clone()]));
        let pair = term("<\\x:p. x, \\y:p. y>");
        assert_eq!(split(&pair).unwrap(), Split::Components(vec![id.clone(), id]));
    }

    #[test]
    fn swap_differs_first() {
        let a = term("\\x:p*p. <p1 x, p2 x>");
        let b = term("\\x:p*p. <p2 x, p1 x>");
        let h = build_iso(a.ty()).unwrap();
        assert_eq!(differing_component(&a, &b, &h).unwrap(), 1);
        assert!(matches!(differing_component(&a, &a, &h), Err(ProductError::EqualTerms)));
    }
}
