//! Reduction of types to product normal form.

use std::fmt;

use num_bigint::BigUint;

use super::measure::{measure, Measure};
use crate::syntax::{Ty, TyKind};

/// The seven type reductions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `A → (B × C)` to `(A → B) × (A → C)`.
    CurryCod,
    /// `(A × B) → C` to `A → (B → C)`.
    CurryDom,
    /// `A × (B × C)` to `(A × B) × C`.
    Assoc,
    /// `A → T` to `T`.
    ArrT,
    /// `T → B` to `B`.
    TArr,
    /// `A × T` to `A`.
    ProdT,
    /// `T × A` to `A`.
    TProd,
}

impl Rule {
    pub const ALL: [Rule; 7] =
        [Rule::CurryCod, Rule::CurryDom, Rule::Assoc, Rule::ArrT, Rule::TArr, Rule::ProdT, Rule::TProd];

    pub fn tag(self) -> &'static str {
        match self {
            Rule::CurryCod => "curryCod",
            Rule::CurryDom => "curryDom",
            Rule::Assoc => "assoc",
            Rule::ArrT => "arrT",
            Rule::TArr => "Tarr",
            Rule::ProdT => "prodT",
            Rule::TProd => "Tprod",
        }
    }

    pub fn from_tag(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.tag() == s)
    }

    /// The contractum, when `ty` is a redex of this rule.
    pub fn contract(self, ty: Ty) -> Option<Ty> {
        let top = |t: Ty| matches!(t.kind(), TyKind::Top);
        match (self, ty.kind()) {
            (Rule::CurryCod, TyKind::Arrow(a, b)) => {
                let (b1, b2) = b.as_prod()?;
                Some(Ty::prod(Ty::arrow(a, b1), Ty::arrow(a, b2)))
            }
            (Rule::CurryDom, TyKind::Arrow(a, b)) => {
                let (a1, a2) = a.as_prod()?;
                Some(Ty::arrow(a1, Ty::arrow(a2, b)))
            }
            (Rule::Assoc, TyKind::Prod(a, bc)) => {
                let (b, c) = bc.as_prod()?;
                Some(Ty::prod(Ty::prod(a, b), c))
            }
            (Rule::ArrT, TyKind::Arrow(_, b)) if top(b) => Some(Ty::top()),
            (Rule::TArr, TyKind::Arrow(a, b)) if top(a) => Some(b),
            (Rule::ProdT, TyKind::Prod(a, b)) if top(b) => Some(a),
            (Rule::TProd, TyKind::Prod(a, b)) if top(a) => Some(b),
            _ => None,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// The first rule, in table order, whose left-hand side matches `ty` at its root.
pub fn redex_rule(ty: Ty) -> Option<(Rule, Ty)> {
    Rule::ALL.into_iter().find_map(|r| r.contract(ty).map(|t| (r, t)))
}

/// A step into a type: domain/codomain of an arrow, left/right of a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    Dom,
    Cod,
    Left,
    Right,
}

impl Dir {
    pub fn letter(self) -> char {
        match self {
            Dir::Dom => 'd',
            Dir::Cod => 'c',
            Dir::Left => 'l',
            Dir::Right => 'r',
        }
    }

    pub fn from_letter(c: char) -> Option<Dir> {
        Some(match c {
            'd' => Dir::Dom,
            'c' => Dir::Cod,
            'l' => Dir::Left,
            'r' => Dir::Right,
            _ => return None,
        })
    }
}

/// Path from the root to a subtype; empty for the root.
pub type Position = Vec<Dir>;

pub fn position_string(p: &[Dir]) -> String {
    if p.is_empty() {
        "ε".into()
    } else {
        p.iter().map(|d| d.letter()).collect()
    }
}

pub fn parse_position(s: &str) -> Option<Position> {
    if s == "ε" {
        return Some(Vec::new());
    }
    s.chars().map(Dir::from_letter).collect()
}

pub fn subtype_at(ty: Ty, pos: &[Dir]) -> Option<Ty> {
    pos.iter().try_fold(ty, |t, d| match (d, t.kind()) {
        (Dir::Dom, TyKind::Arrow(a, _)) | (Dir::Left, TyKind::Prod(a, _)) => Some(a),
        (Dir::Cod, TyKind::Arrow(_, b)) | (Dir::Right, TyKind::Prod(_, b)) => Some(b),
        _ => None,
    })
}

pub fn replace_at(ty: Ty, pos: &[Dir], new: Ty) -> Option<Ty> {
    let Some((d, rest)) = pos.split_first() else {
        return Some(new);
    };
    match (d, ty.kind()) {
        (Dir::Dom, TyKind::Arrow(a, b)) => Some(Ty::arrow(replace_at(a, rest, new)?, b)),
        (Dir::Cod, TyKind::Arrow(a, b)) => Some(Ty::arrow(a, replace_at(b, rest, new)?)),
        (Dir::Left, TyKind::Prod(a, b)) => Some(Ty::prod(replace_at(a, rest, new)?, b)),
        (Dir::Right, TyKind::Prod(a, b)) => Some(Ty::prod(a, replace_at(b, rest, new)?)),
        _ => None,
    }
}

/// Order in which redexes are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RedexOrder {
    LeftmostInnermost,
    LeftmostOutermost,
}

fn find_redex(ty: Ty, order: RedexOrder, pos: &mut Position) -> bool {
    let here = redex_rule(ty).is_some();
    if here && order == RedexOrder::LeftmostOutermost {
        return true;
    }
    let kids = match ty.kind() {
        TyKind::Arrow(a, b) => [(Dir::Dom, a), (Dir::Cod, b)],
        TyKind::Prod(a, b) => [(Dir::Left, a), (Dir::Right, b)],
        _ => return here,
    };
    for (d, k) in kids {
        pos.push(d);
        if find_redex(k, order, pos) {
            return true;
        }
        pos.pop();
    }
    here
}

/// Position of the next redex under `order`.
pub fn next_redex(ty: Ty, order: RedexOrder) -> Option<Position> {
    let mut pos = Vec::new();
    find_redex(ty, order, &mut pos).then_some(pos)
}

pub fn is_product_normal(ty: Ty) -> bool {
    next_redex(ty, RedexOrder::LeftmostOutermost).is_none()
}

/// How a step's decrease of the measure was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecreaseTier {
    /// Both global measures are exact.
    Global,
    /// The redex and contractum measures are exact; contexts are strictly monotone.
    Local,
    /// The rule's inequality reduces to sub-measures being at least 2.
    Algebraic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub position: Position,
    pub rule: Rule,
    pub before: Measure,
    pub after: Measure,
    pub tier: DecreaseTier,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeNfTrace {
    pub input: Ty,
    pub steps: Vec<TraceStep>,
    pub output: Ty,
    pub weight: u32,
}

/// Reduces `ty` to product normal form leftmost-innermost, measuring with atom weight 2.
pub fn type_nf(ty: Ty) -> TypeNfTrace {
    type_nf_with(ty, RedexOrder::LeftmostInnermost, 2)
}

pub fn type_nf_with(ty: Ty, order: RedexOrder, weight: u32) -> TypeNfTrace {
    let mut cur = ty;
    let mut steps = Vec::new();
    while let Some(pos) = next_redex(cur, order) {
        let redex = subtype_at(cur, &pos).expect("position found in type");
        let (rule, contractum) = redex_rule(redex).expect("redex at position");
        let next = replace_at(cur, &pos, contractum).expect("position found in type");
        let tier = decrease(cur, next, redex, contractum, rule, weight)
            .unwrap_or_else(|| panic!("{rule} does not decrease the measure of {}", cur.short()));
        steps.push(TraceStep { position: pos, rule, before: measure(cur, weight), after: measure(next, weight), tier });
        cur = next;
    }
    TypeNfTrace { input: ty, steps, output: cur, weight }
}

/// The normal form only.
pub fn product_normal_form(ty: Ty) -> Ty {
    let mut cur = ty;
    while let Some(pos) = next_redex(cur, RedexOrder::LeftmostInnermost) {
        let (_, c) = redex_rule(subtype_at(cur, &pos).unwrap()).unwrap();
        cur = replace_at(cur, &pos, c).unwrap();
    }
    cur
}

/// Checks that a step strictly decreases the measure, returning how.
pub fn decrease(before: Ty, after: Ty, redex: Ty, contractum: Ty, rule: Rule, weight: u32) -> Option<DecreaseTier> {
    if let (Measure::Exact(x), Measure::Exact(y)) = (measure(before, weight), measure(after, weight)) {
        return (y < x).then_some(DecreaseTier::Global);
    }
    if let (Measure::Exact(x), Measure::Exact(y)) = (measure(redex, weight), measure(contractum, weight)) {
        return (y < x).then_some(DecreaseTier::Local);
    }
    algebraic(redex, rule, weight).then_some(DecreaseTier::Algebraic)
}

/// Lower bound for a measure: exact when known, otherwise 2.
fn lower(ty: Ty, weight: u32) -> BigUint {
    match measure(ty, weight) {
        Measure::Exact(n) => n,
        Measure::BeyondCap => BigUint::from(2u32),
    }
}

/// Each rule's inequality after cancelling common positive factors:
/// curryCod `(b+1)^a > b^a + 1` iff `a ≥ 2`; curryDom `b^{(a+1)c} > b^{ac}` iff `c ≥ 1, b ≥ 2`;
/// assoc `(a+1)(b+1) > (a+1)b + 1` iff `a ≥ 1`; `t^a > t`, `b^t > b`, `(a+1)t > a`, `(t+1)a > a`
/// need the bases at least 2 and the exponents at least 2.
fn algebraic(redex: Ty, rule: Rule, weight: u32) -> bool {
    let two = BigUint::from(2u32);
    let one = BigUint::from(1u32);
    let sub = |t: Ty| lower(t, weight);
    match (rule, redex.kind()) {
        (Rule::CurryCod, TyKind::Arrow(a, _)) => sub(a) >= two,
        (Rule::CurryDom, TyKind::Arrow(a, b)) => {
            let (_, a2) = a.as_prod().expect("product domain");
            sub(a2) >= one && sub(b) >= two
        }
        (Rule::Assoc, TyKind::Prod(a, _)) => sub(a) >= one,
        (Rule::ArrT, TyKind::Arrow(a, b)) => sub(a) >= two && sub(b) >= two,
        (Rule::TArr, TyKind::Arrow(a, b)) => sub(a) >= two && sub(b) >= two,
        (Rule::ProdT, TyKind::Prod(_, t)) => sub(t) >= two,
        (Rule::TProd, TyKind::Prod(_, a)) => sub(a) >= one,
        _ => false,
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
    fn table_rows() {
        assert_eq!(type_nf(ty("p*p->q")).output, ty("p->p->q"));
        assert_eq!(type_nf(ty("p->T")).output, Ty::top());
        assert_eq!(type_nf(ty("p->q*T")).output, ty("p->q"));
        assert_eq!(type_nf(ty("T->p")).output, ty("p"));
        assert_eq!(type_nf(ty("p*(q*r)")).output, ty("p*q*r"));
        assert_eq!(type_nf(ty("T*p")).output, ty("p"));
        assert_eq!(type_nf(ty("p->q*r")).output, ty("(p->q)*(p->r)"));
    }

    #[test]
    fn trace_records_positions() {
        let t = type_nf(ty("p->q*T"));
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].rule, Rule::ProdT);
        assert_eq!(position_string(&t.steps[0].position), "c");
        let outer = type_nf_with(ty("p->q*T"), RedexOrder::LeftmostOutermost, 2);
        assert_eq!(
            outer.steps.iter().map(|s| s.rule).collect::<Vec<_>>(),
            vec![Rule::CurryCod, Rule::ArrT, Rule::ProdT]
        );
        assert_eq!(outer.output, t.output);
    }

    #[test]
    fn positions_round_trip() {
        let p = vec![Dir::Dom, Dir::Right, Dir::Cod];
        assert_eq!(parse_position(&position_string(&p)), Some(p));
        assert_eq!(parse_position("ε"), Some(vec![]));
    }
}
