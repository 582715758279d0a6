//! Church numerals `[n]_i : N_i` and the arithmetic and control combinators over them.

use std::fmt;

use crate::syntax::{numeral_type, tower_type, Term, Ty};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumeralError {
    #[error("side condition violated for {kind}: {reason}")]
    SideConditionViolated { kind: CombinatorKind, reason: String },
    #[error("level too small: need at least {required}, got {given}")]
    LevelTooSmall { required: usize, given: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    /// `C_i`
    Cond,
    /// `R_i`
    Lower,
    /// `E_i`
    Expo,
    /// `S_i`
    Add,
    /// `M_i`
    Mul,
    /// `Π_i`
    Pair,
    /// `π¹_i`
    Proj1,
    /// `π²_i`
    Proj2,
    /// `T_i`
    AuxT,
    /// `H_i`
    AuxH,
    /// `P_i`
    Pred,
    /// `Z_i`
    Raise,
    /// `D^k_i`
    Check(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CombinatorKind {
    pub tag: Tag,
    pub level: usize,
}

impl CombinatorKind {
    pub fn new(tag: Tag, level: usize) -> CombinatorKind {
        CombinatorKind { tag, level }
    }
}

impl fmt::Display for CombinatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.level;
        match self.tag {
            Tag::Cond => write!(f, "C_{i}"),
            Tag::Lower => write!(f, "R_{i}"),
            Tag::Expo => write!(f, "E_{i}"),
            Tag::Add => write!(f, "S_{i}"),
            Tag::Mul => write!(f, "M_{i}"),
            Tag::Pair => write!(f, "Pi_{i}"),
            Tag::Proj1 => write!(f, "pi1_{i}"),
            Tag::Proj2 => write!(f, "pi2_{i}"),
            Tag::AuxT => write!(f, "T_{i}"),
            Tag::AuxH => write!(f, "H_{i}"),
            Tag::Pred => write!(f, "P_{i}"),
            Tag::Raise => write!(f, "Z_{i}"),
            Tag::Check(k) => write!(f, "D^{k}_{i}"),
        }
    }
}

fn var(name: &str, ty: Ty) -> Term {
    Term::free(name, ty)
}

fn ap(f: &Term, args: &[&Term]) -> Term {
    args.iter().fold(f.clone(), |acc, a| Term::app(acc, (*a).clone()).expect("combinator is well-typed"))
}

fn lam(binders: &[(&str, Ty)], body: Term) -> Term {
    binders.iter().rev().fold(body, |acc, (n, t)| Term::lam(n, *t, acc).expect("combinator is well-typed"))
}

/// `[n]_i = λx:A_{i+1}. λy:A_i. x^n(y)`.
pub fn church(n: u64, i: usize) -> Term {
    let (a1, a0) = (tower_type(i + 1), tower_type(i));
    let x = var("x", a1);
    let mut body = var("y", a0);
    for _ in 0..n {
        body = ap(&x, &[&body]);
    }
    lam(&[("x", a1), ("y", a0)], body)
}

/// Builds the closed combinator named by `kind`, verbatim from its definition.
pub fn combinator(kind: CombinatorKind) -> Result<Term, NumeralError> {
    let i = kind.level;
    let side = |reason: &str| NumeralError::SideConditionViolated { kind, reason: reason.into() };
    let n = numeral_type;
    let a = tower_type;
    Ok(match kind.tag {
        Tag::Cond => {
            let (x, y, z) = (var("x", n(i)), var("y", n(i)), var("z", n(i)));
            let (u, v) = (var("u", a(i + 1)), var("v", a(i)));
            let zuv = ap(&z, &[&u, &v]);
            let yuv = ap(&y, &[&u, &v]);
            let body = ap(&x, &[&lam(&[("w", a(i))], zuv), &yuv]);
            lam(&[("x", n(i)), ("y", n(i)), ("z", n(i)), ("u", a(i + 1)), ("v", a(i))], body)
        }
        Tag::Lower => {
            let (x, y, z) = (var("x", n(i + 1)), var("y", a(i + 1)), var("z", a(i + 1)));
            let (u, v) = (var("u", a(i)), var("v", a(i)));
            let step = lam(&[("z", a(i + 1)), ("u", a(i))], ap(&y, &[&ap(&z, &[&u])]));
            let body = ap(&x, &[&step, &lam(&[("v", a(i))], v)]);
            lam(&[("x", n(i + 1)), ("y", a(i + 1))], body)
        }
        Tag::Expo => {
            let (x, y) = (var("x", n(i + 1)), var("y", n(i + 1)));
            let r = combinator(CombinatorKind::new(Tag::Lower, i))?;
            lam(&[("x", n(i + 1)), ("y", n(i + 1))], ap(&x, &[&ap(&r, &[&y])]))
        }
        Tag::Add | Tag::Mul => {
            let (x, y) = (var("x", n(i)), var("y", n(i)));
            let (z, u) = (var("z", a(i + 1)), var("u", a(i)));
            let body =
                if kind.tag == Tag::Add { ap(&x, &[&z, &ap(&y, &[&z, &u])]) } else { ap(&x, &[&ap(&y, &[&z]), &u]) };
            lam(&[("x", n(i)), ("y", n(i)), ("z", a(i + 1)), ("u", a(i))], body)
        }
        Tag::Pair => {
            let (x, y, z) = (var("x", n(i)), var("y", n(i)), var("z", n(i)));
            let c = combinator(CombinatorKind::new(Tag::Cond, i))?;
            lam(&[("x", n(i)), ("y", n(i)), ("z", n(i))], ap(&c, &[&z, &x, &y]))
        }
        Tag::Proj1 | Tag::Proj2 => {
            let u = var("u", n(i + 1));
            let which = if kind.tag == Tag::Proj1 { 0 } else { 1 };
            lam(&[("u", n(i + 1))], ap(&u, &[&church(which, i)]))
        }
        Tag::AuxT => {
            let x = var("x", n(i + 1));
            let pair = combinator(CombinatorKind::new(Tag::Pair, i))?;
            let add = combinator(CombinatorKind::new(Tag::Add, i))?;
            let pi1 = combinator(CombinatorKind::new(Tag::Proj1, i))?;
            let p1x = ap(&pi1, &[&x]);
            let body = ap(&pair, &[&ap(&add, &[&church(1, i), &p1x]), &p1x]);
            lam(&[("x", n(i + 1))], body)
        }
        Tag::AuxH => {
            let y = var("y", n(i + 3));
            let t = combinator(CombinatorKind::new(Tag::AuxT, i))?;
            let pair = combinator(CombinatorKind::new(Tag::Pair, i))?;
            let start = ap(&pair, &[&church(0, i), &church(0, i)]);
            lam(&[("y", n(i + 3))], ap(&y, &[&t, &start]))
        }
        Tag::Pred => {
            let y = var("y", n(i + 3));
            let h = combinator(CombinatorKind::new(Tag::AuxH, i))?;
            let pi2 = combinator(CombinatorKind::new(Tag::Proj2, i))?;
            lam(&[("y", n(i + 3))], ap(&pi2, &[&ap(&h, &[&y])]))
        }
        Tag::Raise => {
            if i < 1 {
                return Err(side("Z_i needs i >= 1"));
            }
            let j = i - 1;
            let (x, y) = (var("x", n(j)), var("y", n(j)));
            let (z, u) = (var("z", a(j + 1)), var("u", a(j)));
            let inner = lam(&[("v", a(j))], ap(&y, &[&z, &u]));
            let body = ap(&x, &[&inner, &ap(&z, &[&u])]);
            lam(&[("x", n(j)), ("y", n(j)), ("z", a(j + 1)), ("u", a(j))], body)
        }
        Tag::Check(0) => {
            let x = var("x", n(i));
            let c = combinator(CombinatorKind::new(Tag::Cond, i))?;
            lam(&[("x", n(i))], ap(&c, &[&x, &church(0, i), &church(1, i)]))
        }
        Tag::Check(k) => {
            if i < 3 * k {
                return Err(side("D^k_i needs i >= 3k"));
            }
            let x = var("x", n(i));
            let c = combinator(CombinatorKind::new(Tag::Cond, i))?;
            let z = |l: usize| combinator(CombinatorKind::new(Tag::Raise, l));
            let d = combinator(CombinatorKind::new(Tag::Check(k - 1), i - 3))?;
            let pred = combinator(CombinatorKind::new(Tag::Pred, i - 3))?;
            let inner = ap(&d, &[&ap(&pred, &[&x])]);
            let raised = ap(&z(i)?, &[&ap(&z(i - 1)?, &[&ap(&z(i - 2)?, &[&inner])])]);
            lam(&[("x", n(i))], ap(&c, &[&x, &church(1, i), &raised]))
        }
    })
}

/// The two arguments `λxyz. yz` and `λyz. z` that send `[0]_i, [1]_i` to `[0]_{i-2}, [1]_{i-2}`.
pub fn lowering_pair(i: usize) -> Result<(Term, Term), NumeralError> {
    if i < 2 {
        return Err(NumeralError::LevelTooSmall { required: 2, given: i });
    }
    let (ai, a1, a2) = (tower_type(i), tower_type(i - 1), tower_type(i - 2));
    let (y, z) = (var("y", a1), var("z", a2));
    let c1 = lam(&[("x", ai), ("y", a1), ("z", a2)], ap(&y, &[&z]));
    let c2 = lam(&[("y", a1), ("z", a2)], z);
    Ok((c1, c2))
}
