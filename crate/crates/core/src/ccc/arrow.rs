//! Arrow terms of the free cartesian closed category, their types, syntax and type substitution.

use std::collections::HashMap;
use std::fmt;

use super::CccError;
use crate::syntax::{
    parse_type_tokens, AliasSink, Atom, Lexer, NoAlias, ParseError, Tok, Ty, TyKind, TypeAliases, TypeSubst,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArrowTerm {
    /// `1_A : A ⊢ A`.
    Id(Ty),
    /// `p¹_{A,B} : A×B ⊢ A`.
    Proj1(Ty, Ty),
    /// `p²_{A,B} : A×B ⊢ B`.
    Proj2(Ty, Ty),
    /// `ε_{A,B} : (A→B)×A ⊢ B`.
    Eval(Ty, Ty),
    /// `k_A : A ⊢ T`.
    Bang(Ty),
    /// `g ∘ f`, stored as `Compose(g, f)`.
    Compose(Box<ArrowTerm>, Box<ArrowTerm>),
    Pairing(Box<ArrowTerm>, Box<ArrowTerm>),
    /// `Γ_{C,A} f` for `f : C×A ⊢ B`.
    Curry(Ty, Ty, Box<ArrowTerm>),
}

impl ArrowTerm {
    pub fn compose(g: ArrowTerm, f: ArrowTerm) -> ArrowTerm {
        ArrowTerm::Compose(Box::new(g), Box::new(f))
    }

    pub fn pairing(f: ArrowTerm, g: ArrowTerm) -> ArrowTerm {
        ArrowTerm::Pairing(Box::new(f), Box::new(g))
    }

    pub fn curry(c: Ty, a: Ty, f: ArrowTerm) -> ArrowTerm {
        ArrowTerm::Curry(c, a, Box::new(f))
    }

    /// Source read off the syntax, without checking well-formedness.
    pub fn source(&self) -> Ty {
        match self {
            ArrowTerm::Id(a) | ArrowTerm::Bang(a) => *a,
            ArrowTerm::Proj1(a, b) | ArrowTerm::Proj2(a, b) => Ty::prod(*a, *b),
            ArrowTerm::Eval(a, b) => Ty::prod(Ty::arrow(*a, *b), *a),
            ArrowTerm::Compose(_, f) | ArrowTerm::Pairing(f, _) => f.source(),
            ArrowTerm::Curry(c, _, _) => *c,
        }
    }

    /// Target read off the syntax, without checking well-formedness.
    pub fn target(&self) -> Ty {
        match self {
            ArrowTerm::Id(a) | ArrowTerm::Proj1(a, _) => *a,
            ArrowTerm::Proj2(_, b) | ArrowTerm::Eval(_, b) => *b,
            ArrowTerm::Bang(_) => Ty::top(),
            ArrowTerm::Compose(g, _) => g.target(),
            ArrowTerm::Pairing(f, g) => Ty::prod(f.target(), g.target()),
            ArrowTerm::Curry(_, a, f) => Ty::arrow(*a, f.target()),
        }
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            ArrowTerm::Compose(g, f) | ArrowTerm::Pairing(g, f) => 1 + g.size() + f.size(),
            ArrowTerm::Curry(_, _, f) => 1 + f.size(),
            _ => 1,
        }
    }

    /// Rewrites every type annotation under `sub`.
    pub fn substitute(&self, sub: &TypeSubst) -> ArrowTerm {
        let s = |t: &Ty| sub.apply(*t);
        match self {
            ArrowTerm::Id(a) => ArrowTerm::Id(s(a)),
            ArrowTerm::Proj1(a, b) => ArrowTerm::Proj1(s(a), s(b)),
            ArrowTerm::Proj2(a, b) => ArrowTerm::Proj2(s(a), s(b)),
            ArrowTerm::Eval(a, b) => ArrowTerm::Eval(s(a), s(b)),
            ArrowTerm::Bang(a) => ArrowTerm::Bang(s(a)),
            ArrowTerm::Compose(g, f) => ArrowTerm::compose(g.substitute(sub), f.substitute(sub)),
            ArrowTerm::Pairing(f, g) => ArrowTerm::pairing(f.substitute(sub), g.substitute(sub)),
            ArrowTerm::Curry(c, a, f) => ArrowTerm::curry(s(c), s(a), f.substitute(sub)),
        }
    }
}

/// `A ⊢ B` for a well-formed arrow term.
pub fn arrow_type_of(f: &ArrowTerm) -> Result<(Ty, Ty), CccError> {
    stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || arrow_type_inner(f))
}

fn arrow_type_inner(f: &ArrowTerm) -> Result<(Ty, Ty), CccError> {
    match f {
        ArrowTerm::Compose(g, h) => {
            let (a, b) = arrow_type_of(h)?;
            let (b2, c) = arrow_type_of(g)?;
            if b != b2 {
                return Err(CccError::IllFormed(format!(
                    "cannot compose: target {} differs from source {}",
                    b.short(),
                    b2.short()
                )));
            }
            Ok((a, c))
        }
        ArrowTerm::Pairing(l, r) => {
            let (c, a) = arrow_type_of(l)?;
            let (c2, b) = arrow_type_of(r)?;
            if c != c2 {
                return Err(CccError::IllFormed(format!(
                    "cannot pair arrows with sources {} and {}",
                    c.short(),
                    c2.short()
                )));
            }
            Ok((c, Ty::prod(a, b)))
        }
        ArrowTerm::Curry(c, a, h) => {
            let (s, b) = arrow_type_of(h)?;
            if s != Ty::prod(*c, *a) {
                return Err(CccError::IllFormed(format!(
                    "curry[{},{}] needs source {}, found {}",
                    c.short(),
                    a.short(),
                    Ty::prod(*c, *a).short(),
                    s.short()
                )));
            }
            Ok((*c, Ty::arrow(*a, b)))
        }
        _ => Ok((f.source(), f.target())),
    }
}

fn ty_match(a: Ty, b: Ty, map: &mut HashMap<Atom, Ty>) -> bool {
    match (a.kind(), b.kind()) {
        (TyKind::Atom(x), _) => *map.entry(x).or_insert(b) == b,
        (TyKind::Top, TyKind::Top) => true,
        (TyKind::Arrow(a1, a2), TyKind::Arrow(b1, b2)) | (TyKind::Prod(a1, a2), TyKind::Prod(b1, b2)) => {
            ty_match(a1, b1, map) && ty_match(a2, b2, map)
        }
        _ => false,
    }
}

/// Extends `map` so that it sends `general` to `instance`, if possible.
pub fn match_instance(general: &ArrowTerm, instance: &ArrowTerm, map: &mut HashMap<Atom, Ty>) -> bool {
    use ArrowTerm::*;
    match (general, instance) {
        (Id(a), Id(b)) | (Bang(a), Bang(b)) => ty_match(*a, *b, map),
        (Proj1(a1, a2), Proj1(b1, b2)) | (Proj2(a1, a2), Proj2(b1, b2)) | (Eval(a1, a2), Eval(b1, b2)) => {
            ty_match(*a1, *b1, map) && ty_match(*a2, *b2, map)
        }
        (Compose(g1, f1), Compose(g2, f2)) | (Pairing(g1, f1), Pairing(g2, f2)) => {
            match_instance(g1, g2, map) && match_instance(f1, f2, map)
        }
        (Curry(c1, a1, f1), Curry(c2, a2, f2)) => {
            ty_match(*c1, *c2, map) && ty_match(*a1, *a2, map) && match_instance(f1, f2, map)
        }
        _ => false,
    }
}

pub fn parse_arrow(text: &str) -> Result<ArrowTerm, ParseError> {
    parse_arrow_with(text, &TypeAliases::default())
}

/// Parses `id[A]`, `p1[A,B]`, `p2[A,B]`, `eval[A,B]`, `bang[A]`, `g . f`, `<f, g>`, `curry[C,A](f)`.
pub fn parse_arrow_with(text: &str, aliases: &TypeAliases) -> Result<ArrowTerm, ParseError> {
    let mut lx = Lexer::new(text)?;
    let f = compose(&mut lx, aliases)?;
    lx.finish()?;
    Ok(f)
}

fn compose(lx: &mut Lexer, al: &TypeAliases) -> Result<ArrowTerm, ParseError> {
    let g = atom(lx, al)?;
    if *lx.peek() == Tok::Dot {
        lx.next();
        let f = compose(lx, al)?;
        return Ok(ArrowTerm::compose(g, f));
    }
    Ok(g)
}

fn types(lx: &mut Lexer, al: &TypeAliases, n: usize) -> Result<Vec<Ty>, ParseError> {
    lx.expect(Tok::LBracket, "'['")?;
    let mut out = vec![parse_type_tokens(lx, al)?];
    while out.len() < n {
        lx.expect(Tok::Comma, "','")?;
        out.push(parse_type_tokens(lx, al)?);
    }
    lx.expect(Tok::RBracket, "']'")?;
    Ok(out)
}

fn atom(lx: &mut Lexer, al: &TypeAliases) -> Result<ArrowTerm, ParseError> {
    match lx.peek().clone() {
        Tok::LParen => {
            lx.next();
            let f = compose(lx, al)?;
            lx.expect(Tok::RParen, "')'")?;
            Ok(f)
        }
        Tok::LAngle => {
            lx.next();
            let f = compose(lx, al)?;
            lx.expect(Tok::Comma, "','")?;
            let g = compose(lx, al)?;
            lx.expect(Tok::RAngle, "'>'")?;
            Ok(ArrowTerm::pairing(f, g))
        }
        Tok::Ident(name) => {
            lx.next();
            match name.as_str() {
                "id" => Ok(ArrowTerm::Id(types(lx, al, 1)?[0])),
                "bang" => Ok(ArrowTerm::Bang(types(lx, al, 1)?[0])),
                "p1" | "p2" | "eval" => {
                    let t = types(lx, al, 2)?;
                    Ok(match name.as_str() {
                        "p1" => ArrowTerm::Proj1(t[0], t[1]),
                        "p2" => ArrowTerm::Proj2(t[0], t[1]),
                        _ => ArrowTerm::Eval(t[0], t[1]),
                    })
                }
                "curry" => {
                    let t = types(lx, al, 2)?;
                    lx.expect(Tok::LParen, "'('")?;
                    let f = compose(lx, al)?;
                    lx.expect(Tok::RParen, "')'")?;
                    Ok(ArrowTerm::curry(t[0], t[1], f))
                }
                other => lx.error(format!("unknown arrow constant {other}")),
            }
        }
        t => lx.error(format!("expected an arrow term, found {t:?}")),
    }
}

pub fn print_arrow(f: &ArrowTerm) -> String {
    print_arrow_with(f, &mut NoAlias)
}

pub fn print_arrow_with(f: &ArrowTerm, sink: &mut dyn AliasSink) -> String {
    let mut out = String::new();
    write_arrow(&mut out, f, false, sink);
    out
}

fn write_arrow(out: &mut String, f: &ArrowTerm, tight: bool, sink: &mut dyn AliasSink) {
    let ty = |out: &mut String, t: &Ty, sink: &mut dyn AliasSink| crate::syntax::write_type(out, *t, sink);
    match f {
        ArrowTerm::Id(a) | ArrowTerm::Bang(a) => {
            out.push_str(if matches!(f, ArrowTerm::Id(_)) { "id[" } else { "bang[" });
            ty(out, a, sink);
            out.push(']');
        }
        ArrowTerm::Proj1(a, b) | ArrowTerm::Proj2(a, b) | ArrowTerm::Eval(a, b) => {
            out.push_str(match f {
                ArrowTerm::Proj1(..) => "p1[",
                ArrowTerm::Proj2(..) => "p2[",
                _ => "eval[",
            });
            ty(out, a, sink);
            out.push_str(", ");
            ty(out, b, sink);
            out.push(']');
        }
        ArrowTerm::Compose(g, h) => {
            if tight {
                out.push('(');
            }
            write_arrow(out, g, true, sink);
            out.push_str(" . ");
            write_arrow(out, h, false, sink);
            if tight {
                out.push(')');
            }
        }
        ArrowTerm::Pairing(l, r) => {
            out.push('<');
            write_arrow(out, l, false, sink);
            out.push_str(", ");
            write_arrow(out, r, false, sink);
            out.push('>');
        }
        ArrowTerm::Curry(c, a, h) => {
            out.push_str("curry[");
            ty(out, c, sink);
            out.push_str(", ");
            ty(out, a, sink);
            out.push_str("](");
            write_arrow(out, h, false, sink);
            out.push(')');
        }
    }
}

impl fmt::Display for ArrowTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_arrow(self))
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
    fn arrow_types() {
        assert_eq!(arrow_type_of(&ArrowTerm::Id(Ty::p())).unwrap(), (Ty::p(), Ty::p()));
        let q = Ty::atom("q");
        assert_eq!(arrow_type_of(&ArrowTerm::Eval(Ty::p(), q)).unwrap(), (ty("(p->q)*p"), q));
        let bad = ArrowTerm::compose(ArrowTerm::Proj1(Ty::p(), q), ArrowTerm::Id(Ty::p()));
        assert!(matches!(arrow_type_of(&bad), Err(CccError::IllFormed(_))));
        let c = parse_arrow("curry[p, q](p1[p, q])").unwrap();
        assert_eq!(arrow_type_of(&c).unwrap(), (Ty::p(), ty("q->p")));
        assert!(arrow_type_of(&parse_arrow("curry[q, q](p1[p, q])").unwrap()).is_err());
    }

    #[test]
    fn syntax_round_trip() {
        for s in [
            "id[p]",
            "p1[p, q] . <id[p], bang[p]>",
            "(p2[p, p] . id[p*p]) . id[p*p]",
            "eval[p, q] . <curry[p*q, p](p1[p*q, p] . p1[p*q*p, p]) . p1[p*q, p], p2[p*q, p]>",
            "bang[T->p*q]",
        ] {
            let f = parse_arrow(s).unwrap();
            assert_eq!(print_arrow(&f), s);
        }
        assert!(parse_arrow("foo[p]").is_err());
        assert!(parse_arrow("p1[p]").is_err());
    }

    #[test]
    fn instances() {
        let f = parse_arrow("p1[p, q] . <id[p], bang[p]>").unwrap();
        let sub = TypeSubst::uniform(ty("p->p"));
        let g = f.substitute(&sub);
        let mut map = HashMap::new();
        assert!(match_instance(&f, &g, &mut map));
        assert!(!match_instance(&g, &f, &mut HashMap::new()));
    }
}
