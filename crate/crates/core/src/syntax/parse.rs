//! Lexer and recursive-descent parser for types and terms.

use super::context::Context;
use super::print::TypeAliases;
use super::term::Term;
use super::types::Ty;
use super::{ParseError, ReadError, TypeError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Lambda,
    Ident(String),
    Alias(String),
    Colon,
    Dot,
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    Comma,
    Arrow,
    Star,
    Eof,
}

pub(crate) struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl Lexer {
    pub(crate) fn new(text: &str) -> Result<Lexer, ParseError> {
        let mut toks = Vec::new();
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (at, c) = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let single = match c {
                '\\' | 'λ' => Some(Tok::Lambda),
                ':' => Some(Tok::Colon),
                '.' => Some(Tok::Dot),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '<' => Some(Tok::LAngle),
                '>' => Some(Tok::RAngle),
                '[' => Some(Tok::LBracket),
                ']' => Some(Tok::RBracket),
                ',' => Some(Tok::Comma),
                '*' | '×' => Some(Tok::Star),
                '→' => Some(Tok::Arrow),
                _ => None,
            };
            if let Some(t) = single {
                toks.push((t, at));
                i += 1;
                continue;
            }
            if c == '-' && i + 1 < chars.len() && chars[i + 1].1 == '>' {
                toks.push((Tok::Arrow, at));
                i += 2;
                continue;
            }
            if c == '@' || ident_start(c) {
                let start = if c == '@' { i + 1 } else { i };
                let mut j = start;
                while j < chars.len() && ident_char(chars[j].1) {
                    j += 1;
                }
                if j == start {
                    return Err(ParseError { position: at, message: "expected alias name after '@'".into() });
                }
                let s: String = chars[start..j].iter().map(|&(_, c)| c).collect();
                toks.push((if c == '@' { Tok::Alias(s) } else { Tok::Ident(s) }, at));
                i = j;
                continue;
            }
            return Err(ParseError { position: at, message: format!("unexpected character {c:?}") });
        }
        toks.push((Tok::Eof, text.len()));
        Ok(Lexer { toks, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn position(&self) -> usize {
        self.toks[self.pos].1
    }

    pub(crate) fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.position(), message: message.into() })
    }

    pub(crate) fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {:?}", self.peek()))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            t => self.error(format!("expected identifier, found {t:?}")),
        }
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(format!("unexpected trailing {:?}", self.peek()))
        }
    }
}

pub(crate) fn parse_type_tokens(lx: &mut Lexer, aliases: &TypeAliases) -> Result<Ty, ParseError> {
    let lhs = parse_prod(lx, aliases)?;
    if *lx.peek() == Tok::Arrow {
        lx.next();
        let rhs = parse_type_tokens(lx, aliases)?;
        Ok(Ty::arrow(lhs, rhs))
    } else {
        Ok(lhs)
    }
}

fn parse_prod(lx: &mut Lexer, aliases: &TypeAliases) -> Result<Ty, ParseError> {
    let mut t = parse_type_atom(lx, aliases)?;
    while *lx.peek() == Tok::Star {
        lx.next();
        let r = parse_type_atom(lx, aliases)?;
        t = Ty::prod(t, r);
    }
    Ok(t)
}

fn parse_type_atom(lx: &mut Lexer, aliases: &TypeAliases) -> Result<Ty, ParseError> {
    match lx.peek().clone() {
        Tok::Ident(s) => {
            lx.next();
            Ok(Ty::atom(&s))
        }
        Tok::Alias(s) => match aliases.lookup(&s) {
            Some(t) => {
                lx.next();
                Ok(t)
            }
            None => lx.error(format!("unknown type alias @{s}")),
        },
        Tok::LParen => {
            lx.next();
            let t = parse_type_tokens(lx, aliases)?;
            lx.expect(Tok::RParen, "')'")?;
            Ok(t)
        }
        t => lx.error(format!("expected a type, found {t:?}")),
    }
}

pub fn parse_type(text: &str) -> Result<Ty, ParseError> {
    parse_type_with(text, &TypeAliases::default())
}

pub fn parse_type_with(text: &str, aliases: &TypeAliases) -> Result<Ty, ParseError> {
    let mut lx = Lexer::new(text)?;
    let t = parse_type_tokens(&mut lx, aliases)?;
    lx.finish()?;
    Ok(t)
}

/// Untyped-checked surface syntax with named binders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Surface {
    Var(String),
    Lam(String, Ty, Box<Surface>),
    App(Box<Surface>, Box<Surface>),
    Pair(Box<Surface>, Box<Surface>),
    Fst(Box<Surface>),
    Snd(Box<Surface>),
    Unit,
}

pub fn parse(text: &str) -> Result<Surface, ParseError> {
    parse_with(text, &TypeAliases::default())
}

pub fn parse_with(text: &str, aliases: &TypeAliases) -> Result<Surface, ParseError> {
    let mut lx = Lexer::new(text)?;
    let s = parse_term(&mut lx, aliases)?;
    lx.finish()?;
    Ok(s)
}

fn parse_term(lx: &mut Lexer, al: &TypeAliases) -> Result<Surface, ParseError> {
    if *lx.peek() == Tok::Lambda {
        return parse_lambda(lx, al);
    }
    let mut head = parse_unary(lx, al)?;
    loop {
        match lx.peek() {
            Tok::Lambda => {
                let arg = parse_lambda(lx, al)?;
                return Ok(Surface::App(Box::new(head), Box::new(arg)));
            }
            Tok::Ident(_) | Tok::LParen | Tok::LAngle => {
                let arg = parse_unary(lx, al)?;
                head = Surface::App(Box::new(head), Box::new(arg));
            }
            _ => return Ok(head),
        }
    }
}

fn parse_lambda(lx: &mut Lexer, al: &TypeAliases) -> Result<Surface, ParseError> {
    lx.expect(Tok::Lambda, "'\\'")?;
    let name = lx.ident()?;
    if matches!(name.as_str(), "k" | "p1" | "p2") {
        return lx.error(format!("{name} is reserved"));
    }
    lx.expect(Tok::Colon, "':'")?;
    let ty = parse_type_tokens(lx, al)?;
    lx.expect(Tok::Dot, "'.'")?;
    let body = parse_term(lx, al)?;
    Ok(Surface::Lam(name, ty, Box::new(body)))
}

fn parse_unary(lx: &mut Lexer, al: &TypeAliases) -> Result<Surface, ParseError> {
    match lx.peek().clone() {
        Tok::Ident(s) if s == "p1" || s == "p2" => {
            lx.next();
            let a = parse_unary(lx, al)?;
            Ok(if s == "p1" { Surface::Fst(Box::new(a)) } else { Surface::Snd(Box::new(a)) })
        }
        _ => parse_atom(lx, al),
    }
}

fn parse_atom(lx: &mut Lexer, al: &TypeAliases) -> Result<Surface, ParseError> {
    match lx.peek().clone() {
        Tok::Ident(s) => {
            lx.next();
            Ok(if s == "k" { Surface::Unit } else { Surface::Var(s) })
        }
        Tok::LParen => {
            lx.next();
            let t = parse_term(lx, al)?;
            lx.expect(Tok::RParen, "')'")?;
            Ok(t)
        }
        Tok::LAngle => {
            lx.next();
            let a = parse_term(lx, al)?;
            lx.expect(Tok::Comma, "','")?;
            let b = parse_term(lx, al)?;
            lx.expect(Tok::RAngle, "'>'")?;
            Ok(Surface::Pair(Box::new(a), Box::new(b)))
        }
        t => lx.error(format!("expected a term, found {t:?}")),
    }
}

/// Elaborates surface syntax into a typed term; free names are looked up in `ctx`.
pub fn check(s: &Surface, ctx: &Context) -> Result<Term, TypeError> {
    let mut scope: Vec<(String, Ty)> = Vec::new();
    elaborate(s, ctx, &mut scope)
}

pub fn type_of(s: &Surface, ctx: &Context) -> Result<Ty, TypeError> {
    check(s, ctx).map(|t| t.ty())
}

fn elaborate(s: &Surface, ctx: &Context, scope: &mut Vec<(String, Ty)>) -> Result<Term, TypeError> {
    match s {
        Surface::Var(x) => {
            if let Some(pos) = scope.iter().rposition(|(n, _)| n == x) {
                let idx = (scope.len() - 1 - pos) as u32;
                Ok(Term::bound(idx, scope[pos].1))
            } else if let Some(ty) = ctx.get(x) {
                Ok(Term::free(x, ty))
            } else {
                Err(TypeError::UnboundVariable(x.clone()))
            }
        }
        Surface::Lam(x, ty, body) => {
            scope.push((x.clone(), *ty));
            let b = elaborate(body, ctx, scope);
            scope.pop();
            Ok(Term::lam_raw(*ty, b?))
        }
        Surface::App(f, a) => {
            let f = elaborate(f, ctx, scope)?;
            let a = elaborate(a, ctx, scope)?;
            Term::app(f, a)
        }
        Surface::Pair(a, b) => Ok(Term::pair(elaborate(a, ctx, scope)?, elaborate(b, ctx, scope)?)),
        Surface::Fst(a) => Term::fst(elaborate(a, ctx, scope)?),
        Surface::Snd(a) => Term::snd(elaborate(a, ctx, scope)?),
        Surface::Unit => Ok(Term::unit()),
    }
}

/// Parses and type-checks a term in a context.
pub fn read_term(text: &str, ctx: &Context) -> Result<Term, ReadError> {
    Ok(check(&parse(text)?, ctx)?)
}

pub fn read_term_with(text: &str, ctx: &Context, aliases: &TypeAliases) -> Result<Term, ReadError> {
    Ok(check(&parse_with(text, aliases)?, ctx)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::print::print_term;

    #[test]
    fn identity() {
        let t = read_term("\\x:p. x", &Context::new()).unwrap();
        assert_eq!(t.ty(), parse_type("p->p").unwrap());
        assert_eq!(print_term(&t), "\\x1:p. x1");
    }

    #[test]
    fn nested_arrow_type() {
        let t = read_term("\\x:(p->p)->p. x (\\y:p. x (\\z:p. y))", &Context::new()).unwrap();
        assert_eq!(t.ty(), parse_type("((p->p)->p)->p").unwrap());
        let t2 = read_term("λx:(p→p)→p. x λy:p. x λz:p. y", &Context::new()).unwrap();
        assert_eq!(t, t2);
    }

    #[test]
    fn projections_and_pairs() {
        let ctx = Context::new().with("x", parse_type("p*p").unwrap()).unwrap();
        let t = read_term("<p1 x, p2 x>", &ctx).unwrap();
        assert_eq!(t.ty(), parse_type("p*p").unwrap());
        assert_eq!(print_term(&t), "<p1 x, p2 x>");
        let ctx = ctx.with("f", parse_type("p->p->p").unwrap()).unwrap();
        let u = read_term("f p1 x (p2 x)", &ctx).unwrap();
        assert_eq!(print_term(&u), "f (p1 x) (p2 x)");
    }

    #[test]
    fn errors() {
        assert!(matches!(read_term("\\x:p. y", &Context::new()), Err(ReadError::Type(TypeError::UnboundVariable(_)))));
        assert!(parse("\\x:p. y").is_ok());
        let ctx = Context::new().with("x", Ty::p()).unwrap().with("y", Ty::p()).unwrap();
        assert!(matches!(read_term("x y", &ctx), Err(ReadError::Type(TypeError::IllTyped { .. }))));
        match parse("\\x:p x") {
            Err(ParseError { position, .. }) => assert_eq!(position, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shadowing() {
        let t = read_term("\\x:p. \\x:p->p. x", &Context::new()).unwrap();
        assert_eq!(print_term(&t), "\\x1:p. \\x2:p->p. x2");
    }
}
