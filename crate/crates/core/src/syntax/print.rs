//! Printing of types and terms in the surface syntax.

use std::collections::{HashMap, HashSet};

use super::term::{Term, TermKind};
use super::types::{Ty, TyKind};

/// Decides whether a type node is printed as an `@alias` reference.
pub trait AliasSink {
    fn alias(&mut self, ty: Ty) -> Option<String>;
}

pub struct NoAlias;

impl AliasSink for NoAlias {
    fn alias(&mut self, _: Ty) -> Option<String> {
        None
    }
}

/// A table of named type abbreviations. When printing, every type whose tree is larger than
/// the threshold is defined once and referred to as `@name`; definitions may refer to earlier ones.
#[derive(Clone, Default, Debug)]
pub struct TypeAliases {
    threshold: u64,
    defs: Vec<(String, String)>,
    by_ty: HashMap<Ty, String>,
    by_name: HashMap<String, Ty>,
}

impl TypeAliases {
    pub fn new(threshold: u64) -> TypeAliases {
        TypeAliases { threshold, ..Default::default() }
    }

    /// Rebuilds a table from definitions in order; each may use the previous ones.
    pub fn from_defs(defs: &[(String, String)]) -> Result<TypeAliases, super::ParseError> {
        let mut t = TypeAliases::new(u64::MAX);
        for (name, text) in defs {
            let ty = super::parse::parse_type_with(text, &t)?;
            t.defs.push((name.clone(), text.clone()));
            t.by_ty.entry(ty).or_insert_with(|| name.clone());
            t.by_name.insert(name.clone(), ty);
        }
        Ok(t)
    }

    pub fn defs(&self) -> &[(String, String)] {
        &self.defs
    }

    pub fn lookup(&self, name: &str) -> Option<Ty> {
        self.by_name.get(name).copied()
    }

    pub fn print_type(&mut self, ty: Ty) -> String {
        let mut s = String::new();
        write_type(&mut s, ty, self);
        s
    }

    pub fn print_term(&mut self, t: &Term) -> String {
        print_term_with(t, self)
    }
}

impl AliasSink for TypeAliases {
    fn alias(&mut self, ty: Ty) -> Option<String> {
        if ty.tree_size() <= self.threshold {
            return None;
        }
        if let Some(n) = self.by_ty.get(&ty) {
            return Some(format!("@{n}"));
        }
        let mut body = String::new();
        write_prec(&mut body, ty, 0, self, false);
        let name = format!("t{}", self.defs.len());
        self.defs.push((name.clone(), body));
        self.by_ty.insert(ty, name.clone());
        self.by_name.insert(name.clone(), ty);
        Some(format!("@{name}"))
    }
}

pub(crate) fn write_type(out: &mut String, ty: Ty, sink: &mut dyn AliasSink) {
    write_prec(out, ty, 0, sink, true);
}

fn write_prec(out: &mut String, ty: Ty, prec: u8, sink: &mut dyn AliasSink, check_alias: bool) {
    if check_alias {
        if let Some(a) = sink.alias(ty) {
            out.push_str(&a);
            return;
        }
    }
    match ty.kind() {
        TyKind::Atom(a) => out.push_str(&a.name()),
        TyKind::Top => out.push('T'),
        TyKind::Arrow(a, b) => {
            let paren = prec > 0;
            if paren {
                out.push('(');
            }
            write_prec(out, a, 1, sink, true);
            out.push_str("->");
            write_prec(out, b, 0, sink, true);
            if paren {
                out.push(')');
            }
        }
        TyKind::Prod(a, b) => {
            let paren = prec > 1;
            if paren {
                out.push('(');
            }
            write_prec(out, a, 1, sink, true);
            out.push('*');
            write_prec(out, b, 2, sink, true);
            if paren {
                out.push(')');
            }
        }
    }
}

pub fn print_type(ty: Ty) -> String {
    let mut s = String::new();
    write_type(&mut s, ty, &mut NoAlias);
    s
}

pub fn print_term(t: &Term) -> String {
    print_term_with(t, &mut NoAlias)
}

pub fn print_term_with(t: &Term, sink: &mut dyn AliasSink) -> String {
    let free: HashSet<String> = t.free_vars().into_iter().map(|(n, _)| n.to_string()).collect();
    let mut p = Printer { out: String::new(), names: Vec::new(), counters: Vec::new(), free, sink };
    p.term(t, 0);
    p.out
}

struct Printer<'a> {
    out: String,
    names: Vec<String>,
    counters: Vec<usize>,
    free: HashSet<String>,
    sink: &'a mut dyn AliasSink,
}

impl Printer<'_> {
    fn fresh(&mut self) -> (String, usize) {
        let mut k = self.counters.last().copied().unwrap_or(0) + 1;
        loop {
            let n = format!("x{k}");
            if !self.free.contains(&n) {
                return (n, k);
            }
            k += 1;
        }
    }

    fn term(&mut self, t: &Term, prec: u8) {
        match t.kind() {
            TermKind::Bound(i) => {
                let n = self
                    .names
                    .len()
                    .checked_sub(1 + *i as usize)
                    .map(|j| self.names[j].clone())
                    .unwrap_or_else(|| format!("?{i}"));
                self.out.push_str(&n);
            }
            TermKind::Free(n) => self.out.push_str(n),
            TermKind::Unit => self.out.push('k'),
            TermKind::Lam(d, b) => {
                if prec > 0 {
                    self.out.push('(');
                }
                let (name, k) = self.fresh();
                self.out.push('\\');
                self.out.push_str(&name);
                self.out.push(':');
                write_type(&mut self.out, *d, self.sink);
                self.out.push_str(". ");
                self.names.push(name);
                self.counters.push(k);
                self.term(b, 0);
                self.names.pop();
                self.counters.pop();
                if prec > 0 {
                    self.out.push(')');
                }
            }
            TermKind::App(f, a) => {
                if prec > 1 {
                    self.out.push('(');
                }
                self.term(f, 1);
                self.out.push(' ');
                self.term(a, 2);
                if prec > 1 {
                    self.out.push(')');
                }
            }
            TermKind::Fst(a) | TermKind::Snd(a) => {
                if prec > 1 {
                    self.out.push('(');
                }
                self.out.push_str(if matches!(t.kind(), TermKind::Fst(_)) { "p1 " } else { "p2 " });
                self.term(a, 2);
                if prec > 1 {
                    self.out.push(')');
                }
            }
            TermKind::Pair(a, b) => {
                self.out.push('<');
                self.term(a, 0);
                self.out.push_str(", ");
                self.term(b, 0);
                self.out.push('>');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::types::{numeral_type, tower_type};

    #[test]
    fn type_precedence() {
        let p = Ty::p();
        let q = Ty::atom("q");
        assert_eq!(print_type(Ty::arrow(p, Ty::arrow(p, q))), "p->p->q");
        assert_eq!(print_type(Ty::arrow(Ty::arrow(p, p), q)), "(p->p)->q");
        assert_eq!(print_type(Ty::arrow(Ty::prod(p, p), q)), "p*p->q");
        assert_eq!(print_type(Ty::prod(p, Ty::prod(p, q))), "p*(p*q)");
        assert_eq!(print_type(Ty::prod(Ty::prod(p, p), Ty::top())), "p*p*T");
        assert_eq!(print_type(Ty::prod(Ty::arrow(p, p), q)), "(p->p)*q");
    }

    #[test]
    fn aliases_share_large_types() {
        let mut al = TypeAliases::new(8);
        let s = al.print_type(numeral_type(20));
        assert!(s.starts_with('@'));
        assert!(al.defs().len() <= 22);
        let back = TypeAliases::from_defs(al.defs()).unwrap();
        assert_eq!(back.lookup(&s[1..]), Some(tower_type(22)));
    }
}
