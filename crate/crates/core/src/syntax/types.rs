//! Hash-consed simple types over atoms, `T`, `->` and `*`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use once_cell::sync::Lazy;
use parking_lot::RwLock;

/// An interned type. Two `Ty` values are equal iff the types are structurally equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ty(u32);

/// An interned atom name.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Atom(u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TyKind {
    Atom(Atom),
    Top,
    Arrow(Ty, Ty),
    Prod(Ty, Ty),
}

#[derive(Clone, Copy)]
struct Info {
    kind: TyKind,
    trivial: bool,
    pure: bool,
    tree_size: u64,
    depth: u32,
}

struct Interner {
    nodes: Vec<Info>,
    index: HashMap<TyKind, Ty>,
    atoms: Vec<Arc<str>>,
    atom_index: HashMap<Arc<str>, Atom>,
}

static INTERNER: Lazy<RwLock<Interner>> = Lazy::new(|| {
    RwLock::new(Interner { nodes: Vec::new(), index: HashMap::new(), atoms: Vec::new(), atom_index: HashMap::new() })
});

fn info(ty: Ty) -> Info {
    INTERNER.read().nodes[ty.0 as usize]
}

fn intern(kind: TyKind) -> Ty {
    if let Some(&t) = INTERNER.read().index.get(&kind) {
        return t;
    }
    let mut w = INTERNER.write();
    if let Some(&t) = w.index.get(&kind) {
        return t;
    }
    let get = |t: Ty| w.nodes[t.0 as usize];
    let info = match kind {
        TyKind::Atom(_) => Info { kind, trivial: false, pure: true, tree_size: 1, depth: 0 },
        TyKind::Top => Info { kind, trivial: true, pure: false, tree_size: 1, depth: 0 },
        TyKind::Arrow(a, b) => {
            let (ia, ib) = (get(a), get(b));
            Info {
                kind,
                trivial: ib.trivial,
                pure: ia.pure && ib.pure,
                tree_size: ia.tree_size.saturating_add(ib.tree_size).saturating_add(1),
                depth: (ia.depth + 1).max(ib.depth),
            }
        }
        TyKind::Prod(a, b) => {
            let (ia, ib) = (get(a), get(b));
            Info {
                kind,
                trivial: ia.trivial && ib.trivial,
                pure: false,
                tree_size: ia.tree_size.saturating_add(ib.tree_size).saturating_add(1),
                depth: ia.depth.max(ib.depth),
            }
        }
    };
    let t = Ty(u32::try_from(w.nodes.len()).expect("type interner exhausted"));
    w.nodes.push(info);
    w.index.insert(kind, t);
    t
}

impl Atom {
    pub fn new(name: &str) -> Atom {
        if let Some(&a) = INTERNER.read().atom_index.get(name) {
            return a;
        }
        let mut w = INTERNER.write();
        if let Some(&a) = w.atom_index.get(name) {
            return a;
        }
        let a = Atom(w.atoms.len() as u32);
        let name: Arc<str> = Arc::from(name);
        w.atoms.push(name.clone());
        w.atom_index.insert(name, a);
        a
    }

    pub fn name(self) -> Arc<str> {
        INTERNER.read().atoms[self.0 as usize].clone()
    }
}

impl Ty {
    /// An atomic type. The name `T` denotes the terminal type.
    pub fn atom(name: &str) -> Ty {
        if name == "T" {
            return Ty::top();
        }
        intern(TyKind::Atom(Atom::new(name)))
    }

    pub fn from_atom(a: Atom) -> Ty {
        intern(TyKind::Atom(a))
    }

    /// The default atom `p`.
    pub fn p() -> Ty {
        Ty::atom("p")
    }

    pub fn top() -> Ty {
        intern(TyKind::Top)
    }

    pub fn arrow(a: Ty, b: Ty) -> Ty {
        intern(TyKind::Arrow(a, b))
    }

    pub fn prod(a: Ty, b: Ty) -> Ty {
        intern(TyKind::Prod(a, b))
    }

    /// `a1 -> a2 -> ... -> result`.
    pub fn arrows(args: &[Ty], result: Ty) -> Ty {
        args.iter().rev().fold(result, |acc, &a| Ty::arrow(a, acc))
    }

    pub fn kind(self) -> TyKind {
        info(self).kind
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// Equal to `T` up to isomorphism: `T`, `A -> B` with `B` trivial, products of trivial types.
    /// Every two terms of a trivial type are provably equal.
    pub fn is_trivial(self) -> bool {
        info(self).trivial
    }

    /// Built only from atoms and `->`.
    pub fn is_pure(self) -> bool {
        info(self).pure
    }

    /// Number of nodes of the type written as a tree (saturating).
    pub fn tree_size(self) -> u64 {
        info(self).tree_size
    }

    /// Arrow depth: `depth(p) = 0`, `depth(A -> B) = max(depth(A) + 1, depth(B))`.
    pub fn depth(self) -> u32 {
        info(self).depth
    }

    pub fn as_arrow(self) -> Option<(Ty, Ty)> {
        match self.kind() {
            TyKind::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_prod(self) -> Option<(Ty, Ty)> {
        match self.kind() {
            TyKind::Prod(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Splits `B1 -> ... -> Bk -> R` with `R` not an arrow.
    pub fn uncurry(self) -> (Vec<Ty>, Ty) {
        let mut args = Vec::new();
        let mut t = self;
        while let Some((a, b)) = t.as_arrow() {
            args.push(a);
            t = b;
        }
        (args, t)
    }

    /// Number of distinct interned nodes reachable from this type.
    pub fn node_count(self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if !seen.insert(t) {
                continue;
            }
            match t.kind() {
                TyKind::Arrow(a, b) | TyKind::Prod(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                _ => {}
            }
        }
        seen.len()
    }

    /// Atoms in order of first occurrence (left to right).
    pub fn atoms(self) -> Vec<Atom> {
        let mut out = Vec::new();
        let mut seen = std::collections::HashSet::new();
        self.collect_atoms(&mut out, &mut seen);
        out
    }

    pub(crate) fn collect_atoms(self, out: &mut Vec<Atom>, seen: &mut std::collections::HashSet<Ty>) {
        if !seen.insert(self) {
            return;
        }
        match self.kind() {
            TyKind::Atom(a) => {
                if !out.contains(&a) {
                    out.push(a)
                }
            }
            TyKind::Top => {}
            TyKind::Arrow(a, b) | TyKind::Prod(a, b) => {
                a.collect_atoms(out, seen);
                b.collect_atoms(out, seen);
            }
        }
    }

    /// Whether `self` is a subtype occurrence of `of` (including `of` itself).
    pub fn is_subtype_of(self, of: Ty) -> bool {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![of];
        while let Some(t) = stack.pop() {
            if t == self {
                return true;
            }
            if !seen.insert(t) {
                continue;
            }
            if let TyKind::Arrow(a, b) | TyKind::Prod(a, b) = t.kind() {
                stack.push(a);
                stack.push(b);
            }
        }
        false
    }

    /// A printable rendering, abbreviated when the tree is large.
    pub fn short(self) -> String {
        if self.tree_size() <= 64 {
            self.to_string()
        } else {
            format!("<type #{} of size {}>", self.0, self.tree_size())
        }
    }
}

/// `A_0 = p`, `A_{n+1} = A_n -> A_n`.
pub fn tower_type(i: usize) -> Ty {
    tower_over(Ty::p(), i)
}

/// The tower built over an arbitrary base type.
pub fn tower_over(base: Ty, i: usize) -> Ty {
    (0..i).fold(base, |t, _| Ty::arrow(t, t))
}

/// `N_i = A_{i+2}`.
pub fn numeral_type(i: usize) -> Ty {
    tower_type(i + 2)
}

/// A substitution of types for atoms, memoized over shared nodes.
pub struct TypeSubst {
    map: Box<dyn Fn(Atom) -> Option<Ty> + Send + Sync>,
    memo: RwLock<HashMap<Ty, Ty>>,
}

impl TypeSubst {
    pub fn new(map: HashMap<Atom, Ty>) -> TypeSubst {
        TypeSubst::from_fn(move |a| map.get(&a).copied())
    }

    pub fn from_fn(f: impl Fn(Atom) -> Option<Ty> + Send + Sync + 'static) -> TypeSubst {
        TypeSubst { map: Box::new(f), memo: RwLock::new(HashMap::new()) }
    }

    /// Sends every atom to `ty`.
    pub fn uniform(ty: Ty) -> TypeSubst {
        TypeSubst::from_fn(move |_| Some(ty))
    }

    pub fn single(atom: Atom, ty: Ty) -> TypeSubst {
        TypeSubst::from_fn(move |a| if a == atom { Some(ty) } else { None })
    }

    pub fn apply(&self, ty: Ty) -> Ty {
        if let Some(&t) = self.memo.read().get(&ty) {
            return t;
        }
        let out = match ty.kind() {
            TyKind::Atom(a) => (self.map)(a).unwrap_or(ty),
            TyKind::Top => ty,
            TyKind::Arrow(a, b) => Ty::arrow(self.apply(a), self.apply(b)),
            TyKind::Prod(a, b) => Ty::prod(self.apply(a), self.apply(b)),
        };
        self.memo.write().insert(ty, out);
        out
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print::print_type(*self))
    }
}

impl fmt::Debug for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ty({})", self.short())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_structural() {
        let p = Ty::p();
        let a = Ty::arrow(p, Ty::prod(p, Ty::top()));
        let b = Ty::arrow(Ty::atom("p"), Ty::prod(Ty::atom("p"), Ty::atom("T")));
        assert_eq!(a, b);
        assert_ne!(a, Ty::arrow(p, p));
    }

    #[test]
    fn towers_are_shared() {
        assert_eq!(tower_type(0), Ty::p());
        assert_eq!(tower_type(30).node_count(), 31);
        assert_eq!(numeral_type(0), Ty::arrow(Ty::arrow(Ty::p(), Ty::p()), Ty::arrow(Ty::p(), Ty::p())));
        assert_eq!(tower_type(64).node_count(), 65);
        assert_eq!(tower_type(70).tree_size(), u64::MAX);
    }

    #[test]
    fn trivial_and_depth() {
        let p = Ty::p();
        assert!(Ty::arrow(p, Ty::prod(Ty::top(), Ty::top())).is_trivial());
        assert!(!Ty::prod(p, Ty::top()).is_trivial());
        let t = Ty::arrow(Ty::arrow(Ty::arrow(p, p), p), p);
        assert_eq!(t.depth(), 3);
        assert!(t.is_pure());
    }

    #[test]
    fn substitution() {
        let q = Ty::atom("q");
        let t = Ty::arrow(q, Ty::p());
        let s = TypeSubst::single(Atom::new("q"), Ty::p());
        assert_eq!(s.apply(t), Ty::arrow(Ty::p(), Ty::p()));
        let big = TypeSubst::uniform(numeral_type(3)).apply(tower_type(40));
        assert_eq!(big, tower_type(45));
    }
}
