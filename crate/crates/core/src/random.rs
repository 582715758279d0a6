//! Seeded random generators for types, terms and arrows, shared by tests and the CLI.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ccc::ArrowTerm;
use crate::syntax::{Term, Ty, TyKind};

/// Random type with at most `max_nodes` nodes over `atoms`; `T` and `×` only if `products`.
pub fn random_type<R: Rng>(rng: &mut R, max_nodes: usize, atoms: &[Ty], products: bool) -> Ty {
    let n = rng.gen_range(1..=max_nodes.max(1));
    sized_type(rng, n, atoms, products)
}

fn sized_type<R: Rng>(rng: &mut R, n: usize, atoms: &[Ty], products: bool) -> Ty {
    if n < 3 {
        if products && rng.gen_bool(0.15) {
            return Ty::top();
        }
        return *atoms.choose(rng).expect("at least one atom");
    }
    let left = rng.gen_range(1..=n - 2);
    let l = sized_type(rng, left, atoms, products);
    let r = sized_type(rng, n - 1 - left, atoms, products);
    if products && rng.gen_bool(0.5) {
        Ty::prod(l, r)
    } else {
        Ty::arrow(l, r)
    }
}

/// Random pure type over `p` with argument depth at most `depth`.
pub fn random_pure_type<R: Rng>(rng: &mut R, depth: u32) -> Ty {
    if depth == 0 {
        return Ty::p();
    }
    let arity = rng.gen_range(0..=2);
    let args: Vec<Ty> = (0..arity).map(|_| random_pure_type(rng, depth - 1)).collect();
    Ty::arrows(&args, Ty::p())
}

/// A random closed long-normal inhabitant of `ty`, if one is found within `fuel`.
pub fn random_term<R: Rng>(rng: &mut R, ty: Ty, fuel: u32) -> Option<Term> {
    let mut ctx = Vec::new();
    inhabit(rng, ty, &mut ctx, fuel)
}

fn inhabit<R: Rng>(rng: &mut R, ty: Ty, ctx: &mut Vec<Ty>, fuel: u32) -> Option<Term> {
    match ty.kind() {
        TyKind::Top => Some(Term::unit()),
        TyKind::Arrow(a, b) => {
            ctx.push(a);
            let body = inhabit(rng, b, ctx, fuel);
            ctx.pop();
            Some(Term::lam_raw(a, body?))
        }
        TyKind::Prod(a, b) => Some(Term::pair(inhabit(rng, a, ctx, fuel)?, inhabit(rng, b, ctx, fuel)?)),
        TyKind::Atom(_) => {
            if fuel == 0 {
                return None;
            }
            let mut heads: Vec<(usize, Vec<Elim>)> = Vec::new();
            for (k, &t) in ctx.iter().enumerate() {
                for path in paths_to(t, ty) {
                    heads.push((k, path));
                }
            }
            heads.shuffle(rng);
            for (k, path) in heads.into_iter().take(3) {
                let mut t = Term::bound((ctx.len() - 1 - k) as u32, ctx[k]);
                let mut ok = true;
                for e in &path {
                    t = match e {
                        Elim::App(a) => match inhabit(rng, *a, ctx, fuel - 1) {
                            Some(x) => Term::app_raw(t, x),
                            None => {
                                ok = false;
                                break;
                            }
                        },
                        Elim::Fst => Term::fst_raw(t),
                        Elim::Snd => Term::snd_raw(t),
                    };
                }
                if ok {
                    return Some(t);
                }
            }
            None
        }
    }
}

#[derive(Clone, Copy)]
enum Elim {
    App(Ty),
    Fst,
    Snd,
}

fn paths_to(from: Ty, goal: Ty) -> Vec<Vec<Elim>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    collect_paths(from, goal, &mut cur, &mut out);
    out
}

fn collect_paths(from: Ty, goal: Ty, cur: &mut Vec<Elim>, out: &mut Vec<Vec<Elim>>) {
    if from == goal {
        out.push(cur.clone());
    }
    match from.kind() {
        TyKind::Arrow(a, b) => {
            cur.push(Elim::App(a));
            collect_paths(b, goal, cur, out);
            cur.pop();
        }
        TyKind::Prod(a, b) => {
            cur.push(Elim::Fst);
            collect_paths(a, goal, cur, out);
            cur.pop();
            cur.push(Elim::Snd);
            collect_paths(b, goal, cur, out);
            cur.pop();
        }
        _ => {}
    }
}

/// Two distinct random closed inhabitants of one random pure type of depth at most `depth`.
pub fn random_pure_pair<R: Rng>(rng: &mut R, depth: u32, fuel: u32) -> (Term, Term) {
    loop {
        let ty = random_pure_type(rng, depth);
        let Some(a) = random_term(rng, ty, fuel) else { continue };
        for _ in 0..8 {
            if let Some(b) = random_term(rng, ty, fuel) {
                if b != a || rng.gen_bool(0.2) {
                    return (a, b);
                }
            }
        }
    }
}

/// A random well-formed arrow with the given source, of nesting depth at most `depth`.
pub fn random_arrow<R: Rng>(rng: &mut R, source: Ty, depth: u32, atoms: &[Ty]) -> ArrowTerm {
    let mut choices: Vec<u8> = vec![0, 1];
    if source.as_prod().is_some() {
        choices.extend([2, 2, 3, 3]);
        if let Some((l, r)) = source.as_prod() {
            if l.as_arrow().map(|(d, _)| d) == Some(r) {
                choices.extend([4, 4]);
            }
        }
    }
    if depth > 0 {
        choices.extend([5, 5, 6, 6, 7, 7]);
    }
    match *choices.choose(rng).unwrap() {
        0 => ArrowTerm::Id(source),
        1 => ArrowTerm::Bang(source),
        2 => {
            let (l, r) = source.as_prod().unwrap();
            ArrowTerm::Proj1(l, r)
        }
        3 => {
            let (l, r) = source.as_prod().unwrap();
            ArrowTerm::Proj2(l, r)
        }
        4 => {
            let (l, r) = source.as_prod().unwrap();
            ArrowTerm::Eval(r, l.as_arrow().unwrap().1)
        }
        5 => {
            let f = random_arrow(rng, source, depth - 1, atoms);
            let mid = f.target();
            let g = random_arrow(rng, mid, depth - 1, atoms);
            ArrowTerm::compose(g, f)
        }
        6 => {
            let f = random_arrow(rng, source, depth - 1, atoms);
            let g = random_arrow(rng, source, depth - 1, atoms);
            ArrowTerm::pairing(f, g)
        }
        _ => {
            let a = random_type(rng, 3, atoms, true);
            let f = random_arrow(rng, Ty::prod(source, a), depth - 1, atoms);
            ArrowTerm::curry(source, a, f)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccc::arrow_type_of;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_objects_are_well_formed() {
        let mut rng = StdRng::seed_from_u64(7);
        let atoms = [Ty::p(), Ty::atom("q")];
        for _ in 0..200 {
            let t = random_type(&mut rng, 30, &atoms, true);
            assert!(t.tree_size() <= 30);
            let f = random_arrow(&mut rng, t, 3, &atoms);
            assert_eq!(arrow_type_of(&f).unwrap().0, t);
        }
        for _ in 0..100 {
            let (a, b) = random_pure_pair(&mut rng, 3, 4);
            assert!(a.is_closed() && b.is_closed() && a.ty() == b.ty());
            assert!(a.ty().depth() <= 3);
        }
    }
}
