//! The seven axiom schemata checked at random type instantiations.

use std::collections::HashMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::arrow::ArrowTerm;
use super::translate::decide_ccc_eq_with;
use crate::normalize::Normalizer;
use crate::random::{random_arrow, random_type};
use crate::syntax::{Ty, TyKind, TypeSubst};

pub const AXIOMS: [(&str, &str); 7] = [
    ("reflexivity", "f = f"),
    ("category", "f . id[A] = id[B] . f = f,  h . (g . f) = (h . g) . f"),
    ("product-beta", "p1[A,B] . <f, g> = f,  p2[A,B] . <f, g> = g"),
    ("product-eta", "<p1[A,B] . h, p2[A,B] . h> = h"),
    ("exponential-beta", "eval[A,B] . <curry[C,A](f) . p1[C,A], p2[C,A]> = f"),
    ("exponential-eta", "curry[C,A](eval[A,B] . <g . p1[C,A], p2[C,A]>) = g"),
    ("terminal", "f = bang[A]  for f : A |- T"),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub schema: &'static str,
    /// Random instantiations tried.
    pub instances: usize,
    /// Equations checked, counting each instance and its re-substituted copy.
    pub equations: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub axioms: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.failures.is_empty())
    }
}

pub fn check_axioms() -> AxiomReport {
    check_axioms_with(0, 20, &Normalizer::default())
}

/// Checks each schema at `instances` random instantiations from `seed`, in parallel per schema.
pub fn check_axioms_with(seed: u64, instances: usize, norm: &Normalizer) -> AxiomReport {
    let axioms = std::thread::scope(|s| {
        let handles: Vec<_> = (0..AXIOMS.len())
            .map(|k| s.spawn(move || check_one(k, seed.wrapping_add(k as u64), instances, norm)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("axiom worker")).collect()
    });
    AxiomReport { axioms }
}

fn atoms() -> Vec<Ty> {
    vec![Ty::p(), Ty::atom("q"), Ty::atom("r")]
}

fn some_type(rng: &mut StdRng) -> Ty {
    random_type(rng, 7, &atoms(), true)
}

fn arrow_from(rng: &mut StdRng, source: Ty) -> ArrowTerm {
    random_arrow(rng, source, 2, &atoms())
}

fn arrow_into(rng: &mut StdRng, source: Ty, want: impl Fn(Ty) -> bool) -> Option<ArrowTerm> {
    (0..40).map(|_| arrow_from(rng, source)).find(|f| want(f.target()))
}

/// The equations of one instance of schema `k`.
fn instance(k: usize, rng: &mut StdRng) -> Vec<(ArrowTerm, ArrowTerm)> {
    use ArrowTerm as A;
    let a = some_type(rng);
    match k {
        0 => {
            let f = arrow_from(rng, a);
            vec![(f.clone(), f)]
        }
        1 => {
            let f = arrow_from(rng, a);
            let g = arrow_from(rng, f.target());
            let h = arrow_from(rng, g.target());
            vec![
                (A::compose(f.clone(), A::Id(a)), f.clone()),
                (A::compose(A::Id(f.target()), f.clone()), f.clone()),
                (A::compose(h.clone(), A::compose(g.clone(), f.clone())), A::compose(A::compose(h, g), f)),
            ]
        }
        2 => {
            let f = arrow_from(rng, a);
            let g = arrow_from(rng, a);
            let (x, y) = (f.target(), g.target());
            let fg = A::pairing(f.clone(), g.clone());
            vec![(A::compose(A::Proj1(x, y), fg.clone()), f), (A::compose(A::Proj2(x, y), fg), g)]
        }
        3 => {
            let h = arrow_into(rng, a, |t| t.as_prod().is_some())
                .unwrap_or_else(|| A::pairing(arrow_from(rng, a), arrow_from(rng, a)));
            let (x, y) = h.target().as_prod().unwrap();
            let eta = A::pairing(A::compose(A::Proj1(x, y), h.clone()), A::compose(A::Proj2(x, y), h.clone()));
            vec![(eta, h)]
        }
        4 => {
            let c = a;
            let d = some_type(rng);
            let f = arrow_from(rng, Ty::prod(c, d));
            let b = f.target();
            let lhs = A::compose(
                A::Eval(d, b),
                A::pairing(A::compose(A::curry(c, d, f.clone()), A::Proj1(c, d)), A::Proj2(c, d)),
            );
            vec![(lhs, f)]
        }
        5 => {
            let c = a;
            let g = arrow_into(rng, c, |t| t.as_arrow().is_some()).unwrap_or_else(|| {
                let d = some_type(rng);
                A::curry(c, d, arrow_from(rng, Ty::prod(c, d)))
            });
            let (d, b) = g.target().as_arrow().unwrap();
            let lhs = A::curry(
                c,
                d,
                A::compose(A::Eval(d, b), A::pairing(A::compose(g.clone(), A::Proj1(c, d)), A::Proj2(c, d))),
            );
            vec![(lhs, g)]
        }
        _ => {
            let f = arrow_into(rng, a, |t| matches!(t.kind(), TyKind::Top)).unwrap_or_else(|| {
                let r = arrow_from(rng, a);
                A::compose(A::Bang(r.target()), r)
            });
            vec![(f, A::Bang(a))]
        }
    }
}

fn check_one(k: usize, seed: u64, instances: usize, norm: &Normalizer) -> AxiomCheck {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut equations = 0;
    for _ in 0..instances {
        let eqs = instance(k, &mut rng);
        let mut map = HashMap::new();
        for t in atoms() {
            if let TyKind::Atom(x) = t.kind() {
                if rng.gen_bool(0.5) {
                    map.insert(x, some_type(&mut rng));
                }
            }
        }
        let sub = TypeSubst::new(map);
        for (l, r) in eqs {
            for (l, r) in [(l.substitute(&sub), r.substitute(&sub)), (l, r)] {
                equations += 1;
                match decide_ccc_eq_with(&l, &r, norm) {
                    Ok(true) => {}
                    Ok(false) => failures.push(format!("{l} = {r}")),
                    Err(e) => failures.push(format!("{l} = {r}: {e}")),
                }
            }
        }
    }
    AxiomCheck { name: AXIOMS[k].0, schema: AXIOMS[k].1, instances, equations, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccc::arrow_type_of;

    #[test]
    fn instances_are_well_typed_equations() {
        let mut rng = StdRng::seed_from_u64(3);
        for (k, (name, _)) in AXIOMS.iter().enumerate() {
            for _ in 0..10 {
                for (l, r) in instance(k, &mut rng) {
                    assert_eq!(arrow_type_of(&l).unwrap(), arrow_type_of(&r).unwrap(), "{name}");
                }
            }
        }
    }

    #[test]
    fn all_axioms_pass() {
        let report = check_axioms_with(11, 5, &Normalizer::default());
        assert_eq!(report.axioms.len(), 7);
        assert!(report.all_pass(), "{report:?}");
    }
}
