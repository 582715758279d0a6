use proptest::prelude::*;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bohm::ccc::{from_lambda, to_lambda};
use bohm::models::{eval, i_defines_check, Assignment, PModel};
use bohm::normalize::{decide_eq, Normalizer};
use bohm::products::{
    build_iso, component_count, is_product_normal, product_normal_form, split, type_nf_with, RedexOrder, Split,
};
use bohm::random::{random_pure_type, random_term, random_type};
use bohm::syntax::{
    numeral_type, parse_type, print_term, read_term, substitute_term, substitute_types, Context, Term, TermKind, Ty,
    TypeSubst,
};

fn atoms() -> [Ty; 2] {
    [Ty::p(), Ty::atom("q")]
}

fn inhabitant(rng: &mut ChaCha8Rng, ty: impl Fn(&mut ChaCha8Rng) -> Ty) -> Term {
    loop {
        let t = ty(rng);
        if let Some(a) = random_term(rng, t, 4) {
            return a;
        }
    }
}

fn subterm_types(t: &Term, out: &mut Vec<Ty>) {
    out.push(t.ty());
    match t.kind() {
        TermKind::Lam(_, b) | TermKind::Fst(b) | TermKind::Snd(b) => subterm_types(b, out),
        TermKind::App(f, a) | TermKind::Pair(f, a) => {
            subterm_types(f, out);
            subterm_types(a, out);
        }
        TermKind::Bound(_) | TermKind::Free(_) | TermKind::Unit => {}
    }
}

/// A closed application `f a` of random long-normal terms, so that it has redexes to contract.
fn redex(rng: &mut ChaCha8Rng, pure: bool) -> Term {
    loop {
        let (a, b) = if pure {
            (random_pure_type(rng, 2), random_pure_type(rng, 2))
        } else {
            (random_type(rng, 6, &atoms(), true), random_type(rng, 6, &atoms(), true))
        };
        let f = random_term(rng, Ty::arrow(Ty::arrow(a, b), Ty::arrow(a, b)), 4);
        let g = random_term(rng, Ty::arrow(a, b), 4);
        let x = random_term(rng, a, 4);
        if let (Some(f), Some(g), Some(x)) = (f, g, x) {
            let fg = Term::app(f, g).unwrap();
            return Term::app(fg, x).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strategies_agree(seed in any::<u64>()) {
        let t = redex(&mut ChaCha8Rng::seed_from_u64(seed), false);
        let shared = Normalizer::default().long_nf(&t).unwrap().term;
        let unshared = Normalizer { sharing: false, ..Normalizer::default() }.long_nf(&t).unwrap().term;
        let rewritten = Normalizer::rewriting().long_nf(&t).unwrap().term;
        prop_assert_eq!(&shared, &unshared);
        prop_assert_eq!(&shared, &rewritten);
    }

    #[test]
    fn normal_forms_are_idempotent(seed in any::<u64>()) {
        let t = redex(&mut ChaCha8Rng::seed_from_u64(seed), false);
        let norm = Normalizer::default();
        let long = norm.long_nf(&t).unwrap().term;
        prop_assert_eq!(&norm.long_nf(&long).unwrap().term, &long);
        let short = norm.beta_eta_nf(&t).unwrap().term;
        prop_assert_eq!(&norm.beta_eta_nf(&short).unwrap().term, &short);
        prop_assert_eq!(&norm.long_nf(&short).unwrap().term, &long);
        prop_assert!(decide_eq(&t, &short).unwrap());
    }

    #[test]
    fn evaluation_respects_normalization(seed in any::<u64>()) {
        let t = redex(&mut ChaCha8Rng::seed_from_u64(seed), true);
        let nf = Normalizer::default().beta_eta_nf(&t).unwrap().term;
        let m = PModel::new(2).unwrap();
        prop_assert_eq!(eval(&t, &Assignment::new(), m).unwrap(), eval(&nf, &Assignment::new(), m).unwrap());
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let t = redex(&mut ChaCha8Rng::seed_from_u64(seed), false);
        let back = read_term(&print_term(&t), &Context::new()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn compiled_arrows_denote_their_terms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = loop {
            let ty = Ty::arrow(random_type(&mut rng, 5, &atoms(), true), random_type(&mut rng, 5, &atoms(), true));
            if let Some(t) = random_term(&mut rng, ty, 4) {
                break t;
            }
        };
        let arrow = from_lambda(&t).unwrap();
        prop_assert!(decide_eq(&to_lambda(&arrow).unwrap(), &t).unwrap());
    }

    #[test]
    fn type_normal_forms(seed in any::<u64>()) {
        let ty = random_type(&mut ChaCha8Rng::seed_from_u64(seed), 20, &atoms(), true);
        let nf = product_normal_form(ty);
        prop_assert!(is_product_normal(nf));
        prop_assert_eq!(product_normal_form(nf), nf);
        for weight in [2, 3] {
            for order in [RedexOrder::LeftmostInnermost, RedexOrder::LeftmostOutermost] {
                prop_assert_eq!(type_nf_with(ty, order, weight).output, nf);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn isomorphisms_round_trip(seed in any::<u64>()) {
        let ty = random_type(&mut ChaCha8Rng::seed_from_u64(seed), 12, &atoms(), true);
        let iso = build_iso(ty).unwrap();
        prop_assert_eq!(iso.target(), product_normal_form(ty));
        prop_assert!(iso.check(&Normalizer::default()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn splitting_respects_subformulas(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nf = product_normal_form(random_type(&mut rng, 14, &atoms(), true));
        let (Some(a), Some(b)) = (random_term(&mut rng, nf, 4), random_term(&mut rng, nf, 4)) else {
            return Ok(());
        };
        match (split(&a).unwrap(), split(&b).unwrap()) {
            (Split::Unit, Split::Unit) => prop_assert_eq!(nf, Ty::top()),
            (Split::Components(xs), Split::Components(ys)) => {
                prop_assert_eq!(xs.len(), component_count(nf));
                prop_assert_eq!(xs.len(), ys.len());
                for c in &xs {
                    let mut tys = Vec::new();
                    subterm_types(c, &mut tys);
                    prop_assert!(c.is_product_free());
                    prop_assert!(tys.iter().all(|t| t.is_subtype_of(nf)));
                }
            }
            _ => prop_assert!(false, "split shapes differ"),
        }
    }

    #[test]
    fn renaming_bound_variables(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = inhabitant(&mut rng, |r| Ty::arrow(random_type(r, 5, &atoms(), true), random_type(r, 5, &atoms(), true)));
        let (dom, _) = g.ty().as_arrow().unwrap();
        let body = Term::app(g, Term::free("x", dom)).unwrap();
        let renamed = substitute_term(&body, "x", &Term::free("y", dom)).unwrap();
        prop_assert_eq!(renamed.ty(), body.ty());
        let lx = Term::lam("x", dom, body).unwrap();
        let ly = Term::lam("y", dom, renamed).unwrap();
        prop_assert_eq!(&lx, &ly);
        prop_assert!(decide_eq(&lx, &ly).unwrap());
    }

    #[test]
    fn numeral_instances_define_their_values(seed in any::<u64>(), base in 2u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let types = ["p", "p->p", "p->p->p", "p->p->p->p"].map(|t| parse_type(t).unwrap());
        let a = inhabitant(&mut rng, |r| types[(r.next_u32() % 4) as usize]);
        let phi = eval(&a, &Assignment::new(), PModel::new(base).unwrap()).unwrap();
        for i in [0, 2] {
            let inst = substitute_types(&a, &TypeSubst::uniform(numeral_type(i)));
            prop_assert!(i_defines_check(&inst, &phi, i, 3).unwrap());
        }
    }
}
