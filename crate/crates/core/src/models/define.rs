//! Prime-power codes, `κ(φ)` and the defining terms `φ^λ : A^i`.

use std::cell::RefCell;
use std::collections::HashMap;

use super::functional::{checked_pow, Functional, PModel};
use super::ModelError;
use crate::normalize::Normalizer;
use crate::numerals::{church, combinator, CombinatorKind, Tag};
use crate::syntax::{numeral_type, Term, Ty, TypeSubst};

/// `A^i`: every atom of `A` replaced by `N_i`.
pub fn level_type(ty: Ty, i: usize) -> Ty {
    TypeSubst::uniform(numeral_type(i)).apply(ty)
}

/// The `n`-th prime, counting from `nth_prime(0) = 2`.
pub fn nth_prime(n: usize) -> u64 {
    let mut count = 0;
    let mut c = 1u64;
    loop {
        c += 1;
        if (2..).take_while(|d| d * d <= c).all(|d| !c.is_multiple_of(d)) {
            if count == n {
                return c;
            }
            count += 1;
        }
    }
}

/// Argument tuples of `C_1 -> ... -> C_l -> P`, first argument varying slowest.
fn tuples(model: PModel, cs: &[Ty]) -> Result<Vec<Vec<Functional>>, ModelError> {
    let mut out: Vec<Vec<Functional>> = vec![Vec::new()];
    for c in cs {
        let elems: Vec<Functional> = model.enumerate(*c)?.collect();
        if (out.len() as u64).saturating_mul(elems.len() as u64) > 1 << 16 {
            return Err(ModelError::Overflow("too many argument tuples".into()));
        }
        out = out
            .into_iter()
            .flat_map(|t| {
                elems.iter().map(move |e| {
                    let mut t = t.clone();
                    t.push(*e);
                    t
                })
            })
            .collect();
    }
    Ok(out)
}

/// `2^{d_1} · 3^{d_2} ⋯` over the values `d_s` of `ψ` at its argument tuples; `2^ψ` for an ordinal.
pub fn prime_power_code(psi: &Functional) -> Result<u64, ModelError> {
    let overflow = || ModelError::Overflow(format!("prime-power code of {psi}"));
    if psi.is_ordinal() {
        return checked_pow(2, psi.code()).ok_or_else(overflow);
    }
    let (cs, _) = psi.ty().uncurry();
    let mut n = 1u64;
    for (s, tuple) in tuples(psi.model(), &cs)?.iter().enumerate() {
        let d = psi.apply_all(tuple)?.code();
        n = n.checked_mul(checked_pow(nth_prime(s), d).ok_or_else(overflow)?).ok_or_else(overflow)?;
    }
    Ok(n)
}

thread_local! {
    static KAPPA: RefCell<HashMap<Functional, u64>> = RefCell::new(HashMap::new());
}

/// The least level at which `define_functional` is valid.
pub fn kappa(phi: &Functional) -> Result<u64, ModelError> {
    if phi.is_ordinal() {
        return Ok(0);
    }
    if let Some(k) = KAPPA.with(|m| m.borrow().get(phi).copied()) {
        return Ok(k);
    }
    let m = phi.model();
    let (bs, _) = phi.ty().uncurry();
    let b1 = bs[0];
    let mut n_max = 0u64;
    let mut k = 0u64;
    for psi in m.enumerate(b1)? {
        n_max = n_max.max(prime_power_code(&psi)?);
        k = k.max(kappa(&phi.apply(&psi)?)?);
    }
    let bound =
        n_max.checked_mul(3).and_then(|v| v.checked_add(1)).ok_or_else(|| ModelError::Overflow("kappa".into()))?;
    k = k.max(bound);
    let (cs, _) = b1.uncurry();
    for c in cs {
        for gamma in m.enumerate(c)? {
            k = k.max(kappa(&gamma)?);
        }
    }
    KAPPA.with(|mm| mm.borrow_mut().insert(*phi, k));
    Ok(k)
}

/// `φ^λ : A^i`.
pub fn define_functional(phi: &Functional, i: usize) -> Result<Term, ModelError> {
    Definer::new(i).define(phi)
}

/// Builds defining terms at a fixed level, sharing repeated subterms.
pub struct Definer {
    i: usize,
    cache: HashMap<Functional, Term>,
    combinators: HashMap<CombinatorKind, Term>,
}

impl Definer {
    pub fn new(i: usize) -> Definer {
        Definer { i, cache: HashMap::new(), combinators: HashMap::new() }
    }

    fn comb(&mut self, tag: Tag, level: usize) -> Term {
        let kind = CombinatorKind::new(tag, level);
        self.combinators
            .entry(kind)
            .or_insert_with(|| combinator(kind).expect("side conditions ensured by kappa"))
            .clone()
    }

    pub fn define(&mut self, phi: &Functional) -> Result<Term, ModelError> {
        let i = self.i;
        if phi.is_ordinal() {
            return Ok(church(phi.code(), i));
        }
        if let Some(t) = self.cache.get(phi) {
            return Ok(t.clone());
        }
        let required = kappa(phi)?;
        if (i as u64) < required {
            return Err(ModelError::LevelTooSmall { required, given: i });
        }
        let m = phi.model();
        let (bs, _) = phi.ty().uncurry();
        let xs: Vec<(String, Ty)> =
            bs.iter().enumerate().map(|(j, b)| (format!("x{}", j + 1), level_type(*b, i))).collect();
        let vars: Vec<Term> = xs.iter().map(|(n, t)| Term::free(n, *t)).collect();
        let t = self.product_term(&vars[0], bs[0], m)?;
        let psis: Vec<Functional> = m.enumerate(bs[0])?.collect();
        let mut acc: Option<Term> = None;
        for psi in psis.iter().rev() {
            let xi = self.define(&phi.apply(psi)?)?;
            let branch = app(&xi, &vars[1..]);
            acc = Some(match acc {
                None => branch,
                Some(rest) => {
                    let n = prime_power_code(psi)? as usize;
                    let d = self.comb(Tag::Check(n), i - 1);
                    let z = self.comb(Tag::Raise, i);
                    let c = self.comb(Tag::Cond, i);
                    let test = app(&z, &[app(&d, std::slice::from_ref(&t))]);
                    app(&c, &[test, branch, rest])
                }
            });
        }
        let mut out = acc.expect("domains are nonempty");
        for (n, ty) in xs.iter().rev() {
            out = Term::lam(n, *ty, out).expect("well-typed by construction");
        }
        self.cache.insert(*phi, out.clone());
        Ok(out)
    }

    /// The numeral `[n]_{i-1}` coding `x_1` by prime powers.
    fn product_term(&mut self, x1: &Term, b1: Ty, m: PModel) -> Result<Term, ModelError> {
        let i = self.i;
        let e = self.comb(Tag::Expo, i - 1);
        let (cs, _) = b1.uncurry();
        if cs.is_empty() {
            return Ok(app(&e, &[x1.clone(), church(2, i)]));
        }
        let mul = self.comb(Tag::Mul, i - 1);
        let mut t: Option<Term> = None;
        for (s, tuple) in tuples(m, &cs)?.iter().enumerate() {
            let args = tuple.iter().map(|g| self.define(g)).collect::<Result<Vec<_>, _>>()?;
            let factor = app(&e, &[app(x1, &args), church(nth_prime(s), i)]);
            t = Some(match t {
                None => factor,
                Some(prev) => app(&mul, &[prev, factor]),
            });
        }
        Ok(t.expect("at least one tuple"))
    }
}

fn app(f: &Term, args: &[Term]) -> Term {
    Term::apps(f.clone(), args).expect("well-typed by construction")
}

/// Whether `a : A^i` i-defines `φ`, checking up to `depth` argument positions.
pub fn i_defines_check(a: &Term, phi: &Functional, i: usize, depth: usize) -> Result<bool, ModelError> {
    i_defines_check_with(a, phi, i, depth, &Normalizer::default())
}

pub fn i_defines_check_with(
    a: &Term,
    phi: &Functional,
    i: usize,
    depth: usize,
    norm: &Normalizer,
) -> Result<bool, ModelError> {
    if a.ty() != level_type(phi.ty(), i) {
        return Err(ModelError::TypeMismatch(format!(
            "term of type {} cannot define an element of {}",
            a.ty().short(),
            phi.ty()
        )));
    }
    let mut definer = Definer::new(i);
    check(a, phi, i, depth, norm, &mut definer)
}

fn check(
    a: &Term,
    phi: &Functional,
    i: usize,
    depth: usize,
    norm: &Normalizer,
    definer: &mut Definer,
) -> Result<bool, ModelError> {
    if phi.is_ordinal() {
        return Ok(norm.decide_eq(a, &church(phi.code(), i))?);
    }
    if depth == 0 {
        return Ok(true);
    }
    let (dom, _) = phi.ty().as_arrow().expect("arrow type");
    for psi in phi.model().enumerate(dom)? {
        let b = definer.define(&psi)?;
        let ab = Term::app(a.clone(), b).expect("types agree");
        if !check(&ab, &phi.apply(&psi)?, i, depth - 1, norm, definer)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;

    fn ty(s: &str) -> Ty {
        parse_type(s).unwrap()
    }

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..8).map(nth_prime).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn ordinal_and_unary() {
        let m = PModel::new(2).unwrap();
        assert_eq!(kappa(&m.ordinal(1).unwrap()).unwrap(), 0);
        assert_eq!(define_functional(&m.ordinal(1).unwrap(), 3).unwrap(), church(1, 3));
        for f in m.enumerate(ty("p->p")).unwrap() {
            assert_eq!(kappa(&f).unwrap(), 7);
            let t = define_functional(&f, 7).unwrap();
            assert_eq!(t.ty(), level_type(ty("p->p"), 7));
            assert!(t.is_closed());
            assert!(i_defines_check(&t, &f, 7, 1).unwrap());
        }
        let neg = m.element(ty("p->p"), 1).unwrap();
        assert!(matches!(define_functional(&neg, 6), Err(ModelError::LevelTooSmall { .. })));
    }

    #[test]
    fn wrong_ordinal_rejected() {
        let m = PModel::new(2).unwrap();
        assert!(i_defines_check(&church(3, 2), &PModel::new(4).unwrap().ordinal(3).unwrap(), 2, 0).unwrap());
        assert!(!i_defines_check(&church(0, 2), &m.ordinal(1).unwrap(), 2, 0).unwrap());
    }

    #[test]
    fn worked_example_codes_and_term() {
        let m = PModel::new(2).unwrap();
        let codes: Vec<u64> = m.enumerate(ty("p->p")).unwrap().map(|psi| prime_power_code(&psi).unwrap()).collect();
        assert_eq!(codes, vec![1, 2, 3, 6]);
        let by_table = |t: [u64; 2]| {
            let f = Functional::from_table(
                m,
                ty("p->p"),
                &[m.ordinal(t[0] as u32).unwrap(), m.ordinal(t[1] as u32).unwrap()],
            );
            prime_power_code(&f.unwrap()).unwrap()
        };
        assert_eq!([[0, 0], [1, 1], [0, 1], [1, 0]].map(by_table), [1, 6, 3, 2]);
        let phi = Functional::from_table(
            m,
            ty("(p->p)->p"),
            &[m.ordinal(1).unwrap(), m.ordinal(0).unwrap(), m.ordinal(0).unwrap(), m.ordinal(0).unwrap()],
        )
        .unwrap();
        assert_eq!(kappa(&phi).unwrap(), 19);
        let i = 20;
        let got = define_functional(&phi, i).unwrap();
        let k = |tag, l| combinator(CombinatorKind::new(tag, l)).unwrap();
        let x1 = Term::free("x1", level_type(ty("p->p"), i));
        let t = app(
            &k(Tag::Mul, i - 1),
            &[
                app(&k(Tag::Expo, i - 1), &[app(&x1, &[church(0, i)]), church(2, i)]),
                app(&k(Tag::Expo, i - 1), &[app(&x1, &[church(1, i)]), church(3, i)]),
            ],
        );
        let test = |n: usize| app(&k(Tag::Raise, i), &[app(&k(Tag::Check(n), i - 1), std::slice::from_ref(&t))]);
        let cond = k(Tag::Cond, i);
        let inner = app(&cond, &[test(3), church(0, i), church(0, i)]);
        let mid = app(&cond, &[test(2), church(0, i), inner]);
        let body = app(&cond, &[test(1), church(1, i), mid]);
        let want = Term::lam("x1", x1.ty(), body).unwrap();
        assert_eq!(got, want);
    }
}
