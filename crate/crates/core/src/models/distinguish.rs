//! Search for a finite model and arguments on which two terms differ.

use std::collections::HashMap;

use super::eval::{Assignment, EvalErr, Evaluator, Oracles, SVal};
use super::functional::{checked_pow, Functional, PModel};
use super::ModelError;
use crate::syntax::{Term, Ty, TyKind};

/// Default bound on the number of explored argument behaviours per base.
pub const DEFAULT_LEAF_BUDGET: u64 = 2_000_000;

/// Arguments `φ_1..φ_k` in a model of base `h` with `V_a φ_1..φ_k = 0` and `V_b φ_1..φ_k = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distinction {
    pub model: PModel,
    /// The first distinguishing tuple in canonical order, before relabeling.
    pub raw_args: Vec<Functional>,
    /// `(V_a, V_b)` on the raw tuple.
    pub observed: (u64, u64),
    /// The permutation of `P` applied: `relabeling[old] = new`.
    pub relabeling: Vec<u64>,
    /// The relabeled arguments.
    pub args: Vec<Functional>,
}

pub fn distinguish(a: &Term, b: &Term, max_base: u32) -> Result<Option<Distinction>, ModelError> {
    distinguish_with(a, b, max_base, DEFAULT_LEAF_BUDGET)
}

pub fn distinguish_with(
    a: &Term,
    b: &Term,
    max_base: u32,
    leaf_budget: u64,
) -> Result<Option<Distinction>, ModelError> {
    if a.ty() != b.ty() {
        return Err(ModelError::TypeMismatch(format!("{} vs {}", a.ty().short(), b.ty().short())));
    }
    if !a.is_closed() || !b.is_closed() {
        return Err(ModelError::Unsupported("distinguish needs closed terms".into()));
    }
    if !a.is_product_free() || !b.is_product_free() {
        return Err(ModelError::Unsupported("distinguish needs product-free terms".into()));
    }
    let (arg_tys, _) = a.ty().uncurry();
    for base in 2..=max_base {
        let model = PModel::new(base)?;
        let arg_tys: Vec<Ty> = arg_tys.iter().map(|t| model.p_type(*t)).collect::<Result<_, _>>()?;
        let mut s = Search {
            model,
            a,
            b,
            arg_tys: &arg_tys,
            oracles: Oracles { tables: vec![HashMap::new(); arg_tys.len()] },
            best: None,
            leaves: 0,
            budget: leaf_budget,
        };
        s.explore()?;
        if let Some((codes, va, vb)) = s.best {
            let raw_args: Vec<Functional> =
                codes.iter().zip(&arg_tys).map(|(c, t)| model.element(*t, *c)).collect::<Result<_, _>>()?;
            let relabeling = permutation(base as u64, va, vb);
            let args = raw_args.iter().map(|f| transport(f, &relabeling)).collect::<Result<Vec<_>, _>>()?;
            let (ra, rb) = (apply_term(a, &args)?, apply_term(b, &args)?);
            if (ra, rb) != (0, 1) {
                return Err(ModelError::Internal(format!("relabeled witness gives ({ra}, {rb})")));
            }
            return Ok(Some(Distinction { model, raw_args, observed: (va, vb), relabeling, args }));
        }
    }
    Ok(None)
}

/// `V_a φ_1 ... φ_k` as an ordinal.
pub fn apply_term(a: &Term, args: &[Functional]) -> Result<u64, ModelError> {
    let model = args.first().map(|f| f.model()).unwrap_or(PModel::new(2)?);
    let oracles = Oracles::default();
    let empty = Assignment::new();
    let mut ev = Evaluator::new(model, &oracles, &empty);
    let run = |ev: &mut Evaluator| -> Result<u64, EvalErr> {
        let mut v = ev.eval(a, &None)?;
        let mut ty = a.ty();
        for f in args {
            let (_, cod) = ty.as_arrow().ok_or_else(|| ModelError::TypeMismatch("too many arguments".into()))?;
            v = ev.apply(&v, ty, SVal::Elem(f.code()))?;
            ty = cod;
        }
        ev.materialize(&v, model.p_type(ty)?)
    };
    match run(&mut ev) {
        Ok(v) => Ok(v),
        Err(EvalErr::Model(e)) => Err(e),
        Err(EvalErr::Need { .. }) => unreachable!(),
    }
}

/// Sends `s1 -> 0`, `s2 -> 1` and the remaining ordinals to `2, 3, ...` in increasing order.
fn permutation(h: u64, s1: u64, s2: u64) -> Vec<u64> {
    let mut sigma = vec![0; h as usize];
    sigma[s1 as usize] = 0;
    sigma[s2 as usize] = 1;
    let mut next = 2;
    for x in 0..h {
        if x != s1 && x != s2 {
            sigma[x as usize] = next;
            next += 1;
        }
    }
    sigma
}

/// `σ ∘ φ ∘ σ⁻¹`, lifted to every type.
pub fn transport(f: &Functional, sigma: &[u64]) -> Result<Functional, ModelError> {
    let m = f.model();
    if f.is_ordinal() {
        return m.element(f.ty(), sigma[f.code() as usize]);
    }
    let (dom, _) = f.ty().as_arrow().expect("arrow type");
    let n = m.cardinality(dom)?;
    if n > 1 << 20 {
        return Err(ModelError::Overflow(format!("relabeling over domain {}", dom.short())));
    }
    let table = f.table()?;
    let mut out = table.clone();
    for (alpha, value) in m.enumerate(dom)?.zip(table) {
        let image = transport(&alpha, sigma)?;
        out[image.code() as usize] = transport(&value, sigma)?;
    }
    Functional::from_table(m, f.ty(), &out)
}

struct Search<'a> {
    model: PModel,
    a: &'a Term,
    b: &'a Term,
    arg_tys: &'a [Ty],
    oracles: Oracles,
    best: Option<(Vec<u64>, u64, u64)>,
    leaves: u64,
    budget: u64,
}

impl Search<'_> {
    fn run(&self, t: &Term) -> Result<u64, EvalErr> {
        let empty = Assignment::new();
        let mut ev = Evaluator::new(self.model, &self.oracles, &empty);
        let mut v = ev.eval(t, &None)?;
        let mut ty = t.ty();
        for (j, aty) in self.arg_tys.iter().enumerate() {
            let arg = if matches!(aty.kind(), TyKind::Atom(_)) {
                match self.oracles.tables[j].get(&Vec::new()) {
                    Some(&c) => SVal::Elem(c),
                    None => return Err(EvalErr::Need { oracle: j, point: Vec::new() }),
                }
            } else {
                SVal::Oracle(j, Default::default())
            };
            let (_, cod) = ty.as_arrow().expect("arrow type");
            v = ev.apply(&v, ty, arg)?;
            ty = cod;
        }
        ev.materialize(&v, self.model.p_type(ty)?)
    }

    /// Zero-completed codes of the current partial arguments.
    fn completion(&self) -> Result<Vec<u64>, ModelError> {
        let mut out = Vec::with_capacity(self.arg_tys.len());
        for (j, ty) in self.arg_tys.iter().enumerate() {
            let (cs, _) = ty.uncurry();
            let mut rest_cards = Vec::with_capacity(cs.len());
            for s in 0..cs.len() {
                rest_cards.push(self.model.cardinality(Ty::arrows(&cs[s + 1..], Ty::p()))?);
            }
            let mut code = 0u64;
            for (point, &v) in &self.oracles.tables[j] {
                let mut place = 1u64;
                for (c, card) in point.iter().zip(&rest_cards) {
                    place = place.checked_mul(checked_pow(*card, *c).ok_or_else(overflow)?).ok_or_else(overflow)?;
                }
                code += v * place;
            }
            out.push(code);
        }
        Ok(out)
    }

    fn explore(&mut self) -> Result<(), ModelError> {
        if let Some((best, _, _)) = &self.best {
            if &self.completion()? >= best {
                return Ok(());
            }
        }
        let outcome = self.run(self.a).and_then(|va| Ok((va, self.run(self.b)?)));
        match outcome {
            Ok((va, vb)) => {
                self.leaves += 1;
                if self.leaves > self.budget {
                    return Err(ModelError::Overflow("model search leaf budget".into()));
                }
                if va != vb {
                    let cand = self.completion()?;
                    if self.best.as_ref().is_none_or(|(b, _, _)| &cand < b) {
                        self.best = Some((cand, va, vb));
                    }
                }
                Ok(())
            }
            Err(EvalErr::Need { oracle, point }) => {
                for ans in 0..self.model.base() as u64 {
                    self.oracles.tables[oracle].insert(point.clone(), ans);
                    self.explore()?;
                }
                self.oracles.tables[oracle].remove(&point);
                Ok(())
            }
            Err(EvalErr::Model(e)) => Err(e),
        }
    }
}

fn overflow() -> ModelError {
    ModelError::Overflow("argument code".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerals::church;
    use crate::syntax::{read_term, Context};

    fn term(s: &str) -> Term {
        read_term(s, &Context::new()).unwrap()
    }

    #[test]
    fn worked_example() {
        let a = term("\\x:(p->p)->p. x (\\y:p. x (\\z:p. y))");
        let b = term("\\x:(p->p)->p. x (\\y:p. x (\\z:p. z))");
        let d = distinguish(&a, &b, 3).unwrap().unwrap();
        assert_eq!(d.model.base(), 2);
        assert_eq!(d.args.len(), 1);
        let phi = d.args[0];
        let vals: Vec<u64> = phi.table().unwrap().iter().map(|v| v.code()).collect();
        // const-0 is sent to 1, everything else to 0.
        assert_eq!(vals, vec![1, 0, 0, 0]);
        assert_eq!(d.relabeling, vec![0, 1]);
    }

    #[test]
    fn church_one_two() {
        let d = distinguish(&church(1, 0), &church(2, 0), 3).unwrap().unwrap();
        assert_eq!(d.model.base(), 2);
        assert_eq!(d.observed, (1, 0));
        assert_eq!(d.relabeling, vec![1, 0]);
        let neg: Vec<u64> = d.args[0].table().unwrap().iter().map(|v| v.code()).collect();
        assert_eq!(neg, vec![1, 0]);
        assert_eq!(d.args[1].code(), 1);
    }

    #[test]
    fn equal_terms_are_indistinguishable() {
        let a = term("\\x:(p->p)->p. x (\\y:p. y)");
        let b = term("\\x:(p->p)->p. x (\\y:p. (\\z:p. z) y)");
        assert_eq!(distinguish(&a, &b, 3).unwrap(), None);
    }
}
