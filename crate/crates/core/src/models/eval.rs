//! The valuation `V` of terms in a P-model.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::functional::{checked_pow, Functional, PModel};
use super::ModelError;
use crate::syntax::{Name, Term, TermKind, Ty, TyKind};

/// A map from free variables to functionals of the matching P-type.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    vars: BTreeMap<Name, Functional>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    /// The updated assignment `f^y_α`.
    pub fn with(&self, name: &str, value: Functional) -> Assignment {
        let mut out = self.clone();
        out.vars.insert(Name::from(name), value);
        out
    }

    pub fn get(&self, name: &str) -> Option<Functional> {
        self.vars.get(name).copied()
    }
}

/// `V_{a,f}`.
pub fn eval(a: &Term, f: &Assignment, model: PModel) -> Result<Functional, ModelError> {
    let oracles = Oracles::default();
    let mut ev = Evaluator::new(model, &oracles, f);
    let v = ev.eval(a, &None).map_err(EvalErr::into_model)?;
    let ty = model.p_type(a.ty())?;
    let code = ev.materialize(&v, ty).map_err(EvalErr::into_model)?;
    model.element(ty, code)
}

const STEP_LIMIT: u64 = 200_000_000;

#[derive(Clone)]
pub(crate) enum SVal {
    Elem(u64),
    Clo(SEnv, Term),
    Oracle(usize, Rc<Vec<u64>>),
}

pub(crate) type SEnv = Option<Rc<SEnvNode>>;

pub(crate) struct SEnvNode {
    value: SVal,
    next: SEnv,
}

/// Partially known argument functionals, keyed by the codes of their uncurried arguments.
#[derive(Clone, Default, Debug)]
pub(crate) struct Oracles {
    pub(crate) tables: Vec<HashMap<Vec<u64>, u64>>,
}

#[derive(Debug)]
pub(crate) enum EvalErr {
    Model(ModelError),
    Need { oracle: usize, point: Vec<u64> },
}

impl EvalErr {
    fn into_model(self) -> ModelError {
        match self {
            EvalErr::Model(e) => e,
            EvalErr::Need { .. } => unreachable!("oracle query without oracles"),
        }
    }
}

impl From<ModelError> for EvalErr {
    fn from(e: ModelError) -> EvalErr {
        EvalErr::Model(e)
    }
}

pub(crate) struct Evaluator<'a> {
    model: PModel,
    oracles: &'a Oracles,
    assignment: &'a Assignment,
    steps: u64,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(model: PModel, oracles: &'a Oracles, assignment: &'a Assignment) -> Evaluator<'a> {
        Evaluator { model, oracles, assignment, steps: 0 }
    }

    fn tick(&mut self) -> Result<(), EvalErr> {
        self.steps += 1;
        if self.steps > STEP_LIMIT {
            return Err(ModelError::Overflow("evaluation step limit".into()).into());
        }
        Ok(())
    }

    pub(crate) fn eval(&mut self, t: &Term, env: &SEnv) -> Result<SVal, EvalErr> {
        stacker::maybe_grow(128 * 1024, 8 * 1024 * 1024, || self.eval_inner(t, env))
    }

    fn eval_inner(&mut self, t: &Term, env: &SEnv) -> Result<SVal, EvalErr> {
        self.tick()?;
        match t.kind() {
            TermKind::Bound(i) => {
                let mut e = env;
                for _ in 0..*i {
                    e = &e.as_ref().expect("dangling index").next;
                }
                Ok(e.as_ref().expect("dangling index").value.clone())
            }
            TermKind::Free(n) => {
                let f = self.assignment.get(n).ok_or_else(|| ModelError::UnboundVariable(n.to_string()))?;
                if f.ty() != self.model.p_type(t.ty())? || f.model() != self.model {
                    return Err(ModelError::TypeMismatch(format!("{n} is assigned {f:?}")).into());
                }
                Ok(SVal::Elem(f.code()))
            }
            TermKind::Lam(..) => Ok(SVal::Clo(env.clone(), t.clone())),
            TermKind::App(f, a) => {
                let fv = self.eval(f, env)?;
                let av = self.eval(a, env)?;
                self.apply(&fv, f.ty(), av)
            }
            _ => Err(ModelError::Unsupported("products and T have no P-model value".into()).into()),
        }
    }

    /// Applies a value of type `fty` to an argument.
    pub(crate) fn apply(&mut self, f: &SVal, fty: Ty, a: SVal) -> Result<SVal, EvalErr> {
        let (dom, cod) = fty.as_arrow().expect("application at arrow type");
        match f {
            SVal::Elem(code) => {
                let x = self.materialize(&a, dom)?;
                let cb = self.model.cardinality(cod)?;
                let place = checked_pow(cb, x).expect("digit place below cardinality");
                Ok(SVal::Elem((code / place) % cb))
            }
            SVal::Clo(env, lam) => {
                let TermKind::Lam(_, body) = lam.kind() else { unreachable!() };
                let env = Some(Rc::new(SEnvNode { value: a, next: env.clone() }));
                self.eval(body, &env)
            }
            SVal::Oracle(j, args) => {
                let x = self.materialize(&a, dom)?;
                let mut point = (**args).clone();
                point.push(x);
                if matches!(cod.kind(), TyKind::Atom(_)) {
                    match self.oracles.tables[*j].get(&point) {
                        Some(&v) => Ok(SVal::Elem(v)),
                        None => Err(EvalErr::Need { oracle: *j, point }),
                    }
                } else {
                    Ok(SVal::Oracle(*j, Rc::new(point)))
                }
            }
        }
    }

    /// The canonical code of a value of type `ty`.
    pub(crate) fn materialize(&mut self, v: &SVal, ty: Ty) -> Result<u64, EvalErr> {
        if let SVal::Elem(c) = v {
            return Ok(*c);
        }
        let (dom, cod) = ty.as_arrow().expect("non-element value at arrow type");
        let ca = self.model.cardinality(dom)?;
        let cb = self.model.cardinality(cod)?;
        self.model.cardinality(ty)?;
        let mut code = 0u64;
        let mut place = 1u64;
        for x in 0..ca {
            let r = self.apply(v, ty, SVal::Elem(x))?;
            let d = self.materialize(&r, cod)?;
            code += d * place;
            if x + 1 < ca {
                place *= cb;
            }
        }
        Ok(code)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerals::church;
    use crate::syntax::{parse_type, read_term, Context};

    #[test]
    fn identity_and_church_one() {
        let m = PModel::new(2).unwrap();
        let id = read_term("\\x:p. x", &Context::new()).unwrap();
        let v = eval(&id, &Assignment::new(), m).unwrap();
        assert_eq!(v.table().unwrap().iter().map(|x| x.code()).collect::<Vec<_>>(), vec![0, 1]);
        let one = eval(&church(1, 0), &Assignment::new(), m).unwrap();
        for f in m.enumerate(parse_type("p->p").unwrap()).unwrap() {
            assert_eq!(one.apply(&f).unwrap(), f);
        }
    }

    #[test]
    fn free_variables() {
        let m = PModel::new(3).unwrap();
        let ctx = Context::new().with("f", parse_type("p->p").unwrap()).unwrap();
        let t = read_term("\\y:p. f (f y)", &ctx).unwrap();
        assert!(matches!(eval(&t, &Assignment::new(), m), Err(ModelError::UnboundVariable(_))));
        let succ = Functional::from_table(
            m,
            parse_type("p->p").unwrap(),
            &[m.ordinal(1).unwrap(), m.ordinal(2).unwrap(), m.ordinal(0).unwrap()],
        )
        .unwrap();
        let v = eval(&t, &Assignment::new().with("f", succ), m).unwrap();
        assert_eq!(v.apply(&m.ordinal(2).unwrap()).unwrap(), m.ordinal(1).unwrap());
    }
}
