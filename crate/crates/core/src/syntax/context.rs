//! Typing contexts for free variables.

use super::types::Ty;
use super::TypeError;

/// An ordered list of distinct free-variable names with their types.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    vars: Vec<(String, Ty)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn with(mut self, name: &str, ty: Ty) -> Result<Context, TypeError> {
        self.push(name, ty)?;
        Ok(self)
    }

    pub fn push(&mut self, name: &str, ty: Ty) -> Result<(), TypeError> {
        if self.vars.iter().any(|(n, _)| n == name) {
            return Err(TypeError::IllTyped {
                term: name.to_string(),
                reason: "variable declared twice in context".into(),
            });
        }
        self.vars.push((name.to_string(), ty));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<Ty> {
        self.vars.iter().find(|(n, _)| n == name).map(|(_, t)| *t)
    }

    pub fn vars(&self) -> &[(String, Ty)] {
        &self.vars
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }
}

impl FromIterator<(String, Ty)> for Context {
    fn from_iter<I: IntoIterator<Item = (String, Ty)>>(iter: I) -> Context {
        let mut c = Context::new();
        for (n, t) in iter {
            if c.get(&n).is_none() {
                c.vars.push((n, t));
            }
        }
        c
    }
}
