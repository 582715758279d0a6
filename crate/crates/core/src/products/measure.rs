//! The complexity measure `c(·)` on types.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use once_cell::sync::Lazy;
use parking_lot::RwLock;

use crate::syntax::{Ty, TyKind};

/// Largest measure computed exactly, in bits.
pub const MEASURE_CAP_BITS: u64 = 1 << 12;

/// A measure value, or the fact that it exceeds the cap (every measure is at least 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Measure {
    Exact(BigUint),
    BeyondCap,
}

impl Measure {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Measure::Exact(n) => Some(n),
            Measure::BeyondCap => None,
        }
    }
}

/// `c(A × B) = (c(A) + 1) c(B)`, `c(A → B) = c(B)^{c(A)}`, atoms and `T` weigh `weight`.
pub fn measure(ty: Ty, weight: u32) -> Measure {
    assert!(weight >= 2, "atom weight must be at least 2");
    if let Some(m) = MEMO.read().get(&(ty.id(), weight)) {
        return m.clone();
    }
    let m = compute(ty, weight);
    MEMO.write().insert((ty.id(), weight), m.clone());
    m
}

static MEMO: Lazy<RwLock<HashMap<(u32, u32), Measure>>> = Lazy::new(Default::default);

fn compute(ty: Ty, weight: u32) -> Measure {
    match ty.kind() {
        TyKind::Atom(_) | TyKind::Top => Measure::Exact(BigUint::from(weight)),
        TyKind::Prod(a, b) => match (measure(a, weight), measure(b, weight)) {
            (Measure::Exact(x), Measure::Exact(y)) => capped((x + 1u32) * y),
            _ => Measure::BeyondCap,
        },
        TyKind::Arrow(a, b) => match (measure(a, weight), measure(b, weight)) {
            (Measure::Exact(x), Measure::Exact(y)) => match x.to_u64() {
                Some(e) if e as f64 * log2(&y) <= MEASURE_CAP_BITS as f64 + 1.0 => capped(pow(&y, e)),
                _ => Measure::BeyondCap,
            },
            _ => Measure::BeyondCap,
        },
    }
}

/// `log₂ n` to double precision.
fn log2(n: &BigUint) -> f64 {
    let bits = n.bits();
    let shift = bits.saturating_sub(64);
    (n >> shift).to_f64().unwrap_or(f64::MAX).log2() + shift as f64
}

fn pow(b: &BigUint, mut e: u64) -> BigUint {
    let mut base = b.clone();
    let mut acc = BigUint::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

fn capped(n: BigUint) -> Measure {
    if n.bits() > MEASURE_CAP_BITS {
        Measure::BeyondCap
    } else {
        Measure::Exact(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;

    fn m(s: &str) -> BigUint {
        measure(parse_type(s).unwrap(), 2).exact().unwrap().clone()
    }

    #[test]
    fn small_values() {
        assert_eq!(m("p"), BigUint::from(2u32));
        assert_eq!(m("p->p*p"), BigUint::from(36u32));
        assert_eq!(m("(p->p)*(p->p)"), BigUint::from(20u32));
        assert_eq!(m("p*T"), BigUint::from(6u32));
        assert_eq!(measure(parse_type("p").unwrap(), 3), Measure::Exact(BigUint::from(3u32)));
    }

    #[test]
    fn towers_exceed_the_cap() {
        let t = parse_type("((((p->p)->p)->p)->p)->p").unwrap();
        assert_eq!(measure(t, 2), Measure::BeyondCap);
    }
}
