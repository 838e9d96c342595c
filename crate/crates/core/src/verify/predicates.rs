use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instances::span_combinations;
use crate::model::{Instance, Universe, Value};

/// Builtin decidable properties of values.
///
/// Numeric predicates look at the residue of an integer, the term of an
/// indexed value, or every coordinate of a vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    /// The value is even.
    Parity,
    ValueRange {
        min: i64,
        max: i64,
    },
    Divisibility {
        divisor: i64,
    },
    /// Every string of a language has length at most `max`.
    StringLength {
        max: usize,
    },
    /// The vector is a `Z_m`-combination of `generators`, decided by
    /// enumerating all coefficient vectors.
    Representable {
        combinations: BTreeSet<Value>,
    },
}

fn numbers(v: &Value) -> Option<Vec<i64>> {
    match v {
        Value::IntMod { value, .. } | Value::Indexed { value, .. } => Some(vec![*value]),
        Value::VecMod { coords, .. } => Some(coords.iter().map(|&c| c as i64).collect()),
        _ => None,
    }
}

impl Predicate {
    /// Linear-combination representability over the generators of a span instance.
    pub fn representable_in(instance: &Instance) -> Result<Self> {
        match instance.universe() {
            Universe::Vectors { modulus, dimension } => {
                Ok(Predicate::Representable { combinations: span_combinations(*modulus, *dimension, instance.base())? })
            }
            other => {
                Err(Error::InvalidInput(format!("representability needs a vector universe, not {}", other.kind())))
            }
        }
    }

    pub fn holds(&self, v: &Value) -> bool {
        match self {
            Predicate::Parity => numbers(v).is_some_and(|xs| xs.iter().all(|x| x % 2 == 0)),
            Predicate::ValueRange { min, max } => numbers(v).is_some_and(|xs| xs.iter().all(|x| min <= x && x <= max)),
            Predicate::Divisibility { divisor } => {
                *divisor != 0 && numbers(v).is_some_and(|xs| xs.iter().all(|x| x % divisor == 0))
            }
            Predicate::StringLength { max } => match v {
                Value::Lang(l) => l.strings().iter().all(|s| s.len() <= *max),
                _ => false,
            },
            Predicate::Representable { combinations } => combinations.contains(v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::build_span;
    use crate::model::Lang;

    #[test]
    fn builtins() {
        assert!(Predicate::Parity.holds(&Value::int(4, 10)));
        assert!(!Predicate::Parity.holds(&Value::vec(&[2, 3], 6)));
        assert!(!Predicate::Parity.holds(&Value::sym("p")));
        assert!(Predicate::ValueRange { min: 0, max: 5 }.holds(&Value::indexed(9, 5)));
        assert!(!Predicate::Divisibility { divisor: 3 }.holds(&Value::int(4, 10)));
        assert!(!Predicate::Divisibility { divisor: 0 }.holds(&Value::int(0, 10)));
        let l = Value::Lang(Lang::new(["", "ab"], 3).unwrap());
        assert!(Predicate::StringLength { max: 2 }.holds(&l));
        assert!(!Predicate::StringLength { max: 1 }.holds(&l));
    }

    #[test]
    fn representability() {
        let inst = build_span(6, 1, vec![Value::vec(&[2], 6)]).unwrap();
        let p = Predicate::representable_in(&inst).unwrap();
        assert!(p.holds(&Value::vec(&[4], 6)));
        assert!(!p.holds(&Value::vec(&[3], 6)));
    }
}
