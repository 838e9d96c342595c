//! The carrier set, its operations and the instance datum: base elements,
//! operations and resource limits.

mod value;

use std::collections::BTreeSet;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use value::{canonicalize_element, compare_elements, string_order, Lang, Universe, Value};

/// A value of some carrier set.
///
/// `Ord` must be a strict total order on the values of one universe; the
/// engine uses it to enumerate argument tuples deterministically.
pub trait Element: Clone + Ord + Hash + Debug + Display + Send + Sync + 'static {
    type Universe: Clone + Debug + PartialEq + Send + Sync;

    /// Checks that `self` is a canonical value of `universe`.
    fn check_in(&self, universe: &Self::Universe) -> Result<()>;
}

macro_rules! plain_element {
    ($($t:ty),*) => {$(
        impl Element for $t {
            type Universe = ();

            fn check_in(&self, _: &()) -> Result<()> {
                Ok(())
            }
        }
    )*};
}

plain_element!(u8, u16, u32, u64, i32, i64);

/// Result of one evaluator call: `Ok(None)` means the operation is undefined
/// at the given arguments, `Err` carries a failure such as integer overflow.
pub type EvalResult<E> = std::result::Result<Option<E>, String>;

type Evaluator<E> = Arc<dyn Fn(&[E]) -> EvalResult<E> + Send + Sync>;

/// An n-ary partial operation on elements.
pub struct Operation<E> {
    id: usize,
    name: String,
    arity: usize,
    eval: Evaluator<E>,
}

impl<E> Clone for Operation<E> {
    fn clone(&self) -> Self {
        Operation { id: self.id, name: self.name.clone(), arity: self.arity, eval: Arc::clone(&self.eval) }
    }
}

impl<E> Debug for Operation<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operation").field("id", &self.id).field("name", &self.name).field("arity", &self.arity).finish()
    }
}

impl<E: Element> Operation<E> {
    /// The id is assigned when the operation is placed in an [`Instance`].
    pub fn new<F>(name: impl Into<String>, arity: usize, eval: F) -> Self
    where
        F: Fn(&[E]) -> EvalResult<E> + Send + Sync + 'static,
    {
        Operation { id: 0, name: name.into(), arity, eval: Arc::new(eval) }
    }

    /// A total operation.
    pub fn total<F>(name: impl Into<String>, arity: usize, f: F) -> Self
    where
        F: Fn(&[E]) -> E + Send + Sync + 'static,
    {
        Self::new(name, arity, move |args| Ok(Some(f(args))))
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Evaluates the operation; `Ok(None)` when it is undefined at `args`.
    pub fn apply(&self, args: &[E]) -> Result<Option<E>> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { op: self.name.clone(), expected: self.arity, got: args.len() });
        }
        (self.eval)(args).map_err(|reason| Error::Evaluation { op: self.name.clone(), reason })
    }
}

/// Free-function form of [`Operation::apply`].
pub fn apply_operation<E: Element>(op: &Operation<E>, args: &[E]) -> Result<Option<E>> {
    op.apply(args)
}

/// Termination guards for saturations over infinite carriers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_order: usize,
    pub max_elements: usize,
    pub max_tuple_evals: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_order: 1000, max_elements: 100_000, max_tuple_evals: 100_000_000 }
    }
}

impl Limits {
    pub fn new(max_order: usize, max_elements: usize, max_tuple_evals: u64) -> Result<Self> {
        if max_order == 0 || max_elements == 0 || max_tuple_evals == 0 {
            return Err(Error::InvalidInstance("limits must be strictly positive".into()));
        }
        Ok(Limits { max_order, max_elements, max_tuple_evals })
    }

    pub fn with_max_order(self, max_order: usize) -> Self {
        Limits { max_order, ..self }
    }
}

/// Base elements, operations and limits over a universe.
#[derive(Debug, Clone)]
pub struct Instance<E: Element = Value> {
    universe: E::Universe,
    base: Vec<E>,
    ops: Vec<Operation<E>>,
    limits: Limits,
}

impl<E: Element> Instance<E> {
    pub fn new(universe: E::Universe, base: Vec<E>, ops: Vec<Operation<E>>, limits: Limits) -> Result<Self> {
        if base.is_empty() {
            return Err(Error::EmptyBase);
        }
        if ops.is_empty() {
            return Err(Error::InvalidInstance("at least one operation is required".into()));
        }
        Limits::new(limits.max_order, limits.max_elements, limits.max_tuple_evals)?;
        let mut seen = BTreeSet::new();
        for b in &base {
            b.check_in(&universe)?;
            if !seen.insert(b) {
                return Err(Error::InvalidInstance(format!("duplicate base element {b}")));
            }
        }
        let ops = ops
            .into_iter()
            .enumerate()
            .map(|(id, op)| {
                if op.arity == 0 {
                    return Err(Error::InvalidInstance(format!("operation `{}` has arity 0", op.name)));
                }
                Ok(Operation { id, ..op })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance { universe, base, ops, limits })
    }

    pub fn universe(&self) -> &E::Universe {
        &self.universe
    }

    /// Base elements in declaration order.
    pub fn base(&self) -> &[E] {
        &self.base
    }

    pub fn is_base(&self, e: &E) -> bool {
        self.base.contains(e)
    }

    pub fn ops(&self) -> &[Operation<E>] {
        &self.ops
    }

    pub fn op(&self, id: usize) -> Option<&Operation<E>> {
        self.ops.get(id)
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(|op| op.arity).max().unwrap_or(0)
    }

    pub fn with_limits(&self, limits: Limits) -> Result<Self> {
        Limits::new(limits.max_order, limits.max_elements, limits.max_tuple_evals)?;
        Ok(Instance { limits, ..self.clone() })
    }

    /// Applies operation `op_id` and checks that a defined result lies in the universe.
    pub fn apply(&self, op_id: usize, args: &[E]) -> Result<Option<E>> {
        let op = self.ops.get(op_id).ok_or_else(|| Error::InvalidInput(format!("no operation with id {op_id}")))?;
        let out = op.apply(args)?;
        if let Some(e) = &out {
            e.check_in(&self.universe).map_err(|err| Error::Evaluation {
                op: op.name.clone(),
                reason: format!("result leaves the universe: {err}"),
            })?;
        }
        Ok(out)
    }

    /// The same instance with `extra` appended to the base; elements already
    /// in the base are skipped.
    pub fn with_extra_base(&self, extra: &[E]) -> Result<Self> {
        let mut base = self.base.clone();
        for e in extra {
            if !base.contains(e) {
                base.push(e.clone());
            }
        }
        Instance::new(self.universe.clone(), base, self.ops.clone(), self.limits)
    }

    /// The same instance with `extra` appended to the operations.
    pub fn with_extra_ops(&self, extra: Vec<Operation<E>>) -> Result<Self> {
        let mut ops = self.ops.clone();
        ops.extend(extra);
        Instance::new(self.universe.clone(), self.base.clone(), ops, self.limits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn add_mod5() -> Operation<Value> {
        Operation::total("add", 2, |args: &[Value]| match (&args[0], &args[1]) {
            (Value::IntMod { value: a, .. }, Value::IntMod { value: b, .. }) => Value::int(a + b, 5),
            _ => unreachable!(),
        })
    }

    #[test]
    fn apply_add_mod5() {
        let op = add_mod5();
        assert_eq!(apply_operation(&op, &[Value::int(3, 5), Value::int(4, 5)]).unwrap(), Some(Value::int(2, 5)));
        assert!(matches!(
            apply_operation(&op, &[Value::int(3, 5)]),
            Err(Error::ArityMismatch { expected: 2, got: 1, .. })
        ));
    }

    #[test]
    fn instance_validation() {
        let u = Universe::Integers { modulus: Some(5) };
        assert_eq!(
            Instance::new(u.clone(), vec![], vec![add_mod5()], Limits::default()).unwrap_err(),
            Error::EmptyBase
        );
        assert!(Instance::new(u.clone(), vec![Value::int(1, 5)], vec![], Limits::default()).is_err());
        assert!(Instance::new(
            u.clone(),
            vec![Value::int(1, 5), Value::int(1, 5)],
            vec![add_mod5()],
            Limits::default()
        )
        .is_err());
        assert!(Instance::new(u.clone(), vec![Value::int(1, 7)], vec![add_mod5()], Limits::default()).is_err());
        assert!(Limits::new(0, 1, 1).is_err());

        let inst = Instance::new(u, vec![Value::int(1, 5)], vec![add_mod5(), add_mod5()], Limits::default()).unwrap();
        assert_eq!(inst.ops()[1].id(), 1);
        let ext = inst.with_extra_base(&[Value::int(1, 5), Value::int(2, 5)]).unwrap();
        assert_eq!(ext.base(), &[Value::int(1, 5), Value::int(2, 5)]);
    }

    #[test]
    fn instance_apply_rejects_results_outside_universe() {
        let u = Universe::Integers { modulus: Some(5) };
        let escape = Operation::total("escape", 1, |_: &[Value]| Value::int(1, 7));
        let inst = Instance::new(u, vec![Value::int(1, 5)], vec![escape], Limits::default()).unwrap();
        assert!(matches!(inst.apply(0, &[Value::int(1, 5)]), Err(Error::Evaluation { .. })));
    }
}
