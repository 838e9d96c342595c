//! Executable checks of the closure properties of `M`: it is the least set
//! containing the base and closed under the operations, the intersection of
//! all such sets, unchanged by adding derivable base elements or operations
//! it is closed under, and every property the base has and the operations
//! preserve holds on all of it.

mod predicates;

use std::collections::BTreeSet;

use crate::engine::{for_each_tuple, saturate, Mode, SaturationResult};
use crate::error::{Error, Result};
use crate::model::{Element, Instance, Operation, Value};

pub use predicates::Predicate;

/// Largest explicit universe the subset enumerations accept.
pub const MAX_BRUTE_UNIVERSE: usize = 20;

/// What produced a counterexample: a missing base element or an operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpRef {
    Base,
    Op(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Counterexample<E> {
    pub op: OpRef,
    /// Empty for base omissions.
    pub args: Vec<E>,
    /// The escaping result, or the missing base element.
    pub result: E,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport<E = Value> {
    pub counterexamples: Vec<Counterexample<E>>,
}

impl<E> ClosureReport<E> {
    pub fn is_closed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Reports every defined result of the listed operations, over tuples drawn
/// from `set`, that falls outside `set`.
pub fn closure_under<E: Element>(
    set: &BTreeSet<E>,
    instance: &Instance<E>,
    op_ids: &[usize],
) -> Result<ClosureReport<E>> {
    let pool: Vec<E> = set.iter().cloned().collect();
    let mut counterexamples = Vec::new();
    for &id in op_ids {
        let op = instance.op(id).ok_or_else(|| Error::InvalidInput(format!("no operation with id {id}")))?;
        let pools = vec![pool.as_slice(); op.arity()];
        let mut failure = None;
        for_each_tuple(&pools, |t| match instance.apply(id, t) {
            Ok(Some(r)) => {
                if !set.contains(&r) {
                    counterexamples.push(Counterexample { op: OpRef::Op(id), args: t.to_vec(), result: r });
                }
                true
            }
            Ok(None) => true,
            Err(e) => {
                failure = Some(e);
                false
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
    }
    Ok(ClosureReport { counterexamples })
}

/// Whether `candidate` contains the base and is closed under every operation.
/// Missing base elements are reported with `op = OpRef::Base`.
pub fn is_recursively_closed<E: Element>(candidate: &BTreeSet<E>, instance: &Instance<E>) -> Result<ClosureReport<E>> {
    let mut counterexamples: Vec<Counterexample<E>> = instance
        .base()
        .iter()
        .filter(|b| !candidate.contains(b))
        .map(|b| Counterexample { op: OpRef::Base, args: Vec::new(), result: b.clone() })
        .collect();
    let all_ops: Vec<usize> = (0..instance.ops().len()).collect();
    counterexamples.extend(closure_under(candidate, instance, &all_ops)?.counterexamples);
    Ok(ClosureReport { counterexamples })
}

/// Operation applications over an explicit universe, as bitmasks.
struct ClosureTable {
    base_mask: u32,
    /// (argument mask, result index or `None` when the result leaves the universe)
    edges: Vec<(u32, Option<usize>)>,
    size: usize,
}

impl ClosureTable {
    fn build<E: Element>(instance: &Instance<E>, universe: &[E]) -> Result<(Vec<E>, Self)> {
        let mut elems: Vec<E> = universe.to_vec();
        elems.sort();
        elems.dedup();
        if elems.len() > MAX_BRUTE_UNIVERSE {
            return Err(Error::UniverseTooLarge { size: elems.len(), cap: MAX_BRUTE_UNIVERSE });
        }
        let mut base_mask = 0u32;
        for b in instance.base() {
            match elems.binary_search(b) {
                Ok(i) => base_mask |= 1 << i,
                Err(_) => return Err(Error::NoClosedSuperset),
            }
        }
        let mut edges = Vec::new();
        let indices: Vec<usize> = (0..elems.len()).collect();
        for op in instance.ops() {
            let pools = vec![indices.as_slice(); op.arity()];
            let mut failure = None;
            for_each_tuple(&pools, |t| {
                let args: Vec<E> = t.iter().map(|&i| elems[i].clone()).collect();
                match instance.apply(op.id(), &args) {
                    Ok(Some(r)) => {
                        let mask = t.iter().fold(0u32, |m, &i| m | 1 << i);
                        edges.push((mask, elems.binary_search(&r).ok()));
                        true
                    }
                    Ok(None) => true,
                    Err(e) => {
                        failure = Some(e);
                        false
                    }
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let size = elems.len();
        Ok((elems, ClosureTable { base_mask, edges, size }))
    }

    fn is_closed(&self, set: u32) -> bool {
        set & self.base_mask == self.base_mask
            && self.edges.iter().all(|&(args, r)| args & set != args || r.is_some_and(|i| set & (1 << i) != 0))
    }

    /// Every subset of the universe that contains the base.
    fn supersets_of_base(&self) -> impl Iterator<Item = u32> + '_ {
        let free: Vec<usize> = (0..self.size).filter(|i| self.base_mask & (1 << i) == 0).collect();
        (0u32..1 << free.len()).map(move |bits| {
            free.iter().enumerate().fold(self.base_mask, |m, (j, &i)| if bits & (1 << j) != 0 { m | 1 << i } else { m })
        })
    }

    fn members<E: Clone + Ord>(elems: &[E], mask: u32) -> BTreeSet<E> {
        elems.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, e)| e.clone()).collect()
    }
}

/// The least subset of `universe` containing the base and closed under the
/// operations, found by enumerating every subset that contains the base.
/// `universe` plays the carrier and should itself be closed.
pub fn brute_minimal_closed<E: Element>(instance: &Instance<E>, universe: &[E]) -> Result<BTreeSet<E>> {
    let (elems, table) = ClosureTable::build(instance, universe)?;
    let closed: Vec<u32> = table.supersets_of_base().filter(|&s| table.is_closed(s)).collect();
    let smallest = *closed.iter().min_by_key(|s| s.count_ones()).ok_or(Error::NoClosedSuperset)?;
    // a smallest closed set inside every closed set is the unique inclusion-minimal one
    assert!(
        closed.iter().all(|&s| s & smallest == smallest),
        "closed sets have more than one inclusion-minimal element"
    );
    Ok(ClosureTable::members(&elems, smallest))
}

/// The intersection of all subsets of `universe` that contain the base and
/// are closed under the operations.
pub fn brute_intersection_closed<E: Element>(instance: &Instance<E>, universe: &[E]) -> Result<BTreeSet<E>> {
    let (elems, table) = ClosureTable::build(instance, universe)?;
    let mut any = false;
    let mut meet = u32::MAX;
    for s in table.supersets_of_base().filter(|&s| table.is_closed(s)) {
        any = true;
        meet &= s;
    }
    if !any {
        return Err(Error::NoClosedSuperset);
    }
    Ok(ClosureTable::members(&elems, meet))
}

fn fixpoint<E: Element>(instance: &Instance<E>) -> Result<SaturationResult<E>> {
    let r = saturate(instance, Mode::SemiNaive)?;
    if !r.is_fixpoint() {
        return Err(Error::NotFixpoint(r.termination().to_string()));
    }
    Ok(r)
}

fn element_set<E: Element>(r: &SaturationResult<E>) -> BTreeSet<E> {
    r.elements().cloned().collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseExtensionReport<E = Value> {
    /// Whether each extra element is already in `M`, in input order.
    pub derivability: Vec<(E, bool)>,
    /// `None` when some extra element is not in `M`, so the hypothesis fails
    /// and the extended saturation is not compared.
    pub sets_equal: Option<bool>,
}

impl<E: Element> BaseExtensionReport<E> {
    pub fn hypothesis_holds(&self) -> bool {
        self.derivability.iter().all(|(_, ok)| *ok)
    }

    pub fn violations(&self) -> Vec<&E> {
        self.derivability.iter().filter(|(_, ok)| !ok).map(|(e, _)| e).collect()
    }
}

/// Adds `extra_base` to the base when every extra element is already in `M`,
/// and compares the resulting element set with `M`.
pub fn check_base_extension<E: Element>(instance: &Instance<E>, extra_base: &[E]) -> Result<BaseExtensionReport<E>> {
    let m = fixpoint(instance)?;
    let derivability: Vec<(E, bool)> = extra_base.iter().map(|b| (b.clone(), m.contains(b))).collect();
    let mut report = BaseExtensionReport { derivability, sets_equal: None };
    if report.hypothesis_holds() {
        let extended = fixpoint(&instance.with_extra_base(extra_base)?)?;
        report.sets_equal = Some(element_set(&extended) == element_set(&m));
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct OpExtensionReport<E: Element = Value> {
    /// The instance with the extra operations appended; counterexample op ids refer to it.
    pub extended: Instance<E>,
    /// Closure of `M` under the extra operations only.
    pub closure: ClosureReport<E>,
    /// `None` when `M` is not closed under the extras.
    pub sets_equal: Option<bool>,
}

/// Adds `extra_ops` when `M` is closed under each of them, and compares the
/// resulting element set with `M`.
pub fn check_op_extension<E: Element>(
    instance: &Instance<E>,
    extra_ops: Vec<Operation<E>>,
) -> Result<OpExtensionReport<E>> {
    let m = fixpoint(instance)?;
    let first_extra = instance.ops().len();
    let extended = instance.with_extra_ops(extra_ops)?;
    let extra_ids: Vec<usize> = (first_extra..extended.ops().len()).collect();
    let m_set = element_set(&m);
    let closure = closure_under(&m_set, &extended, &extra_ids)?;
    let sets_equal = if closure.is_closed() { Some(element_set(&fixpoint(&extended)?) == m_set) } else { None };
    Ok(OpExtensionReport { extended, closure, sets_equal })
}

#[derive(Debug, Clone)]
pub struct CombinedExtensionReport<E: Element = Value> {
    pub base: BaseExtensionReport<E>,
    /// Run on the base-extended instance, or on the original one when the
    /// base hypothesis failed, so every violation is reported.
    pub ops: OpExtensionReport<E>,
}

impl<E: Element> CombinedExtensionReport<E> {
    pub fn sets_equal(&self) -> Option<bool> {
        match (self.base.sets_equal, self.ops.sets_equal) {
            (Some(a), Some(b)) => Some(a && b),
            _ => None,
        }
    }
}

/// Extra base elements and extra operations together: the base check first,
/// then the operation check on the base-extended instance.
pub fn check_combined_extension<E: Element>(
    instance: &Instance<E>,
    extra_base: &[E],
    extra_ops: Vec<Operation<E>>,
) -> Result<CombinedExtensionReport<E>> {
    let base = check_base_extension(instance, extra_base)?;
    let ops = if base.hypothesis_holds() {
        check_op_extension(&instance.with_extra_base(extra_base)?, extra_ops)?
    } else {
        check_op_extension(instance, extra_ops)?
    };
    Ok(CombinedExtensionReport { base, ops })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conclusion {
    Proven,
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InductionReport<E = Value> {
    pub base_failures: Vec<E>,
    /// Applications whose arguments lie in `M` and satisfy the property while
    /// the result does not.
    pub preservation_failures: Vec<Counterexample<E>>,
    pub conclusion: Conclusion,
    /// Elements of `M` violating the property, found by checking each one.
    pub exhaustive_check: Vec<E>,
}

/// Structural induction over the construction of `M`: the property holds on
/// the base and every operation preserves it on arguments from `M`. The
/// conclusion is then checked directly against every element of `M`.
pub fn check_property_induction<E: Element>(
    instance: &Instance<E>,
    predicate: impl Fn(&E) -> bool,
) -> Result<InductionReport<E>> {
    let m = fixpoint(instance)?;
    let base_failures: Vec<E> = instance.base().iter().filter(|b| !predicate(b)).cloned().collect();
    let satisfying: Vec<E> = m.elements().filter(|e| predicate(e)).cloned().collect();
    let mut preservation_failures = Vec::new();
    for op in instance.ops() {
        let pools = vec![satisfying.as_slice(); op.arity()];
        let mut failure = None;
        for_each_tuple(&pools, |t| match instance.apply(op.id(), t) {
            Ok(Some(r)) => {
                if !predicate(&r) {
                    preservation_failures.push(Counterexample { op: OpRef::Op(op.id()), args: t.to_vec(), result: r });
                }
                true
            }
            Ok(None) => true,
            Err(e) => {
                failure = Some(e);
                false
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
    }
    let conclusion = if base_failures.is_empty() && preservation_failures.is_empty() {
        Conclusion::Proven
    } else {
        Conclusion::Refuted
    };
    let exhaustive_check = m.elements().filter(|e| !predicate(e)).cloned().collect();
    Ok(InductionReport { base_failures, preservation_failures, conclusion, exhaustive_check })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{build_cyclic_group, build_identity_closure, build_modular, build_span, Flavor, ModOp};
    use crate::model::{Limits, Universe};

    fn z5() -> Instance {
        build_cyclic_group(5, 1, Flavor::Additive).unwrap()
    }

    fn z(xs: &[i64], m: u64) -> BTreeSet<Value> {
        xs.iter().map(|&x| Value::int(x, m)).collect()
    }

    fn v6(xs: &[i64]) -> BTreeSet<Value> {
        xs.iter().map(|&x| Value::vec(&[x], 6)).collect()
    }

    fn span6() -> Instance {
        build_span(6, 1, vec![Value::vec(&[2], 6)]).unwrap()
    }

    #[test]
    fn closure_reports() {
        assert!(is_recursively_closed(&z(&[0, 1, 2, 3, 4], 5), &z5()).unwrap().is_closed());
        let report = is_recursively_closed(&z(&[1, 2], 5), &z5()).unwrap();
        assert!(!report.is_closed());
        assert!(report.counterexamples.contains(&Counterexample {
            op: OpRef::Op(0),
            args: vec![Value::int(1, 5), Value::int(2, 5)],
            result: Value::int(3, 5),
        }));
        assert!(is_recursively_closed(&v6(&[0, 2, 4]), &span6()).unwrap().is_closed());

        let report = is_recursively_closed(&z(&[0, 2], 5), &z5()).unwrap();
        assert_eq!(
            report.counterexamples[0],
            Counterexample { op: OpRef::Base, args: vec![], result: Value::int(1, 5) }
        );
    }

    #[test]
    fn brute_force_routes() {
        let all5: Vec<Value> = z(&[0, 1, 2, 3, 4], 5).into_iter().collect();
        assert_eq!(brute_minimal_closed(&z5(), &all5).unwrap(), z(&[0, 1, 2, 3, 4], 5));
        assert_eq!(brute_intersection_closed(&z5(), &all5).unwrap(), z(&[0, 1, 2, 3, 4], 5));

        let ident = build_identity_closure(vec![Value::sym("x1"), Value::sym("x2")]).unwrap();
        let u: Vec<Value> = ["x1", "x2", "x3"].iter().map(|s| Value::sym(*s)).collect();
        let want: BTreeSet<Value> = u[..2].iter().cloned().collect();
        assert_eq!(brute_minimal_closed(&ident, &u).unwrap(), want);
        assert_eq!(brute_intersection_closed(&ident, &u).unwrap(), want);

        let all6 = Universe::Vectors { modulus: 6, dimension: 1 }.enumerate(20).unwrap();
        assert_eq!(brute_minimal_closed(&span6(), &all6).unwrap(), v6(&[0, 2, 4]));
        assert_eq!(brute_intersection_closed(&span6(), &all6).unwrap(), v6(&[0, 2, 4]));
    }

    #[test]
    fn brute_force_errors() {
        let big: Vec<Value> = (0..21).map(|x| Value::int(x, 21)).collect();
        let inst = build_cyclic_group(21, 1, Flavor::Additive).unwrap();
        assert_eq!(brute_minimal_closed(&inst, &big).unwrap_err(), Error::UniverseTooLarge { size: 21, cap: 20 });
        // universe missing the base, and a universe that is not closed
        assert_eq!(brute_minimal_closed(&z5(), &[Value::int(0, 5)]).unwrap_err(), Error::NoClosedSuperset);
        let open: Vec<Value> = z(&[1, 2], 5).into_iter().collect();
        assert_eq!(brute_intersection_closed(&z5(), &open).unwrap_err(), Error::NoClosedSuperset);
    }

    #[test]
    fn mask_closure_agrees_with_set_closure() {
        let inst = build_modular(6, &[2], &[ModOp::Add, ModOp::Succ], Limits::default()).unwrap();
        let all: Vec<Value> = (0..6).map(|x| Value::int(x, 6)).collect();
        let (elems, table) = ClosureTable::build(&inst, &all).unwrap();
        for s in table.supersets_of_base() {
            let set = ClosureTable::members(&elems, s);
            assert_eq!(table.is_closed(s), is_recursively_closed(&set, &inst).unwrap().is_closed());
        }
    }

    #[test]
    fn base_extensions() {
        let r = check_base_extension(&z5(), &[Value::int(2, 5), Value::int(3, 5)]).unwrap();
        assert_eq!(r.sets_equal, Some(true));
        let r = check_base_extension(&z5(), &[]).unwrap();
        assert_eq!(r.sets_equal, Some(true));
        let r = check_base_extension(&span6(), &[Value::vec(&[5], 6)]).unwrap();
        assert!(!r.hypothesis_holds());
        assert_eq!(r.violations(), vec![&Value::vec(&[5], 6)]);
        assert_eq!(r.sets_equal, None);
    }

    #[test]
    fn op_extensions() {
        for op in [ModOp::Neg, ModOp::Double] {
            let r = check_op_extension(&z5(), vec![op.integer_op(5)]).unwrap();
            assert!(r.closure.is_closed());
            assert_eq!(r.sets_equal, Some(true));
        }
        let r = check_op_extension(&span6(), vec![ModOp::Succ.vector_op(6, 1).unwrap()]).unwrap();
        assert_eq!(r.sets_equal, None);
        let succ_id = span6().ops().len();
        assert!(r.closure.counterexamples.contains(&Counterexample {
            op: OpRef::Op(succ_id),
            args: vec![Value::vec(&[2], 6)],
            result: Value::vec(&[3], 6),
        }));
        assert_eq!(r.extended.op(succ_id).unwrap().name(), "succ");
    }

    #[test]
    fn combined_extension() {
        let r = check_combined_extension(
            &z5(),
            &[Value::int(2, 5), Value::int(3, 5)],
            vec![ModOp::Neg.integer_op(5), ModOp::Double.integer_op(5)],
        )
        .unwrap();
        assert_eq!(r.sets_equal(), Some(true));
    }

    #[test]
    fn induction() {
        let z10 = |b: i64| build_modular(10, &[b], &[ModOp::Add], Limits::default()).unwrap();
        let even = |v: &Value| matches!(v, Value::IntMod { value, .. } if value % 2 == 0);
        let r = check_property_induction(&z10(2), even).unwrap();
        assert_eq!(r.conclusion, Conclusion::Proven);
        assert!(r.exhaustive_check.is_empty());

        let r = check_property_induction(&z10(1), even).unwrap();
        assert_eq!(r.conclusion, Conclusion::Refuted);
        assert_eq!(r.base_failures, vec![Value::int(1, 10)]);

        let small = |v: &Value| matches!(v, Value::IntMod { value, .. } if *value <= 5);
        let r = check_property_induction(&z10(2), small).unwrap();
        assert_eq!(r.conclusion, Conclusion::Refuted);
        assert!(r.preservation_failures.contains(&Counterexample {
            op: OpRef::Op(0),
            args: vec![Value::int(2, 10), Value::int(4, 10)],
            result: Value::int(6, 10),
        }));
    }

    #[test]
    fn non_fixpoint_is_an_error() {
        let inst = z5().with_limits(Limits::default().with_max_order(2)).unwrap();
        assert!(matches!(check_property_induction(&inst, |_| true), Err(Error::NotFixpoint(_))));
    }
}
