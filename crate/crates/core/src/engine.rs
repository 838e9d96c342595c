//! Stratified saturation of an instance.
//!
//! `M_1` is the base. Round `k` computes `M_{k+1}`: every defined operation
//! result over the elements of `M_1 ∪ … ∪ M_k` that is not already among them.
//! Naive mode re-enumerates every argument tuple each round; semi-naive mode
//! only enumerates tuples with at least one component in the frontier `M_k`,
//! so each `(operation, tuple)` pair is evaluated at most once per run.
//!
//! The witness of a derived element is its first producer under
//! (operation declaration order, lexicographic tuple order). Both modes
//! record the same witnesses: a tuple over `M_1 ∪ … ∪ M_k` producing a new
//! element must touch `M_k`, otherwise the element would be older.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Absence, Error, Result};
use crate::model::{Element, Instance, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Naive,
    SemiNaive,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Naive => "naive",
            Mode::SemiNaive => "semi-naive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    Fixpoint,
    MaxOrderHit,
    MaxElementsHit,
    MaxTupleEvalsHit,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::Fixpoint => "fixpoint",
            Termination::MaxOrderHit => "max_order_hit",
            Termination::MaxElementsHit => "max_elements_hit",
            Termination::MaxTupleEvalsHit => "max_tuple_evals_hit",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How an element entered `M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Witness<E> {
    Base,
    Derived { op: usize, args: Vec<E> },
}

/// Counters for one round, i.e. the computation of one stratum `M_{k+1}`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RoundStats {
    pub tuples_enumerated: u64,
    pub evaluator_calls: u64,
    pub undefined: u64,
    /// Defined results that were already in `M_1 ∪ … ∪ M_k` or already found this round.
    pub duplicates: u64,
}

#[derive(Debug, Clone)]
pub struct SaturationResult<E: Element = Value> {
    strata: Vec<Vec<E>>,
    orders: BTreeMap<E, usize>,
    witnesses: BTreeMap<E, Witness<E>>,
    rounds: Vec<RoundStats>,
    mode: Mode,
    termination: Termination,
}

impl<E: Element> SaturationResult<E> {
    /// Assembles a result without checking any invariant. Meant for reports
    /// and for exercising [`partition_report`] on corrupted data.
    pub fn from_parts(
        strata: Vec<Vec<E>>,
        orders: BTreeMap<E, usize>,
        witnesses: BTreeMap<E, Witness<E>>,
        rounds: Vec<RoundStats>,
        mode: Mode,
        termination: Termination,
    ) -> Self {
        SaturationResult { strata, orders, witnesses, rounds, mode, termination }
    }

    /// `strata()[p - 1]` is `M_p`, sorted.
    pub fn strata(&self) -> &[Vec<E>] {
        &self.strata
    }

    pub fn orders(&self) -> &BTreeMap<E, usize> {
        &self.orders
    }

    pub fn witnesses(&self) -> &BTreeMap<E, Witness<E>> {
        &self.witnesses
    }

    /// Per-round statistics; entry `k - 1` is the round that computed `M_{k+1}`.
    pub fn rounds(&self) -> &[RoundStats] {
        &self.rounds
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn is_fixpoint(&self) -> bool {
        self.termination == Termination::Fixpoint
    }

    pub fn contains(&self, e: &E) -> bool {
        self.orders.contains_key(e)
    }

    /// Every element reached, ascending.
    pub fn elements(&self) -> impl Iterator<Item = &E> {
        self.orders.keys()
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn total_evaluator_calls(&self) -> u64 {
        self.rounds.iter().map(|r| r.evaluator_calls).sum()
    }

    pub(crate) fn not_in_m(&self, e: &E) -> Error {
        Error::NotInM {
            element: e.to_string(),
            absence: if self.is_fixpoint() { Absence::Proven } else { Absence::Unknown },
        }
    }
}

/// Visits every tuple of `pools[0] × … × pools[n-1]` in lexicographic order.
/// The visitor returns `false` to stop early; the function then returns `false`.
pub(crate) fn for_each_tuple<E: Clone>(pools: &[&[E]], mut visit: impl FnMut(&[E]) -> bool) -> bool {
    if pools.iter().any(|p| p.is_empty()) {
        return true;
    }
    let n = pools.len();
    let mut idx = vec![0usize; n];
    let mut tuple: Vec<E> = pools.iter().map(|p| p[0].clone()).collect();
    loop {
        if !visit(&tuple) {
            return false;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < pools[i].len() {
                tuple[i] = pools[i][idx[i]].clone();
                break;
            }
            idx[i] = 0;
            tuple[i] = pools[i][0].clone();
        }
    }
}

enum RoundOutcome<E> {
    Complete(BTreeMap<E, Witness<E>>),
    Aborted(Termination),
}

struct Saturator<'a, E: Element> {
    instance: &'a Instance<E>,
    evals_so_far: u64,
}

impl<'a, E: Element> Saturator<'a, E> {
    /// Computes the next stratum from `all` (every element so far, sorted)
    /// and `frontier` (the last stratum, sorted).
    fn round(
        &mut self,
        mode: Mode,
        all: &[E],
        frontier: &[E],
        orders: &BTreeMap<E, usize>,
        stats: &mut RoundStats,
    ) -> Result<RoundOutcome<E>> {
        let limits = self.instance.limits();
        let mut fresh: BTreeMap<E, Witness<E>> = BTreeMap::new();
        let old: Vec<E> = match mode {
            Mode::Naive => Vec::new(),
            Mode::SemiNaive => all.iter().filter(|e| frontier.binary_search(e).is_err()).cloned().collect(),
        };
        let mut failure: Option<Error> = None;
        let mut abort: Option<Termination> = None;

        for op in self.instance.ops() {
            let n = op.arity();
            // semi-naive: split on the first frontier position j0; positions before
            // it draw from the old elements, after it from everything
            let pool_sets: Vec<Vec<&[E]>> = match mode {
                Mode::Naive => vec![vec![all; n]],
                Mode::SemiNaive => (0..n)
                    .map(|j0| {
                        (0..n)
                            .map(|j| match j.cmp(&j0) {
                                std::cmp::Ordering::Less => old.as_slice(),
                                std::cmp::Ordering::Equal => frontier,
                                std::cmp::Ordering::Greater => all,
                            })
                            .collect()
                    })
                    .collect(),
            };
            for pools in &pool_sets {
                let finished = for_each_tuple(pools, |tuple| {
                    stats.tuples_enumerated += 1;
                    if self.evals_so_far >= limits.max_tuple_evals {
                        abort = Some(Termination::MaxTupleEvalsHit);
                        return false;
                    }
                    self.evals_so_far += 1;
                    stats.evaluator_calls += 1;
                    let out = match self.instance.apply(op.id(), tuple) {
                        Ok(out) => out,
                        Err(err) => {
                            failure = Some(err);
                            return false;
                        }
                    };
                    let Some(e) = out else {
                        stats.undefined += 1;
                        return true;
                    };
                    if orders.contains_key(&e) {
                        stats.duplicates += 1;
                        return true;
                    }
                    match fresh.entry(e) {
                        Entry::Vacant(slot) => {
                            slot.insert(Witness::Derived { op: op.id(), args: tuple.to_vec() });
                            if orders.len() + fresh.len() > limits.max_elements {
                                abort = Some(Termination::MaxElementsHit);
                                return false;
                            }
                        }
                        Entry::Occupied(mut slot) => {
                            stats.duplicates += 1;
                            // earlier op wins; within one op the smaller tuple wins
                            if let Witness::Derived { op: prev_op, args } = slot.get() {
                                if *prev_op == op.id() && tuple < args.as_slice() {
                                    slot.insert(Witness::Derived { op: op.id(), args: tuple.to_vec() });
                                }
                            }
                        }
                    }
                    true
                });
                if let Some(err) = failure.take() {
                    return Err(err);
                }
                if let Some(t) = abort {
                    return Ok(RoundOutcome::Aborted(t));
                }
                debug_assert!(finished);
            }
        }
        Ok(RoundOutcome::Complete(fresh))
    }
}

/// Saturates `instance`, returning the strata computed before a fixpoint or a limit.
///
/// A round cut short by a limit is discarded entirely, so the returned strata
/// are always an exact prefix of the full stratification. The round after
/// `max_order` strata is still run to tell a fixpoint apart from a cut-off.
pub fn saturate<E: Element>(instance: &Instance<E>, mode: Mode) -> Result<SaturationResult<E>> {
    let limits = instance.limits();
    let mut first: Vec<E> = instance.base().to_vec();
    first.sort();
    let mut orders: BTreeMap<E, usize> = first.iter().map(|e| (e.clone(), 1)).collect();
    let mut witnesses: BTreeMap<E, Witness<E>> = first.iter().map(|e| (e.clone(), Witness::Base)).collect();
    let mut strata = vec![first];
    let mut all: Vec<E> = strata[0].clone();
    let mut rounds = Vec::new();
    let mut runner = Saturator { instance, evals_so_far: 0 };

    let termination = if orders.len() > limits.max_elements {
        Termination::MaxElementsHit
    } else {
        loop {
            let mut stats = RoundStats::default();
            let frontier = strata.last().expect("M_1 exists");
            let outcome = runner.round(mode, &all, frontier, &orders, &mut stats)?;
            rounds.push(stats);
            let fresh = match outcome {
                RoundOutcome::Aborted(t) => break t,
                RoundOutcome::Complete(fresh) => fresh,
            };
            if fresh.is_empty() {
                break Termination::Fixpoint;
            }
            if strata.len() >= limits.max_order {
                break Termination::MaxOrderHit;
            }
            let p = strata.len() + 1;
            let mut stratum = Vec::with_capacity(fresh.len());
            for (e, w) in fresh {
                orders.insert(e.clone(), p);
                witnesses.insert(e.clone(), w);
                stratum.push(e);
            }
            all.extend(stratum.iter().cloned());
            all.sort();
            strata.push(stratum);
        }
    };

    Ok(SaturationResult { strata, orders, witnesses, rounds, mode, termination })
}

/// The order of `e`: the index `p` of the stratum `M_p` containing it.
pub fn order_of<E: Element>(result: &SaturationResult<E>, e: &E) -> Result<usize> {
    result.orders.get(e).copied().ok_or_else(|| result.not_in_m(e))
}

pub fn witness_of<'r, E: Element>(result: &'r SaturationResult<E>, e: &E) -> Result<&'r Witness<E>> {
    result.witnesses.get(e).ok_or_else(|| result.not_in_m(e))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionViolation<E> {
    /// The element sits in more than one stratum (1-based indices).
    InSeveralStrata { element: E, strata: Vec<usize> },
    /// The element appears in a stratum but has no recorded order.
    MissingOrder { element: E, stratum: usize },
    /// The recorded order disagrees with the stratum holding the element.
    OrderMismatch { element: E, recorded: usize, stratum: usize },
    /// The element has a recorded order but is in no stratum.
    NotInAnyStratum { element: E },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport<E> {
    pub violations: Vec<PartitionViolation<E>>,
}

impl<E> PartitionReport<E> {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that the strata are pairwise disjoint and cover exactly the
/// elements with a recorded order.
pub fn partition_report<E: Element>(result: &SaturationResult<E>) -> PartitionReport<E> {
    let mut placed: BTreeMap<&E, Vec<usize>> = BTreeMap::new();
    for (i, stratum) in result.strata.iter().enumerate() {
        for e in stratum {
            placed.entry(e).or_default().push(i + 1);
        }
    }
    let mut violations = Vec::new();
    for (e, strata) in &placed {
        if strata.len() > 1 {
            violations.push(PartitionViolation::InSeveralStrata { element: (*e).clone(), strata: strata.clone() });
        }
        match result.orders.get(*e) {
            None => violations.push(PartitionViolation::MissingOrder { element: (*e).clone(), stratum: strata[0] }),
            Some(&p) if !strata.contains(&p) => violations.push(PartitionViolation::OrderMismatch {
                element: (*e).clone(),
                recorded: p,
                stratum: strata[0],
            }),
            Some(_) => {}
        }
    }
    for e in result.orders.keys() {
        if !placed.contains_key(e) {
            violations.push(PartitionViolation::NotInAnyStratum { element: e.clone() });
        }
    }
    PartitionReport { violations }
}
