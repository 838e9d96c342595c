//! Derivation sequences: a finite list of elements ending at a target, where
//! every entry is a base element or an operation image of earlier entries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::engine::{for_each_tuple, witness_of, SaturationResult, Witness};
use crate::error::{Error, Result};
use crate::model::{Element, Instance, Value};

/// Default cap on the number of entries a paper-style extraction may produce.
pub const DEFAULT_MAX_DESCRIPTION_LEN: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Style {
    /// Concatenate the descriptions of the witness arguments, in argument
    /// order, then append the element. Repeats shared sub-derivations.
    Paper,
    /// Every needed element exactly once, in a witness-respecting order.
    Compact,
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::Paper => "paper",
            Style::Compact => "compact",
        })
    }
}

/// A non-empty sequence of elements; its target is the last entry and its
/// length counts entries, repetitions included.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Description<E = Value> {
    seq: Vec<E>,
}

impl<E: Element> Description<E> {
    pub fn new(seq: Vec<E>) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::InvalidInput("a description needs at least one entry".into()));
        }
        Ok(Description { seq })
    }

    pub fn entries(&self) -> &[E] {
        &self.seq
    }

    pub fn target(&self) -> &E {
        self.seq.last().expect("non-empty")
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_entries(self) -> Vec<E> {
        self.seq
    }
}

pub fn extract_description<E: Element>(result: &SaturationResult<E>, e: &E, style: Style) -> Result<Description<E>> {
    extract_description_capped(result, e, style, DEFAULT_MAX_DESCRIPTION_LEN)
}

/// Like [`extract_description`], failing with `DescriptionTooLong` when the
/// output would exceed `max_len` entries.
pub fn extract_description_capped<E: Element>(
    result: &SaturationResult<E>,
    e: &E,
    style: Style,
    max_len: usize,
) -> Result<Description<E>> {
    witness_of(result, e)?;
    let seq = match style {
        Style::Paper => {
            let mut lengths = BTreeMap::new();
            let length = paper_length(result, e, &mut lengths)?;
            if length > max_len as u128 {
                return Err(Error::DescriptionTooLong { length, limit: max_len });
            }
            let mut out = Vec::with_capacity(length as usize);
            paper_sequence(result, e, &mut out)?;
            out
        }
        Style::Compact => {
            let out = compact_sequence(result, e)?;
            if out.len() > max_len {
                return Err(Error::DescriptionTooLong { length: out.len() as u128, limit: max_len });
            }
            out
        }
    };
    Description::new(seq)
}

fn paper_length<E: Element>(result: &SaturationResult<E>, e: &E, memo: &mut BTreeMap<E, u128>) -> Result<u128> {
    if let Some(&n) = memo.get(e) {
        return Ok(n);
    }
    let n = match witness_of(result, e)? {
        Witness::Base => 1,
        Witness::Derived { args, .. } => {
            let mut total: u128 = 1;
            for a in args {
                total = total.saturating_add(paper_length(result, a, memo)?);
            }
            total
        }
    };
    memo.insert(e.clone(), n);
    Ok(n)
}

fn paper_sequence<E: Element>(result: &SaturationResult<E>, e: &E, out: &mut Vec<E>) -> Result<()> {
    if let Witness::Derived { args, .. } = witness_of(result, e)? {
        for a in args {
            paper_sequence(result, a, out)?;
        }
    }
    out.push(e.clone());
    Ok(())
}

/// Post-order walk of the witness graph below `e`, each element emitted once.
fn compact_sequence<E: Element>(result: &SaturationResult<E>, e: &E) -> Result<Vec<E>> {
    let mut out = Vec::new();
    let mut emitted = BTreeSet::new();
    // (element, whether its arguments have been pushed)
    let mut stack = vec![(e.clone(), false)];
    while let Some((x, expanded)) = stack.pop() {
        if emitted.contains(&x) {
            continue;
        }
        if expanded {
            emitted.insert(x.clone());
            out.push(x);
            continue;
        }
        let args = match witness_of(result, &x)? {
            Witness::Base => Vec::new(),
            Witness::Derived { args, .. } => args.clone(),
        };
        stack.push((x, true));
        for a in args.into_iter().rev() {
            if !emitted.contains(&a) {
                stack.push((a, false));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvalidReason {
    Empty,
    /// The entry is not a value of the instance's universe.
    OutOfUniverse,
    /// Neither a base element nor an operation image of earlier entries.
    NotDerivable,
    /// The last entry differs from the requested target.
    TargetMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DescriptionReport {
    Valid,
    /// `index` is 1-based; 0 for an empty sequence.
    Invalid {
        index: usize,
        reason: InvalidReason,
    },
}

impl DescriptionReport {
    pub fn is_valid(&self) -> bool {
        matches!(self, DescriptionReport::Valid)
    }
}

/// Checks `seq` entry by entry against the instance. Each non-base entry is
/// searched for among the images of every operation over every tuple of
/// earlier entries (repetition allowed).
pub fn validate_description<E: Element>(instance: &Instance<E>, seq: &[E], target: &E) -> DescriptionReport {
    if seq.is_empty() {
        return DescriptionReport::Invalid { index: 0, reason: InvalidReason::Empty };
    }
    let mut prefix: BTreeSet<E> = BTreeSet::new();
    for (i, entry) in seq.iter().enumerate() {
        if entry.check_in(instance.universe()).is_err() {
            return DescriptionReport::Invalid { index: i + 1, reason: InvalidReason::OutOfUniverse };
        }
        if !instance.is_base(entry) && !derivable_from(instance, &prefix, entry) {
            return DescriptionReport::Invalid { index: i + 1, reason: InvalidReason::NotDerivable };
        }
        prefix.insert(entry.clone());
    }
    if seq.last() != Some(target) {
        return DescriptionReport::Invalid { index: seq.len(), reason: InvalidReason::TargetMismatch };
    }
    DescriptionReport::Valid
}

fn derivable_from<E: Element>(instance: &Instance<E>, prefix: &BTreeSet<E>, entry: &E) -> bool {
    if prefix.is_empty() {
        return false;
    }
    let pool: Vec<E> = prefix.iter().cloned().collect();
    instance.ops().iter().any(|op| {
        let pools = vec![pool.as_slice(); op.arity()];
        // evaluator failures count as "does not produce"
        !for_each_tuple(&pools, |t| !matches!(op.apply(t), Ok(Some(ref r)) if r == entry))
    })
}

/// Prefixes `h` copies of the first base element.
pub fn pad_description<E: Element>(d: &Description<E>, h: usize, instance: &Instance<E>) -> Result<Description<E>> {
    if let DescriptionReport::Invalid { index, reason } = validate_description(instance, d.entries(), d.target()) {
        return Err(Error::InvalidInput(format!("description is invalid at entry {index}: {reason:?}")));
    }
    let first = instance.base()[0].clone();
    let mut seq = Vec::with_capacity(d.len() + h);
    seq.extend(std::iter::repeat_n(first, h));
    seq.extend(d.entries().iter().cloned());
    Description::new(seq)
}
