//! Regular sets over an alphabet, represented by their strings of length at
//! most `L`. Union, concatenation and star are computed modulo truncation.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{Instance, Lang, Limits, Operation, Universe, Value};

/// Drops the strings longer than `max_len`.
pub fn truncate(p: &Lang, max_len: usize) -> Lang {
    Lang::truncated(p.strings().iter().cloned(), max_len)
}

pub fn trunc_union(p: &Lang, q: &Lang, max_len: usize) -> Lang {
    Lang::truncated(p.strings().iter().chain(q.strings()).cloned(), max_len)
}

pub fn trunc_concat(p: &Lang, q: &Lang, max_len: usize) -> Lang {
    let mut out = Vec::new();
    for x in p.strings() {
        for y in q.strings() {
            if x.len() + y.len() <= max_len {
                out.push(format!("{x}{y}"));
            }
        }
    }
    Lang::truncated(out, max_len)
}

/// The least `S` with `ε ∈ S` and `trunc(S·p) ⊆ S`.
pub fn trunc_star(p: &Lang, max_len: usize) -> Lang {
    let mut set: BTreeSet<String> = BTreeSet::from([String::new()]);
    let mut frontier: Vec<String> = vec![String::new()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for y in p.strings() {
                if !y.is_empty() && x.len() + y.len() <= max_len {
                    let s = format!("{x}{y}");
                    if set.insert(s.clone()) {
                        next.push(s);
                    }
                }
            }
        }
        frontier = next;
    }
    Lang::truncated(set, max_len)
}

fn lang(v: &Value) -> std::result::Result<&Lang, String> {
    match v {
        Value::Lang(l) => Ok(l),
        other => Err(format!("expected a language, got {other}")),
    }
}

/// Base `∅`, `{ε}` and `{a}` for each letter; operations union, concatenation
/// and star, all truncated at `max_len`.
pub fn build_regular_sets(alphabet: &[char], max_len: usize, limits: Limits) -> Result<Instance> {
    if alphabet.is_empty() {
        return Err(Error::BadAlphabet("alphabet is empty".into()));
    }
    let mut seen = BTreeSet::new();
    for &c in alphabet {
        if !c.is_ascii_graphic() || matches!(c, ',' | '{' | '}') {
            return Err(Error::BadAlphabet(format!("'{c}' cannot be a letter")));
        }
        if !seen.insert(c) {
            return Err(Error::BadAlphabet(format!("'{c}' appears twice")));
        }
    }
    if max_len < 1 {
        return Err(Error::OutOfUniverse("single-letter languages need max_len >= 1".into()));
    }
    let mut base = vec![Value::Lang(Lang::empty(max_len)), Value::Lang(Lang::epsilon(max_len))];
    base.extend(alphabet.iter().map(|c| Value::Lang(Lang::truncated([c.to_string()], max_len))));

    let l = max_len;
    let ops = vec![
        Operation::new("union", 2, move |a: &[Value]| {
            Ok(Some(Value::Lang(trunc_union(lang(&a[0])?, lang(&a[1])?, l))))
        }),
        Operation::new("concat", 2, move |a: &[Value]| {
            Ok(Some(Value::Lang(trunc_concat(lang(&a[0])?, lang(&a[1])?, l))))
        }),
        Operation::new("star", 1, move |a: &[Value]| Ok(Some(Value::Lang(trunc_star(lang(&a[0])?, l))))),
    ];
    let universe = Universe::Languages { alphabet: alphabet.to_vec(), max_len };
    Instance::new(universe, base, ops, limits)
}
