//! Concrete element values for the five supported universes, with their
//! canonical forms, byte encoding, total order and textual form.
//!
//! The textual form is universe-relative: a residue prints as `2`, a vector
//! as `[2,0]`, a positioned term as `(3->2)`, a truncated language as
//! `{eps,a,ab}` (with `{}` for the empty language) and a symbol as its bare
//! token. Parsing additionally accepts a `%m` modulus suffix on residues and
//! vectors, which must agree with the universe.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

use super::Element;

/// Universe descriptor: which kind of value the carrier holds and its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Universe {
    /// Integers, reduced modulo `modulus` when it is present.
    Integers {
        modulus: Option<u64>,
    },
    /// Vectors of fixed `dimension` over the residues modulo `modulus`.
    Vectors {
        modulus: u64,
        dimension: usize,
    },
    /// Position-indexed terms of a sequence; positions start at 1.
    Indexed {
        horizon: Option<u64>,
    },
    /// Finite languages over `alphabet`, truncated at strings of length `max_len`.
    Languages {
        alphabet: Vec<char>,
        max_len: usize,
    },
    Symbols,
}

impl Universe {
    pub fn kind(&self) -> &'static str {
        match self {
            Universe::Integers { .. } => "integer",
            Universe::Vectors { .. } => "vector",
            Universe::Indexed { .. } => "indexed",
            Universe::Languages { .. } => "language",
            Universe::Symbols => "symbol",
        }
    }

    /// Every element of a finite universe in ascending order, or `None` when
    /// the universe is infinite or has more than `cap` elements.
    pub fn enumerate(&self, cap: usize) -> Option<Vec<Value>> {
        match self {
            Universe::Integers { modulus: Some(m) } if *m as usize <= cap => {
                Some((0..*m).map(|v| Value::IntMod { value: v as i64, modulus: Some(*m) }).collect())
            }
            Universe::Vectors { modulus, dimension } => {
                let total = (*modulus as usize).checked_pow(*dimension as u32)?;
                if total > cap {
                    return None;
                }
                let mut out = Vec::with_capacity(total);
                let mut coords = vec![0u64; *dimension];
                loop {
                    out.push(Value::VecMod { coords: coords.clone(), modulus: *modulus });
                    // odometer, last coordinate fastest, so output stays sorted
                    let mut i = *dimension;
                    loop {
                        if i == 0 {
                            return Some(out);
                        }
                        i -= 1;
                        coords[i] += 1;
                        if coords[i] < *modulus {
                            break;
                        }
                        coords[i] = 0;
                    }
                }
            }
            _ => None,
        }
    }
}

/// A finite language whose strings all have length at most `max_len`.
///
/// Strings are kept sorted by (length, lexicographic) without duplicates; the
/// empty string stands for epsilon.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lang {
    strings: Vec<String>,
    max_len: usize,
}

/// Order on strings used inside languages: shorter first, then bytewise.
pub fn string_order(a: &str, b: &str) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.as_bytes().cmp(b.as_bytes()))
}

impl Lang {
    /// Builds a language from arbitrary strings, sorting and deduplicating.
    /// Strings longer than `max_len` are rejected, not dropped.
    pub fn new<I, S>(strings: I, max_len: usize) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut strings: Vec<String> = strings.into_iter().map(Into::into).collect();
        if let Some(long) = strings.iter().find(|s| s.chars().count() > max_len) {
            return Err(Error::OutOfUniverse(format!("string \"{long}\" is longer than max_len {max_len}")));
        }
        strings.sort_by(|a, b| string_order(a, b));
        strings.dedup();
        Ok(Lang { strings, max_len })
    }

    /// Keeps only the strings of length at most `max_len`.
    pub fn truncated<I, S>(strings: I, max_len: usize) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let kept = strings.into_iter().map(Into::into).filter(|s: &String| s.chars().count() <= max_len);
        Lang::new(kept, max_len).expect("long strings filtered")
    }

    pub fn empty(max_len: usize) -> Self {
        Lang { strings: Vec::new(), max_len }
    }

    pub fn epsilon(max_len: usize) -> Self {
        Lang { strings: vec![String::new()], max_len }
    }

    pub fn strings(&self) -> &[String] {
        &self.strings
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn contains(&self, s: &str) -> bool {
        self.strings.binary_search_by(|x| string_order(x, s)).is_ok()
    }
}

impl Ord for Lang {
    fn cmp(&self, other: &Self) -> Ordering {
        self.max_len.cmp(&other.max_len).then_with(|| self.strings.len().cmp(&other.strings.len())).then_with(|| {
            self.strings
                .iter()
                .zip(&other.strings)
                .map(|(a, b)| string_order(a, b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Lang {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of one of the supported universes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    /// Integer residue; `modulus: None` means a plain integer.
    IntMod {
        value: i64,
        modulus: Option<u64>,
    },
    VecMod {
        coords: Vec<u64>,
        modulus: u64,
    },
    /// Term `value` sitting at `position` of a sequence.
    Indexed {
        position: u64,
        value: i64,
    },
    Lang(Lang),
    Sym(String),
}

const TAG_INT: u8 = 0x01;
const TAG_VEC: u8 = 0x02;
const TAG_INDEXED: u8 = 0x03;
const TAG_LANG: u8 = 0x04;
const TAG_SYM: u8 = 0x05;

fn signed_key(v: i64) -> u64 {
    (v as u64) ^ (1 << 63)
}

fn is_token_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, ',' | '{' | '}' | '[' | ']' | '(' | ')' | '"' | '%')
}

impl Value {
    pub fn int(value: i64, modulus: u64) -> Value {
        Value::IntMod { value: value.rem_euclid(modulus as i64), modulus: Some(modulus) }
    }

    pub fn vec(coords: &[i64], modulus: u64) -> Value {
        Value::VecMod { coords: coords.iter().map(|c| c.rem_euclid(modulus as i64) as u64).collect(), modulus }
    }

    pub fn indexed(position: u64, value: i64) -> Value {
        Value::Indexed { position, value }
    }

    pub fn sym(name: impl Into<String>) -> Value {
        Value::Sym(name.into())
    }

    fn tag(&self) -> u8 {
        match self {
            Value::IntMod { .. } => TAG_INT,
            Value::VecMod { .. } => TAG_VEC,
            Value::Indexed { .. } => TAG_INDEXED,
            Value::Lang(_) => TAG_LANG,
            Value::Sym(_) => TAG_SYM,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Value::IntMod { .. } => "integer",
            Value::VecMod { .. } => "vector",
            Value::Indexed { .. } => "indexed",
            Value::Lang(_) => "language",
            Value::Sym(_) => "symbol",
        }
    }

    /// Canonical byte encoding: kind tag, big-endian fixed-width fields, then
    /// length-prefixed strings. Signed fields have their sign bit flipped so
    /// that byte order agrees with numeric order.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = vec![self.tag()];
        match self {
            Value::IntMod { value, modulus } => {
                out.extend(modulus.unwrap_or(0).to_be_bytes());
                out.extend(signed_key(*value).to_be_bytes());
            }
            Value::VecMod { coords, modulus } => {
                out.extend(modulus.to_be_bytes());
                out.extend((coords.len() as u32).to_be_bytes());
                for c in coords {
                    out.extend(c.to_be_bytes());
                }
            }
            Value::Indexed { position, value } => {
                out.extend(position.to_be_bytes());
                out.extend(signed_key(*value).to_be_bytes());
            }
            Value::Lang(lang) => {
                out.extend((lang.max_len as u32).to_be_bytes());
                out.extend((lang.strings.len() as u32).to_be_bytes());
                for s in &lang.strings {
                    out.extend((s.len() as u32).to_be_bytes());
                    out.extend(s.as_bytes());
                }
            }
            Value::Sym(name) => {
                out.extend((name.len() as u32).to_be_bytes());
                out.extend(name.as_bytes());
            }
        }
        out
    }

    /// Parses the textual form of an element of `universe` and canonicalizes it.
    pub fn parse(text: &str, universe: &Universe) -> Result<Value> {
        let bad = |reason: &str| Error::Parse { text: text.to_string(), reason: reason.to_string() };
        let t = text.trim();
        let split_modulus = |t: &str| -> Result<(String, Option<u64>)> {
            match t.rsplit_once('%') {
                Some((body, m)) => {
                    let m = m.trim().parse::<u64>().map_err(|_| bad("bad modulus suffix"))?;
                    Ok((body.trim().to_string(), Some(m)))
                }
                None => Ok((t.to_string(), None)),
            }
        };
        let raw = match universe {
            Universe::Integers { modulus } => {
                let (body, suffix) = split_modulus(t)?;
                if suffix.is_some() && suffix != *modulus {
                    return Err(bad("modulus suffix does not match the universe"));
                }
                let value = body.parse::<i64>().map_err(|_| bad("expected an integer"))?;
                Value::IntMod { value, modulus: *modulus }
            }
            Universe::Vectors { modulus, .. } => {
                let (body, suffix) = split_modulus(t)?;
                if suffix.is_some() && suffix != Some(*modulus) {
                    return Err(bad("modulus suffix does not match the universe"));
                }
                let inner = body
                    .strip_prefix('[')
                    .and_then(|b| b.strip_suffix(']'))
                    .ok_or_else(|| bad("expected [c1,...,cd]"))?;
                let coords = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner
                        .split(',')
                        .map(|c| c.trim().parse::<i64>().map_err(|_| bad("bad coordinate")))
                        .collect::<Result<Vec<_>>>()?
                };
                Value::vec(&coords, *modulus)
            }
            Universe::Indexed { .. } => {
                let inner = t
                    .strip_prefix('(')
                    .and_then(|b| b.strip_suffix(')'))
                    .ok_or_else(|| bad("expected (position->value)"))?;
                let (p, v) = inner.split_once("->").ok_or_else(|| bad("expected (position->value)"))?;
                let position = p.trim().parse::<u64>().map_err(|_| bad("bad position"))?;
                let value = v.trim().parse::<i64>().map_err(|_| bad("bad value"))?;
                Value::Indexed { position, value }
            }
            Universe::Languages { max_len, .. } => {
                let inner =
                    t.strip_prefix('{').and_then(|b| b.strip_suffix('}')).ok_or_else(|| bad("expected {s1,...}"))?;
                let strings: Vec<String> = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner
                        .split(',')
                        .map(|s| match s.trim() {
                            "eps" => String::new(),
                            s => s.to_string(),
                        })
                        .collect()
                };
                Value::Lang(Lang { strings, max_len: *max_len })
            }
            Universe::Symbols => Value::Sym(t.to_string()),
        };
        canonicalize_element(raw, universe)
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        use Value::*;
        match (self, other) {
            (IntMod { value: a, modulus: ma }, IntMod { value: b, modulus: mb }) => {
                ma.unwrap_or(0).cmp(&mb.unwrap_or(0)).then(a.cmp(b))
            }
            (VecMod { coords: a, modulus: ma }, VecMod { coords: b, modulus: mb }) => {
                ma.cmp(mb).then(a.len().cmp(&b.len())).then_with(|| a.cmp(b))
            }
            (Indexed { position: pa, value: a }, Indexed { position: pb, value: b }) => pa.cmp(pb).then(a.cmp(b)),
            (Lang(a), Lang(b)) => a.cmp(b),
            (Sym(a), Sym(b)) => string_order(a, b),
            _ => self.tag().cmp(&other.tag()),
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::IntMod { value, .. } => write!(f, "{value}"),
            Value::VecMod { coords, .. } => {
                write!(f, "[")?;
                for (i, c) in coords.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")
            }
            Value::Indexed { position, value } => write!(f, "({position}->{value})"),
            Value::Lang(lang) => {
                write!(f, "{{")?;
                for (i, s) in lang.strings.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    if s.is_empty() {
                        write!(f, "eps")?;
                    } else {
                        write!(f, "{s}")?;
                    }
                }
                write!(f, "}}")
            }
            Value::Sym(name) => write!(f, "{name}"),
        }
    }
}

/// Brings a loosely formed value into the canonical form of `universe`:
/// residues reduced, languages sorted and deduplicated. Idempotent.
pub fn canonicalize_element(raw: Value, universe: &Universe) -> Result<Value> {
    let out = |msg: String| Err(Error::OutOfUniverse(msg));
    match (raw, universe) {
        (Value::IntMod { value, modulus: raw_m }, Universe::Integers { modulus }) => match (raw_m, modulus) {
            (Some(r), Some(m)) if r != *m => out(format!("residue mod {r} in a mod {m} universe")),
            (Some(r), None) => out(format!("residue mod {r} in the plain integer universe")),
            (_, Some(0)) => out("modulus must be positive".into()),
            (_, Some(m)) => Ok(Value::int(value, *m)),
            (None, None) => Ok(Value::IntMod { value, modulus: None }),
        },
        (Value::VecMod { coords, modulus: raw_m }, Universe::Vectors { modulus, dimension }) => {
            if raw_m != *modulus {
                return out(format!("vector mod {raw_m} in a mod {modulus} universe"));
            }
            if coords.len() != *dimension {
                return out(format!("vector has dimension {}, universe has dimension {dimension}", coords.len()));
            }
            Ok(Value::VecMod { coords: coords.into_iter().map(|c| c % modulus).collect(), modulus: *modulus })
        }
        (Value::Indexed { position, value }, Universe::Indexed { horizon }) => {
            if position == 0 {
                return out("positions start at 1".into());
            }
            if let Some(h) = horizon {
                if position > *h {
                    return out(format!("position {position} beyond horizon {h}"));
                }
            }
            Ok(Value::Indexed { position, value })
        }
        (Value::Lang(lang), Universe::Languages { alphabet, max_len }) => {
            if let Some(c) = lang.strings.iter().flat_map(|s| s.chars()).find(|c| !alphabet.contains(c)) {
                return out(format!("character '{c}' is not in the alphabet"));
            }
            Ok(Value::Lang(Lang::new(lang.strings, *max_len)?))
        }
        (Value::Sym(name), Universe::Symbols) => {
            if name.is_empty() || !name.chars().all(is_token_char) {
                return out(format!("\"{name}\" is not a symbol token"));
            }
            Ok(Value::Sym(name))
        }
        (raw, universe) => out(format!("{} value in a {} universe", raw.kind(), universe.kind())),
    }
}

/// Compares two elements of the same universe kind.
pub fn compare_elements(x: &Value, y: &Value) -> Result<Ordering> {
    if x.tag() != y.tag() {
        return Err(Error::MixedUniverse { left: x.kind().into(), right: y.kind().into() });
    }
    Ok(x.cmp(y))
}

impl Element for Value {
    type Universe = Universe;

    fn check_in(&self, universe: &Universe) -> Result<()> {
        let canonical = canonicalize_element(self.clone(), universe)?;
        if canonical == *self {
            Ok(())
        } else {
            Err(Error::OutOfUniverse(format!("{self} is not in canonical form (expected {canonical})")))
        }
    }
}
