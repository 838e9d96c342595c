//! Ready-made instances: finite sets under the identity, cyclic groups,
//! modular arithmetic, linear recurrences, spans of vectors and truncated
//! regular sets.

mod recurrence;
mod regular;
mod span;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::model::{Instance, Limits, Operation, Universe, Value};

pub use recurrence::{build_recurrence, RecurrenceSpec};
pub use regular::{build_regular_sets, trunc_concat, trunc_star, trunc_union, truncate};
pub use span::{build_span, span_combinations};

fn residue(v: &Value) -> std::result::Result<i64, String> {
    match v {
        Value::IntMod { value, .. } => Ok(*value),
        other => Err(format!("expected an integer residue, got {other}")),
    }
}

fn coords(v: &Value) -> std::result::Result<&[u64], String> {
    match v {
        Value::VecMod { coords, .. } => Ok(coords),
        other => Err(format!("expected a vector, got {other}")),
    }
}

fn reduce(x: i128, m: u64) -> i64 {
    x.rem_euclid(m as i128) as i64
}

fn universe_of(v: &Value) -> Universe {
    match v {
        Value::IntMod { modulus, .. } => Universe::Integers { modulus: *modulus },
        Value::VecMod { coords, modulus } => Universe::Vectors { modulus: *modulus, dimension: coords.len() },
        Value::Indexed { .. } => Universe::Indexed { horizon: None },
        Value::Lang(l) => {
            let mut alphabet: Vec<char> = l.strings().iter().flat_map(|s| s.chars()).collect();
            alphabet.sort_unstable();
            alphabet.dedup();
            Universe::Languages { alphabet, max_len: l.max_len() }
        }
        Value::Sym(_) => Universe::Symbols,
    }
}

/// The finite set `elements` as the closure of itself under `f(x) = x`.
pub fn build_identity_closure(elements: Vec<Value>) -> Result<Instance> {
    let first = elements.first().ok_or(Error::EmptyBase)?;
    let universe = match first {
        // the alphabet has to cover every language in the set
        Value::Lang(l) => {
            let mut alphabet: Vec<char> = elements
                .iter()
                .filter_map(|e| match e {
                    Value::Lang(l) => Some(l.strings().iter().flat_map(|s| s.chars())),
                    _ => None,
                })
                .flatten()
                .collect();
            alphabet.sort_unstable();
            alphabet.dedup();
            Universe::Languages { alphabet, max_len: l.max_len() }
        }
        other => universe_of(other),
    };
    let id = Operation::new("id", 1, |args: &[Value]| Ok(Some(args[0].clone())));
    Instance::new(universe, elements, vec![id], Limits::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Additive,
    Multiplicative,
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "additive" => Ok(Flavor::Additive),
            "multiplicative" => Ok(Flavor::Multiplicative),
            other => Err(Error::InvalidInput(format!("unknown flavor `{other}`"))),
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Additive => "additive",
            Flavor::Multiplicative => "multiplicative",
        })
    }
}

/// The cyclic subgroup of `Z_m` (additive) or of its unit group
/// (multiplicative) generated by `generator`. Only the generator is seeded;
/// the identity shows up as a power of it.
pub fn build_cyclic_group(modulus: u64, generator: i64, flavor: Flavor) -> Result<Instance> {
    if modulus < 2 {
        return Err(Error::InvalidInstance(format!("modulus must be at least 2, got {modulus}")));
    }
    let g = Value::int(generator, modulus);
    let op = match flavor {
        Flavor::Additive => ModOp::Add,
        Flavor::Multiplicative => {
            let r = generator.rem_euclid(modulus as i64) as u64;
            if r.gcd(&modulus) != 1 {
                return Err(Error::NotAUnit { generator: r, modulus });
            }
            ModOp::Mul
        }
    };
    Instance::new(
        Universe::Integers { modulus: Some(modulus) },
        vec![g],
        vec![op.integer_op(modulus)],
        Limits::default(),
    )
}

/// Named operations on residues and on residue vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModOp {
    Add,
    Mul,
    Neg,
    Double,
    /// `x + 1`, or `x + e_1` on vectors.
    Succ,
    /// `a·x + b`.
    Affine {
        a: i64,
        b: i64,
    },
    /// `c·x`.
    Scale {
        c: i64,
    },
}

impl FromStr for ModOp {
    type Err = Error;

    /// Accepts `add`, `mul`, `neg`, `double`, `succ`, `affine:A:B` and `scale:C`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown operation `{s}`"));
        let num = |t: &str| t.parse::<i64>().map_err(|_| bad());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["add"] => Ok(ModOp::Add),
            ["mul"] => Ok(ModOp::Mul),
            ["neg"] => Ok(ModOp::Neg),
            ["double"] => Ok(ModOp::Double),
            ["succ"] => Ok(ModOp::Succ),
            ["affine", a, b] => Ok(ModOp::Affine { a: num(a)?, b: num(b)? }),
            ["scale", c] => Ok(ModOp::Scale { c: num(c)? }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for ModOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModOp::Add => write!(f, "add"),
            ModOp::Mul => write!(f, "mul"),
            ModOp::Neg => write!(f, "neg"),
            ModOp::Double => write!(f, "double"),
            ModOp::Succ => write!(f, "succ"),
            ModOp::Affine { a, b } => write!(f, "affine:{a}:{b}"),
            ModOp::Scale { c } => write!(f, "scale:{c}"),
        }
    }
}

impl ModOp {
    pub fn arity(&self) -> usize {
        match self {
            ModOp::Add | ModOp::Mul => 2,
            _ => 1,
        }
    }

    /// The operation on `Z_m`.
    pub fn integer_op(self, m: u64) -> Operation<Value> {
        let name = self.to_string();
        Operation::new(name, self.arity(), move |args: &[Value]| {
            let x = residue(&args[0])? as i128;
            let r = match self {
                ModOp::Add => x + residue(&args[1])? as i128,
                ModOp::Mul => x * residue(&args[1])? as i128,
                ModOp::Neg => -x,
                ModOp::Double => 2 * x,
                ModOp::Succ => x + 1,
                ModOp::Affine { a, b } => a as i128 * x + b as i128,
                ModOp::Scale { c } => c as i128 * x,
            };
            Ok(Some(Value::IntMod { value: reduce(r, m), modulus: Some(m) }))
        })
    }

    /// The operation on `Z_m^d`; `mul` and `affine` have no vector meaning.
    pub fn vector_op(self, m: u64, d: usize) -> Result<Operation<Value>> {
        if matches!(self, ModOp::Mul | ModOp::Affine { .. }) {
            return Err(Error::InvalidInput(format!("`{self}` is not defined on vectors")));
        }
        let name = self.to_string();
        Ok(Operation::new(name, self.arity(), move |args: &[Value]| {
            let x = coords(&args[0])?;
            let y = if self == ModOp::Add { Some(coords(&args[1])?) } else { None };
            if x.len() != d || y.is_some_and(|y| y.len() != d) {
                return Err(format!("expected vectors of dimension {d}"));
            }
            let out = (0..d)
                .map(|i| {
                    let xi = x[i] as i128;
                    let r = match self {
                        ModOp::Add => xi + y.expect("binary")[i] as i128,
                        ModOp::Neg => -xi,
                        ModOp::Double => 2 * xi,
                        ModOp::Succ => xi + i128::from(i == 0),
                        ModOp::Scale { c } => c as i128 * xi,
                        ModOp::Mul | ModOp::Affine { .. } => unreachable!(),
                    };
                    reduce(r, m) as u64
                })
                .collect();
            Ok(Some(Value::VecMod { coords: out, modulus: m }))
        }))
    }

    /// The operation on whichever modular universe `universe` is.
    pub fn operation_for(self, universe: &Universe) -> Result<Operation<Value>> {
        match universe {
            Universe::Integers { modulus: Some(m) } => Ok(self.integer_op(*m)),
            Universe::Vectors { modulus, dimension } => self.vector_op(*modulus, *dimension),
            other => Err(Error::InvalidInput(format!("`{self}` is not defined on a {} universe", other.kind()))),
        }
    }
}

/// `Z_m` with explicit base residues and named operations.
pub fn build_modular(modulus: u64, base: &[i64], ops: &[ModOp], limits: Limits) -> Result<Instance> {
    if modulus < 1 {
        return Err(Error::InvalidInstance("modulus must be positive".into()));
    }
    let mut base_values: Vec<Value> = Vec::new();
    for &b in base {
        let v = Value::int(b, modulus);
        if !base_values.contains(&v) {
            base_values.push(v);
        }
    }
    let ops = ops.iter().map(|op| op.integer_op(modulus)).collect();
    Instance::new(Universe::Integers { modulus: Some(modulus) }, base_values, ops, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{saturate, Mode};

    fn m_of(inst: &Instance) -> Vec<Value> {
        saturate(inst, Mode::SemiNaive).unwrap().elements().cloned().collect()
    }

    #[test]
    fn identity_closures() {
        let inst = build_identity_closure(vec![Value::sym("p"), Value::sym("q")]).unwrap();
        let r = saturate(&inst, Mode::SemiNaive).unwrap();
        assert_eq!(r.strata(), &[vec![Value::sym("p"), Value::sym("q")]]);
        assert!(r.is_fixpoint());

        let inst = build_identity_closure(vec![Value::sym("p")]).unwrap();
        assert_eq!(m_of(&inst), vec![Value::sym("p")]);

        let inst = build_identity_closure(vec![Value::int(0, 3), Value::int(2, 3)]).unwrap();
        let r = saturate(&inst, Mode::SemiNaive).unwrap();
        assert_eq!(r.strata().len(), 1);
        assert_eq!(r.len(), 2);

        assert_eq!(build_identity_closure(vec![]).unwrap_err(), Error::EmptyBase);
        assert!(build_identity_closure(vec![Value::sym("p"), Value::int(1, 3)]).is_err());
    }

    #[test]
    fn cyclic_groups() {
        let inst = build_cyclic_group(7, 2, Flavor::Multiplicative).unwrap();
        assert_eq!(m_of(&inst), vec![Value::int(1, 7), Value::int(2, 7), Value::int(4, 7)]);
        assert_eq!(
            build_cyclic_group(6, 2, Flavor::Multiplicative).unwrap_err(),
            Error::NotAUnit { generator: 2, modulus: 6 }
        );
        assert_eq!(m_of(&build_cyclic_group(6, 0, Flavor::Additive).unwrap()), vec![Value::int(0, 6)]);
        assert!(build_cyclic_group(1, 0, Flavor::Additive).is_err());
    }

    #[test]
    fn modular_ops_parse_and_evaluate() {
        for s in ["add", "mul", "neg", "double", "succ", "affine:2:-1", "scale:3"] {
            assert_eq!(s.parse::<ModOp>().unwrap().to_string(), s);
        }
        assert!("pow".parse::<ModOp>().is_err());
        let affine = ModOp::Affine { a: 2, b: -1 }.integer_op(5);
        assert_eq!(affine.apply(&[Value::int(0, 5)]).unwrap(), Some(Value::int(4, 5)));
        let succ = ModOp::Succ.vector_op(6, 2).unwrap();
        assert_eq!(succ.apply(&[Value::vec(&[5, 3], 6)]).unwrap(), Some(Value::vec(&[0, 3], 6)));
        assert!(ModOp::Mul.vector_op(6, 2).is_err());
    }

    #[test]
    fn custom_modular() {
        let inst = build_modular(10, &[2, 2], &[ModOp::Add], Limits::default()).unwrap();
        assert_eq!(inst.base().len(), 1);
        assert_eq!(m_of(&inst).len(), 5);
        assert_eq!(build_modular(10, &[], &[ModOp::Add], Limits::default()).unwrap_err(), Error::EmptyBase);
    }
}
