use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{Instance, Limits, Operation, Universe, Value};

use super::ModOp;

fn check_generator(g: &Value, modulus: u64, dimension: usize) -> Result<()> {
    match g {
        Value::VecMod { coords, modulus: m } => {
            if coords.len() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, got: coords.len() });
            }
            if *m != modulus {
                return Err(Error::OutOfUniverse(format!("generator {g} is mod {m}, expected mod {modulus}")));
            }
            Ok(())
        }
        other => Err(Error::OutOfUniverse(format!("generator {other} is not a vector"))),
    }
}

/// The submodule of `Z_m^d` generated by `generators`: vector addition plus
/// one unary scalar multiplication `x ↦ c·x` for each `c` in `0..m`.
pub fn build_span(modulus: u64, dimension: usize, generators: Vec<Value>) -> Result<Instance> {
    if modulus < 2 {
        return Err(Error::InvalidInstance(format!("modulus must be at least 2, got {modulus}")));
    }
    if dimension == 0 {
        return Err(Error::InvalidInstance("dimension must be positive".into()));
    }
    if generators.is_empty() {
        return Err(Error::EmptyBase);
    }
    let mut base: Vec<Value> = Vec::new();
    for g in generators {
        check_generator(&g, modulus, dimension)?;
        if !base.contains(&g) {
            base.push(g);
        }
    }
    let mut ops: Vec<Operation<Value>> = vec![ModOp::Add.vector_op(modulus, dimension)?];
    for c in 0..modulus as i64 {
        ops.push(ModOp::Scale { c }.vector_op(modulus, dimension)?);
    }
    Instance::new(Universe::Vectors { modulus, dimension }, base, ops, Limits::default())
}

/// Every combination `a_1·g_1 + … + a_n·g_n` with coefficients in `Z_m`,
/// by enumerating all `m^n` coefficient vectors.
pub fn span_combinations(modulus: u64, dimension: usize, generators: &[Value]) -> Result<BTreeSet<Value>> {
    let gens: Vec<&[u64]> = generators
        .iter()
        .map(|g| {
            check_generator(g, modulus, dimension)?;
            match g {
                Value::VecMod { coords, .. } => Ok(coords.as_slice()),
                _ => unreachable!(),
            }
        })
        .collect::<Result<_>>()?;
    let mut out = BTreeSet::new();
    let mut coeffs = vec![0u64; gens.len()];
    loop {
        let v: Vec<u64> =
            (0..dimension).map(|i| gens.iter().zip(&coeffs).map(|(g, a)| a * g[i]).sum::<u64>() % modulus).collect();
        out.insert(Value::VecMod { coords: v, modulus });
        let mut j = 0;
        loop {
            if j == coeffs.len() {
                return Ok(out);
            }
            coeffs[j] += 1;
            if coeffs[j] < modulus {
                break;
            }
            coeffs[j] = 0;
            j += 1;
        }
    }
}
