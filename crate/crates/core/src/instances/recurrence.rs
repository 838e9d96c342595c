use crate::error::{Error, Result};
use crate::model::{Instance, Limits, Operation, Universe, Value};

/// `a_{n+k} = coeffs[0]·a_n + … + coeffs[k-1]·a_{n+k-1} + constant`, with
/// `a_i = initial[i-1]` for `i ≤ k`, generated up to position `horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceSpec {
    pub k: usize,
    pub coeffs: Vec<i64>,
    pub constant: i64,
    pub initial: Vec<i64>,
    pub horizon: u64,
}

impl RecurrenceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidSpec("k must be positive".into()));
        }
        if self.coeffs.len() != self.k || self.initial.len() != self.k {
            return Err(Error::InvalidSpec(format!(
                "expected {} coefficients and initial values, got {} and {}",
                self.k,
                self.coeffs.len(),
                self.initial.len()
            )));
        }
        if self.horizon < self.k as u64 {
            return Err(Error::InvalidSpec(format!("horizon {} is below k = {}", self.horizon, self.k)));
        }
        Ok(())
    }

    fn next_term(&self, window: &[i64]) -> Option<i64> {
        self.coeffs.iter().zip(window).try_fold(self.constant, |acc, (c, v)| acc.checked_add(c.checked_mul(*v)?))
    }
}

/// Base: the positioned initial terms. One `k`-ary partial operation, defined
/// only on terms at consecutive positions `n, …, n+k-1` with `n+k ≤ horizon`,
/// producing the term at `n+k`. Overflow is an evaluation error.
pub fn build_recurrence(spec: &RecurrenceSpec) -> Result<Instance> {
    spec.validate()?;
    let base = spec.initial.iter().enumerate().map(|(i, &v)| Value::indexed(i as u64 + 1, v)).collect();
    let rule = spec.clone();
    let step = Operation::new("step", spec.k, move |args: &[Value]| {
        let mut window = Vec::with_capacity(rule.k);
        let mut start = None;
        for (j, a) in args.iter().enumerate() {
            let Value::Indexed { position, value } = a else {
                return Err(format!("expected a positioned term, got {a}"));
            };
            let n = *start.get_or_insert(*position);
            if *position != n + j as u64 {
                return Ok(None);
            }
            window.push(*value);
        }
        let next = start.expect("k >= 1") + rule.k as u64;
        if next > rule.horizon {
            return Ok(None);
        }
        let value = rule.next_term(&window).ok_or_else(|| format!("term at position {next} overflows"))?;
        Ok(Some(Value::indexed(next, value)))
    });
    let limits = Limits { max_order: Limits::default().max_order.max(spec.horizon as usize + 1), ..Limits::default() };
    Instance::new(Universe::Indexed { horizon: Some(spec.horizon) }, base, vec![step], limits)
}
