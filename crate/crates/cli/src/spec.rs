//! Instance specification files.
//!
//! ```json
//! {"version": 1,
//!  "builder": "cyclic",
//!  "params": {"modulus": 5, "generator": 1, "flavor": "additive"},
//!  "limits": {"max_order": 1000, "max_elements": 100000, "max_tuple_evals": 100000000}}
//! ```
//!
//! `version` and `limits` (and each limit) are optional. Unknown keys are
//! rejected at every level.

use std::path::Path;

use recset::{
    build_cyclic_group, build_identity_closure, build_modular, build_recurrence, build_regular_sets, build_span,
    Flavor, Instance, Limits, ModOp, RecurrenceSpec, Value,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SPEC_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityParams {
    /// Element texts. With `modulus` they are residues; otherwise plain
    /// integers when every entry parses as one, symbols when not.
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlavorSpec {
    Additive,
    Multiplicative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CyclicParams {
    pub modulus: u64,
    pub generator: i64,
    pub flavor: FlavorSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceParams {
    pub k: usize,
    pub coeffs: Vec<i64>,
    #[serde(default)]
    pub constant: i64,
    pub initial: Vec<i64>,
    pub horizon: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanParams {
    pub modulus: u64,
    pub dimension: usize,
    pub generators: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularParams {
    /// Single-character letters.
    pub alphabet: Vec<String>,
    pub max_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomModularParams {
    pub modulus: u64,
    pub base: Vec<i64>,
    /// `add`, `mul`, `neg`, `double`, `succ`, `affine:A:B` or `scale:C`.
    pub ops: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "builder", content = "params", rename_all = "kebab-case")]
pub enum BuilderSpec {
    Identity(IdentityParams),
    Cyclic(CyclicParams),
    Recurrence(RecurrenceParams),
    Span(SpanParams),
    Regular(RegularParams),
    CustomModular(CustomModularParams),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_elements: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_tuple_evals: Option<u64>,
}

impl LimitsSpec {
    fn over(&self, defaults: Limits) -> Limits {
        Limits {
            max_order: self.max_order.unwrap_or(defaults.max_order),
            max_elements: self.max_elements.unwrap_or(defaults.max_elements),
            max_tuple_evals: self.max_tuple_evals.unwrap_or(defaults.max_tuple_evals),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceSpec {
    pub version: u32,
    #[serde(flatten)]
    pub builder: BuilderSpec,
    #[serde(default)]
    pub limits: LimitsSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    version: Option<u32>,
    builder: String,
    params: serde_json::Value,
    #[serde(default)]
    limits: LimitsSpec,
}

fn params<T: DeserializeOwned>(builder: &str, value: serde_json::Value) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Validation(format!("params ({builder}): {e}")))
}

impl InstanceSpec {
    pub fn new(builder: BuilderSpec) -> Self {
        InstanceSpec { version: SPEC_VERSION, builder, limits: LimitsSpec::default() }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if let Some(v) = raw.version {
            if v != SPEC_VERSION {
                return Err(CliError::Validation(format!("version: unsupported spec version {v}")));
            }
        }
        let b = raw.builder.as_str();
        let builder = match b {
            "identity" => BuilderSpec::Identity(params(b, raw.params)?),
            "cyclic" => BuilderSpec::Cyclic(params(b, raw.params)?),
            "recurrence" => BuilderSpec::Recurrence(params(b, raw.params)?),
            "span" => BuilderSpec::Span(params(b, raw.params)?),
            "regular" => BuilderSpec::Regular(params(b, raw.params)?),
            "custom-modular" => BuilderSpec::CustomModular(params(b, raw.params)?),
            other => return Err(CliError::Validation(format!("builder: unknown builder `{other}`"))),
        };
        Ok(InstanceSpec { version: SPEC_VERSION, builder, limits: raw.limits })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn name(&self) -> &'static str {
        match self.builder {
            BuilderSpec::Identity(_) => "identity",
            BuilderSpec::Cyclic(_) => "cyclic",
            BuilderSpec::Recurrence(_) => "recurrence",
            BuilderSpec::Span(_) => "span",
            BuilderSpec::Regular(_) => "regular",
            BuilderSpec::CustomModular(_) => "custom-modular",
        }
    }

    /// Runs the named builder and applies the limits.
    pub fn build(&self) -> Result<Instance, CliError> {
        let invalid = |e: recset::Error| CliError::Validation(format!("params ({}): {e}", self.name()));
        let instance = match &self.builder {
            BuilderSpec::Identity(p) => {
                let elements = identity_elements(p).map_err(invalid)?;
                build_identity_closure(elements)
            }
            BuilderSpec::Cyclic(p) => {
                let flavor = match p.flavor {
                    FlavorSpec::Additive => Flavor::Additive,
                    FlavorSpec::Multiplicative => Flavor::Multiplicative,
                };
                build_cyclic_group(p.modulus, p.generator, flavor)
            }
            BuilderSpec::Recurrence(p) => build_recurrence(&RecurrenceSpec {
                k: p.k,
                coeffs: p.coeffs.clone(),
                constant: p.constant,
                initial: p.initial.clone(),
                horizon: p.horizon,
            }),
            BuilderSpec::Span(p) => {
                let modulus = p.modulus.max(1);
                build_span(p.modulus, p.dimension, p.generators.iter().map(|g| Value::vec(g, modulus)).collect())
            }
            BuilderSpec::Regular(p) => {
                let alphabet = p
                    .alphabet
                    .iter()
                    .map(|s| {
                        let mut chars = s.chars();
                        match (chars.next(), chars.next()) {
                            (Some(c), None) => Ok(c),
                            _ => Err(recset::Error::BadAlphabet(format!("\"{s}\" is not a single character"))),
                        }
                    })
                    .collect::<Result<Vec<char>, _>>()
                    .map_err(invalid)?;
                build_regular_sets(&alphabet, p.max_len, Limits::default())
            }
            BuilderSpec::CustomModular(p) => {
                let ops = p.ops.iter().map(|s| s.parse::<ModOp>()).collect::<Result<Vec<_>, _>>().map_err(invalid)?;
                build_modular(p.modulus, &p.base, &ops, Limits::default())
            }
        }
        .map_err(invalid)?;
        let limits = self.limits.over(instance.limits());
        instance.with_limits(limits).map_err(|e| CliError::Validation(format!("limits: {e}")))
    }
}

fn identity_elements(p: &IdentityParams) -> recset::Result<Vec<Value>> {
    let universe = match p.modulus {
        Some(m) => recset::Universe::Integers { modulus: Some(m) },
        None if !p.elements.is_empty() && p.elements.iter().all(|e| e.trim().parse::<i64>().is_ok()) => {
            recset::Universe::Integers { modulus: None }
        }
        None => recset::Universe::Symbols,
    };
    p.elements.iter().map(|e| Value::parse(e, &universe)).collect()
}

/// Reads, parses and builds an instance specification file.
pub fn load_instance_spec(path: &Path) -> Result<(InstanceSpec, Instance), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let spec = InstanceSpec::from_json(&text).map_err(|e| e.in_file(path))?;
    let instance = spec.build().map_err(|e| e.in_file(path))?;
    Ok((spec, instance))
}
