//! Command-line front end: load an instance specification, saturate it, run
//! a verifier and print a JSON report.
//!
//! Exit codes: 0 success or verified, 1 refuted or hypothesis violated (the
//! report is still printed), 2 input errors, 3 output errors.

pub mod report;
pub mod spec;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use recset::descriptions::extract_description_capped;
use recset::verify::{
    brute_intersection_closed, brute_minimal_closed, check_base_extension, check_combined_extension,
    check_property_induction, is_recursively_closed, Conclusion, Predicate,
};
use recset::{
    order_of, pad_description, saturate, validate_description, Absence, DescriptionReport, Instance, ModOp, Mode,
    SaturationResult, Style, Value,
};
use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use crate::report::{closure, elements, induction, saturation_report};
use crate::spec::load_instance_spec;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Library(#[from] recset::Error),
    #[error("output error: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Output(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn in_file(self, path: &Path) -> Self {
        match self {
            CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
            CliError::Validation(m) => CliError::Validation(format!("{}: {m}", path.display())),
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Naive,
    SemiNaive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StyleArg {
    Paper,
    Compact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PredicateArg {
    Parity,
    ValueRange,
    Divisibility,
    StringLength,
    Representable,
}

#[derive(Debug, Parser)]
#[command(name = "recset", version, about = "Saturate recursively defined sets and check their closure properties")]
pub struct Cli {
    /// Leave witnesses out of the report.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Saturate the instance and report its strata.
    Saturate {
        #[arg(long, value_enum, default_value = "semi-naive")]
        mode: ModeArg,
        spec: PathBuf,
    },
    /// Report the order of an element.
    Order {
        #[arg(allow_hyphen_values = true)]
        element: String,
        spec: PathBuf,
    },
    /// Extract a derivation sequence for an element.
    Derive {
        #[arg(allow_hyphen_values = true)]
        element: String,
        #[arg(long, value_enum, default_value = "compact")]
        style: StyleArg,
        /// Prefix this many copies of the first base element.
        #[arg(long, default_value_t = 0)]
        pad: usize,
        /// Refuse to produce more entries than this.
        #[arg(long, default_value_t = recset::descriptions::DEFAULT_MAX_DESCRIPTION_LEN)]
        max_len: usize,
        spec: PathBuf,
    },
    /// Validate a derivation sequence read from a JSON array of elements.
    ValidateDesc {
        desc_file: PathBuf,
        #[arg(allow_hyphen_values = true)]
        target: String,
        spec: PathBuf,
    },
    /// Check whether a set (JSON array of elements) contains the base and is closed.
    CheckClosed { set_file: PathBuf, spec: PathBuf },
    /// Compare the least closed subset of an explicit universe with the saturation.
    VerifyMinimal {
        #[arg(long)]
        universe: PathBuf,
        spec: PathBuf,
    },
    /// Compare the intersection of all closed subsets of an explicit universe with the saturation.
    VerifyIntersection {
        #[arg(long)]
        universe: PathBuf,
        spec: PathBuf,
    },
    /// Add derivable elements to the base and compare the generated sets.
    ExtendBase {
        /// Extra base elements followed by the spec path.
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Add operations `M` is closed under and compare the generated sets.
    ExtendOps {
        /// Extra base elements added before the operations.
        #[arg(long = "base", allow_hyphen_values = true)]
        base: Vec<String>,
        /// Operation names (add, mul, neg, double, succ, affine:A:B, scale:C) followed by the spec path.
        #[arg(required = true, num_args = 1..)]
        args: Vec<String>,
    },
    /// Check a builtin property by induction over the construction.
    PropCheck {
        #[arg(long, value_enum)]
        predicate: PredicateArg,
        #[arg(long, allow_hyphen_values = true)]
        min: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        max: Option<i64>,
        #[arg(long)]
        divisor: Option<i64>,
        #[arg(long)]
        max_len: Option<usize>,
        spec: PathBuf,
    },
}

/// A finished command: the report to print and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub report: Json,
    pub exit_code: i32,
}

fn read_element_list(path: &Path, instance: &Instance) -> Result<Vec<Value>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let items: Vec<String> =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    items.iter().map(|s| parse_element(s, instance)).collect()
}

fn parse_element(text: &str, instance: &Instance) -> Result<Value, CliError> {
    Ok(Value::parse(text, instance.universe())?)
}

fn split_spec(args: &[String]) -> Result<(&[String], PathBuf), CliError> {
    match args.split_last() {
        Some((spec, rest)) => Ok((rest, PathBuf::from(spec))),
        None => Err(CliError::Input("missing spec path".into())),
    }
}

fn absence(a: Absence) -> &'static str {
    match a {
        Absence::Proven => "proven",
        Absence::Unknown => "unknown",
    }
}

fn finish(mut out: Map<String, Json>, payload: Vec<(&str, Json)>, exit_code: i32) -> Outcome {
    for (k, v) in payload {
        out.insert(k.to_string(), v);
    }
    Outcome { report: Json::Object(out), exit_code }
}

fn require_fixpoint(result: &SaturationResult) -> Result<(), CliError> {
    if result.is_fixpoint() {
        Ok(())
    } else {
        Err(recset::Error::NotFixpoint(result.termination().to_string()).into())
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let quiet = cli.quiet;
    let load = |path: &Path, mode: Mode| -> Result<(Instance, SaturationResult), CliError> {
        let (_, instance) = load_instance_spec(path)?;
        let result = saturate(&instance, mode)?;
        Ok((instance, result))
    };

    match &cli.command {
        Command::Saturate { mode, spec } => {
            let mode = match mode {
                ModeArg::Naive => Mode::Naive,
                ModeArg::SemiNaive => Mode::SemiNaive,
            };
            let (instance, result) = load(spec, mode)?;
            Ok(finish(saturation_report("saturate", &instance, &result, quiet), vec![], 0))
        }
        Command::Order { element, spec } => {
            let (instance, result) = load(spec, Mode::SemiNaive)?;
            let e = parse_element(element, &instance)?;
            let base = saturation_report("order", &instance, &result, quiet);
            match order_of(&result, &e) {
                Ok(p) => Ok(finish(base, vec![("element", json!(e.to_string())), ("order", json!(p))], 0)),
                Err(recset::Error::NotInM { absence: a, .. }) => Ok(finish(
                    base,
                    vec![("element", json!(e.to_string())), ("order", Json::Null), ("absence", json!(absence(a)))],
                    1,
                )),
                Err(other) => Err(other.into()),
            }
        }
        Command::Derive { element, style, pad, max_len, spec } => {
            let (instance, result) = load(spec, Mode::SemiNaive)?;
            let e = parse_element(element, &instance)?;
            let style = match style {
                StyleArg::Paper => Style::Paper,
                StyleArg::Compact => Style::Compact,
            };
            let base = saturation_report("derive", &instance, &result, quiet);
            let d = match extract_description_capped(&result, &e, style, *max_len) {
                Ok(d) => d,
                Err(recset::Error::NotInM { absence: a, .. }) => {
                    return Ok(finish(
                        base,
                        vec![
                            ("element", json!(e.to_string())),
                            ("description", Json::Null),
                            ("absence", json!(absence(a))),
                        ],
                        1,
                    ))
                }
                Err(other) => return Err(other.into()),
            };
            let d = pad_description(&d, *pad, &instance)?;
            let valid = validate_description(&instance, d.entries(), &e).is_valid();
            Ok(finish(
                base,
                vec![
                    ("element", json!(e.to_string())),
                    (
                        "description",
                        json!({
                            "style": style.to_string(),
                            "pad": pad,
                            "length": d.len(),
                            "valid": valid,
                            "entries": elements(d.entries()),
                        }),
                    ),
                ],
                if valid { 0 } else { 1 },
            ))
        }
        Command::ValidateDesc { desc_file, target, spec } => {
            let (instance, result) = load(spec, Mode::SemiNaive)?;
            let seq = read_element_list(desc_file, &instance)?;
            let target = parse_element(target, &instance)?;
            let report = validate_description(&instance, &seq, &target);
            let validation = match &report {
                DescriptionReport::Valid => json!({"valid": true, "length": seq.len()}),
                DescriptionReport::Invalid { index, reason } => json!({
                    "valid": false,
                    "length": seq.len(),
                    "index": index,
                    "reason": match reason {
                        recset::descriptions::InvalidReason::Empty => "empty",
                        recset::descriptions::InvalidReason::OutOfUniverse => "out_of_universe",
                        recset::descriptions::InvalidReason::NotDerivable => "not_derivable",
                        recset::descriptions::InvalidReason::TargetMismatch => "target_mismatch",
                    },
                }),
            };
            let base = saturation_report("validate-desc", &instance, &result, quiet);
            Ok(finish(
                base,
                vec![("target", json!(target.to_string())), ("validation", validation)],
                if report.is_valid() { 0 } else { 1 },
            ))
        }
        Command::CheckClosed { set_file, spec } => {
            let (instance, result) = load(spec, Mode::SemiNaive)?;
            let set = read_element_list(set_file, &instance)?.into_iter().collect();
            let report = is_recursively_closed(&set, &instance)?;
            let base = saturation_report("check-closed", &instance, &result, quiet);
            Ok(finish(base, vec![("closure", closure(&instance, &report))], if report.is_closed() { 0 } else { 1 }))
        }
        Command::VerifyMinimal { universe, spec } | Command::VerifyIntersection { universe, spec } => {
            let minimal = matches!(cli.command, Command::VerifyMinimal { .. });
            let (instance, result) = load(spec, Mode::SemiNaive)?;
            require_fixpoint(&result)?;
            let universe = read_element_list(universe, &instance)?;
            let (name, key, found) = if minimal {
                ("verify-minimal", "minimal", brute_minimal_closed(&instance, &universe)?)
            } else {
                ("verify-intersection", "intersection", brute_intersection_closed(&instance, &universe)?)
            };
            let equal = found.iter().eq(result.elements());
            let base = saturation_report(name, &instance, &result, quiet);
            Ok(finish(
                base,
                vec![(key, elements(&found)), ("equals_saturation", json!(equal))],
                if equal { 0 } else { 1 },
            ))
        }
        Command::ExtendBase { args } => {
            let (extra, spec) = split_spec(args)?;
            let (instance, result) = load(&spec, Mode::SemiNaive)?;
            let extra = extra.iter().map(|s| parse_element(s, &instance)).collect::<Result<Vec<_>, _>>()?;
            let report = check_base_extension(&instance, &extra)?;
            let derivability: Map<String, Json> =
                report.derivability.iter().map(|(e, ok)| (e.to_string(), json!(ok))).collect();
            let holds = report.hypothesis_holds();
            let base = saturation_report("extend-base", &instance, &result, quiet);
            Ok(finish(
                base,
                vec![
                    ("hypothesis", json!(if holds { "holds" } else { "violated" })),
                    ("violations", elements(report.violations())),
                    ("derivability", Json::Object(derivability)),
                    ("sets_equal", json!(report.sets_equal)),
                ],
                if report.sets_equal == Some(true) { 0 } else { 1 },
            ))
        }
        Command::ExtendOps { base: extra_base, args } => {
            let (names, spec) = split_spec(args)?;
            let (instance, result) = load(&spec, Mode::SemiNaive)?;
            let extra_base = extra_base.iter().map(|s| parse_element(s, &instance)).collect::<Result<Vec<_>, _>>()?;
            let ops = names
                .iter()
                .map(|n| n.parse::<ModOp>().and_then(|op| op.operation_for(instance.universe())))
                .collect::<Result<Vec<_>, _>>()?;
            let report = check_combined_extension(&instance, &extra_base, ops)?;
            let base = saturation_report("extend-ops", &instance, &result, quiet);
            let mut payload =
                vec![("base_hypothesis", json!(if report.base.hypothesis_holds() { "holds" } else { "violated" }))];
            payload.push(("base_violations", elements(report.base.violations())));
            let ops = &report.ops;
            payload.push(("closure", closure(&ops.extended, &ops.closure)));
            let op_hypothesis = if ops.closure.is_closed() { "holds" } else { "violated" };
            payload.insert(1, ("op_hypothesis", json!(op_hypothesis)));
            let sets_equal = report.sets_equal();
            payload.push(("sets_equal", json!(sets_equal)));
            Ok(finish(base, payload, if sets_equal == Some(true) { 0 } else { 1 }))
        }
        Command::PropCheck { predicate, min, max, divisor, max_len, spec } => {
            let (instance, result) = load(spec, Mode::SemiNaive)?;
            require_fixpoint(&result)?;
            let missing = |flag: &str| CliError::Input(format!("--predicate {predicate:?} needs --{flag}"));
            let (name, pred) = match predicate {
                PredicateArg::Parity => ("parity", Predicate::Parity),
                PredicateArg::ValueRange => (
                    "value-range",
                    Predicate::ValueRange { min: min.unwrap_or(i64::MIN), max: max.unwrap_or(i64::MAX) },
                ),
                PredicateArg::Divisibility => {
                    ("divisibility", Predicate::Divisibility { divisor: divisor.ok_or_else(|| missing("divisor"))? })
                }
                PredicateArg::StringLength => {
                    ("string-length", Predicate::StringLength { max: max_len.ok_or_else(|| missing("max-len"))? })
                }
                PredicateArg::Representable => ("representable", Predicate::representable_in(&instance)?),
            };
            let report = check_property_induction(&instance, |v| pred.holds(v))?;
            let base = saturation_report("prop-check", &instance, &result, quiet);
            let proven = report.conclusion == Conclusion::Proven;
            Ok(finish(
                base,
                vec![("predicate", json!(name)), ("induction", induction(&instance, &report))],
                if proven { 0 } else { 1 },
            ))
        }
    }
}
