//! JSON reports.
//!
//! Key order is fixed: `version`, `command`, `mode`, `strata`, `orders`,
//! `witnesses` (dropped by `--quiet`), `stats`, `termination`, then the
//! command payload. Element-keyed objects and element arrays follow the
//! element order, never hash order.

use std::io::Write;

use recset::verify::{ClosureReport, Counterexample, InductionReport, OpRef};
use recset::{Instance, SaturationResult, Value, Witness};
use serde_json::{json, Map, Value as Json};

pub const REPORT_VERSION: u32 = 1;

pub fn elements<'a>(items: impl IntoIterator<Item = &'a Value>) -> Json {
    Json::Array(items.into_iter().map(|e| Json::String(e.to_string())).collect())
}

fn op_name(instance: &Instance, op: OpRef) -> String {
    match op {
        OpRef::Base => "base".to_string(),
        OpRef::Op(id) => instance.op(id).map_or_else(|| format!("#{id}"), |o| o.name().to_string()),
    }
}

pub fn counterexample(instance: &Instance, c: &Counterexample<Value>) -> Json {
    json!({
        "op": op_name(instance, c.op),
        "args": elements(&c.args),
        "result": c.result.to_string(),
    })
}

pub fn closure(instance: &Instance, report: &ClosureReport) -> Json {
    json!({
        "closed": report.is_closed(),
        "counterexamples": report.counterexamples.iter().map(|c| counterexample(instance, c)).collect::<Vec<_>>(),
    })
}

pub fn induction(instance: &Instance, report: &InductionReport) -> Json {
    json!({
        "conclusion": match report.conclusion {
            recset::verify::Conclusion::Proven => "proven",
            recset::verify::Conclusion::Refuted => "refuted",
        },
        "base_failures": elements(&report.base_failures),
        "preservation_failures": report
            .preservation_failures
            .iter()
            .map(|c| counterexample(instance, c))
            .collect::<Vec<_>>(),
        "exhaustive_check": elements(&report.exhaustive_check),
    })
}

/// The saturation part shared by every command.
pub fn saturation_report(
    command: &str,
    instance: &Instance,
    result: &SaturationResult,
    quiet: bool,
) -> Map<String, Json> {
    let mut out = Map::new();
    out.insert("version".into(), json!(REPORT_VERSION));
    out.insert("command".into(), json!(command));
    out.insert("mode".into(), json!(result.mode().to_string()));
    out.insert("strata".into(), Json::Array(result.strata().iter().map(elements).collect()));
    let orders: Map<String, Json> = result.orders().iter().map(|(e, p)| (e.to_string(), json!(p))).collect();
    out.insert("orders".into(), Json::Object(orders));
    if !quiet {
        let witnesses: Map<String, Json> = result
            .witnesses()
            .iter()
            .map(|(e, w)| {
                let w = match w {
                    Witness::Base => json!("base"),
                    Witness::Derived { op, args } => json!({
                        "op": op_name(instance, OpRef::Op(*op)),
                        "args": elements(args),
                    }),
                };
                (e.to_string(), w)
            })
            .collect();
        out.insert("witnesses".into(), Json::Object(witnesses));
    }
    let rounds: Vec<Json> = result
        .rounds()
        .iter()
        .map(|r| {
            json!({
                "tuples_enumerated": r.tuples_enumerated,
                "evaluator_calls": r.evaluator_calls,
                "undefined": r.undefined,
                "duplicates": r.duplicates,
            })
        })
        .collect();
    out.insert(
        "stats".into(),
        json!({
            "elements": result.len(),
            "evaluator_calls": result.total_evaluator_calls(),
            "rounds": rounds,
        }),
    );
    out.insert("termination".into(), json!(result.termination().as_str()));
    out
}

/// Writes the report as one line of JSON followed by a newline.
pub fn emit_report(report: &Json, sink: &mut dyn Write) -> std::io::Result<()> {
    serde_json::to_writer(&mut *sink, report)?;
    sink.write_all(b"\n")?;
    sink.flush()
}
