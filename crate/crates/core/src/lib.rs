//! Recursively defined sets: the least set containing a base and closed
//! under a family of partial operations.
//!
//! [`engine::saturate`] builds the set stratum by stratum, where stratum `p`
//! holds the elements first obtainable with `p` rule applications, and
//! records a witness for each element. [`descriptions`] turns witnesses into
//! derivation sequences and validates arbitrary ones. [`verify`] checks the
//! closure theorems against brute-force oracles, and [`instances`] builds the
//! standard examples: finite sets, cyclic groups, recurrences, spans and
//! truncated regular sets.
//!
//! The engine, descriptions and verifiers are generic over any [`Element`];
//! [`Value`] is the concrete element type used by the builders and the CLI,
//! and is the default type parameter everywhere.
//!
//! ```
//! use recset::{build_cyclic_group, saturate, Flavor, Mode, Value};
//!
//! let z5 = build_cyclic_group(5, 1, Flavor::Additive).unwrap();
//! let m = saturate(&z5, Mode::SemiNaive).unwrap();
//! assert_eq!(m.strata()[2], vec![Value::int(3, 5), Value::int(4, 5)]);
//! ```

pub mod descriptions;
pub mod engine;
mod error;
pub mod instances;
pub mod model;
pub mod verify;

pub use descriptions::{
    extract_description, pad_description, validate_description, Description, DescriptionReport, Style,
};
pub use engine::{order_of, partition_report, saturate, witness_of, Mode, SaturationResult, Termination, Witness};
pub use error::{Absence, Error, Result};
pub use instances::{
    build_cyclic_group, build_identity_closure, build_modular, build_recurrence, build_regular_sets, build_span,
    Flavor, ModOp, RecurrenceSpec,
};
pub use model::{
    apply_operation, canonicalize_element, compare_elements, Element, Instance, Lang, Limits, Operation, Universe,
    Value,
};
