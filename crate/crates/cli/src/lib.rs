//! Scenario-file driver for the algebroid checks.
//!
//! A scenario is a JSON document (see `schema/scenario.schema.json`) naming
//! a chart, an algebroid, optional bivector, cosymplectic, submanifold,
//! split and numeric blocks, and the checks to run. [`run`] evaluates the
//! checks and returns a [`Report`] whose JSON rendering is byte-stable for
//! identical inputs.

pub mod catalog;
pub mod checks;
pub mod report;
pub mod run;
pub mod scenario;

pub use catalog::{CheckInfo, CATALOG};
pub use checks::{Overrides, TOLERANCE_ENV};
pub use report::{CheckResult, Report, Residual, Status};
pub use run::run;
pub use scenario::{load, parse_scenario, ScenarioError, World, SCHEMA_VERSION};

/// Exit code for scenarios that do not parse or resolve.
pub const EXIT_SCHEMA: i32 = 2;
/// Exit code for internal errors outside any check.
pub const EXIT_INTERNAL: i32 = 3;

/// `name → asserted property`, one line per check in catalog order.
pub fn catalog_lines() -> Vec<String> {
    CATALOG
        .iter()
        .map(|c| format!("{} → {}", c.name, c.asserts))
        .collect()
}
