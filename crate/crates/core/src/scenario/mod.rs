//! The `.svq` scenario language: parser, runner and reports.

pub mod ast;
pub mod parser;
pub mod report;
pub mod runner;

pub use ast::{Item, ItemKind, Pos, Scenario};
pub use parser::{parse_scenario, DiagnosticKind, ScenarioError};
pub use report::{emit_report, Format, Report};
pub use runner::{run_scenario, RunError, RunErrorKind, RunOptions, Settings};
