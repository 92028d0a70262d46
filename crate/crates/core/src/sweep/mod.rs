//! Scenario files, parameter sweeps, tabular output and validation runs.

pub mod config;
pub mod grid;
pub mod output;
pub mod validation;

pub use config::{load_scenario, parse_scenario, ScenarioDocument};
pub use grid::{
    parse_values, run_sweep, scenario_rows, Axis, Evaluation, Metric, MetricSelection, PointLabel, ResultRow, SweepSpec,
};
pub use output::{emit, emit_to_path, format_number, round_sig, Format, CSV_HEADER};
pub use validation::{
    compare, validate_run, validate_values, Allowance, MetricVerdict, ToleranceProfile, ValidationReport,
};
