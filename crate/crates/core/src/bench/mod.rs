//! Experiment harness: plans, trial orchestration, aggregation and output.

pub mod plan;
pub mod plot;
pub mod presets;
pub mod records;
pub mod run;
pub mod summary;

pub use plan::{DeltaPolicy, ExperimentPlan, Method, SpectrumSource};
pub use plot::{plot_script, write_plot_script};
pub use records::{
    read_records_csv, records_csv_string, write_records_csv, MethodKind, TrialRecord, CSV_HEADER,
};
pub use run::{run_plan, PlanOutput, SkippedCell};
pub use summary::{summarize, write_summary_csv, CellSummary};
