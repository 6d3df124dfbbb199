//! Experiment plumbing: JSON configuration, amplitude sweeps with verdicts,
//! the reduction check, the randomized disc-map suite and report files.

pub mod config;
pub mod emit;
pub mod reduction;
pub mod suite;
pub mod sweep;

pub use config::{DiscmapConfig, ExperimentConfig, OutputConfig, Perturbation, SectionConfig, Thresholds};
pub use emit::{emit, records_csv, Emitted, Report, Summary, Versions, REPORT_SCHEMA};
pub use reduction::{verify_reduction, BranchReport, Normalization, ReductionReport};
pub use suite::{discmap_suite, RotationRow, SuiteReport, Tally, WitnessTally};
pub use sweep::{
    build_form, classify, exit_code, fmt_num, period_error, ratio_error, run_sweep, sweep_point, ResultRecord,
    SectionTable, Sweep, Verdict, CSV_HEADER,
};
