//! Configuration, scans over N and K, the invariant suite and result files.

pub mod config;
pub mod report;
pub mod scans;
pub mod verify;

pub use config::{LawKind, ScanConfig};
pub use report::{emit_report, read_csv, ScanRow};
pub use scans::{run_epsilon_scan, run_k_scan, run_n_scan, trend, Axis, NScanOutput, Trend};
pub use verify::{run_invariant_suite, SuiteReport, VerifyConfig};
