//! Report builders behind the `hybridlight` command.

pub mod format;
pub mod parallel;
pub mod report;
pub mod table2;
pub mod validate;

pub use report::{Check, RunReport};
pub use table2::{table2_report, TABLE2};
pub use validate::validate_report;
