//! Verification suites, report format and table emitters behind the
//! `tldimer` command.

pub mod export;
pub mod report;
pub mod suites;
pub mod tables;

pub use report::{Check, Report, Status};
