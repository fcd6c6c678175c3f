//! Library side of the verification harness: suite runners, report model,
//! and CSV emitters. The `fockops` binary is a thin argument-parsing shell
//! over these modules, which keeps every behavior reachable from integration
//! tests without spawning processes.

pub mod report;
pub mod suites;
pub mod tables;
