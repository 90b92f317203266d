//! Library side of the `qknit` command: verification checks, overhead
//! tables and config-driven estimator runs.

pub mod run;
pub mod tables;
pub mod verify;
