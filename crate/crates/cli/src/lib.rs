//! Command-line front end for `k3evenset-core`: JSON reports, a brute-force
//! root oracle, worker splitting and the reproducibility suite.

pub mod app;
pub mod json;
pub mod oracle;
pub mod parallel;
pub mod verify;

pub use app::{run, Output};
