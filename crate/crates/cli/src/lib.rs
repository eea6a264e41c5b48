//! Library surface of the experiment runner, exposed so the integration
//! tests can drive runs in-process.

pub mod config;
pub mod experiments;
pub mod figures;
pub mod report;
