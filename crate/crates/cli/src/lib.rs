//! Map-expression parsing, experiment configs, the batch runner, fuzz
//! suites and report rendering for `orbitgap-core`.

pub mod config;
pub mod expr;
pub mod fuzz;
pub mod report;
pub mod runner;
