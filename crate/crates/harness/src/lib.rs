//! Harness around the core library: instance file formats, seeded
//! generators with ground truth, experiment suites and run reports.

pub mod generate;
pub mod report;
pub mod spec;
pub mod suite;
