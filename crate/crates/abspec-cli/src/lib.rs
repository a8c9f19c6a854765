//! Command-line front end: declarative JSON run configurations dispatched
//! to the computation modules, with CSV outputs and a derived-quantity
//! summary on standard output.

pub mod config;
pub mod run;
