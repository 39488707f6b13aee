//! File formats, reports and the command line for `strata-core`.
//!
//! * [`json`] — the graph / tautological-class interchange schema;
//! * [`og`] — the text format for ω-decorated classes;
//! * [`assemble`] — parallel pairing-matrix assembly and rank;
//! * [`checks`] — cross-validation cases for an external referee;
//! * [`cli`] — subcommands, configuration and report emission.

pub mod assemble;
pub mod checks;
pub mod cli;
pub mod json;
pub mod og;
