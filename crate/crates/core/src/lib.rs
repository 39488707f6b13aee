//! Exact intersection theory on moduli spaces of stable curves.
//!
//! The crate is `no_std` (with `alloc`): stable graphs and their canonical
//! forms, ψ/κ intersection numbers, the decorated-strata algebra, classes
//! decorated by the weight-12 cusp form ω, symmetric-group representation
//! arithmetic and the bookkeeping of the inductive generation argument.
//! File formats, reports and the command line live in the `strata` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod error;
pub mod graphs;
pub mod induction;
pub mod integrals;
pub mod linalg;
pub mod omega;
pub mod rational;
pub mod reps;
pub mod strata;

pub use error::{Error, Result};
pub use rational::Q;
