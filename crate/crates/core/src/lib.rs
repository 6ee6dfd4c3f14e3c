//! Bootstrap percolation on directed configuration-model random graphs.
//!
//! * [`degree_model`]: joint `(in, out)` degree laws and sampled sequences.
//! * [`graph`]: uniform stub matchings.
//! * [`cascade`]: synchronous and sequential simulation engines.
//! * [`theory`]: the fixed-point prediction and the fluid-limit trajectory.
//! * [`experiment`]: replications, sweeps and concentration studies.
//! * [`cli`]: the `bootperc` command line.

pub mod cascade;
pub mod cli;
pub mod degree_model;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod rng;
pub mod theory;

pub use error::{Error, Result};
