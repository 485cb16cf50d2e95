//! Vector-symbolic computing toolkit with an in-memory-computing cost model.
//!
//! - [`hv`]: hypervectors and the binding/bundling/permutation algebra.
//! - [`encoders`]: projection, level, n-gram and multi-modal encoders.
//! - [`learning`]: classification and clustering.
//! - [`reasoning`]: clean-up memory, rule queries and resonator factorization.
//! - [`cognition`]: graph memory, reactive navigation and OOD scoring.
//! - [`imc`]: memory-technology cost model, mapping, footprint bounds.
//! - [`cli`]: the `vsa` command-line front end.

pub mod cli;
pub mod cognition;
pub mod datasets;
pub mod encoders;
pub mod error;
pub mod hv;
pub mod imc;
pub mod io;
pub mod learning;
pub mod reasoning;

pub use error::{Error, Result};
