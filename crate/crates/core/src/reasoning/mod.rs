//! Clean-up memory, role-filler queries and resonator factorization.

pub mod cleanup;
pub mod resonator;
pub mod rules;

pub use cleanup::{CleanupMatch, CleanupMemory, DEFAULT_CLEANUP_THRESHOLD};
pub use resonator::{factorize, resonator_step, FactorizeResult, ResonatorState, Schedule};
pub use rules::{compose, query_unbind, record};
