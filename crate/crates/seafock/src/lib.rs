//! Mode entanglement of identical particles.
//!
//! Smoke-test scaffold; modules land incrementally.

pub mod error;

pub use error::{Error, Result};
