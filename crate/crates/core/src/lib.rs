//! Darboux and Crum transformations of one-dimensional Schrödinger operators,
//! evaluated on truncated Taylor jets.

pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod jets;
pub mod potentials;
pub mod shape_invariance;
pub mod transforms;
pub mod verify;
pub mod wronskian;

pub use error::{Error, Result};
pub use jets::Jet;
