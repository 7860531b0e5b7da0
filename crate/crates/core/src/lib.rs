//! Exact arithmetic for cyclic algebras over iterated power-series fields.

pub mod albert;
pub mod anagram;
pub mod base_fields;
pub mod cyclic;
pub mod error;
pub mod harness;
pub mod kummer;
pub mod linalg;
pub mod sampling;
pub mod series;
pub mod structure;

pub use error::{Error, Result};
