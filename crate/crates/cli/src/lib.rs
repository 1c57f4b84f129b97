//! Command-line companion to `fbcode-core`: file formats, the code cache,
//! and recomputation of the published tables.

pub mod cache;
pub mod constructions;
pub mod formats;
pub mod tables;
