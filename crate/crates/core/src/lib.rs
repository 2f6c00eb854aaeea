//! Codes and set families with forbidden agreement patterns.
//!
//! The crate is organized around one question: how large can a family of
//! words or sets be if some intersection size or Hamming distance never
//! occurs? It provides exact searchers for small instances, closed-form
//! bounds with their hypotheses attached, the dependent-random-choice
//! machinery that powers the density results, and the decomposition
//! pipelines that turn one forbidden distance into structured witnesses.

pub mod bitset;
pub mod bounds;
pub mod code;
pub mod constructions;
pub mod drc;
pub mod error;
pub mod family;
pub mod io;
pub mod pipelines;
pub mod search;
pub mod word;

pub use code::{Code, DistanceSet};
pub use error::{Error, Result};
pub use family::{KSetFamily, PermFamily, SubsetFamily};
pub use word::{CoordinatePartition, Word};
