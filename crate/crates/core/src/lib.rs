//! Topological Ramsey spaces built from finite truncations.

pub mod axioms;
pub mod block_seq;
pub mod echelon;
pub mod error;
pub mod gpartitions;
pub mod gapw;
pub mod par;
pub mod param_words;
pub mod search;
pub mod space;
pub mod words_hj;

pub use error::{Error, Result};
pub use space::{Depth, Space};
