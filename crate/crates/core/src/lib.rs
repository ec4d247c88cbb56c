//! Aspect-based opinion extraction and summarization for product reviews.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod grouping;
pub mod lexicons;
pub mod patterns;
pub mod pipeline;
pub mod scoring;
pub mod stats;
pub mod summary;
pub mod tagger;
pub mod tagset;

pub use error::{Error, Result};
