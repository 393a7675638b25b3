//! Exact cosine search, the filter/full query strategies, and R@K evaluation.

mod eval;
mod index;
mod persist;
mod search;
mod strategy;

use thiserror::Error;

pub use eval::{evaluate, median_rank, recall_at_k, EvalReport, DEFAULT_KS};
pub use index::{build_index, IndexEntry, VectorIndex};
pub use persist::{load_index, save_index};
pub use search::{top_k, Hit, RetrievalResult};
pub use strategy::{query_strategy_filter, query_strategy_full, run_query, Query, QueryOutcome, Strategy};

#[derive(Debug, Error, PartialEq)]
pub enum RetrievalError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("duplicate clip id {0}")]
    DuplicateId(String),
    #[error("vector for {0} is zero, non-finite or not unit length")]
    InvalidVector(String),
    #[error("no emotion label for clip {0}")]
    MissingEmotion(String),
    #[error("k must be at least 1")]
    InvalidK,
    #[error("query text must not be empty")]
    EmptyQuery,
    #[error("no emotion phrase found in query")]
    NoEmotionFound,
    #[error("ground-truth clip {0} is not in the index")]
    MissingGroundTruth(String),
    #[error("no ground-truth pairs")]
    EmptyGroundTruth,
    #[error("index file: {0}")]
    Format(String),
    #[error(transparent)]
    Encoder(#[from] crate::encoder::EncoderError),
    #[error(transparent)]
    Pipeline(crate::pipeline::PipelineError),
}
