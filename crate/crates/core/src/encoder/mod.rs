//! Text encoders and embedding files.
//!
//! The hashing encoder is a deterministic stand-in for a neural text encoder:
//! tokens are hashed to a signed index of a `D`-dimensional vector. Its two
//! modes mirror a model fine-tuned on plain captions (`naive`, which ignores a
//! trailing emotion phrase) and one fine-tuned on emotional captions
//! (`emotional`, which keeps it).

mod format;
mod hashing;
mod remote;
mod synth;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use format::{read_embeddings, read_embeddings_binary, read_embeddings_text, write_embeddings_binary, write_embeddings_text};
pub use hashing::{encode_text, tokenize, TextEncoder};
pub use remote::{EncodeRequest, EncodeResponse, RemoteEncoder};
pub use synth::{default_vocabulary, generate_synthetic_dataset, GroundTruth, SynthConfig, SyntheticDataset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncoderMode {
    Naive,
    Emotional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncoderConfig {
    pub dimension: usize,
    pub mode: EncoderMode,
    pub hash_seed: u64,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        EncoderConfig { dimension: 256, mode: EncoderMode::Emotional, hash_seed: 0 }
    }
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<(), EncoderError> {
        if self.dimension < 2 {
            return Err(EncoderError::InvalidConfig(format!("dimension must be >= 2, got {}", self.dimension)));
        }
        Ok(())
    }

    pub fn with_mode(self, mode: EncoderMode) -> Self {
        EncoderConfig { mode, ..self }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum EncoderError {
    #[error("invalid encoder configuration: {0}")]
    InvalidConfig(String),
    #[error("encoder unavailable: {0}")]
    EncoderUnavailable(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid encoder response: {0}")]
    InvalidResponse(String),
    #[error(transparent)]
    Pipeline(#[from] crate::pipeline::PipelineError),
}

/// Anything that turns query text into a unit vector of a fixed dimension.
/// Implementations must be callable from concurrent request handlers.
pub trait QueryEncoder: Send + Sync {
    fn dimension(&self) -> usize;
    fn encode(&self, text: &str, mode: EncoderMode) -> Result<Vec<f32>, EncoderError>;
}
