//! Deterministic preprocessing: shot merging, emotion re-balancing, and
//! emotional caption augmentation.

mod augment;
mod emotion;
mod lexicon;
mod paraphrase;
mod segment;

use thiserror::Error;

use crate::types::EmotionLabel;

pub use augment::{augment_caption, insert_suffix, strip_emotion_suffix, suffix_index, EmotionSplit};
pub use emotion::{rebalance_batch, rebalance_emotion, rebalance_raw, top_emotion, RebalanceReport};
pub use lexicon::SuffixLexicon;
pub use paraphrase::{emotional_captions, CommandParaphraser, Paraphraser};
pub use segment::{
    clips_from_intervals, merge_boundaries, merge_short_shots, read_shot_lists, SegmentationConfig, ShotBoundaryList,
};

#[derive(Debug, Error, PartialEq)]
pub enum PipelineError {
    #[error("invalid shot boundaries: {0}")]
    InvalidBoundaries(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid emotion scores: {0}")]
    InvalidScores(String),
    #[error("empty batch")]
    EmptyBatch,
    #[error("duplicate clip id {0}")]
    DuplicateId(String),
    #[error("text must not be empty")]
    EmptyText,
    #[error("lexicon has no suffixes for {0}")]
    MissingSuffixes(EmotionLabel),
    #[error("no emotion phrase found in query")]
    NoEmotionFound,
    #[error("lexicon line {line}: {message}")]
    LexiconParse { line: usize, message: String },
    #[error("shot list line {line}: {message}")]
    ShotParse { line: usize, message: String },
    #[error("paraphrase hook failed: {0}")]
    Paraphrase(String),
    #[error("i/o error: {0}")]
    Io(String),
}
