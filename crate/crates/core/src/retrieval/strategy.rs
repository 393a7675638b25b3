//! The two ways of answering a query that names an emotion.
//!
//! `filter` splits the query into its emotion phrase and plain text, keeps
//! only clips tagged with that emotion, and searches them with the plain text
//! in naive mode. `full` encodes the whole query in emotional mode and
//! searches every clip.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::encoder::{EncoderMode, QueryEncoder};
use crate::pipeline::{strip_emotion_suffix, PipelineError, SuffixLexicon};
use crate::retrieval::{top_k, RetrievalError, RetrievalResult, VectorIndex};
use crate::types::EmotionLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Filter,
    Full,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Filter => "filter",
            Strategy::Full => "full",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "filter" | "1" => Ok(Strategy::Filter),
            "full" | "2" => Ok(Strategy::Full),
            other => Err(format!("unknown strategy {other:?} (expected \"filter\" or \"full\")")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub text: String,
    pub strategy: Strategy,
    pub k: usize,
}

impl Query {
    pub fn validate(&self) -> Result<(), RetrievalError> {
        if self.text.trim().is_empty() {
            return Err(RetrievalError::EmptyQuery);
        }
        if self.k == 0 {
            return Err(RetrievalError::InvalidK);
        }
        Ok(())
    }
}

/// Result of [`run_query`], recording whether the filter strategy had to
/// fall back to a full search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryOutcome {
    pub result: RetrievalResult,
    pub strategy_used: Strategy,
    pub extracted_emotion: Option<EmotionLabel>,
    pub fallback_used: bool,
}

pub fn query_strategy_filter(
    index: &VectorIndex,
    query_text: &str,
    k: usize,
    lexicon: &SuffixLexicon,
    encoder: &dyn QueryEncoder,
) -> Result<(RetrievalResult, EmotionLabel), RetrievalError> {
    let split = strip_emotion_suffix(query_text, lexicon).map_err(|e| match e {
        PipelineError::NoEmotionFound => RetrievalError::NoEmotionFound,
        PipelineError::EmptyText => RetrievalError::EmptyQuery,
        other => RetrievalError::Pipeline(other),
    })?;
    let vector = encoder.encode(&split.naive_query, EncoderMode::Naive)?;
    Ok((top_k(index, &vector, k, Some(split.emotion))?, split.emotion))
}

pub fn query_strategy_full(
    index: &VectorIndex,
    query_text: &str,
    k: usize,
    encoder: &dyn QueryEncoder,
) -> Result<RetrievalResult, RetrievalError> {
    if query_text.trim().is_empty() {
        return Err(RetrievalError::EmptyQuery);
    }
    let vector = encoder.encode(query_text, EncoderMode::Emotional)?;
    top_k(index, &vector, k, None)
}

/// Runs `query`; a filter query without an emotion phrase falls back to
/// the full strategy.
pub fn run_query(
    index: &VectorIndex,
    query: &Query,
    lexicon: &SuffixLexicon,
    encoder: &dyn QueryEncoder,
) -> Result<QueryOutcome, RetrievalError> {
    query.validate()?;
    if query.strategy == Strategy::Filter {
        match query_strategy_filter(index, &query.text, query.k, lexicon, encoder) {
            Ok((result, emotion)) => {
                return Ok(QueryOutcome {
                    result,
                    strategy_used: Strategy::Filter,
                    extracted_emotion: Some(emotion),
                    fallback_used: false,
                })
            }
            Err(RetrievalError::NoEmotionFound) => {
                let result = query_strategy_full(index, &query.text, query.k, encoder)?;
                return Ok(QueryOutcome {
                    result,
                    strategy_used: Strategy::Full,
                    extracted_emotion: None,
                    fallback_used: true,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(QueryOutcome {
        result: query_strategy_full(index, &query.text, query.k, encoder)?,
        strategy_used: Strategy::Full,
        extracted_emotion: None,
        fallback_used: false,
    })
}
