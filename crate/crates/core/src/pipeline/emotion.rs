use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::pipeline::PipelineError;
use crate::types::{ClipId, EmotionLabel, EmotionScores};

/// Labels in descending score order; equal scores keep the fixed label order.
fn ranked(scores: &EmotionScores) -> [EmotionLabel; 6] {
    let mut labels = EmotionLabel::ALL;
    labels.sort_by(|a, b| scores.get(*b).total_cmp(&scores.get(*a)));
    labels
}

/// The raw argmax label (ties broken by fixed label order).
pub fn top_emotion(scores: &EmotionScores) -> EmotionLabel {
    ranked(scores)[0]
}

/// Re-assigns an emotion to counter the happiness bias of emotion classifiers.
///
/// A non-happiness argmax is kept. When happiness wins, the clip stays
/// happiness only if sadness is the runner-up; otherwise it takes the
/// runner-up label.
pub fn rebalance_emotion(scores: &EmotionScores) -> EmotionLabel {
    let [first, second, ..] = ranked(scores);
    match (first, second) {
        (EmotionLabel::Happiness, EmotionLabel::Sadness) => EmotionLabel::Happiness,
        (EmotionLabel::Happiness, runner_up) => runner_up,
        (other, _) => other,
    }
}

/// Validates a raw probability vector and re-assigns its label.
pub fn rebalance_raw(scores: [f64; 6]) -> Result<EmotionLabel, PipelineError> {
    let scores = EmotionScores::new(scores).map_err(|e| PipelineError::InvalidScores(e.to_string()))?;
    Ok(rebalance_emotion(&scores))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RebalanceReport {
    pub labels: BTreeMap<ClipId, EmotionLabel>,
    /// Fraction of clips whose raw argmax is happiness.
    pub happiness_before: f64,
    /// Fraction of clips labelled happiness after re-assignment.
    pub happiness_after: f64,
}

impl RebalanceReport {
    pub fn distribution(&self) -> [usize; 6] {
        let mut counts = [0usize; 6];
        for label in self.labels.values() {
            counts[label.index()] += 1;
        }
        counts
    }
}

pub fn rebalance_batch(scored: &[(ClipId, EmotionScores)]) -> Result<RebalanceReport, PipelineError> {
    if scored.is_empty() {
        return Err(PipelineError::EmptyBatch);
    }
    let mut labels = BTreeMap::new();
    let mut before = 0usize;
    let mut after = 0usize;
    for (id, scores) in scored {
        let label = rebalance_emotion(scores);
        if top_emotion(scores) == EmotionLabel::Happiness {
            before += 1;
        }
        if label == EmotionLabel::Happiness {
            after += 1;
        }
        if labels.insert(id.clone(), label).is_some() {
            return Err(PipelineError::DuplicateId(id.to_string()));
        }
    }
    let n = scored.len() as f64;
    Ok(RebalanceReport {
        labels,
        happiness_before: before as f64 / n,
        happiness_after: after as f64 / n,
    })
}
