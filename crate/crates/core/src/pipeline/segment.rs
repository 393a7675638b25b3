use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::pipeline::PipelineError;
use crate::types::{ClipId, ClipRecord};

/// Shot cut timestamps of one video, in seconds, from any upstream shot detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotBoundaryList {
    pub video_id: String,
    boundaries: Vec<f64>,
}

impl ShotBoundaryList {
    /// Boundaries must be finite, non-negative, strictly increasing, and at
    /// least two long (one shot).
    pub fn new(video_id: impl Into<String>, boundaries: Vec<f64>) -> Result<Self, PipelineError> {
        if boundaries.len() < 2 {
            return Err(PipelineError::InvalidBoundaries("need at least two boundaries".into()));
        }
        if boundaries.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(PipelineError::InvalidBoundaries("boundaries must be finite and >= 0".into()));
        }
        if let Some(w) = boundaries.windows(2).find(|w| w[1] <= w[0]) {
            return Err(PipelineError::InvalidBoundaries(format!(
                "boundaries not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        Ok(ShotBoundaryList { video_id: video_id.into(), boundaries })
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn duration(&self) -> f64 {
        self.boundaries[self.boundaries.len() - 1] - self.boundaries[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentationConfig {
    pub min_clip_duration_s: f64,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        SegmentationConfig { min_clip_duration_s: 12.0 }
    }
}

impl SegmentationConfig {
    pub fn new(min_clip_duration_s: f64) -> Result<Self, PipelineError> {
        if !(min_clip_duration_s > 0.0 && min_clip_duration_s.is_finite()) {
            return Err(PipelineError::InvalidConfig(format!(
                "min_clip_duration_s must be > 0, got {min_clip_duration_s}"
            )));
        }
        Ok(SegmentationConfig { min_clip_duration_s })
    }
}

/// Merges consecutive shots into clips of at least the configured minimum.
///
/// Shots are accumulated left to right and a clip is emitted as soon as the
/// accumulated span reaches the minimum. A trailing remainder that stays
/// below the minimum is folded into the previous clip, or emitted on its own
/// when the whole video is shorter than the minimum.
pub fn merge_short_shots(shots: &ShotBoundaryList, cfg: &SegmentationConfig) -> Vec<(f64, f64)> {
    let mut clips = Vec::new();
    merge_boundaries(&shots.boundaries, cfg.min_clip_duration_s, &mut clips);
    clips
}

/// [`merge_short_shots`] over a raw boundary slice, writing into `out`
/// (cleared first). `bounds` must satisfy the [`ShotBoundaryList`]
/// invariants; nothing is checked here.
pub fn merge_boundaries(bounds: &[f64], min_clip_duration_s: f64, out: &mut Vec<(f64, f64)>) {
    out.clear();
    let last = bounds[bounds.len() - 1];
    let mut start = bounds[0];
    for &t in &bounds[1..] {
        if t - start >= min_clip_duration_s {
            out.push((start, t));
            start = t;
        }
    }
    if start < last {
        match out.last_mut() {
            Some(prev) => prev.1 = last,
            None => out.push((start, last)),
        }
    }
}

/// Turns merged intervals into caption-less clip records named `{video_id}#{n}`
/// with `n` counting from 1.
pub fn clips_from_intervals(video_id: &str, intervals: &[(f64, f64)]) -> Vec<ClipRecord> {
    intervals
        .iter()
        .enumerate()
        .map(|(n, &(start_s, end_s))| ClipRecord {
            id: ClipId::new(format!("{video_id}#{}", n + 1)).expect("non-empty id"),
            video_id: video_id.to_string(),
            start_s,
            end_s,
            naive_captions: Vec::new(),
            emotional_captions: Vec::new(),
            emotion: None,
            media_url: None,
        })
        .collect()
}

/// Reads shot boundary records, one per line: a video id followed by its
/// ascending boundary seconds, all whitespace-separated. `#` lines are comments.
pub fn read_shot_lists<R: BufRead>(reader: R) -> Result<Vec<ShotBoundaryList>, PipelineError> {
    let mut lists = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| PipelineError::Io(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let video_id = fields.next().unwrap_or_default();
        let boundaries = fields
            .map(|f| f.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| PipelineError::ShotParse { line: n + 1, message: e.to_string() })?;
        let list = ShotBoundaryList::new(video_id, boundaries)
            .map_err(|e| PipelineError::ShotParse { line: n + 1, message: e.to_string() })?;
        lists.push(list);
    }
    Ok(lists)
}
