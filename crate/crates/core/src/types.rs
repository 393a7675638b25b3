//! Domain types shared by every stage: clip identities and records, the six
//! basic emotions, embeddings, and dataset statistics.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CoreError {
    #[error("clip id must not be empty")]
    EmptyId,
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("clip {id}: end_s ({end}) must be greater than start_s ({start}) and start_s >= 0")]
    InvalidSpan { id: String, start: f64, end: f64 },
    #[error("clip {id}: captions must be non-empty strings")]
    EmptyCaption { id: String },
    #[error("invalid emotion scores: {0}")]
    InvalidScores(String),
    #[error("unknown emotion label {0:?}")]
    UnknownEmotion(String),
    #[error("duplicate clip id {0}")]
    DuplicateId(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] IoError),
}

/// `std::io::Error` is not `PartialEq`; this wrapper keeps `CoreError` comparable in tests.
#[derive(Debug, Error)]
#[error("{0}")]
pub struct IoError(#[from] pub std::io::Error);

impl PartialEq for IoError {
    fn eq(&self, other: &Self) -> bool {
        self.0.kind() == other.0.kind()
    }
}

impl From<std::io::Error> for CoreError {
    fn from(err: std::io::Error) -> Self {
        CoreError::Io(IoError(err))
    }
}

/// Opaque clip identifier. Ordering is plain lexicographic byte order and is
/// used everywhere a deterministic tie-break is needed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ClipId(String);

impl ClipId {
    pub fn new(value: impl Into<String>) -> Result<Self, CoreError> {
        let value = value.into();
        if value.is_empty() {
            return Err(CoreError::EmptyId);
        }
        Ok(ClipId(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for ClipId {
    type Error = CoreError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        ClipId::new(value)
    }
}

impl From<ClipId> for String {
    fn from(id: ClipId) -> Self {
        id.0
    }
}

impl FromStr for ClipId {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClipId::new(s)
    }
}

impl fmt::Display for ClipId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Ekman's six basic emotions.
///
/// Declaration order is the fixed label order used to break ties, and the
/// discriminant is the byte written by the binary index format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmotionLabel {
    Happiness = 0,
    Sadness = 1,
    Anger = 2,
    Disgust = 3,
    Surprise = 4,
    Fear = 5,
}

impl EmotionLabel {
    pub const ALL: [EmotionLabel; 6] = [
        EmotionLabel::Happiness,
        EmotionLabel::Sadness,
        EmotionLabel::Anger,
        EmotionLabel::Disgust,
        EmotionLabel::Surprise,
        EmotionLabel::Fear,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EmotionLabel::Happiness => "happiness",
            EmotionLabel::Sadness => "sadness",
            EmotionLabel::Anger => "anger",
            EmotionLabel::Disgust => "disgust",
            EmotionLabel::Surprise => "surprise",
            EmotionLabel::Fear => "fear",
        }
    }
}

impl fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EmotionLabel {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        EmotionLabel::ALL
            .into_iter()
            .find(|e| e.as_str() == lower)
            // "joy" is the common alias for happiness in emotion datasets.
            .or_else(|| (lower == "joy").then_some(EmotionLabel::Happiness))
            .ok_or_else(|| CoreError::UnknownEmotion(s.to_string()))
    }
}

/// A probability vector over the six emotions, indexed by [`EmotionLabel::index`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 6]", into = "[f64; 6]")]
pub struct EmotionScores([f64; 6]);

impl EmotionScores {
    pub const SUM_TOLERANCE: f64 = 1e-6;

    pub fn new(scores: [f64; 6]) -> Result<Self, CoreError> {
        for (label, &s) in EmotionLabel::ALL.iter().zip(&scores) {
            if !(0.0..=1.0).contains(&s) {
                return Err(CoreError::InvalidScores(format!("{label} score {s} outside [0, 1]")));
            }
        }
        let sum: f64 = scores.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(CoreError::InvalidScores(format!("scores sum to {sum}, expected 1")));
        }
        Ok(EmotionScores(scores))
    }

    /// Builds a score vector from `(label, score)` pairs; unnamed labels get
    /// an equal share of whatever probability mass is left.
    pub fn from_pairs(pairs: &[(EmotionLabel, f64)]) -> Result<Self, CoreError> {
        let mut scores = [f64::NAN; 6];
        for &(label, s) in pairs {
            scores[label.index()] = s;
        }
        let named: f64 = scores.iter().filter(|s| !s.is_nan()).sum();
        let missing = scores.iter().filter(|s| s.is_nan()).count();
        if missing > 0 {
            let share = (1.0 - named) / missing as f64;
            for s in scores.iter_mut().filter(|s| s.is_nan()) {
                *s = share;
            }
        }
        EmotionScores::new(scores)
    }

    pub fn get(&self, label: EmotionLabel) -> f64 {
        self.0[label.index()]
    }

    pub fn as_array(&self) -> &[f64; 6] {
        &self.0
    }
}

impl TryFrom<[f64; 6]> for EmotionScores {
    type Error = CoreError;

    fn try_from(value: [f64; 6]) -> Result<Self, Self::Error> {
        EmotionScores::new(value)
    }
}

impl From<EmotionScores> for [f64; 6] {
    fn from(scores: EmotionScores) -> Self {
        scores.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaptionKind {
    Naive,
    Emotional,
}

/// One segmented clip of an archive video.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipRecord {
    pub id: ClipId,
    pub video_id: String,
    pub start_s: f64,
    pub end_s: f64,
    #[serde(default)]
    pub naive_captions: Vec<String>,
    #[serde(default)]
    pub emotional_captions: Vec<String>,
    #[serde(default)]
    pub emotion: Option<EmotionLabel>,
    #[serde(default)]
    pub media_url: Option<String>,
}

impl ClipRecord {
    pub fn duration(&self) -> f64 {
        self.end_s - self.start_s
    }

    pub fn captions(&self, kind: CaptionKind) -> &[String] {
        match kind {
            CaptionKind::Naive => &self.naive_captions,
            CaptionKind::Emotional => &self.emotional_captions,
        }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.start_s >= 0.0 && self.end_s > self.start_s && self.end_s.is_finite()) {
            return Err(CoreError::InvalidSpan {
                id: self.id.to_string(),
                start: self.start_s,
                end: self.end_s,
            });
        }
        let blank = |c: &String| c.trim().is_empty();
        if self.naive_captions.iter().any(blank) || self.emotional_captions.iter().any(blank) {
            return Err(CoreError::EmptyCaption { id: self.id.to_string() });
        }
        Ok(())
    }
}

/// A vector in the joint text/video space, keyed by the clip or query it encodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub id: String,
    pub values: Vec<f32>,
}

impl Embedding {
    pub fn new(id: impl Into<String>, values: Vec<f32>) -> Self {
        Embedding { id: id.into(), values }
    }

    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.values)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= 1e-6
    }
}

pub(crate) fn l2_norm(values: &[f32]) -> f64 {
    values.iter().map(|&v| f64::from(v) * f64::from(v)).sum::<f64>().sqrt()
}

/// Scales `values` to unit length, accumulating in `f64`. Returns `None` for
/// a zero or non-finite vector.
pub fn normalize(values: &[f32]) -> Option<Vec<f32>> {
    let norm = l2_norm(values);
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    Some(values.iter().map(|&v| (f64::from(v) / norm) as f32).collect())
}

/// Corpus statistics in the shape of a dataset comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub captions_per_video: f64,
    pub words_per_caption: f64,
    pub avg_duration_s: f64,
    pub clip_count: usize,
    pub total_runtime_s: f64,
}

/// Averages over one caption kind.
///
/// Words are runs of non-whitespace (punctuation stays attached), and
/// captions are counted per distinct `video_id`, not per clip.
pub fn compute_stats(clips: &[ClipRecord], kind: CaptionKind) -> Result<DatasetStats, CoreError> {
    if clips.is_empty() {
        return Err(CoreError::EmptyDataset);
    }
    let videos: BTreeSet<&str> = clips.iter().map(|c| c.video_id.as_str()).collect();
    let mut captions = 0usize;
    let mut words = 0usize;
    let mut runtime = 0.0f64;
    for clip in clips {
        for caption in clip.captions(kind) {
            captions += 1;
            words += caption.split_whitespace().count();
        }
        runtime += clip.duration();
    }
    let words_per_caption = if captions == 0 { 0.0 } else { words as f64 / captions as f64 };
    Ok(DatasetStats {
        captions_per_video: captions as f64 / videos.len() as f64,
        words_per_caption,
        avg_duration_s: runtime / clips.len() as f64,
        clip_count: clips.len(),
        total_runtime_s: runtime,
    })
}

/// Reads the line-delimited clip interchange format. Blank lines are skipped;
/// every record is validated and ids must be unique.
pub fn read_clips<R: BufRead>(reader: R) -> Result<Vec<ClipRecord>, CoreError> {
    let mut clips = Vec::new();
    let mut seen = BTreeSet::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ClipRecord = serde_json::from_str(&line)
            .map_err(|e| CoreError::Parse { line: n + 1, message: e.to_string() })?;
        record.validate()?;
        if !seen.insert(record.id.clone()) {
            return Err(CoreError::DuplicateId(record.id.to_string()));
        }
        clips.push(record);
    }
    Ok(clips)
}

pub fn write_clips<W: Write>(mut writer: W, clips: &[ClipRecord]) -> Result<(), CoreError> {
    for clip in clips {
        serde_json::to_writer(&mut writer, clip).map_err(std::io::Error::from)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clip(id: &str, video: &str, dur: f64, naive: &[&str]) -> ClipRecord {
        ClipRecord {
            id: ClipId::new(id).unwrap(),
            video_id: video.into(),
            start_s: 0.0,
            end_s: dur,
            naive_captions: naive.iter().map(|s| s.to_string()).collect(),
            emotional_captions: vec![],
            emotion: None,
            media_url: None,
        }
    }

    #[test]
    fn stats_hand_arithmetic() {
        let stats = compute_stats(&[clip("a", "v", 10.0, &["a b c", "d e"])], CaptionKind::Naive).unwrap();
        assert_eq!(stats.captions_per_video, 2.0);
        assert_eq!(stats.words_per_caption, 2.5);
        assert_eq!(stats.avg_duration_s, 10.0);
        assert_eq!(stats.clip_count, 1);
    }

    #[test]
    fn stats_singleton() {
        let stats = compute_stats(&[clip("a", "v", 7.5, &["hello"])], CaptionKind::Naive).unwrap();
        assert_eq!((stats.captions_per_video, stats.words_per_caption, stats.avg_duration_s), (1.0, 1.0, 7.5));
    }

    #[test]
    fn stats_count_per_distinct_video() {
        let clips = [clip("a", "v1", 10.0, &["x", "y"]), clip("b", "v1", 20.0, &["z"])];
        let stats = compute_stats(&clips, CaptionKind::Naive).unwrap();
        assert_eq!(stats.captions_per_video, 3.0);
        assert_eq!(stats.avg_duration_s, 15.0);
        assert_eq!(stats.total_runtime_s, 30.0);
    }

    #[test]
    fn punctuation_stays_attached() {
        let stats = compute_stats(&[clip("a", "v", 1.0, &["hello , world."])], CaptionKind::Naive).unwrap();
        assert_eq!(stats.words_per_caption, 3.0);
    }

    #[test]
    fn stats_empty() {
        assert_eq!(compute_stats(&[], CaptionKind::Naive), Err(CoreError::EmptyDataset));
    }

    #[test]
    fn clip_id_rejects_empty() {
        assert_eq!(ClipId::new(""), Err(CoreError::EmptyId));
        assert!(serde_json::from_str::<ClipId>("\"\"").is_err());
        assert!(ClipId::new("a").unwrap() < ClipId::new("b").unwrap());
        assert!(ClipId::new("B").unwrap() < ClipId::new("a").unwrap());
    }

    #[test]
    fn emotion_scores_validation() {
        assert!(EmotionScores::new([0.5, 0.5, 0.0, 0.0, 0.0, 0.0]).is_ok());
        assert!(matches!(
            EmotionScores::new([0.5, 0.4, 0.0, 0.0, 0.0, 0.0]),
            Err(CoreError::InvalidScores(_))
        ));
        assert!(matches!(
            EmotionScores::new([1.5, -0.5, 0.0, 0.0, 0.0, 0.0]),
            Err(CoreError::InvalidScores(_))
        ));
        let s = EmotionScores::from_pairs(&[(EmotionLabel::Anger, 0.6), (EmotionLabel::Happiness, 0.2)]).unwrap();
        assert!((s.get(EmotionLabel::Fear) - 0.05).abs() < 1e-12);
    }

    #[test]
    fn emotion_label_parse() {
        assert_eq!("Surprise".parse::<EmotionLabel>().unwrap(), EmotionLabel::Surprise);
        assert_eq!("joy".parse::<EmotionLabel>().unwrap(), EmotionLabel::Happiness);
        assert!("boredom".parse::<EmotionLabel>().is_err());
        for e in EmotionLabel::ALL {
            assert_eq!(EmotionLabel::from_index(e.index()), Some(e));
        }
    }

    #[test]
    fn clip_validation() {
        let mut c = clip("a", "v", 10.0, &["x"]);
        c.start_s = 10.0;
        assert!(matches!(c.validate(), Err(CoreError::InvalidSpan { .. })));
        let c = clip("a", "v", 10.0, &[" "]);
        assert!(matches!(c.validate(), Err(CoreError::EmptyCaption { .. })));
    }

    #[test]
    fn clip_lines_roundtrip_and_errors() {
        let mut c = clip("ZB015703#2", "ZB015703", 14.0, &["a woman talks"]);
        c.emotion = Some(EmotionLabel::Sadness);
        c.emotional_captions = vec!["a woman talks sadly".into()];
        let mut buf = Vec::new();
        write_clips(&mut buf, std::slice::from_ref(&c)).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\"emotion\":\"sadness\""));
        assert_eq!(read_clips(&buf[..]).unwrap(), vec![c.clone()]);

        let dup = [text.clone(), text].concat();
        assert!(matches!(read_clips(dup.as_bytes()), Err(CoreError::DuplicateId(_))));
        assert!(matches!(read_clips("\n{bad".as_bytes()), Err(CoreError::Parse { line: 2, .. })));
    }

    #[test]
    fn normalize_zero_vector() {
        assert_eq!(normalize(&[0.0, 0.0]), None);
        let v = normalize(&[3.0, 4.0]).unwrap();
        assert_eq!(v, vec![0.6, 0.8]);
    }
}
