use std::collections::{BTreeMap, HashMap};

use crate::retrieval::RetrievalError;
use crate::types::{l2_norm, normalize, ClipId, Embedding, EmotionLabel};

/// One clip to be indexed.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexEntry {
    pub id: ClipId,
    pub values: Vec<f32>,
    pub emotion: EmotionLabel,
}

/// Immutable flat index of unit vectors.
///
/// Entries are stored in ascending [`ClipId`] order, so position order is
/// the tie-break order and insertion order never leaks into results.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorIndex {
    dimension: usize,
    ids: Vec<ClipId>,
    emotions: Vec<EmotionLabel>,
    data: Vec<f32>,
    by_emotion: [Vec<u32>; 6],
    positions: HashMap<ClipId, usize>,
}

impl VectorIndex {
    /// Normalises every vector and validates dimensions and id uniqueness.
    pub fn build(dimension: usize, entries: impl IntoIterator<Item = IndexEntry>) -> Result<Self, RetrievalError> {
        let mut normalized = Vec::new();
        for entry in entries {
            if entry.values.len() != dimension {
                return Err(RetrievalError::DimensionMismatch { expected: dimension, got: entry.values.len() });
            }
            let values = normalize(&entry.values).ok_or_else(|| RetrievalError::InvalidVector(entry.id.to_string()))?;
            normalized.push(IndexEntry { values, ..entry });
        }
        VectorIndex::from_unit_entries(dimension, normalized)
    }

    /// Assembles an index from vectors that are already unit length; used by
    /// the loader so persisted bits are kept exactly.
    pub(crate) fn from_unit_entries(dimension: usize, mut entries: Vec<IndexEntry>) -> Result<Self, RetrievalError> {
        if dimension == 0 {
            return Err(RetrievalError::DimensionMismatch { expected: 1, got: 0 });
        }
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = entries.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(RetrievalError::DuplicateId(w[0].id.to_string()));
        }
        let mut index = VectorIndex {
            dimension,
            ids: Vec::with_capacity(entries.len()),
            emotions: Vec::with_capacity(entries.len()),
            data: Vec::with_capacity(entries.len() * dimension),
            by_emotion: Default::default(),
            positions: HashMap::with_capacity(entries.len()),
        };
        for (pos, entry) in entries.into_iter().enumerate() {
            if entry.values.len() != dimension {
                return Err(RetrievalError::DimensionMismatch { expected: dimension, got: entry.values.len() });
            }
            let norm = l2_norm(&entry.values);
            if !norm.is_finite() || (norm - 1.0).abs() > 1e-5 {
                return Err(RetrievalError::InvalidVector(entry.id.to_string()));
            }
            index.by_emotion[entry.emotion.index()].push(pos as u32);
            index.positions.insert(entry.id.clone(), pos);
            index.ids.push(entry.id);
            index.emotions.push(entry.emotion);
            index.data.extend_from_slice(&entry.values);
        }
        Ok(index)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[ClipId] {
        &self.ids
    }

    pub fn id(&self, pos: usize) -> &ClipId {
        &self.ids[pos]
    }

    pub fn emotion(&self, pos: usize) -> EmotionLabel {
        self.emotions[pos]
    }

    pub fn vector(&self, pos: usize) -> &[f32] {
        &self.data[pos * self.dimension..(pos + 1) * self.dimension]
    }

    pub fn position(&self, id: &ClipId) -> Option<usize> {
        self.positions.get(id).copied()
    }

    pub fn contains(&self, id: &ClipId) -> bool {
        self.positions.contains_key(id)
    }

    /// Positions of the entries carrying `emotion`, ascending.
    pub fn positions_with(&self, emotion: EmotionLabel) -> &[u32] {
        &self.by_emotion[emotion.index()]
    }

    pub fn count_with(&self, emotion: EmotionLabel) -> usize {
        self.by_emotion[emotion.index()].len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ClipId, EmotionLabel, &[f32])> {
        (0..self.len()).map(move |p| (self.id(p), self.emotion(p), self.vector(p)))
    }
}

/// Joins embeddings with their clip emotions and builds the index. Every
/// embedding id must be a valid clip id with an emotion label.
pub fn build_index(
    dimension: usize,
    embeddings: &[Embedding],
    emotions: &BTreeMap<ClipId, EmotionLabel>,
) -> Result<VectorIndex, RetrievalError> {
    let entries = embeddings
        .iter()
        .map(|e| {
            let id = ClipId::new(e.id.clone()).map_err(|_| RetrievalError::InvalidVector(e.id.clone()))?;
            let emotion = *emotions.get(&id).ok_or_else(|| RetrievalError::MissingEmotion(e.id.clone()))?;
            Ok(IndexEntry { id, values: e.values.clone(), emotion })
        })
        .collect::<Result<Vec<_>, RetrievalError>>()?;
    VectorIndex::build(dimension, entries)
}
