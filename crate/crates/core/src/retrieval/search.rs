use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::retrieval::{RetrievalError, VectorIndex};
use crate::types::{ClipId, EmotionLabel};

/// Entries per scoring shard. Small indexes are scanned in one shard.
const SHARD: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hit {
    pub clip_id: ClipId,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetrievalResult {
    /// Best first: score descending, then clip id ascending.
    pub hits: Vec<Hit>,
    pub comparisons_made: usize,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    score: f64,
    pos: u32,
}

// "Greater" means worse, so a max-heap keeps the weakest kept hit on top.
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        other.score.total_cmp(&self.score).then(self.pos.cmp(&other.pos))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

/// Cosine against a unit query: the `f64` sum of per-component products.
pub(crate) fn dot(query: &[f64], values: &[f32]) -> f64 {
    query.iter().zip(values).map(|(&q, &v)| q * f64::from(v)).sum()
}

fn unit_query(index: &VectorIndex, query: &[f32]) -> Result<Vec<f64>, RetrievalError> {
    if query.len() != index.dimension() {
        return Err(RetrievalError::DimensionMismatch { expected: index.dimension(), got: query.len() });
    }
    let norm = query.iter().map(|&v| f64::from(v) * f64::from(v)).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(RetrievalError::InvalidVector("query".into()));
    }
    Ok(query.iter().map(|&v| f64::from(v) / norm).collect())
}

fn shard_top_k(index: &VectorIndex, query: &[f64], positions: impl Iterator<Item = usize>, k: usize) -> Vec<Candidate> {
    let mut heap = BinaryHeap::with_capacity(k + 1);
    for pos in positions {
        let candidate = Candidate { score: dot(query, index.vector(pos)), pos: pos as u32 };
        if heap.len() < k {
            heap.push(candidate);
        } else if let Some(worst) = heap.peek() {
            if candidate < *worst {
                heap.pop();
                heap.push(candidate);
            }
        }
    }
    heap.into_vec()
}

/// Exact cosine top-k over the index, optionally restricted to one emotion.
///
/// The query is normalised first. Shards are scored in parallel and merged
/// under a total order, so the result does not depend on scheduling.
pub fn top_k(
    index: &VectorIndex,
    query: &[f32],
    k: usize,
    emotion_filter: Option<EmotionLabel>,
) -> Result<RetrievalResult, RetrievalError> {
    if k == 0 {
        return Err(RetrievalError::InvalidK);
    }
    let query = unit_query(index, query)?;
    let (mut candidates, comparisons_made) = match emotion_filter {
        Some(emotion) => {
            let positions = index.positions_with(emotion);
            let merged = positions
                .par_chunks(SHARD)
                .flat_map_iter(|chunk| shard_top_k(index, &query, chunk.iter().map(|&p| p as usize), k))
                .collect::<Vec<_>>();
            (merged, positions.len())
        }
        None => {
            let n = index.len();
            let merged = (0..n.div_ceil(SHARD))
                .into_par_iter()
                .flat_map_iter(|s| shard_top_k(index, &query, s * SHARD..((s + 1) * SHARD).min(n), k))
                .collect::<Vec<_>>();
            (merged, n)
        }
    };
    candidates.sort_unstable();
    candidates.truncate(k);
    let hits = candidates
        .into_iter()
        .map(|c| Hit { clip_id: index.id(c.pos as usize).clone(), score: c.score.clamp(-1.0, 1.0) })
        .collect();
    Ok(RetrievalResult { hits, comparisons_made })
}
