//! R@K evaluation: the fraction of queries whose single correct clip shows
//! up in the top K.
//!
//! One-to-one ground truth undercounts: a relevant clip that is not the
//! labelled one still counts as a miss.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoder::{GroundTruth, QueryEncoder};
use crate::pipeline::SuffixLexicon;
use crate::retrieval::{run_query, Query, RetrievalError, Strategy, VectorIndex};

pub const DEFAULT_KS: [usize; 3] = [1, 5, 10];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub strategy: Strategy,
    pub r_at: BTreeMap<usize, f64>,
    /// Median 1-based rank over queries whose clip was found within max K.
    pub median_rank: Option<f64>,
    pub query_count: usize,
    /// Queries whose clip was not within max K.
    pub not_found: usize,
    /// Filter-strategy queries with no emotion phrase that ran as full searches.
    pub fallback_count: usize,
    /// Total entries scored over all queries.
    pub comparisons: u64,
}

/// Fraction of `ranks` (1-based, `None` = not found) at or above `k`.
pub fn recall_at_k(ranks: &[Option<usize>], k: usize) -> f64 {
    if ranks.is_empty() {
        return 0.0;
    }
    ranks.iter().filter(|r| r.is_some_and(|r| r <= k)).count() as f64 / ranks.len() as f64
}

/// Median of the found ranks; `None` when nothing was found.
pub fn median_rank(ranks: &[Option<usize>]) -> Option<f64> {
    let mut found: Vec<usize> = ranks.iter().flatten().copied().collect();
    if found.is_empty() {
        return None;
    }
    found.sort_unstable();
    let mid = found.len() / 2;
    Some(if found.len() % 2 == 1 { found[mid] as f64 } else { (found[mid - 1] + found[mid]) as f64 / 2.0 })
}

pub fn evaluate(
    index: &VectorIndex,
    ground_truth: &[GroundTruth],
    strategy: Strategy,
    ks: &[usize],
    lexicon: &SuffixLexicon,
    encoder: &dyn QueryEncoder,
) -> Result<EvalReport, RetrievalError> {
    if ks.is_empty() || ks.contains(&0) {
        return Err(RetrievalError::InvalidK);
    }
    if ground_truth.is_empty() {
        return Err(RetrievalError::EmptyGroundTruth);
    }
    if let Some(missing) = ground_truth.iter().find(|g| !index.contains(&g.clip_id)) {
        return Err(RetrievalError::MissingGroundTruth(missing.clip_id.to_string()));
    }
    let max_k = *ks.iter().max().expect("non-empty");
    let outcomes = ground_truth
        .par_iter()
        .map(|g| {
            let query = Query { text: g.query.clone(), strategy, k: max_k };
            let outcome = run_query(index, &query, lexicon, encoder)?;
            let rank = outcome.result.hits.iter().position(|h| h.clip_id == g.clip_id).map(|p| p + 1);
            Ok((rank, outcome.fallback_used, outcome.result.comparisons_made))
        })
        .collect::<Result<Vec<_>, RetrievalError>>()?;

    let ranks: Vec<Option<usize>> = outcomes.iter().map(|o| o.0).collect();
    let mut sorted_ks = ks.to_vec();
    sorted_ks.sort_unstable();
    sorted_ks.dedup();
    Ok(EvalReport {
        strategy,
        r_at: sorted_ks.iter().map(|&k| (k, recall_at_k(&ranks, k))).collect(),
        median_rank: median_rank(&ranks),
        query_count: ranks.len(),
        not_found: ranks.iter().filter(|r| r.is_none()).count(),
        fallback_count: outcomes.iter().filter(|o| o.1).count(),
        comparisons: outcomes.iter().map(|o| o.2 as u64).sum(),
    })
}

impl EvalReport {
    /// Plain-text table: one header row and one row of fractions.
    pub fn to_table(&self) -> String {
        let mut header = format!("{:<9}", "strategy");
        let mut row = format!("{:<9}", self.strategy.to_string());
        for (k, r) in &self.r_at {
            header.push_str(&format!("{:>8}", format!("R@{k}")));
            row.push_str(&format!("{:>8.3}", r));
        }
        header.push_str(&format!("{:>9}{:>9}{:>11}", "MedR", "queries", "not_found"));
        let medr = self.median_rank.map_or_else(|| "-".to_string(), |m| format!("{m:.1}"));
        row.push_str(&format!("{:>9}{:>9}{:>11}", medr, self.query_count, self.not_found));
        format!("{header}\n{row}\n")
    }
}
