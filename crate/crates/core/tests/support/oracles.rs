//! Reference implementations for the test suites. Each one is written from
//! the rule statement alone, on the dumbest data representation available,
//! and shares no code with the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// Suffixes per emotion as annotated, in label order
/// happiness, sadness, anger, disgust, surprise, fear.
pub const SUFFIXES: [&[&str]; 6] = [
    &[
        "with joy",
        "joyously",
        "joyfully",
        "in amusement",
        "with amusement",
        "with excitement",
        "in excitement",
        "excitedly",
        "with relief",
        "with happiness",
        "happily",
        "with enthusiasm",
        "enthusiastically",
    ],
    &["with sadness", "sadly", "in disappointment", "disappointedly", "with grief", "in grief", "pessimistically"],
    &["in anger", "with anger", "angrily", "in annoyance", "with annoyance", "with hate", "in disapproval"],
    &["in disgust", "with disgust", "disgustedly"],
    &["in surprise", "with surprise", "surprisedly", "with curiosity", "curiously"],
    &[
        "in fear",
        "with fear",
        "out of fear",
        "fearfully",
        "from nervousness",
        "out of nervousness",
        "nervously",
        "with worry",
        "worriedly",
        "confusedly",
    ],
];

/// Merge reference over integer shot durations.
///
/// Enumerates every way of cutting the shot sequence into consecutive
/// groups and keeps the ones that satisfy the rule read declaratively:
/// every group but the last closes on the first shot that brings it to
/// `min`; the last group is either such a group, or such a group followed
/// by a remainder shorter than `min`, or (with no other groups) the whole
/// video when it is shorter than `min`. Exactly one partition qualifies.
pub fn merge_oracle(durations: &[u32], min: u32) -> Vec<(u32, u32)> {
    let n = durations.len();
    assert!(n >= 1);
    let closes = |g: &[u32]| {
        let total: u32 = g.iter().sum();
        let without_last: u32 = g[..g.len() - 1].iter().sum();
        total >= min && without_last < min
    };
    let mut found: Vec<Vec<(usize, usize)>> = Vec::new();
    for mask in 0u32..(1 << (n - 1)) {
        // bit b set: cut after shot b
        let mut groups = Vec::new();
        let mut start = 0;
        for b in 0..n - 1 {
            if mask & (1 << b) != 0 {
                groups.push((start, b + 1));
                start = b + 1;
            }
        }
        groups.push((start, n));
        let (last, head) = groups.split_last().unwrap();
        if !head.iter().all(|&(s, e)| closes(&durations[s..e])) {
            continue;
        }
        let g = &durations[last.0..last.1];
        let ok_last = closes(g)
            || (1..g.len()).any(|split| closes(&g[..split]) && g[split..].iter().sum::<u32>() < min)
            || (head.is_empty() && g.iter().sum::<u32>() < min);
        if ok_last {
            found.push(groups);
        }
    }
    assert_eq!(found.len(), 1, "rule admits {} partitions of {durations:?}", found.len());
    let mut offsets = vec![0u32];
    for d in durations {
        offsets.push(offsets.last().unwrap() + d);
    }
    found[0].iter().map(|&(s, e)| (offsets[s], offsets[e])).collect()
}

/// Label index chosen by the three re-assignment rules, on integer scores.
/// Ties go to the lower label index.
pub fn rebalance_oracle(scores: [u32; 6]) -> usize {
    const HAPPINESS: usize = 0;
    const SADNESS: usize = 1;
    let mut first = 0;
    for l in 1..6 {
        if scores[l] > scores[first] {
            first = l;
        }
    }
    let mut second = usize::MAX;
    for l in 0..6 {
        if l != first && (second == usize::MAX || scores[l] > scores[second]) {
            second = l;
        }
    }
    if first != HAPPINESS {
        first
    } else if second == SADNESS {
        HAPPINESS
    } else {
        second
    }
}

/// Every composition of `total` into `parts` non-negative integers.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for head in 0..=total {
        for mut rest in compositions(total - head, parts - 1) {
            rest.insert(0, head);
            out.push(rest);
        }
    }
    out
}

/// Cosine ranking by full sort. `entries` are (id, unit vector, emotion index).
pub fn brute_top_k(
    query: &[f32],
    entries: &[(String, Vec<f32>, usize)],
    k: usize,
    emotion: Option<usize>,
) -> Vec<(String, f64)> {
    let mut norm = 0.0f64;
    for &q in query {
        norm += f64::from(q) * f64::from(q);
    }
    let norm = norm.sqrt();
    let q: Vec<f64> = query.iter().map(|&v| f64::from(v) / norm).collect();
    let mut scored: Vec<(String, f64)> = Vec::new();
    for (id, v, e) in entries {
        if emotion.is_some_and(|want| want != *e) {
            continue;
        }
        let mut s = 0.0f64;
        for d in 0..q.len() {
            s += q[d] * f64::from(v[d]);
        }
        scored.push((id.clone(), s.clamp(-1.0, 1.0)));
    }
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    scored.truncate(k);
    scored
}

/// Bins points into a lattice given its geometry; max-edge points clamp.
pub fn rebin_oracle(
    points: &[(String, f64, f64)],
    origin: (f64, f64),
    cell: f64,
    width: u32,
    height: u32,
) -> BTreeMap<(u32, u32), Vec<String>> {
    let mut cells: BTreeMap<(u32, u32), Vec<String>> = BTreeMap::new();
    for (id, x, y) in points {
        let mut i = ((x - origin.0) / cell).floor() as i64;
        let mut j = ((y - origin.1) / cell).floor() as i64;
        i = i.max(0).min(i64::from(width) - 1);
        j = j.max(0).min(i64::from(height) - 1);
        cells.entry((i as u32, j as u32)).or_default().push(id.clone());
    }
    for ids in cells.values_mut() {
        ids.sort();
    }
    cells
}

/// Population covariance of row vectors.
pub fn covariance(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.len() as f64;
    let d = rows[0].len();
    let mut mean = vec![0.0; d];
    for r in rows {
        for c in 0..d {
            mean[c] += r[c] / n;
        }
    }
    let mut cov = vec![vec![0.0; d]; d];
    for r in rows {
        for a in 0..d {
            for b in 0..d {
                cov[a][b] += (r[a] - mean[a]) * (r[b] - mean[b]) / n;
            }
        }
    }
    cov
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Returns
/// eigenvalues in descending order with their unit eigenvectors.
pub fn jacobi_eigen(matrix: &[Vec<f64>]) -> Vec<(f64, Vec<f64>)> {
    let n = matrix.len();
    let mut a = matrix.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q))).map(|(p, q)| a[p][q] * a[p][q]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n).map(|k| (a[k][k], v.iter().map(|row| row[k]).collect())).collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    pairs
}

/// Flips `v` so its largest-magnitude entry (first on ties) is positive.
pub fn orient(mut v: Vec<f64>) -> Vec<f64> {
    let mut best = 0;
    for k in 1..v.len() {
        if v[k].abs() > v[best].abs() {
            best = k;
        }
    }
    if v[best] < 0.0 {
        for x in &mut v {
            *x = -*x;
        }
    }
    v
}

pub fn median(mut xs: Vec<usize>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort();
    let n = xs.len();
    Some(if n % 2 == 1 { xs[n / 2] as f64 } else { (xs[n / 2 - 1] + xs[n / 2]) as f64 / 2.0 })
}
