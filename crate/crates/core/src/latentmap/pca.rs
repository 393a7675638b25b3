use nalgebra::{DMatrix, SymmetricEigen};

use crate::latentmap::{LatentPoint, MapError};
use crate::types::{ClipId, Embedding};

/// A fitted two-component projection.
#[derive(Debug, Clone, PartialEq)]
pub struct Pca {
    pub mean: Vec<f64>,
    /// Unit principal directions, largest variance first.
    pub components: [Vec<f64>; 2],
    /// Covariance eigenvalues for the two components (population variance).
    pub variances: [f64; 2],
}

impl Pca {
    pub fn project(&self, values: &[f32]) -> (f64, f64) {
        let mut out = [0.0; 2];
        for (c, o) in self.components.iter().zip(&mut out) {
            *o = values.iter().zip(&self.mean).zip(c).map(|((&v, m), w)| (f64::from(v) - m) * w).sum();
        }
        (out[0], out[1])
    }
}

fn check_dims(embeddings: &[Embedding]) -> Result<usize, MapError> {
    let dim = embeddings.first().map(Embedding::dimension).ok_or(MapError::DegenerateInput)?;
    for e in embeddings {
        if e.dimension() != dim {
            return Err(MapError::DimensionMismatch { id: e.id.clone(), expected: dim, got: e.dimension() });
        }
        if e.values.iter().any(|v| !v.is_finite()) {
            return Err(MapError::InvalidPoint { id: e.id.clone(), message: "non-finite component".into() });
        }
    }
    Ok(dim)
}

/// Flip `v` so its largest-magnitude entry (lowest index on ties) is positive.
fn orient(v: &mut [f64]) {
    let mut best = 0;
    for (n, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = n;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

pub fn pca_fit(embeddings: &[Embedding]) -> Result<Pca, MapError> {
    if embeddings.len() < 3 {
        return Err(MapError::DegenerateInput);
    }
    let dim = check_dims(embeddings)?;
    let n = embeddings.len() as f64;
    let mut mean = vec![0.0; dim];
    for e in embeddings {
        for (m, &v) in mean.iter_mut().zip(&e.values) {
            *m += f64::from(v);
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);

    let centered = DMatrix::from_fn(embeddings.len(), dim, |r, c| f64::from(embeddings[r].values[c]) - mean[c]);
    let cov = centered.tr_mul(&centered) / n;
    if cov.trace() <= 0.0 {
        return Err(MapError::DegenerateInput);
    }
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));

    let component = |k: usize| {
        let mut v: Vec<f64> = eig.eigenvectors.column(order[k]).iter().copied().collect();
        orient(&mut v);
        v
    };
    let (first, second) = if dim >= 2 {
        (component(0), component(1))
    } else {
        // A 1-D input has no second direction; y is zero.
        (component(0), vec![0.0])
    };
    let variances = [eig.eigenvalues[order[0]].max(0.0), if dim >= 2 { eig.eigenvalues[order[1]].max(0.0) } else { 0.0 }];
    Ok(Pca { mean, components: [first, second], variances })
}

/// Projects embeddings onto their top two principal directions.
pub fn project_pca(embeddings: &[Embedding]) -> Result<Vec<LatentPoint>, MapError> {
    let pca = pca_fit(embeddings)?;
    embeddings
        .iter()
        .map(|e| {
            let (x, y) = pca.project(&e.values);
            let clip_id =
                ClipId::new(e.id.clone()).map_err(|err| MapError::InvalidPoint { id: e.id.clone(), message: err.to_string() })?;
            Ok(LatentPoint { clip_id, x, y })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emb(rows: &[&[f32]]) -> Vec<Embedding> {
        rows.iter().enumerate().map(|(n, r)| Embedding::new(format!("e{n}"), r.to_vec())).collect()
    }

    #[test]
    fn too_few_or_identical_points_are_degenerate() {
        assert_eq!(project_pca(&emb(&[&[1.0, 2.0], &[3.0, 4.0]])), Err(MapError::DegenerateInput));
        assert_eq!(project_pca(&emb(&[&[1.0, 2.0], &[1.0, 2.0], &[1.0, 2.0]])), Err(MapError::DegenerateInput));
    }

    #[test]
    fn axis_aligned_data() {
        // Spread along x is larger than along y, z is constant.
        let data = emb(&[&[-2.0, 0.0, 1.0], &[2.0, 0.0, 1.0], &[0.0, 0.5, 1.0], &[0.0, -0.5, 1.0], &[0.0, 0.0, 1.0]]);
        let pca = pca_fit(&data).unwrap();
        assert!(pca.variances[0] >= pca.variances[1]);
        assert!((pca.components[0][0] - 1.0).abs() < 1e-9, "{:?}", pca.components);
        let pts = project_pca(&data).unwrap();
        assert!((pts[0].x + 2.0).abs() < 1e-9);
        assert!((pts[1].x - 2.0).abs() < 1e-9);
        assert!((pts[2].y - 0.5).abs() < 1e-9);
    }

    #[test]
    fn sign_convention() {
        let mut v = vec![0.1, -0.9, 0.3];
        orient(&mut v);
        assert_eq!(v, [-0.1, 0.9, -0.3]);
        let mut tie = vec![-0.5, 0.5];
        orient(&mut tie);
        assert_eq!(tie, [0.5, -0.5]);
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let data = emb(&[&[1.0, 2.0], &[3.0], &[1.0, 1.0]]);
        assert!(matches!(project_pca(&data), Err(MapError::DimensionMismatch { .. })));
    }
}
