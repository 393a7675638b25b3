#[path = "support/oracles.rs"]
mod oracles;

use latentwander::latentmap::{
    build_grid_map, pca_fit, project_pca, read_map, write_map, CellSizing, GridConfig, LatentPoint,
};
use latentwander::{ClipId, Embedding};
use oracles::{covariance, jacobi_eigen, orient, rebin_oracle};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn points(rng: &mut ChaCha8Rng, n: usize) -> Vec<LatentPoint> {
    let spread = rng.random_range(0.1..100.0);
    (0..n)
        .map(|i| LatentPoint {
            clip_id: ClipId::new(format!("p{i:05}")).unwrap(),
            x: rng.random_range(-spread..spread),
            y: rng.random_range(-spread..spread) * 0.3,
        })
        .collect()
}

#[test]
fn binning_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..30 {
        let n = rng.random_range(1..=2000);
        let pts = points(&mut rng, n);
        let cfg = if rng.random_bool(0.5) {
            GridConfig { pad_fraction: 0.05, sizing: CellSizing::Count(rng.random_range(1..=80)) }
        } else {
            GridConfig { pad_fraction: rng.random_range(0.0..0.2), sizing: CellSizing::Size(rng.random_range(0.05..10.0)) }
        };
        let map = build_grid_map(&pts, &cfg).unwrap();

        // Geometry from the definition.
        let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in &pts {
            lo_x = lo_x.min(p.x);
            hi_x = hi_x.max(p.x);
            lo_y = lo_y.min(p.y);
            hi_y = hi_y.max(p.y);
        }
        let ox = lo_x - cfg.pad_fraction * (hi_x - lo_x);
        let oy = lo_y - cfg.pad_fraction * (hi_y - lo_y);
        assert!((map.origin_x - ox).abs() < 1e-9 && (map.origin_y - oy).abs() < 1e-9);
        let span_x = (hi_x - lo_x) * (1.0 + 2.0 * cfg.pad_fraction);
        let span_y = (hi_y - lo_y) * (1.0 + 2.0 * cfg.pad_fraction);
        assert!(f64::from(map.width) * map.cell_size >= span_x - 1e-6);
        assert!(f64::from(map.width - 1) * map.cell_size < span_x);
        assert!(f64::from(map.height) * map.cell_size >= span_y - 1e-6);

        let flat: Vec<(String, f64, f64)> = pts.iter().map(|p| (p.clip_id.to_string(), p.x, p.y)).collect();
        let want = rebin_oracle(&flat, (map.origin_x, map.origin_y), map.cell_size, map.width, map.height);
        let got: Vec<((u32, u32), Vec<String>)> =
            map.cells.iter().map(|c| ((c.i, c.j), c.clips.iter().map(ClipId::to_string).collect())).collect();
        assert_eq!(got, want.into_iter().collect::<Vec<_>>());
        assert_eq!(map.point_count(), n);
    }
}

#[test]
fn coarsening_keeps_cells_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let pts = points(&mut rng, 500);
        let fine = rng.random_range(0.1..2.0);
        for factor in [1.0, 2.0, 3.5, 10.0] {
            let map = build_grid_map(&pts, &GridConfig { pad_fraction: 0.05, sizing: CellSizing::Size(fine * factor) }).unwrap();
            for p in &pts {
                let (i, j) = map.cell_of(p.x, p.y);
                assert!(map.cell(i, j).is_some_and(|c| c.clips.contains(&p.clip_id)));
            }
        }
    }
}

/// Orthonormal basis of a random plane in `dim` dimensions (Gram-Schmidt).
fn random_plane(rng: &mut ChaCha8Rng, dim: usize) -> [Vec<f64>; 2] {
    let u: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let u: Vec<f64> = u.iter().map(|x| x / nu).collect();
    let w: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let d: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
    let v: Vec<f64> = w.iter().zip(&u).map(|(b, a)| b - d * a).collect();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    [u, v.iter().map(|x| x / nv).collect()]
}

#[test]
fn planted_plane_distances_survive() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let plane = random_plane(&mut rng, 16);
    let planted: Vec<(f64, f64)> = (0..60).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-0.5..0.5))).collect();
    let embeddings: Vec<Embedding> = planted
        .iter()
        .enumerate()
        .map(|(n, (a, b))| {
            Embedding::new(format!("e{n}"), (0..16).map(|d| (0.25 + a * plane[0][d] + b * plane[1][d]) as f32).collect())
        })
        .collect();
    let pts = project_pca(&embeddings).unwrap();
    let mut worst = 0.0f64;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let got = (pts[i].x - pts[j].x).hypot(pts[i].y - pts[j].y);
            let want = (planted[i].0 - planted[j].0).hypot(planted[i].1 - planted[j].1);
            worst = worst.max((got - want).abs());
        }
    }
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn components_match_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..25 {
        let dim = rng.random_range(2..=12);
        let n = rng.random_range(3..=40);
        let scales: Vec<f64> = (0..dim).map(|_| rng.random_range(0.1..3.0)).collect();
        let rows: Vec<Vec<f32>> =
            (0..n).map(|_| scales.iter().map(|s| (rng.random_range(-1.0..1.0) * s) as f32).collect()).collect();
        let embeddings: Vec<Embedding> = rows.iter().enumerate().map(|(k, r)| Embedding::new(format!("r{k}"), r.clone())).collect();
        let pca = pca_fit(&embeddings).unwrap();
        let data: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&v| f64::from(v)).collect()).collect();
        let eig = jacobi_eigen(&covariance(&data));
        assert!(pca.variances[0] >= pca.variances[1]);
        for c in 0..2 {
            assert!((pca.variances[c] - eig[c].0).abs() < 1e-9 * eig[0].0.max(1.0), "{:?} vs {}", pca.variances, eig[c].0);
        }
        // Directions are comparable only when the eigenvalues are separated.
        let gap = |a: f64, b: f64| (a - b).abs() > 1e-3 * eig[0].0;
        if gap(eig[0].0, eig[1].0) && (dim < 3 || gap(eig[1].0, eig[2].0)) {
            for c in 0..2 {
                let want = orient(eig[c].1.clone());
                let err = pca.components[c].iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(err < 1e-6, "component {c}: {err}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pca_ignores_input_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let embeddings: Vec<Embedding> = (0..20)
            .map(|n| Embedding::new(format!("e{n:02}"), vec![rng.random_range(-3.0..3.0), rng.random_range(-1.0..1.0), rng.random_range(-0.2..0.2)]))
            .collect();
        let mut reversed = embeddings.clone();
        reversed.reverse();
        let mut a = project_pca(&embeddings).unwrap();
        let mut b = project_pca(&reversed).unwrap();
        a.sort_by(|p, q| p.clip_id.cmp(&q.clip_id));
        b.sort_by(|p, q| p.clip_id.cmp(&q.clip_id));
        for (p, q) in a.iter().zip(&b) {
            prop_assert!((p.x - q.x).abs() < 1e-6 && (p.y - q.y).abs() < 1e-6, "{:?} {:?}", p, q);
        }
    }

    #[test]
    fn map_document_roundtrips(seed in any::<u64>(), n in 1usize..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = build_grid_map(&points(&mut rng, n), &GridConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_map(&map, &mut buf).unwrap();
        prop_assert_eq!(read_map(&buf[..]).unwrap(), map);
    }
}
