//! Artifacts shared by the service test targets.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use latentwander::encoder::{generate_synthetic_dataset, EncoderConfig, QueryEncoder, SynthConfig, TextEncoder};
use latentwander::latentmap::{build_grid_map, project_pca, write_map, GridConfig, GridMap, LatentPoint};
use latentwander::retrieval::{build_index, VectorIndex};
use latentwander::{ClipRecord, EmotionLabel};
use latentwander_service::artifacts;
use latentwander_service::AppState;

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

/// A small synthetic archive with every artifact built in memory.
pub struct Archive {
    pub clips: Vec<ClipRecord>,
    pub index: VectorIndex,
    pub points: Vec<LatentPoint>,
    pub map: GridMap,
    pub map_bytes: Vec<u8>,
    pub encoder: EncoderConfig,
}

pub fn archive(clip_count: usize, sigma: f64) -> Archive {
    let encoder = EncoderConfig { dimension: 64, ..EncoderConfig::default() };
    let cfg = SynthConfig { clip_count, captions_per_clip: 3, noise_sigma: sigma, ..SynthConfig::default() };
    let data = generate_synthetic_dataset(&cfg, &encoder).unwrap();
    let labels = artifacts::emotion_labels(&data.clips);
    let index = build_index(encoder.dimension, &data.embeddings, &labels).unwrap();
    let points = project_pca(&data.embeddings).unwrap();
    let map = build_grid_map(&points, &GridConfig::default()).unwrap();
    let mut map_bytes = Vec::new();
    write_map(&map, &mut map_bytes).unwrap();
    Archive { clips: data.clips, index, points, map, map_bytes, encoder }
}

impl Archive {
    pub fn state(&self) -> AppState {
        self.state_with(Arc::new(TextEncoder::from_config(&self.encoder).unwrap()), true)
    }

    pub fn state_with(&self, encoder: Arc<dyn QueryEncoder>, with_map: bool) -> AppState {
        let map = with_map.then(|| (self.map.clone(), self.map_bytes.clone()));
        let points: HashMap<_, _> = if with_map { artifacts::point_lookup(&self.points) } else { HashMap::new() };
        AppState::new(self.clips.clone(), Some(self.index.clone()), map, points, encoder, 10).unwrap()
    }

    pub fn emotion_of(&self, id: &str) -> Option<EmotionLabel> {
        self.clips.iter().find(|c| c.id.as_str() == id).and_then(|c| c.emotion)
    }
}
