//! On-disk artifacts and the default layout of an archive directory.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use latentwander::encoder::{read_embeddings, write_embeddings_binary, EncoderConfig, GroundTruth};
use latentwander::latentmap::{export_points, import_points, read_map, write_map, GridMap, LatentPoint};
use latentwander::retrieval::{load_index, save_index, VectorIndex};
use latentwander::{read_clips, write_clips, ClipId, ClipRecord, Embedding, EmotionLabel};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub const CLIPS: &str = "clips.jsonl";
pub const EMBEDDINGS: &str = "embeddings.lwem";
pub const GROUND_TRUTH: &str = "ground_truth.jsonl";
pub const ENCODER: &str = "encoder.json";
pub const INDEX: &str = "index.lwix";
pub const POINTS: &str = "points.csv";
pub const MAP: &str = "map.json";

#[derive(Debug, Clone)]
pub struct Layout {
    pub dir: PathBuf,
}

impl Layout {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Layout { dir: dir.into() }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// `explicit` if given, else the default file name inside the directory.
    pub fn or_default(&self, explicit: Option<&Path>, name: &str) -> PathBuf {
        explicit.map_or_else(|| self.path(name), Path::to_path_buf)
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("cannot open {}", path.display()))?))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).with_context(|| format!("cannot create {}", parent.display()))?;
    }
    Ok(BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?))
}

pub fn load_clips(path: &Path) -> Result<Vec<ClipRecord>> {
    read_clips(open(path)?).with_context(|| format!("reading {}", path.display()))
}

pub fn save_clips(path: &Path, clips: &[ClipRecord]) -> Result<()> {
    write_clips(create(path)?, clips).with_context(|| format!("writing {}", path.display()))
}

pub fn load_embeddings(path: &Path) -> Result<Vec<Embedding>> {
    read_embeddings(open(path)?).with_context(|| format!("reading {}", path.display()))
}

pub fn save_embeddings(path: &Path, embeddings: &[Embedding]) -> Result<()> {
    write_embeddings_binary(create(path)?, embeddings).with_context(|| format!("writing {}", path.display()))
}

pub fn load_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    use std::io::BufRead;
    let mut out = Vec::new();
    for (n, line) in open(path)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).with_context(|| format!("{} line {}", path.display(), n + 1))?);
    }
    Ok(out)
}

pub fn save_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    use std::io::Write;
    let mut w = create(path)?;
    for row in rows {
        serde_json::to_writer(&mut w, row)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_ground_truth(path: &Path) -> Result<Vec<GroundTruth>> {
    load_jsonl(path)
}

pub fn load_encoder_config(path: &Path) -> Result<EncoderConfig> {
    let cfg: EncoderConfig =
        serde_json::from_reader(open(path)?).with_context(|| format!("reading {}", path.display()))?;
    cfg.validate().with_context(|| format!("invalid encoder config {}", path.display()))?;
    Ok(cfg)
}

pub fn save_encoder_config(path: &Path, cfg: &EncoderConfig) -> Result<()> {
    use std::io::Write;
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, cfg)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn load_vector_index(path: &Path) -> Result<VectorIndex> {
    load_index(open(path)?).with_context(|| format!("reading {}", path.display()))
}

pub fn save_vector_index(path: &Path, index: &VectorIndex) -> Result<()> {
    save_index(index, create(path)?).with_context(|| format!("writing {}", path.display()))
}

pub fn load_points(path: &Path) -> Result<Vec<LatentPoint>> {
    import_points(open(path)?).with_context(|| format!("reading {}", path.display()))
}

pub fn save_points(path: &Path, points: &[LatentPoint]) -> Result<()> {
    export_points(points, create(path)?).with_context(|| format!("writing {}", path.display()))
}

pub fn load_map(path: &Path) -> Result<GridMap> {
    read_map(open(path)?).with_context(|| format!("reading {}", path.display()))
}

pub fn save_map(path: &Path, map: &GridMap) -> Result<()> {
    write_map(map, create(path)?).with_context(|| format!("writing {}", path.display()))
}

pub fn emotion_labels(clips: &[ClipRecord]) -> BTreeMap<ClipId, EmotionLabel> {
    clips.iter().filter_map(|c| c.emotion.map(|e| (c.id.clone(), e))).collect()
}

pub fn point_lookup(points: &[LatentPoint]) -> HashMap<ClipId, (f64, f64)> {
    points.iter().map(|p| (p.clip_id.clone(), (p.x, p.y))).collect()
}
