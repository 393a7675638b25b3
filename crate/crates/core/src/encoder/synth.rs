//! Synthetic co-embedded datasets for desk-scale retrieval experiments.
//!
//! Each clip gets random captions, an emotion drawn from a distribution, and
//! emotional captions built by suffix augmentation. Its embedding is the
//! emotional-mode encoding of its first emotional caption plus isotropic
//! Gaussian noise of scale `noise_sigma`, which stands in for model error.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::encoder::{EncoderConfig, EncoderError, EncoderMode, TextEncoder};
use crate::pipeline::{emotional_captions, SuffixLexicon};
use crate::seed::derive_seed;
use crate::types::{ClipId, ClipRecord, Embedding, EmotionLabel};

const VOCABULARY: &str = "man woman child boy girl crowd dog horse car train boat plane bicycle \
    street road bridge river lake mountain forest field garden city village house kitchen room \
    table chair window door camera microphone stage studio office school church market farm \
    snow rain sun sky night evening morning winter summer flag map book letter phone television \
    guitar piano song dance ball game team player referee goal match race track \
    talks speaks walks runs sits stands holds opens closes reads writes plays sings points \
    looks watches waves drives rides climbs carries cooks eats drinks smiles listens \
    red blue green white black old young small large long tall empty busy quiet \
    the a an of on at to near behind under over across into through from \
    reporter politician farmer teacher doctor soldier worker student musician skier";

const MAX_CAPTION_ATTEMPTS: usize = 10_000;

pub fn default_vocabulary() -> Vec<String> {
    VOCABULARY.split_whitespace().map(String::from).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub clip_count: usize,
    pub captions_per_clip: usize,
    pub noise_sigma: f64,
    /// Probability of each emotion, indexed by [`EmotionLabel::index`].
    pub emotion_distribution: [f64; 6],
    pub rng_seed: u64,
    pub vocabulary: Vec<String>,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            clip_count: 1000,
            captions_per_clip: 13,
            noise_sigma: 0.2,
            emotion_distribution: [1.0 / 6.0; 6],
            rng_seed: 7,
            vocabulary: default_vocabulary(),
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), EncoderError> {
        let bad = |m: String| Err(EncoderError::InvalidConfig(m));
        if self.vocabulary.iter().all(|w| w.trim().is_empty()) {
            return bad("vocabulary is empty".into());
        }
        if self.clip_count == 0 || self.captions_per_clip == 0 {
            return bad("clip_count and captions_per_clip must be positive".into());
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!("noise_sigma must be >= 0, got {}", self.noise_sigma));
        }
        let sum: f64 = self.emotion_distribution.iter().sum();
        if self.emotion_distribution.iter().any(|p| !(0.0..=1.0).contains(p)) || (sum - 1.0).abs() > 1e-6 {
            return bad(format!("emotion distribution must be probabilities summing to 1, got sum {sum}"));
        }
        Ok(())
    }
}

/// A query caption and the single clip it should retrieve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub query: String,
    pub clip_id: ClipId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticDataset {
    pub clips: Vec<ClipRecord>,
    pub embeddings: Vec<Embedding>,
    pub ground_truth: Vec<GroundTruth>,
}

pub fn generate_synthetic_dataset(cfg: &SynthConfig, enc: &EncoderConfig) -> Result<SyntheticDataset, EncoderError> {
    cfg.validate()?;
    enc.validate()?;
    let lexicon = SuffixLexicon::default();
    let encoder = TextEncoder::new(enc.dimension, enc.hash_seed, &lexicon)?;
    let vocab: Vec<&str> = cfg.vocabulary.iter().map(String::as_str).filter(|w| !w.trim().is_empty()).collect();
    let emotions = WeightedIndex::new(cfg.emotion_distribution).map_err(|e| EncoderError::InvalidConfig(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);

    let mut clips = Vec::with_capacity(cfg.clip_count);
    let mut embeddings = Vec::with_capacity(cfg.clip_count);
    let mut ground_truth = Vec::with_capacity(cfg.clip_count);
    let mut seen_queries = HashSet::new();

    for n in 0..cfg.clip_count {
        let video_id = format!("SYN{n:06}");
        let id = ClipId::new(format!("{video_id}#1")).expect("non-empty");
        let duration = (rng.random_range(12.0..40.0f64) * 100.0).round() / 100.0;
        let emotion = EmotionLabel::ALL[emotions.sample(&mut rng)];

        let mut naive = Vec::with_capacity(cfg.captions_per_clip);
        let mut rejected = 0usize;
        while naive.len() < cfg.captions_per_clip {
            let words = rng.random_range(5..=12usize);
            let caption = (0..words).map(|_| vocab[rng.random_range(0..vocab.len())]).collect::<Vec<_>>().join(" ");
            // The first caption is the retrieval target and must be unique across clips.
            if naive.is_empty() && !seen_queries.insert(caption.clone()) {
                rejected += 1;
                if rejected > MAX_CAPTION_ATTEMPTS {
                    return Err(EncoderError::InvalidConfig("vocabulary too small for distinct captions".into()));
                }
                continue;
            }
            naive.push(caption);
        }
        let emotional = emotional_captions(&naive, emotion, &lexicon, derive_seed(cfg.rng_seed, n as u64), None)?;

        let signal = encoder.encode_vector(&emotional[0], EncoderMode::Emotional);
        // Noise is always drawn so that captions and noise directions do not
        // depend on sigma for a fixed seed.
        let noise: Vec<f64> = (0..enc.dimension).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let values = if cfg.noise_sigma == 0.0 {
            signal
        } else {
            let mixed: Vec<f64> = signal.iter().zip(&noise).map(|(&s, &g)| f64::from(s) + cfg.noise_sigma * g).collect();
            let norm = mixed.iter().map(|v| v * v).sum::<f64>().sqrt();
            mixed.iter().map(|v| (v / norm) as f32).collect()
        };

        ground_truth.push(GroundTruth { query: emotional[0].clone(), clip_id: id.clone() });
        embeddings.push(Embedding::new(id.as_str(), values));
        clips.push(ClipRecord {
            id,
            video_id,
            start_s: 0.0,
            end_s: duration,
            naive_captions: naive,
            emotional_captions: emotional,
            emotion: Some(emotion),
            media_url: None,
        });
    }
    Ok(SyntheticDataset { clips, embeddings, ground_truth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::strip_emotion_suffix;
    use crate::types::{compute_stats, CaptionKind};

    fn small(sigma: f64) -> SynthConfig {
        SynthConfig { clip_count: 50, captions_per_clip: 3, noise_sigma: sigma, ..SynthConfig::default() }
    }

    #[test]
    fn zero_noise_embedding_is_caption_embedding() {
        let enc = EncoderConfig { dimension: 64, ..EncoderConfig::default() };
        let ds = generate_synthetic_dataset(&small(0.0), &enc).unwrap();
        let encoder = TextEncoder::from_config(&enc).unwrap();
        for (clip, emb) in ds.clips.iter().zip(&ds.embeddings) {
            assert_eq!(emb.values, encoder.encode_vector(&clip.emotional_captions[0], EncoderMode::Emotional));
        }
    }

    #[test]
    fn same_seed_same_dataset() {
        let enc = EncoderConfig::default();
        let a = generate_synthetic_dataset(&small(0.3), &enc).unwrap();
        let b = generate_synthetic_dataset(&small(0.3), &enc).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic_dataset(&SynthConfig { rng_seed: 8, ..small(0.3) }, &enc).unwrap();
        assert_ne!(a.clips, c.clips);
    }

    #[test]
    fn captions_do_not_depend_on_sigma() {
        let enc = EncoderConfig::default();
        let a = generate_synthetic_dataset(&small(0.2), &enc).unwrap();
        let b = generate_synthetic_dataset(&small(0.8), &enc).unwrap();
        assert_eq!(a.clips, b.clips);
        assert_ne!(a.embeddings, b.embeddings);
        assert!(b.embeddings.iter().all(Embedding::is_normalized));
    }

    #[test]
    fn thirteen_captions_per_video() {
        let cfg = SynthConfig { clip_count: 1000, captions_per_clip: 13, noise_sigma: 0.0, ..SynthConfig::default() };
        let ds = generate_synthetic_dataset(&cfg, &EncoderConfig { dimension: 32, ..EncoderConfig::default() }).unwrap();
        let stats = compute_stats(&ds.clips, CaptionKind::Naive).unwrap();
        assert_eq!(stats.captions_per_video, 13.0);
        assert_eq!(stats.clip_count, 1000);
    }

    #[test]
    fn emotional_captions_carry_the_clip_emotion() {
        let ds = generate_synthetic_dataset(&small(0.0), &EncoderConfig::default()).unwrap();
        let lex = SuffixLexicon::default();
        for clip in &ds.clips {
            for (naive, emotional) in clip.naive_captions.iter().zip(&clip.emotional_captions) {
                let split = strip_emotion_suffix(emotional, &lex).unwrap();
                assert_eq!(&split.naive_query, naive);
                assert_eq!(Some(split.emotion), clip.emotion);
            }
        }
        let queries: HashSet<_> = ds.ground_truth.iter().map(|g| &g.query).collect();
        assert_eq!(queries.len(), ds.ground_truth.len());
    }

    #[test]
    fn config_errors() {
        let enc = EncoderConfig::default();
        let empty = SynthConfig { vocabulary: vec![], ..small(0.0) };
        assert!(matches!(generate_synthetic_dataset(&empty, &enc), Err(EncoderError::InvalidConfig(_))));
        let skew = SynthConfig { emotion_distribution: [0.5; 6], ..small(0.0) };
        assert!(matches!(generate_synthetic_dataset(&skew, &enc), Err(EncoderError::InvalidConfig(_))));
        let tiny = SynthConfig { vocabulary: vec!["word".into()], ..small(0.0) };
        assert!(matches!(generate_synthetic_dataset(&tiny, &enc), Err(EncoderError::InvalidConfig(_))));
        let neg = SynthConfig { noise_sigma: -1.0, ..small(0.0) };
        assert!(matches!(generate_synthetic_dataset(&neg, &enc), Err(EncoderError::InvalidConfig(_))));
    }
}
