use std::sync::OnceLock;

use crate::encoder::{EncoderConfig, EncoderError, EncoderMode, QueryEncoder};
use crate::pipeline::SuffixLexicon;
use crate::seed::mix64;
use crate::types::Embedding;

const SIGN_SALT: u64 = 0x5167_6e5f_7361_6c74;

/// Lowercases and splits on anything that is not alphanumeric.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Signed feature-hashing encoder.
#[derive(Debug, Clone)]
pub struct TextEncoder {
    dimension: usize,
    hash_seed: u64,
    /// Tokenised lexicon suffixes, longest first.
    suffix_tokens: Vec<Vec<String>>,
}

impl TextEncoder {
    pub fn new(dimension: usize, hash_seed: u64, lexicon: &SuffixLexicon) -> Result<Self, EncoderError> {
        EncoderConfig { dimension, mode: EncoderMode::Naive, hash_seed }.validate()?;
        let mut suffix_tokens: Vec<Vec<String>> = lexicon.iter().map(|(_, s)| tokenize(s)).collect();
        suffix_tokens.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        suffix_tokens.dedup();
        Ok(TextEncoder { dimension, hash_seed, suffix_tokens })
    }

    pub fn from_config(cfg: &EncoderConfig) -> Result<Self, EncoderError> {
        TextEncoder::new(cfg.dimension, cfg.hash_seed, &SuffixLexicon::default())
    }

    fn slot(&self, token: &str) -> (usize, f64) {
        let h = mix64(fnv1a(token.as_bytes()) ^ mix64(self.hash_seed));
        let index = (h % self.dimension as u64) as usize;
        let sign = if mix64(h ^ SIGN_SALT) & 1 == 0 { 1.0 } else { -1.0 };
        (index, sign)
    }

    /// Tokens that contribute to the vector in `mode`.
    pub fn features(&self, text: &str, mode: EncoderMode) -> Vec<String> {
        let mut tokens = tokenize(text);
        if mode == EncoderMode::Naive {
            if let Some(suffix) = self.suffix_tokens.iter().find(|s| tokens.ends_with(s)) {
                tokens.truncate(tokens.len() - suffix.len());
            }
        }
        tokens
    }

    /// Unit vector of `text`; the all-zero accumulation maps to `e0`.
    pub fn encode_vector(&self, text: &str, mode: EncoderMode) -> Vec<f32> {
        let mut acc = vec![0.0f64; self.dimension];
        for token in self.features(text, mode) {
            let (index, sign) = self.slot(&token);
            acc[index] += sign;
        }
        let norm = acc.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            let mut e0 = vec![0.0f32; self.dimension];
            e0[0] = 1.0;
            return e0;
        }
        acc.iter().map(|v| (v / norm) as f32).collect()
    }
}

impl QueryEncoder for TextEncoder {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn encode(&self, text: &str, mode: EncoderMode) -> Result<Vec<f32>, EncoderError> {
        Ok(self.encode_vector(text, mode))
    }
}

/// Encodes with the default lexicon. The embedding id is the text itself.
pub fn encode_text(text: &str, cfg: &EncoderConfig) -> Result<Embedding, EncoderError> {
    static DEFAULT_LEXICON: OnceLock<SuffixLexicon> = OnceLock::new();
    let lexicon = DEFAULT_LEXICON.get_or_init(SuffixLexicon::default);
    let encoder = TextEncoder::new(cfg.dimension, cfg.hash_seed, lexicon)?;
    Ok(Embedding::new(text, encoder.encode_vector(text, cfg.mode)))
}
