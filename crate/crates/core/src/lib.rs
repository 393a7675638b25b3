//! Retrieval and latent-space exploration for audiovisual archives.
//!
//! The crate covers the offline pipeline that turns shot lists, emotion
//! scores and captions into a searchable archive:
//!
//! - [`pipeline`]: shot merging, emotion re-balancing, emotional captions
//! - [`encoder`]: a deterministic hashing text encoder, a remote encoder
//!   client, and a synthetic dataset generator
//! - [`retrieval`]: exact cosine top-k search, the filter and full query
//!   strategies, and R@K evaluation
//! - [`latentmap`]: 2D projection and the walkable grid map
//!
//! The guide under `book/` walks through each stage; its Rust snippets are
//! compiled and run as doctests of this crate.

pub mod codec;
pub mod encoder;
pub mod latentmap;
pub mod pipeline;
pub mod retrieval;
mod seed;
pub mod types;

pub use seed::derive_seed;
pub use types::{
    compute_stats, normalize, read_clips, write_clips, CaptionKind, ClipId, ClipRecord, CoreError, DatasetStats,
    Embedding, EmotionLabel, EmotionScores,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/segmentation.md")]
    pub struct Segmentation;
    #[doc = include_str!("../../../book/src/emotions.md")]
    pub struct Emotions;
    #[doc = include_str!("../../../book/src/augmentation.md")]
    pub struct Augmentation;
    #[doc = include_str!("../../../book/src/encoder.md")]
    pub struct Encoder;
    #[doc = include_str!("../../../book/src/retrieval.md")]
    pub struct Retrieval;
    #[doc = include_str!("../../../book/src/latent-map.md")]
    pub struct LatentMap;
    #[doc = include_str!("../../../book/src/formats.md")]
    pub struct Formats;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
    #[doc = include_str!("../../../book/src/http-api.md")]
    pub struct HttpApi;
}
