//! The `lw` command line. Each verb is one offline stage, except `serve`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. Failures print a
//! human-readable line and then a `{"code", "message"}` JSON line on stderr.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use latentwander::codec::FormatError;
use latentwander::encoder::{
    generate_synthetic_dataset, EncoderConfig, EncoderError, EncoderMode, QueryEncoder, RemoteEncoder, SynthConfig,
    TextEncoder,
};
use latentwander::latentmap::{
    build_grid_map, check_known_ids, project_pca, read_map, CellSizing, GridConfig, MapError, DEFAULT_CELL_COUNT,
    DEFAULT_PAD_FRACTION,
};
use latentwander::pipeline::{
    clips_from_intervals, emotional_captions, merge_short_shots, read_shot_lists, rebalance_batch, CommandParaphraser,
    Paraphraser, PipelineError, SegmentationConfig, SuffixLexicon,
};
use latentwander::retrieval::{build_index, evaluate, run_query, Query, RetrievalError, Strategy, VectorIndex, DEFAULT_KS};
use latentwander::{derive_seed, normalize, ClipId, CoreError, Embedding, EmotionLabel, EmotionScores};
use serde::Deserialize;

use crate::api::{router, AppState};
use crate::artifacts::{self as art, Layout};

#[derive(Debug)]
pub struct CliError {
    usage: bool,
    code: &'static str,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { usage: true, code: "usage", message: message.into() }
    }

    pub fn exit_code(&self) -> u8 {
        if self.usage {
            1
        } else {
            2
        }
    }

    pub fn code(&self) -> &'static str {
        self.code
    }

    pub fn message(&self) -> &str {
        &self.message
    }

    pub fn report(&self) {
        let mut err = std::io::stderr().lock();
        let _ = writeln!(err, "error: {}", self.message);
        let _ = writeln!(err, "{}", serde_json::json!({ "code": self.code, "message": self.message }));
    }
}

fn data_code(err: &anyhow::Error) -> &'static str {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<std::io::Error>() {
            return if e.kind() == std::io::ErrorKind::NotFound { "missing_file" } else { "io" };
        }
        if cause.is::<FormatError>() {
            return "bad_format";
        }
        if cause.is::<CoreError>() {
            return "bad_dataset";
        }
        if cause.is::<PipelineError>() {
            return "pipeline";
        }
        if let Some(e) = cause.downcast_ref::<EncoderError>() {
            return match e {
                EncoderError::EncoderUnavailable(_) => "encoder_unavailable",
                _ => "encoder",
            };
        }
        if cause.is::<RetrievalError>() {
            return "retrieval";
        }
        if cause.is::<MapError>() {
            return "map";
        }
    }
    "data"
}

impl From<anyhow::Error> for CliError {
    fn from(err: anyhow::Error) -> Self {
        CliError { usage: false, code: data_code(&err), message: format!("{err:#}") }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lw", version, about = "Build, evaluate and serve a latentwander archive")]
struct Cli {
    /// Archive directory; artifact paths default to files inside it.
    #[arg(long, global = true, env = "LW_DIR", default_value = ".")]
    dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic dataset with known query/clip pairs.
    Synth(SynthArgs),
    /// Validate external clips, shots, emotion scores and embeddings.
    Ingest(IngestArgs),
    /// Build the vector index from embeddings and clip emotions.
    BuildIndex(BuildIndexArgs),
    /// Project embeddings to 2D, or import external coordinates.
    Project(ProjectArgs),
    /// Bin 2D points into the grid map.
    BuildMap(BuildMapArgs),
    /// R@K evaluation over the ground-truth queries.
    Eval(EvalArgs),
    /// Run one query and print the ranked clips.
    Query(QueryArgs),
    /// Serve the HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 1000)]
    clips: usize,
    #[arg(long, default_value_t = 13)]
    captions: usize,
    #[arg(long, default_value_t = 0.2)]
    sigma: f64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 256)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    hash_seed: u64,
    /// Six comma-separated weights in label order happiness,sadness,anger,disgust,surprise,fear.
    #[arg(long, value_delimiter = ',', num_args = 6)]
    emotion_weights: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct IngestArgs {
    /// Clip records, one JSON object per line.
    #[arg(long, required_unless_present = "shots", conflicts_with = "shots")]
    clips: Option<PathBuf>,
    /// Shot boundary lists to segment into clips.
    #[arg(long)]
    shots: Option<PathBuf>,
    #[arg(long, default_value_t = 12.0)]
    min_duration: f64,
    /// Emotion scores per clip: {"clip_id": .., "scores": {"happiness": .., ..}} per line.
    #[arg(long)]
    scores: Option<PathBuf>,
    /// Clip embeddings (LWEM binary or `id<TAB>values` text).
    #[arg(long)]
    embeddings: Option<PathBuf>,
    /// Fill missing emotional captions from naive captions and the clip emotion.
    #[arg(long)]
    augment: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Paraphrase hook: reads a caption on stdin, prints variants one per line.
    #[arg(long)]
    paraphrase_cmd: Option<String>,
}

#[derive(Debug, Args)]
struct BuildIndexArgs {
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Pca,
    Imported,
}

#[derive(Debug, Args)]
struct ProjectArgs {
    #[arg(long, value_enum, default_value_t = Method::Pca)]
    method: Method,
    /// Points file to import with `--method imported`.
    #[arg(long, required_if_eq("method", "imported"))]
    input: Option<PathBuf>,
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BuildMapArgs {
    #[arg(long)]
    points: Option<PathBuf>,
    #[arg(long, conflicts_with = "cell_count")]
    cell_size: Option<f64>,
    /// Cells along the longer edge of the padded bounding box.
    #[arg(long)]
    cell_count: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_PAD_FRACTION)]
    pad: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalStrategy {
    Filter,
    Full,
    Both,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, value_enum, default_value_t = EvalStrategy::Both)]
    strategy: EvalStrategy,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_KS)]
    k: Vec<usize>,
    #[arg(long)]
    ground_truth: Option<PathBuf>,
    #[arg(long)]
    index: Option<PathBuf>,
    #[arg(long)]
    encoder_config: Option<PathBuf>,
    /// Print the reports as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct QueryArgs {
    text: String,
    #[arg(long, value_parser = parse_strategy, default_value = "filter")]
    strategy: Strategy,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long)]
    index: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long)]
    encoder_config: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ServeArgs {
    /// Address to bind; port 0 picks a free port.
    #[arg(long, env = "LW_LISTEN", default_value = "127.0.0.1:8080")]
    listen: String,
    #[arg(long, env = "LW_DATASET")]
    dataset: Option<PathBuf>,
    #[arg(long, env = "LW_INDEX")]
    index: Option<PathBuf>,
    #[arg(long, env = "LW_MAP")]
    map: Option<PathBuf>,
    #[arg(long, env = "LW_POINTS")]
    points: Option<PathBuf>,
    #[arg(long, env = "LW_ENCODER_CONFIG")]
    encoder_config: Option<PathBuf>,
    /// Remote query encoder endpoint; replaces the built-in encoder.
    #[arg(long, env = "LW_ENCODER_URL")]
    encoder_url: Option<String>,
    #[arg(long, env = "LW_DEFAULT_K", default_value_t = 10)]
    default_k: usize,
    /// Allowed CORS origins, comma-separated. Empty disables CORS headers.
    #[arg(long, env = "LW_CORS", value_delimiter = ',')]
    cors_origin: Vec<String>,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

/// Parses `args` (program name first) and runs the selected verb.
pub fn run<I, T>(args: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::usage(e.render().to_string().trim_end())),
    };
    let layout = Layout::new(&cli.dir);
    match cli.command {
        Command::Synth(a) => synth(&layout, a),
        Command::Ingest(a) => ingest(&layout, a),
        Command::BuildIndex(a) => build_index_cmd(&layout, a),
        Command::Project(a) => project(&layout, a),
        Command::BuildMap(a) => build_map(&layout, a),
        Command::Eval(a) => eval(&layout, a),
        Command::Query(a) => query(&layout, a),
        Command::Serve(a) => serve(&layout, a),
    }
}

fn synth(layout: &Layout, a: SynthArgs) -> Result<(), CliError> {
    let mut cfg = SynthConfig {
        clip_count: a.clips,
        captions_per_clip: a.captions,
        noise_sigma: a.sigma,
        rng_seed: a.seed,
        ..SynthConfig::default()
    };
    if let Some(w) = a.emotion_weights {
        let total: f64 = w.iter().sum();
        if !(total > 0.0) || w.iter().any(|x| !(*x >= 0.0)) {
            return Err(CliError::usage("--emotion-weights must be non-negative with a positive sum"));
        }
        for (slot, x) in cfg.emotion_distribution.iter_mut().zip(&w) {
            *slot = x / total;
        }
    }
    let enc = EncoderConfig { dimension: a.dim, mode: EncoderMode::Emotional, hash_seed: a.hash_seed };
    cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
    enc.validate().map_err(|e| CliError::usage(e.to_string()))?;
    let data = generate_synthetic_dataset(&cfg, &enc).map_err(anyhow::Error::from)?;
    art::save_clips(&layout.path(art::CLIPS), &data.clips)?;
    art::save_embeddings(&layout.path(art::EMBEDDINGS), &data.embeddings)?;
    art::save_jsonl(&layout.path(art::GROUND_TRUTH), &data.ground_truth)?;
    art::save_encoder_config(&layout.path(art::ENCODER), &enc)?;
    println!(
        "synth: {} clips, D={}, sigma={}, seed={} -> {}",
        data.clips.len(),
        enc.dimension,
        cfg.noise_sigma,
        cfg.rng_seed,
        layout.dir.display()
    );
    Ok(())
}

#[derive(Debug, Deserialize)]
struct ScoreRow {
    clip_id: ClipId,
    scores: BTreeMap<EmotionLabel, f64>,
}

fn ingest(layout: &Layout, a: IngestArgs) -> Result<(), CliError> {
    let mut clips = match (&a.clips, &a.shots) {
        (Some(path), _) => art::load_clips(path)?,
        (None, Some(path)) => {
            let seg = SegmentationConfig::new(a.min_duration).map_err(|e| CliError::usage(e.to_string()))?;
            let file = std::fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
            let lists = read_shot_lists(std::io::BufReader::new(file))
                .with_context(|| format!("reading {}", path.display()))?;
            let mut seen = HashSet::new();
            let mut clips = Vec::new();
            for list in &lists {
                if !seen.insert(list.video_id.clone()) {
                    return Err(anyhow!("video {} appears twice in {}", list.video_id, path.display()).into());
                }
                clips.extend(clips_from_intervals(&list.video_id, &merge_short_shots(list, &seg)));
            }
            clips
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let known: HashSet<ClipId> = clips.iter().map(|c| c.id.clone()).collect();

    if let Some(path) = &a.scores {
        let rows: Vec<ScoreRow> = art::load_jsonl(path)?;
        let mut scored = Vec::with_capacity(rows.len());
        for row in rows {
            if !known.contains(&row.clip_id) {
                return Err(anyhow!("scores for unknown clip {}", row.clip_id).into());
            }
            let pairs: Vec<_> = row.scores.into_iter().collect();
            let scores = EmotionScores::from_pairs(&pairs).with_context(|| format!("scores of {}", row.clip_id))?;
            scored.push((row.clip_id, scores));
        }
        let report = rebalance_batch(&scored).map_err(anyhow::Error::from)?;
        for clip in &mut clips {
            if let Some(label) = report.labels.get(&clip.id) {
                clip.emotion = Some(*label);
            }
        }
        println!(
            "ingest: re-assigned {} emotions, happiness share {:.1}% -> {:.1}%",
            report.labels.len(),
            report.happiness_before * 100.0,
            report.happiness_after * 100.0
        );
    }

    if a.augment {
        let lexicon = SuffixLexicon::default();
        let hook = a.paraphrase_cmd.as_deref().map(|cmd| {
            let mut parts = cmd.split_whitespace();
            CommandParaphraser::new(parts.next().unwrap_or_default(), parts)
        });
        let mut augmented = 0;
        for (n, clip) in clips.iter_mut().enumerate() {
            let Some(emotion) = clip.emotion else { continue };
            if !clip.emotional_captions.is_empty() || clip.naive_captions.is_empty() {
                continue;
            }
            clip.emotional_captions = emotional_captions(
                &clip.naive_captions,
                emotion,
                &lexicon,
                derive_seed(a.seed, n as u64),
                hook.as_ref().map(|h| h as &dyn Paraphraser),
            )
            .with_context(|| format!("augmenting {}", clip.id))?;
            augmented += 1;
        }
        println!("ingest: augmented captions of {augmented} clips");
    }

    if let Some(path) = &a.embeddings {
        let raw = art::load_embeddings(path)?;
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(raw.len());
        let dim = raw.first().map_or(0, Embedding::dimension);
        for e in raw {
            let id = ClipId::new(e.id.clone()).context("embedding with empty id")?;
            if !known.contains(&id) {
                return Err(anyhow!("embedding for unknown clip {id}").into());
            }
            if !seen.insert(id.clone()) {
                return Err(anyhow!("duplicate embedding for clip {id}").into());
            }
            if e.dimension() != dim {
                return Err(anyhow!("embedding {id} has dimension {}, expected {dim}", e.dimension()).into());
            }
            let values = normalize(&e.values).ok_or_else(|| anyhow!("embedding {id} is zero or non-finite"))?;
            out.push(Embedding::new(e.id, values));
        }
        art::save_embeddings(&layout.path(art::EMBEDDINGS), &out)?;
        println!("ingest: {} embeddings (D={dim}) normalized", out.len());
    }

    art::save_clips(&layout.path(art::CLIPS), &clips)?;
    println!("ingest: {} clips -> {}", clips.len(), layout.path(art::CLIPS).display());
    Ok(())
}

fn build_index_cmd(layout: &Layout, a: BuildIndexArgs) -> Result<(), CliError> {
    let clips = art::load_clips(&layout.or_default(a.dataset.as_deref(), art::CLIPS))?;
    let embeddings = art::load_embeddings(&layout.or_default(a.embeddings.as_deref(), art::EMBEDDINGS))?;
    let dim = embeddings.first().map(Embedding::dimension).ok_or_else(|| anyhow!("no embeddings"))?;
    let index = build_index(dim, &embeddings, &art::emotion_labels(&clips)).map_err(anyhow::Error::from)?;
    let out = layout.or_default(a.out.as_deref(), art::INDEX);
    art::save_vector_index(&out, &index)?;
    println!("build-index: {} entries, D={dim} -> {}", index.len(), out.display());
    Ok(())
}

fn project(layout: &Layout, a: ProjectArgs) -> Result<(), CliError> {
    let points = match a.method {
        Method::Pca => {
            let embeddings = art::load_embeddings(&layout.or_default(a.embeddings.as_deref(), art::EMBEDDINGS))?;
            project_pca(&embeddings).map_err(anyhow::Error::from)?
        }
        Method::Imported => {
            let input = a.input.as_deref().ok_or_else(|| CliError::usage("--input is required"))?;
            let points = art::load_points(input)?;
            let clips = art::load_clips(&layout.or_default(a.dataset.as_deref(), art::CLIPS))?;
            let known: HashSet<&ClipId> = clips.iter().map(|c| &c.id).collect();
            check_known_ids(&points, |id| known.contains(id)).map_err(anyhow::Error::from)?;
            points
        }
    };
    let out = layout.or_default(a.out.as_deref(), art::POINTS);
    art::save_points(&out, &points)?;
    println!("project: {} points -> {}", points.len(), out.display());
    Ok(())
}

fn build_map(layout: &Layout, a: BuildMapArgs) -> Result<(), CliError> {
    let points = art::load_points(&layout.or_default(a.points.as_deref(), art::POINTS))?;
    let sizing = match (a.cell_size, a.cell_count) {
        (Some(s), _) => CellSizing::Size(s),
        (None, Some(n)) => CellSizing::Count(n),
        (None, None) => CellSizing::Count(DEFAULT_CELL_COUNT),
    };
    let cfg = GridConfig { pad_fraction: a.pad, sizing };
    cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
    let map = build_grid_map(&points, &cfg).map_err(anyhow::Error::from)?;
    let out = layout.or_default(a.out.as_deref(), art::MAP);
    art::save_map(&out, &map)?;
    println!(
        "build-map: {}x{} cells of {:.6}, {} positive -> {}",
        map.width,
        map.height,
        map.cell_size,
        map.cells.len(),
        out.display()
    );
    Ok(())
}

/// The built-in encoder described by `encoder.json`, or the default one
/// at the index dimension when no config file exists.
fn local_encoder(layout: &Layout, explicit: Option<&Path>, index_dim: usize) -> anyhow::Result<TextEncoder> {
    let path = layout.or_default(explicit, art::ENCODER);
    let cfg = if explicit.is_some() || path.exists() {
        art::load_encoder_config(&path)?
    } else {
        EncoderConfig { dimension: index_dim, ..EncoderConfig::default() }
    };
    if cfg.dimension != index_dim {
        bail!("encoder dimension {} does not match index dimension {index_dim}", cfg.dimension);
    }
    Ok(TextEncoder::from_config(&cfg)?)
}

fn eval(layout: &Layout, a: EvalArgs) -> Result<(), CliError> {
    if a.k.is_empty() || a.k.contains(&0) {
        return Err(CliError::usage("--k values must be at least 1"));
    }
    let index = art::load_vector_index(&layout.or_default(a.index.as_deref(), art::INDEX))?;
    let gt = art::load_ground_truth(&layout.or_default(a.ground_truth.as_deref(), art::GROUND_TRUTH))?;
    let encoder = local_encoder(layout, a.encoder_config.as_deref(), index.dimension())?;
    let lexicon = SuffixLexicon::default();
    let strategies: &[Strategy] = match a.strategy {
        EvalStrategy::Filter => &[Strategy::Filter],
        EvalStrategy::Full => &[Strategy::Full],
        EvalStrategy::Both => &[Strategy::Filter, Strategy::Full],
    };
    let mut reports = Vec::new();
    for &s in strategies {
        reports.push(evaluate(&index, &gt, s, &a.k, &lexicon, &encoder).map_err(anyhow::Error::from)?);
    }
    let mut out = std::io::stdout().lock();
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&reports).map_err(anyhow::Error::from)?).ok();
        return Ok(());
    }
    for (n, r) in reports.iter().enumerate() {
        let table = r.to_table();
        // One header for all strategies.
        let body = if n == 0 { table.as_str() } else { table.split_once('\n').map_or("", |t| t.1) };
        write!(out, "{body}").ok();
    }
    for r in &reports {
        writeln!(
            out,
            "# {}: {} queries, {} comparisons, {} fallbacks",
            r.strategy, r.query_count, r.comparisons, r.fallback_count
        )
        .ok();
    }
    Ok(())
}

fn query(layout: &Layout, a: QueryArgs) -> Result<(), CliError> {
    if a.k == 0 {
        return Err(CliError::usage("--k must be at least 1"));
    }
    if a.text.trim().is_empty() {
        return Err(CliError::usage("query text must not be empty"));
    }
    let index = art::load_vector_index(&layout.or_default(a.index.as_deref(), art::INDEX))?;
    let encoder = local_encoder(layout, a.encoder_config.as_deref(), index.dimension())?;
    let q = Query { text: a.text, strategy: a.strategy, k: a.k };
    let outcome = run_query(&index, &q, &SuffixLexicon::default(), &encoder).map_err(anyhow::Error::from)?;
    let mut out = std::io::stdout().lock();
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&outcome).map_err(anyhow::Error::from)?).ok();
        return Ok(());
    }
    let dataset = layout.or_default(a.dataset.as_deref(), art::CLIPS);
    let captions: HashMap<ClipId, String> = if dataset.exists() {
        art::load_clips(&dataset)?
            .into_iter()
            .filter_map(|c| c.naive_captions.first().cloned().map(|cap| (c.id, cap)))
            .collect()
    } else {
        HashMap::new()
    };
    writeln!(
        out,
        "# strategy={} emotion={} comparisons={} fallback={}",
        outcome.strategy_used,
        outcome.extracted_emotion.map_or("-", EmotionLabel::as_str),
        outcome.result.comparisons_made,
        outcome.fallback_used
    )
    .ok();
    for (rank, hit) in outcome.result.hits.iter().enumerate() {
        let pos = index.position(&hit.clip_id).expect("hit comes from the index");
        let caption = captions.get(&hit.clip_id).map_or("", String::as_str);
        writeln!(out, "{}\t{:.6}\t{}\t{}\t{}", rank + 1, hit.score, hit.clip_id, index.emotion(pos), caption).ok();
    }
    Ok(())
}

/// An artifact path for `serve`: an explicitly configured path must exist,
/// a defaulted one may be absent.
fn optional_artifact(layout: &Layout, explicit: Option<&Path>, name: &str, what: &str) -> anyhow::Result<Option<PathBuf>> {
    let path = layout.or_default(explicit, name);
    match (explicit.is_some(), path.exists()) {
        (_, true) => Ok(Some(path)),
        (true, false) => bail!("{what} file {} does not exist", path.display()),
        (false, false) => Ok(None),
    }
}

fn load_state(layout: &Layout, a: &ServeArgs) -> anyhow::Result<AppState> {
    let dataset = layout.or_default(a.dataset.as_deref(), art::CLIPS);
    if !dataset.exists() {
        bail!("dataset file {} does not exist", dataset.display());
    }
    let clips = art::load_clips(&dataset)?;
    let index: Option<VectorIndex> = optional_artifact(layout, a.index.as_deref(), art::INDEX, "index")?
        .map(|p| art::load_vector_index(&p))
        .transpose()?;
    let map = match optional_artifact(layout, a.map.as_deref(), art::MAP, "map")? {
        Some(p) => {
            let bytes = std::fs::read(&p).with_context(|| format!("cannot read {}", p.display()))?;
            let map = read_map(&bytes[..]).with_context(|| format!("reading {}", p.display()))?;
            Some((map, bytes))
        }
        None => None,
    };
    let points = match optional_artifact(layout, a.points.as_deref(), art::POINTS, "points")? {
        Some(p) => art::point_lookup(&art::load_points(&p)?),
        None => HashMap::new(),
    };
    let encoder: Arc<dyn QueryEncoder> = match (&a.encoder_url, &index) {
        (Some(url), Some(index)) => Arc::new(RemoteEncoder::new(url.clone(), index.dimension())),
        (Some(url), None) => {
            let cfg = art::load_encoder_config(&layout.or_default(a.encoder_config.as_deref(), art::ENCODER))
                .context("a remote encoder without an index needs an encoder config for its dimension")?;
            Arc::new(RemoteEncoder::new(url.clone(), cfg.dimension))
        }
        (None, Some(index)) => Arc::new(local_encoder(layout, a.encoder_config.as_deref(), index.dimension())?),
        (None, None) => {
            let path = layout.or_default(a.encoder_config.as_deref(), art::ENCODER);
            let cfg = if path.exists() { art::load_encoder_config(&path)? } else { EncoderConfig::default() };
            Arc::new(TextEncoder::from_config(&cfg)?)
        }
    };
    tracing::info!(
        clips = clips.len(),
        index = index.as_ref().map_or(0, VectorIndex::len),
        map = map.is_some(),
        points = points.len(),
        "artifacts loaded"
    );
    AppState::new(clips, index, map, points, encoder, a.default_k)
}

fn serve(layout: &Layout, a: ServeArgs) -> Result<(), CliError> {
    if a.default_k == 0 {
        return Err(CliError::usage("--default-k must be at least 1"));
    }
    let _ = tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_env("LW_LOG").unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .try_init();
    // Everything is loaded before the listener binds.
    let state = load_state(layout, &a)?;
    let app = router(state, &a.cors_origin).map_err(|e| CliError::usage(e.to_string()))?;
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build().map_err(anyhow::Error::from)?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(&a.listen)
            .await
            .with_context(|| format!("cannot bind {}", a.listen))?;
        let addr = listener.local_addr()?;
        println!("listening on http://{addr}");
        std::io::stdout().flush().ok();
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .context("server error")
    })?;
    Ok(())
}
