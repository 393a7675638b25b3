//! The read-only HTTP API over loaded artifacts.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use latentwander::encoder::{EncoderError, QueryEncoder};
use latentwander::latentmap::{grid_lookup, GridMap, MapError};
use latentwander::pipeline::SuffixLexicon;
use latentwander::retrieval::{run_query, Query, RetrievalError, Strategy, VectorIndex};
use latentwander::{compute_stats, CaptionKind, ClipId, ClipRecord, DatasetStats, EmotionLabel};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::{AllowOrigin, CorsLayer};

/// Everything the API serves. Built fully before the listener binds and
/// never mutated afterwards.
pub struct AppState {
    clips: BTreeMap<ClipId, ClipRecord>,
    stats: StatsBody,
    index: Option<VectorIndex>,
    map: Option<(GridMap, Bytes)>,
    points: HashMap<ClipId, (f64, f64)>,
    lexicon: SuffixLexicon,
    encoder: Arc<dyn QueryEncoder>,
    default_k: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StatsBody {
    pub naive: DatasetStats,
    pub emotional: DatasetStats,
}

impl AppState {
    /// `map_document` is served byte-for-byte; `map` must be its parse.
    pub fn new(
        clips: Vec<ClipRecord>,
        index: Option<VectorIndex>,
        map: Option<(GridMap, Vec<u8>)>,
        points: HashMap<ClipId, (f64, f64)>,
        encoder: Arc<dyn QueryEncoder>,
        default_k: usize,
    ) -> anyhow::Result<Self> {
        let stats = StatsBody {
            naive: compute_stats(&clips, CaptionKind::Naive)?,
            emotional: compute_stats(&clips, CaptionKind::Emotional)?,
        };
        if let Some(index) = &index {
            anyhow::ensure!(
                index.dimension() == encoder.dimension(),
                "index dimension {} does not match encoder dimension {}",
                index.dimension(),
                encoder.dimension()
            );
        }
        anyhow::ensure!(default_k >= 1, "default k must be at least 1");
        Ok(AppState {
            clips: clips.into_iter().map(|c| (c.id.clone(), c)).collect(),
            stats,
            index,
            map: map.map(|(m, bytes)| (m, Bytes::from(bytes))),
            points,
            lexicon: SuffixLexicon::default(),
            encoder,
            default_k,
        })
    }

    fn summary(&self, id: &ClipId) -> ClipSummary {
        let clip = self.clips.get(id);
        let (x, y) = self.points.get(id).copied().map_or((None, None), |(x, y)| (Some(x), Some(y)));
        ClipSummary {
            id: id.clone(),
            naive_captions: clip.map(|c| c.naive_captions.clone()).unwrap_or_default(),
            emotional_captions: clip.map(|c| c.emotional_captions.clone()).unwrap_or_default(),
            emotion: clip.and_then(|c| c.emotion),
            media_url: clip.and_then(|c| c.media_url.clone()),
            x,
            y,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClipSummary {
    pub id: ClipId,
    pub naive_captions: Vec<String>,
    pub emotional_captions: Vec<String>,
    pub emotion: Option<EmotionLabel>,
    pub media_url: Option<String>,
    pub x: Option<f64>,
    pub y: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GridBody {
    pub i: i64,
    pub j: i64,
    pub clips: Vec<ClipSummary>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct QueryBody {
    pub text: String,
    pub strategy: Strategy,
    pub k: Option<i64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct Cell {
    pub i: u32,
    pub j: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct QueryHit {
    pub clip: ClipSummary,
    pub score: f64,
    /// `None` when no map is loaded or the clip has no projected point.
    pub cell: Option<Cell>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct QueryResponse {
    pub results: Vec<QueryHit>,
    pub comparisons: usize,
    pub fallback_used: bool,
    pub strategy_used: Strategy,
    pub emotion: Option<EmotionLabel>,
}

/// Every error body is `{code, message}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, code, message: message.into() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "code": self.code, "message": self.message }))).into_response()
    }
}

impl From<RetrievalError> for ApiError {
    fn from(e: RetrievalError) -> Self {
        let message = e.to_string();
        match e {
            RetrievalError::EmptyQuery => ApiError::new(StatusCode::BAD_REQUEST, "empty_query", message),
            RetrievalError::InvalidK => ApiError::new(StatusCode::BAD_REQUEST, "invalid_k", message),
            RetrievalError::Encoder(EncoderError::EncoderUnavailable(_)) => {
                ApiError::new(StatusCode::BAD_GATEWAY, "encoder_unavailable", message)
            }
            RetrievalError::Encoder(EncoderError::InvalidResponse(_) | EncoderError::DimensionMismatch { .. }) => {
                ApiError::new(StatusCode::BAD_GATEWAY, "encoder_invalid_response", message)
            }
            RetrievalError::InvalidVector(_) => ApiError::new(StatusCode::BAD_REQUEST, "unencodable_query", message),
            _ => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message),
        }
    }
}

type Shared = Arc<AppState>;

pub fn router(state: AppState, cors_origins: &[String]) -> anyhow::Result<Router> {
    let mut app = Router::new()
        .route("/healthz", get(healthz))
        .route("/api/map", get(get_map))
        .route("/api/grid/{i}/{j}", get(get_grid))
        .route("/api/query", post(post_query))
        .route("/api/clips/{id}", get(get_clip))
        .route("/api/stats", get(get_stats))
        .fallback(|| async { ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such route") })
        .with_state(Arc::new(state));
    if !cors_origins.is_empty() {
        let origins = cors_origins
            .iter()
            .map(|o| HeaderValue::from_str(o).map_err(|_| anyhow::anyhow!("invalid CORS origin {o:?}")))
            .collect::<anyhow::Result<Vec<_>>>()?;
        app = app.layer(
            CorsLayer::new()
                .allow_origin(AllowOrigin::list(origins))
                .allow_methods([Method::GET, Method::POST])
                .allow_headers([header::CONTENT_TYPE]),
        );
    }
    Ok(app)
}

async fn healthz() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

async fn get_map(State(state): State<Shared>) -> Result<Response, ApiError> {
    let (_, bytes) = state
        .map
        .as_ref()
        .ok_or_else(|| ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "map_not_loaded", "no grid map is loaded"))?;
    Ok(([(header::CONTENT_TYPE, "application/json")], bytes.clone()).into_response())
}

async fn get_grid(State(state): State<Shared>, Path((i, j)): Path<(String, String)>) -> Result<Json<GridBody>, ApiError> {
    let (map, _) = state
        .map
        .as_ref()
        .ok_or_else(|| ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "map_not_loaded", "no grid map is loaded"))?;
    let parse = |s: &str| {
        s.parse::<i64>().map_err(|_| ApiError::new(StatusCode::BAD_REQUEST, "bad_request", format!("{s:?} is not a cell index")))
    };
    let (i, j) = (parse(&i)?, parse(&j)?);
    let ids = grid_lookup(map, i, j).map_err(|e| match e {
        MapError::OutOfBounds { .. } => ApiError::new(StatusCode::NOT_FOUND, "out_of_bounds", e.to_string()),
        other => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", other.to_string()),
    })?;
    Ok(Json(GridBody { i, j, clips: ids.iter().map(|id| state.summary(id)).collect() }))
}

async fn post_query(State(state): State<Shared>, body: Bytes) -> Result<Json<QueryResponse>, ApiError> {
    let body: QueryBody = serde_json::from_slice(&body)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "bad_request", format!("invalid query body: {e}")))?;
    let k = body.k.unwrap_or(state.default_k as i64);
    if k < 1 {
        return Err(RetrievalError::InvalidK.into());
    }
    if body.text.trim().is_empty() {
        return Err(RetrievalError::EmptyQuery.into());
    }
    if state.index.is_none() {
        return Err(ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "index_not_loaded", "no vector index is loaded"));
    }
    let query = Query { text: body.text, strategy: body.strategy, k: k as usize };
    // Encoding may block on a remote call and scoring is CPU-bound.
    let worker = Arc::clone(&state);
    let outcome = tokio::task::spawn_blocking(move || {
        let index = worker.index.as_ref().expect("checked above");
        run_query(index, &query, &worker.lexicon, worker.encoder.as_ref())
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))??;

    let cell_of = |id: &ClipId| {
        let (map, _) = state.map.as_ref()?;
        let &(x, y) = state.points.get(id)?;
        let (i, j) = map.cell_of(x, y);
        Some(Cell { i, j })
    };
    let results = outcome
        .result
        .hits
        .iter()
        .map(|h| QueryHit { clip: state.summary(&h.clip_id), score: h.score, cell: cell_of(&h.clip_id) })
        .collect();
    Ok(Json(QueryResponse {
        results,
        comparisons: outcome.result.comparisons_made,
        fallback_used: outcome.fallback_used,
        strategy_used: outcome.strategy_used,
        emotion: outcome.extracted_emotion,
    }))
}

async fn get_clip(State(state): State<Shared>, Path(id): Path<String>) -> Result<Json<ClipRecord>, ApiError> {
    let not_found = || ApiError::new(StatusCode::NOT_FOUND, "unknown_clip", format!("no clip {id:?}"));
    let key = ClipId::new(id.clone()).map_err(|_| not_found())?;
    state.clips.get(&key).cloned().map(Json).ok_or_else(not_found)
}

async fn get_stats(State(state): State<Shared>) -> Json<StatsBody> {
    Json(state.stats.clone())
}
