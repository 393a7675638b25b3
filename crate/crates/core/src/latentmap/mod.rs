//! 2D projection of clip embeddings and the walkable grid map built on it.
//!
//! Coordinates come from [`project_pca`] or from any external projector via
//! [`import_points`]. [`build_grid_map`] bins them into square cells; a cell
//! holding at least one point is *positive*.

mod grid;
mod pca;
mod points;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::ClipId;

pub use grid::{
    build_grid_map, grid_lookup, neighbors, read_map, write_map, CellSizing, Connectivity, GridCell, GridConfig,
    GridMap, Neighbor, DEFAULT_CELL_COUNT, DEFAULT_PAD_FRACTION,
};
pub use pca::{pca_fit, project_pca, Pca};
pub use points::{check_known_ids, export_points, import_points};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatentPoint {
    pub clip_id: ClipId,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionMethod {
    /// Coordinates read from a points file.
    Imported,
    #[default]
    Pca,
}

impl std::str::FromStr for ProjectionMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pca" => Ok(ProjectionMethod::Pca),
            "imported" | "import" => Ok(ProjectionMethod::Imported),
            other => Err(format!("unknown projection method {other:?}")),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum MapError {
    #[error("need at least 3 distinct embeddings to project")]
    DegenerateInput,
    #[error("no points")]
    EmptyInput,
    #[error("embedding {id} has dimension {got}, expected {expected}")]
    DimensionMismatch { id: String, expected: usize, got: usize },
    #[error("invalid point {id:?}: {message}")]
    InvalidPoint { id: String, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid map config: {0}")]
    InvalidConfig(String),
    #[error("cell ({i}, {j}) is outside the {width}x{height} map")]
    OutOfBounds { i: i64, j: i64, width: u32, height: u32 },
    #[error("clip {0} is not in the dataset")]
    UnknownClip(String),
    #[error("invalid map document: {0}")]
    InvalidMap(String),
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for MapError {
    fn from(e: std::io::Error) -> Self {
        MapError::Io(e.to_string())
    }
}
