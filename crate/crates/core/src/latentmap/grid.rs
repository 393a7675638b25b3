use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::latentmap::{LatentPoint, MapError};
use crate::types::ClipId;

pub const DEFAULT_PAD_FRACTION: f64 = 0.05;
/// Cells along the longer edge of the padded bounding box.
pub const DEFAULT_CELL_COUNT: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellSizing {
    Size(f64),
    Count(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub pad_fraction: f64,
    pub sizing: CellSizing,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { pad_fraction: DEFAULT_PAD_FRACTION, sizing: CellSizing::Count(DEFAULT_CELL_COUNT) }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<(), MapError> {
        if !(self.pad_fraction.is_finite() && self.pad_fraction >= 0.0) {
            return Err(MapError::InvalidConfig(format!("pad_fraction must be >= 0, got {}", self.pad_fraction)));
        }
        match self.sizing {
            CellSizing::Size(s) if !(s.is_finite() && s > 0.0) => {
                Err(MapError::InvalidConfig(format!("cell_size must be > 0, got {s}")))
            }
            CellSizing::Count(0) => Err(MapError::InvalidConfig("cell_count must be >= 1".into())),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub i: u32,
    pub j: u32,
    pub clips: Vec<ClipId>,
}

/// Positive cells only, sorted by `(i, j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMap {
    pub origin_x: f64,
    pub origin_y: f64,
    pub cell_size: f64,
    pub width: u32,
    pub height: u32,
    pub cells: Vec<GridCell>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connectivity {
    Four,
    #[default]
    Eight,
}

impl std::str::FromStr for Connectivity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "4" | "four" => Ok(Connectivity::Four),
            "8" | "eight" => Ok(Connectivity::Eight),
            other => Err(format!("connectivity must be 4 or 8, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Neighbor {
    pub i: u32,
    pub j: u32,
    pub positive: bool,
}

fn cell_count_for(extent: f64, cell_size: f64) -> u32 {
    // The small slack keeps an exact multiple from gaining a phantom cell.
    ((extent / cell_size - 1e-9).ceil().max(1.0)).min(u32::MAX as f64) as u32
}

fn bin(v: f64, origin: f64, cell_size: f64, cells: u32) -> u32 {
    let k = ((v - origin) / cell_size).floor();
    k.clamp(0.0, f64::from(cells - 1)) as u32
}

impl GridMap {
    /// The cell a coordinate falls into; points past the max edge clamp to
    /// the last row or column.
    pub fn cell_of(&self, x: f64, y: f64) -> (u32, u32) {
        (bin(x, self.origin_x, self.cell_size, self.width), bin(y, self.origin_y, self.cell_size, self.height))
    }

    pub fn in_bounds(&self, i: i64, j: i64) -> bool {
        (0..i64::from(self.width)).contains(&i) && (0..i64::from(self.height)).contains(&j)
    }

    pub fn cell(&self, i: u32, j: u32) -> Option<&GridCell> {
        self.cells.binary_search_by(|c| (c.i, c.j).cmp(&(i, j))).ok().map(|n| &self.cells[n])
    }

    pub fn point_count(&self) -> usize {
        self.cells.iter().map(|c| c.clips.len()).sum()
    }

    fn check(&self, i: i64, j: i64) -> Result<(u32, u32), MapError> {
        if self.in_bounds(i, j) {
            Ok((i as u32, j as u32))
        } else {
            Err(MapError::OutOfBounds { i, j, width: self.width, height: self.height })
        }
    }

    pub fn validate(&self) -> Result<(), MapError> {
        let bad = |m: String| Err(MapError::InvalidMap(m));
        if !(self.cell_size.is_finite() && self.cell_size > 0.0) {
            return bad(format!("cell_size {}", self.cell_size));
        }
        if !self.origin_x.is_finite() || !self.origin_y.is_finite() {
            return bad("non-finite origin".into());
        }
        if self.width == 0 || self.height == 0 {
            return bad("empty lattice".into());
        }
        for (n, c) in self.cells.iter().enumerate() {
            if c.i >= self.width || c.j >= self.height {
                return bad(format!("cell ({}, {}) out of bounds", c.i, c.j));
            }
            if c.clips.is_empty() {
                return bad(format!("cell ({}, {}) has no clips", c.i, c.j));
            }
            if n > 0 && (self.cells[n - 1].i, self.cells[n - 1].j) >= (c.i, c.j) {
                return bad("cells not sorted by (i, j) or repeated".into());
            }
            if c.clips.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("clips of cell ({}, {}) not sorted", c.i, c.j));
            }
        }
        Ok(())
    }
}

pub fn build_grid_map(points: &[LatentPoint], cfg: &GridConfig) -> Result<GridMap, MapError> {
    cfg.validate()?;
    let first = points.first().ok_or(MapError::EmptyInput)?;
    let (mut min_x, mut max_x, mut min_y, mut max_y) = (first.x, first.x, first.y, first.y);
    for p in points {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(MapError::InvalidPoint { id: p.clip_id.to_string(), message: "non-finite coordinate".into() });
        }
        min_x = min_x.min(p.x);
        max_x = max_x.max(p.x);
        min_y = min_y.min(p.y);
        max_y = max_y.max(p.y);
    }
    let (pad_x, pad_y) = ((max_x - min_x) * cfg.pad_fraction, (max_y - min_y) * cfg.pad_fraction);
    let (origin_x, origin_y) = (min_x - pad_x, min_y - pad_y);
    let (extent_x, extent_y) = (max_x + pad_x - origin_x, max_y + pad_y - origin_y);

    let cell_size = match cfg.sizing {
        CellSizing::Size(s) => s,
        CellSizing::Count(n) => {
            let s = extent_x.max(extent_y) / f64::from(n);
            // All points coincide: any positive size gives one cell.
            if s > 0.0 {
                s
            } else {
                1.0
            }
        }
    };
    let (width, height) = (cell_count_for(extent_x, cell_size), cell_count_for(extent_y, cell_size));

    let mut map = GridMap { origin_x, origin_y, cell_size, width, height, cells: Vec::new() };
    let mut binned: BTreeMap<(u32, u32), Vec<ClipId>> = BTreeMap::new();
    for p in points {
        binned.entry(map.cell_of(p.x, p.y)).or_default().push(p.clip_id.clone());
    }
    map.cells = binned
        .into_iter()
        .map(|((i, j), mut clips)| {
            clips.sort();
            GridCell { i, j, clips }
        })
        .collect();
    Ok(map)
}

/// Clips in cell `(i, j)`; empty for a negative cell.
pub fn grid_lookup(map: &GridMap, i: i64, j: i64) -> Result<&[ClipId], MapError> {
    let (i, j) = map.check(i, j)?;
    Ok(map.cell(i, j).map_or(&[][..], |c| &c.clips[..]))
}

/// In-bounds cells adjacent to `(i, j)`, row-major by `(dj, di)`.
pub fn neighbors(map: &GridMap, i: i64, j: i64, connectivity: Connectivity) -> Result<Vec<Neighbor>, MapError> {
    map.check(i, j)?;
    let mut out = Vec::with_capacity(8);
    for dj in -1..=1i64 {
        for di in -1..=1i64 {
            if (di, dj) == (0, 0) || (connectivity == Connectivity::Four && di != 0 && dj != 0) {
                continue;
            }
            let (ni, nj) = (i + di, j + dj);
            if map.in_bounds(ni, nj) {
                let (ni, nj) = (ni as u32, nj as u32);
                out.push(Neighbor { i: ni, j: nj, positive: map.cell(ni, nj).is_some() });
            }
        }
    }
    Ok(out)
}

pub fn write_map<W: Write>(map: &GridMap, mut writer: W) -> Result<(), MapError> {
    serde_json::to_writer_pretty(&mut writer, map).map_err(|e| MapError::Io(e.to_string()))?;
    writer.write_all(b"\n")?;
    writer.flush()?;
    Ok(())
}

/// Parses and validates a map document.
pub fn read_map<R: Read>(reader: R) -> Result<GridMap, MapError> {
    let map: GridMap = serde_json::from_reader(reader).map_err(|e| MapError::InvalidMap(e.to_string()))?;
    map.validate()?;
    Ok(map)
}
