//! Points files: one `clip_id,x,y` per line. Blank lines and lines starting
//! with `#` are skipped.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use crate::latentmap::{LatentPoint, MapError};
use crate::types::ClipId;

pub fn import_points<R: BufRead>(reader: R) -> Result<Vec<LatentPoint>, MapError> {
    let mut points = Vec::new();
    let mut seen = HashSet::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| MapError::Parse { line: n + 1, message };
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        let [id, x, y] = fields[..] else {
            return Err(parse_err(format!("expected 3 comma-separated fields, found {}", fields.len())));
        };
        let coord = |s: &str| s.parse::<f64>().map_err(|e| parse_err(format!("{s:?}: {e}")));
        let (x, y) = (coord(x)?, coord(y)?);
        if !x.is_finite() || !y.is_finite() {
            return Err(MapError::InvalidPoint { id: id.to_string(), message: format!("non-finite coordinate on line {}", n + 1) });
        }
        let clip_id = ClipId::new(id).map_err(|e| parse_err(e.to_string()))?;
        if !seen.insert(clip_id.clone()) {
            return Err(MapError::InvalidPoint { id: id.to_string(), message: format!("duplicate id on line {}", n + 1) });
        }
        points.push(LatentPoint { clip_id, x, y });
    }
    Ok(points)
}

/// Writes points so that [`import_points`] reads them back unchanged.
pub fn export_points<W: Write>(points: &[LatentPoint], mut writer: W) -> Result<(), MapError> {
    for p in points {
        // `{}` on f64 prints the shortest string that parses back to the same value.
        writeln!(writer, "{},{},{}", p.clip_id, p.x, p.y)?;
    }
    writer.flush()?;
    Ok(())
}

/// Fails on the first point whose id `known` rejects.
pub fn check_known_ids(points: &[LatentPoint], known: impl Fn(&ClipId) -> bool) -> Result<(), MapError> {
    match points.iter().find(|p| !known(&p.clip_id)) {
        Some(p) => Err(MapError::UnknownClip(p.clip_id.to_string())),
        None => Ok(()),
    }
}
