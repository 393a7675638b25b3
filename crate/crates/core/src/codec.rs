//! Little-endian helpers and the error type shared by the binary embedding
//! (`LWEM`) and index (`LWIX`) formats.

use std::io::{self, Read, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: String, found: String },
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("record {record}: {message}")]
    InvalidRecord { record: u64, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

pub(crate) fn write_header<W: Write>(w: &mut W, magic: &[u8; 4], dim: usize, count: usize) -> io::Result<()> {
    w.write_all(magic)?;
    w.write_all(&[1u8])?;
    w.write_all(&(dim as u32).to_le_bytes())?;
    w.write_all(&(count as u64).to_le_bytes())
}

/// Reads magic and version, returning `(dimension, count)`.
pub(crate) fn read_header<R: Read>(r: &mut R, magic: &[u8; 4]) -> Result<(usize, u64), FormatError> {
    let mut found = [0u8; 4];
    r.read_exact(&mut found)?;
    if &found != magic {
        return Err(FormatError::BadMagic {
            expected: String::from_utf8_lossy(magic).into_owned(),
            found: String::from_utf8_lossy(&found).into_owned(),
        });
    }
    let version = read_u8(r)?;
    if version != 1 {
        return Err(FormatError::UnsupportedVersion(version));
    }
    let dim = read_u32(r)? as usize;
    let count = read_u64(r)?;
    Ok((dim, count))
}

pub(crate) fn write_id<W: Write>(w: &mut W, id: &str) -> io::Result<()> {
    w.write_all(&(id.len() as u32).to_le_bytes())?;
    w.write_all(id.as_bytes())
}

pub(crate) fn read_id<R: Read>(r: &mut R, record: u64) -> Result<String, FormatError> {
    let len = read_u32(r)? as usize;
    let mut bytes = vec![0u8; len];
    r.read_exact(&mut bytes)?;
    String::from_utf8(bytes).map_err(|e| FormatError::InvalidRecord { record, message: e.to_string() })
}

pub(crate) fn write_f32s<W: Write>(w: &mut W, values: &[f32]) -> io::Result<()> {
    for v in values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub(crate) fn read_f32s<R: Read>(r: &mut R, dim: usize) -> io::Result<Vec<f32>> {
    let mut bytes = vec![0u8; dim * 4];
    r.read_exact(&mut bytes)?;
    Ok(bytes.chunks_exact(4).map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect())
}

pub(crate) fn read_u8<R: Read>(r: &mut R) -> io::Result<u8> {
    let mut b = [0u8; 1];
    r.read_exact(&mut b)?;
    Ok(b[0])
}

fn read_u32<R: Read>(r: &mut R) -> io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}
