//! `LWIX` index files: magic, version byte `1`, `u32` dimension, `u64`
//! count, then per entry a `u32`-length-prefixed UTF-8 id, one emotion byte
//! (label order happiness..fear = 0..5) and `D` `f32` values, little-endian.
//! Entries are written in index order and vectors are stored bit-exactly.

use std::io::{Read, Write};

use crate::codec::{self, FormatError};
use crate::retrieval::{IndexEntry, RetrievalError, VectorIndex};
use crate::types::{ClipId, EmotionLabel};

const MAGIC: &[u8; 4] = b"LWIX";

pub fn save_index<W: Write>(index: &VectorIndex, mut w: W) -> Result<(), RetrievalError> {
    let mut write = || -> std::io::Result<()> {
        codec::write_header(&mut w, MAGIC, index.dimension(), index.len())?;
        for (id, emotion, values) in index.entries() {
            codec::write_id(&mut w, id.as_str())?;
            w.write_all(&[emotion.index() as u8])?;
            codec::write_f32s(&mut w, values)?;
        }
        w.flush()
    };
    write().map_err(|e| RetrievalError::Format(FormatError::Io(e).to_string()))
}

pub fn load_index<R: Read>(mut r: R) -> Result<VectorIndex, RetrievalError> {
    let fmt = |e: FormatError| RetrievalError::Format(e.to_string());
    let (dim, count) = codec::read_header(&mut r, MAGIC).map_err(fmt)?;
    let mut entries = Vec::with_capacity(count.min(1 << 16) as usize);
    for record in 0..count {
        let id = codec::read_id(&mut r, record).map_err(fmt)?;
        let emotion_byte = codec::read_u8(&mut r).map_err(|e| fmt(e.into()))?;
        let values = codec::read_f32s(&mut r, dim).map_err(|e| fmt(e.into()))?;
        let invalid = |message: String| fmt(FormatError::InvalidRecord { record, message });
        let emotion = EmotionLabel::from_index(emotion_byte as usize)
            .ok_or_else(|| invalid(format!("emotion byte {emotion_byte}")))?;
        let id = ClipId::new(id).map_err(|e| invalid(e.to_string()))?;
        entries.push(IndexEntry { id, values, emotion });
    }
    VectorIndex::from_unit_entries(dim, entries)
}
