//! Embedding interchange files.
//!
//! Text: one record per line, the id, a tab, then the `D` values separated by
//! spaces. Lines without a tab split the id off at the first whitespace.
//!
//! Binary: `LWEM`, version byte `1`, `u32` dimension, `u64` count, then per
//! record a `u32`-length-prefixed UTF-8 id and `D` `f32` values, all
//! little-endian.

use std::io::{BufRead, BufReader, Read, Write};

use crate::codec::{self, FormatError};
use crate::types::Embedding;

const MAGIC: &[u8; 4] = b"LWEM";

fn check_dims(embeddings: &[Embedding]) -> Result<usize, FormatError> {
    let dim = embeddings.first().map_or(0, Embedding::dimension);
    match embeddings.iter().find(|e| e.dimension() != dim) {
        Some(e) => Err(FormatError::DimensionMismatch { expected: dim, found: e.dimension() }),
        None => Ok(dim),
    }
}

pub fn write_embeddings_text<W: Write>(mut w: W, embeddings: &[Embedding]) -> Result<(), FormatError> {
    check_dims(embeddings)?;
    for e in embeddings {
        if e.id.contains(['\t', '\n']) {
            return Err(FormatError::InvalidRecord { record: 0, message: format!("id {:?} contains a tab or newline", e.id) });
        }
        w.write_all(e.id.as_bytes())?;
        w.write_all(b"\t")?;
        for (n, v) in e.values.iter().enumerate() {
            if n > 0 {
                w.write_all(b" ")?;
            }
            write!(w, "{v}")?;
        }
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_embeddings_text<R: BufRead>(r: R) -> Result<Vec<Embedding>, FormatError> {
    let mut out: Vec<Embedding> = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| FormatError::Parse { line: n + 1, message };
        let (id, rest) = match line.split_once('\t') {
            Some(split) => split,
            None => line.trim_start().split_once(char::is_whitespace).unwrap_or((line.trim(), "")),
        };
        if id.is_empty() {
            return Err(parse_err("missing id".into()));
        }
        let values = rest
            .split_whitespace()
            .map(|t| t.parse::<f32>().map_err(|e| parse_err(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<f32>, _>>()?;
        if values.is_empty() {
            return Err(parse_err("no values".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(parse_err(format!("non-finite value {v}")));
        }
        if let Some(first) = out.first() {
            if first.dimension() != values.len() {
                return Err(parse_err(format!("expected {} values, found {}", first.dimension(), values.len())));
            }
        }
        out.push(Embedding::new(id, values));
    }
    Ok(out)
}

pub fn write_embeddings_binary<W: Write>(mut w: W, embeddings: &[Embedding]) -> Result<(), FormatError> {
    let dim = check_dims(embeddings)?;
    codec::write_header(&mut w, MAGIC, dim, embeddings.len())?;
    for e in embeddings {
        codec::write_id(&mut w, &e.id)?;
        codec::write_f32s(&mut w, &e.values)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_embeddings_binary<R: Read>(mut r: R) -> Result<Vec<Embedding>, FormatError> {
    let (dim, count) = codec::read_header(&mut r, MAGIC)?;
    // Cap the pre-allocation so a corrupt count cannot exhaust memory.
    let mut out = Vec::with_capacity(count.min(1 << 16) as usize);
    for record in 0..count {
        let id = codec::read_id(&mut r, record)?;
        let values = codec::read_f32s(&mut r, dim)?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(FormatError::InvalidRecord { record, message: "non-finite value".into() });
        }
        out.push(Embedding::new(id, values));
    }
    Ok(out)
}

/// Reads either format, sniffing the binary magic.
pub fn read_embeddings<R: Read>(r: R) -> Result<Vec<Embedding>, FormatError> {
    let mut r = BufReader::new(r);
    let head = r.fill_buf()?;
    if head.starts_with(MAGIC) {
        read_embeddings_binary(r)
    } else {
        read_embeddings_text(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> Vec<Embedding> {
        vec![
            Embedding::new("ZB015703 clip #2", vec![0.6, -0.8, 0.0]),
            Embedding::new("b", vec![1.0e-7, 0.1, f32::MIN_POSITIVE]),
        ]
    }

    #[test]
    fn binary_layout() {
        let mut buf = Vec::new();
        write_embeddings_binary(&mut buf, &[Embedding::new("ab", vec![1.0, 0.0])]).unwrap();
        let mut expected = b"LWEM".to_vec();
        expected.push(1);
        expected.extend(2u32.to_le_bytes());
        expected.extend(1u64.to_le_bytes());
        expected.extend(2u32.to_le_bytes());
        expected.extend(b"ab");
        expected.extend(1.0f32.to_le_bytes());
        expected.extend(0.0f32.to_le_bytes());
        assert_eq!(buf, expected);
    }

    #[test]
    fn sniffing_reader_handles_both() {
        let mut bin = Vec::new();
        write_embeddings_binary(&mut bin, &sample()).unwrap();
        let mut text = Vec::new();
        write_embeddings_text(&mut text, &sample()).unwrap();
        assert_eq!(read_embeddings(&bin[..]).unwrap(), sample());
        assert_eq!(read_embeddings(&text[..]).unwrap(), sample());
    }

    #[test]
    fn text_without_tab() {
        let got = read_embeddings_text("q1 0.5 0.5\nq2  1 0\n".as_bytes()).unwrap();
        assert_eq!(got[1], Embedding::new("q2", vec![1.0, 0.0]));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(read_embeddings_text("a\t1 x\n".as_bytes()), Err(FormatError::Parse { line: 1, .. })));
        assert!(matches!(read_embeddings_text("a\t1 2\nb\t1\n".as_bytes()), Err(FormatError::Parse { line: 2, .. })));
        assert!(matches!(read_embeddings_text("a\tNaN 1\n".as_bytes()), Err(FormatError::Parse { .. })));
        assert!(matches!(read_embeddings_binary(&b"LWIX\x01"[..]), Err(FormatError::BadMagic { .. })));
        assert!(matches!(read_embeddings_binary(&b"LWEM\x02"[..]), Err(FormatError::UnsupportedVersion(2))));

        let mut bin = Vec::new();
        write_embeddings_binary(&mut bin, &sample()).unwrap();
        bin.truncate(bin.len() - 1);
        assert!(matches!(read_embeddings_binary(&bin[..]), Err(FormatError::Io(_))));
        let mixed = [Embedding::new("a", vec![1.0]), Embedding::new("b", vec![1.0, 2.0])];
        assert!(matches!(write_embeddings_binary(Vec::new(), &mixed), Err(FormatError::DimensionMismatch { .. })));
    }

    proptest! {
        #[test]
        fn roundtrip_is_bit_exact(
            rows in prop::collection::vec(("[a-zA-Z0-9#_ -]{1,12}", prop::collection::vec(-1.0e3f32..1.0e3, 4)), 0..8)
        ) {
            let rows: Vec<Embedding> = rows.into_iter()
                .filter(|(id, _)| !id.trim().is_empty() && !id.starts_with(' '))
                .map(|(id, v)| Embedding::new(id, v))
                .collect();
            let mut bin = Vec::new();
            write_embeddings_binary(&mut bin, &rows).unwrap();
            prop_assert_eq!(&read_embeddings_binary(&bin[..]).unwrap(), &rows);
            let mut text = Vec::new();
            write_embeddings_text(&mut text, &rows).unwrap();
            prop_assert_eq!(&read_embeddings_text(&text[..]).unwrap(), &rows);
        }
    }
}
