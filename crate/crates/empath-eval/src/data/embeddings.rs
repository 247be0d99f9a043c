//! Story embedding ingestion: JSONL and a packed binary layout.
//!
//! Binary layout: the 5-byte magic `EMBV1`, one u32 little-endian dimension,
//! then per record a u32 little-endian id byte length, the UTF-8 id, and
//! `dim` f32 little-endian values. Values are stored at 32-bit precision;
//! in memory they are widened to f64 exactly, so write-then-parse is
//! bit-identical.

use std::io::{BufRead, BufReader, Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use serde::{Deserialize, Serialize};

use crate::data::parse::Parsed;
use crate::data::types::EmbeddingSet;
use crate::error::{Error, Result, RowError};

/// Magic prefix of the packed binary embedding format.
pub const EMBEDDING_MAGIC: &[u8; 5] = b"EMBV1";

#[derive(Serialize, Deserialize)]
struct EmbeddingRow {
    story_id: String,
    values: Vec<f64>,
}

/// Reads embeddings from JSONL rows of `{"story_id": ..., "values": [...]}`.
/// The first well-formed row fixes the dimension.
pub fn parse_embeddings_jsonl<R: Read>(reader: R) -> Result<Parsed<EmbeddingSet>> {
    let mut set: Option<EmbeddingSet> = None;
    let mut errors: Vec<RowError> = Vec::new();
    let mut rows_seen = 0usize;

    for (line_no, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line_no + 1;
        rows_seen += 1;
        let parsed: EmbeddingRow = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                errors.push(RowError {
                    row,
                    message: e.to_string(),
                });
                continue;
            }
        };
        if set.is_none() {
            match EmbeddingSet::new(parsed.values.len()) {
                Ok(s) => set = Some(s),
                Err(e) => {
                    errors.push(RowError {
                        row,
                        message: e.to_string(),
                    });
                    continue;
                }
            }
        }
        let set = set.as_mut().expect("set initialized above");
        if let Err(e) = set.insert(parsed.story_id, parsed.values) {
            errors.push(RowError {
                row,
                message: e.to_string(),
            });
        }
    }

    let value = match set {
        Some(s) => s,
        None => return Err(Error::Insufficient("no embedding rows".into())),
    };
    Ok(Parsed {
        value,
        row_errors: errors,
        rows_seen,
    })
}

/// Reads the packed binary embedding format. Structural damage (bad magic,
/// truncated record, invalid UTF-8 id) fails the whole file.
pub fn parse_embeddings_binary<R: Read>(mut reader: R) -> Result<EmbeddingSet> {
    let mut magic = [0u8; 5];
    reader
        .read_exact(&mut magic)
        .map_err(|_| Error::Format("embedding file shorter than its magic".into()))?;
    if &magic != EMBEDDING_MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&magic),
            String::from_utf8_lossy(EMBEDDING_MAGIC)
        )));
    }
    let dim = reader.read_u32::<LittleEndian>().map_err(|_| {
        Error::Format("embedding file truncated before dimension".into())
    })? as usize;
    let mut set = EmbeddingSet::new(dim)?;

    let mut record = 0usize;
    loop {
        record += 1;
        let id_len = match reader.read_u32::<LittleEndian>() {
            Ok(n) => n as usize,
            Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(e.into()),
        };
        let mut id_bytes = vec![0u8; id_len];
        reader
            .read_exact(&mut id_bytes)
            .map_err(|_| Error::Format(format!("record {record}: truncated id")))?;
        let story_id = String::from_utf8(id_bytes)
            .map_err(|_| Error::Format(format!("record {record}: id is not UTF-8")))?;
        let mut values = Vec::with_capacity(dim);
        for _ in 0..dim {
            let v = reader
                .read_f32::<LittleEndian>()
                .map_err(|_| Error::Format(format!("record {record}: truncated values")))?;
            values.push(v as f64);
        }
        set.insert(story_id, values)?;
    }
    Ok(set)
}

/// Writes the packed binary embedding format. Values narrow to f32.
pub fn write_embeddings_binary<W: Write>(set: &EmbeddingSet, mut writer: W) -> Result<()> {
    writer.write_all(EMBEDDING_MAGIC)?;
    writer.write_u32::<LittleEndian>(set.dim() as u32)?;
    for (id, values) in set.iter() {
        writer.write_u32::<LittleEndian>(id.len() as u32)?;
        writer.write_all(id.as_bytes())?;
        for &v in values {
            writer.write_f32::<LittleEndian>(v as f32)?;
        }
    }
    Ok(())
}

/// Reads embeddings, sniffing the packed binary magic and falling back to JSONL.
pub fn parse_embeddings_auto(bytes: &[u8]) -> Result<Parsed<EmbeddingSet>> {
    if bytes.starts_with(EMBEDDING_MAGIC) {
        let value = parse_embeddings_binary(bytes)?;
        let rows_seen = value.len();
        Ok(Parsed {
            value,
            row_errors: Vec::new(),
            rows_seen,
        })
    } else {
        parse_embeddings_jsonl(bytes)
    }
}
