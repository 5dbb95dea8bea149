//! Embedding batch files.
//!
//! Binary layout (all integers little-endian):
//!   magic "ARSN" | u32 version = 1 | u32 rows | u32 cols |
//!   rows*cols f32 payload, row-major, little-endian
//!
//! Text layout:
//!   header line "arsn text v1 <rows> <cols>", then one line per row of
//!   comma-separated decimals in shortest round-trip formatting.
//!
//! Values are stored as 32-bit floats (typical encoder output width) and
//! widened to 64-bit in memory; writing quantizes accordingly.

use crate::batch::EmbeddingBatch;
use crate::error::{Error, Result};
use std::fs;
use std::path::Path;

use super::atomic_write;

pub const BINARY_MAGIC: &[u8; 4] = b"ARSN";
pub const TEXT_MAGIC: &str = "arsn text v1";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Binary,
    Text,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Binary => "binary",
            Format::Text => "text",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "binary" => Ok(Format::Binary),
            "text" => Ok(Format::Text),
            other => Err(Error::FileFormat {
                message: format!("unknown embedding format '{other}' (expected binary or text)"),
            }),
        }
    }
}

/// Sniff a file's format from its leading magic bytes.
pub fn detect_format(path: &Path) -> Result<Format> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(BINARY_MAGIC) {
        Ok(Format::Binary)
    } else if bytes.starts_with(b"arsn") {
        Ok(Format::Text)
    } else {
        Err(Error::FileFormat {
            message: format!("{}: not an embedding file (bad magic)", path.display()),
        })
    }
}

pub fn read_embeddings(path: &Path, format: Format) -> Result<EmbeddingBatch> {
    let bytes = fs::read(path)?;
    match format {
        Format::Binary => decode_binary(&bytes),
        Format::Text => decode_text(std::str::from_utf8(&bytes).map_err(|_| Error::FileFormat {
            message: "text embedding file is not valid UTF-8".to_string(),
        })?),
    }
}

pub fn write_embeddings(batch: &EmbeddingBatch, path: &Path, format: Format) -> Result<()> {
    let bytes = match format {
        Format::Binary => encode_binary(batch),
        Format::Text => encode_text(batch).into_bytes(),
    };
    atomic_write(path, &bytes)
}

fn encode_binary(batch: &EmbeddingBatch) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + batch.as_slice().len() * 4);
    out.extend_from_slice(BINARY_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(batch.rows() as u32).to_le_bytes());
    out.extend_from_slice(&(batch.cols() as u32).to_le_bytes());
    for &v in batch.as_slice() {
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
    out
}

fn decode_binary(bytes: &[u8]) -> Result<EmbeddingBatch> {
    if bytes.len() < 16 {
        return Err(Error::FileFormat {
            message: "binary embedding file shorter than its 16-byte header".to_string(),
        });
    }
    if &bytes[0..4] != BINARY_MAGIC {
        return Err(Error::FileFormat {
            message: "bad magic; expected ARSN".to_string(),
        });
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    let version = word(4);
    if version != FORMAT_VERSION {
        return Err(Error::FileFormat {
            message: format!("unsupported format version {version} (expected {FORMAT_VERSION})"),
        });
    }
    let rows = word(8) as usize;
    let cols = word(12) as usize;
    if rows == 0 || cols == 0 {
        return Err(Error::FileFormat {
            message: format!("header declares empty shape {rows}x{cols}"),
        });
    }
    let expected = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| Error::FileFormat {
            message: "declared shape overflows".to_string(),
        })?;
    let payload = &bytes[16..];
    if payload.len() != expected {
        return Err(Error::FileFormat {
            message: format!(
                "payload is {} bytes but header {rows}x{cols} requires {expected}",
                payload.len()
            ),
        });
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, chunk) in payload.chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(Error::FileFormat {
                message: format!("non-finite value at row {}, column {}", i / cols, i % cols),
            });
        }
        data.push(v as f64);
    }
    EmbeddingBatch::from_flat(rows, cols, data)
}

fn encode_text(batch: &EmbeddingBatch) -> String {
    let mut out = format!("{TEXT_MAGIC} {} {}\n", batch.rows(), batch.cols());
    for row in batch.iter_rows() {
        let mut first = true;
        for &v in row {
            if !first {
                out.push(',');
            }
            out.push_str(&format!("{}", v as f32));
            first = false;
        }
        out.push('\n');
    }
    out
}

fn decode_text(text: &str) -> Result<EmbeddingBatch> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::FileFormat {
        message: "empty text embedding file".to_string(),
    })?;
    let rest = header.strip_prefix(TEXT_MAGIC).ok_or_else(|| Error::FileFormat {
        message: format!("bad header '{header}'; expected '{TEXT_MAGIC} <rows> <cols>'"),
    })?;
    let dims: Vec<&str> = rest.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::FileFormat {
            message: format!("bad header '{header}'; expected '{TEXT_MAGIC} <rows> <cols>'"),
        });
    }
    let parse_dim = |s: &str, what: &str| -> Result<usize> {
        s.parse::<usize>().map_err(|_| Error::FileFormat {
            message: format!("header {what} '{s}' is not a non-negative integer"),
        })
    };
    let rows = parse_dim(dims[0], "row count")?;
    let cols = parse_dim(dims[1], "column count")?;
    if rows == 0 || cols == 0 {
        return Err(Error::FileFormat {
            message: format!("header declares empty shape {rows}x{cols}"),
        });
    }

    let mut data = Vec::with_capacity(rows * cols);
    let mut row_count = 0;
    for (r, line) in lines.enumerate() {
        if r >= rows {
            return Err(Error::FileFormat {
                message: format!("more data rows than the declared {rows}"),
            });
        }
        let values: Vec<&str> = line.split(',').collect();
        if values.len() != cols {
            return Err(Error::FileFormat {
                message: format!("row {r} has {} values, expected {cols}", values.len()),
            });
        }
        for (c, raw) in values.iter().enumerate() {
            let v: f32 = raw.trim().parse().map_err(|_| Error::FileFormat {
                message: format!("row {r}, column {c}: '{raw}' is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::FileFormat {
                    message: format!("non-finite value at row {r}, column {c}"),
                });
            }
            data.push(v as f64);
        }
        row_count += 1;
    }
    if row_count != rows {
        return Err(Error::FileFormat {
            message: format!("found {row_count} data rows, header declares {rows}"),
        });
    }
    EmbeddingBatch::from_flat(rows, cols, data)
}
