//! MatrixMarket exact-integer coordinate I/O, plus the torsion-row
//! sidecar used alongside exported boundary matrices.
//!
//! Written form: header `%%MatrixMarket matrix coordinate integer
//! general`, a `rows cols nnz` line, then one `r c v` triple per line with
//! 1-based indices, sorted by column then row. The sidecar is a single
//! line `torsion-rows: i1 i2 ...` with 1-based row indices (the in-memory
//! API is 0-based).

use std::io::{BufRead, Write};
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::zlinalg::SparseIntMatrix;

const HEADER: &str = "%%MatrixMarket matrix coordinate integer general";

pub fn write_matrix_market<W: Write>(m: &SparseIntMatrix, w: &mut W) -> Result<()> {
    writeln!(w, "{HEADER}")?;
    writeln!(w, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
    let mut triples: Vec<(usize, usize, &BigInt)> =
        m.triples().map(|(r, c, v)| (c, r, v)).collect();
    triples.sort_by_key(|&(c, r, _)| (c, r));
    for (c, r, v) in triples {
        writeln!(w, "{} {} {}", r + 1, c + 1, v)?;
    }
    Ok(())
}

pub fn read_matrix_market<R: BufRead>(reader: R) -> Result<SparseIntMatrix> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty MatrixMarket file".into()))??;
    if header.trim() != HEADER {
        return Err(Error::Parse(format!(
            "unsupported MatrixMarket header {header:?}"
        )));
    }
    let mut dims: Option<(usize, usize, usize)> = None;
    let mut triples = Vec::new();
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let mut fields = t.split_whitespace();
        match dims {
            None => {
                let r = parse_field::<usize>(fields.next(), "row count")?;
                let c = parse_field::<usize>(fields.next(), "column count")?;
                let nnz = parse_field::<usize>(fields.next(), "nonzero count")?;
                dims = Some((r, c, nnz));
            }
            Some(_) => {
                let r = parse_field::<usize>(fields.next(), "row index")?;
                let c = parse_field::<usize>(fields.next(), "column index")?;
                let v = parse_field::<BigInt>(fields.next(), "value")?;
                if r == 0 || c == 0 {
                    return Err(Error::Parse("MatrixMarket indices are 1-based".into()));
                }
                triples.push((r - 1, c - 1, v));
            }
        }
    }
    let (rows, cols, nnz) = dims.ok_or_else(|| Error::Parse("missing dimension line".into()))?;
    if triples.len() != nnz {
        return Err(Error::Parse(format!(
            "nnz mismatch: header says {nnz}, found {}",
            triples.len()
        )));
    }
    SparseIntMatrix::from_triples(rows, cols, triples)
}

fn parse_field<T: FromStr>(field: Option<&str>, what: &str) -> Result<T> {
    field
        .ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse::<T>()
        .map_err(|_| Error::Parse(format!("bad {what}")))
}

/// Writes `torsion-rows: ...` with 1-based indices.
pub fn write_torsion_sidecar<W: Write>(rows_zero_based: &[usize], w: &mut W) -> Result<()> {
    write!(w, "torsion-rows:")?;
    for r in rows_zero_based {
        write!(w, " {}", r + 1)?;
    }
    writeln!(w)?;
    Ok(())
}

/// Reads the sidecar back to 0-based indices.
pub fn read_torsion_sidecar<R: BufRead>(mut reader: R) -> Result<Vec<usize>> {
    let mut line = String::new();
    reader.read_line(&mut line)?;
    let rest = line
        .trim()
        .strip_prefix("torsion-rows:")
        .ok_or_else(|| Error::Parse("missing torsion-rows prefix".into()))?;
    rest.split_whitespace()
        .map(|t| {
            let i: usize = t
                .parse()
                .map_err(|_| Error::Parse(format!("bad torsion row {t:?}")))?;
            if i == 0 {
                return Err(Error::Parse("torsion rows are 1-based".into()));
            }
            Ok(i - 1)
        })
        .collect()
}
