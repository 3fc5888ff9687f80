//! On-disk formats.
//!
//! `GJH1` binary layout (all little-endian):
//!
//! | offset | size      | content                              |
//! |--------|-----------|--------------------------------------|
//! | 0      | 4         | magic `GJH1`                         |
//! | 4      | 4         | `u32` rows `n`                       |
//! | 8      | 4         | `u32` columns `r`                    |
//! | 12     | 4         | `u32` positive sign count `p`        |
//! | 16     | `8 n r`   | `f64` values, column-major           |
//!
//! Plain CSV matrices hold one matrix row per line.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{HsvdError, Result};
use crate::linalg::{DenseMatrix, SignatureVector};

pub const GJH1_MAGIC: &[u8; 4] = b"GJH1";
const HEADER_LEN: usize = 16;

/// A matrix together with the positive-sign count stored next to it.
#[derive(Clone, Debug, PartialEq)]
pub struct Gjh1 {
    pub matrix: DenseMatrix<f64>,
    pub p: usize,
}

impl Gjh1 {
    pub fn signature(&self) -> Result<SignatureVector> {
        SignatureVector::new(self.matrix.cols(), self.p)
    }
}

pub fn encode_gjh1(matrix: &DenseMatrix<f64>, p: usize) -> Result<Vec<u8>> {
    let dim = |v: usize| {
        u32::try_from(v).map_err(|_| HsvdError::shape(format!("dimension {v} exceeds u32")))
    };
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * matrix.as_slice().len());
    out.extend_from_slice(GJH1_MAGIC);
    out.extend_from_slice(&dim(matrix.rows())?.to_le_bytes());
    out.extend_from_slice(&dim(matrix.cols())?.to_le_bytes());
    out.extend_from_slice(&dim(p)?.to_le_bytes());
    for v in matrix.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_gjh1(bytes: &[u8], origin: &Path) -> Result<Gjh1> {
    if bytes.len() < HEADER_LEN {
        return Err(HsvdError::format(origin, "shorter than the 16-byte header"));
    }
    if &bytes[..4] != GJH1_MAGIC {
        return Err(HsvdError::format(origin, "bad magic, expected GJH1"));
    }
    let word = |k: usize| {
        let off = 4 + 4 * k;
        u32::from_le_bytes(bytes[off..off + 4].try_into().unwrap()) as usize
    };
    let (n, r, p) = (word(0), word(1), word(2));
    if p > r {
        return Err(HsvdError::format(origin, format!("p = {p} exceeds r = {r}")));
    }
    let expected = n
        .checked_mul(r)
        .and_then(|c| c.checked_mul(8))
        .and_then(|c| c.checked_add(HEADER_LEN))
        .ok_or_else(|| HsvdError::format(origin, "dimensions overflow"))?;
    if bytes.len() != expected {
        return Err(HsvdError::format(
            origin,
            format!("{} bytes, expected {expected} for {n}x{r}", bytes.len()),
        ));
    }
    let data = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Gjh1 {
        matrix: DenseMatrix::from_col_major(n, r, data)?,
        p,
    })
}

pub fn write_gjh1(path: impl AsRef<Path>, matrix: &DenseMatrix<f64>, p: usize) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_gjh1(matrix, p)?;
    fs::write(path, bytes).map_err(|e| HsvdError::io(path, e))
}

pub fn read_gjh1(path: impl AsRef<Path>) -> Result<Gjh1> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| HsvdError::io(path, e))?;
    decode_gjh1(&bytes, path)
}

/// Writes one matrix row per line. Values use the shortest representation
/// that parses back to the same `f64`.
pub fn write_matrix_csv(path: impl AsRef<Path>, m: &DenseMatrix<f64>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for i in 0..m.rows() {
        let line: Vec<String> = (0..m.cols()).map(|j| m[(i, j)].to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| HsvdError::io(path, e))
}

pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<DenseMatrix<f64>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| HsvdError::io(path, e))?;
    let mut rows = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| HsvdError::io(path, e))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| HsvdError::format(path, format!("line {}: {e}", lineno + 1)))?;
        rows.push(row);
    }
    DenseMatrix::from_rows(&rows).map_err(|_| HsvdError::format(path, "rows differ in length"))
}

pub fn write_vector_csv(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    let path = path.as_ref();
    let mut f = fs::File::create(path).map_err(|e| HsvdError::io(path, e))?;
    for x in v {
        writeln!(f, "{x}").map_err(|e| HsvdError::io(path, e))?;
    }
    Ok(())
}

pub fn read_vector_csv(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let m = read_matrix_csv(path.as_ref())?;
    if m.cols() > 1 {
        return Err(HsvdError::format(path.as_ref(), "expected one value per line"));
    }
    Ok(m.into_vec())
}
