//! Binary matrix container.
//!
//! Layout: 8-byte magic `OPRFMAT1`, one dtype byte (`0` = f64, `1` = u8),
//! rows and cols as little-endian u64, then the row-major little-endian
//! payload. The header is validated before any payload is read.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use ndarray::Array2;

use super::write_atomic;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 8] = *b"OPRFMAT1";
pub const HEADER_LEN: u64 = 25;
/// Largest payload accepted on read (1 TiB); anything larger is treated as
/// a corrupt or hostile header.
pub const MAX_PAYLOAD_BYTES: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dtype {
    Float64,
    Uint8,
}

impl Dtype {
    pub fn code(self) -> u8 {
        match self {
            Dtype::Float64 => 0,
            Dtype::Uint8 => 1,
        }
    }

    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(Dtype::Float64),
            1 => Ok(Dtype::Uint8),
            other => Err(Error::BadDtype(other)),
        }
    }

    pub fn size(self) -> u64 {
        match self {
            Dtype::Float64 => 8,
            Dtype::Uint8 => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Dtype::Float64 => "float64",
            Dtype::Uint8 => "uint8",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub dtype: Dtype,
    pub rows: u64,
    pub cols: u64,
}

impl Header {
    /// Payload size in bytes, rejecting sizes that overflow or exceed
    /// [`MAX_PAYLOAD_BYTES`] or the address space.
    pub fn payload_len(&self) -> Result<u64> {
        let overflow = || Error::DimensionOverflow {
            rows: self.rows,
            cols: self.cols,
        };
        let len = self
            .rows
            .checked_mul(self.cols)
            .and_then(|n| n.checked_mul(self.dtype.size()))
            .ok_or_else(overflow)?;
        if len > MAX_PAYLOAD_BYTES || usize::try_from(len).is_err() {
            return Err(overflow());
        }
        Ok(len)
    }

    fn shape(&self) -> (usize, usize) {
        (self.rows as usize, self.cols as usize)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixData {
    Float64(Array2<f64>),
    Uint8(Array2<u8>),
}

impl MatrixData {
    pub fn dtype(&self) -> Dtype {
        match self {
            MatrixData::Float64(_) => Dtype::Float64,
            MatrixData::Uint8(_) => Dtype::Uint8,
        }
    }

    pub fn dim(&self) -> (usize, usize) {
        match self {
            MatrixData::Float64(m) => m.dim(),
            MatrixData::Uint8(m) => m.dim(),
        }
    }

    /// Values as f64 (u8 entries widen exactly).
    pub fn into_f64(self) -> Array2<f64> {
        match self {
            MatrixData::Float64(m) => m,
            MatrixData::Uint8(m) => m.mapv(f64::from),
        }
    }
}

fn write_header<W: Write>(w: &mut W, dtype: Dtype, rows: usize, cols: usize) -> std::io::Result<()> {
    w.write_all(&MAGIC)?;
    w.write_all(&[dtype.code()])?;
    w.write_all(&(rows as u64).to_le_bytes())?;
    w.write_all(&(cols as u64).to_le_bytes())
}

pub fn write_f64<W: Write>(w: &mut W, m: &Array2<f64>) -> std::io::Result<()> {
    write_header(w, Dtype::Float64, m.nrows(), m.ncols())?;
    let mut row_buf = Vec::with_capacity(m.ncols() * 8);
    for row in m.outer_iter() {
        row_buf.clear();
        for v in row {
            row_buf.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&row_buf)?;
    }
    Ok(())
}

pub fn write_u8<W: Write>(w: &mut W, m: &Array2<u8>) -> std::io::Result<()> {
    write_header(w, Dtype::Uint8, m.nrows(), m.ncols())?;
    for row in m.outer_iter() {
        match row.as_slice() {
            Some(s) => w.write_all(s)?,
            None => w.write_all(&row.to_vec())?,
        }
    }
    Ok(())
}

pub fn read_header<R: Read>(r: &mut R) -> Result<Header> {
    let mut buf = [0u8; HEADER_LEN as usize];
    let mut got = 0;
    while got < buf.len() {
        match r.read(&mut buf[got..])? {
            0 => break,
            n => got += n,
        }
    }
    if got < 8 || buf[..8] != MAGIC {
        let mut magic = [0u8; 8];
        magic[..got.min(8)].copy_from_slice(&buf[..got.min(8)]);
        return Err(Error::BadMagic(magic));
    }
    if got < buf.len() {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            found: got as u64,
        });
    }
    let dtype = Dtype::from_code(buf[8])?;
    let rows = u64::from_le_bytes(buf[9..17].try_into().expect("8 bytes"));
    let cols = u64::from_le_bytes(buf[17..25].try_into().expect("8 bytes"));
    let header = Header { dtype, rows, cols };
    header.payload_len()?;
    Ok(header)
}

/// Read a whole container from a stream.
pub fn read_matrix<R: Read>(r: &mut R) -> Result<MatrixData> {
    let header = read_header(r)?;
    read_payload(r, header)
}

fn read_payload<R: Read>(r: &mut R, header: Header) -> Result<MatrixData> {
    let expected = header.payload_len()?;
    // no up-front allocation: a lying header cannot reserve memory the
    // stream does not back
    let mut bytes = Vec::new();
    r.take(expected).read_to_end(&mut bytes)?;
    if (bytes.len() as u64) < expected {
        return Err(Error::Truncated {
            expected,
            found: bytes.len() as u64,
        });
    }
    let shape = header.shape();
    Ok(match header.dtype {
        Dtype::Float64 => {
            let values = bytes
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect();
            MatrixData::Float64(Array2::from_shape_vec(shape, values).expect("length checked"))
        }
        Dtype::Uint8 => MatrixData::Uint8(Array2::from_shape_vec(shape, bytes).expect("length checked")),
    })
}

/// Load any container; the file length is checked against the header first.
pub fn load_matrix_any(path: &Path) -> Result<MatrixData> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let file_len = file.metadata().map_err(|e| Error::io(path, e))?.len();
    let mut r = BufReader::new(file);
    let header = read_header(&mut r)?;
    let expected = header.payload_len()?;
    let available = file_len.saturating_sub(HEADER_LEN);
    if available < expected {
        return Err(Error::Truncated {
            expected,
            found: available,
        });
    }
    read_payload(&mut r, header)
}

pub fn load_matrix(path: &Path) -> Result<Array2<f64>> {
    match load_matrix_any(path)? {
        MatrixData::Float64(m) => Ok(m),
        other => Err(Error::WrongDtype {
            expected: Dtype::Float64.name(),
            found: other.dtype().name(),
        }),
    }
}

pub fn load_matrix_u8(path: &Path) -> Result<Array2<u8>> {
    match load_matrix_any(path)? {
        MatrixData::Uint8(m) => Ok(m),
        other => Err(Error::WrongDtype {
            expected: Dtype::Uint8.name(),
            found: other.dtype().name(),
        }),
    }
}

pub fn save_matrix(path: &Path, m: &Array2<f64>) -> Result<()> {
    write_atomic(path, |w| write_f64(w, m))
}

pub fn save_matrix_u8(path: &Path, m: &Array2<u8>) -> Result<()> {
    write_atomic(path, |w| write_u8(w, m))
}
