//! The T3B binary tensor format.
//!
//! ```text
//! offset  size        content
//! 0       4           magic "T3B1"
//! 4       4           n1, u32 little-endian
//! 8       4           n2, u32 little-endian
//! 12      4           n3, u32 little-endian
//! 16      8*n1*n2*n3  f64 little-endian values, frontal-slice-major
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::Tensor3;
use crate::error::{Error, Result};

pub const T3B_MAGIC: [u8; 4] = *b"T3B1";

const HEADER_LEN: usize = 16;

pub fn write_t3b_to<W: Write>(mut w: W, t: &Tensor3) -> Result<()> {
    let (n1, n2, n3) = t.shape();
    w.write_all(&T3B_MAGIC)?;
    for n in [n1, n2, n3] {
        let n = u32::try_from(n)
            .map_err(|_| Error::InvalidTensor(format!("extent {n} does not fit in u32")))?;
        w.write_all(&n.to_le_bytes())?;
    }
    for v in t.as_slice() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_t3b_from<R: Read>(mut r: R) -> Result<Tensor3> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < 4 {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    let magic: [u8; 4] = bytes[..4].try_into().expect("4 bytes");
    if magic != T3B_MAGIC {
        return Err(Error::BadMagic(magic));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    let extent = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes")) as usize;
    let (n1, n2, n3) = (extent(4), extent(8), extent(12));
    let count = n1
        .checked_mul(n2)
        .and_then(|v| v.checked_mul(n3))
        .ok_or_else(|| Error::InvalidTensor("extent product overflows".into()))?;
    let expected = HEADER_LEN + 8 * count;
    if bytes.len() < expected {
        return Err(Error::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(Error::InvalidTensor(format!(
            "{} trailing bytes after payload",
            bytes.len() - expected
        )));
    }
    let data = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    Tensor3::new(n1, n2, n3, data)
}

pub fn write_t3b(path: impl AsRef<Path>, t: &Tensor3) -> Result<()> {
    write_t3b_to(BufWriter::new(File::create(path)?), t)
}

pub fn read_t3b(path: impl AsRef<Path>) -> Result<Tensor3> {
    read_t3b_from(BufReader::new(File::open(path)?))
}
