//! Binary sketch file format, little-endian throughout:
//!
//! ```text
//! magic "KMVC" (4) | version u8 | hash id u8 | k u32 | m u32 | seed u64
//! m bucket records: count u32, then count binary64 values ascending
//! ```

use crate::error::{DecodeError, Error, Result};
use crate::hash::HashAlgorithm;
use crate::sketch::{Sketch, SketchConfig};

pub const MAGIC: [u8; 4] = *b"KMVC";
pub const FORMAT_VERSION: u8 = 1;

const HEADER_LEN: usize = 4 + 1 + 1 + 4 + 4 + 8;

impl Sketch {
    pub fn to_bytes(&self) -> Vec<u8> {
        let cfg = self.config();
        let mut out = Vec::with_capacity(HEADER_LEN + 4 * cfg.m() as usize + 8 * self.stored_len());
        out.extend_from_slice(&MAGIC);
        out.push(FORMAT_VERSION);
        out.push(cfg.hash().id());
        out.extend_from_slice(&cfg.k().to_le_bytes());
        out.extend_from_slice(&cfg.m().to_le_bytes());
        out.extend_from_slice(&cfg.seed().to_le_bytes());
        for bucket in self.buckets() {
            out.extend_from_slice(&(bucket.len() as u32).to_le_bytes());
            for v in bucket {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Sketch> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(DecodeError::BadMagic.into());
        }
        let version = r.u8()?;
        if version != FORMAT_VERSION {
            return Err(DecodeError::UnsupportedVersion(version).into());
        }
        let hash = HashAlgorithm::from_id(r.u8()?)?;
        let k = r.u32()?;
        let m = r.u32()?;
        let seed = r.u64()?;
        let config = SketchConfig::with_hash(k, m, seed, hash).map_err(|e| match e {
            Error::InvalidConfig { reason, .. } => Error::Decode(DecodeError::InvalidPayload(
                format!("k = {k}, m = {m}: {reason}"),
            )),
            other => other,
        })?;

        // every bucket record needs at least its 4-byte count
        if r.remaining() / 4 < m as usize {
            return Err(DecodeError::Truncated.into());
        }
        let mut buckets = Vec::with_capacity(m as usize);
        for i in 0..m {
            let count = r.u32()?;
            if count > k {
                return Err(DecodeError::InvalidPayload(format!(
                    "bucket {i} claims {count} values, more than k = {k}"
                ))
                .into());
            }
            if r.remaining() / 8 < count as usize {
                return Err(DecodeError::Truncated.into());
            }
            let mut bucket = Vec::with_capacity(count as usize);
            for _ in 0..count {
                bucket.push(r.f64()?);
            }
            buckets.push(bucket);
        }
        if r.remaining() > 0 {
            return Err(DecodeError::TrailingBytes(r.remaining()).into());
        }
        Sketch::from_buckets(config, buckets)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        let end = self.pos.checked_add(n).ok_or(DecodeError::Truncated)?;
        let slice = self
            .bytes
            .get(self.pos..end)
            .ok_or(DecodeError::Truncated)?;
        self.pos = end;
        Ok(slice)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N], DecodeError> {
        Ok(self.take(N)?.try_into().expect("slice length checked"))
    }

    fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, DecodeError> {
        self.array().map(u32::from_le_bytes)
    }

    fn u64(&mut self) -> Result<u64, DecodeError> {
        self.array().map(u64::from_le_bytes)
    }

    fn f64(&mut self) -> Result<f64, DecodeError> {
        self.array().map(f64::from_le_bytes)
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }
}
