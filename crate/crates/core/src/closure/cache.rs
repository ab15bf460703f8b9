//! On-disk cache of an [`OrderSet`].
//!
//! Layout, all integers little-endian:
//!
//! | bytes | field |
//! |-------|-------|
//! | 4 | magic `HORD` |
//! | 2 | version |
//! | 8 | limit |
//! | 1 | rules (bit 0 kron, bit 1 r2, bit 2 r4) |
//! | 8 | generator-config hash |
//! | `ceil(limit/8)` | bitmap, bit `n - 1` of the body stands for `n` |
//! | 8 | XXH64 (seed 0) of the bitmap body |

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use twox_hash::XxHash64;

use crate::error::{Error, Result};

use super::engine::ClosureRules;
use super::order_set::OrderSet;

pub const CACHE_MAGIC: [u8; 4] = *b"HORD";
pub const CACHE_VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 8 + 1 + 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheFile {
    pub rules: ClosureRules,
    pub config_hash: u64,
    pub set: OrderSet,
}

/// Stable hash of a textual generator configuration.
pub fn config_hash(description: &str) -> u64 {
    XxHash64::oneshot(0, description.as_bytes())
}

pub fn write_cache(path: &Path, set: &OrderSet, rules: ClosureRules, config_hash: u64) -> Result<()> {
    let body = set.to_body_bytes();
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&set.limit().to_le_bytes())?;
    w.write_all(&[rules.to_byte()])?;
    w.write_all(&config_hash.to_le_bytes())?;
    w.write_all(&body)?;
    w.write_all(&XxHash64::oneshot(0, &body).to_le_bytes())?;
    w.flush()?;
    Ok(())
}

/// Reads and validates a cache file (magic, version, size, checksum).
pub fn read_cache(path: &Path) -> Result<CacheFile> {
    let mut r = BufReader::new(File::open(path)?);
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)
        .map_err(|_| Error::Cache("file shorter than the header".into()))?;
    if header[..4] != CACHE_MAGIC {
        return Err(Error::Cache("bad magic, not an order-set cache".into()));
    }
    let version = u16::from_le_bytes([header[4], header[5]]);
    if version != CACHE_VERSION {
        return Err(Error::Cache(format!(
            "unsupported version {version}, expected {CACHE_VERSION}"
        )));
    }
    let limit = u64::from_le_bytes(header[6..14].try_into().expect("8 bytes"));
    let rules = ClosureRules::from_byte(header[14])
        .ok_or_else(|| Error::Cache(format!("invalid rules byte {:#04x}", header[14])))?;
    let config_hash = u64::from_le_bytes(header[15..23].try_into().expect("8 bytes"));
    if limit > super::MAX_LIMIT {
        return Err(Error::Cache(format!("limit {limit} out of range")));
    }

    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    let body_len = limit.div_ceil(8) as usize;
    if rest.len() != body_len + 8 {
        return Err(Error::Cache(format!(
            "expected {} bytes after the header, found {}",
            body_len + 8,
            rest.len()
        )));
    }
    let (body, trailer) = rest.split_at(body_len);
    let stored = u64::from_le_bytes(trailer.try_into().expect("8 bytes"));
    if XxHash64::oneshot(0, body) != stored {
        return Err(Error::Cache("checksum mismatch".into()));
    }
    let set = OrderSet::from_body_bytes(limit, body)?;
    Ok(CacheFile {
        rules,
        config_hash,
        set,
    })
}
