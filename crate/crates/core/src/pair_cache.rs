//! Binary cache of raw pair measures.
//!
//! Layout, all integers and floats little-endian:
//!
//! ```text
//! offset  size  field
//! 0       8     magic "ANIPAIRS"
//! 8       1     version (1)
//! 9       3     reserved, zero
//! 12      4     k (u32)
//! 16      8     record count (u64), k(k-1)/2
//! 24      28*n  records: i u32, j u32, crew f64, score f64, topic u32
//! ```
//!
//! Floats are stored at full precision so that normalizing from the cache
//! reproduces the in-memory pipeline bit for bit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::similarity::{pair_count, NormalizationStats, RawPair, RawPairs};

pub const MAGIC: &[u8; 8] = b"ANIPAIRS";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 24;
pub const RECORD_LEN: usize = 28;

fn encode(pair: &RawPair, buf: &mut [u8]) {
    buf[0..4].copy_from_slice(&pair.i.to_le_bytes());
    buf[4..8].copy_from_slice(&pair.j.to_le_bytes());
    buf[8..16].copy_from_slice(&pair.crew.to_le_bytes());
    buf[16..24].copy_from_slice(&pair.score.to_le_bytes());
    buf[24..28].copy_from_slice(&pair.topic.to_le_bytes());
}

fn decode(buf: &[u8]) -> RawPair {
    let u32_at = |o: usize| u32::from_le_bytes(buf[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(buf[o..o + 8].try_into().unwrap());
    RawPair {
        i: u32_at(0),
        j: u32_at(4),
        crew: f64_at(8),
        score: f64_at(16),
        topic: u32_at(24),
    }
}

pub fn write_pairs(mut out: impl Write, k: usize, pairs: &[RawPair]) -> Result<()> {
    let mut header = [0u8; HEADER_LEN];
    header[0..8].copy_from_slice(MAGIC);
    header[8] = VERSION;
    header[12..16].copy_from_slice(&(k as u32).to_le_bytes());
    header[16..24].copy_from_slice(&(pairs.len() as u64).to_le_bytes());
    out.write_all(&header)?;

    let mut chunk = vec![0u8; RECORD_LEN * 4096];
    for block in pairs.chunks(4096) {
        for (pair, slot) in block.iter().zip(chunk.chunks_exact_mut(RECORD_LEN)) {
            encode(pair, slot);
        }
        out.write_all(&chunk[..block.len() * RECORD_LEN])?;
    }
    Ok(())
}

pub fn save(path: &Path, raw: &RawPairs) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::with_capacity(1 << 20, file);
    write_pairs(&mut out, raw.k, &raw.pairs)?;
    out.flush().map_err(|e| Error::io(path, e))
}

/// Streaming reader over a pair cache.
pub struct PairReader<R> {
    input: R,
    k: usize,
    remaining: u64,
    buf: [u8; RECORD_LEN],
}

impl<R: Read> PairReader<R> {
    pub fn new(mut input: R) -> Result<Self> {
        let mut header = [0u8; HEADER_LEN];
        input
            .read_exact(&mut header)
            .map_err(|_| Error::format("pair cache", "truncated header"))?;
        if &header[0..8] != MAGIC {
            return Err(Error::format("pair cache", "bad magic"));
        }
        if header[8] != VERSION {
            return Err(Error::format(
                "pair cache",
                format!("unsupported version {}", header[8]),
            ));
        }
        let k = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
        let count = u64::from_le_bytes(header[16..24].try_into().unwrap());
        if count != pair_count(k) as u64 {
            return Err(Error::format(
                "pair cache",
                format!("{count} records for k = {k}"),
            ));
        }
        Ok(PairReader {
            input,
            k,
            remaining: count,
            buf: [0; RECORD_LEN],
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

impl<R: Read> Iterator for PairReader<R> {
    type Item = Result<RawPair>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(
            self.input
                .read_exact(&mut self.buf)
                .map(|()| decode(&self.buf))
                .map_err(|_| Error::format("pair cache", "truncated record")),
        )
    }
}

/// Reads a whole cache back, recomputing the normalization ranges.
pub fn load(path: &Path) -> Result<RawPairs> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = PairReader::new(BufReader::with_capacity(1 << 20, file))?;
    let k = reader.k();
    let pairs = reader.collect::<Result<Vec<_>>>()?;
    let stats = NormalizationStats::from_pairs(&pairs);
    Ok(RawPairs { k, pairs, stats })
}
