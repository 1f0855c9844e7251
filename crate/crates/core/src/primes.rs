//! Prime tables, von Mangoldt jump data and small Möbius values.
//!
//! The sieve is a segmented, odd-only sieve of Eratosthenes. Segments are
//! independent once the base primes up to √limit are known, so they are
//! sieved in parallel and concatenated in segment order.
//!
//! Tables can be persisted as `primes-<limit>.ptab`:
//!
//! ```text
//! offset  size  contents
//! 0       8     magic "PTAB0001"
//! 8       8     limit, u64 little-endian
//! 16      8     count, u64 little-endian
//! 24      8*k   primes, each u64 little-endian, ascending
//! ```

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::{Error, Result};

/// Largest supported sieve limit.
pub const MAX_LIMIT: u64 = 1 << 32;

/// Odd-number flags per segment (256 KiB).
const SEGMENT_FLAGS: usize = 256 * 1024;

pub const CACHE_MAGIC: &[u8; 8] = b"PTAB0001";

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableSource {
    Fresh,
    Cache,
}

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    source: TableSource,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn source(&self) -> TableSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// π(x) for x ≤ limit.
    pub fn count_up_to(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

fn check_limit(limit: u64) -> Result<()> {
    if limit < 2 {
        return Err(Error::InvalidArgument(format!("sieve limit must be >= 2, got {limit}")));
    }
    if limit > MAX_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "sieve limit {limit} exceeds the supported ceiling 2^32"
        )));
    }
    Ok(())
}

/// Plain sieve for the base primes.
fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Sieves the odd numbers `lo + 2i` for `i < len`, `lo` odd.
fn sieve_segment(lo: u64, len: usize, base: &[u64]) -> Vec<u64> {
    let mut flags = vec![true; len];
    let hi = lo + 2 * len as u64; // exclusive
    for &p in base.iter().skip(1) {
        let sq = p * p;
        if sq >= hi {
            break;
        }
        let mut start = if sq >= lo { sq } else { lo.div_ceil(p) * p };
        if start % 2 == 0 {
            start += p;
        }
        let mut idx = ((start - lo) / 2) as usize;
        let step = p as usize;
        while idx < len {
            flags[idx] = false;
            idx += step;
        }
    }
    flags
        .iter()
        .enumerate()
        .filter(|(_, &f)| f)
        .map(|(i, _)| lo + 2 * i as u64)
        .collect()
}

/// All primes ≤ `limit`.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    check_limit(limit)?;
    let base = small_primes(isqrt(limit));

    // odd numbers 3, 5, ..., up to limit
    let odd_count = ((limit - 1) / 2) as usize;
    let segments = odd_count.div_ceil(SEGMENT_FLAGS);
    let parts: Vec<Vec<u64>> = (0..segments)
        .into_par_iter()
        .map(|seg| {
            let first = seg * SEGMENT_FLAGS;
            let len = SEGMENT_FLAGS.min(odd_count - first);
            let lo = 3 + 2 * first as u64;
            sieve_segment(lo, len, &base)
        })
        .collect();

    let total: usize = parts.iter().map(Vec::len).sum();
    let mut primes = Vec::with_capacity(total + 1);
    primes.push(2);
    for part in parts {
        primes.extend(part);
    }
    Ok(PrimeTable {
        limit,
        primes,
        source: TableSource::Fresh,
    })
}

/// Cache file name for a given limit.
pub fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("primes-{limit}.ptab"))
}

/// Writes `table` to `dir` in the `.ptab` format, returning the file path.
pub fn write_cache(dir: &Path, table: &PrimeTable) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, table.limit);
    let tmp = path.with_extension("ptab.tmp");
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&table.limit.to_le_bytes())?;
        w.write_all(&(table.primes.len() as u64).to_le_bytes())?;
        for &p in &table.primes {
            w.write_all(&p.to_le_bytes())?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Reads and validates a `.ptab` file.
pub fn read_cache(path: &Path) -> Result<PrimeTable> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode_cache(&bytes).map_err(|msg| Error::Cache(format!("{}: {msg}", path.display())))
}

fn decode_cache(bytes: &[u8]) -> std::result::Result<PrimeTable, String> {
    if bytes.len() < 24 {
        return Err(format!("truncated header ({} bytes)", bytes.len()));
    }
    if &bytes[..8] != CACHE_MAGIC {
        return Err("bad magic".into());
    }
    let word = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    let limit = word(8);
    let count = word(16);
    let body = bytes.len() - 24;
    if !body.is_multiple_of(8) || (body / 8) as u64 != count {
        return Err(format!("count {count} does not match payload of {body} bytes"));
    }
    if !(2..=MAX_LIMIT).contains(&limit) {
        return Err(format!("limit {limit} out of range"));
    }
    let primes: Vec<u64> = (0..count as usize).map(|k| word(24 + 8 * k)).collect();
    let ordered = primes.first() == Some(&2)
        && primes.windows(2).all(|w| w[0] < w[1])
        && primes.last().is_some_and(|&p| p <= limit);
    if !ordered {
        return Err("primes are not an ascending list starting at 2 within the limit".into());
    }
    Ok(PrimeTable {
        limit,
        primes,
        source: TableSource::Cache,
    })
}

/// Loads `primes-<limit>.ptab` from `dir`, or sieves and writes it.
///
/// A corrupt cache is reported through the log, then replaced by a fresh sieve.
pub fn load_or_sieve(limit: u64, dir: &Path) -> Result<PrimeTable> {
    check_limit(limit)?;
    let path = cache_path(dir, limit);
    if path.exists() {
        match read_cache(&path) {
            Ok(table) if table.limit == limit => return Ok(table),
            Ok(table) => log::warn!(
                "{}: header limit {} does not match requested {limit}; re-sieving",
                path.display(),
                table.limit
            ),
            Err(e) => log::warn!("{e}; re-sieving"),
        }
    }
    let table = sieve_primes(limit)?;
    write_cache(dir, &table)?;
    Ok(table)
}

/// Nonzero values of the von Mangoldt function up to a limit.
#[derive(Debug, Clone, PartialEq)]
pub struct MangoldtJumps {
    pub limit: u64,
    /// `(n, Λ(n))` for every prime power n ≤ limit, ascending in n.
    pub entries: Vec<(u64, f64)>,
}

/// Λ(n) = log p at every prime power n = p^w ≤ limit.
pub fn mangoldt_jumps(table: &PrimeTable) -> Result<MangoldtJumps> {
    let limit = table.limit;
    check_limit(limit)?;
    let mut entries = Vec::with_capacity(table.len() + 2 * isqrt(limit) as usize);
    for &p in &table.primes {
        let w = (p as f64).ln();
        let mut q = p;
        loop {
            entries.push((q, w));
            match q.checked_mul(p) {
                Some(next) if next <= limit => q = next,
                _ => break,
            }
        }
    }
    entries.sort_unstable_by_key(|&(n, _)| n);
    Ok(MangoldtJumps { limit, entries })
}

/// μ(k) for 1 ≤ k ≤ 64 by trial factorisation.
pub fn mobius_small(k: u32) -> Result<i8> {
    if k == 0 || k > 64 {
        return Err(Error::InvalidArgument(format!(
            "mobius_small expects 1 <= k <= 64, got {k}"
        )));
    }
    let mut n = k;
    let mut sign = 1i8;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return Ok(0);
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    Ok(sign)
}
