//! Segmented sieve and the on-disk prime cache (u64 LE count, then u64 LE primes).

use crate::error::{Error, Result};
use std::fs;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const SEGMENT: u64 = 1 << 18;

fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// All primes p ≤ limit, in order.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    sieve_segments(limit, |p| {
        out.push(p);
        true
    });
    out
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let limit = nth_prime_upper_bound(count as u64);
    sieve_segments(limit, |p| {
        out.push(p);
        out.len() < count
    });
    out
}

/// p_n ≤ n(log n + log log n) for n ≥ 6.
pub fn nth_prime_upper_bound(n: u64) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
}

// calls `f` on each prime ≤ limit until it returns false
fn sieve_segments(limit: u64, mut f: impl FnMut(u64) -> bool) {
    if limit < 2 {
        return;
    }
    let root = ((limit as f64).sqrt() as u64 + 1).min(limit);
    let base = small_primes(root);
    let mut mark = vec![false; SEGMENT as usize];
    let mut lo = 2u64;
    while lo <= limit {
        let hi = (lo + SEGMENT - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        mark[..len].iter_mut().for_each(|m| *m = false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut j = (p * p).max(lo.div_ceil(p) * p);
            while j <= hi {
                mark[(j - lo) as usize] = true;
                j += p;
            }
        }
        for (i, &m) in mark[..len].iter().enumerate() {
            if !m && !f(lo + i as u64) {
                return;
            }
        }
        lo = hi + 1;
    }
}

/// Writes the cache file atomically.
pub fn write_cache(path: &Path, primes: &[u64]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        w.write_all(&(primes.len() as u64).to_le_bytes())?;
        for p in primes {
            w.write_all(&p.to_le_bytes())?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads a cache file, checking its length against the header.
pub fn read_cache(path: &Path) -> Result<Vec<u64>> {
    let mut r = BufReader::new(fs::File::open(path)?);
    let mut word = [0u8; 8];
    r.read_exact(&mut word)?;
    let n = u64::from_le_bytes(word);
    let expected = 8 + 8 * n;
    let actual = fs::metadata(path)?.len();
    if actual != expected {
        return Err(Error::Io(format!("prime cache {}: {actual} bytes, header says {expected}", path.display())));
    }
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        r.read_exact(&mut word)?;
        out.push(u64::from_le_bytes(word));
    }
    Ok(out)
}

/// The first `count` primes, from the cache when it is long enough. A short
/// or missing cache is rebuilt and rewritten.
pub fn load_or_build(cache: Option<&Path>, count: usize) -> Result<Vec<u64>> {
    if let Some(path) = cache {
        if path.exists() {
            let mut v = read_cache(path)?;
            if v.len() >= count {
                v.truncate(count);
                return Ok(v);
            }
        }
        let v = first_primes(count);
        write_cache(path, &v)?;
        return Ok(v);
    }
    Ok(first_primes(count))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
        assert_eq!(first_primes(5), vec![2, 3, 5, 7, 11]);
    }

    #[test]
    fn counts() {
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
        let p = first_primes(250_000);
        assert_eq!(p.len(), 250_000);
        assert_eq!(*p.last().unwrap(), 3_497_861);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.bin");
        let a = load_or_build(Some(&path), 1000).unwrap();
        assert_eq!(fs::metadata(&path).unwrap().len(), 8 + 8 * 1000);
        assert_eq!(read_cache(&path).unwrap(), a);
        assert_eq!(load_or_build(Some(&path), 10).unwrap(), a[..10].to_vec());
        let b = load_or_build(Some(&path), 2000).unwrap();
        assert_eq!(&b[..1000], &a[..]);
    }
}
