//! Segmented sieve of Eratosthenes over odd numbers.
//!
//! The table keeps one bit per odd integer (bit `i` stands for `2i + 1`), so
//! primes up to `2^33` fit in 512 MiB. Segments are sieved independently and
//! may be spread over worker threads; each segment owns a disjoint slice of
//! the bitmap, so the result does not depend on the schedule.

use crate::bits::{bitmap_bytes, Bits, MemoryBudget};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct SieveConfig {
    /// Bytes of bitmap handled per segment; rounded down to whole words.
    pub segment_bytes: usize,
    pub threads: usize,
    pub budget: MemoryBudget,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_bytes: 1 << 20,
            threads: 1,
            budget: MemoryBudget::default(),
        }
    }
}

/// All primes up to `limit`.
#[derive(Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    odd: Bits,
}

impl std::fmt::Debug for PrimeTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PrimeTable")
            .field("limit", &self.limit)
            .field("count", &self.count())
            .finish()
    }
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn contains(&self, n: u64) -> bool {
        if n > self.limit || n < 2 {
            return false;
        }
        if n == 2 {
            return true;
        }
        n & 1 == 1 && self.odd.get(n >> 1)
    }

    /// Number of primes `<= x` (clamped to the table limit).
    pub fn count_up_to(&self, x: u64) -> u64 {
        let x = x.min(self.limit);
        if x < 2 {
            return 0;
        }
        // odd n <= x have indices 0..=(x-1)/2
        1 + self.odd.count_below((x - 1) / 2 + 1)
    }

    pub fn count(&self) -> u64 {
        self.count_up_to(self.limit)
    }

    /// Primes in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.iter_range(2, self.limit)
    }

    /// Primes `p` with `lo <= p <= hi`, ascending.
    pub fn iter_range(&self, lo: u64, hi: u64) -> impl Iterator<Item = u64> + '_ {
        let hi = hi.min(self.limit);
        let two = (lo <= 2 && hi >= 2).then_some(2);
        let (start, end) = if hi < 3 {
            (0, 0)
        } else {
            (lo.max(3) / 2, hi.saturating_sub(1) / 2 + 1)
        };
        two.into_iter()
            .chain(self.odd.iter_range(start, end).map(|i| 2 * i + 1))
    }
}

pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    sieve_primes_with(limit, &SieveConfig::default())
}

pub fn sieve_primes_with(limit: u64, config: &SieveConfig) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::domain(format!("sieve limit must be >= 2, got {limit}")));
    }
    let bits_len = limit / 2 + 1; // odd numbers 1, 3, ..., <= limit (plus slack)
    config
        .budget
        .check("prime sieve bitmap", bitmap_bytes(bits_len))?;

    let base = small_odd_primes(isqrt(limit));
    let mut odd = Bits::new(bits_len);
    let seg_words = (config.segment_bytes / 8).max(1);
    let threads = config.threads.max(1);
    {
        let words = odd.words_mut();
        if threads == 1 {
            for (si, chunk) in words.chunks_mut(seg_words).enumerate() {
                sieve_segment(chunk, (si * seg_words) as u64 * 64, bits_len, &base);
            }
        } else {
            let mut segments: Vec<(usize, &mut [u64])> = words.chunks_mut(seg_words).enumerate().collect();
            let per = segments.len().div_ceil(threads);
            std::thread::scope(|scope| {
                while !segments.is_empty() {
                    let take = per.min(segments.len());
                    let batch: Vec<_> = segments.drain(..take).collect();
                    let base = &base;
                    scope.spawn(move || {
                        for (si, chunk) in batch {
                            sieve_segment(chunk, (si * seg_words) as u64 * 64, bits_len, base);
                        }
                    });
                }
            });
        }
    }
    Ok(PrimeTable { limit, odd })
}

/// Sieve the odd-index range `[first, first + 64 * chunk.len())`, clipped to `len`.
fn sieve_segment(chunk: &mut [u64], first: u64, len: u64, base: &[u64]) {
    chunk.fill(!0);
    let end = (first + 64 * chunk.len() as u64).min(len);
    // clear bits past the end of the table
    for i in end..first + 64 * chunk.len() as u64 {
        let local = i - first;
        chunk[(local >> 6) as usize] &= !(1 << (local & 63));
    }
    if first == 0 {
        chunk[0] &= !1; // 1 is not prime
    }
    let lo_n = 2 * first + 1;
    for &p in base {
        let p2 = p * p;
        if p2 > 2 * (end - 1) + 1 {
            break;
        }
        // first odd multiple of p that is >= max(p^2, lo_n)
        let mut m = if p2 >= lo_n {
            p2
        } else {
            let k = lo_n.div_ceil(p);
            let k = if k % 2 == 0 { k + 1 } else { k };
            k * p
        };
        let mut idx = m / 2;
        while idx < end {
            let local = idx - first;
            chunk[(local >> 6) as usize] &= !(1 << (local & 63));
            m += 2 * p;
            idx = m / 2;
        }
    }
}

/// Odd primes up to `n` by a plain sieve; used for the base primes.
fn small_odd_primes(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 3;
    while i <= n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out
}

/// Floor of the square root, exact for all `u64`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn primes_to_ten() {
        let t = sieve_primes(10).unwrap();
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![2, 3, 5, 7]);
    }

    #[test]
    fn hundred_has_25_primes() {
        let oracle = (1..=100).filter(|&n| trial_division(n)).count() as u64;
        assert_eq!(oracle, 25);
        assert_eq!(sieve_primes(100).unwrap().count(), oracle);
    }

    #[test]
    fn small_limits() {
        assert_eq!(sieve_primes(2).unwrap().iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!(sieve_primes(3).unwrap().iter().collect::<Vec<_>>(), vec![2, 3]);
        assert!(sieve_primes(1).is_err());
    }

    #[test]
    fn segment_size_and_threads_do_not_matter() {
        let reference = sieve_primes(1 << 18).unwrap();
        for (seg, threads) in [(8, 1), (24, 3), (4096, 2), (1 << 20, 4)] {
            let cfg = SieveConfig {
                segment_bytes: seg,
                threads,
                ..SieveConfig::default()
            };
            assert_eq!(sieve_primes_with(1 << 18, &cfg).unwrap(), reference);
        }
    }

    #[test]
    fn range_iteration_and_membership() {
        let t = sieve_primes(1000).unwrap();
        let got: Vec<u64> = t.iter_range(90, 110).collect();
        assert_eq!(got, vec![97, 101, 103, 107, 109]);
        assert!(t.contains(997));
        assert!(!t.contains(999));
        assert!(!t.contains(1009)); // beyond the limit
        assert_eq!(t.count_up_to(10), 4);
    }

    #[test]
    fn over_budget_is_a_resource_error() {
        let cfg = SieveConfig {
            budget: MemoryBudget(1024),
            ..SieveConfig::default()
        };
        let err = sieve_primes_with(1 << 20, &cfg).unwrap_err();
        assert!(matches!(err, Error::Resource { budget: 1024, .. }));
    }

    #[test]
    fn isqrt_exact_near_squares() {
        for r in [0u64, 1, 2, 3, 1 << 16, (1 << 32) - 1] {
            let sq = r * r;
            assert_eq!(isqrt(sq), r);
            if sq > 0 {
                assert_eq!(isqrt(sq - 1), r - 1);
            }
        }
        assert_eq!(isqrt(u64::MAX), (1 << 32) - 1);
    }
}
