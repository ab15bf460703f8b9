//! Number-theoretic kernels: primes, prime powers, squareful numbers,
//! binary digit counts, partition numbers.

mod partitions;
mod primality;
mod sieve;

pub use partitions::{hardy_ramanujan_estimate, hardy_ramanujan_ratio, partition_count, PartitionCache};
pub use primality::is_prime_u64;
pub use sieve::{isqrt, sieve_primes, sieve_primes_with, PrimeTable, SieveConfig};

use crate::error::{Error, Result};

/// Floor of the `k`-th root of `n`, by integer search only.
pub fn iroot(n: u64, k: u32) -> u64 {
    assert!(k >= 1);
    if k == 1 || n < 2 {
        return n;
    }
    if k >= 64 {
        return 1;
    }
    // 2^(ceil(64/k)) is an upper bound on the root
    let mut lo = 1u64;
    let mut hi = 1u64 << (64 / k + 1).min(32);
    if k == 2 {
        hi = 1 << 32;
    }
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if pow_le(mid, k, n) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Whether `base^k <= n`, without overflow.
fn pow_le(base: u64, k: u32, n: u64) -> bool {
    let mut acc: u64 = 1;
    for _ in 0..k {
        match acc.checked_mul(base) {
            Some(v) if v <= n => acc = v,
            _ => return false,
        }
    }
    true
}

/// `Some((p, k))` when `n = p^k` for a prime `p`.
pub fn prime_power(n: u64) -> Result<Option<(u64, u32)>> {
    if n < 2 {
        return Err(Error::domain(format!("prime_power needs n >= 2, got {n}")));
    }
    let max_k = 63 - n.leading_zeros();
    for k in 1..=max_k {
        let r = iroot(n, k);
        if r < 2 {
            break;
        }
        if r.checked_pow(k) == Some(n) && is_prime_u64(r) {
            return Ok(Some((r, k)));
        }
    }
    Ok(None)
}

/// Whether `n` is a prime power (`n >= 2`); `false` below 2.
pub fn is_prime_power(n: u64) -> bool {
    matches!(prime_power(n), Ok(Some(_)))
}

/// True iff every prime dividing `n` divides it at least twice. `1` qualifies.
pub fn is_squareful(n: u64) -> bool {
    assert!(n >= 1, "is_squareful is defined for n >= 1");
    let mut m = n;
    let mut d = 2u64;
    while d.saturating_mul(d) <= m {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            if e < 2 {
                return false;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    // leftover cofactor is a prime appearing once
    m == 1
}

/// Number of one bits of an odd `g`.
pub fn binary_digit_count(g: u64) -> Result<u32> {
    if g % 2 == 0 {
        return Err(Error::domain(format!(
            "binary digit count applies to odd g only, got {g}"
        )));
    }
    Ok(g.count_ones())
}

/// Even `m <= x` with both `m - 1` and `m/2 - 1` prime: orders that both
/// Paley residue classes can reach.
pub fn sophie_germain_overlap(x: u64) -> Result<u64> {
    if x < 4 {
        return Err(Error::domain(format!("overlap needs x >= 4, got {x}")));
    }
    let primes = sieve_primes(x)?;
    Ok(sophie_germain_overlap_with(x, &primes))
}

pub fn sophie_germain_overlap_with(x: u64, primes: &PrimeTable) -> u64 {
    primes
        .iter_range(2, x.saturating_sub(1))
        .filter(|&p| {
            let m = p + 1;
            m % 2 == 0 && m / 2 >= 3 && primes.contains(m / 2 - 1)
        })
        .count() as u64
}
