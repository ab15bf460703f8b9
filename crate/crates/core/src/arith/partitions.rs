//! Exact partition numbers and the Hardy–Ramanujan asymptotic.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

/// `p(0..=n_max)` computed once by Euler's pentagonal-number recurrence.
#[derive(Debug, Clone)]
pub struct PartitionCache {
    values: Vec<BigUint>,
}

impl PartitionCache {
    pub fn new(n_max: usize) -> Self {
        let mut values: Vec<BigInt> = Vec::with_capacity(n_max + 1);
        values.push(BigInt::from(1));
        for n in 1..=n_max {
            let mut acc = BigInt::zero();
            for k in 1usize.. {
                let g1 = k * (3 * k - 1) / 2;
                if g1 > n {
                    break;
                }
                let g2 = k * (3 * k + 1) / 2;
                let mut term = values[n - g1].clone();
                if g2 <= n {
                    term += &values[n - g2];
                }
                if k % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            values.push(acc);
        }
        let values = values
            .into_iter()
            .map(|v| {
                debug_assert!(v.sign() != Sign::Minus);
                v.magnitude().clone()
            })
            .collect();
        PartitionCache { values }
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.values.get(n)
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }
}

/// Exact number of partitions of `n`.
pub fn partition_count(n: usize) -> BigUint {
    PartitionCache::new(n).values.pop().expect("cache holds p(0)")
}

/// `exp(pi * sqrt(2n/3)) / (4 n sqrt 3)`.
pub fn hardy_ramanujan_estimate(n: u64) -> f64 {
    let n = n as f64;
    (std::f64::consts::PI * (2.0 * n / 3.0).sqrt()).exp() / (4.0 * n * 3f64.sqrt())
}

/// `p(n) / hardy_ramanujan_estimate(n)`, converting the exact value at the end.
pub fn hardy_ramanujan_ratio(n: usize) -> f64 {
    let exact = partition_count(n)
        .to_f64()
        .expect("p(n) is finite in f64 for the n this is used with");
    exact / hardy_ramanujan_estimate(n as u64)
}


#[cfg(test)]
mod dp_oracle {
    use super::*;

    /// Counts partitions by adding one allowed largest part at a time.
    fn by_largest_part(n: usize) -> BigUint {
        let mut dp = vec![BigUint::zero(); n + 1];
        dp[0] = BigUint::from(1u32);
        for part in 1..=n {
            for j in part..=n {
                let prev = dp[j - part].clone();
                dp[j] += prev;
            }
        }
        dp.pop().unwrap()
    }

    #[test]
    fn thousand_matches_dp() {
        assert_eq!(partition_count(1000), by_largest_part(1000));
    }
}
