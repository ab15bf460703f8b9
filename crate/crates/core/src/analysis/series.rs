use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::closure::CoefficientSeries;
use crate::error::{Error, Result};

fn binomial(n: i64, k: i64) -> BigUint {
    if k < 0 || n < k {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `sum_{k >= 1} C(n - 2k + 1, k) + C(n - 2k, k)`, binomials with a negative or
/// too small upper argument counting as zero.
pub fn g3_binomial_bound(n: u64) -> BigUint {
    let n = n as i64;
    (1..=n / 2 + 1)
        .map(|k| binomial(n - 2 * k + 1, k) + binomial(n - 2 * k, k))
        .sum()
}

/// Power-series coefficients of `exp(a(z) + a(z^2)/2 + a(z^3)/3 + ...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpSeries {
    pub coeffs: Vec<BigRational>,
}

impl ExpSeries {
    /// Coefficients rounded to the nearest integer.
    pub fn rounded(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|c| c.round().to_integer()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn partial_sums(&self) -> Vec<BigInt> {
        let mut acc = BigInt::zero();
        self.rounded()
            .into_iter()
            .map(|c| {
                acc += c;
                acc.clone()
            })
            .collect()
    }
}

/// Exp transform through degree `k_max`. The constant term `a_0` is ignored:
/// a weight-zero generator would have unbounded multiplicity.
///
/// Uses `n e_n = sum_{k=1..n} s_k e_{n-k}` with `s_k = sum_{d | k} d a_d`,
/// which follows from differentiating the logarithm.
pub fn exp_transform(series: &CoefficientSeries, k_max: usize) -> ExpSeries {
    let a = |d: usize| -> BigInt {
        series
            .coeffs
            .get(d)
            .map_or_else(BigInt::zero, |&v| BigInt::from(v))
    };
    let s: Vec<BigInt> = (0..=k_max)
        .map(|k| {
            if k == 0 {
                return BigInt::zero();
            }
            (1..=k)
                .filter(|d| k % d == 0)
                .map(|d| BigInt::from(d) * a(d))
                .sum()
        })
        .collect();
    let mut e: Vec<BigRational> = Vec::with_capacity(k_max + 1);
    e.push(BigRational::one());
    for n in 1..=k_max {
        let mut acc = BigRational::zero();
        for k in 1..=n {
            if !s[k].is_zero() {
                acc += BigRational::from_integer(s[k].clone()) * &e[n - k];
            }
        }
        e.push(acc / BigRational::from_integer(BigInt::from(n)));
    }
    ExpSeries { coeffs: e }
}

/// Finite-sample growth rate: the ratio-test quotient
/// `(a_K / a_m)^(1 / (K - m))` across the top half of the indices, where `K`
/// is the last index and `m` the first nonzero index of that window.
///
/// Needs at least 8 nonzero coefficients in the window.
pub fn growth_rate_estimate(series: &CoefficientSeries) -> Result<f64> {
    let (window, nonzero) = top_window(series)?;
    let k_last = series.coeffs.len() - 1;
    let m = window.clone().find(|&k| series.coeffs[k] != 0).expect("nonzero");
    if series.coeffs[k_last] == 0 || m == k_last || nonzero < 8 {
        return Err(Error::domain(
            "growth rate needs a nonzero last coefficient and 8 nonzero tail coefficients",
        ));
    }
    let ratio = series.coeffs[k_last] as f64 / series.coeffs[m] as f64;
    Ok(ratio.powf(1.0 / (k_last - m) as f64))
}

/// `max a_k^(1/k)` over the top half of the indices; converges to the same
/// limit as [`growth_rate_estimate`] but far more slowly when `a_k` carries
/// a polynomial factor.
pub fn root_growth_estimate(series: &CoefficientSeries) -> Result<f64> {
    let (window, _) = top_window(series)?;
    Ok(window
        .filter(|&k| k > 0)
        .map(|k| (series.coeffs[k] as f64).powf(1.0 / k as f64))
        .fold(0.0, f64::max))
}

fn top_window(series: &CoefficientSeries) -> Result<(std::ops::Range<usize>, usize)> {
    let len = series.coeffs.len();
    let start = len / 2;
    let nonzero = series.coeffs[start..].iter().filter(|&&c| c != 0).count();
    if nonzero < 8 {
        return Err(Error::domain(format!(
            "growth rate needs at least 8 nonzero tail coefficients, found {nonzero}"
        )));
    }
    Ok((start..len, nonzero))
}

/// `ExpSeries` coefficient as an `f64`, for reporting.
pub fn to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or(f64::INFINITY)
}
