//! Empirical checks of the product-set inequalities.

use num_bigint::BigInt;

use crate::closure::{
    bit_length_series, coefficient_series, counting_function, density, multiplicative_closure, product_set,
    DensityMode, OrderSet,
};
use crate::error::{Error, Result};

use super::series::exp_transform;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySample {
    pub x: u64,
    pub count: u64,
    pub density: f64,
}

/// Samples of `(x, count, count / x)` at strictly ascending `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurve {
    pub mode: DensityMode,
    pub samples: Vec<DensitySample>,
}

impl DensityCurve {
    pub fn sample(set: &OrderSet, xs: &[u64], mode: DensityMode) -> Result<Self> {
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("sample points must be strictly ascending"));
        }
        let samples = xs
            .iter()
            .map(|&x| {
                let d = density(set, x, mode)?;
                Ok(DensitySample {
                    x,
                    count: (d * x as f64).round() as u64,
                    density: d,
                })
            })
            .collect::<Result<_>>()?;
        Ok(DensityCurve { mode, samples })
    }

    pub fn at(&self, x: u64) -> Option<&DensitySample> {
        self.samples
            .binary_search_by_key(&x, |s| s.x)
            .ok()
            .map(|i| &self.samples[i])
    }
}

/// Members counted below each `n`, for repeated window queries.
struct PrefixCounts {
    counts: Vec<u32>,
}

impl PrefixCounts {
    fn new(set: &OrderSet) -> Self {
        let mut counts = Vec::with_capacity(set.limit() as usize + 1);
        let mut acc = 0u32;
        counts.push(0);
        for n in 1..=set.limit() {
            acc += u32::from(set.contains(n));
            counts.push(acc);
        }
        PrefixCounts { counts }
    }

    fn up_to(&self, n: u64) -> u64 {
        let n = (n as usize).min(self.counts.len() - 1);
        u64::from(self.counts[n])
    }
}

trait Counter {
    fn limit(&self) -> u64;
    fn up_to(&self, n: u64) -> u64;

    /// `|S ∩ (x/2, x]|`
    fn half_open(&self, x: u64) -> u64 {
        self.up_to(x) - self.up_to(x / 2)
    }

    /// `|S ∩ [top/2, top]|`, clipped to the limit.
    fn closed(&self, top: u64) -> u64 {
        let hi = top.min(self.limit());
        let lo = top / 2;
        if lo > hi {
            return 0;
        }
        self.up_to(hi) - self.up_to(lo.saturating_sub(1))
    }
}

impl Counter for OrderSet {
    fn limit(&self) -> u64 {
        OrderSet::limit(self)
    }

    fn up_to(&self, n: u64) -> u64 {
        self.count_up_to(n)
    }
}

impl Counter for PrefixCounts {
    fn limit(&self) -> u64 {
        self.counts.len() as u64 - 1
    }

    fn up_to(&self, n: u64) -> u64 {
        PrefixCounts::up_to(self, n)
    }
}

/// Right-hand side of the window-count product inequality:
/// `sum_{k=1..K} (b(x / 2^(k-1)) + b(x / 2^k)) * abar(2^k) / b(x)` with
/// `K = max(1, ceil(log2 x))`. `b` is the half-open window count, `abar` the
/// closed one; real anchors `x / 2^j` are replaced by their floors, which
/// select the same integers. Members of `a` above its limit are not known and
/// not counted.
pub fn window_sum_rhs(a: &OrderSet, b: &OrderSet, x: u64) -> Result<f64> {
    if x == 0 || x > a.limit() || x > b.limit() {
        return Err(Error::domain(format!(
            "x = {x} must lie in [1, min limit {}]",
            a.limit().min(b.limit())
        )));
    }
    rhs_with(a, b, x).ok_or_else(|| Error::domain(format!("b({x}) = 0, the ratio is undefined")))
}

fn rhs_with(a: &impl Counter, b: &impl Counter, x: u64) -> Option<f64> {
    let b_x = b.half_open(x);
    if b_x == 0 {
        return None;
    }
    let k_top = (64 - (x - 1).leading_zeros()).max(1);
    let mut total = 0u128;
    for k in 1..=k_top {
        let b_sum = u128::from(b.half_open(x >> (k - 1)) + b.half_open(x >> k));
        if b_sum != 0 {
            total += b_sum * u128::from(a.closed(1u64 << k));
        }
    }
    Some(total as f64 / b_x as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowViolation {
    pub x: u64,
    pub lhs: f64,
    pub rhs: f64,
}

/// Every `x` in `[1, limit]` with `b(x) > 0` where `c(x) / b(x)` exceeds
/// [`window_sum_rhs`], for `c = a * b`.
pub fn window_inequality_violations(a: &OrderSet, b: &OrderSet) -> Result<Vec<WindowViolation>> {
    let limit = a.limit().min(b.limit());
    let c = PrefixCounts::new(&product_set(a, b, limit)?);
    let (a, b) = (PrefixCounts::new(a), PrefixCounts::new(b));
    let mut out = Vec::new();
    for x in 1..=limit {
        let Some(rhs) = rhs_with(&a, &b, x) else {
            continue;
        };
        let lhs = c.half_open(x) as f64 / b.half_open(x) as f64;
        if lhs > rhs * (1.0 + 1e-12) {
            out.push(WindowViolation { x, lhs, rhs });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientViolation {
    pub n: usize,
    pub lhs: u64,
    pub rhs: u64,
}

/// Indices where `c_n > sum_{k=0..n} a_k * B(2^(n-k))` for `c = a * b`, using
/// the dyadic block series of all three sets.
pub fn coefficient_bound_violations(
    a: &OrderSet,
    b: &OrderSet,
    k_max: u32,
) -> Result<Vec<CoefficientViolation>> {
    let limit = a.limit().min(b.limit());
    let c = product_set(a, b, limit)?;
    let a_series = coefficient_series(a, k_max)?;
    let c_series = coefficient_series(&c, k_max)?;
    let b_counts: Vec<u64> = (0..=k_max).map(|k| b.count_up_to(1 << k)).collect();
    let mut out = Vec::new();
    for n in 0..=k_max as usize {
        let rhs: u64 = (0..=n).map(|k| a_series.coeffs[k] * b_counts[n - k]).sum();
        let lhs = c_series.coeffs[n];
        if lhs > rhs {
            out.push(CoefficientViolation { n, lhs, rhs });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominationViolation {
    pub n: u32,
    pub exp_partial_sum: BigInt,
    pub monoid_count: u64,
}

/// Compares the partial sums of the Exp transform of the generators'
/// bit-length series against the counting function of the monoid they
/// generate, at `2^n` for `n <= k_max`.
pub fn exp_domination_violations(generators: &[u64], k_max: u32) -> Result<Vec<DominationViolation>> {
    let limit = (2u64 << k_max) - 1;
    let gens = OrderSet::from_values(limit, generators.iter().copied().filter(|&g| g >= 2))?;
    let series = bit_length_series(&gens, k_max)?;
    let exp = exp_transform(&series, k_max as usize);
    let monoid = multiplicative_closure(gens.iter(), limit)?;
    let sums = exp.partial_sums();
    let mut out = Vec::new();
    for n in 0..=k_max {
        let count = counting_function(&monoid, 1 << n)?;
        if sums[n as usize] < BigInt::from(count) {
            out.push(DominationViolation {
                n,
                exp_partial_sum: sums[n as usize].clone(),
                monoid_count: count,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub x: u64,
    pub count_c: u64,
    pub count_b: u64,
    /// `None` when `B(x) = 0`.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
    /// Largest ratio over the top decade of the grid divided by its median.
    pub spread: f64,
    /// `spread < 2`.
    pub consistent: bool,
}

/// Tabulates `C(x) / B(x)` for `C = A * B` on `grid`. The stability flag
/// looks at grid points within a factor 10 of the largest one.
pub fn product_ratio_check(a: &OrderSet, b: &OrderSet, grid: &[u64]) -> Result<RatioReport> {
    let Some(&x_max) = grid.iter().max() else {
        return Err(Error::domain("the x grid is empty"));
    };
    let limit = a.limit().min(b.limit());
    if x_max > limit {
        return Err(Error::domain(format!(
            "grid point {x_max} exceeds the set limit {limit}"
        )));
    }
    let c = product_set(&a.restrict(x_max), &b.restrict(x_max), x_max)?;
    let rows: Vec<RatioRow> = grid
        .iter()
        .map(|&x| {
            let count_c = c.count_up_to(x);
            let count_b = b.count_up_to(x);
            RatioRow {
                x,
                count_c,
                count_b,
                ratio: (count_b > 0).then(|| count_c as f64 / count_b as f64),
            }
        })
        .collect();
    let mut top: Vec<f64> = rows
        .iter()
        .filter(|r| r.x.saturating_mul(10) >= x_max)
        .filter_map(|r| r.ratio)
        .collect();
    top.sort_by(f64::total_cmp);
    let spread = match (top.last(), top.get(top.len().saturating_sub(1) / 2)) {
        (Some(max), Some(median)) if *median > 0.0 => max / median,
        _ => f64::INFINITY,
    };
    Ok(RatioReport {
        rows,
        spread,
        consistent: spread < 2.0,
    })
}
