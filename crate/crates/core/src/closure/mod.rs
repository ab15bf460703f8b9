//! Monoid closures of Hadamard orders and the counting functions read off them.

mod cache;
mod engine;
mod oracle;
mod order_set;

pub use cache::{config_hash, read_cache, write_cache, CacheFile, CACHE_MAGIC, CACHE_VERSION};
pub use engine::{
    min_tree_order, multiplicative_closure, rule_closure, rule_closure_of, rule_savings, ClosureRules,
};
pub use oracle::{brute_force_closure, ORACLE_LIMIT};
pub use order_set::{OrderSet, MAX_LIMIT};

use std::str::FromStr;

use crate::error::{Error, Result};

/// Which members a density counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DensityMode {
    /// Only members `>= 4`, the convention of the plotted figure.
    #[default]
    From4,
    /// Every member, `A(x) / x`.
    All,
}

impl FromStr for DensityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "from4" => Ok(DensityMode::From4),
            "all" => Ok(DensityMode::All),
            other => Err(Error::domain(format!("unknown density mode '{other}'"))),
        }
    }
}

fn check_x(set: &OrderSet, x: u64) -> Result<()> {
    if x > set.limit() {
        return Err(Error::domain(format!(
            "x = {x} exceeds the set limit {}",
            set.limit()
        )));
    }
    Ok(())
}

/// `A(x)`: members `<= x`.
pub fn counting_function(set: &OrderSet, x: u64) -> Result<u64> {
    check_x(set, x)?;
    Ok(set.count_up_to(x))
}

/// `(|A ∩ (x/2, x]|, |A ∩ [x/2, x]|)`.
pub fn window_counts(set: &OrderSet, x: u64) -> Result<(u64, u64)> {
    check_x(set, x)?;
    let open = set.count_up_to(x) - set.count_up_to(x / 2);
    let closed = if x % 2 == 0 && x > 0 && set.contains(x / 2) {
        open + 1
    } else {
        open
    };
    Ok((open, closed))
}

pub fn density(set: &OrderSet, x: u64, mode: DensityMode) -> Result<f64> {
    if x == 0 {
        return Err(Error::domain("density needs x >= 1"));
    }
    check_x(set, x)?;
    let count = match mode {
        DensityMode::All => set.count_up_to(x),
        DensityMode::From4 => set.count_up_to(x) - set.count_up_to(3.min(x)),
    };
    Ok(count as f64 / x as f64)
}

/// `{ab : a ∈ A, b ∈ B, ab <= limit}`.
pub fn product_set(a: &OrderSet, b: &OrderSet, limit: u64) -> Result<OrderSet> {
    let mut out = OrderSet::new(limit)?;
    // walk the sparser set on the outside
    let (outer, inner) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    for x in outer.iter_range(1, limit) {
        let bound = limit / x;
        for y in inner.iter_range(1, bound) {
            out.insert(x * y);
        }
    }
    Ok(out)
}

/// Counts of members per dyadic block: `a_0 = A(1)`, `a_k = A(2^k) - A(2^(k-1))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSeries {
    pub coeffs: Vec<u64>,
}

impl CoefficientSeries {
    pub fn new(coeffs: Vec<u64>) -> Self {
        CoefficientSeries { coeffs }
    }

    pub fn k_max(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Running sums `a_0 + ... + a_k`.
    pub fn partial_sums(&self) -> Vec<u64> {
        self.coeffs
            .iter()
            .scan(0u64, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect()
    }
}

fn check_k_max(set: &OrderSet, k_max: u32, top: u32) -> Result<()> {
    if k_max >= 63 || (1u64 << (k_max + top)) - u64::from(top) > set.limit() {
        return Err(Error::domain(format!(
            "k_max = {k_max} needs members up to 2^{} but the limit is {}",
            k_max + top,
            set.limit()
        )));
    }
    Ok(())
}

/// `a_k = A(2^k) - A(2^(k-1))` for `k = 0..=k_max` (with `A(1/2) = 0`).
pub fn coefficient_series(set: &OrderSet, k_max: u32) -> Result<CoefficientSeries> {
    check_k_max(set, k_max, 0)?;
    let mut coeffs = Vec::with_capacity(k_max as usize + 1);
    let mut prev = 0;
    for k in 0..=k_max {
        let cur = set.count_up_to(1 << k);
        coeffs.push(cur - prev);
        prev = cur;
    }
    Ok(CoefficientSeries { coeffs })
}

/// Members grouped by `floor(log2 n)`: `a_k = |A ∩ [2^k, 2^(k+1))|`.
///
/// This is the grouping under which a product of members of groups `i` and
/// `j` lands in group `<= i + j`, which the Exp-transform comparison needs.
pub fn bit_length_series(set: &OrderSet, k_max: u32) -> Result<CoefficientSeries> {
    check_k_max(set, k_max, 1)?;
    let coeffs = (0..=k_max)
        .map(|k| set.count_up_to((2u64 << k) - 1) - set.count_up_to((1u64 << k) - 1))
        .collect();
    Ok(CoefficientSeries { coeffs })
}
