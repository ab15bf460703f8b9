//! Closed-form lower bounds and density estimates.
//!
//! The `o(1)` and `O(1)` terms of the asymptotic statements are either
//! dropped or taken from [`BoundParams`]; nothing else is filled in. At
//! desk-scale `x` the iterated logarithms are small, so the exponents stay
//! well inside double precision.

use std::f64::consts::E;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub c: f64,
    pub d: f64,
    pub epsilon: f64,
    /// Stand-in for the bounded additive term in the exponent of the totient-type estimate.
    pub o1: f64,
}

impl BoundParams {
    pub const C: f64 = 0.8178;
    pub const D: f64 = 2.1769;

    pub fn with_epsilon(epsilon: f64) -> Self {
        BoundParams {
            epsilon,
            ..Self::default()
        }
    }

    pub fn with_o1(o1: f64) -> Self {
        BoundParams {
            o1,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.d.is_finite() && self.o1.is_finite()) {
            return Err(Error::domain("bound constants must be finite"));
        }
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(Error::domain(format!(
                "epsilon must be finite and >= 0, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            c: Self::C,
            d: Self::D,
            epsilon: 0.0,
            o1: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaleyVariant {
    /// `(3/4) x / log x`
    Simple,
    /// `(3/2) x / log x`
    Doubled,
}

const LEVEL_NAMES: [&str; 4] = ["log x", "log log x", "log log log x", "log log log log x"];

/// `[log x, log log x, ...]` up to `depth` levels, each required to be
/// strictly positive. The error names the first level that is not.
pub fn iterated_logs(x: f64, depth: usize) -> Result<Vec<f64>> {
    assert!((1..=LEVEL_NAMES.len()).contains(&depth));
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("x = {x} must be finite and positive")));
    }
    let mut out = Vec::with_capacity(depth);
    let mut v = x;
    for name in &LEVEL_NAMES[..depth] {
        v = v.ln();
        if v.is_nan() || v <= 0.0 {
            return Err(Error::domain(format!("{name} is not positive at x = {x} ({v})")));
        }
        out.push(v);
    }
    Ok(out)
}

pub fn paley_bound(x: f64, variant: PaleyVariant) -> Result<f64> {
    let log_x = iterated_logs(x, 1)?[0];
    let coeff = match variant {
        PaleyVariant::Simple => 0.75,
        PaleyVariant::Doubled => 1.5,
    };
    Ok(coeff * x / log_x)
}

/// `x / log x + x / log^2 x`
pub fn pnt_two_term(x: f64) -> Result<f64> {
    let l = iterated_logs(x, 1)?[0];
    Ok(x / l + x / (l * l))
}

/// `e^(e^e)`, the smallest `x` accepted by [`main_bound`] and [`ford_v_estimate`].
pub fn main_bound_threshold() -> f64 {
    E.exp().exp()
}

/// `x / log x * exp((C + eps) (log log log x)^2)` for `x >= e^(e^e)`.
pub fn main_bound(x: f64, params: &BoundParams) -> Result<f64> {
    params.validate()?;
    let threshold = main_bound_threshold();
    if x.is_nan() || x < threshold {
        return Err(Error::domain(format!(
            "main bound needs x >= e^(e^e) = {threshold:.6e}, got {x}"
        )));
    }
    let logs = iterated_logs(x, 3)?;
    let l3 = logs[2];
    Ok(x / logs[0] * ((params.c + params.epsilon) * l3 * l3).exp())
}

/// Exponent of the totient-type estimate in terms of `L3 = log log log x`
/// and `L4 = log L3`.
pub fn ford_v_exponent(l3: f64, l4: f64, params: &BoundParams) -> f64 {
    let diff = l3 - l4;
    params.c * diff * diff + params.d * l3 - (params.d + 0.5 - 2.0 * params.c) * l4 + params.o1
}

/// `x / log x * exp(ford_v_exponent(L3, L4))`; every iterated log up to
/// `L4` must be positive.
pub fn ford_v_estimate(x: f64, params: &BoundParams) -> Result<f64> {
    params.validate()?;
    let logs = iterated_logs(x, 4)?;
    Ok(x / logs[0] * ford_v_exponent(logs[2], logs[3], params).exp())
}
