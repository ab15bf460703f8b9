//! Bound formulas, generating-function transforms and the empirical checks
//! run against closures.

mod bounds;
mod checks;
mod series;

pub use bounds::{
    ford_v_estimate, ford_v_exponent, iterated_logs, main_bound, main_bound_threshold, paley_bound,
    pnt_two_term, BoundParams, PaleyVariant,
};
pub use checks::{
    coefficient_bound_violations, exp_domination_violations, product_ratio_check,
    window_inequality_violations, window_sum_rhs, CoefficientViolation, DensityCurve, DensitySample,
    DominationViolation, RatioReport, RatioRow, WindowViolation,
};
pub use series::{
    exp_transform, g3_binomial_bound, growth_rate_estimate, root_growth_estimate, to_f64, ExpSeries,
};
