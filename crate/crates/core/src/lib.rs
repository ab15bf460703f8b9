//! Hadamard matrix orders: construction families, closures under the
//! Kronecker and `8ab` / `16abcd` product rules, density curves and the
//! asymptotic bound formulas they are compared against.

pub mod analysis;
pub mod arith;
mod bits;
pub mod closure;
pub mod constructions;
pub mod figure;
pub mod verify;

mod error;

pub use bits::MemoryBudget;
pub use error::{Error, Result};

pub use closure::{
    brute_force_closure, coefficient_series, counting_function, density, multiplicative_closure, product_set,
    rule_closure, window_counts, ClosureRules, CoefficientSeries, DensityMode, OrderSet,
};
