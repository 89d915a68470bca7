//! Exact arithmetic in the Gaussian integers `Z[i]` and the cyclotomic field `Q(ζ16)`.

mod cyclotomic;
mod gaussian;

pub use cyclotomic::{format_rational, parse_rational, ExactScalar, DEGREE};
pub use gaussian::{gcd, gcd_many, xgcd, GaussianInt, Unit};
