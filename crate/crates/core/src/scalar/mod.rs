//! Exact scalars: rationals, Gaussian rationals, and truncated power series in `t`.

mod gaussian;
mod rational;
mod series;

pub use gaussian::{GaussianRational, Scalar};
pub use rational::Rational;
pub use series::TruncatedSeries;
