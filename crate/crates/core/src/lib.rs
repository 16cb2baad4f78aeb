pub mod adjunct;
pub mod error;
pub mod exterior;
pub mod floer;
pub mod grcompare;
pub mod linalg;
pub mod polyring;
pub mod report;
pub mod scalar;
pub mod suite;
pub mod sympow;

pub use error::{Error, Result};
pub use report::{Check, Entry, Report};
pub use scalar::{GaussianRational, Rational, Scalar, TruncatedSeries};
