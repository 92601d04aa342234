//! Arbitrary-precision complex arithmetic, truncated multivariate power
//! series and dense determinants.

pub mod combin;
mod matrix;
mod scalar;
mod series;

pub use matrix::{series_determinant, ScalarMatrix};
pub use scalar::{product_or, sum_or, Precision, Scalar};
pub use series::{sine_taylor, univariate_mul, MultiSeries};
