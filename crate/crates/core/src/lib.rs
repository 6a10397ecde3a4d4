//! Exact counts of representations as sums of squares, r_k(m), together with
//! the saddle-point asymptotic `r_n(an + b) ~ B * A^n / sqrt(n)`.
//!
//! - [`qseries`]: exact truncated q-series over big integers; `r_k(m)` is the
//!   coefficient of `q^m` in `theta^k`.
//! - [`oracle`]: independent slow counts used to check [`qseries`].
//! - [`saddle`]: the saddle point `y` of `q^(-a) theta` on the imaginary axis
//!   and the constants `A`, `B`.
//! - [`asymptotic`]: log-scale evaluation of `B * A^n / sqrt(n)` and the
//!   exact-vs-estimate comparison table.
//! - [`quadrature`]: trapezoid-rule coefficient extraction along a horizontal
//!   period at height `y`.

pub mod asymptotic;
pub mod error;
pub mod highprec;
pub mod oracle;
pub mod qseries;
pub mod quadrature;
pub mod saddle;

pub use asymptotic::{compare_table, estimate, exact_to_logscale, ComparisonRow, LogScaleValue};
pub use error::{Error, Result};
pub use highprec::HighPrecReal;
pub use qseries::{mul_truncated, pow_truncated, r_k, theta_series, BigCoeffSeries, Convolution};
pub use saddle::{constants, solve_saddle, SaddleData};
