//! Generalized Mathieu-type power series
//!
//! ```text
//! S_{μ,ν}^{(α,β)}(r, a; z) = Σ_{n≥1} 2 a_n^β (ν)_n z^n / ((a_n^α + r²)^μ n!)
//! ```
//!
//! evaluated by several independent routes (certified direct summation,
//! Fox-Wright / hypergeometric integral representations, Hurwitz-Lerch and
//! Mittag-Leffler identities), together with the associated discrete
//! Mathieu distribution and machine checks of the functional inequalities
//! satisfied by these series.
//!
//! Module map:
//! - [`specfun`]: gamma family, zeta, Hurwitz-Lerch Φ*, Fox-Wright ₁Ψ₁,
//!   ₚF_q, Bessel J, β-Mittag-Leffler.
//! - [`series`]: the central series with convergence guards and tail bounds.
//! - [`quadrature`]: double-exponential engine and integral representations.
//! - [`dist`]: the Mathieu distribution.
//! - [`ineq`]: inequality checks returning [`ineq::CheckReport`]s.

// `!(x > 0.0)` is used on purpose so that NaN fails parameter checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference constants keep every printed digit
#![allow(clippy::excessive_precision)]

pub mod dist;
pub mod error;
pub mod ineq;
pub(crate) mod numeric;
pub mod quadrature;
pub mod result;
pub mod series;
pub mod specfun;

pub use error::{Error, Result};
pub use result::{EvalResult, Method};
