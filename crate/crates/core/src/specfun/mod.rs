//! Scalar special functions: gamma family, zeta, Hurwitz-Lerch Φ*,
//! Fox-Wright ₁Ψ₁, ₚF_q, Bessel J and the β-Mittag-Leffler family.
//!
//! Series-defined functions return an [`EvalResult`](crate::EvalResult)
//! whose error bound covers truncation, rounding and cancellation.

mod bessel;
mod exact;
mod fox_wright;
mod gamma;
mod hurwitz_lerch;
mod hypergeometric;
mod mittag_leffler;
mod zeta;

pub use bessel::bessel_j;
pub use fox_wright::{fox_wright_11, fox_wright_11_tol, FoxWright11Params};
pub use gamma::{gamma, gamma_sign, ln_gamma, ln_gamma_abs, ln_gamma_ratio, pochhammer};
pub use hurwitz_lerch::{hurwitz_lerch_phi_star, hurwitz_lerch_phi_star_tol};
pub use hypergeometric::{hypergeometric_pfq, hypergeometric_pfq_tol, HypergeometricParams};
pub use mittag_leffler::{mittag_leffler, mittag_leffler_tol, MittagLefflerParams};
pub use zeta::{hurwitz_zeta, riemann_zeta};

pub(crate) use gamma::{weight_factor_bounds, GAMMA_REL_ERR};

/// Default relative truncation tolerance for the series-defined functions.
pub const DEFAULT_TOL: f64 = 1e-16;

/// Largest tolerated Σ|terms| / |sum| when terms are accumulated in f64.
pub const F64_CANCELLATION_LIMIT: f64 = 1e12;

/// Hard cap on terms for any single special-function series.
pub(crate) const TERM_BUDGET: usize = 2_000_000;
