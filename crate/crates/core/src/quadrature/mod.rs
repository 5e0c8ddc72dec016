//! Double-exponential quadrature on [0, ∞) and the integral
//! representations of the series built on it.

mod engine;
mod representations;

pub use engine::{integrate_plain, integrate_semi_infinite, Decay, Endpoints, QuadratureSpec};
pub use representations::{
    eval_charfn_integral, eval_remark3, eval_theorem1, eval_theorem1_exp, eval_theorem1_unit,
    eval_theorem2, eval_theorem2_with_kernel, theorem2_verbatim_integrand, Theorem2Kernel,
};
