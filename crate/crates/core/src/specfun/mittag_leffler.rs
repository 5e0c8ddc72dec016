use serde::{Deserialize, Serialize};

use super::gamma::{ln_gamma, GAMMA_REL_ERR};
use super::{DEFAULT_TOL, F64_CANCELLATION_LIMIT, TERM_BUDGET};
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, EPS};
use crate::result::{EvalResult, Method};

/// Parameters of E^{(τ)}_{β,ν,γ}(x) = Σ (τ)_k xᵏ / (k! Γ(νk+γ)^β).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MittagLefflerParams {
    /// Outer exponent β on the gamma factor.
    pub beta: f64,
    /// Gamma step ν.
    pub nu: f64,
    /// Gamma offset γ.
    pub gamma: f64,
    /// Pochhammer parameter τ.
    pub tau: f64,
}

impl MittagLefflerParams {
    pub fn new(beta: f64, nu: f64, gamma: f64, tau: f64) -> Result<Self> {
        let p = MittagLefflerParams {
            beta,
            nu,
            gamma,
            tau,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.beta, self.nu, self.gamma, self.tau]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "Mittag-Leffler parameters must be positive: {self:?}"
            )))
        }
    }
}

/// E^{(τ)}_{β,ν,γ}(x) at the default tolerance.
pub fn mittag_leffler(params: &MittagLefflerParams, x: f64) -> Result<EvalResult> {
    mittag_leffler_tol(params, x, DEFAULT_TOL)
}

/// Log-space summation of the β-Mittag-Leffler series with a certified
/// ratio tail.
pub fn mittag_leffler_tol(params: &MittagLefflerParams, x: f64, tol: f64) -> Result<EvalResult> {
    params.validate()?;
    if !x.is_finite() {
        return Err(Error::Domain(format!(
            "Mittag-Leffler: x must be finite, got {x}"
        )));
    }
    let MittagLefflerParams {
        beta,
        nu,
        gamma,
        tau,
    } = *params;
    let ax = x.abs();
    let lx = if x == 0.0 { 0.0 } else { ax.ln() };
    let mut acc = CompensatedSum::new();
    let mut term_err = 0.0f64;
    // ln((τ)_k / k!)
    let mut lw = 0.0f64;
    let mut k = 0usize;
    let tail;
    loop {
        let kf = k as f64;
        if k > 0 {
            lw += ((tau + kf - 1.0) / kf).ln();
        }
        let lg = ln_gamma(nu * kf + gamma);
        let l = lw + kf * lx - beta * lg;
        if l > 709.0 {
            return Err(Error::Overflow(format!(
                "Mittag-Leffler: term {k} overflows"
            )));
        }
        let sign = if x < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        let t = sign * l.exp();
        acc.add(t);
        let rel = 4.0 * EPS * (2.0 * kf + (kf * lx).abs() + beta * lg.abs() + 1.0)
            + 2.0 * beta * GAMMA_REL_ERR;
        term_err += t.abs() * rel;
        if x == 0.0 {
            tail = 0.0;
            break;
        }
        let c = nu * kf + gamma;
        let rho = (1.0f64).max((tau + kf) / (kf + 1.0))
            * ax
            * (-beta * nu * (c.ln() - 1.0 / c)).exp()
            * (1.0 + 1e-12);
        if rho < 1.0 {
            let bound = t.abs() * rho / (1.0 - rho);
            if bound <= tol * acc.value().abs() || bound == 0.0 {
                tail = bound;
                break;
            }
        }
        k += 1;
        if k >= TERM_BUDGET {
            return Err(Error::TermBudget {
                tol,
                achieved: f64::INFINITY,
                budget: TERM_BUDGET,
            });
        }
    }
    let value = acc.value();
    let ratio = acc.abs_sum() / value.abs();
    if !(ratio <= F64_CANCELLATION_LIMIT) {
        return Err(Error::Precision {
            ratio,
            limit: F64_CANCELLATION_LIMIT,
        });
    }
    let err = tail + term_err + acc.rounding_bound();
    Ok(EvalResult::new(value, err, k + 1, Method::SpecialFunction))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma;
    use std::f64::consts::E;

    fn ml(beta: f64, nu: f64, g: f64, tau: f64, x: f64) -> EvalResult {
        mittag_leffler(&MittagLefflerParams::new(beta, nu, g, tau).unwrap(), x).unwrap()
    }

    #[test]
    fn exponential_case() {
        let r = ml(1.0, 1.0, 1.0, 1.0, 1.0);
        assert!((r.value - E).abs() < 1e-14);
    }

    #[test]
    fn zero_argument() {
        let r = ml(1.7, 0.4, 2.5, 3.0, 0.0);
        let expect = gamma(2.5).powf(-1.7);
        assert!((r.value - expect).abs() < 1e-14 * expect);
    }

    #[test]
    fn references() {
        let r = ml(2.0, 1.0, 1.0, 1.0, 1.0);
        // Σ 1/(k!)² = I₀(2)
        let expect = 2.279_585_302_336_067_267_437_204;
        assert!((r.value - expect).abs() < 1e-14);
        assert!((r.value - expect).abs() <= r.abs_error_bound);
        let r = ml(1.5, 0.7, 1.2, 2.5, -0.8);
        let expect = 0.088_921_621_173_275_226_963_811_3;
        assert!((r.value - expect).abs() < 1e-14);
    }

    #[test]
    fn tau_one_matches_plain_loop() {
        for &(beta, nu, g, x) in &[
            (1.0, 0.5, 1.0, 0.9),
            (2.5, 1.3, 0.7, -1.0),
            (0.4, 2.0, 3.0, 2.0),
        ] {
            let r = ml(beta, nu, g, 1.0, x);
            let mut plain = 0.0;
            for k in 0..200 {
                let t = x.powi(k) / gamma(nu * k as f64 + g).powf(beta);
                if !t.is_finite() || t == 0.0 {
                    break;
                }
                plain += t;
            }
            assert!(
                (r.value - plain).abs() < 1e-13 * plain.abs().max(1.0),
                "{beta} {nu} {g} {x}"
            );
        }
    }
}
