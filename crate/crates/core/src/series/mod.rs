//! Direct summation of
//!
//! ```text
//! S_{μ,ν}^{(α,β)}(r, a; z) = Σ_{n≥1} 2 a_n^β (ν)_n zⁿ / ((a_n^α + r²)^μ n!)
//! ```
//!
//! with convergence guards, certified tail bounds and two alternative
//! routes (β-Mittag-Leffler expansion and a Hurwitz-Lerch difference).

mod direct;
mod routes;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::ln_gamma;

pub(crate) use direct::alternating_start;
pub use direct::{
    eval_s, eval_s_mu, eval_s_tilde, eval_series, eval_series_with_budget, DEFAULT_TERM_BUDGET,
};
pub use routes::{eval_phi_star_difference, eval_via_mittag_leffler};

/// Real parameters of the series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesParams {
    pub alpha: f64,
    /// β = 0 is admitted; then a_n^β = 1.
    pub beta: f64,
    pub mu: f64,
    pub nu: f64,
    pub r: f64,
    pub z: f64,
}

impl SeriesParams {
    pub fn new(alpha: f64, beta: f64, mu: f64, nu: f64, r: f64, z: f64) -> Result<Self> {
        let p = SeriesParams {
            alpha,
            beta,
            mu,
            nu,
            r,
            z,
        };
        p.validate()?;
        Ok(p)
    }

    /// The classical family: α = 2, β = 1, ν = 1, z = 1.
    pub fn classical(mu: f64, r: f64) -> Self {
        SeriesParams {
            alpha: 2.0,
            beta: 1.0,
            mu,
            nu: 1.0,
            r,
            z: 1.0,
        }
    }

    pub fn with_r(self, r: f64) -> Self {
        SeriesParams { r, ..self }
    }

    pub fn with_z(self, z: f64) -> Self {
        SeriesParams { z, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.alpha, self.beta, self.mu, self.nu, self.r, self.z];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "parameters must be finite: {self:?}"
            )));
        }
        if !(self.alpha > 0.0 && self.mu > 0.0 && self.nu > 0.0) {
            return Err(Error::invalid(format!(
                "α, μ, ν must be positive (α={}, μ={}, ν={})",
                self.alpha, self.mu, self.nu
            )));
        }
        if self.beta < 0.0 {
            return Err(Error::invalid(format!("β must be ≥ 0, got {}", self.beta)));
        }
        if self.r < 0.0 {
            return Err(Error::invalid(format!("r must be ≥ 0, got {}", self.r)));
        }
        if self.z.abs() > 1.0 {
            return Err(Error::invalid(format!("|z| must be ≤ 1, got z={}", self.z)));
        }
        Ok(())
    }
}

/// The positive sequence a = {a_n}, n ≥ 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SequenceSpec {
    /// a_n = n^γ.
    PowerOfIndex { gamma: f64 },
    /// a_n = Γ(γn + δ).
    GammaArithmetic { gamma: f64, delta: f64 },
    /// a_1, ..., a_L from a table; beyond L the growth a_n ≈ a_L (n/L)^e is
    /// used for tail bounding only.
    ExplicitTable {
        values: Vec<f64>,
        tail_exponent: f64,
    },
}

impl SequenceSpec {
    /// a_n = n.
    pub fn index() -> Self {
        SequenceSpec::PowerOfIndex { gamma: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceSpec::PowerOfIndex { gamma } => {
                if !(gamma.is_finite() && *gamma > 0.0) {
                    return Err(Error::invalid(format!(
                        "power sequence needs γ > 0, got {gamma}"
                    )));
                }
            }
            SequenceSpec::GammaArithmetic { gamma, delta } => {
                if !(gamma.is_finite() && *gamma > 0.0 && delta.is_finite() && *delta > 0.0) {
                    return Err(Error::invalid(format!(
                        "gamma sequence needs γ, δ > 0, got γ={gamma}, δ={delta}"
                    )));
                }
            }
            SequenceSpec::ExplicitTable { values, .. } => {
                if values.is_empty() {
                    return Err(Error::invalid("sequence table is empty"));
                }
                if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                    return Err(Error::invalid(
                        "sequence table entries must be finite and positive",
                    ));
                }
                if values.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::invalid("sequence table must be strictly increasing"));
                }
            }
        }
        Ok(())
    }

    /// ln a_n for n ≥ 1. Asking past the end of a table is an error.
    pub fn ln_a(&self, n: usize) -> Result<f64> {
        debug_assert!(n >= 1);
        match self {
            SequenceSpec::PowerOfIndex { gamma } => Ok(gamma * (n as f64).ln()),
            SequenceSpec::GammaArithmetic { gamma, delta } => {
                Ok(ln_gamma(gamma * n as f64 + delta))
            }
            SequenceSpec::ExplicitTable { values, .. } => {
                values.get(n - 1).map(|v| v.ln()).ok_or_else(|| {
                    Error::Domain(format!(
                        "sequence table has {} entries; a_{n} is not available",
                        values.len()
                    ))
                })
            }
        }
    }

    /// a_n for n ≥ 1.
    pub fn a(&self, n: usize) -> Result<f64> {
        match self {
            SequenceSpec::PowerOfIndex { gamma } => Ok((n as f64).powf(*gamma)),
            SequenceSpec::ExplicitTable { values, .. } => {
                self.ln_a(n)?;
                Ok(values[n - 1])
            }
            SequenceSpec::GammaArithmetic { .. } => Ok(self.ln_a(n)?.exp()),
        }
    }
}

/// Outcome of [`check_convergence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Converges,
    Diverges,
    Unknown,
}

/// Verdict plus the effective decay exponent p: at |z| = 1 the terms
/// behave like n^{-p}. For gamma sequences the exponent is μα - β, the
/// power of a_n in the terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub verdict: Verdict,
    pub exponent: Option<f64>,
}

/// Decides convergence of the series from its parameters alone.
pub fn check_convergence(params: &SeriesParams, seq: &SequenceSpec) -> Convergence {
    let on_circle = params.z.abs() == 1.0;
    let weight = params.mu * params.alpha - params.beta;
    let power_rule = |g: f64| {
        let p = g * weight - (params.nu - 1.0);
        let verdict = if !on_circle || p > 1.0 {
            Verdict::Converges
        } else {
            Verdict::Diverges
        };
        Convergence {
            verdict,
            exponent: Some(p),
        }
    };
    match seq {
        SequenceSpec::PowerOfIndex { gamma } => power_rule(*gamma),
        SequenceSpec::ExplicitTable { tail_exponent, .. } => {
            if tail_exponent.is_finite() && *tail_exponent > 0.0 {
                power_rule(*tail_exponent)
            } else {
                Convergence {
                    verdict: Verdict::Unknown,
                    exponent: None,
                }
            }
        }
        SequenceSpec::GammaArithmetic { .. } => {
            let verdict = if params.z == 0.0 || weight > 0.0 || (weight == 0.0 && !on_circle) {
                Verdict::Converges
            } else {
                Verdict::Diverges
            };
            Convergence {
                verdict,
                exponent: Some(weight),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergence_examples() {
        let seq = SequenceSpec::index();
        let c = check_convergence(&SeriesParams::classical(2.0, 1.0), &seq);
        assert_eq!(c.verdict, Verdict::Converges);
        assert_eq!(c.exponent, Some(3.0));
        let c = check_convergence(&SeriesParams::classical(1.0, 1.0), &seq);
        assert_eq!(c.verdict, Verdict::Diverges);
        let c = check_convergence(&SeriesParams::classical(1.0, 1.0).with_z(0.5), &seq);
        assert_eq!(c.verdict, Verdict::Converges);
    }

    #[test]
    fn guard_uses_nu() {
        // γ(μα-β) = 3 is not > ν = 3
        let p = SeriesParams::new(2.0, 1.0, 2.0, 3.0, 1.0, 1.0).unwrap();
        assert_eq!(
            check_convergence(&p, &SequenceSpec::index()).verdict,
            Verdict::Diverges
        );
        let p = SeriesParams::new(2.0, 1.0, 2.0, 2.9, 1.0, -1.0).unwrap();
        assert_eq!(
            check_convergence(&p, &SequenceSpec::index()).verdict,
            Verdict::Converges
        );
    }

    #[test]
    fn table_without_tail_is_unknown() {
        let seq = SequenceSpec::ExplicitTable {
            values: vec![1.0, 2.0],
            tail_exponent: f64::NAN,
        };
        let c = check_convergence(&SeriesParams::classical(2.0, 1.0), &seq);
        assert_eq!(c.verdict, Verdict::Unknown);
    }

    #[test]
    fn gamma_sequence_rules() {
        let seq = SequenceSpec::GammaArithmetic {
            gamma: 1.0,
            delta: 1.0,
        };
        let p = SeriesParams::new(1.0, 2.0, 2.0, 1.0, 0.5, 1.0).unwrap();
        assert_eq!(check_convergence(&p, &seq).verdict, Verdict::Diverges);
        let p = SeriesParams::new(1.0, 2.0, 2.0, 1.0, 0.5, 0.5).unwrap();
        assert_eq!(check_convergence(&p, &seq).verdict, Verdict::Converges);
        let p = SeriesParams::new(1.0, 3.0, 2.0, 1.0, 0.5, 0.5).unwrap();
        assert_eq!(check_convergence(&p, &seq).verdict, Verdict::Diverges);
    }

    #[test]
    fn table_bounds() {
        let seq = SequenceSpec::ExplicitTable {
            values: vec![1.0, 4.0],
            tail_exponent: 2.0,
        };
        assert_eq!(seq.a(2).unwrap(), 4.0);
        assert!(seq.a(3).is_err());
        let bad = SequenceSpec::ExplicitTable {
            values: vec![2.0, 1.0],
            tail_exponent: 2.0,
        };
        assert!(bad.validate().is_err());
    }
}
