use serde::{Deserialize, Serialize};

use super::exact::{self, Factor};
use super::{DEFAULT_TOL, TERM_BUDGET};
use crate::error::{Error, Result};
use crate::numeric::{Dd, DD_EPS, EPS};
use crate::result::{EvalResult, Method};

/// Parameter lists of ₚF_q(numerator; denominator; x).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypergeometricParams {
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
}

impl HypergeometricParams {
    pub fn new(numerator: Vec<f64>, denominator: Vec<f64>) -> Result<Self> {
        let p = HypergeometricParams {
            numerator,
            denominator,
        };
        p.validate()?;
        Ok(p)
    }

    /// The array Δ(q; λ) = λ/q, (λ+1)/q, ..., (λ+q-1)/q.
    pub fn delta(q: usize, lambda: f64) -> Vec<f64> {
        (0..q).map(|j| (lambda + j as f64) / q as f64).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self
            .numerator
            .iter()
            .chain(&self.denominator)
            .any(|v| !v.is_finite())
        {
            return Err(Error::invalid("ₚF_q: parameters must be finite"));
        }
        if let Some(b) = self
            .denominator
            .iter()
            .find(|&&b| b <= 0.0 && b == b.floor())
        {
            return Err(Error::Domain(format!(
                "ₚF_q: denominator parameter {b} is a non-positive integer"
            )));
        }
        if self.numerator.len() > self.denominator.len() {
            return Err(Error::guard(
                "p<=q",
                format!(
                    "{}F{} diverges for x ≠ 0",
                    self.numerator.len(),
                    self.denominator.len()
                ),
            ));
        }
        Ok(())
    }
}

/// Bound on |t_{k+1}/t_k| for all k ≥ n, once n exceeds every |bⱼ|.
fn tail_ratio(params: &HypergeometricParams, n: f64, ax: f64, max_b: f64) -> Option<f64> {
    if n <= max_b {
        return None;
    }
    // each paired factor (k+|a|)/(k-|b|) decreases in k
    let mut rho = ax / (n + 1.0);
    for (i, b) in params.denominator.iter().enumerate() {
        let num = params.numerator.get(i).map_or(1.0, |a| n + a.abs());
        rho *= num / (n - b.abs());
    }
    Some(rho * (1.0 + 1e-12))
}

/// ₚF_q at the default tolerance.
pub fn hypergeometric_pfq(params: &HypergeometricParams, x: f64) -> Result<EvalResult> {
    hypergeometric_pfq_tol(params, x, DEFAULT_TOL)
}

/// Σ ∏(aᵢ)_n/∏(bⱼ)_n · xⁿ/n! for p ≤ q, with exact double-double term
/// ratios and a certified geometric tail. Sums that cancel too much for
/// double-double are redone in big-integer fixed point.
pub fn hypergeometric_pfq_tol(
    params: &HypergeometricParams,
    x: f64,
    tol: f64,
) -> Result<EvalResult> {
    params.validate()?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("ₚF_q: x must be finite, got {x}")));
    }
    let ax = x.abs();
    let max_b = params
        .denominator
        .iter()
        .fold(0.0f64, |m, b| m.max(b.abs()));
    let width = (params.numerator.len() + params.denominator.len()) as f64;

    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut abs_sum = 1.0f64;
    let mut n = 0usize;
    let mut tail = if x == 0.0 { 0.0 } else { f64::INFINITY };
    while tail > 0.0 {
        let nf = n as f64;
        if let Some(rho) = tail_ratio(params, nf, ax, max_b) {
            if rho < 1.0 {
                tail = term.to_f64().abs() * rho / (1.0 - rho);
                if tail <= tol * sum.to_f64().abs() {
                    break;
                }
            }
        }
        if n >= TERM_BUDGET {
            return Err(Error::TermBudget {
                tol,
                achieved: tail / sum.to_f64().abs(),
                budget: TERM_BUDGET,
            });
        }
        let mut num = Dd::ONE;
        for a in &params.numerator {
            num = num * (Dd::from_f64(*a) + nf);
        }
        let mut den = Dd::ONE;
        for b in &params.denominator {
            den = den * (Dd::from_f64(*b) + nf);
        }
        term = (term * num / den).mul_f64(x).div_f64(nf + 1.0);
        if !term.is_finite() {
            return Err(Error::Overflow("ₚF_q: term overflow".into()));
        }
        n += 1;
        if term.hi == 0.0 {
            // a numerator parameter hit zero: the series terminates
            tail = 0.0;
            break;
        }
        sum = sum + term;
        abs_sum += term.to_f64().abs();
    }
    let value = sum.to_f64();
    let per_term = (8.0 + 3.0 * width + 3.0 * n as f64) * DD_EPS;
    // double-double cannot resolve the sum to `tol`: redo it in fixed point
    if !(per_term * abs_sum <= tol.max(EPS) * value.abs()) {
        let ratio = abs_sum / value.abs();
        let factors = |v: &[f64]| v.iter().map(|&c| Factor { c, step: 1 }).collect::<Vec<_>>();
        let hint = exact::bits_hint(abs_sum, ratio, tol);
        let (value, err, terms) = exact::sum_rational(
            &factors(&params.numerator),
            &factors(&params.denominator),
            x,
            tol,
            hint,
            |k| tail_ratio(params, k as f64, ax, max_b),
        )?;
        return Ok(EvalResult::new(value, err, terms, Method::SpecialFunction));
    }
    let err = tail + per_term * abs_sum + EPS * value.abs();
    Ok(EvalResult::new(value, err, n + 1, Method::SpecialFunction))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pfq(num: &[f64], den: &[f64], x: f64) -> EvalResult {
        let p = HypergeometricParams::new(num.to_vec(), den.to_vec()).unwrap();
        hypergeometric_pfq(&p, x).unwrap()
    }

    #[test]
    fn zero_argument_is_one() {
        assert_eq!(pfq(&[], &[1.5], 0.0).value, 1.0);
    }

    #[test]
    fn sinc_identity() {
        for &y in &[0.3, 1.0, PI, 7.5, 20.0] {
            let r = pfq(&[], &[1.5], -y * y / 4.0);
            let expect = y.sin() / y;
            assert!((r.value - expect).abs() < 1e-14, "y={y}: {}", r.value);
            assert!((r.value - expect).abs() <= r.abs_error_bound + 1e-16);
        }
    }

    #[test]
    fn sinc_beyond_double_double() {
        for &y in &[150.0f64, 400.0] {
            let r = pfq(&[], &[1.5], -y * y / 4.0);
            let expect = y.sin() / y;
            assert!((r.value - expect).abs() < 1e-15, "y={y}: {}", r.value);
            assert!((r.value - expect).abs() <= r.abs_error_bound + 1e-17);
        }
    }

    #[test]
    fn one_f_two_reference() {
        let r = pfq(&[2.0], &[1.5, 2.0], -1.0);
        let expect = 0.454_648_713_412_840_847_698_009_9;
        assert!((r.value - expect).abs() < 1e-15);
        // reduces to ₀F₁(;3/2;-1) = sin(2)/2
        assert!((r.value - 2f64.sin() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn terminating_series() {
        // ₁F₁(-2; 1; x) = 1 - 2x + x²/2
        let x = 0.7;
        let r = pfq(&[-2.0], &[1.0], x);
        assert!((r.value - (1.0 - 2.0 * x + x * x / 2.0)).abs() < 1e-15);
        assert!(r.abs_error_bound < 1e-15);
    }

    #[test]
    fn delta_array() {
        assert_eq!(HypergeometricParams::delta(2, 3.0), vec![1.5, 2.0]);
        assert_eq!(HypergeometricParams::delta(1, 0.7), vec![0.7]);
    }

    #[test]
    fn invalid_parameters() {
        assert!(HypergeometricParams::new(vec![1.0], vec![-2.0]).is_err());
        assert!(HypergeometricParams::new(vec![1.0, 2.0], vec![3.0]).is_err());
    }
}
