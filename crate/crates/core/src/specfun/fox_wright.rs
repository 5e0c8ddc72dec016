use serde::{Deserialize, Serialize};

use super::exact::{self, Factor};
use super::gamma::{gamma_sign, ln_gamma_abs, GAMMA_REL_ERR};
use super::{DEFAULT_TOL, F64_CANCELLATION_LIMIT, TERM_BUDGET};
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, Dd, DD_EPS, EPS};
use crate::result::{EvalResult, Method};

/// Parameters of ₁Ψ₁[(a, A); (b, B); x] = Σ Γ(a+nA)/Γ(b+nB) · xⁿ/n!.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoxWright11Params {
    pub a: f64,
    pub a_step: f64,
    pub b: f64,
    pub b_step: f64,
}

impl FoxWright11Params {
    pub fn new(a: f64, a_step: f64, b: f64, b_step: f64) -> Result<Self> {
        let p = FoxWright11Params {
            a,
            a_step,
            b,
            b_step,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite()) {
            return Err(Error::invalid("₁Ψ₁: a and b must be finite"));
        }
        if !(self.a_step > 0.0 && self.b_step > 0.0) {
            return Err(Error::invalid(format!(
                "₁Ψ₁: steps must be positive, got A={}, B={}",
                self.a_step, self.b_step
            )));
        }
        if !(1.0 + self.b_step - self.a_step > 0.0) {
            return Err(Error::guard(
                "1+B-A>0",
                format!("A={}, B={}", self.a_step, self.b_step),
            ));
        }
        Ok(())
    }

    fn small_integer_steps(&self) -> Option<(u32, u32)> {
        let as_small = |v: f64| (v == v.floor() && v <= 16.0).then_some(v as u32);
        Some((as_small(self.a_step)?, as_small(self.b_step)?))
    }
}

/// Largest k where the ratio majorant may still increase.
fn monotone_from(p: &FoxWright11Params) -> f64 {
    let (a, aa, b, bb) = (p.a, p.a_step, p.b, p.b_step);
    let ea = (a + aa) / aa;
    let eb = b / bb;
    let c2 = aa - bb - 1.0;
    let c1 = aa * (eb + 1.0) - bb * (ea + 1.0) - (ea + eb);
    let c0 = aa * eb - bb * ea - ea * eb;
    let disc = c1 * c1 - 4.0 * c2 * c0;
    let root = if disc < 0.0 {
        f64::NEG_INFINITY
    } else {
        let sq = disc.sqrt();
        ((-c1 + sq) / (2.0 * c2)).max((-c1 - sq) / (2.0 * c2))
    };
    // both ψ bounds need positive gamma arguments
    let pos_a = if a > 0.0 { 0.0 } else { -a / aa };
    let pos_b = if b > 0.0 { 0.0 } else { -b / bb };
    (root + 1e-9 * (1.0 + root.abs())).max(pos_a).max(pos_b)
}

/// Bound on |t_{k+1}/t_k| valid for every k ≥ n once n > `monotone_from`.
fn ratio_majorant(p: &FoxWright11Params, n: f64, ax: f64) -> f64 {
    let ca = p.a + p.a_step + n * p.a_step;
    let cb = p.b + n * p.b_step;
    let log = p.a_step * ca.ln() - p.b_step * (cb.ln() - 1.0 / cb);
    log.exp() * ax / (n + 1.0) * (1.0 + 1e-12)
}

/// ₁Ψ₁ at the default tolerance.
pub fn fox_wright_11(params: &FoxWright11Params, x: f64) -> Result<EvalResult> {
    fox_wright_11_tol(params, x, DEFAULT_TOL)
}

/// ₁Ψ₁[(a, A); (b, B); x] summed until a ratio majorant certifies the
/// remainder below `tol`·|sum|.
///
/// Integer steps up to 16 use exact double-double term recurrences, falling
/// back to big-integer fixed point under heavy cancellation; other steps use
/// log-gamma terms in f64, where cancellation beyond
/// [`F64_CANCELLATION_LIMIT`] is an [`Error::Precision`].
pub fn fox_wright_11_tol(params: &FoxWright11Params, x: f64, tol: f64) -> Result<EvalResult> {
    params.validate()?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("₁Ψ₁: x must be finite, got {x}")));
    }
    let (a, b) = (params.a, params.b);
    let pole = |v: f64| v <= 0.0 && v == v.floor();
    if pole(a) {
        return Err(Error::Domain(format!("₁Ψ₁: Γ(a) has a pole at a={a}")));
    }
    match params.small_integer_steps() {
        Some((ia, ib)) if !pole(b) => sum_exact(params, ia, ib, x, tol),
        _ => sum_log(params, x, tol),
    }
}

fn sum_exact(p: &FoxWright11Params, ia: u32, ib: u32, x: f64, tol: f64) -> Result<EvalResult> {
    let la = ln_gamma_abs(p.a);
    let lb = ln_gamma_abs(p.b);
    if (la - lb).abs() > 700.0 {
        return Err(Error::Overflow(format!(
            "₁Ψ₁: Γ(a)/Γ(b) out of range for a={}, b={}",
            p.a, p.b
        )));
    }
    let pref = gamma_sign(p.a) * gamma_sign(p.b) * (la - lb).exp();
    let pref_rel = 4.0 * EPS * (la.abs() + lb.abs() + 1.0) + 2.0 * GAMMA_REL_ERR;

    let kmin = monotone_from(p);
    let ax = x.abs();
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut abs_sum = 1.0f64;
    let mut n = 0usize;
    let mut tail = f64::INFINITY;
    if x == 0.0 {
        tail = 0.0;
    }
    while tail > 0.0 {
        let nf = n as f64;
        if nf > kmin {
            let rho = ratio_majorant(p, nf, ax);
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
        for j in 0..ia {
            num = num * (Dd::from_f64(p.a) + (nf * ia as f64 + j as f64));
        }
        let mut den = Dd::ONE;
        for j in 0..ib {
            den = den * (Dd::from_f64(p.b) + (nf * ib as f64 + j as f64));
        }
        term = (term * num / den).mul_f64(x).div_f64(nf + 1.0);
        if !term.is_finite() {
            return Err(Error::Overflow("₁Ψ₁: term overflow".into()));
        }
        sum = sum + term;
        abs_sum += term.to_f64().abs();
        n += 1;
        if term.hi == 0.0 {
            tail = 0.0;
        }
    }
    let s = sum.to_f64();
    let per_term = (8.0 + 3.0 * (ia + ib) as f64 + 3.0 * n as f64) * DD_EPS;
    // double-double cannot resolve the sum to `tol`: redo it in fixed point
    if !(per_term * abs_sum <= tol.max(EPS) * s.abs()) {
        let ratio = abs_sum / s.abs();
        let num = [Factor { c: p.a, step: ia }];
        let den = [Factor { c: p.b, step: ib }];
        let hint = exact::bits_hint(abs_sum, ratio, tol);
        let majorant = |k: usize| (k as f64 > kmin).then(|| ratio_majorant(p, k as f64, ax));
        let (s, err, terms) = exact::sum_rational(&num, &den, x, tol, hint, majorant)?;
        let value = pref * s;
        let err = pref.abs() * err + value.abs() * (pref_rel + EPS);
        return Ok(EvalResult::new(value, err, terms, Method::SpecialFunction));
    }
    let value = pref * s;
    let err =
        pref.abs() * (tail.min(f64::MAX) + per_term * abs_sum) + value.abs() * (pref_rel + EPS);
    Ok(EvalResult::new(value, err, n + 1, Method::SpecialFunction))
}

fn sum_log(p: &FoxWright11Params, x: f64, tol: f64) -> Result<EvalResult> {
    let kmin = monotone_from(p);
    let ax = x.abs();
    let lx = if x == 0.0 { 0.0 } else { ax.ln() };
    let mut acc = CompensatedSum::new();
    let mut term_err = 0.0f64;
    let mut ln_fact = 0.0f64;
    let mut n = 0usize;
    let mut tail;
    loop {
        let nf = n as f64;
        let ga = p.a + nf * p.a_step;
        let gb = p.b + nf * p.b_step;
        if ga <= 0.0 && ga == ga.floor() {
            return Err(Error::Domain(format!("₁Ψ₁: Γ(a+nA) pole at n={n}")));
        }
        if n > 0 {
            ln_fact += nf.ln();
        }
        let mut last = 0.0;
        // 1/Γ vanishes at the poles of the lower gamma
        if !(gb <= 0.0 && gb == gb.floor()) && (x != 0.0 || n == 0) {
            let lga = ln_gamma_abs(ga);
            let lgb = ln_gamma_abs(gb);
            let lpow = nf * lx;
            let l = lga - lgb + lpow - ln_fact;
            if l > 709.0 {
                return Err(Error::Overflow(format!("₁Ψ₁: term {n} overflows")));
            }
            let mut sign = gamma_sign(ga) * gamma_sign(gb);
            if x < 0.0 && n % 2 == 1 {
                sign = -sign;
            }
            last = sign * l.exp();
            acc.add(last);
            let rel = 4.0 * EPS * (lga.abs() + lgb.abs() + lpow.abs() + ln_fact + 1.0)
                + 3.0 * GAMMA_REL_ERR;
            term_err += last.abs() * rel;
        }
        if x == 0.0 {
            tail = 0.0;
            break;
        }
        if nf > kmin {
            let rho = ratio_majorant(p, nf, ax);
            if rho < 1.0 && last != 0.0 {
                tail = last.abs() * rho / (1.0 - rho);
                if tail <= tol * acc.value().abs() {
                    break;
                }
            }
        }
        n += 1;
        if n >= TERM_BUDGET {
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
    Ok(EvalResult::new(value, err, n + 1, Method::SpecialFunction))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn fw(a: f64, aa: f64, b: f64, bb: f64, x: f64) -> EvalResult {
        fox_wright_11(&FoxWright11Params::new(a, aa, b, bb).unwrap(), x).unwrap()
    }

    #[test]
    fn cancelling_gammas_give_exp() {
        let r = fw(2.5, 1.0, 2.5, 1.0, 1.0);
        assert!((r.value - E).abs() < 1e-15);
        for i in 0..=20 {
            let x = -5.0 + 0.5 * i as f64;
            let r = fw(1.7, 1.0, 1.7, 1.0, x);
            assert!((r.value - x.exp()).abs() <= 1e-12 * x.exp(), "x={x}");
            assert!((r.value - x.exp()).abs() <= r.abs_error_bound + 1e-16 * x.exp());
        }
    }

    #[test]
    fn heavy_cancellation_uses_fixed_point() {
        // Σ (-90)^n/n! cancels by about e^{180}
        let x = -90.0f64;
        let r = fw(1.7, 1.0, 1.7, 1.0, x);
        assert!((r.value / x.exp() - 1.0).abs() < 1e-13, "{:e}", r.value);
        assert!((r.value - x.exp()).abs() <= r.abs_error_bound);
    }

    #[test]
    fn zero_argument() {
        let r = fw(1.0, 1.0, 2.0, 1.0, 0.0);
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn extended_precision_reference() {
        // 40-digit reference from an independent arbitrary-precision sum
        let r = fw(2.0, 1.0, 3.0, 2.0, -4.0);
        let expect = 0.227_324_356_706_420_423_849_005;
        assert!((r.value - expect).abs() < 1e-15, "{}", r.value);
        assert!((r.value - expect).abs() <= r.abs_error_bound);
    }

    #[test]
    fn log_mode_matches_exact_mode() {
        // non-integer step forces the log-gamma path
        let exact = fw(2.0, 1.0, 3.0, 2.0, -4.0);
        let p = FoxWright11Params::new(2.0, 1.0 + 1e-13, 3.0, 2.0).unwrap();
        let logm = fox_wright_11(&p, -4.0).unwrap();
        assert!((exact.value - logm.value).abs() < 1e-11);
        assert!(logm.abs_error_bound < 1e-12);
    }

    #[test]
    fn cancellation_is_reported_in_f64_mode() {
        let p = FoxWright11Params::new(1.5, 0.5, 1.5, 0.5).unwrap();
        let err = fox_wright_11(&p, -60.0).unwrap_err();
        assert!(matches!(err, Error::Precision { .. }), "{err:?}");
    }

    #[test]
    fn divergent_steps_rejected() {
        assert!(FoxWright11Params::new(1.0, 3.0, 1.0, 1.0).is_err());
    }
}
