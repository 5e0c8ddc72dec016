use num_complex::Complex64;

use super::gamma::weight_factor_bounds;
use super::TERM_BUDGET;
use crate::error::{Error, Result};
use crate::numeric::{power_tail_bracket, EPS};
use crate::result::{ComplexEvalResult, EvalResult, Method};

const UNIT_SLACK: f64 = 1e-14;

/// Φ*_ν(z, s, a) at relative tolerance 1e-15.
pub fn hurwitz_lerch_phi_star(
    z: Complex64,
    s: f64,
    a: Complex64,
    nu: f64,
) -> Result<ComplexEvalResult> {
    hurwitz_lerch_phi_star_tol(z, s, a, nu, 1e-15)
}

/// Φ*_ν(z, s, a) = Σ_{n≥0} (ν)_n/n! · zⁿ/(n+a)^s for |z| ≤ 1.
///
/// On the unit circle the guard s - ν > 1 is checked before summing.
/// Inside the disc the remainder is bounded by a geometric ratio majorant;
/// on the circle by the integral test, as a two-sided bracket when z = 1
/// and a > 0.
pub fn hurwitz_lerch_phi_star_tol(
    z: Complex64,
    s: f64,
    a: Complex64,
    nu: f64,
    tol: f64,
) -> Result<ComplexEvalResult> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::invalid(format!("Φ*: ν must be positive, got {nu}")));
    }
    if !s.is_finite() || !z.is_finite() || !a.is_finite() {
        return Err(Error::invalid("Φ*: arguments must be finite"));
    }
    let az = z.norm();
    if az > 1.0 + UNIT_SLACK {
        return Err(Error::Domain(format!("Φ*: |z| = {az} > 1")));
    }
    if a.im == 0.0 && a.re <= 0.0 && a.re == a.re.floor() {
        return Err(Error::Domain(format!(
            "Φ*: a = {} is a non-positive integer",
            a.re
        )));
    }
    let on_circle = az >= 1.0 - UNIT_SLACK;
    if on_circle && !(s - nu > 1.0) {
        return Err(Error::guard("s-nu>1 on |z|=1", format!("s={s}, ν={nu}")));
    }
    if z == Complex64::new(0.0, 0.0) {
        let v = a.powf(-s);
        return Ok(EvalResult::new(
            v,
            4.0 * EPS * v.norm(),
            1,
            Method::SpecialFunction,
        ));
    }
    let exact_one = z == Complex64::new(1.0, 0.0) && a.im == 0.0 && a.re > 0.0 && s > 0.0;
    let abs_a = a.norm();
    let p = s - nu + 1.0;

    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0f64;
    let mut term_err = 0.0f64;
    let mut w = 1.0f64;
    let mut zpow = Complex64::new(1.0, 0.0);
    let mut n = 0usize;
    let (tail_mid, tail_half) = loop {
        let nf = n as f64;
        if n > 0 {
            w *= (nu + nf - 1.0) / nf;
            zpow *= z;
        }
        let base = a + nf;
        let t = zpow * w * base.powf(-s);
        // Neumaier on each component
        let new = sum + t;
        let fix = |s: f64, t: f64, n: f64| {
            if s.abs() >= t.abs() {
                (s - n) + t
            } else {
                (t - n) + s
            }
        };
        comp += Complex64::new(fix(sum.re, t.re, new.re), fix(sum.im, t.im, new.im));
        sum = new;
        let tn = t.norm();
        abs_sum += tn;
        term_err += tn
            * EPS
            * (8.0 + 3.0 * nf + 4.0 * s.abs() * (base.norm().ln().abs() + std::f64::consts::PI));
        let current = (sum + comp).norm();

        let start = (2.0 * abs_a + 2.0).ceil() as usize;
        if n >= start && n.is_multiple_of(8) {
            if !on_circle {
                let h = if s >= 0.0 {
                    ((nf + abs_a) / (nf + 1.0 - abs_a)).powf(s)
                } else {
                    ((nf + 1.0 + abs_a) / (nf - abs_a)).powf(-s)
                };
                let rho = az * (1.0f64).max((nu + nf) / (nf + 1.0)) * h * (1.0 + 1e-12);
                if rho < 1.0 {
                    let tail = tn * rho / (1.0 - rho);
                    if tail <= tol * current || tail == 0.0 {
                        break (0.0, tail);
                    }
                }
            } else {
                let (wlo, whi) = weight_factor_bounds(nu, n + 1, w * (nu + nf) / (nf + 1.0));
                if exact_one {
                    let lo = wlo * (1.0 + a.re / (nf + 1.0)).powf(-s);
                    let (tl, th) = power_tail_bracket(n, p, lo, whi);
                    let half = 0.5 * (th - tl);
                    if half <= tol * current {
                        break (0.5 * (th + tl), half);
                    }
                } else {
                    let shift = if s >= 0.0 {
                        (1.0 - abs_a / (nf + 1.0)).powf(-s)
                    } else {
                        (1.0 + abs_a / (nf + 1.0)).powf(-s)
                    };
                    let (_, th) = power_tail_bracket(n, p, 0.0, whi * shift);
                    if th <= tol * current {
                        break (0.0, th);
                    }
                }
            }
        }
        n += 1;
        if n >= TERM_BUDGET {
            return Err(Error::TermBudget {
                tol,
                achieved: f64::NAN,
                budget: TERM_BUDGET,
            });
        }
    };
    let value = sum + comp + Complex64::new(tail_mid, 0.0);
    let err = tail_half + term_err + EPS * value.norm() + 2.0 * EPS * EPS * abs_sum;
    Ok(EvalResult::new(value, err, n + 1, Method::SpecialFunction))
}
