use num_complex::Complex64;

use super::{SequenceSpec, SeriesParams};
use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, EPS};
use crate::result::{EvalResult, Method};
use crate::specfun::{
    hurwitz_lerch_phi_star_tol, ln_gamma, mittag_leffler_tol, MittagLefflerParams,
};

/// Σ_{n≥1} (ν)_n/n! · zⁿ · a_n^{-λ} for a_n = Γ(γn+δ), from one
/// β-Mittag-Leffler value. Returns (value, abs error).
fn gamma_power_sum(nu: f64, gamma: f64, delta: f64, lambda: f64, z: f64) -> Result<(f64, f64)> {
    if nu == 1.0 {
        // z · E_{λ,γ,γ+δ}(z) needs no subtraction
        let p = MittagLefflerParams::new(lambda, gamma, gamma + delta, 1.0)?;
        let e = mittag_leffler_tol(&p, z, 1e-17)?;
        return Ok((
            z * e.value,
            z.abs() * e.abs_error_bound + EPS * (z * e.value).abs(),
        ));
    }
    let p = MittagLefflerParams::new(lambda, gamma, delta, nu)?;
    let e = mittag_leffler_tol(&p, z, 1e-17)?;
    let first = (-lambda * ln_gamma(delta)).exp();
    let value = e.value - first;
    let err = e.abs_error_bound + 2.0 * EPS * (first + e.value.abs());
    Ok((value, err))
}

/// The series for a_n = Γ(γn+δ) through the binomial expansion in r²:
///
/// S = 2 Σ_m C(μ+m-1, m)(-r²)^m Σ_{n≥1} (ν)_n zⁿ/(n! a_n^{(μ+m)α-β}).
///
/// The outer series converges for r² < min_n a_n^α; it is cut at `m_max`
/// or once its geometric tail bound falls below `tol`/2.
pub fn eval_via_mittag_leffler(
    params: &SeriesParams,
    seq: &SequenceSpec,
    m_max: usize,
    tol: f64,
) -> Result<EvalResult> {
    params.validate()?;
    seq.validate()?;
    let (gamma, delta) = match seq {
        SequenceSpec::GammaArithmetic { gamma, delta } => (*gamma, *delta),
        _ => {
            return Err(Error::invalid(
                "the Mittag-Leffler route needs a_n = Γ(γn+δ)",
            ))
        }
    };
    if !(tol > 0.0) {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let lambda0 = params.mu * params.alpha - params.beta;
    if !(lambda0 > 0.0) {
        return Err(Error::guard(
            "mu*alpha>beta",
            format!("μα-β = {lambda0} must be positive"),
        ));
    }
    if params.z == 0.0 {
        return Ok(EvalResult::new(0.0, 0.0, 1, Method::MittagLeffler));
    }
    // min_n a_n^α: Γ(γn+δ) increases once γn+δ passes the gamma minimum
    let mut ln_min = f64::INFINITY;
    let mut n = 1usize;
    loop {
        let x = gamma * n as f64 + delta;
        ln_min = ln_min.min(ln_gamma(x));
        if x > 1.5 {
            break;
        }
        n += 1;
    }
    let rho_a = (params.alpha * ln_min).exp();
    let r2 = params.r * params.r;
    let q = r2 / rho_a;
    if !(q < 1.0) {
        return Err(Error::guard(
            "r^2<min a_n^alpha",
            format!("outer binomial series diverges: r² = {r2} ≥ {rho_a}"),
        ));
    }
    let (zeta0, _) = gamma_power_sum(params.nu, gamma, delta, lambda0, params.z.abs())?;

    let mut acc = CompensatedSum::new();
    let mut inner_err = 0.0f64;
    // C(μ+m-1, m)
    let mut binom = 1.0f64;
    let mut r2m = 1.0f64;
    let mut m = 0usize;
    let tail = loop {
        let lambda = lambda0 + m as f64 * params.alpha;
        let (v, e) = gamma_power_sum(params.nu, gamma, delta, lambda, params.z)?;
        let coef = if m.is_multiple_of(2) {
            binom * r2m
        } else {
            -binom * r2m
        };
        acc.add(2.0 * coef * v);
        inner_err += 2.0 * coef.abs() * e + 4.0 * EPS * (m as f64 + 1.0) * (2.0 * coef * v).abs();
        let mf = m as f64;
        let next_binom = binom * (params.mu + mf) / (mf + 1.0);
        let ratio = q * (1.0f64).max((params.mu + mf + 1.0) / (mf + 2.0));
        let tail = if ratio < 1.0 {
            2.0 * zeta0 * next_binom * q.powf(mf + 1.0) / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        if tail <= 0.5 * tol || m >= m_max {
            break tail;
        }
        binom = next_binom;
        r2m *= r2;
        m += 1;
    };
    let err = tail + inner_err + acc.rounding_bound();
    Ok(EvalResult::new(
        acc.value(),
        err,
        m + 1,
        Method::MittagLeffler,
    ))
}

/// S_{2,ν}^{(2,1)}(r, {n}; z) = [Φ*_ν(z, 2, -ir) - Φ*_ν(z, 2, ir)] / (2ir)
/// for |z| < 1. The imaginary part of the quotient must vanish to `tol`.
pub fn eval_phi_star_difference(nu: f64, r: f64, z: f64, tol: f64) -> Result<EvalResult> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::invalid(format!("ν must be positive, got {nu}")));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("r must be positive, got {r}")));
    }
    if !(z.abs() < 1.0) {
        return Err(Error::guard("|z|<1", format!("z = {z}")));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if z == 0.0 {
        return Ok(EvalResult::new(0.0, 0.0, 1, Method::PhiStar));
    }
    let zc = Complex64::new(z, 0.0);
    let rel = (tol * r).min(1e-15);
    let minus = hurwitz_lerch_phi_star_tol(zc, 2.0, Complex64::new(0.0, -r), nu, rel)?;
    let plus = hurwitz_lerch_phi_star_tol(zc, 2.0, Complex64::new(0.0, r), nu, rel)?;
    let q = (minus.value - plus.value) / Complex64::new(0.0, 2.0 * r);
    let err = (minus.abs_error_bound + plus.abs_error_bound) / (2.0 * r) + 2.0 * EPS * q.norm();
    let residual = q.im.abs();
    if residual > tol {
        return Err(Error::ImaginaryResidual { residual, tol });
    }
    Ok(EvalResult::new(
        q.re,
        err,
        minus.terms_used + plus.terms_used,
        Method::PhiStar,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::eval_series;

    fn gamma_seq() -> SequenceSpec {
        SequenceSpec::GammaArithmetic {
            gamma: 1.0,
            delta: 1.0,
        }
    }

    #[test]
    fn mittag_leffler_route_matches_series() {
        let p = SeriesParams::new(2.0, 1.0, 2.0, 1.0, 0.5, 0.5).unwrap();
        let ml = eval_via_mittag_leffler(&p, &gamma_seq(), 200, 1e-13).unwrap();
        let s = eval_series(&p, &gamma_seq(), 1e-14).unwrap();
        assert!((ml.value - s.value).abs() <= ml.abs_error_bound + s.abs_error_bound);
        assert!((ml.value - 0.696_513_890_668_595_446_018_192_6).abs() < 1e-13);

        let p = SeriesParams::new(1.5, 0.5, 1.5, 2.5, 0.7, -0.6).unwrap();
        let seq = SequenceSpec::GammaArithmetic {
            gamma: 1.5,
            delta: 0.5,
        };
        let ml = eval_via_mittag_leffler(&p, &seq, 200, 1e-12).unwrap();
        let s = eval_series(&p, &seq, 1e-12).unwrap();
        assert!((ml.value - s.value).abs() <= ml.abs_error_bound + s.abs_error_bound);
    }

    #[test]
    fn outer_truncation_is_cauchy() {
        let p = SeriesParams::new(2.0, 1.0, 2.0, 1.0, 0.8, 0.5).unwrap();
        let a = eval_via_mittag_leffler(&p, &gamma_seq(), 6, 1e-30).unwrap();
        let b = eval_via_mittag_leffler(&p, &gamma_seq(), 11, 1e-30).unwrap();
        assert!((a.value - b.value).abs() <= a.abs_error_bound);
    }

    #[test]
    fn outer_divergence_is_a_guard() {
        let p = SeriesParams::new(2.0, 1.0, 2.0, 1.0, 1.2, 0.5).unwrap();
        let e = eval_via_mittag_leffler(&p, &gamma_seq(), 50, 1e-10).unwrap_err();
        assert!(e.is_parameter_error());
    }

    #[test]
    fn zero_radius_keeps_first_block() {
        let p = SeriesParams::new(2.0, 1.0, 2.0, 1.0, 0.0, 0.5).unwrap();
        let ml = eval_via_mittag_leffler(&p, &gamma_seq(), 50, 1e-14).unwrap();
        assert_eq!(ml.terms_used, 1);
        let s = eval_series(&p, &gamma_seq(), 1e-13).unwrap();
        assert!((ml.value - s.value).abs() < 1e-14);
    }

    #[test]
    fn phi_star_route_matches_series() {
        for (nu, r, z) in [(1.0, 1.0, 0.5), (2.0, 0.5, 0.9), (1.5, 2.0, -0.5)] {
            let d = eval_phi_star_difference(nu, r, z, 1e-12).unwrap();
            let p = SeriesParams::new(2.0, 1.0, 2.0, nu, r, z).unwrap();
            let s = eval_series(&p, &SequenceSpec::index(), 1e-13).unwrap();
            assert!(
                (d.value - s.value).abs() < 1e-12,
                "{nu} {r} {z}: {} vs {}",
                d.value,
                s.value
            );
            assert!((d.value - s.value).abs() <= d.abs_error_bound + s.abs_error_bound);
        }
        assert_eq!(
            eval_phi_star_difference(1.0, 1.0, 0.0, 1e-12)
                .unwrap()
                .value,
            0.0
        );
    }
}
