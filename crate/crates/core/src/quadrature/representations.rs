use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::engine::{integrate_semi_infinite, Decay, Endpoints, QuadratureSpec};
use crate::error::{Error, Result};
use crate::numeric::{power_tail_bracket, CompensatedSum, EPS};
use crate::result::{ComplexEvalResult, EvalResult, Method};
use crate::series::{eval_series, SequenceSpec, SeriesParams};
use crate::specfun::{
    bessel_j, fox_wright_11_tol, hypergeometric_pfq_tol, ln_gamma, FoxWright11Params,
    HypergeometricParams,
};

/// ln(1 - z e^{-t}) for |z| ≤ 1, t > 0, accurate near t = 0 when z = 1.
fn ln_one_minus(z: f64, t: f64) -> f64 {
    let w = z * (-t).exp();
    if w.abs() < 0.5 {
        (-w).ln_1p()
    } else {
        // 1 - z e^{-t} = (1 - z) - z·expm1(-t), both terms ≥ 0 here
        ((1.0 - z) - z * (-t).exp_m1()).ln()
    }
}

/// (1 - z e^{-t})^{-ν} - 1.
fn weight(z: f64, nu: f64, t: f64) -> f64 {
    (-nu * ln_one_minus(z, t)).exp_m1()
}

/// Kernel growth rate for γα > 2 and the guard that keeps the integral finite.
fn kernel_decay(r: f64, ga: f64) -> Result<f64> {
    if ga <= 2.0 || r == 0.0 {
        return Ok(1.0);
    }
    let grow = r * (PI / ga).cos();
    if grow >= 1.0 {
        return Err(Error::guard(
            "r*cos(pi/(gamma*alpha))<1",
            format!("kernel grows like exp({grow:.4} t), the integral diverges"),
        ));
    }
    Ok(1.0 - grow.max(0.0))
}

/// Common guards of the ₁Ψ₁ and ₁F_q representations; returns s.
fn kernel_guards(params: &SeriesParams, gamma: f64) -> Result<f64> {
    params.validate()?;
    let s = gamma * (params.mu * params.alpha - params.beta);
    if !(s > 1.0) {
        return Err(Error::guard(
            "gamma*(mu*alpha-beta)>1",
            format!("γ(μα-β) = {s}"),
        ));
    }
    if params.z == 1.0 && !(s > params.nu) {
        return Err(Error::guard(
            "gamma*(mu*alpha-beta)>nu",
            format!("γ(μα-β) = {s} ≤ ν = {} at z = 1", params.nu),
        ));
    }
    Ok(s)
}

/// Integrates c·t^{s-1}[(1-ze^{-t})^{-ν} - 1]·kernel(t) over (0, ∞).
fn weighted_kernel_integral<K>(
    params: &SeriesParams,
    s: f64,
    ln_pref: f64,
    rate: f64,
    mut kernel: K,
    spec: &QuadratureSpec,
    method: Method,
) -> Result<EvalResult>
where
    K: FnMut(f64) -> Result<(f64, f64)>,
{
    if params.z == 0.0 {
        return Ok(EvalResult::new(0.0, 0.0, 0, method));
    }
    let (z, nu) = (params.z, params.nu);
    let power_at_zero = if z == 1.0 { s - 1.0 - nu } else { s - 1.0 };
    let ends = Endpoints {
        power_at_zero,
        decay: Decay::Exponential {
            rate,
            power: s - 1.0,
        },
    };
    let pref = ln_pref.exp();
    let f = |t: f64| -> Result<(f64, f64)> {
        let w = weight(z, nu, t);
        let (k, k_err) = kernel(t)?;
        let outer = pref * ((s - 1.0) * t.ln()).exp() * w;
        let v = outer * k;
        Ok((v, outer.abs() * k_err + 16.0 * EPS * (1.0 + nu) * v.abs()))
    };
    let res = integrate_semi_infinite(f, &ends, spec)?;
    Ok(res.with_method(method))
}

fn power_gamma(seq: &SequenceSpec) -> Result<f64> {
    seq.validate()?;
    match seq {
        SequenceSpec::PowerOfIndex { gamma } => Ok(*gamma),
        _ => Err(Error::invalid(
            "this integral representation needs a_n = n^γ",
        )),
    }
}

/// The series as a ₁Ψ₁-kernel integral:
///
/// ```text
/// S = 2/Γ(μ) ∫₀^∞ t^{s-1} [(1 - z e^{-t})^{-ν} - 1] ₁Ψ₁[(μ,1); (s,γα); -r² t^{γα}] dt,
/// ```
///
/// s = γ(μα - β), for a_n = n^γ.
pub fn eval_theorem1(
    params: &SeriesParams,
    seq: &SequenceSpec,
    spec: &QuadratureSpec,
) -> Result<EvalResult> {
    let gamma = power_gamma(seq)?;
    let s = kernel_guards(params, gamma)?;
    let ga = gamma * params.alpha;
    let rate = kernel_decay(params.r, ga)?;
    let fw = FoxWright11Params::new(params.mu, 1.0, s, ga)?;
    let r2 = params.r * params.r;
    let kernel = |t: f64| -> Result<(f64, f64)> {
        let x = -r2 * t.powf(ga);
        let k = fox_wright_11_tol(&fw, x, 1e-15)?;
        Ok((k.value, k.abs_error_bound))
    };
    let ln_pref = 2f64.ln() - ln_gamma(params.mu);
    weighted_kernel_integral(params, s, ln_pref, rate, kernel, spec, Method::Theorem1)
}

/// [`eval_theorem1`] on the unit circle, z = +1 or z = -1.
pub fn eval_theorem1_unit(
    params: &SeriesParams,
    seq: &SequenceSpec,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<EvalResult> {
    if z.abs() != 1.0 {
        return Err(Error::invalid(format!("z must be ±1, got {z}")));
    }
    eval_theorem1(&params.with_z(z), seq, spec)
}

/// [`eval_theorem1`] at z = e^{-x}, x > 0.
pub fn eval_theorem1_exp(
    params: &SeriesParams,
    seq: &SequenceSpec,
    x: f64,
    spec: &QuadratureSpec,
) -> Result<EvalResult> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::invalid(format!("x must be positive, got {x}")));
    }
    eval_theorem1(&params.with_z((-x).exp()), seq, spec)
}

/// The series for a_n = n^{q/α} with a ₁F_q kernel:
///
/// ```text
/// S = 2/Γ(σ) ∫₀^∞ t^{σ-1} [(1 - z e^{-t})^{-ν} - 1] ₁F_q(μ; Δ(q; σ); -r² (t/q)^q) dt,
/// ```
///
/// σ = q(μ - β/α). For q = 2 and β = 0 the kernel reduces to
/// ₀F₁(; μ + 1/2; -r²t²/4), which is used directly.
pub fn eval_remark3(q: u32, params: &SeriesParams, spec: &QuadratureSpec) -> Result<EvalResult> {
    if q == 0 {
        return Err(Error::invalid("q must be a positive integer"));
    }
    let qf = q as f64;
    let sigma = kernel_guards(params, qf / params.alpha).map_err(|e| match e {
        Error::Guard { detail, .. } if detail.starts_with("γ(μα-β) = ") => Error::guard(
            "mu-beta/alpha>1/q",
            format!(
                "q(μ-β/α) = {}",
                qf * (params.mu - params.beta / params.alpha)
            ),
        ),
        e => e,
    })?;
    let rate = kernel_decay(params.r, qf)?;
    let hp = if q == 2 && params.beta == 0.0 {
        HypergeometricParams::new(vec![], vec![params.mu + 0.5])?
    } else {
        HypergeometricParams::new(
            vec![params.mu],
            HypergeometricParams::delta(q as usize, sigma),
        )?
    };
    let r2 = params.r * params.r;
    let kernel = |t: f64| -> Result<(f64, f64)> {
        let x = -r2 * (t / qf).powi(q as i32);
        let k = hypergeometric_pfq_tol(&hp, x, 1e-15)?;
        Ok((k.value, k.abs_error_bound))
    };
    let ln_pref = 2f64.ln() - ln_gamma(sigma);
    weighted_kernel_integral(params, sigma, ln_pref, rate, kernel, spec, Method::Remark3)
}

/// Kernel choice for [`eval_theorem2_with_kernel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem2Kernel {
    /// t/√(t²-1), from the substitution u = cosh t.
    #[default]
    Corrected,
    /// t·√(t²-1); its integrand tends to a positive constant.
    Verbatim,
}

/// f_r(t) = Σ 2(a^α t² - r²)/(a^{α/2-β}(a^α t² + r²)²) for a_n = n^γ with a
/// bracketed tail. Returns (value, abs error).
fn f_r(alpha: f64, beta: f64, gamma: f64, r: f64, t: f64, rel_tol: f64) -> Result<(f64, f64)> {
    let p = gamma * (1.5 * alpha - beta);
    let ga = gamma * alpha;
    let r2 = r * r;
    let t2 = t * t;
    let mut acc = CompensatedSum::new();
    let mut n = 0usize;
    loop {
        n += 1;
        let ln_n = (n as f64).ln();
        let big_a = (ga * ln_n).exp();
        let rho = r2 / (t2 * big_a);
        let g = (-p * ln_n).exp() * 2.0 / t2 * (1.0 - rho) / ((1.0 + rho) * (1.0 + rho));
        acc.add(g);
        if n.is_multiple_of(16) {
            let rho_next = r2 / (t2 * ((n + 1) as f64).powf(ga));
            if rho_next < 1.0 {
                let lo = 2.0 / t2 * (1.0 - rho_next) / ((1.0 + rho_next) * (1.0 + rho_next));
                let (l, u) = power_tail_bracket(n, p, lo, 2.0 / t2);
                let half = 0.5 * (u - l);
                let value = acc.value() + 0.5 * (l + u);
                let rounding = acc.rounding_bound() + 4.0 * EPS * acc.abs_sum();
                if half + rounding <= rel_tol * value.abs() {
                    return Ok((value, half + rounding));
                }
            }
        }
        if n >= 50_000_000 {
            return Err(Error::TermBudget {
                tol: rel_tol,
                achieved: f64::INFINITY,
                budget: n,
            });
        }
    }
}

fn theorem2_guards(alpha: f64, beta: f64, seq: &SequenceSpec, r: f64) -> Result<f64> {
    let gamma = power_gamma(seq)?;
    if !(alpha > 0.0 && beta >= 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::invalid(format!(
            "need α > 0, β ≥ 0, got α={alpha}, β={beta}"
        )));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("r must be ≥ 0, got {r}")));
    }
    let p = gamma * (1.5 * alpha - beta);
    if !(p > 1.0) {
        return Err(Error::guard(
            "gamma*(3alpha/2-beta)>1",
            format!("f_r diverges: γ(3α/2-β) = {p}"),
        ));
    }
    Ok(gamma)
}

/// The verbatim integrand t√(t²-1) f_r(t) at one point, for diagnostics.
pub fn theorem2_verbatim_integrand(
    alpha: f64,
    beta: f64,
    seq: &SequenceSpec,
    r: f64,
    t: f64,
) -> Result<f64> {
    let gamma = theorem2_guards(alpha, beta, seq, r)?;
    if !(t > 1.0) {
        return Err(Error::Domain(format!("t must exceed 1, got {t}")));
    }
    let (f, _) = f_r(alpha, beta, gamma, r, t, 1e-12)?;
    Ok(t * (t * t - 1.0).sqrt() * f)
}

/// S^{(α,β)}_{3/2,1}(r; a, 1) = (2/π) ∫₁^∞ t/√(t²-1) f_r(t) dt.
pub fn eval_theorem2(
    alpha: f64,
    beta: f64,
    seq: &SequenceSpec,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<EvalResult> {
    eval_theorem2_with_kernel(alpha, beta, seq, r, Theorem2Kernel::Corrected, spec)
}

/// [`eval_theorem2`] with an explicit kernel. The verbatim kernel is
/// reported as [`Error::Divergent`] with its limiting integrand value.
pub fn eval_theorem2_with_kernel(
    alpha: f64,
    beta: f64,
    seq: &SequenceSpec,
    r: f64,
    kernel: Theorem2Kernel,
    spec: &QuadratureSpec,
) -> Result<EvalResult> {
    let gamma = theorem2_guards(alpha, beta, seq, r)?;
    if kernel == Theorem2Kernel::Verbatim {
        let at = theorem2_verbatim_integrand(alpha, beta, seq, r, 1e3)?;
        return Err(Error::Divergent(format!(
            "t√(t²-1) f_r(t) tends to Σ 2a_n^(β-3α/2) > 0 (value {at:.6e} at t = 1000)"
        )));
    }
    let node_tol = (1e-3 * spec.rel_tol).clamp(1e-13, 1e-6);
    // t = 1 + x
    let f = |x: f64| -> Result<(f64, f64)> {
        let t = 1.0 + x;
        let (v, e) = f_r(alpha, beta, gamma, r, t, node_tol)?;
        let k = 2.0 / PI * t / (x * (x + 2.0)).sqrt();
        Ok((k * v, k * e + 4.0 * EPS * (k * v).abs()))
    };
    let ends = Endpoints {
        power_at_zero: -0.5,
        decay: Decay::Algebraic { exponent: -2.0 },
    };
    Ok(integrate_semi_infinite(f, &ends, spec)?.with_method(Method::Theorem2))
}

/// ln(1 - w) for |w| < 1 with full relative accuracy near w = 0 and w = 1.
fn ln_one_minus_c(w: Complex64, u: f64, t: f64) -> Complex64 {
    if w.norm() < 0.5 {
        let re = 0.5 * (-2.0 * w.re + w.norm_sqr()).ln_1p();
        Complex64::new(re, (-w.im).atan2(1.0 - w.re))
    } else {
        let s = (0.5 * t).sin();
        let d_re = -(-u).exp_m1() + 2.0 * (-u).exp() * s * s;
        let d_im = -(-u).exp() * t.sin();
        Complex64::new(d_re.hypot(d_im).ln(), d_im.atan2(d_re))
    }
}

fn exp_m1_c(z: Complex64) -> Complex64 {
    let s = (0.5 * z.im).sin();
    let re = z.re.exp_m1() * z.im.cos() - 2.0 * s * s;
    Complex64::new(re, z.re.exp() * z.im.sin())
}

/// Characteristic function of the Mathieu distribution P^{(2,1)}_{μ+1,ν}(r)
/// as a Bessel-kernel integral:
///
/// ```text
/// f(t) = √π / ((2r)^{μ-1/2} Γ(μ+1) S_{μ+1,ν}^{(2,1)}(r))
///        · ∫₀^∞ u^{μ+1/2} J_{μ-1/2}(ru) [(1 - e^{it-u})^{-ν} - 1] du.
/// ```
pub fn eval_charfn_integral(
    mu: f64,
    nu: f64,
    r: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<ComplexEvalResult> {
    if !(mu > -0.5 && mu.is_finite()) {
        return Err(Error::invalid(format!("μ must exceed -1/2, got {mu}")));
    }
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::invalid(format!("ν must be positive, got {nu}")));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid(format!("r must be positive, got {r}")));
    }
    if !t.is_finite() {
        return Err(Error::invalid(format!("t must be finite, got {t}")));
    }
    if !(2.0 * mu + 1.0 > nu) {
        return Err(Error::guard(
            "2(mu+1)-1>nu",
            format!(
                "the distribution with μ+1 = {}, ν = {nu} does not normalize",
                mu + 1.0
            ),
        ));
    }
    let norm_params = SeriesParams::new(2.0, 1.0, mu + 1.0, nu, r, 1.0)?;
    // absolute tolerance relative to the first term
    let first = 2.0 * nu / (1.0 + r * r).powf(mu + 1.0);
    let norm_tol = first * (0.1 * spec.rel_tol).clamp(1e-12, 1e-6);
    let norm = eval_series(&norm_params, &SequenceSpec::index(), norm_tol)?;

    let order = mu - 0.5;
    let ln_pref =
        0.5 * PI.ln() - (mu - 0.5) * (2.0 * r).ln() - ln_gamma(mu + 1.0) - norm.value.ln();
    let pref = ln_pref.exp();
    let ends = Endpoints {
        power_at_zero: 2.0 * mu - nu,
        decay: Decay::Exponential {
            rate: 1.0,
            power: mu,
        },
    };
    let eit = Complex64::new(t.cos(), t.sin());
    let point = |u: f64| -> Result<(Complex64, f64)> {
        let w = eit * (-u).exp();
        let k = exp_m1_c(-nu * ln_one_minus_c(w, u, t));
        let b = bessel_j(order, r * u)?;
        let v = k * (pref * ((mu + 0.5) * u.ln()).exp() * b);
        Ok((v, 64.0 * EPS * (1.0 + nu) * v.norm()))
    };
    let re = integrate_semi_infinite(|u| point(u).map(|(v, e)| (v.re, e)), &ends, spec)?;
    let im = if t == 0.0 {
        EvalResult::new(0.0, 0.0, 0, Method::Quadrature)
    } else {
        integrate_semi_infinite(|u| point(u).map(|(v, e)| (v.im, e)), &ends, spec)?
    };
    let value = Complex64::new(re.value, im.value);
    let err = re.abs_error_bound
        + im.abs_error_bound
        + value.norm() * norm.abs_error_bound / norm.value
        + 8.0 * EPS * value.norm();
    Ok(EvalResult::new(
        value,
        err,
        re.terms_used + im.terms_used,
        Method::CharfnIntegral,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{eval_s_mu, eval_s_tilde};

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn close(a: &EvalResult, b: &EvalResult, tol: f64) {
        assert!(
            (a.value - b.value).abs() <= tol,
            "{} vs {} (diff {:e})",
            a.value,
            b.value,
            (a.value - b.value).abs()
        );
        assert!(a.agrees_with(b), "{a:?} vs {b:?}");
    }

    #[test]
    fn theorem1_matches_series() {
        let seq = SequenceSpec::index();
        let p = SeriesParams::new(2.0, 1.0, 2.0, 1.0, 1.0, 0.5).unwrap();
        let q = eval_theorem1(&p, &seq, &spec()).unwrap();
        let s = eval_series(&p, &seq, 1e-14).unwrap();
        close(&q, &s, 1e-8);
    }

    #[test]
    fn theorem1_zero_radius() {
        let seq = SequenceSpec::PowerOfIndex { gamma: 1.5 };
        let p = SeriesParams::new(2.0, 0.5, 1.5, 2.0, 0.0, 0.7).unwrap();
        let q = eval_theorem1(&p, &seq, &spec()).unwrap();
        let s = eval_series(&p, &seq, 1e-14).unwrap();
        close(&q, &s, 1e-8);
    }

    #[test]
    fn theorem1_alternating_matches_tilde() {
        let seq = SequenceSpec::index();
        let p = SeriesParams::new(2.0, 1.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        let q = eval_theorem1_unit(&p, &seq, -1.0, &spec()).unwrap();
        let s = eval_s_tilde(&p, &seq, 1e-13).unwrap();
        close(&q, &s, 1e-8);
        let q = eval_theorem1_unit(&p, &seq, 1.0, &spec()).unwrap();
        let s = eval_series(&p, &seq, 1e-13).unwrap();
        close(&q, &s, 1e-8);
    }

    #[test]
    fn exp_wrapper_is_a_reparameterization() {
        let seq = SequenceSpec::index();
        let p = SeriesParams::new(2.0, 1.0, 2.0, 1.5, 0.8, 0.0).unwrap();
        let a = eval_theorem1_exp(&p, &seq, 1.0, &spec()).unwrap();
        let b = eval_theorem1(&p.with_z((-1.0f64).exp()), &seq, &spec()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.abs_error_bound.to_bits(), b.abs_error_bound.to_bits());
    }

    #[test]
    fn theorem1_guards() {
        let seq = SequenceSpec::index();
        let p = SeriesParams::new(2.0, 1.0, 1.0, 1.0, 1.0, 0.5).unwrap();
        assert!(matches!(
            eval_theorem1(&p, &seq, &spec()),
            Err(Error::Guard { .. })
        ));
        let p = SeriesParams::new(2.0, 1.0, 2.0, 3.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            eval_theorem1(&p, &seq, &spec()),
            Err(Error::Guard { .. })
        ));
        let p = SeriesParams::new(4.0, 1.0, 1.0, 1.0, 2.0, 0.5).unwrap();
        assert!(matches!(
            eval_theorem1(&p, &seq, &spec()),
            Err(Error::Guard { .. })
        ));
    }

    #[test]
    fn remark3_forms() {
        let p = SeriesParams::new(2.0, 1.0, 2.0, 1.0, 1.0, 0.5).unwrap();
        let q = eval_remark3(2, &p, &spec()).unwrap();
        let s = eval_series(&p, &SequenceSpec::index(), 1e-14).unwrap();
        close(&q, &s, 1e-8);

        let p = SeriesParams::new(2.0, 0.0, 2.0, 1.0, 1.0, 0.5).unwrap();
        let q = eval_remark3(2, &p, &spec()).unwrap();
        let s = eval_series(&p, &SequenceSpec::index(), 1e-14).unwrap();
        close(&q, &s, 1e-8);

        // q = 3, α = 3 gives a_n = n
        let p = SeriesParams::new(3.0, 1.0, 1.0, 1.0, 0.5, -0.5).unwrap();
        let q = eval_remark3(3, &p, &spec()).unwrap();
        let s = eval_series(&p, &SequenceSpec::index(), 1e-14).unwrap();
        close(&q, &s, 1e-8);
    }

    #[test]
    fn remark3_zero_radius() {
        let p = SeriesParams::new(2.0, 1.0, 2.0, 2.0, 0.0, 0.3).unwrap();
        let q = eval_remark3(2, &p, &spec()).unwrap();
        let s = eval_series(&p, &SequenceSpec::index(), 1e-14).unwrap();
        close(&q, &s, 1e-9);
    }

    #[test]
    fn theorem2_matches_series() {
        let seq = SequenceSpec::index();
        let q = eval_theorem2(2.0, 1.0, &seq, 1.0, &spec()).unwrap();
        let s = eval_s_mu(1.5, 1.0, 1e-12).unwrap();
        close(&q, &s, 1e-6);
        let q = eval_theorem2(2.0, 1.0, &seq, 0.0, &spec()).unwrap();
        assert!((q.value - PI * PI / 3.0).abs() < 1e-8);
    }

    #[test]
    fn theorem2_verbatim_diverges() {
        let seq = SequenceSpec::index();
        let v = theorem2_verbatim_integrand(2.0, 1.0, &seq, 1.0, 1e3).unwrap();
        assert!((v - PI * PI / 3.0).abs() < 1e-3);
        let e = eval_theorem2_with_kernel(2.0, 1.0, &seq, 1.0, Theorem2Kernel::Verbatim, &spec());
        assert!(matches!(e, Err(Error::Divergent(_))));
    }

    #[test]
    fn charfn_at_origin_and_symmetry() {
        let f0 = eval_charfn_integral(1.0, 1.0, 1.0, 0.0, &spec()).unwrap();
        assert!((f0.value.re - 1.0).abs() <= f0.abs_error_bound.max(1e-10));
        assert_eq!(f0.value.im, 0.0);
        let a = eval_charfn_integral(1.0, 2.0, 1.0, 0.7, &spec()).unwrap();
        let b = eval_charfn_integral(1.0, 2.0, 1.0, -0.7, &spec()).unwrap();
        assert!((a.value - b.value.conj()).norm() < 1e-10);
        assert!(a.value.norm() <= 1.0);
    }

    #[test]
    fn charfn_small_mu_uses_low_order_bessel() {
        let loose = spec().with_tolerances(1e-7, 1e-9);
        let a = eval_charfn_integral(-0.1, 0.2, 1.0, 0.0, &loose).unwrap();
        assert!((a.value.re - 1.0).abs() <= a.abs_error_bound, "{a:?}");
        assert!(a.abs_error_bound < 1e-6);
    }
}
