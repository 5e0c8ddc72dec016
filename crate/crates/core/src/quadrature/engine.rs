use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, EPS};
use crate::result::{EvalResult, Method};

/// Accuracy targets and the split between the finite and infinite parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_refinement_levels: usize,
    /// Boundary s between the tanh-sinh part [0, s] and the exp-sinh part [s, ∞).
    pub split_point: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_refinement_levels: 8,
            split_point: 1.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::invalid("quadrature tolerances must be positive"));
        }
        if self.max_refinement_levels < 3 {
            return Err(Error::invalid(
                "quadrature needs at least 3 refinement levels",
            ));
        }
        if !(self.split_point > 0.0 && self.split_point.is_finite()) {
            return Err(Error::invalid("quadrature split point must be positive"));
        }
        Ok(())
    }

    pub fn with_tolerances(self, rel_tol: f64, abs_tol: f64) -> Self {
        QuadratureSpec {
            rel_tol,
            abs_tol,
            ..self
        }
    }
}

/// Declared decay of the integrand at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Decay {
    /// |f(x)| ≤ C x^power e^{-rate x}.
    Exponential { rate: f64, power: f64 },
    /// |f(x)| ≤ C x^exponent with exponent < -1.
    Algebraic { exponent: f64 },
}

/// Declared endpoint behaviour: f(x) ~ x^power_at_zero near 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Endpoints {
    pub power_at_zero: f64,
    pub decay: Decay,
}

impl Endpoints {
    fn validate(&self) -> Result<()> {
        if !(self.power_at_zero > -1.0) {
            return Err(Error::invalid(format!(
                "endpoint power at 0 must exceed -1, got {}",
                self.power_at_zero
            )));
        }
        match self.decay {
            Decay::Exponential { rate, power } if rate > 0.0 && power.is_finite() => Ok(()),
            Decay::Algebraic { exponent } if exponent < -1.0 => Ok(()),
            d => Err(Error::invalid(format!("invalid decay declaration {d:?}"))),
        }
    }

    /// ln of the envelope at x.
    fn ln_envelope(&self, x: f64) -> f64 {
        match self.decay {
            Decay::Exponential { rate, power } => power * x.ln() - rate * x,
            Decay::Algebraic { exponent } => exponent * x.ln(),
        }
    }

    /// ln ∫_X^∞ envelope.
    fn ln_envelope_tail(&self, x: f64) -> f64 {
        match self.decay {
            Decay::Exponential { rate, power } => {
                let slope = if power > 0.0 { rate - power / x } else { rate };
                if slope <= 0.0 {
                    f64::INFINITY
                } else {
                    power * x.ln() - rate * x - slope.ln()
                }
            }
            Decay::Algebraic { exponent } => (exponent + 1.0) * x.ln() - (-1.0 - exponent).ln(),
        }
    }
}

const H0: f64 = 0.5;
/// exp(-45) is far below any tolerance we accept.
const EDGE: f64 = 45.0;

struct Node {
    x: f64,
    w: f64,
}

fn tanh_sinh_node(t: f64, s: f64) -> Node {
    let v = PI * t.sinh();
    let c = PI * t.cosh();
    if v >= 0.0 {
        let e = (-v).exp();
        Node {
            x: s / (1.0 + e),
            w: s * c * e / ((1.0 + e) * (1.0 + e)),
        }
    } else {
        let e = v.exp();
        Node {
            x: s * e / (1.0 + e),
            w: s * c * e / ((1.0 + e) * (1.0 + e)),
        }
    }
}

/// Node on [s, ∞): exp-sinh for algebraic decay, x = s + exp(t - e^{-t})
/// for exponential decay (nodes grow only geometrically in x).
fn tail_node(t: f64, s: f64, algebraic: bool) -> Node {
    if algebraic {
        let e = (0.5 * PI * t.sinh()).exp();
        Node {
            x: s + e,
            w: 0.5 * PI * t.cosh() * e,
        }
    } else {
        let m = (-t).exp();
        let e = (t - m).exp();
        Node {
            x: s + e,
            w: (1.0 + m) * e,
        }
    }
}

/// Running state of one part.
#[derive(Default)]
struct Part {
    sum: CompensatedSum,
    prop: f64,
    evals: usize,
}

impl Part {
    fn add<F>(&mut self, f: &mut F, node: &Node) -> Result<f64>
    where
        F: FnMut(f64) -> Result<(f64, f64)>,
    {
        let (v, e) = f(node.x)?;
        if !v.is_finite() {
            return Err(Error::Singularity(format!(
                "integrand is not finite at x = {:e}",
                node.x
            )));
        }
        self.sum.add(node.w * v);
        self.prop += node.w.abs() * e.abs();
        self.evals += 1;
        Ok(v)
    }
}

/// ∫₀^∞ f(x) dx by tanh-sinh on [0, s] and exp-sinh on [s, ∞).
///
/// `f` returns a value and an absolute error estimate for that value. The
/// error bound combines the difference between the last two levels, both
/// truncation tails (from the declared endpoint behaviour with constants
/// fitted to evaluated nodes), the propagated integrand errors and
/// rounding.
pub fn integrate_semi_infinite<F>(
    mut f: F,
    ends: &Endpoints,
    spec: &QuadratureSpec,
) -> Result<EvalResult>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    spec.validate()?;
    ends.validate()?;
    let s = spec.split_point;
    let p = ends.power_at_zero;

    // t ranges: [-ta, tb] for tanh-sinh, [-tc, td] for exp-sinh
    let v_left = (EDGE / (p + 1.0)).clamp(EDGE, 700.0);
    let ta = (v_left / PI).asinh();
    let tb = (EDGE / PI).asinh();
    let algebraic = matches!(ends.decay, Decay::Algebraic { .. });
    let (tc, t_cap) = match ends.decay {
        Decay::Algebraic { .. } => ((2.0 * EDGE / PI).asinh(), (2.0 * 690.0 / PI).asinh()),
        // t - e^{-t} = -45 near t = -3.83; x stays below 2000/rate
        Decay::Exponential { rate, .. } => (3.9, (2000.0 / rate).ln()),
    };

    let mut left = Part::default();
    let mut right = Part::default();

    // level 0, finite part; collect g(x) = |f|/x^p at small x
    let mut small: Vec<(f64, f64)> = Vec::new();
    let ja = (ta / H0).ceil() as i64;
    let jb = (tb / H0).floor() as i64;
    for j in -ja..=jb {
        let node = tanh_sinh_node(j as f64 * H0, s);
        if node.x <= 0.0 || node.x >= s {
            continue;
        }
        let v = left.add(&mut f, &node)?;
        if node.x < 1e-2 * s {
            small.push((node.x, v.abs() / node.x.powf(p)));
        }
    }
    let trunc0 = check_origin(&small, p, s)?;

    // level 0, infinite part: walk outward until the fitted envelope says stop
    let mut fit = 0.0f64;
    let jc = (tc / H0).ceil() as i64;
    let mut j = -jc;
    let mut td = f64::NAN;
    let mut x_last = s;
    loop {
        let t = j as f64 * H0;
        let node = tail_node(t, s, algebraic);
        let target = spec
            .abs_tol
            .max(spec.rel_tol * H0 * (left.sum.value() + right.sum.value()).abs());
        let v = match right.add(&mut f, &node) {
            Ok(v) => v,
            // the integrand can no longer be evaluated; accept the cut only
            // if the fitted tail beyond the last good node is negligible
            Err(e @ Error::Precision { .. }) if j > -jc && t > 0.0 => {
                let tail = fit * ends.ln_envelope_tail(x_last).exp();
                if tail <= 0.5 * target {
                    break;
                }
                return Err(e);
            }
            Err(e) => return Err(e),
        };
        if v != 0.0 {
            fit = fit.max((v.abs().ln() - ends.ln_envelope(node.x)).exp());
        }
        td = t;
        x_last = node.x;
        let tail = fit * ends.ln_envelope_tail(node.x).exp();
        if (t > 0.0 && tail <= 1e-3 * target) || t + H0 > t_cap {
            break;
        }
        j += 1;
    }
    let jd = (td / H0).round() as i64;

    let mut prev = H0 * (left.sum.value() + right.sum.value());
    let mut h = H0;
    let mut last_err = f64::INFINITY;
    for level in 1..=spec.max_refinement_levels {
        h *= 0.5;
        let scale = 1i64 << level;
        // odd multiples of h inside the level-0 ranges
        let lo_a = -ja * scale;
        let hi_b = jb * scale;
        let mut k = lo_a + 1;
        while k < hi_b {
            let node = tanh_sinh_node(k as f64 * h, s);
            if node.x > 0.0 && node.x < s {
                left.add(&mut f, &node)?;
            }
            k += 2;
        }
        let lo_c = -jc * scale;
        let hi_d = jd * scale;
        let mut k = lo_c + 1;
        while k < hi_d {
            let node = tail_node(k as f64 * h, s, algebraic);
            let v = right.add(&mut f, &node)?;
            if v != 0.0 {
                fit = fit.max((v.abs().ln() - ends.ln_envelope(node.x)).exp());
            }
            k += 2;
        }
        let value = h * (left.sum.value() + right.sum.value());
        let diff = (value - prev).abs();
        let trunc_inf = fit * ends.ln_envelope_tail(x_last).exp();
        let prop = h * (left.prop + right.prop);
        let rounding = h * (left.sum.rounding_bound() + right.sum.rounding_bound())
            + 4.0 * EPS * h * (left.sum.abs_sum() + right.sum.abs_sum());
        let err = diff + trunc0 + trunc_inf + prop + rounding;
        last_err = err;
        prev = value;
        if level >= 2 && err <= spec.abs_tol.max(spec.rel_tol * value.abs()) {
            return Ok(EvalResult::new(
                value,
                err,
                left.evals + right.evals,
                Method::Quadrature,
            ));
        }
    }
    Err(Error::NoConvergence {
        levels: spec.max_refinement_levels,
        value: prev,
        error: last_err,
    })
}

/// Checks |f|/x^p near 0 against the declared power and returns a bound on
/// the integral over the skipped interval next to 0.
fn check_origin(small: &[(f64, f64)], p: f64, s: f64) -> Result<f64> {
    if small.is_empty() {
        return Ok(0.0);
    }
    // reference: node closest to 1e-3·s on a log scale
    let target = (1e-3 * s).ln();
    let (x_ref, g_ref) = small
        .iter()
        .copied()
        .min_by(|a, b| {
            (a.0.ln() - target)
                .abs()
                .total_cmp(&(b.0.ln() - target).abs())
        })
        .unwrap();
    let g_deep = small
        .iter()
        .filter(|(x, _)| *x < 1e-3 * x_ref)
        .map(|(_, g)| *g)
        .fold(0.0f64, f64::max);
    if g_deep > 1e3 * g_ref && g_deep.is_finite() {
        return Err(Error::Singularity(format!(
            "|f(x)|/x^{p} grows from {g_ref:.3e} to {g_deep:.3e} approaching 0"
        )));
    }
    let (x_min, g_min) = small
        .iter()
        .copied()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    let g = g_min.max(g_ref).max(g_deep);
    Ok(g * x_min.powf(p + 1.0) / (p + 1.0))
}

/// Convenience wrapper for integrands without their own error estimate.
pub fn integrate_plain<F>(mut f: F, ends: &Endpoints, spec: &QuadratureSpec) -> Result<EvalResult>
where
    F: FnMut(f64) -> f64,
{
    integrate_semi_infinite(|x| Ok((f(x), 0.0)), ends, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expo(power: f64) -> Endpoints {
        Endpoints {
            power_at_zero: power,
            decay: Decay::Exponential { rate: 1.0, power },
        }
    }

    #[test]
    fn exponential_moments() {
        let spec = QuadratureSpec::default();
        let r = integrate_plain(|x| (-x).exp(), &expo(0.0), &spec).unwrap();
        assert!((r.value - 1.0).abs() <= r.abs_error_bound.max(1e-14));
        assert!(r.abs_error_bound <= 1e-10);
        let r = integrate_plain(|x| x * (-x).exp(), &expo(1.0), &spec).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity_declared() {
        // ∫ x^{-1/2} e^{-x} = √π
        let spec = QuadratureSpec::default();
        let r = integrate_plain(|x| (-x).exp() / x.sqrt(), &expo(-0.5), &spec).unwrap();
        assert!(
            (r.value - PI.sqrt()).abs() <= r.abs_error_bound.max(1e-13),
            "{r:?}"
        );
        assert!((r.value - PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn undeclared_singularity_detected() {
        let spec = QuadratureSpec::default();
        let e = integrate_plain(|x| (-x).exp() / x.powf(0.9), &expo(0.0), &spec).unwrap_err();
        assert!(matches!(e, Error::Singularity(_)), "{e:?}");
    }

    #[test]
    fn algebraic_tail() {
        // ∫ 1/(1+x)² = 1
        let ends = Endpoints {
            power_at_zero: 0.0,
            decay: Decay::Algebraic { exponent: -2.0 },
        };
        let spec = QuadratureSpec::default();
        let r = integrate_plain(|x| 1.0 / ((1.0 + x) * (1.0 + x)), &ends, &spec).unwrap();
        assert!((r.value - 1.0).abs() <= r.abs_error_bound, "{r:?}");
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn classical_identity_integrand() {
        // ∫ t sin t/(e^t - 1) dt = S(1)
        let spec = QuadratureSpec::default();
        let ends = Endpoints {
            power_at_zero: 1.0,
            decay: Decay::Exponential {
                rate: 1.0,
                power: 1.0,
            },
        };
        let r = integrate_plain(|t| t * t.sin() / t.exp_m1(), &ends, &spec).unwrap();
        let s1 = 0.794_233_542_759_318_865_583_013_6;
        assert!(
            (r.value - s1).abs() <= r.abs_error_bound.max(1e-14),
            "{r:?}"
        );
    }

    #[test]
    fn refinement_stays_within_bound() {
        let ends = expo(-0.5);
        let f = |x: f64| (-x).exp() * x.cos() / x.sqrt();
        let coarse = integrate_plain(
            f,
            &ends,
            &QuadratureSpec::default().with_tolerances(1e-6, 1e-8),
        )
        .unwrap();
        let fine = integrate_plain(
            f,
            &ends,
            &QuadratureSpec::default().with_tolerances(1e-12, 1e-14),
        )
        .unwrap();
        assert!((coarse.value - fine.value).abs() <= coarse.abs_error_bound);
    }

    #[test]
    fn non_convergence_reported() {
        let spec = QuadratureSpec {
            max_refinement_levels: 3,
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            ..QuadratureSpec::default()
        };
        let e = integrate_plain(|x| (-x).exp() * (40.0 * x).sin(), &expo(0.0), &spec).unwrap_err();
        assert!(matches!(e, Error::NoConvergence { .. }));
    }
}
