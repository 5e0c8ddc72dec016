use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::EPS;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Relative accuracy we claim for [`gamma`] and absolute accuracy (relative
/// to |ln Γ| + 1) for [`ln_gamma`].
pub(crate) const GAMMA_REL_ERR: f64 = 2e-15;

fn lanczos_sum(x: f64) -> f64 {
    // x >= 0.5, evaluated at x - 1
    let xm1 = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (xm1 + i as f64);
    }
    acc
}

/// Γ(x) for real x. Poles return NaN, overflow returns +∞.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    if x > 171.624_376_956_302_7 {
        return f64::INFINITY;
    }
    if x == x.floor() && x <= 30.0 {
        let mut p = 1.0;
        let mut k = 2.0;
        while k < x {
            p *= k;
            k += 1.0;
        }
        return p;
    }
    if x >= 10.0 {
        let half = x.powf((x - 0.5) / 2.0);
        return (2.0 * PI).sqrt() * half * (half * (-x).exp()) * stirling_correction(x).exp();
    }
    let t = x - 0.5 + LANCZOS_G;
    let half = t.powf((x - 0.5) / 2.0);
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(x)
}

/// ln Γ(x) - [(x-1/2) ln x - x + ln √(2π)]; the first omitted term is below
/// 1e-16 for x ≥ 10.
fn stirling_correction(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    inv * (1.0 / 12.0
        + inv2
            * (-1.0 / 360.0
                + inv2
                    * (1.0 / 1260.0
                        + inv2
                            * (-1.0 / 1680.0
                                + inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360_360.0))))))
}

/// ln Γ(x + a) - ln Γ(x + b) without the cancellation of the plain
/// difference when x is large.
pub fn ln_gamma_ratio(x: f64, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (xa, xb) = (x + a, x + b);
    if xa.min(xb) < 10.0 || x < 10.0 {
        return ln_gamma(xa) - ln_gamma(xb);
    }
    // Stirling: (y - 1/2) ln y - y + corr(y), split as ln y = ln x + ln(1 + c/x)
    (xa - 0.5) * (a / x).ln_1p() - (xb - 0.5) * (b / x).ln_1p() + (a - b) * x.ln() - (a - b)
        + stirling_correction(xa)
        - stirling_correction(xb)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0 || x.is_nan());
    ln_gamma_abs(x)
}

/// ln |Γ(x)| for any non-pole real x.
pub fn ln_gamma_abs(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return (PI / (PI * x).sin().abs()).ln() - ln_gamma_abs(1.0 - x);
    }
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x >= 10.0 {
        return (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_correction(x);
    }
    let t = x - 0.5 + LANCZOS_G;
    HALF_LN_2PI + (x - 0.5) * t.ln() - t + lanczos_sum(x).ln()
}

/// Sign of Γ(x) for non-pole x.
pub fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 || (x.floor() as i64) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Pochhammer symbol (ν)_n = ν(ν+1)···(ν+n-1), with (ν)_0 = 1.
///
/// Small n is a direct product (exact for integer ν while the result fits
/// in 53 bits); large n goes through log-gamma with the sign tracked
/// separately. Results that do not fit in an f64 are an
/// [`Error::Overflow`].
pub fn pochhammer(nu: f64, n: u64) -> Result<f64> {
    if nu.is_nan() {
        return Err(Error::Domain("pochhammer: ν is NaN".into()));
    }
    if n == 0 {
        return Ok(1.0);
    }
    // a zero factor ν+k = 0 for some k < n
    if nu <= 0.0 && nu == nu.floor() && (-nu) < n as f64 {
        return Ok(0.0);
    }
    let overflow = || Error::Overflow(format!("(ν)_n with ν={nu}, n={n} exceeds f64 range"));
    if n <= 64 {
        let mut p = 1.0f64;
        for k in 0..n {
            p *= nu + k as f64;
        }
        return if p.is_finite() {
            Ok(p)
        } else {
            Err(overflow())
        };
    }
    let nf = n as f64;
    let log_mag = ln_gamma_abs(nu + nf) - ln_gamma_abs(nu);
    if log_mag > f64::MAX.ln() {
        return Err(overflow());
    }
    // factors ν+k < 0 for k < ceil(-ν)
    let negatives = if nu < 0.0 {
        ((-nu).ceil() as u64).min(n)
    } else {
        0
    };
    let sign = if negatives % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * log_mag.exp())
}

/// Bounds of (ν)_k/k! · k^{1-ν} over all integers k ≥ `k_start`, given the
/// weight w = (ν)_{k_start}/k_start! at the start. The factor is monotone in
/// k and tends to 1/Γ(ν), so the extremes are the start value and the limit.
pub(crate) fn weight_factor_bounds(nu: f64, k_start: usize, w_start: f64) -> (f64, f64) {
    let at_start = w_start * (k_start as f64).powf(1.0 - nu);
    let limit = 1.0 / gamma(nu);
    let lo = at_start.min(limit) * (1.0 - 8.0 * EPS);
    let hi = at_start.max(limit) * (1.0 + 8.0 * EPS);
    (lo, hi)
}
