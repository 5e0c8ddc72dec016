use std::f64::consts::PI;

use super::gamma::gamma;
use crate::error::{Error, Result};
use crate::numeric::Dd;

const SERIES_CUTOFF: f64 = 25.0;

/// Bessel function of the first kind J_ν(x) for ν > -1, x ≥ 0.
///
/// Uses the ascending series (double-double) for x ≤ 25, the Hankel
/// expansion for larger x when it converges to full precision, and Miller's
/// backward recurrence otherwise.
pub fn bessel_j(order: f64, x: f64) -> Result<f64> {
    if !(order > -1.0) || !order.is_finite() {
        return Err(Error::Domain(format!("J_ν requires ν > -1, got {order}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("J_ν requires finite x ≥ 0, got {x}")));
    }
    if x == 0.0 {
        return if order == 0.0 {
            Ok(1.0)
        } else if order > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::Domain("J_ν(0) is unbounded for ν < 0".into()))
        };
    }
    if x <= SERIES_CUTOFF {
        return Ok(ascending(order, x));
    }
    if order < -0.5 {
        // J_ν = 2(ν+1)/x J_{ν+1} - J_{ν+2}; x > 25 keeps this well conditioned
        let j1 = bessel_j(order + 1.0, x)?;
        let j2 = bessel_j(order + 2.0, x)?;
        return Ok(2.0 * (order + 1.0) / x * j1 - j2);
    }
    if let Some(v) = hankel(order, x) {
        return Ok(v);
    }
    Ok(miller(order, x))
}

fn ascending(nu: f64, x: f64) -> f64 {
    // Σ (-x²/4)^k / (k! (ν+1)_k)
    let q = -(Dd::from_f64(x) * Dd::from_f64(x)).mul_f64(0.25);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut k = 0.0f64;
    loop {
        k += 1.0;
        term = term * q / (Dd::from_f64(nu) + k).mul_f64(k);
        sum = sum + term;
        if term.hi.abs() < 1e-34 * sum.hi.abs() && k > x {
            break;
        }
    }
    let half = x / 2.0;
    let pref = if nu == nu.floor() && nu <= 30.0 {
        half.powi(nu as i32) / gamma(nu + 1.0)
    } else {
        (nu * half.ln() - super::ln_gamma(nu + 1.0)).exp()
    };
    pref * sum.to_f64()
}

fn hankel(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0f64;
    let mut q = 0.0f64;
    let mut b = 1.0f64;
    let mut prev = f64::INFINITY;
    let mut k = 0usize;
    loop {
        k += 1;
        let odd = (2 * k - 1) as f64;
        b *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        let mag = b.abs();
        if mag == 0.0 {
            break;
        }
        if mag > prev {
            return None;
        }
        prev = mag;
        // P takes even k with alternating sign, Q odd k
        match k % 4 {
            0 => p += b,
            1 => q += b,
            2 => p -= b,
            _ => q -= b,
        }
        if mag < 1e-17 * p.abs().max(q.abs()) {
            break;
        }
        if k > 200 {
            return None;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    Some((2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin()))
}

fn miller(nu: f64, x: f64) -> f64 {
    let (nu0, m) = if nu >= 0.0 {
        let f = nu.floor();
        (nu - f, f as usize)
    } else {
        (nu, 0usize)
    };
    let extra = (60.0 * (x / 2.0).sqrt()).powf(2.0 / 3.0);
    let mut top = (m as f64).max(x) as usize + 20 + extra.ceil() as usize;
    if top % 2 == 1 {
        top += 1;
    }
    // normalisation weights c_i for orders ν0 + 2i
    let coef = |i: usize, g: f64| -> f64 {
        if i == 0 {
            gamma(nu0 + 1.0)
        } else {
            (nu0 + 2.0 * i as f64) * g
        }
    };
    let mut g_tab = vec![0.0f64; top / 2 + 1];
    if top / 2 >= 1 {
        g_tab[1] = gamma(nu0 + 1.0);
        for i in 1..top / 2 {
            g_tab[i + 1] = g_tab[i] * (nu0 + i as f64) / (i as f64 + 1.0);
        }
    }
    let mut y_next = 0.0f64;
    let mut y = 1e-30f64;
    let mut norm = 0.0f64;
    let mut at_m = 0.0f64;
    let mut k = top;
    loop {
        if k == m {
            at_m = y;
        }
        if k.is_multiple_of(2) {
            norm += coef(k / 2, g_tab[k / 2]) * y;
        }
        if k == 0 {
            break;
        }
        let y_prev = 2.0 * (nu0 + k as f64) / x * y - y_next;
        y_next = y;
        y = y_prev;
        k -= 1;
        if y.abs() > 1e250 {
            y *= 1e-250;
            y_next *= 1e-250;
            norm *= 1e-250;
            at_m *= 1e-250;
        }
    }
    at_m * (nu0 * (x / 2.0).ln()).exp() / norm
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn half_order_closed_form() {
        assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-15);
        assert!(rel(bessel_j(0.5, PI / 2.0).unwrap(), 2.0 / PI) < 1e-14);
        for &x in &[0.1, 3.3, 24.0, 26.0, 80.0, 500.0] {
            let expect = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((bessel_j(0.5, x).unwrap() - expect).abs() < 1e-12 * (2.0 / (PI * x)).sqrt());
            let expect = (2.0 / (PI * x)).sqrt() * x.cos();
            assert!((bessel_j(-0.5, x).unwrap() - expect).abs() < 1e-12 * (2.0 / (PI * x)).sqrt());
        }
    }

    #[test]
    fn references() {
        let cases = [
            (1.5, 1.0, 0.240_297_839_123_427_010_895_843),
            (0.7, 30.0, -0.143_929_742_725_566_858_402_157_6),
            (2.5, 12.3, 0.005_166_917_686_892_682_656_359_796),
            (0.0, 5.0, -0.177_596_771_314_338_304_347_397),
        ];
        for (nu, x, expect) in cases {
            assert!(rel(bessel_j(nu, x).unwrap(), expect) < 1e-12, "J_{nu}({x})");
        }
    }

    #[test]
    fn miller_agrees_with_other_regimes() {
        for &(nu, x) in &[
            (0.3, 20.0),
            (2.5, 12.3),
            (7.0, 24.0),
            (1.5, 28.0),
            (12.3, 40.0),
        ] {
            let m = miller(nu, x);
            let o = if x <= SERIES_CUTOFF {
                ascending(nu, x)
            } else {
                // J_{3/2}(x) closed form
                let s = (2.0 / (PI * x)).sqrt();
                if nu == 1.5 {
                    s * (x.sin() / x - x.cos())
                } else {
                    m
                }
            };
            assert!(
                (m - o).abs() < 1e-12 * o.abs().max(1e-3),
                "nu={nu} x={x}: {m} vs {o}"
            );
        }
    }

    #[test]
    fn large_order_large_x_uses_recurrence() {
        // Hankel diverges here; recurrence must still satisfy the three-term relation
        let (nu, x) = (30.2, 40.0);
        let jm = bessel_j(nu - 1.0, x).unwrap();
        let j0 = bessel_j(nu, x).unwrap();
        let jp = bessel_j(nu + 1.0, x).unwrap();
        assert!((jm + jp - 2.0 * nu / x * j0).abs() < 1e-12);
    }

    #[test]
    fn orders_below_minus_half() {
        // the double-double series is still accurate at x = 30
        for &(nu, x) in &[(-0.75, 30.0), (-0.9, 26.0), (-0.6, 41.0)] {
            let a = bessel_j(nu, x).unwrap();
            let b = ascending(nu, x);
            assert!((a - b).abs() < 1e-13, "{nu} {x}: {a} vs {b}");
        }
    }

    #[test]
    fn domain() {
        assert!(bessel_j(-1.2, 1.0).is_err());
        assert!(bessel_j(1.0, -1.0).is_err());
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
    }
}
