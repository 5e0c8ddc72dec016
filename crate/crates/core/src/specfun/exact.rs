//! Fixed-point big-integer summation for series whose term ratios are
//! products of dyadic rationals, used when a double-double sum cannot reach
//! the requested tolerance.

use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};

use super::TERM_BUDGET;
use crate::error::{Error, Result};
use crate::numeric::EPS;

/// Largest working precision in bits.
const MAX_BITS: u64 = 1 << 15;

/// m·2^e, exact.
#[derive(Debug, Clone)]
struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    fn from_f64(x: f64) -> Dyadic {
        if x == 0.0 {
            return Dyadic {
                m: BigInt::zero(),
                e: 0,
            };
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        Dyadic {
            m: BigInt::from(sign) * BigInt::from(mant),
            e,
        }
    }

    /// self + k, exact.
    fn add_int(&self, k: u64) -> Dyadic {
        if self.e >= 0 {
            Dyadic {
                m: (&self.m << self.e as usize) + BigInt::from(k),
                e: 0,
            }
        } else {
            Dyadic {
                m: &self.m + (BigInt::from(k) << (-self.e) as usize),
                e: self.e,
            }
        }
    }
}

/// Starting precision for a sum whose terms reach `abs_sum` and cancel by
/// `ratio`, to be resolved to relative `tol`.
pub(crate) fn bits_hint(abs_sum: f64, ratio: f64, tol: f64) -> u64 {
    let ratio = if ratio.is_finite() {
        ratio
    } else {
        abs_sum * abs_sum
    };
    let bits = abs_sum.max(1.0).log2() + ratio.max(1.0).log2() - tol.max(EPS * EPS).log2() + 32.0;
    bits.ceil().min(MAX_BITS as f64) as u64
}

/// x·2^e without intermediate overflow.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    let big = 2f64.powi(1000);
    let small = 2f64.powi(-1000);
    while e > 1000 {
        x *= big;
        e -= 1000;
    }
    while e < -1000 {
        x *= small;
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

/// The fixed-point value t·2^{-p} rounded to f64.
fn fixed_to_f64(t: &BigInt, p: u64) -> f64 {
    let bits = t.bits();
    let shift = bits.saturating_sub(64);
    let top = (t >> shift as usize).to_f64().unwrap_or(0.0);
    ldexp(top, shift as i64 - p as i64)
}

/// A numerator or denominator parameter contributing the factors
/// (c + n·step + j), j = 0..step, to the ratio t_{n+1}/t_n.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Factor {
    pub c: f64,
    pub step: u32,
}

/// Σ t_n with t_0 = 1 and
///
/// ```text
/// t_{n+1}/t_n = x ∏_num ∏_j (c + n·step + j) / ((n+1) ∏_den ∏_j (c + n·step + j)).
/// ```
///
/// `tail_ratio(n)` returns a bound ρ on |t_{k+1}/t_k| valid for all k ≥ n,
/// if one is available. Summation stops once the geometric tail is below
/// `tol`·|sum|. The working precision grows until rounding is below the
/// same relative level. Returns (value, absolute error, terms).
pub(crate) fn sum_rational(
    num: &[Factor],
    den: &[Factor],
    x: f64,
    tol: f64,
    bits_hint: u64,
    tail_ratio: impl Fn(usize) -> Option<f64>,
) -> Result<(f64, f64, usize)> {
    let mut p = bits_hint.max(128);
    loop {
        let (value, tail, rounding, n) = sum_at(num, den, x, tol, p, &tail_ratio)?;
        let target = tol.max(4.0 * EPS) * value.abs();
        if rounding <= target || value == 0.0 && rounding == 0.0 {
            return Ok((value, tail + rounding + EPS * value.abs(), n));
        }
        let extra = (rounding / target.max(f64::MIN_POSITIVE)).log2().ceil() as u64 + 32;
        p += extra;
        if p > MAX_BITS {
            return Err(Error::Precision {
                ratio: rounding / value.abs() / EPS,
                limit: ldexp(1.0, MAX_BITS as i64).min(f64::MAX),
            });
        }
    }
}

fn sum_at(
    num: &[Factor],
    den: &[Factor],
    x: f64,
    tol: f64,
    p: u64,
    tail_ratio: &impl Fn(usize) -> Option<f64>,
) -> Result<(f64, f64, f64, usize)> {
    let xd = Dyadic::from_f64(x);
    let num_d: Vec<Dyadic> = num.iter().map(|f| Dyadic::from_f64(f.c)).collect();
    let den_d: Vec<Dyadic> = den.iter().map(|f| Dyadic::from_f64(f.c)).collect();
    let mut term = BigInt::from(1) << p as usize;
    let mut sum = term.clone();
    // error of `term` and accumulated error of `sum`, in units of 2^{-p}
    let mut term_err = 0.0f64;
    let mut sum_err = 0.0f64;
    let mut n = 0usize;
    let tail;
    loop {
        let t = fixed_to_f64(&term, p);
        if t == 0.0 && term.is_zero() {
            tail = 0.0;
            break;
        }
        if let Some(rho) = tail_ratio(n) {
            if rho < 1.0 {
                let tl = t.abs() * rho / (1.0 - rho) + ldexp(term_err, -(p as i64)) / (1.0 - rho);
                if tl <= tol * fixed_to_f64(&sum, p).abs() {
                    tail = tl;
                    break;
                }
            }
        }
        if n >= TERM_BUDGET {
            return Err(Error::TermBudget {
                tol,
                achieved: f64::INFINITY,
                budget: TERM_BUDGET,
            });
        }
        let nu = n as u64;
        let mut nm = xd.m.clone();
        let mut ne = xd.e;
        let mut q = x.abs();
        for (f, d) in num.iter().zip(&num_d) {
            for j in 0..f.step as u64 {
                let v = d.add_int(nu * f.step as u64 + j);
                q *= (f.c + (nu * f.step as u64 + j) as f64).abs();
                nm *= v.m;
                ne += v.e;
            }
        }
        let mut dm = BigInt::from(nu + 1);
        let mut de = 0i64;
        q /= (nu + 1) as f64;
        for (f, d) in den.iter().zip(&den_d) {
            for j in 0..f.step as u64 {
                let v = d.add_int(nu * f.step as u64 + j);
                if v.m.is_zero() {
                    return Err(Error::Domain(
                        "zero denominator factor in exact series".into(),
                    ));
                }
                q /= (f.c + (nu * f.step as u64 + j) as f64).abs();
                dm *= v.m;
                de += v.e;
            }
        }
        let mut next = term * nm;
        let shift = ne - de;
        if shift >= 0 {
            next <<= shift as usize;
        } else {
            next = shr_trunc(next, (-shift) as usize);
        }
        // BigInt division truncates toward zero
        term = next / dm;
        term_err = term_err * q * (1.0 + 1e-10) + 2.0;
        sum += &term;
        sum_err += term_err;
        n += 1;
        if term.sign() == Sign::NoSign && nm_is_zero_factor(num, nu) {
            tail = 0.0;
            break;
        }
    }
    let value = fixed_to_f64(&sum, p);
    Ok((value, tail, ldexp(sum_err, -(p as i64)), n + 1))
}

/// Right shift rounding toward zero, matching integer division.
fn shr_trunc(v: BigInt, s: usize) -> BigInt {
    if v.sign() == Sign::Minus {
        -((-v) >> s)
    } else {
        v >> s
    }
}

/// True if some numerator factor vanished at step n, ending the series.
fn nm_is_zero_factor(num: &[Factor], n: u64) -> bool {
    num.iter()
        .any(|f| (0..f.step as u64).any(|j| f.c + (n * f.step as u64 + j) as f64 == 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_large_negative_argument() {
        // e^{-40} = Σ (-40)^n/n!, cancellation about e^{80}
        let geo = |n: usize| (n > 80).then(|| 40.0 / (n as f64 + 1.0));
        let (v, e, _) = sum_rational(&[], &[], -40.0, 1e-16, 128, geo).unwrap();
        let exact = (-40f64).exp();
        assert!((v - exact).abs() <= 1e-15 * exact, "{v:e} vs {exact:e}");
        assert!((v - exact).abs() <= e);
    }

    #[test]
    fn non_integer_parameters_are_exact() {
        // ₁F₁(0.3; 0.3; x) = e^x with parameters that are not dyadic
        let f = [Factor { c: 0.3, step: 1 }];
        let geo = |n: usize| (n > 60).then(|| 25.0 / (n as f64 + 1.0));
        let (v, _, _) = sum_rational(&f, &f, -25.0, 1e-16, 64, geo).unwrap();
        assert!((v / (-25f64).exp() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn terminating_series() {
        // (1 + x)^2 = ₁F₀(-2;;-x)
        let f = [Factor { c: -2.0, step: 1 }];
        let (v, _, n) = sum_rational(&f, &[], -3.0, 1e-16, 64, |_| None).unwrap();
        assert_eq!(v, 16.0);
        assert!(n <= 4);
    }

    #[test]
    fn dyadic_round_trip() {
        for x in [0.1, -3.75, 1e300, 5e-324, 2.0] {
            let d = Dyadic::from_f64(x);
            assert_eq!(ldexp(d.m.to_f64().unwrap(), d.e), x);
        }
    }
}
