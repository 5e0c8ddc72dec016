use super::{check_convergence, SequenceSpec, SeriesParams, Verdict};
use crate::error::{Error, Result};
use crate::numeric::{power_tail_bracket, CompensatedSum, EPS};
use crate::result::{EvalResult, Method};
use crate::specfun::{hurwitz_zeta, ln_gamma, ln_gamma_ratio, weight_factor_bounds, GAMMA_REL_ERR};

pub const DEFAULT_TERM_BUDGET: usize = 5_000_000;

/// Argument where Γ attains its minimum on (0, ∞).
const GAMMA_ARGMIN: f64 = 1.461_632_144_968_362_3;

/// Produces the terms t_n in order n = 1, 2, ...
struct Terms<'a> {
    p: &'a SeriesParams,
    seq: &'a SequenceSpec,
    n: usize,
    /// (ν)_n / n!
    w: f64,
    /// Relative error of `w` at the last resync and steps since then.
    w_err: f64,
    since_sync: usize,
    ln_gamma_nu: f64,
    ln_z: f64,
    ln_r2: f64,
    lna_err: f64,
}

struct Term {
    value: f64,
    /// Relative error estimate of `value`.
    rel_err: f64,
    ln_a: f64,
}

impl<'a> Terms<'a> {
    fn new(p: &'a SeriesParams, seq: &'a SequenceSpec) -> Self {
        let lna_err = match seq {
            SequenceSpec::GammaArithmetic { .. } => GAMMA_REL_ERR,
            _ => 0.0,
        };
        Terms {
            p,
            seq,
            n: 0,
            w: 1.0,
            w_err: 0.0,
            since_sync: 0,
            ln_gamma_nu: ln_gamma(p.nu),
            ln_z: p.z.abs().ln(),
            ln_r2: 2.0 * p.r.ln(),
            lna_err,
        }
    }

    fn next(&mut self) -> Result<Term> {
        let p = self.p;
        self.n += 1;
        let n = self.n;
        let nf = n as f64;
        if p.nu != 1.0 {
            if n.is_multiple_of(WEIGHT_SYNC) {
                // the running product's error grows linearly; restart it
                let (wf, rel) = weight_factor(p.nu, self.ln_gamma_nu, nf);
                self.w = wf * nf.powf(p.nu - 1.0);
                self.w_err = rel + 2.0 * EPS;
                self.since_sync = 0;
            } else {
                self.w *= (p.nu + nf - 1.0) / nf;
                self.since_sync += 1;
            }
        }
        let ln_a = self.seq.ln_a(n)?;
        let x = p.alpha * ln_a;
        // ln(a^α + r²) without overflow
        let ln_den = if p.r == 0.0 {
            x
        } else if x > self.ln_r2 {
            x + (self.ln_r2 - x).exp().ln_1p()
        } else {
            self.ln_r2 + (x - self.ln_r2).exp().ln_1p()
        };
        let zpart = if p.z.abs() == 1.0 {
            0.0
        } else {
            nf * self.ln_z
        };
        let e = zpart + p.beta * ln_a - p.mu * ln_den;
        if e > 700.0 {
            return Err(Error::Overflow(format!("series term {n} overflows")));
        }
        let sign = if p.z < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        let value = sign * 2.0 * self.w * e.exp();
        let recurrence = if p.nu == 1.0 {
            0.0
        } else {
            3.0 * self.since_sync as f64
        };
        let rel_err = self.w_err
            + EPS
                * (8.0
                    + recurrence
                    + 2.0 * (zpart.abs() + p.beta * ln_a.abs() + p.mu * ln_den.abs()))
            + (p.beta + p.alpha * p.mu) * self.lna_err * (1.0 + ln_a.abs());
        Ok(Term {
            value,
            rel_err,
            ln_a,
        })
    }

    /// (ν)_{n+1}/(n+1)! for the last produced n.
    fn next_weight(&self) -> f64 {
        let nf = self.n as f64;
        self.w * (self.p.nu + nf) / (nf + 1.0)
    }

    /// Relative error of [`Terms::next_weight`].
    fn next_weight_err(&self) -> f64 {
        if self.p.nu == 1.0 {
            0.0
        } else {
            self.w_err + 3.0 * (self.since_sync + 1) as f64 * EPS
        }
    }
}

/// Remainder after n terms as (midpoint correction, half-width).
enum Tail {
    Known(f64, f64),
    NotYet,
}

fn power_tail(
    p: &SeriesParams,
    gamma: f64,
    exponent: f64,
    n: usize,
    last: f64,
    next_w: f64,
    next_w_err: f64,
) -> Tail {
    let ga = gamma * p.alpha;
    let nf = n as f64;
    let az = p.z.abs();
    if p.z == 1.0 {
        let (wlo, whi) = weight_factor_bounds(p.nu, n + 1, next_w);
        let (wlo, whi) = (wlo * (1.0 - next_w_err), whi * (1.0 + next_w_err));
        let shrink = (1.0 + p.r * p.r * (nf + 1.0).powf(-ga)).powf(-p.mu);
        let (lo, hi) = power_tail_bracket(n, exponent, 2.0 * wlo * shrink, 2.0 * whi);
        return Tail::Known(0.5 * (lo + hi), 0.5 * (hi - lo));
    }
    if az < 1.0 {
        let decreasing = p.mu * p.alpha > p.beta
            && nf.powf(ga) * (p.mu * p.alpha - p.beta) >= p.beta * p.r * p.r;
        let h = if decreasing {
            1.0
        } else {
            (1.0 + 1.0 / nf).powf(gamma * p.beta)
        };
        let rho = az * (1.0f64).max((p.nu + nf) / (nf + 1.0)) * h * (1.0 + 1e-12);
        return if rho < 1.0 {
            Tail::Known(0.0, last.abs() * rho / (1.0 - rho))
        } else {
            Tail::NotYet
        };
    }
    Tail::NotYet
}

/// Terms between recomputations of (ν)_n/n! from log-gamma.
const WEIGHT_SYNC: usize = 64;

/// Most blocks a refined unit-circle tail may use.
const MAX_TAIL_BLOCKS: usize = 200_000;

/// (ν)_k/k! · k^{1-ν} and its relative error.
fn weight_factor(nu: f64, ln_gamma_nu: f64, k: f64) -> (f64, f64) {
    if nu == 1.0 {
        return (1.0, 0.0);
    }
    let ln_k = k.ln();
    let v = (ln_gamma_ratio(k, nu, 1.0) - ln_gamma_nu + (1.0 - nu) * ln_k).exp();
    let rel =
        GAMMA_REL_ERR * (2.0 + ln_gamma_nu.abs()) + 16.0 * EPS * (1.0 + (nu - 1.0).abs() * ln_k);
    (v, rel)
}

/// Σ_{m>n} t_{s·m} at z = 1 for a_n = n^γ and stride s, split into blocks
/// [a, a(1+ε)] on which the monotone weight and shrink factors are bounded
/// by their endpoint values. Block sums of m^{-p} come from Hurwitz zeta in
/// summation-by-parts form. Returns (midpoint, half-width), or None if more
/// than [`MAX_TAIL_BLOCKS`] blocks would be needed to reach `target`.
fn refined_unit_tail(
    p: &SeriesParams,
    gamma: f64,
    exponent: f64,
    n: usize,
    stride: usize,
    eps: f64,
    target: f64,
) -> Option<(f64, f64)> {
    let s = stride as f64;
    let ga = gamma * p.alpha;
    let r2 = p.r * p.r;
    let ln_gamma_nu = ln_gamma(p.nu);
    let limit = (-ln_gamma_nu).exp();
    let shrink = |m: f64| (1.0 + r2 * (s * m).powf(-ga)).powf(-p.mu) * (1.0 - 8.0 * EPS);
    let zeta = |k: f64| hurwitz_zeta(exponent, k).ok();
    // bounds of 2·weight·shrink over [a, b]
    let bounds = |a: f64, b: f64| {
        let (wa, ea) = weight_factor(p.nu, ln_gamma_nu, s * a);
        let (wb, eb) = weight_factor(p.nu, ln_gamma_nu, s * b);
        let lo = wa.min(wb) * (1.0 - ea.max(eb)) * shrink(a);
        let hi = wa.max(wb) * (1.0 + ea.max(eb)) * shrink(b).min(1.0) / (1.0 - 8.0 * EPS);
        (2.0 * lo, 2.0 * hi)
    };
    let mut lower = CompensatedSum::new();
    let mut upper = CompensatedSum::new();
    let mut pad = 0.0f64;
    let (mut prev_lo, mut prev_hi) = (0.0, 0.0);
    let mut a = n as f64 + 1.0;
    for _ in 0..MAX_TAIL_BLOCKS {
        let za = zeta(a)?;
        // remainder from a on, bounded over [a, ∞)
        let (wa, ea) = weight_factor(p.nu, ln_gamma_nu, s * a);
        let rest_lo = 2.0 * wa.min(limit) * (1.0 - ea) * shrink(a);
        let rest_hi = 2.0 * wa.max(limit) * (1.0 + ea) / (1.0 - 8.0 * EPS);
        let closing = (rest_hi - rest_lo) * za;
        let last = closing <= 0.125 * target;
        let (lo, hi) = if last {
            (rest_lo, rest_hi)
        } else {
            let b = (a * (1.0 + eps)).floor().max(a);
            bounds(a, b)
        };
        lower.add((lo - prev_lo) * za);
        upper.add((hi - prev_hi) * za);
        pad += ((lo - prev_lo).abs() + (hi - prev_hi).abs()) * za;
        if last {
            // t_{s·m} = G(s·m)·s^{-p}·m^{-p}
            let scale = s.powf(-exponent);
            let (l, u) = (lower.value(), upper.value());
            let half =
                0.5 * (u - l) + 16.0 * EPS * pad + lower.rounding_bound() + upper.rounding_bound();
            let mid = 0.5 * (l + u);
            return Some((scale * mid, scale * half + 4.0 * EPS * scale * mid.abs()));
        }
        prev_lo = lo;
        prev_hi = hi;
        a = (a * (1.0 + eps)).floor().max(a) + 1.0;
    }
    None
}

/// Half-width of the one-block bracket of the z = 1 tail after n terms.
fn unit_tail_spread(p: &SeriesParams, gamma: f64, exponent: f64, n: usize) -> f64 {
    let a = n as f64 + 1.0;
    let ln_gamma_nu = ln_gamma(p.nu);
    let limit = (-ln_gamma_nu).exp();
    let (w, _) = weight_factor(p.nu, ln_gamma_nu, a);
    let shrink = (1.0 + p.r * p.r * a.powf(-gamma * p.alpha)).powf(-p.mu);
    let spread = w.max(limit) - w.min(limit) * shrink;
    spread * hurwitz_zeta(exponent, a).unwrap_or(f64::INFINITY)
}

/// First n from which |t_n| decreases at z = -1 for a_n = n^γ.
pub(crate) fn alternating_start(p: &SeriesParams, gamma: f64) -> f64 {
    let ga = gamma * p.alpha;
    let m0 = (p.nu - 1.0).max(0.0) + gamma * p.beta;
    let slack = p.mu * ga - m0;
    debug_assert!(slack > 0.0);
    let k = (m0 * p.r * p.r / slack).powf(1.0 / ga);
    (k * (1.0 + 1e-12)).floor() + 1.0
}

fn gamma_tail(p: &SeriesParams, gamma: f64, delta: f64, n: usize, last: &Term) -> Tail {
    let nf = n as f64;
    let x = gamma * nf + delta;
    if x < GAMMA_ARGMIN {
        return Tail::NotYet;
    }
    let weight = p.mu * p.alpha - p.beta;
    let growth = (weight * (ln_gamma(x) - ln_gamma(x + gamma))).exp();
    let shift = (1.0 + p.r * p.r * (-p.alpha * last.ln_a).exp()).powf(p.mu);
    let rho = p.z.abs() * (1.0f64).max((p.nu + nf) / (nf + 1.0)) * growth * shift * (1.0 + 1e-12);
    if rho < 1.0 {
        Tail::Known(0.0, last.value.abs() * rho / (1.0 - rho))
    } else {
        Tail::NotYet
    }
}

/// Tail past the end of a table, extrapolating a_k = a_L (k/L)^e.
fn table_tail(p: &SeriesParams, values: &[f64], e: f64, exponent: f64, next_w: f64) -> f64 {
    let l = values.len();
    let lf = l as f64;
    let weight = p.mu * p.alpha - p.beta;
    let scale = values[l - 1] * lf.powf(-e);
    let c = 2.0 * scale.powf(-weight);
    let (_, whi) = weight_factor_bounds(p.nu, l + 1, next_w);
    let az = p.z.abs();
    if az == 1.0 {
        let (_, hi) = power_tail_bracket(l, exponent, 0.0, 1.0);
        return c * whi * hi;
    }
    let first = c * whi * (lf + 1.0).powf(-exponent) * az.powf(lf + 1.0);
    let rho = az * (1.0 + 1.0 / (lf + 1.0)).powf((-exponent).max(0.0));
    if rho < 1.0 {
        first / (1.0 - rho)
    } else {
        f64::INFINITY
    }
}

/// Certified sum of the series to absolute accuracy `tol`.
pub fn eval_series(params: &SeriesParams, seq: &SequenceSpec, tol: f64) -> Result<EvalResult> {
    eval_series_with_budget(params, seq, tol, DEFAULT_TERM_BUDGET)
}

/// As [`eval_series`] with an explicit cap on the number of terms.
pub fn eval_series_with_budget(
    params: &SeriesParams,
    seq: &SequenceSpec,
    tol: f64,
    budget: usize,
) -> Result<EvalResult> {
    params.validate()?;
    seq.validate()?;
    if !(tol > 0.0) {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let conv = check_convergence(params, seq);
    match conv.verdict {
        Verdict::Converges => {}
        Verdict::Diverges => {
            return Err(Error::guard(
                "gamma(mu*alpha-beta)>nu",
                format!(
                    "series diverges at z={} (decay exponent {:?} must exceed 1)",
                    params.z, conv.exponent
                ),
            ))
        }
        Verdict::Unknown => {
            return Err(Error::guard(
                "tail-exponent",
                "explicit table needs a positive finite tail exponent",
            ))
        }
    }
    if params.z == 0.0 {
        return Ok(EvalResult::new(0.0, 0.0, 1, Method::Series));
    }
    let exponent = conv.exponent.unwrap_or(f64::NAN);

    let mut terms = Terms::new(params, seq);
    let mut acc = CompensatedSum::new();
    let mut term_err = 0.0f64;
    let mut best = f64::INFINITY;

    let alt_gamma = match seq {
        SequenceSpec::PowerOfIndex { gamma } if params.z == -1.0 => Some(*gamma),
        _ => None,
    };
    if let Some(gamma) = alt_gamma {
        let start = alternating_start(params, gamma);
        // decay exponent of |t_n|; above 1 the remainder splits into two
        // convergent tails, 2·Σ_even - Σ_all
        let decay = gamma * (params.alpha * params.mu - params.beta) - params.nu + 1.0;
        let mut next_refine = 0usize;
        let mut t = terms.next()?;
        loop {
            let n_done = terms.n - 1;
            // |t_{n+1}| ≤ |t_n| from `start` on, so the remainder lies between 0 and t_{n+1}
            if n_done >= 1 && n_done as f64 >= start {
                let half = 0.5 * t.value.abs();
                let rounding = term_err + acc.rounding_bound();
                let err = half + rounding + EPS * half;
                best = best.min(err);
                if err <= tol {
                    let value = acc.value() + 0.5 * t.value;
                    return Ok(EvalResult::new(value, err, n_done, Method::Series));
                }
                let room = tol - rounding - 2.0 * EPS * half;
                if decay > 1.0
                    && n_done >= 64
                    && n_done.is_multiple_of(2)
                    && n_done >= next_refine
                    && room > 0.0
                {
                    // bracket widths shrink with ε times the crude one; a block
                    // costs about as much as 20 terms
                    let scale = unit_tail_spread(params, gamma, decay, n_done);
                    let eps = (0.125 * room / scale).min(0.5);
                    let more_terms = n_done as f64 * ((half / room).powf(1.0 / decay) - 1.0);
                    let blocks = 2.0 * (8.0 * scale / room).max(2.0).ln() / (decay * eps);
                    let worth =
                        20.0 * blocks < more_terms || n_done as f64 + more_terms > budget as f64;
                    if blocks <= 0.5 * MAX_TAIL_BLOCKS as f64 && worth {
                        let target = 0.25 * room;
                        let even =
                            refined_unit_tail(params, gamma, decay, n_done / 2, 2, eps, target);
                        let all = refined_unit_tail(params, gamma, decay, n_done, 1, eps, target);
                        if let (Some((em, eh)), Some((am, ah))) = (even, all) {
                            let mid = 2.0 * em - am;
                            let err = 2.0 * eh + ah + rounding + 2.0 * EPS * (em + am);
                            best = best.min(err);
                            if err <= tol {
                                return Ok(EvalResult::new(
                                    acc.value() + mid,
                                    err,
                                    n_done,
                                    Method::Series,
                                ));
                            }
                        }
                        next_refine = n_done + (n_done / 4).max(64);
                    }
                }
                if rounding > tol {
                    break;
                }
            }
            if terms.n >= budget {
                break;
            }
            acc.add(t.value);
            term_err += t.value.abs() * t.rel_err;
            t = terms.next()?;
        }
        return Err(Error::TermBudget {
            tol,
            achieved: best,
            budget,
        });
    }

    if let SequenceSpec::ExplicitTable {
        values,
        tail_exponent,
    } = seq
    {
        for _ in 0..values.len() {
            let t = terms.next()?;
            acc.add(t.value);
            term_err += t.value.abs() * t.rel_err;
        }
        let tail = table_tail(
            params,
            values,
            *tail_exponent,
            exponent,
            terms.next_weight(),
        );
        let err = tail + term_err + acc.rounding_bound();
        if err > tol {
            return Err(Error::TermBudget {
                tol,
                achieved: err,
                budget: values.len(),
            });
        }
        return Ok(EvalResult::new(
            acc.value(),
            err,
            values.len(),
            Method::Series,
        ));
    }

    let unit_gamma = match seq {
        SequenceSpec::PowerOfIndex { gamma } if params.z == 1.0 => Some(*gamma),
        _ => None,
    };
    let mut next_refine = 0usize;
    loop {
        let t = terms.next()?;
        acc.add(t.value);
        term_err += t.value.abs() * t.rel_err;
        let n = terms.n;
        if n < 64 || n.is_multiple_of(16) {
            let next_w = terms.next_weight();
            let tail = match seq {
                SequenceSpec::PowerOfIndex { gamma } => power_tail(
                    params,
                    *gamma,
                    exponent,
                    n,
                    t.value,
                    next_w,
                    terms.next_weight_err(),
                ),
                SequenceSpec::GammaArithmetic { gamma, delta } => {
                    gamma_tail(params, *gamma, *delta, n, &t)
                }
                SequenceSpec::ExplicitTable { .. } => unreachable!(),
            };
            if let Tail::Known(mid, half) = tail {
                let rounding = term_err + acc.rounding_bound();
                let err = half + rounding + EPS * mid.abs();
                best = best.min(err);
                if err <= tol {
                    return Ok(EvalResult::new(acc.value() + mid, err, n, Method::Series));
                }
                let room = tol - rounding - 2.0 * EPS * mid.abs();
                if let (Some(gamma), true) = (unit_gamma, n >= next_refine && room > 0.0) {
                    let eps = 0.5 * room / half;
                    // the crude half-width falls like n^{-p}; a block costs
                    // about as much as 20 terms
                    let more_terms = n as f64 * ((half / room).powf(1.0 / exponent) - 1.0);
                    let blocks = (8.0 * half / room).max(2.0).ln() / (exponent * eps.min(0.5));
                    let worth = 20.0 * blocks < more_terms || n as f64 + more_terms > budget as f64;
                    if blocks <= 0.5 * MAX_TAIL_BLOCKS as f64 && worth {
                        let refined =
                            refined_unit_tail(params, gamma, exponent, n, 1, eps.min(0.5), room);
                        if let Some((mid, half)) = refined {
                            let err = half + rounding + EPS * mid.abs();
                            best = best.min(err);
                            if err <= tol {
                                return Ok(EvalResult::new(
                                    acc.value() + mid,
                                    err,
                                    n,
                                    Method::Series,
                                ));
                            }
                        }
                        next_refine = n + (n / 4).max(64);
                    }
                }
                if rounding > tol {
                    break;
                }
            }
        }
        if n >= budget {
            break;
        }
    }
    Err(Error::TermBudget {
        tol,
        achieved: best,
        budget,
    })
}

/// The classical Mathieu series S(r) = Σ 2n/(n²+r²)².
pub fn eval_s(r: f64, tol: f64) -> Result<EvalResult> {
    eval_series(
        &SeriesParams::classical(2.0, r),
        &SequenceSpec::index(),
        tol,
    )
}

/// S_μ(r) = Σ 2n/(n²+r²)^μ, convergent for μ > 1.
pub fn eval_s_mu(mu: f64, r: f64, tol: f64) -> Result<EvalResult> {
    if !(mu > 1.0) {
        return Err(Error::guard("mu>1", format!("S_μ diverges for μ={mu}")));
    }
    eval_series(&SeriesParams::classical(mu, r), &SequenceSpec::index(), tol)
}

/// The alternating variant: the series at z = -1.
pub fn eval_s_tilde(params: &SeriesParams, seq: &SequenceSpec, tol: f64) -> Result<EvalResult> {
    eval_series(&params.with_z(-1.0), seq, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::riemann_zeta;

    const ZETA3: f64 = 1.202_056_903_159_594_3;

    #[test]
    fn classical_at_zero_is_two_zeta3() {
        let r = eval_s(0.0, 1e-13).unwrap();
        assert!((r.value - 2.0 * ZETA3).abs() <= r.abs_error_bound + 1e-15);
        assert!(r.abs_error_bound <= 1e-13);
    }

    #[test]
    fn classical_references() {
        for (r, expect) in [
            (1.0, 0.794_233_542_759_318_865_583_013_6),
            (10.0, 0.009_983_299_758_493_015_491_456_171),
        ] {
            let res = eval_s(r, 1e-13).unwrap();
            assert!(
                (res.value - expect).abs() <= res.abs_error_bound,
                "r={r}: {res:?}"
            );
        }
    }

    #[test]
    fn fractional_power() {
        let res = eval_s_mu(1.5, 1.0, 1e-12).unwrap();
        assert!((res.value - 1.801_049_470_696_251_848_601_707).abs() <= res.abs_error_bound);
        let res = eval_s_mu(1.5, 0.0, 1e-11).unwrap();
        assert!((res.value - 2.0 * riemann_zeta(2.0).unwrap()).abs() <= res.abs_error_bound);
        let res = eval_s_mu(3.0, 2.0, 1e-13).unwrap();
        assert!((res.value - 0.028_371_070_570_454_025_037_359_2).abs() <= res.abs_error_bound);
        assert!(eval_s_mu(1.0, 1.0, 1e-10).unwrap_err().is_parameter_error());
    }

    #[test]
    fn zero_z() {
        let p = SeriesParams::classical(2.0, 1.0).with_z(0.0);
        assert_eq!(
            eval_series(&p, &SequenceSpec::index(), 1e-10)
                .unwrap()
                .value,
            0.0
        );
    }

    #[test]
    fn alternating_references() {
        let p = SeriesParams::new(2.0, 1.0, 2.0, 1.0, 0.0, -1.0).unwrap();
        let res = eval_s_tilde(&p, &SequenceSpec::index(), 1e-12).unwrap();
        assert!((res.value + 1.5 * ZETA3).abs() <= res.abs_error_bound);
        let p = SeriesParams::new(2.0, 1.0, 2.0, 2.0, 1.0, -1.0).unwrap();
        let res = eval_s_tilde(&p, &SequenceSpec::index(), 1e-12).unwrap();
        assert!((res.value + 0.674_599_180_199_089_960_544_796_9).abs() <= res.abs_error_bound);
    }

    #[test]
    fn inside_disc_references() {
        let p = SeriesParams::new(2.0, 1.0, 2.0, 1.5, 0.5, 0.7).unwrap();
        let res = eval_series(&p, &SequenceSpec::index(), 1e-14).unwrap();
        assert!((res.value - 1.631_366_861_757_775_061_709_42).abs() <= res.abs_error_bound);
        let seq = SequenceSpec::GammaArithmetic {
            gamma: 1.0,
            delta: 1.0,
        };
        let p = SeriesParams::new(2.0, 1.0, 2.0, 1.0, 0.5, 0.5).unwrap();
        let res = eval_series(&p, &seq, 1e-14).unwrap();
        assert!((res.value - 0.696_513_890_668_595_446_018_192_6).abs() <= res.abs_error_bound);
    }

    #[test]
    fn table_matches_power_sequence() {
        let values: Vec<f64> = (1..=4000).map(|n| n as f64).collect();
        let seq = SequenceSpec::ExplicitTable {
            values,
            tail_exponent: 1.0,
        };
        let p = SeriesParams::classical(2.0, 1.0);
        let table = eval_series(&p, &seq, 1e-7).unwrap();
        let power = eval_s(1.0, 1e-13).unwrap();
        assert!((table.value - power.value).abs() <= table.abs_error_bound + power.abs_error_bound);
        let short = SequenceSpec::ExplicitTable {
            values: vec![1.0, 2.0, 3.0],
            tail_exponent: 1.0,
        };
        assert!(matches!(
            eval_series(&p, &short, 1e-10),
            Err(Error::TermBudget { .. })
        ));
    }

    #[test]
    fn refined_tail_encloses_brute_force() {
        for nu in [0.5, 2.0, 2.5] {
            let p = SeriesParams::new(2.0, 1.0, 2.0, nu, 1.0, 1.0).unwrap();
            let exponent = 2.0 * 2.0 - 1.0 - nu + 1.0;
            let n = 1000usize;
            let (mid, half) = refined_unit_tail(&p, 1.0, exponent, n, 1, 1e-3, 1e-16).unwrap();
            // explicit terms up to m, crude bracket beyond
            let m = 2_000_000usize;
            let ln_gnu = ln_gamma(nu);
            let mut acc = CompensatedSum::new();
            for k in (n + 1..=m).rev() {
                let kf = k as f64;
                let w = (ln_gamma_ratio(kf, nu, 1.0) - ln_gnu).exp();
                acc.add(2.0 * kf * w / (kf * kf + 1.0).powi(2));
            }
            let w_next = (ln_gamma_ratio((m + 1) as f64, nu, 1.0) - ln_gnu).exp();
            let (wlo, whi) = weight_factor_bounds(nu, m + 1, w_next);
            let (lo, hi) = power_tail_bracket(m, exponent, 2.0 * wlo * 0.999, 2.0 * whi);
            let brute = acc.value() + 0.5 * (lo + hi);
            let brute_half = 0.5 * (hi - lo) + 1e-12 * brute;
            assert!(
                (mid - brute).abs() <= half + brute_half,
                "nu={nu}: {mid:e} vs {brute:e}"
            );
            // about ε times the single-block bracket
            let w_first = (ln_gamma_ratio((n + 1) as f64, nu, 1.0) - ln_gnu).exp();
            let (wlo, whi) = weight_factor_bounds(nu, n + 1, w_first);
            let (lo, hi) = power_tail_bracket(n, exponent, 2.0 * wlo * 0.999, 2.0 * whi);
            assert!(half < 1e-2 * 0.5 * (hi - lo), "nu={nu}: half {half:e}");
        }
    }

    #[test]
    fn budget_is_reported() {
        let p = SeriesParams::classical(1.05, 1.0);
        let err = eval_series_with_budget(&p, &SequenceSpec::index(), 1e-14, 1000).unwrap_err();
        assert!(matches!(err, Error::TermBudget { budget: 1000, .. }));
    }
}
