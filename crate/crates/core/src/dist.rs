//! The Mathieu distribution on n = 1, 2, ...
//!
//! ```text
//! P(X = n) = 2 n^β (ν)_n / ((n^α + r²)^μ n! S_{μ,ν}^{(α,β)}(r)),
//! ```
//!
//! with β = α in the classical family and β = 1, α = 2 for the law whose
//! characteristic function has a Bessel-kernel representation.

use std::f64::consts::TAU;
use std::sync::RwLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::{power_tail_bracket, CompensatedSum, EPS};
use crate::result::{ComplexEvalResult, EvalResult, Method};
use crate::series::{alternating_start, eval_series, SequenceSpec, SeriesParams};
use crate::specfun::{ln_gamma, ln_gamma_ratio, weight_factor_bounds};

/// Largest support point kept in the CDF table; beyond it the sampler
/// inverts the asymptotic tail.
const CDF_CAP: usize = 1 << 22;

#[derive(Debug, Default)]
struct CdfCache {
    cdf: Vec<f64>,
    acc: CompensatedSum,
}

/// A Mathieu distribution with its precomputed normalizer.
#[derive(Debug)]
pub struct MathieuDistribution {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub nu: f64,
    pub r: f64,
    /// S_{μ,ν}^{(α,β)}(r).
    pub normalizer: f64,
    pub norm_error: f64,
    tol: f64,
    ln_norm: f64,
    cache: RwLock<CdfCache>,
}

impl Clone for MathieuDistribution {
    fn clone(&self) -> Self {
        MathieuDistribution {
            cache: RwLock::new(CdfCache::default()),
            ..*self
        }
    }
}

fn series_params(alpha: f64, beta: f64, mu: f64, nu: f64, r: f64) -> Result<SeriesParams> {
    SeriesParams::new(alpha, beta, mu, nu, r, 1.0)
}

/// P^{(α,α)}_{μ,ν}(r) with its normalizer summed to absolute error `tol`.
pub fn make_distribution(
    alpha: f64,
    mu: f64,
    nu: f64,
    r: f64,
    tol: f64,
) -> Result<MathieuDistribution> {
    MathieuDistribution::new(alpha, alpha, mu, nu, r, tol)
}

/// P^{(2,1)}_{μ+1,ν}(r), the law behind the Bessel-kernel characteristic
/// function.
pub fn charfn_distribution(mu: f64, nu: f64, r: f64, tol: f64) -> Result<MathieuDistribution> {
    MathieuDistribution::new(2.0, 1.0, mu + 1.0, nu, r, tol)
}

impl MathieuDistribution {
    pub fn new(alpha: f64, beta: f64, mu: f64, nu: f64, r: f64, tol: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::invalid(format!("r must be positive, got {r}")));
        }
        let p = series_params(alpha, beta, mu, nu, r)?;
        if !(alpha * mu - beta > nu) {
            return Err(Error::guard(
                "alpha*mu-beta>nu",
                format!(
                    "αμ - β = {} ≤ ν = {nu}: the normalizing series diverges",
                    alpha * mu - beta
                ),
            ));
        }
        let s = eval_series(&p, &SequenceSpec::index(), tol)?;
        Ok(MathieuDistribution {
            alpha,
            beta,
            mu,
            nu,
            r,
            normalizer: s.value,
            norm_error: s.abs_error_bound,
            tol,
            ln_norm: s.value.ln(),
            cache: RwLock::new(CdfCache::default()),
        })
    }

    /// ln of the unnormalized mass 2 n^β (ν)_n / ((n^α + r²)^μ n!).
    fn ln_mass(&self, n: u64) -> f64 {
        let nf = n as f64;
        let ln_w = ln_gamma_ratio(nf, self.nu, 1.0) - ln_gamma(self.nu);
        let ln_a = self.alpha * nf.ln();
        let ln_den = ln_a + (self.r * self.r * (-ln_a).exp()).ln_1p();
        2f64.ln() + self.beta * nf.ln() + ln_w - self.mu * ln_den
    }

    /// P(X = n).
    pub fn pmf(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain("the support is n = 1, 2, ...".into()));
        }
        Ok((self.ln_mass(n) - self.ln_norm).exp())
    }

    /// P(X ≤ n), from a grow-only cached table.
    pub fn cdf(&self, n: u64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let n = n as usize;
        if n > CDF_CAP {
            return (1.0 - self.tail_mass(n as u64)).clamp(0.0, 1.0);
        }
        {
            let cache = self.cache.read().unwrap_or_else(|e| e.into_inner());
            if let Some(v) = cache.cdf.get(n - 1) {
                return *v;
            }
        }
        let mut cache = self.cache.write().unwrap_or_else(|e| e.into_inner());
        self.extend(&mut cache, n);
        cache.cdf[n - 1]
    }

    fn extend(&self, cache: &mut CdfCache, len: usize) {
        while cache.cdf.len() < len {
            let k = cache.cdf.len() as u64 + 1;
            cache.acc.add(self.pmf(k).unwrap_or(0.0));
            let prev = cache.cdf.last().copied().unwrap_or(0.0);
            cache.cdf.push(cache.acc.value().max(prev));
        }
    }

    /// Terms decay like n^{-p} at infinity.
    fn decay_exponent(&self, extra: f64) -> f64 {
        self.alpha * self.mu - self.beta - extra - self.nu + 1.0
    }

    /// Approximate P(X > n) from the local power law of the mass.
    fn tail_mass(&self, n: u64) -> f64 {
        let p = self.decay_exponent(0.0);
        let c = self.pmf(n).unwrap_or(0.0) * (n as f64).powf(p);
        c * (n as f64 + 0.5).powf(1.0 - p) / (p - 1.0)
    }

    /// S^{(α,β+k)}_{μ,ν}(r) with the k-th moment guard.
    fn shifted(&self, k: u32) -> Result<EvalResult> {
        let beta = self.beta + k as f64;
        if !(self.alpha * self.mu - beta > self.nu) {
            return Err(Error::guard(
                "alpha*mu-(beta+k)>nu",
                format!(
                    "moment of order {k} is infinite: αμ - (β+{k}) = {} ≤ ν = {}",
                    self.alpha * self.mu - beta,
                    self.nu
                ),
            ));
        }
        let p = series_params(self.alpha, beta, self.mu, self.nu, self.r)?;
        eval_series(&p, &SequenceSpec::index(), self.tol)
    }

    fn norm_result(&self) -> EvalResult {
        EvalResult::new(self.normalizer, self.norm_error, 0, Method::Series)
    }

    /// EX = S^{(α,β+1)}/S^{(α,β)}.
    pub fn mean(&self) -> Result<EvalResult> {
        let s1 = self.shifted(1)?;
        Ok(ratio(&s1, &self.norm_result()))
    }

    /// (S^{(α,β+2)} S^{(α,β)} - [S^{(α,β+1)}]²)/(S^{(α,β)})².
    pub fn variance(&self) -> Result<EvalResult> {
        let m = self.turan_margin()?;
        let s0 = self.norm_result();
        Ok(ratio(&m, &product(&s0, &s0)))
    }

    /// S^{(α,β+2)} S^{(α,β)} - [S^{(α,β+1)}]², nonnegative by the Turán
    /// inequality.
    pub fn turan_margin(&self) -> Result<EvalResult> {
        let s1 = self.shifted(1)?;
        let s2 = self.shifted(2)?;
        let a = product(&s2, &self.norm_result());
        let b = product(&s1, &s1);
        let value = a.value - b.value;
        let err = a.abs_error_bound + b.abs_error_bound + EPS * (a.value.abs() + b.value.abs());
        Ok(EvalResult::new(
            value,
            err,
            s1.terms_used + s2.terms_used,
            Method::Series,
        ))
    }

    /// E[e^{itX}] by direct complex summation. The tail is bounded by the
    /// total remaining mass or, for t ≢ 0 mod 2π, by summation by parts
    /// once the masses decrease: |Σ_{n>N} m_n e^{itn}| ≤ m_{N+1}/|sin(t/2)|.
    pub fn charfn(&self, t: f64, tol: f64) -> Result<ComplexEvalResult> {
        if !t.is_finite() {
            return Err(Error::invalid(format!("t must be finite, got {t}")));
        }
        if !(tol > 0.0) {
            return Err(Error::invalid(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        if t.rem_euclid(TAU) == 0.0 {
            return Ok(EvalResult::new(
                Complex64::new(1.0, 0.0),
                0.0,
                0,
                Method::CharfnSeries,
            ));
        }
        let sin_half = (0.5 * t).sin().abs();
        let p = self.decay_exponent(0.0);
        let params = series_params(self.alpha, self.beta, self.mu, self.nu, self.r)?;
        let start = alternating_start(&params, 1.0).max(1.0) as u64;
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        let mut n = 0u64;
        let tail = loop {
            n += 1;
            let m = (self.ln_mass(n) - self.ln_norm).exp();
            let (s, c) = (t * n as f64).sin_cos();
            re.add(m * c);
            im.add(m * s);
            if n >= start && (n < 64 || n.is_multiple_of(16)) {
                let next = (self.ln_mass(n + 1) - self.ln_norm).exp();
                let abel = if sin_half > 0.0 {
                    next / sin_half
                } else {
                    f64::INFINITY
                };
                // m_k ≤ 2 (ν)_k/k!·k^{1-ν}·k^{-p}/S and the weight factor is monotone
                let k = n as usize + 1;
                let w = (ln_gamma_ratio(k as f64, self.nu, 1.0) - ln_gamma(self.nu)).exp();
                let (_, whi) = weight_factor_bounds(self.nu, k, w);
                let hi = 2.0 * whi / self.normalizer * (1.0 + 1e-12);
                let (_, mass) = power_tail_bracket(n as usize, p, 0.0, hi);
                let bound = abel.min(mass);
                if bound <= 0.5 * tol {
                    break bound;
                }
            }
            if n >= 100_000_000 {
                return Err(Error::TermBudget {
                    tol,
                    achieved: f64::INFINITY,
                    budget: n as usize,
                });
            }
        };
        let value = Complex64::new(re.value(), im.value());
        let err = tail
            + re.rounding_bound()
            + im.rounding_bound()
            + 8.0 * EPS * (n as f64).sqrt() * (re.abs_sum() + im.abs_sum())
            + value.norm() * self.norm_error / self.normalizer;
        Ok(EvalResult::new(
            value,
            err,
            n as usize,
            Method::CharfnSeries,
        ))
    }

    /// `count` draws by inverse CDF, deterministic for a given seed.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| self.invert(rng.random::<f64>()))
            .collect()
    }

    fn invert(&self, u: f64) -> u64 {
        {
            let cache = self.cache.read().unwrap_or_else(|e| e.into_inner());
            if cache.cdf.last().is_some_and(|&last| u < last) {
                return cache.cdf.partition_point(|&c| c <= u) as u64 + 1;
            }
        }
        let mut cache = self.cache.write().unwrap_or_else(|e| e.into_inner());
        let mut len = cache.cdf.len().max(64);
        while cache.cdf.last().is_none_or(|&last| u >= last) && cache.cdf.len() < CDF_CAP {
            self.extend(&mut cache, len);
            len = (2 * len).min(CDF_CAP);
        }
        if cache.cdf.last().is_some_and(|&last| u < last) {
            return cache.cdf.partition_point(|&c| c <= u) as u64 + 1;
        }
        // invert the power-law tail P(X > n) ≈ c (n + 1/2)^{1-p}/(p-1)
        let n0 = cache.cdf.len() as u64;
        let p = self.decay_exponent(0.0);
        let c = self.pmf(n0).unwrap_or(0.0) * (n0 as f64).powf(p);
        let q = (1.0 - u).max(f64::MIN_POSITIVE);
        let n = ((q * (p - 1.0) / c).powf(1.0 / (1.0 - p)) - 0.5).ceil();
        if n.is_finite() && n < u64::MAX as f64 {
            (n as u64).max(n0 + 1)
        } else {
            u64::MAX
        }
    }
}

fn ratio(a: &EvalResult, b: &EvalResult) -> EvalResult {
    let v = a.value / b.value;
    let err = a.abs_error_bound / b.value.abs()
        + v.abs() * b.abs_error_bound / (b.value.abs() - b.abs_error_bound).max(f64::MIN_POSITIVE)
        + 2.0 * EPS * v.abs();
    EvalResult::new(v, err, a.terms_used + b.terms_used, Method::Series)
}

fn product(a: &EvalResult, b: &EvalResult) -> EvalResult {
    let v = a.value * b.value;
    let err = a.abs_error_bound * b.value.abs()
        + b.abs_error_bound * a.value.abs()
        + a.abs_error_bound * b.abs_error_bound
        + 2.0 * EPS * v.abs();
    EvalResult::new(v, err, a.terms_used + b.terms_used, Method::Series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn normalizer_and_first_mass() {
        let d = make_distribution(2.0, 3.0, 1.0, 1.0, 1e-14).unwrap();
        let mut brute = 0.0;
        for n in (1..200_000u64).rev() {
            let nf = n as f64;
            brute += 2.0 * nf * nf / (nf * nf + 1.0).powi(3);
        }
        // tail ~ Σ 2/n⁴ beyond 2·10⁵
        assert!((d.normalizer - brute).abs() < 1e-15 + 2.0 / (3.0 * 2e5f64.powi(3)));
        assert!((d.pmf(1).unwrap() - 0.25 / d.normalizer).abs() < 1e-15);
        assert!(d.pmf(0).is_err());
    }

    #[test]
    fn divergent_parameters_rejected() {
        let e = make_distribution(2.0, 1.0, 1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(e, Error::Guard { .. }));
    }

    #[test]
    fn cdf_is_monotone_and_tends_to_one() {
        let d = make_distribution(2.0, 4.0, 2.0, 0.5, 1e-14).unwrap();
        let mut prev = 0.0;
        for n in 1..2000 {
            let c = d.cdf(n);
            assert!(c >= prev);
            prev = c;
        }
        assert!((d.cdf(100_000) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn moments_and_turan() {
        let d = make_distribution(3.0, 3.0, 2.0, 1.0, 1e-14).unwrap();
        let mean = d.mean().unwrap();
        let var = d.variance().unwrap();
        let m = d.turan_margin().unwrap();
        assert!(var.value >= 0.0 && m.value >= -m.abs_error_bound);
        let (mut s1, mut s2) = (0.0, 0.0);
        for n in 1..100_000u64 {
            let p = d.pmf(n).unwrap();
            s1 += n as f64 * p;
            s2 += (n * n) as f64 * p;
        }
        assert!((mean.value - s1).abs() < 1e-9);
        assert!((var.value - (s2 - s1 * s1)).abs() < 1e-8);
        let scaled = var.value * d.normalizer * d.normalizer;
        assert!((scaled - m.value).abs() < 1e-12 * m.value.abs().max(1.0));
        assert!(make_distribution(2.0, 3.0, 2.0, 1.0, 1e-12)
            .unwrap()
            .variance()
            .is_err());
    }

    #[test]
    fn charfn_properties() {
        let d = charfn_distribution(1.0, 1.0, 1.0, 1e-14).unwrap();
        assert_eq!(
            d.charfn(0.0, 1e-12).unwrap().value,
            Complex64::new(1.0, 0.0)
        );
        for &t in &[0.3, 1.0, -2.0, 5.0] {
            let f = d.charfn(t, 1e-12).unwrap();
            assert!(f.value.norm() <= 1.0 + f.abs_error_bound);
            let g = d.charfn(-t, 1e-12).unwrap();
            assert!((f.value - g.value.conj()).norm() < 1e-13);
        }
        // t = π/3, brute force
        let t = PI / 3.0;
        let f = d.charfn(t, 1e-12).unwrap();
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 1..1_000_000u64 {
            let nf = n as f64;
            acc += Complex64::from_polar(2.0 * nf / (nf * nf + 1.0).powi(2), t * nf);
        }
        let brute = acc / d.normalizer;
        assert!((f.value - brute).norm() < 1e-11, "{} vs {}", f.value, brute);
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = make_distribution(2.0, 3.0, 1.0, 1.0, 1e-14).unwrap();
        let a = d.sample(1000, 7);
        let b = d.clone().sample(1000, 7);
        assert_eq!(a, b);
        assert!(a.iter().all(|&n| n >= 1));
        assert_ne!(a, d.sample(1000, 8));
    }
}
