use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Identifies the route that produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Certified direct summation of the defining series.
    Series,
    /// Fox-Wright ₁Ψ₁ kernel integral.
    Theorem1,
    /// ₁F_q kernel integral for a_n = n^{q/α}.
    Remark3,
    /// Fourier-type integral over [1, ∞) at μ = 3/2.
    Theorem2,
    /// Outer binomial series over β-Mittag-Leffler functions.
    MittagLeffler,
    /// Difference of two conjugate Hurwitz-Lerch Φ* values.
    PhiStar,
    /// Plain quadrature of a user integrand.
    Quadrature,
    /// Characteristic function by direct complex summation.
    CharfnSeries,
    /// Characteristic function by the Bessel-kernel integral.
    CharfnIntegral,
    /// A special function summed from its own series.
    SpecialFunction,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Theorem1 => "theorem1",
            Method::Remark3 => "remark3",
            Method::Theorem2 => "theorem2",
            Method::MittagLeffler => "mittag-leffler",
            Method::PhiStar => "phi-star",
            Method::Quadrature => "quadrature",
            Method::CharfnSeries => "charfn-series",
            Method::CharfnIntegral => "charfn-integral",
            Method::SpecialFunction => "special-function",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let all = [
            Method::Series,
            Method::Theorem1,
            Method::Remark3,
            Method::Theorem2,
            Method::MittagLeffler,
            Method::PhiStar,
            Method::Quadrature,
            Method::CharfnSeries,
            Method::CharfnIntegral,
            Method::SpecialFunction,
        ];
        all.into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// A computed value together with a bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult<T = f64> {
    pub value: T,
    pub abs_error_bound: f64,
    /// Series terms or quadrature nodes consumed.
    pub terms_used: usize,
    pub method: Method,
}

impl<T> EvalResult<T> {
    pub fn new(value: T, abs_error_bound: f64, terms_used: usize, method: Method) -> Self {
        EvalResult {
            value,
            abs_error_bound,
            terms_used,
            method,
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }
}

impl EvalResult<f64> {
    /// Whether `other` lies within the combined error bars of both results.
    pub fn agrees_with(&self, other: &EvalResult<f64>) -> bool {
        (self.value - other.value).abs() <= self.abs_error_bound + other.abs_error_bound
    }

    /// Closed interval `[value - bound, value + bound]`.
    pub fn interval(&self) -> (f64, f64) {
        (
            self.value - self.abs_error_bound,
            self.value + self.abs_error_bound,
        )
    }
}

pub type ComplexEvalResult = EvalResult<Complex64>;
