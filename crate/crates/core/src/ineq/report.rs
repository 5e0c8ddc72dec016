use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::result::EvalResult;

/// Safety factor applied to propagated operand errors.
pub const BUDGET_FACTOR: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckVerdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for CheckVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckVerdict::Pass => "pass",
            CheckVerdict::Fail => "fail",
            CheckVerdict::Inconclusive => "inconclusive",
        })
    }
}

/// One inequality check at one grid point. `margin ≥ 0` means the
/// inequality holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    /// Named parameters in a fixed order.
    pub grid_point: Vec<(String, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub error_budget: f64,
    pub verdict: CheckVerdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    /// Builds a report for `greater ≥ lesser` with the given operand error.
    pub(crate) fn new(
        check_id: &str,
        grid_point: Vec<(&str, f64)>,
        greater: f64,
        lesser: f64,
        operand_error: f64,
    ) -> Self {
        let margin = greater - lesser;
        let error_budget = BUDGET_FACTOR * operand_error;
        CheckReport {
            check_id: check_id.to_string(),
            grid_point: grid_point
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            lhs: greater,
            rhs: lesser,
            margin,
            error_budget,
            verdict: verdict(margin, error_budget),
            notes: Vec::new(),
        }
    }

    /// Like [`new`](Self::new) but with a margin computed separately from
    /// the two sides.
    pub(crate) fn with_margin(
        check_id: &str,
        grid_point: Vec<(&str, f64)>,
        lhs: f64,
        rhs: f64,
        margin: f64,
        margin_error: f64,
    ) -> Self {
        let error_budget = BUDGET_FACTOR * margin_error;
        CheckReport {
            lhs,
            rhs,
            margin,
            error_budget,
            verdict: verdict(margin, error_budget),
            ..Self::new(check_id, grid_point, lhs, rhs, 0.0)
        }
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub(crate) fn inconclusive(check_id: &str, grid_point: Vec<(&str, f64)>, note: String) -> Self {
        CheckReport {
            check_id: check_id.to_string(),
            grid_point: grid_point
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            error_budget: f64::NAN,
            verdict: CheckVerdict::Inconclusive,
            notes: vec![note],
        }
    }

    /// Ordering used for deterministic aggregation: check id, then grid
    /// point values.
    pub fn sort_key_cmp(&self, other: &Self) -> Ordering {
        self.check_id.cmp(&other.check_id).then_with(|| {
            for (a, b) in self.grid_point.iter().zip(&other.grid_point) {
                let o = a.0.cmp(&b.0).then(a.1.total_cmp(&b.1));
                if o != Ordering::Equal {
                    return o;
                }
            }
            self.grid_point.len().cmp(&other.grid_point.len())
        })
    }
}

fn verdict(margin: f64, budget: f64) -> CheckVerdict {
    if margin.is_nan() || budget.is_nan() {
        CheckVerdict::Inconclusive
    } else if margin < -budget {
        CheckVerdict::Fail
    } else if margin > budget {
        CheckVerdict::Pass
    } else {
        CheckVerdict::Inconclusive
    }
}

/// A value with an absolute error, closed under the few operations the
/// checks need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Val {
    pub v: f64,
    pub e: f64,
}

impl Val {
    pub fn new(v: f64, e: f64) -> Self {
        Val { v, e }
    }

    pub fn exact(v: f64) -> Self {
        Val { v, e: 0.0 }
    }

    pub fn mul(self, o: Val) -> Val {
        let v = self.v * o.v;
        Val::new(
            v,
            self.e * o.v.abs() + o.e * self.v.abs() + self.e * o.e + f64::EPSILON * v.abs(),
        )
    }

    pub fn add(self, o: Val) -> Val {
        let v = self.v + o.v;
        Val::new(v, self.e + o.e + f64::EPSILON * v.abs())
    }

    pub fn scale(self, c: f64) -> Val {
        Val::new(
            c * self.v,
            c.abs() * self.e + f64::EPSILON * (c * self.v).abs(),
        )
    }

    pub fn div(self, o: Val) -> Val {
        let v = self.v / o.v;
        let lo = (o.v.abs() - o.e).max(f64::MIN_POSITIVE);
        Val::new(v, (self.e + v.abs() * o.e) / lo + f64::EPSILON * v.abs())
    }

    /// ln with error e/(v - e).
    pub fn ln(self) -> Val {
        let lo = (self.v - self.e).max(f64::MIN_POSITIVE);
        let v = self.v.ln();
        Val::new(v, self.e / lo + f64::EPSILON * v.abs())
    }

    /// exp with error propagated through the derivative at the upper end.
    pub fn exp(self) -> Val {
        let v = self.v.exp();
        Val::new(v, (self.v + self.e).exp() * self.e + f64::EPSILON * v)
    }
}

impl From<EvalResult> for Val {
    fn from(r: EvalResult) -> Self {
        Val::new(r.value, r.abs_error_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_rules() {
        let r = CheckReport::new("x", vec![], 1.0, 0.5, 0.01);
        assert_eq!(r.verdict, CheckVerdict::Pass);
        assert_eq!(r.error_budget, 0.04);
        let r = CheckReport::new("x", vec![], 0.5, 0.51, 0.01);
        assert_eq!(r.verdict, CheckVerdict::Inconclusive);
        let r = CheckReport::new("x", vec![], 0.5, 0.6, 0.01);
        assert_eq!(r.verdict, CheckVerdict::Fail);
    }

    #[test]
    fn val_arithmetic_bounds() {
        let a = Val::new(2.0, 0.1);
        let b = Val::new(3.0, 0.2);
        let p = a.mul(b);
        assert!(p.e >= 0.1 * 3.0 + 0.2 * 2.0);
        let q = a.div(b);
        assert!((q.v - 2.0 / 3.0).abs() < 1e-15 && q.e > 0.0);
    }
}
