use super::report::{CheckReport, Val};
use crate::dist::MathieuDistribution;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::series::{eval_series, SequenceSpec, SeriesParams};
use crate::specfun::{ln_gamma, ln_gamma_ratio};

/// Absolute tolerance for every series operand.
pub const SERIES_TOL: f64 = 1e-13;

/// Largest partial sum used to bound a divergent operand from below.
const DIVERGENT_TERM_BUDGET: usize = 10_000_000;

fn series(p: &SeriesParams, seq: &SequenceSpec) -> Result<Val> {
    Ok(eval_series(p, seq, SERIES_TOL)?.into())
}

/// S_{μ,ν}^{(α,β)} for a_n = n, z = 1.
fn classical(alpha: f64, beta: f64, mu: f64, nu: f64, r: f64) -> Result<Val> {
    series(
        &SeriesParams::new(alpha, beta, mu, nu, r, 1.0)?,
        &SequenceSpec::index(),
    )
}

fn point(p: &SeriesParams) -> Vec<(&'static str, f64)> {
    vec![
        ("alpha", p.alpha),
        ("beta", p.beta),
        ("mu", p.mu),
        ("nu", p.nu),
        ("z", p.z),
    ]
}

fn unit_interval_z(p: &SeriesParams) -> Result<()> {
    if !(0.0..=1.0).contains(&p.z) {
        return Err(Error::invalid(format!(
            "the check needs 0 ≤ z ≤ 1, got z = {}",
            p.z
        )));
    }
    Ok(())
}

/// f(x) = S(√x).
fn f_sqrt(p: &SeriesParams, seq: &SequenceSpec, x: f64) -> Result<Val> {
    series(&p.with_r(x.sqrt()), seq)
}

/// ζ_{μ,ν}(α,β,z) = Σ (ν)_n zⁿ/(n! a_n^{αμ-β}) = S(0)/2.
fn zeta_weight(p: &SeriesParams, seq: &SequenceSpec, mu: f64) -> Result<Val> {
    let q = SeriesParams { mu, r: 0.0, ..*p };
    Ok(series(&q, seq)?.scale(0.5))
}

fn binom(k: usize, j: usize) -> f64 {
    (0..j).fold(1.0, |c, i| c * (k - i) as f64 / (i + 1) as f64)
}

/// (-1)^k Δ_h^k f(x) ≥ 0 for f(x) = S(√x) and k = 0..=order_max at every
/// grid point.
pub fn check_complete_monotonicity(
    params: &SeriesParams,
    seq: &SequenceSpec,
    order_max: usize,
    grid: &[f64],
    h: f64,
) -> Result<Vec<CheckReport>> {
    unit_interval_z(params)?;
    if !(h > 0.0) {
        return Err(Error::invalid(format!("step h must be positive, got {h}")));
    }
    let mut out = Vec::new();
    for &x in grid {
        let values = (0..=order_max)
            .map(|j| f_sqrt(params, seq, x + j as f64 * h))
            .collect::<Result<Vec<_>>>()?;
        for k in 0..=order_max {
            // (-1)^k Δ^k f(x) = Σ_j (-1)^j C(k,j) f(x + jh)
            let mut acc = Val::exact(0.0);
            let mut pos = 0.0;
            let mut neg = 0.0;
            for (j, v) in values.iter().enumerate().take(k + 1) {
                let c = binom(k, j);
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc = acc.add(v.scale(sign * c));
                if sign > 0.0 {
                    pos += c * v.v;
                } else {
                    neg += c * v.v;
                }
            }
            let mut gp = point(params);
            gp.extend([("x", x), ("h", h), ("k", k as f64)]);
            out.push(CheckReport::new("monotone", gp, pos, neg, acc.e));
        }
    }
    Ok(out)
}

/// λ ln f(x₁) + (1-λ) ln f(x₂) ≥ ln f(λx₁ + (1-λ)x₂) for f(x) = S(√x).
pub fn check_log_convexity(
    params: &SeriesParams,
    seq: &SequenceSpec,
    pairs: &[(f64, f64)],
    lambda: f64,
) -> Result<Vec<CheckReport>> {
    unit_interval_z(params)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::invalid(format!(
            "λ must lie in (0, 1), got {lambda}"
        )));
    }
    let mut out = Vec::new();
    for &(x1, x2) in pairs {
        let a = f_sqrt(params, seq, x1)?.ln();
        let b = f_sqrt(params, seq, x2)?.ln();
        let m = f_sqrt(params, seq, lambda * x1 + (1.0 - lambda) * x2)?.ln();
        let lhs = a.scale(lambda).add(b.scale(1.0 - lambda));
        let mut gp = point(params);
        gp.extend([("x1", x1), ("x2", x2), ("lambda", lambda)]);
        out.push(CheckReport::new("logconvex", gp, lhs.v, m.v, lhs.e + m.e));
    }
    Ok(out)
}

/// [f((x₁+x₂)/2)]² ≤ f(x₁)f(x₂) ≤ 2ζ_{μ,ν} f(x₁+x₂) for f(x) = S(√x).
pub fn check_chain_001(
    params: &SeriesParams,
    seq: &SequenceSpec,
    r1: f64,
    r2: f64,
) -> Result<[CheckReport; 2]> {
    unit_interval_z(params)?;
    let zeta = zeta_weight(params, seq, params.mu)?;
    let f1 = f_sqrt(params, seq, r1)?;
    let f2 = f_sqrt(params, seq, r2)?;
    let fm = f_sqrt(params, seq, 0.5 * (r1 + r2))?;
    let fs = f_sqrt(params, seq, r1 + r2)?;
    let prod = f1.mul(f2);
    let mid2 = fm.mul(fm);
    let right = zeta.scale(2.0).mul(fs);
    let mut gp = point(params);
    gp.extend([("r1", r1), ("r2", r2)]);
    let left = CheckReport::new("001-left", gp.clone(), prod.v, mid2.v, prod.e + mid2.e);
    let right = CheckReport::new("001-right", gp, right.v, prod.v, right.e + prod.e);
    Ok([left, right])
}

/// 2ζ_{μ,ν} exp(-μ r² ζ_{μ+1,ν}/ζ_{μ,ν}) ≤ S(r).
pub fn check_lower_bound_002(
    params: &SeriesParams,
    seq: &SequenceSpec,
    r: f64,
) -> Result<CheckReport> {
    unit_interval_z(params)?;
    let z0 = zeta_weight(params, seq, params.mu)?;
    let z1 = zeta_weight(params, seq, params.mu + 1.0)?;
    let s = series(&params.with_r(r), seq)?;
    let bound = z0
        .scale(2.0)
        .mul(z1.div(z0).scale(-params.mu * r * r).exp());
    let mut gp = point(params);
    gp.push(("r", r));
    Ok(CheckReport::new("002", gp, s.v, bound.v, s.e + bound.e))
}

/// 2ζ(2μ-1) exp(-μ r² ζ(2μ+1)/ζ(2μ-1)) ≤ S_μ(r): the classical case of
/// [`check_lower_bound_002`].
pub fn check_re1(mu: f64, r: f64) -> Result<CheckReport> {
    if !(mu > 1.0) {
        return Err(Error::guard("mu>1", format!("μ = {mu}")));
    }
    let p = SeriesParams::classical(mu, r);
    let mut rep = check_lower_bound_002(&p, &SequenceSpec::index(), r)?;
    rep.check_id = "re1".into();
    Ok(rep.with_note(
        "exponent ratio taken as ζ(2μ+1)/ζ(2μ-1); the printed denominator (2μ-1) lacks ζ",
    ))
}

/// S^{(2,1)}_{μ,ν} S^{(2,3)}_{μ,ν} ≥ [S^{(2,2)}_{μ,ν}]².
pub fn check_zzkk(mu: f64, nu: f64, r: f64) -> Result<CheckReport> {
    if !(2.0 * mu - 3.0 > nu) {
        return Err(Error::guard(
            "2mu-3>nu",
            format!("S^(2,3) diverges: 2μ-3 = {} ≤ ν = {nu}", 2.0 * mu - 3.0),
        ));
    }
    let a = classical(2.0, 1.0, mu, nu, r)?;
    let c = classical(2.0, 3.0, mu, nu, r)?;
    let b = classical(2.0, 2.0, mu, nu, r)?;
    let lhs = a.mul(c);
    let rhs = b.mul(b);
    Ok(CheckReport::new(
        "zzkk",
        vec![("mu", mu), ("nu", nu), ("r", r)],
        lhs.v,
        rhs.v,
        lhs.e + rhs.e,
    )
    .with_note("guard 2μ-3 > ν is stronger than the stated μ > 1"))
}

/// [S₂(r)]² ≥ 2 S₃(r) for the classical series.
pub fn check_wilkins(r: f64) -> Result<CheckReport> {
    let s2 = classical(2.0, 1.0, 2.0, 1.0, r)?;
    let s3 = classical(2.0, 1.0, 3.0, 1.0, r)?;
    let lhs = s2.mul(s2);
    let rhs = s3.scale(2.0);
    Ok(CheckReport::new(
        "wilkins",
        vec![("r", r)],
        lhs.v,
        rhs.v,
        lhs.e + rhs.e,
    ))
}

/// Lower bound for the partial sum Σ_{n≤N} 2n³(ν)_n/((n²+r²)² n!) of the
/// divergent S^{(2,3)}_{2,ν} (ν ≥ 1).
struct DivergentPartial {
    nu: f64,
    r2: f64,
    n: usize,
    acc: CompensatedSum,
    term_err: f64,
}

impl DivergentPartial {
    fn advance_to(&mut self, n_max: usize) {
        while self.n < n_max {
            self.n += 1;
            let nf = self.n as f64;
            let lw = ln_gamma_ratio(nf, self.nu, 1.0) - ln_gamma(self.nu);
            let t = (2f64.ln() + 3.0 * nf.ln() + lw).exp() / (nf * nf + self.r2).powi(2);
            self.acc.add(t);
            self.term_err += t * 1e-13;
        }
    }

    fn lower(&self) -> Val {
        let e = self.term_err + self.acc.rounding_bound();
        Val::new(self.acc.value() - e, e)
    }
}

/// (MM) in its convergent rearrangement
///
/// ```text
/// S^{(2,3)}_{2,ν} S^{(2,1)}_{2,ν} + r² [S^{(2,1)}_{2,ν}]² ≥ [S^{(2,2)}_{2,1}]² + 2r² S^{(2,1)}_{3,1}.
/// ```
///
/// S^{(2,3)}_{2,ν} has terms ~ 2n^{ν-2} and diverges for ν ≥ 1, so the left
/// side is bounded below by partial sums, grown until the inequality is
/// certified or the term budget runs out.
pub fn check_mm(nu: f64, r: f64) -> Result<CheckReport> {
    if !(nu >= 1.0) {
        return Err(Error::invalid(format!(
            "(MM) is stated for ν ≥ 1, got {nu}"
        )));
    }
    if !(nu < 3.0) {
        return Err(Error::guard(
            "4-nu>1",
            format!("S^(2,1)_(2,ν) diverges for ν = {nu} ≥ 3"),
        ));
    }
    let a = classical(2.0, 1.0, 2.0, nu, r)?;
    let b = classical(2.0, 2.0, 2.0, 1.0, r)?;
    let c = classical(2.0, 1.0, 3.0, 1.0, r)?;
    let r2 = r * r;
    let rhs = b.mul(b).add(c.scale(2.0 * r2));
    let fixed = a.mul(a).scale(r2);
    let mut partial = DivergentPartial {
        nu,
        r2,
        n: 0,
        acc: CompensatedSum::new(),
        term_err: 0.0,
    };
    let mut n = 16usize;
    let gp = vec![("nu", nu), ("r", r)];
    loop {
        partial.advance_to(n);
        let lhs = partial.lower().mul(a).add(fixed);
        let rep = CheckReport::new("mm", gp.clone(), lhs.v, rhs.v, lhs.e + rhs.e);
        let done = rep.margin > rep.error_budget || n >= DIVERGENT_TERM_BUDGET;
        if done {
            return Ok(rep
                .with_note(format!(
                    "S^(2,3)_(2,ν) diverges for ν ≥ 1; left side uses its partial sum over n ≤ {n} as a lower bound"
                ))
                .with_note("printed form S_(1,ν) S_(2,ν) also has a divergent factor; only the rearranged form is computed"));
        }
        n = (2 * n).min(DIVERGENT_TERM_BUDGET);
    }
}

/// S^{(α,α+2)} S^{(α,α)} ≥ [S^{(α,α+1)}]². The margin and its error are the
/// distribution's [`MathieuDistribution::turan_margin`].
pub fn check_turan(alpha: f64, mu: f64, nu: f64, r: f64) -> Result<CheckReport> {
    let d = MathieuDistribution::new(alpha, alpha, mu, nu, r, SERIES_TOL)?;
    let m = d.turan_margin()?;
    let s0 = classical(alpha, alpha, mu, nu, r)?;
    let s1 = classical(alpha, alpha + 1.0, mu, nu, r)?;
    let s2 = classical(alpha, alpha + 2.0, mu, nu, r)?;
    let lhs = s2.mul(s0);
    let rhs = s1.mul(s1);
    Ok(CheckReport::with_margin(
        "turan",
        vec![("alpha", alpha), ("mu", mu), ("nu", nu), ("r", r)],
        lhs.v,
        rhs.v,
        m.value,
        m.abs_error_bound,
    ))
}
