use mathieu_core::dist::MathieuDistribution;
use mathieu_core::series::{eval_series, SequenceSpec, SeriesParams};
use mathieu_core::specfun::{
    fox_wright_11, hypergeometric_pfq, FoxWright11Params, HypergeometricParams,
};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    /// Every term decreases in r, so S does too.
    #[test]
    fn series_decreases_in_r(
        mu in 1.5f64..4.0,
        nu in 0.25f64..1.0,
        z in 0.1f64..1.0,
        r in 0.0f64..5.0,
        dr in 0.05f64..2.0,
    ) {
        let seq = SequenceSpec::index();
        let a = eval_series(&SeriesParams::new(2.0, 1.0, mu, nu, r, z).unwrap(), &seq, 1e-12).unwrap();
        let b = eval_series(&SeriesParams::new(2.0, 1.0, mu, nu, r + dr, z).unwrap(), &seq, 1e-12).unwrap();
        prop_assert!(b.value <= a.value + a.abs_error_bound + b.abs_error_bound);
    }

    /// A tighter tolerance never leaves the looser result's bound.
    #[test]
    fn tighter_tolerance_stays_in_bound(
        mu in 1.6f64..3.0,
        nu in 0.3f64..2.5,
        r in 0.0f64..4.0,
        z in prop::sample::select(vec![1.0, -1.0, 0.7, -0.3]),
    ) {
        // decay exponent 2μ - ν of at least 1.3
        prop_assume!(2.0 * mu - 1.0 > nu + 0.3);
        let p = SeriesParams::new(2.0, 1.0, mu, nu, r, z).unwrap();
        let seq = SequenceSpec::index();
        let loose = eval_series(&p, &seq, 1e-8).unwrap();
        let tight = eval_series(&p, &seq, 1e-11).unwrap();
        prop_assert!(
            (loose.value - tight.value).abs() <= loose.abs_error_bound,
            "loose {:e} ± {:e}, tight {:e}", loose.value, loose.abs_error_bound, tight.value
        );
        prop_assert!(tight.abs_error_bound <= 1e-11);
    }

    /// ₁Ψ₁[(a,1);(a,1);x] = eˣ, including arguments whose series cancels far
    /// beyond double-double range.
    #[test]
    fn fox_wright_exponential(a in 0.2f64..5.0, x in -150.0f64..5.0) {
        let r = fox_wright_11(&FoxWright11Params::new(a, 1.0, a, 1.0).unwrap(), x).unwrap();
        let e = x.exp();
        prop_assert!((r.value - e).abs() <= r.abs_error_bound + 1e-15 * e);
        prop_assert!((r.value / e - 1.0).abs() < 1e-12);
    }

    /// ₀F₁(; 3/2; -k²) = sin(2k)/(2k), with an exactly representable argument.
    #[test]
    fn hypergeometric_sinc(k in 1u32..150) {
        let y = 2.0 * k as f64;
        let hp = HypergeometricParams::new(vec![], vec![1.5]).unwrap();
        let r = hypergeometric_pfq(&hp, -(k as f64).powi(2)).unwrap();
        let expect = y.sin() / y;
        prop_assert!((r.value - expect).abs() <= r.abs_error_bound + 4e-16 / y);
    }

    #[test]
    fn pmf_is_a_distribution(
        mu in 2.5f64..5.0,
        nu in 0.5f64..2.0,
        r in 0.2f64..3.0,
    ) {
        let d = MathieuDistribution::new(2.0, 1.0, mu, nu, r, 1e-12).unwrap();
        let mut total = 0.0;
        for n in 1..=2000u64 {
            let p = d.pmf(n).unwrap();
            prop_assert!(p >= 0.0);
            total += p;
        }
        // the normalizer carries an absolute bound
        let slack = 2.0 * d.norm_error / d.normalizer + 1e-13;
        prop_assert!(total <= 1.0 + slack, "{total} {slack:e}");
        prop_assert!(d.cdf(2000) <= 1.0 + slack);
    }
}

#[test]
fn slowly_decaying_unit_circle_series() {
    // terms ~ 2/n², where the refined tail bracket does the work
    let p = SeriesParams::new(2.0, 1.0, 2.0, 2.0, 1.0, 1.0).unwrap();
    let r = eval_series(&p, &SequenceSpec::index(), 1e-13).unwrap();
    assert!(r.abs_error_bound <= 1e-13);
    assert!(r.terms_used < 200_000, "{} terms", r.terms_used);
    let loose = eval_series(&p, &SequenceSpec::index(), 1e-9).unwrap();
    assert!((loose.value - r.value).abs() <= loose.abs_error_bound);
}

#[test]
fn slowly_decaying_alternating_series() {
    // 2Σ(-1)^n (1/n² + 1/n³) = -π²/6 - 3ζ(3)/2
    let zeta3 = 1.202_056_903_159_594_3;
    let expect = -std::f64::consts::PI.powi(2) / 6.0 - 1.5 * zeta3;
    let p = SeriesParams::new(2.0, 1.0, 2.0, 2.0, 0.0, -1.0).unwrap();
    let r = eval_series(&p, &SequenceSpec::index(), 1e-13).unwrap();
    assert!(
        (r.value - expect).abs() <= r.abs_error_bound + 4e-16,
        "{} vs {expect}",
        r.value
    );
    assert!(r.terms_used < 200_000, "{} terms", r.terms_used);

    // terms ~ n^{-1.36}
    let p = SeriesParams::new(2.0, 1.0, 1.631, 1.901, 0.0, -1.0).unwrap();
    let tight = eval_series(&p, &SequenceSpec::index(), 1e-11).unwrap();
    let loose = eval_series(&p, &SequenceSpec::index(), 1e-7).unwrap();
    assert!((loose.value - tight.value).abs() <= loose.abs_error_bound);
}
