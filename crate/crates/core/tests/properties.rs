mod oracle;

use std::sync::{Arc, OnceLock};

use orlicz_core::analysis::{
    conjugate_eval, estimate_indices, luxemburg_norm, modular, ConjugateModel, OrliczModel,
    PowerModel, StepFunction,
};
use orlicz_core::arith::{Dyadic, Enclosure, LogMagnitude};
use orlicz_core::construction::{CounterexampleModel, Density};
use orlicz_core::verify::{run_all, CheckConfig};
use proptest::prelude::*;

const BITS: u32 = 256;

fn model() -> &'static CounterexampleModel {
    static M: OnceLock<CounterexampleModel> = OnceLock::new();
    M.get_or_init(|| CounterexampleModel::standard(11, BITS).unwrap())
}

fn at(v: f64, bits: u32) -> Enclosure {
    Enclosure::from_f64(v, bits).unwrap()
}

fn dy(v: f64) -> Dyadic {
    Dyadic::from_f64(v).unwrap()
}

/// Unary and binary operations evaluated at a given precision.
fn ops(a: f64, b: f64, bits: u32) -> Vec<Enclosure> {
    let (x, y) = (at(a, bits), at(b, bits));
    vec![
        x.add(&y),
        x.sub(&y),
        x.mul(&y),
        x.div(&y).unwrap(),
        x.sqrt().unwrap(),
        x.log2().unwrap(),
        x.exp2().unwrap(),
        x.pow(&y).unwrap(),
        x.recip().unwrap().mul(&y).exp2().unwrap().log2().unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn higher_precision_refines(a in 0.01f64..40.0, b in 0.01f64..8.0) {
        let lo = ops(a, b, 64);
        let hi = ops(a, b, 256);
        for (l, h) in lo.iter().zip(&hi) {
            prop_assert!(h.is_subset_of(l), "{h:?} not inside {l:?}");
            prop_assert!(h.width_f64() <= l.width_f64());
        }
    }

    #[test]
    fn enclosures_contain_f64_results(a in 0.01f64..40.0, b in 0.01f64..8.0) {
        let e = ops(a, b, 128);
        let approx = [a + b, a - b, a * b, a / b, a.sqrt(), a.log2(), a.exp2(), a.powf(b)];
        for (enc, v) in e.iter().zip(approx) {
            // f64 results are within a few ulps of the exact value.
            let slack = 1e-12 * v.abs().max(1e-300);
            prop_assert!(enc.lo_f64() <= v + slack && v - slack <= enc.hi_f64(), "{v} vs {enc:?}");
        }
    }

    #[test]
    fn density_is_one_or_two(u in 0.001f64..2048.0) {
        let d = model().phi(&at(u, BITS)).unwrap();
        match d.standard_value() {
            Some(v) => prop_assert_eq!(v as f64, oracle::phi(u)),
            None => prop_assert_eq!(d, Density::Undetermined),
        }
    }

    #[test]
    fn f_slopes_between_one_and_two(u in 0.0f64..1500.0, h in 0.001f64..500.0) {
        let m = model();
        let (a, b) = (at(u, BITS), at(u + h, BITS));
        let diff = m.f_eval(&b).unwrap().sub(&m.f_eval(&a).unwrap());
        let len = b.sub(&a);
        prop_assert!(!diff.certainly_lt(&len));
        prop_assert!(!diff.certainly_gt(&len.mul_i64(2)));
    }

    #[test]
    fn f_is_deterministic(u in 0.0f64..2000.0) {
        let m = model();
        let e = at(u, BITS);
        prop_assert_eq!(m.f_eval(&e).unwrap(), m.f_eval(&e).unwrap());
    }

    #[test]
    fn ratio_dominates_argument(y in -64.0f64..900.0, x in 0.0f64..900.0) {
        // log₂(F(xy)/F(y)) ≥ log₂x, i.e. F(y)/y is nondecreasing.
        let xe = at(x, BITS);
        let r = model().log_ratio(&at(y, BITS), &xe).unwrap();
        prop_assert!(!r.certainly_lt(&xe));
    }

    #[test]
    fn phi_between_quarter_f_and_f(v in -8.0f64..2000.0) {
        let r = model().phi_over_f(&dy(v)).unwrap();
        prop_assert!(!r.certainly_gt(&Enclosure::one(BITS)));
        prop_assert!(!r.certainly_lt(&Enclosure::pow2(-2, BITS)));
    }

    #[test]
    fn log_magnitudes_round_trip(a in -200.0f64..200.0, b in -200.0f64..200.0) {
        let (x, y) = (LogMagnitude::from_exp2(at(a, BITS)), LogMagnitude::from_exp2(at(b, BITS)));
        let q = x.mul(&y).div(&y).unwrap();
        prop_assert!(q.exp2().unwrap().contains(&dy(a)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dilations_are_monotone_ratios(n in 3u32..=11, a in 0.001f64..0.5, b in 0.001f64..0.5) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let m = model();
        let d1 = m.dilation_eval(n, &at(lo, BITS)).unwrap();
        let d2 = m.dilation_eval(n, &at(hi, BITS)).unwrap();
        for d in [&d1, &d2] {
            prop_assert!(d.certainly_nonnegative() && d.certainly_le(&Enclosure::one(BITS)));
        }
        prop_assert!(!d1.certainly_gt(&d2));
    }

    #[test]
    fn secant_slopes_increase(p in 1.0f64..4.0, s in 0.01f64..30.0, h1 in 0.01f64..5.0, h2 in 0.01f64..5.0) {
        let pm = PowerModel::pure(&format!("{p:.3}"), 128).unwrap();
        let phi = CounterexampleModel::standard(8, 128).unwrap();
        let models: [&dyn OrliczModel; 2] = [&pm, &phi];
        for m in models {
            prop_assert!(m.convexity_certified());
            let pts = [s, s + h1, s + h1 + h2].map(|v| at(v, 128));
            let vals: Vec<Enclosure> = pts.iter().map(|v| m.eval(v).unwrap()).collect();
            let left = vals[1].sub(&vals[0]).div(&pts[1].sub(&pts[0])).unwrap();
            let right = vals[2].sub(&vals[1]).div(&pts[2].sub(&pts[1])).unwrap();
            prop_assert!(!left.certainly_gt(&right), "{}: {left:?} > {right:?}", m.name());
        }
    }

    #[test]
    fn norm_is_homogeneous(v1 in 0.1f64..20.0, v2 in 0.1f64..20.0, m1 in 0.05f64..0.5, k in 0.1f64..10.0) {
        let pm = PowerModel::pure("1.5", 128).unwrap();
        let x = StepFunction::new(vec![(at(v1, 128), at(m1, 128)), (at(v2, 128), at(0.5 - m1 / 2.0, 128))]).unwrap();
        let n = luxemburg_norm(&pm, &x).unwrap();
        let ke = at(k, 128);
        let nk = luxemburg_norm(&pm, &x.scaled(&ke).unwrap()).unwrap();
        prop_assert!(nk.intersect(&n.mul(&ke)).is_some(), "{nk:?} vs k·{n:?}");
        // The modular crosses 1 inside the norm enclosure.
        let below = modular(&pm, &x, &Enclosure::point(n.lo_finite().unwrap().clone(), 128)).unwrap();
        let above = modular(&pm, &x, &Enclosure::point(n.hi_finite().unwrap().clone(), 128)).unwrap();
        prop_assert!(!below.certainly_lt(&Enclosure::one(128)));
        prop_assert!(!above.certainly_gt(&Enclosure::one(128)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn powers_are_biconjugate(p in prop::sample::select(vec!["1.5", "2", "3"]), s in 0.25f64..4.0) {
        let inner: Arc<dyn OrliczModel> = Arc::new(PowerModel::normalized(p, 128).unwrap());
        let conj = ConjugateModel::new(inner.clone()).unwrap();
        let se = at(s, 128);
        let twice = conjugate_eval(&conj, &se).unwrap();
        let want = inner.eval(&se).unwrap();
        let got = twice.finite().unwrap();
        prop_assert!((got.mid_f64() - want.mid_f64()).abs() <= 1e-6 * want.mid_f64().max(1.0), "{got:?} vs {want:?}");
    }

    #[test]
    fn indices_are_ordered(p in 1.0f64..3.0) {
        let label = format!("{p:.2}");
        let m = PowerModel::pure(&label, 128).unwrap();
        let grid: Vec<Enclosure> = ["1", "1.25", "1.5", "1.75", "2", "2.25", "2.5", "2.75", "3", "3.25"]
            .iter()
            .map(|s| Enclosure::parse(s, 128).unwrap())
            .collect();
        let ranges: Vec<Dyadic> = (2..=5).map(Dyadic::pow2).collect();
        let est = estimate_indices(&m, &grid, &ranges, 32).unwrap();
        let one = Enclosure::one(128);
        if let (Some(a), Some(b)) = (&est.alpha_hat, &est.beta_hat) {
            prop_assert!(!a.certainly_lt(&one));
            prop_assert!(!a.certainly_gt(b));
        }
        for series in est.running_sup.iter().chain(&est.running_sup_dual) {
            for w in series.windows(2) {
                prop_assert!(!w[0].certainly_gt(&w[1]));
            }
        }
    }
}

#[test]
fn blocks_telescope() {
    let m = model();
    for b in m.table().blocks() {
        let n = b.n as i64;
        let want = Enclosure::pow2(n - 1, BITS).add(&Enclosure::from_i64(n, BITS).sqrt().unwrap().exp2().unwrap());
        let got = b.f_at_end.sub(&b.f_at_start);
        assert!(got.intersect(&want).is_some(), "block {n}: {got:?} vs {want:?}");
        assert!(got.width_f64() < 1e-60);
    }
}

#[test]
fn reports_are_deterministic() {
    let cfg = CheckConfig {
        range_exponent_max: 5,
        grid_points: 16,
        sandwich_points: 200,
        measure_samples: 50,
        precision_bits: 96,
        n_list: (3..=6).collect(),
        ..CheckConfig::default()
    };
    let a = run_all(&cfg).unwrap().to_json();
    let b = run_all(&cfg).unwrap().to_json();
    assert_eq!(a, b);
}
