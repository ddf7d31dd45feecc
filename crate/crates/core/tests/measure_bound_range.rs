//! The measure bound with `n0 = 6`, `ε = 1/4` holds on `[2^64, 2^(2^10)]`
//! but not on larger ranges: an interval of fixed length `2^{n0}` starting
//! at a breakpoint eventually sits inside a stretch of length `2^{√n}`.

use orlicz_core::arith::{Dyadic, Enclosure};
use orlicz_core::construction::CounterexampleModel;
use orlicz_core::grid;
use orlicz_core::verify::{run_one, CheckConfig, Status, WitnessKind};

const BITS: u32 = 256;

#[test]
fn fixed_length_interval_at_a_breakpoint() {
    let m = CounterexampleModel::standard(17, BITS).unwrap();
    let eps = Enclosure::pow2(-2, BITS);
    let len = Dyadic::from_i64(64);
    let mut first_failure = None;
    for n in 7..=16u32 {
        let b = m.table().block(n).unwrap();
        let (below, _) = grid::around(&b.breakpoint);
        let a = Enclosure::point(below.clone(), BITS);
        let end = Enclosure::point(below.add(&len), BITS);
        let (mu_a, mu_b) = m.phi_measure(&a, &end).unwrap();
        let rhs = eps.mul(&mu_b);
        if mu_a.certainly_gt(&rhs) {
            first_failure.get_or_insert(n);
        } else {
            assert!(mu_a.certainly_lt(&rhs), "block {n} undecided");
            assert!(first_failure.is_none(), "block {n} holds after a failure");
        }
    }
    // 2^{√n} > 64·ε/(1 + ε) = 12.8 first at n = 14.
    assert_eq!(first_failure, Some(14));
}

#[test]
fn the_check_falsifies_on_range_2_pow_2_pow_14() {
    let cfg = CheckConfig {
        range_exponent_max: 14,
        measure_samples: 100,
        ..CheckConfig::default()
    };
    let e = run_one(&cfg, "measure_bound").unwrap();
    assert_eq!(e.status, Status::Falsified);
    let w = e.witness.expect("witness");
    assert!(w.reverify(&cfg.variant.construction(), 4 * BITS).unwrap());
    let WitnessKind::MeasureBound { a, b, .. } = &w.kind else {
        panic!("unexpected witness {:?}", w.kind);
    };
    assert_eq!(b.sub(a), Dyadic::from_i64(64));
    assert!(*a > Dyadic::from_i64(16_370) && *a < Dyadic::from_i64(16_371));

    // The default range stays Verified.
    let e = run_one(&CheckConfig::default(), "measure_bound").unwrap();
    assert_eq!(e.status, Status::Verified);
}
