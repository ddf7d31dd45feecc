mod oracle;

use orlicz_core::arith::{Enclosure, LogMagnitude};
use orlicz_core::construction::CounterexampleModel;

// Reference values computed by `oracle::FOracle` and frozen here.
const F_8: f64 = 11.321_997_085_483_91;
const F_16: f64 = 23.321_997_085_483_87;

#[test]
fn oracle_reproduces_frozen_values() {
    let o = oracle::FOracle::new(16);
    for (u, want) in [(8.0, F_8), (12.0, F_8 + 4.0), (16.0, F_16)] {
        let got = o.f(u);
        assert!((got.value - want).abs() < 1e-11, "f({u}) = {got:?}");
        assert!(got.error < 1e-10);
    }
    assert_eq!(o.f(4.0).value, 4.0);
    // Φ(x) = x up to 16 since the integrand is identically 1 there.
    for w in [-3.0, 0.5, 2.0, 4.0] {
        let p = o.phi_big_log(w);
        assert!((p.value - f64::exp2(w)).abs() <= p.error + 1e-12, "Phi(2^{w}) = {p:?}");
    }
}

#[test]
fn closed_forms_match_frozen_values() {
    let m = CounterexampleModel::standard(5, 128).unwrap();
    for (u, want) in [(8.0, F_8), (12.0, F_8 + 4.0), (16.0, F_16)] {
        let got = m.f_eval(&Enclosure::from_f64(u, 128).unwrap()).unwrap();
        assert!((got.mid_f64() - want).abs() < 1e-11, "f({u}) = {got:?}");
    }
    let x = LogMagnitude::from_exp2(Enclosure::from_i64(8, 128));
    let big = m.F_eval(&x).unwrap();
    assert!((big.exp2().unwrap().mid_f64() - F_8).abs() < 1e-11);
}
