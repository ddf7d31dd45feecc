//! Luxemburg norms of step functions on `[0, 1]`.

use crate::arith::{Bound, Dyadic, Enclosure, Rounding};
use crate::error::{Error, Result};

use super::model::OrliczModel;

/// A nonnegative step function given as `(value, measure)` pieces with total
/// measure at most one.
#[derive(Clone, Debug)]
pub struct StepFunction {
    pieces: Vec<(Enclosure, Enclosure)>,
}

impl StepFunction {
    pub fn new(pieces: Vec<(Enclosure, Enclosure)>) -> Result<Self> {
        let mut total: Option<Enclosure> = None;
        for (v, m) in &pieces {
            if !v.certainly_nonnegative() || !m.certainly_nonnegative() {
                return Err(Error::Domain("step values and measures must be nonnegative".into()));
            }
            if !v.is_finite() || !m.is_finite() {
                return Err(Error::Domain("step values and measures must be finite".into()));
            }
            total = Some(total.map_or(m.clone(), |t| t.add(m)));
        }
        if let Some(t) = &total {
            if t.certainly_gt(&Enclosure::one(t.bits())) {
                return Err(Error::Domain("total measure exceeds 1".into()));
            }
        }
        Ok(StepFunction { pieces })
    }

    /// The indicator of a set of measure `m`.
    pub fn indicator(m: Enclosure) -> Result<Self> {
        let bits = m.bits();
        Self::new(vec![(Enclosure::one(bits), m)])
    }

    pub fn pieces(&self) -> &[(Enclosure, Enclosure)] {
        &self.pieces
    }

    pub fn scaled(&self, k: &Enclosure) -> Result<Self> {
        Self::new(self.pieces.iter().map(|(v, m)| (v.mul(k), m.clone())).collect())
    }

    fn is_zero(&self) -> bool {
        self.pieces.iter().all(|(v, m)| {
            v.hi() == &Bound::Finite(Dyadic::zero()) || m.hi() == &Bound::Finite(Dyadic::zero())
        })
    }
}

/// `Σ measure · M(value/λ)`.
pub fn modular(model: &dyn OrliczModel, x: &StepFunction, lambda: &Enclosure) -> Result<Enclosure> {
    let bits = model.precision_bits();
    let mut acc = Enclosure::zero(bits);
    for (v, m) in &x.pieces {
        acc = acc.add(&m.mul(&model.eval(&v.div(lambda)?)?));
    }
    Ok(acc)
}

const MAX_STEPS: usize = 4096;

/// Enclosure of `inf{λ > 0 : Σ measure·M(value/λ) ≤ 1}`.
///
/// The modular decreases in `λ`; an exponential search finds a bracket with
/// modular certainly above 1 at the left end and at most 1 at the right, and
/// bisection narrows it to relative width `2^{−bits/4}`.
pub fn luxemburg_norm(model: &dyn OrliczModel, x: &StepFunction) -> Result<Enclosure> {
    let bits = model.precision_bits();
    if x.is_zero() {
        return Ok(Enclosure::zero(bits));
    }
    let one = Enclosure::one(bits);
    let at = |l: &Dyadic| modular(model, x, &Enclosure::point(l.clone(), bits));
    let mut hi = Dyadic::one();
    let mut found = false;
    for _ in 0..MAX_STEPS {
        if at(&hi)?.certainly_le(&one) {
            found = true;
            break;
        }
        hi = hi.mul_pow2(1);
    }
    let mut lo = hi.mul_pow2(-1);
    let mut found_lo = false;
    for _ in 0..MAX_STEPS {
        if !found {
            break;
        }
        if at(&lo)?.certainly_gt(&one) {
            found_lo = true;
            break;
        }
        lo = lo.mul_pow2(-1);
    }
    if !(found && found_lo) {
        return Err(Error::Budget(
            "could not bracket the Luxemburg norm (modular never crosses 1)".into(),
        ));
    }
    let shift = -((bits / 4) as i64);
    for _ in 0..MAX_STEPS {
        let scale = if hi > Dyadic::one() { hi.clone() } else { Dyadic::one() };
        let width_tol = scale.mul_pow2(shift);
        if hi.sub(&lo) < width_tol {
            break;
        }
        let mid = Dyadic::midpoint(&lo, &hi).round(bits + 8, Rounding::Down);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = at(&mid)?;
        if v.certainly_le(&one) {
            hi = mid;
        } else if v.certainly_gt(&one) {
            lo = mid;
        } else {
            break;
        }
    }
    Enclosure::new(Bound::Finite(lo), Bound::Finite(hi), bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::model::PowerModel;

    #[test]
    fn l1_norm_of_indicator() {
        let m = PowerModel::pure("1", 128).unwrap();
        let x = StepFunction::indicator(Enclosure::pow2(-1, 128)).unwrap();
        let n = luxemburg_norm(&m, &x).unwrap();
        assert!(n.contains(&Dyadic::pow2(-1)));
        assert!(n.width_f64() < 1e-9);
    }

    #[test]
    fn quadratic_norm_of_indicator() {
        let m = PowerModel::pure("2", 128).unwrap();
        let x = StepFunction::indicator(Enclosure::pow2(-2, 128)).unwrap();
        let n = luxemburg_norm(&m, &x).unwrap();
        assert!(n.contains(&Dyadic::pow2(-1)), "{n:?}");
    }

    #[test]
    fn zero_function_and_validation() {
        let m = PowerModel::pure("2", 64).unwrap();
        let z = StepFunction::new(vec![(Enclosure::zero(64), Enclosure::one(64))]).unwrap();
        assert_eq!(luxemburg_norm(&m, &z).unwrap(), Enclosure::zero(64));
        assert!(StepFunction::indicator(Enclosure::from_i64(2, 64)).is_err());
    }
}
