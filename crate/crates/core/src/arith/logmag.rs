//! Nonnegative reals stored by their base-2 exponent.

use std::cmp::Ordering;
use std::fmt;

use super::dyadic::Dyadic;
use super::enclosure::{Bound, Comparison, Enclosure};
use crate::error::{Error, Result};

/// `Zero`, or `2^exp2` for an enclosed exponent.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum LogMagnitude {
    Zero,
    Positive(Enclosure),
}

impl LogMagnitude {
    pub fn from_exp2(exp2: Enclosure) -> Self {
        LogMagnitude::Positive(exp2)
    }

    pub fn one(bits: u32) -> Self {
        LogMagnitude::Positive(Enclosure::zero(bits))
    }

    pub fn pow2(k: i64, bits: u32) -> Self {
        LogMagnitude::Positive(Enclosure::from_i64(k, bits))
    }

    /// Encode a value enclosure; it must be certainly positive or exactly 0.
    pub fn from_value(v: &Enclosure) -> Result<Self> {
        if v.is_point() && v.lo_finite().is_some_and(|d| d.is_zero()) {
            return Ok(LogMagnitude::Zero);
        }
        if !v.certainly_positive() {
            return Err(Error::Domain(
                "log magnitude of a value not certainly positive".into(),
            ));
        }
        Ok(LogMagnitude::Positive(v.log2()?))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LogMagnitude::Zero)
    }

    pub fn exp2(&self) -> Option<&Enclosure> {
        match self {
            LogMagnitude::Zero => None,
            LogMagnitude::Positive(e) => Some(e),
        }
    }

    /// The exponent, or a domain error for zero.
    pub fn exp2_or_err(&self) -> Result<&Enclosure> {
        self.exp2()
            .ok_or_else(|| Error::Domain("logarithm of zero".into()))
    }

    /// Decode to an ordinary enclosure.
    pub fn value(&self, bits: u32) -> Result<Enclosure> {
        match self {
            LogMagnitude::Zero => Ok(Enclosure::zero(bits)),
            LogMagnitude::Positive(e) => e.exp2_bits(bits),
        }
    }

    pub fn mul(&self, other: &LogMagnitude) -> Self {
        match (self, other) {
            (LogMagnitude::Positive(a), LogMagnitude::Positive(b)) => {
                LogMagnitude::Positive(a.add(b))
            }
            _ => LogMagnitude::Zero,
        }
    }

    pub fn div(&self, other: &LogMagnitude) -> Result<Self> {
        match (self, other) {
            (_, LogMagnitude::Zero) => Err(Error::Domain("division by zero magnitude".into())),
            (LogMagnitude::Zero, _) => Ok(LogMagnitude::Zero),
            (LogMagnitude::Positive(a), LogMagnitude::Positive(b)) => {
                Ok(LogMagnitude::Positive(a.sub(b)))
            }
        }
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        match self {
            LogMagnitude::Zero => LogMagnitude::Zero,
            LogMagnitude::Positive(e) => {
                LogMagnitude::Positive(e.add(&Enclosure::from_i64(k, e.bits())))
            }
        }
    }

    /// `self^p` for `p > 0`.
    pub fn powf(&self, p: &Enclosure) -> Self {
        match self {
            LogMagnitude::Zero => LogMagnitude::Zero,
            LogMagnitude::Positive(e) => LogMagnitude::Positive(e.mul(p)),
        }
    }

    /// `self - other`, which must be certainly positive or exactly zero.
    pub fn sub(&self, other: &LogMagnitude) -> Result<Self> {
        let a = match self {
            LogMagnitude::Zero => {
                return match other {
                    LogMagnitude::Zero => Ok(LogMagnitude::Zero),
                    _ => Err(Error::Domain("negative difference of magnitudes".into())),
                }
            }
            LogMagnitude::Positive(a) => a,
        };
        let b = match other {
            LogMagnitude::Zero => return Ok(self.clone()),
            LogMagnitude::Positive(b) => b,
        };
        if a == b && a.is_point() {
            return Ok(LogMagnitude::Zero);
        }
        // a - b enclosure of log₂(2^a - 2^b) = a + log₂(1 - 2^{-(a-b)}).
        let gap = a.sub(b);
        if !gap.certainly_positive() {
            return Err(Error::Domain(
                "difference of magnitudes not certainly positive".into(),
            ));
        }
        let corr = super::special::log2_one_minus_pow2_neg(&gap)?;
        Ok(LogMagnitude::Positive(a.add(&corr)))
    }

    pub fn compare(&self, other: &LogMagnitude) -> Comparison {
        match (self, other) {
            (LogMagnitude::Zero, LogMagnitude::Zero) => Comparison::Equal,
            (LogMagnitude::Zero, _) => Comparison::Less,
            (_, LogMagnitude::Zero) => Comparison::Greater,
            (LogMagnitude::Positive(a), LogMagnitude::Positive(b)) => a.compare(b),
        }
    }

    pub fn certainly_le(&self, other: &LogMagnitude) -> bool {
        match (self, other) {
            (LogMagnitude::Zero, _) => true,
            (_, LogMagnitude::Zero) => false,
            (LogMagnitude::Positive(a), LogMagnitude::Positive(b)) => a.certainly_le(b),
        }
    }

    pub fn certainly_lt(&self, other: &LogMagnitude) -> bool {
        match (self, other) {
            (LogMagnitude::Zero, LogMagnitude::Zero) => false,
            (LogMagnitude::Zero, _) => true,
            (_, LogMagnitude::Zero) => false,
            (LogMagnitude::Positive(a), LogMagnitude::Positive(b)) => a.certainly_lt(b),
        }
    }
}

/// Sum of nonnegative magnitudes, factoring out the largest exponent and
/// accumulating the scaled residuals in the given order.
pub fn log_sum(terms: &[LogMagnitude], bits: u32) -> Result<LogMagnitude> {
    let exps: Vec<&Enclosure> = terms.iter().filter_map(|t| t.exp2()).collect();
    if exps.is_empty() {
        return Ok(LogMagnitude::Zero);
    }
    let mut pivot: Option<&Dyadic> = None;
    for e in &exps {
        let hi = e
            .hi_finite()
            .ok_or_else(|| Error::Domain("unbounded exponent in log_sum".into()))?;
        if pivot.is_none_or(|p| hi.cmp(p) == Ordering::Greater) {
            pivot = Some(hi);
        }
    }
    let pivot = Enclosure::point(pivot.expect("nonempty").clone(), bits);
    let guard = bits + 16;
    let mut acc: Option<Enclosure> = None;
    for e in exps {
        let scaled = e.with_bits(guard).sub(&pivot).exp2_bits(guard)?;
        acc = Some(match acc {
            None => scaled,
            Some(a) => a.add(&scaled),
        });
    }
    let acc = acc.expect("nonempty");
    let total = pivot.with_bits(guard).add(&acc.log2()?).round_to(bits);
    Ok(LogMagnitude::Positive(total))
}

impl fmt::Debug for LogMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogMagnitude::Zero => f.write_str("0"),
            LogMagnitude::Positive(e) => write!(f, "2^{e:?}"),
        }
    }
}

impl fmt::Display for LogMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogMagnitude::Zero => f.write_str("0"),
            LogMagnitude::Positive(e) => write!(f, "2^{e}"),
        }
    }
}

/// Whether an exponent lies strictly below zero bits (i.e. the value < 1).
pub fn below_one(m: &LogMagnitude) -> bool {
    match m {
        LogMagnitude::Zero => true,
        LogMagnitude::Positive(e) => e.hi() < &Bound::Finite(Dyadic::zero()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_equal_powers() {
        let s = log_sum(&[LogMagnitude::pow2(3, 64), LogMagnitude::pow2(3, 64)], 64).unwrap();
        assert!(s.exp2().unwrap().contains(&Dyadic::from_i64(4)));
        assert!(s.exp2().unwrap().width_f64() < 1e-15);
    }

    #[test]
    fn dominant_term() {
        let s = log_sum(&[LogMagnitude::pow2(100, 256), LogMagnitude::pow2(0, 256)], 256).unwrap();
        let e = s.exp2().unwrap();
        // 100 + log2(1 + 2^-100) = 100 + 2^-100/ln2 (1 - ...)
        let lo = e.lo_finite().unwrap().sub(&Dyadic::from_i64(100));
        let hi = e.hi_finite().unwrap().sub(&Dyadic::from_i64(100));
        assert!(lo.is_positive());
        let approx = 2f64.powi(-100) / std::f64::consts::LN_2;
        assert!((lo.approx_f64() / approx - 1.0).abs() < 1e-20 + 1e-15);
        assert!(hi.approx_f64() >= lo.approx_f64());
    }

    #[test]
    fn empty_and_zero() {
        assert!(log_sum(&[], 64).unwrap().is_zero());
        assert!(log_sum(&[LogMagnitude::Zero], 64).unwrap().is_zero());
    }

    #[test]
    fn subtraction() {
        let a = LogMagnitude::pow2(5, 128);
        let b = LogMagnitude::pow2(3, 128);
        let d = a.sub(&b).unwrap().value(128).unwrap();
        assert!(d.contains(&Dyadic::from_i64(24)));
        assert!(b.sub(&a).is_err());
    }
}
