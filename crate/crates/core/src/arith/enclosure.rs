//! Outward-rounded intervals over the extended dyadic line.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::decimal::{self, Literal};
use super::dyadic::{Dyadic, Rounding};
use super::elementary;
use crate::error::{Error, Result};

/// Default working precision in bits.
pub const DEFAULT_BITS: u32 = 256;

/// Extended-real endpoint.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Bound {
    NegInf,
    Finite(Dyadic),
    PosInf,
}

impl Bound {
    pub fn finite(&self) -> Option<&Dyadic> {
        match self {
            Bound::Finite(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Finite(_))
    }

    fn neg(&self) -> Bound {
        match self {
            Bound::NegInf => Bound::PosInf,
            Bound::PosInf => Bound::NegInf,
            Bound::Finite(d) => Bound::Finite(d.neg()),
        }
    }

    fn sign(&self) -> Ordering {
        match self {
            Bound::NegInf => Ordering::Less,
            Bound::PosInf => Ordering::Greater,
            Bound::Finite(d) => d.cmp(&Dyadic::zero()),
        }
    }

    fn add(&self, other: &Bound, bits: u32, dir: Rounding) -> Bound {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a.add_round(b, bits, dir)),
            (Bound::NegInf, Bound::PosInf) | (Bound::PosInf, Bound::NegInf) => match dir {
                Rounding::Down => Bound::NegInf,
                Rounding::Up => Bound::PosInf,
            },
            (Bound::NegInf, _) | (_, Bound::NegInf) => Bound::NegInf,
            _ => Bound::PosInf,
        }
    }

    fn mul(&self, other: &Bound, bits: u32, dir: Rounding) -> Bound {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a.mul_round(b, bits, dir)),
            _ => {
                // Endpoint products of intervals: 0·∞ contributes 0.
                let s = self.sign();
                let t = other.sign();
                if s == Ordering::Equal || t == Ordering::Equal {
                    Bound::Finite(Dyadic::zero())
                } else if s == t {
                    Bound::PosInf
                } else {
                    Bound::NegInf
                }
            }
        }
    }

    fn f64(&self, dir: Rounding) -> f64 {
        match self {
            Bound::NegInf => f64::NEG_INFINITY,
            Bound::PosInf => f64::INFINITY,
            Bound::Finite(d) => d.to_f64(dir),
        }
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => a.cmp(b),
            (Bound::NegInf, Bound::NegInf) | (Bound::PosInf, Bound::PosInf) => Ordering::Equal,
            (Bound::NegInf, _) | (_, Bound::PosInf) => Ordering::Less,
            (Bound::PosInf, _) | (_, Bound::NegInf) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::PosInf => f.write_str("+inf"),
            Bound::Finite(d) => write!(f, "{:e}", d.approx_f64()),
        }
    }
}

/// Outcome of comparing two enclosures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Less,
    Greater,
    Equal,
    Undetermined,
}

/// A closed interval `[lo, hi]` guaranteed to contain an exact value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Bound,
    hi: Bound,
    bits: u32,
}

impl Enclosure {
    pub fn new(lo: Bound, hi: Bound, bits: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!("reversed interval [{lo:?}, {hi:?}]")));
        }
        Ok(Enclosure { lo, hi, bits })
    }

    fn raw(lo: Bound, hi: Bound, bits: u32) -> Self {
        debug_assert!(lo <= hi, "{lo:?} > {hi:?}");
        Enclosure { lo, hi, bits }
    }

    pub fn from_dyadics(lo: Dyadic, hi: Dyadic, bits: u32) -> Result<Self> {
        Self::new(Bound::Finite(lo), Bound::Finite(hi), bits)
    }

    pub fn point(d: Dyadic, bits: u32) -> Self {
        Self::raw(Bound::Finite(d.clone()), Bound::Finite(d), bits)
    }

    pub fn from_i64(v: i64, bits: u32) -> Self {
        Self::point(Dyadic::from_i64(v), bits)
    }

    /// Exact enclosure of a finite double.
    pub fn from_f64(v: f64, bits: u32) -> Result<Self> {
        Dyadic::from_f64(v)
            .map(|d| Self::point(d, bits))
            .ok_or_else(|| Error::Domain(format!("non-finite value {v}")))
    }

    pub fn pow2(k: i64, bits: u32) -> Self {
        Self::point(Dyadic::pow2(k), bits)
    }

    pub fn zero(bits: u32) -> Self {
        Self::point(Dyadic::zero(), bits)
    }

    pub fn one(bits: u32) -> Self {
        Self::point(Dyadic::one(), bits)
    }

    /// The value +∞ (e.g. a conjugate of a linear function).
    pub fn pos_inf(bits: u32) -> Self {
        Self::raw(Bound::PosInf, Bound::PosInf, bits)
    }

    /// `num/den` enclosed with outward rounding.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        let n = Dyadic::from_bigint(num, 0);
        let d = Dyadic::from_bigint(den, 0);
        let lo = n.div_round(&d, bits, Rounding::Down);
        let hi = n.div_round(&d, bits, Rounding::Up);
        Self::from_dyadics(lo, hi, bits)
    }

    pub fn from_literal(lit: &Literal, bits: u32) -> Result<Self> {
        match lit {
            Literal::Rational { num, den } => Self::from_ratio(num, &BigInt::from(den.clone()), bits),
            Literal::Pow2 { num, den } => {
                Self::from_ratio(num, &BigInt::from(den.clone()), bits + 16)?.exp2_bits(bits)
            }
        }
    }

    /// Parse a decimal, fraction (`1/3`) or power-of-two (`2^-4`) literal.
    pub fn parse(s: &str, bits: u32) -> Result<Self> {
        Self::from_literal(&decimal::parse_literal(s)?, bits)
    }

    pub fn lo(&self) -> &Bound {
        &self.lo
    }

    pub fn hi(&self) -> &Bound {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        Self::raw(self.lo.clone(), self.hi.clone(), bits)
    }

    pub fn lo_finite(&self) -> Option<&Dyadic> {
        self.lo.finite()
    }

    pub fn hi_finite(&self) -> Option<&Dyadic> {
        self.hi.finite()
    }

    /// Both endpoints, if finite.
    pub fn finite_bounds(&self) -> Result<(&Dyadic, &Dyadic)> {
        match (&self.lo, &self.hi) {
            (Bound::Finite(a), Bound::Finite(b)) => Ok((a, b)),
            _ => Err(Error::Domain("unbounded enclosure".into())),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn is_pos_inf(&self) -> bool {
        self.lo == Bound::PosInf
    }

    pub fn is_point(&self) -> bool {
        self.is_finite() && self.lo == self.hi
    }

    /// `hi - lo` rounded up; `None` when unbounded.
    pub fn width(&self) -> Option<Dyadic> {
        let (a, b) = self.finite_bounds().ok()?;
        Some(b.sub_round(a, self.bits.max(64), Rounding::Up))
    }

    pub fn width_f64(&self) -> f64 {
        self.width().map_or(f64::INFINITY, |w| w.to_f64(Rounding::Up))
    }

    /// Exact midpoint of a bounded enclosure.
    pub fn midpoint(&self) -> Option<Dyadic> {
        let (a, b) = self.finite_bounds().ok()?;
        Some(Dyadic::midpoint(a, b))
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.f64(Rounding::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.f64(Rounding::Up)
    }

    pub fn mid_f64(&self) -> f64 {
        match self.midpoint() {
            Some(m) => m.approx_f64(),
            None => 0.5 * (self.lo_f64() + self.hi_f64()),
        }
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        let b = Bound::Finite(d.clone());
        self.lo <= b && b <= self.hi
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    fn prec(&self, other: &Enclosure) -> u32 {
        self.bits.max(other.bits)
    }

    pub fn neg(&self) -> Self {
        Self::raw(self.hi.neg(), self.lo.neg(), self.bits)
    }

    pub fn add(&self, other: &Enclosure) -> Self {
        let b = self.prec(other);
        Self::raw(
            self.lo.add(&other.lo, b, Rounding::Down),
            self.hi.add(&other.hi, b, Rounding::Up),
            b,
        )
    }

    pub fn sub(&self, other: &Enclosure) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Enclosure) -> Self {
        let b = self.prec(other);
        let cands = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = cands
            .iter()
            .map(|(x, y)| x.mul(y, b, Rounding::Down))
            .min()
            .expect("four candidates");
        let hi = cands
            .iter()
            .map(|(x, y)| x.mul(y, b, Rounding::Up))
            .max()
            .expect("four candidates");
        Self::raw(lo, hi, b)
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        let f = |b: &Bound| match b {
            Bound::Finite(d) => Bound::Finite(d.mul_pow2(k)),
            other => other.clone(),
        };
        Self::raw(f(&self.lo), f(&self.hi), self.bits)
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self.mul(&Enclosure::from_i64(k, self.bits))
    }

    /// `1 / self`; the divisor must exclude zero.
    pub fn recip(&self) -> Result<Self> {
        let (a, b) = self.finite_bounds()?;
        if !(a.is_positive() || b.is_negative()) {
            return Err(Error::Domain("division by an enclosure containing 0".into()));
        }
        let one = Dyadic::one();
        Ok(Self::raw(
            Bound::Finite(one.div_round(b, self.bits, Rounding::Down)),
            Bound::Finite(one.div_round(a, self.bits, Rounding::Up)),
            self.bits,
        ))
    }

    pub fn div(&self, other: &Enclosure) -> Result<Self> {
        let b = self.prec(other);
        let (c, d) = other.finite_bounds()?;
        if !(c.is_positive() || d.is_negative()) {
            return Err(Error::Domain("division by an enclosure containing 0".into()));
        }
        // Division of finite endpoints directly avoids double rounding.
        if let Ok((x, y)) = self.finite_bounds() {
            let q = |p: &Dyadic, r: &Dyadic, dir| p.div_round(r, b, dir);
            let down = [q(x, c, Rounding::Down), q(x, d, Rounding::Down), q(y, c, Rounding::Down), q(y, d, Rounding::Down)];
            let up = [q(x, c, Rounding::Up), q(x, d, Rounding::Up), q(y, c, Rounding::Up), q(y, d, Rounding::Up)];
            let lo = down.iter().min().expect("nonempty").clone();
            let hi = up.iter().max().expect("nonempty").clone();
            return Ok(Self::raw(Bound::Finite(lo), Bound::Finite(hi), b));
        }
        Ok(self.mul(&other.with_bits(b).recip()?))
    }

    pub fn sqrt(&self) -> Result<Self> {
        let (a, b) = self.finite_bounds()?;
        if a.is_negative() {
            return Err(Error::Domain("square root of a possibly negative value".into()));
        }
        Ok(Self::raw(
            Bound::Finite(a.sqrt_round(self.bits, Rounding::Down)),
            Bound::Finite(b.sqrt_round(self.bits, Rounding::Up)),
            self.bits,
        ))
    }

    /// `2^self`, with the result rounded to `bits`.
    pub fn exp2_bits(&self, bits: u32) -> Result<Self> {
        let lo = match &self.lo {
            Bound::NegInf => Bound::Finite(Dyadic::zero()),
            Bound::Finite(d) => Bound::Finite(elementary::exp2_bound(d, bits, Rounding::Down)?),
            Bound::PosInf => Bound::PosInf,
        };
        let hi = match &self.hi {
            Bound::NegInf => Bound::Finite(Dyadic::zero()),
            Bound::Finite(d) => Bound::Finite(elementary::exp2_bound(d, bits, Rounding::Up)?),
            Bound::PosInf => Bound::PosInf,
        };
        Ok(Self::raw(lo, hi, bits))
    }

    pub fn exp2(&self) -> Result<Self> {
        self.exp2_bits(self.bits)
    }

    /// `log₂ self`; requires a positive lower bound.
    pub fn log2(&self) -> Result<Self> {
        let lo = match &self.lo {
            Bound::Finite(d) if d.is_positive() => {
                Bound::Finite(elementary::log2_bound(d, self.bits, Rounding::Down)?)
            }
            Bound::PosInf => Bound::PosInf,
            _ => return Err(Error::Domain("log2 of a possibly nonpositive value".into())),
        };
        let hi = match &self.hi {
            Bound::Finite(d) => Bound::Finite(elementary::log2_bound(d, self.bits, Rounding::Up)?),
            _ => Bound::PosInf,
        };
        Ok(Self::raw(lo, hi, self.bits))
    }

    /// `self^p` for a positive base.
    pub fn pow(&self, p: &Enclosure) -> Result<Self> {
        let b = self.prec(p);
        let guard = b + 16;
        self.with_bits(guard).log2()?.mul(&p.with_bits(guard)).exp2_bits(b)
    }

    /// Round both ends outward to `bits` (coarsening only).
    pub fn round_to(&self, bits: u32) -> Self {
        let f = |x: &Bound, dir| match x {
            Bound::Finite(d) => Bound::Finite(d.round(bits, dir)),
            other => other.clone(),
        };
        Self::raw(f(&self.lo, Rounding::Down), f(&self.hi, Rounding::Up), bits)
    }

    pub fn min(&self, other: &Enclosure) -> Self {
        Self::raw(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().min(other.hi.clone()),
            self.prec(other),
        )
    }

    pub fn max(&self, other: &Enclosure) -> Self {
        Self::raw(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.prec(other),
        )
    }

    pub fn hull(&self, other: &Enclosure) -> Self {
        Self::raw(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.prec(other),
        )
    }

    /// Intersection, `None` when disjoint.
    pub fn intersect(&self, other: &Enclosure) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then(|| Self::raw(lo, hi, self.prec(other)))
    }

    /// Clamp into `[a, b]` (used where the exact value is known to lie there).
    pub fn clamp(&self, a: &Dyadic, b: &Dyadic) -> Self {
        let a = Bound::Finite(a.clone());
        let b = Bound::Finite(b.clone());
        let lo = self.lo.clone().max(a.clone()).min(b.clone());
        let hi = self.hi.clone().min(b).max(a);
        Self::raw(lo, hi, self.bits)
    }

    pub fn compare(&self, other: &Enclosure) -> Comparison {
        compare(self, other)
    }

    /// `self < other` for every pair of enclosed values.
    pub fn certainly_lt(&self, other: &Enclosure) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Enclosure) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_gt(&self, other: &Enclosure) -> bool {
        other.certainly_lt(self)
    }

    pub fn certainly_ge(&self, other: &Enclosure) -> bool {
        other.certainly_le(self)
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo > Bound::Finite(Dyadic::zero())
    }

    pub fn certainly_nonnegative(&self) -> bool {
        self.lo >= Bound::Finite(Dyadic::zero())
    }

    /// Decimal rendering of the lower end, rounded down.
    pub fn lo_string(&self, digits: usize) -> String {
        bound_string(&self.lo, digits, Rounding::Down)
    }

    /// Decimal rendering of the upper end, rounded up.
    pub fn hi_string(&self, digits: usize) -> String {
        bound_string(&self.hi, digits, Rounding::Up)
    }
}

fn bound_string(b: &Bound, digits: usize, dir: Rounding) -> String {
    match b {
        Bound::NegInf => "-inf".into(),
        Bound::PosInf => "inf".into(),
        Bound::Finite(d) => decimal::directed_scientific(d, digits, dir),
    }
}

/// `Less` iff `a.hi < b.lo`, `Greater` iff `a.lo > b.hi`, `Equal` iff both
/// are the same point, otherwise `Undetermined`.
pub fn compare(a: &Enclosure, b: &Enclosure) -> Comparison {
    if a.hi < b.lo {
        Comparison::Less
    } else if a.lo > b.hi {
        Comparison::Greater
    } else if a.is_point() && a.lo == b.lo && b.is_point() {
        Comparison::Equal
    } else {
        Comparison::Undetermined
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]@{}", self.lo, self.hi, self.bits)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_string(17), self.hi_string(17))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: f64, b: f64) -> Enclosure {
        Enclosure::from_dyadics(
            Dyadic::from_f64(a).unwrap(),
            Dyadic::from_f64(b).unwrap(),
            64,
        )
        .unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&e(1.0, 1.0), &e(2.0, 2.0)), Comparison::Less);
        assert_eq!(compare(&e(1.0, 3.0), &e(2.0, 4.0)), Comparison::Undetermined);
        assert_eq!(compare(&e(4.0, 4.0), &e(4.0, 4.0)), Comparison::Equal);
        assert_eq!(compare(&e(5.0, 6.0), &e(2.0, 4.0)), Comparison::Greater);
    }

    #[test]
    fn arithmetic_contains_exact() {
        let a = e(1.0, 2.0);
        let b = e(-3.0, 0.5);
        let p = a.mul(&b);
        assert_eq!(p.lo_f64(), -6.0);
        assert_eq!(p.hi_f64(), 1.0);
        let q = e(1.0, 1.0).div(&e(3.0, 3.0)).unwrap();
        assert!(q.lo_f64() <= 1.0 / 3.0 && 1.0 / 3.0 <= q.hi_f64());
        assert!(e(1.0, 1.0).div(&b).is_err());
        assert!(e(-1.0, 1.0).log2().is_err());
    }

    #[test]
    fn infinities() {
        let inf = Enclosure::pos_inf(64);
        assert!(inf.is_pos_inf());
        assert!(inf.add(&e(1.0, 2.0)).is_pos_inf());
        assert!(e(1.0, 2.0).certainly_lt(&inf));
    }

    #[test]
    fn parse_literals() {
        let x = Enclosure::parse("2^-4", 64).unwrap();
        assert!(x.is_point());
        assert_eq!(x.lo_f64(), 0.0625);
        let y = Enclosure::parse("0.1", 64).unwrap();
        assert!(y.lo_f64() <= 0.1 && 0.1 <= y.hi_f64() && !y.is_point());
        let z = Enclosure::parse("2^(1/2)", 64).unwrap();
        assert!(z.lo_f64() <= std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 <= z.hi_f64());
    }

    #[test]
    fn pow_of_power() {
        let x = Enclosure::from_i64(8, 128);
        let p = Enclosure::parse("1/3", 128).unwrap();
        let r = x.pow(&p).unwrap();
        assert!(r.contains(&Dyadic::from_i64(2)));
        assert!(r.width_f64() < 1e-30);
    }
}
