//! Exact dyadic rationals `±m·2^e` with explicit directed rounding.
//!
//! Every bound of an [`Enclosure`](super::Enclosure) is a `Dyadic`. Exact
//! operations (`add`, `mul`) never round; the `*_round` variants round the
//! exact result toward −∞ or +∞ to a requested number of significant bits.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Direction of a rounding step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rounding {
    /// Toward −∞.
    Down,
    /// Toward +∞.
    Up,
}

impl Rounding {
    pub fn flip(self) -> Self {
        match self {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
        }
    }
}

/// `(-1)^neg · mag · 2^exp`, normalized so that `mag` is odd (or the value is
/// zero with `exp == 0`). Normalization makes structural equality numeric.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    neg: bool,
    mag: BigUint,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            neg: false,
            mag: BigUint::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::pow2(0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            neg: false,
            mag: BigUint::one(),
            exp: k,
        }
    }

    pub fn from_parts(neg: bool, mag: BigUint, exp: i64) -> Self {
        if mag.is_zero() {
            return Self::zero();
        }
        let tz = mag.trailing_zeros().unwrap_or(0);
        Dyadic {
            neg,
            mag: mag >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn from_bigint(v: &BigInt, exp: i64) -> Self {
        let (sign, mag) = v.clone().into_parts();
        Self::from_parts(sign == Sign::Minus, mag, exp)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_parts(v < 0, BigUint::from(v.unsigned_abs()), 0)
    }

    /// Exact conversion; `None` for NaN and infinities.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Self::zero());
        }
        let bits = v.to_bits();
        let neg = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Some(Self::from_parts(neg, BigUint::from(mant), exp))
    }

    pub fn is_zero(&self) -> bool {
        self.mag.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.neg
    }

    pub fn is_positive(&self) -> bool {
        !self.neg && !self.mag.is_zero()
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mag
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    /// Number of significant bits.
    pub fn bit_len(&self) -> u64 {
        self.mag.bits()
    }

    /// `|self| < 2^top` and `|self| >= 2^(top-1)`. Zero maps to `i64::MIN`.
    pub fn top(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mag.bits() as i64
        }
    }

    pub fn is_integer(&self) -> bool {
        self.is_zero() || self.exp >= 0
    }

    /// True when the value is an exact power of two (positive).
    pub fn is_pow2(&self) -> bool {
        !self.neg && self.mag.is_one()
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            neg: !self.neg,
            mag: self.mag.clone(),
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            neg: false,
            mag: self.mag.clone(),
            exp: self.exp,
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            neg: self.neg,
            mag: self.mag.clone(),
            exp: self.exp + k,
        }
    }

    fn to_bigint_at(&self, exp: i64) -> BigInt {
        debug_assert!(exp <= self.exp || self.is_zero());
        let shifted = &self.mag << ((self.exp - exp) as u64);
        BigInt::from_biguint(if self.neg { Sign::Minus } else { Sign::Plus }, shifted)
    }

    /// Exact sum. Callers that can tolerate rounding should prefer
    /// [`Dyadic::add_round`], which avoids huge alignment shifts.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let sum = self.to_bigint_at(e) + other.to_bigint_at(e);
        Self::from_bigint(&sum, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Dyadic {
            neg: self.neg != other.neg,
            mag: &self.mag * &other.mag,
            exp: self.exp + other.exp,
        }
    }

    /// Round to at most `bits` significant bits in direction `dir`.
    pub fn round(&self, bits: u32, dir: Rounding) -> Self {
        let len = self.mag.bits();
        if len <= bits as u64 {
            return self.clone();
        }
        let shift = len - bits as u64;
        // mag is odd, so any positive shift discards a nonzero remainder.
        let q = &self.mag >> shift;
        let away = match (self.neg, dir) {
            (false, Rounding::Up) | (true, Rounding::Down) => true,
            (false, Rounding::Down) | (true, Rounding::Up) => false,
        };
        let q = if away { q + 1u32 } else { q };
        Self::from_parts(self.neg, q, self.exp + shift as i64)
    }

    /// Correctly directed-rounded sum.
    pub fn add_round(&self, other: &Self, bits: u32, dir: Rounding) -> Self {
        if self.is_zero() {
            return other.round(bits, dir);
        }
        if other.is_zero() {
            return self.round(bits, dir);
        }
        let (big, small) = if self.top() >= other.top() {
            (self, other)
        } else {
            (other, self)
        };
        // When `small` lies entirely below both the lowest set bit of `big`
        // and a quarter of the rounding granularity, replacing it by any
        // same-signed value in that range leaves the rounded result unchanged.
        let floor_exp = big.exp.min(big.top() - bits as i64);
        if small.top() < floor_exp - 2 {
            let standin = Dyadic {
                neg: small.neg,
                mag: BigUint::one(),
                exp: floor_exp - 3,
            };
            return big.add(&standin).round(bits, dir);
        }
        big.add(small).round(bits, dir)
    }

    pub fn sub_round(&self, other: &Self, bits: u32, dir: Rounding) -> Self {
        self.add_round(&other.neg(), bits, dir)
    }

    pub fn mul_round(&self, other: &Self, bits: u32, dir: Rounding) -> Self {
        self.mul(other).round(bits, dir)
    }

    /// Directed-rounded quotient. Panics on division by zero.
    pub fn div_round(&self, other: &Self, bits: u32, dir: Rounding) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let want = bits as i64 + 2;
        let k = (want + other.mag.bits() as i64 - self.mag.bits() as i64).max(0) as u64;
        let num = &self.mag << k;
        let (q, r) = num.div_rem(&other.mag);
        let exp = self.exp - other.exp - k as i64;
        let neg = self.neg != other.neg;
        let exact = if r.is_zero() {
            Self::from_parts(neg, q, exp)
        } else {
            // Sticky bit: a value strictly between q and q+1 that rounds the
            // same way as the true quotient, since q carries >= bits+2 bits.
            Self::from_parts(neg, (q << 1u32) | BigUint::one(), exp - 1)
        };
        exact.round(bits, dir)
    }

    /// Directed-rounded square root of a nonnegative value.
    pub fn sqrt_round(&self, bits: u32, dir: Rounding) -> Self {
        assert!(!self.neg, "square root of a negative dyadic");
        if self.is_zero() {
            return Self::zero();
        }
        let want = 2 * (bits as i64 + 2);
        let mut t = (want - self.mag.bits() as i64).max(0);
        if (self.exp - t).rem_euclid(2) != 0 {
            t += 1;
        }
        let scaled = &self.mag << (t as u64);
        let r = scaled.sqrt();
        let exp = (self.exp - t) / 2;
        let exact = if &r * &r == scaled {
            Self::from_parts(false, r, exp)
        } else {
            Self::from_parts(false, (r << 1u32) | BigUint::one(), exp - 1)
        };
        exact.round(bits, dir)
    }

    /// `floor(self)` as a big integer.
    pub fn floor_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            return self.to_bigint_at(0);
        }
        let sh = (-self.exp) as u64;
        let q = &self.mag >> sh;
        if self.neg {
            -BigInt::from(q + 1u32)
        } else {
            BigInt::from(q)
        }
    }

    /// `floor(self * 2^scale)` or `ceil(...)` as a signed integer.
    pub fn to_fixed(&self, scale: i64, dir: Rounding) -> BigInt {
        let v = self.mul_pow2(scale);
        let f = v.floor_bigint();
        if dir == Rounding::Up && !v.is_integer() {
            f + 1
        } else {
            f
        }
    }

    /// Nonnegative fixed-point conversion; negative inputs clamp to zero.
    pub fn to_fixed_unsigned(&self, scale: i64, dir: Rounding) -> BigUint {
        let v = self.to_fixed(scale, dir);
        v.to_biguint().unwrap_or_default()
    }

    /// Directed conversion to `f64`, saturating to ±∞ on overflow.
    pub fn to_f64(&self, dir: Rounding) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let top = self.top();
        // Subnormals carry fewer significant bits.
        let avail = if top <= -1022 { top + 1074 } else { 53 };
        let away = matches!((self.neg, dir), (false, Rounding::Up) | (true, Rounding::Down));
        if avail <= 0 {
            let tiny = f64::from_bits(1);
            let mag = if away { tiny } else { 0.0 };
            return if self.neg { -mag } else { mag };
        }
        let r = self.round(avail as u32, dir);
        if r.top() > 1024 {
            let mag = if away { f64::INFINITY } else { f64::MAX };
            return if r.neg { -mag } else { mag };
        }
        let m = r.mag.to_f64().unwrap_or(f64::INFINITY);
        let e1 = r.exp / 2;
        let e2 = r.exp - e1;
        let v = m * 2f64.powi(e1 as i32) * 2f64.powi(e2 as i32);
        if r.neg {
            -v
        } else {
            v
        }
    }

    /// Nearest-ish `f64` for display and heuristics only.
    pub fn approx_f64(&self) -> f64 {
        self.to_f64(Rounding::Down)
    }

    /// Midpoint `(a+b)/2`, exact.
    pub fn midpoint(a: &Self, b: &Self) -> Self {
        a.add(b).mul_pow2(-1)
    }

    pub fn min<'a>(a: &'a Self, b: &'a Self) -> &'a Self {
        if a <= b {
            a
        } else {
            b
        }
    }

    pub fn max<'a>(a: &'a Self, b: &'a Self) -> &'a Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => {
                return if other.neg {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (false, true) => {
                return if self.neg {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            _ => {}
        }
        if self.neg != other.neg {
            return if self.neg {
                Ordering::Less
            } else {
                Ordering::Greater
            };
        }
        let mag_order = match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let e = self.exp.min(other.exp);
                let a = &self.mag << ((self.exp - e) as u64);
                let b = &other.mag << ((other.exp - e) as u64);
                a.cmp(&b)
            }
            o => o,
        };
        if self.neg {
            mag_order.reverse()
        } else {
            mag_order
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}*2^{}",
            if self.neg { "-" } else { "" },
            self.mag,
            self.exp
        )
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::decimal::exact_decimal(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: f64) -> Dyadic {
        Dyadic::from_f64(v).unwrap()
    }

    #[test]
    fn normalization_makes_equality_numeric() {
        assert_eq!(Dyadic::from_i64(12), d(12.0));
        assert_eq!(Dyadic::from_parts(false, BigUint::from(24u32), -1), d(12.0));
        assert_eq!(Dyadic::from_parts(true, BigUint::zero(), 5), Dyadic::zero());
    }

    #[test]
    fn ordering_handles_signs_and_scales() {
        let mut v = vec![d(3.5), d(-1.0), d(0.0), d(1e-300), d(-1e300), d(2.0)];
        v.sort();
        let f: Vec<f64> = v.iter().map(|x| x.approx_f64()).collect();
        assert_eq!(f, vec![-1e300, -1.0, 0.0, 1e-300, 2.0, 3.5]);
    }

    #[test]
    fn directed_rounding_brackets_value() {
        let third = Dyadic::one().div_round(&Dyadic::from_i64(3), 20, Rounding::Down);
        let third_up = Dyadic::one().div_round(&Dyadic::from_i64(3), 20, Rounding::Up);
        assert!(third < third_up);
        assert!(third.mul(&Dyadic::from_i64(3)) < Dyadic::one());
        assert!(third_up.mul(&Dyadic::from_i64(3)) > Dyadic::one());
        assert!(third.bit_len() <= 20 && third_up.bit_len() <= 20);
    }

    #[test]
    fn negative_rounding_directions() {
        let v = Dyadic::from_i64(-7); // 0b111
        assert_eq!(v.round(2, Rounding::Down), Dyadic::from_i64(-8));
        assert_eq!(v.round(2, Rounding::Up), Dyadic::from_i64(-6));
    }

    #[test]
    fn sticky_add_matches_exact_add() {
        let big = d(1.0);
        let tiny = Dyadic::pow2(-10_000);
        assert_eq!(big.add_round(&tiny, 64, Rounding::Down), big);
        assert!(big.add_round(&tiny, 64, Rounding::Up) > big);
        assert!(big.add_round(&tiny.neg(), 64, Rounding::Down) < big);
        assert_eq!(big.add_round(&tiny.neg(), 64, Rounding::Up), big);
        // Modest gaps go the exact route.
        let a = d(3.0);
        let b = Dyadic::pow2(-70);
        assert_eq!(a.add_round(&b, 200, Rounding::Down), a.add(&b));
    }

    #[test]
    fn sqrt_exact_and_inexact() {
        assert_eq!(d(9.0).sqrt_round(64, Rounding::Down), d(3.0));
        let lo = d(2.0).sqrt_round(64, Rounding::Down);
        let hi = d(2.0).sqrt_round(64, Rounding::Up);
        assert!(lo.mul(&lo) < d(2.0) && hi.mul(&hi) > d(2.0));
    }

    #[test]
    fn f64_round_trip() {
        for v in [1.5, -0.1, 1e-310, 123456789.0, f64::MAX] {
            assert_eq!(d(v).to_f64(Rounding::Down), v);
            assert_eq!(d(v).to_f64(Rounding::Up), v);
        }
    }

    #[test]
    fn fixed_point_conversion() {
        assert_eq!(d(-1.25).to_fixed(1, Rounding::Down), BigInt::from(-3));
        assert_eq!(d(-1.25).to_fixed(1, Rounding::Up), BigInt::from(-2));
        assert_eq!(d(1.25).floor_bigint(), BigInt::from(1));
        assert_eq!(d(-1.25).floor_bigint(), BigInt::from(-2));
    }
}
