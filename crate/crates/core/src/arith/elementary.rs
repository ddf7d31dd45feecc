//! Rigorous `2^x` and `log₂ x` on dyadic arguments.
//!
//! Both are evaluated in fixed point with every truncation rounded in the
//! requested direction and series tails bounded explicitly, so the returned
//! dyadic is a true lower (or upper) bound.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::dyadic::{Dyadic, Rounding};
use crate::error::{Error, Result};

const LN2_CACHE_BITS: u64 = 8192;
const GUARD: u64 = 32;

/// Largest exponent magnitude accepted by [`exp2_bound`].
pub const MAX_EXP2_ARG: i64 = 1 << 60;

fn div_dir(a: &BigUint, b: &BigUint, dir: Rounding) -> BigUint {
    let (q, r) = a.div_rem(b);
    if dir == Rounding::Up && !r.is_zero() {
        q + 1u32
    } else {
        q
    }
}

fn shr_dir(a: &BigUint, k: u64, dir: Rounding) -> BigUint {
    let q = a >> k;
    if dir == Rounding::Up && (&q << k) != *a {
        q + 1u32
    } else {
        q
    }
}

/// Bounds on `ln 2 · 2^w` via `ln 2 = 2·atanh(1/3)`.
fn ln2_series(w: u64) -> (BigUint, BigUint) {
    let g = 16;
    let one = BigUint::one() << (w + g);
    let three = BigUint::from(3u32);
    let nine = BigUint::from(9u32);
    let mut p_lo = div_dir(&one, &three, Rounding::Down);
    let mut p_hi = div_dir(&one, &three, Rounding::Up);
    let mut s_lo = BigUint::zero();
    let mut s_hi = BigUint::zero();
    let mut k: u32 = 0;
    loop {
        let d = BigUint::from(2 * k + 1);
        s_lo += div_dir(&p_lo, &d, Rounding::Down);
        s_hi += div_dir(&p_hi, &d, Rounding::Up);
        p_lo = div_dir(&p_lo, &nine, Rounding::Down);
        p_hi = div_dir(&p_hi, &nine, Rounding::Up);
        k += 1;
        if p_hi <= BigUint::one() {
            break;
        }
    }
    // Tail: Σ_{j≥k} p_j/(2j+1) ≤ p_k·9/8.
    s_hi += &p_hi * 2u32;
    let lo = shr_dir(&(s_lo << 1u32), g, Rounding::Down);
    let hi = shr_dir(&(s_hi << 1u32), g, Rounding::Up);
    (lo, hi)
}

fn ln2_cache() -> &'static (BigUint, BigUint) {
    static CACHE: OnceLock<(BigUint, BigUint)> = OnceLock::new();
    CACHE.get_or_init(|| ln2_series(LN2_CACHE_BITS))
}

/// `(lo, hi)` with `lo ≤ ln2·2^w ≤ hi`.
pub fn ln2_fixed(w: u64) -> (BigUint, BigUint) {
    if w <= LN2_CACHE_BITS {
        let (lo, hi) = ln2_cache();
        let k = LN2_CACHE_BITS - w;
        (shr_dir(lo, k, Rounding::Down), shr_dir(hi, k, Rounding::Up))
    } else {
        ln2_series(w)
    }
}

/// Directed bound on `ln 2` with `bits` significant bits.
pub fn ln2_bound(bits: u32, dir: Rounding) -> Dyadic {
    let w = bits as u64 + GUARD;
    let (lo, hi) = ln2_fixed(w);
    let v = if dir == Rounding::Down { lo } else { hi };
    Dyadic::from_parts(false, v, -(w as i64)).round(bits, dir)
}

/// Directed bound on `e^y · 2^w` for `y = yf·2^{-w}`, `0 ≤ y < 1`.
fn exp_fixed(yf: &BigUint, w: u64, dir: Rounding) -> BigUint {
    let one = BigUint::one() << w;
    let mut sum = one.clone();
    let mut term = one;
    let mut k: u32 = 1;
    loop {
        term = div_dir(&(&term * yf), &(BigUint::from(k) << w), dir);
        if dir == Rounding::Down {
            if term.is_zero() {
                return sum;
            }
            sum += &term;
        } else {
            sum += &term;
            if term <= BigUint::one() {
                // Terms at least halve from here on, so the tail is ≤ term.
                return sum + term;
            }
        }
        k += 1;
    }
}

/// Directed bound on `2^x`.
pub fn exp2_bound(x: &Dyadic, bits: u32, dir: Rounding) -> Result<Dyadic> {
    if x.top() > 61 {
        return Err(Error::Budget(format!(
            "2^x with |x| ≥ 2^60 is not representable (x ≈ {:e})",
            x.approx_f64()
        )));
    }
    let k = x.floor_bigint().to_i64().expect("bounded by the check above");
    if x.is_integer() {
        return Ok(Dyadic::pow2(k));
    }
    let r = x.sub(&Dyadic::from_i64(k));
    let w = bits as u64 + GUARD;
    let rf = r.to_fixed_unsigned(w as i64, dir);
    let (l_lo, l_hi) = ln2_fixed(w);
    let l = if dir == Rounding::Down { l_lo } else { l_hi };
    let y = shr_dir(&(rf * l), w, dir);
    let e = exp_fixed(&y, w, dir);
    Ok(Dyadic::from_parts(false, e, k - w as i64).round(bits, dir))
}

/// Directed bound on `atanh`-style series `S(a) = Σ a^{2k+1}/(2k+1)` at
/// scale `2^w`, for `0 ≤ a ≤ 1/5` given as `af·2^{-w}`.
fn atanh_series(af: &BigUint, w: u64, dir: Rounding) -> BigUint {
    let a2 = shr_dir(&(af * af), w, dir);
    let mut p = af.clone();
    let mut sum = BigUint::zero();
    let mut k: u32 = 0;
    loop {
        sum += div_dir(&p, &BigUint::from(2 * k + 1), dir);
        p = shr_dir(&(&p * &a2), w, dir);
        k += 1;
        if p.is_zero() {
            return sum;
        }
        if dir == Rounding::Up && p <= BigUint::one() {
            // Tail ≤ p·(1 + a² + …) < 2p.
            return sum + (p << 1u32);
        }
    }
}

/// Directed bound on `log₂ x` for `x > 0`.
pub fn log2_bound(x: &Dyadic, bits: u32, dir: Rounding) -> Result<Dyadic> {
    if !x.is_positive() {
        return Err(Error::Domain("log2 of a nonpositive value".into()));
    }
    if x.is_pow2() {
        return Ok(Dyadic::from_i64(x.top() - 1));
    }
    // x = 2^t · z with z in [3/4, 3/2).
    let mut t = x.top() - 1;
    let mut z = x.mul_pow2(-t);
    if z >= Dyadic::from_parts(false, BigUint::from(3u32), -1) {
        t += 1;
        z = z.mul_pow2(-1);
    }
    let one = Dyadic::one();
    let d = z.sub(&one);
    if d.is_zero() {
        return Ok(Dyadic::from_i64(t));
    }
    let pos = d.is_positive();
    // Relative accuracy for arguments close to 1.
    let w = bits as u64 + GUARD + 8 + (-d.top()).max(0) as u64;
    // ln z = ±2·S(|v|), v = (z-1)/(z+1); ln z is increasing in v.
    let mag_dir = if pos { dir } else { dir.flip() };
    let v = d.abs().div_round(&z.add(&one), w as u32, mag_dir);
    let vf = v.to_fixed_unsigned(w as i64, mag_dir);
    let s = atanh_series(&vf, w, mag_dir) << 1u32;
    let ln_z = Dyadic::from_parts(!pos, s, -(w as i64));
    // Dividing a positive numerator by a smaller ln2 makes it larger. The
    // quotient only needs relative accuracy, so ln2 is taken at `bits`.
    let l_dir = match (pos, dir) {
        (true, Rounding::Down) | (false, Rounding::Up) => Rounding::Up,
        _ => Rounding::Down,
    };
    let ln2 = ln2_bound(bits + GUARD as u32, l_dir);
    let q = ln_z.div_round(&ln2, bits + 16, dir);
    Ok(q.add_round(&Dyadic::from_i64(t), bits, dir))
}
