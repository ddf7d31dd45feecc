//! Special-purpose enclosures used by the construction.

use super::dyadic::{Dyadic, Rounding};
use super::elementary::ln2_bound;
use super::enclosure::{Bound, Enclosure};
use crate::error::{Error, Result};

/// Guard bits added for intermediate rounding steps.
pub const GUARD_BITS: u32 = 16;

/// Enclosure of `2^{√n}` of relative width at most `2^{1-bits}`; a point
/// when `n` is a perfect square.
pub fn pow2_sqrt(n: u64, bits: u32) -> Result<Enclosure> {
    if bits < 8 {
        return Err(Error::Config(format!(
            "precision of {bits} bits is below the minimum of 8"
        )));
    }
    if n == 0 {
        return Err(Error::Domain("pow2_sqrt requires n >= 1".into()));
    }
    let r = n.isqrt();
    if r * r == n {
        return Ok(Enclosure::pow2(r as i64, bits));
    }
    let work = bits + GUARD_BITS + 2 * (64 - n.leading_zeros());
    let nd = Dyadic::from_i64(n as i64);
    let s = Enclosure::from_dyadics(
        nd.sqrt_round(work, Rounding::Down),
        nd.sqrt_round(work, Rounding::Up),
        work,
    )?;
    Ok(s.exp2_bits(bits + 4)?.with_bits(bits))
}

/// `log₂(1 - 2^{-z})` for `z > 0`, with relative accuracy even when `z` is
/// large (the result is then close to `-2^{-z}/ln 2`).
pub fn log2_one_minus_pow2_neg(z: &Enclosure) -> Result<Enclosure> {
    if !z.certainly_positive() {
        return Err(Error::Domain("log2(1 - 2^-z) needs z > 0".into()));
    }
    let bits = z.bits();
    let q = z.neg().exp2_bits(bits + GUARD_BITS)?;
    let (q_lo, q_hi) = q.finite_bounds()?;
    if z.lo() > &Bound::Finite(Dyadic::from_i64(bits as i64 + 64)) {
        // δ ≤ -ln(1-δ) ≤ δ + δ² for δ = 2^{-z} ≤ 1/2.
        let w = bits + GUARD_BITS;
        let ln2_lo = ln2_bound(w, Rounding::Down);
        let ln2_hi = ln2_bound(w, Rounding::Up);
        let hi = q_lo.div_round(&ln2_hi, w, Rounding::Down).neg();
        let big = q_hi.mul(&Dyadic::one().add(q_hi));
        let lo = big.div_round(&ln2_lo, w, Rounding::Up).neg();
        return Ok(Enclosure::from_dyadics(lo, hi, w)?.round_to(bits));
    }
    // 1 - q is formed exactly; the logarithm adapts its working precision.
    let one = Dyadic::one();
    let v = Enclosure::from_dyadics(one.sub(q_hi), one.sub(q_lo), bits)?;
    v.log2()
}

/// `log₂(2^z - 1)` for `z > 0`.
pub fn log2_pow2_minus_one(z: &Enclosure) -> Result<Enclosure> {
    Ok(z.add(&log2_one_minus_pow2_neg(z)?))
}
