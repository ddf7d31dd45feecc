//! Decimal formatting with directed rounding, and exact parsing of decimal,
//! fraction and power-of-two literals.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Rounding};
use crate::error::Error;

/// Exact decimal expansion of a dyadic (always finite).
pub fn exact_decimal(d: &Dyadic) -> String {
    if d.is_zero() {
        return "0".to_string();
    }
    let sign = if d.is_negative() { "-" } else { "" };
    let exp = d.exponent();
    if exp >= 0 {
        let v = d.mantissa() << (exp as u64);
        return format!("{sign}{v}");
    }
    let k = (-exp) as u32;
    let scaled = d.mantissa() * BigUint::from(5u32).pow(k);
    let mut digits = scaled.to_string();
    if digits.len() <= k as usize {
        let pad = k as usize + 1 - digits.len();
        digits.insert_str(0, &"0".repeat(pad));
    }
    let split = digits.len() - k as usize;
    let (int, frac) = digits.split_at(split);
    let frac = frac.trim_end_matches('0');
    format!("{sign}{int}.{frac}")
}

fn pow10(k: u32) -> BigUint {
    BigUint::from(10u32).pow(k)
}

fn div_directed(num: &BigInt, den: &BigUint, dir: Rounding) -> BigInt {
    let den = BigInt::from(den.clone());
    let (q, r) = num.div_mod_floor(&den);
    if dir == Rounding::Up && !r.is_zero() {
        q + 1
    } else {
        q
    }
}

/// Scientific notation with `sig` significant digits, rounded in `dir`.
pub fn directed_scientific(d: &Dyadic, sig: usize, dir: Rounding) -> String {
    if d.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1);
    // Estimate of floor(log10 |d|); corrected below.
    let mut k = ((d.top() - 1) as f64 * std::f64::consts::LOG10_2).floor() as i64;
    for _ in 0..4 {
        let s = sig as i64 - 1 - k;
        let exp = d.exponent();
        let mut num = BigInt::from_biguint(
            if d.is_negative() { Sign::Minus } else { Sign::Plus },
            d.mantissa().clone(),
        );
        let mut den = BigUint::one();
        if exp >= 0 {
            num <<= exp as u64;
        } else {
            den <<= (-exp) as u64;
        }
        if s >= 0 {
            num *= BigInt::from(pow10(s as u32));
        } else {
            den *= pow10((-s) as u32);
        }
        let n = div_directed(&num, &den, dir);
        let digits = n.abs().to_string();
        if digits.len() > sig {
            k += 1;
            continue;
        }
        if digits.len() < sig && !(digits.len() == 1 && n.abs() <= BigInt::one()) {
            k -= 1;
            continue;
        }
        let sign = if n.is_negative() { "-" } else { "" };
        let (head, tail) = digits.split_at(1);
        let mut out = format!("{sign}{head}");
        if !tail.is_empty() {
            out.push('.');
            out.push_str(tail);
        }
        out.push_str(&format!("e{k}"));
        return out;
    }
    // Fallback that is always correct: the exact value.
    exact_decimal(d)
}

/// A parsed literal: either an exact rational `num/den` or `2^exponent`
/// where the exponent is itself a rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Literal {
    Rational { num: BigInt, den: BigUint },
    Pow2 { num: BigInt, den: BigUint },
}

fn parse_decimal(s: &str) -> Result<(BigInt, BigUint), Error> {
    let bad = || Error::Parse(format!("not a number: {s:?}"));
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(i) => (
            &s[..i],
            s[i + 1..].parse::<i32>().map_err(|_| bad())?,
        ),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let mut num: BigInt = digits.parse::<BigInt>().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let shift = exp10 as i64 - frac.len() as i64;
    if shift >= 0 {
        num *= BigInt::from(pow10(shift as u32));
        Ok((num, BigUint::one()))
    } else {
        Ok((num, pow10((-shift) as u32)))
    }
}

fn parse_rational(s: &str) -> Result<(BigInt, BigUint), Error> {
    match s.split_once('/') {
        Some((a, b)) => {
            let (n1, d1) = parse_decimal(a)?;
            let (n2, d2) = parse_decimal(b)?;
            if n2.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            // (n1/d1) / (n2/d2) = n1*d2 / (d1*n2)
            let mut num = n1 * BigInt::from(d2);
            let mut den = BigInt::from(d1) * n2;
            if den.is_negative() {
                num = -num;
                den = -den;
            }
            Ok((num, den.to_biguint().unwrap_or_default()))
        }
        None => parse_decimal(s),
    }
}

/// Parse `1.25`, `-3e-2`, `1/10`, `2^-4`, `2^(1/3)`.
pub fn parse_literal(s: &str) -> Result<Literal, Error> {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("2^") {
        let rest = rest.trim();
        let rest = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(rest);
        let (num, den) = parse_rational(rest)?;
        return Ok(Literal::Pow2 { num, den });
    }
    let (num, den) = parse_rational(t)?;
    Ok(Literal::Rational { num, den })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: f64) -> Dyadic {
        Dyadic::from_f64(v).unwrap()
    }

    #[test]
    fn exact_decimals() {
        assert_eq!(exact_decimal(&d(12.0)), "12");
        assert_eq!(exact_decimal(&d(-0.375)), "-0.375");
        assert_eq!(exact_decimal(&Dyadic::pow2(-4)), "0.0625");
    }

    #[test]
    fn scientific_is_directed() {
        let third_lo = Dyadic::one().div_round(&Dyadic::from_i64(3), 80, Rounding::Down);
        assert_eq!(directed_scientific(&third_lo, 5, Rounding::Down), "3.3333e-1");
        assert_eq!(directed_scientific(&third_lo, 5, Rounding::Up), "3.3334e-1");
        assert_eq!(directed_scientific(&d(1.0), 3, Rounding::Down), "1.00e0");
        assert_eq!(directed_scientific(&d(-2.5), 2, Rounding::Down), "-2.5e0");
        assert_eq!(directed_scientific(&d(1024.0), 2, Rounding::Up), "1.1e3");
    }

    #[test]
    fn literals() {
        assert_eq!(
            parse_literal("0.25").unwrap(),
            Literal::Rational {
                num: BigInt::from(25),
                den: BigUint::from(100u32)
            }
        );
        assert!(matches!(parse_literal("2^-4").unwrap(), Literal::Pow2 { .. }));
        assert!(matches!(parse_literal("1/10").unwrap(), Literal::Rational { .. }));
        assert!(parse_literal("abc").is_err());
        assert!(parse_literal("1/0").is_err());
        assert!(parse_literal("").is_err());
    }
}
