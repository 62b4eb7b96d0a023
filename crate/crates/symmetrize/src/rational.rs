//! Exact rational plumbing: parsing, formatting, decimal rendering, and
//! continued-fraction rounding of floating-point search output.
//!
//! All probabilities, coordinates, and thresholds in this crate are carried
//! as [`BigRational`] values; nothing in this module rounds except where the
//! name says so.

use num::bigint::{BigInt, Sign};
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::error::SymmetrizeError;
use crate::Result;

/// Rational enclosure of π, lower bound (333/106 < π).
pub fn pi_lower() -> BigRational {
    BigRational::new(BigInt::from(333), BigInt::from(106))
}

/// Rational enclosure of π, upper bound (π < 355/113).
pub fn pi_upper() -> BigRational {
    BigRational::new(BigInt::from(355), BigInt::from(113))
}

/// Exact floor as a [`BigInt`].
pub fn floor_int(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

/// Exact ceiling as a [`BigInt`].
pub fn ceil_int(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

/// `⌈2b/a⌉` for positive rationals, in integer arithmetic.
pub fn ceil_2b_over_a(b: &BigRational, a: &BigRational) -> BigInt {
    ceil_int(&(BigRational::from_integer(BigInt::from(2)) * b / a))
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Convenience constructor for small rationals.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(big(num), big(den))
}

/// Parse an exact rational from `"p/q"`, an integer string, or a finite
/// decimal string such as `"-0.25"`. No rounding: decimals convert exactly.
pub fn parse_rational(input: &str) -> Result<BigRational> {
    let s = input.trim();
    let err = |reason: &str| SymmetrizeError::InvalidRational {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(err("empty string"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| err("numerator is not an integer"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| err("denominator is not an integer"))?;
        if d.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let digits: String = int_part.chars().chain(frac_part.chars()).collect();
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(err("malformed decimal"));
        }
        let n: BigInt = digits.parse().map_err(|_| err("malformed decimal"))?;
        let mut d = BigInt::one();
        for _ in 0..frac_part.len() {
            d *= 10;
        }
        let q = BigRational::new(n, d);
        // "-0.25" parses its digits as -025 only when int_part carries the sign
        // and a nonzero integer part; "-0.x" needs the sign applied by hand.
        if negative && !q.is_negative() && !q.is_zero() {
            return Ok(-q);
        }
        return Ok(q);
    }
    let n: BigInt = s.parse().map_err(|_| err("not an integer or p/q"))?;
    Ok(BigRational::from_integer(n))
}

/// Canonical string form: `"p"` when the denominator is 1, else `"p/q"`.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal rendering with a fixed number of significant digits and
/// round-half-even tie breaking. Falls back to scientific notation when the
/// magnitude leaves the plain-decimal window.
pub fn decimal_string(x: &BigRational, sig_digits: usize) -> String {
    assert!(sig_digits >= 1);
    if x.is_zero() {
        return "0".to_string();
    }
    let negative = x.is_negative();
    let mag = x.abs();

    // Decimal exponent e with 10^e <= mag < 10^(e+1).
    let mut e: i64 = 0;
    let ten = BigRational::from_integer(big(10));
    let one = BigRational::one();
    let mut scaled = mag.clone();
    while scaled >= ten {
        scaled /= &ten;
        e += 1;
    }
    while scaled < one {
        scaled *= &ten;
        e -= 1;
    }

    // Round mag * 10^(sig_digits - 1 - e) to the nearest integer, half to even.
    let shift = sig_digits as i64 - 1 - e;
    let mut m = mag;
    let ten_int = big(10);
    if shift >= 0 {
        let mut p = BigInt::one();
        for _ in 0..shift {
            p *= &ten_int;
        }
        m *= BigRational::from_integer(p);
    } else {
        let mut p = BigInt::one();
        for _ in 0..-shift {
            p *= &ten_int;
        }
        m /= BigRational::from_integer(p);
    }
    let mut digits_int = round_half_even_to_int(&m);

    // Rounding can carry into an extra digit (e.g. 999.95 -> 1000).
    let mut limit = BigInt::one();
    for _ in 0..sig_digits {
        limit *= &ten_int;
    }
    let mut e = e;
    if digits_int >= limit {
        digits_int /= &ten_int;
        e += 1;
    }

    let digits = digits_int.to_string();
    debug_assert_eq!(digits.len(), sig_digits);

    let body = if e >= 0 && (e as usize) < sig_digits {
        let split = e as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else if e < 0 && e >= -20 {
        let zeros = "0".repeat((-e - 1) as usize);
        format!("0.{}{}", zeros, digits)
    } else if e >= 0 && e <= 20 {
        // Integer magnitude beyond the significand: pad with zeros.
        let zeros = "0".repeat(e as usize + 1 - sig_digits);
        format!("{}{}.0", digits, zeros)
    } else {
        format!("{}.{}e{}", &digits[..1], &digits[1..], e)
    };
    if negative {
        format!("-{}", body)
    } else {
        body
    }
}

/// Nearest integer with ties to even, exact.
fn round_half_even_to_int(x: &BigRational) -> BigInt {
    let floor = floor_int(x);
    let frac = x - BigRational::from_integer(floor.clone());
    let half = ratio(1, 2);
    if frac > half {
        floor + 1
    } else if frac < half {
        floor
    } else if (&floor % 2i32).is_zero() {
        floor
    } else {
        floor + 1
    }
}

/// Round a float to an exact rational using continued-fraction convergents,
/// keeping the denominator at or below `den_cap`. Non-finite input maps
/// to 0.
pub fn rational_from_f64_capped(value: f64, den_cap: u64) -> BigRational {
    if !value.is_finite() || value == 0.0 {
        return BigRational::zero();
    }
    let negative = value < 0.0;
    let mut t = value.abs();
    let cap = BigInt::from(den_cap);

    let (mut h_prev, mut h) = (BigInt::one(), floor_to_bigint(t));
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    t -= t.floor();

    for _ in 0..64 {
        if t <= f64::EPSILON {
            break;
        }
        t = 1.0 / t;
        let a = floor_to_bigint(t);
        t -= t.floor();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if k_next > cap {
            break;
        }
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
    let q = BigRational::new(h, k);
    if negative {
        -q
    } else {
        q
    }
}

fn floor_to_bigint(x: f64) -> BigInt {
    let f = x.floor();
    BigInt::from(f as i128)
}

/// Serde adapter: rationals as `"p/q"` strings on the wire.
pub mod as_ratio_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BigRational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for vectors of rationals.
pub mod as_ratio_str_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        xs: &[BigRational],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Approximate a rational as f64 (search heuristics and diagnostics only).
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Out-of-range for f64; saturate with the sign.
        match x.numer().sign() {
            Sign::Minus => f64::NEG_INFINITY,
            _ => f64::INFINITY,
        }
    })
}
