//! Exact rationals plus decimal rendering with controlled rounding direction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Shorthand constructor. Panics on a zero denominator; meant for literals.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Comparison through the sign of the difference, in constant stack space.
///
/// The `Ord` impl on `Rational` recurses once per shared continued-fraction
/// term of the two values; comparing two approximations of the same real
/// that agree to many thousands of bits overflows the stack. This trades
/// that recursion for one cross-multiplication.
pub fn cmp_flat(a: &Rational, b: &Rational) -> std::cmp::Ordering {
    use num_bigint::Sign;
    match (a - b).numer().sign() {
        Sign::Minus => std::cmp::Ordering::Less,
        Sign::NoSign => std::cmp::Ordering::Equal,
        Sign::Plus => std::cmp::Ordering::Greater,
    }
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let (numer_str, denom_str) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let numer: BigInt = numer_str
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer `{numer_str}`")))?;
    let denom: BigInt = match denom_str {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer `{d}`")))?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Rational::new(numer, denom))
}

fn pow10(digits: u32) -> BigInt {
    BigInt::from(10u8).pow(digits)
}

/// `v` is a value scaled by `10^digits`; render it with a decimal point.
fn render_scaled(v: &BigInt, digits: u32) -> String {
    if digits == 0 {
        return v.to_string();
    }
    let digits = digits as usize;
    let abs = v.abs().to_string();
    let padded = if abs.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - abs.len()), abs)
    } else {
        abs
    };
    let split = padded.len() - digits;
    let sign = if v.is_negative() { "-" } else { "" };
    format!("{}{}.{}", sign, &padded[..split], &padded[split..])
}

/// `r` to `digits` decimal places, rounding half away from zero.
pub fn decimal_round(r: &Rational, digits: u32) -> String {
    let t = r.numer() * pow10(digits);
    let d = r.denom();
    let v_abs = (BigInt::from(2) * t.abs() + d).div_floor(&(BigInt::from(2) * d));
    let v = if t.is_negative() { -v_abs } else { v_abs };
    render_scaled(&v, digits)
}

/// Largest multiple of `10^-digits` that is `<= r` (round toward -inf).
pub fn decimal_floor(r: &Rational, digits: u32) -> String {
    let v = (r.numer() * pow10(digits)).div_floor(r.denom());
    render_scaled(&v, digits)
}

/// Smallest multiple of `10^-digits` that is `>= r` (round toward +inf).
pub fn decimal_ceil(r: &Rational, digits: u32) -> String {
    let v = (r.numer() * pow10(digits)).div_ceil(r.denom());
    render_scaled(&v, digits)
}
