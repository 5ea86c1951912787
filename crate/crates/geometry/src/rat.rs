//! Exact arbitrary-precision rationals and their canonical text forms.
//!
//! Every quantity in this crate is a [`Rat`]. There are no floats and no
//! epsilons anywhere: equality means equality.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exact rational number, always kept in reduced form with a positive
/// denominator (guaranteed by `num-rational`).
pub type Rat = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rat`].
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for the fraction `n/d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Error produced when a string is not a recognized exact rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatParseError {
    pub input: String,
    pub reason: &'static str,
}

impl fmt::Display for RatParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}: {}", self.input, self.reason)
    }
}

impl std::error::Error for RatParseError {}

/// Parses `"p/q"`, a decimal such as `"0.3"` (read exactly: 3/10), or a
/// plain integer. An optional leading sign is accepted.
pub fn parse_rat(text: &str) -> Result<Rat, RatParseError> {
    let err = |reason| RatParseError {
        input: text.to_owned(),
        reason,
    };
    let s = text.trim();
    if s.is_empty() {
        return Err(err("empty string"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err("bad numerator"))?;
        let den: BigInt = den.trim().parse().map_err(|_| err("bad denominator"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rat::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (negative, digits) = match int_part.as_bytes().first() {
            Some(b'-') => (true, &int_part[1..]),
            Some(b'+') => (false, &int_part[1..]),
            _ => (false, int_part),
        };
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err("bad integer part"));
        }
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(err("bad fractional part"));
        }
        let whole: BigInt = digits.parse().map_err(|_| err("bad integer part"))?;
        let frac: BigInt = frac_part.parse().map_err(|_| err("bad fractional part"))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let unsigned = Rat::from_integer(whole) + Rat::new(frac, scale);
        return Ok(if negative { -unsigned } else { unsigned });
    }
    let int: BigInt = s
        .parse()
        .map_err(|_| err("not an integer, p/q, or decimal"))?;
    Ok(Rat::from_integer(int))
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Scales a nonzero rational vector by a positive factor so that all
/// entries become integers with overall gcd 1. The zero vector is
/// returned unchanged.
pub fn primitive_scale(row: &[Rat]) -> Vec<Rat> {
    let mut denom_lcm = BigInt::one();
    for v in row {
        denom_lcm = denom_lcm.lcm(v.denom());
    }
    let mut scaled: Vec<BigInt> = row
        .iter()
        .map(|v| v.numer() * (&denom_lcm / v.denom()))
        .collect();
    let mut gcd = BigInt::zero();
    for v in &scaled {
        gcd = gcd.gcd(v);
    }
    if gcd.is_zero() {
        return row.to_vec();
    }
    for v in &mut scaled {
        *v = &*v / &gcd;
    }
    scaled.into_iter().map(Rat::from_integer).collect()
}

/// Like [`primitive_scale`], then flips the sign so the first nonzero
/// entry is positive. Used for equality normals, where orientation is
/// arbitrary.
pub fn primitive_signed(row: &[Rat]) -> Vec<Rat> {
    let mut out = primitive_scale(row);
    if let Some(first) = out.iter().find(|v| !v.is_zero()) {
        if first.is_negative() {
            for v in &mut out {
                *v = -v.clone();
            }
        }
    }
    out
}

/// Dot product of two equal-length vectors.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}
