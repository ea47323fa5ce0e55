//! Exact rational parameters (densities, epsilon, delta, gamma).

use num_rational::Ratio;

use crate::{Error, Result};

pub type Rational = Ratio<i64>;

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: i64 = num
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad rational `{text}`")))?;
    let den: i64 = den
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad rational `{text}`")))?;
    if den == 0 {
        return Err(Error::InvalidParameter(format!("zero denominator in `{text}`")));
    }
    Ok(Rational::new(num, den))
}

/// `floor(base^exponent)` for a non-negative rational exponent, computed with
/// integer arithmetic only: the largest `x` with `x^q <= base^p`.
pub fn floor_pow(base: u64, exponent: Rational) -> Result<u64> {
    if *exponent.numer() < 0 {
        return Err(Error::InvalidParameter("negative exponent".into()));
    }
    let p = *exponent.numer() as u32;
    let q = *exponent.denom() as u32;
    if p == 0 {
        return Ok(1);
    }
    if base <= 1 {
        return Ok(base);
    }
    let target = checked_pow(base, p)
        .ok_or_else(|| Error::Resource(format!("{base}^{p} overflows")))?;
    let estimate = (base as f64).powf(p as f64 / q as f64).floor() as u64;
    let mut x = estimate.saturating_sub(2);
    while checked_pow(x + 1, q).is_some_and(|v| v <= target) {
        x += 1;
    }
    while x > 0 && checked_pow(x, q).is_none_or(|v| v > target) {
        x -= 1;
    }
    Ok(x)
}

fn checked_pow(base: u64, exp: u32) -> Option<u128> {
    (base as u128).checked_pow(exp)
}

pub fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}
