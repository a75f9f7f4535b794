//! Exact parsing of numeric flags. Decimal (`0.5`, `2.5e-3`) and rational
//! (`1/2`) literals are read into exact rationals and rounded to `f64` once.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

fn parse_decimal(s: &str) -> Result<BigRational, String> {
    let bad = || format!("not a number: {s:?}");
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(digits);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, scale.unsigned_abs() as usize));
    }
    Ok(if negative { -value } else { value })
}

/// A decimal or `p/q` literal as an exact rational.
pub fn parse_exact(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((num, den)) => {
            let den = parse_decimal(den.trim())?;
            if den.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(parse_decimal(num.trim())? / den)
        }
        None => parse_decimal(s),
    }
}

pub fn to_f64(x: &BigRational) -> Result<f64, String> {
    x.to_f64()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("{x} is out of floating-point range"))
}

pub fn parse_number(s: &str) -> Result<f64, String> {
    to_f64(&parse_exact(s)?)
}

/// `a,b,c`.
pub fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, got {s:?}"));
    }
    Ok([
        parse_number(parts[0])?,
        parse_number(parts[1])?,
        parse_number(parts[2])?,
    ])
}

/// One axis `lo:hi:count` of a verification grid: `count` equally spaced
/// values from `lo` to `hi` inclusive, spaced exactly before rounding.
pub fn parse_axis(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return Err(format!("grid axis must be lo:hi:count, got {s:?}"));
    };
    let (lo, hi) = (parse_exact(lo)?, parse_exact(hi)?);
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| format!("grid count must be a positive integer, got {count:?}"))?;
    if count == 0 {
        return Err("grid count must be positive".into());
    }
    if count == 1 {
        return Ok(vec![to_f64(&lo)?]);
    }
    let step = (&hi - &lo) / BigRational::from_integer(BigInt::from(count - 1));
    (0..count)
        .map(|i| to_f64(&(&lo + &step * BigRational::from_integer(BigInt::from(i)))))
        .collect()
}

/// Three axes separated by commas; the grid is their Cartesian product.
pub fn parse_grid(s: &str) -> Result<[Vec<f64>; 3], String> {
    let axes: Vec<&str> = s.split(',').collect();
    if axes.len() != 3 {
        return Err(format!("grid needs three axes, got {s:?}"));
    }
    Ok([
        parse_axis(axes[0])?,
        parse_axis(axes[1])?,
        parse_axis(axes[2])?,
    ])
}
