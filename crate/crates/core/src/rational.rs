//! Exact rational arithmetic helpers shared across the crate.
//!
//! Every certified quantity (kappa, eps, normalized costs, bound values)
//! is a [`Rational`]; floating point never enters a certified computation.
//! Decimal rendering exists purely for CSV output aimed at plotters.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, the numeric workhorse of the crate.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}` (expected `p` or `p/q`)")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Build a rational from a machine-integer pair; panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parse `p` or `p/q` into a rational. Whitespace is not accepted.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    if text.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let malformed = || RationalParseError::Malformed(text.to_owned());
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (
            n.parse::<BigInt>().map_err(|_| malformed())?,
            d.parse::<BigInt>().map_err(|_| malformed())?,
        ),
        None => (text.parse::<BigInt>().map_err(|_| malformed())?, BigInt::one()),
    };
    if denom.is_zero() {
        return Err(RationalParseError::ZeroDenominator(text.to_owned()));
    }
    Ok(Rational::new(numer, denom))
}

/// Render as `p/q`, or plain `p` when the reduced denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Render as a plain decimal rounded to `sig` significant digits.
///
/// Terminating decimals keep their exact value with trailing zeros trimmed
/// (`3/2` gives `1.5`); non-terminating ones are rounded half-up. No
/// scientific notation is produced.
pub fn to_decimal_string(r: &Rational, sig: u32) -> String {
    assert!(sig >= 1, "need at least one significant digit");
    if r.is_zero() {
        return "0".to_owned();
    }
    let numer = r.numer().abs();
    let denom = r.denom().clone();

    let int_part = &numer / &denom;
    // Number of decimal places to keep so that `sig` significant digits survive.
    let places: i64 = if !int_part.is_zero() {
        sig as i64 - int_part.to_string().len() as i64
    } else {
        // Count the zeros between the point and the first significant digit.
        let mut zeros = 0i64;
        let mut scaled = numer.clone() * 10;
        while scaled < denom {
            scaled *= 10;
            zeros += 1;
        }
        zeros + sig as i64
    };

    // Round half-up at the chosen position: floor((2*a + b) / (2*b)).
    let (a, b) = if places >= 0 {
        (numer * BigInt::from(10).pow(places as u32), denom)
    } else {
        (numer, denom * BigInt::from(10).pow((-places) as u32))
    };
    let rounded = (BigInt::from(2) * a + &b) / (BigInt::from(2) * b);

    let mut out = if places <= 0 {
        (rounded * BigInt::from(10).pow((-places) as u32)).to_string()
    } else {
        let digits = rounded.to_string();
        let places = places as usize;
        let padded = if digits.len() <= places {
            format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
        } else {
            digits
        };
        let split = padded.len() - places;
        let trimmed = format!("{}.{}", &padded[..split], &padded[split..]);
        let trimmed = trimmed.trim_end_matches('0').trim_end_matches('.');
        trimmed.to_owned()
    };
    if out.is_empty() {
        out.push('0');
    }
    if r.is_negative() && out != "0" {
        out.insert(0, '-');
    }
    out
}

/// Exact floor of a nonnegative rational as a machine integer.
pub fn floor_usize(r: &Rational) -> usize {
    r.floor().to_integer().to_usize().expect("floor fits in usize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), ratio(3, 1));
        assert_eq!(parse_rational("2/5").unwrap(), ratio(2, 5));
        assert_eq!(parse_rational("-7/2").unwrap(), ratio(-7, 2));
        assert_eq!(parse_rational("4/8").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_bad_literals() {
        assert_eq!(parse_rational(""), Err(RationalParseError::Empty));
        assert!(matches!(parse_rational("a/b"), Err(RationalParseError::Malformed(_))));
        assert!(matches!(parse_rational("1/2/3"), Err(RationalParseError::Malformed(_))));
        assert!(matches!(parse_rational("1/0"), Err(RationalParseError::ZeroDenominator(_))));
    }

    #[test]
    fn formats_reduced_fractions() {
        assert_eq!(format_rational(&ratio(5, 4)), "5/4");
        assert_eq!(format_rational(&ratio(4, 2)), "2");
        assert_eq!(format_rational(&ratio(0, 7)), "0");
    }

    #[test]
    fn decimal_rendering_is_exact_for_terminating_values() {
        assert_eq!(to_decimal_string(&ratio(3, 2), 15), "1.5");
        assert_eq!(to_decimal_string(&ratio(5, 4), 15), "1.25");
        assert_eq!(to_decimal_string(&ratio(2, 4096), 15), "0.00048828125");
        assert_eq!(to_decimal_string(&ratio(127, 2), 15), "63.5");
        assert_eq!(to_decimal_string(&ratio(6, 1), 15), "6");
        assert_eq!(to_decimal_string(&Rational::zero(), 15), "0");
    }

    #[test]
    fn decimal_rendering_rounds_repeating_values() {
        assert_eq!(to_decimal_string(&ratio(1, 3), 15), "0.333333333333333");
        assert_eq!(to_decimal_string(&ratio(2, 3), 15), "0.666666666666667");
        assert_eq!(to_decimal_string(&ratio(2, 3), 3), "0.667");
        assert_eq!(to_decimal_string(&ratio(-1, 3), 3), "-0.333");
        assert_eq!(to_decimal_string(&ratio(999, 1000), 2), "1");
        assert_eq!(to_decimal_string(&ratio(1, 700), 3), "0.00143");
    }

    #[test]
    fn decimal_rendering_handles_wide_integers() {
        assert_eq!(to_decimal_string(&ratio(123456, 1), 3), "123000");
    }

    #[test]
    fn floors_to_machine_integers() {
        assert_eq!(floor_usize(&ratio(32, 5)), 6);
        assert_eq!(floor_usize(&ratio(16, 4)), 4);
        assert_eq!(floor_usize(&ratio(16, 3)), 5);
    }
}
