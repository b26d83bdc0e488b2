//! Decimal ASCII parsers for command-line values.

use std::ops::RangeInclusive;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty list")]
    Empty,
    #[error("`{0}` is not a nonnegative decimal integer")]
    NotANumber(String),
    #[error("coefficients must be positive")]
    ZeroCoefficient,
    #[error("range {lo}..{hi} is empty")]
    EmptyRange { lo: u64, hi: u64 },
}

fn number(s: &str) -> Result<u64, ParseError> {
    let t = s.trim();
    // u64::from_str accepts a leading '+'
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::NotANumber(s.to_owned()));
    }
    t.parse().map_err(|_| ParseError::NotANumber(s.to_owned()))
}

/// `"1,1,2,3"` into `[1, 1, 2, 3]`. Order is preserved; validation of the
/// form itself is left to the engine.
pub fn parse_coeffs(s: &str) -> Result<Vec<u64>, ParseError> {
    if s.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let out = s.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
    if out.contains(&0) {
        return Err(ParseError::ZeroCoefficient);
    }
    Ok(out)
}

/// Like [`parse_coeffs`] but zero is allowed.
pub fn parse_list(s: &str) -> Result<Vec<u64>, ParseError> {
    if s.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    s.split(',').map(number).collect()
}

/// `"9..30"` (inclusive) or a single value `"12"`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u64>, ParseError> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (number(a)?, number(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = number(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(ParseError::EmptyRange { lo, hi });
    }
    Ok(lo..=hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_lists() {
        assert_eq!(parse_coeffs("1,1,2").unwrap(), vec![1, 1, 2]);
        assert_eq!(parse_coeffs(" 3 , 5").unwrap(), vec![3, 5]);
        assert_eq!(parse_coeffs("1,0"), Err(ParseError::ZeroCoefficient));
        assert_eq!(parse_coeffs(""), Err(ParseError::Empty));
        assert!(parse_coeffs("1,,2").is_err());
        assert!(parse_coeffs("+1").is_err());
        assert!(parse_coeffs("-1").is_err());
        assert!(parse_coeffs("99999999999999999999").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("9..30").unwrap(), 9..=30);
        assert_eq!(parse_range("9..=30").unwrap(), 9..=30);
        assert_eq!(parse_range("12").unwrap(), 12..=12);
        assert_eq!(
            parse_range("5..4"),
            Err(ParseError::EmptyRange { lo: 5, hi: 4 })
        );
        assert!(parse_range("..4").is_err());
        assert!(parse_range("a..b").is_err());
    }
}
