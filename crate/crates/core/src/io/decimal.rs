use thiserror::Error;

use crate::model::Exact;

const MAX_FRACTION_DIGITS: usize = 6;
const MAX_INTEGER_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecimalError {
    #[error("empty number")]
    Empty,
    #[error("`{0}` is not a decimal number")]
    Malformed(String),
    #[error("`{0}` has more than 6 decimal places")]
    TooPrecise(String),
    #[error("`{0}` is too large")]
    TooLarge(String),
}

/// Parses a plain decimal literal (`36.7`, `-2`, `.5`) into an exact rational.
pub fn parse_decimal(text: &str) -> Result<Exact, DecimalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(DecimalError::Empty);
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty()) || !all_digits(int_part) || !all_digits(frac_part) {
        return Err(DecimalError::Malformed(s.to_owned()));
    }
    if frac_part.len() > MAX_FRACTION_DIGITS {
        return Err(DecimalError::TooPrecise(s.to_owned()));
    }
    let int_digits = int_part.trim_start_matches('0');
    if int_digits.len() > MAX_INTEGER_DIGITS {
        return Err(DecimalError::TooLarge(s.to_owned()));
    }
    let digits = format!("{int_digits}{frac_part}");
    let numer: i128 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| DecimalError::Malformed(s.to_owned()))?
    };
    let denom = 10i128.pow(frac_part.len() as u32);
    let value = Exact::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Exact value of a finite `f64` as written in its shortest decimal form.
pub fn decimal_from_f64(x: f64) -> Result<Exact, DecimalError> {
    if !x.is_finite() {
        return Err(DecimalError::Malformed(x.to_string()));
    }
    parse_decimal(&format!("{x}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn accepts_plain_decimals() {
        assert_eq!(parse_decimal("36.7").unwrap(), Exact::new(367, 10));
        assert_eq!(parse_decimal(" 120 ").unwrap(), Exact::from_integer(120));
        assert_eq!(parse_decimal(".5").unwrap(), Exact::new(1, 2));
        assert_eq!(parse_decimal("5.").unwrap(), Exact::from_integer(5));
        assert_eq!(parse_decimal("-2.25").unwrap(), Exact::new(-9, 4));
        assert_eq!(parse_decimal("0").unwrap(), Exact::from_integer(0));
        assert_eq!(parse_decimal("000000000000000007").unwrap(), Exact::from_integer(7));
    }

    #[test]
    fn rejects_everything_else() {
        for bad in ["", " ", ".", "-", "1e3", "1.2.3", "abc", "1,5", "--1", "+-1", "0x10", "１"] {
            assert!(parse_decimal(bad).is_err(), "{bad:?} accepted");
        }
        assert!(matches!(parse_decimal("1.0000001"), Err(DecimalError::TooPrecise(_))));
        assert!(matches!(parse_decimal("1234567890123"), Err(DecimalError::TooLarge(_))));
    }

    #[test]
    fn from_f64_uses_shortest_form() {
        assert_eq!(decimal_from_f64(0.1).unwrap(), Exact::new(1, 10));
        assert_eq!(decimal_from_f64(3600.0).unwrap(), Exact::from_integer(3600));
        assert!(decimal_from_f64(f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn formatted_decimals_parse_back(int in 0i64..1_000_000, frac in 0u32..1000) {
            let text = format!("{int}.{frac:03}");
            let expected = Exact::new(int as i128 * 1000 + frac as i128, 1000);
            prop_assert_eq!(parse_decimal(&text).unwrap(), expected);
        }
    }
}
