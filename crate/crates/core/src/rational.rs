//! Exact time values.

use alloc::string::String;
use core::str::FromStr;

/// Exact rational time value, always kept in reduced form.
pub type Rational = num_rational::Ratio<i64>;

/// Builds `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Builds `n/d`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Parses `"7"`, `"-3/4"` or a plain decimal like `"0.25"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((whole, decimals)) = text.split_once('.') {
        if decimals.is_empty() || !decimals.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_val: i64 = if whole.is_empty() || whole == "-" {
            0
        } else {
            whole.parse().ok()?
        };
        let scale = 10i64.checked_pow(decimals.len() as u32)?;
        let frac_val: i64 = decimals.parse().ok()?;
        let magnitude = Rational::new(whole_val.abs().checked_mul(scale)?.checked_add(frac_val)?, scale);
        return Some(if negative { -magnitude } else { magnitude });
    }
    Rational::from_str(text).ok()
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(value: &Rational) -> String {
    alloc::format!("{}", value)
}

pub(crate) fn half(value: Rational) -> Rational {
    value / int(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("7"), Some(int(7)));
        assert_eq!(parse_rational("3/4"), Some(frac(3, 4)));
        assert_eq!(parse_rational("6/8"), Some(frac(3, 4)));
        assert_eq!(parse_rational("0.25"), Some(frac(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(frac(-3, 2)));
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1."), None);
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format_rational(&frac(2, 4)), "1/2");
        assert_eq!(format_rational(&int(4)), "4");
    }
}
