use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact scalar. `BigRational` keeps itself in lowest terms with a positive
/// denominator, so the canonical text form is just its `Display`.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d`; panics on a zero denominator.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse the rational token syntax: optional sign, decimal integer, optional
/// `/` and a positive decimal integer. No whitespace inside the token.
pub fn parse_rational(token: &str) -> Option<Rational> {
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (token, None),
    };
    let digits = num.strip_prefix(['+', '-']).unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let numerator: BigInt = num.parse().ok()?;
    let denominator = match den {
        None => BigInt::one(),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            d
        }
    };
    Some(Rational::new(numerator, denominator))
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Least common multiple of the denominators, as a positive integer.
pub(crate) fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scale a list of rationals to coprime integers whose first nonzero entry
/// is positive. An all-zero list is returned unchanged.
pub fn primitive(values: &[Rational]) -> Vec<Rational> {
    let Some(first) = values.iter().find(|v| !v.is_zero()) else {
        return values.to_vec();
    };
    let lcm = denominator_lcm(values);
    let ints: Vec<BigInt> = values
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if first.is_negative() {
        g = -g;
    }
    ints.into_iter()
        .map(|v| Rational::from_integer(v / &g))
        .collect()
}

pub(crate) mod serde_rational {
    use super::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }
}

pub(crate) mod serde_rationals {
    use super::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(|v| v.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_forms() {
        assert_eq!(parse_rational("-16/3"), Some(frac(-16, 3)));
        assert_eq!(parse_rational("4/2"), Some(int(2)));
        assert_eq!(parse_rational("+7"), Some(int(7)));
        assert_eq!(parse_rational("0"), Some(int(0)));
        assert_eq!(parse_rational("-0/5"), Some(int(0)));
    }

    #[test]
    fn rejects_malformed_tokens() {
        for bad in [
            "", "-", "1/0", "1/-3", "1 /3", "1.5", "a", "1/", "/2", "--1", "1/+2",
        ] {
            assert_eq!(parse_rational(bad), None, "{bad:?}");
        }
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(frac(6, -4).to_string(), "-3/2");
        assert_eq!(int(5).to_string(), "5");
        assert_eq!(frac(0, 9).to_string(), "0");
    }

    #[test]
    fn primitive_scaling() {
        let v = primitive(&[frac(-1, 2), frac(1, 3), int(0)]);
        assert_eq!(v, vec![int(3), int(-2), int(0)]);
        assert_eq!(
            primitive(&[int(0), int(-4), int(6)]),
            vec![int(0), int(2), int(-3)]
        );
    }
}
