//! Rendering exact rationals as decimal strings.
//!
//! All reports in this crate compute in exact arithmetic and convert to
//! decimal only at the output boundary, so no floating error accumulates.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// `r` as a decimal string with `digits` digits after the point, rounded
/// half away from zero.
pub fn decimal_string(r: &BigRational, digits: usize) -> String {
    let neg = r.is_negative();
    let num = r.numer().magnitude().clone();
    let den = r.denom().magnitude().clone();
    let scale = BigUint::from(10u32).pow(digits as u32);
    // round(num * scale / den) with ties away from zero
    let scaled = &num * &scale;
    let (q, rem) = (&scaled / &den, &scaled % &den);
    let q = if &rem * 2u32 >= den { q + 1u32 } else { q };
    let s = q.to_string();
    let mut out = String::new();
    if neg && !q.is_zero() {
        out.push('-');
    }
    if digits == 0 {
        out.push_str(&s);
        return out;
    }
    if s.len() > digits {
        out.push_str(&s[..s.len() - digits]);
        out.push('.');
        out.push_str(&s[s.len() - digits..]);
    } else {
        out.push_str("0.");
        for _ in 0..digits - s.len() {
            out.push('0');
        }
        out.push_str(&s);
    }
    out
}

/// |a - b| rendered to `digits` decimal places.
pub fn abs_error(a: &BigRational, b: &BigRational) -> BigRational {
    (a - b).abs()
}

/// Convenience: an exact rational from an integer pair.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_exact_fractions() {
        assert_eq!(decimal_string(&rational(1, 4), 3), "0.250");
        assert_eq!(decimal_string(&rational(-1, 3), 5), "-0.33333");
        assert_eq!(decimal_string(&rational(2, 3), 4), "0.6667");
        assert_eq!(decimal_string(&rational(5, 1), 2), "5.00");
        assert_eq!(decimal_string(&rational(0, 1), 3), "0.000");
        assert_eq!(decimal_string(&rational(15, 32), 6), "0.468750");
        assert_eq!(decimal_string(&rational(7, 2), 0), "4");
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(decimal_string(&rational(1, 8), 2), "0.13");
        assert_eq!(decimal_string(&rational(-1, 8), 2), "-0.13");
        assert_eq!(decimal_string(&rational(1, 200), 2), "0.01");
    }
}
