//! Helpers for exact values: natural logarithms of big integers and
//! fixed-significant-digit decimal rendering of exact rationals.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

/// Natural log of a positive big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Renders `x` with `digits` significant digits, rounding half away from zero.
///
/// Values with magnitude in `[1e-4, 1e15)` use plain positional notation;
/// everything else uses `d.ddd…e±X`. Zero renders as `0`.
pub fn format_sig(x: &BigRational, digits: usize) -> String {
    assert!(digits >= 1);
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let num = x.numer().abs();
    let den = x.denom().clone();

    // decimal exponent e with 10^e <= |x| < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ten = BigInt::from(10);
    let pow10 = |k: i64| -> BigInt { Pow::pow(&ten, k.unsigned_abs()) };
    let ge = |e: i64| -> bool {
        // |x| >= 10^e
        if e >= 0 {
            num >= &den * pow10(e)
        } else {
            &num * pow10(-e) >= den
        }
    };
    while !ge(e) {
        e -= 1;
    }
    while ge(e + 1) {
        e += 1;
    }

    // scaled = round(|x| * 10^(digits-1-e))
    let k = digits as i64 - 1 - e;
    let (sn, sd) = if k >= 0 {
        (&num * pow10(k), den.clone())
    } else {
        (num.clone(), &den * pow10(-k))
    };
    let (q, r) = sn.div_rem(&sd);
    let mut scaled = if &r * 2 >= sd { q + 1 } else { q };
    if scaled >= pow10(digits as i64) {
        scaled /= 10;
        e += 1;
    }
    let mantissa = scaled.to_string();
    debug_assert_eq!(mantissa.len(), digits);

    let body = if (-4..15).contains(&e) {
        if e >= 0 {
            let int_len = (e + 1) as usize;
            if int_len >= digits {
                format!("{}{}", mantissa, "0".repeat(int_len - digits))
            } else {
                format!("{}.{}", &mantissa[..int_len], &mantissa[int_len..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), mantissa)
        }
    } else {
        let (head, tail) = mantissa.split_at(1);
        let exp = if e < 0 {
            format!("-{}", -e)
        } else {
            format!("+{e}")
        };
        if tail.is_empty() {
            format!("{head}e{exp}")
        } else {
            format!("{head}.{tail}e{exp}")
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

pub fn to_bigint(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

pub fn ratio(num: BigInt, den: BigInt) -> BigRational {
    assert!(!den.is_zero());
    BigRational::new(num, den)
}

pub fn ratio_u(num: &BigUint, den: &BigUint) -> BigRational {
    ratio(to_bigint(num), to_bigint(den))
}

pub fn one() -> BigRational {
    BigRational::one()
}
