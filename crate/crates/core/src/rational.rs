//! Exact rationals plus the two ℚ⁺ walks used for label supply: the
//! Stern–Brocot "simplest rational in an interval" and the Calkin–Wilf
//! enumeration of the positive rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed rational {0:?} (expected \"p/q\" or an integer)")]
pub struct ParseRationalError(pub String);

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or a bare integer. Zero denominators are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| err())?;
    let q: BigInt = q.parse().map_err(|_| err())?;
    if q.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(p, q))
}

/// Always renders `p/q`, including integers (`2/1`).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// The first Stern–Brocot node strictly inside `(lo, hi)`, `hi = None`
/// meaning +∞. Runs of equal mediant steps are taken in one go through the
/// continued-fraction recursion, so wide intervals cost nothing extra.
///
/// Panics if `lo < 0` or `hi <= lo`.
pub fn simplest_between(lo: &Rational, hi: Option<&Rational>) -> Rational {
    assert!(!lo.is_negative(), "lower bound must be nonnegative");
    if let Some(h) = hi {
        assert!(lo < h, "empty interval");
    }
    let next_int = lo.floor() + Rational::one();
    if hi.is_none_or(|h| &next_int < h) {
        return next_int;
    }
    let h = hi.expect("checked above");
    let base = &next_int - Rational::one();
    let inner_lo = (h - &base).recip();
    let inner_hi = if *lo == base { None } else { Some((lo - &base).recip()) };
    base + simplest_between(&inner_lo, inner_hi.as_ref()).recip()
}

/// `k` strictly increasing simplest rationals inside `(lo, hi)`.
pub fn increasing_between(lo: &Rational, hi: Option<&Rational>, k: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(k);
    let mut cur = lo.clone();
    for _ in 0..k {
        let q = simplest_between(&cur, hi);
        cur = q.clone();
        out.push(q);
    }
    out
}

/// The `index`-th term (1-based) of the Calkin–Wilf sequence
/// 1, 1/2, 2, 1/3, 3/2, 2/3, 3, … as a reduced `(numer, denom)` pair.
pub fn calkin_wilf(index: u64) -> (u64, u64) {
    assert!(index >= 1, "Calkin–Wilf indices start at 1");
    let (mut a, mut b) = (1u64, 1u64);
    let bits = 64 - index.leading_zeros();
    for shift in (0..bits - 1).rev() {
        if (index >> shift) & 1 == 0 {
            b += a;
        } else {
            a += b;
        }
    }
    (a, b)
}

pub fn calkin_wilf_rational(index: u64) -> Rational {
    let (a, b) = calkin_wilf(index);
    Rational::new(BigInt::from(a), BigInt::from(b))
}

/// Inverse of [`calkin_wilf`]. `None` for non-positive input or when the
/// index does not fit in 64 bits.
pub fn calkin_wilf_index(q: &Rational) -> Option<u64> {
    if !q.is_positive() {
        return None;
    }
    let mut a = q.numer().clone();
    let mut b = q.denom().clone();
    let mut bits: Vec<bool> = Vec::new();
    while !(a.is_one() && b.is_one()) {
        // Batch the subtractive steps: (a, b) with a < b takes b / a left turns.
        if a < b {
            let (qt, r) = b.div_rem(&a);
            let steps = if r.is_zero() { qt - 1u32 } else { qt };
            let steps: u64 = steps.try_into().ok()?;
            if bits.len() as u64 + steps > 63 {
                return None;
            }
            bits.extend(std::iter::repeat_n(false, steps as usize));
            b -= &a * BigInt::from(steps);
        } else {
            let (qt, r) = a.div_rem(&b);
            let steps = if r.is_zero() { qt - 1u32 } else { qt };
            let steps: u64 = steps.try_into().ok()?;
            if bits.len() as u64 + steps > 63 {
                return None;
            }
            bits.extend(std::iter::repeat_n(true, steps as usize));
            a -= &b * BigInt::from(steps);
        }
    }
    let mut index = 1u64;
    for bit in bits.into_iter().rev() {
        index = (index << 1) | bit as u64;
    }
    Some(index)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calkin_wilf_prefix() {
        let expect = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 2), (2, 3), (3, 1), (1, 4), (4, 3)];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(calkin_wilf(i as u64 + 1), *e);
        }
    }

    #[test]
    fn calkin_wilf_roundtrip() {
        for i in 1..5000u64 {
            assert_eq!(calkin_wilf_index(&calkin_wilf_rational(i)), Some(i));
        }
        assert_eq!(calkin_wilf_index(&int(0)), None);
        // 1/1000 sits 999 levels deep.
        assert_eq!(calkin_wilf_index(&ratio(1, 1000)), None);
        assert_eq!(calkin_wilf_index(&ratio(1, 64)), Some(1 << 63));
    }

    #[test]
    fn simplest_between_examples() {
        assert_eq!(simplest_between(&int(0), None), int(1));
        assert_eq!(simplest_between(&int(0), Some(&int(1))), ratio(1, 2));
        assert_eq!(simplest_between(&int(1), Some(&int(2))), ratio(3, 2));
        assert_eq!(simplest_between(&ratio(1, 3), Some(&ratio(1, 2))), ratio(2, 5));
        assert_eq!(simplest_between(&ratio(7, 2), None), int(4));
        assert_eq!(simplest_between(&int(1000), Some(&ratio(1001, 1))), ratio(2001, 2));
    }

    #[test]
    fn simplest_is_minimal_denominator() {
        // Brute force over small denominators.
        let cases = [(ratio(2, 7), ratio(3, 8)), (ratio(5, 3), ratio(7, 4)), (int(0), ratio(1, 9))];
        for (lo, hi) in cases {
            let s = simplest_between(&lo, Some(&hi));
            assert!(lo < s && s < hi);
            let d: i64 = s.denom().try_into().unwrap();
            for q in 1..d {
                for p in 0..(q * 10) {
                    let c = ratio(p, q);
                    assert!(!(lo < c && c < hi), "{c} is simpler than {s}");
                }
            }
        }
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("4/3").unwrap(), ratio(4, 3));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("2").unwrap(), int(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&int(2)), "2/1");
        assert_eq!(format_rational(&ratio(5, 3)), "5/3");
    }
}
