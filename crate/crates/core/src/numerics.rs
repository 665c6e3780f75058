//! Arbitrary-precision numeric substrate.
//!
//! Three value kinds back everything else:
//! - [`Int`]: exact unbounded integers,
//! - [`Rational`]: exact rationals, always in lowest terms with positive
//!   denominator,
//! - [`Real`]: decimal floating values carrying their own precision in
//!   decimal digits; arithmetic on two values is correctly rounded at the
//!   larger of the two precisions.
//!
//! [`NumericContext`] fixes the working precision (decimal digits) plus a
//! guard-digit margin. Every derived tolerance in the crate is computed from
//! `digits - guard_digits`, so detection thresholds stay meaningful even when
//! the working precision is close to the input's accuracy.

use std::str::FromStr;

use dashu_float::round::mode::{Down, HalfAway};
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;
use thiserror::Error;

pub use dashu_base::{Abs, Sign, SquareRoot};

/// Unbounded signed integer. Exact arithmetic, no rounding ever.
pub type Int = IBig;

/// Exact rational; lowest terms, positive denominator (maintained by `RBig`).
pub type Rational = RBig;

/// Decimal floating value carrying its precision in decimal digits.
///
/// Precision 0 means "unlimited" (exact decimal arithmetic); finite
/// precisions round half-away-from-zero at the carried digit count.
pub type Real = FBig<HalfAway, 10>;

/// Real with round-toward-negative rounding, used for directed bounds.
pub type RealDown = FBig<Down, 10>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumericsError {
    #[error("invalid decimal numeral: {0}")]
    InvalidInput(String),
    #[error("working precision must be at least 2 digits (got {0})")]
    BadPrecision(u32),
}

/// Working precision policy: `digits` decimal digits for all approximate
/// arithmetic, of which the last `guard_digits` are treated as round-off
/// slack when deriving tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NumericContext {
    pub digits: u32,
    pub guard_digits: u32,
}

pub const DEFAULT_GUARD_DIGITS: u32 = 10;

impl NumericContext {
    pub fn new(digits: u32) -> Result<Self, NumericsError> {
        Self::with_guard(digits, DEFAULT_GUARD_DIGITS)
    }

    pub fn with_guard(digits: u32, guard_digits: u32) -> Result<Self, NumericsError> {
        if digits < 2 {
            return Err(NumericsError::BadPrecision(digits));
        }
        Ok(NumericContext {
            digits,
            guard_digits,
        })
    }

    /// Digits considered reliable: `digits - guard_digits`, at least 1.
    pub fn effective_digits(&self) -> u32 {
        self.digits.saturating_sub(self.guard_digits).max(1)
    }

    /// `10^-(digits - guard_digits)`: anything smaller is round-off noise.
    pub fn detection_floor(&self) -> Real {
        pow10(-(self.effective_digits() as isize))
    }

    /// Lift a value to the working precision (never discards digits the
    /// value actually carries below `digits`).
    pub fn lift(&self, v: &Real) -> Real {
        let p = v.precision();
        if p == 0 || p >= self.digits as usize {
            v.clone()
        } else {
            v.clone().with_precision(self.digits as usize).value()
        }
    }

    pub fn real_from_int(&self, v: &Int) -> Real {
        Real::from_parts(v.clone(), 0)
            .with_precision(self.digits as usize)
            .value()
    }

    pub fn real_from_u64(&self, v: u64) -> Real {
        self.real_from_int(&Int::from(v))
    }

    /// Correctly rounded conversion of an exact rational at the context
    /// precision.
    pub fn real_from_rational(&self, q: &Rational) -> Real {
        q.to_float::<HalfAway, 10>(self.digits as usize).value()
    }
}

/// `10^k` as an exact Real.
pub fn pow10(k: isize) -> Real {
    Real::from_parts(IBig::ONE, k)
}

/// Exact conversion: every finite decimal float is a rational.
pub fn real_to_rational(v: &Real) -> Rational {
    let repr = v.repr();
    let sig = RBig::from(repr.significand().clone());
    let exp = repr.exponent();
    if exp >= 0 {
        sig * RBig::from(IBig::from(10).pow(exp as usize))
    } else {
        sig / RBig::from(IBig::from(10).pow((-exp) as usize))
    }
}

/// A parsed decimal literal: the rounded value plus what the text claimed.
#[derive(Debug, Clone)]
pub struct ParsedDecimal {
    pub value: Real,
    /// Significant digits in the literal (leading zeros excluded, trailing
    /// zeros counted). At least 1; "0" counts as 1.
    pub significant_digits: u32,
    /// Digits after the decimal point in the literal, exponent applied.
    pub decimal_places: i32,
}

/// Parse a signed decimal numeral, optionally with exponent, rounding to
/// `ctx.digits`. The significant-digit count of the text is recorded.
pub fn parse_decimal(text: &str, ctx: &NumericContext) -> Result<ParsedDecimal, NumericsError> {
    let stats = scan_decimal(text)?;
    let raw = Real::from_str(text.trim())
        .map_err(|_| NumericsError::InvalidInput(text.to_string()))?;
    // Claim exactly the precision the text carries, capped at the context.
    let claimed = stats.significant_digits.min(ctx.digits).max(1);
    let value = raw.with_precision(claimed as usize).value();
    Ok(ParsedDecimal {
        value,
        significant_digits: stats.significant_digits,
        decimal_places: stats.decimal_places,
    })
}

struct DecimalStats {
    significant_digits: u32,
    decimal_places: i32,
}

/// Validate the numeral shape and count its digits. Grammar:
/// `[+-]? digits [. digits?] | [+-]? . digits`, optional `[eE][+-]?digits`.
fn scan_decimal(text: &str) -> Result<DecimalStats, NumericsError> {
    let t = text.trim();
    let bad = || NumericsError::InvalidInput(text.to_string());
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = t[pos + 1..].parse().map_err(|_| bad())?;
            (&t[..pos], exp)
        }
        None => (t, 0),
    };
    let unsigned = mantissa
        .strip_prefix(['+', '-'])
        .unwrap_or(mantissa);
    let (int_part, frac_part) = match unsigned.find('.') {
        Some(pos) => (&unsigned[..pos], &unsigned[pos + 1..]),
        None => (unsigned, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).collect();
    let leading = all.iter().take_while(|&&b| b == b'0').count();
    let significant = (all.len() - leading).max(1) as u32;
    let decimal_places = frac_part.len() as i32 - exponent;
    Ok(DecimalStats {
        significant_digits: significant,
        decimal_places,
    })
}

/// Nearest integer in the sense `nint(t) = ⌊t + 1/2⌋` (ties round up).
pub fn round_to_nearest_int(v: &Real) -> Int {
    let exact = v.clone().with_precision(0).value();
    let half = Real::from_parts(IBig::from(5), -1).with_precision(0).value();
    (exact + half).floor().to_int().value()
}

/// One unit in the last carried decimal place of `v`: `10^(mag + 1 - prec)`
/// where `mag` is the exponent of the leading digit. This is the tightest
/// error bound a value rounded at its carried precision can promise.
/// Zero and unlimited-precision values resolve through their stored digits.
pub fn resolution(v: &Real) -> Real {
    let repr = v.repr();
    if repr.significand().is_zero() {
        return pow10(repr.exponent());
    }
    let digits = decimal_digit_count(repr.significand());
    let mag = repr.exponent() + digits as isize - 1;
    let prec = if v.precision() == 0 {
        digits
    } else {
        v.precision()
    };
    pow10(mag + 1 - prec as isize)
}

fn decimal_digit_count(v: &IBig) -> usize {
    let (sign_len, s) = {
        let s = v.to_string();
        (if s.starts_with('-') { 1 } else { 0 }, s)
    };
    s.len() - sign_len
}

/// Floor of `√v` for a non-negative integer.
pub fn int_sqrt_floor(v: &Int) -> Int {
    assert!(v >= &Int::ZERO, "int_sqrt_floor of negative value");
    let u = UBig::try_from(v.clone()).expect("non-negative");
    Int::from(dashu_base::SquareRoot::sqrt(&u))
}

/// Rational lower bound on `√v` accurate to `places` decimal digits.
pub fn sqrt_lower(v: &Int, places: u32) -> Rational {
    let scale = Int::from(10).pow(places as usize);
    let root = int_sqrt_floor(&(v * &scale * &scale));
    Rational::from_parts(root, UBig::try_from(scale).unwrap())
}

/// Rational upper bound on `√v` accurate to `places` decimal digits.
pub fn sqrt_upper(v: &Int, places: u32) -> Rational {
    let scale = Int::from(10).pow(places as usize);
    let root = int_sqrt_floor(&(v * &scale * &scale)) + Int::ONE;
    Rational::from_parts(root, UBig::try_from(scale).unwrap())
}

/// `√v` of a non-negative rational, correctly rounded at `digits`.
pub fn rational_sqrt(q: &Rational, digits: u32) -> Real {
    let f = q.to_float::<HalfAway, 10>(2 * digits as usize).value();
    dashu_base::SquareRoot::sqrt(&f)
        .with_precision(digits as usize)
        .value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use dashu_base::Abs;

    fn ctx(digits: u32) -> NumericContext {
        NumericContext::new(digits).unwrap()
    }

    #[test]
    fn parse_example_literal_is_exact() {
        let p = parse_decimal("11.937253933", &ctx(30)).unwrap();
        assert_eq!(p.significant_digits, 11);
        assert_eq!(p.decimal_places, 9);
        assert_eq!(real_to_rational(&p.value), {
            let n = Int::from(11937253933u64);
            Rational::from_parts(n, dashu_int::UBig::from(1000000000u64))
        });
    }

    #[test]
    fn parse_zero() {
        let p = parse_decimal("0", &ctx(10)).unwrap();
        assert_eq!(p.value, Real::ZERO);
        assert_eq!(p.significant_digits, 1);
    }

    #[test]
    fn parse_example3_literal_roundtrips() {
        let p = parse_decimal("3.14626436994198", &ctx(20)).unwrap();
        assert_eq!(p.significant_digits, 15);
        assert_eq!(p.value.to_string(), "3.14626436994198");
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "abc", "1.2.3", "--5", "1e", ".", "0x12", "1,5"] {
            assert!(parse_decimal(bad, &ctx(10)).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn parse_counts_leading_and_trailing_zeros() {
        let p = parse_decimal("0.0012", &ctx(10)).unwrap();
        assert_eq!(p.significant_digits, 2);
        assert_eq!(p.decimal_places, 4);
        let p = parse_decimal("1.20", &ctx(10)).unwrap();
        assert_eq!(p.significant_digits, 3);
    }

    #[test]
    fn parse_rounds_to_context() {
        let p = parse_decimal("1.23456789", &ctx(4)).unwrap();
        assert_eq!(p.value.to_string(), "1.235");
        assert_eq!(p.significant_digits, 9);
    }

    #[test]
    fn nint_matches_floor_of_t_plus_half() {
        let cases = [
            ("0.6", 1),
            ("-0.5", 0),
            ("2.4999", 2),
            ("2.5", 3),
            ("-1.5", -1),
            ("0", 0),
            ("-3.7", -4),
        ];
        for (s, want) in cases {
            let v = Real::from_str(s).unwrap();
            assert_eq!(round_to_nearest_int(&v), Int::from(want), "nint({s})");
        }
    }

    #[test]
    fn nint_tie_up_property() {
        // nint(k + f) = k for f in [-0.5 + delta, 0.5), = k + 1 at f = 0.5.
        let c = ctx(25);
        for k in [-4i32, 0, 7] {
            let kf = c.real_from_int(&Int::from(k));
            for (f, off) in [("-0.4999999", 0), ("0.4999999", 0), ("0.5", 1), ("-0.5", 0)] {
                let v = &kf + Real::from_str(f).unwrap();
                assert_eq!(
                    round_to_nearest_int(&v),
                    Int::from(k + off),
                    "k={k}, f={f}"
                );
            }
        }
    }

    #[test]
    fn arithmetic_agrees_with_exact_rationals() {
        // parse-then-operate vs exact rational arithmetic, within
        // 10^(1-digits) relative error.
        let c = ctx(16);
        let lits = ["3.25", "-0.017", "142.49803119", "11.937253933"];
        for a in lits {
            for b in lits {
                let pa = parse_decimal(a, &c).unwrap();
                let pb = parse_decimal(b, &c).unwrap();
                let fa = c.lift(&pa.value);
                let fb = c.lift(&pb.value);
                let qa = real_to_rational(&pa.value);
                let qb = real_to_rational(&pb.value);
                let sum = real_to_rational(&(&fa + &fb));
                let prod = real_to_rational(&(&fa * &fb));
                let exact_sum = &qa + &qb;
                let exact_prod = &qa * &qb;
                let tol = Rational::from_parts(
                    Int::ONE,
                    dashu_int::UBig::from(10u8).pow(15),
                );
                for (got, want) in [(sum, exact_sum), (prod, exact_prod)] {
                    if want == Rational::ZERO {
                        assert_eq!(got, want);
                    } else {
                        let rel = ((got - &want) / &want).abs();
                        assert!(rel <= tol, "a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn resolution_tracks_last_carried_place() {
        let c = ctx(30);
        let p = parse_decimal("11.937253933", &c).unwrap();
        assert_eq!(resolution(&p.value), pow10(-9));
        let p = parse_decimal("1.20", &c).unwrap();
        assert_eq!(resolution(&p.value), pow10(-2));
        let p = parse_decimal("7", &c).unwrap();
        assert_eq!(resolution(&p.value), pow10(0));
    }

    #[test]
    fn sqrt_bounds_bracket() {
        for v in [2u32, 3, 5, 7, 295] {
            let iv = Int::from(v);
            let lo = sqrt_lower(&iv, 25);
            let hi = sqrt_upper(&iv, 25);
            assert!(&lo * &lo <= Rational::from(iv.clone()));
            assert!(&hi * &hi > Rational::from(iv.clone()));
            assert!(hi > lo);
        }
    }

    #[test]
    fn context_floor_and_digits() {
        let c = NumericContext::with_guard(30, 10).unwrap();
        assert_eq!(c.effective_digits(), 20);
        assert_eq!(c.detection_floor(), pow10(-20));
        assert!(NumericContext::new(1).is_err());
    }
}
