//! Arbitrary-precision reals with an explicit working precision.
//!
//! [`HighPrecReal`] wraps an `astro_float::BigFloat` together with the number
//! of mantissa bits every result is rounded to. Binary operations round to the
//! larger of the two operand precisions (round-half-even). Transcendental
//! functions share a per-thread constants cache.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Smallest precision accepted by [`HighPrecReal`].
pub const MIN_PRECISION_BITS: usize = 64;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("failed to allocate the constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// An arbitrary-precision real number carrying its precision in bits.
#[derive(Clone)]
pub struct HighPrecReal {
    value: BigFloat,
    precision: usize,
}

impl HighPrecReal {
    fn wrap(value: BigFloat, precision: usize) -> Self {
        debug_assert!(!value.is_nan(), "high-precision operation produced NaN");
        HighPrecReal { value, precision }
    }

    fn checked_precision(precision_bits: usize) -> Result<usize> {
        if precision_bits < MIN_PRECISION_BITS {
            Err(Error::PrecisionTooLow {
                requested: precision_bits,
                minimum: MIN_PRECISION_BITS,
            })
        } else {
            Ok(precision_bits)
        }
    }

    /// Validates `precision_bits` and returns zero at that precision.
    pub fn try_zero(precision_bits: usize) -> Result<Self> {
        let p = Self::checked_precision(precision_bits)?;
        Ok(Self::zero(p))
    }

    pub fn zero(precision_bits: usize) -> Self {
        Self::from_i64(0, precision_bits)
    }

    pub fn one(precision_bits: usize) -> Self {
        Self::from_i64(1, precision_bits)
    }

    pub fn from_i64(v: i64, precision_bits: usize) -> Self {
        let p = precision_bits.max(MIN_PRECISION_BITS);
        Self::wrap(BigFloat::from_i64(v, p), p)
    }

    pub fn from_u64(v: u64, precision_bits: usize) -> Self {
        let p = precision_bits.max(MIN_PRECISION_BITS);
        Self::wrap(BigFloat::from_u64(v, p), p)
    }

    pub fn from_f64(v: f64, precision_bits: usize) -> Self {
        let p = precision_bits.max(MIN_PRECISION_BITS);
        Self::wrap(BigFloat::from_f64(v, p), p)
    }

    /// Parses a decimal literal such as `"0.07957745473668"` or `"1.5e-3"`.
    pub fn parse(s: &str, precision_bits: usize) -> Result<Self> {
        let p = precision_bits.max(MIN_PRECISION_BITS);
        let v = with_consts(|cc| BigFloat::parse(s.trim(), Radix::Dec, p, RM, cc));
        if v.is_nan() || v.is_inf() {
            return Err(Error::Parse(s.to_string()));
        }
        Ok(Self::wrap(v, p))
    }

    /// Converts an exact integer, keeping its leading `precision_bits + 64`
    /// bits before the final rounding.
    pub fn from_bigint(v: &BigInt, precision_bits: usize) -> Self {
        let p = precision_bits.max(MIN_PRECISION_BITS);
        let keep = (p + 64) as u64;
        let bits = v.bits();
        let shift = bits.saturating_sub(keep);
        let top = v.magnitude() >> shift;
        let two64 = BigFloat::from_u128(1u128 << 64, p + 64);
        let mut acc = BigFloat::from_u64(0, p + 64);
        for &limb in top.to_u64_digits().iter().rev() {
            acc = acc
                .mul(&two64, p + 64, RM)
                .add(&BigFloat::from_u64(limb, 64), p + 64, RM);
        }
        let mut scaled = Self::wrap(acc, p + 64).mul_pow2(shift as i64);
        if v.sign() == Sign::Minus {
            scaled = -scaled;
        }
        scaled.with_precision(p)
    }

    pub fn pi(precision_bits: usize) -> Self {
        let p = precision_bits.max(MIN_PRECISION_BITS);
        Self::wrap(with_consts(|cc| cc.pi(p, RM)), p)
    }

    pub fn ln10(precision_bits: usize) -> Self {
        let p = precision_bits.max(MIN_PRECISION_BITS);
        Self::wrap(with_consts(|cc| cc.ln_10(p, RM)), p)
    }

    pub fn precision_bits(&self) -> usize {
        self.precision
    }

    /// Rounds (or widens) to a new precision.
    pub fn with_precision(&self, precision_bits: usize) -> Self {
        let p = precision_bits.max(MIN_PRECISION_BITS);
        let mut v = self.value.clone();
        v.set_precision(p, RM).expect("failed to change precision");
        Self::wrap(v, p)
    }

    /// Same precision, value `v`.
    pub fn lift_i64(&self, v: i64) -> Self {
        Self::from_i64(v, self.precision)
    }

    /// Same precision, value `v`.
    pub fn lift_f64(&self, v: f64) -> Self {
        Self::from_f64(v, self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.value.is_zero() && self.value.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        !self.value.is_zero() && self.value.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.precision)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.precision, RM), self.precision)
    }

    pub fn exp(&self) -> Self {
        let p = self.precision;
        Self::wrap(with_consts(|cc| self.value.exp(p, RM, cc)), p)
    }

    pub fn ln(&self) -> Self {
        let p = self.precision;
        Self::wrap(with_consts(|cc| self.value.ln(p, RM, cc)), p)
    }

    pub fn log10(&self) -> Self {
        let p = self.precision;
        Self::wrap(with_consts(|cc| self.value.log10(p, RM, cc)), p)
    }

    pub fn sin(&self) -> Self {
        let p = self.precision;
        Self::wrap(with_consts(|cc| self.value.sin(p, RM, cc)), p)
    }

    pub fn cos(&self) -> Self {
        let p = self.precision;
        Self::wrap(with_consts(|cc| self.value.cos(p, RM, cc)), p)
    }

    pub fn powi(&self, n: u64) -> Self {
        Self::wrap(self.value.powi(n as usize, self.precision, RM), self.precision)
    }

    /// Exact multiplication by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.value.is_zero() || k == 0 {
            return self.clone();
        }
        let mut v = self.value.clone();
        let e = v.exponent().expect("finite value") as i64 + k;
        v.set_exponent(e as astro_float::Exponent);
        Self::wrap(v, self.precision)
    }

    pub fn floor(&self) -> Self {
        Self::wrap(self.value.floor(), self.precision)
    }

    pub fn max(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `floor(self)` as an `i64`; `None` when out of range.
    pub fn floor_i64(&self) -> Option<i64> {
        let f = self.floor();
        let (digits, exp10, negative) = f.decimal_digits()?;
        if digits == "0" {
            return Some(0);
        }
        let len = digits.len() as i64;
        let mut s = digits;
        if exp10 + 1 < len {
            return None;
        }
        for _ in 0..(exp10 + 1 - len) {
            s.push('0');
        }
        let mag: i64 = s.parse().ok()?;
        Some(if negative { -mag } else { mag })
    }

    /// Nearest `f64` (via the decimal expansion).
    pub fn to_f64(&self) -> f64 {
        let s = with_consts(|cc| self.value.format(Radix::Dec, RM, cc))
            .expect("failed to format high-precision value");
        let s = s.replace(".e", ".0e");
        s.parse::<f64>().unwrap_or_else(|_| {
            if s.starts_with('-') {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    /// Decimal significand digits (no leading zeros), the decimal exponent of
    /// the first digit, and the sign.
    fn decimal_digits(&self) -> Option<(String, i64, bool)> {
        if self.value.is_zero() {
            return Some(("0".to_string(), 0, false));
        }
        let s = with_consts(|cc| self.value.format(Radix::Dec, RM, cc)).ok()?;
        let negative = s.starts_with('-');
        let s = s.trim_start_matches('-');
        let (mant, exp) = match s.split_once('e') {
            Some((m, e)) => (m, e.parse::<i64>().ok()?),
            None => (s, 0),
        };
        let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
        let mut digits = String::with_capacity(mant.len());
        digits.push_str(int_part);
        digits.push_str(frac_part);
        // value = 0.[digits] * 10^(exp + int_part.len())
        let lead = digits.len() - digits.trim_start_matches('0').len();
        let digits = digits.trim_start_matches('0').trim_end_matches('0');
        if digits.is_empty() {
            return Some(("0".to_string(), 0, false));
        }
        let exp10 = exp + int_part.len() as i64 - 1 - lead as i64;
        Some((digits.to_string(), exp10, negative))
    }

    /// Scientific-notation rendering with `sig` significant digits,
    /// e.g. `4.132731376e0`.
    pub fn to_sci_string(&self, sig: usize) -> String {
        let (digits, exp10, negative) = self.rounded_digits(sig);
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push_str(&format!("e{exp10}"));
        out
    }

    /// Positional rendering with `sig` significant digits when the decimal
    /// exponent lies in `[-6, 21)`, scientific otherwise.
    pub fn to_decimal_string(&self, sig: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let (digits, exp10, negative) = self.rounded_digits(sig);
        if !(-6..21).contains(&exp10) {
            return self.to_sci_string(sig);
        }
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        if exp10 < 0 {
            out.push_str("0.");
            for _ in 0..(-exp10 - 1) {
                out.push('0');
            }
            out.push_str(&digits);
        } else {
            let int_len = exp10 as usize + 1;
            if digits.len() <= int_len {
                out.push_str(&digits);
                for _ in digits.len()..int_len {
                    out.push('0');
                }
            } else {
                out.push_str(&digits[..int_len]);
                out.push('.');
                out.push_str(&digits[int_len..]);
            }
        }
        out
    }

    /// Significand rounded half-up to exactly `sig` digits (carry handled).
    fn rounded_digits(&self, sig: usize) -> (String, i64, bool) {
        let sig = sig.max(1);
        let (digits, mut exp10, negative) = self
            .decimal_digits()
            .unwrap_or_else(|| ("0".to_string(), 0, false));
        let mut kept: Vec<u8> = digits.bytes().take(sig).map(|b| b - b'0').collect();
        let round_up = digits.as_bytes().get(sig).is_some_and(|&b| b >= b'5');
        while kept.len() < sig {
            kept.push(0);
        }
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    kept.insert(0, 1);
                    kept.truncate(sig);
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if kept[i] == 9 {
                    kept[i] = 0;
                } else {
                    kept[i] += 1;
                    break;
                }
            }
        }
        let s: String = kept.iter().map(|d| (b'0' + d) as char).collect();
        (s, exp10, negative)
    }

    fn binary(&self, other: &Self, op: impl FnOnce(&BigFloat, &BigFloat, usize) -> BigFloat) -> Self {
        let p = self.precision.max(other.precision);
        Self::wrap(op(&self.value, &other.value, p), p)
    }
}

impl fmt::Debug for HighPrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{} bits]", self.to_sci_string(24), self.precision)
    }
}

impl fmt::Display for HighPrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f
            .precision()
            .unwrap_or(((self.precision as f64) * std::f64::consts::LOG10_2) as usize);
        f.write_str(&self.to_decimal_string(sig))
    }
}

impl PartialEq for HighPrecReal {
    fn eq(&self, other: &Self) -> bool {
        self.value.cmp(&other.value) == Some(0)
    }
}

impl PartialOrd for HighPrecReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

impl Neg for HighPrecReal {
    type Output = HighPrecReal;
    fn neg(self) -> HighPrecReal {
        HighPrecReal::wrap(BigFloat::neg(&self.value), self.precision)
    }
}

impl Neg for &HighPrecReal {
    type Output = HighPrecReal;
    fn neg(self) -> HighPrecReal {
        HighPrecReal::wrap(BigFloat::neg(&self.value), self.precision)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&HighPrecReal> for &HighPrecReal {
            type Output = HighPrecReal;
            fn $method(self, rhs: &HighPrecReal) -> HighPrecReal {
                self.binary(rhs, |a, b, p| a.$method(b, p, RM))
            }
        }
        impl $trait<HighPrecReal> for HighPrecReal {
            type Output = HighPrecReal;
            fn $method(self, rhs: HighPrecReal) -> HighPrecReal {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&HighPrecReal> for HighPrecReal {
            type Output = HighPrecReal;
            fn $method(self, rhs: &HighPrecReal) -> HighPrecReal {
                (&self).$method(rhs)
            }
        }
        impl $trait<HighPrecReal> for &HighPrecReal {
            type Output = HighPrecReal;
            fn $method(self, rhs: HighPrecReal) -> HighPrecReal {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

/// Relative difference `|x - y| / max(|x|, |y|)` as an `f64` (0 when both are 0).
pub fn relative_difference(x: &HighPrecReal, y: &HighPrecReal) -> f64 {
    let scale = x.abs().max(&y.abs());
    if scale.is_zero() {
        return 0.0;
    }
    ((x - y).abs() / scale).to_f64()
}

/// Exact integer as `f64`, saturating to infinity.
pub fn bigint_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}
