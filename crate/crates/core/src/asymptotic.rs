//! `B * A^n / sqrt(n)` in decimal log scale, and the comparison against the
//! exact counts r_n(an + b).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::highprec::HighPrecReal;
use crate::qseries::{r_k_with, Convolution};
use crate::saddle::{constants, SaddleData, GUARD_BITS};

/// A positive number `mantissa * 10^exponent10` with `mantissa` in `[1, 10)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogScaleValue {
    mantissa: f64,
    exponent10: i64,
}

impl LogScaleValue {
    /// Normalises `mantissa * 10^exponent10`; `mantissa` must be positive and finite.
    pub fn new(mantissa: f64, exponent10: i64) -> Result<Self> {
        if !(mantissa.is_finite() && mantissa > 0.0) {
            return Err(Error::Domain(format!("mantissa {mantissa} is not positive")));
        }
        let shift = mantissa.log10().floor() as i64;
        let mut m = mantissa / 10f64.powi(shift as i32);
        let mut e = exponent10 + shift;
        if m >= 10.0 {
            m /= 10.0;
            e += 1;
        } else if m < 1.0 {
            m *= 10.0;
            e -= 1;
        }
        Ok(LogScaleValue {
            mantissa: m,
            exponent10: e,
        })
    }

    /// The value whose decimal logarithm is `log10`.
    pub fn from_log10(log10: &HighPrecReal) -> Self {
        let e = log10.floor_i64().expect("decimal exponent outside the i64 range");
        let frac = log10 - &log10.lift_i64(e);
        let mantissa = (frac * HighPrecReal::ln10(log10.precision_bits())).exp().to_f64();
        if mantissa >= 10.0 {
            LogScaleValue {
                mantissa: mantissa / 10.0,
                exponent10: e + 1,
            }
        } else {
            LogScaleValue {
                mantissa: mantissa.max(1.0),
                exponent10: e,
            }
        }
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exponent10(&self) -> i64 {
        self.exponent10
    }

    pub fn log10(&self) -> f64 {
        self.exponent10 as f64 + self.mantissa.log10()
    }

    /// The value as an `f64`, infinite when out of range.
    pub fn to_f64(&self) -> f64 {
        self.mantissa * 10f64.powi(self.exponent10.clamp(-400, 400) as i32)
    }

    /// Mantissa rounded to `sig` significant digits, with the exponent
    /// adjusted when rounding carries into a new decade.
    pub fn rounded(&self, sig: usize) -> (String, i64) {
        let sig = sig.max(1);
        let s = format!("{:.*}", sig - 1, self.mantissa);
        if s.starts_with("10") {
            (format!("{:.*}", sig - 1, 1.0), self.exponent10 + 1)
        } else {
            (s, self.exponent10)
        }
    }

    /// `d.ddd…e<exp>` with `sig` significant digits.
    pub fn render(&self, sig: usize) -> String {
        let (m, e) = self.rounded(sig);
        format!("{m}e{e}")
    }
}

impl fmt::Display for LogScaleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(f.precision().unwrap_or(10)))
    }
}

/// One line of the exact-versus-estimate table.
#[derive(Clone, Debug)]
pub struct ComparisonRow {
    pub n: u64,
    /// `a n + b`, the exponent whose coefficient is counted.
    pub target: i64,
    /// r_n(an + b) exactly.
    pub exact_value: BigInt,
    /// `None` when the exact count is zero (in particular when `target < 0`).
    pub exact: Option<LogScaleValue>,
    pub estimate: LogScaleValue,
    /// `exact / estimate` from the full exact integer; 0 for zero counts.
    pub ratio: f64,
}

impl ComparisonRow {
    /// Rows whose exact count vanishes carry no ratio information.
    pub fn is_flagged(&self) -> bool {
        self.exact.is_none()
    }
}

/// `log10(B * A^n / sqrt(n))` at the precision of `sd` plus guard bits.
pub fn log10_estimate(sd: &SaddleData, n: u64) -> Result<HighPrecReal> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let wp = sd.precision_bits + GUARD_BITS;
    let nn = HighPrecReal::from_u64(n, wp);
    let log_b = sd.prefactor.with_precision(wp).log10();
    let log_a = sd.growth.with_precision(wp).log10();
    Ok(log_b + &nn * log_a - nn.log10().mul_pow2(-1))
}

/// `B * A^n / sqrt(n)` in decimal log scale.
pub fn estimate(sd: &SaddleData, n: u64) -> Result<LogScaleValue> {
    Ok(LogScaleValue::from_log10(&log10_estimate(sd, n)?))
}

/// `B * A^n / sqrt(n)` as a plain high-precision number (use only where it
/// fits the exponent range, e.g. moderate `n`).
pub fn estimate_value(sd: &SaddleData, n: u64) -> Result<HighPrecReal> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let wp = sd.precision_bits + GUARD_BITS;
    let nn = HighPrecReal::from_u64(n, wp);
    Ok(sd.prefactor.with_precision(wp) * sd.growth.with_precision(wp).powi(n) / nn.sqrt())
}

/// Decimal mantissa and exponent of a positive exact integer.
pub fn exact_to_logscale(v: &BigInt) -> Result<LogScaleValue> {
    if !v.is_positive() {
        return Err(Error::Domain(
            "log-scale conversion needs a positive integer".into(),
        ));
    }
    let digits = v.to_string();
    let exponent10 = digits.len() as i64 - 1;
    let lead = &digits[..digits.len().min(18)];
    let mantissa: f64 = format!("{}.{}", &lead[..1], &lead[1..])
        .parse()
        .expect("decimal digits");
    Ok(LogScaleValue {
        mantissa: mantissa.min(10.0 - f64::EPSILON * 8.0),
        exponent10,
    })
}

/// `exact / 10^log10_estimate`, evaluated without leaving log space.
fn ratio(exact: &BigInt, log10_est: &HighPrecReal) -> f64 {
    if exact.is_zero() {
        return 0.0;
    }
    let wp = log10_est.precision_bits();
    let diff = HighPrecReal::from_bigint(exact, wp).log10() - log10_est;
    (diff * HighPrecReal::ln10(wp)).exp().to_f64()
}

/// Exact r_n(an + b) against `B * A^n / sqrt(n)` for each `n` in `ns`.
pub fn compare_table(a: u64, b: i64, ns: &[u64], precision_bits: usize) -> Result<Vec<ComparisonRow>> {
    let sd = constants(a, b, precision_bits)?;
    compare_table_with(&sd, ns, Convolution::Schoolbook)
}

/// [`compare_table`] with precomputed constants and a chosen convolution.
pub fn compare_table_with(sd: &SaddleData, ns: &[u64], conv: Convolution) -> Result<Vec<ComparisonRow>> {
    if ns.is_empty() {
        return Err(Error::Domain("the list of n is empty".into()));
    }
    ns.iter()
        .map(|&n| {
            let log_est = log10_estimate(sd, n)?;
            let target = sd.a as i64 * n as i64 + sd.b;
            let exact_value = r_k_with(n, target, conv);
            let exact = if exact_value.is_zero() {
                None
            } else {
                Some(exact_to_logscale(&exact_value)?)
            };
            Ok(ComparisonRow {
                n,
                target,
                ratio: ratio(&exact_value, &log_est),
                exact,
                exact_value,
                estimate: LogScaleValue::from_log10(&log_est),
            })
        })
        .collect()
}

/// Constants at a precision where the estimate for the largest `n` is stable
/// to `sig` significant digits: the precision doubles from `start_bits` until
/// two successive renderings agree.
pub fn stable_constants(a: u64, b: i64, ns: &[u64], start_bits: usize, sig: usize) -> Result<SaddleData> {
    let n_max = ns.iter().copied().max().unwrap_or(1).max(1);
    let mut bits = start_bits;
    let mut sd = constants(a, b, bits)?;
    let mut shown = estimate(&sd, n_max)?.render(sig);
    loop {
        bits *= 2;
        let next = constants(a, b, bits)?;
        let next_shown = estimate(&next, n_max)?.render(sig);
        let stable = next_shown == shown;
        sd = next;
        shown = next_shown;
        if stable || bits > 1 << 16 {
            return Ok(sd);
        }
    }
}
