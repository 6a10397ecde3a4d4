//! The saddle point of `q^(-a) * theta(z)` on the imaginary axis.
//!
//! With `z = iy` the function `g(iy) = sum_n exp(-2 pi y (n^2 - a))` is real and
//! positive. [`solve_saddle`] finds the unique `y > 0` where
//! `g'(iy) = sum_n -2 pi (n^2 - a) exp(-2 pi y (n^2 - a))` vanishes, and
//! [`constants`] turns it into the growth constant `A = g(iy)` and the
//! prefactor `B = exp(2 pi y b) * sqrt(2 pi A / -g''(iy))` where
//! `g''(iy) = -4 pi^2 sum_n (n^2 - a)^2 exp(-2 pi y (n^2 - a))`.
//!
//! `g'(iy)` is strictly increasing in `y` (its `y`-derivative is `-g''(iy) > 0`),
//! so the root is unique and bracketing is safe.

use crate::error::{Error, Result};
use crate::highprec::{HighPrecReal, MIN_PRECISION_BITS};

/// Extra bits carried through every internal computation.
pub const GUARD_BITS: usize = 32;

/// Solved saddle point and the constants derived from it for one `(a, b)`.
#[derive(Clone, Debug)]
pub struct SaddleData {
    pub a: u64,
    pub b: i64,
    /// Ordinate of the saddle point, `g'(iy) = 0`.
    pub y: HighPrecReal,
    /// `A = g(iy)`, the base of the exponential growth.
    pub growth: HighPrecReal,
    /// `g''(iy)`, strictly negative.
    pub curvature: HighPrecReal,
    /// `B = exp(2 pi y b) * sqrt(2 pi A / -g''(iy))`.
    pub prefactor: HighPrecReal,
    /// Upper bound on the truncation error of the series for `g''(iy)`,
    /// which also dominates the tails of `g` and `g'`.
    pub tail_bound: HighPrecReal,
    pub precision_bits: usize,
}

/// The three lattice sums at one point, scaled by `exp(-2 pi y a)`:
/// `s_p = sum_n (n^2 - a)^p u^(n^2)` with `u = exp(-2 pi y)`.
struct ScaledSums {
    s0: HighPrecReal,
    s1: HighPrecReal,
    s2: HighPrecReal,
    /// `ln` of the bound on each omitted two-sided tail, in scaled units.
    tail_ln: f64,
}

/// Smallest `N` such that truncating to `|n| < N` leaves a two-sided tail below
/// `2^-bits` times the `n = 0` term, for every weight `(n^2 - a)^p`, `p <= 2`.
///
/// Returns `N` and the natural log of the (scaled) tail bound.
fn truncation_point(a: u64, y: f64, bits: usize) -> (u64, f64) {
    let a = a as f64;
    let two_pi_y = 2.0 * std::f64::consts::PI * y;
    // n = 0 contributes a^p >= 1 (a >= 1) in scaled units, so ln(ref) >= 0.
    let target = -(bits as f64) * std::f64::consts::LN_2;
    let mut n: u64 = 1;
    loop {
        let nf = n as f64;
        let w = nf * nf - a;
        if w >= a + 1.0 {
            let w_next = (nf + 1.0) * (nf + 1.0) - a;
            let ln_ratio = 2.0 * (w_next / w).ln() - two_pi_y * (2.0 * nf + 1.0);
            if ln_ratio < 0.0 {
                let ln_term = -two_pi_y * nf * nf + 2.0 * w.ln();
                let ln_tail = std::f64::consts::LN_2 + ln_term - (-ln_ratio.exp()).ln_1p();
                if ln_tail < target {
                    return (n, ln_tail);
                }
            }
        }
        n += 1;
    }
}

fn validate(a: u64, y: &HighPrecReal) -> Result<()> {
    if a == 0 {
        return Err(Error::Domain("a must be a positive integer".into()));
    }
    if !y.is_positive() {
        return Err(Error::Domain("y must be positive".into()));
    }
    if y.precision_bits() < MIN_PRECISION_BITS {
        return Err(Error::PrecisionTooLow {
            requested: y.precision_bits(),
            minimum: MIN_PRECISION_BITS,
        });
    }
    Ok(())
}

fn scaled_sums(a: u64, y: &HighPrecReal, wp: usize) -> ScaledSums {
    let y = y.with_precision(wp);
    let (n_terms, tail_ln) = truncation_point(a, y.to_f64(), wp);
    let two_pi = HighPrecReal::pi(wp).mul_pow2(1);
    let u = (-(&two_pi * &y)).exp();
    let u2 = &u * &u;
    let zero = HighPrecReal::zero(wp);
    let (mut s0, mut s1, mut s2) = (zero.clone(), zero.clone(), zero);
    // power = u^(n^2), step = u^(2n + 1)
    let mut power = HighPrecReal::one(wp);
    let mut step = u;
    let a = a as i64;
    for n in 0..n_terms as i64 {
        if n > 0 {
            power = &power * &step;
            step = &step * &u2;
        }
        let w = n * n - a;
        let t0 = if n == 0 { power.clone() } else { power.mul_pow2(1) };
        let t1 = &t0 * &HighPrecReal::from_i64(w, wp);
        let t2 = &t1 * &HighPrecReal::from_i64(w, wp);
        s0 = s0 + t0;
        s1 = s1 + t1;
        s2 = s2 + t2;
    }
    ScaledSums { s0, s1, s2, tail_ln }
}

/// `exp(2 pi y a)`, the factor removed by [`scaled_sums`].
fn unscale(a: u64, y: &HighPrecReal, wp: usize) -> HighPrecReal {
    let y = y.with_precision(wp);
    (HighPrecReal::pi(wp).mul_pow2(1) * &y * HighPrecReal::from_u64(a, wp)).exp()
}

/// `g(iy) = sum_n exp(-2 pi y (n^2 - a))`.
pub fn eval_g(a: u64, y: &HighPrecReal) -> Result<HighPrecReal> {
    validate(a, y)?;
    let p = y.precision_bits();
    let wp = p + GUARD_BITS;
    let sums = scaled_sums(a, y, wp);
    Ok((sums.s0 * unscale(a, y, wp)).with_precision(p))
}

/// `g'(iy) = sum_n -2 pi (n^2 - a) exp(-2 pi y (n^2 - a))`, which is also the
/// derivative of [`eval_g`] with respect to `y`.
pub fn eval_g1(a: u64, y: &HighPrecReal) -> Result<HighPrecReal> {
    validate(a, y)?;
    let p = y.precision_bits();
    let wp = p + GUARD_BITS;
    let sums = scaled_sums(a, y, wp);
    let two_pi = HighPrecReal::pi(wp).mul_pow2(1);
    Ok((-(two_pi * sums.s1) * unscale(a, y, wp)).with_precision(p))
}

/// `g''(iy) = -4 pi^2 sum_n (n^2 - a)^2 exp(-2 pi y (n^2 - a))`; always negative.
pub fn eval_g2(a: u64, y: &HighPrecReal) -> Result<HighPrecReal> {
    validate(a, y)?;
    let p = y.precision_bits();
    let wp = p + GUARD_BITS;
    let sums = scaled_sums(a, y, wp);
    Ok((-four_pi_sq(wp) * sums.s2 * unscale(a, y, wp)).with_precision(p))
}

fn four_pi_sq(wp: usize) -> HighPrecReal {
    let pi = HighPrecReal::pi(wp);
    (&pi * &pi).mul_pow2(2)
}

/// Sign of `g'(iy)`: `true` when positive.
fn g1_positive(a: u64, y: &HighPrecReal, wp: usize) -> bool {
    // g' = -2 pi e^{2 pi y a} s1
    scaled_sums(a, y, wp).s1.is_negative()
}

/// Finds `[lo, hi]` with `g'(i lo) < 0 < g'(i hi)`.
fn bracket(a: u64, wp: usize) -> Result<(HighPrecReal, HighPrecReal)> {
    if a == 1 {
        let lo = HighPrecReal::one(wp) / HighPrecReal::pi(wp).mul_pow2(3);
        let hi = HighPrecReal::one(wp);
        if !g1_positive(a, &lo, wp) && g1_positive(a, &hi, wp) {
            return Ok((lo, hi));
        }
    }
    // Geometric scan over y = 2^j, j in [-30, 30], using monotonicity.
    let at = |j: i64| HighPrecReal::one(wp).mul_pow2(j);
    const LIMIT: i64 = 30;
    let (mut lo, mut hi) = (-LIMIT, LIMIT);
    while hi - lo > 1 {
        let mid = (lo + hi).div_euclid(2);
        if g1_positive(a, &at(mid), wp) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // The endpoints themselves are only probed when the search reached them.
    if (lo == -LIMIT && g1_positive(a, &at(lo), wp)) || (hi == LIMIT && !g1_positive(a, &at(hi), wp)) {
        return Err(Error::NoBracket(a));
    }
    Ok((at(lo), at(hi)))
}

/// The unique `y > 0` with `g'(iy) = 0`, to roughly `precision_bits` relative
/// bits.
///
/// Bisection until the bracket is about 10 bits tight, then Newton steps with
/// the positive slope `-g''(iy)`; a Newton iterate that leaves the bracket is
/// replaced by the bracket midpoint.
pub fn solve_saddle(a: u64, precision_bits: usize) -> Result<HighPrecReal> {
    if a == 0 {
        return Err(Error::Domain("a must be a positive integer".into()));
    }
    HighPrecReal::try_zero(precision_bits)?;
    let wp = precision_bits + GUARD_BITS;
    let (mut lo, mut hi) = bracket(a, wp)?;
    let two_pi = HighPrecReal::pi(wp).mul_pow2(1);

    let tight = HighPrecReal::one(wp).mul_pow2(-10);
    while (&hi - &lo) > &tight * &lo {
        let mid = (&lo + &hi).mul_pow2(-1);
        if g1_positive(a, &mid, wp) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    let stop = HighPrecReal::one(wp).mul_pow2(-(precision_bits as i64 + 8));
    let mut y = (&lo + &hi).mul_pow2(-1);
    for _ in 0..200 {
        let sums = scaled_sums(a, &y, wp);
        if sums.s1.is_zero() {
            break;
        }
        if sums.s1.is_negative() {
            hi = y.clone();
        } else {
            lo = y.clone();
        }
        // y - g'/(dg'/dy) = y + g'/g'' = y + s1 / (2 pi s2)
        let step = &sums.s1 / (&two_pi * &sums.s2);
        let candidate = &y + &step;
        // A converged step can round to `y` itself, which may now equal a
        // bracket end, so it is taken as is rather than range-checked.
        if step.abs() <= &stop * &y {
            y = candidate;
            break;
        }
        y = if candidate >= lo && candidate <= hi {
            candidate
        } else {
            (&lo + &hi).mul_pow2(-1)
        };
        if (&hi - &lo) <= &stop * &lo {
            break;
        }
    }
    Ok(y.with_precision(precision_bits))
}

/// Saddle point, `A`, `g''` and `B` for the pair `(a, b)`.
pub fn constants(a: u64, b: i64, precision_bits: usize) -> Result<SaddleData> {
    let y = solve_saddle(a, precision_bits)?;
    let wp = precision_bits + GUARD_BITS;
    let y_wp = y.with_precision(wp);
    let sums = scaled_sums(a, &y_wp, wp);
    let scale = unscale(a, &y_wp, wp);
    let growth = &sums.s0 * &scale;
    let curvature = -(four_pi_sq(wp) * &sums.s2 * &scale);
    let two_pi = HighPrecReal::pi(wp).mul_pow2(1);
    let shift = (&two_pi * &y_wp * HighPrecReal::from_i64(b, wp)).exp();
    let prefactor = shift * (&two_pi * &growth / -&curvature).sqrt();
    let tail_bound = HighPrecReal::from_f64(sums.tail_ln, wp).exp() * four_pi_sq(wp) * &scale;
    Ok(SaddleData {
        a,
        b,
        y,
        growth: growth.with_precision(precision_bits),
        curvature: curvature.with_precision(precision_bits),
        prefactor: prefactor.with_precision(precision_bits),
        tail_bound: tail_bound.with_precision(precision_bits),
        precision_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::highprec::relative_difference;

    fn hp(s: &str) -> HighPrecReal {
        HighPrecReal::parse(s, 192).unwrap()
    }

    #[test]
    fn truncation_point_grows_as_y_shrinks() {
        let (n_big, _) = truncation_point(1, 1.0, 160);
        let (n_small, _) = truncation_point(1, 1e-3, 160);
        assert!(n_small > n_big);
        assert!(n_big >= 2);
    }

    #[test]
    fn domain_errors() {
        assert!(eval_g(1, &hp("0")).is_err());
        assert!(eval_g(1, &hp("-0.5")).is_err());
        assert!(eval_g1(0, &hp("0.5")).is_err());
        assert!(solve_saddle(0, 128).is_err());
        assert!(solve_saddle(1, 16).is_err());
    }

    #[test]
    fn g_dominated_by_constant_term_for_large_y() {
        let y = hp("5");
        let g = eval_g(1, &y).unwrap();
        let lead = (HighPrecReal::pi(192).mul_pow2(1) * &y).exp();
        let ratio = (g / lead).to_f64();
        assert!((ratio - 1.0).abs() < 1e-12, "{ratio}");
    }

    #[test]
    fn g1_sign_at_extremes() {
        assert!(eval_g1(1, &hp("0.0001")).unwrap().is_negative());
        assert!(eval_g1(1, &hp("1")).unwrap().is_positive());
    }

    #[test]
    fn g2_negative() {
        for a in [1, 2, 5, 17] {
            for y in ["0.01", "0.2", "3"] {
                assert!(eval_g2(a, &hp(y)).unwrap().is_negative());
            }
        }
    }

    #[test]
    fn saddle_for_a_equal_one() {
        let y = solve_saddle(1, 128).unwrap();
        assert!((y.to_f64() - 0.07957745473668).abs() < 1e-13);
        let g1 = eval_g1(1, &y).unwrap();
        let g2 = eval_g2(1, &y).unwrap();
        // |g'(iy)| within one Newton step of precision_bits-accurate y.
        let tol = (g2.abs() * &y).mul_pow2(-(128 - 8));
        assert!(g1.abs() <= tol, "{g1:?} vs {tol:?}");
    }

    #[test]
    fn constants_for_a_equal_one() {
        let sd = constants(1, 0, 128).unwrap();
        assert_eq!(sd.growth.to_sci_string(10), "4.132731376e0");
        assert_eq!(sd.prefactor.to_sci_string(11), "2.8209420367e-1");
        assert!(sd.curvature.is_negative());
        assert!(sd.tail_bound.is_positive());
        assert!(sd.tail_bound < HighPrecReal::one(128).mul_pow2(-100));
    }

    #[test]
    fn b_only_rescales_prefactor() {
        let base = constants(1, 0, 128).unwrap();
        for b in [-3i64, 1, 4] {
            let sd = constants(1, b, 128).unwrap();
            assert_eq!(sd.growth, base.growth);
            let expected =
                (HighPrecReal::pi(128).mul_pow2(1) * &base.y * HighPrecReal::from_i64(b, 128)).exp();
            let got = &sd.prefactor / &base.prefactor;
            assert!(relative_difference(&got, &expected) < 1e-30);
        }
    }

    #[test]
    fn prefactor_identity_holds() {
        let sd = constants(2, -1, 160).unwrap();
        let p = 160;
        let two_pi = HighPrecReal::pi(p).mul_pow2(1);
        let b = (&two_pi * &sd.y * HighPrecReal::from_i64(-1, p)).exp()
            * (&two_pi * &sd.growth / -&sd.curvature).sqrt();
        assert!(relative_difference(&b, &sd.prefactor) < 1e-45);
        assert!(sd.y.is_positive() && sd.growth > HighPrecReal::one(p));
    }
}
