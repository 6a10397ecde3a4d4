//! Numerical coefficient extraction along a horizontal period.
//!
//! For any height `y > 0`,
//! `r_k(m) = integral_{-1/2}^{1/2} q^(-m) theta(x + iy)^k dx` with `q = exp(2 pi i z)`.
//! The integrand is 1-periodic and analytic in `x`, so the uniform trapezoid
//! rule converges geometrically; with `P` nodes the only error is aliasing from
//! coefficients `m + P, m + 2P, ...`, damped by `exp(-2 pi y P)`.

use std::ops::{Add, Mul};

use crate::asymptotic::estimate_value;
use crate::error::{Error, Result};
use crate::highprec::{HighPrecReal, MIN_PRECISION_BITS};
use crate::saddle::{constants, GUARD_BITS};

/// Complex number with [`HighPrecReal`] parts of a common precision.
#[derive(Clone, Debug)]
pub struct ComplexHP {
    pub re: HighPrecReal,
    pub im: HighPrecReal,
}

impl ComplexHP {
    pub fn new(re: HighPrecReal, im: HighPrecReal) -> Self {
        let p = re.precision_bits().max(im.precision_bits());
        ComplexHP {
            re: re.with_precision(p),
            im: im.with_precision(p),
        }
    }

    pub fn zero(precision_bits: usize) -> Self {
        ComplexHP {
            re: HighPrecReal::zero(precision_bits),
            im: HighPrecReal::zero(precision_bits),
        }
    }

    pub fn one(precision_bits: usize) -> Self {
        ComplexHP {
            re: HighPrecReal::one(precision_bits),
            im: HighPrecReal::zero(precision_bits),
        }
    }

    /// `cos(t) + i sin(t)`
    pub fn cis(t: &HighPrecReal) -> Self {
        ComplexHP {
            re: t.cos(),
            im: t.sin(),
        }
    }

    pub fn precision_bits(&self) -> usize {
        self.re.precision_bits()
    }

    pub fn with_precision(&self, precision_bits: usize) -> Self {
        ComplexHP {
            re: self.re.with_precision(precision_bits),
            im: self.im.with_precision(precision_bits),
        }
    }

    pub fn scale(&self, s: &HighPrecReal) -> Self {
        ComplexHP {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    pub fn norm(&self) -> HighPrecReal {
        (&self.re * &self.re + &self.im * &self.im).sqrt()
    }

    pub fn powi(&self, k: u64) -> Self {
        let mut result = ComplexHP::one(self.precision_bits());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }
}

impl Add<&ComplexHP> for &ComplexHP {
    type Output = ComplexHP;
    fn add(self, rhs: &ComplexHP) -> ComplexHP {
        ComplexHP {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Mul<&ComplexHP> for &ComplexHP {
    type Output = ComplexHP;
    fn mul(self, rhs: &ComplexHP) -> ComplexHP {
        ComplexHP {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

fn two_pi(p: usize) -> HighPrecReal {
    HighPrecReal::pi(p).mul_pow2(1)
}

/// `ln` of the bound `2 exp(-2 pi y N^2) / (1 - exp(-2 pi y (2N + 1)))` on the
/// part of the theta series with `|n| >= N`.
fn theta_tail_ln(y: f64, n: u64) -> f64 {
    let t = 2.0 * std::f64::consts::PI * y;
    let nf = n as f64;
    std::f64::consts::LN_2 - t * nf * nf - (-(-t * (2.0 * nf + 1.0)).exp()).ln_1p()
}

/// Smallest `N` whose tail bound is below `exp(ln_target)`.
fn theta_terms(y: f64, ln_target: f64, from: u64) -> u64 {
    let mut n = from.max(1);
    while theta_tail_ln(y, n) >= ln_target {
        n += 1;
    }
    n
}

/// `theta(x + iy)` at working precision `wp`.
fn theta_at(x: &HighPrecReal, y: &HighPrecReal, wp: usize) -> ComplexHP {
    let x = x.with_precision(wp);
    let y = y.with_precision(wp);
    let yf = y.to_f64();
    let tp = two_pi(wp);
    let q = ComplexHP::cis(&(&tp * &x)).scale(&(-(&tp * &y)).exp());
    let q2 = &q * &q;
    let mut sum = ComplexHP::one(wp);
    // power = q^(n^2), step = q^(2n + 1)
    let mut power = ComplexHP::one(wp);
    let mut step = q;
    let mut n = 1u64;
    let mut limit = theta_terms(yf, -(wp as f64) * std::f64::consts::LN_2, 1);
    let mut rechecked = false;
    loop {
        while n < limit {
            power = &power * &step;
            step = &step * &q2;
            let twice = ComplexHP {
                re: power.re.mul_pow2(1),
                im: power.im.mul_pow2(1),
            };
            sum = &sum + &twice;
            n += 1;
        }
        if rechecked {
            return sum;
        }
        // Tighten to a bound relative to the partial sum when it is small.
        rechecked = true;
        let modulus = sum.norm().to_f64();
        if modulus > 0.0 && modulus < 1.0 {
            let target = -(wp as f64) * std::f64::consts::LN_2 + modulus.ln();
            limit = theta_terms(yf, target, limit);
        }
    }
}

/// `theta(z) = sum_n exp(2 pi i n^2 z)` for `im(z) > 0`, with the omitted tail
/// below `2^-precision_bits` of the partial sum.
pub fn theta_eval(z: &ComplexHP, precision_bits: usize) -> Result<ComplexHP> {
    HighPrecReal::try_zero(precision_bits)?;
    if !z.im.is_positive() {
        return Err(Error::Domain("theta needs im(z) > 0".into()));
    }
    let wp = precision_bits + GUARD_BITS;
    Ok(theta_at(&z.re, &z.im, wp).with_precision(precision_bits))
}

/// Pairwise (tree) summation; the result does not depend on evaluation order.
fn pairwise_sum(items: &[ComplexHP]) -> ComplexHP {
    match items.len() {
        0 => panic!("pairwise_sum of an empty slice"),
        1 => items[0].clone(),
        len => {
            let (l, r) = items.split_at(len / 2);
            &pairwise_sum(l) + &pairwise_sum(r)
        }
    }
}

/// Samples `theta(x_j + iy)^k` on the `P` uniform nodes
/// `x_j = -1/2 + j/P` and extracts any coefficient `m <= m_max` from them.
pub struct TrapezoidSampler {
    k: u64,
    m_max: u64,
    y: HighPrecReal,
    precision_bits: usize,
    wp: usize,
    values: Vec<ComplexHP>,
    /// `exp(-2 pi i x_j)`
    rotors: Vec<ComplexHP>,
}

impl TrapezoidSampler {
    /// Requires `points >= 2 m_max + 2 k` and `y > 0`.
    pub fn new(k: u64, m_max: u64, y: &HighPrecReal, points: usize, precision_bits: usize) -> Result<Self> {
        HighPrecReal::try_zero(precision_bits)?;
        if !y.is_positive() {
            return Err(Error::Domain("quadrature height y must be positive".into()));
        }
        let required = (2 * m_max + 2 * k).max(1) as usize;
        if points < required {
            return Err(Error::TooFewPoints { points, required });
        }
        let yf = y.to_f64();
        // The integrand peaks at exp(2 pi m y) * theta(iy)^k; carry enough extra
        // bits that cancellation down to O(1) results stays below the guard.
        let theta_iy_ln = theta_tail_ln(yf, 1).exp().ln_1p();
        let peak_ln = 2.0 * std::f64::consts::PI * m_max as f64 * yf + k as f64 * theta_iy_ln;
        let extra = (peak_ln / std::f64::consts::LN_2).ceil().max(0.0) as usize;
        let wp = precision_bits + GUARD_BITS + extra;

        let y_wp = y.with_precision(wp.max(MIN_PRECISION_BITS));
        let denom = HighPrecReal::from_u64(2 * points as u64, wp);
        let tp = two_pi(wp);
        let mut values = Vec::with_capacity(points);
        let mut rotors = Vec::with_capacity(points);
        for j in 0..points {
            let x = HighPrecReal::from_i64(2 * j as i64 - points as i64, wp) / &denom;
            values.push(theta_at(&x, &y_wp, wp).powi(k));
            rotors.push(ComplexHP::cis(&-(&tp * &x)));
        }
        Ok(TrapezoidSampler {
            k,
            m_max,
            y: y_wp,
            precision_bits,
            wp,
            values,
            rotors,
        })
    }

    pub fn points(&self) -> usize {
        self.values.len()
    }

    pub fn power(&self) -> u64 {
        self.k
    }

    /// Trapezoid approximations of the coefficients of `q^0 ..= q^m_max`.
    pub fn coefficients(&self) -> Vec<ComplexHP> {
        let wp = self.wp;
        let p_inv = HighPrecReal::one(wp) / HighPrecReal::from_u64(self.points() as u64, wp);
        let growth = (two_pi(wp) * &self.y).exp();
        let mut weights: Vec<ComplexHP> = vec![ComplexHP::one(wp); self.points()];
        let mut scale = p_inv;
        let mut out = Vec::with_capacity(self.m_max as usize + 1);
        for m in 0..=self.m_max {
            if m > 0 {
                for (w, r) in weights.iter_mut().zip(&self.rotors) {
                    *w = &*w * r;
                }
                scale = &scale * &growth;
            }
            let terms: Vec<ComplexHP> = self.values.iter().zip(&weights).map(|(v, w)| v * w).collect();
            out.push(
                pairwise_sum(&terms)
                    .scale(&scale)
                    .with_precision(self.precision_bits),
            );
        }
        out
    }

    pub fn coefficient(&self, m: u64) -> Result<ComplexHP> {
        if m > self.m_max {
            return Err(Error::Domain(format!(
                "coefficient {m} above sampler limit {}",
                self.m_max
            )));
        }
        Ok(self.coefficients().swap_remove(m as usize))
    }
}

/// Trapezoid value of `integral q^(-m) theta(x + iy)^k dx` over one period,
/// including its (ideally vanishing) imaginary part.
pub fn extract_coefficient_complex(
    k: u64,
    m: u64,
    y: &HighPrecReal,
    points: usize,
    precision_bits: usize,
) -> Result<ComplexHP> {
    TrapezoidSampler::new(k, m, y, points, precision_bits)?.coefficient(m)
}

/// Real part of [`extract_coefficient_complex`]: a numerical r_k(m).
pub fn extract_coefficient_numeric(
    k: u64,
    m: u64,
    y: &HighPrecReal,
    points: usize,
    precision_bits: usize,
) -> Result<HighPrecReal> {
    Ok(extract_coefficient_complex(k, m, y, points, precision_bits)?.re)
}

/// `4 (m + k)` rounded up to a power of two (at least 2).
pub fn default_points(k: u64, m: u64) -> usize {
    ((4 * (m + k)) as usize).next_power_of_two().max(2)
}

/// Starts from [`default_points`] and doubles until two successive results
/// agree to `1e-10` (relative once the value exceeds 1). Returns the value and
/// the number of points used.
pub fn extract_coefficient_auto(
    k: u64,
    m: u64,
    y: &HighPrecReal,
    precision_bits: usize,
) -> Result<(HighPrecReal, usize)> {
    let mut points = default_points(k, m);
    let mut prev = extract_coefficient_numeric(k, m, y, points, precision_bits)?;
    loop {
        points *= 2;
        let next = extract_coefficient_numeric(k, m, y, points, precision_bits)?;
        let scale = next.abs().max(&HighPrecReal::one(precision_bits));
        let diff = ((&next - &prev).abs() / scale).to_f64();
        if diff < 1e-10 || points >= 1 << 20 {
            return Ok((next, points));
        }
        prev = next;
    }
}

/// Numerical r_n(an + b) at the saddle height divided by `B A^n / sqrt(n)`.
///
/// The integral is exact up to quadrature error, so this equals the
/// exact-to-estimate ratio and tends to 1 as `n` grows.
pub fn lemma_ratio(a: u64, b: i64, n: u64, precision_bits: usize) -> Result<HighPrecReal> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let sd = constants(a, b, precision_bits)?;
    let target = a as i64 * n as i64 + b;
    if target < 0 {
        return Ok(HighPrecReal::zero(precision_bits));
    }
    let (integral, _) = extract_coefficient_auto(n, target as u64, &sd.y, precision_bits)?;
    let est = estimate_value(&sd, n)?;
    Ok((integral / est).with_precision(precision_bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::highprec::bigint_to_f64;
    use crate::qseries::r_k;

    fn hp(v: f64) -> HighPrecReal {
        HighPrecReal::from_f64(v, 128)
    }

    #[test]
    fn theta_on_imaginary_axis_is_real() {
        for y in [0.05, 0.3, 2.0] {
            let t = theta_eval(&ComplexHP::new(hp(0.0), hp(y)), 128).unwrap();
            assert!(t.im.abs() < HighPrecReal::one(128).mul_pow2(-120));
            assert!(t.re > HighPrecReal::one(128));
        }
    }

    #[test]
    fn theta_at_half_period_is_real() {
        let y = 0.15;
        let t = theta_eval(&ComplexHP::new(hp(0.5), hp(y)), 128).unwrap();
        assert!(t.im.abs() < HighPrecReal::one(128).mul_pow2(-110));
        let direct: f64 = 1.0
            + 2.0
                * (1..40)
                    .map(|n: i32| {
                        (-1f64).powi(n * n) * (-2.0 * std::f64::consts::PI * y * (n * n) as f64).exp()
                    })
                    .sum::<f64>();
        assert!((t.re.to_f64() - direct).abs() < 1e-14);
    }

    #[test]
    fn theta_rejects_lower_half_plane() {
        assert!(theta_eval(&ComplexHP::new(hp(0.1), hp(0.0)), 128).is_err());
        assert!(theta_eval(&ComplexHP::new(hp(0.1), hp(-1.0)), 128).is_err());
    }

    #[test]
    fn orthogonality_for_k_zero() {
        let one = extract_coefficient_numeric(0, 0, &hp(0.2), 8, 128).unwrap();
        assert!((one.to_f64() - 1.0).abs() < 1e-10);
        let zero = extract_coefficient_numeric(0, 3, &hp(0.2), 8, 128).unwrap();
        assert!(zero.to_f64().abs() < 1e-10);
    }

    #[test]
    fn four_squares_of_one() {
        let v = extract_coefficient_numeric(4, 1, &hp(0.2), 64, 128).unwrap();
        assert!((v.to_f64() - 8.0).abs() < 1e-8);
    }

    #[test]
    fn six_squares_of_six() {
        let v = extract_coefficient_numeric(6, 6, &hp(0.15), 128, 128).unwrap();
        assert!((v.to_f64() - bigint_to_f64(&r_k(6, 6))).abs() < 1e-8);
    }

    #[test]
    fn too_few_points_is_rejected() {
        assert_eq!(
            extract_coefficient_numeric(4, 10, &hp(0.2), 20, 128).unwrap_err(),
            Error::TooFewPoints {
                points: 20,
                required: 28
            }
        );
        assert!(extract_coefficient_numeric(4, 1, &hp(-0.2), 64, 128).is_err());
    }

    #[test]
    fn sampler_coefficients_match_single_extraction() {
        let s = TrapezoidSampler::new(5, 12, &hp(0.2), 64, 128).unwrap();
        let all = s.coefficients();
        assert_eq!(all.len(), 13);
        for m in [0u64, 5, 12] {
            let single = extract_coefficient_numeric(5, m, &hp(0.2), 64, 128).unwrap();
            assert!((all[m as usize].re.to_f64() - single.to_f64()).abs() < 1e-20);
        }
    }

    #[test]
    fn doubling_points_is_stable_past_the_knee() {
        let y = hp(0.2);
        let a = extract_coefficient_numeric(8, 10, &y, 64, 128).unwrap();
        let b = extract_coefficient_numeric(8, 10, &y, 128, 128).unwrap();
        assert!((a.to_f64() - b.to_f64()).abs() < 1e-10);
    }

    #[test]
    fn lemma_ratio_small_n() {
        let r1 = lemma_ratio(1, 0, 1, 96).unwrap().to_f64();
        assert!(r1.is_finite() && r1 > 0.0);
        let r10 = lemma_ratio(1, 0, 10, 96).unwrap().to_f64();
        assert!((r10 - 129064.0 / 129648.03).abs() < 1e-6, "{r10}");
    }
}
