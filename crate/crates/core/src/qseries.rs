//! Exact truncated power series in `q` with big-integer coefficients.
//!
//! `theta(z) = 1 + 2 * sum_{j >= 1} q^(j^2)`, and the coefficient of `q^m` in
//! `theta^k` is r_k(m), the number of integer vectors of length `k` with
//! squared norm `m`. Everything here is exact integer arithmetic.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

/// A power series truncated after `q^trunc_degree`.
///
/// Index `i` of [`coeffs`](Self::coeffs) holds the coefficient of `q^i`; the
/// vector always has `trunc_degree + 1` entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigCoeffSeries {
    coeffs: Vec<BigInt>,
}

impl BigCoeffSeries {
    /// Wraps a coefficient vector. An empty vector is read as the zero
    /// series of degree 0.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        BigCoeffSeries { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `1 + 0q + ... + 0q^trunc_degree`
    pub fn one(trunc_degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); trunc_degree + 1];
        coeffs[0] = BigInt::one();
        BigCoeffSeries { coeffs }
    }

    pub fn trunc_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^i`, zero above the truncation degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Re-truncates to degree `m`, padding with zeros when `m` is larger.
    pub fn truncated(&self, m: usize) -> Self {
        let mut coeffs: Vec<BigInt> = self.coeffs.iter().take(m + 1).cloned().collect();
        coeffs.resize(m + 1, BigInt::zero());
        BigCoeffSeries { coeffs }
    }

    fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| c.sign() != Sign::Minus)
    }
}

/// Multiplication kernel used for the truncated products.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Convolution {
    /// Quadratic Cauchy product over the stored coefficients.
    #[default]
    Schoolbook,
    /// Kronecker substitution: pack each series into one large integer,
    /// multiply once, unpack. Falls back to schoolbook for inputs with
    /// negative coefficients.
    Kronecker,
}

/// The Jacobi theta series truncated at degree `m`.
pub fn theta_series(m: usize) -> BigCoeffSeries {
    let mut coeffs = vec![BigInt::zero(); m + 1];
    coeffs[0] = BigInt::one();
    let two = BigInt::from(2);
    let mut j = 1usize;
    while j * j <= m {
        coeffs[j * j] = two.clone();
        j += 1;
    }
    BigCoeffSeries { coeffs }
}

/// Cauchy product of `s1` and `s2`, keeping degrees `0..=m`.
pub fn mul_truncated(s1: &BigCoeffSeries, s2: &BigCoeffSeries, m: usize) -> BigCoeffSeries {
    mul_truncated_with(s1, s2, m, Convolution::Schoolbook)
}

pub fn mul_truncated_with(
    s1: &BigCoeffSeries,
    s2: &BigCoeffSeries,
    m: usize,
    conv: Convolution,
) -> BigCoeffSeries {
    match conv {
        Convolution::Kronecker if s1.is_nonnegative() && s2.is_nonnegative() => {
            kronecker_mul(s1.coeffs(), s2.coeffs(), m)
        }
        _ => schoolbook_mul(s1.coeffs(), s2.coeffs(), m),
    }
}

fn schoolbook_mul(a: &[BigInt], b: &[BigInt], m: usize) -> BigCoeffSeries {
    let mut out = vec![BigInt::zero(); m + 1];
    for (i, ai) in a.iter().enumerate().take(m + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(m + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    BigCoeffSeries { coeffs: out }
}

/// `a^2` truncated at `m`, computing each cross product once.
fn schoolbook_square(a: &[BigInt], m: usize) -> BigCoeffSeries {
    let mut out = vec![BigInt::zero(); m + 1];
    let len = a.len().min(m + 1);
    for i in 0..len {
        let ai = &a[i];
        if ai.is_zero() {
            continue;
        }
        if 2 * i <= m {
            out[2 * i] += ai * ai;
        }
        for j in (i + 1)..len.min(m + 1 - i) {
            let aj = &a[j];
            if !aj.is_zero() {
                out[i + j] += (ai * aj) << 1u32;
            }
        }
    }
    BigCoeffSeries { coeffs: out }
}

fn kronecker_mul(a: &[BigInt], b: &[BigInt], m: usize) -> BigCoeffSeries {
    let a = &a[..a.len().min(m + 1)];
    let b = &b[..b.len().min(m + 1)];
    let max_bits = |s: &[BigInt]| s.iter().map(|c| c.bits()).max().unwrap_or(0);
    let terms = a.len().min(b.len()) as u64;
    // Slot width bounds every product coefficient: sum of `terms` products.
    let width = (max_bits(a) + max_bits(b) + (64 - terms.leading_zeros()) as u64 + 1) as usize;
    let pa = pack(a, width);
    let pb = pack(b, width);
    let product = if std::ptr::eq(a, b) { &pa * &pa } else { &pa * &pb };
    let limbs = product.to_u32_digits();
    let coeffs = (0..=m)
        .map(|i| BigInt::from_biguint(Sign::Plus, extract_bits(&limbs, i * width, width)))
        .collect();
    BigCoeffSeries { coeffs }
}

fn pack(s: &[BigInt], width: usize) -> BigUint {
    let total_bits = s.len() * width + 64;
    let mut limbs = vec![0u32; total_bits.div_ceil(32)];
    for (i, c) in s.iter().enumerate() {
        let base = i * width;
        for (t, d) in c.magnitude().to_u32_digits().into_iter().enumerate() {
            let off = base + 32 * t;
            let (w, r) = (off / 32, off % 32);
            limbs[w] |= d << r;
            if r != 0 {
                limbs[w + 1] |= d >> (32 - r);
            }
        }
    }
    BigUint::new(limbs)
}

fn extract_bits(limbs: &[u32], start: usize, width: usize) -> BigUint {
    let (first, r) = (start / 32, start % 32);
    let n_words = width.div_ceil(32);
    let word = |k: usize| limbs.get(k).copied().unwrap_or(0);
    let mut out: Vec<u32> = (0..n_words)
        .map(|k| {
            let lo = word(first + k) >> r;
            if r == 0 {
                lo
            } else {
                lo | (word(first + k + 1) << (32 - r))
            }
        })
        .collect();
    let top_bits = width % 32;
    if top_bits != 0 {
        if let Some(last) = out.last_mut() {
            *last &= (1u32 << top_bits) - 1;
        }
    }
    BigUint::new(out)
}

/// `s^k` truncated at degree `m`, by binary exponentiation with truncation
/// after every product.
pub fn pow_truncated(s: &BigCoeffSeries, k: u64, m: usize) -> BigCoeffSeries {
    pow_truncated_with(s, k, m, Convolution::Schoolbook)
}

pub fn pow_truncated_with(s: &BigCoeffSeries, k: u64, m: usize, conv: Convolution) -> BigCoeffSeries {
    let square = |x: &BigCoeffSeries| match conv {
        Convolution::Schoolbook => schoolbook_square(x.coeffs(), m),
        Convolution::Kronecker => mul_truncated_with(x, x, m, conv),
    };
    let mut result: Option<BigCoeffSeries> = None;
    let mut base = s.truncated(m);
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => mul_truncated_with(&r, &base, m, conv),
            });
        }
        e >>= 1;
        if e > 0 {
            base = square(&base);
        }
    }
    result.unwrap_or_else(|| BigCoeffSeries::one(m))
}

/// Number of representations of `m` as an ordered sum of `k` squares of
/// integers (signs counted). Zero for negative `m`.
pub fn r_k(k: u64, m: i64) -> BigInt {
    r_k_with(k, m, Convolution::Schoolbook)
}

pub fn r_k_with(k: u64, m: i64, conv: Convolution) -> BigInt {
    if m < 0 {
        return BigInt::zero();
    }
    if m == 0 {
        return BigInt::one();
    }
    let m = m as usize;
    pow_truncated_with(&theta_series(m), k, m, conv).coeffs[m].clone()
}
