use sumsq::asymptotic::compare_table;
use sumsq::highprec::{relative_difference, HighPrecReal};
use sumsq::qseries::r_k;
use sumsq::quadrature::{
    extract_coefficient_auto, extract_coefficient_complex, extract_coefficient_numeric, lemma_ratio,
    theta_eval, ComplexHP,
};

const P: usize = 160;

fn hp(s: &str) -> HighPrecReal {
    HighPrecReal::parse(s, P).unwrap()
}

#[test]
fn theta_off_axis_against_direct_summation() {
    let z = ComplexHP::new(hp("0.1"), hp("0.1"));
    let t = theta_eval(&z, P).unwrap();
    // 50-digit reference from an independent summation over |n| <= 40.
    let re = hp("1.7377307849893705485888045547416265860924830706962");
    let im = hp("0.71821149815187059302896809935133937612165417694578");
    assert!(relative_difference(&t.re, &re) < 1e-45);
    assert!(relative_difference(&t.im, &im) < 1e-45);

    // Same sum with one exp/cos/sin per term.
    let two_pi = HighPrecReal::pi(P).mul_pow2(1);
    let mut acc = ComplexHP::zero(P);
    for n in -40i64..=40 {
        let n2 = HighPrecReal::from_i64(n * n, P);
        let modulus = (-(&two_pi * &n2 * &z.im)).exp();
        let term = ComplexHP::cis(&(&two_pi * &n2 * &z.re)).scale(&modulus);
        acc = &acc + &term;
    }
    assert!(relative_difference(&t.re, &acc.re) < 1e-45);
    assert!(relative_difference(&t.im, &acc.im) < 1e-45);
}

#[test]
fn coefficients_are_height_independent() {
    for (k, m) in [(3u64, 7u64), (6, 20), (5, 0)] {
        let values: Vec<HighPrecReal> = ["0.1", "0.2", "0.4"]
            .iter()
            .map(|y| extract_coefficient_numeric(k, m, &hp(y), 128, P).unwrap())
            .collect();
        for v in &values[1..] {
            assert!((v - &values[0]).abs().to_f64() < 1e-8);
        }
    }
}

#[test]
fn imaginary_part_vanishes() {
    for (k, m) in [(4u64, 9u64), (12, 24), (1, 5)] {
        let c = extract_coefficient_complex(k, m, &hp("0.2"), 128, P).unwrap();
        assert!(
            c.im.abs() < HighPrecReal::one(P).mul_pow2(-(P as i64) + 16),
            "k={k} m={m}"
        );
    }
}

#[test]
fn auto_points_converge() {
    let (v, points) = extract_coefficient_auto(9, 13, &hp("0.2"), P).unwrap();
    assert!(points >= 2 * (9 + 13));
    let exact = HighPrecReal::from_bigint(&r_k(9, 13), P);
    assert!(relative_difference(&v, &exact) < 1e-12);
}

#[test]
fn lemma_ratio_matches_the_exact_table() {
    let row = &compare_table(1, 0, &[10], 128).unwrap()[0];
    let ratio = lemma_ratio(1, 0, 10, 128).unwrap().to_f64();
    assert!((ratio - row.ratio).abs() < 1e-12);
    assert!((ratio - 0.99550).abs() < 5e-6);
}

#[test]
fn lemma_ratio_at_one_hundred() {
    let ratio = lemma_ratio(1, 0, 100, 128).unwrap().to_f64();
    assert!((ratio - 0.99834).abs() < 5e-6, "{ratio}");
}

#[test]
fn lemma_ratio_with_shift() {
    // a n + b = 3 n - 2; the integral is still the exact count.
    let row = &compare_table(3, -2, &[12], 128).unwrap()[0];
    let ratio = lemma_ratio(3, -2, 12, 128).unwrap().to_f64();
    assert!((ratio - row.ratio).abs() < 1e-10, "{ratio} vs {}", row.ratio);
    assert_eq!(lemma_ratio(1, -5, 2, 96).unwrap().to_f64(), 0.0);
}
