//! Reference values marked "50-digit reference" come from an independent
//! direct summation over |n| <= 60 at 50 decimal digits.

use proptest::prelude::*;
use sumsq::highprec::{relative_difference, HighPrecReal};
use sumsq::saddle::{constants, eval_g, eval_g1, eval_g2, solve_saddle};

const P: usize = 192;

fn hp(s: &str) -> HighPrecReal {
    HighPrecReal::parse(s, P).unwrap()
}

/// `sum_{|n| <= n_max} (n^2 - a)^power exp(-2 pi y (n^2 - a))`, one `exp` per term.
fn direct_sum(a: i64, y: &HighPrecReal, power: u32, n_max: i64) -> HighPrecReal {
    let two_pi = HighPrecReal::pi(P).mul_pow2(1);
    let mut acc = HighPrecReal::zero(P);
    for n in -n_max..=n_max {
        let w = n * n - a;
        let term = (-(&two_pi * y * HighPrecReal::from_i64(w, P))).exp();
        acc = acc + term * HighPrecReal::from_i64(w.pow(power), P);
    }
    acc
}

#[test]
fn g_at_a2_y_tenth() {
    let y = hp("0.1");
    let g = eval_g(2, &y).unwrap();
    let reference = hp("7.8566186686802346215463716693848615535841370839897");
    assert!(relative_difference(&g, &reference) < 1e-45);
    assert!(relative_difference(&g, &direct_sum(2, &y, 0, 20)) < 1e-45);
}

#[test]
fn g2_at_a1_y_fifth() {
    let y = hp("0.2");
    let g2 = eval_g2(1, &y).unwrap();
    let reference = hp("-155.31098603145314314611560128664357366913231640293");
    assert!(relative_difference(&g2, &reference) < 1e-45);
    let four_pi_sq = {
        let pi = HighPrecReal::pi(P);
        (&pi * &pi).mul_pow2(2)
    };
    let direct = -(four_pi_sq * direct_sum(1, &y, 2, 30));
    assert!(relative_difference(&g2, &direct) < 1e-45);
}

#[test]
fn g1_positive_at_y_one() {
    let g1 = eval_g1(1, &hp("1")).unwrap();
    let reference = hp("3364.593301864962073379961463797930784564753261003");
    assert!(relative_difference(&g1, &reference) < 1e-45);
}

#[test]
fn saddle_points_against_reference() {
    let cases = [
        (
            1u64,
            "0.0795774547366840962538928854",
            "4.13273137623493996302796465514",
            "0.282094203672395115791996769504",
        ),
        (
            2,
            "0.0397887357729737889724217241564",
            "5.84456473064455581274428417562",
            "0.141047395886935925034980635796",
        ),
        (
            3,
            "0.0265258238486492226281471735883",
            "7.15810067937308369853693403853",
            "0.0940315972579593811580006144255",
        ),
        (
            4,
            "0.0198943678864869169711104704216",
            "8.2654627082449858769387837686",
            "0.0705236979434695358685099314451",
        ),
        (
            10,
            "0.00795774715459476678844418816863",
            "13.068844036618974867567540673",
            "0.028209479177387814347403972578",
        ),
    ];
    for (a, y, big_a, big_b) in cases {
        let sd = constants(a, 0, 128).unwrap();
        assert!(relative_difference(&sd.y, &hp(y)) < 1e-27, "a={a} y={:?}", sd.y);
        assert!(relative_difference(&sd.growth, &hp(big_a)) < 1e-27, "a={a}");
        assert!(relative_difference(&sd.prefactor, &hp(big_b)) < 1e-27, "a={a}");
    }
}

#[test]
fn saddle_residual_is_tiny() {
    for a in [1u64, 4, 9, 30] {
        let y = solve_saddle(a, 128).unwrap();
        let g1 = eval_g1(a, &y).unwrap();
        let slope = eval_g2(a, &y).unwrap().abs();
        assert!(g1.abs() <= (slope * &y).mul_pow2(-(128 - 8)), "a={a}");
    }
}

#[test]
fn invariants_of_saddle_data() {
    for (a, b) in [(1u64, 0i64), (2, -1), (5, 3), (12, 0)] {
        let sd = constants(a, b, 128).unwrap();
        assert!(sd.y.is_positive());
        assert!(sd.growth > HighPrecReal::one(128));
        assert!(sd.curvature.is_negative());
        assert!(sd.prefactor.is_positive());
    }
    // Regression anchor: A > 2a holds for a = 1.
    assert!(constants(1, 0, 128).unwrap().growth.to_f64() > 2.0);
}

/// Central differences in `y`: g' = d/dy g, and -g'' = d/dy g' (the slope used
/// by the Newton step), i.e. g'' = -2 pi * (d/dy g') / (2 pi).
#[test]
fn derivatives_match_central_differences() {
    let h = hp("1e-20");
    for a in [1u64, 3] {
        for y in ["0.05", "0.3", "1.2"] {
            let y = hp(y);
            let up = &y + &h;
            let down = &y - &h;
            let fd_g = (eval_g(a, &up).unwrap() - eval_g(a, &down).unwrap()) / h.mul_pow2(1);
            assert!(relative_difference(&fd_g, &eval_g1(a, &y).unwrap()) < 1e-30);
            let fd_g1 = (eval_g1(a, &up).unwrap() - eval_g1(a, &down).unwrap()) / h.mul_pow2(1);
            assert!(relative_difference(&fd_g1, &-eval_g2(a, &y).unwrap()) < 1e-30);
        }
    }
}

// The last Newton step can round to the current iterate, which sits on a
// bracket end; every working precision must still land on the root.
#[test]
fn every_precision_reaches_the_root() {
    for a in [1u64, 2, 3] {
        let reference = solve_saddle(a, 1024).unwrap();
        for bits in (64..=640).step_by(8) {
            let y = solve_saddle(a, bits).unwrap();
            let rel = relative_difference(&y, &reference);
            assert!(rel < 2f64.powi(8 - bits as i32), "a={a} bits={bits} rel={rel:e}");
        }
    }
}

#[test]
fn precision_doubling_is_stable() {
    for a in [1u64, 2, 7] {
        let lo = constants(a, 2, 96).unwrap();
        let hi = constants(a, 2, 192).unwrap();
        let bound = 2f64.powi(8 - 96);
        assert!(relative_difference(&lo.y, &hi.y) < bound);
        assert!(relative_difference(&lo.growth, &hi.growth) < bound);
        assert!(relative_difference(&lo.prefactor, &hi.prefactor) < bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn g1_strictly_increasing(a in 1u64..=40, y1 in 0.001f64..3.0, frac in 0.01f64..1.0) {
        let y2 = y1 * (1.0 + frac);
        let g_lo = eval_g1(a, &HighPrecReal::from_f64(y1, 128)).unwrap();
        let g_hi = eval_g1(a, &HighPrecReal::from_f64(y2, 128)).unwrap();
        prop_assert!(g_lo < g_hi);
    }

    #[test]
    fn g2_always_negative(a in 1u64..=100, y in 0.0005f64..20.0) {
        prop_assert!(eval_g2(a, &HighPrecReal::from_f64(y, 96)).unwrap().is_negative());
    }

    #[test]
    fn sign_change_brackets(a in 1u64..=100) {
        prop_assert!(eval_g1(a, &HighPrecReal::parse("1e-4", 96).unwrap()).unwrap().is_negative());
        prop_assert!(eval_g1(a, &HighPrecReal::from_i64(10, 96)).unwrap().is_positive());
    }
}
