use sumsq::asymptotic::{compare_table, estimate, estimate_value, LogScaleValue};
use sumsq::saddle::constants;

#[test]
fn first_row_of_the_table() {
    let row = &compare_table(1, 0, &[10], 128).unwrap()[0];
    assert_eq!(row.exact.unwrap().render(6), "1.29064e5");
    assert_eq!(row.estimate.render(8), "1.2964803e5");
    assert!((row.ratio - 0.99550).abs() < 5e-6);
}

#[test]
fn ratio_gap_shrinks_along_powers_of_ten() {
    let rows = compare_table(1, 0, &[10, 100, 1000], 128).unwrap();
    let gaps: Vec<f64> = rows.iter().map(|r| (r.ratio - 1.0).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn shifted_family_rows() {
    let rows = compare_table(2, -1, &[5, 10, 20], 128).unwrap();
    assert_eq!(rows.iter().map(|r| r.target).collect::<Vec<_>>(), vec![9, 19, 39]);
    for r in &rows {
        assert!(r.ratio > 0.5 && r.ratio < 1.5, "n={} ratio={}", r.n, r.ratio);
    }
}

#[test]
fn huge_n_has_no_overflow() {
    let sd = constants(1, 0, 128).unwrap();
    let v = estimate(&sd, 1_000_000_000).unwrap();
    assert!(v.exponent10() > 600_000_000);
    assert!((1.0..10.0).contains(&v.mantissa()));
}

#[test]
fn logscale_matches_direct_product_for_small_n() {
    let sd = constants(3, 2, 128).unwrap();
    for n in [1u64, 7, 33, 50] {
        let direct = estimate_value(&sd, n).unwrap().to_f64();
        let logged = estimate(&sd, n).unwrap();
        let back = LogScaleValue::new(direct, 0).unwrap();
        assert_eq!(logged.render(12), back.render(12));
    }
}
