use std::process::{Command, Output};

fn sumsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumsq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = sumsq(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

#[test]
fn exact_small_values() {
    assert_eq!(ok(&["exact", "--k", "10", "--m", "10"]).trim(), "129064");
    assert_eq!(ok(&["exact", "--k", "1", "--m", "3"]).trim(), "0");
    assert_eq!(ok(&["exact", "--k", "4", "--m", "12"]).trim(), "96");
    assert_eq!(ok(&["exact", "--k", "3", "--m", "-1"]).trim(), "0");
    assert_eq!(ok(&["exact", "--k", "0", "--m", "0"]).trim(), "1");
}

#[test]
fn exact_json_has_string_value() {
    let out = ok(&["exact", "--k", "100", "--m", "100", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        v["value"],
        "1184101051443285881265166362742300236491599013268534224381864"
    );
    assert_eq!(v["exp10"], 60);
    assert_eq!(v["mantissa"], "1.184101051");
}

#[test]
fn constants_json() {
    let out = ok(&[
        "constants",
        "--a",
        "1",
        "--b",
        "0",
        "--format",
        "json",
        "--digits",
        "20",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["y"], "0.079577454736684096254");
    assert_eq!(v["A"], "4.1327313762349399630");
    assert_eq!(v["B"], "0.28209420367239511579");
    assert_eq!(v["precision_bits"], 128);
}

#[test]
fn constants_text_and_negative_shift() {
    let out = ok(&["constants", "--a", "2", "--b", "-1"]);
    assert!(out.starts_with("y  = "));
    assert!(out.contains("\nA  = "));
}

#[test]
fn saddle_only() {
    let out = ok(&["saddle", "--a", "1", "--digits", "14"]);
    assert_eq!(out.trim(), "0.079577454736684");
}

#[test]
fn table_csv_matches_reference_rows() {
    let out = ok(&[
        "table",
        "--a",
        "1",
        "--b",
        "0",
        "--n",
        "10,100,1000",
        "--format",
        "csv",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "n,exact_mantissa,exact_exp10,estimate_mantissa,estimate_exp10,ratio"
    );
    assert_eq!(lines[1], "10,1.290640000,5,1.296480345,5,0.9954952306");
    assert_eq!(lines[2], "100,1.184101051,60,1.186074334,60,0.9983362912");
    assert_eq!(lines[3], "1000,1.539924246,614,1.540180487,614,0.9998336291");
    assert_eq!(lines.len(), 4);
}

#[test]
fn table_preserves_input_order_and_skips_large_exact() {
    let out = ok(&["table", "--a", "1", "--n", "100000,10", "--format", "csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[1], "100000,,,4.657357792,61620,");
    assert!(lines[2].starts_with("10,1.290640000,5,"));
}

#[test]
fn table_flags_zero_counts() {
    let out = sumsq(&["table", "--a", "1", "--b", "-3", "--n", "1,5", "--format", "json"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("n=1"));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"][0]["flagged"], true);
    assert_eq!(v["rows"][0]["exact_mantissa"], "0");
    assert_eq!(v["rows"][1]["flagged"], false);
    assert_eq!(v["rows"][1]["exact_mantissa"], "4.000000000");
}

#[test]
fn table_plot_data() {
    let out = ok(&["table", "--a", "1", "--n", "10,100", "--plot-data"]);
    assert_eq!(out, "n,ratio\n10,0.9954952306\n100,0.9983362912\n");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "table", "--a", "3", "--b", "2", "--n", "5,20,40", "--format", "json",
    ];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["table", "--a", "0", "--n", "10"][..],
        &["table", "--a", "1"][..],
        &["table", "--a", "1", "--n", "0"][..],
        &["verify", "--suite", "nope"][..],
        &["constants", "--a", "1", "--precision-bits", "16"][..],
        &["constants", "--a", "1", "--format", "xml"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(sumsq(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(sumsq(&["--help"]).status.code(), Some(0));
    assert_eq!(sumsq(&["table", "--help"]).status.code(), Some(0));
}

#[test]
fn verify_oracle_passes() {
    let out = ok(&["verify", "--suite", "oracle"]);
    assert!(out.lines().all(|l| !l.starts_with("FAIL")));
    assert!(out.trim_end().ends_with("8 of 8 checks passed"));
}

#[test]
fn oracle_check_agrees() {
    let out = ok(&["oracle-check", "--k", "4", "--m", "30", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["series"], "576");
    assert_eq!(v["jacobi"], "576");
    assert_eq!(v["agree"], true);
    let out = ok(&["oracle-check", "--k", "7", "--m", "40"]);
    assert!(out.trim_end().ends_with("agree"));
}
