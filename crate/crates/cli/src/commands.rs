use std::process::ExitCode;

use num_bigint::BigInt;
use serde_json::{json, Value};
use sumsq::asymptotic::{
    compare_table_with, estimate, exact_to_logscale, stable_constants, ComparisonRow, LogScaleValue,
};
use sumsq::oracle::{brute_force_rk, jacobi_r4};
use sumsq::qseries::r_k_with;
use sumsq::saddle::{constants as saddle_constants, solve_saddle};
use sumsq::{HighPrecReal, Result};

use crate::{ConstantsArgs, ExactArgs, Format, OracleCheckArgs, SaddleArgs, TableArgs, EXIT_VERIFY_FAILED};

/// Significant digits shown for mantissas in the table.
const TABLE_DIGITS: usize = 10;

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("json values always serialise")
    );
}

/// Digits a `bits`-bit value can honestly carry, keeping a few bits in reserve.
fn supported_digits(bits: usize, wanted: usize) -> usize {
    let max = ((bits.saturating_sub(8)) as f64 * std::f64::consts::LOG10_2).floor() as usize;
    if wanted > max {
        eprintln!("note: {bits} bits support about {max} significant digits; printing {max}");
    }
    wanted.clamp(1, max.max(1))
}

fn num(x: &HighPrecReal, digits: usize) -> String {
    x.to_decimal_string(digits)
}

pub fn exact(args: &ExactArgs) -> Result<ExitCode> {
    let value = r_k_with(args.k, args.m, args.convolution.into());
    let logscale = if value > BigInt::from(0) {
        Some(exact_to_logscale(&value)?)
    } else {
        None
    };
    match args.format {
        Format::Text => {
            println!("{value}");
            if args.logscale {
                match logscale {
                    Some(v) => println!("{}", v.render(TABLE_DIGITS)),
                    None => println!("0"),
                }
            }
        }
        Format::Csv => {
            println!("k,m,value,mantissa,exp10");
            let (m, e) = logscale
                .map(|v| v.rounded(TABLE_DIGITS))
                .unwrap_or(("0".into(), 0));
            println!("{},{},{value},{m},{e}", args.k, args.m);
        }
        Format::Json => {
            let (m, e) = logscale
                .map(|v| v.rounded(TABLE_DIGITS))
                .unwrap_or(("0".into(), 0));
            print_json(&json!({
                "k": args.k,
                "m": args.m,
                "value": value.to_string(),
                "mantissa": m,
                "exp10": e,
            }));
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn constants(args: &ConstantsArgs) -> Result<ExitCode> {
    let bits = args.precision_bits as usize;
    let digits = supported_digits(bits, args.digits);
    let sd = saddle_constants(args.a, args.b, bits)?;
    let (y, a, b) = (
        num(&sd.y, digits),
        num(&sd.growth, digits),
        num(&sd.prefactor, digits),
    );
    let g2 = num(&sd.curvature, digits);
    match args.format {
        Format::Text => {
            println!("y  = {y}");
            println!("A  = {a}");
            println!("B  = {b}");
            println!("g2 = {g2}");
            println!("tail bound = {}", sd.tail_bound.to_sci_string(3));
        }
        Format::Csv => {
            println!("a,b,precision_bits,y,A,B,g2");
            println!("{},{},{bits},{y},{a},{b},{g2}", args.a, args.b);
        }
        Format::Json => print_json(&json!({
            "a": args.a,
            "b": args.b,
            "precision_bits": bits,
            "y": y,
            "A": a,
            "B": b,
            "g2": g2,
            "tail_bound": sd.tail_bound.to_sci_string(3),
        })),
    }
    Ok(ExitCode::SUCCESS)
}

pub fn saddle(args: &SaddleArgs) -> Result<ExitCode> {
    let bits = args.precision_bits as usize;
    let digits = supported_digits(bits, args.digits);
    let y = num(&solve_saddle(args.a, bits)?, digits);
    match args.format {
        Format::Text => println!("{y}"),
        Format::Csv => println!("a,y\n{},{y}", args.a),
        Format::Json => print_json(&json!({ "a": args.a, "precision_bits": bits, "y": y })),
    }
    Ok(ExitCode::SUCCESS)
}

/// One table line; `row` is `None` when n is above the exact-count limit.
struct Line {
    n: u64,
    estimate: LogScaleValue,
    row: Option<ComparisonRow>,
}

impl Line {
    fn flagged(&self) -> bool {
        self.row.as_ref().is_some_and(|r| r.is_flagged())
    }

    /// Exact mantissa and exponent; zero counts print as `0,0`, skipped rows as empty fields.
    fn exact_parts(&self) -> (String, String) {
        match &self.row {
            None => (String::new(), String::new()),
            Some(r) => match r.exact {
                Some(v) => {
                    let (m, e) = v.rounded(TABLE_DIGITS);
                    (m, e.to_string())
                }
                None => ("0".into(), "0".into()),
            },
        }
    }

    fn ratio(&self) -> String {
        self.row
            .as_ref()
            .map(|r| format!("{:.10}", r.ratio))
            .unwrap_or_default()
    }
}

pub fn table(args: &TableArgs) -> Result<ExitCode> {
    let sd = stable_constants(
        args.a,
        args.b,
        &args.n,
        args.precision_bits as usize,
        TABLE_DIGITS,
    )?;
    let small: Vec<u64> = args.n.iter().copied().filter(|&n| n <= args.exact_max).collect();
    let mut rows = if small.is_empty() {
        Vec::new()
    } else {
        compare_table_with(&sd, &small, args.convolution.into())?
    }
    .into_iter();
    let mut lines = Vec::with_capacity(args.n.len());
    for &n in &args.n {
        let row = if n <= args.exact_max { rows.next() } else { None };
        lines.push(Line {
            n,
            estimate: estimate(&sd, n)?,
            row,
        });
    }
    for line in &lines {
        if line.flagged() {
            eprintln!(
                "warning: n={}: r_n(an+b) = 0, ratio carries no information",
                line.n
            );
        } else if line.row.is_none() {
            eprintln!(
                "note: n={} exceeds --exact-max {}, exact count skipped",
                line.n, args.exact_max
            );
        }
    }
    if args.plot_data {
        println!("n,ratio");
        for line in lines.iter().filter(|l| l.row.is_some() && !l.flagged()) {
            println!("{},{}", line.n, line.ratio());
        }
        return Ok(ExitCode::SUCCESS);
    }
    match args.format {
        Format::Csv => {
            println!("n,exact_mantissa,exact_exp10,estimate_mantissa,estimate_exp10,ratio");
            for line in &lines {
                let (em, ee) = line.exact_parts();
                let (sm, se) = line.estimate.rounded(TABLE_DIGITS);
                println!("{},{em},{ee},{sm},{se},{}", line.n, line.ratio());
            }
        }
        Format::Json => {
            let out: Vec<Value> = lines
                .iter()
                .map(|line| {
                    let (em, ee) = line.exact_parts();
                    let (sm, se) = line.estimate.rounded(TABLE_DIGITS);
                    let present = line.row.is_some();
                    json!({
                        "n": line.n,
                        "exact_mantissa": present.then_some(em),
                        "exact_exp10": present.then(|| ee.parse::<i64>().unwrap_or(0)),
                        "estimate_mantissa": sm,
                        "estimate_exp10": se,
                        "ratio": present.then(|| line.ratio()),
                        "flagged": line.flagged(),
                    })
                })
                .collect();
            print_json(&json!({
                "a": args.a,
                "b": args.b,
                "precision_bits": sd.precision_bits,
                "A": sd.growth.to_decimal_string(TABLE_DIGITS + 5),
                "B": sd.prefactor.to_decimal_string(TABLE_DIGITS + 5),
                "rows": out,
            }));
        }
        Format::Text => {
            println!(
                "A = {}   B = {}",
                sd.growth.to_decimal_string(TABLE_DIGITS),
                sd.prefactor.to_decimal_string(TABLE_DIGITS)
            );
            println!(
                "{:>10}  {:>22}  {:>22}  {:>13}",
                "n", "r_n(an+b)", "B A^n / sqrt(n)", "ratio"
            );
            for line in &lines {
                let exact = match &line.row {
                    None => "-".to_string(),
                    Some(r) => r
                        .exact
                        .map(|v| v.render(TABLE_DIGITS))
                        .unwrap_or_else(|| "0".into()),
                };
                let ratio = if line.flagged() {
                    "flagged".to_string()
                } else if line.row.is_none() {
                    "-".to_string()
                } else {
                    line.ratio()
                };
                println!(
                    "{:>10}  {:>22}  {:>22}  {:>13}",
                    line.n,
                    exact,
                    line.estimate.render(TABLE_DIGITS),
                    ratio
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn oracle_check(args: &OracleCheckArgs) -> Result<ExitCode> {
    let series = r_k_with(args.k as u64, args.m as i64, Default::default());
    let brute = brute_force_rk(args.k, args.m);
    let jacobi = if args.k == 4 && args.m > 0 {
        Some(jacobi_r4(args.m)?)
    } else {
        None
    };
    let ok = series == brute && jacobi.as_ref().is_none_or(|j| *j == series);
    match args.format {
        Format::Text => {
            println!("series      {series}");
            println!("brute force {brute}");
            if let Some(j) = &jacobi {
                println!("jacobi      {j}");
            }
            println!("{}", if ok { "agree" } else { "MISMATCH" });
        }
        Format::Csv => {
            println!("k,m,series,brute_force,jacobi,agree");
            let j = jacobi.as_ref().map(|j| j.to_string()).unwrap_or_default();
            println!("{},{},{series},{brute},{j},{ok}", args.k, args.m);
        }
        Format::Json => print_json(&json!({
            "k": args.k,
            "m": args.m,
            "series": series.to_string(),
            "brute_force": brute.to_string(),
            "jacobi": jacobi.map(|j| j.to_string()),
            "agree": ok,
        })),
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    })
}
