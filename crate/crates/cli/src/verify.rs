//! `verify` suites: the series against independent oracles, and the series
//! against numeric contour extraction.

use std::process::ExitCode;

use sumsq::oracle::{brute_force_rk, jacobi_r4};
use sumsq::qseries::r_k;
use sumsq::quadrature::{default_points, TrapezoidSampler};
use sumsq::{HighPrecReal, Result};

use crate::{Suite, EXIT_VERIFY_FAILED};

const QUADRATURE_TOLERANCE: f64 = 1e-6;
const HEIGHTS: [&str; 3] = ["0.1", "0.2", "0.4"];

struct Report {
    failures: usize,
    checks: usize,
}

impl Report {
    fn record(&mut self, ok: bool, line: String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
        }
        println!("{}  {line}", if ok { "PASS" } else { "FAIL" });
    }
}

fn oracle_suite(report: &mut Report) {
    for k in 0..=6u32 {
        let mismatches: Vec<u64> = (0..=30u64)
            .filter(|&m| r_k(k as u64, m as i64) != brute_force_rk(k, m))
            .collect();
        report.record(
            mismatches.is_empty(),
            format!("oracle: r_{k}(m) = brute force for m <= 30; mismatches at {mismatches:?}"),
        );
    }
    let mismatches: Vec<u64> = (1..=200u64)
        .filter(|&m| jacobi_r4(m).map_or(true, |j| j != r_k(4, m as i64)))
        .collect();
    report.record(
        mismatches.is_empty(),
        format!("oracle: r_4(m) = 8 sigma*(m) for 1 <= m <= 200; mismatches at {mismatches:?}"),
    );
}

fn quadrature_suite(report: &mut Report, bits: usize) -> Result<()> {
    let m_max = 24u64;
    for k in 0..=12u64 {
        let points = default_points(k, m_max);
        let mut worst: f64 = 0.0;
        let mut worst_m = 0;
        for y in HEIGHTS {
            let y = HighPrecReal::parse(y, bits)?;
            let sampler = TrapezoidSampler::new(k, m_max, &y, points, bits)?;
            for (m, c) in sampler.coefficients().into_iter().enumerate() {
                let exact = HighPrecReal::from_bigint(&r_k(k, m as i64), bits);
                let err = (&c.re - &exact).abs();
                let rel = if exact.is_zero() {
                    err.to_f64()
                } else {
                    (err / exact).to_f64()
                };
                if rel > worst {
                    worst = rel;
                    worst_m = m;
                }
            }
        }
        report.record(
            worst <= QUADRATURE_TOLERANCE,
            format!(
                "quadrature: k={k}, m <= {m_max}, {points} points, y in {HEIGHTS:?}: \
                 max relative error {worst:.2e} (at m={worst_m}, tolerance {QUADRATURE_TOLERANCE:e})"
            ),
        );
    }
    Ok(())
}

pub fn run(suite: Suite, bits: usize) -> Result<ExitCode> {
    let mut report = Report {
        failures: 0,
        checks: 0,
    };
    if matches!(suite, Suite::Oracle | Suite::All) {
        oracle_suite(&mut report);
    }
    if matches!(suite, Suite::Quadrature | Suite::All) {
        quadrature_suite(&mut report, bits)?;
    }
    println!(
        "{} of {} checks passed",
        report.checks - report.failures,
        report.checks
    );
    Ok(if report.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    })
}
