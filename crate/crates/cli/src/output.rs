use anyhow::Result;
use serde::Serialize;

use entclt::fisher::DeBruijnOutcome;
use entclt::report::fmt_sig;

use crate::commands::{DecomposeReport, ScanRow, VerifyReport};
use crate::config::Format;

pub const SCAN_HEADER: &str = "n,entropy_gap,relative_entropy,smoothed_relative_entropy,solidarity_slack,tv_to_gaussian";
pub const VERIFY_HEADER: &str = "name,n,lhs,rhs,slack,status";
pub const DEBRUIJN_HEADER: &str = "n,quad_points,lhs,rhs,residual,endpoint,integral,pass";

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn lines(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

pub fn scan(rows: &[ScanRow], format: Format) -> Result<String> {
    match format {
        Format::Json => json(&rows),
        Format::Csv => Ok(lines(
            SCAN_HEADER,
            rows.iter().map(|r| {
                format!(
                    "{},{},{},{},{},{}",
                    r.n,
                    fmt_sig(r.entropy_gap),
                    fmt_sig(r.relative_entropy),
                    fmt_sig(r.smoothed_relative_entropy),
                    fmt_sig(r.solidarity_slack),
                    fmt_sig(r.tv_to_gaussian)
                )
            }),
        )),
    }
}

pub fn verify(report: &VerifyReport, format: Format) -> Result<String> {
    match format {
        Format::Json => json(report),
        Format::Csv => {
            let evaluated = report.rows.iter().map(|r| {
                let b = &r.report;
                let status = if b.pass { "pass" } else { "fail" };
                format!("{},{},{},{},{},{}", b.name, r.n, fmt_sig(b.lhs), fmt_sig(b.rhs), fmt_sig(b.slack), status)
            });
            let skipped = report.skipped.iter().map(|s| format!("{},,,,,skipped", s.name));
            Ok(lines(VERIFY_HEADER, evaluated.chain(skipped)))
        }
    }
}

pub fn decompose(report: &DecomposeReport) -> Result<String> {
    json(report)
}

#[derive(Serialize)]
struct DeBruijnJson<'a> {
    #[serde(flatten)]
    outcome: &'a DeBruijnOutcome,
    residual: f64,
}

pub fn debruijn(outcome: &DeBruijnOutcome, format: Format) -> Result<String> {
    let residual = (outcome.lhs - outcome.rhs).abs();
    match format {
        Format::Json => json(&DeBruijnJson { outcome, residual }),
        Format::Csv => Ok(lines(
            DEBRUIJN_HEADER,
            [format!(
                "{},{},{},{},{},{},{},{}",
                outcome.n,
                outcome.quad_points,
                fmt_sig(outcome.lhs),
                fmt_sig(outcome.rhs),
                fmt_sig(residual),
                fmt_sig(outcome.endpoint),
                fmt_sig(outcome.integral),
                outcome.report.pass
            )],
        )),
    }
}
