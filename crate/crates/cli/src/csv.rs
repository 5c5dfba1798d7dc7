//! Plain CSV emission. Floats use Rust's shortest round-trip exponent form,
//! which is locale-independent and parses back to the same bits.

use hscfr::solver::ConvergenceRecord;
use std::fmt::Write;

pub const CONVERGENCE_HEADER: &str = "iteration,exploitability,elapsed_ms";

pub fn float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:e}")
    }
}

/// Convergence curve in the bench format. With `timing` off, `elapsed_ms` is
/// written as zero so that reruns produce identical bytes.
pub fn convergence(records: &[ConvergenceRecord], timing: bool) -> String {
    let mut out = String::with_capacity(32 * (records.len() + 1));
    out.push_str(CONVERGENCE_HEADER);
    out.push('\n');
    for r in records {
        let elapsed = if timing { r.elapsed_ms } else { 0.0 };
        writeln!(out, "{},{},{}", r.iteration, float(r.exploitability), float(elapsed)).unwrap();
    }
    out
}

/// Parses a convergence CSV back into records.
pub fn parse_convergence(text: &str) -> Option<Vec<ConvergenceRecord>> {
    let mut lines = text.lines();
    if lines.next()? != CONVERGENCE_HEADER {
        return None;
    }
    lines
        .map(|line| {
            let mut cols = line.split(',');
            let record = ConvergenceRecord {
                iteration: cols.next()?.parse().ok()?,
                exploitability: cols.next()?.parse().ok()?,
                elapsed_ms: cols.next()?.parse().ok()?,
            };
            cols.next().is_none().then_some(record)
        })
        .collect()
}
