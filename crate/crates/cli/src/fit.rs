use std::io::{Read, Write};

use osinv_core::fit_loglog_slope;
use osinv_core::invariants::upper_half_start;

use crate::error::{CliError, CliResult};
use crate::table::num;

/// Fitted slope of one column against `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnFit {
    pub column: String,
    pub slope: f64,
    pub r2: f64,
    pub points: usize,
}

/// `(n, column)` pairs of a table; comment lines and the slope footer are skipped.
pub fn read_column(input: impl Read, column: &str) -> CliResult<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Parse(format!("no column \"{name}\" in header {:?}", headers.iter().collect::<Vec<_>>())))
    };
    let (ni, ci) = (find("n")?, find(column)?);
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.get(0) == Some("slope") {
            continue;
        }
        let parse = |i: usize| {
            rec.get(i)
                .and_then(|v| v.trim().parse::<f64>().ok())
                .ok_or_else(|| CliError::Parse(format!("row {}: field {} is not a number", line + 1, &headers[i])))
        };
        out.push((parse(ni)?, parse(ci)?));
    }
    Ok(out)
}

pub fn fit_column(points: &[(f64, f64)], column: &str, upper_half: bool) -> CliResult<ColumnFit> {
    let used = if upper_half { &points[upper_half_start(points.len())..] } else { points };
    let (slope, r2) = fit_loglog_slope(used)?;
    Ok(ColumnFit { column: column.to_string(), slope, r2, points: used.len() })
}

pub fn write_fit(out: &mut dyn Write, fit: &ColumnFit) -> CliResult<()> {
    writeln!(out, "column,slope,r2,points")?;
    writeln!(out, "{},{},{},{}", fit.column, num(fit.slope), num(fit.r2), fit.points)?;
    Ok(())
}
