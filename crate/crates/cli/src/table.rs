use std::io::Write;

use osinv_core::invariants::{invariant_report, pi1_fundamental, sweep, upper_half_slope, Pi1Breakdown, Slope};
use osinv_core::{InvariantReport, SpaceDescriptor};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliResult;
use crate::VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub const TABLE_HEADER: [&str; 6] = ["n", "phi_c", "phi_r", "ex", "proj", "pi1"];

pub const PI1_HEADER: [&str; 13] = [
    "n",
    "pi1",
    "pi1_sq_over_n_log",
    "mp_lambda1",
    "mp_lambda2",
    "mp_lambda3",
    "mp_s_break",
    "mp_t_break",
    "pm_lambda1",
    "pm_lambda2",
    "pm_lambda3",
    "pm_s_break",
    "pm_t_break",
];

/// Ten significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.9e}")
}

fn slope_of(points: &[(f64, f64)]) -> CliResult<Option<Slope>> {
    if points.len() < 3 {
        return Ok(None);
    }
    Ok(Some(upper_half_slope(points)?))
}

fn slope_cell(s: Option<Slope>) -> String {
    s.map(|s| num(s.slope)).unwrap_or_default()
}

#[derive(Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    descriptors: Vec<(&'a str, serde_json::Value)>,
    grid: &'a str,
}

fn metadata_line(meta: &Metadata) -> String {
    let parts: Vec<String> = meta
        .descriptors
        .iter()
        .map(|(role, d)| format!("{role}={d}"))
        .collect();
    format!("# {} {} {} grid={}\n", meta.tool, meta.version, parts.join(" "), meta.grid)
}

fn spec_json(d: &SpaceDescriptor) -> serde_json::Value {
    serde_json::to_value(d.to_spec()).expect("descriptor specs serialize")
}

fn write_csv(out: &mut dyn Write, meta: &Metadata, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    out.write_all(metadata_line(meta).as_bytes())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct TableRow {
    n: f64,
    phi_c: f64,
    phi_r: f64,
    ex: f64,
    proj: f64,
    pi1: f64,
}

#[derive(Serialize)]
pub struct TableSlopes {
    pub phi_c: Option<Slope>,
    pub phi_r: Option<Slope>,
    pub ex: Option<Slope>,
    pub proj: Option<Slope>,
    pub pi1: Option<Slope>,
}

#[derive(Serialize)]
struct JsonTable<'a, R: Serialize, S: Serialize> {
    metadata: &'a Metadata<'a>,
    rows: Vec<R>,
    slopes: S,
}

/// Invariants of `space` along the grid, slopes from the upper half.
pub fn invariant_table(space: &SpaceDescriptor, grid: &[f64]) -> CliResult<(Vec<InvariantReport>, TableSlopes)> {
    let reports = if grid.len() >= 3 {
        sweep(space, None, grid)?.reports
    } else {
        grid.iter().map(|&n| invariant_report(space, None, n)).collect::<Result<_, _>>()?
    };
    let col = |pick: fn(&InvariantReport) -> f64| {
        slope_of(&reports.iter().map(|r| (r.n, pick(r))).collect::<Vec<_>>())
    };
    let slopes = TableSlopes {
        phi_c: col(|r| r.phi_c)?,
        phi_r: col(|r| r.phi_r)?,
        ex: col(|r| r.ex)?,
        proj: col(|r| r.proj)?,
        pi1: col(|r| r.pi1)?,
    };
    Ok((reports, slopes))
}

pub fn write_table(
    out: &mut dyn Write,
    space: &SpaceDescriptor,
    grid_arg: &str,
    grid: &[f64],
    format: Format,
) -> CliResult<()> {
    let (reports, slopes) = invariant_table(space, grid)?;
    log::info!("table for {} over {} points", space.label(), grid.len());
    let meta = Metadata { tool: "osinv", version: VERSION, descriptors: vec![("space", spec_json(space))], grid: grid_arg };
    match format {
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![format!("{}", r.n as u64), num(r.phi_c), num(r.phi_r), num(r.ex), num(r.proj), num(r.pi1)]
                })
                .collect();
            rows.push(vec![
                "slope".into(),
                slope_cell(slopes.phi_c),
                slope_cell(slopes.phi_r),
                slope_cell(slopes.ex),
                slope_cell(slopes.proj),
                slope_cell(slopes.pi1),
            ]);
            write_csv(out, &meta, &TABLE_HEADER, &rows)
        }
        Format::Json => {
            let rows = reports
                .iter()
                .map(|r| TableRow { n: r.n, phi_c: r.phi_c, phi_r: r.phi_r, ex: r.ex, proj: r.proj, pi1: r.pi1 })
                .collect();
            write_json(out, &JsonTable { metadata: &meta, rows, slopes })
        }
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
    out.write_all(b"\n")?;
    Ok(())
}

#[derive(Serialize)]
struct Pi1Slopes {
    pub pi1: Option<Slope>,
}

/// `π₁ᵒ(id_n : E → F)` with both quadrant decompositions along the grid.
pub fn pi1_rows(domain: &SpaceDescriptor, codomain: &SpaceDescriptor, grid: &[f64]) -> CliResult<Vec<Pi1Breakdown>> {
    Ok(grid.par_iter().map(|&n| pi1_fundamental(domain, codomain, n)).collect::<Result<_, _>>()?)
}

pub fn write_pi1(
    out: &mut dyn Write,
    domain: &SpaceDescriptor,
    codomain: &SpaceDescriptor,
    grid_arg: &str,
    grid: &[f64],
    format: Format,
) -> CliResult<()> {
    let rows = pi1_rows(domain, codomain, grid)?;
    let slope = slope_of(&rows.iter().map(|r| (r.n, r.pi1)).collect::<Vec<_>>())?;
    let meta = Metadata {
        tool: "osinv",
        version: VERSION,
        descriptors: vec![("domain", spec_json(domain)), ("codomain", spec_json(codomain))],
        grid: grid_arg,
    };
    match format {
        Format::Csv => {
            let mut cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let (a, b) = (&r.minus_plus, &r.plus_minus);
                    vec![
                        format!("{}", r.n as u64),
                        num(r.pi1),
                        num(r.pi1 * r.pi1 / (r.n * (r.n + 1.0).ln())),
                        num(a.lambda1),
                        num(a.lambda2),
                        num(a.lambda3),
                        num(a.s_break),
                        num(a.t_break),
                        num(b.lambda1),
                        num(b.lambda2),
                        num(b.lambda3),
                        num(b.s_break),
                        num(b.t_break),
                    ]
                })
                .collect();
            let mut footer = vec![String::new(); PI1_HEADER.len()];
            footer[0] = "slope".into();
            footer[1] = slope_cell(slope);
            cells.push(footer);
            write_csv(out, &meta, &PI1_HEADER, &cells)
        }
        Format::Json => write_json(out, &JsonTable { metadata: &meta, rows, slopes: Pi1Slopes { pi1: slope } }),
    }
}
