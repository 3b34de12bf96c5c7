//! Exactness constants, projection constants and the completely 1-summing
//! fundamental sequence of regular spaces, computed from the region
//! integrals over the weight quadrants.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::monotone_fn::{fit_loglog_slope, MonotoneFn};
use crate::power::power_integral;
use crate::spaces::{canonical_weight, SpaceDescriptor};

/// The three region contributions of one mixed quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadrant {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    /// `s_n = Φ_a(n)`.
    pub s_break: f64,
    /// `t_n = Φ_b(n)`.
    pub t_break: f64,
}

impl Quadrant {
    pub fn total(&self) -> f64 {
        self.lambda1 + self.lambda2 + self.lambda3
    }
}

/// `∫_1^n e_a(u) Φ_a(u) Φ_b(u) / u² du`, exact on each common power segment.
///
/// Equals `∫_1^{Φ_a(n)} Φ_b(Φ_a⁻¹(t)) / Φ_a⁻¹(t) dt`.
pub fn cross_integral(a: &MonotoneFn, b: &MonotoneFn, n: f64) -> Result<f64> {
    if n <= 1.0 {
        return Ok(0.0);
    }
    let mut breaks: Vec<f64> = vec![1.0, n];
    breaks.extend(a.knots().iter().chain(b.knots()).copied().filter(|&k| k > 1.0 && k < n));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = (lo * hi).sqrt();
        let (ea, eb) = (a.exponent_at(mid), b.exponent_at(mid));
        if ea == 0.0 {
            continue;
        }
        let v = ea * a.value(lo) * b.value(lo) / (lo * lo);
        total += power_integral(v, lo, ea + eb - 2.0, lo, hi)?;
    }
    Ok(total)
}

/// Region values of the quadrant with column-side function `Φ_a` and
/// row-side function `Φ_b`; the unit square is shared evenly by λ₁ and λ₂.
pub fn quadrant(phi_a: &MonotoneFn, phi_b: &MonotoneFn, n: f64) -> Result<Quadrant> {
    let wa = canonical_weight(phi_a)?;
    let wb = canonical_weight(phi_b)?;
    let s_n = phi_a.value(n);
    let t_n = phi_b.value(n);
    let ha = wa.integral(s_n, f64::INFINITY)?;
    let hb = wb.integral(t_n, f64::INFINITY)?;
    Ok(Quadrant {
        lambda1: n * (0.5 + cross_integral(phi_a, phi_b, n)? + t_n * ha),
        lambda2: n * (0.5 + cross_integral(phi_b, phi_a, n)? + s_n * hb),
        lambda3: n * n * ha * hb,
        s_break: s_n,
        t_break: t_n,
    })
}

/// `φ_n` for `id_n : E → F` with its quadrant decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pi1Breakdown {
    pub n: f64,
    pub pi1: f64,
    /// Quadrant `(−+)`: `(Φ_{c,E*}, Φ_{r,F})`.
    pub minus_plus: Quadrant,
    /// Quadrant `(+−)`: `(Φ_{r,E*}, Φ_{c,F})`.
    pub plus_minus: Quadrant,
}

fn check_n(n: f64) -> Result<()> {
    if n >= 1.0 && n.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("dimension n = {n}")))
    }
}

pub fn pi1_fundamental(e: &SpaceDescriptor, f: &SpaceDescriptor, n: f64) -> Result<Pi1Breakdown> {
    check_n(n)?;
    e.require_regular()?;
    f.require_regular()?;
    let es = e.dual();
    let minus_plus = quadrant(es.phi_c(), f.phi_r(), n)?;
    let plus_minus = quadrant(es.phi_r(), f.phi_c(), n)?;
    let sq = 2.0 * n + minus_plus.total() + plus_minus.total();
    Ok(Pi1Breakdown { n, pi1: sq.sqrt(), minus_plus, plus_minus })
}

/// The two halves of the exactness integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactnessBreakdown {
    pub ex: f64,
    pub i_plus: f64,
    pub i_minus: f64,
    /// Where `Φ_{r,F*}(n) w_r` meets `Φ_{c,F*}(n)`, if it does.
    pub s_break: Option<f64>,
    /// Where `Φ_{c,F*}(n) w̃_c` meets `Φ_{r,F*}(n)`, if it does.
    pub t_break: Option<f64>,
}

/// `∫_0^∞ min(top, scale·w)` with `w = 1/Φ⁻¹` held at 1 on (0, 1].
fn min_integral(phi: &MonotoneFn, top: f64, scale: f64) -> Result<(f64, Option<f64>)> {
    let w = canonical_weight(phi)?;
    let ratio = top / scale;
    if ratio >= 1.0 {
        return Ok((scale * w.integral(0.0, f64::INFINITY)?, None));
    }
    let b = phi.value(1.0 / ratio);
    Ok((top * b + scale * w.integral(b, f64::INFINITY)?, Some(b)))
}

pub fn exactness_breakdown(f: &SpaceDescriptor, n: f64) -> Result<ExactnessBreakdown> {
    check_n(n)?;
    f.require_regular()?;
    let fs = f.dual();
    let a = fs.phi_c().value(n);
    let b = fs.phi_r().value(n);
    let (i_plus, s_break) = min_integral(f.phi_r(), a, b)?;
    let (i_minus, t_break) = min_integral(f.phi_c(), b, a)?;
    Ok(ExactnessBreakdown { ex: (i_plus + i_minus).sqrt(), i_plus, i_minus, s_break, t_break })
}

pub fn exactness(f: &SpaceDescriptor, n: f64) -> Result<f64> {
    Ok(exactness_breakdown(f, n)?.ex)
}

/// `n / φ_n` for `id_n : F → F`.
pub fn projection(f: &SpaceDescriptor, n: f64) -> Result<f64> {
    Ok(n / pi1_fundamental(f, f, n)?.pi1)
}

/// Closed-form exactness estimate with power extension of `Φ` below 1.
pub fn exactness_display(f: &SpaceDescriptor, n: f64) -> Result<f64> {
    check_n(n)?;
    f.require_regular()?;
    let c = f.phi_c().power_extended_below();
    let r = f.phi_r().power_extended_below();
    let (cn, rn) = (c.value(n), r.value(n));
    Ok((n / cn * r.value(cn / rn) + n / rn * c.value(rn / cn)).sqrt())
}

fn four_cross(a1: &MonotoneFn, b1: &MonotoneFn, a2: &MonotoneFn, b2: &MonotoneFn, n: f64) -> Result<f64> {
    Ok(cross_integral(a1, b1, n)? + cross_integral(a2, b2, n)? + cross_integral(b1, a1, n)? + cross_integral(b2, a2, n)?)
}

/// Closed-form projection estimate built from the fundamental functions of
/// `F` and `F*`.
pub fn projection_display(f: &SpaceDescriptor, n: f64) -> Result<f64> {
    check_n(n)?;
    f.require_regular()?;
    let fs = f.dual();
    let corner = 1.0 / (f.phi_c().value(n) * fs.phi_r().value(n)) + 1.0 / (f.phi_r().value(n) * fs.phi_c().value(n));
    let mixed = four_cross(fs.phi_c(), f.phi_r(), fs.phi_r(), f.phi_c(), n)?;
    Ok(1.0 / (corner.sqrt() + (mixed / n).sqrt()))
}

/// Closed-form `φ_n` estimate built from the fundamental functions of `E*` and `F`.
pub fn pi1_display(e: &SpaceDescriptor, f: &SpaceDescriptor, n: f64) -> Result<f64> {
    check_n(n)?;
    e.require_regular()?;
    f.require_regular()?;
    let es = e.dual();
    let corner = es.phi_c().value(n) * f.phi_r().value(n) + es.phi_r().value(n) * f.phi_c().value(n);
    let mixed = four_cross(es.phi_c(), f.phi_r(), es.phi_r(), f.phi_c(), n)?;
    Ok((corner + n * mixed).sqrt())
}

/// All invariants at one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantReport {
    pub n: f64,
    pub phi_c: f64,
    pub phi_r: f64,
    pub ex: f64,
    pub proj: f64,
    pub pi1: f64,
    pub exactness: ExactnessBreakdown,
    pub pi1_parts: Pi1Breakdown,
}

pub fn invariant_report(e: &SpaceDescriptor, f: Option<&SpaceDescriptor>, n: f64) -> Result<InvariantReport> {
    let exactness = exactness_breakdown(e, n)?;
    let proj = projection(e, n)?;
    let pi1_parts = pi1_fundamental(e, f.unwrap_or(e), n)?;
    Ok(InvariantReport {
        n,
        phi_c: e.phi_c().value(n),
        phi_r: e.phi_r().value(n),
        ex: exactness.ex,
        proj,
        pi1: pi1_parts.pi1,
        exactness,
        pi1_parts,
    })
}

/// Fitted log-log slope and its `r²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Slope {
    pub slope: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSlopes {
    pub ex: Slope,
    pub proj: Slope,
    pub pi1: Slope,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub reports: Vec<InvariantReport>,
    pub slopes: SweepSlopes,
}

/// Index where the upper half of an `len`-point grid starts (at least three points kept).
pub fn upper_half_start(len: usize) -> usize {
    (len / 2).min(len.saturating_sub(3))
}

/// Slope over the upper half of `(n, y)` points.
pub fn upper_half_slope(points: &[(f64, f64)]) -> Result<Slope> {
    let (slope, r2) = fit_loglog_slope(&points[upper_half_start(points.len())..])?;
    Ok(Slope { slope, r2 })
}

/// Reports over `n_grid` with slopes fitted on the upper half of the grid.
/// `pi1` is taken for `id_n : E → F` (or `E → E` without `F`).
pub fn sweep(e: &SpaceDescriptor, f: Option<&SpaceDescriptor>, n_grid: &[f64]) -> Result<Sweep> {
    if n_grid.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n_grid.len() });
    }
    let reports: Vec<InvariantReport> =
        n_grid.par_iter().map(|&n| invariant_report(e, f, n)).collect::<Result<_>>()?;
    let fit = |pick: fn(&InvariantReport) -> f64| {
        upper_half_slope(&reports.iter().map(|r| (r.n, pick(r))).collect::<Vec<_>>())
    };
    let slopes = SweepSlopes { ex: fit(|r| r.ex)?, proj: fit(|r| r.proj)?, pi1: fit(|r| r.pi1)? };
    Ok(Sweep { reports, slopes })
}
