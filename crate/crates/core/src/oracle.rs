//! Brute-force checks for the analytic modules: grid searches over
//! decompositions, trapezoid integrals and a scan for Orlicz norms.

use rayon::prelude::*;

use crate::density::Density;
use crate::error::{Error, Result};
use crate::grid::geometric;
use crate::orlicz::OrliczFn;
use crate::weights::WeightPair;

/// Search points for the variational oracles.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchGrid {
    /// Cut points `τ` for [`aux_diag_norm`].
    pub tau_points: Vec<f64>,
    /// Corner abscissas `s*` for [`indicator_search`].
    pub rect_s: Vec<f64>,
    /// Corner ordinates `t*` for [`indicator_search`].
    pub rect_t: Vec<f64>,
}

impl Default for SearchGrid {
    fn default() -> Self {
        let corners = geometric(1e-2, 1e6, 64);
        Self { tau_points: geometric(1e-4, 1e8, 96), rect_s: corners.clone(), rect_t: corners }
    }
}

fn with_midpoints(v: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * v.len());
    for w in v.windows(2) {
        out.push(w[0]);
        out.push((w[0] * w[1]).sqrt());
    }
    out.extend(v.last());
    out
}

impl SearchGrid {
    /// Inserts the geometric midpoint of every cell; old points are kept.
    pub fn refined(&self) -> Self {
        Self {
            tau_points: with_midpoints(&self.tau_points),
            rect_s: with_midpoints(&self.rect_s),
            rect_t: with_midpoints(&self.rect_t),
        }
    }
}

fn half_line(p: &WeightPair) -> Result<(&Density, &Density)> {
    p.half_line_parts().ok_or_else(|| Error::BadParameter("oracles need a half-line weight pair".into()))
}

/// Diagonal norm `inf sup_k |x_k| w_c(A_k)^{1/2} + (Σ |x_k|² w_r(A_kᶜ))^{1/2}`
/// over left half-lines `A_k = (−∞, τ_k]`, `τ_k` on the grid.
pub fn aux_diag_norm(p: &WeightPair, x: &[f64], grid: &SearchGrid) -> Result<f64> {
    let (wc, wr) = half_line(p)?;
    let mc = wc.total()?;
    let xs: Vec<f64> = x.iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
    if xs.is_empty() {
        return Ok(0.0);
    }
    let taus = &grid.tau_points;
    let roots: Vec<f64> = taus.iter().map(|&t| (mc + t).sqrt()).collect();
    let tails = taus.iter().map(|&t| wr.integral(t, f64::INFINITY)).collect::<Result<Vec<f64>>>()?;
    let mut budgets: Vec<f64> = xs.iter().flat_map(|&v| roots.iter().map(move |r| v * r)).collect();
    budgets.sort_by(f64::total_cmp);
    budgets.dedup();
    let best = budgets
        .par_iter()
        .filter_map(|&b| {
            let mut sq = 0.0;
            for &v in &xs {
                let k = roots.partition_point(|&r| v * r <= b * (1.0 + 1e-12));
                if k == 0 {
                    return None;
                }
                sq += v * v * tails[k - 1];
            }
            Some(b + sq.sqrt())
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best)
}

const LEVELS: usize = 2048;
const LEVEL_FLOOR: f64 = 1e-18;

/// `|{ s : w(s) > y }|` for a nonincreasing density.
fn superlevel(w: &Density, y: f64) -> f64 {
    if w.evaluate(f64::MIN_POSITIVE) <= y {
        return 0.0;
    }
    let (mut lo, mut hi) = (1.0, 1.0);
    if w.evaluate(1.0) > y {
        while w.evaluate(hi) > y {
            lo = hi;
            hi *= 2.0;
            if hi > 1e300 {
                return f64::INFINITY;
            }
        }
    } else {
        while w.evaluate(lo) <= y {
            hi = lo;
            lo *= 0.5;
        }
    }
    while hi / lo - 1.0 > 1e-13 {
        let mid = (lo * hi).sqrt();
        if w.evaluate(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo * hi).sqrt()
}

/// Superlevel measures `A(y)`, `B(y)` with trapezoid weights on a log grid
/// of levels; integrals `∫ f(A(y), B(y)) dy` become weighted sums.
struct LayerCake {
    a: Vec<f64>,
    b: Vec<f64>,
    dy: Vec<f64>,
    /// Lowest level on the grid.
    floor: f64,
}

impl LayerCake {
    fn new(wa: &Density, wb: &Density) -> Self {
        let top = wa.sup().max(wb.sup());
        let ys = geometric(LEVEL_FLOOR, top, LEVELS);
        let a: Vec<f64> = ys.par_iter().map(|&y| superlevel(wa, y)).collect();
        let b: Vec<f64> = ys.par_iter().map(|&y| superlevel(wb, y)).collect();
        let mut dy = vec![0.0; ys.len()];
        for i in 0..ys.len() - 1 {
            let h = 0.5 * (ys[i + 1] - ys[i]);
            dy[i] += h;
            dy[i + 1] += h;
        }
        Self { a, b, dy, floor: ys[0] }
    }

    /// `∫_0^top f(A, B) dy`, with the part below the floor taken from the
    /// power law through the two lowest levels.
    fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let vals: Vec<f64> = self.a.iter().zip(&self.b).map(|(&a, &b)| f(a, b)).collect();
        let body: f64 = vals.iter().zip(&self.dy).map(|(v, d)| v * d).sum();
        let (f0, f1) = (vals[0], vals[1]);
        if f0 <= 0.0 || f1 <= 0.0 {
            return body;
        }
        let y1 = self.floor * (self.dy[0] * 2.0 / self.floor + 1.0);
        let e = (f1 / f0).ln() / (y1 / self.floor).ln();
        if e <= -1.0 {
            return f64::INFINITY;
        }
        body + f0 * self.floor / (e + 1.0)
    }
}

/// Result of the rectangle search over one mixed quadrant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatorSearch {
    /// `√min (n·‖a‖²_A + n²·‖b‖²_B)`.
    pub value: f64,
    /// `√(n·‖a‖²_A) + n·‖b‖_B` at the argmin.
    pub split_value: f64,
    pub argmin: (f64, f64),
}

/// Minimizes over corners `(s*, t*)` with `b = 1` on `(s*, ∞) × (t*, ∞)` and
/// `a = 1` elsewhere, in the quadrant weighted by `w̃_c` of `dual_domain`
/// and `w_r` of `codomain`.
pub fn indicator_search(
    dual_domain: &WeightPair,
    codomain: &WeightPair,
    n: f64,
    grid: &SearchGrid,
) -> Result<IndicatorSearch> {
    let (wa, _) = half_line(dual_domain)?;
    let (_, wb) = half_line(codomain)?;
    let cake = LayerCake::new(wa, wb);
    let ha: Vec<f64> = grid.rect_s.iter().map(|&s| cake.integrate(|a, _| (a - s).max(0.0))).collect();
    let hb: Vec<f64> = grid.rect_t.iter().map(|&t| cake.integrate(|_, b| (b - t).max(0.0))).collect();
    let rows: Vec<(f64, usize, f64)> = grid
        .rect_s
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut best = (f64::INFINITY, 0, 0.0);
            for (j, &t) in grid.rect_t.iter().enumerate() {
                let m = cake.integrate(|a, b| a * b - (a - s).max(0.0) * (b - t).max(0.0));
                let obj = n * m + n * n * ha[i] * hb[j];
                if obj < best.0 {
                    best = (obj, j, m);
                }
            }
            best
        })
        .collect();
    let mut best = (f64::INFINITY, 0, 0, 0.0);
    for (i, &(obj, j, m)) in rows.iter().enumerate() {
        if obj < best.0 {
            best = (obj, i, j, m);
        }
    }
    let (obj, i, j, m) = best;
    Ok(IndicatorSearch {
        value: obj.sqrt(),
        split_value: (n * m).sqrt() + n * (ha[i] * hb[j]).sqrt(),
        argmin: (grid.rect_s[i], grid.rect_t[j]),
    })
}

/// `n ∫∫ min(w̃_c(s), w_r(t), n w̃_c(s) w_r(t)) ds dt` by a tensor trapezoid
/// rule on a log grid.
pub fn product_lower_bound(dual_domain: &WeightPair, codomain: &WeightPair, n: f64, points: usize) -> Result<f64> {
    let (wa, _) = half_line(dual_domain)?;
    let (_, wb) = half_line(codomain)?;
    let ts = geometric(1e-8, 1e14, points);
    let weights: Vec<f64> = (0..ts.len())
        .map(|i| {
            let l = if i > 0 { ts[i] - ts[i - 1] } else { ts[0] };
            let r = if i + 1 < ts.len() { ts[i + 1] - ts[i] } else { 0.0 };
            0.5 * (l + r)
        })
        .collect();
    let av: Vec<f64> = ts.iter().map(|&s| wa.evaluate(s)).collect();
    let bv: Vec<f64> = ts.iter().map(|&t| wb.evaluate(t)).collect();
    let total: f64 = (0..ts.len())
        .into_par_iter()
        .map(|i| {
            (0..ts.len())
                .map(|j| av[i].min(bv[j]).min(n * av[i] * bv[j]) * weights[i] * weights[j])
                .sum::<f64>()
        })
        .sum();
    Ok(n * total)
}

/// Trapezoid rule for `∫_a^b f` in the variable `ln t` on `points` nodes; an infinite
/// `b` is replaced by `cutoff`, which must leave a tail below `1e-8` of the total.
pub fn riemann_integral(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize, cutoff: Option<f64>) -> Result<f64> {
    if !(a > 0.0 && b > a) || points < 2 {
        return Err(Error::Domain(format!("trapezoid over [{a}, {b}] with {points} points")));
    }
    let end = if b.is_finite() {
        b
    } else {
        match cutoff {
            Some(c) if c > a && c.is_finite() => c,
            other => return Err(Error::BadCutoff(format!("cutoff {other:?} for an infinite range"))),
        }
    };
    let ts = geometric(a, end, points);
    let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let total: f64 = ts
        .windows(2)
        .zip(vals.windows(2))
        .map(|(t, v)| 0.5 * (t[1] / t[0]).ln() * (v[0] * t[0] + v[1] * t[1]))
        .sum();
    if b.is_infinite() {
        let (t0, t1) = (ts[points - 2], ts[points - 1]);
        let (v0, v1) = (vals[points - 2], vals[points - 1]);
        let tail = if v1 <= 0.0 {
            0.0
        } else {
            let e = (v1 / v0).ln() / (t1 / t0).ln();
            if e >= -1.0 { f64::INFINITY } else { v1 * t1 / (-e - 1.0) }
        };
        if !(tail <= 1e-8 * total.abs()) {
            return Err(Error::BadCutoff(format!("tail beyond {end:e} estimated at {tail:e} of {total:e}")));
        }
    }
    Ok(total)
}

/// Orlicz norm located by scanning `10⁴` log-spaced `λ` for the crossing of
/// the modular through 1; returns the geometric mean of the bracketing pair.
pub fn orlicz_norm_scan(phi: &OrliczFn, x: &[f64]) -> f64 {
    let a: Vec<f64> = x.iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
    if a.is_empty() {
        return 0.0;
    }
    let max = a.iter().copied().fold(0.0, f64::max);
    let sum: f64 = a.iter().sum();
    let modular = |l: f64| a.iter().map(|&v| phi.eval(v / l)).sum::<f64>();
    let ls = geometric(max / 1e3, 1e3 * sum, 10_000);
    let k = ls.partition_point(|&l| modular(l) > 1.0);
    if k == 0 {
        return ls[0];
    }
    if k == ls.len() {
        return ls[k - 1];
    }
    (ls[k - 1] * ls[k]).sqrt()
}
