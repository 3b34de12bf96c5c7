//! Tail function `h(t) = ∫_t^∞ w`, growth function `g` solving `t = s·h(t)`,
//! weight recovery `w = 1/g⁻¹`, and regularity diagnostics.

use rayon::prelude::*;

use crate::density::TailWeight;
use crate::error::{Error, Result};
use crate::grid::{grid_density, log_grid};
use crate::monotone_fn::{Direction, MonotoneFn};

/// Default admissible exponent window for regularity.
pub const DEFAULT_WINDOW: (f64, f64) = (0.02, 0.98);

const BRACKET_STEPS: usize = 200;
const SOLVE_TOL: f64 = 1e-13;

/// Tabulation grid for tail functions.
pub fn tail_grid() -> Vec<f64> {
    log_grid(1e-4, 1e8, grid_density())
}

/// Sample grid for growth functions.
pub fn growth_grid() -> Vec<f64> {
    log_grid(1.0, 1e8, grid_density())
}

/// `h(t) = ∫_t^∞ w`, tabulated on [`tail_grid`] plus the knots of `w` inside it.
pub fn tail_fn(w: &MonotoneFn) -> Result<MonotoneFn> {
    if w.direction() != Direction::Nonincreasing {
        return Err(Error::Direction);
    }
    let mut grid = tail_grid();
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    grid.extend(w.knots().iter().copied().filter(|&t| t > lo && t < hi));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let values = grid.iter().map(|&t| w.integral(t, f64::INFINITY)).collect::<Result<Vec<_>>>()?;
    MonotoneFn::from_samples(grid, values, Some(0.0), Some(w.right_exponent() + 1.0), Direction::Nonincreasing)
}

/// The solution `t` of `t = s·h(t)`.
pub fn solve_growth<W: TailWeight + ?Sized>(w: &W, s: f64) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("growth at s = {s}")));
    }
    let f = |t: f64| -> Result<f64> { Ok(t - s * w.tail(t)?) };
    let (mut lo, mut hi) = (1.0, 1.0);
    if f(1.0)? > 0.0 {
        let mut steps = 0;
        loop {
            lo *= 0.5;
            if f(lo)? <= 0.0 {
                break;
            }
            hi = lo;
            steps += 1;
            if steps > BRACKET_STEPS {
                return Err(Error::BracketFailure(format!("s = {s}, no root above {lo:e}")));
            }
        }
    } else {
        let mut steps = 0;
        loop {
            hi *= 2.0;
            if f(hi)? > 0.0 {
                break;
            }
            lo = hi;
            steps += 1;
            if steps > BRACKET_STEPS {
                return Err(Error::BracketFailure(format!("s = {s}, no root below {hi:e}")));
            }
        }
    }
    for _ in 0..BRACKET_STEPS {
        if hi / lo - 1.0 <= SOLVE_TOL {
            break;
        }
        let mid = (lo * hi).sqrt();
        if f(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

/// `g` sampled on `s_grid` (solves are independent and run in parallel).
pub fn growth_fn<W: TailWeight + Sync + ?Sized>(w: &W, s_grid: &[f64]) -> Result<MonotoneFn> {
    let values: Vec<f64> = s_grid.par_iter().map(|&s| solve_growth(w, s)).collect::<Result<_>>()?;
    MonotoneFn::from_samples(s_grid.to_vec(), values, None, None, Direction::Nondecreasing)
}

/// `w = 1/g⁻¹`, held at 1 on `(0, g(1)]`.
pub fn recover_weight(g: &MonotoneFn) -> Result<MonotoneFn> {
    let report = regularity_report(g, DEFAULT_WINDOW);
    if !report.pass {
        return Err(Error::NotRegular { alpha: report.alpha, beta: report.beta });
    }
    let w = g.inverse_fn()?.reciprocal();
    Ok(w.restrict_left(g.value(1.0)))
}

/// `w`, `h`, `g`, `g⁻¹` computed together.
#[derive(Debug, Clone)]
pub struct GrowthProfile {
    pub w: MonotoneFn,
    pub h: MonotoneFn,
    pub g: MonotoneFn,
    pub g_inv: MonotoneFn,
}

impl GrowthProfile {
    pub fn new(w: MonotoneFn) -> Result<Self> {
        let h = tail_fn(&w)?;
        let g = growth_fn(&w, &growth_grid())?;
        let g_inv = g.inverse_fn()?;
        Ok(Self { w, h, g, g_inv })
    }

    /// `max |h(t) g⁻¹(t) / t − 1|` over `ts`, with `h` evaluated exactly.
    pub fn identity_residual(&self, ts: &[f64]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for &t in ts {
            let h = self.w.integral(t, f64::INFINITY)?;
            worst = worst.max((h * self.g_inv.value(t) / t - 1.0).abs());
        }
        Ok(worst)
    }
}

/// Two-sided power bounds `c (t/s)^α ≤ f(t)/f(s) ≤ d (t/s)^β` for `t ≥ s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBounds {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub d: f64,
    /// `max f(2s)/f(s)`.
    pub doubling: f64,
}

/// Sampling grid used by all regularity diagnostics.
pub fn regularity_grid() -> Vec<f64> {
    log_grid(1.0, 1e6, 8)
}

/// Power bounds of a positive increasing function on [`regularity_grid`].
///
/// α and β are the extreme secant exponents over pairs at least a decade
/// apart; `c` and `d` are the tightest constants for those exponents over
/// all pairs.
pub fn power_bounds(f: impl Fn(f64) -> f64) -> PowerBounds {
    let ts = regularity_grid();
    let fs: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let (mut alpha, mut beta) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..ts.len() {
        for j in i + 1..ts.len() {
            if ts[j] / ts[i] < 10.0 * (1.0 - 1e-12) {
                continue;
            }
            let e = (fs[j] / fs[i]).ln() / (ts[j] / ts[i]).ln();
            alpha = alpha.min(e);
            beta = beta.max(e);
        }
    }
    let (mut c, mut d) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..ts.len() {
        for j in i + 1..ts.len() {
            let r = ts[j] / ts[i];
            let q = fs[j] / fs[i];
            c = c.min(q / r.powf(alpha));
            d = d.max(q / r.powf(beta));
        }
    }
    let doubling = ts.iter().map(|&t| f(2.0 * t) / f(t)).fold(0.0, f64::max);
    PowerBounds { alpha, beta, c, d, doubling }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityReport {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub d: f64,
    pub pass: bool,
    /// `max f⁻¹(2y)/f⁻¹(y)` over sampled `y ≥ f(1)` (infinite if `f` is bounded).
    pub inverse_doubling: f64,
    /// A lower power bound with exponent in (0, 1) holds.
    pub lower_power_bound: bool,
}

/// Regularity of an increasing function: both exponents inside `window`
/// and `0 < α ≤ β < 1`.
pub fn regularity_report(f: &MonotoneFn, window: (f64, f64)) -> RegularityReport {
    let b = power_bounds(|t| f.value(t));
    let pass = f.direction() == Direction::Nondecreasing
        && b.alpha.is_finite()
        && b.alpha > 0.0
        && b.alpha <= b.beta
        && b.beta < 1.0
        && window.0 <= b.alpha
        && b.beta <= window.1;
    let inverse_doubling = regularity_grid()
        .iter()
        .map(|&t| {
            let y = f.value(t);
            match (f.generalized_inverse(2.0 * y), f.generalized_inverse(y)) {
                (Ok(a), Ok(b)) if b > 0.0 => a / b,
                _ => f64::INFINITY,
            }
        })
        .fold(0.0, f64::max);
    RegularityReport {
        alpha: b.alpha,
        beta: b.beta,
        c: b.c,
        d: b.d,
        pass,
        inverse_doubling,
        lower_power_bound: b.alpha > 0.0 && b.alpha < 1.0,
    }
}
