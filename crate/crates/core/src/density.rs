//! Piecewise-power densities on (0, ∞) that may jump and may vanish.
//!
//! Unlike [`MonotoneFn`], a density is allowed to be discontinuous (step
//! weights) and to be zero outside the union of its pieces.

use crate::error::{Error, Result};
use crate::monotone_fn::MonotoneFn;
use crate::power::PowerPiece;

#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    pieces: Vec<PowerPiece>,
}

/// Anything with a computable tail integral `∫_t^∞ w`.
pub trait TailWeight {
    fn density(&self, t: f64) -> f64;
    fn tail(&self, t: f64) -> Result<f64>;
}

impl TailWeight for MonotoneFn {
    fn density(&self, t: f64) -> f64 {
        self.value(t)
    }

    fn tail(&self, t: f64) -> Result<f64> {
        self.integral(t, f64::INFINITY)
    }
}

impl TailWeight for Density {
    fn density(&self, t: f64) -> f64 {
        self.evaluate(t)
    }

    fn tail(&self, t: f64) -> Result<f64> {
        self.integral(t, f64::INFINITY)
    }
}

impl Density {
    pub fn new(pieces: Vec<PowerPiece>) -> Result<Self> {
        for p in &pieces {
            if !(p.lo >= 0.0 && p.hi > p.lo) {
                return Err(Error::BadKnots(format!("piece [{}, {}]", p.lo, p.hi)));
            }
            if !(p.value > 0.0 && p.value.is_finite() && p.exponent.is_finite() && p.anchor > 0.0) {
                return Err(Error::Domain(format!("piece value {} exponent {}", p.value, p.exponent)));
            }
        }
        if pieces.windows(2).any(|w| w[1].lo < w[0].hi) {
            return Err(Error::BadKnots("pieces overlap or are unsorted".into()));
        }
        Ok(Self { pieces })
    }

    /// The constant `c` on the whole half-line.
    pub fn constant(c: f64) -> Self {
        Self::new(vec![PowerPiece::new(0.0, f64::INFINITY, 1.0, c, 0.0)]).expect("positive constant")
    }

    /// `values[i]` on `[edges[i], edges[i+1])`; nonpositive values leave a gap.
    pub fn steps(edges: &[f64], values: &[f64]) -> Result<Self> {
        if edges.len() != values.len() + 1 {
            return Err(Error::BadKnots("need one more edge than values".into()));
        }
        let pieces = edges
            .windows(2)
            .zip(values)
            .filter(|(_, &v)| v > 0.0)
            .map(|(e, &v)| PowerPiece::new(e[0], e[1], if e[0] > 0.0 { e[0] } else { 1.0 }, v, 0.0))
            .collect();
        Self::new(pieces)
    }

    pub fn from_monotone(f: &MonotoneFn) -> Self {
        Self { pieces: f.pieces() }
    }

    pub fn pieces(&self) -> &[PowerPiece] {
        &self.pieces
    }

    /// Value at `t`; zero outside the support.
    pub fn evaluate(&self, t: f64) -> f64 {
        let i = self.pieces.partition_point(|p| p.hi <= t);
        match self.pieces.get(i) {
            Some(p) if p.lo <= t => p.eval(t),
            _ => 0.0,
        }
    }

    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        let mut total = 0.0;
        for p in &self.pieces {
            if p.hi <= a || p.lo >= b {
                continue;
            }
            total += p.integral(a, b)?;
        }
        Ok(total)
    }

    pub fn total(&self) -> Result<f64> {
        self.integral(0.0, f64::INFINITY)
    }

    /// Right end of the support (may be infinite).
    pub fn support_end(&self) -> f64 {
        self.pieces.last().map_or(0.0, |p| p.hi)
    }

    /// Supremum of a nonincreasing density (its limit at the left end).
    pub fn sup(&self) -> f64 {
        self.pieces.first().map_or(0.0, |p| if p.lo == 0.0 && p.exponent < 0.0 { f64::INFINITY } else { p.eval(p.lo.max(f64::MIN_POSITIVE)) })
    }

    /// Nonincreasing on (0, ∞): no rising piece, no upward jump, no gap before a piece.
    pub fn is_nonincreasing(&self) -> bool {
        if let Some(first) = self.pieces.first() {
            if first.lo > 0.0 {
                return false;
            }
        }
        let falling = self.pieces.iter().all(|p| p.exponent <= 0.0);
        let joins = self.pieces.windows(2).all(|w| {
            w[1].lo == w[0].hi && w[1].eval(w[1].lo) <= w[0].eval(w[0].hi) * (1.0 + 1e-12)
        });
        falling && joins
    }
}

/// A maximal interval on which both densities are single power pieces (or zero).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Cell {
    pub lo: f64,
    pub hi: f64,
    pub a: Option<PowerPiece>,
    pub b: Option<PowerPiece>,
}

fn piece_containing(d: &Density, lo: f64, hi: f64) -> Option<PowerPiece> {
    let mid = representative(lo, hi);
    let i = d.pieces.partition_point(|p| p.hi <= mid);
    d.pieces.get(i).filter(|p| p.lo <= mid).copied()
}

/// An interior point of `[lo, hi]`, geometric where possible.
pub(crate) fn representative(lo: f64, hi: f64) -> f64 {
    match (lo > 0.0, hi.is_finite()) {
        (true, true) => (lo * hi).sqrt(),
        (true, false) => 2.0 * lo,
        (false, true) => 0.5 * hi,
        (false, false) => 1.0,
    }
}

pub(crate) fn overlay(a: &Density, b: &Density) -> Vec<Cell> {
    let mut edges: Vec<f64> = a
        .pieces
        .iter()
        .chain(&b.pieces)
        .flat_map(|p| [p.lo, p.hi])
        .collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    edges
        .windows(2)
        .map(|w| Cell { lo: w[0], hi: w[1], a: piece_containing(a, w[0], w[1]), b: piece_containing(b, w[0], w[1]) })
        .filter(|c| c.a.is_some() || c.b.is_some())
        .collect()
}

/// `ln(a/b)` at `t = 1` and its slope in `ln t`.
fn log_ratio(pa: &PowerPiece, pb: &PowerPiece) -> (f64, f64) {
    let r1 = pa.value.ln() - pa.exponent * pa.anchor.ln() - pb.value.ln() + pb.exponent * pb.anchor.ln();
    (r1, pa.exponent - pb.exponent)
}

fn divergent(e: Error) -> Error {
    match e {
        Error::DivergentTail(m) => Error::Divergent(m),
        other => other,
    }
}

/// `∫ min(a, b)` over the cell.
pub(crate) fn cell_min_integral(c: &Cell) -> Result<f64> {
    let (Some(pa), Some(pb)) = (c.a, c.b) else { return Ok(0.0) };
    let (r1, slope) = log_ratio(&pa, &pb);
    let mut cuts = vec![c.lo];
    if slope != 0.0 {
        let t_star = (-r1 / slope).exp();
        if t_star > c.lo && t_star < c.hi {
            cuts.push(t_star);
        }
    }
    cuts.push(c.hi);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let t = representative(w[0], w[1]);
        let p = if pa.eval(t) <= pb.eval(t) { pa } else { pb };
        total += p.integral(w[0], w[1]).map_err(divergent)?;
    }
    Ok(total)
}

const GL_NODES: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GL_WEIGHTS: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];

/// Composite 8-point Gauss–Legendre in `x = ln t` of `f(t) t` over `[x0, x1]`.
pub(crate) fn log_gauss(f: &dyn Fn(f64) -> f64, x0: f64, x1: f64, width: f64) -> f64 {
    if x1 <= x0 {
        return 0.0;
    }
    let panels = ((x1 - x0) / width).ceil().max(1.0) as usize;
    let h = (x1 - x0) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = x0 + (k as f64 + 0.5) * h;
        let half = 0.5 * h;
        for (&z, &w) in GL_NODES.iter().zip(&GL_WEIGHTS) {
            for x in [mid - half * z, mid + half * z] {
                let t = x.exp();
                total += w * half * f(t) * t;
            }
        }
    }
    total
}

/// `∫ ab/(a+b)` over the cell.
pub(crate) fn cell_harmonic_integral(c: &Cell) -> Result<f64> {
    let (Some(pa), Some(pb)) = (c.a, c.b) else { return Ok(0.0) };
    let (r1, slope) = log_ratio(&pa, &pb);
    if slope.abs() < 1e-14 {
        let r = r1.exp();
        return Ok(pa.integral(c.lo, c.hi).map_err(divergent)? / (1.0 + r));
    }
    let x_star = -r1 / slope;
    let reach = (40.0 / slope.abs()).min(2000.0);
    let edge_ratio = (-slope.abs() * reach).exp();
    let xl = if c.lo > 0.0 { c.lo.ln() } else { f64::NEG_INFINITY };
    let xh = if c.hi.is_finite() { c.hi.ln() } else { f64::INFINITY };
    let x0 = xl.max(x_star - reach);
    let x1 = xh.min(x_star + reach);
    let h = |t: f64| {
        let a = pa.eval(t);
        let b = pb.eval(t);
        a * b / (a + b)
    };
    let mut total = 0.0;
    let smaller_left = if slope > 0.0 { pa } else { pb };
    let smaller_right = if slope > 0.0 { pb } else { pa };
    if x0 < x1 {
        total += log_gauss(&h, x0, x1, 0.25);
        if xl < x0 {
            total += smaller_left.integral(c.lo, x0.exp()).map_err(divergent)? / (1.0 + edge_ratio);
        }
        if x1 < xh {
            total += smaller_right.integral(x1.exp(), c.hi).map_err(divergent)? / (1.0 + edge_ratio);
        }
    } else {
        let side = if xh <= x_star { smaller_left } else { smaller_right };
        total += side.integral(c.lo, c.hi).map_err(divergent)? / (1.0 + edge_ratio);
    }
    Ok(total)
}
