//! Orlicz functions, modular sequence norms and fundamental sequences.

use crate::density::{Density, TailWeight};
use crate::error::{Error, Result};
use crate::grid::{grid_density, log_grid};
use crate::monotone_fn::{Direction, MonotoneFn};

const NORM_TOL: f64 = 1e-12;
const SLACK: f64 = 1e-9;

/// Tabulation grid: Orlicz functions only matter near 0.
pub fn orlicz_grid() -> Vec<f64> {
    log_grid(1e-12, 1e3, grid_density())
}

/// A nondecreasing `φ` with `φ(0+) = 0` and `φ(t)/t` nondecreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct OrliczFn {
    body: MonotoneFn,
    delta2_constant: f64,
}

impl OrliczFn {
    pub fn new(body: MonotoneFn) -> Result<Self> {
        if body.direction() != Direction::Nondecreasing {
            return Err(Error::NotAdmissible("body must be nondecreasing".into()));
        }
        if body.left_exponent() <= 0.0 {
            return Err(Error::NotAdmissible("φ must vanish at 0 (left exponent > 0)".into()));
        }
        let slow = body.all_exponents().find(|&e| e < 1.0 - SLACK);
        if let Some(e) = slow {
            return Err(Error::NotAdmissible(format!("φ(t)/t decreases (local exponent {e:.6})")));
        }
        let mut probes = log_grid(1e-12, 5e2, 16);
        probes.extend(body.knots().iter().flat_map(|&k| [k, 0.5 * k]));
        let delta2_constant = probes
            .iter()
            .map(|&t| body.value(2.0 * t) / body.value(t))
            .fold(0.0, f64::max);
        Ok(Self { body, delta2_constant })
    }

    pub fn body(&self) -> &MonotoneFn {
        &self.body
    }

    /// Least `λ` with `φ(2t) ≤ λ φ(t)` on the probe grid.
    pub fn delta2_constant(&self) -> f64 {
        self.delta2_constant
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            self.body.value(t)
        }
    }

    /// `φ⁻¹(y) = sup { s : φ(s) ≤ y }`.
    pub fn inverse(&self, y: f64) -> f64 {
        self.body.generalized_inverse(y).expect("Orlicz bodies are nondecreasing and unbounded")
    }

    /// Secant slopes are nondecreasing on `grid` (convexity up to rounding).
    pub fn is_convex_on(&self, grid: &[f64]) -> bool {
        let slopes: Vec<f64> = grid
            .windows(2)
            .map(|w| (self.eval(w[1]) - self.eval(w[0])) / (w[1] - w[0]))
            .collect();
        slopes.windows(2).all(|s| s[1] >= s[0] * (1.0 - 1e-9))
    }

    /// `φ(t) = t² h(t⁻²)` with `h` the tail function of `w`.
    pub fn from_weight<W: TailWeight + ?Sized>(w: &W) -> Result<Self> {
        let grid = orlicz_grid();
        let values = grid
            .iter()
            .map(|&t| Ok(t * t * w.tail(1.0 / (t * t))?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(MonotoneFn::from_samples(grid, values, None, None, Direction::Nondecreasing)?)
    }

    /// Reference function `ψ(t) = t² ln(t + 1/t)`.
    pub fn psi() -> Self {
        let body = MonotoneFn::tabulate(&orlicz_grid(), |t| t * t * (t + 1.0 / t).ln(), None, None, Direction::Nondecreasing)
            .expect("ψ is increasing");
        Self::new(body).expect("ψ is admissible")
    }

    /// Convexification `φ(t) = ∫_0^t φ̃(s)/s ds` of a raw function with
    /// `φ̃` and `φ̃(t)/t` nondecreasing; checks `φ ≤ φ̃ ≤ 4φ` on the grid.
    pub fn smooth_from_raw(raw: &MonotoneFn) -> Result<Self> {
        if raw.direction() != Direction::Nondecreasing || raw.left_exponent() <= 0.0 {
            return Err(Error::NotAdmissible("φ̃ must be nondecreasing with φ̃(0) = 0".into()));
        }
        if let Some(e) = raw.all_exponents().find(|&e| e < 1.0 - SLACK) {
            return Err(Error::NotAdmissible(format!("φ̃(t)/t decreases (local exponent {e:.6})")));
        }
        let over_t = Density::new(raw.pieces().iter().map(|p| p.times_power(1.0, -1.0)).collect())?;
        let mut grid = orlicz_grid();
        let (lo, hi) = (grid[0], grid[grid.len() - 1]);
        grid.extend(raw.knots().iter().copied().filter(|&t| t > lo && t < hi));
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let mut values = Vec::with_capacity(grid.len());
        let mut acc = over_t.integral(0.0, grid[0])?;
        let mut prev = grid[0];
        for &t in &grid {
            acc += over_t.integral(prev, t)?;
            prev = t;
            values.push(acc);
        }
        let body = MonotoneFn::from_samples(grid.clone(), values, Some(raw.left_exponent()), None, Direction::Nondecreasing)?;
        let phi = Self::new(body)?;
        for &t in &grid {
            let (a, b) = (phi.eval(t), raw.value(t));
            if a > b * (1.0 + SLACK) || b > 4.0 * a * (1.0 + SLACK) {
                return Err(Error::NotAdmissible(format!("sandwich fails at t = {t:e}: φ = {a:e}, φ̃ = {b:e}")));
            }
        }
        Ok(phi)
    }
}

/// `inf { λ : Σ φ(|x_k|/λ) ≤ 1 }` by bisection on the modular.
pub fn sequence_norm(phi: &OrliczFn, x: &[f64]) -> f64 {
    let a: Vec<f64> = x.iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
    if a.is_empty() {
        return 0.0;
    }
    let n = a.len() as f64;
    let max = a.iter().copied().fold(0.0, f64::max);
    let sum: f64 = a.iter().sum();
    let modular = |lambda: f64| a.iter().map(|&v| phi.eval(v / lambda)).sum::<f64>();
    let mut lo = max / phi.inverse(1.0);
    let mut hi = sum / phi.inverse(1.0 / n);
    if hi <= lo {
        return lo;
    }
    while hi / lo - 1.0 > NORM_TOL {
        let mid = (lo * hi).sqrt();
        if modular(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo * hi).sqrt()
}

/// `φ_n = 1/φ⁻¹(1/n)`.
pub fn fundamental_sequence(phi: &OrliczFn, n: f64) -> f64 {
    1.0 / phi.inverse(1.0 / n)
}

/// Orlicz function whose fundamental sequence interpolates `(n, φ_n)`:
/// `φ⁻¹(1/n) = 1/φ_n` at the data, power-law in between.
pub fn from_fundamental_sequence(data: &[(f64, f64)]) -> Result<OrliczFn> {
    if data.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: data.len() });
    }
    let mut pts = data.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pts.iter().any(|&(n, f)| !(n >= 1.0 && f > 0.0 && f.is_finite())) {
        return Err(Error::Inconsistent("need n ≥ 1 and positive finite φ_n".into()));
    }
    if pts.windows(2).any(|w| w[1].0 == w[0].0) {
        return Err(Error::Inconsistent("repeated n".into()));
    }
    let mut worst: f64 = 0.0;
    for i in 1..pts.len() {
        let (n0, f0) = pts[i - 1];
        let (n, f) = pts[i];
        if f < f0 {
            worst = worst.max(f0 / f - 1.0);
            pts[i].1 = f0;
        }
        let cap = pts[i - 1].1 * n / n0;
        if pts[i].1 > cap {
            worst = worst.max(pts[i].1 / cap - 1.0);
            pts[i].1 = cap;
        }
    }
    if worst > 1e-6 {
        return Err(Error::Inconsistent(format!("monotonicity violated by relative {worst:e}")));
    }
    if worst > 0.0 {
        log::warn!("fundamental sequence corrected by relative {worst:e}");
    }
    if pts.windows(2).any(|w| w[1].1 <= w[0].1) {
        return Err(Error::Inconsistent("φ_n must increase strictly".into()));
    }
    let knots: Vec<f64> = pts.iter().rev().map(|&(_, f)| 1.0 / f).collect();
    let values: Vec<f64> = pts.iter().rev().map(|&(n, _)| 1.0 / n).collect();
    OrliczFn::new(MonotoneFn::from_samples(knots, values, None, None, Direction::Nondecreasing)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(p: f64) -> OrliczFn {
        OrliczFn::new(MonotoneFn::power(p).unwrap()).unwrap()
    }

    #[test]
    fn euclidean_and_l1() {
        assert!((sequence_norm(&power(2.0), &[3.0, 4.0]) - 5.0).abs() < 1e-10);
        assert!((sequence_norm(&power(1.0), &[1.0, 1.0, 1.0]) - 3.0).abs() < 1e-10);
        assert_eq!(sequence_norm(&power(2.0), &[0.0, 0.0]), 0.0);
    }

    #[test]
    fn power_fundamental_sequences() {
        for &p in &[1.0, 2.0, 3.5] {
            for &n in &[1.0, 10.0, 100.0] {
                let phi = power(p);
                let f = fundamental_sequence(&phi, n);
                assert!((f - n.powf(1.0 / p)).abs() < 1e-12 * f);
                let ones = vec![1.0; n as usize];
                assert!((sequence_norm(&phi, &ones) / f - 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn from_inverse_square_weight() {
        let w = MonotoneFn::power(-2.0).unwrap();
        let phi = OrliczFn::from_weight(&w).unwrap();
        for &t in &[1e-6, 1e-2, 0.5, 3.0] {
            assert!((phi.eval(t) / t.powi(4) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn from_clamped_oh_weight() {
        let w = MonotoneFn::power(-2.0).unwrap().restrict_left(1.0);
        let phi = OrliczFn::from_weight(&w).unwrap();
        for &t in &[1e-4, 0.1, 0.9] {
            assert!((phi.eval(t) / t.powi(4) - 1.0).abs() < 1e-6);
        }
        assert!((phi.eval(10.0) - (2.0 * 100.0 - 1.0)).abs() < 1e-3 * 199.0);
        assert!(phi.is_convex_on(&log_grid(1e-6, 1e2, 16)));
    }

    #[test]
    fn psi_basics() {
        let psi = OrliczFn::psi();
        assert!((psi.eval(1.0) - 2f64.ln()).abs() < 1e-12);
        assert!(psi.delta2_constant().is_finite());
        let t: f64 = 1e-8;
        let asym = (2.0 * t).sqrt() / (1.0 / t).ln().sqrt();
        assert!((psi.inverse(t) / asym - 1.0).abs() < 0.2);
    }

    #[test]
    fn smoothing_exact_cases() {
        let phi = OrliczFn::smooth_from_raw(&MonotoneFn::power(2.0).unwrap()).unwrap();
        assert!((phi.eval(0.3) - 0.045).abs() < 1e-12);
        let phi = OrliczFn::smooth_from_raw(&MonotoneFn::power(1.0).unwrap()).unwrap();
        assert!((phi.eval(0.3) - 0.3).abs() < 1e-12);
        let bad = MonotoneFn::power(0.5).unwrap();
        assert!(matches!(OrliczFn::smooth_from_raw(&bad), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn sequence_round_trip() {
        let data: Vec<(f64, f64)> = (0..12).map(|k| {
            let n = 2f64.powi(k);
            (n, (n * (n + 1.0).ln()).sqrt())
        }).collect();
        let phi = from_fundamental_sequence(&data).unwrap();
        for &(n, f) in &data {
            assert!((fundamental_sequence(&phi, n) / f - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn inconsistent_sequence() {
        let data = [(1.0, 1.0), (2.0, 3.0), (4.0, 3.5)];
        assert!(matches!(from_fundamental_sequence(&data), Err(Error::Inconsistent(_))));
    }
}
