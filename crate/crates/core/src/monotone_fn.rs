//! Positive monotone functions on (0, ∞) that are piecewise powers
//! (linear in log-log coordinates) between knots.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::power::PowerPiece;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Nondecreasing,
    Nonincreasing,
}

impl Direction {
    fn flipped(self) -> Self {
        match self {
            Direction::Nondecreasing => Direction::Nonincreasing,
            Direction::Nonincreasing => Direction::Nondecreasing,
        }
    }

    fn admits(self, e: f64) -> bool {
        match self {
            Direction::Nondecreasing => e >= 0.0,
            Direction::Nonincreasing => e <= 0.0,
        }
    }
}

/// Wire format of a [`MonotoneFn`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotoneFnSpec {
    pub knots: Vec<f64>,
    pub values: Vec<f64>,
    pub right_exponent: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left_exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
}

/// `f(t) = v_i (t/t_i)^{e_i}` on `[t_i, t_{i+1}]`, `v_1 (t/t_1)^{left}` below the
/// first knot and `v_m (t/t_m)^{right}` beyond the last.
///
/// A left exponent of 0 is the constant extension `f = v_1` on `(0, t_1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MonotoneFnSpec", into = "MonotoneFnSpec")]
pub struct MonotoneFn {
    knots: Vec<f64>,
    values: Vec<f64>,
    exponents: Vec<f64>,
    left_exponent: f64,
    right_exponent: f64,
    direction: Direction,
}

impl TryFrom<MonotoneFnSpec> for MonotoneFn {
    type Error = Error;

    fn try_from(s: MonotoneFnSpec) -> Result<Self> {
        let left = s.left_exponent.unwrap_or(0.0);
        let direction = match s.direction {
            Some(d) => d,
            None => {
                let falls = s.values.windows(2).any(|w| w[1] < w[0]);
                if falls || s.right_exponent < 0.0 || left < 0.0 {
                    Direction::Nonincreasing
                } else {
                    Direction::Nondecreasing
                }
            }
        };
        MonotoneFn::new(s.knots, s.values, left, s.right_exponent, direction)
    }
}

impl From<MonotoneFn> for MonotoneFnSpec {
    fn from(f: MonotoneFn) -> Self {
        MonotoneFnSpec {
            left_exponent: (f.left_exponent != 0.0).then_some(f.left_exponent),
            direction: Some(f.direction),
            knots: f.knots,
            values: f.values,
            right_exponent: f.right_exponent,
        }
    }
}

impl MonotoneFn {
    pub fn new(
        knots: Vec<f64>,
        values: Vec<f64>,
        left_exponent: f64,
        right_exponent: f64,
        direction: Direction,
    ) -> Result<Self> {
        if knots.is_empty() || knots.len() != values.len() {
            return Err(Error::BadKnots(format!(
                "{} knots and {} values",
                knots.len(),
                values.len()
            )));
        }
        if knots.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            return Err(Error::BadKnots("knots must be positive and finite".into()));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadKnots("knots must be strictly increasing".into()));
        }
        if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::NonMonotone("values must be positive and finite".into()));
        }
        if !left_exponent.is_finite() || !right_exponent.is_finite() {
            return Err(Error::NonMonotone("extension exponents must be finite".into()));
        }
        let exponents: Vec<f64> = knots
            .windows(2)
            .zip(values.windows(2))
            .map(|(t, v)| (v[1] / v[0]).ln() / (t[1] / t[0]).ln())
            .collect();
        let ordered = values.windows(2).all(|w| match direction {
            Direction::Nondecreasing => w[1] >= w[0],
            Direction::Nonincreasing => w[1] <= w[0],
        });
        if !ordered {
            return Err(Error::NonMonotone(format!("values are not {direction:?}")));
        }
        if !direction.admits(left_exponent) || !direction.admits(right_exponent) {
            return Err(Error::NonMonotone(format!(
                "extension exponents ({left_exponent}, {right_exponent}) disagree with {direction:?}"
            )));
        }
        Ok(Self { knots, values, exponents, left_exponent, right_exponent, direction })
    }

    /// `t^e` with a single knot at 1 (power law on the whole half-line).
    pub fn power(e: f64) -> Result<Self> {
        let d = if e >= 0.0 { Direction::Nondecreasing } else { Direction::Nonincreasing };
        Self::new(vec![1.0], vec![1.0], e, e, d)
    }

    /// Samples `f` on `grid`; extension exponents default to those of the
    /// first and last segments.
    pub fn tabulate(
        grid: &[f64],
        f: impl Fn(f64) -> f64,
        left_exponent: Option<f64>,
        right_exponent: Option<f64>,
        direction: Direction,
    ) -> Result<Self> {
        let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
        Self::from_samples(grid.to_vec(), values, left_exponent, right_exponent, direction)
    }

    pub fn from_samples(
        knots: Vec<f64>,
        values: Vec<f64>,
        left_exponent: Option<f64>,
        right_exponent: Option<f64>,
        direction: Direction,
    ) -> Result<Self> {
        let m = knots.len();
        let seg = |i: usize| (values[i + 1] / values[i]).ln() / (knots[i + 1] / knots[i]).ln();
        let left = left_exponent.unwrap_or_else(|| if m > 1 { seg(0) } else { 0.0 });
        let right = right_exponent.unwrap_or_else(|| if m > 1 { seg(m - 2) } else { 0.0 });
        Self::new(knots, values, left, right, direction)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn segment_exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn left_exponent(&self) -> f64 {
        self.left_exponent
    }

    pub fn right_exponent(&self) -> f64 {
        self.right_exponent
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Segment exponents together with both extension exponents.
    pub fn all_exponents(&self) -> impl Iterator<Item = f64> + '_ {
        self.exponents.iter().copied().chain([self.left_exponent, self.right_exponent])
    }

    /// Checked evaluation.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || t.is_nan() {
            return Err(Error::Domain(format!("evaluate at t = {t}")));
        }
        Ok(self.value(t))
    }

    /// Evaluation for `t > 0` (`t = inf` gives the limit).
    pub fn value(&self, t: f64) -> f64 {
        self.piece_at(t).eval(t)
    }

    /// Exponent of the power law active just to the right of `t`.
    pub fn exponent_at(&self, t: f64) -> f64 {
        self.piece_at(t).exponent
    }

    fn piece_at(&self, t: f64) -> PowerPiece {
        let m = self.knots.len();
        if t < self.knots[0] {
            return self.left_piece();
        }
        if t >= self.knots[m - 1] {
            return self.right_piece();
        }
        let i = self.knots.partition_point(|&k| k <= t) - 1;
        self.segment(i)
    }

    fn left_piece(&self) -> PowerPiece {
        PowerPiece::new(0.0, self.knots[0], self.knots[0], self.values[0], self.left_exponent)
    }

    fn right_piece(&self) -> PowerPiece {
        let m = self.knots.len();
        PowerPiece::new(
            self.knots[m - 1],
            f64::INFINITY,
            self.knots[m - 1],
            self.values[m - 1],
            self.right_exponent,
        )
    }

    fn segment(&self, i: usize) -> PowerPiece {
        PowerPiece::new(
            self.knots[i],
            self.knots[i + 1],
            self.knots[i],
            self.values[i],
            self.exponents[i],
        )
    }

    /// The power pieces covering (0, ∞), left to right.
    pub fn pieces(&self) -> Vec<PowerPiece> {
        let mut out = Vec::with_capacity(self.knots.len() + 1);
        out.push(self.left_piece());
        out.extend((0..self.exponents.len()).map(|i| self.segment(i)));
        out.push(self.right_piece());
        out
    }

    /// `sup { s : f(s) <= y }` for nondecreasing `f`.
    pub fn generalized_inverse(&self, y: f64) -> Result<f64> {
        if self.direction != Direction::Nondecreasing {
            return Err(Error::Direction);
        }
        if y.is_nan() {
            return Err(Error::Domain("inverse at NaN".into()));
        }
        let m = self.knots.len();
        if y <= 0.0 {
            return Ok(0.0);
        }
        if y >= self.values[m - 1] {
            if self.right_exponent <= 0.0 {
                return Err(Error::Unbounded(y));
            }
            return Ok(self.knots[m - 1] * (y / self.values[m - 1]).powf(1.0 / self.right_exponent));
        }
        let j = self.values.partition_point(|&v| v <= y);
        if j == 0 {
            if self.left_exponent <= 0.0 {
                return Ok(0.0);
            }
            return Ok(self.knots[0] * (y / self.values[0]).powf(1.0 / self.left_exponent));
        }
        let i = j - 1;
        Ok(self.knots[i] * (y / self.values[i]).powf(1.0 / self.exponents[i]))
    }

    /// `∫_a^b f(t) dt` summed exactly over power pieces; `b` may be infinite.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        if !(a >= 0.0) || !(b > a) {
            return Err(Error::Domain(format!("integral over [{a}, {b}]")));
        }
        let mut total = 0.0;
        for p in self.pieces() {
            if p.hi <= a || p.lo >= b {
                continue;
            }
            total += p.integral(a, b)?;
        }
        Ok(total)
    }

    /// Pointwise inverse of a nondecreasing function, as a function.
    ///
    /// Flat runs collapse to their right end (the `sup` convention). When `f`
    /// is constant left of its first knot, the inverse is continued below
    /// `v_1` with the power law of the first rising segment.
    pub fn inverse_fn(&self) -> Result<Self> {
        if self.direction != Direction::Nondecreasing {
            return Err(Error::Direction);
        }
        if self.right_exponent <= 0.0 {
            return Err(Error::Unbounded(f64::INFINITY));
        }
        let mut knots: Vec<f64> = Vec::with_capacity(self.knots.len());
        let mut values: Vec<f64> = Vec::with_capacity(self.knots.len());
        for (&t, &v) in self.knots.iter().zip(&self.values) {
            if let Some(last) = knots.last() {
                if v <= *last {
                    *values.last_mut().unwrap() = t;
                    continue;
                }
            }
            knots.push(v);
            values.push(t);
        }
        let first_rise = self
            .exponents
            .iter()
            .copied()
            .find(|&e| e > 0.0)
            .unwrap_or(self.right_exponent);
        let left = if self.left_exponent > 0.0 {
            1.0 / self.left_exponent
        } else {
            1.0 / first_rise
        };
        Self::new(knots, values, left, 1.0 / self.right_exponent, Direction::Nondecreasing)
    }

    /// `1 / f`.
    pub fn reciprocal(&self) -> Self {
        Self {
            knots: self.knots.clone(),
            values: self.values.iter().map(|v| 1.0 / v).collect(),
            exponents: self.exponents.iter().map(|e| -e).collect(),
            left_exponent: -self.left_exponent,
            right_exponent: -self.right_exponent,
            direction: self.direction.flipped(),
        }
    }

    /// `t / f(t)`; requires every exponent of `f` to be at most 1.
    pub fn identity_over(&self) -> Result<Self> {
        if self.all_exponents().any(|e| e > 1.0) {
            return Err(Error::NonMonotone("t / f(t) would decrease".into()));
        }
        Ok(Self {
            knots: self.knots.clone(),
            values: self.knots.iter().zip(&self.values).map(|(t, v)| t / v).collect(),
            exponents: self.exponents.iter().map(|e| 1.0 - e).collect(),
            left_exponent: 1.0 - self.left_exponent,
            right_exponent: 1.0 - self.right_exponent,
            direction: Direction::Nondecreasing,
        })
    }

    /// `c * f`.
    pub fn scaled(&self, c: f64) -> Self {
        assert!(c > 0.0);
        Self { values: self.values.iter().map(|v| v * c).collect(), ..self.clone() }
    }

    /// Same function on `[at, ∞)`, held constant at `f(at)` on `(0, at]`.
    pub fn restrict_left(&self, at: f64) -> Self {
        let mut knots = vec![at];
        let mut values = vec![self.value(at)];
        for (&t, &v) in self.knots.iter().zip(&self.values) {
            if t > at * (1.0 + 1e-14) {
                knots.push(t);
                values.push(v);
            }
        }
        Self::new(knots, values, 0.0, self.right_exponent, self.direction)
            .expect("restriction of a valid function")
    }

    /// Same function with the left extension replaced by the power law of
    /// the first segment (or of the right tail if there is a single knot).
    pub fn power_extended_below(&self) -> Self {
        let e = self.exponents.first().copied().unwrap_or(self.right_exponent);
        Self { left_exponent: e, ..self.clone() }
    }
}

/// Least-squares slope of `ln y` against `ln n`, with the coefficient of
/// determination.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: points.len() });
    }
    if let Some(&(n, y)) = points.iter().find(|&&(n, y)| !(n > 0.0 && y > 0.0)) {
        return Err(Error::NonPositive(format!("({n}, {y})")));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("all abscissas coincide".into()));
    }
    let slope = sxy / sxx;
    let r2 = if syy <= 1e-300 {
        1.0
    } else {
        let resid: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
            .sum();
        (1.0 - resid / syy).clamp(0.0, 1.0)
    };
    Ok((slope, r2))
}
