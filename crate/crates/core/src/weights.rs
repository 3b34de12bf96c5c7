//! Weight pairs `(u_c, u_r)`, the weight condition, the K-space norm factor,
//! and the conversions between discrete, continuous and normalized pairs.

use std::collections::BTreeMap;

use crate::density::{cell_harmonic_integral, cell_min_integral, overlay, Density};
use crate::error::{Error, Result};

/// Ratio classes outside `[2^-CLASS_SPAN, 2^CLASS_SPAN]` are dropped.
const CLASS_SPAN: f64 = 200.0;

#[derive(Debug, Clone, PartialEq)]
pub enum WeightDomain {
    /// Finitely supported sequences `u_c(j), u_r(j)`.
    Discrete { col: Vec<f64>, row: Vec<f64> },
    /// Densities on (0, ∞) with Lebesgue measure.
    Lebesgue { col: Density, row: Density },
    /// `w_c` on ℝ₋ stored reflected (`col_reflected(s) = w_c(-s)`), `w_r` on ℝ₊;
    /// `w_c = 1` on ℝ₊ and `w_r = 1` on ℝ₋.
    HalfLine { col_reflected: Density, row: Density },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightPair {
    domain: WeightDomain,
    normalized: bool,
}

impl WeightPair {
    pub fn discrete(col: Vec<f64>, row: Vec<f64>) -> Result<Self> {
        if col.is_empty() || col.len() != row.len() {
            return Err(Error::BadParameter("weight sequences must be nonempty and of equal length".into()));
        }
        if col.iter().chain(&row).any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::BadParameter("weights must be positive and finite".into()));
        }
        Ok(Self { domain: WeightDomain::Discrete { col, row }, normalized: false })
    }

    pub fn lebesgue(col: Density, row: Density) -> Result<Self> {
        let p = Self { domain: WeightDomain::Lebesgue { col, row }, normalized: false };
        p.check_weight_condition()?;
        Ok(p)
    }

    /// Half-line pair; both stored densities must be nonincreasing.
    pub fn half_line(col_reflected: Density, row: Density) -> Result<Self> {
        if !col_reflected.is_nonincreasing() || !row.is_nonincreasing() {
            return Err(Error::BadParameter("half-line weights must be nonincreasing away from 0".into()));
        }
        let mut p = Self { domain: WeightDomain::HalfLine { col_reflected, row }, normalized: false };
        p.check_weight_condition()?;
        p.normalized = p.satisfies_normalization(1e-9);
        Ok(p)
    }

    pub fn domain(&self) -> &WeightDomain {
        &self.domain
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Stored `w̃_c` and `w_r` of a half-line pair.
    pub fn half_line_parts(&self) -> Option<(&Density, &Density)> {
        match &self.domain {
            WeightDomain::HalfLine { col_reflected, row } => Some((col_reflected, row)),
            _ => None,
        }
    }

    fn satisfies_normalization(&self, tol: f64) -> bool {
        let Some((c, r)) = self.half_line_parts() else { return false };
        let unit = |d: &Density| d.total().is_ok_and(|m| (m - 1.0).abs() <= tol);
        unit(c) && unit(r)
    }

    /// Continuous pairs as a list of `(u_c, u_r)` densities on disjoint copies of (0, ∞).
    fn components(&self) -> Vec<(Density, Density)> {
        match &self.domain {
            WeightDomain::Discrete { .. } => Vec::new(),
            WeightDomain::Lebesgue { col, row } => vec![(col.clone(), row.clone())],
            WeightDomain::HalfLine { col_reflected, row } => vec![
                (col_reflected.clone(), Density::constant(1.0)),
                (Density::constant(1.0), row.clone()),
            ],
        }
    }

    /// `∫ min(u_c, u_r)` (or the sum over indices).
    pub fn check_weight_condition(&self) -> Result<f64> {
        if let WeightDomain::Discrete { col, row } = &self.domain {
            return Ok(col.iter().zip(row).map(|(a, b)| a.min(*b)).sum());
        }
        let mut total = 0.0;
        for (c, r) in self.components() {
            for cell in overlay(&c, &r) {
                total += cell_min_integral(&cell)?;
            }
        }
        if !total.is_finite() {
            return Err(Error::Divergent("∫ min(u_c, u_r) is infinite".into()));
        }
        Ok(total)
    }

    /// `μ = ∫ u_c u_r / (u_c + u_r)`; the K-space norm of `x` is `√μ ‖x‖₂`.
    pub fn k_norm_factor(&self) -> Result<f64> {
        if let WeightDomain::Discrete { col, row } = &self.domain {
            return Ok(col.iter().zip(row).map(|(a, b)| a * b / (a + b)).sum());
        }
        let mut total = 0.0;
        for (c, r) in self.components() {
            for cell in overlay(&c, &r) {
                total += cell_harmonic_integral(&cell)?;
            }
        }
        Ok(total)
    }

    /// Masses `(u_c(A_j), u_r(A_j))` of the classes
    /// `A_j = { base^-j <= u_r/u_c < base^{-j+1} }`.
    pub fn ratio_classes(&self, base: f64) -> Result<BTreeMap<i64, (f64, f64)>> {
        if !(base > 1.0 && base.is_finite()) {
            return Err(Error::BadParameter(format!("ratio base {base} must exceed 1")));
        }
        let lb = base.ln();
        let span = (CLASS_SPAN * std::f64::consts::LN_2 / lb).floor() as i64;
        // ratios within rounding of base^-j land in class j
        let class_of = |log_ratio: f64| {
            let x = -log_ratio / lb;
            if (x - x.round()).abs() < 1e-9 { x.round() as i64 } else { x.ceil() as i64 }
        };
        let mut classes: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
        let mut add = |j: i64, mc: f64, mr: f64| {
            if j.abs() <= span && mc > 0.0 {
                let e = classes.entry(j).or_insert((0.0, 0.0));
                e.0 += mc;
                e.1 += mr;
            }
        };
        if let WeightDomain::Discrete { col, row } = &self.domain {
            for (&a, &b) in col.iter().zip(row) {
                add(class_of((b / a).ln()), a, b);
            }
            return Ok(classes);
        }
        for (c, r) in self.components() {
            for cell in overlay(&c, &r) {
                let (Some(pc), Some(pr)) = (cell.a, cell.b) else { continue };
                let slope = pr.exponent - pc.exponent;
                // ln(u_r/u_c) = r1 + slope·ln t
                let r1 = pr.value.ln() - pr.exponent * pr.anchor.ln() - pc.value.ln() + pc.exponent * pc.anchor.ln();
                if slope == 0.0 {
                    let mc = pc.integral(cell.lo, cell.hi).map_err(to_divergent)?;
                    let mr = pr.integral(cell.lo, cell.hi).map_err(to_divergent)?;
                    add(class_of(r1), mc, mr);
                    continue;
                }
                let log_at = |t: f64| {
                    if t == 0.0 {
                        -slope.signum() * f64::INFINITY
                    } else if t.is_infinite() {
                        slope.signum() * f64::INFINITY
                    } else {
                        r1 + slope * t.ln()
                    }
                };
                let (ra, rb) = (log_at(cell.lo), log_at(cell.hi));
                let (rmin, rmax) = (ra.min(rb), ra.max(rb));
                let cap = span as f64 * lb;
                let j_lo = class_of(rmax.min(cap)).max(-span);
                let j_hi = class_of(rmin.max(-cap)).min(span);
                for j in j_lo..=j_hi {
                    // class j covers log ratios in [-j lb, -(j-1) lb)
                    let (l0, l1) = (-(j as f64) * lb, -((j - 1) as f64) * lb);
                    let t_of = |l: f64| ((l - r1) / slope).exp();
                    let (ta, tb) = if slope > 0.0 { (t_of(l0), t_of(l1)) } else { (t_of(l1), t_of(l0)) };
                    let lo = ta.max(cell.lo);
                    let hi = tb.min(cell.hi);
                    if hi <= lo {
                        continue;
                    }
                    let mc = pc.integral(lo, hi).map_err(to_divergent)?;
                    let mr = pr.integral(lo, hi).map_err(to_divergent)?;
                    add(j, mc, mr);
                }
            }
        }
        Ok(classes)
    }

    /// Discrete pair on the ratio classes: `ũ_c(j) = u_c(A_j)`, `ũ_r(j) = base^-j ũ_c(j)`.
    pub fn discretize(&self, ratio_base: f64) -> Result<WeightPair> {
        let classes = self.ratio_classes(ratio_base)?;
        let (col, row): (Vec<f64>, Vec<f64>) = classes
            .iter()
            .filter(|(_, &(mc, _))| mc > 0.0 && mc.is_finite())
            .map(|(&j, &(mc, _))| (mc, ratio_base.powi(-(j as i32)) * mc))
            .filter(|&(_, r)| r > 0.0)
            .unzip();
        if col.is_empty() {
            return Err(Error::Divergent("no ratio class has finite positive mass".into()));
        }
        WeightPair::discrete(col, row)
    }

    /// Step densities `Σ ũ(j) 1_(j-1, j]` of a discrete pair.
    pub fn continuize(&self) -> Result<WeightPair> {
        let WeightDomain::Discrete { col, row } = &self.domain else {
            return Err(Error::BadParameter("continuize needs a discrete pair".into()));
        };
        let edges: Vec<f64> = (0..=col.len()).map(|j| j as f64).collect();
        WeightPair::lebesgue(Density::steps(&edges, col)?, Density::steps(&edges, row)?)
    }

    /// Half-line pair satisfying the normalization clauses, built on dyadic ratio classes.
    pub fn normalize(&self) -> Result<WeightPair> {
        if self.normalized {
            return Ok(self.clone());
        }
        let lambda = self.check_weight_condition()?.max(1.0);
        // k indexes { 2^-k-1 <= u_r/u_c < 2^-k }, which is class j = k + 1 for base 2.
        let classes: BTreeMap<i64, (f64, f64)> =
            self.ratio_classes(2.0)?.into_iter().map(|(j, m)| (j - 1, m)).collect();
        let amp = |k: i64| 2f64.powi(k as i32) / (2.0 * lambda);

        let mut col_edges = vec![0.0, 1.0];
        let mut col_values = vec![0.0];
        let mut s = 1.0;
        for k in (-(CLASS_SPAN as i64) - 2..=-2).rev() {
            let Some(&(_, len)) = classes.get(&(k + 1)) else { continue };
            if !(len > 0.0) || !len.is_finite() {
                continue;
            }
            s += len;
            col_edges.push(s);
            col_values.push(amp(k));
        }
        let col_mass: f64 = col_edges.windows(2).skip(1).zip(&col_values[1..]).map(|(e, v)| (e[1] - e[0]) * v).sum();
        col_values[0] = 1.0 - col_mass;

        let mut row_edges = vec![0.0, 1.0];
        let mut row_values = vec![0.0];
        let mut s = 1.0;
        for (&k, &(len, _)) in classes.range(1..) {
            if !(len > 0.0) || !len.is_finite() {
                continue;
            }
            s += len;
            row_edges.push(s);
            row_values.push(amp(-k - 1));
        }
        let row_mass: f64 = row_edges.windows(2).skip(1).zip(&row_values[1..]).map(|(e, v)| (e[1] - e[0]) * v).sum();
        row_values[0] = 1.0 - row_mass;

        let col_reflected = Density::steps(&col_edges, &col_values)?;
        let row = Density::steps(&row_edges, &row_values)?;
        let mut out = WeightPair::half_line(col_reflected, row)?;
        out.normalized = true;
        Ok(out)
    }
}

fn to_divergent(e: Error) -> Error {
    match e {
        Error::DivergentTail(m) => Error::Divergent(m),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotone_fn::MonotoneFn;

    fn geometric_pair(n: usize) -> WeightPair {
        let col = vec![1.0; n];
        let row = (1..=n).map(|j| 0.5f64.powi(j as i32)).collect();
        WeightPair::discrete(col, row).unwrap()
    }

    #[test]
    fn geometric_weight_condition() {
        let v = geometric_pair(60).check_weight_condition().unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn geometric_norm_factor() {
        let mu = geometric_pair(60).k_norm_factor().unwrap();
        let mut oracle = 0.0;
        let mut j = 1;
        loop {
            let r = 0.5f64.powi(j);
            let term = r / (1.0 + r);
            oracle += term;
            if term < 1e-18 {
                break;
            }
            j += 1;
        }
        assert!((mu - oracle).abs() < 1e-10, "{mu} vs {oracle}");
        assert!((mu - 0.7645).abs() < 1e-4);
    }

    #[test]
    fn equal_unit_weights_diverge() {
        let r = WeightPair::lebesgue(Density::constant(1.0), Density::constant(1.0));
        assert!(matches!(r, Err(Error::Divergent(_))));
    }

    #[test]
    fn equal_weights_halve() {
        let v = Density::from_monotone(&MonotoneFn::power(-3.0).unwrap().restrict_left(1.0));
        let p = WeightPair::lebesgue(v.clone(), v.clone()).unwrap();
        let total = v.total().unwrap();
        assert!((p.k_norm_factor().unwrap() - total / 2.0).abs() < 1e-12);
    }

    fn inverse_square_on_unit_tail() -> WeightPair {
        let one = Density::steps(&[1.0, f64::INFINITY], &[1.0]).unwrap();
        let tail = Density::from_monotone(&MonotoneFn::power(-2.0).unwrap()).pieces()[1..].to_vec();
        WeightPair::lebesgue(one, Density::new(tail).unwrap()).unwrap()
    }

    #[test]
    fn discretize_inverse_square() {
        let p = inverse_square_on_unit_tail();
        let classes = p.ratio_classes(4.0).unwrap();
        for j in 1..30 {
            let (mc, mr) = classes[&j];
            let expect_c = 2f64.powi(j as i32 - 1);
            assert!((mc - expect_c).abs() < 1e-9 * expect_c, "class {j}: {mc}");
            // numeric bin integration of s^-2 over [2^{j-1}, 2^j)
            let (a, b) = (2f64.powi(j as i32 - 1), 2f64.powi(j as i32));
            assert!((mr - (1.0 / a - 1.0 / b)).abs() < 1e-9 * mr);
        }
        let d = p.discretize(4.0).unwrap();
        let WeightDomain::Discrete { col, row } = d.domain() else { panic!() };
        for j in 0..10 {
            assert!((col[j] - 2f64.powi(j as i32)).abs() < 1e-9 * col[j]);
            assert!((row[j] - 2f64.powi(-(j as i32) - 2)).abs() < 1e-9 * row[j]);
        }
        assert!(d.check_weight_condition().unwrap() <= p.check_weight_condition().unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn discretize_equal_weights_single_class() {
        let v = Density::from_monotone(&MonotoneFn::power(-2.0).unwrap().restrict_left(1.0));
        let d = WeightPair::lebesgue(v.clone(), v).unwrap().discretize(2.0).unwrap();
        let WeightDomain::Discrete { col, row } = d.domain() else { panic!() };
        assert_eq!(col.len(), 1);
        assert_eq!(col, row);
    }

    #[test]
    fn continuize_unit() {
        let p = WeightPair::discrete(vec![1.0], vec![1.0]).unwrap().continuize().unwrap();
        let WeightDomain::Lebesgue { col, row } = p.domain() else { panic!() };
        assert_eq!(col.evaluate(0.5), 1.0);
        assert_eq!(row.evaluate(1.5), 0.0);
        assert_eq!(p.check_weight_condition().unwrap(), 1.0);
    }

    #[test]
    fn normalize_clauses() {
        let n = inverse_square_on_unit_tail().normalize().unwrap();
        assert!(n.is_normalized());
        let (c, r) = n.half_line_parts().unwrap();
        assert!((c.total().unwrap() - 1.0).abs() < 1e-9);
        assert!((r.total().unwrap() - 1.0).abs() < 1e-9);
        assert!(c.is_nonincreasing() && r.is_nonincreasing());
        let again = n.normalize().unwrap();
        assert_eq!(again, n);
    }
}
