//! Single power-law pieces `v * (t / anchor)^e` and their exact integrals.

use crate::error::{Error, Result};

/// `value * (t / anchor)^exponent` on `[lo, hi]`, with `0 <= lo < hi <= inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerPiece {
    pub lo: f64,
    pub hi: f64,
    pub anchor: f64,
    pub value: f64,
    pub exponent: f64,
}

impl PowerPiece {
    pub fn new(lo: f64, hi: f64, anchor: f64, value: f64, exponent: f64) -> Self {
        Self { lo, hi, anchor, value, exponent }
    }

    /// Piece through `(a, va)` and `(b, vb)` on `[a, b]`.
    pub fn through(a: f64, va: f64, b: f64, vb: f64) -> Self {
        let e = (vb / va).ln() / (b / a).ln();
        Self::new(a, b, a, va, e)
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        if self.exponent == 0.0 {
            self.value
        } else {
            self.value * (t / self.anchor).powf(self.exponent)
        }
    }

    #[inline]
    pub fn ln_eval(&self, t: f64) -> f64 {
        self.value.ln() + self.exponent * (t / self.anchor).ln()
    }

    /// Integral over `[a, b]`, clipped to the piece.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        let lo = a.max(self.lo);
        let hi = b.min(self.hi);
        if hi <= lo {
            return Ok(0.0);
        }
        power_integral(self.value, self.anchor, self.exponent, lo, hi)
    }

    /// Same piece multiplied by `c * t^k`.
    pub fn times_power(&self, c: f64, k: f64) -> Self {
        Self {
            value: self.value * c * self.anchor.powf(k),
            exponent: self.exponent + k,
            ..*self
        }
    }

    pub fn restricted(&self, lo: f64, hi: f64) -> Self {
        Self { lo, hi, ..*self }
    }
}

/// `∫_lo^hi v (t/anchor)^e dt` in closed form, `0 <= lo < hi <= inf`.
pub fn power_integral(v: f64, anchor: f64, e: f64, lo: f64, hi: f64) -> Result<f64> {
    debug_assert!(lo < hi);
    let c = e + 1.0;
    if hi.is_infinite() {
        if c >= 0.0 {
            return Err(Error::DivergentTail(format!("exponent {e} at infinity")));
        }
        if lo == 0.0 {
            return Err(Error::DivergentTail("integral over the whole half-line".into()));
        }
        return Ok(v * (lo / anchor).powf(e) * lo / -c);
    }
    if lo == 0.0 {
        if c <= 0.0 {
            return Err(Error::DivergentTail(format!("exponent {e} at zero")));
        }
        return Ok(v * (hi / anchor).powf(e) * hi / c);
    }
    let v_lo = v * (lo / anchor).powf(e);
    let r = (hi / lo).ln();
    if c == 0.0 {
        Ok(v_lo * lo * r)
    } else {
        Ok(v_lo * lo * (c * r).exp_m1() / c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_square_tail() {
        assert!((power_integral(1.0, 1.0, -2.0, 1.0, f64::INFINITY).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log_segment() {
        let v = power_integral(1.0, 1.0, -1.0, 1.0, std::f64::consts::E).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn near_log_exponent_is_continuous() {
        let a = power_integral(1.0, 1.0, -1.0 + 1e-12, 1.0, 10.0).unwrap();
        assert!((a - 10f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn divergence() {
        assert!(power_integral(1.0, 1.0, -1.0, 1.0, f64::INFINITY).is_err());
        assert!(power_integral(1.0, 1.0, -1.5, 0.0, 1.0).is_err());
    }
}
