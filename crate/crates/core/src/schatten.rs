//! Singular values, Schatten and Schatten–Orlicz norms, and `π₁ᵒ` of finite
//! matrices through the Orlicz function of the pair `(E, F)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::invariants::pi1_fundamental;
use crate::orlicz::{from_fundamental_sequence, sequence_norm, OrliczFn};
use crate::spaces::SpaceDescriptor;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::BadParameter(format!(
                "{rows}×{cols} matrix with {} entries",
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::BadParameter("non-finite matrix entry".into()));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len().max(1);
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &v) in d.iter().enumerate() {
            entries[i * n + i] = Complex64::new(v, 0.0);
        }
        Self { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_nalgebra(&self.to_nalgebra().adjoint())
    }

    /// Matrix product; `BadParameter` on a dimension mismatch.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::BadParameter(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_nalgebra(&(self.to_nalgebra() * other.to_nalgebra())))
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.entries)
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        let entries = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)])).collect();
        Self { rows: m.nrows(), cols: m.ncols(), entries }
    }
}

/// Singular values in nonincreasing order.
pub fn singular_values(x: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = x.to_nalgebra().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `‖x‖_{S_p}` for `p ∈ [1, ∞]`.
pub fn schatten_p_norm(x: &ComplexMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::BadParameter(format!("Schatten exponent p = {p} < 1")));
    }
    let s = singular_values(x);
    if p.is_infinite() {
        return Ok(s.first().copied().unwrap_or(0.0));
    }
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(0.0);
    }
    Ok(top * s.iter().map(|v| (v / top).powf(p)).sum::<f64>().powf(1.0 / p))
}

/// `‖x‖_φ` of the singular value sequence.
pub fn schatten_orlicz_norm(x: &ComplexMatrix, phi: &OrliczFn) -> f64 {
    sequence_norm(phi, &singular_values(x))
}

/// Dimensions at which the Orlicz function of a pair is sampled.
pub fn pi1_grid() -> Vec<f64> {
    (0..=20).map(|k| f64::powi(2.0, k)).collect()
}

type Cache = Mutex<HashMap<String, Arc<OrliczFn>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Orlicz function with fundamental sequence `π₁ᵒ(id_n : E → F)`, cached per pair.
pub fn pi1_orlicz(e: &SpaceDescriptor, f: &SpaceDescriptor) -> Result<Arc<OrliczFn>> {
    let key = format!("{:?}|{:?}", e.to_spec(), f.to_spec());
    if let Some(phi) = cache().lock().expect("cache lock").get(&key) {
        return Ok(phi.clone());
    }
    let data = pi1_grid()
        .into_iter()
        .map(|n| Ok((n, pi1_fundamental(e, f, n)?.pi1)))
        .collect::<Result<Vec<_>>>()?;
    let phi = Arc::new(from_fundamental_sequence(&data)?);
    cache().lock().expect("cache lock").insert(key, phi.clone());
    Ok(phi)
}

/// `π₁ᵒ(x : E → F)` up to a universal constant.
pub fn pi1_of_map(e: &SpaceDescriptor, f: &SpaceDescriptor, x: &ComplexMatrix) -> Result<f64> {
    let phi = pi1_orlicz(e, f)?;
    Ok(schatten_orlicz_norm(x, &phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(singular_values(&ComplexMatrix::identity(5)), vec![1.0; 5]);
        let s = singular_values(&ComplexMatrix::diagonal(&[3.0, -4.0, 0.0]));
        assert!((s[0] - 4.0).abs() < 1e-12 && (s[1] - 3.0).abs() < 1e-12 && s[2].abs() < 1e-12);
    }

    #[test]
    fn p_norms_of_identity() {
        let id = ComplexMatrix::identity(7);
        for &p in &[1.0, 2.0, 3.5] {
            assert!((schatten_p_norm(&id, p).unwrap() - f64::powf(7.0, 1.0 / p)).abs() < 1e-12);
        }
        assert_eq!(schatten_p_norm(&id, f64::INFINITY).unwrap(), 1.0);
        assert!(matches!(schatten_p_norm(&id, 0.5), Err(Error::BadParameter(_))));
    }

    #[test]
    fn rank_one() {
        let u = [1.0, 2.0, 2.0];
        let v = [3.0, 4.0];
        let e: Vec<f64> = u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect();
        let x = ComplexMatrix::from_real(3, 2, &e).unwrap();
        for &p in &[1.0, 2.0, 7.0, f64::INFINITY] {
            assert!((schatten_p_norm(&x, p).unwrap() - 15.0).abs() < 1e-10);
        }
    }

    #[test]
    fn bad_shapes() {
        assert!(ComplexMatrix::from_real(2, 2, &[1.0; 3]).is_err());
        assert!(ComplexMatrix::from_real(1, 1, &[f64::NAN]).is_err());
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(a.mul(&b).is_err());
    }
}
