//! Spaces described by their column and row fundamental functions.

use serde::{Deserialize, Serialize};

use crate::density::Density;
use crate::error::{Error, Result};
use crate::growth::{growth_fn, growth_grid, regularity_report, RegularityReport, DEFAULT_WINDOW};
use crate::monotone_fn::{Direction, MonotoneFn};
use crate::weights::WeightPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceKind {
    Column,
    Row,
    ColumnCapRow,
    ColumnPlusRow,
    Weighted,
}

impl SpaceKind {
    fn dual(self) -> Self {
        match self {
            SpaceKind::Column => SpaceKind::Row,
            SpaceKind::Row => SpaceKind::Column,
            SpaceKind::ColumnCapRow => SpaceKind::ColumnPlusRow,
            SpaceKind::ColumnPlusRow => SpaceKind::ColumnCapRow,
            SpaceKind::Weighted => SpaceKind::Weighted,
        }
    }
}

/// Where a descriptor came from; drives labels, serialization and duality.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    ColumnP(f64),
    RowP(f64),
    CrP(f64),
    Oh,
    C,
    R,
    CCapR,
    CPlusR,
    Fundamental,
    /// Dual of the boxed descriptor.
    Dual(Box<SpaceDescriptor>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceDescriptor {
    kind: SpaceKind,
    family: Family,
    phi_c: MonotoneFn,
    phi_r: MonotoneFn,
    label: String,
}

/// JSON form of a descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_c: Option<MonotoneFn>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_r: Option<MonotoneFn>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub of: Option<Box<DescriptorSpec>>,
}

fn power_phi(e: f64) -> MonotoneFn {
    MonotoneFn::new(vec![1.0], vec![1.0], 0.0, e, Direction::Nondecreasing).expect("nonnegative exponent")
}

fn check_p(p: f64) -> Result<f64> {
    if p.is_finite() && p > 1.0 {
        Ok(p)
    } else {
        Err(Error::BadParameter(format!("p = {p} must lie in (1, ∞)")))
    }
}

/// `p' = p/(p-1)`.
pub fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

/// `w = 1/Φ⁻¹` beyond 1, held at 1 on (0, 1].
pub fn canonical_weight(phi: &MonotoneFn) -> Result<MonotoneFn> {
    Ok(phi.inverse_fn()?.reciprocal().restrict_left(1.0))
}

impl SpaceDescriptor {
    fn catalog_entry(family: Family, kind: SpaceKind, ec: f64, er: f64, label: String) -> Self {
        Self { kind, family, phi_c: power_phi(ec), phi_r: power_phi(er), label }
    }

    /// `C_p`: `Φ_c = n^{1/p'}`, `Φ_r = n^{1/p}`.
    pub fn column_p(p: f64) -> Result<Self> {
        let p = check_p(p)?;
        Ok(Self::catalog_entry(Family::ColumnP(p), SpaceKind::Weighted, 1.0 - 1.0 / p, 1.0 / p, format!("column_p({p})")))
    }

    /// `R_p ≅ C_{p'}`.
    pub fn row_p(p: f64) -> Result<Self> {
        let p = check_p(p)?;
        Ok(Self::catalog_entry(Family::RowP(p), SpaceKind::Weighted, 1.0 / p, 1.0 - 1.0 / p, format!("row_p({p})")))
    }

    /// `CR_p`: `Φ_c = Φ_r = n^{1/p'}`.
    pub fn cr_p(p: f64) -> Result<Self> {
        let p = check_p(p)?;
        let e = 1.0 - 1.0 / p;
        Ok(Self::catalog_entry(Family::CrP(p), SpaceKind::Weighted, e, e, format!("cr_p({p})")))
    }

    pub fn oh() -> Self {
        Self::catalog_entry(Family::Oh, SpaceKind::Weighted, 0.5, 0.5, "oh".into())
    }

    pub fn c() -> Self {
        Self::catalog_entry(Family::C, SpaceKind::Column, 1.0, 0.0, "c".into())
    }

    pub fn r() -> Self {
        Self::catalog_entry(Family::R, SpaceKind::Row, 0.0, 1.0, "r".into())
    }

    pub fn c_cap_r() -> Self {
        Self::catalog_entry(Family::CCapR, SpaceKind::ColumnCapRow, 1.0, 1.0, "c_cap_r".into())
    }

    pub fn c_plus_r() -> Self {
        Self::catalog_entry(Family::CPlusR, SpaceKind::ColumnPlusRow, 0.0, 0.0, "c_plus_r".into())
    }

    /// Catalog lookup by name.
    pub fn catalog(name: &str, p: Option<f64>) -> Result<Self> {
        let need_p = || p.ok_or_else(|| Error::BadParameter(format!("{name} needs a parameter p")));
        match name {
            "column_p" => Self::column_p(need_p()?),
            "row_p" => Self::row_p(need_p()?),
            "cr_p" => Self::cr_p(need_p()?),
            "oh" => Ok(Self::oh()),
            "c" => Ok(Self::c()),
            "r" => Ok(Self::r()),
            "c_cap_r" => Ok(Self::c_cap_r()),
            "c_plus_r" => Ok(Self::c_plus_r()),
            other => Err(Error::BadParameter(format!("unknown catalog space {other:?}"))),
        }
    }

    /// Regular space with the given fundamental functions.
    pub fn from_fundamental(phi_c: MonotoneFn, phi_r: MonotoneFn) -> Result<Self> {
        for phi in [&phi_c, &phi_r] {
            let rep = regularity_report(phi, DEFAULT_WINDOW);
            if !rep.pass {
                return Err(Error::NotRegular { alpha: rep.alpha, beta: rep.beta });
            }
            if (phi.value(1.0) - 1.0).abs() > 1e-12 {
                return Err(Error::BadParameter(format!("Φ(1) = {} must equal 1", phi.value(1.0))));
            }
            if phi.all_exponents().any(|e| e > 1.0 + 1e-12) {
                return Err(Error::BadParameter("Φ(n)/n must be nonincreasing".into()));
            }
        }
        Ok(Self { kind: SpaceKind::Weighted, family: Family::Fundamental, phi_c, phi_r, label: "fundamental".into() })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn phi_c(&self) -> &MonotoneFn {
        &self.phi_c
    }

    pub fn phi_r(&self) -> &MonotoneFn {
        &self.phi_r
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Parameter of a catalog family.
    pub fn p(&self) -> Option<f64> {
        match self.family {
            Family::ColumnP(p) | Family::RowP(p) | Family::CrP(p) => Some(p),
            _ => None,
        }
    }

    /// Dual space: `Φ*(n) = n/Φ(n)` for both functions.
    pub fn dual(&self) -> Self {
        match &self.family {
            Family::Dual(inner) => (**inner).clone(),
            Family::ColumnP(p) => Self::row_p(*p).expect("valid p"),
            Family::RowP(p) => Self::column_p(*p).expect("valid p"),
            Family::Oh => Self::oh(),
            Family::C => Self::r(),
            Family::R => Self::c(),
            Family::CCapR => Self::c_plus_r(),
            Family::CPlusR => Self::c_cap_r(),
            Family::CrP(_) | Family::Fundamental => Self {
                kind: self.kind.dual(),
                phi_c: self.phi_c.identity_over().expect("exponents at most 1"),
                phi_r: self.phi_r.identity_over().expect("exponents at most 1"),
                label: format!("dual({})", self.label),
                family: Family::Dual(Box::new(self.clone())),
            },
        }
    }

    /// Canonical half-line weights `w̃_c = 1/Φ_c⁻¹`, `w_r = 1/Φ_r⁻¹` (held at 1 on (0,1]).
    pub fn canonical_weights(&self) -> Result<WeightPair> {
        self.require_regular()?;
        let wc = canonical_weight(&self.phi_c)?;
        let wr = canonical_weight(&self.phi_r)?;
        WeightPair::half_line(Density::from_monotone(&wc), Density::from_monotone(&wr))
    }

    /// `NotRegular` unless the space is weighted and both functions pass.
    pub fn require_regular(&self) -> Result<()> {
        let r = check_space_regularity(self);
        if r.pass {
            Ok(())
        } else {
            Err(Error::NotRegular { alpha: r.alpha, beta: r.beta })
        }
    }

    pub fn to_spec(&self) -> DescriptorSpec {
        let simple = |kind: &str, p: Option<f64>| DescriptorSpec { kind: kind.into(), p, phi_c: None, phi_r: None, of: None };
        match &self.family {
            Family::ColumnP(p) => simple("column_p", Some(*p)),
            Family::RowP(p) => simple("row_p", Some(*p)),
            Family::CrP(p) => simple("cr_p", Some(*p)),
            Family::Oh => simple("oh", None),
            Family::C => simple("c", None),
            Family::R => simple("r", None),
            Family::CCapR => simple("c_cap_r", None),
            Family::CPlusR => simple("c_plus_r", None),
            Family::Fundamental => DescriptorSpec {
                phi_c: Some(self.phi_c.clone()),
                phi_r: Some(self.phi_r.clone()),
                ..simple("fundamental", None)
            },
            Family::Dual(inner) => DescriptorSpec { of: Some(Box::new(inner.to_spec())), ..simple("dual", None) },
        }
    }

    pub fn from_spec(spec: &DescriptorSpec) -> Result<Self> {
        match spec.kind.as_str() {
            "fundamental" => {
                let (Some(c), Some(r)) = (&spec.phi_c, &spec.phi_r) else {
                    return Err(Error::BadParameter("fundamental descriptor needs phi_c and phi_r".into()));
                };
                Self::from_fundamental(c.clone(), r.clone())
            }
            "dual" => {
                let inner = spec.of.as_ref().ok_or_else(|| Error::BadParameter("dual descriptor needs \"of\"".into()))?;
                Ok(Self::from_spec(inner)?.dual())
            }
            name => Self::catalog(name, spec.p),
        }
    }
}

/// Aggregate regularity of both fundamental functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceRegularity {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub d: f64,
    pub pass: bool,
    pub column: RegularityReport,
    pub row: RegularityReport,
}

pub fn check_space_regularity(f: &SpaceDescriptor) -> SpaceRegularity {
    let column = regularity_report(f.phi_c(), DEFAULT_WINDOW);
    let row = regularity_report(f.phi_r(), DEFAULT_WINDOW);
    SpaceRegularity {
        alpha: column.alpha.min(row.alpha),
        beta: column.beta.max(row.beta),
        c: column.c.min(row.c),
        d: column.d.max(row.d),
        pass: f.kind() == SpaceKind::Weighted && column.pass && row.pass,
        column,
        row,
    }
}

/// Growth functions `(g_c, g_r)` of a half-line pair, equivalent to the
/// space's fundamental functions.
pub fn fundamental_from_weights(p: &WeightPair) -> Result<(MonotoneFn, MonotoneFn)> {
    let (wc, wr) = p
        .half_line_parts()
        .ok_or_else(|| Error::BadParameter("need a half-line weight pair".into()))?;
    if wc.support_end().is_finite() || wr.support_end().is_finite() {
        return Err(Error::Degenerate("a weight has bounded support, so its growth function is bounded".into()));
    }
    let grid = growth_grid();
    Ok((growth_fn(wc, &grid)?, growth_fn(wr, &grid)?))
}
