//! Numerical invariants of homogeneous Hilbertian operator spaces described
//! by weight pairs and fundamental functions.

pub mod density;
pub mod error;
pub mod grid;
pub mod invariants;
pub mod growth;
pub mod monotone_fn;
pub mod oracle;
pub mod orlicz;
pub mod power;
pub mod schatten;
pub mod spaces;
pub mod weights;

pub use error::{Error, Result};
pub use monotone_fn::{fit_loglog_slope, Direction, MonotoneFn};
pub use density::{Density, TailWeight};
pub use weights::{WeightDomain, WeightPair};
pub use growth::{regularity_report, GrowthProfile, RegularityReport};
pub use orlicz::OrliczFn;
pub use spaces::{check_space_regularity, SpaceDescriptor, SpaceKind};
pub use invariants::{exactness, pi1_fundamental, projection, sweep, InvariantReport};
pub use schatten::{pi1_of_map, schatten_orlicz_norm, schatten_p_norm, singular_values, ComplexMatrix};
pub use oracle::{aux_diag_norm, indicator_search, orlicz_norm_scan, riemann_integral, SearchGrid};
