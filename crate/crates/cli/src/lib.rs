//! Front end for the `osinv` binary: descriptor and grid parsing, tables,
//! exponent fits and the verification suites.

pub mod descriptor;
pub mod error;
pub mod fit;
pub mod grid_arg;
pub mod table;
pub mod verify;

pub use descriptor::parse_space_descriptor;
pub use error::CliError;
pub use grid_arg::parse_grid;

/// Crate version, recorded in every table's metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
