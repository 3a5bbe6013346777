//! Exact implicitization of rational surfaces given by sparse (Laurent)
//! parameterizations, by the toric Chow-form hybrid matrix and by moving
//! planes and quadrics.
pub mod chowform;
pub mod error;
pub mod exact_algebra;
pub mod exact_linalg;
pub mod lattice_geometry;
pub mod moving_surfaces;
pub mod oracle;
pub mod surface;
pub mod surface_io;

pub use chowform::{implicitize_chow, ImplicitResult};
pub use error::{Error, Result};
pub use exact_algebra::{Monomial, Polynomial, Rational, Var};
pub use moving_surfaces::implicitize_mq;
pub use surface::Surface;
