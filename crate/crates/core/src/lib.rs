//! Computational Bertini theorems over finite fields.
//!
//! The crate predicts densities of smooth hypersurface sections from zeta
//! functions, measures them by exhaustive or Monte-Carlo enumeration of
//! forms, and builds the classical example objects: sections through
//! prescribed points, space-avoiding sections and anti-Bertini hypersurfaces.

pub mod construct;
pub mod error;
pub mod geometry;
pub mod gf;
pub mod linalg;
pub mod mpoly;
pub mod scan;
pub mod sieve;
pub mod smoothness;
pub mod zeta;

pub use error::{Error, Result};
