//! Exact computations with positively graded quiver algebras carrying a
//! stratification order: standard and proper costandard modules, graded
//! Ext, tilting modules, Ringel and Koszul duals.

// Index loops mirror the matrix notation they implement.
#![allow(clippy::needless_range_loop, clippy::too_many_arguments, clippy::type_complexity)]

pub mod algebra;
pub mod context;
pub mod duality;
pub mod error;
pub mod homology;
pub mod linalg;
pub mod module;
pub mod projective;
pub mod strat;
pub mod tcomplex;
pub mod text;
pub mod tilting;

pub use algebra::{build_algebra, GradedAlgebra, Presentation, Quiver};
pub use error::{Error, Result};
pub use linalg::{Field, Matrix, Scalar};
pub use strat::StratOrder;
