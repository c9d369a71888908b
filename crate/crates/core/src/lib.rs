//! Periodic auxiliary functions for linear-programming bounds on sphere
//! packing density.
//!
//! A function `g` that is periodic under a scaled lattice `Λ_m = mΛ`, has a
//! nonnegative cosine expansion over the dual lattice, and is nonpositive
//! wherever the torus distance to the origin is at least one, bounds the
//! number of unit-separated points that fit in `ℝⁿ/Λ_m` by `g(0)/c_0`. This
//! crate provides the pieces needed to build, check and search for such
//! functions:
//!
//! * [`lattice`]: full-rank lattices, dual bases, point enumeration and the
//!   quotient (torus) norm.
//! * [`auxfn`]: finite cosine series and a grid certificate of
//!   nonpositivity on the region `‖[x]‖ ≥ 1`.
//! * [`constructions`]: the explicit one-, two- and three-dimensional
//!   functions together with their exact-sign factorizations.
//! * [`periodization`]: periodizing one-dimensional admissible profiles,
//!   directly and through Poisson summation.
//! * [`lpsearch`]: a discretized LP over cosine coefficients with
//!   cutting-plane refinement, backed by the dense simplex in [`simplex`].
//! * [`bounds`]: conversion to center- and packing-density bounds.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! threaded sweeps live in the `spherelp` companion crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod auxfn;
pub mod bounds;
pub mod constructions;
mod error;
pub mod lattice;
mod linalg;
pub mod lpsearch;
mod math;
pub mod periodization;
pub mod quadrature;
pub mod simplex;

pub use auxfn::{certify_nonpositive, CertificationReport, CosineSeries, Term};
pub use bounds::{BoundKind, DensityBound};
pub use error::{Error, Result};
pub use lattice::{Lattice, QuotientNorm};

/// Largest supported lattice dimension.
pub const MAX_DIM: usize = 8;
