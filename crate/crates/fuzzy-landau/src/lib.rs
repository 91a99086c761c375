//! Structure-preserving desk-scale laboratory for the fuzzy (delocalised
//! collision) Landau equation and its spatially homogeneous reduction.
//!
//! The crate provides:
//! - tensor phase-space grids with quadrature and exactness-contracted
//!   velocity gradients ([`grid`]),
//! - interaction kernel families, derived drift/reaction coefficients and
//!   spatial coupling kernels ([`kernels`]),
//! - convolved coefficient assembly and two independent discrete forms of the
//!   collision operator with exact conservation and entropy dissipation
//!   ([`collision`]),
//! - operator-split time integration with trajectory diagnostics ([`solver`]),
//! - entropy/Fisher/moment/norm functionals ([`functionals`]),
//! - coercivity scans, a functional-inequality verification registry, growth
//!   rate fits and the Riccati blow-up bound ([`analysis`]).

// index loops mirror the stencil/offset arithmetic; `!(x > 0)` deliberately
// rejects NaN in validation paths
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod collision;
pub mod functionals;
pub mod grid;
pub mod kernels;
pub mod la;
pub mod solver;

pub use grid::{build_grid, Field, Grid, GridSpec, VField};
pub use kernels::{SpatialKernelSpec, VelocityKernelSpec};
