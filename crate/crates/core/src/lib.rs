//! Matched interface and boundary (MIB) finite differences for 2D
//! linear-elasticity interface problems.
//!
//! A closed curve splits a rectangular domain into two phases with their own
//! Lamé parameters. Displacements satisfy the static elasticity equations on
//! each side, coupled through displacement and traction jump conditions on the
//! curve, with Dirichlet data on the outer boundary. The solver keeps the
//! standard central stencils everywhere and replaces cross-interface stencil
//! references by *fictitious values*: affine combinations of true grid
//! unknowns plus jump data, constructed so that the interface conditions hold
//! to the order of the scheme.
//!
//! Pipeline: [`geometry`] locates the interface on the mesh lines, [`grid`]
//! classifies nodes, [`fictitious`] builds the ghost-value representations,
//! [`assembly`] emits the sparse system, [`solver`] runs BiCGStab, and
//! [`norms`] measures errors against the manufactured solutions in [`mms`].
//!
//! The crate is `no_std` (with `alloc`); transcendentals come from `libm`.

#![no_std]

extern crate alloc;

pub mod assembly;
pub mod fictitious;
pub mod geometry;
pub mod grid;
pub mod interp;
pub mod jump;
pub mod material;
pub mod math;
pub mod mms;
pub mod norms;
pub mod pipeline;
pub mod smallsys;
pub mod solver;

pub use assembly::{assemble, AssembleError, SparseSystem};
pub use fictitious::{build_rep_table, FictError, FictitiousRep, RepTable};
pub use geometry::{classify_point, find_crossings, Crossing, GeometryError, InterfaceCurve, PointClass, Side};
pub use grid::{Classification, Grid, GridError, GridSpec};
pub use jump::{build_jump_system, eliminate, CombinedConditions, DropPair, JumpSystem};
pub use material::{p_wave_modulus, ElasticField, MaterialError};
pub use mms::{Case, CaseId, JumpData};
pub use norms::{compute_order, error_norms, ErrorNorms};
pub use pipeline::{run_case, PipelineError, RunOutput, Stage};
pub use solver::{bicgstab, Preconditioner, SolveStats, SolverConfig, SolverError};
