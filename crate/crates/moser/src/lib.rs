//! Numerical relative Poincaré primitives and two-step cosymplectic Moser
//! flows on tangent-bundle charts of dimension at most three.
//!
//! Symbolic inputs are evaluated exactly at grid nodes; off-node values of
//! symbolic forms use a compiled floating-point evaluation, and off-node
//! values of derived grid data use tensor-product cubic interpolation. Flows
//! are integrated by fixed-step RK4, and pullback residuals are measured with
//! fourth-order finite differences on the inner half of the box.

mod compiled;
mod dump;
mod error;
mod fd;
mod field;
mod flow;
mod model;
mod poincare;
mod quadrature;
mod real;

pub use compiled::{CompiledExpr, CompiledForm};
pub use dump::{read_grid_dump, write_grid_dump, GridDump, GRID_DUMP_MAGIC, GRID_DUMP_VERSION};
pub use error::MoserError;
pub use fd::{exterior_derivative, fd_weights, first_derivatives_on, partial_derivative};
pub use field::{
    default_step, Grid, GridForm, GridFunction, NumericField, Region, DEFAULT_TOLERANCE,
};
pub use flow::{moser_flow, Diagnostics, MoserResult};
pub use model::{pull_back_form, verify_local_model_numeric, LocalModelRun};
pub use poincare::{poincare_primitive, sample_form};
pub use quadrature::gauss_legendre;
pub use real::Real;

pub type MoserResult64 = MoserResult<f64>;
pub type GridForm64 = GridForm<f64>;
pub type GridFunction64 = GridFunction<f64>;
