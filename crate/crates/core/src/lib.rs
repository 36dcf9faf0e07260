//! Exact symbolic calculus on Lie algebroids.
//!
//! The crate is organised bottom-up:
//!
//! - [`symexpr`]: polynomials and rational functions over an exact field.
//! - [`algebroid`]: Lie algebroids presented in a global frame.
//! - [`calculus`]: the Koszul differential, Schouten bracket and bivector
//!   calculus on algebroid multivectors and forms.
//! - [`cosymplectic`]: cosymplectic structures, Reeb sections and the
//!   underlying Poisson bivector.
//! - [`pullback`]: pullback algebroids along bundle projections, generator
//!   sections, canonical forms, the canonical involution and the IM cocycle
//!   identities of the canonical two-form.
//! - [`geometry`]: transversals, coisotropic and Lagrangian tests, minimal
//!   Lagrangians, local models, linearization and the nonlinearizability scan.

pub mod algebroid;
pub mod calculus;
pub mod cosymplectic;
pub mod geometry;
pub mod pullback;
pub mod symexpr;

pub use algebroid::{AlgebroidData, Section};
pub use calculus::{AForm, Multivector};
pub use symexpr::{Chart, Expr, Poly, Rational};
