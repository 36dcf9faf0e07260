//! Exact symbolic kernel: polynomials and rational functions over an exact
//! field, charts, parsing, differentiation and linear algebra.

pub mod chart;
pub mod field;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod scaling;

pub use chart::{Chart, CoordKind, Coordinate};
pub use field::{rat, Field};
pub use linalg::{solve_linear, LinearSolution, LinearSolveError, PivotFlag};
pub use monomial::Monomial;
pub use parse::{parse_expr, ParseError};
pub use poly::Polynomial;
pub use ratfunc::{DivisionByZero, RationalFunction};
pub use scaling::{scale_and_limit, ScaleLimit};

use num_rational::BigRational;

/// Exact rational numbers.
pub type Rational = BigRational;
/// Polynomials with rational coefficients.
pub type Poly = Polynomial<Rational>;
/// Rational functions with rational coefficients; the expression type used
/// throughout the crate.
pub type Expr = RationalFunction<Rational>;

/// Parse an expression over `chart` with rational coefficients.
pub fn parse(text: &str, chart: &Chart) -> Result<Expr, ParseError> {
    parse_expr(text, chart)
}

/// Constant expression `n/d`.
pub fn cst(n: i64, d: i64) -> Expr {
    Expr::constant(rat(n, d))
}

/// Integer constant expression.
pub fn int(n: i64) -> Expr {
    Expr::int(n)
}

/// Coordinate `i` as an expression.
pub fn var(i: usize) -> Expr {
    Expr::var(i)
}
