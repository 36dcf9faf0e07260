//! Exact linear algebra over the field of rational functions.
//!
//! Elimination runs over the rational-function field with constant-first
//! pivoting: a constant pivot is taken whenever one exists in the column, so
//! a non-constant pivot signals that the rank may drop on its zero set.

use super::chart::Chart;
use super::field::Field;
use super::poly::Polynomial;
use super::ratfunc::RationalFunction;

type RF<C> = RationalFunction<C>;

/// A pivot that is not a nonzero constant, so rank statements made from the
/// elimination hold only off its zero set.
#[derive(Clone, Debug, PartialEq)]
pub struct PivotFlag<C: Field> {
    pub column: usize,
    pub pivot: RF<C>,
}

impl<C: Field> PivotFlag<C> {
    pub fn describe(&self, chart: &Chart) -> String {
        format!(
            "pivot {} vanishes on {{{}=0}}",
            chart.render(&self.pivot),
            chart.render_poly(self.pivot.numerator())
        )
    }
}

/// Reduced row-echelon form together with the pivots used to reach it.
#[derive(Clone, Debug)]
pub struct Echelon<C: Field> {
    /// Rows in reduced form; pivot rows come first, in pivot order.
    pub rows: Vec<Vec<RF<C>>>,
    /// `(row, column)` of each pivot.
    pub pivot_positions: Vec<(usize, usize)>,
    /// Pivot values before normalisation.
    pub pivots: Vec<RF<C>>,
    /// Row permutation: `order[k]` is the original index of reduced row `k`.
    pub order: Vec<usize>,
    pub swaps: usize,
}

impl<C: Field> Echelon<C> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn flags(&self) -> Vec<PivotFlag<C>> {
        self.pivots
            .iter()
            .zip(&self.pivot_positions)
            .filter(|(p, _)| !certainly_nonvanishing(p))
            .map(|(p, &(_, c))| PivotFlag {
                column: c,
                pivot: p.clone(),
            })
            .collect()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivot_positions.iter().map(|&(_, c)| c).collect()
    }

    pub fn free_columns(&self, ncols: usize) -> Vec<usize> {
        let pc = self.pivot_columns();
        (0..ncols).filter(|c| !pc.contains(c)).collect()
    }
}

/// True when `e` is a nonzero rational function with no real zeros that the
/// cheap sufficient test detects: a nonzero constant, or a numerator whose
/// monomials all have even exponents and positive coefficients including a
/// positive constant term.
pub fn certainly_nonvanishing<C: Field>(e: &RF<C>) -> bool {
    positive_definite_like(e.numerator())
}

fn positive_definite_like<C: Field>(p: &Polynomial<C>) -> bool {
    if p.is_zero() {
        return false;
    }
    if p.is_constant() {
        return true;
    }
    let sign_ok =
        p.terms().all(|(_, c)| c.is_positive()) || p.terms().all(|(_, c)| c.is_negative());
    let even = p
        .terms()
        .all(|(m, _)| m.exponents().iter().all(|e| e % 2 == 0));
    sign_ok && even && !p.constant_term().is_zero()
}

fn pivot_cost<C: Field>(e: &RF<C>) -> (u8, u32, usize) {
    if e.is_constant() {
        return (0, 0, 0);
    }
    let deg =
        e.numerator().total_degree().unwrap_or(0) + e.denominator().total_degree().unwrap_or(0);
    let nonvanishing = if certainly_nonvanishing(e) { 1 } else { 2 };
    (
        nonvanishing,
        deg,
        e.numerator().num_terms() + e.denominator().num_terms(),
    )
}

/// Reduced row-echelon form of `a` (optionally restricted to the first
/// `pivot_cols` columns when choosing pivots, for augmented systems).
pub fn echelon<C: Field>(a: &[Vec<RF<C>>], pivot_cols: Option<usize>) -> Echelon<C> {
    let mut rows: Vec<Vec<RF<C>>> = a.to_vec();
    let mut order: Vec<usize> = (0..rows.len()).collect();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let pc = pivot_cols.unwrap_or(ncols).min(ncols);
    let mut pivot_positions = Vec::new();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..pc {
        if r >= rows.len() {
            break;
        }
        let best = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| pivot_cost(&rows[i][c]));
        let Some(p) = best else { continue };
        if p != r {
            rows.swap(p, r);
            order.swap(p, r);
            swaps += 1;
        }
        let pv = rows[r][c].clone();
        let inv = pv.recip().expect("pivot is nonzero");
        for j in c..ncols {
            if !rows[r][j].is_zero() {
                rows[r][j] = &rows[r][j] * &inv;
            }
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..ncols {
                if !rows[r][j].is_zero() {
                    let t = &f * &rows[r][j];
                    rows[i][j] = &rows[i][j] - &t;
                }
            }
        }
        pivot_positions.push((r, c));
        pivots.push(pv);
        r += 1;
    }
    Echelon {
        rows,
        pivot_positions,
        pivots,
        order,
        swaps,
    }
}

/// Rank over the rational-function field with the pivots that certify it.
pub fn rank<C: Field>(a: &[Vec<RF<C>>]) -> (usize, Vec<PivotFlag<C>>) {
    let e = echelon(a, None);
    (e.rank(), e.flags())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution<C: Field> {
    /// A particular solution (free unknowns set to zero).
    pub solution: Vec<RF<C>>,
    pub rank: usize,
    pub free_columns: Vec<usize>,
    /// Pivots that vanish somewhere; the solution is only valid off their
    /// zero sets.
    pub flags: Vec<PivotFlag<C>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinearSolveError {
    #[error("inconsistent system: row {row} reduces to 0 = nonzero")]
    Inconsistent { row: usize },
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

/// Solve `a · s = b` exactly.
pub fn solve_linear<C: Field>(
    a: &[Vec<RF<C>>],
    b: &[RF<C>],
) -> Result<LinearSolution<C>, LinearSolveError> {
    if a.len() != b.len() {
        return Err(LinearSolveError::Shape(format!(
            "{} rows but {} right-hand sides",
            a.len(),
            b.len()
        )));
    }
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    if a.iter().any(|r| r.len() != n) {
        return Err(LinearSolveError::Shape("ragged matrix".into()));
    }
    let aug: Vec<Vec<RF<C>>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let e = echelon(&aug, Some(n));
    for i in e.rank()..e.rows.len() {
        if !e.rows[i][n].is_zero() {
            return Err(LinearSolveError::Inconsistent { row: e.order[i] });
        }
    }
    let mut sol = vec![RF::zero(); n];
    for &(r, c) in &e.pivot_positions {
        sol[c] = e.rows[r][n].clone();
    }
    Ok(LinearSolution {
        solution: sol,
        rank: e.rank(),
        free_columns: e.free_columns(n),
        flags: e.flags(),
    })
}

/// Basis of the right kernel of `a` over the rational-function field.
pub fn kernel<C: Field>(a: &[Vec<RF<C>>], ncols: usize) -> Vec<Vec<RF<C>>> {
    if a.is_empty() {
        return (0..ncols)
            .map(|j| {
                (0..ncols)
                    .map(|i| if i == j { RF::one() } else { RF::zero() })
                    .collect()
            })
            .collect();
    }
    let e = echelon(a, None);
    let free = e.free_columns(ncols);
    free.iter()
        .map(|&f| {
            let mut v = vec![RF::zero(); ncols];
            v[f] = RF::one();
            for &(r, c) in &e.pivot_positions {
                v[c] = -&e.rows[r][f];
            }
            v
        })
        .collect()
}

pub fn determinant<C: Field>(a: &[Vec<RF<C>>]) -> RF<C> {
    let n = a.len();
    let e = echelon(a, None);
    if e.rank() < n {
        return RF::zero();
    }
    let mut d = RF::one();
    for p in &e.pivots {
        d = &d * p;
    }
    if e.swaps % 2 == 1 {
        -d
    } else {
        d
    }
}

pub fn inverse<C: Field>(a: &[Vec<RF<C>>]) -> Option<Vec<Vec<RF<C>>>> {
    let n = a.len();
    let aug: Vec<Vec<RF<C>>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { RF::one() } else { RF::zero() }));
            r
        })
        .collect();
    let e = echelon(&aug, Some(n));
    if e.rank() < n {
        return None;
    }
    let mut out = vec![Vec::new(); n];
    for &(r, c) in &e.pivot_positions {
        out[c] = e.rows[r][n..].to_vec();
    }
    Some(out)
}

pub fn mat_mul<C: Field>(a: &[Vec<RF<C>>], b: &[Vec<RF<C>>]) -> Vec<Vec<RF<C>>> {
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    let mut acc = RF::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc += &(x * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    let m = a.first().map(|r| r.len()).unwrap_or(0);
    (0..m)
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Exact rank of a constant matrix.
pub fn rank_exact<C: Field>(a: &[Vec<C>]) -> usize {
    let mut rows: Vec<Vec<C>> = a.to_vec();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for c in 0..ncols {
        if r >= rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let pv = rows[r][c].clone();
        for i in (r + 1)..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone() / pv.clone();
            for j in c..ncols {
                let t = f.clone() * rows[r][j].clone();
                rows[i][j] = rows[i][j].clone() - t;
            }
        }
        r += 1;
    }
    r
}

/// Evaluate every entry at `point`; `None` if some denominator vanishes.
pub fn evaluate_matrix<C: Field>(a: &[Vec<RF<C>>], point: &[C]) -> Option<Vec<Vec<C>>> {
    a.iter()
        .map(|r| {
            r.iter()
                .map(|e| e.evaluate(point))
                .collect::<Option<Vec<C>>>()
        })
        .collect()
}

/// Exact rank at a point; `None` if some entry is undefined there.
pub fn rank_at<C: Field>(a: &[Vec<RF<C>>], point: &[C]) -> Option<usize> {
    evaluate_matrix(a, point).map(|m| rank_exact(&m))
}
