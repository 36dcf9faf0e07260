//! Lie algebroids presented in a global frame over a coordinate chart.
//!
//! An algebroid of rank `r` over a chart with `n` coordinates is given by its
//! anchor matrix `ρ^a_i` (coefficient of `∂/∂x^a` in `ρ(e_i)`) and structure
//! functions `c^k_ij` with `[e_i, e_j] = Σ_k c^k_ij e_k`. The bracket of
//! general sections follows from the Leibniz rule:
//!
//! `[v, w]^k = Σ v^i w^j c^k_ij + ρ(v)(w^k) − ρ(w)(v^k)`.

pub mod catalog;

use crate::symexpr::{linalg, Chart, Expr};

/// Section of an algebroid, as coefficients in its frame.
pub type Section = Vec<Expr>;

/// Vector field on a chart, as coefficients of the coordinate fields.
pub type VectorField = Vec<Expr>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebroidError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("structure functions are not antisymmetric at (i={i}, j={j}, k={k})")]
    NotAntisymmetric { i: usize, j: usize, k: usize },
    #[error("algebroid axioms fail: {0}")]
    AxiomsFailed(String),
    #[error("frame is not closed under the bracket: [s{a}, s{b}] leaves its span")]
    NotClosed { a: usize, b: usize },
    #[error("frame change matrix is not invertible")]
    Singular,
}

/// Anchor and structure functions of an algebroid in a global frame.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebroidData {
    chart: Chart,
    rank: usize,
    anchor: Vec<Vec<Expr>>,
    structure: Vec<Vec<Vec<Expr>>>,
    axioms_verified: bool,
}

/// Residuals of the algebroid axioms; every listed entry is nonzero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxiomReport {
    /// `(i, j, k)` with `i<j<k` and the Jacobiator
    /// `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]` in the frame.
    pub jacobiator: Vec<((usize, usize, usize), Section)>,
    /// `(i, j)` with `i<j` and `ρ([e_i,e_j]) − [ρ(e_i), ρ(e_j)]`.
    pub anchor_residual: Vec<((usize, usize), VectorField)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.jacobiator.is_empty() && self.anchor_residual.is_empty()
    }

    pub fn summary(&self, chart: &Chart) -> String {
        let mut parts = Vec::new();
        for ((i, j, k), v) in &self.jacobiator {
            parts.push(format!(
                "Jacobiator(e{},e{},e{}) = [{}]",
                i + 1,
                j + 1,
                k + 1,
                render_vec(chart, v)
            ));
        }
        for ((i, j), v) in &self.anchor_residual {
            parts.push(format!(
                "anchor residual (e{},e{}) = [{}]",
                i + 1,
                j + 1,
                render_vec(chart, v)
            ));
        }
        if parts.is_empty() {
            "all residuals vanish".to_string()
        } else {
            parts.join("; ")
        }
    }
}

pub(crate) fn render_vec(chart: &Chart, v: &[Expr]) -> String {
    v.iter()
        .map(|e| chart.render(e))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn is_zero_vec(v: &[Expr]) -> bool {
    v.iter().all(|e| e.is_zero())
}

/// `X(f) = Σ X^a ∂f/∂x^a`.
pub fn vf_apply(x: &[Expr], f: &Expr) -> Expr {
    let mut acc = Expr::zero();
    for (a, xa) in x.iter().enumerate() {
        if xa.is_zero() || !f.contains_var(a) {
            continue;
        }
        acc += &(xa * &f.differentiate(a));
    }
    acc
}

/// Commutator of vector fields.
pub fn vf_bracket(x: &[Expr], y: &[Expr]) -> VectorField {
    let n = x.len().max(y.len());
    let zero = Expr::zero();
    (0..n)
        .map(|b| {
            let yb = y.get(b).unwrap_or(&zero);
            let xb = x.get(b).unwrap_or(&zero);
            &vf_apply(x, yb) - &vf_apply(y, xb)
        })
        .collect()
}

impl AlgebroidData {
    /// Build from the anchor (`rank × n`) and the brackets `[e_i, e_j]` for
    /// `i < j`; the remaining entries follow by antisymmetry and missing
    /// pairs bracket to zero.
    pub fn new(
        chart: Chart,
        anchor: Vec<Vec<Expr>>,
        brackets: &[((usize, usize), Section)],
    ) -> Result<Self, AlgebroidError> {
        let r = anchor.len();
        let mut c = vec![vec![vec![Expr::zero(); r]; r]; r];
        for ((i, j), v) in brackets {
            let (i, j) = (*i, *j);
            if i >= r || j >= r || v.len() != r {
                return Err(AlgebroidError::Shape(format!(
                    "bracket ({}, {}) with {} components for rank {}",
                    i + 1,
                    j + 1,
                    v.len(),
                    r
                )));
            }
            if i == j {
                if !is_zero_vec(v) {
                    return Err(AlgebroidError::NotAntisymmetric { i, j, k: 0 });
                }
                continue;
            }
            for k in 0..r {
                c[i][j][k] = v[k].clone();
                c[j][i][k] = -&v[k];
            }
        }
        Self::from_full_table(chart, anchor, c)
    }

    /// Build from the full table `c[i][j][k]`, rejecting tables that are
    /// not antisymmetric in `(i, j)`.
    pub fn from_full_table(
        chart: Chart,
        anchor: Vec<Vec<Expr>>,
        structure: Vec<Vec<Vec<Expr>>>,
    ) -> Result<Self, AlgebroidError> {
        let r = anchor.len();
        let n = chart.len();
        if let Some(row) = anchor.iter().find(|row| row.len() != n) {
            return Err(AlgebroidError::Shape(format!(
                "anchor row has {} entries for a chart of dimension {}",
                row.len(),
                n
            )));
        }
        if structure.len() != r
            || structure
                .iter()
                .any(|m| m.len() != r || m.iter().any(|v| v.len() != r))
        {
            return Err(AlgebroidError::Shape(format!(
                "structure table is not {}×{}×{}",
                r, r, r
            )));
        }
        for i in 0..r {
            for j in i..r {
                for k in 0..r {
                    if !(&structure[i][j][k] + &structure[j][i][k]).is_zero() {
                        return Err(AlgebroidError::NotAntisymmetric { i, j, k });
                    }
                }
            }
        }
        Ok(AlgebroidData {
            chart,
            rank: r,
            anchor,
            structure,
            axioms_verified: false,
        })
    }

    /// Tangent algebroid of a chart with the coordinate frame.
    pub fn tangent(chart: Chart) -> Self {
        let n = chart.len();
        let anchor = (0..n)
            .map(|i| {
                (0..n)
                    .map(|a| if a == i { Expr::one() } else { Expr::zero() })
                    .collect()
            })
            .collect();
        let mut a = Self::from_full_table(chart, anchor, vec![vec![vec![Expr::zero(); n]; n]; n])
            .expect("tangent data is well formed");
        a.axioms_verified = true;
        a
    }

    /// Lie algebra as an algebroid over a point.
    pub fn lie_algebra(
        brackets: &[((usize, usize), Vec<Expr>)],
        dim: usize,
    ) -> Result<Self, AlgebroidError> {
        Self::new(Chart::default(), vec![Vec::new(); dim], brackets)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.chart.len()
    }

    pub fn anchor(&self) -> &[Vec<Expr>] {
        &self.anchor
    }

    /// `c^k_ij`.
    pub fn structure(&self, i: usize, j: usize, k: usize) -> &Expr {
        &self.structure[i][j][k]
    }

    /// `[e_i, e_j]` in the frame.
    pub fn frame_bracket(&self, i: usize, j: usize) -> &Section {
        &self.structure[i][j]
    }

    pub fn axioms_verified(&self) -> bool {
        self.axioms_verified
    }

    pub fn frame_section(&self, i: usize) -> Section {
        (0..self.rank)
            .map(|k| if k == i { Expr::one() } else { Expr::zero() })
            .collect()
    }

    pub fn zero_section(&self) -> Section {
        vec![Expr::zero(); self.rank]
    }

    fn check_section(&self, v: &[Expr]) -> Result<(), AlgebroidError> {
        if v.len() != self.rank {
            return Err(AlgebroidError::Shape(format!(
                "section has {} components, algebroid has rank {}",
                v.len(),
                self.rank
            )));
        }
        Ok(())
    }

    /// `ρ(v)` as a vector field.
    pub fn anchor_of(&self, v: &[Expr]) -> VectorField {
        let n = self.dim();
        let mut out = vec![Expr::zero(); n];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for a in 0..n {
                if !self.anchor[i][a].is_zero() {
                    out[a] += &(vi * &self.anchor[i][a]);
                }
            }
        }
        out
    }

    /// `ρ(e_i)(f)`.
    pub fn anchor_apply_frame(&self, i: usize, f: &Expr) -> Expr {
        vf_apply(&self.anchor[i], f)
    }

    /// `ρ(v)(f)`.
    pub fn anchor_apply(&self, v: &[Expr], f: &Expr) -> Expr {
        vf_apply(&self.anchor_of(v), f)
    }

    /// Bracket of sections.
    pub fn bracket(&self, v: &[Expr], w: &[Expr]) -> Result<Section, AlgebroidError> {
        self.check_section(v)?;
        self.check_section(w)?;
        Ok(self.bracket_unchecked(v, w))
    }

    pub(crate) fn bracket_unchecked(&self, v: &[Expr], w: &[Expr]) -> Section {
        let r = self.rank;
        let mut out = vec![Expr::zero(); r];
        for i in 0..r {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..r {
                if w[j].is_zero() || i == j {
                    continue;
                }
                let vw = &v[i] * &w[j];
                for k in 0..r {
                    let c = &self.structure[i][j][k];
                    if !c.is_zero() {
                        out[k] += &(&vw * c);
                    }
                }
            }
        }
        let rv = self.anchor_of(v);
        let rw = self.anchor_of(w);
        for k in 0..r {
            out[k] += &vf_apply(&rv, &w[k]);
            out[k] -= &vf_apply(&rw, &v[k]);
        }
        out
    }

    /// Jacobiator and anchor-morphism residuals on the frame.
    pub fn check_axioms(&self) -> AxiomReport {
        let r = self.rank;
        let mut report = AxiomReport::default();
        let e: Vec<Section> = (0..r).map(|i| self.frame_section(i)).collect();
        for i in 0..r {
            for j in (i + 1)..r {
                for k in (j + 1)..r {
                    let t1 = self.bracket_unchecked(&self.structure[i][j], &e[k]);
                    let t2 = self.bracket_unchecked(&self.structure[j][k], &e[i]);
                    let t3 = self.bracket_unchecked(&self.structure[k][i], &e[j]);
                    let jac: Section = (0..r).map(|m| &(&t1[m] + &t2[m]) + &t3[m]).collect();
                    if !is_zero_vec(&jac) {
                        report.jacobiator.push(((i, j, k), jac));
                    }
                }
            }
        }
        for i in 0..r {
            for j in (i + 1)..r {
                let lhs = self.anchor_of(&self.structure[i][j]);
                let rhs = vf_bracket(&self.anchor[i], &self.anchor[j]);
                let res: VectorField = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
                if !is_zero_vec(&res) {
                    report.anchor_residual.push(((i, j), res));
                }
            }
        }
        report
    }

    /// Run the axiom check and mark the data as verified when it passes.
    pub fn verified(mut self) -> Result<Self, AlgebroidError> {
        if self.axioms_verified {
            return Ok(self);
        }
        let report = self.check_axioms();
        if report.passed() {
            self.axioms_verified = true;
            Ok(self)
        } else {
            Err(AlgebroidError::AxiomsFailed(report.summary(&self.chart)))
        }
    }

    /// Mark data whose axioms hold by construction.
    pub(crate) fn assume_verified(mut self) -> Self {
        self.axioms_verified = true;
        self
    }

    /// Same algebroid in the frame `e'_i = Σ_j g[i][j] e_j`.
    pub fn change_frame(&self, g: &[Vec<Expr>]) -> Result<Self, AlgebroidError> {
        let r = self.rank;
        if g.len() != r || g.iter().any(|row| row.len() != r) {
            return Err(AlgebroidError::Shape(
                "frame change must be rank × rank".into(),
            ));
        }
        let ginv = linalg::inverse(g).ok_or(AlgebroidError::Singular)?;
        let anchor: Vec<Vec<Expr>> = g.iter().map(|row| self.anchor_of(row)).collect();
        let mut c = vec![vec![vec![Expr::zero(); r]; r]; r];
        for i in 0..r {
            for j in (i + 1)..r {
                let w = self.bracket_unchecked(&g[i], &g[j]);
                for k in 0..r {
                    let mut acc = Expr::zero();
                    for l in 0..r {
                        if !w[l].is_zero() && !ginv[l][k].is_zero() {
                            acc += &(&w[l] * &ginv[l][k]);
                        }
                    }
                    c[j][i][k] = -&acc;
                    c[i][j][k] = acc;
                }
            }
        }
        let out = Self::from_full_table(self.chart.clone(), anchor, c)?;
        Ok(if self.axioms_verified {
            out.assume_verified()
        } else {
            out
        })
    }

    /// Structure functions of a family of sections closed under the
    /// bracket, as coefficients in that family: `[s_a, s_b] = Σ C^c_ab s_c`.
    /// Also returns the anchors `ρ(s_a)`.
    pub fn restrict_to_frame(
        &self,
        frame: &[Section],
    ) -> Result<(Vec<VectorField>, Vec<Vec<Vec<Expr>>>), AlgebroidError> {
        let k = frame.len();
        for s in frame {
            self.check_section(s)?;
        }
        let mat: Vec<Vec<Expr>> = (0..self.rank)
            .map(|row| frame.iter().map(|s| s[row].clone()).collect())
            .collect();
        let mut c = vec![vec![vec![Expr::zero(); k]; k]; k];
        for a in 0..k {
            for b in (a + 1)..k {
                let w = self.bracket_unchecked(&frame[a], &frame[b]);
                let sol = linalg::solve_linear(&mat, &w)
                    .map_err(|_| AlgebroidError::NotClosed { a, b })?;
                for cc in 0..k {
                    c[b][a][cc] = -&sol.solution[cc];
                    c[a][b][cc] = sol.solution[cc].clone();
                }
            }
        }
        let anchors = frame.iter().map(|s| self.anchor_of(s)).collect();
        Ok((anchors, c))
    }
}
