//! Prolongation of an algebroid `B` anchored to `A` by a morphism
//! `φ: B → A`, presented over the chart `(x, a)` of `A`.
//!
//! The frame is `T_A b_1..T_A b_s, b̂_1..b̂_s` with anchors
//! `ϱ(T_A b_i) = ρ_B(b_i) − Σ [φ b_i, e_l]^j a^l ∂/∂a^j` (the linear vector
//! field of `φ b_i` on `A`) and `ϱ(b̂_i) = φ(b_i)` (vertical), and brackets
//!
//! ```text
//! [T_A b_i, T_A b_j] = T_A [b_i, b_j] = C^k_ij T_A b_k + ℓ_{d C^k_ij} b̂_k
//! [T_A b_i, b̂_j]     = [b_i, b_j]^
//! [b̂_i, b̂_j]         = 0
//! ```
//!
//! where `ℓ_{df}(a) = ρ_A(a)(f)`. Tangent lifts of general sections obey
//! `T_A(f b) = f T_A b + ℓ_{df} b̂` and core lifts are function-linear.

use super::PullbackError;
use crate::algebroid::{AlgebroidData, Section};
use crate::symexpr::{Coordinate, Expr};

#[derive(Clone, Debug)]
pub struct Prolongation {
    a: AlgebroidData,
    b: AlgebroidData,
    phi: Vec<Section>,
    total: AlgebroidData,
}

impl Prolongation {
    /// Prolongation of `A` along itself.
    pub fn of(a: &AlgebroidData) -> Result<Self, PullbackError> {
        let phi = (0..a.rank()).map(|i| a.frame_section(i)).collect();
        Self::anchored(a, a, phi)
    }

    /// Prolongation of `b` anchored to `a`; `phi[i]` is `φ(b_i)` in the
    /// frame of `a`. The morphism conditions are checked exactly.
    pub fn anchored(
        a: &AlgebroidData,
        b: &AlgebroidData,
        phi: Vec<Section>,
    ) -> Result<Self, PullbackError> {
        if a.chart() != b.chart() {
            return Err(PullbackError::Shape(
                "algebroids over different charts".into(),
            ));
        }
        let s = b.rank();
        let r = a.rank();
        let n = a.dim();
        if phi.len() != s || phi.iter().any(|v| v.len() != r) {
            return Err(PullbackError::Shape(
                "φ must be rank(B) sections of A".into(),
            ));
        }
        for i in 0..s {
            if a.anchor_of(&phi[i]) != b.anchor()[i] {
                return Err(PullbackError::Inconsistent(format!(
                    "ρ_A(φ b{}) ≠ ρ_B(b{})",
                    i + 1,
                    i + 1
                )));
            }
            for j in (i + 1)..s {
                let lhs = a.bracket_unchecked(&phi[i], &phi[j]);
                let rhs = apply_phi(&phi, b.frame_bracket(i, j), r);
                if lhs != rhs {
                    return Err(PullbackError::Inconsistent(format!(
                        "φ does not preserve [b{}, b{}]",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let chart = a.chart().extended(
            (1..=r)
                .map(|l| Coordinate::fibre(format!("a{}", l)))
                .collect(),
        );
        let fib: Vec<Expr> = (0..r).map(|l| Expr::var(n + l)).collect();
        let mut anchor = Vec::with_capacity(2 * s);
        for i in 0..s {
            let mut row = b.anchor()[i].clone();
            let mut vert = vec![Expr::zero(); r];
            for (l, al) in fib.iter().enumerate() {
                let br = a.bracket_unchecked(&phi[i], &a.frame_section(l));
                for j in 0..r {
                    if !br[j].is_zero() {
                        vert[j] -= &(&br[j] * al);
                    }
                }
            }
            row.extend(vert);
            anchor.push(row);
        }
        for i in 0..s {
            let mut row = vec![Expr::zero(); n];
            row.extend(phi[i].iter().cloned());
            anchor.push(row);
        }
        let tot = 2 * s;
        let mut st = vec![vec![vec![Expr::zero(); tot]; tot]; tot];
        for i in 0..s {
            for j in 0..s {
                if i == j {
                    continue;
                }
                for k in 0..s {
                    let c = b.structure(i, j, k);
                    if c.is_zero() {
                        continue;
                    }
                    st[i][j][k] = c.clone();
                    st[i][j][s + k] = a.anchor_apply(&fib, c);
                    st[i][s + j][s + k] = c.clone();
                    st[s + j][i][s + k] = -c;
                }
            }
        }
        let total = AlgebroidData::from_full_table(chart, anchor, st)?
            .verified()
            .map_err(|e| PullbackError::Inconsistent(e.to_string()))?;
        Ok(Prolongation {
            a: a.clone(),
            b: b.clone(),
            phi,
            total,
        })
    }

    pub fn total(&self) -> &AlgebroidData {
        &self.total
    }

    pub fn anchor_algebroid(&self) -> &AlgebroidData {
        &self.a
    }

    pub fn source(&self) -> &AlgebroidData {
        &self.b
    }

    pub fn phi(&self) -> &[Section] {
        &self.phi
    }

    /// `T_A b` in the frame `(T_A b_i, b̂_i)`.
    pub fn tangent_lift(&self, sec: &[Expr]) -> Section {
        let s = self.b.rank();
        let n = self.a.dim();
        let fib: Vec<Expr> = (0..self.a.rank()).map(|l| Expr::var(n + l)).collect();
        let mut out = sec.to_vec();
        out.extend((0..s).map(|i| self.a.anchor_apply(&fib, &sec[i])));
        out
    }

    /// `b̂` in the frame `(T_A b_i, b̂_i)`.
    pub fn core_lift(&self, sec: &[Expr]) -> Section {
        let mut out = vec![Expr::zero(); self.b.rank()];
        out.extend(sec.iter().cloned());
        out
    }

    /// Check the three bracket rules on the given sections; returns the
    /// failing cases.
    pub fn check_tables(&self, sections: &[Section]) -> Vec<String> {
        let mut out = Vec::new();
        for (p, u) in sections.iter().enumerate() {
            for (q, v) in sections.iter().enumerate() {
                let uv = self.b.bracket_unchecked(u, v);
                let tt = self
                    .total
                    .bracket_unchecked(&self.tangent_lift(u), &self.tangent_lift(v));
                if tt != self.tangent_lift(&uv) {
                    out.push(format!("[T s{}, T s{}]", p + 1, q + 1));
                }
                let tc = self
                    .total
                    .bracket_unchecked(&self.tangent_lift(u), &self.core_lift(v));
                if tc != self.core_lift(&uv) {
                    out.push(format!("[T s{}, ŝ{}]", p + 1, q + 1));
                }
                let cc = self
                    .total
                    .bracket_unchecked(&self.core_lift(u), &self.core_lift(v));
                if cc.iter().any(|e| !e.is_zero()) {
                    out.push(format!("[ŝ{}, ŝ{}]", p + 1, q + 1));
                }
            }
        }
        out
    }
}

fn apply_phi(phi: &[Section], v: &[Expr], r: usize) -> Section {
    let mut out = vec![Expr::zero(); r];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for (o, p) in out.iter_mut().zip(&phi[i]) {
            if !p.is_zero() {
                *o += &(vi * p);
            }
        }
    }
    out
}
