//! Elements of `p^!A` for `E = A` and the canonical involution.
//!
//! An element is a quadruple `(x, y, a, b)`: base point `x`, point `y` of
//! the fibre of `E = A`, algebroid part `a` and core part `b`. It is a
//! section over `E` when `y` is the fibre coordinate `s` of the chart
//! `(x, s)`, and a section over `A` when `a = s`. The canonical involution is
//!
//! `J(x, y, a, b) = (x, a, y, b^k + Σ c^k_ij a^i y^j)`,
//!
//! which exchanges the two sides and maps `ṽ ↦ T_A v` and `v↑ ↦ v̂`.

use super::{BundleRole, Generator, PullbackAlgebroid, PullbackError};
use crate::algebroid::{AlgebroidData, Section};
use crate::symexpr::Expr;

/// Which projection a field of elements is a section of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// A section of `p^!A → A` (parametrised by the fibre point `y`).
    OverE,
    /// A section of the prolongation `p^!A → A` parametrised by `a`.
    OverA,
}

/// A field of elements `(y, a, b)` over the chart `(x, s)` with
/// `s = y` on side `OverE` and `s = a` on side `OverA`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementField {
    pub side: Side,
    pub y: Vec<Expr>,
    pub a: Vec<Expr>,
    pub b: Vec<Expr>,
}

fn fibre(a: &AlgebroidData) -> Vec<Expr> {
    (0..a.rank()).map(|l| Expr::var(a.dim() + l)).collect()
}

impl ElementField {
    /// Complete lift `ṽ`.
    pub fn complete(a: &AlgebroidData, v: &[Expr]) -> Self {
        let s = fibre(a);
        let r = a.rank();
        let mut b = vec![Expr::zero(); r];
        for (l, sl) in s.iter().enumerate() {
            let br = a.bracket_unchecked(v, &a.frame_section(l));
            for j in 0..r {
                if !br[j].is_zero() {
                    b[j] -= &(&br[j] * sl);
                }
            }
        }
        ElementField {
            side: Side::OverE,
            y: s,
            a: v.to_vec(),
            b,
        }
    }

    /// Vertical lift `v↑`.
    pub fn vertical(a: &AlgebroidData, v: &[Expr]) -> Self {
        ElementField {
            side: Side::OverE,
            y: fibre(a),
            a: a.zero_section(),
            b: v.to_vec(),
        }
    }

    /// Tangent lift `T_A v`: `y = v(x)`, `b = ρ(a)(v)`.
    pub fn tangent(a: &AlgebroidData, v: &[Expr]) -> Self {
        let s = fibre(a);
        let b = v.iter().map(|f| a.anchor_apply(&s, f)).collect();
        ElementField {
            side: Side::OverA,
            y: v.to_vec(),
            a: s,
            b,
        }
    }

    /// Core lift `v̂`: `y = 0`, `b = v`.
    pub fn core(a: &AlgebroidData, v: &[Expr]) -> Self {
        ElementField {
            side: Side::OverA,
            y: a.zero_section(),
            a: fibre(a),
            b: v.to_vec(),
        }
    }

    /// Projection to `E = A` (the fibre point).
    pub fn to_e(&self) -> &[Expr] {
        &self.y
    }

    /// Projection to `A` (the algebroid part).
    pub fn to_a(&self) -> &[Expr] {
        &self.a
    }

    /// Frame coefficients in `(ē, c̄)` for a field over `E`.
    pub fn as_section(&self) -> Option<Section> {
        if self.side != Side::OverE {
            return None;
        }
        let mut v = self.a.clone();
        v.extend(self.b.iter().cloned());
        Some(v)
    }
}

/// The canonical involution `J_A`.
pub fn canonical_involution(a: &AlgebroidData, f: &ElementField) -> ElementField {
    let r = a.rank();
    let mut b = f.b.clone();
    for i in 0..r {
        if f.a[i].is_zero() {
            continue;
        }
        for j in 0..r {
            if i == j || f.y[j].is_zero() {
                continue;
            }
            let ay = &f.a[i] * &f.y[j];
            for (k, bk) in b.iter_mut().enumerate() {
                let c = a.structure(i, j, k);
                if !c.is_zero() {
                    *bk += &(&ay * c);
                }
            }
        }
    }
    ElementField {
        side: match f.side {
            Side::OverE => Side::OverA,
            Side::OverA => Side::OverE,
        },
        y: f.a.clone(),
        a: f.y.clone(),
        b,
    }
}

impl PullbackAlgebroid {
    /// Element field of a generator for the role `E = A`.
    pub fn element_field(&self, g: &Generator) -> Result<ElementField, PullbackError> {
        if self.role() != BundleRole::Itself {
            return Err(PullbackError::Role(
                "element fields need the role E = A".into(),
            ));
        }
        match g {
            Generator::Complete(v) => Ok(ElementField::complete(self.base(), v)),
            Generator::Vertical(v) => Ok(ElementField::vertical(self.base(), v)),
            other => Err(PullbackError::Inadmissible(other.kind().into())),
        }
    }
}
