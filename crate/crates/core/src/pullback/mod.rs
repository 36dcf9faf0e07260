//! Pullback algebroids `p_E^! A` over vector-bundle charts.
//!
//! For a bundle chart with base coordinates `x` and fibre coordinates
//! `u_1..u_m`, the pullback algebroid is presented over the total chart
//! `(x, u)` in the frame `ē_1..ē_r, c̄_1..c̄_m`: the lifted frame `ē_i` is
//! anchored to `ρ(e_i)` (horizontal), the core frame `c̄_a` to `∂/∂u_a`, and
//! the only nonzero frame brackets are `[ē_i, ē_j] = c^k_ij ē_k`. The three
//! bundle roles differ only in which generator sections they expose:
//!
//! - general `E`: horizontal lifts `v̄ = Σ v^i ē_i` and vertical lifts
//!   `e↑ = Σ e^a c̄_a`;
//! - `E = A` (fibre coordinates `y`): complete lifts
//!   `ṽ = Σ v^i ē_i − Σ_{j,l} [v, e_l]^j y^l c̄_j` and vertical lifts `v↑`;
//! - `E = A*` (fibre coordinates `ξ`): Hamiltonian lifts
//!   `H_v = Σ v^i ē_i + Σ_{j,k} [v, e_j]^k ξ_k c̄_j` and vertical lifts `α↑`.

mod canonical;
mod im;
mod involution;
mod prolongation;

pub use canonical::{
    canonical_form_on_lifts, canonical_one_form, canonical_two_form, check_canonical_form,
    dual_linear_poisson, evaluate_at, form_matrix, induced_bivector, prolongation_lemma_identities,
    tautological_residual, CanonicalFormReport, Element, ProlongationReport,
};
pub use im::{
    default_test_forms, verify_im_cocycle, verify_im_cocycle_sharp, ImCocycleReport, PairingCase,
};
pub use involution::{canonical_involution, ElementField, Side};
pub use prolongation::Prolongation;

use crate::algebroid::{AlgebroidData, AlgebroidError, Section};
use crate::calculus::{lie_derivative_form, AForm};
use crate::symexpr::{Chart, Coordinate, Expr};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PullbackError {
    #[error("base algebroid fails its axioms: {0}")]
    Unverified(String),
    #[error("bundle role mismatch: {0}")]
    Role(String),
    #[error("generator not admissible: {0}")]
    Inadmissible(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BundleRole {
    /// An arbitrary trivial bundle with no interaction with the algebroid.
    General,
    /// The algebroid itself, fibre coordinates identified with the frame.
    Itself,
    /// The dual bundle, fibre coordinates `ξ_i = ℓ_{e_i}`.
    Dual,
}

/// Base chart, fibre coordinate names and bundle role.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleChart {
    base: Chart,
    fibre: Vec<String>,
    role: BundleRole,
}

impl BundleChart {
    pub fn general(base: Chart, fibre: &[&str]) -> Self {
        BundleChart {
            base,
            fibre: fibre.iter().map(|s| s.to_string()).collect(),
            role: BundleRole::General,
        }
    }

    /// `E = A` with fibre coordinates `y1..yr`.
    pub fn itself(a: &AlgebroidData) -> Self {
        Self::named(a, "y", BundleRole::Itself)
    }

    /// `E = A*` with fibre coordinates `ξ1..ξr`.
    pub fn dual(a: &AlgebroidData) -> Self {
        Self::named(a, "ξ", BundleRole::Dual)
    }

    fn named(a: &AlgebroidData, prefix: &str, role: BundleRole) -> Self {
        BundleChart {
            base: a.chart().clone(),
            fibre: (1..=a.rank()).map(|i| format!("{}{}", prefix, i)).collect(),
            role,
        }
    }

    pub fn with_fibre_names(mut self, names: &[&str]) -> Self {
        self.fibre = names.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn base(&self) -> &Chart {
        &self.base
    }

    pub fn role(&self) -> BundleRole {
        self.role
    }

    pub fn fibre_rank(&self) -> usize {
        self.fibre.len()
    }

    /// Chart `(x, u)` of the total space with fibre coordinates of weight one.
    pub fn total_chart(&self) -> Chart {
        self.base.extended(
            self.fibre
                .iter()
                .map(|n| Coordinate::fibre(n.clone()))
                .collect(),
        )
    }
}

/// Generator sections of a pullback algebroid over `E`.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// `v̄ = Σ v^i ē_i` (general role).
    Horizontal(Section),
    /// `e↑ = Σ e^a c̄_a` for a section `e` of `E` (`v↑` or `α↑`).
    Vertical(Vec<Expr>),
    /// Complete lift `ṽ` (role `A` itself).
    Complete(Section),
    /// Hamiltonian lift `H_v` (role `A*`).
    Hamiltonian(Section),
}

impl Generator {
    pub fn kind(&self) -> &'static str {
        match self {
            Generator::Horizontal(_) => "horizontal lift",
            Generator::Vertical(_) => "vertical lift",
            Generator::Complete(_) => "complete lift",
            Generator::Hamiltonian(_) => "Hamiltonian lift",
        }
    }
}

/// A pullback algebroid together with its base algebroid and bundle.
#[derive(Clone, Debug)]
pub struct PullbackAlgebroid {
    base: AlgebroidData,
    bundle: BundleChart,
    total: AlgebroidData,
}

/// Build `p_E^! A`; the result is checked against the algebroid axioms.
pub fn build_pullback(
    a: &AlgebroidData,
    bundle: BundleChart,
) -> Result<PullbackAlgebroid, PullbackError> {
    let a = a
        .clone()
        .verified()
        .map_err(|e| PullbackError::Unverified(e.to_string()))?;
    if bundle.base != *a.chart() {
        return Err(PullbackError::Shape(
            "bundle base chart differs from the algebroid chart".into(),
        ));
    }
    if bundle.role != BundleRole::General && bundle.fibre_rank() != a.rank() {
        return Err(PullbackError::Role(format!(
            "role {:?} needs {} fibre coordinates, got {}",
            bundle.role,
            a.rank(),
            bundle.fibre_rank()
        )));
    }
    let n = a.dim();
    let r = a.rank();
    let m = bundle.fibre_rank();
    let tot = r + m;
    let mut anchor = Vec::with_capacity(tot);
    for i in 0..r {
        let mut row = a.anchor()[i].clone();
        row.extend(std::iter::repeat_with(Expr::zero).take(m));
        anchor.push(row);
    }
    for c in 0..m {
        let mut row = vec![Expr::zero(); n + m];
        row[n + c] = Expr::one();
        anchor.push(row);
    }
    let mut st = vec![vec![vec![Expr::zero(); tot]; tot]; tot];
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                st[i][j][k] = a.structure(i, j, k).clone();
            }
        }
    }
    let total = AlgebroidData::from_full_table(bundle.total_chart(), anchor, st)?
        .verified()
        .map_err(|e| PullbackError::Inconsistent(e.to_string()))?;
    Ok(PullbackAlgebroid {
        base: a,
        bundle,
        total,
    })
}

impl PullbackAlgebroid {
    pub fn base(&self) -> &AlgebroidData {
        &self.base
    }

    pub fn bundle(&self) -> &BundleChart {
        &self.bundle
    }

    /// The pullback algebroid over the total chart.
    pub fn total(&self) -> &AlgebroidData {
        &self.total
    }

    pub fn role(&self) -> BundleRole {
        self.bundle.role
    }

    fn fibre_var(&self, a: usize) -> Expr {
        Expr::var(self.base.dim() + a)
    }

    /// Residuals of the projection `ē_i ↦ e_i`, `c̄_a ↦ 0` being a morphism
    /// onto the base algebroid: anchors must project and frame brackets
    /// must map to brackets. Returns the offending frame pairs.
    pub fn projection_residual(&self) -> Vec<String> {
        let r = self.base.rank();
        let n = self.base.dim();
        let tot = self.total.rank();
        let mut out = Vec::new();
        for i in 0..tot {
            let proj_anchor: Vec<Expr> = self.total.anchor()[i][..n].to_vec();
            let expect = if i < r {
                self.base.anchor()[i].clone()
            } else {
                vec![Expr::zero(); n]
            };
            if proj_anchor != expect {
                out.push(format!("anchor of frame {}", i + 1));
            }
            for j in 0..tot {
                let b = self.total.frame_bracket(i, j);
                let proj: Vec<Expr> = b[..r].to_vec();
                let expect = if i < r && j < r {
                    self.base.frame_bracket(i, j).clone()
                } else {
                    vec![Expr::zero(); r]
                };
                if proj != expect {
                    out.push(format!("bracket ({}, {})", i + 1, j + 1));
                }
            }
        }
        out
    }

    fn admissible(&self, g: &Generator) -> Result<(), PullbackError> {
        let ok = match (g, self.role()) {
            (Generator::Horizontal(_), BundleRole::General) => true,
            (Generator::Vertical(_), _) => true,
            (Generator::Complete(_), BundleRole::Itself) => true,
            (Generator::Hamiltonian(_), BundleRole::Dual) => true,
            _ => false,
        };
        let len_ok = match g {
            Generator::Vertical(e) => e.len() == self.bundle.fibre_rank(),
            Generator::Horizontal(v) | Generator::Complete(v) | Generator::Hamiltonian(v) => {
                v.len() == self.base.rank()
            }
        };
        if !ok {
            return Err(PullbackError::Inadmissible(format!(
                "{} for role {:?}",
                g.kind(),
                self.role()
            )));
        }
        if !len_ok {
            return Err(PullbackError::Shape(format!(
                "{} has the wrong length",
                g.kind()
            )));
        }
        Ok(())
    }

    /// Expansion of a generator in the frame `(ē, c̄)`.
    pub fn expand(&self, g: &Generator) -> Result<Section, PullbackError> {
        self.admissible(g)?;
        let r = self.base.rank();
        let m = self.bundle.fibre_rank();
        let mut out = vec![Expr::zero(); r + m];
        match g {
            Generator::Horizontal(v) => out[..r].clone_from_slice(v),
            Generator::Vertical(e) => out[r..].clone_from_slice(e),
            Generator::Complete(v) => {
                out[..r].clone_from_slice(v);
                for l in 0..r {
                    let br = self.base.bracket_unchecked(v, &self.base.frame_section(l));
                    let y = self.fibre_var(l);
                    for j in 0..r {
                        if !br[j].is_zero() {
                            out[r + j] -= &(&br[j] * &y);
                        }
                    }
                }
            }
            Generator::Hamiltonian(v) => {
                out[..r].clone_from_slice(v);
                for j in 0..r {
                    let br = self.base.bracket_unchecked(v, &self.base.frame_section(j));
                    for k in 0..r {
                        if !br[k].is_zero() {
                            out[r + j] += &(&br[k] * &self.fibre_var(k));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sum of the expansions of a generator combination.
    pub fn expand_all(&self, gs: &[Generator]) -> Result<Section, PullbackError> {
        let mut acc = self.total.zero_section();
        for g in gs {
            for (a, b) in acc.iter_mut().zip(self.expand(g)?) {
                *a += &b;
            }
        }
        Ok(acc)
    }

    /// Bracket of two generators from the lift tables:
    ///
    /// - `[v̄, w̄] = [v,w]‾`, `[v̄, e↑] = (ρ(v) e)↑`;
    /// - `[ṽ, w̃] = [v,w]~`, `[ṽ, w↑] = [v,w]↑`;
    /// - `[H_v, H_w] = H_{[v,w]}`, `[H_v, α↑] = (L_v α)↑`;
    /// - `[e↑, e'↑] = 0`.
    ///
    /// The result is cross-checked against the bracket of the expansions.
    pub fn bracket_generators(
        &self,
        g1: &Generator,
        g2: &Generator,
    ) -> Result<Vec<Generator>, PullbackError> {
        self.admissible(g1)?;
        self.admissible(g2)?;
        let out = match (g1, g2) {
            (Generator::Vertical(_), Generator::Vertical(_)) => vec![],
            (Generator::Vertical(_), _) => {
                return self
                    .bracket_generators(g2, g1)
                    .map(|v| v.into_iter().map(neg_generator).collect())
            }
            (Generator::Horizontal(v), Generator::Horizontal(w)) => {
                vec![Generator::Horizontal(self.base.bracket_unchecked(v, w))]
            }
            (Generator::Horizontal(v), Generator::Vertical(e)) => {
                vec![Generator::Vertical(
                    e.iter().map(|f| self.base.anchor_apply(v, f)).collect(),
                )]
            }
            (Generator::Complete(v), Generator::Complete(w)) => {
                vec![Generator::Complete(self.base.bracket_unchecked(v, w))]
            }
            (Generator::Complete(v), Generator::Vertical(w)) => {
                vec![Generator::Vertical(self.base.bracket_unchecked(v, w))]
            }
            (Generator::Hamiltonian(v), Generator::Hamiltonian(w)) => {
                vec![Generator::Hamiltonian(self.base.bracket_unchecked(v, w))]
            }
            (Generator::Hamiltonian(v), Generator::Vertical(al)) => {
                let l = lie_derivative_form(&self.base, v, &AForm::one_form(al.clone()))
                    .map_err(|e| PullbackError::Shape(e.to_string()))?;
                vec![Generator::Vertical(l.as_covector())]
            }
            _ => unreachable!("admissibility rules out mixed roles"),
        };
        let lhs = self.expand_all(&out)?;
        let rhs = self.total.bracket(&self.expand(g1)?, &self.expand(g2)?)?;
        if lhs != rhs {
            return Err(PullbackError::Inconsistent(format!(
                "[{}, {}] table disagrees with the frame bracket",
                g1.kind(),
                g2.kind()
            )));
        }
        Ok(out)
    }
}

fn neg_generator(g: Generator) -> Generator {
    let neg = |v: Vec<Expr>| v.into_iter().map(|e| -e).collect();
    match g {
        Generator::Horizontal(v) => Generator::Horizontal(neg(v)),
        Generator::Vertical(v) => Generator::Vertical(neg(v)),
        Generator::Complete(v) => Generator::Complete(neg(v)),
        Generator::Hamiltonian(v) => Generator::Hamiltonian(neg(v)),
    }
}
