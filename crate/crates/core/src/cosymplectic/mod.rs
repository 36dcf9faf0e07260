//! `k`-cosymplectic structures `(α_1, …, α_k, ω)` on an algebroid of rank
//! `2n + k`.
//!
//! The flat map is `♭(v) = ι_v ω + Σ_i α_i(v) α_i`; in the frame its matrix
//! is `F_ab = ω_ab + Σ_i α_{i,a} α_{i,b}` with `♭(v)_b = Σ_a v^a F_ab`. Reeb
//! sections solve `♭(R_i) = α_i`. The underlying bivector is
//! `π♯(β) = −(♭⁻¹(β) − Σ_j β(R_j) R_j)`, so that `π♯α_i = 0` and
//! `ι_{π♯β} ω = −β + Σ_i β(R_i) α_i`; for `ω = dx∧dy` this gives `∂x∧∂y`.

use std::sync::OnceLock;

use crate::algebroid::{AlgebroidData, Section};
use crate::calculus::{
    d, evaluate_form, interior, pairing, schouten, sharp_apply, AForm, Alternating, CalculusError,
    Multivector,
};
use crate::symexpr::{linalg, Expr, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CosymplecticError {
    #[error("rank {rank} minus {k} one-forms is odd")]
    Parity { rank: usize, k: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("flat map is not invertible over the rational-function field")]
    NotInvertible,
    #[error("post-condition failed: {0}")]
    PostCondition(String),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

/// One-forms `α_1..α_k` and a two-form `ω` on an algebroid.
#[derive(Debug)]
pub struct CosymplecticData {
    algebroid: AlgebroidData,
    alphas: Vec<AForm>,
    omega: AForm,
    flat: OnceLock<Vec<Vec<Expr>>>,
    reeb: OnceLock<Result<Vec<Section>, CosymplecticError>>,
    pi: OnceLock<Result<Multivector, CosymplecticError>>,
}

impl Clone for CosymplecticData {
    fn clone(&self) -> Self {
        CosymplecticData::new(
            self.algebroid.clone(),
            self.alphas.clone(),
            self.omega.clone(),
        )
        .expect("already validated")
    }
}

/// Outcome of the structure verification.
#[derive(Clone, Debug, PartialEq)]
pub struct CosymplecticReport {
    /// `d_A α_i`, one per form.
    pub d_alphas: Vec<AForm>,
    pub d_omega: AForm,
    /// `det ♭`; nonzero exactly when `ωⁿ ∧ α_1 ∧ … ∧ α_k ≠ 0`.
    pub determinant: Expr,
    /// Numerator of the determinant when it is not a nonzero constant.
    pub degeneracy_locus: Option<Expr>,
    /// `(point, rank ω)` at the sample points, with the expected rank `2n`.
    pub omega_rank_samples: Vec<(Vec<Rational>, Option<usize>)>,
    pub expected_omega_rank: usize,
}

impl CosymplecticReport {
    pub fn closed(&self) -> bool {
        self.d_alphas.iter().all(|f| f.is_zero()) && self.d_omega.is_zero()
    }

    pub fn nondegenerate(&self) -> bool {
        !self.determinant.is_zero()
    }

    /// Rank of `ω` equals `2n` at every sample where it is defined.
    pub fn constant_rank_at_samples(&self) -> bool {
        self.omega_rank_samples
            .iter()
            .all(|(_, r)| r.map_or(true, |r| r == self.expected_omega_rank))
    }

    pub fn passed(&self) -> bool {
        self.closed() && self.nondegenerate() && self.constant_rank_at_samples()
    }
}

/// Points of `{−1, 0, 1}^n`.
pub fn unit_lattice(n: usize) -> Vec<Vec<Rational>> {
    lattice(
        n,
        &[-1, 0, 1].map(|v: i64| Rational::from_integer(v.into())),
    )
}

/// Cartesian power of a list of values.
pub fn lattice(n: usize, values: &[Rational]) -> Vec<Vec<Rational>> {
    let mut pts = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(pts.len() * values.len());
        for p in &pts {
            for v in values {
                let mut q: Vec<Rational> = p.clone();
                q.push(v.clone());
                next.push(q);
            }
        }
        pts = next;
    }
    pts
}

fn two_form_matrix(omega: &AForm) -> Vec<Vec<Expr>> {
    let r = omega.rank();
    (0..r)
        .map(|a| (0..r).map(|b| omega.component(&[a, b])).collect())
        .collect()
}

impl CosymplecticData {
    pub fn new(
        algebroid: AlgebroidData,
        alphas: Vec<AForm>,
        omega: AForm,
    ) -> Result<Self, CosymplecticError> {
        let r = algebroid.rank();
        let k = alphas.len();
        if k > r || (r - k) % 2 != 0 {
            return Err(CosymplecticError::Parity { rank: r, k });
        }
        if omega.rank() != r || omega.degree() != 2 {
            return Err(CosymplecticError::Shape(format!(
                "two-form must have degree 2 and rank {}",
                r
            )));
        }
        if let Some(a) = alphas.iter().find(|a| a.rank() != r || a.degree() != 1) {
            return Err(CosymplecticError::Shape(format!(
                "one-form of degree {} and rank {} on a rank-{} algebroid",
                a.degree(),
                a.rank(),
                r
            )));
        }
        Ok(CosymplecticData {
            algebroid,
            alphas,
            omega,
            flat: OnceLock::new(),
            reeb: OnceLock::new(),
            pi: OnceLock::new(),
        })
    }

    pub fn algebroid(&self) -> &AlgebroidData {
        &self.algebroid
    }

    pub fn alphas(&self) -> &[AForm] {
        &self.alphas
    }

    pub fn omega(&self) -> &AForm {
        &self.omega
    }

    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    /// Half the rank of `ω`.
    pub fn n(&self) -> usize {
        (self.algebroid.rank() - self.k()) / 2
    }

    /// `F_ab = ω(e_a, e_b) + Σ_i α_i(e_a) α_i(e_b)`.
    pub fn flat_matrix(&self) -> &[Vec<Expr>] {
        self.flat.get_or_init(|| {
            let mut f = two_form_matrix(&self.omega);
            let r = f.len();
            for al in &self.alphas {
                let c = al.as_covector();
                for a in 0..r {
                    for b in 0..r {
                        if !c[a].is_zero() && !c[b].is_zero() {
                            f[a][b] += &(&c[a] * &c[b]);
                        }
                    }
                }
            }
            f
        })
    }

    /// `♭(v)` as a covector.
    pub fn flat_apply(&self, v: &[Expr]) -> Vec<Expr> {
        let f = self.flat_matrix();
        let r = f.len();
        (0..r)
            .map(|b| {
                let mut acc = Expr::zero();
                for a in 0..r {
                    if !v[a].is_zero() && !f[a][b].is_zero() {
                        acc += &(&v[a] * &f[a][b]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Closedness, nondegeneracy and sampled constant rank of `ω` on the
    /// given points (default: `{−1, 0, 1}^dim`).
    pub fn verify(
        &self,
        samples: Option<&[Vec<Rational>]>,
    ) -> Result<CosymplecticReport, CosymplecticError> {
        let d_alphas = self
            .alphas
            .iter()
            .map(|a| d(&self.algebroid, a))
            .collect::<Result<Vec<_>, _>>()?;
        let d_omega = d(&self.algebroid, &self.omega)?;
        let determinant = linalg::determinant(self.flat_matrix());
        let degeneracy_locus = if determinant.is_constant() && !determinant.is_zero() {
            None
        } else {
            Some(Expr::from(determinant.numerator().clone()))
        };
        let default;
        let pts = match samples {
            Some(p) => p,
            None => {
                default = unit_lattice(self.algebroid.dim());
                &default[..]
            }
        };
        let om = two_form_matrix(&self.omega);
        let omega_rank_samples = pts
            .iter()
            .map(|p| (p.clone(), linalg::rank_at(&om, p)))
            .collect();
        Ok(CosymplecticReport {
            d_alphas,
            d_omega,
            determinant,
            degeneracy_locus,
            omega_rank_samples,
            expected_omega_rank: 2 * self.n(),
        })
    }

    /// Reeb sections `R_i = ♭⁻¹(α_i)`, with `α_i(R_j) = δ_ij` and
    /// `ι_{R_i} ω = 0` asserted.
    pub fn reeb_sections(&self) -> Result<&[Section], CosymplecticError> {
        self.reeb
            .get_or_init(|| self.compute_reeb())
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    fn compute_reeb(&self) -> Result<Vec<Section>, CosymplecticError> {
        let ft = linalg::transpose(self.flat_matrix());
        let inv = linalg::inverse(&ft).ok_or(CosymplecticError::NotInvertible)?;
        let reeb: Vec<Section> = self
            .alphas
            .iter()
            .map(|al| mat_vec(&inv, &al.as_covector()))
            .collect();
        for (j, rj) in reeb.iter().enumerate() {
            for (i, al) in self.alphas.iter().enumerate() {
                let v = pairing(&al.as_covector(), rj);
                let expect = if i == j { Expr::one() } else { Expr::zero() };
                if v != expect {
                    return Err(CosymplecticError::PostCondition(format!(
                        "α{}(R{}) ≠ δ",
                        i + 1,
                        j + 1
                    )));
                }
            }
            if !interior(rj, &self.omega)?.is_zero() {
                return Err(CosymplecticError::PostCondition(format!(
                    "ι_R{} ω ≠ 0",
                    j + 1
                )));
            }
        }
        Ok(reeb)
    }

    /// Basis of `F = ∩ ker α_i` over the rational-function field.
    pub fn kernel_frame(&self) -> Vec<Section> {
        let rows: Vec<Vec<Expr>> = self.alphas.iter().map(|a| a.as_covector()).collect();
        linalg::kernel(&rows, self.algebroid.rank())
    }

    /// Matrix of `π♯` (same layout as [`crate::calculus::sharp`]).
    pub fn sharp_matrix(&self) -> Result<Vec<Vec<Expr>>, CosymplecticError> {
        let ft = linalg::transpose(self.flat_matrix());
        let inv = linalg::inverse(&ft).ok_or(CosymplecticError::NotInvertible)?;
        let reeb = self.reeb_sections()?;
        let r = inv.len();
        let mut s = vec![vec![Expr::zero(); r]; r];
        for j in 0..r {
            for i in 0..r {
                let mut v = inv[j][i].clone();
                for rr in reeb {
                    if !rr[j].is_zero() && !rr[i].is_zero() {
                        v -= &(&rr[j] * &rr[i]);
                    }
                }
                s[j][i] = -v;
            }
        }
        Ok(s)
    }

    /// Underlying bivector `π` with `π♯α_i = 0` and
    /// `ι_{π♯β} ω = −β + Σ β(R_i) α_i`, both asserted on the dual frame.
    pub fn underlying_bivector(&self) -> Result<&Multivector, CosymplecticError> {
        self.pi
            .get_or_init(|| self.compute_pi())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn compute_pi(&self) -> Result<Multivector, CosymplecticError> {
        let s = self.sharp_matrix()?;
        let r = s.len();
        let mut comps = Alternating::zero(r, 2);
        for i in 0..r {
            for j in 0..r {
                let skew = &s[j][i] + &s[i][j];
                if !skew.is_zero() {
                    return Err(CosymplecticError::PostCondition(
                        "reconstructed π♯ is not skew".into(),
                    ));
                }
                if i < j {
                    comps.set(vec![i, j], s[j][i].clone());
                }
            }
        }
        let pi = Multivector(comps);
        for (i, al) in self.alphas.iter().enumerate() {
            if !sharp_apply(&pi, &al.as_covector())?
                .iter()
                .all(|e| e.is_zero())
            {
                return Err(CosymplecticError::PostCondition(format!(
                    "π♯α{} ≠ 0",
                    i + 1
                )));
            }
        }
        let reeb = self.reeb_sections()?;
        for b in 0..r {
            let beta = self.algebroid.frame_section(b);
            let lhs = interior(&sharp_apply(&pi, &beta)?, &self.omega)?.as_covector();
            let mut rhs: Vec<Expr> = beta.iter().map(|e| -e).collect();
            for (al, rr) in self.alphas.iter().zip(reeb) {
                let c = pairing(&beta, rr);
                for (x, y) in rhs.iter_mut().zip(al.as_covector()) {
                    *x += &(&c * &y);
                }
            }
            if lhs != rhs {
                return Err(CosymplecticError::PostCondition(format!(
                    "ι_(π♯ε{}) ω ≠ −ε{} + Σ ε{}(R_i) α_i",
                    b + 1,
                    b + 1,
                    b + 1
                )));
            }
        }
        Ok(pi)
    }

    /// `[π, π]` for the underlying bivector; zero for closed structures.
    pub fn underlying_schouten_square(&self) -> Result<Multivector, CosymplecticError> {
        let pi = self.underlying_bivector()?;
        Ok(schouten(&self.algebroid, pi, pi)?)
    }

    /// The `(k−1)`-structure on `ker α_k`: restricts the algebroid to a
    /// frame of `ker α_k` and pulls back the remaining forms.
    pub fn drop_last_form(&self) -> Result<CosymplecticData, CosymplecticError> {
        let k = self.k();
        if k == 0 {
            return Err(CosymplecticError::Shape("no one-form to remove".into()));
        }
        let last = self.alphas[k - 1].as_covector();
        let frame = linalg::kernel(&[last], self.algebroid.rank());
        let (anchors, c) = self
            .algebroid
            .restrict_to_frame(&frame)
            .map_err(|e| CosymplecticError::PostCondition(e.to_string()))?;
        let sub = AlgebroidData::from_full_table(self.algebroid.chart().clone(), anchors, c)
            .map_err(|e| CosymplecticError::PostCondition(e.to_string()))?
            .verified()
            .map_err(|e| CosymplecticError::PostCondition(e.to_string()))?;
        let m = frame.len();
        let pull = |f: &AForm| -> Result<AForm, CalculusError> {
            let mut out = Alternating::zero(m, f.degree());
            for idx in crate::calculus::combinations(m, f.degree()) {
                let secs: Vec<Section> = idx.iter().map(|&i| frame[i].clone()).collect();
                out.set(idx, evaluate_form(f, &secs)?);
            }
            Ok(AForm(out))
        };
        let alphas = self.alphas[..k - 1]
            .iter()
            .map(pull)
            .collect::<Result<Vec<_>, _>>()?;
        CosymplecticData::new(sub, alphas, pull(&self.omega)?)
    }
}

fn mat_vec(m: &[Vec<Expr>], v: &[Expr]) -> Vec<Expr> {
    m.iter().map(|row| pairing(row, v)).collect()
}

/// Two-form `ω` with `ω♭ = −(π♯)⁻¹`, inverting [`CosymplecticData::underlying_bivector`]
/// for `k = 0`; `None` when `π` is degenerate.
pub fn symplectic_form_of(pi: &Multivector) -> Option<AForm> {
    let s = crate::calculus::sharp(pi).ok()?;
    // π♯ = −(Fᵀ)⁻¹ with F the matrix of ω, so F = −(π♯)⁻¹ᵀ.
    let inv = linalg::inverse(&s)?;
    let r = s.len();
    let mut out = Alternating::zero(r, 2);
    for a in 0..r {
        for b in (a + 1)..r {
            out.set(vec![a, b], -&inv[b][a]);
        }
    }
    Some(AForm(out))
}
