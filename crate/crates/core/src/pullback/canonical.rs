//! Canonical one- and two-forms on the pullback of `A` along `A* → M`.
//!
//! In the frame `(ē, c̄)` over the chart `(x, ξ)` the canonical one-form is
//! `λ_can = Σ ξ_i ε̄^i`, and `ω_can = −d λ_can` has
//! `ω(ē_i, ē_j) = Σ_k c^k_ij ξ_k`, `ω(ē_i, c̄_j) = δ_ij`, `ω(c̄_i, c̄_j) = 0`.
//! On lifts this reads
//! `ω(H_v + α↑, H_w + β↑) = ⟨β, v⟩ − ⟨α, w⟩ − ℓ_{[v,w]}`.
//!
//! The bivector induced by `ω_can` is `π^{IJ} = (W⁻¹)_{IJ}` with
//! `W_IJ = ω(E_I, E_J)`, pushed forward along the anchor; it coincides with
//! the linear Poisson structure `{ξ_i, ξ_j} = Σ_k c^k_ij ξ_k`,
//! `{ξ_i, x^a} = ρ^a_i`.

use super::{build_pullback, BundleChart, BundleRole, Generator, PullbackAlgebroid, PullbackError};
use crate::algebroid::{AlgebroidData, Section};
use crate::calculus::{d, evaluate_form, pairing, push_forward, AForm, Alternating, Multivector};
use crate::symexpr::{linalg, Chart, Expr};

fn require_dual(p: &PullbackAlgebroid) -> Result<(), PullbackError> {
    if p.role() != BundleRole::Dual {
        return Err(PullbackError::Role(format!(
            "canonical forms live on the dual role, not {:?}",
            p.role()
        )));
    }
    Ok(())
}

/// `λ_can = Σ ξ_i ε̄^i`.
pub fn canonical_one_form(p: &PullbackAlgebroid) -> Result<AForm, PullbackError> {
    require_dual(p)?;
    let r = p.base().rank();
    let mut c = vec![Expr::zero(); 2 * r];
    for (i, ci) in c.iter_mut().enumerate().take(r) {
        *ci = p.fibre_var(i);
    }
    Ok(AForm::one_form(c))
}

/// `ω_can = −d_A λ_can` on the pullback algebroid.
pub fn canonical_two_form(p: &PullbackAlgebroid) -> Result<AForm, PullbackError> {
    let lambda = canonical_one_form(p)?;
    let dl = d(p.total(), &lambda).map_err(|e| PullbackError::Shape(e.to_string()))?;
    Ok(AForm(dl.neg()))
}

/// Chart `(x, ξ)` of the dual bundle and the linear Poisson bivector on it,
/// determined by `{ℓ_v, ℓ_w} = ℓ_{[v,w]}` and `{ℓ_v, f} = ρ(v)(f)`.
pub fn dual_linear_poisson(a: &AlgebroidData) -> (Chart, Multivector) {
    let chart = BundleChart::dual(a).total_chart();
    let n = a.dim();
    let r = a.rank();
    let mut pi = Alternating::zero(n + r, 2);
    for i in 0..r {
        for j in (i + 1)..r {
            let mut v = Expr::zero();
            for k in 0..r {
                let c = a.structure(i, j, k);
                if !c.is_zero() {
                    v += &(c * &Expr::var(n + k));
                }
            }
            pi.add_to(vec![n + i, n + j], &v);
        }
        for (b, rho) in a.anchor()[i].iter().enumerate() {
            pi.add_to(vec![n + i, b], rho);
        }
    }
    (chart, Multivector(pi))
}

/// Matrix `W_IJ = ω(E_I, E_J)` of a two-form in the frame.
pub fn form_matrix(omega: &AForm) -> Vec<Vec<Expr>> {
    let r = omega.rank();
    (0..r)
        .map(|i| (0..r).map(|j| omega.component(&[i, j])).collect())
        .collect()
}

/// Bivector on the total chart induced by a nondegenerate two-form on the
/// pullback algebroid: `(W⁻¹)` pushed forward along the anchor.
pub fn induced_bivector(
    p: &PullbackAlgebroid,
    omega: &AForm,
) -> Result<Multivector, PullbackError> {
    let w = form_matrix(omega);
    let inv = linalg::inverse(&w)
        .ok_or_else(|| PullbackError::Inconsistent("two-form is degenerate".into()))?;
    let r = w.len();
    let mut pi = Alternating::zero(r, 2);
    for i in 0..r {
        for j in (i + 1)..r {
            pi.set(vec![i, j], inv[i][j].clone());
        }
    }
    push_forward(p.total(), &Multivector(pi)).map_err(|e| PullbackError::Shape(e.to_string()))
}

/// An element of the pullback algebroid at a point of the dual bundle:
/// `point` gives the fibre coordinates `ξ` as functions of the base (and
/// possibly further parameters), `a` the lifted-frame part and `b` the core
/// part.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    pub point: Vec<Expr>,
    pub a: Section,
    pub b: Vec<Expr>,
}

impl Element {
    /// `T_A α(v)`: at `ξ = α(x)`, with `a = v` and `b_j = ρ(v)(α_j)`.
    pub fn tangent_of_form(alg: &AlgebroidData, alpha: &[Expr], v: &[Expr]) -> Element {
        Element {
            point: alpha.to_vec(),
            a: v.to_vec(),
            b: alpha.iter().map(|f| alg.anchor_apply(v, f)).collect(),
        }
    }

    /// `T_A 0(v)` at the zero section.
    pub fn zero_tangent(v: &[Expr]) -> Element {
        let r = v.len();
        Element {
            point: vec![Expr::zero(); r],
            a: v.to_vec(),
            b: vec![Expr::zero(); r],
        }
    }

    /// Core element `α̂(w) = T_A 0(w) + ᾱ` at the zero section.
    pub fn core_of_form(alpha: &[Expr], w: &[Expr]) -> Element {
        Element {
            point: vec![Expr::zero(); w.len()],
            a: w.to_vec(),
            b: alpha.to_vec(),
        }
    }

    /// `H_v` at the point `ξ = α(x)`.
    pub fn hamiltonian_at(alg: &AlgebroidData, v: &[Expr], alpha: &[Expr]) -> Element {
        let r = alg.rank();
        let b = (0..r)
            .map(|j| pairing(alpha, &alg.bracket_unchecked(v, &alg.frame_section(j))))
            .collect();
        Element {
            point: alpha.to_vec(),
            a: v.to_vec(),
            b,
        }
    }

    /// Vertical element `β↑` at the point `ξ = α(x)`.
    pub fn vertical_at(alpha: &[Expr], beta: &[Expr]) -> Element {
        Element {
            point: alpha.to_vec(),
            a: vec![Expr::zero(); beta.len()],
            b: beta.to_vec(),
        }
    }

    fn frame_coefficients(&self) -> Section {
        let mut v = self.a.clone();
        v.extend(self.b.iter().cloned());
        v
    }

    pub fn sub(&self, other: &Element) -> Element {
        let diff = |x: &[Expr], y: &[Expr]| x.iter().zip(y).map(|(a, b)| a - b).collect();
        Element {
            point: self.point.clone(),
            a: diff(&self.a, &other.a),
            b: diff(&self.b, &other.b),
        }
    }
}

/// Substitute the fibre coordinates of `p`'s total chart by `point`.
fn at_point(p: &PullbackAlgebroid, e: &Expr, point: &[Expr]) -> Expr {
    let n = p.base().dim();
    let subs: Vec<(usize, Expr)> = point
        .iter()
        .enumerate()
        .map(|(k, v)| (n + k, v.clone()))
        .collect();
    e.substitute_all(&subs)
        .expect("polynomial substitution into a form component")
}

/// `ω(e1, e2)` for two elements over the same point.
pub fn evaluate_at(
    p: &PullbackAlgebroid,
    omega: &AForm,
    e1: &Element,
    e2: &Element,
) -> Result<Expr, PullbackError> {
    if e1.point != e2.point {
        return Err(PullbackError::Shape(
            "elements lie over different points".into(),
        ));
    }
    let w = omega.map(|c| at_point(p, c, &e1.point));
    evaluate_form(
        &AForm(w),
        &[e1.frame_coefficients(), e2.frame_coefficients()],
    )
    .map_err(|e| PullbackError::Shape(e.to_string()))
}

/// Residuals of the canonical-form identities for one base algebroid.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalFormReport {
    pub lambda: AForm,
    pub omega: AForm,
    /// `d ω_can`.
    pub d_omega: AForm,
    /// Determinant of the frame matrix of `ω_can`.
    pub determinant: Expr,
    /// Frame generator pairs whose `ω_can` value differs from the lift
    /// formula.
    pub generator_mismatches: Vec<String>,
    /// Induced bivector minus the linear Poisson structure.
    pub bivector_difference: Multivector,
}

impl CanonicalFormReport {
    pub fn closed(&self) -> bool {
        self.d_omega.is_zero()
    }

    pub fn unimodular(&self) -> bool {
        self.determinant.is_one() || (-&self.determinant).is_one()
    }

    pub fn passed(&self) -> bool {
        self.closed()
            && self.unimodular()
            && self.generator_mismatches.is_empty()
            && self.bivector_difference.is_zero()
    }
}

/// `ω(H_v + α↑, H_w + β↑)` by expansion, and the lift formula
/// `⟨β, v⟩ − ⟨α, w⟩ − ℓ_{[v,w]}`.
pub fn canonical_form_on_lifts(
    p: &PullbackAlgebroid,
    omega: &AForm,
    v: &[Expr],
    alpha: &[Expr],
    w: &[Expr],
    beta: &[Expr],
) -> Result<(Expr, Expr), PullbackError> {
    let x = p.expand_all(&[
        Generator::Hamiltonian(v.to_vec()),
        Generator::Vertical(alpha.to_vec()),
    ])?;
    let y = p.expand_all(&[
        Generator::Hamiltonian(w.to_vec()),
        Generator::Vertical(beta.to_vec()),
    ])?;
    let lhs = evaluate_form(omega, &[x, y]).map_err(|e| PullbackError::Shape(e.to_string()))?;
    let vw = p.base().bracket_unchecked(v, w);
    let xi: Vec<Expr> = (0..p.base().rank()).map(|k| p.fibre_var(k)).collect();
    let rhs = &(&pairing(beta, v) - &pairing(alpha, w)) - &pairing(&vw, &xi);
    Ok((lhs, rhs))
}

/// Build the dual pullback of `a` and check closedness, unimodularity, the
/// lift formula on frame generators and the induced bivector.
pub fn check_canonical_form(a: &AlgebroidData) -> Result<CanonicalFormReport, PullbackError> {
    let p = build_pullback(a, BundleChart::dual(a))?;
    let lambda = canonical_one_form(&p)?;
    let omega = canonical_two_form(&p)?;
    let d_omega = d(p.total(), &omega).map_err(|e| PullbackError::Shape(e.to_string()))?;
    let w = form_matrix(&omega);
    let determinant = linalg::determinant(&w);
    let r = a.rank();
    let mut mism = Vec::new();
    let zero = a.zero_section();
    for i in 0..r {
        for j in 0..r {
            let ei = a.frame_section(i);
            let ej = a.frame_section(j);
            let cases = [
                ("H", "H", (&ei, &zero, &ej, &zero)),
                ("H", "ε↑", (&ei, &zero, &zero, &ej)),
                ("ε↑", "ε↑", (&zero, &ei, &zero, &ej)),
            ];
            for (k1, k2, (v, al, w2, be)) in cases {
                let (l, rr) = canonical_form_on_lifts(&p, &omega, v, al, w2, be)?;
                if l != rr {
                    mism.push(format!("ω({}{}, {}{})", k1, i + 1, k2, j + 1));
                }
            }
        }
    }
    let induced = induced_bivector(&p, &omega)?;
    let (_, lin) = dual_linear_poisson(a);
    Ok(CanonicalFormReport {
        lambda,
        omega,
        d_omega,
        determinant,
        generator_mismatches: mism,
        bivector_difference: induced.sub(&lin),
    })
}

/// `(T_A α)^* λ_can − α` on the frame; zero for every `α`.
pub fn tautological_residual(
    p: &PullbackAlgebroid,
    alpha: &[Expr],
) -> Result<Vec<Expr>, PullbackError> {
    let lambda = canonical_one_form(p)?;
    let a = p.base();
    (0..a.rank())
        .map(|j| {
            let el = Element::tangent_of_form(a, alpha, &a.frame_section(j));
            let l = lambda.map(|c| at_point(p, c, &el.point));
            let v = evaluate_form(&AForm(l), &[el.frame_coefficients()])
                .map_err(|e| PullbackError::Shape(e.to_string()))?;
            Ok(&v - &alpha[j])
        })
        .collect()
}

/// Both sides of the prolongation identities for a one-form `α` and
/// sections `v, w`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProlongationReport {
    /// `ω_can(T_A α(v), T_A α(w))`.
    pub first_lhs: Expr,
    /// `−(d_A α)(v, w)`.
    pub first_rhs: Expr,
    /// `ω_can(T_A 0(v), α̂(w))`.
    pub second_lhs: Expr,
    /// `⟨α, v⟩`.
    pub second_rhs: Expr,
    /// `T_A α(v) − H_v(α) − (L_v α)↑`, as a core vector.
    pub derivative_residual: Vec<Expr>,
}

impl ProlongationReport {
    pub fn holds(&self) -> bool {
        self.first_lhs == self.first_rhs
            && self.second_lhs == self.second_rhs
            && self.derivative_residual.iter().all(|e| e.is_zero())
    }
}

pub fn prolongation_lemma_identities(
    a: &AlgebroidData,
    alpha: &[Expr],
    v: &[Expr],
    w: &[Expr],
) -> Result<ProlongationReport, PullbackError> {
    let p = build_pullback(a, BundleChart::dual(a))?;
    let omega = canonical_two_form(&p)?;
    let ta_v = Element::tangent_of_form(a, alpha, v);
    let ta_w = Element::tangent_of_form(a, alpha, w);
    let first_lhs = evaluate_at(&p, &omega, &ta_v, &ta_w)?;
    let da =
        d(a, &AForm::one_form(alpha.to_vec())).map_err(|e| PullbackError::Shape(e.to_string()))?;
    let first_rhs = -&evaluate_form(&da, &[v.to_vec(), w.to_vec()])
        .map_err(|e| PullbackError::Shape(e.to_string()))?;
    let second_lhs = evaluate_at(
        &p,
        &omega,
        &Element::zero_tangent(v),
        &Element::core_of_form(alpha, w),
    )?;
    let second_rhs = pairing(alpha, v);
    let diff = ta_v.sub(&Element::hamiltonian_at(a, v, alpha));
    let lie = crate::calculus::lie_derivative_form(a, v, &AForm::one_form(alpha.to_vec()))
        .map_err(|e| PullbackError::Shape(e.to_string()))?
        .as_covector();
    let mut derivative_residual: Vec<Expr> = diff.b.iter().zip(&lie).map(|(x, y)| x - y).collect();
    derivative_residual.extend(diff.a.iter().cloned());
    Ok(ProlongationReport {
        first_lhs,
        first_rhs,
        second_lhs,
        second_rhs,
        derivative_residual,
    })
}
