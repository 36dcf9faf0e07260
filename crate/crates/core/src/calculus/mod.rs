//! Calculus of multivectors `Γ(∧A)` and forms `Ω(A)` of an algebroid.
//!
//! Components are stored on strictly increasing frame indices. A form `ω`
//! of degree `q` has components `ω_I = ω(e_{i1}, …, e_{iq})`; a multivector
//! `P` of degree `p` is `Σ_I P^I e_{i1} ∧ … ∧ e_{ip}`. With these
//! conventions `(ε^1 ∧ ε^2)(e_1, e_2) = 1` and `π(α, β) = Σ π^{ij} α_i β_j`
//! over all `i, j` (antisymmetric extension).
//!
//! The Schouten bracket is the unique extension of the algebroid bracket
//! with `[v, f] = ρ(v)(f)`, graded antisymmetry
//! `[P, Q] = −(−1)^{(p−1)(q−1)} [Q, P]` and the graded Leibniz rule
//! `[P, Q ∧ R] = [P, Q] ∧ R + (−1)^{(p−1)q} Q ∧ [P, R]`. On frame monomials
//! it is computed from
//!
//! ```text
//! [f e_I, g e_J] = fg [e_I, e_J] + f [e_I, g] ∧ e_J − (−1)^{(p−1)(q−1)} g [e_J, f] ∧ e_I
//! [e_I, e_J]     = Σ_{s,t} (−1)^{s+t} [e_{i_s}, e_{j_t}] ∧ e_{I∖i_s} ∧ e_{J∖j_t}
//! [e_I, g]       = Σ_s (−1)^{p+s} ρ(e_{i_s})(g) e_{I∖i_s}
//! ```
//!
//! (positions `s, t` counted from one). With this sign convention the
//! bivector identity reads `[π,π](α,β,γ) = 2 ⟨α, [π♯β, π♯γ] − π♯[β,γ]_π⟩`;
//! the right-hand side is already totally antisymmetric, so its cyclic sum
//! is three times one term. See [`jacobiator_identity_residual`].

mod alternating;
mod triangular;

pub use alternating::{combinations, sort_with_sign, AForm, Alternating, Multivector};
pub use triangular::{
    check_triangular, induced_dual_bracket, jacobiator_identity_residual, TriangularReport,
};

use crate::algebroid::{AlgebroidData, Section};
use crate::symexpr::{linalg, Expr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalculusError {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("{0}")]
    Other(String),
}

fn check_rank(a: &AlgebroidData, got: usize) -> Result<(), CalculusError> {
    if a.rank() != got {
        return Err(CalculusError::RankMismatch {
            expected: a.rank(),
            got,
        });
    }
    Ok(())
}

fn check_degree(expected: usize, got: usize) -> Result<(), CalculusError> {
    if expected != got {
        return Err(CalculusError::DegreeMismatch { expected, got });
    }
    Ok(())
}

fn sign(parity: i64) -> i64 {
    if parity.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn without(idx: &[usize], pos: &[usize]) -> Vec<usize> {
    idx.iter()
        .enumerate()
        .filter(|(k, _)| !pos.contains(k))
        .map(|(_, &i)| i)
        .collect()
}

/// Koszul differential `d_A`.
pub fn d(a: &AlgebroidData, omega: &AForm) -> Result<AForm, CalculusError> {
    check_rank(a, omega.rank())?;
    let r = a.rank();
    let q = omega.degree();
    let mut out = Alternating::zero(r, q + 1);
    if q + 1 > r {
        return Ok(AForm(out));
    }
    for k in combinations(r, q + 1) {
        let mut acc = Expr::zero();
        for s in 0..=q {
            let val = omega.component(&without(&k, &[s]));
            if !val.is_zero() {
                let t = a.anchor_apply_frame(k[s], &val);
                if !t.is_zero() {
                    acc += &t.scale(&crate::symexpr::rat(sign(s as i64), 1));
                }
            }
        }
        for s in 0..=q {
            for t in (s + 1)..=q {
                let rest = without(&k, &[s, t]);
                let sg = sign((s + t) as i64);
                for m in 0..r {
                    let c = a.structure(k[s], k[t], m);
                    if c.is_zero() {
                        continue;
                    }
                    let mut idx = Vec::with_capacity(q);
                    idx.push(m);
                    idx.extend_from_slice(&rest);
                    let val = omega.component(&idx);
                    if !val.is_zero() {
                        let term = c * &val;
                        if sg > 0 {
                            acc += &term;
                        } else {
                            acc -= &term;
                        }
                    }
                }
            }
        }
        out.set(k, acc);
    }
    Ok(AForm(out))
}

/// `d_A f` for a function.
pub fn d_function(a: &AlgebroidData, f: &Expr) -> AForm {
    AForm::one_form((0..a.rank()).map(|i| a.anchor_apply_frame(i, f)).collect())
}

/// Interior product `ι_v ω`.
pub fn interior(v: &[Expr], omega: &AForm) -> Result<AForm, CalculusError> {
    if v.len() != omega.rank() {
        return Err(CalculusError::RankMismatch {
            expected: omega.rank(),
            got: v.len(),
        });
    }
    let q = omega.degree();
    let r = omega.rank();
    if q == 0 {
        return Ok(AForm(Alternating::zero(r, 0)));
    }
    let mut out = Alternating::zero(r, q - 1);
    for (idx, val) in omega.components() {
        for (s, &i) in idx.iter().enumerate() {
            if v[i].is_zero() {
                continue;
            }
            let rest = without(idx, &[s]);
            let term = &v[i] * val;
            out.add_to(rest, &term.scale(&crate::symexpr::rat(sign(s as i64), 1)));
        }
    }
    Ok(AForm(out))
}

/// Evaluate a form on sections: `ω(v_1, …, v_q)`.
pub fn evaluate_form(omega: &AForm, sections: &[Section]) -> Result<Expr, CalculusError> {
    check_degree(omega.degree(), sections.len())?;
    let mut acc = Expr::zero();
    for (idx, val) in omega.components() {
        let m: Vec<Vec<Expr>> = sections
            .iter()
            .map(|v| idx.iter().map(|&i| v[i].clone()).collect())
            .collect();
        let det = if m.is_empty() {
            Expr::one()
        } else {
            linalg::determinant(&m)
        };
        if !det.is_zero() {
            acc += &(val * &det);
        }
    }
    Ok(acc)
}

/// Evaluate a multivector on one-forms: `P(α_1, …, α_p)`.
pub fn evaluate_multivector(p: &Multivector, forms: &[Vec<Expr>]) -> Result<Expr, CalculusError> {
    evaluate_form(&AForm(p.0.clone()), forms)
}

/// `⟨α, v⟩`.
pub fn pairing(alpha: &[Expr], v: &[Expr]) -> Expr {
    let mut acc = Expr::zero();
    for (a, b) in alpha.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            acc += &(a * b);
        }
    }
    acc
}

/// Lie derivative of a form by Cartan's formula `L_v = ι_v d + d ι_v`.
pub fn lie_derivative_form(
    a: &AlgebroidData,
    v: &[Expr],
    omega: &AForm,
) -> Result<AForm, CalculusError> {
    let t1 = interior(v, &d(a, omega)?)?;
    if omega.degree() == 0 {
        return Ok(t1);
    }
    let t2 = d(a, &interior(v, omega)?)?;
    Ok(AForm(t1.0.add(&t2.0)))
}

/// Schouten bracket of multivectors.
pub fn schouten(
    a: &AlgebroidData,
    p: &Multivector,
    q: &Multivector,
) -> Result<Multivector, CalculusError> {
    check_rank(a, p.rank())?;
    check_rank(a, q.rank())?;
    let r = a.rank();
    let (dp, dq) = (p.degree(), q.degree());
    if dp + dq == 0 {
        return Ok(Multivector(Alternating::zero(r, 0)));
    }
    let mut out = Alternating::zero(r, dp + dq - 1);
    for (ii, f) in p.components() {
        for (jj, g) in q.components() {
            schouten_monomials(a, ii, f, jj, g, &mut out);
        }
    }
    Ok(Multivector(out))
}

fn schouten_monomials(
    a: &AlgebroidData,
    ii: &[usize],
    f: &Expr,
    jj: &[usize],
    g: &Expr,
    out: &mut Alternating,
) {
    let r = a.rank();
    let (p, q) = (ii.len(), jj.len());
    if p >= 1 && q >= 1 {
        let fg = f * g;
        for s in 0..p {
            for t in 0..q {
                let sg = sign((s + t) as i64);
                let rest_i = without(ii, &[s]);
                let rest_j = without(jj, &[t]);
                for k in 0..r {
                    let c = a.structure(ii[s], jj[t], k);
                    if c.is_zero() {
                        continue;
                    }
                    let mut idx = Vec::with_capacity(p + q - 1);
                    idx.push(k);
                    idx.extend_from_slice(&rest_i);
                    idx.extend_from_slice(&rest_j);
                    out.add_to(idx, &(&fg * c).scale(&crate::symexpr::rat(sg, 1)));
                }
            }
        }
    }
    if p >= 1 {
        for s in 0..p {
            let dg = a.anchor_apply_frame(ii[s], g);
            if dg.is_zero() {
                continue;
            }
            let sg = sign((p + s + 1) as i64);
            let mut idx = without(ii, &[s]);
            idx.extend_from_slice(jj);
            out.add_to(idx, &(f * &dg).scale(&crate::symexpr::rat(sg, 1)));
        }
    }
    if q >= 1 {
        let outer = -sign((p as i64 - 1) * (q as i64 - 1));
        for t in 0..q {
            let df = a.anchor_apply_frame(jj[t], f);
            if df.is_zero() {
                continue;
            }
            let sg = outer * sign((q + t + 1) as i64);
            let mut idx = without(jj, &[t]);
            idx.extend_from_slice(ii);
            out.add_to(idx, &(g * &df).scale(&crate::symexpr::rat(sg, 1)));
        }
    }
}

/// Lie derivative of a multivector, `L_v P = [v, P]`.
pub fn lie_derivative_multivector(
    a: &AlgebroidData,
    v: &[Expr],
    p: &Multivector,
) -> Result<Multivector, CalculusError> {
    schouten(a, &Multivector::from_section(v), p)
}

/// Matrix of `π♯`: `sharp[j][i] = π^{ij}`, so `(π♯α)^j = Σ_i π^{ij} α_i`
/// and `β(π♯α) = π(α, β)`.
pub fn sharp(pi: &Multivector) -> Result<Vec<Vec<Expr>>, CalculusError> {
    check_degree(2, pi.degree())?;
    let r = pi.rank();
    Ok((0..r)
        .map(|j| (0..r).map(|i| pi.component(&[i, j])).collect())
        .collect())
}

/// `π♯α`.
pub fn sharp_apply(pi: &Multivector, alpha: &[Expr]) -> Result<Section, CalculusError> {
    let s = sharp(pi)?;
    Ok(s.iter().map(|row| pairing(row, alpha)).collect())
}

/// Push a multivector forward along the anchor to a multivector on the
/// tangent algebroid of the chart.
pub fn push_forward(a: &AlgebroidData, p: &Multivector) -> Result<Multivector, CalculusError> {
    check_rank(a, p.rank())?;
    let n = a.dim();
    let mut out = Alternating::zero(n, p.degree());
    for (idx, val) in p.components() {
        let anchors: Vec<&Vec<Expr>> = idx.iter().map(|&i| &a.anchor()[i]).collect();
        let mut acc = Alternating::scalar(n, val.clone());
        for x in anchors {
            acc = acc.wedge(&Alternating::vector(x.clone()));
        }
        out = out.add(&acc);
    }
    Ok(Multivector(out))
}

/// Pull a form back along the anchor from the tangent algebroid of the
/// chart: `(ρ^*ω)(v_1, …) = ω(ρ v_1, …)`.
pub fn pull_back_anchor(a: &AlgebroidData, omega: &AForm) -> Result<AForm, CalculusError> {
    if omega.rank() != a.dim() {
        return Err(CalculusError::RankMismatch {
            expected: a.dim(),
            got: omega.rank(),
        });
    }
    let r = a.rank();
    let mut out = Alternating::zero(r, omega.degree());
    for idx in combinations(r, omega.degree()) {
        let secs: Vec<Section> = idx.iter().map(|&i| a.anchor()[i].clone()).collect();
        out.set(idx, evaluate_form(omega, &secs)?);
    }
    Ok(AForm(out))
}
