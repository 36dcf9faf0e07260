use super::{
    d_function, evaluate_multivector, lie_derivative_form, lie_derivative_multivector, pairing,
    schouten, sharp_apply, CalculusError, Multivector,
};
use crate::algebroid::{is_zero_vec, AlgebroidData, Section};
use crate::symexpr::Expr;

/// Bracket on `Γ(A*)` induced by a bivector:
/// `[α, β]_π = L_{π♯α} β − L_{π♯β} α − d_A π(α, β)`.
pub fn induced_dual_bracket(
    a: &AlgebroidData,
    pi: &Multivector,
    alpha: &[Expr],
    beta: &[Expr],
) -> Result<Vec<Expr>, CalculusError> {
    let pa = sharp_apply(pi, alpha)?;
    let pb = sharp_apply(pi, beta)?;
    let fa = super::AForm::one_form(alpha.to_vec());
    let fb = super::AForm::one_form(beta.to_vec());
    let t1 = lie_derivative_form(a, &pa, &fb)?;
    let t2 = lie_derivative_form(a, &pb, &fa)?;
    let f = evaluate_multivector(pi, &[alpha.to_vec(), beta.to_vec()])?;
    let t3 = d_function(a, &f);
    Ok(t1.sub(&t2).sub(&t3).as_covector())
}

/// Residuals of the triangularity and exactness conditions for a bivector.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularReport {
    /// `[π, π]`.
    pub schouten_square: Multivector,
    /// `(i, j)` with `π♯[ε^i, ε^j]_π − [π♯ε^i, π♯ε^j] ≠ 0`.
    pub sharp_morphism_residual: Vec<((usize, usize), Section)>,
    /// `i` with `[e_i, [π, π]] ≠ 0`.
    pub invariance_residual: Vec<(usize, Multivector)>,
}

impl TriangularReport {
    /// `[π, π] = 0`.
    pub fn triangular(&self) -> bool {
        self.schouten_square.is_zero()
    }

    /// `π♯` intertwines the induced bracket with the algebroid bracket.
    pub fn sharp_is_morphism(&self) -> bool {
        self.sharp_morphism_residual.is_empty()
    }

    /// `[π, π]` is invariant under every frame section, so the pair
    /// `(A, A*)` with the induced bracket is a Lie bialgebroid.
    pub fn exact(&self) -> bool {
        self.invariance_residual.is_empty()
    }
}

fn unit(r: usize, i: usize) -> Vec<Expr> {
    (0..r)
        .map(|k| if k == i { Expr::one() } else { Expr::zero() })
        .collect()
}

pub fn check_triangular(
    a: &AlgebroidData,
    pi: &Multivector,
) -> Result<TriangularReport, CalculusError> {
    let r = a.rank();
    let sq = schouten(a, pi, pi)?;
    let mut morph = Vec::new();
    for i in 0..r {
        for j in (i + 1)..r {
            let (ei, ej) = (unit(r, i), unit(r, j));
            let br = induced_dual_bracket(a, pi, &ei, &ej)?;
            let lhs = sharp_apply(pi, &br)?;
            let rhs = a
                .bracket(&sharp_apply(pi, &ei)?, &sharp_apply(pi, &ej)?)
                .map_err(|e| CalculusError::Other(e.to_string()))?;
            let res: Section = lhs.iter().zip(&rhs).map(|(x, y)| x - y).collect();
            if !is_zero_vec(&res) {
                morph.push(((i, j), res));
            }
        }
    }
    let mut inv = Vec::new();
    for i in 0..r {
        let t = lie_derivative_multivector(a, &unit(r, i), &sq)?;
        if !t.is_zero() {
            inv.push((i, t));
        }
    }
    Ok(TriangularReport {
        schouten_square: sq,
        sharp_morphism_residual: morph,
        invariance_residual: inv,
    })
}

/// Both sides of the bivector Jacobiator identity on three one-forms:
/// returns `([π,π](α,β,γ), 2 ⟨α, [π♯β, π♯γ] − π♯[β,γ]_π⟩)`, which agree
/// for every bivector.
pub fn jacobiator_identity_residual(
    a: &AlgebroidData,
    pi: &Multivector,
    alpha: &[Expr],
    beta: &[Expr],
    gamma: &[Expr],
) -> Result<(Expr, Expr), CalculusError> {
    let sq = schouten(a, pi, pi)?;
    let lhs = evaluate_multivector(&sq, &[alpha.to_vec(), beta.to_vec(), gamma.to_vec()])?;
    let term = |x: &[Expr], y: &[Expr], z: &[Expr]| -> Result<Expr, CalculusError> {
        let py = sharp_apply(pi, y)?;
        let pz = sharp_apply(pi, z)?;
        let br = a
            .bracket(&py, &pz)
            .map_err(|e| CalculusError::Other(e.to_string()))?;
        let ind = sharp_apply(pi, &induced_dual_bracket(a, pi, y, z)?)?;
        let diff: Vec<Expr> = br.iter().zip(&ind).map(|(u, v)| u - v).collect();
        Ok(pairing(x, &diff))
    };
    let rhs = term(alpha, beta, gamma)?.scale(&crate::symexpr::rat(2, 1));
    Ok((lhs, rhs))
}
