use super::{
    check_minimal_lagrangian, pullback_to_transversal, GeometryError, Restricted, SubmanifoldSpec,
};
use crate::algebroid::AlgebroidData;
use crate::calculus::{push_forward, AForm, Alternating, Multivector};
use crate::cosymplectic::CosymplecticData;
use crate::pullback::{
    build_pullback, canonical_two_form, dual_linear_poisson, induced_bivector, BundleChart,
    PullbackAlgebroid,
};
use crate::symexpr::{Chart, Coordinate, Expr};

/// Standard model `(dt_1, …, dt_k, ω_can)` on `p_*^!(i^!A) × Tℝ^k` around a
/// minimal Lagrangian transversal.
#[derive(Clone, Debug)]
pub struct LocalModel {
    /// `i^!A` over `L`.
    pub restricted: Restricted,
    /// `p_*^!(i^!A)` over the dual chart of `i^!A`.
    pub pullback: PullbackAlgebroid,
    /// The product with `Tℝ^k`, over the chart `(x, ξ, t)`.
    pub structure: CosymplecticData,
    /// Bivector of the model pushed to the chart `(x, ξ, t)`.
    pub pushed_bivector: Multivector,
    /// Linear Poisson structure dual to `i^!A ⊕ ℝ^k`.
    pub dual_poisson: (Chart, Multivector),
}

impl LocalModel {
    pub fn chart(&self) -> &Chart {
        self.structure.algebroid().chart()
    }
}

/// Product of an algebroid with `Tℝ^k`, with new coordinates `t1..tk`
/// appended to the chart and frame sections `∂t_j` appended to the frame.
pub fn with_time_directions(a: &AlgebroidData, k: usize) -> Result<AlgebroidData, GeometryError> {
    let n = a.dim();
    let r = a.rank();
    let chart = a.chart().extended(
        (1..=k)
            .map(|j| Coordinate::base(format!("t{}", j)))
            .collect(),
    );
    let mut anchor: Vec<Vec<Expr>> = a
        .anchor()
        .iter()
        .map(|row| {
            let mut row = row.clone();
            row.extend((0..k).map(|_| Expr::zero()));
            row
        })
        .collect();
    for j in 0..k {
        anchor.push(
            (0..n + k)
                .map(|b| {
                    if b == n + j {
                        Expr::one()
                    } else {
                        Expr::zero()
                    }
                })
                .collect(),
        );
    }
    Ok(AlgebroidData::from_full_table(chart, anchor, padded_structure(a, r + k))?.verified()?)
}

/// `A ⊕ ℝ^k` over the same chart, with zero anchor and bracket on the new
/// frame sections.
pub fn with_abelian(a: &AlgebroidData, k: usize) -> Result<AlgebroidData, GeometryError> {
    let mut anchor = a.anchor().to_vec();
    anchor.extend((0..k).map(|_| vec![Expr::zero(); a.dim()]));
    Ok(AlgebroidData::from_full_table(
        a.chart().clone(),
        anchor,
        padded_structure(a, a.rank() + k),
    )?
    .verified()?)
}

fn padded_structure(a: &AlgebroidData, rr: usize) -> Vec<Vec<Vec<Expr>>> {
    let r = a.rank();
    let mut c = vec![vec![vec![Expr::zero(); rr]; rr]; rr];
    for (i, ci) in c.iter_mut().enumerate().take(r) {
        for (j, cij) in ci.iter_mut().enumerate().take(r) {
            for (l, v) in cij.iter_mut().enumerate().take(r) {
                *v = a.structure(i, j, l).clone();
            }
        }
    }
    c
}

pub fn local_model(c: &CosymplecticData, l: &SubmanifoldSpec) -> Result<LocalModel, GeometryError> {
    let rep = check_minimal_lagrangian(c, l)?;
    if !rep.minimal() {
        return Err(GeometryError::Failed(
            "L is not a minimal Lagrangian transversal".into(),
        ));
    }
    let restricted = pullback_to_transversal(c.algebroid(), l)?;
    let b = &restricted.algebroid;
    let k = c.k();
    let pullback = build_pullback(b, BundleChart::dual(b))
        .map_err(|e| GeometryError::Failed(e.to_string()))?;
    let omega_can =
        canonical_two_form(&pullback).map_err(|e| GeometryError::Failed(e.to_string()))?;
    let product = with_time_directions(pullback.total(), k)?;
    let m = pullback.total().rank();
    let rr = m + k;
    let omega = AForm(Alternating::from_components(
        rr,
        2,
        omega_can.components().map(|(i, v)| (i.clone(), v.clone())),
    ));
    let alphas: Vec<AForm> = (0..k)
        .map(|j| {
            AForm::one_form(
                (0..rr)
                    .map(|i| {
                        if i == m + j {
                            Expr::one()
                        } else {
                            Expr::zero()
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    let structure = CosymplecticData::new(product, alphas, omega)
        .map_err(|e| GeometryError::Failed(e.to_string()))?;
    let report = structure
        .verify(None)
        .map_err(|e| GeometryError::Failed(e.to_string()))?;
    if !report.passed() {
        return Err(GeometryError::Failed(
            "model forms are not cosymplectic".into(),
        ));
    }
    let pi = structure
        .underlying_bivector()
        .map_err(|e| GeometryError::Failed(e.to_string()))?;
    let pushed =
        push_forward(structure.algebroid(), pi).map_err(|e| GeometryError::Shape(e.to_string()))?;
    let dual_poisson = dual_linear_poisson(&with_abelian(b, k)?);
    // the cosymplectic convention ι_{π♯β}ω = −β + … gives the negative of
    // the linear Poisson structure; inverting the frame matrix gives it
    if pushed.0 != dual_poisson.1 .0.neg() {
        return Err(GeometryError::Failed(
            "model bivector differs from the linear Poisson structure of i^!A ⊕ ℝ^k".into(),
        ));
    }
    let inv = induced_bivector(&pullback, &omega_can)
        .map_err(|e| GeometryError::Failed(e.to_string()))?;
    if inv != dual_linear_poisson(b).1 {
        return Err(GeometryError::Failed(
            "inverse of ω_can differs from the linear Poisson structure of i^!A".into(),
        ));
    }
    Ok(LocalModel {
        restricted,
        pullback,
        structure,
        pushed_bivector: pushed,
        dual_poisson,
    })
}
