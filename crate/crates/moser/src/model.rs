use algebroid_core::algebroid::AlgebroidData;
use algebroid_core::calculus::{combinations, AForm, Alternating};
use algebroid_core::cosymplectic::CosymplecticData;
use algebroid_core::geometry::{local_model, SubmanifoldSpec};
use algebroid_core::symexpr::linalg::{inverse, mat_mul, transpose};
use algebroid_core::symexpr::{cst, Chart, Expr};

use crate::flow::is_coordinate_tangent;
use crate::{moser_flow, MoserError, MoserResult, NumericField, Real};

/// End-to-end run: the standard model, the fibrewise-linear chart map `ψ`
/// from the model chart to the input chart making the structures agree
/// along `L`, and the Moser flow between the model and `ψ^*` of the input.
#[derive(Clone, Debug)]
pub struct LocalModelRun<T> {
    pub model_chart: Chart,
    /// `ψ`: input coordinates as functions on the model chart.
    pub linear_map: Vec<Expr>,
    pub model: CosymplecticData,
    /// `ψ^*` of the input structure.
    pub pulled: CosymplecticData,
    pub result: MoserResult<T>,
}

/// `ψ^*` of a form of degree at most two, where `psi[c]` is the `c`-th
/// target coordinate as a function of the source coordinates.
pub fn pull_back_form(form: &AForm, psi: &[Expr]) -> Result<AForm, MoserError> {
    let n = psi.len();
    let subs: Vec<(usize, Expr)> = psi.iter().cloned().enumerate().collect();
    let jac: Vec<Vec<Expr>> = psi
        .iter()
        .map(|p| (0..n).map(|a| p.differentiate(a)).collect())
        .collect();
    let mut comps = Vec::new();
    for (idx, v) in form.components() {
        let at = v
            .substitute_all(&subs)
            .map_err(|e| MoserError::Unsupported(format!("pullback: {}", e)))?;
        comps.push((idx.clone(), at));
    }
    let out = match form.degree() {
        0 => comps
            .into_iter()
            .map(|(_, v)| (Vec::new(), v))
            .collect::<Vec<_>>(),
        1 => (0..n)
            .map(|a| {
                let s = comps
                    .iter()
                    .fold(Expr::zero(), |s, (idx, v)| &s + &(v * &jac[idx[0]][a]));
                (vec![a], s)
            })
            .collect(),
        2 => combinations(n, 2)
            .into_iter()
            .map(|ab| {
                let (a, b) = (ab[0], ab[1]);
                let s = comps.iter().fold(Expr::zero(), |s, (idx, v)| {
                    let (c, d) = (idx[0], idx[1]);
                    let det = &(&jac[c][a] * &jac[d][b]) - &(&jac[d][a] * &jac[c][b]);
                    &s + &(v * &det)
                });
                (ab, s)
            })
            .collect(),
        q => return Err(MoserError::Unsupported(format!("pullback of a {}-form", q))),
    };
    Ok(AForm(Alternating::from_components(n, form.degree(), out)))
}

/// Build the standard model around a minimal Lagrangian `L`, match the
/// input to it along `L` by a fibrewise-linear map, and run the Moser flow
/// between the two.
///
/// With tangent coordinates `x` and normal coordinates `u` of `L`, and
/// model coordinates `(x, ξ, t)`, the map is
/// `ψ(x, ζ) = (x + C(x)ζ, B(x)ζ)` for `ζ = (ξ, t)`, where `B` inverts the
/// matrix of `(ω(∂x_i, ∂u_b), α_j(∂u_b))` on `L` and `C` removes the
/// `ω(∂u, ∂u)` block.
pub fn verify_local_model_numeric<T: Real>(
    c: &CosymplecticData,
    l: &SubmanifoldSpec,
    field: &NumericField,
) -> Result<LocalModelRun<T>, MoserError> {
    if !is_coordinate_tangent(c.algebroid()) {
        return Err(MoserError::Unsupported(
            "local models are computed for tangent bundles in a coordinate frame".into(),
        ));
    }
    let model = local_model(c, l)?;
    let mchart = model.chart().clone();
    if !is_coordinate_tangent(model.structure.algebroid()) {
        return Err(MoserError::Unsupported(
            "model frame is not a coordinate frame".into(),
        ));
    }
    let n = l.chart().len();
    let tan = l.tangent();
    let nor = l.normal().to_vec();
    let m = tan.len();
    let k = c.k();
    let lchart = l.l_chart();
    if mchart.len() != n || nor.len() != m + k || (0..m).any(|i| mchart.name(i) != lchart.name(i)) {
        return Err(MoserError::Unsupported(format!(
            "model chart ({}) does not extend L ({})",
            mchart.names().join(", "),
            lchart.names().join(", ")
        )));
    }
    let om = |i: usize, j: usize| l.to_l(&c.omega().component(&[i, j]));
    let mut mm: Vec<Vec<Expr>> = tan
        .iter()
        .map(|&i| nor.iter().map(|&b| om(i, b)).collect())
        .collect();
    for a in c.alphas() {
        mm.push(nor.iter().map(|&b| l.to_l(&a.component(&[b]))).collect());
    }
    let b = inverse(&mm).ok_or_else(|| {
        MoserError::Unsupported("pairing of TL and the normal directions is degenerate on L".into())
    })?;
    let wnn: Vec<Vec<Expr>> = nor
        .iter()
        .map(|&i| nor.iter().map(|&j| om(i, j)).collect())
        .collect();
    let g = mat_mul(&transpose(&b), &mat_mul(&wnn, &b));
    for i in m..m + k {
        for j in m..m + k {
            if !g[i][j].is_zero() {
                return Err(MoserError::Unsupported(
                    "ω pairs the time directions on L".into(),
                ));
            }
        }
    }
    let half = cst(1, 2);
    let zeta: Vec<Expr> = (0..m + k).map(|j| Expr::var(m + j)).collect();
    let mut psi = vec![Expr::zero(); n];
    for (i, &ti) in tan.iter().enumerate() {
        let mut e = Expr::var(i);
        for (j, z) in zeta.iter().enumerate() {
            let cij = if j < m {
                &g[i][j] * &half
            } else {
                g[i][j].clone()
            };
            e = &e + &(&cij * z);
        }
        psi[ti] = e;
    }
    for (a, &na) in nor.iter().enumerate() {
        psi[na] = zeta
            .iter()
            .enumerate()
            .fold(Expr::zero(), |s, (j, z)| &s + &(&b[a][j] * z));
    }
    let tangent = AlgebroidData::tangent(mchart.clone());
    let model_c = CosymplecticData::new(
        tangent.clone(),
        model.structure.alphas().to_vec(),
        model.structure.omega().clone(),
    )
    .map_err(|e| MoserError::Structure(e.to_string()))?;
    let alphas = c
        .alphas()
        .iter()
        .map(|a| pull_back_form(a, &psi))
        .collect::<Result<Vec<_>, _>>()?;
    let omega = pull_back_form(c.omega(), &psi)?;
    let pulled = CosymplecticData::new(tangent, alphas, omega)
        .map_err(|e| MoserError::Structure(e.to_string()))?;
    let lp = SubmanifoldSpec::new(&mchart, (m..n).collect())?;
    let result = moser_flow(&model_c, &pulled, &lp, field)?;
    Ok(LocalModelRun {
        model_chart: mchart,
        linear_map: psi,
        model: model_c,
        pulled,
        result,
    })
}
