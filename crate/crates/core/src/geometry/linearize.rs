use std::collections::BTreeMap;

use super::{GeometryError, SubmanifoldSpec};
use crate::calculus::{Alternating, Multivector};
use crate::symexpr::{scale_and_limit, Chart, CoordKind};

/// `π_lin = lim_{λ→0} λ m_λ^* π` for the fibrewise scaling `m_λ` of a
/// vector-bundle chart.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearizationResult {
    pub input: Multivector,
    /// Scaling weight of each coordinate: 1 along the fibres, 0 on the base.
    pub weights: Vec<i32>,
    /// `None` when some component diverges.
    pub linearized: Option<Multivector>,
    /// Lowest power of `λ` in each nonzero component of `λ m_λ^* π`.
    pub lowest_powers: BTreeMap<Vec<usize>, i32>,
    /// Components with a negative lowest power.
    pub divergent: Vec<Vec<usize>>,
}

impl LinearizationResult {
    pub fn diverges(&self) -> bool {
        !self.divergent.is_empty()
    }
}

/// Linearize a bivector on the tangent algebroid of a chart whose fibre
/// coordinates are marked [`CoordKind::Fibre`].
///
/// The component on `∂_i ∧ ∂_j` picks up `λ^{1 − w_i − w_j}` besides the
/// substitution `u ↦ λu` in its coefficient.
pub fn linearize(chart: &Chart, pi: &Multivector) -> Result<LinearizationResult, GeometryError> {
    let n = chart.len();
    if pi.rank() != n || pi.degree() != 2 {
        return Err(GeometryError::Shape(format!(
            "expected a bivector on a chart of dimension {}",
            n
        )));
    }
    let weights = chart.weights();
    let mut out = Alternating::zero(n, 2);
    let mut lowest_powers = BTreeMap::new();
    let mut divergent = Vec::new();
    for (idx, v) in pi.components() {
        if !v.is_polynomial() {
            return Err(GeometryError::NonPolynomial(format!(
                "π^{{{},{}}} = {}",
                chart.name(idx[0]),
                chart.name(idx[1]),
                chart.render(v)
            )));
        }
        let overall = 1 - weights[idx[0]] - weights[idx[1]];
        let lim = scale_and_limit(v, &weights, overall);
        if let Some(p) = lim.lowest_power {
            lowest_powers.insert(idx.clone(), p);
        }
        match lim.limit {
            Some(l) => out.set(idx.clone(), l),
            None => divergent.push(idx.clone()),
        }
    }
    Ok(LinearizationResult {
        input: pi.clone(),
        weights,
        linearized: if divergent.is_empty() {
            Some(Multivector(out))
        } else {
            None
        },
        lowest_powers,
        divergent,
    })
}

/// The zero section `{u = 0}` of a vector-bundle chart.
pub fn zero_section(chart: &Chart) -> SubmanifoldSpec {
    let fibre = (0..chart.len())
        .filter(|&i| chart.kind(i) == CoordKind::Fibre)
        .collect();
    SubmanifoldSpec::new(chart, fibre).expect("fibre indices lie in the chart")
}
