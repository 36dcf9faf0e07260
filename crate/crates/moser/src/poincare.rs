use algebroid_core::algebroid::AlgebroidData;
use algebroid_core::calculus::{combinations, d, sort_with_sign, AForm};
use algebroid_core::geometry::SubmanifoldSpec;

use crate::compiled::CompiledForm;
use crate::field::nan_max;
use crate::quadrature::gauss_legendre;
use crate::{GridForm, GridFunction, MoserError, NumericField, Real};

const QUADRATURE_NODES: (usize, usize) = (20, 32);

/// Absolute quadrature agreement required between the two node counts,
/// relative to the size of the primitive.
const QUADRATURE_TOLERANCE: f64 = 1e-10;

/// Pointwise values of a differential form on `Tℝⁿ`.
pub(crate) trait FormSource<T: Real>: Sync {
    fn degree(&self) -> usize;
    fn combos(&self) -> &[Vec<usize>];
    /// `false` when the point is outside the domain of the data.
    fn eval(&self, p: &[T], out: &mut [T]) -> bool;
}

impl<T: Real> FormSource<T> for CompiledForm<T> {
    fn degree(&self) -> usize {
        CompiledForm::degree(self)
    }

    fn combos(&self) -> &[Vec<usize>] {
        CompiledForm::combos(self)
    }

    fn eval(&self, p: &[T], out: &mut [T]) -> bool {
        CompiledForm::eval(self, p, out);
        true
    }
}

impl<T: Real> FormSource<T> for GridForm<T> {
    fn degree(&self) -> usize {
        GridForm::degree(self)
    }

    fn combos(&self) -> &[Vec<usize>] {
        GridForm::combos(self)
    }

    fn eval(&self, p: &[T], out: &mut [T]) -> bool {
        self.values().interpolate(p, out)
    }
}

/// `a − b` for two sources of the same shape.
pub(crate) struct Difference<'a, T> {
    pub a: &'a dyn FormSource<T>,
    pub b: &'a dyn FormSource<T>,
}

impl<T: Real> FormSource<T> for Difference<'_, T> {
    fn degree(&self) -> usize {
        self.a.degree()
    }

    fn combos(&self) -> &[Vec<usize>] {
        self.a.combos()
    }

    fn eval(&self, p: &[T], out: &mut [T]) -> bool {
        let mut tmp = vec![T::zero(); out.len()];
        let ok = self.a.eval(p, out) && self.b.eval(p, &mut tmp);
        for (o, t) in out.iter_mut().zip(&tmp) {
            *o = *o - *t;
        }
        ok
    }
}

/// Exact node samples of a symbolic form.
pub fn sample_form<T: Real>(omega: &AForm, field: &NumericField) -> GridForm<T> {
    let c = CompiledForm::<T>::new(omega);
    let g = field.grid::<T>();
    let gi = g.clone();
    let values = GridFunction::from_fn(g, c.combos().len(), |node, out| {
        let idx = gi.index(node);
        c.eval_exact(&field.node(&idx[..field.dim()]), out)
    });
    GridForm::new(omega.degree(), values)
}

/// Relative homotopy primitive `φ = ∫₀¹ (1/t) m_t^*(ι_E ω) dt` of a closed
/// form on `Tℝⁿ` vanishing along `L`, where `m_t` scales the normal
/// coordinates of `L` and `E` is their Euler field, sampled at the grid
/// nodes by Gauss–Legendre quadrature.
pub fn poincare_primitive<T: Real>(
    omega: &AForm,
    l: &SubmanifoldSpec,
    field: &NumericField,
) -> Result<GridForm<T>, MoserError> {
    let chart = l.chart();
    let n = chart.len();
    if omega.rank() != n || field.dim() != n {
        return Err(MoserError::Unsupported(format!(
            "form of rank {} on a {}-dimensional chart with a {}-dimensional box",
            omega.rank(),
            n,
            field.dim()
        )));
    }
    if omega.degree() == 0 {
        return Err(MoserError::Unsupported(
            "functions have no primitive".into(),
        ));
    }
    let tangent = AlgebroidData::tangent(chart.clone());
    let dw = d(&tangent, omega).map_err(|e| MoserError::Structure(e.to_string()))?;
    if !dw.is_zero() {
        return Err(MoserError::NotClosed);
    }
    check_relative(omega, l)?;
    check_star_shaped(field, l)?;
    primitive_of(&CompiledForm::<T>::new(omega), l.normal(), field)
}

/// Components of `ω` with all indices tangent to `L` restrict to zero on `L`.
fn check_relative(omega: &AForm, l: &SubmanifoldSpec) -> Result<(), MoserError> {
    let normal = l.normal();
    for (idx, v) in omega.components() {
        if idx.iter().all(|i| !normal.contains(i)) && !l.restrict(v).is_zero() {
            return Err(MoserError::NotRelative(format!(
                "component [{}] = {}",
                idx.iter()
                    .map(|&i| l.chart().name(i))
                    .collect::<Vec<_>>()
                    .join(","),
                l.chart().render(v)
            )));
        }
    }
    Ok(())
}

/// The scaling `m_t` must keep the box: zero lies on every normal axis.
pub(crate) fn check_star_shaped(
    field: &NumericField,
    l: &SubmanifoldSpec,
) -> Result<(), MoserError> {
    for &a in l.normal() {
        if field.zero_index(a).is_none() {
            return Err(MoserError::InvalidField(format!(
                "normal axis {} has no grid node at zero",
                l.chart().name(a)
            )));
        }
    }
    Ok(())
}

/// Quadrature of the homotopy formula for any source, checked by comparing
/// two node counts.
pub(crate) fn primitive_of<T: Real, S: FormSource<T> + ?Sized>(
    src: &S,
    normal: &[usize],
    field: &NumericField,
) -> Result<GridForm<T>, MoserError> {
    let lo = homotopy(src, normal, field, QUADRATURE_NODES.0);
    let hi = homotopy(src, normal, field, QUADRATURE_NODES.1);
    let g = hi.grid();
    let scale = hi.max_abs(crate::Region::All).max(T::one());
    let tol = T::of(QUADRATURE_TOLERANCE) * scale;
    // nodes whose rays leave the data (NaN) are skipped here and reported
    // by the flows that would use them
    let mut worst = (T::zero(), 0usize);
    for node in 0..g.len() {
        let diff = lo
            .values()
            .at(node)
            .iter()
            .zip(hi.values().at(node))
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), nan_max);
        if diff > worst.0 {
            worst = (diff, node);
        }
    }
    if worst.0 > tol {
        return Err(MoserError::Quadrature {
            point: g.point(worst.1).iter().map(|v| v.as_f64()).collect(),
            difference: worst.0.as_f64(),
        });
    }
    Ok(hi)
}

fn homotopy<T: Real, S: FormSource<T> + ?Sized>(
    src: &S,
    normal: &[usize],
    field: &NumericField,
    nq: usize,
) -> GridForm<T> {
    let g = field.grid::<T>();
    let n = g.dim();
    let q = src.degree();
    let out = combinations(n, q - 1);
    let src_combos = src.combos();
    // for each output list B: t-power #(N ∩ B) and terms (a, slot of aB, sign)
    let plan: Vec<(i32, Vec<(usize, usize, T)>)> = out
        .iter()
        .map(|b| {
            let pow = b.iter().filter(|i| normal.contains(i)).count() as i32;
            let terms = normal
                .iter()
                .filter(|a| !b.contains(a))
                .map(|&a| {
                    let mut idx = vec![a];
                    idx.extend_from_slice(b);
                    let (sorted, sign) = sort_with_sign(&idx).expect("distinct indices");
                    let slot = src_combos
                        .iter()
                        .position(|c| *c == sorted)
                        .expect("source has every index list");
                    (a, slot, T::of(sign as f64))
                })
                .collect();
            (pow, terms)
        })
        .collect();
    let (ts, ws) = gauss_legendre::<T>(nq);
    let gi = g.clone();
    let values = GridFunction::from_fn(g, out.len(), |node, o| {
        let p = gi.point(node);
        let mut qpt = p.clone();
        let mut eta = vec![T::zero(); src_combos.len()];
        o.iter_mut().for_each(|v| *v = T::zero());
        for (&t, &w) in ts.iter().zip(&ws) {
            for &a in normal {
                qpt[a] = t * p[a];
            }
            if !src.eval(&qpt, &mut eta) {
                o.iter_mut().for_each(|v| *v = T::nan());
                return;
            }
            for (v, (pow, terms)) in o.iter_mut().zip(&plan) {
                let s = terms.iter().fold(T::zero(), |acc, &(a, slot, sign)| {
                    acc + sign * p[a] * eta[slot]
                });
                *v = *v + w * t.powi(*pow) * s;
            }
        }
    });
    GridForm::new(q - 1, values)
}
