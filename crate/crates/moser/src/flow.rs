use algebroid_core::algebroid::AlgebroidData;
use algebroid_core::calculus::AForm;
use algebroid_core::cosymplectic::CosymplecticData;
use algebroid_core::geometry::SubmanifoldSpec;
use rayon::prelude::*;

use crate::compiled::CompiledForm;
use crate::fd::{jacobian, partial_derivative};
use crate::field::nan_max;
use crate::poincare::{check_star_shaped, primitive_of, Difference, FormSource};
use crate::{Grid, GridForm, GridFunction, MoserError, NumericField, Real, Region};

/// Run diagnostics of a Moser flow.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics<T> {
    /// Trajectories that left the box from nodes far enough from the inner
    /// half-box not to affect the residuals; their samples are NaN.
    pub escaped_nodes: usize,
    /// Smallest relative pivot met in the pointwise linear solves.
    pub min_pivot: T,
    /// The one-forms already agree, so the first step is the identity.
    pub step1_skipped: bool,
}

/// Flow map, the functions `F^j`, and the pullback residuals on the inner
/// half-box.
#[derive(Clone, Debug)]
pub struct MoserResult<T> {
    pub field: NumericField,
    /// `φ(p)` at every node.
    pub flow: GridFunction<T>,
    /// `F^j` with `φ^*ω̃ = ω + Σ d(F^j α_j)`.
    pub f: Vec<GridFunction<T>>,
    /// `‖φ^*α̃_j − α_j‖_∞`.
    pub alpha_residuals: Vec<T>,
    /// `‖ρ^*α̃_j − α_j‖_∞` for the first-step flow `ρ` alone.
    pub step1_alpha_residuals: Vec<T>,
    /// `‖φ^*ω̃ − ω − Σ d(F^j α_j)‖_∞`.
    pub omega_residual: T,
    /// `max |φ(p) − p|` over the nodes on `L`.
    pub identity_on_l: T,
    /// Integrator steps per stage.
    pub steps: usize,
    pub diagnostics: Diagnostics<T>,
}

impl<T: Real> MoserResult<T> {
    /// Largest pullback residual.
    pub fn max_residual(&self) -> T {
        self.alpha_residuals
            .iter()
            .fold(self.omega_residual, |a, &b| nan_max(a, b))
    }

    /// Residuals and the identity defect on `L` are finite and below the
    /// field tolerance.
    pub fn passed(&self) -> bool {
        let tol = T::of(self.field.tolerance());
        let r = self.max_residual();
        r.is_finite() && r < tol && self.identity_on_l.is_finite() && self.identity_on_l < tol
    }
}

pub(crate) fn is_coordinate_tangent(a: &AlgebroidData) -> bool {
    let n = a.dim();
    a.rank() == n
        && a.anchor().iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
        })
        && (0..n).all(|i| (0..n).all(|j| (0..n).all(|l| a.structure(i, j, l).is_zero())))
}

enum Stop {
    Outside(f64),
    Singular(f64, Vec<f64>),
}

type Field<'a, T> = dyn Fn(T, &[T], &mut [T]) -> Result<T, Stop> + Sync + 'a;

/// Fixed-step RK4 on `[0, 1]`; returns the final state and the smallest
/// pivot reported by the field.
fn rk4<T: Real>(y0: &[T], steps: usize, f: &Field<'_, T>) -> Result<(Vec<T>, T), Stop> {
    let len = y0.len();
    let h = T::one() / T::of_usize(steps);
    let half = h / T::of(2.0);
    let sixth = h / T::of(6.0);
    let two = T::of(2.0);
    let mut y = y0.to_vec();
    let (mut k1, mut k2, mut k3, mut k4) = (
        vec![T::zero(); len],
        vec![T::zero(); len],
        vec![T::zero(); len],
        vec![T::zero(); len],
    );
    let mut tmp = vec![T::zero(); len];
    let mut minp = T::infinity();
    for s in 0..steps {
        let t = h * T::of_usize(s);
        minp = minp.min(f(t, &y, &mut k1)?);
        for i in 0..len {
            tmp[i] = y[i] + half * k1[i];
        }
        minp = minp.min(f(t + half, &tmp, &mut k2)?);
        for i in 0..len {
            tmp[i] = y[i] + half * k2[i];
        }
        minp = minp.min(f(t + half, &tmp, &mut k3)?);
        for i in 0..len {
            tmp[i] = y[i] + h * k3[i];
        }
        minp = minp.min(f(t + h, &tmp, &mut k4)?);
        for i in 0..len {
            y[i] = y[i] + sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
        }
    }
    Ok((y, minp))
}

/// Solve `m x = b` in place by partial pivoting; returns the smallest
/// pivot relative to the largest entry, or `None` when singular.
fn solve_small<T: Real>(m: &mut [[T; 4]; 4], b: &mut [T; 4], s: usize) -> Option<T> {
    let scale = m[..s]
        .iter()
        .flat_map(|r| r[..s].iter().map(|v| v.abs()))
        .fold(T::zero(), |a, v| a.max(v));
    if !(scale > T::zero()) {
        return None;
    }
    let mut minp = T::infinity();
    for c in 0..s {
        let p = (c..s)
            .max_by(|&i, &j| {
                m[i][c]
                    .abs()
                    .partial_cmp(&m[j][c].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("nonempty");
        let rel = m[p][c].abs() / scale;
        if !(rel > T::of(1e-12)) {
            return None;
        }
        minp = minp.min(rel);
        m.swap(c, p);
        b.swap(c, p);
        for r in (c + 1)..s {
            let f = m[r][c] / m[c][c];
            for k in c..s {
                m[r][k] = m[r][k] - f * m[c][k];
            }
            b[r] = b[r] - f * b[c];
        }
    }
    for c in (0..s).rev() {
        let mut v = b[c];
        for k in (c + 1)..s {
            v = v - m[c][k] * b[k];
        }
        b[c] = v / m[c][c];
    }
    Some(minp)
}

fn two_form_matrix<T: Real>(combos: &[Vec<usize>], vals: &[T], n: usize) -> [[T; 3]; 3] {
    let mut w = [[T::zero(); 3]; 3];
    for (c, &v) in combos.iter().zip(vals) {
        w[c[0]][c[1]] = v;
        w[c[1]][c[0]] = -v;
    }
    debug_assert!(n <= 3);
    w
}

/// Inner half-box widened by the finite-difference stencil.
fn protected<T: Real>(g: &Grid<T>, node: usize) -> bool {
    let idx = g.index(node);
    let n = g.nodes_per_axis() - 1;
    (0..g.dim()).all(|a| 4 * (idx[a] + 2) >= n && 4 * idx[a] <= 3 * n + 8)
}

/// Trajectories from every node; escaped samples are NaN.
fn trace<T: Real>(
    g: &Grid<T>,
    n: usize,
    extra: usize,
    steps: usize,
    f: &Field<'_, T>,
    escaped: &mut usize,
    min_pivot: &mut T,
) -> Result<(GridFunction<T>, Vec<GridFunction<T>>), MoserError> {
    let results: Vec<Result<(Vec<T>, T), Stop>> = (0..g.len())
        .into_par_iter()
        .map(|node| {
            let mut y0 = g.point(node);
            y0.extend((0..extra).map(|_| T::zero()));
            rk4(&y0, steps, f)
        })
        .collect();
    // a degenerate solve anywhere outranks trajectories leaving the box
    if let Some(Err(Stop::Singular(t, point))) = results
        .iter()
        .find(|r| matches!(r, Err(Stop::Singular(..))))
    {
        return Err(MoserError::Singular {
            point: point.clone(),
            t: *t,
        });
    }
    let mut pos = vec![T::nan(); g.len() * n];
    let mut acc = vec![vec![T::nan(); g.len()]; extra];
    for (node, r) in results.into_iter().enumerate() {
        match r {
            Ok((y, p)) => {
                pos[node * n..(node + 1) * n].copy_from_slice(&y[..n]);
                for (j, a) in acc.iter_mut().enumerate() {
                    a[node] = y[n + j];
                }
                *min_pivot = min_pivot.min(p);
            }
            Err(Stop::Singular(t, point)) => return Err(MoserError::Singular { point, t }),
            Err(Stop::Outside(t)) => {
                if protected(g, node) {
                    return Err(MoserError::LeftBox {
                        start: g.point(node).iter().map(|v| v.as_f64()).collect(),
                        t,
                    });
                }
                *escaped += 1;
            }
        }
    }
    Ok((
        GridFunction::new(g.clone(), n, pos),
        acc.into_iter()
            .map(|a| GridFunction::new(g.clone(), 1, a))
            .collect(),
    ))
}

fn check_structure(c: &CosymplecticData, which: &str) -> Result<(), MoserError> {
    if !is_coordinate_tangent(c.algebroid()) {
        return Err(MoserError::Unsupported(format!(
            "{} structure is not on a tangent bundle in a coordinate frame",
            which
        )));
    }
    let rep = c
        .verify(Some(&[]))
        .map_err(|e| MoserError::Structure(e.to_string()))?;
    if !rep.closed() || !rep.nondegenerate() {
        return Err(MoserError::Structure(format!(
            "{} forms are not cosymplectic",
            which
        )));
    }
    Ok(())
}

fn agree_along(a: &AForm, b: &AForm, l: &SubmanifoldSpec, what: &str) -> Result<(), MoserError> {
    let diff = a.sub(b);
    for (idx, v) in diff.components() {
        if !l.restrict(v).is_zero() {
            return Err(MoserError::Disagree(format!(
                "{} component [{}] differs by {} on L",
                what,
                idx.iter()
                    .map(|&i| l.chart().name(i))
                    .collect::<Vec<_>>()
                    .join(","),
                l.chart().render(&l.restrict(v))
            )));
        }
    }
    Ok(())
}

/// Two-step Moser flow `φ` with `φ^*α̃ = α` and
/// `φ^*ω̃ = ω + d(F α)`, fixing `L`.
///
/// The first step flows along `X_t = −h α_t / |α_t|²`, the minimal-norm
/// solution of `α_t(X_t) = −h` with `dh = α̃ − α`; the second flows along
/// `Y_t ∈ ker α` with `ι_{Y_t} ω_t = −φ + f_t α`, where `dφ` is the
/// difference of the two-forms after the first step.
pub fn moser_flow<T: Real>(
    c: &CosymplecticData,
    ct: &CosymplecticData,
    l: &SubmanifoldSpec,
    field: &NumericField,
) -> Result<MoserResult<T>, MoserError> {
    let n = l.chart().len();
    let k = c.k();
    if n > 3 || k > 1 {
        return Err(MoserError::Unsupported(format!(
            "dimension {} with {} one-forms (at most 3 and 1)",
            n, k
        )));
    }
    if ct.k() != k || c.algebroid().dim() != n || ct.algebroid().dim() != n || field.dim() != n {
        return Err(MoserError::Unsupported(
            "structures, chart and box differ in shape".into(),
        ));
    }
    check_structure(c, "reference")?;
    check_structure(ct, "target")?;
    for j in 0..k {
        agree_along(&ct.alphas()[j], &c.alphas()[j], l, "one-form")?;
    }
    agree_along(ct.omega(), c.omega(), l, "two-form")?;
    check_star_shaped(field, l)?;

    let g = field.grid::<T>();
    let steps = field.steps();
    let normal = l.normal().to_vec();
    let om = CompiledForm::<T>::new(c.omega());
    let omt = CompiledForm::<T>::new(ct.omega());
    let al: Vec<CompiledForm<T>> = c.alphas().iter().map(CompiledForm::new).collect();
    let alt: Vec<CompiledForm<T>> = ct.alphas().iter().map(CompiledForm::new).collect();
    let mut escaped = 0usize;
    let mut min_pivot = T::infinity();

    // step 1: match the one-form
    let skip1 = (0..k).all(|j| ct.alphas()[j].sub(&c.alphas()[j]).is_zero());
    let h_grid: Option<GridForm<T>> = if skip1 {
        None
    } else {
        let diff = Difference {
            a: &alt[0],
            b: &al[0],
        };
        Some(primitive_of(&diff, &normal, field)?)
    };
    let mut step1_field: Option<Box<Field<'_, T>>> = None;
    if let Some(hg) = &h_grid {
        let (a0, a1) = (&al[0], &alt[0]);
        let f1 = move |t: T, y: &[T], out: &mut [T]| -> Result<T, Stop> {
            let p = &y[..n];
            let mut hv = [T::zero()];
            if !hg.values().interpolate(p, &mut hv) {
                return Err(Stop::Outside(t.as_f64()));
            }
            let mut u = [T::zero(); 3];
            let mut v = [T::zero(); 3];
            a0.eval(p, &mut u[..n]);
            a1.eval(p, &mut v[..n]);
            let mut norm2 = T::zero();
            for i in 0..n {
                u[i] = u[i] + t * (v[i] - u[i]);
                norm2 = norm2 + u[i] * u[i];
            }
            if !(norm2 > T::of(1e-24)) {
                return Err(Stop::Singular(
                    t.as_f64(),
                    p.iter().map(|x| x.as_f64()).collect(),
                ));
            }
            for i in 0..n {
                out[i] = -hv[0] * u[i] / norm2;
            }
            Ok(norm2.sqrt())
        };
        step1_field = Some(Box::new(f1));
    }
    let mut step1_alpha_residuals = vec![T::zero(); k];
    let omega_after: Box<dyn FormSource<T>> = match &step1_field {
        None => Box::new(omt.clone()),
        Some(f1) => {
            let (r, _) = trace(&g, n, 0, steps, f1.as_ref(), &mut escaped, &mut min_pivot)?;
            let pulled = GridFunction::from_fn(g.clone(), om.combos().len(), |node, out| {
                let j = jacobian(&r, node);
                let q = r.at(node);
                let mut wv = vec![T::zero(); omt.combos().len()];
                omt.eval(q, &mut wv);
                let w = two_form_matrix(omt.combos(), &wv, n);
                for (o, cmb) in out.iter_mut().zip(om.combos()) {
                    let (a, b) = (cmb[0], cmb[1]);
                    let mut s = T::zero();
                    for cc in 0..n {
                        for dd in 0..n {
                            s = s + j[cc][a] * w[cc][dd] * j[dd][b];
                        }
                    }
                    *o = s;
                }
            });
            for (jn, res) in step1_alpha_residuals.iter_mut().enumerate() {
                *res = alpha_residual(&g, &r, &alt[jn], &al[jn], field);
            }
            Box::new(GridForm::new(2, pulled))
        }
    };

    // step 2: match the two-form inside ker α
    let diff2 = Difference {
        a: omega_after.as_ref(),
        b: &om,
    };
    let phi = primitive_of(&diff2, &normal, field)?;
    let s = n + k;
    let om_ref = &om;
    let al_ref = &al;
    let after = omega_after.as_ref();
    let phi_ref = &phi;
    let f2 = move |t: T, y: &[T], out: &mut [T]| -> Result<T, Stop> {
        let p = &y[..n];
        let mut ph = [T::zero(); 3];
        if !phi_ref.values().interpolate(p, &mut ph[..n]) {
            return Err(Stop::Outside(t.as_f64()));
        }
        let nc = om_ref.combos().len();
        let mut w0 = [T::zero(); 3];
        let mut w1 = [T::zero(); 3];
        om_ref.eval(p, &mut w0[..nc]);
        if !after.eval(p, &mut w1[..nc]) {
            return Err(Stop::Outside(t.as_f64()));
        }
        for i in 0..nc {
            w0[i] = w0[i] + t * (w1[i] - w0[i]);
        }
        let w = two_form_matrix(om_ref.combos(), &w0[..nc], n);
        let mut m = [[T::zero(); 4]; 4];
        let mut b = [T::zero(); 4];
        for row in 0..n {
            for col in 0..n {
                m[row][col] = w[col][row];
            }
            b[row] = -ph[row];
        }
        if k == 1 {
            let mut av = [T::zero(); 3];
            al_ref[0].eval(p, &mut av[..n]);
            for i in 0..n {
                m[i][n] = -av[i];
                m[n][i] = av[i];
            }
        }
        let Some(piv) = solve_small(&mut m, &mut b, s) else {
            return Err(Stop::Singular(
                t.as_f64(),
                p.iter().map(|x| x.as_f64()).collect(),
            ));
        };
        out[..s].copy_from_slice(&b[..s]);
        Ok(piv)
    };
    let (sigma, f) = trace(&g, n, k, steps, &f2, &mut escaped, &mut min_pivot)?;

    // composite φ = ρ ∘ σ
    let flow = match &step1_field {
        None => sigma,
        Some(f1) => {
            let f1 = f1.as_ref();
            GridFunction::from_fn(g.clone(), n, |node, out| {
                let q = sigma.at(node);
                let r = if q.iter().all(|v| v.is_finite()) {
                    rk4(q, steps, f1).ok()
                } else {
                    None
                };
                match r {
                    Some((y, _)) => out.copy_from_slice(&y[..n]),
                    None => out.iter_mut().for_each(|v| *v = T::nan()),
                }
            })
        }
    };
    if let Some(node) =
        (0..g.len()).find(|&nd| protected(&g, nd) && !flow.at(nd).iter().all(|v| v.is_finite()))
    {
        return Err(MoserError::LeftBox {
            start: g.point(node).iter().map(|v| v.as_f64()).collect(),
            t: 1.0,
        });
    }

    let alpha_residuals: Vec<T> = (0..k)
        .map(|j| alpha_residual(&g, &flow, &alt[j], &al[j], field))
        .collect();
    let omega_residual = omega_residual(&g, &flow, &f, &omt, &om, &al, field);
    let identity_on_l = (0..g.len())
        .filter(|&nd| g.on_subspace(nd, &normal))
        .map(|nd| {
            let p = g.point(nd);
            flow.at(nd)
                .iter()
                .zip(&p)
                .map(|(a, b)| (*a - *b).abs())
                .fold(T::zero(), nan_max)
        })
        .fold(T::zero(), nan_max);
    Ok(MoserResult {
        field: field.clone(),
        flow,
        f,
        alpha_residuals,
        step1_alpha_residuals,
        omega_residual,
        identity_on_l,
        steps,
        diagnostics: Diagnostics {
            escaped_nodes: escaped,
            min_pivot,
            step1_skipped: skip1,
        },
    })
}

fn exact_at<T: Real>(
    form: &CompiledForm<T>,
    g: &Grid<T>,
    field: &NumericField,
    node: usize,
    out: &mut [T],
) {
    let idx = g.index(node);
    form.eval_exact(&field.node(&idx[..g.dim()]), out);
}

/// `‖φ^*α̃ − α‖_∞` on the inner half-box.
fn alpha_residual<T: Real>(
    g: &Grid<T>,
    map: &GridFunction<T>,
    alt: &CompiledForm<T>,
    al: &CompiledForm<T>,
    field: &NumericField,
) -> T {
    let n = g.dim();
    (0..g.len())
        .into_par_iter()
        .filter(|&nd| g.in_region(nd, Region::InnerHalf))
        .map(|nd| {
            let j = jacobian(map, nd);
            let mut at = [T::zero(); 3];
            let mut a0 = [T::zero(); 3];
            alt.eval(map.at(nd), &mut at[..n]);
            exact_at(al, g, field, nd, &mut a0[..n]);
            (0..n)
                .map(|a| {
                    let pulled = (0..n).fold(T::zero(), |s, cc| s + j[cc][a] * at[cc]);
                    (pulled - a0[a]).abs()
                })
                .fold(T::zero(), nan_max)
        })
        .reduce(T::zero, nan_max)
}

/// `‖φ^*ω̃ − ω − Σ d(F^j α_j)‖_∞` on the inner half-box.
fn omega_residual<T: Real>(
    g: &Grid<T>,
    map: &GridFunction<T>,
    f: &[GridFunction<T>],
    omt: &CompiledForm<T>,
    om: &CompiledForm<T>,
    al: &[CompiledForm<T>],
    field: &NumericField,
) -> T {
    let n = g.dim();
    let nc = om.combos().len();
    (0..g.len())
        .into_par_iter()
        .filter(|&nd| g.in_region(nd, Region::InnerHalf))
        .map(|nd| {
            let j = jacobian(map, nd);
            let mut wt = [T::zero(); 3];
            let mut w0 = [T::zero(); 3];
            omt.eval(map.at(nd), &mut wt[..nc]);
            exact_at(om, g, field, nd, &mut w0[..nc]);
            let w = two_form_matrix(omt.combos(), &wt[..nc], n);
            let mut worst = T::zero();
            for (ci, cmb) in om.combos().iter().enumerate() {
                let (a, b) = (cmb[0], cmb[1]);
                let mut s = T::zero();
                for cc in 0..n {
                    for dd in 0..n {
                        s = s + j[cc][a] * w[cc][dd] * j[dd][b];
                    }
                }
                let mut exact_part = T::zero();
                for (fj, alj) in f.iter().zip(al) {
                    let mut av = [T::zero(); 3];
                    exact_at(alj, g, field, nd, &mut av[..n]);
                    let da = partial_derivative(fj, 0, a, nd);
                    let db = partial_derivative(fj, 0, b, nd);
                    exact_part = exact_part + da * av[b] - db * av[a];
                }
                worst = nan_max(worst, (s - w0[ci] - exact_part).abs());
            }
            worst
        })
        .reduce(T::zero, nan_max)
}
