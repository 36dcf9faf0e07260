//! Submanifold geometry for algebroids over coordinate charts.
//!
//! Submanifolds are coordinate subspaces `L = {u = 0}` for a designated set
//! of normal coordinates `u`; the remaining coordinates parametrise `L`.
//! Rank statements are exact over the rational-function field; where the
//! elimination used a pivot that can vanish on `L`, the verdict is
//! downgraded to one sampled on the rational lattice `{−1, −½, 0, ½, 1}`.

mod linearize;
mod local_model;
mod scan;

pub use linearize::{linearize, zero_section, LinearizationResult};
pub use local_model::{local_model, with_abelian, with_time_directions, LocalModel};
pub use scan::{
    coordinate_hull_dim, cotangent_algebroid, linear_poisson_of, nonlinearizability_scan,
    pair_bivector, product_grid, weinstein_rank_scan, ProductCheck, RankReport, RankSample,
    ScanOptions, Verdict, WeinsteinReport, WeinsteinSample, WeinsteinSplit,
};

use crate::algebroid::{AlgebroidData, AlgebroidError, Section};
use crate::calculus::{evaluate_form, push_forward, sharp, AForm, Multivector};
use crate::cosymplectic::{lattice, CosymplecticData};
use crate::symexpr::{linalg, rat, Chart, Coordinate, Expr, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("unknown coordinate {0}")]
    UnknownCoordinate(String),
    #[error("submanifold is not transverse to the anchor: {0}")]
    NotTransversal(String),
    #[error("kernel rank is not constant along the submanifold; it drops at {0}")]
    NonConstantRank(String),
    #[error("non-polynomial component {0}")]
    NonPolynomial(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
}

/// Verdict strength of a rank-based test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certainty {
    /// Decided over the rational-function field with nonvanishing pivots.
    Exact,
    /// Some pivot can vanish on `L`; decided at sample points.
    Sampled,
}

/// The default sample values `{−1, −½, 0, ½, 1}`.
pub fn default_sample_values() -> Vec<Rational> {
    vec![rat(-1, 1), rat(-1, 2), rat(0, 1), rat(1, 2), rat(1, 1)]
}

/// `L = {u = 0}` inside a chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubmanifoldSpec {
    chart: Chart,
    normal: Vec<usize>,
}

impl SubmanifoldSpec {
    pub fn new(chart: &Chart, normal: Vec<usize>) -> Result<Self, GeometryError> {
        if let Some(&i) = normal.iter().find(|&&i| i >= chart.len()) {
            return Err(GeometryError::UnknownCoordinate(format!("index {}", i)));
        }
        let mut normal = normal;
        normal.sort_unstable();
        normal.dedup();
        Ok(SubmanifoldSpec {
            chart: chart.clone(),
            normal,
        })
    }

    /// `L` given by the names of the coordinates that vanish on it.
    pub fn from_names(chart: &Chart, names: &[&str]) -> Result<Self, GeometryError> {
        let idx = names
            .iter()
            .map(|n| {
                chart
                    .index_of(n)
                    .ok_or_else(|| GeometryError::UnknownCoordinate(n.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(chart, idx)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn normal(&self) -> &[usize] {
        &self.normal
    }

    pub fn codim(&self) -> usize {
        self.normal.len()
    }

    /// Coordinates along `L`, in chart order.
    pub fn tangent(&self) -> Vec<usize> {
        (0..self.chart.len())
            .filter(|i| !self.normal.contains(i))
            .collect()
    }

    /// Chart of `L`.
    pub fn l_chart(&self) -> Chart {
        Chart::new(
            self.tangent()
                .iter()
                .map(|&i| Coordinate::base(self.chart.name(i)))
                .collect(),
        )
    }

    /// Restrict to `L` (set the normal coordinates to zero), keeping the
    /// chart indices.
    pub fn restrict(&self, e: &Expr) -> Expr {
        let subs: Vec<(usize, Expr)> = self.normal.iter().map(|&i| (i, Expr::zero())).collect();
        e.substitute_all(&subs)
            .expect("restriction to L leaves a denominator vanishing identically")
    }

    /// Restrict to `L` and re-index onto the chart of `L`.
    pub fn to_l(&self, e: &Expr) -> Expr {
        let t = self.tangent();
        let mut map = vec![0; self.chart.len()];
        for (k, &i) in t.iter().enumerate() {
            map[i] = k;
        }
        self.restrict(e).remap(&map)
    }

    /// Points of `L` on the sample lattice, as full-chart points.
    pub fn sample_points(&self, values: &[Rational]) -> Vec<Vec<Rational>> {
        let t = self.tangent();
        lattice(t.len(), values)
            .into_iter()
            .map(|p| {
                let mut full = vec![Rational::from_integer(0.into()); self.chart.len()];
                for (k, &i) in t.iter().enumerate() {
                    full[i] = p[k].clone();
                }
                full
            })
            .collect()
    }

    fn restrict_matrix(&self, m: &[Vec<Expr>]) -> Vec<Vec<Expr>> {
        m.iter()
            .map(|r| r.iter().map(|e| self.restrict(e)).collect())
            .collect()
    }
}

fn render_point(chart: &Chart, p: &[Rational]) -> String {
    let parts: Vec<String> = p
        .iter()
        .enumerate()
        .map(|(i, v)| format!("{}={}", chart.name(i), v))
        .collect();
    format!("({})", parts.join(", "))
}

/// Exact rank along `L`, downgraded to sampling when some pivot vanishes
/// somewhere on `L`. Returns the rank, its certainty and, for sampled
/// ranks, a sample where the rank differs from the generic one.
fn rank_along(
    l: &SubmanifoldSpec,
    m: &[Vec<Expr>],
) -> (usize, Certainty, Option<(Vec<Rational>, usize)>) {
    let (rank, flags) = linalg::rank(m);
    if flags.is_empty() {
        return (rank, Certainty::Exact, None);
    }
    let witness = l
        .sample_points(&default_sample_values())
        .into_iter()
        .find_map(|p| match linalg::rank_at(m, &p) {
            Some(r) if r != rank => Some((p, r)),
            _ => None,
        });
    (rank, Certainty::Sampled, witness)
}

/// Normal components of the anchor on `L`: `N[i][k] = ρ(e_i)^{u_k}|_L`.
fn normal_anchor(a: &AlgebroidData, l: &SubmanifoldSpec) -> Vec<Vec<Expr>> {
    (0..a.rank())
        .map(|i| {
            l.normal
                .iter()
                .map(|&u| l.restrict(&a.anchor()[i][u]))
                .collect()
        })
        .collect()
}

/// Transversality `T L + ρ(A) = TM` along `L`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransversalReport {
    /// Rank of the normal part of the anchor (must equal the codimension).
    pub normal_rank: usize,
    pub codim: usize,
    pub certainty: Certainty,
    /// A sample of `L` where the normal rank drops, if any.
    pub witness: Option<String>,
}

impl TransversalReport {
    pub fn transversal(&self) -> bool {
        self.normal_rank == self.codim && self.witness.is_none()
    }
}

pub fn check_transversal(a: &AlgebroidData, l: &SubmanifoldSpec) -> TransversalReport {
    let n = normal_anchor(a, l);
    let (normal_rank, certainty, witness) = rank_along(l, &n);
    TransversalReport {
        normal_rank,
        codim: l.codim(),
        certainty,
        witness: witness.map(|(p, r)| format!("rank {} at {}", r, render_point(l.chart(), &p))),
    }
}

/// `ρ⁻¹(TL)` as an algebroid over `L`, with its frame in the ambient frame.
#[derive(Clone, Debug)]
pub struct Restricted {
    /// Algebroid over the chart of `L`.
    pub algebroid: AlgebroidData,
    /// Frame sections in the ambient frame, with coefficients on the
    /// ambient chart (independent of the normal coordinates).
    pub frame: Vec<Section>,
    pub submanifold: SubmanifoldSpec,
}

/// Frame of `ρ⁻¹(TL)` along `L`, in the ambient frame; refused when its
/// rank is not constant along `L`.
pub fn tangent_preimage_frame(
    a: &AlgebroidData,
    l: &SubmanifoldSpec,
) -> Result<Vec<Section>, GeometryError> {
    let nt = linalg::transpose(&normal_anchor(a, l));
    if nt.is_empty() {
        return Ok(linalg::kernel(&nt, a.rank()));
    }
    let (rank, _, witness) = rank_along(l, &nt);
    if let Some((p, r)) = witness {
        return Err(GeometryError::NonConstantRank(format!(
            "{} (rank {} instead of {})",
            render_point(l.chart(), &p),
            r,
            rank
        )));
    }
    Ok(linalg::kernel(&nt, a.rank()))
}

/// `ρ⁻¹(TL)` as an algebroid over `L`, without a transversality
/// requirement.
pub fn preimage_of_tangent(
    a: &AlgebroidData,
    l: &SubmanifoldSpec,
) -> Result<Restricted, GeometryError> {
    let frame = tangent_preimage_frame(a, l)?;
    let d = frame.len();
    let fm: Vec<Vec<Expr>> = (0..a.rank())
        .map(|row| frame.iter().map(|s| s[row].clone()).collect())
        .collect();
    let mut c = vec![vec![vec![Expr::zero(); d]; d]; d];
    for p in 0..d {
        for q in (p + 1)..d {
            let br: Vec<Expr> = a
                .bracket(&frame[p], &frame[q])?
                .iter()
                .map(|e| l.restrict(e))
                .collect();
            let sol = linalg::solve_linear(&fm, &br).map_err(|_| {
                GeometryError::Failed(format!(
                    "bracket of frame {} and {} leaves ρ⁻¹(TL)",
                    p + 1,
                    q + 1
                ))
            })?;
            for k in 0..d {
                c[p][q][k] = l.to_l(&sol.solution[k]);
                c[q][p][k] = -&c[p][q][k];
            }
        }
    }
    let t = l.tangent();
    let anchor: Vec<Vec<Expr>> = frame
        .iter()
        .map(|s| {
            let v = a.anchor_of(s);
            t.iter().map(|&i| l.to_l(&v[i])).collect()
        })
        .collect();
    let alg = AlgebroidData::from_full_table(l.l_chart(), anchor, c)?
        .verified()
        .map_err(|e| GeometryError::Failed(e.to_string()))?;
    Ok(Restricted {
        algebroid: alg,
        frame,
        submanifold: l.clone(),
    })
}

/// `i^!A = ρ⁻¹(TL)` for a transversal `L`.
pub fn pullback_to_transversal(
    a: &AlgebroidData,
    l: &SubmanifoldSpec,
) -> Result<Restricted, GeometryError> {
    let rep = check_transversal(a, l);
    if !rep.transversal() {
        return Err(GeometryError::NotTransversal(match rep.witness {
            Some(w) => w,
            None => format!(
                "normal anchor rank {} < codimension {}",
                rep.normal_rank, rep.codim
            ),
        }));
    }
    let r = preimage_of_tangent(a, l)?;
    if r.frame.len() + l.codim() != a.rank() {
        return Err(GeometryError::Failed(
            "N_A L → NL is not an isomorphism".into(),
        ));
    }
    Ok(r)
}

/// Coisotropic and Lagrangian verdicts for `L` with respect to an
/// `A`-bivector.
#[derive(Clone, Debug, PartialEq)]
pub struct CoisotropicReport {
    /// `π♯(ρ⁻¹(TL)°) ⊂ ρ⁻¹(TL)` along `L`.
    pub coisotropic: bool,
    /// `π♯(ρ⁻¹(TL)°) = ρ⁻¹(TL) ∩ im π♯`.
    pub lagrangian: bool,
    pub certainty: Certainty,
    /// Coisotropy of `L` for the pushed-forward bivector on the chart.
    pub coisotropic_downstairs: bool,
    /// Pointwise Lagrangian equality at the `L` samples (for the tangent
    /// algebroid: the sampled part of the clean-intersection condition).
    pub lagrangian_at_samples: Option<bool>,
    /// Limitations that apply to this verdict.
    pub notes: Vec<String>,
}

fn mat_mul(a: &[Vec<Expr>], b: &[Vec<Expr>]) -> Vec<Vec<Expr>> {
    linalg::mat_mul(a, b)
}

fn hcat(a: &[Vec<Expr>], b: &[Vec<Expr>]) -> Vec<Vec<Expr>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().chain(y.iter()).cloned().collect())
        .collect()
}

fn columns(vs: &[Section], r: usize) -> Vec<Vec<Expr>> {
    (0..r)
        .map(|row| vs.iter().map(|s| s[row].clone()).collect())
        .collect()
}

/// Pieces shared by the coisotropic and Lagrangian tests, restricted to `L`.
struct Containment {
    /// Frame of `ρ⁻¹(TL)` as rows.
    kt: Vec<Vec<Expr>>,
    /// Matrix of `π♯`.
    s: Vec<Vec<Expr>>,
    /// `π♯` of an annihilator frame, as columns.
    img: Vec<Vec<Expr>>,
    coisotropic: bool,
}

fn containment(
    a: &AlgebroidData,
    pi: &Multivector,
    l: &SubmanifoldSpec,
) -> Result<Containment, GeometryError> {
    let r = a.rank();
    let k = tangent_preimage_frame(a, l)?;
    let s = l.restrict_matrix(&sharp(pi).map_err(|e| GeometryError::Shape(e.to_string()))?);
    let kt: Vec<Vec<Expr>> = k
        .iter()
        .map(|v| v.iter().map(|e| l.restrict(e)).collect())
        .collect();
    let ann = linalg::kernel(&kt, r);
    let nt = linalg::transpose(&normal_anchor(a, l));
    let img = mat_mul(&s, &columns(&ann, r));
    let coisotropic = nt.is_empty()
        || img.first().map_or(true, |c| c.is_empty())
        || mat_mul(&nt, &img).iter().flatten().all(|e| e.is_zero());
    Ok(Containment {
        kt,
        s,
        img,
        coisotropic,
    })
}

/// `π♯(ρ⁻¹(TL)°) ⊂ ρ⁻¹(TL)` along `L`.
pub fn check_coisotropic(
    a: &AlgebroidData,
    pi: &Multivector,
    l: &SubmanifoldSpec,
) -> Result<bool, GeometryError> {
    Ok(containment(a, pi, l)?.coisotropic)
}

pub fn check_coisotropic_lagrangian(
    a: &AlgebroidData,
    pi: &Multivector,
    l: &SubmanifoldSpec,
) -> Result<CoisotropicReport, GeometryError> {
    let r = a.rank();
    let Containment {
        kt,
        s,
        img,
        coisotropic,
    } = containment(a, pi, l)?;
    let kc = columns(&kt, r);
    let rank_img = if img.first().map_or(true, |c| c.is_empty()) {
        (0, vec![])
    } else {
        linalg::rank(&img)
    };
    let rank_s = linalg::rank(&s);
    let rank_k = if kc.first().map_or(true, |c| c.is_empty()) {
        (0, vec![])
    } else {
        linalg::rank(&kc)
    };
    let joint = if kc.first().map_or(true, |c| c.is_empty()) {
        rank_s.clone()
    } else {
        linalg::rank(&hcat(&kc, &s))
    };
    let exact =
        rank_img.1.is_empty() && rank_s.1.is_empty() && rank_k.1.is_empty() && joint.1.is_empty();
    let lag_generic = coisotropic && rank_img.0 == rank_k.0 + rank_s.0 - joint.0;
    let tangent_case =
        a.anchor().len() == a.dim() && (0..a.rank()).all(|i| a.anchor()[i] == a.frame_section(i));
    let samples = if exact && !tangent_case {
        Vec::new()
    } else {
        l.sample_points(&default_sample_values())
    };
    let pointwise = |p: &[Rational]| -> Option<bool> {
        let rk = |m: &[Vec<Expr>]| -> Option<usize> {
            if m.first().map_or(true, |c| c.is_empty()) {
                Some(0)
            } else {
                linalg::rank_at(m, p)
            }
        };
        let ri = rk(&img)?;
        let rs = rk(&s)?;
        let rkk = rk(&kc)?;
        let rj = if kc.first().map_or(true, |c| c.is_empty()) {
            rs
        } else {
            rk(&hcat(&kc, &s))?
        };
        Some(ri == rkk + rs - rj)
    };
    let sampled: Vec<Option<bool>> = samples.iter().map(|p| pointwise(p)).collect();
    let at_samples = sampled.iter().all(|v| v.unwrap_or(true));
    let (lagrangian, certainty) = if exact {
        (lag_generic, Certainty::Exact)
    } else {
        (coisotropic && at_samples, Certainty::Sampled)
    };
    let pushed = push_forward(a, pi).map_err(|e| GeometryError::Shape(e.to_string()))?;
    let downstairs = l.normal.iter().all(|&u| {
        l.normal
            .iter()
            .all(|&v| l.restrict(&pushed.component(&[u, v])).is_zero())
    });
    let mut notes = Vec::new();
    if tangent_case {
        notes.push(
            "clean intersection with every leaf is not enumerated; only the pointwise Lagrangian condition is sampled on L".into(),
        );
    }
    Ok(CoisotropicReport {
        coisotropic,
        lagrangian,
        certainty,
        coisotropic_downstairs: downstairs,
        lagrangian_at_samples: if tangent_case { Some(at_samples) } else { None },
        notes,
    })
}

/// Pullbacks of the structure forms to `ρ⁻¹(TL)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalLagrangianReport {
    pub lagrangian: bool,
    /// `i^*α_j` on the frame of `ρ⁻¹(TL)`.
    pub pulled_alphas: Vec<Vec<Expr>>,
    /// `i^*ω` on the frame of `ρ⁻¹(TL)`.
    pub pulled_omega: Vec<Vec<Expr>>,
}

impl MinimalLagrangianReport {
    pub fn minimal(&self) -> bool {
        self.lagrangian
            && self.pulled_alphas.iter().flatten().all(|e| e.is_zero())
            && self.pulled_omega.iter().flatten().all(|e| e.is_zero())
    }
}

pub fn check_minimal_lagrangian(
    c: &CosymplecticData,
    l: &SubmanifoldSpec,
) -> Result<MinimalLagrangianReport, GeometryError> {
    let a = c.algebroid();
    let sub = pullback_to_transversal(a, l)?;
    let pi = c
        .underlying_bivector()
        .map_err(|e| GeometryError::Failed(e.to_string()))?;
    let lag = check_coisotropic_lagrangian(a, pi, l)?;
    let f = &sub.frame;
    let ev = |form: &AForm, secs: &[Section]| -> Result<Expr, GeometryError> {
        evaluate_form(form, secs)
            .map(|e| l.restrict(&e))
            .map_err(|e| GeometryError::Shape(e.to_string()))
    };
    let pulled_alphas = c
        .alphas()
        .iter()
        .map(|al| {
            f.iter()
                .map(|s| ev(al, &[s.clone()]))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let pulled_omega = f
        .iter()
        .map(|s| {
            f.iter()
                .map(|t| ev(c.omega(), &[s.clone(), t.clone()]))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MinimalLagrangianReport {
        lagrangian: lag.lagrangian,
        pulled_alphas,
        pulled_omega,
    })
}

/// Transport a bivector on the chart along `(x, ξ) ↦ (x, ξ − α(x))`, where
/// `fibre[i]` is the chart index of `ξ_i` and `alpha` depends only on the
/// remaining coordinates. The graph of `α` becomes `{η = 0}`.
pub fn shift_by_graph(
    pi: &Multivector,
    fibre: &[usize],
    alpha: &[Expr],
) -> Result<Multivector, GeometryError> {
    let n = pi.rank();
    if fibre.len() != alpha.len() {
        return Err(GeometryError::Shape(
            "one component of α per fibre coordinate".into(),
        ));
    }
    // new coordinate functions y'_a = y_a − α_a for fibre entries
    let mut coords: Vec<Expr> = (0..n).map(Expr::var).collect();
    for (f, al) in fibre.iter().zip(alpha) {
        if fibre.iter().any(|&g| al.contains_var(g)) {
            return Err(GeometryError::Shape(
                "α must not depend on fibre coordinates".into(),
            ));
        }
        coords[*f] = &coords[*f] - al;
    }
    let grads: Vec<Vec<Expr>> = coords
        .iter()
        .map(|c| (0..n).map(|i| c.differentiate(i)).collect())
        .collect();
    let back: Vec<(usize, Expr)> = fibre
        .iter()
        .zip(alpha)
        .map(|(&f, al)| (f, &Expr::var(f) + al))
        .collect();
    let mut out = crate::calculus::Alternating::zero(n, 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let v =
                crate::calculus::evaluate_multivector(pi, &[grads[i].clone(), grads[j].clone()])
                    .map_err(|e| GeometryError::Shape(e.to_string()))?;
            let v = v
                .substitute_all(&back)
                .expect("polynomial change of coordinates");
            out.set(vec![i, j], v);
        }
    }
    Ok(Multivector(out))
}

/// Coisotropy of the graph of `α ∈ Γ(A*)` in the linear Poisson structure
/// on the dual chart.
pub fn graph_coisotropic(a: &AlgebroidData, alpha: &[Expr]) -> Result<bool, GeometryError> {
    let (chart, pi) = crate::pullback::dual_linear_poisson(a);
    let n = a.dim();
    let fibre: Vec<usize> = (n..n + a.rank()).collect();
    let shifted = shift_by_graph(&pi, &fibre, alpha)?;
    let l = SubmanifoldSpec::new(&chart, fibre)?;
    check_coisotropic(&AlgebroidData::tangent(chart), &shifted, &l)
}
