use super::{default_sample_values, GeometryError};
use crate::algebroid::AlgebroidData;
use crate::calculus::{sharp, Alternating, Multivector};
use crate::cosymplectic::lattice;
use crate::pullback::dual_linear_poisson;
use crate::symexpr::{linalg, rat, Chart, Coordinate, Expr, Rational};

/// Cotangent algebroid `(T*M)_π` in the coordinate coframe:
/// `ρ(dx^i) = π♯dx^i` and `[dx^i, dx^j]_π = dπ^{ij}`.
pub fn cotangent_algebroid(
    chart: &Chart,
    pi: &Multivector,
) -> Result<AlgebroidData, GeometryError> {
    let n = chart.len();
    if pi.rank() != n || pi.degree() != 2 {
        return Err(GeometryError::Shape(format!(
            "expected a bivector on {} coordinates",
            n
        )));
    }
    let anchor: Vec<Vec<Expr>> = (0..n)
        .map(|i| (0..n).map(|a| pi.component(&[i, a])).collect())
        .collect();
    let mut c = vec![vec![vec![Expr::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let pij = pi.component(&[i, j]);
            for (k, v) in c[i][j].iter_mut().enumerate() {
                *v = pij.differentiate(k);
            }
        }
    }
    AlgebroidData::from_full_table(chart.as_base(), anchor, c)?
        .verified()
        .map_err(|_| GeometryError::Failed("bivector is not Poisson".into()))
}

/// Linear Poisson structure on `TM` dual to the cotangent algebroid, on the
/// chart `(x, dx)` with fibre coordinates named `fibre_names` (default
/// `d<name>`).
pub fn linear_poisson_of(
    chart: &Chart,
    pi: &Multivector,
    fibre_names: Option<&[String]>,
) -> Result<(Chart, Multivector), GeometryError> {
    let a = cotangent_algebroid(chart, pi)?;
    let (_, lin) = dual_linear_poisson(&a);
    let names: Vec<String> = match fibre_names {
        Some(f) => f.to_vec(),
        None => chart.names().iter().map(|n| format!("d{}", n)).collect(),
    };
    let tm = chart
        .as_base()
        .extended(names.into_iter().map(Coordinate::fibre).collect());
    Ok((tm, lin))
}

/// `Π = π × (−π)` on `M × M`, with the second factor's coordinates primed.
pub fn pair_bivector(chart: &Chart, pi: &Multivector) -> (Chart, Multivector) {
    let n = chart.len();
    let shift: Vec<usize> = (0..n).map(|i| n + i).collect();
    let mut out = Alternating::zero(2 * n, 2);
    for (idx, v) in pi.components() {
        out.add_to(idx.clone(), v);
        out.add_to(vec![n + idx[0], n + idx[1]], &-&v.remap(&shift));
    }
    let pm = chart.as_base().extended(
        chart
            .names()
            .iter()
            .map(|s| Coordinate::base(format!("{}'", s)))
            .collect(),
    );
    (pm, Multivector(out))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankSample {
    pub point: Vec<Rational>,
    pub rank: usize,
    /// Rank below the generic rank.
    pub singular: bool,
}

/// Comparison of a sampled singular set with the one predicted from the
/// singular samples of `π`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductCheck {
    pub generic_rank: usize,
    pub checked: usize,
    pub singular: usize,
    /// Samples where the observed and predicted singularity disagree.
    pub mismatches: Vec<Vec<Rational>>,
    /// Dimension of the smallest coordinate subspace containing the
    /// singular samples.
    pub hull_dim: usize,
}

impl ProductCheck {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    NoObstruction,
    Obstruction,
}

impl Verdict {
    pub fn describe(&self) -> &'static str {
        match self {
            Verdict::NoObstruction => "regular on sampled region; no obstruction detected",
            Verdict::Obstruction => {
                "singular sample found; the pair groupoid is not linearizable around the diagonal"
            }
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            Verdict::NoObstruction => "no-obstruction",
            Verdict::Obstruction => "obstruction",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub chart: Chart,
    pub generic_rank: usize,
    pub samples: Vec<RankSample>,
    /// `Sing_Π(M×M) = Sing_π × M ∪ M × Sing_π` on pairs of samples.
    pub pair: ProductCheck,
    /// `Sing_{π_lin}(TM) = TM|_{Sing_π}` on samples of `TM`.
    pub linear: ProductCheck,
    /// Coordinate-hull dimension of the singular samples of `π`.
    pub singular_hull_dim: usize,
    pub verdict: Verdict,
}

impl RankReport {
    pub fn singular_points(&self) -> Vec<&[Rational]> {
        self.samples
            .iter()
            .filter(|s| s.singular)
            .map(|s| s.point.as_slice())
            .collect()
    }

    /// Ranks of skew matrices are even.
    pub fn ranks_even(&self) -> bool {
        self.samples.iter().all(|s| s.rank % 2 == 0) && self.generic_rank % 2 == 0
    }

    /// Formal tangent spaces at the diagonal compared through coordinate
    /// hulls: `dim M×M` for `Sing_Π` against `hull(Sing_π) + dim M` for
    /// `Sing_{π_lin}`. Only meaningful at sample resolution.
    pub fn tangent_mismatch(&self) -> bool {
        self.verdict == Verdict::Obstruction && self.pair.hull_dim != self.linear.hull_dim
    }

    pub fn summary(&self) -> String {
        let n = self.chart.len();
        let mut s = format!(
            "{} ({} of {} samples singular, generic rank {})",
            self.verdict.describe(),
            self.samples.iter().filter(|s| s.singular).count(),
            self.samples.len(),
            self.generic_rank
        );
        if self.verdict == Verdict::Obstruction {
            s.push_str(&format!(
                "; at sample resolution the singular set of π × (−π) spans {} of {} directions at the diagonal, that of π_lin spans {} = {} + {}",
                self.pair.hull_dim,
                2 * n,
                self.linear.hull_dim,
                self.singular_hull_dim,
                n
            ));
        }
        s
    }
}

/// Sampling controls for [`nonlinearizability_scan`].
#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub values: Vec<Rational>,
    /// Largest number of `M × M` samples; beyond it the second factor runs
    /// over a few representative samples only.
    pub pair_budget: usize,
    /// Largest number of `TM` samples; beyond it the fibre runs over a few
    /// fixed vectors only.
    pub linear_budget: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            values: default_sample_values(),
            pair_budget: 1000,
            linear_budget: 5000,
        }
    }
}

/// Smallest number of coordinates along which the points vary.
pub fn coordinate_hull_dim(points: &[&[Rational]]) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    (0..first.len())
        .filter(|&i| points.iter().any(|p| p[i] != first[i]))
        .count()
}

/// Cartesian product of per-coordinate value lists.
pub fn product_grid(axes: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    out
}

fn check_polynomial(chart: &Chart, pi: &Multivector) -> Result<(), GeometryError> {
    for (idx, v) in pi.components() {
        if !v.is_polynomial() {
            return Err(GeometryError::NonPolynomial(format!(
                "π^{{{},{}}} = {}",
                chart.name(idx[0]),
                chart.name(idx[1]),
                chart.render(v)
            )));
        }
    }
    Ok(())
}

fn rank_sampler(pi: &Multivector) -> Result<(Vec<Vec<Expr>>, usize), GeometryError> {
    let s = sharp(pi).map_err(|e| GeometryError::Shape(e.to_string()))?;
    let generic = linalg::rank(&s).0;
    Ok((s, generic))
}

fn rank_at(m: &[Vec<Expr>], p: &[Rational]) -> usize {
    linalg::rank_at(m, p).expect("polynomial entries are defined everywhere")
}

/// Rank stratification of a polynomial Poisson bivector on a sample grid,
/// with the singular-set descriptions on `M × M` and `TM` checked on
/// samples of those spaces.
pub fn nonlinearizability_scan(
    chart: &Chart,
    pi: &Multivector,
    opts: &ScanOptions,
) -> Result<RankReport, GeometryError> {
    check_polynomial(chart, pi)?;
    let n = chart.len();
    let (s, generic) = rank_sampler(pi)?;
    let samples: Vec<RankSample> = lattice(n, &opts.values)
        .into_iter()
        .map(|p| {
            let r = rank_at(&s, &p);
            RankSample {
                point: p,
                rank: r,
                singular: r < generic,
            }
        })
        .collect();
    let sing: Vec<&[Rational]> = samples
        .iter()
        .filter(|x| x.singular)
        .map(|x| x.point.as_slice())
        .collect();
    let singular_hull_dim = coordinate_hull_dim(&sing);

    // M × M
    let (_, big) = pair_bivector(chart, pi);
    let (bs, bgeneric) = rank_sampler(&big)?;
    let second: Vec<&RankSample> = if samples.len() * samples.len() <= opts.pair_budget {
        samples.iter().collect()
    } else {
        let mut pick: Vec<&RankSample> = samples.iter().filter(|x| x.singular).take(2).collect();
        pick.extend(samples.iter().filter(|x| !x.singular).take(3));
        pick
    };
    let mut pair = ProductCheck {
        generic_rank: bgeneric,
        checked: 0,
        singular: 0,
        mismatches: Vec::new(),
        hull_dim: 0,
    };
    let mut pair_sing: Vec<Vec<Rational>> = Vec::new();
    for x in &samples {
        for y in &second {
            for (a, b) in [(x, *y), (*y, x)] {
                let p: Vec<Rational> = a.point.iter().chain(&b.point).cloned().collect();
                let observed = rank_at(&bs, &p) < bgeneric;
                let predicted = a.singular || b.singular;
                pair.checked += 1;
                if observed != predicted {
                    pair.mismatches.push(p.clone());
                }
                if observed {
                    pair.singular += 1;
                    pair_sing.push(p);
                }
            }
        }
    }
    pair.hull_dim =
        coordinate_hull_dim(&pair_sing.iter().map(|p| p.as_slice()).collect::<Vec<_>>());

    // TM
    let (_, lin) = linear_poisson_of(chart, pi, None)?;
    let (ls, lgeneric) = rank_sampler(&lin)?;
    let fibres: Vec<Vec<Rational>> =
        if samples.len() * opts.values.len().pow(n as u32) <= opts.linear_budget {
            lattice(n, &opts.values)
        } else {
            let one = rat(1, 1);
            let half = rat(1, 2);
            vec![
                vec![one.clone(); n],
                (0..n)
                    .map(|i| {
                        if i % 2 == 0 {
                            one.clone()
                        } else {
                            half.clone()
                        }
                    })
                    .collect(),
                (0..n)
                    .map(|i| if i == 0 { one.clone() } else { rat(0, 1) })
                    .collect(),
            ]
        };
    let mut linear = ProductCheck {
        generic_rank: lgeneric,
        checked: 0,
        singular: 0,
        mismatches: Vec::new(),
        hull_dim: 0,
    };
    let mut lin_sing: Vec<Vec<Rational>> = Vec::new();
    for x in &samples {
        for w in &fibres {
            let p: Vec<Rational> = x.point.iter().chain(w).cloned().collect();
            let observed = rank_at(&ls, &p) < lgeneric;
            linear.checked += 1;
            if observed != x.singular {
                linear.mismatches.push(p.clone());
            }
            if observed {
                linear.singular += 1;
                lin_sing.push(p);
            }
        }
    }
    linear.hull_dim =
        coordinate_hull_dim(&lin_sing.iter().map(|p| p.as_slice()).collect::<Vec<_>>());

    let verdict = if sing.is_empty() {
        Verdict::NoObstruction
    } else {
        Verdict::Obstruction
    };
    Ok(RankReport {
        chart: chart.clone(),
        generic_rank: generic,
        samples,
        pair,
        linear,
        singular_hull_dim,
        verdict,
    })
}

/// Split form `π = Σ ∂q_i ∧ ∂p_i + θ^{ij}(y) ∂y_i ∧ ∂y_j` with `θ(0) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeinsteinSplit {
    pairs: usize,
    y_names: Vec<String>,
    /// `θ` on the `y` coordinates (variables `0..s`).
    theta: Multivector,
}

impl WeinsteinSplit {
    pub fn new(pairs: usize, y_names: &[&str], theta: Multivector) -> Result<Self, GeometryError> {
        let s = y_names.len();
        if theta.rank() != s || theta.degree() != 2 {
            return Err(GeometryError::Shape(format!(
                "θ must be a bivector on {} coordinates",
                s
            )));
        }
        let y_chart = Chart::base(y_names);
        check_polynomial(&y_chart, &theta)?;
        let origin = vec![rat(0, 1); s];
        for (idx, v) in theta.components() {
            if v.evaluate(&origin).map_or(true, |x| x != rat(0, 1)) {
                return Err(GeometryError::Failed(format!(
                    "θ^{{{},{}}} does not vanish at y = 0",
                    y_names[idx[0]], y_names[idx[1]]
                )));
            }
        }
        Ok(WeinsteinSplit {
            pairs,
            y_names: y_names.iter().map(|s| s.to_string()).collect(),
            theta,
        })
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    pub fn transverse_dim(&self) -> usize {
        self.y_names.len()
    }

    pub fn theta(&self) -> &Multivector {
        &self.theta
    }

    /// Chart `(q, p, y)`.
    pub fn chart(&self) -> Chart {
        let m = self.pairs;
        let mut names: Vec<String> = (1..=m).map(|i| format!("q{}", i)).collect();
        names.extend((1..=m).map(|i| format!("p{}", i)));
        names.extend(self.y_names.iter().cloned());
        Chart::new(names.into_iter().map(Coordinate::base).collect())
    }

    /// Chart `(q, p, y, u, v, w)` of `TM`.
    pub fn tangent_chart(&self) -> Chart {
        self.chart().extended(
            self.fibre_names()
                .into_iter()
                .map(Coordinate::fibre)
                .collect(),
        )
    }

    fn fibre_names(&self) -> Vec<String> {
        let m = self.pairs;
        let mut names: Vec<String> = (1..=m).map(|i| format!("u{}", i)).collect();
        names.extend((1..=m).map(|i| format!("v{}", i)));
        names.extend((1..=self.transverse_dim()).map(|i| format!("w{}", i)));
        names
    }

    pub fn bivector(&self) -> Multivector {
        let m = self.pairs;
        let s = self.transverse_dim();
        let n = 2 * m + s;
        let shift: Vec<usize> = (0..s).map(|i| 2 * m + i).collect();
        let mut out = Alternating::zero(n, 2);
        for i in 0..m {
            out.add_to(vec![i, m + i], &Expr::one());
        }
        for (idx, v) in self.theta.components() {
            out.add_to(vec![2 * m + idx[0], 2 * m + idx[1]], &v.remap(&shift));
        }
        Multivector(out)
    }

    /// `π_lin` on the chart `(q, p, y, u, v, w)`.
    pub fn linearized(&self) -> Result<(Chart, Multivector), GeometryError> {
        linear_poisson_of(&self.chart(), &self.bivector(), Some(&self.fibre_names()))
    }

    /// `[[0, θ(y)], [θᵀ(y), ∂_kθ(y) w^k]]` with variables `(y, w)`.
    pub fn block_matrix(&self) -> Vec<Vec<Expr>> {
        let s = self.transverse_dim();
        let th = |i: usize, j: usize| self.theta.component(&[i, j]);
        let mut m = vec![vec![Expr::zero(); 2 * s]; 2 * s];
        for i in 0..s {
            for j in 0..s {
                m[i][s + j] = th(i, j);
                m[s + i][j] = th(j, i);
                let mut d = Expr::zero();
                for k in 0..s {
                    d += &(&th(i, j).differentiate(k) * &Expr::var(s + k));
                }
                m[s + i][s + j] = d;
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeinsteinSample {
    pub y: Vec<Rational>,
    pub w: Vec<Rational>,
    /// Rank of the `(y, w)` block matrix.
    pub block_rank: usize,
    /// `2 rk π|_{y=0} + block_rank`.
    pub formula_rank: usize,
    /// Rank of the assembled `π_lin` at `(0, 0, y, 0, 0, w)`.
    pub direct_rank: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeinsteinReport {
    /// `rk π` at `(q, p, y) = 0`.
    pub rank_at_origin: usize,
    pub samples: Vec<WeinsteinSample>,
}

impl WeinsteinReport {
    pub fn agrees(&self) -> bool {
        self.samples.iter().all(|s| s.formula_rank == s.direct_rank)
    }

    pub fn disagreements(&self) -> Vec<&WeinsteinSample> {
        self.samples
            .iter()
            .filter(|s| s.formula_rank != s.direct_rank)
            .collect()
    }
}

/// Evaluate the split rank formula for `π_lin` at `(y, w)` samples and
/// compare with the rank of the assembled matrix.
pub fn weinstein_rank_scan(
    split: &WeinsteinSplit,
    points: &[(Vec<Rational>, Vec<Rational>)],
) -> Result<WeinsteinReport, GeometryError> {
    let m = split.pairs();
    let s = split.transverse_dim();
    let n = 2 * m + s;
    let (ps, _) = rank_sampler(&split.bivector())?;
    let rank_at_origin = rank_at(&ps, &vec![rat(0, 1); n]);
    let (_, lin) = split.linearized()?;
    let (ls, _) = rank_sampler(&lin)?;
    let block = split.block_matrix();
    let zero = rat(0, 1);
    let mut samples = Vec::with_capacity(points.len());
    for (y, w) in points {
        if y.len() != s || w.len() != s {
            return Err(GeometryError::Shape(format!(
                "samples need {} y and {} w values",
                s, s
            )));
        }
        let yw: Vec<Rational> = y.iter().chain(w).cloned().collect();
        let block_rank = rank_at(&block, &yw);
        let mut p = vec![zero.clone(); 2 * m];
        p.extend(y.iter().cloned());
        p.extend(std::iter::repeat(zero.clone()).take(2 * m));
        p.extend(w.iter().cloned());
        samples.push(WeinsteinSample {
            y: y.clone(),
            w: w.clone(),
            block_rank,
            formula_rank: 2 * rank_at_origin + block_rank,
            direct_rank: rank_at(&ls, &p),
        });
    }
    Ok(WeinsteinReport {
        rank_at_origin,
        samples,
    })
}
