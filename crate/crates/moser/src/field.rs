use algebroid_core::calculus::combinations;
use algebroid_core::symexpr::Rational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::{MoserError, Real};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Default RK4 step `1/64`.
pub fn default_step() -> Rational {
    Rational::new(1.into(), 64.into())
}

/// Box domain, grid resolution, integrator step and residual gate.
///
/// The grid has `resolution` intervals (so `resolution + 1` nodes) per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericField {
    bounds: Vec<(Rational, Rational)>,
    resolution: usize,
    step: Rational,
    tolerance: f64,
}

impl NumericField {
    pub fn new(
        bounds: Vec<(Rational, Rational)>,
        resolution: usize,
        step: Rational,
        tolerance: f64,
    ) -> Result<Self, MoserError> {
        if bounds.is_empty() || bounds.len() > 3 {
            return Err(MoserError::InvalidField(format!(
                "dimension {} outside 1..=3",
                bounds.len()
            )));
        }
        if resolution < 8 {
            return Err(MoserError::InvalidField(format!(
                "resolution {} below 8",
                resolution
            )));
        }
        if let Some((lo, hi)) = bounds.iter().find(|(lo, hi)| lo >= hi) {
            return Err(MoserError::InvalidField(format!(
                "empty interval [{}, {}]",
                lo, hi
            )));
        }
        if !step.is_positive() || step > Rational::one() || !step.recip().is_integer() {
            return Err(MoserError::InvalidField(format!(
                "step {} is not 1/m for a positive integer m",
                step
            )));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(MoserError::InvalidField(format!("tolerance {}", tolerance)));
        }
        Ok(NumericField {
            bounds,
            resolution,
            step,
            tolerance,
        })
    }

    /// `[−w, w]^dim` with the default step and tolerance.
    pub fn cube(dim: usize, half_width: Rational, resolution: usize) -> Result<Self, MoserError> {
        let b = (-half_width.clone(), half_width);
        Self::new(vec![b; dim], resolution, default_step(), DEFAULT_TOLERANCE)
    }

    pub fn with_step(self, step: Rational) -> Result<Self, MoserError> {
        Self::new(self.bounds, self.resolution, step, self.tolerance)
    }

    pub fn with_tolerance(self, tolerance: f64) -> Result<Self, MoserError> {
        Self::new(self.bounds, self.resolution, self.step, tolerance)
    }

    pub fn with_resolution(self, resolution: usize) -> Result<Self, MoserError> {
        Self::new(self.bounds, resolution, self.step, self.tolerance)
    }

    /// Twice the resolution and half the step.
    pub fn refined(&self) -> Self {
        NumericField {
            bounds: self.bounds.clone(),
            resolution: 2 * self.resolution,
            step: &self.step / Rational::from_integer(2.into()),
            tolerance: self.tolerance,
        }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(Rational, Rational)] {
        &self.bounds
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn step(&self) -> &Rational {
        &self.step
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Number of integrator steps over `t ∈ [0, 1]`.
    pub fn steps(&self) -> usize {
        self.step
            .recip()
            .to_integer()
            .to_usize()
            .expect("step count fits")
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.resolution + 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes_per_axis().pow(self.dim() as u32)
    }

    /// Exact coordinates of the node with the given multi-index.
    pub fn node(&self, idx: &[usize]) -> Vec<Rational> {
        let n = Rational::from_integer(self.resolution.into());
        self.bounds
            .iter()
            .zip(idx)
            .map(|((lo, hi), &i)| lo + (hi - lo) * Rational::from_integer(i.into()) / &n)
            .collect()
    }

    /// Index of the node at coordinate zero on each axis, when there is one.
    pub fn zero_index(&self, axis: usize) -> Option<usize> {
        let (lo, hi) = &self.bounds[axis];
        if lo.is_positive() || hi.is_negative() {
            return None;
        }
        let s = -lo * Rational::from_integer(self.resolution.into()) / (hi - lo);
        if s.is_integer() {
            s.to_integer().to_usize()
        } else {
            None
        }
    }

    pub fn grid<T: Real>(&self) -> Grid<T> {
        let d = self.dim();
        let mut lo = [T::zero(); 3];
        let mut hi = [T::zero(); 3];
        let mut zero = [None; 3];
        for a in 0..d {
            lo[a] = T::of(self.bounds[a].0.to_f64().unwrap_or(f64::NAN));
            hi[a] = T::of(self.bounds[a].1.to_f64().unwrap_or(f64::NAN));
            zero[a] = self.zero_index(a);
        }
        Grid {
            dim: d,
            m: self.nodes_per_axis(),
            lo,
            hi,
            zero,
        }
    }
}

/// Node set of a [`NumericField`], first axis slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    dim: usize,
    m: usize,
    lo: [T; 3],
    hi: [T; 3],
    zero: [Option<usize>; 3],
}

/// Node subsets used for residual norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    All,
    /// Nodes at least this many nodes away from the boundary on every axis.
    Interior(usize),
    /// The box scaled by one half about its centre.
    InnerHalf,
}

impl<T: Real> Grid<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> T {
        (self.hi[axis] - self.lo[axis]) / T::of_usize(self.m - 1)
    }

    pub fn bounds(&self, axis: usize) -> (T, T) {
        (self.lo[axis], self.hi[axis])
    }

    pub fn zero_index(&self, axis: usize) -> Option<usize> {
        self.zero[axis]
    }

    pub fn index(&self, flat: usize) -> [usize; 3] {
        let mut idx = [0; 3];
        let mut f = flat;
        for a in (0..self.dim).rev() {
            idx[a] = f % self.m;
            f /= self.m;
        }
        idx
    }

    pub fn flat(&self, idx: &[usize]) -> usize {
        idx[..self.dim].iter().fold(0, |acc, &i| acc * self.m + i)
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> T {
        let n = T::of_usize(self.m - 1);
        self.lo[axis] + (self.hi[axis] - self.lo[axis]) * T::of_usize(i) / n
    }

    pub fn point(&self, flat: usize) -> Vec<T> {
        let idx = self.index(flat);
        (0..self.dim).map(|a| self.coordinate(a, idx[a])).collect()
    }

    pub fn in_region(&self, flat: usize, region: Region) -> bool {
        let idx = self.index(flat);
        let n = self.m - 1;
        (0..self.dim).all(|a| {
            let i = idx[a];
            match region {
                Region::All => true,
                Region::Interior(k) => i >= k && i + k <= n,
                Region::InnerHalf => 4 * i >= n && 4 * i <= 3 * n,
            }
        })
    }

    /// Node lies on the coordinate subspace where the given axes vanish.
    pub fn on_subspace(&self, flat: usize, normal: &[usize]) -> bool {
        let idx = self.index(flat);
        normal.iter().all(|&a| self.zero[a] == Some(idx[a]))
    }

    pub fn contains(&self, p: &[T]) -> bool {
        (0..self.dim).all(|a| {
            let slack = self.spacing(a) * T::of(1e-9);
            p[a] >= self.lo[a] - slack && p[a] <= self.hi[a] + slack
        })
    }

    /// Cubic Lagrange stencil start and weights on every axis; `None`
    /// outside the box.
    fn stencil(&self, p: &[T]) -> Option<([usize; 3], [[T; 4]; 3])> {
        let mut start = [0usize; 3];
        let mut w = [[T::zero(); 4]; 3];
        let n = T::of_usize(self.m - 1);
        let eps = T::of(1e-9);
        for a in 0..self.dim {
            let s = (p[a] - self.lo[a]) / self.spacing(a);
            if !(s >= -eps && s <= n + eps) {
                return None;
            }
            let i = s.floor().max(T::zero()).to_usize().unwrap_or(0);
            let st = i.saturating_sub(1).min(self.m - 4);
            let xi = s - T::of_usize(st);
            w[a] = lagrange4(xi);
            start[a] = st;
        }
        Some((start, w))
    }
}

fn lagrange4<T: Real>(x: T) -> [T; 4] {
    let one = T::one();
    let two = T::of(2.0);
    let three = T::of(3.0);
    let six = T::of(6.0);
    [
        -(x - one) * (x - two) * (x - three) / six,
        x * (x - two) * (x - three) / two,
        -x * (x - one) * (x - three) / two,
        x * (x - one) * (x - two) / six,
    ]
}

/// Vector-valued samples on a grid, node-major with components innermost.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction<T> {
    grid: Grid<T>,
    ncomp: usize,
    data: Vec<T>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(grid: Grid<T>, ncomp: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), grid.len() * ncomp, "sample count mismatch");
        GridFunction { grid, ncomp, data }
    }

    /// Parallel evaluation of `f(node, out)` at every node.
    pub fn from_fn<F>(grid: Grid<T>, ncomp: usize, f: F) -> Self
    where
        F: Fn(usize, &mut [T]) + Sync,
    {
        let mut data = vec![T::zero(); grid.len() * ncomp];
        if ncomp > 0 {
            data.par_chunks_mut(ncomp)
                .enumerate()
                .for_each(|(node, out)| f(node, out));
        }
        GridFunction { grid, ncomp, data }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn at(&self, node: usize) -> &[T] {
        &self.data[node * self.ncomp..(node + 1) * self.ncomp]
    }

    /// Cubic interpolation into `out`; `false` outside the box.
    pub fn interpolate(&self, p: &[T], out: &mut [T]) -> bool {
        let Some((start, w)) = self.grid.stencil(p) else {
            return false;
        };
        out.iter_mut().for_each(|v| *v = T::zero());
        let d = self.grid.dim;
        let m = self.grid.m;
        for c in 0..4usize.pow(d as u32) {
            let mut flat = 0;
            let mut wt = T::one();
            let mut rest = c;
            for a in 0..d {
                let o = rest % 4;
                rest /= 4;
                flat = flat * m + start[a] + o;
                wt = wt * w[a][o];
            }
            for (k, v) in out.iter_mut().enumerate() {
                *v = *v + wt * self.data[flat * self.ncomp + k];
            }
        }
        out.iter().all(|v| v.is_finite())
    }

    /// Largest absolute component over the nodes of a region.
    pub fn max_abs(&self, region: Region) -> T {
        (0..self.grid.len())
            .filter(|&n| self.grid.in_region(n, region))
            .flat_map(|n| self.at(n).iter().map(|v| v.abs()))
            .fold(T::zero(), nan_max)
    }
}

/// Maximum that propagates NaN.
pub(crate) fn nan_max<T: Real>(a: T, b: T) -> T {
    if a.is_nan() || b.is_nan() {
        T::nan()
    } else {
        a.max(b)
    }
}

/// Differential form sampled on a grid, one component per strictly
/// increasing index list.
#[derive(Clone, Debug, PartialEq)]
pub struct GridForm<T> {
    degree: usize,
    combos: Vec<Vec<usize>>,
    values: GridFunction<T>,
}

impl<T: Real> GridForm<T> {
    pub fn new(degree: usize, values: GridFunction<T>) -> Self {
        let combos = combinations(values.grid().dim(), degree);
        assert_eq!(combos.len(), values.ncomp(), "component count mismatch");
        GridForm {
            degree,
            combos,
            values,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn combos(&self) -> &[Vec<usize>] {
        &self.combos
    }

    pub fn values(&self) -> &GridFunction<T> {
        &self.values
    }

    pub fn grid(&self) -> &Grid<T> {
        self.values.grid()
    }

    /// Position of a strictly increasing index list among the components.
    pub fn slot(&self, idx: &[usize]) -> Option<usize> {
        self.combos.iter().position(|c| c == idx)
    }

    /// Component on a strictly increasing index list at a node.
    pub fn component(&self, node: usize, idx: &[usize]) -> T {
        self.slot(idx)
            .map_or(T::zero(), |s| self.values.at(node)[s])
    }

    /// Largest componentwise difference over a region.
    pub fn max_difference(&self, other: &GridForm<T>, region: Region) -> T {
        assert_eq!(self.combos, other.combos, "form shapes differ");
        let g = self.grid();
        (0..g.len())
            .filter(|&n| g.in_region(n, region))
            .flat_map(|n| {
                self.values
                    .at(n)
                    .iter()
                    .zip(other.values.at(n))
                    .map(|(a, b)| (*a - *b).abs())
                    .collect::<Vec<_>>()
            })
            .fold(T::zero(), nan_max)
    }

    pub fn max_abs(&self, region: Region) -> T {
        self.values.max_abs(region)
    }
}
