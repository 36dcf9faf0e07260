use std::sync::OnceLock;

use algebroid_core::calculus::combinations;

use crate::field::nan_max;
use crate::{GridForm, GridFunction, Real};

/// Finite-difference weights for the `order`-th derivative at `z` on the
/// stencil `xs`.
pub fn fd_weights(z: f64, xs: &[f64], order: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|row| row[order]).collect()
}

/// Five-point first-derivative weights at each stencil position.
fn five_point() -> &'static [[f64; 5]; 5] {
    static W: OnceLock<[[f64; 5]; 5]> = OnceLock::new();
    W.get_or_init(|| {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let mut w = [[0.0; 5]; 5];
        for (z, row) in w.iter_mut().enumerate() {
            row.copy_from_slice(&fd_weights(z as f64, &xs, 1));
        }
        w
    })
}

/// Fourth-order first derivative of one component along an axis at a node,
/// centred where possible and one-sided near the boundary.
pub fn partial_derivative<T: Real>(
    f: &GridFunction<T>,
    comp: usize,
    axis: usize,
    node: usize,
) -> T {
    let g = f.grid();
    let m = g.nodes_per_axis();
    let mut idx = g.index(node);
    let i = idx[axis];
    let start = i.saturating_sub(2).min(m - 5);
    let w = &five_point()[i - start];
    let mut acc = T::zero();
    for (o, &wo) in w.iter().enumerate() {
        idx[axis] = start + o;
        acc = acc + T::of(wo) * f.at(g.flat(&idx))[comp];
    }
    acc / g.spacing(axis)
}

/// Finite-difference exterior derivative of a grid form.
pub fn exterior_derivative<T: Real>(phi: &GridForm<T>) -> GridForm<T> {
    let g = phi.grid().clone();
    let n = g.dim();
    let q = phi.degree();
    let out = combinations(n, q + 1);
    let terms: Vec<Vec<(usize, usize, T)>> = out
        .iter()
        .map(|c| {
            (0..c.len())
                .map(|j| {
                    let mut rest = c.clone();
                    let axis = rest.remove(j);
                    let slot = phi.slot(&rest).expect("sub-list of an increasing list");
                    let sign = if j % 2 == 0 { T::one() } else { -T::one() };
                    (axis, slot, sign)
                })
                .collect()
        })
        .collect();
    let values = GridFunction::from_fn(g, out.len(), |node, o| {
        for (v, ts) in o.iter_mut().zip(&terms) {
            *v = ts.iter().fold(T::zero(), |acc, &(axis, slot, sign)| {
                acc + sign * partial_derivative(phi.values(), slot, axis, node)
            });
        }
    });
    GridForm::new(q + 1, values)
}

/// Largest first derivative of any component over the nodes where the
/// given axes vanish.
pub fn first_derivatives_on<T: Real>(f: &GridFunction<T>, normal: &[usize]) -> T {
    let g = f.grid();
    (0..g.len())
        .filter(|&n| g.on_subspace(n, normal))
        .flat_map(|n| {
            (0..f.ncomp())
                .flat_map(move |c| (0..g.dim()).map(move |a| partial_derivative(f, c, a, n).abs()))
        })
        .fold(T::zero(), nan_max)
}

/// Jacobian `∂_a f^c` of a map sampled on the grid.
pub(crate) fn jacobian<T: Real>(f: &GridFunction<T>, node: usize) -> [[T; 3]; 3] {
    let mut j = [[T::zero(); 3]; 3];
    let n = f.grid().dim();
    for (c, row) in j.iter_mut().enumerate().take(f.ncomp().min(3)) {
        for (a, v) in row.iter_mut().enumerate().take(n) {
            *v = partial_derivative(f, c, a, node);
        }
    }
    j
}
