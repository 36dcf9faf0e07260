//! Standard algebroids used by tests, scenarios and examples.

use super::{AlgebroidData, AlgebroidError};
use crate::symexpr::{int, Chart, Expr};

fn unit(r: usize, k: usize, sign: i64) -> Vec<Expr> {
    (0..r)
        .map(|i| if i == k { int(sign) } else { Expr::zero() })
        .collect()
}

/// `so(3)` with `[e1,e2]=e3`, `[e2,e3]=e1`, `[e3,e1]=e2`, over a point.
pub fn so3() -> AlgebroidData {
    AlgebroidData::lie_algebra(
        &[
            ((0, 1), unit(3, 2, 1)),
            ((1, 2), unit(3, 0, 1)),
            ((0, 2), unit(3, 1, -1)),
        ],
        3,
    )
    .expect("so(3) table is antisymmetric")
    .verified()
    .expect("so(3) is a Lie algebra")
}

/// Tangent algebroid of `ℝ^n` with coordinates `x, y, z` (or `x1..xn` for
/// `n > 3`).
pub fn tangent_rn(n: usize) -> AlgebroidData {
    AlgebroidData::tangent(standard_chart(n))
}

/// Coordinates `x, y, z` for `n ≤ 3`, otherwise `x1, …, xn`.
pub fn standard_chart(n: usize) -> Chart {
    if n <= 3 {
        Chart::base(&["x", "y", "z"][..n])
    } else {
        let names: Vec<String> = (1..=n).map(|i| format!("x{}", i)).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        Chart::base(&refs)
    }
}

/// Log-tangent algebroid of the line `{y = 0}` in `ℝ²`: frame with
/// `ρ(e1) = ∂x`, `ρ(e2) = y∂y` and commuting frame sections.
pub fn log_tangent_r2() -> AlgebroidData {
    let chart = Chart::base(&["x", "y"]);
    let anchor = vec![vec![int(1), int(0)], vec![int(0), Expr::var(1)]];
    AlgebroidData::new(chart, anchor, &[])
        .expect("well formed")
        .verified()
        .expect("log-tangent algebroid satisfies the axioms")
}

/// Rank-3 bracket over a point whose Jacobiator on `(e1, e2, e3)` is `e1`:
/// `[e1,e2]=e3`, `[e1,e3]=e3`, `[e2,e3]=e1`.
pub fn broken_jacobi() -> Result<AlgebroidData, AlgebroidError> {
    AlgebroidData::lie_algebra(
        &[
            ((0, 1), unit(3, 2, 1)),
            ((0, 2), unit(3, 2, 1)),
            ((1, 2), unit(3, 0, 1)),
        ],
        3,
    )
}

/// Action algebroid of `so(3)` acting on `ℝ³` by infinitesimal rotations:
/// `ρ(e1) = z∂y − y∂z` and cyclic.
pub fn so3_action() -> AlgebroidData {
    let chart = standard_chart(3);
    let (x, y, z) = (Expr::var(0), Expr::var(1), Expr::var(2));
    let zero = Expr::zero;
    let anchor = vec![
        vec![zero(), z.clone(), -&y],
        vec![-&z, zero(), x.clone()],
        vec![y.clone(), -&x, zero()],
    ];
    AlgebroidData::new(
        chart,
        anchor,
        &[
            ((0, 1), unit(3, 2, 1)),
            ((1, 2), unit(3, 0, 1)),
            ((0, 2), unit(3, 1, -1)),
        ],
    )
    .expect("well formed")
    .verified()
    .expect("rotation action is an action algebroid")
}
