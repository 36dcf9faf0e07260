use algebroid_core::algebroid::AlgebroidData;
use algebroid_core::calculus::{d, AForm};
use algebroid_core::cosymplectic::CosymplecticData;
use algebroid_core::geometry::SubmanifoldSpec;
use algebroid_core::symexpr::{parse, Chart, Expr, Rational};
use algebroid_moser::*;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn e(chart: &Chart, s: &str) -> Expr {
    parse(s, chart).unwrap()
}

fn two_form(chart: &Chart, entries: &[(usize, usize, &str)]) -> AForm {
    let v: Vec<(usize, usize, Expr)> = entries
        .iter()
        .map(|(i, j, s)| (*i, *j, e(chart, s)))
        .collect();
    AForm::two_form(chart.len(), &v)
}

fn one_form(chart: &Chart, comps: &[&str]) -> AForm {
    AForm::one_form(comps.iter().map(|s| e(chart, s)).collect())
}

fn structure(chart: &Chart, alphas: Vec<AForm>, omega: AForm) -> CosymplecticData {
    CosymplecticData::new(AlgebroidData::tangent(chart.clone()), alphas, omega).unwrap()
}

fn plane() -> Chart {
    Chart::base(&["x", "y"])
}

fn space() -> Chart {
    Chart::base(&["x", "y", "z"])
}

#[test]
fn gauss_legendre_is_exact_to_degree_2n_minus_1() {
    for n in [1, 2, 5, 12, 20, 32] {
        let (t, w) = gauss_legendre::<f64>(n);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(t.iter().all(|&x| x > 0.0 && x < 1.0));
        for k in 0..(2 * n) {
            let q: f64 = t.iter().zip(&w).map(|(x, wi)| wi * x.powi(k as i32)).sum();
            assert!(
                (q - 1.0 / (k as f64 + 1.0)).abs() < 1e-13,
                "n={} k={}",
                n,
                k
            );
        }
    }
}

#[test]
fn finite_difference_weights() {
    let w = fd_weights(2.0, &[0.0, 1.0, 2.0, 3.0, 4.0], 1);
    let expect = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
    for (a, b) in w.iter().zip(expect) {
        assert!((a - b).abs() < 1e-14);
    }
    let w0 = fd_weights(0.0, &[0.0, 1.0, 2.0, 3.0, 4.0], 1);
    let expect0 = [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -1.0 / 4.0];
    for (a, b) in w0.iter().zip(expect0) {
        assert!((a - b).abs() < 1e-13);
    }
}

#[test]
fn interpolation_reproduces_cubics() {
    let field = NumericField::cube(2, r(1, 1), 8).unwrap();
    let g = field.grid::<f64>();
    let f = |p: &[f64]| {
        1.0 - 2.0 * p[0] + p[0] * p[0] * p[1] - 0.5 * p[1].powi(3) + p[0].powi(3) * p[1].powi(3)
    };
    let gi = g.clone();
    let gf = GridFunction::from_fn(g, 1, |n, o| o[0] = f(&gi.point(n)));
    let mut out = [0.0];
    for p in [
        [0.13, -0.71],
        [-0.999, 0.999],
        [0.5, 0.25],
        [1.0, -1.0],
        [0.0, 0.0],
    ] {
        assert!(gf.interpolate(&p, &mut out));
        assert!((out[0] - f(&p)).abs() < 1e-13, "{:?}", p);
    }
    assert!(!gf.interpolate(&[1.1, 0.0], &mut out));
}

#[test]
fn field_validation() {
    assert!(NumericField::cube(2, r(1, 1), 7).is_err());
    assert!(NumericField::cube(4, r(1, 1), 8).is_err());
    let f = NumericField::cube(2, r(1, 1), 8).unwrap();
    assert!(f.clone().with_step(r(2, 3)).is_err());
    assert!(f.clone().with_tolerance(0.0).is_err());
    assert_eq!(f.steps(), 64);
    assert_eq!(f.zero_index(0), Some(4));
    assert_eq!(f.refined().resolution(), 16);
    assert_eq!(f.refined().steps(), 128);
    let shifted = NumericField::new(vec![(r(1, 3), r(1, 1)); 2], 8, r(1, 64), 1e-6).unwrap();
    assert_eq!(shifted.zero_index(0), None);
}

#[test]
fn primitive_of_area_form_is_closed_form() {
    let c = plane();
    let l = SubmanifoldSpec::new(&c, vec![0, 1]).unwrap();
    let field = NumericField::cube(2, r(1, 1), 16).unwrap();
    let omega = two_form(&c, &[(0, 1, "1")]);
    let phi = poincare_primitive::<f64>(&omega, &l, &field).unwrap();
    let g = phi.grid().clone();
    for node in 0..g.len() {
        let p = g.point(node);
        assert!((phi.component(node, &[0]) + p[1] / 2.0).abs() < 1e-14);
        assert!((phi.component(node, &[1]) - p[0] / 2.0).abs() < 1e-14);
    }
    let dphi = exterior_derivative(&phi);
    let exact = sample_form::<f64>(&omega, &field);
    assert!(dphi.max_difference(&exact, Region::All) < 1e-8);
}

#[test]
fn primitive_of_zero_is_zero() {
    let c = plane();
    let l = SubmanifoldSpec::new(&c, vec![0, 1]).unwrap();
    let field = NumericField::cube(2, r(1, 1), 8).unwrap();
    let phi = poincare_primitive::<f64>(&AForm::zero(2, 2), &l, &field).unwrap();
    assert_eq!(phi.max_abs(Region::All), 0.0);
}

#[test]
fn primitive_with_vanishing_form_has_flat_first_derivatives() {
    let c = plane();
    let field = NumericField::cube(2, r(1, 1), 16).unwrap();
    // 2x dx∧dy = d(x² dy) vanishes at the origin
    let point = SubmanifoldSpec::new(&c, vec![0, 1]).unwrap();
    let omega = two_form(&c, &[(0, 1, "2*x")]);
    let phi = poincare_primitive::<f64>(&omega, &point, &field).unwrap();
    let res = exterior_derivative(&phi).max_difference(&sample_form(&omega, &field), Region::All);
    assert!(res < 1e-8, "{}", res);
    assert!(first_derivatives_on(phi.values(), &[0, 1]) < 1e-8);
    assert!(phi.values().max_abs(Region::All) > 0.1);
    // 2y dx∧dy vanishes along the x-axis
    let axis = SubmanifoldSpec::from_names(&c, &["y"]).unwrap();
    let omega = two_form(&c, &[(0, 1, "2*y")]);
    let phi = poincare_primitive::<f64>(&omega, &axis, &field).unwrap();
    let res = exterior_derivative(&phi).max_difference(&sample_form(&omega, &field), Region::All);
    assert!(res < 1e-8, "{}", res);
    assert!(first_derivatives_on(phi.values(), &[1]) < 1e-8);
}

#[test]
fn primitive_of_random_exact_forms() {
    // closed forms dβ for polynomial β of degree ≤ 3 on ℝ³ around a line
    // and a point, with a seeded coefficient stream
    let c = space();
    let a = AlgebroidData::tangent(c.clone());
    let field = NumericField::cube(3, r(1, 2), 12).unwrap();
    let monos = [
        "1", "x", "y", "z", "x*y", "y*z", "x*z", "x^2", "z^2", "x*y*z", "y^3", "x^2*z",
    ];
    let mut state: u64 = 0x2545F4914F6CDD1D;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % 7) as i64 - 3
    };
    for case in 0..8 {
        let comps: Vec<String> = (0..3)
            .map(|_| {
                let terms: Vec<String> = monos
                    .iter()
                    .filter_map(|m| {
                        let k = next();
                        (k != 0 && next() > 0).then(|| format!("({})*{}", k, m))
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join("+")
                }
            })
            .collect();
        let beta = one_form(&c, &comps.iter().map(|s| s.as_str()).collect::<Vec<_>>());
        let omega = d(&a, &beta).unwrap();
        let l = if case % 2 == 0 {
            SubmanifoldSpec::new(&c, vec![0, 1, 2]).unwrap()
        } else {
            SubmanifoldSpec::from_names(&c, &["y", "z"]).unwrap()
        };
        let phi = poincare_primitive::<f64>(&omega, &l, &field).unwrap();
        let res =
            exterior_derivative(&phi).max_difference(&sample_form(&omega, &field), Region::All);
        let scale = sample_form::<f64>(&omega, &field)
            .max_abs(Region::All)
            .max(1.0);
        assert!(res < 1e-8 * scale, "case {}: residual {}", case, res);
        let g = phi.grid().clone();
        for node in (0..g.len()).filter(|&nd| g.on_subspace(nd, l.normal())) {
            assert!(phi.values().at(node).iter().all(|v| v.abs() < 1e-14));
        }
    }
}

#[test]
fn primitive_preconditions() {
    let c = space();
    let field = NumericField::cube(3, r(1, 1), 8).unwrap();
    let point = SubmanifoldSpec::new(&c, vec![0, 1, 2]).unwrap();
    let not_closed = two_form(&c, &[(1, 2, "x")]);
    assert!(matches!(
        poincare_primitive::<f64>(&not_closed, &point, &field),
        Err(MoserError::NotClosed)
    ));
    let plane_l = SubmanifoldSpec::from_names(&c, &["z"]).unwrap();
    let area = two_form(&c, &[(0, 1, "1")]);
    assert!(matches!(
        poincare_primitive::<f64>(&area, &plane_l, &field),
        Err(MoserError::NotRelative(_))
    ));
    let off = NumericField::new(vec![(r(1, 4), r(1, 1)); 3], 8, r(1, 64), 1e-6).unwrap();
    assert!(matches!(
        poincare_primitive::<f64>(&area, &point, &off),
        Err(MoserError::InvalidField(_))
    ));
}

#[test]
fn primitive_in_single_precision() {
    let c = plane();
    let l = SubmanifoldSpec::new(&c, vec![0, 1]).unwrap();
    let field = NumericField::cube(2, r(1, 1), 16).unwrap();
    let omega = two_form(&c, &[(0, 1, "1+x^2")]);
    let phi = poincare_primitive::<f32>(&omega, &l, &field);
    // the f32 quadrature check is looser than the default gate
    match phi {
        Ok(phi) => {
            let res = exterior_derivative(&phi)
                .max_difference(&sample_form(&omega, &field), Region::Interior(2));
            assert!(res < 1e-3, "{}", res);
        }
        Err(MoserError::Quadrature { difference, .. }) => assert!(difference < 1e-5),
        Err(other) => panic!("{}", other),
    }
}

fn area_structures(tilde: &str) -> (CosymplecticData, CosymplecticData) {
    let c = plane();
    (
        structure(&c, vec![], two_form(&c, &[(0, 1, "1")])),
        structure(&c, vec![], two_form(&c, &[(0, 1, tilde)])),
    )
}

#[test]
fn moser_flow_for_rescaled_area_form() {
    let (w, wt) = area_structures("1+x^2");
    let l = SubmanifoldSpec::new(&plane(), vec![0, 1]).unwrap();
    let field = NumericField::cube(2, r(1, 1), 64).unwrap();
    let res = moser_flow::<f64>(&w, &wt, &l, &field).unwrap();
    assert!(res.omega_residual < 1e-6, "{}", res.omega_residual);
    assert!(res.identity_on_l < 1e-9);
    assert!(res.passed());
    assert_eq!(res.steps, 64);
    assert!(res.diagnostics.step1_skipped);
    assert!(res.f.is_empty());
    // the flow is not the identity away from the origin
    let g = res.flow.grid().clone();
    let corner = g.flat(&[0, 0]);
    assert!((res.flow.at(corner)[0] - g.point(corner)[0]).abs() > 1e-3);
}

#[test]
fn moser_flow_of_equal_structures_is_identity() {
    let (w, _) = area_structures("1");
    let l = SubmanifoldSpec::new(&plane(), vec![0, 1]).unwrap();
    let field = NumericField::cube(2, r(1, 1), 16).unwrap();
    let res = moser_flow::<f64>(&w, &w, &l, &field).unwrap();
    assert!(res.omega_residual < 1e-12);
    let g = res.flow.grid().clone();
    for node in 0..g.len() {
        assert_eq!(res.flow.at(node), &g.point(node)[..]);
    }
}

#[test]
fn moser_flow_with_one_form_on_r3() {
    // ω̃ − ω = (x² + y²) dx∧dy + xz dx∧dz is closed and vanishes along the z-axis
    let c = space();
    let w = structure(
        &c,
        vec![one_form(&c, &["0", "0", "1"])],
        two_form(&c, &[(0, 1, "1")]),
    );
    let wt = structure(
        &c,
        vec![one_form(&c, &["0", "0", "1"])],
        two_form(&c, &[(0, 1, "1+x^2+y^2"), (0, 2, "x*z")]),
    );
    let l = SubmanifoldSpec::from_names(&c, &["x", "y"]).unwrap();
    let field = NumericField::cube(3, r(1, 2), 16).unwrap();
    // discretisation error at h = 1/16, fourth order in h
    let res = moser_flow::<f64>(&w, &wt, &l, &field).unwrap();
    assert!(res.omega_residual < 5e-5, "{}", res.omega_residual);
    assert!(res.alpha_residuals[0] < 5e-5, "{}", res.alpha_residuals[0]);
    assert!(res.identity_on_l < 1e-9);
    assert_eq!(res.f.len(), 1);
    // the x-axis is not admissible: the forms differ there
    let axis = SubmanifoldSpec::from_names(&c, &["y", "z"]).unwrap();
    assert!(matches!(
        moser_flow::<f64>(&w, &wt, &axis, &field),
        Err(MoserError::Disagree(_))
    ));
}

#[test]
fn moser_flow_with_both_steps() {
    // α̃ = d(z + z³/3), ω̃ = (1 + y²) dx∧dy agree with (dz, dx∧dy) on the x-axis;
    // the step-one field −(z³/3)/(1 + tz²) ∂z points into the box
    let c = space();
    let w = structure(
        &c,
        vec![one_form(&c, &["0", "0", "1"])],
        two_form(&c, &[(0, 1, "1")]),
    );
    let wt = structure(
        &c,
        vec![one_form(&c, &["0", "0", "1+z^2"])],
        two_form(&c, &[(0, 1, "1+y^2")]),
    );
    let l = SubmanifoldSpec::from_names(&c, &["y", "z"]).unwrap();
    let field = NumericField::cube(3, r(1, 2), 16).unwrap();
    // discretisation error at h = 1/16, fourth order in h
    let res = moser_flow::<f64>(&w, &wt, &l, &field).unwrap();
    assert!(!res.diagnostics.step1_skipped);
    assert!(
        res.step1_alpha_residuals[0] < 5e-5,
        "{}",
        res.step1_alpha_residuals[0]
    );
    assert!(res.alpha_residuals[0] < 5e-5, "{}", res.alpha_residuals[0]);
    assert!(res.omega_residual < 5e-5, "{}", res.omega_residual);
    assert!(res.identity_on_l < 1e-9);
}

#[test]
fn moser_flow_reports_singular_solves() {
    // ω = (1 − 4x²) dx∧dy degenerates on the node lines x = ±1/2
    let (_, wt) = area_structures("1-3*x^2");
    let c = plane();
    let w = structure(&c, vec![], two_form(&c, &[(0, 1, "1-4*x^2")]));
    let l = SubmanifoldSpec::new(&c, vec![0, 1]).unwrap();
    let field = NumericField::cube(2, r(1, 1), 8).unwrap();
    match moser_flow::<f64>(&w, &wt, &l, &field) {
        Err(MoserError::Singular { point, t }) => {
            assert_eq!(point[0].abs(), 0.5);
            assert_eq!(t, 0.0);
        }
        other => panic!(
            "expected a singular solve, got {:?}",
            other.map(|r| r.omega_residual)
        ),
    }
}

#[test]
fn moser_flow_preconditions() {
    let c = space();
    let l = SubmanifoldSpec::new(&c, vec![0, 1, 2]).unwrap();
    let field = NumericField::cube(3, r(1, 2), 8).unwrap();
    let a = structure(
        &c,
        vec![one_form(&c, &["0", "0", "1"])],
        two_form(&c, &[(0, 1, "1")]),
    );
    let ch4 = Chart::base(&["x", "y", "z", "w"]);
    let two = structure(
        &ch4,
        vec![
            one_form(&ch4, &["0", "0", "1", "0"]),
            one_form(&ch4, &["0", "0", "0", "1"]),
        ],
        two_form(&ch4, &[(0, 1, "1")]),
    );
    let l4 = SubmanifoldSpec::new(&ch4, vec![0, 1, 2, 3]).unwrap();
    assert!(matches!(
        moser_flow::<f64>(&two, &two, &l4, &field),
        Err(MoserError::Unsupported(_))
    ));
    let log = CosymplecticData::new(
        algebroid_core::algebroid::catalog::log_tangent_r2(),
        vec![],
        two_form(&plane(), &[(0, 1, "1")]),
    )
    .unwrap();
    let lp = SubmanifoldSpec::new(&plane(), vec![0, 1]).unwrap();
    let f2 = NumericField::cube(2, r(1, 2), 8).unwrap();
    assert!(matches!(
        moser_flow::<f64>(&log, &log, &lp, &f2),
        Err(MoserError::Unsupported(_))
    ));
    assert!(
        moser_flow::<f64>(&a, &a, &l, &field)
            .unwrap()
            .omega_residual
            < 1e-12
    );
}

#[test]
fn local_model_of_rescaled_plane() {
    let c = plane();
    let input = structure(&c, vec![], two_form(&c, &[(0, 1, "1+x^2")]));
    let l = SubmanifoldSpec::from_names(&c, &["y"]).unwrap();
    let field = NumericField::cube(2, r(1, 1), 16).unwrap();
    let run = verify_local_model_numeric::<f64>(&input, &l, &field).unwrap();
    let mc = &run.model_chart;
    assert_eq!(mc.len(), 2);
    assert_eq!(run.linear_map[0], Expr::var(0));
    assert_eq!(run.linear_map[1], e(mc, &format!("{}/(1+x^2)", mc.name(1))));
    assert_eq!(run.pulled.omega(), run.model.omega());
    assert!(
        run.result.omega_residual < 1e-12,
        "{}",
        run.result.omega_residual
    );
    assert!(run.result.passed());
}

#[test]
fn local_model_of_canonical_input_is_identity() {
    let c = plane();
    let input = structure(&c, vec![], two_form(&c, &[(0, 1, "1")]));
    let l = SubmanifoldSpec::from_names(&c, &["y"]).unwrap();
    let field = NumericField::cube(2, r(1, 1), 8).unwrap();
    let run = verify_local_model_numeric::<f64>(&input, &l, &field).unwrap();
    assert_eq!(run.linear_map, vec![Expr::var(0), Expr::var(1)]);
    let g = run.result.flow.grid().clone();
    for node in 0..g.len() {
        assert_eq!(run.result.flow.at(node), &g.point(node)[..]);
    }
}

#[test]
fn local_model_of_cosymplectic_space() {
    let c = space();
    let input = structure(
        &c,
        vec![one_form(&c, &["0", "0", "1"])],
        two_form(&c, &[(0, 1, "1+x^2+y^2")]),
    );
    let l = SubmanifoldSpec::from_names(&c, &["y", "z"]).unwrap();
    let field = NumericField::cube(3, r(1, 2), 16).unwrap();
    // discretisation error at h = 1/16, fourth order in h
    let run = verify_local_model_numeric::<f64>(&input, &l, &field).unwrap();
    assert_eq!(run.model_chart.len(), 3);
    assert_eq!(
        run.model.alphas()[0].as_covector(),
        vec![Expr::zero(), Expr::zero(), Expr::one()]
    );
    assert!(
        run.result.omega_residual < 5e-5,
        "{}",
        run.result.omega_residual
    );
    assert!(run.result.alpha_residuals[0] < 5e-5);
    assert!(run.result.identity_on_l < 1e-9);
}

#[test]
fn local_model_with_tilted_normal_bundle() {
    // α = dy + dz and ω(∂y, ∂z) = 1 make the normal directions neither
    // isotropic nor in ker α along the x-axis
    let c = space();
    let input = structure(
        &c,
        vec![one_form(&c, &["0", "1", "1"])],
        two_form(&c, &[(0, 1, "1"), (1, 2, "1")]),
    );
    let l = SubmanifoldSpec::from_names(&c, &["y", "z"]).unwrap();
    let field = NumericField::cube(3, r(1, 2), 16).unwrap();
    let run = verify_local_model_numeric::<f64>(&input, &l, &field).unwrap();
    assert!(run.result.passed(), "{:?}", run.result.omega_residual);
    assert_ne!(run.linear_map[0], Expr::var(0));
}

#[test]
fn grid_dump_round_trip() {
    let field = NumericField::cube(2, r(1, 1), 8).unwrap();
    let g = field.grid::<f64>();
    let gi = g.clone();
    let gf = GridFunction::from_fn(g, 2, |n, o| {
        let p = gi.point(n);
        o[0] = p[0];
        o[1] = p[0] * p[1];
    });
    let mut buf = Vec::new();
    write_grid_dump(&mut buf, &gf).unwrap();
    assert_eq!(&buf[..8], b"ALGDGRID");
    assert_eq!(buf.len(), 24 + 24 * 2 + 8 * 2 * 81);
    let back = read_grid_dump(&mut buf.as_slice()).unwrap();
    assert_eq!(back.counts, vec![9, 9]);
    assert_eq!(back.bounds, vec![(-1.0, 1.0), (-1.0, 1.0)]);
    assert_eq!(back.ncomp, 2);
    assert_eq!(back.data, gf.data());
    // node (1, 2): x = −3/4, y = −1/2
    let k = (9 + 2) * 2;
    assert_eq!(back.data[k], -0.75);
    assert_eq!(back.data[k + 1], 0.375);
    buf.push(0);
    assert!(read_grid_dump(&mut buf.as_slice()).is_err());
}
