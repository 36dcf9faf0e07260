//! Acceptance gates: one line per criterion with its time budget.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use algebroid_core::algebroid::{catalog, AlgebroidData};
use algebroid_core::calculus::{d, d_function, evaluate_multivector, schouten, AForm, Multivector};
use algebroid_core::cosymplectic::CosymplecticData;
use algebroid_core::geometry::{
    check_coisotropic_lagrangian, check_minimal_lagrangian, graph_coisotropic, linearize,
    nonlinearizability_scan, product_grid, weinstein_rank_scan, zero_section, ScanOptions,
    SubmanifoldSpec, Verdict, WeinsteinSplit,
};
use algebroid_core::pullback::{
    build_pullback, check_canonical_form, default_test_forms, verify_im_cocycle,
    verify_im_cocycle_sharp, BundleChart, PairingCase,
};
use algebroid_core::symexpr::{
    int, parse, rat, scale_and_limit, Chart, Coordinate, Expr, Poly, Rational,
};
use algebroid_moser::{
    exterior_derivative, first_derivatives_on, moser_flow, poincare_primitive, sample_form,
    NumericField, Region,
};
use common::*;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn chart_with_fibres(base: &[&str], fibre: &[&str]) -> Chart {
    Chart::base(base).extended(fibre.iter().map(|n| Coordinate::fibre(*n)).collect())
}

fn bivector(chart: &Chart, entries: &[(usize, usize, &str)]) -> Multivector {
    let e: Vec<(usize, usize, Expr)> = entries
        .iter()
        .map(|(i, j, s)| (*i, *j, parse(s, chart).unwrap()))
        .collect();
    Multivector::bivector(chart.len(), &e)
}

fn r(n: i64, d: i64) -> Rational {
    rat(n, d)
}

fn axioms() -> Outcome {
    let so3_over_r3 = build_pullback(
        &catalog::so3(),
        BundleChart::general(Chart::default(), &["u1", "u2", "u3"]),
    )
    .map_err(|e| e.to_string())?;
    let total = so3_over_r3.total().clone();
    ensure(total.rank() == 6 && total.dim() == 3, || {
        "pullback of so(3) is not rank 6 over ℝ³".into()
    })?;
    let named = [
        ("so(3)", catalog::so3()),
        ("Tℝ¹", catalog::tangent_rn(1)),
        ("Tℝ²", catalog::tangent_rn(2)),
        ("Tℝ³", catalog::tangent_rn(3)),
        ("log-tangent ℝ²", catalog::log_tangent_r2()),
        ("so(3) pullback over ℝ³", total),
    ];
    for (name, a) in &named {
        ensure(a.check_axioms().passed(), || {
            format!("{} fails its axioms", name)
        })?;
    }
    let broken = catalog::broken_jacobi().map_err(|e| e.to_string())?;
    let rep = broken.check_axioms();
    ensure(!rep.passed(), || "corrupted Jacobi table passes".into())?;
    let nonzero = rep
        .jacobiator
        .iter()
        .any(|(_, v)| v.iter().any(|c| !c.is_zero()));
    ensure(nonzero, || {
        "corrupted Jacobi table has no nonzero residual".into()
    })?;
    Ok(format!(
        "{} structures pass, corrupted table fails",
        named.len()
    ))
}

/// `{{xi,xj},xk} + cyclic` for `{f,g} = π(df,dg)`, without the Schouten bracket.
fn poisson_jacobiator(a: &AlgebroidData, pi: &Multivector) -> Expr {
    let br = |f: &Expr, g: &Expr| -> Expr {
        let df = d_function(a, f).as_covector();
        let dg = d_function(a, g).as_covector();
        evaluate_multivector(pi, &[df, dg]).unwrap()
    };
    let x = Expr::var;
    &(&br(&br(&x(0), &x(1)), &x(2)) + &br(&br(&x(1), &x(2)), &x(0))) + &br(&br(&x(2), &x(0)), &x(1))
}

fn parity_sign(p: usize, q: usize) -> i64 {
    if ((p as i64 - 1) * (q as i64 - 1)).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn rank_four(rng: &mut TestRng) -> AlgebroidData {
    let base = with_central(&catalog::so3_action(), 1);
    let g = unipotent(rng, 4, 3, 1);
    base.change_frame(&g).unwrap().verified().unwrap()
}

fn schouten_suite() -> Outcome {
    let mut rng = rng(2024);
    let (mut squares, mut jacobis) = (0, 0);
    for case in 0..1000 {
        let a = if case % 5 == 0 {
            rank_four(&mut rng)
        } else {
            random_algebroid(&mut rng, 4, 1)
        };
        if case % 2 == 0 {
            let q = rng.gen_range(0..=3);
            let w = random_form(&mut rng, &a, q, 3);
            let dd = d(&a, &d(&a, &w).unwrap()).unwrap();
            ensure(dd.is_zero(), || format!("d² ≠ 0 in case {}", case))?;
            squares += 1;
        } else {
            // every bracket in the identity has degree ≥ 0
            let (p, q, s) = loop {
                let t: (usize, usize, usize) = (
                    rng.gen_range(0..=3),
                    rng.gen_range(0..=3),
                    rng.gen_range(0..=3),
                );
                if t.0 + t.1 >= 1 && t.1 + t.2 >= 1 && t.0 + t.2 >= 1 && t.0 + t.1 + t.2 >= 2 {
                    break t;
                }
            };
            let pp = random_multivector(&mut rng, &a, p, 2);
            let qq = random_multivector(&mut rng, &a, q, 2);
            let ss = random_multivector(&mut rng, &a, s, 2);
            let pq = schouten(&a, &pp, &qq).unwrap();
            let lhs = schouten(&a, &pp, &schouten(&a, &qq, &ss).unwrap()).unwrap();
            let r1 = schouten(&a, &pq, &ss).unwrap();
            let r2 = schouten(&a, &qq, &schouten(&a, &pp, &ss).unwrap()).unwrap();
            let rhs = r1.0.add(&r2.0.scale(&int(parity_sign(p, q))));
            ensure(lhs.0 == rhs, || {
                format!(
                    "graded Jacobi fails in case {} (degrees {},{},{})",
                    case, p, q, s
                )
            })?;
            jacobis += 1;
        }
    }
    let t3 = catalog::tangent_rn(3);
    let lp = Multivector::bivector(
        3,
        &[
            (0, 1, Expr::var(2)),
            (1, 2, Expr::var(0)),
            (2, 0, Expr::var(1)),
        ],
    );
    let sq = schouten(&t3, &lp, &lp).unwrap();
    ensure(sq.is_zero(), || {
        "[π,π] ≠ 0 for the Lie–Poisson bivector".into()
    })?;
    ensure(poisson_jacobiator(&t3, &lp).is_zero(), || {
        "trivector oracle is nonzero".into()
    })?;
    // the oracle must track the bracket on non-Poisson input too
    for _ in 0..20 {
        let pi = random_multivector(&mut rng, &t3, 2, 2);
        let sq = schouten(&t3, &pi, &pi).unwrap();
        let expected = poisson_jacobiator(&t3, &pi).scale(&rat(-2, 1));
        ensure(sq.component(&[0, 1, 2]) == expected, || {
            "Schouten square disagrees with the trivector oracle".into()
        })?;
    }
    Ok(format!(
        "{} d² cases, {} graded Jacobi cases, Lie–Poisson square 0",
        squares, jacobis
    ))
}

fn canonical_forms() -> Outcome {
    let mut rng = rng(4242);
    for case in 0..50 {
        let a = random_algebroid(&mut rng, 3, 2);
        let rep = check_canonical_form(&a).map_err(|e| e.to_string())?;
        ensure(rep.closed(), || {
            format!("ω_can not closed in case {}", case)
        })?;
        ensure(rep.unimodular(), || {
            format!("determinant {:?} in case {}", rep.determinant, case)
        })?;
        ensure(rep.generator_mismatches.is_empty(), || {
            format!("generator values differ in case {}", case)
        })?;
        ensure(rep.bivector_difference.is_zero(), || {
            format!("induced bivector differs in case {}", case)
        })?;
    }
    Ok("50 algebroids: closed, unimodular, generators and induced bivector match".into())
}

fn closed_one_forms() -> Outcome {
    let mut rng = rng(777);
    let (mut closed, mut open) = (0, 0);
    for case in 0..200 {
        let a = random_algebroid(&mut rng, 3, 1);
        let alpha = if case % 2 == 0 {
            d_function(&a, &random_poly(&mut rng, a.dim(), 2, 3)).as_covector()
        } else {
            random_covector(&mut rng, &a, 2)
        };
        let is_closed = d(&a, &AForm::one_form(alpha.clone())).unwrap().is_zero();
        let verdict = graph_coisotropic(&a, &alpha).map_err(|e| e.to_string())?;
        ensure(verdict == is_closed, || {
            format!(
                "verdict {} but closed = {} in case {}",
                verdict, is_closed, case
            )
        })?;
        if is_closed {
            closed += 1;
        } else {
            open += 1;
        }
    }
    Ok(format!(
        "200 forms agree ({} closed, {} not closed)",
        closed, open
    ))
}

fn im_cocycle() -> Outcome {
    let t2 = catalog::tangent_rn(2);
    let sympl = Multivector::bivector(2, &[(0, 1, int(1))]);
    let rep = verify_im_cocycle(&t2, &sympl).map_err(|e| e.to_string())?;
    ensure(rep.passed(), || {
        "symplectic plane has nonzero pairings".into()
    })?;
    let t3 = catalog::tangent_rn(3);
    let lp = Multivector::bivector(
        3,
        &[
            (0, 1, Expr::var(2)),
            (1, 2, Expr::var(0)),
            (2, 0, Expr::var(1)),
        ],
    );
    let rep = verify_im_cocycle(&t3, &lp).map_err(|e| e.to_string())?;
    ensure(rep.passed(), || {
        "Lie–Poisson input has nonzero pairings".into()
    })?;
    let sym = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
    let rep =
        verify_im_cocycle_sharp(&t2, &sym, &default_test_forms(&t2)).map_err(|e| e.to_string())?;
    let failing = rep.failing_cases();
    ensure(failing == vec![PairingCase::CoreCore], || {
        format!("skew violation fails in {:?}", failing)
    })?;
    Ok("all pairings vanish; skew violation fails only core-core".into())
}

fn degree_one_part(e: &Expr) -> Expr {
    let p = e.as_polynomial().unwrap();
    Poly::from_terms(
        p.terms()
            .filter(|(m, _)| m.degree() == 1)
            .map(|(m, c)| (m.clone(), c.clone())),
    )
    .into()
}

fn linearization() -> Outcome {
    let chart = chart_with_fibres(&[], &["ξ1", "ξ2", "ξ3"]);
    let pi = bivector(
        &chart,
        &[
            (0, 1, "ξ3 + ξ3^2 - ξ1*ξ2"),
            (1, 2, "ξ1 + ξ2^3"),
            (2, 0, "ξ2"),
        ],
    );
    let lin = linearize(&chart, &pi)
        .map_err(|e| e.to_string())?
        .linearized
        .ok_or("perturbed Lie–Poisson diverges")?;
    let truncation = Multivector(pi.0.map(degree_one_part));
    ensure(lin == truncation, || {
        "limit differs from the degree-one truncation".into()
    })?;
    let lp = bivector(&chart, &[(0, 1, "ξ3"), (1, 2, "ξ1"), (2, 0, "ξ2")]);
    ensure(lin == lp, || "limit is not the Lie–Poisson bivector".into())?;

    let mut rng = rng(99);
    let c = chart_with_fibres(&["x"], &["u1", "u2"]);
    let t = AlgebroidData::tangent(c.clone());
    let z = zero_section(&c);
    let weights = c.weights();
    let (mut div, mut conv) = (0, 0);
    for case in 0..100 {
        let mut pi = random_multivector(&mut rng, &t, 2, 3);
        if case % 2 == 0 {
            let v = pi.component(&[1, 2]);
            let k = v.as_polynomial().unwrap().constant_term();
            pi = pi.sub(&Multivector::bivector(3, &[(1, 2, Expr::constant(k))]));
        }
        let res = linearize(&c, &pi).map_err(|e| e.to_string())?;
        let cois = check_coisotropic_lagrangian(&t, &pi, &z)
            .map_err(|e| e.to_string())?
            .coisotropic;
        ensure(res.diverges() == !cois, || {
            format!("divergence flag disagrees with coisotropy in case {}", case)
        })?;
        match res.linearized {
            Some(lin) => {
                conv += 1;
                for (idx, v) in lin.components() {
                    let overall = 1 - weights[idx[0]] - weights[idx[1]];
                    ensure(
                        scale_and_limit(v, &weights, overall).limit.as_ref() == Some(v),
                        || format!("limit is not fibre-scaling invariant in case {}", case),
                    )?;
                }
                let again = linearize(&c, &lin).map_err(|e| e.to_string())?.linearized;
                ensure(again.as_ref() == Some(&lin), || {
                    format!("limit is not idempotent in case {}", case)
                })?;
            }
            None => div += 1,
        }
    }
    Ok(format!(
        "truncation matches; 100 bivectors ({} convergent, {} divergent)",
        conv, div
    ))
}

fn scan() -> Outcome {
    let chart = catalog::standard_chart(2);
    let pi = bivector(&chart, &[(0, 1, "x")]);
    let opts = ScanOptions::default();
    let rep = nonlinearizability_scan(&chart, &pi, &opts).map_err(|e| e.to_string())?;
    ensure(rep.verdict == Verdict::Obstruction, || {
        "no obstruction reported".into()
    })?;
    let mut found: Vec<Vec<Rational>> = rep.singular_points().iter().map(|p| p.to_vec()).collect();
    let mut expected: Vec<Vec<Rational>> =
        product_grid(&[opts.values.clone(), opts.values.clone()])
            .into_iter()
            .filter(|p| p[0] == r(0, 1))
            .collect();
    found.sort();
    expected.sort();
    ensure(found == expected, || {
        format!("singular samples {:?}", found)
    })?;

    let y = Chart::base(&["y1", "y2", "y3"]);
    let theta = bivector(&y, &[(0, 1, "y3"), (1, 2, "y1"), (2, 0, "y2")]);
    let split = WeinsteinSplit::new(1, &["y1", "y2", "y3"], theta).map_err(|e| e.to_string())?;
    let v = opts.values.clone();
    let points: Vec<(Vec<Rational>, Vec<Rational>)> = product_grid(&[
        v.clone(),
        v.clone(),
        v.clone(),
        v,
        vec![r(1, 1)],
        vec![r(1, 2)],
    ])
    .into_iter()
    .map(|p| (p[..3].to_vec(), p[3..].to_vec()))
    .collect();
    let n = points.len();
    let rep = weinstein_rank_scan(&split, &points).map_err(|e| e.to_string())?;
    ensure(rep.agrees(), || {
        format!("{} samples disagree", rep.disagreements().len())
    })?;
    Ok(format!(
        "{} singular samples on x = 0; rank formula holds at {} samples",
        found.len(),
        n
    ))
}

fn cosymplectic() -> Outcome {
    let c = CosymplecticData::new(
        catalog::tangent_rn(3),
        vec![AForm::one_form(vec![int(0), int(0), int(1)])],
        AForm::two_form(3, &[(0, 1, int(1))]),
    )
    .map_err(|e| e.to_string())?;
    ensure(c.verify(None).map_err(|e| e.to_string())?.passed(), || {
        "structure does not verify".into()
    })?;
    let reeb = c.reeb_sections().map_err(|e| e.to_string())?;
    ensure(reeb == [vec![int(0), int(0), int(1)]], || {
        format!("Reeb {:?}", reeb)
    })?;
    let pi = c.underlying_bivector().map_err(|e| e.to_string())?;
    ensure(*pi == Multivector::bivector(3, &[(0, 1, int(1))]), || {
        "bivector is not ∂x∧∂y".into()
    })?;
    ensure(
        c.underlying_schouten_square()
            .map_err(|e| e.to_string())?
            .is_zero(),
        || "[π,π] ≠ 0".into(),
    )?;
    let chart = c.algebroid().chart().clone();
    let x_axis = SubmanifoldSpec::from_names(&chart, &["y", "z"]).map_err(|e| e.to_string())?;
    let z_axis = SubmanifoldSpec::from_names(&chart, &["x", "y"]).map_err(|e| e.to_string())?;
    let x = check_minimal_lagrangian(&c, &x_axis).map_err(|e| e.to_string())?;
    let z = check_minimal_lagrangian(&c, &z_axis).map_err(|e| e.to_string())?;
    ensure(x.minimal(), || "x-axis is not minimal Lagrangian".into())?;
    ensure(!z.minimal(), || "z-axis is minimal Lagrangian".into())?;
    Ok("R = ∂z, π = ∂x∧∂y, x-axis passes, z-axis fails".into())
}

fn area_structure(chart: &Chart, density: &str) -> CosymplecticData {
    let f = parse(density, chart).unwrap();
    CosymplecticData::new(
        AlgebroidData::tangent(chart.clone()),
        vec![],
        AForm::two_form(2, &[(0, 1, f)]),
    )
    .unwrap()
}

fn moser_gate() -> Outcome {
    let chart = Chart::base(&["x", "y"]);
    let omega = area_structure(&chart, "1");
    let tilde = area_structure(&chart, "1+x^2");
    let origin = SubmanifoldSpec::new(&chart, vec![0, 1]).map_err(|e| e.to_string())?;
    let field = NumericField::cube(2, r(1, 1), 64)
        .and_then(|f| f.with_step(r(1, 64)))
        .map_err(|e| e.to_string())?;
    let coarse = moser_flow::<f64>(&omega, &tilde, &origin, &field).map_err(|e| e.to_string())?;
    let fine =
        moser_flow::<f64>(&omega, &tilde, &origin, &field.refined()).map_err(|e| e.to_string())?;
    let (a, b) = (coarse.omega_residual, fine.omega_residual);
    ensure(a < 1e-6, || format!("residual {:.3e} at 64²", a))?;
    ensure(coarse.identity_on_l < 1e-9, || {
        format!("φ|_L defect {:.3e}", coarse.identity_on_l)
    })?;
    ensure(a >= 2.0 * b, || {
        format!("refinement {:.3e} → {:.3e} is below 2×", a, b)
    })?;
    Ok(format!(
        "residual {:.2e} at 64², {:.2e} at 128²; φ|_L defect {:.1e}",
        a, b, coarse.identity_on_l
    ))
}

fn poincare_gate() -> Outcome {
    let chart = Chart::base(&["x", "y"]);
    let axis = SubmanifoldSpec::from_names(&chart, &["y"]).map_err(|e| e.to_string())?;
    let omega = AForm::two_form(2, &[(0, 1, parse("2*y", &chart).unwrap())]);
    let field = NumericField::cube(2, r(1, 1), 32).map_err(|e| e.to_string())?;
    let phi = poincare_primitive::<f64>(&omega, &axis, &field).map_err(|e| e.to_string())?;
    let res = exterior_derivative(&phi).max_difference(&sample_form(&omega, &field), Region::All);
    let flat = first_derivatives_on(phi.values(), &[1]);
    ensure(res < 1e-8, || format!("‖dφ − ω‖ = {:.3e}", res))?;
    ensure(flat < 1e-8, || {
        format!("first derivatives on L = {:.3e}", flat)
    })?;
    Ok(format!(
        "‖dφ − ω‖ = {:.1e}, derivatives on L = {:.1e}",
        res, flat
    ))
}

struct Criterion {
    name: &'static str,
    budget: u64,
    run: fn() -> Outcome,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        name: "algebroid axioms",
        budget: 5,
        run: axioms,
    },
    Criterion {
        name: "Schouten and differential identities",
        budget: 30,
        run: schouten_suite,
    },
    Criterion {
        name: "canonical two-form",
        budget: 60,
        run: canonical_forms,
    },
    Criterion {
        name: "closed one-forms have Lagrangian graphs",
        budget: 30,
        run: closed_one_forms,
    },
    Criterion {
        name: "IM cocycle pairings",
        budget: 10,
        run: im_cocycle,
    },
    Criterion {
        name: "linearization",
        budget: 60,
        run: linearization,
    },
    Criterion {
        name: "nonlinearizability scan and split rank",
        budget: 60,
        run: scan,
    },
    Criterion {
        name: "cosymplectic space",
        budget: 10,
        run: cosymplectic,
    },
    Criterion {
        name: "Moser flow",
        budget: 120,
        run: moser_gate,
    },
    Criterion {
        name: "relative Poincaré primitive",
        budget: 30,
        run: poincare_gate,
    },
];

fn main() -> ExitCode {
    // silence the default hook; panics are reported on the criterion line
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, c) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(format!("panic: {}", msg))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(c.budget) => Err("over time budget".to_string()),
            o => o,
        };
        let (label, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!(
            "{:>2} {} {:<40} {:>7.2} s / {:>3} s  {}",
            i + 1,
            label,
            c.name,
            elapsed.as_secs_f64(),
            c.budget,
            detail
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
