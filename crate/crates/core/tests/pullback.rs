mod common;

use algebroid_core::algebroid::{catalog, AlgebroidData};
use algebroid_core::calculus::{d, schouten, sharp, Multivector};
use algebroid_core::pullback::*;
use algebroid_core::pullback::{build_pullback, BundleChart, Generator, PullbackError};
use algebroid_core::symexpr::{int, parse, Chart, Expr};
use common::*;

fn e(a: &AlgebroidData, i: usize) -> Vec<Expr> {
    a.frame_section(i)
}

#[test]
fn so3_pullback_over_r3_is_rank_six() {
    let a = catalog::so3();
    let bundle = BundleChart::general(Chart::default(), &["u1", "u2", "u3"]);
    let p = build_pullback(&a, bundle).unwrap();
    assert_eq!(p.total().rank(), 6);
    assert_eq!(p.total().dim(), 3);
    assert!(p.total().check_axioms().passed());
    assert!(p.projection_residual().is_empty());
}

#[test]
fn tangent_pullback_is_tangent_prolongation() {
    let a = catalog::tangent_rn(2);
    let p = build_pullback(&a, BundleChart::general(a.chart().clone(), &["u"])).unwrap();
    let t = p.total();
    assert_eq!(t.rank(), 3);
    for i in 0..3 {
        for j in 0..3 {
            assert!(t.frame_bracket(i, j).iter().all(|c| c.is_zero()));
        }
        assert_eq!(t.anchor()[i], t.frame_section(i));
    }
}

#[test]
fn corrupted_base_is_refused() {
    let a = catalog::broken_jacobi().unwrap();
    let r = build_pullback(&a, BundleChart::general(Chart::default(), &["u"]));
    assert!(matches!(r, Err(PullbackError::Unverified(_))));
}

#[test]
fn hamiltonian_lift_tables_on_so3() {
    let a = catalog::so3();
    let p = build_pullback(&a, BundleChart::dual(&a)).unwrap();
    let h = |i| Generator::Hamiltonian(e(&a, i));
    let up = |i| Generator::Vertical(e(&a, i));
    assert_eq!(p.bracket_generators(&h(0), &h(1)).unwrap(), vec![h(2)]);
    assert_eq!(p.bracket_generators(&up(0), &up(1)).unwrap(), vec![]);
    // (L_{e1} ε²)(e3) = −ε²([e1, e3]) = 1
    assert_eq!(p.bracket_generators(&h(0), &up(1)).unwrap(), vec![up(2)]);
    // the table entry agrees with the frame bracket (checked inside), and
    // the reversed order negates it
    assert_eq!(
        p.bracket_generators(&up(1), &h(0)).unwrap(),
        vec![Generator::Vertical(vec![int(0), int(0), int(-1)])]
    );
    assert!(matches!(
        p.bracket_generators(&Generator::Complete(e(&a, 0)), &h(1)),
        Err(PullbackError::Inadmissible(_))
    ));
}

#[test]
fn lift_tables_agree_with_frame_brackets_on_random_algebroids() {
    let mut r = rng(21);
    for _ in 0..15 {
        let a = random_algebroid(&mut r, 3, 1);
        let v = random_covector(&mut r, &a, 2);
        let w = random_covector(&mut r, &a, 2);
        let pd = build_pullback(&a, BundleChart::dual(&a)).unwrap();
        pd.bracket_generators(
            &Generator::Hamiltonian(v.clone()),
            &Generator::Hamiltonian(w.clone()),
        )
        .unwrap();
        pd.bracket_generators(
            &Generator::Hamiltonian(v.clone()),
            &Generator::Vertical(w.clone()),
        )
        .unwrap();
        let pi = build_pullback(&a, BundleChart::itself(&a)).unwrap();
        pi.bracket_generators(
            &Generator::Complete(v.clone()),
            &Generator::Complete(w.clone()),
        )
        .unwrap();
        pi.bracket_generators(
            &Generator::Complete(v.clone()),
            &Generator::Vertical(w.clone()),
        )
        .unwrap();
        let pg =
            build_pullback(&a, BundleChart::general(a.chart().clone(), &["u1", "u2"])).unwrap();
        let f = random_covector(&mut r, &a, 2)[..1].to_vec();
        pg.bracket_generators(
            &Generator::Horizontal(v.clone()),
            &Generator::Vertical(vec![f[0].clone(), int(1)]),
        )
        .unwrap();
    }
}

#[test]
fn canonical_one_form_of_tangent_is_tautological() {
    let a = catalog::tangent_rn(2);
    let p = build_pullback(&a, BundleChart::dual(&a)).unwrap();
    let l = canonical_one_form(&p).unwrap();
    assert_eq!(
        l.as_covector(),
        vec![Expr::var(2), Expr::var(3), int(0), int(0)]
    );
    assert!(tautological_residual(&p, &a.zero_section())
        .unwrap()
        .iter()
        .all(|x| x.is_zero()));
}

#[test]
fn tautological_property_on_rank_two() {
    let a = catalog::log_tangent_r2();
    let p = build_pullback(&a, BundleChart::dual(&a)).unwrap();
    let alpha = vec![Expr::var(0), int(0)];
    assert!(tautological_residual(&p, &alpha)
        .unwrap()
        .iter()
        .all(|x| x.is_zero()));
}

#[test]
fn canonical_two_form_values_on_so3() {
    let a = catalog::so3();
    let p = build_pullback(&a, BundleChart::dual(&a)).unwrap();
    let om = canonical_two_form(&p).unwrap();
    let (l, r) = canonical_form_on_lifts(
        &p,
        &om,
        &e(&a, 0),
        &a.zero_section(),
        &e(&a, 1),
        &a.zero_section(),
    )
    .unwrap();
    assert_eq!(l, r);
    assert_eq!(l, -&Expr::var(2));
    let (l, _) = canonical_form_on_lifts(
        &p,
        &om,
        &e(&a, 0),
        &a.zero_section(),
        &a.zero_section(),
        &e(&a, 0),
    )
    .unwrap();
    assert_eq!(l, int(1));
    let rep = check_canonical_form(&a).unwrap();
    assert!(rep.passed(), "{:?}", rep.generator_mismatches);
}

#[test]
fn dual_linear_poisson_examples() {
    let a = catalog::so3();
    let (chart, pi) = dual_linear_poisson(&a);
    let lp = Multivector::bivector(
        3,
        &[
            (0, 1, Expr::var(2)),
            (1, 2, Expr::var(0)),
            (2, 0, Expr::var(1)),
        ],
    );
    assert_eq!(pi, lp);
    assert_eq!(chart.names(), vec!["ξ1", "ξ2", "ξ3"]);
    let t = AlgebroidData::tangent(chart);
    assert!(schouten(&t, &pi, &pi).unwrap().is_zero());

    let ab = AlgebroidData::lie_algebra(&[], 2).unwrap();
    assert!(dual_linear_poisson(&ab).1.is_zero());

    let tr = catalog::tangent_rn(2);
    let (_, pc) = dual_linear_poisson(&tr);
    assert_eq!(pc.component(&[2, 0]), int(1));
    assert_eq!(pc.component(&[3, 1]), int(1));
    assert_eq!(pc.num_components(), 2);
}

#[test]
fn canonical_form_suite_on_random_family() {
    let mut r = rng(33);
    for _ in 0..10 {
        let a = random_algebroid(&mut r, 3, 2);
        let rep = check_canonical_form(&a).unwrap();
        assert!(rep.closed() && rep.unimodular());
        assert!(rep.generator_mismatches.is_empty());
        assert!(rep.bivector_difference.is_zero());
        let p = build_pullback(&a, BundleChart::dual(&a)).unwrap();
        let v = random_covector(&mut r, &a, 1);
        let w = random_covector(&mut r, &a, 1);
        let al = random_covector(&mut r, &a, 1);
        let be = random_covector(&mut r, &a, 1);
        let (l, rr) = canonical_form_on_lifts(&p, &rep.omega, &v, &al, &w, &be).unwrap();
        assert_eq!(l, rr);
    }
}

#[test]
fn prolongation_identities() {
    let a = catalog::tangent_rn(2);
    let y = parse("y", a.chart()).unwrap();
    let rep = prolongation_lemma_identities(&a, &[y, int(0)], &e(&a, 0), &e(&a, 1)).unwrap();
    assert!(rep.holds());
    // (dα)(∂x, ∂y) = −1 for α = y dx; the canonical-form value is its negative
    assert_eq!(rep.first_rhs, int(1));
    assert_eq!(rep.first_lhs, int(1));

    let closed = vec![
        parse("2*x*y", a.chart()).unwrap(),
        parse("x^2", a.chart()).unwrap(),
    ];
    let rep = prolongation_lemma_identities(&a, &closed, &e(&a, 0), &e(&a, 1)).unwrap();
    assert!(rep.holds());
    assert!(rep.first_lhs.is_zero());

    let s = catalog::so3();
    let rep = prolongation_lemma_identities(&s, &e(&s, 0), &e(&s, 1), &e(&s, 2)).unwrap();
    assert!(rep.holds());
    assert!(rep.second_lhs.is_zero());

    let mut r = rng(4);
    for _ in 0..10 {
        let a = random_algebroid(&mut r, 3, 1);
        let al = random_covector(&mut r, &a, 2);
        let v = random_covector(&mut r, &a, 1);
        let w = random_covector(&mut r, &a, 1);
        assert!(prolongation_lemma_identities(&a, &al, &v, &w)
            .unwrap()
            .holds());
    }
}

#[test]
fn canonical_involution_examples() {
    let a = catalog::so3_action();
    let e1 = e(&a, 0);
    let j = |f: &ElementField| canonical_involution(&a, f);
    assert_eq!(
        j(&ElementField::complete(&a, &e1)),
        ElementField::tangent(&a, &e1)
    );
    assert_eq!(
        j(&ElementField::core(&a, &e1)),
        ElementField::vertical(&a, &e1)
    );
    let mut r = rng(8);
    for _ in 0..10 {
        let b = random_algebroid(&mut r, 3, 1);
        let v = random_covector(&mut r, &b, 2);
        let up = ElementField::vertical(&b, &v);
        let jj = canonical_involution(&b, &canonical_involution(&b, &up));
        assert_eq!(jj, up);
        let c = ElementField::complete(&b, &v);
        let jc = canonical_involution(&b, &c);
        assert_eq!(jc, ElementField::tangent(&b, &v));
        assert_eq!(jc.to_e(), c.to_a());
        assert_eq!(jc.to_a(), c.to_e());
        let p = build_pullback(&b, BundleChart::itself(&b)).unwrap();
        assert_eq!(
            c.as_section().unwrap(),
            p.expand(&Generator::Complete(v.clone())).unwrap()
        );
    }
}

#[test]
fn prolongation_tables() {
    let mut r = rng(17);
    for _ in 0..8 {
        let a = random_algebroid(&mut r, 3, 1);
        let p = Prolongation::of(&a).unwrap();
        assert!(p.total().check_axioms().passed());
        let secs: Vec<Vec<Expr>> = (0..2).map(|_| random_covector(&mut r, &a, 2)).collect();
        assert!(p.check_tables(&secs).is_empty());
    }
    // cotangent algebroid of the Lie–Poisson structure anchored by π♯
    let t = catalog::tangent_rn(3);
    let lp = Multivector::bivector(
        3,
        &[
            (0, 1, Expr::var(2)),
            (1, 2, Expr::var(0)),
            (2, 0, Expr::var(1)),
        ],
    );
    let cot = cotangent_algebroid(&t, &lp);
    let s = sharp(&lp).unwrap();
    let phi = (0..3)
        .map(|i| (0..3).map(|j| s[j][i].clone()).collect())
        .collect();
    let p = Prolongation::anchored(&t, &cot, phi).unwrap();
    assert!(p.total().check_axioms().passed());
}

fn cotangent_algebroid(t: &AlgebroidData, pi: &Multivector) -> AlgebroidData {
    let n = t.dim();
    let s = sharp(pi).unwrap();
    let anchor: Vec<Vec<Expr>> = (0..n)
        .map(|i| (0..n).map(|j| s[j][i].clone()).collect())
        .collect();
    let mut br = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let v =
                algebroid_core::calculus::induced_dual_bracket(t, pi, &e(t, i), &e(t, j)).unwrap();
            br.push(((i, j), v));
        }
    }
    AlgebroidData::new(t.chart().clone(), anchor, &br)
        .unwrap()
        .verified()
        .unwrap()
}

#[test]
fn im_cocycle_cases() {
    let t2 = catalog::tangent_rn(2);
    let sympl = Multivector::bivector(2, &[(0, 1, int(1))]);
    assert!(verify_im_cocycle(&t2, &sympl).unwrap().passed());

    let t3 = catalog::tangent_rn(3);
    let lp = Multivector::bivector(
        3,
        &[
            (0, 1, Expr::var(2)),
            (1, 2, Expr::var(0)),
            (2, 0, Expr::var(1)),
        ],
    );
    let rep = verify_im_cocycle(&t3, &lp).unwrap();
    assert!(rep.passed(), "{:?}", rep.residuals.first());

    // symmetric "π" with π(dx, dy) = π(dy, dx) = 1
    let sym = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
    let rep = verify_im_cocycle_sharp(&t2, &sym, &default_test_forms(&t2)).unwrap();
    assert_eq!(rep.failing_cases(), vec![PairingCase::CoreCore]);

    let so3pi = Multivector::bivector(3, &[(0, 1, int(1))]);
    assert!(verify_im_cocycle(&catalog::so3(), &so3pi).is_err());
}

#[test]
fn omega_can_closed_for_dual_of_action() {
    let a = catalog::so3_action();
    let p = build_pullback(&a, BundleChart::dual(&a)).unwrap();
    let om = canonical_two_form(&p).unwrap();
    assert!(d(p.total(), &om).unwrap().is_zero());
    assert_eq!(om.degree(), 2);
}
