mod common;

use algebroid_core::algebroid::{catalog, vf_bracket, AlgebroidData, AlgebroidError};
use algebroid_core::symexpr::{int, parse, Chart, Expr};
use common::*;

#[test]
fn standard_algebroids_pass_axioms() {
    for a in [
        catalog::so3(),
        catalog::tangent_rn(1),
        catalog::tangent_rn(2),
        catalog::tangent_rn(3),
        catalog::log_tangent_r2(),
        catalog::so3_action(),
    ] {
        assert!(a.check_axioms().passed(), "{:?}", a.chart());
        assert!(a.axioms_verified());
    }
}

#[test]
fn broken_jacobi_reports_nonzero_jacobiator() {
    let a = catalog::broken_jacobi().unwrap();
    let rep = a.check_axioms();
    assert!(!rep.passed());
    assert_eq!(rep.jacobiator.len(), 1);
    assert_eq!(rep.jacobiator[0].0, (0, 1, 2));
    assert_eq!(rep.jacobiator[0].1, vec![int(1), int(0), int(0)]);
    assert!(matches!(a.verified(), Err(AlgebroidError::AxiomsFailed(_))));
}

#[test]
fn non_antisymmetric_table_is_rejected_at_construction() {
    let mut c = vec![vec![vec![Expr::zero(); 2]; 2]; 2];
    c[0][1][0] = int(1);
    c[1][0][0] = int(1);
    let err = AlgebroidData::from_full_table(Chart::default(), vec![vec![], vec![]], c);
    assert!(matches!(
        err,
        Err(AlgebroidError::NotAntisymmetric { i: 0, j: 1, k: 0 })
    ));
}

#[test]
fn anchor_failing_morphism_is_reported() {
    // ρ(e1) = ∂x, ρ(e2) = x∂y with commuting frame: [ρe1, ρe2] = ∂y ≠ 0.
    let chart = Chart::base(&["x", "y"]);
    let anchor = vec![vec![int(1), int(0)], vec![int(0), Expr::var(0)]];
    let a = AlgebroidData::new(chart, anchor, &[]).unwrap();
    let rep = a.check_axioms();
    assert_eq!(rep.anchor_residual, vec![((0, 1), vec![int(0), int(-1)])]);
}

#[test]
fn section_bracket_leibniz_example() {
    let a = catalog::tangent_rn(2);
    let c = a.chart().clone();
    let v = vec![parse("y", &c).unwrap(), int(0)];
    let w = vec![int(0), parse("x", &c).unwrap()];
    // [y∂x, x∂y] = y∂y − x∂x
    assert_eq!(
        a.bracket(&v, &w).unwrap(),
        vec![parse("-x", &c).unwrap(), parse("y", &c).unwrap()]
    );
    assert!(a.bracket(&v, &[int(1)]).is_err());
}

#[test]
fn frame_change_preserves_axioms_and_anchor_relation() {
    let mut r = rng(7);
    for _ in 0..20 {
        let a = random_algebroid(&mut r, 4, 2);
        assert!(a.check_axioms().passed());
        for i in 0..a.rank() {
            for j in 0..a.rank() {
                let lhs = a.anchor_of(a.frame_bracket(i, j));
                let rhs = vf_bracket(&a.anchor()[i], &a.anchor()[j]);
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn restriction_to_subframe() {
    // span(e1, e2) in so(3) ⊕ ... is not closed; span of e3 alone is.
    let a = catalog::so3();
    assert!(a
        .restrict_to_frame(&[a.frame_section(0), a.frame_section(1)])
        .is_err());
    let (_, c) = a.restrict_to_frame(&[a.frame_section(2)]).unwrap();
    assert!(c[0][0][0].is_zero());
    let t = catalog::tangent_rn(3);
    let (anchors, _) = t
        .restrict_to_frame(&[t.frame_section(0), t.frame_section(1)])
        .unwrap();
    assert_eq!(anchors[1], vec![int(0), int(1), int(0)]);
}
