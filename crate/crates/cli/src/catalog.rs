//! The named checks, in report order.

/// Scenario data a check cannot run without.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Needs {
    Bivector,
    Cosymplectic,
    Submanifolds,
    OneForms,
    Split,
    Numeric,
    Target,
    Form,
    FibreChart,
}

impl Needs {
    pub fn describe(&self) -> &'static str {
        match self {
            Needs::Bivector => "a bivector",
            Needs::Cosymplectic => "a cosymplectic block",
            Needs::Submanifolds => "at least one submanifold",
            Needs::OneForms => "one_forms",
            Needs::Split => "a split block",
            Needs::Numeric => "a numeric block",
            Needs::Target => "a numeric target structure",
            Needs::Form => "a numeric form",
            Needs::FibreChart => "fibre coordinates in the chart",
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct CheckInfo {
    pub name: &'static str,
    /// Library operation the check runs.
    pub operation: &'static str,
    /// The identity or property the check asserts.
    pub asserts: &'static str,
    pub needs: &'static [Needs],
}

use Needs::*;

pub static CATALOG: &[CheckInfo] = &[
    CheckInfo {
        name: "axioms",
        operation: "check_axioms",
        asserts: "the frame bracket satisfies the Jacobi identity and the anchor is a bracket morphism",
        needs: &[],
    },
    CheckInfo {
        name: "differential-square",
        operation: "d",
        asserts: "the algebroid differential squares to zero on coordinate-weighted frame forms",
        needs: &[],
    },
    CheckInfo {
        name: "triangular",
        operation: "check_triangular",
        asserts: "[π,π] = 0, equivalently π♯ intertwines the induced bracket on A* with the bracket on A",
        needs: &[Bivector],
    },
    CheckInfo {
        name: "canonical-form",
        operation: "check_canonical_form",
        asserts: "ω_can = −dλ_can is closed, unimodular, matches the lift formula and induces the linear Poisson structure on A*",
        needs: &[],
    },
    CheckInfo {
        name: "im-cocycle",
        operation: "verify_im_cocycle",
        asserts: "ω_can is an IM cocycle: linear-linear, linear-core and core-core pairings vanish",
        needs: &[Bivector],
    },
    CheckInfo {
        name: "closed-one-form-lagrangian",
        operation: "graph_coisotropic",
        asserts: "the graph of a one-form is Lagrangian in A* exactly when the form is closed",
        needs: &[OneForms],
    },
    CheckInfo {
        name: "cosymplectic",
        operation: "CosymplecticData::verify",
        asserts: "the forms are closed and nondegenerate, Reeb sections exist and the underlying bivector squares to zero",
        needs: &[Cosymplectic],
    },
    CheckInfo {
        name: "transversal",
        operation: "check_transversal",
        asserts: "L is transverse to the anchor, so the pullback algebroid over L exists",
        needs: &[Submanifolds],
    },
    CheckInfo {
        name: "coisotropic",
        operation: "check_coisotropic_lagrangian",
        asserts: "coisotropic and Lagrangian verdicts for L with respect to the bivector",
        needs: &[Bivector, Submanifolds],
    },
    CheckInfo {
        name: "minimal-lagrangian",
        operation: "check_minimal_lagrangian",
        asserts: "L is a Lagrangian transversal on which every structure form pulls back to zero",
        needs: &[Cosymplectic, Submanifolds],
    },
    CheckInfo {
        name: "linearization",
        operation: "linearize",
        asserts: "λ m_λ^*π converges exactly when the zero section is coisotropic, and the limit is fibrewise linear",
        needs: &[Bivector, FibreChart],
    },
    CheckInfo {
        name: "nonlinearizability",
        operation: "nonlinearizability_scan",
        asserts: "a singular point of π obstructs linearizing the pair groupoid around the diagonal",
        needs: &[Bivector],
    },
    CheckInfo {
        name: "split-rank",
        operation: "weinstein_rank_scan",
        asserts: "the rank of π_lin in split coordinates equals 2·rk π(0) plus the rank of the transverse block",
        needs: &[Split],
    },
    CheckInfo {
        name: "poincare",
        operation: "poincare_primitive",
        asserts: "the relative homotopy primitive φ satisfies dφ = ω and is flat along L where ω vanishes",
        needs: &[Numeric, Form],
    },
    CheckInfo {
        name: "moser",
        operation: "moser_flow",
        asserts: "the Moser flow pulls the target structure back to the given one and fixes L",
        needs: &[Cosymplectic, Numeric, Target],
    },
    CheckInfo {
        name: "local-model",
        operation: "verify_local_model_numeric",
        asserts: "near a minimal Lagrangian transversal the structure is isomorphic to its standard model",
        needs: &[Cosymplectic, Numeric],
    },
];

pub fn find(name: &str) -> Option<&'static CheckInfo> {
    CATALOG.iter().find(|c| c.name == name)
}

/// Position in report order.
pub fn position(info: &CheckInfo) -> usize {
    CATALOG
        .iter()
        .position(|c| c.name == info.name)
        .expect("catalog entry")
}
