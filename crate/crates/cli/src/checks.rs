use algebroid_core::algebroid::AlgebroidData;
use algebroid_core::calculus::{
    check_triangular, combinations, d, AForm, Alternating, Multivector,
};
use algebroid_core::geometry::{
    check_coisotropic_lagrangian, check_minimal_lagrangian, check_transversal, graph_coisotropic,
    linearize, nonlinearizability_scan, product_grid, weinstein_rank_scan, zero_section, Certainty,
    GeometryError, ScanOptions, SubmanifoldSpec,
};
use algebroid_core::pullback::{check_canonical_form, verify_im_cocycle, PullbackError};
use algebroid_core::symexpr::{Chart, Expr, Rational};
use algebroid_moser::{
    exterior_derivative, first_derivatives_on, moser_flow, poincare_primitive, sample_form,
    verify_local_model_numeric, write_grid_dump, MoserError, MoserResult, NumericField, Region,
    DEFAULT_TOLERANCE,
};
use serde_json::{json, Map, Value};

use crate::catalog::CheckInfo;
use crate::report::{CheckResult, Residual, Status};
use crate::scenario::{Numeric, World};

/// `φ|_L` must be the identity to this accuracy.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// Environment variable holding the default numeric tolerance.
pub const TOLERANCE_ENV: &str = "ALGEBROID_TOL";

/// Most disagreeing samples listed in a report.
const LISTED_SAMPLES: usize = 20;

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub grid: Option<usize>,
    pub tolerance: Option<f64>,
}

/// Shared inputs of one run.
pub struct Context<'a> {
    pub world: &'a World,
    pub overrides: &'a Overrides,
    /// `Some(summary)` when the algebroid axioms fail.
    pub broken_axioms: Option<String>,
}

fn render_vec(chart: &Chart, v: &[Expr]) -> String {
    format!(
        "[{}]",
        v.iter()
            .map(|e| chart.render(e))
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn render_point(p: &[Rational]) -> String {
    format!(
        "({})",
        p.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn frame_index(idx: &[usize]) -> String {
    idx.iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn nonzero_components(out: &mut CheckResult, chart: &Chart, label: &str, a: &Alternating) {
    for (idx, v) in a.components() {
        if !v.is_zero() {
            out.residuals.push(Residual::symbolic(
                format!("{}[{}]", label, frame_index(idx)),
                chart.render(v),
            ));
        }
    }
}

fn submanifold_label(l: &SubmanifoldSpec) -> String {
    let names: Vec<String> = l
        .normal()
        .iter()
        .map(|&i| format!("{}=0", l.chart().name(i)))
        .collect();
    if names.is_empty() {
        "everything".into()
    } else {
        names.join(", ")
    }
}

fn is_tangent(a: &AlgebroidData) -> bool {
    *a == AlgebroidData::tangent(a.chart().clone())
}

pub fn run(info: &'static CheckInfo, ctx: &Context<'_>) -> CheckResult {
    let mut out = CheckResult::new(info);
    let needs_axioms = !matches!(info.name, "axioms" | "differential-square");
    if needs_axioms {
        if let Some(summary) = &ctx.broken_axioms {
            out.stop(
                Status::Fail,
                "axioms fail",
                format!("algebroid axioms fail: {}", summary),
            );
            return out;
        }
    }
    let w = ctx.world;
    match info.name {
        "axioms" => axioms(&mut out, w),
        "differential-square" => differential_square(&mut out, w),
        "triangular" => triangular(&mut out, w),
        "canonical-form" => canonical_form(&mut out, w),
        "im-cocycle" => im_cocycle(&mut out, w),
        "closed-one-form-lagrangian" => closed_one_forms(&mut out, w),
        "cosymplectic" => cosymplectic(&mut out, w),
        "transversal" => transversal(&mut out, w),
        "coisotropic" => coisotropic(&mut out, w),
        "minimal-lagrangian" => minimal_lagrangian(&mut out, w),
        "linearization" => linearization(&mut out, w),
        "nonlinearizability" => nonlinearizability(&mut out, w),
        "split-rank" => split_rank(&mut out, w),
        "poincare" => poincare(&mut out, ctx),
        "moser" => moser(&mut out, ctx),
        "local-model" => local_model(&mut out, ctx),
        other => out.stop(
            Status::Error,
            "unknown",
            format!("no implementation for {}", other),
        ),
    }
    out
}

fn axioms(out: &mut CheckResult, w: &World) {
    let rep = w.algebroid.check_axioms();
    for ((i, j, k), v) in &rep.jacobiator {
        out.residuals.push(Residual::symbolic(
            format!("Jacobiator(e{},e{},e{})", i + 1, j + 1, k + 1),
            render_vec(&w.chart, v),
        ));
    }
    for ((i, j), v) in &rep.anchor_residual {
        out.residuals.push(Residual::symbolic(
            format!("ρ[e{},e{}] − [ρe{},ρe{}]", i + 1, j + 1, i + 1, j + 1),
            render_vec(&w.chart, v),
        ));
    }
    out.settle("Lie algebroid", "axioms fail");
}

/// `d²` of `f ε^I` for every frame multi-index `I` and the coefficients
/// `1`, `x_a` and `x_a²`.
fn differential_square(out: &mut CheckResult, w: &World) {
    let a = &w.algebroid;
    let (r, n) = (a.rank(), a.dim());
    let mut coeffs = vec![("1".to_string(), Expr::one())];
    for i in 0..n {
        let x = Expr::var(i);
        coeffs.push((w.chart.name(i), x.clone()));
        coeffs.push((format!("{}²", w.chart.name(i)), &x * &x));
    }
    let mut checked = 0usize;
    for q in 0..=r.saturating_sub(2) {
        for idx in combinations(r, q) {
            for (label, f) in &coeffs {
                let form = AForm(Alternating::from_components(
                    r,
                    q,
                    vec![(idx.clone(), f.clone())],
                ));
                let dd = d(a, &form).and_then(|f1| d(a, &f1));
                checked += 1;
                match dd {
                    Ok(dd) => nonzero_components(
                        out,
                        &w.chart,
                        &format!("d²({} ε[{}])", label, frame_index(&idx)),
                        &dd.0,
                    ),
                    Err(e) => {
                        out.stop(Status::Error, "error", e.to_string());
                        return;
                    }
                }
            }
        }
    }
    out.detail("forms_checked", checked);
    out.settle("d² = 0", "d² ≠ 0");
}

fn bivector(w: &World) -> &Multivector {
    w.bivector.as_ref().expect("prerequisite checked")
}

fn triangular(out: &mut CheckResult, w: &World) {
    let pi = bivector(w);
    let rep = match check_triangular(&w.algebroid, pi) {
        Ok(r) => r,
        Err(e) => return out.stop(Status::Error, "error", e.to_string()),
    };
    nonzero_components(out, &w.chart, "[π,π]", &rep.schouten_square.0);
    for ((i, j), v) in &rep.sharp_morphism_residual {
        out.residuals.push(Residual::symbolic(
            format!("π♯[ε{},ε{}]_π − [π♯ε{},π♯ε{}]", i + 1, j + 1, i + 1, j + 1),
            render_vec(&w.chart, v),
        ));
    }
    out.detail("triangular", rep.triangular());
    out.detail("sharp_is_morphism", rep.sharp_is_morphism());
    out.detail("exact", rep.exact());
    let fail = if rep.exact() {
        "exact, not triangular"
    } else {
        "not triangular"
    };
    out.settle("triangular", fail);
}

fn pullback_failure(out: &mut CheckResult, e: PullbackError) {
    match e {
        PullbackError::Inconsistent(m) => out.stop(Status::Fail, "precondition fails", m),
        e => out.stop(Status::Error, "error", e.to_string()),
    }
}

fn canonical_form(out: &mut CheckResult, w: &World) {
    let rep = match check_canonical_form(&w.algebroid) {
        Ok(r) => r,
        Err(e) => return pullback_failure(out, e),
    };
    let chart = dual_chart(w);
    nonzero_components(out, &chart, "dω_can", &rep.d_omega.0);
    if !rep.unimodular() {
        out.residuals.push(Residual::symbolic(
            "det ω_can ∓ 1",
            chart.render(&rep.determinant),
        ));
    }
    for m in &rep.generator_mismatches {
        out.residuals.push(Residual::symbolic(
            m.clone(),
            "differs from the lift formula",
        ));
    }
    nonzero_components(out, &chart, "π_ω − π_lin", &rep.bivector_difference.0);
    out.detail("omega_can", rep.omega.0.render(&chart));
    out.settle("canonical", "identity fails");
}

fn dual_chart(w: &World) -> Chart {
    algebroid_core::pullback::dual_linear_poisson(&w.algebroid).0
}

fn im_cocycle(out: &mut CheckResult, w: &World) {
    let rep = match verify_im_cocycle(&w.algebroid, bivector(w)) {
        Ok(r) => r,
        Err(e) => return pullback_failure(out, e),
    };
    let chart = dual_chart(w);
    for (case, label, v) in &rep.residuals {
        out.residuals.push(Residual::symbolic(
            format!("{} {}", case.name(), label),
            chart.render(v),
        ));
    }
    let mut checked = Map::new();
    for (case, n) in &rep.checked {
        checked.insert(case.name().to_string(), json!(n));
    }
    out.detail("pairs_checked", Value::Object(checked));
    out.detail(
        "failing_cases",
        rep.failing_cases()
            .iter()
            .map(|c| c.name())
            .collect::<Vec<_>>(),
    );
    out.settle("cocycle", "cocycle fails");
}

fn closed_one_forms(out: &mut CheckResult, w: &World) {
    let a = &w.algebroid;
    let mut rows = Vec::new();
    for (k, alpha) in w.one_forms.iter().enumerate() {
        let closed = match d(a, &AForm::one_form(alpha.clone())) {
            Ok(f) => f.is_zero(),
            Err(e) => return out.stop(Status::Error, "error", e.to_string()),
        };
        let lagrangian = match graph_coisotropic(a, alpha) {
            Ok(v) => v,
            Err(e) => return out.stop(Status::Rejected, "rejected", e.to_string()),
        };
        if closed != lagrangian {
            out.residuals.push(Residual::symbolic(
                format!("one-form {}", k + 1),
                format!("closed = {}, graph Lagrangian = {}", closed, lagrangian),
            ));
        }
        rows.push(json!({
            "form": render_vec(&w.chart, alpha),
            "closed": closed,
            "lagrangian": lagrangian,
        }));
    }
    out.detail("forms", rows);
    out.settle("closed ⇔ Lagrangian", "biconditional fails");
}

fn cosymplectic(out: &mut CheckResult, w: &World) {
    let c = w.cosymplectic.as_ref().expect("prerequisite checked");
    let rep = match c.verify(None) {
        Ok(r) => r,
        Err(e) => return out.stop(Status::Error, "error", e.to_string()),
    };
    for (j, f) in rep.d_alphas.iter().enumerate() {
        nonzero_components(out, &w.chart, &format!("dα{}", j + 1), &f.0);
    }
    nonzero_components(out, &w.chart, "dω", &rep.d_omega.0);
    if !rep.nondegenerate() {
        out.residuals.push(Residual::symbolic("det ♭", "0"));
    }
    for (p, r) in &rep.omega_rank_samples {
        if let Some(r) = r {
            if *r != rep.expected_omega_rank {
                out.residuals.push(Residual::symbolic(
                    format!("rank ω at {}", render_point(p)),
                    format!("{} (expected {})", r, rep.expected_omega_rank),
                ));
            }
        }
    }
    if let Some(locus) = &rep.degeneracy_locus {
        out.detail("degeneracy_locus", w.chart.render(locus));
    }
    if rep.passed() {
        match c.reeb_sections() {
            Ok(rs) => out.detail(
                "reeb",
                rs.iter()
                    .map(|s| render_vec(&w.chart, s))
                    .collect::<Vec<_>>(),
            ),
            Err(e) => return out.stop(Status::Fail, "no Reeb sections", e.to_string()),
        }
        match c.underlying_bivector() {
            Ok(pi) => out.detail("bivector", pi.0.render(&w.chart)),
            Err(e) => return out.stop(Status::Error, "error", e.to_string()),
        }
        match c.underlying_schouten_square() {
            Ok(sq) => nonzero_components(out, &w.chart, "[π,π]", &sq.0),
            Err(e) => return out.stop(Status::Error, "error", e.to_string()),
        }
    }
    out.settle("cosymplectic", "not cosymplectic");
}

/// Per-submanifold verdict keywords, joined for the summary line.
fn summarize(out: &mut CheckResult, verdicts: &[(String, String)], sampled: bool) {
    out.status = if sampled {
        Status::Sampled
    } else {
        Status::Pass
    };
    out.verdict = verdicts
        .iter()
        .map(|(n, v)| format!("{}: {}", n, v))
        .collect::<Vec<_>>()
        .join("; ");
}

fn certainty(c: Certainty) -> &'static str {
    match c {
        Certainty::Exact => "exact",
        Certainty::Sampled => "sampled",
    }
}

fn transversal(out: &mut CheckResult, w: &World) {
    let mut verdicts = Vec::new();
    let mut sampled = false;
    for (name, l) in &w.submanifolds {
        let rep = check_transversal(&w.algebroid, l);
        sampled |= rep.certainty == Certainty::Sampled;
        let keyword = if rep.transversal() {
            "transversal"
        } else {
            "not transversal"
        };
        out.detail(
            name,
            json!({
                "submanifold": submanifold_label(l),
                "transversal": rep.transversal(),
                "normal_rank": rep.normal_rank,
                "codim": rep.codim,
                "certainty": certainty(rep.certainty),
                "witness": rep.witness,
            }),
        );
        verdicts.push((name.clone(), keyword.to_string()));
    }
    summarize(out, &verdicts, sampled);
}

fn coisotropic(out: &mut CheckResult, w: &World) {
    let pi = bivector(w);
    let mut verdicts = Vec::new();
    let mut sampled = false;
    for (name, l) in &w.submanifolds {
        let rep = match check_coisotropic_lagrangian(&w.algebroid, pi, l) {
            Ok(r) => r,
            Err(e) => return out.stop(Status::Rejected, "rejected", format!("{}: {}", name, e)),
        };
        sampled |= rep.certainty == Certainty::Sampled;
        let keyword = if rep.lagrangian {
            "Lagrangian"
        } else if rep.coisotropic {
            "coisotropic"
        } else {
            "not coisotropic"
        };
        out.detail(
            name,
            json!({
                "submanifold": submanifold_label(l),
                "coisotropic": rep.coisotropic,
                "lagrangian": rep.lagrangian,
                "certainty": certainty(rep.certainty),
                "coisotropic_downstairs": rep.coisotropic_downstairs,
                "lagrangian_at_samples": rep.lagrangian_at_samples,
                "notes": rep.notes,
            }),
        );
        verdicts.push((name.clone(), keyword.to_string()));
    }
    summarize(out, &verdicts, sampled);
}

fn minimal_lagrangian(out: &mut CheckResult, w: &World) {
    let c = w.cosymplectic.as_ref().expect("prerequisite checked");
    let mut verdicts = Vec::new();
    for (name, l) in &w.submanifolds {
        let (keyword, detail) = match check_minimal_lagrangian(c, l) {
            Ok(rep) => {
                let keyword = if rep.minimal() {
                    "minimal Lagrangian"
                } else if rep.lagrangian {
                    "Lagrangian, forms do not vanish"
                } else {
                    "not Lagrangian"
                };
                let detail = json!({
                    "submanifold": submanifold_label(l),
                    "lagrangian": rep.lagrangian,
                    "minimal": rep.minimal(),
                    "pulled_alphas": rep.pulled_alphas.iter().map(|v| render_vec(&w.chart, v)).collect::<Vec<_>>(),
                    "pulled_omega": rep.pulled_omega.iter().map(|v| render_vec(&w.chart, v)).collect::<Vec<_>>(),
                });
                (keyword, detail)
            }
            Err(GeometryError::NotTransversal(m)) => (
                "not transversal",
                json!({ "submanifold": submanifold_label(l), "reason": m }),
            ),
            Err(e) => return out.stop(Status::Rejected, "rejected", format!("{}: {}", name, e)),
        };
        out.detail(name, detail);
        verdicts.push((name.clone(), keyword.to_string()));
    }
    summarize(out, &verdicts, false);
}

fn require_tangent(out: &mut CheckResult, w: &World) -> bool {
    if is_tangent(&w.algebroid) {
        return true;
    }
    out.stop(
        Status::Rejected,
        "rejected",
        "needs the tangent algebroid of the chart (algebroid kind \"tangent\")",
    );
    false
}

fn linearization(out: &mut CheckResult, w: &World) {
    if !require_tangent(out, w) {
        return;
    }
    let pi = bivector(w);
    let res = match linearize(&w.chart, pi) {
        Ok(r) => r,
        Err(e) => return out.stop(Status::Rejected, "rejected", e.to_string()),
    };
    let zero = zero_section(&w.chart);
    let cois = match check_coisotropic_lagrangian(&w.algebroid, pi, &zero) {
        Ok(r) => r.coisotropic,
        Err(e) => return out.stop(Status::Error, "error", e.to_string()),
    };
    out.detail("zero_section_coisotropic", cois);
    let mut powers = Map::new();
    for (idx, p) in &res.lowest_powers {
        powers.insert(
            idx.iter()
                .map(|&i| w.chart.name(i))
                .collect::<Vec<_>>()
                .join("∧"),
            json!(p),
        );
    }
    out.detail("lowest_powers", Value::Object(powers));
    match &res.linearized {
        None => {
            let names: Vec<String> = res
                .divergent
                .iter()
                .map(|idx| {
                    idx.iter()
                        .map(|&i| w.chart.name(i))
                        .collect::<Vec<_>>()
                        .join("∧")
                })
                .collect();
            out.detail("divergent", names);
            if cois {
                out.residuals.push(Residual::symbolic(
                    "divergence with a coisotropic zero section",
                    "limit diverges",
                ));
                out.settle("", "inconsistent");
            } else {
                out.status = Status::Diverged;
                out.verdict = "diverges".into();
            }
        }
        Some(lin) => {
            out.detail("linearized", lin.0.render(&w.chart));
            if !cois {
                out.residuals.push(Residual::symbolic(
                    "limit exists with a non-coisotropic zero section",
                    "zero section not coisotropic",
                ));
            }
            match linearize(&w.chart, lin) {
                Ok(again) if again.linearized.as_ref() == Some(lin) => {}
                Ok(_) => out
                    .residuals
                    .push(Residual::symbolic("λ m_λ^*π_lin − π_lin", "nonzero")),
                Err(e) => return out.stop(Status::Error, "error", e.to_string()),
            }
            let keyword = if lin == pi {
                "already linear"
            } else {
                "linearizable"
            };
            out.settle(keyword, "inconsistent");
        }
    }
}

fn nonlinearizability(out: &mut CheckResult, w: &World) {
    if !require_tangent(out, w) {
        return;
    }
    let rep = match nonlinearizability_scan(&w.chart, bivector(w), &ScanOptions::default()) {
        Ok(r) => r,
        Err(e) => return out.stop(Status::Rejected, "rejected", e.to_string()),
    };
    if !rep.ranks_even() {
        out.residuals.push(Residual::symbolic(
            "odd rank",
            "π is not skew at some sample",
        ));
    }
    for (label, pc) in [("pair", &rep.pair), ("linear", &rep.linear)] {
        for p in pc.mismatches.iter().take(LISTED_SAMPLES) {
            out.residuals.push(Residual::symbolic(
                format!("{} singular-set mismatch", label),
                render_point(p),
            ));
        }
    }
    out.detail("summary", rep.summary());
    out.detail("generic_rank", rep.generic_rank);
    out.detail("samples", rep.samples.len());
    out.detail(
        "singular_samples",
        rep.singular_points()
            .iter()
            .map(|p| render_point(p))
            .collect::<Vec<_>>(),
    );
    out.detail("tangent_mismatch", rep.tangent_mismatch());
    out.settle(rep.verdict.keyword(), "scan inconsistent");
}

fn split_rank(out: &mut CheckResult, w: &World) {
    let (split, values) = w.split.as_ref().expect("prerequisite checked");
    let s = split.transverse_dim();
    let grid = product_grid(&vec![values.clone(); 2 * s]);
    let points: Vec<(Vec<Rational>, Vec<Rational>)> = grid
        .into_iter()
        .map(|p| (p[..s].to_vec(), p[s..].to_vec()))
        .collect();
    let rep = match weinstein_rank_scan(split, &points) {
        Ok(r) => r,
        Err(e) => return out.stop(Status::Rejected, "rejected", e.to_string()),
    };
    for d in rep.disagreements().into_iter().take(LISTED_SAMPLES) {
        out.residuals.push(Residual::symbolic(
            format!("y = {}, w = {}", render_point(&d.y), render_point(&d.w)),
            format!("formula {} ≠ direct {}", d.formula_rank, d.direct_rank),
        ));
    }
    out.detail("rank_at_origin", rep.rank_at_origin);
    out.detail("samples", rep.samples.len());
    out.detail("disagreements", rep.disagreements().len());
    out.settle("formula agrees", "formula disagrees");
}

fn numeric<'a>(ctx: &Context<'a>) -> &'a Numeric {
    ctx.world.numeric.as_ref().expect("prerequisite checked")
}

/// Tolerance precedence: command line, scenario, environment, default.
pub fn tolerance(ctx: &Context<'_>) -> f64 {
    ctx.overrides
        .tolerance
        .or(numeric(ctx).tolerance)
        .or_else(|| {
            std::env::var(TOLERANCE_ENV)
                .ok()
                .and_then(|v| v.trim().parse().ok())
        })
        .unwrap_or(DEFAULT_TOLERANCE)
}

fn field(ctx: &Context<'_>) -> Result<NumericField, MoserError> {
    let n = numeric(ctx);
    let grid = ctx.overrides.grid.unwrap_or(n.grid);
    let mut f = NumericField::cube(ctx.world.chart.len(), n.half_width.clone(), grid)?;
    if let Some(step) = &n.step {
        f = f.with_step(step.clone())?;
    }
    f.with_tolerance(tolerance(ctx))
}

fn moser_failure(out: &mut CheckResult, e: MoserError) {
    let status = match &e {
        MoserError::Unsupported(_) | MoserError::InvalidField(_) => Status::Rejected,
        MoserError::Io(_) | MoserError::Dump(_) => Status::Error,
        _ => Status::Fail,
    };
    let verdict = if status == Status::Fail {
        "flow fails"
    } else {
        "rejected"
    };
    out.stop(status, verdict, e.to_string());
}

fn field_details(out: &mut CheckResult, f: &NumericField) {
    out.detail("grid", f.resolution());
    out.detail("step", f.step().to_string());
    out.detail("tolerance", f.tolerance());
}

fn poincare(out: &mut CheckResult, ctx: &Context<'_>) {
    let n = numeric(ctx);
    let omega = n.form.as_ref().expect("prerequisite checked");
    let l = &n.submanifold;
    let f = match field(ctx) {
        Ok(f) => f,
        Err(e) => return moser_failure(out, e),
    };
    field_details(out, &f);
    let phi = match poincare_primitive::<f64>(omega, l, &f) {
        Ok(p) => p,
        Err(e) => return moser_failure(out, e),
    };
    let tol = f.tolerance();
    let res = exterior_derivative(&phi).max_difference(&sample_form(omega, &f), Region::All);
    out.residuals.push(Residual::numeric("‖dφ − ω‖∞", res, tol));
    let vanishes = omega.components().all(|(_, v)| l.restrict(v).is_zero());
    if vanishes {
        let flat = first_derivatives_on(phi.values(), l.normal());
        out.residuals
            .push(Residual::numeric("max |∂φ| on L", flat, tol));
    }
    out.detail("form_vanishes_on_L", vanishes);
    out.settle("primitive", "residual above tolerance");
}

fn moser_residuals(out: &mut CheckResult, r: &MoserResult<f64>) {
    let tol = r.field.tolerance();
    out.residuals.push(Residual::numeric(
        "‖φ^*ω̃ − ω − Σ d(Fα)‖∞",
        r.omega_residual,
        tol,
    ));
    for (j, a) in r.alpha_residuals.iter().enumerate() {
        out.residuals.push(Residual::numeric(
            format!("‖φ^*α̃{} − α{}‖∞", j + 1, j + 1),
            *a,
            tol,
        ));
    }
    out.residuals.push(Residual::numeric(
        "max |φ − id| on L",
        r.identity_on_l,
        IDENTITY_TOLERANCE,
    ));
    out.detail("steps", r.steps);
    out.detail("escaped_nodes", r.diagnostics.escaped_nodes);
    out.detail("min_pivot", crate::report::number(r.diagnostics.min_pivot));
    out.detail("step1_skipped", r.diagnostics.step1_skipped);
}

/// Writes the flow map when the scenario names a dump file.
fn dump_flow(out: &mut CheckResult, n: &Numeric, r: &MoserResult<f64>) {
    let Some(path) = &n.dump else { return };
    out.detail("dump", path.display().to_string());
    let written = std::fs::File::create(path)
        .map_err(MoserError::from)
        .and_then(|f| {
            let mut w = std::io::BufWriter::new(f);
            write_grid_dump(&mut w, &r.flow)?;
            std::io::Write::flush(&mut w).map_err(MoserError::from)
        });
    if let Err(e) = written {
        moser_failure(out, e);
    }
}

fn moser(out: &mut CheckResult, ctx: &Context<'_>) {
    let w = ctx.world;
    let n = numeric(ctx);
    let c = w.cosymplectic.as_ref().expect("prerequisite checked");
    let target = n.target.as_ref().expect("prerequisite checked");
    let f = match field(ctx) {
        Ok(f) => f,
        Err(e) => return moser_failure(out, e),
    };
    field_details(out, &f);
    match moser_flow::<f64>(c, target, &n.submanifold, &f) {
        Ok(r) => {
            moser_residuals(out, &r);
            out.settle("flow found", "residual above tolerance");
            dump_flow(out, n, &r);
        }
        Err(e) => moser_failure(out, e),
    }
}

fn local_model(out: &mut CheckResult, ctx: &Context<'_>) {
    let w = ctx.world;
    let n = numeric(ctx);
    let c = w.cosymplectic.as_ref().expect("prerequisite checked");
    let f = match field(ctx) {
        Ok(f) => f,
        Err(e) => return moser_failure(out, e),
    };
    field_details(out, &f);
    match verify_local_model_numeric::<f64>(c, &n.submanifold, &f) {
        Ok(run) => {
            let names: Vec<String> = run.model_chart.names();
            out.detail("model_chart", names);
            out.detail(
                "chart_map",
                run.linear_map
                    .iter()
                    .map(|e| run.model_chart.render(e))
                    .collect::<Vec<_>>(),
            );
            out.detail("model_omega", run.model.omega().0.render(&run.model_chart));
            moser_residuals(out, &run.result);
            out.settle("matches the model", "residual above tolerance");
            dump_flow(out, n, &run.result);
        }
        Err(e) => moser_failure(out, e),
    }
}
