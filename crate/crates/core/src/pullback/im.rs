//! Infinitesimally multiplicative cocycle of `ω_can` on the prolongation
//! `T_A A*` anchored to `T A` by `π♯`.
//!
//! Elements are described over the chart `(x, v, w)` of `A ⊕ A`. The
//! generators are linear sections `T²α` and the two core sections `α̂⁽¹⁾`,
//! `α̂⁽²⁾` for `α ∈ Γ(A*)`, with cocycle values
//!
//! ```text
//! c(T²α) = −(d_A α)(v, w),   c(α̂⁽¹⁾) = −⟨α, w⟩,   c(α̂⁽²⁾) = ⟨α, v⟩,
//! ```
//!
//! anchors `ϱ(T²α)` = the linear vector field of `u = π♯α` on both copies,
//! `ϱ(α̂⁽¹⁾) = u` along `v`, `ϱ(α̂⁽²⁾) = u` along `w`, and brackets
//! `[T²α, T²β] = T²[α,β]`, `[T²α, β̂⁽ⁱ⁾] = [α,β]⁽ⁱ⁾`, core-core zero, where
//! `[α, β] = L_{π♯α} β − ι_{π♯β} d_A α`. For a skew `π` this is the induced
//! bracket; accepting a raw `π♯` matrix lets the core-core case detect a
//! failure of skew-symmetry. The cocycle condition checked on every pair is
//! `c([X, Y]) = ϱ(X) c(Y) − ϱ(Y) c(X)`.

use super::PullbackError;
use crate::algebroid::{vf_apply, AlgebroidData, Section};
use crate::calculus::{
    check_triangular, d, evaluate_form, interior, lie_derivative_form, pairing, sharp, AForm,
    Multivector,
};
use crate::symexpr::Expr;

/// The three kinds of generator pairings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairingCase {
    LinearLinear,
    LinearCore,
    CoreCore,
}

impl PairingCase {
    pub fn name(&self) -> &'static str {
        match self {
            PairingCase::LinearLinear => "linear-linear",
            PairingCase::LinearCore => "linear-core",
            PairingCase::CoreCore => "core-core",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Gen {
    Linear(Vec<Expr>),
    Core(u8, Vec<Expr>),
}

/// Nonzero residuals grouped by pairing case.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ImCocycleReport {
    /// Number of pairs checked per case.
    pub checked: Vec<(PairingCase, usize)>,
    /// `(case, label, residual)` for every failing pair.
    pub residuals: Vec<(PairingCase, String, Expr)>,
}

impl ImCocycleReport {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }

    /// Cases with at least one nonzero residual, in case order.
    pub fn failing_cases(&self) -> Vec<PairingCase> {
        let mut v: Vec<PairingCase> = self.residuals.iter().map(|(c, _, _)| *c).collect();
        v.sort();
        v.dedup();
        v
    }
}

struct Ctx<'a> {
    a: &'a AlgebroidData,
    sharp: &'a [Vec<Expr>],
    n: usize,
    r: usize,
}

impl Ctx<'_> {
    fn v(&self) -> Section {
        (0..self.r).map(|l| Expr::var(self.n + l)).collect()
    }

    fn w(&self) -> Section {
        (0..self.r)
            .map(|l| Expr::var(self.n + self.r + l))
            .collect()
    }

    fn sharp_apply(&self, alpha: &[Expr]) -> Section {
        self.sharp.iter().map(|row| pairing(row, alpha)).collect()
    }

    fn d1(&self, alpha: &[Expr]) -> Result<AForm, PullbackError> {
        d(self.a, &AForm::one_form(alpha.to_vec())).map_err(|e| PullbackError::Shape(e.to_string()))
    }

    fn dual_bracket(&self, alpha: &[Expr], beta: &[Expr]) -> Result<Vec<Expr>, PullbackError> {
        let u = self.sharp_apply(alpha);
        let t = self.sharp_apply(beta);
        let l = lie_derivative_form(self.a, &u, &AForm::one_form(beta.to_vec()))
            .map_err(|e| PullbackError::Shape(e.to_string()))?;
        let i = interior(&t, &self.d1(alpha)?).map_err(|e| PullbackError::Shape(e.to_string()))?;
        Ok(l.sub(&i).as_covector())
    }

    fn cocycle(&self, g: &Gen) -> Result<Expr, PullbackError> {
        Ok(match g {
            Gen::Linear(al) => -&evaluate_form(&self.d1(al)?, &[self.v(), self.w()])
                .map_err(|e| PullbackError::Shape(e.to_string()))?,
            Gen::Core(1, al) => -&pairing(al, &self.w()),
            Gen::Core(_, al) => pairing(al, &self.v()),
        })
    }

    fn anchor(&self, g: &Gen) -> Vec<Expr> {
        let (n, r) = (self.n, self.r);
        let mut out = vec![Expr::zero(); n + 2 * r];
        match g {
            Gen::Linear(al) => {
                let u = self.sharp_apply(al);
                out[..n].clone_from_slice(&self.a.anchor_of(&u));
                let (v, w) = (self.v(), self.w());
                for l in 0..r {
                    let br = self.a.bracket_unchecked(&u, &self.a.frame_section(l));
                    for j in 0..r {
                        if br[j].is_zero() {
                            continue;
                        }
                        out[n + j] -= &(&br[j] * &v[l]);
                        out[n + r + j] -= &(&br[j] * &w[l]);
                    }
                }
            }
            Gen::Core(i, al) => {
                let u = self.sharp_apply(al);
                let off = if *i == 1 { n } else { n + r };
                out[off..off + r].clone_from_slice(&u);
            }
        }
        out
    }

    /// `c([X, Y])` from the bracket table.
    fn cocycle_of_bracket(&self, x: &Gen, y: &Gen) -> Result<Expr, PullbackError> {
        match (x, y) {
            (Gen::Linear(a), Gen::Linear(b)) => {
                self.cocycle(&Gen::Linear(self.dual_bracket(a, b)?))
            }
            (Gen::Linear(a), Gen::Core(i, b)) => {
                self.cocycle(&Gen::Core(*i, self.dual_bracket(a, b)?))
            }
            (Gen::Core(..), Gen::Linear(_)) => Ok(-&self.cocycle_of_bracket(y, x)?),
            (Gen::Core(..), Gen::Core(..)) => Ok(Expr::zero()),
        }
    }

    fn residual(&self, x: &Gen, y: &Gen) -> Result<Expr, PullbackError> {
        let lhs = self.cocycle_of_bracket(x, y)?;
        let rhs = &vf_apply(&self.anchor(x), &self.cocycle(y)?)
            - &vf_apply(&self.anchor(y), &self.cocycle(x)?);
        Ok(&lhs - &rhs)
    }
}

/// Test one-forms: the dual frame and each coordinate times each dual frame
/// element.
pub fn default_test_forms(a: &AlgebroidData) -> Vec<Vec<Expr>> {
    let r = a.rank();
    let mut out: Vec<Vec<Expr>> = (0..r).map(|i| a.frame_section(i)).collect();
    for c in 0..a.dim() {
        for i in 0..r {
            let mut f = a.zero_section();
            f[i] = Expr::var(c);
            out.push(f);
        }
    }
    out
}

/// Cocycle check for a triangular bivector.
pub fn verify_im_cocycle(
    a: &AlgebroidData,
    pi: &Multivector,
) -> Result<ImCocycleReport, PullbackError> {
    let rep = check_triangular(a, pi).map_err(|e| PullbackError::Shape(e.to_string()))?;
    if !rep.triangular() {
        return Err(PullbackError::Inconsistent(
            "bivector is not triangular".into(),
        ));
    }
    let s = sharp(pi).map_err(|e| PullbackError::Shape(e.to_string()))?;
    verify_im_cocycle_sharp(a, &s, &default_test_forms(a))
}

/// Cocycle check for a raw `π♯` matrix (`(π♯α)^j = Σ_i sharp[j][i] α_i`) on
/// the given test forms.
pub fn verify_im_cocycle_sharp(
    a: &AlgebroidData,
    sharp: &[Vec<Expr>],
    forms: &[Vec<Expr>],
) -> Result<ImCocycleReport, PullbackError> {
    let r = a.rank();
    if sharp.len() != r || sharp.iter().any(|row| row.len() != r) {
        return Err(PullbackError::Shape("π♯ must be rank × rank".into()));
    }
    let ctx = Ctx {
        a,
        sharp,
        n: a.dim(),
        r,
    };
    let mut rep = ImCocycleReport::default();
    let mut counts = [0usize; 3];
    let label = |g: &Gen, idx: usize| match g {
        Gen::Linear(_) => format!("T²α{}", idx + 1),
        Gen::Core(i, _) => format!("α{}^({})", idx + 1, i),
    };
    for (p, al) in forms.iter().enumerate() {
        for (q, be) in forms.iter().enumerate() {
            let gens_a = [
                Gen::Linear(al.clone()),
                Gen::Core(1, al.clone()),
                Gen::Core(2, al.clone()),
            ];
            let gens_b = [
                Gen::Linear(be.clone()),
                Gen::Core(1, be.clone()),
                Gen::Core(2, be.clone()),
            ];
            for x in &gens_a {
                for y in &gens_b {
                    let case = match (x, y) {
                        (Gen::Linear(_), Gen::Linear(_)) => PairingCase::LinearLinear,
                        (Gen::Core(..), Gen::Core(..)) => PairingCase::CoreCore,
                        _ => PairingCase::LinearCore,
                    };
                    counts[case as usize] += 1;
                    let res = ctx.residual(x, y)?;
                    if !res.is_zero() {
                        rep.residuals.push((
                            case,
                            format!("[{}, {}]", label(x, p), label(y, q)),
                            res,
                        ));
                    }
                }
            }
        }
    }
    rep.checked = vec![
        (PairingCase::LinearLinear, counts[0]),
        (PairingCase::LinearCore, counts[1]),
        (PairingCase::CoreCore, counts[2]),
    ];
    Ok(rep)
}
