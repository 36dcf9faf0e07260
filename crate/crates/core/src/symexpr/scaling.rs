//! Limits of fibrewise rescalings `λ → 0`.

use super::field::Field;
use super::poly::Polynomial;
use super::ratfunc::RationalFunction;

/// Outcome of substituting `x_i ↦ λ^{w_i} x_i`, multiplying by `λ^overall`
/// and letting `λ → 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleLimit<C: Field> {
    /// Lowest power of `λ` present after scaling (`None` for the zero input).
    pub lowest_power: Option<i32>,
    /// The `λ^0` coefficient; `None` when the expression diverges.
    pub limit: Option<RationalFunction<C>>,
}

impl<C: Field> ScaleLimit<C> {
    pub fn diverges(&self) -> bool {
        self.limit.is_none()
    }
}

fn weighted_degree(m: &super::monomial::Monomial, weights: &[i32]) -> i32 {
    m.exponents()
        .iter()
        .enumerate()
        .map(|(i, &e)| weights.get(i).copied().unwrap_or(0) * e as i32)
        .sum()
}

/// Split `p` by weighted degree; returns (lowest degree, part of that degree).
fn lowest_part<C: Field>(p: &Polynomial<C>, weights: &[i32]) -> Option<(i32, Polynomial<C>)> {
    let low = p.terms().map(|(m, _)| weighted_degree(m, weights)).min()?;
    let part = Polynomial::from_terms(
        p.terms()
            .filter(|(m, _)| weighted_degree(m, weights) == low)
            .map(|(m, c)| (m.clone(), c.clone())),
    );
    Some((low, part))
}

/// Compute `lim_{λ→0} λ^overall · e(λ^w x)`.
///
/// For a rational function the numerator and denominator are expanded in `λ`
/// separately; the limit is the quotient of their lowest-weight parts when
/// the net power is zero, zero when it is positive, and divergent when
/// negative.
pub fn scale_and_limit<C: Field>(
    e: &RationalFunction<C>,
    weights: &[i32],
    overall: i32,
) -> ScaleLimit<C> {
    let Some((ln, pn)) = lowest_part(e.numerator(), weights) else {
        return ScaleLimit {
            lowest_power: None,
            limit: Some(RationalFunction::zero()),
        };
    };
    let (ld, pd) = lowest_part(e.denominator(), weights).expect("denominator is nonzero");
    let power = overall + ln - ld;
    let limit = match power.cmp(&0) {
        std::cmp::Ordering::Greater => Some(RationalFunction::zero()),
        std::cmp::Ordering::Equal => Some(
            RationalFunction::new(pn, pd).expect("lowest part of a nonzero denominator is nonzero"),
        ),
        std::cmp::Ordering::Less => None,
    };
    ScaleLimit {
        lowest_power: Some(power),
        limit,
    }
}
