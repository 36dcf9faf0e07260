use algebroid_core::calculus::{combinations, AForm};
use algebroid_core::symexpr::{Expr, Field, Poly, Rational};

use crate::Real;

type Terms<T> = Vec<(T, Vec<(usize, i32)>)>;

/// Floating-point evaluator of a rational function.
#[derive(Clone, Debug)]
pub struct CompiledExpr<T> {
    num: Terms<T>,
    den: Terms<T>,
}

fn compile_poly<T: Real>(p: &Poly) -> Terms<T> {
    p.terms()
        .map(|(m, c)| {
            let pows = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i, e as i32))
                .collect();
            (T::of(c.to_float()), pows)
        })
        .collect()
}

fn eval_terms<T: Real>(terms: &Terms<T>, p: &[T]) -> T {
    terms.iter().fold(T::zero(), |acc, (c, pows)| {
        acc + pows.iter().fold(*c, |t, &(i, e)| t * p[i].powi(e))
    })
}

impl<T: Real> CompiledExpr<T> {
    pub fn new(e: &Expr) -> Self {
        CompiledExpr {
            num: compile_poly(e.numerator()),
            den: if e.denominator().is_one() {
                Vec::new()
            } else {
                compile_poly(e.denominator())
            },
        }
    }

    pub fn eval(&self, p: &[T]) -> T {
        let n = eval_terms(&self.num, p);
        if self.den.is_empty() {
            n
        } else {
            n / eval_terms(&self.den, p)
        }
    }
}

/// Exact value of an expression at a rational point, rounded once.
pub(crate) fn exact_value<T: Real>(e: &Expr, p: &[Rational]) -> T {
    e.evaluate(p).map_or(T::nan(), |v| T::of(v.to_float()))
}

/// Floating-point evaluator of a differential form on `Tℝⁿ`, one component
/// per strictly increasing index list.
#[derive(Clone, Debug)]
pub struct CompiledForm<T> {
    degree: usize,
    combos: Vec<Vec<usize>>,
    comps: Vec<CompiledExpr<T>>,
    exprs: Vec<Expr>,
}

impl<T: Real> CompiledForm<T> {
    pub fn new(form: &AForm) -> Self {
        let combos = combinations(form.rank(), form.degree());
        let exprs: Vec<Expr> = combos.iter().map(|c| form.component(c)).collect();
        CompiledForm {
            degree: form.degree(),
            comps: exprs.iter().map(CompiledExpr::new).collect(),
            combos,
            exprs,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn combos(&self) -> &[Vec<usize>] {
        &self.combos
    }

    pub fn eval(&self, p: &[T], out: &mut [T]) {
        for (o, c) in out.iter_mut().zip(&self.comps) {
            *o = c.eval(p);
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, p: &[Rational], out: &mut [T]) {
        for (o, e) in out.iter_mut().zip(&self.exprs) {
            *o = exact_value(e, p);
        }
    }
}
