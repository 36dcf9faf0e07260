//! Rational functions in canonical form.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use super::field::Field;
use super::monomial::Monomial;
use super::poly::Polynomial;

/// Quotient of polynomials with coprime numerator and denominator and a monic
/// denominator (leading grlex coefficient one). Canonical, so `==` is
/// mathematical equality.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalFunction<C: Field> {
    num: Polynomial<C>,
    den: Polynomial<C>,
}

/// Error raised by divisions whose divisor is the zero function.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("division by the zero function")]
pub struct DivisionByZero;

impl<C: Field> Default for RationalFunction<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Field> From<Polynomial<C>> for RationalFunction<C> {
    fn from(p: Polynomial<C>) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }
}

impl<C: Field> RationalFunction<C> {
    pub fn zero() -> Self {
        Polynomial::zero().into()
    }

    pub fn one() -> Self {
        Polynomial::one().into()
    }

    pub fn constant(c: C) -> Self {
        Polynomial::constant(c).into()
    }

    pub fn int(n: i64) -> Self {
        Self::constant(C::from_int(n))
    }

    pub fn var(i: usize) -> Self {
        Polynomial::var(i).into()
    }

    /// Build `num/den` and reduce to canonical form.
    pub fn new(num: Polynomial<C>, den: Polynomial<C>) -> Result<Self, DivisionByZero> {
        if den.is_zero() {
            return Err(DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial<C>, den: Polynomial<C>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let inv = C::one() / den.constant_term();
            return RationalFunction {
                num: num.scale(&inv),
                den: Polynomial::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coefficient();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = C::one() / lc;
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn numerator(&self) -> &Polynomial<C> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn as_constant(&self) -> Option<C> {
        if self.is_constant() {
            Some(self.num.constant_term())
        } else {
            None
        }
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial<C>> {
        if self.is_polynomial() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        RationalFunction {
            num: self.num.scale(c),
            den: if c.is_zero() {
                Polynomial::one()
            } else {
                self.den.clone()
            },
        }
    }

    pub fn recip(&self) -> Result<Self, DivisionByZero> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, DivisionByZero> {
        if rhs.is_zero() {
            return Err(DivisionByZero);
        }
        Ok(self * &rhs.recip()?)
    }

    pub fn powi(&self, e: i32) -> Result<Self, DivisionByZero> {
        if e >= 0 {
            Ok(RationalFunction {
                num: self.num.pow(e as u32),
                den: self.den.pow(e as u32),
            })
        } else {
            self.recip()?.powi(-e)
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        self.num.max_var().max(self.den.max_var())
    }

    pub fn contains_var(&self, i: usize) -> bool {
        self.num.contains_var(i) || self.den.contains_var(i)
    }

    /// Partial derivative with respect to coordinate `i` (quotient rule).
    pub fn differentiate(&self, i: usize) -> Self {
        if self.den.is_one() {
            return self.num.differentiate(i).into();
        }
        let dn = self.num.differentiate(i);
        let dd = self.den.differentiate(i);
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        Self::reduce(top, &self.den * &self.den)
    }

    /// Substitute coordinate `i` by another rational function.
    pub fn substitute(&self, i: usize, value: &Self) -> Result<Self, DivisionByZero> {
        if !self.contains_var(i) {
            return Ok(self.clone());
        }
        let n = substitute_poly(&self.num, i, value);
        let d = substitute_poly(&self.den, i, value);
        n.checked_div(&d)
    }

    /// Simultaneous substitution `x_i -> values[i]` for every listed coordinate.
    pub fn substitute_all(&self, values: &[(usize, Self)]) -> Result<Self, DivisionByZero> {
        let n = substitute_poly_all(&self.num, values);
        let d = substitute_poly_all(&self.den, values);
        n.checked_div(&d)
    }

    /// Exact evaluation; `None` when the denominator vanishes at `point`.
    pub fn evaluate(&self, point: &[C]) -> Option<C> {
        let d = self.den.evaluate(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.evaluate(point) / d)
        }
    }

    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        self.num.evaluate_f64(point) / self.den.evaluate_f64(point)
    }

    pub fn remap(&self, map: &[usize]) -> Self {
        Self::reduce(self.num.remap(map), self.den.remap(map))
    }
}

fn substitute_poly<C: Field>(
    p: &Polynomial<C>,
    i: usize,
    value: &RationalFunction<C>,
) -> RationalFunction<C> {
    if let Some(vp) = value.as_polynomial() {
        return p.substitute(i, vp).into();
    }
    let coeffs = p.coefficients_in(i);
    let mut acc = RationalFunction::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * value) + &RationalFunction::from(c.clone());
    }
    acc
}

fn substitute_poly_all<C: Field>(
    p: &Polynomial<C>,
    values: &[(usize, RationalFunction<C>)],
) -> RationalFunction<C> {
    let mut acc = RationalFunction::zero();
    for (m, c) in p.terms() {
        let mut rest = m.clone();
        let mut t = RationalFunction::constant(c.clone());
        for (i, v) in values {
            let e = rest.exp(*i);
            if e > 0 {
                rest = rest.with_exp(*i, 0);
                t = &t * &v.powi(e as i32).expect("nonnegative power");
            }
        }
        let t = &t * &RationalFunction::from(Polynomial::term(C::one(), rest));
        acc += &t;
    }
    acc
}

impl<'a, C: Field> Add<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn add(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return (&self.num + &rhs.num).into();
        }
        if self.den == rhs.den {
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        if rhs.den.is_one() {
            let n = &self.num + &(&rhs.num * &self.den);
            return RationalFunction {
                num: n,
                den: self.den.clone(),
            };
        }
        if self.den.is_one() {
            let n = &(&self.num * &rhs.den) + &rhs.num;
            return RationalFunction {
                num: n,
                den: rhs.den.clone(),
            };
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::reduce(n, &self.den * &rhs.den)
    }
}

impl<'a, C: Field> Sub<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn sub(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        self + &(-rhs)
    }
}

impl<'a, C: Field> Mul<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn mul(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return (&self.num * &rhs.num).into();
        }
        RationalFunction::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a, C: Field> Div<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;
    /// Panics on division by the zero function; use `checked_div` to recover.
    fn div(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        self.checked_div(rhs)
            .expect("division by the zero function")
    }
}

impl<C: Field> Neg for &RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn neg(self) -> RationalFunction<C> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<C: Field> Neg for RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn neg(self) -> RationalFunction<C> {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl<C: Field> $tr<RationalFunction<C>> for RationalFunction<C> {
            type Output = RationalFunction<C>;
            fn $f(self, rhs: RationalFunction<C>) -> RationalFunction<C> {
                (&self).$f(&rhs)
            }
        }
        impl<'a, C: Field> $tr<&'a RationalFunction<C>> for RationalFunction<C> {
            type Output = RationalFunction<C>;
            fn $f(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
                (&self).$f(rhs)
            }
        }
        impl<'a, C: Field> $tr<RationalFunction<C>> for &'a RationalFunction<C> {
            type Output = RationalFunction<C>;
            fn $f(self, rhs: RationalFunction<C>) -> RationalFunction<C> {
                self.$f(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl<'a, C: Field> AddAssign<&'a RationalFunction<C>> for RationalFunction<C> {
    fn add_assign(&mut self, rhs: &'a RationalFunction<C>) {
        *self = &*self + rhs;
    }
}

impl<C: Field> AddAssign<RationalFunction<C>> for RationalFunction<C> {
    fn add_assign(&mut self, rhs: RationalFunction<C>) {
        *self = &*self + &rhs;
    }
}

impl<'a, C: Field> SubAssign<&'a RationalFunction<C>> for RationalFunction<C> {
    fn sub_assign(&mut self, rhs: &'a RationalFunction<C>) {
        *self = &*self - rhs;
    }
}

impl<C: Field> SubAssign<RationalFunction<C>> for RationalFunction<C> {
    fn sub_assign(&mut self, rhs: RationalFunction<C>) {
        *self = &*self - &rhs;
    }
}

impl<C: Field> std::iter::Sum for RationalFunction<C> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        let mut acc = Self::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

/// Monomial `x_i^e` as a rational function.
pub fn monomial<C: Field>(i: usize, e: u16) -> RationalFunction<C> {
    Polynomial::term(C::one(), Monomial::var_pow(i, e)).into()
}
