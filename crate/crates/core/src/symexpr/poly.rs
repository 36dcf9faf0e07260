//! Sparse multivariate polynomials over an exact field.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use super::monomial::Monomial;

/// Polynomial stored as a grlex-sorted map from monomials to nonzero
/// coefficients. The representation is canonical, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<C: Field> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Field> Default for Polynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Field> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(i: usize) -> Self {
        Self::term(C::one(), Monomial::var(i))
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.contains_key(&Monomial::one()))
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn constant_term(&self) -> C {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> C {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(C::zero)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.max_var()).max()
    }

    pub fn contains_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exp(i) > 0)
    }

    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Make the leading grlex coefficient one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&(C::one() / c.clone())),
        }
    }

    pub fn differentiate(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                out.add_term(m.with_exp(i, e - 1), c.clone() * C::from_int(e as i64));
            }
        }
        out
    }

    /// Coefficients of `self` viewed as a polynomial in coordinate `i`:
    /// entry `k` is the coefficient of `x_i^k`.
    pub fn coefficients_in(&self, i: usize) -> Vec<Self> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![Self::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(i) as usize;
            out[e].add_term(m.with_exp(i, 0), c.clone());
        }
        out
    }

    /// Inverse of [`Polynomial::coefficients_in`].
    pub fn from_coefficients_in(i: usize, coeffs: &[Self]) -> Self {
        let mut out = Self::zero();
        for (k, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                out.add_term(m.with_exp(i, k as u16), c.clone());
            }
        }
        out
    }

    /// Substitute coordinate `i` by a polynomial.
    pub fn substitute(&self, i: usize, value: &Self) -> Self {
        if !self.contains_var(i) {
            return self.clone();
        }
        let coeffs = self.coefficients_in(i);
        let mut acc = Self::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Evaluate coordinate `i` at a constant.
    pub fn evaluate_var(&self, i: usize, value: &C) -> Self {
        self.substitute(i, &Self::constant(value.clone()))
    }

    /// Full evaluation; coordinates beyond `point.len()` are taken as zero.
    pub fn evaluate(&self, point: &[C]) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    let x = point.get(i).cloned().unwrap_or_else(C::zero);
                    t = t * num_traits::pow(x, e as usize);
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_float();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= point.get(i).copied().unwrap_or(0.0).powi(e as i32);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn remap(&self, map: &[usize]) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.remap(map), c.clone())))
    }

    /// Divide by `d` when the division is exact; `None` otherwise.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        if d.num_terms() == 1 {
            let inv = C::one() / dc;
            let mut out = BTreeMap::new();
            for (m, c) in &self.terms {
                if !dm.divides(m) {
                    return None;
                }
                out.insert(dm.div_into(m), c.clone() * inv.clone());
            }
            return Some(Polynomial { terms: out });
        }
        let mut r = self.clone();
        let mut q = Self::zero();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&rm) {
                return None;
            }
            let tm = dm.div_into(&rm);
            let tc = rc / dc.clone();
            r = &r - &d.mul_monomial(&tm, &tc);
            q.add_term(tm, tc);
        }
        Some(q)
    }

    /// Greatest common divisor, normalised to be monic (zero only if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Self::one();
        }
        if self.num_terms() == 1 || other.num_terms() == 1 {
            return monomial_gcd(self, other);
        }
        let v = self.max_var().max(other.max_var()).unwrap();
        let a_has = self.contains_var(v);
        let b_has = other.contains_var(v);
        let g = match (a_has, b_has) {
            (true, false) => content_in(self, v).gcd(other),
            (false, true) => self.gcd(&content_in(other, v)),
            (false, false) => unreachable!("v is the largest coordinate of one operand"),
            (true, true) => {
                let ca = content_in(self, v);
                let cb = content_in(other, v);
                let pa = self.exact_div(&ca).expect("content divides");
                let pb = other.exact_div(&cb).expect("content divides");
                let gc = ca.gcd(&cb);
                let gp = primitive_prs_gcd(pa, pb, v);
                &gc * &gp
            }
        };
        g.monic()
    }
}

fn monomial_gcd<C: Field>(a: &Polynomial<C>, b: &Polynomial<C>) -> Polynomial<C> {
    let (mono, other) = if a.num_terms() == 1 { (a, b) } else { (b, a) };
    let mut g = mono.leading().unwrap().0.clone();
    for m in other.terms.keys() {
        g = g.gcd(m);
        if g.is_one() {
            break;
        }
    }
    Polynomial::term(C::one(), g)
}

/// Gcd of the coefficients of `p` as a polynomial in coordinate `v`.
fn content_in<C: Field>(p: &Polynomial<C>, v: usize) -> Polynomial<C> {
    let mut g = Polynomial::zero();
    for c in p.coefficients_in(v) {
        if c.is_zero() {
            continue;
        }
        g = g.gcd(&c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part_in<C: Field>(p: &Polynomial<C>, v: usize) -> Polynomial<C> {
    let c = content_in(p, v);
    p.exact_div(&c).expect("content divides").monic()
}

/// Pseudo-remainder of `a` by `b` in coordinate `v`.
fn pseudo_remainder<C: Field>(a: &Polynomial<C>, b: &Polynomial<C>, v: usize) -> Polynomial<C> {
    let db = b.degree_in(v) as usize;
    let bc = b.coefficients_in(v);
    let lb = bc[db].clone();
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let dr = r.degree_in(v) as usize;
        if dr < db {
            return r;
        }
        let lr = r.coefficients_in(v)[dr].clone();
        let shift = Polynomial::term(C::one(), Monomial::var_pow(v, (dr - db) as u16));
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
    }
}

fn primitive_prs_gcd<C: Field>(a: Polynomial<C>, b: Polynomial<C>, v: usize) -> Polynomial<C> {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        if b.degree_in(v) == 0 {
            return if b.is_zero() {
                primitive_part_in(&a, v)
            } else {
                Polynomial::one()
            };
        }
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return primitive_part_in(&b, v);
        }
        a = b;
        b = primitive_part_in(&r, v);
    }
}

impl<'a, C: Field> Add<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        let (mut out, other) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, C: Field> Sub<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, C: Field> Mul<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        if rhs.is_constant() {
            return self.scale(&rhs.constant_term());
        }
        if self.is_constant() {
            return rhs.scale(&self.constant_term());
        }
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Field> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type P = Polynomial<BigRational>;

    fn x() -> P {
        P::var(0)
    }
    fn y() -> P {
        P::var(1)
    }
    fn z() -> P {
        P::var(2)
    }
    fn c(n: i64) -> P {
        P::constant(BigRational::from_int(n))
    }

    #[test]
    fn difference_of_squares_gcd() {
        let a = &(&x() * &x()) - &(&y() * &y());
        let b = &x() - &y();
        assert_eq!(a.gcd(&b), b);
        assert_eq!(a.exact_div(&b).unwrap(), &x() + &y());
    }

    #[test]
    fn multivariate_gcd_with_common_factor() {
        let f = &(&(&x() * &y()) + &z()) + &c(1);
        let g1 = &(&x() + &(&y() * &z())) - &c(2);
        let g2 = &(&z() * &z()) + &x();
        let a = &f * &g1;
        let b = &f * &g2;
        assert_eq!(a.gcd(&b), f.monic());
    }

    #[test]
    fn coprime_gcd_is_one() {
        let a = &(&x() * &x()) + &c(1);
        let b = &(&y() * &x()) - &c(3);
        assert!(a.gcd(&b).is_one());
    }

    #[test]
    fn exact_division_rejects_non_multiples() {
        let a = &(&x() * &x()) + &c(1);
        assert!(a.exact_div(&(&x() + &c(1))).is_none());
    }

    #[test]
    fn coefficients_roundtrip() {
        let p = &(&(&x() * &y()) * &y()) + &(&z() * &y());
        let cs = p.coefficients_in(1);
        assert_eq!(P::from_coefficients_in(1, &cs), p);
    }

    #[test]
    fn substitute_and_derivative() {
        let p = &(&x() * &x()) * &y();
        assert_eq!(p.differentiate(0), &(&c(2) * &x()) * &y());
        let s = p.substitute(0, &(&y() + &c(1)));
        assert_eq!(s, &(&(&y() + &c(1)) * &(&y() + &c(1))) * &y());
    }
}
