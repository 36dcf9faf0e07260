//! Coordinate charts and text rendering of expressions.

use std::fmt::Write;

use super::field::Field;
use super::poly::Polynomial;
use super::ratfunc::RationalFunction;

/// Whether a coordinate lives on the base or along the fibres of a vector
/// bundle chart. Fibre coordinates carry weight one under fibrewise scaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoordKind {
    Base,
    Fibre,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coordinate {
    pub name: String,
    pub kind: CoordKind,
}

impl Coordinate {
    pub fn base(name: impl Into<String>) -> Self {
        Coordinate {
            name: name.into(),
            kind: CoordKind::Base,
        }
    }

    pub fn fibre(name: impl Into<String>) -> Self {
        Coordinate {
            name: name.into(),
            kind: CoordKind::Fibre,
        }
    }
}

/// Ordered list of named coordinates; the order fixes the variable indices
/// used by every expression over the chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Chart {
    coords: Vec<Coordinate>,
}

impl Chart {
    pub fn new(coords: Vec<Coordinate>) -> Self {
        Chart { coords }
    }

    /// Chart of base coordinates with the given names.
    pub fn base(names: &[&str]) -> Self {
        Chart::new(names.iter().map(|n| Coordinate::base(*n)).collect())
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Coordinate] {
        &self.coords
    }

    pub fn name(&self, i: usize) -> String {
        self.coords
            .get(i)
            .map(|c| c.name.clone())
            .unwrap_or_else(|| format!("x{}", i))
    }

    pub fn names(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name == name)
    }

    pub fn kind(&self, i: usize) -> CoordKind {
        self.coords[i].kind
    }

    /// Scaling weights: 0 for base coordinates, 1 for fibre coordinates.
    pub fn weights(&self) -> Vec<i32> {
        self.coords
            .iter()
            .map(|c| match c.kind {
                CoordKind::Base => 0,
                CoordKind::Fibre => 1,
            })
            .collect()
    }

    /// Append coordinates, renaming any that clash with existing names by
    /// adding primes.
    pub fn extended(&self, extra: Vec<Coordinate>) -> Chart {
        let mut coords = self.coords.clone();
        for mut c in extra {
            while coords.iter().any(|d| d.name == c.name) {
                c.name.push('_');
            }
            coords.push(c);
        }
        Chart { coords }
    }

    /// Same coordinates with every kind set to `Base`.
    pub fn as_base(&self) -> Chart {
        Chart::new(
            self.coords
                .iter()
                .map(|c| Coordinate::base(c.name.clone()))
                .collect(),
        )
    }

    pub fn render<C: Field>(&self, e: &RationalFunction<C>) -> String {
        render_rational(e, &|i| self.name(i))
    }

    pub fn render_poly<C: Field>(&self, p: &Polynomial<C>) -> String {
        render_poly(p, &|i| self.name(i))
    }
}

fn render_monomial(m: &super::monomial::Monomial, name: &dyn Fn(usize) -> String) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(name(i)),
            _ => parts.push(format!("{}^{}", name(i), e)),
        }
    }
    parts.join("*")
}

/// Render a polynomial with terms in descending grlex order, in a form the
/// expression parser reads back to the same polynomial.
pub fn render_poly<C: Field>(p: &Polynomial<C>, name: &dyn Fn(usize) -> String) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            let _ = write!(out, "{}", a);
        } else if a.is_one() {
            out.push_str(&render_monomial(m, name));
        } else {
            let _ = write!(out, "{}*{}", a, render_monomial(m, name));
        }
    }
    out
}

pub fn render_rational<C: Field>(
    e: &RationalFunction<C>,
    name: &dyn Fn(usize) -> String,
) -> String {
    let n = render_poly(e.numerator(), name);
    if e.is_polynomial() {
        return n;
    }
    let d = render_poly(e.denominator(), name);
    let n = if e.numerator().num_terms() > 1 || n.starts_with('-') || n.contains('/') {
        format!("({})", n)
    } else {
        n
    };
    format!("{}/({})", n, d)
}
