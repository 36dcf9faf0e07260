use std::collections::BTreeMap;
use std::ops::Deref;

use crate::symexpr::{Chart, Expr};

/// All strictly increasing index lists of length `k` drawn from `0..r`.
pub fn combinations(r: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            if r - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, r, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= r {
        rec(0, r, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Sort an index list, returning the sign of the permutation; `None` when an
/// index repeats.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// Alternating tensor of fixed degree on a rank-`r` bundle, stored on
/// strictly increasing indices with zero components omitted.
#[derive(Clone, Debug, PartialEq)]
pub struct Alternating {
    rank: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Expr>,
}

impl Alternating {
    pub fn zero(rank: usize, degree: usize) -> Self {
        Alternating {
            rank,
            degree,
            comps: BTreeMap::new(),
        }
    }

    pub fn scalar(rank: usize, f: Expr) -> Self {
        let mut a = Self::zero(rank, 0);
        a.set(Vec::new(), f);
        a
    }

    pub fn vector(v: Vec<Expr>) -> Self {
        let mut a = Self::zero(v.len(), 1);
        for (i, x) in v.into_iter().enumerate() {
            a.set(vec![i], x);
        }
        a
    }

    /// Build from components on arbitrary (not necessarily sorted) index
    /// lists; entries on the same sorted list are summed with signs.
    pub fn from_components<I>(rank: usize, degree: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (Vec<usize>, Expr)>,
    {
        let mut a = Self::zero(rank, degree);
        for (idx, v) in it {
            assert_eq!(idx.len(), degree, "index list length must equal the degree");
            a.add_to(idx, &v);
        }
        a
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Expr)> {
        self.comps.iter()
    }

    pub fn num_components(&self) -> usize {
        self.comps.len()
    }

    /// Component on an arbitrary index list (antisymmetric extension).
    pub fn component(&self, idx: &[usize]) -> Expr {
        match sort_with_sign(idx) {
            None => Expr::zero(),
            Some((s, sg)) => match self.comps.get(&s) {
                None => Expr::zero(),
                Some(v) if sg > 0 => v.clone(),
                Some(v) => -v,
            },
        }
    }

    /// Set the component on a strictly increasing index list.
    pub fn set(&mut self, idx: Vec<usize>, v: Expr) {
        debug_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        if v.is_zero() {
            self.comps.remove(&idx);
        } else {
            self.comps.insert(idx, v);
        }
    }

    /// Add `v` to the component on an arbitrary index list.
    pub fn add_to(&mut self, idx: Vec<usize>, v: &Expr) {
        if v.is_zero() {
            return;
        }
        let Some((s, sg)) = sort_with_sign(&idx) else {
            return;
        };
        let cur = self.comps.remove(&s).unwrap_or_else(Expr::zero);
        let new = if sg > 0 { &cur + v } else { &cur - v };
        if !new.is_zero() {
            self.comps.insert(s, new);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch in sum");
        let mut out = self.clone();
        for (k, v) in &other.comps {
            out.add_to(k.clone(), v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    pub fn scale(&self, f: &Expr) -> Self {
        if f.is_zero() {
            return Self::zero(self.rank, self.degree);
        }
        self.map(|v| v * f)
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        let mut out = Self::zero(self.rank, self.degree);
        for (k, v) in &self.comps {
            out.set(k.clone(), f(v));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rank.max(other.rank), self.degree + other.degree);
        for (i, a) in &self.comps {
            for (j, b) in &other.comps {
                let mut idx = i.clone();
                idx.extend_from_slice(j);
                out.add_to(idx, &(a * b));
            }
        }
        out
    }

    /// Render as `{"1,2": "x", …}`-style text with one-based indices.
    pub fn render(&self, chart: &Chart) -> String {
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(k, v)| format!("[{}]: {}", index_key(k), chart.render(v)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(", ")
        }
    }
}

/// One-based comma-separated key for an index list.
pub fn index_key(idx: &[usize]) -> String {
    idx.iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Element of `Γ(∧^p A)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector(pub Alternating);

/// Element of `Ω^q(A) = Γ(∧^q A*)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AForm(pub Alternating);

impl Deref for Multivector {
    type Target = Alternating;
    fn deref(&self) -> &Alternating {
        &self.0
    }
}

impl Deref for AForm {
    type Target = Alternating;
    fn deref(&self) -> &Alternating {
        &self.0
    }
}

impl Multivector {
    pub fn zero(rank: usize, degree: usize) -> Self {
        Multivector(Alternating::zero(rank, degree))
    }

    pub fn function(rank: usize, f: Expr) -> Self {
        Multivector(Alternating::scalar(rank, f))
    }

    pub fn from_section(v: &[Expr]) -> Self {
        Multivector(Alternating::vector(v.to_vec()))
    }

    /// Bivector from `(i, j, π^{ij})` entries.
    pub fn bivector(rank: usize, entries: &[(usize, usize, Expr)]) -> Self {
        Multivector(Alternating::from_components(
            rank,
            2,
            entries.iter().map(|(i, j, v)| (vec![*i, *j], v.clone())),
        ))
    }

    /// Degree-one multivector as a section.
    pub fn as_section(&self) -> Vec<Expr> {
        assert_eq!(self.degree(), 1);
        (0..self.rank()).map(|i| self.component(&[i])).collect()
    }

    pub fn wedge(&self, other: &Multivector) -> Multivector {
        Multivector(self.0.wedge(&other.0))
    }

    pub fn add(&self, other: &Multivector) -> Multivector {
        Multivector(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &Multivector) -> Multivector {
        Multivector(self.0.sub(&other.0))
    }

    pub fn scale(&self, f: &Expr) -> Multivector {
        Multivector(self.0.scale(f))
    }
}

impl AForm {
    pub fn zero(rank: usize, degree: usize) -> Self {
        AForm(Alternating::zero(rank, degree))
    }

    pub fn function(rank: usize, f: Expr) -> Self {
        AForm(Alternating::scalar(rank, f))
    }

    pub fn one_form(alpha: Vec<Expr>) -> Self {
        AForm(Alternating::vector(alpha))
    }

    /// Two-form from `(i, j, ω_ij)` entries.
    pub fn two_form(rank: usize, entries: &[(usize, usize, Expr)]) -> Self {
        AForm(Alternating::from_components(
            rank,
            2,
            entries.iter().map(|(i, j, v)| (vec![*i, *j], v.clone())),
        ))
    }

    /// Degree-one form as its coefficient vector.
    pub fn as_covector(&self) -> Vec<Expr> {
        assert_eq!(self.degree(), 1);
        (0..self.rank()).map(|i| self.component(&[i])).collect()
    }

    pub fn wedge(&self, other: &AForm) -> AForm {
        AForm(self.0.wedge(&other.0))
    }

    pub fn add(&self, other: &AForm) -> AForm {
        AForm(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &AForm) -> AForm {
        AForm(self.0.sub(&other.0))
    }

    pub fn scale(&self, f: &Expr) -> AForm {
        AForm(self.0.scale(f))
    }
}
