//! Monomials with graded-lexicographic order.

use std::cmp::Ordering;

use smallvec::SmallVec;

/// Exponent vector indexed by chart coordinate; trailing zeros are trimmed so
/// that equality does not depend on the length of the ambient chart.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u16) -> Self {
        let mut v = SmallVec::from_elem(0u16, i + 1);
        v[i] = e;
        Monomial(v).trimmed()
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps)).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest coordinate index with a positive exponent.
    pub fn max_var(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let mut v = SmallVec::with_capacity(n);
        for i in 0..n {
            v.push(self.exp(i) + other.exp(i));
        }
        Monomial(v)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        let mut v: SmallVec<[u16; 8]> = other.0.clone();
        for (i, &e) in self.0.iter().enumerate() {
            v[i] -= e;
        }
        Monomial(v).trimmed()
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().min(other.0.len());
        let v: SmallVec<[u16; 8]> = (0..n).map(|i| self.0[i].min(other.0[i])).collect();
        Monomial(v).trimmed()
    }

    /// Same monomial with the exponent of `i` replaced.
    pub fn with_exp(&self, i: usize, e: u16) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] = e;
        Monomial(v).trimmed()
    }

    /// Reindex coordinates: exponent of old index `i` moves to `map[i]`.
    pub fn remap(&self, map: &[usize]) -> Monomial {
        let n = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| map[i] + 1)
            .max()
            .unwrap_or(0);
        let mut v = SmallVec::from_elem(0u16, n);
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                v[map[i]] += e;
            }
        }
        Monomial(v).trimmed()
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order with coordinate 0 the most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let n = self.0.len().max(other.0.len());
        for i in 0..n {
            match self.exp(i).cmp(&other.exp(i)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let x2 = Monomial::var_pow(0, 2);
        let xy = Monomial::var(0).mul(&Monomial::var(1));
        let y2 = Monomial::var_pow(1, 2);
        let x = Monomial::var(0);
        assert!(x2 > xy && xy > y2 && y2 > x && x > Monomial::one());
    }

    #[test]
    fn trimming_makes_equality_chart_independent() {
        assert_eq!(Monomial::from_exponents(&[1, 0, 0]), Monomial::var(0));
        assert_eq!(Monomial::var(2).max_var(), Some(2));
    }

    #[test]
    fn division() {
        let a = Monomial::from_exponents(&[1, 2]);
        let b = Monomial::from_exponents(&[2, 3, 1]);
        assert!(a.divides(&b));
        assert_eq!(a.div_into(&b), Monomial::from_exponents(&[1, 1, 1]));
        assert!(!b.divides(&a));
    }
}
