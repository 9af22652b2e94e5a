use std::collections::BTreeMap;
use std::fmt;

use serde_json::json;

use super::{GeneratorId, NcMonomial};
use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// Finite linear combination of words with coefficients in one ring.
#[derive(Clone, PartialEq)]
pub struct NcPolynomial<C> {
    terms: BTreeMap<NcMonomial, C>,
}

impl<C: Coeff> Default for NcPolynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> NcPolynomial<C> {
    pub fn zero() -> Self {
        NcPolynomial { terms: BTreeMap::new() }
    }

    pub fn term(m: NcMonomial, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn constant(c: C) -> Self {
        Self::term(NcMonomial::one(), c)
    }

    pub fn gen(g: GeneratorId, one: C) -> Self {
        Self::term(NcMonomial::gen(g), one)
    }

    pub fn from_terms<I: IntoIterator<Item = (NcMonomial, C)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: NcMonomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &C) {
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a.mul(c));
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&NcMonomial, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (NcMonomial, C)> {
        self.terms.into_iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &NcMonomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// Largest monomial in the degree-lex order with its coefficient.
    pub fn leading(&self) -> Option<(&NcMonomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(NcMonomial::degree).max()
    }

    fn ring_witness(&self) -> Option<&C> {
        self.terms.values().next()
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        match (self.ring_witness(), other.ring_witness()) {
            (Some(a), Some(b)) if !a.same_ring(b) => Err(Error::RingMismatch),
            _ => Ok(()),
        }
    }

    /// Bilinear extension of concatenation.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.concat(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        NcPolynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> NcPolynomial<D> {
        NcPolynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Largest generator index used, for rank validation.
    pub fn generators(&self) -> impl Iterator<Item = GeneratorId> + '_ {
        self.terms.keys().flat_map(|m| m.word().iter().copied())
    }

    pub fn check_rank(&self, n: usize) -> Result<()> {
        match self.generators().find(|g| !g.in_rank(n)) {
            Some(g) => Err(Error::GeneratorOutOfRange { row: g.row(), col: g.col(), n }),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| json!({ "monomial": m.pairs(), "coeff": c.to_json() }))
            .collect();
        json!(terms)
    }
}

impl<C: Coeff> fmt::Display for NcPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            match (m.is_one(), c.is_one()) {
                (true, _) => write!(f, "({c})")?,
                (false, true) => write!(f, "{m}")?,
                (false, false) => write!(f, "({c})*{m}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for NcPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{CoeffRing, CyclotomicRing, LaurentScalar};

    fn u(i: usize, j: usize) -> NcPolynomial<LaurentScalar> {
        NcPolynomial::gen(GeneratorId::new(i, j), LaurentScalar::one())
    }

    #[test]
    fn concatenation_and_unit() {
        let p = u(1, 1).multiply(&u(1, 2)).unwrap();
        assert_eq!(p, NcPolynomial::term(NcMonomial::from_pairs(&[(1, 1), (1, 2)]), LaurentScalar::one()));
        let one = NcPolynomial::constant(LaurentScalar::one());
        assert_eq!(one.multiply(&p).unwrap(), p);
    }

    #[test]
    fn bilinearity() {
        let a = u(1, 1).add(&u(2, 2)).unwrap();
        let b = u(1, 1).sub(&u(2, 2)).unwrap();
        let prod = a.multiply(&b).unwrap();
        let one = LaurentScalar::one();
        let expect = NcPolynomial::from_terms([
            (NcMonomial::from_pairs(&[(1, 1), (1, 1)]), one.clone()),
            (NcMonomial::from_pairs(&[(1, 1), (2, 2)]), -one.clone()),
            (NcMonomial::from_pairs(&[(2, 2), (1, 1)]), one.clone()),
            (NcMonomial::from_pairs(&[(2, 2), (2, 2)]), -one),
        ]);
        assert_eq!(prod, expect);
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = NcPolynomial::gen(GeneratorId::new(1, 1), CyclotomicRing::new(3).one());
        let b = NcPolynomial::gen(GeneratorId::new(1, 1), CyclotomicRing::new(5).one());
        assert!(matches!(a.multiply(&b), Err(Error::RingMismatch)));
    }
}
