use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde_json::json;

use super::{NcMonomial, NcPolynomial, Reducer};
use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// Element of the tensor square: a combination of pairs of normal monomials.
#[derive(Clone, PartialEq)]
pub struct TensorElement<C> {
    terms: BTreeMap<(NcMonomial, NcMonomial), C>,
}

impl<C: Coeff> Default for TensorElement<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> TensorElement<C> {
    pub fn zero() -> Self {
        TensorElement { terms: BTreeMap::new() }
    }

    /// `1 (x) 1`.
    pub fn unit(one: C) -> Self {
        let mut t = Self::zero();
        t.add_term(NcMonomial::one(), NcMonomial::one(), one);
        t
    }

    /// `a (x) b` expanded bilinearly.
    pub fn from_pair(a: &NcPolynomial<C>, b: &NcPolynomial<C>) -> Self {
        let mut t = Self::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                t.add_term(ma.clone(), mb.clone(), ca.mul(cb));
            }
        }
        t
    }

    pub fn add_term(&mut self, left: NcMonomial, right: NcMonomial, c: C) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let s = existing.add(&c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &C) {
        for ((l, r), a) in &other.terms {
            self.add_term(l.clone(), r.clone(), a.mul(c));
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.neg());
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NcMonomial, &NcMonomial, &C)> {
        self.terms.iter().map(|((l, r), c)| (l, r, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn ring_witness(&self) -> Option<&C> {
        self.terms.values().next()
    }

    /// Re-normalizes both legs.
    pub fn normalize<R: Reducer<C> + ?Sized>(&self, reducer: &R) -> Result<Self> {
        let mut cache = LegCache::default();
        let mut out = Self::zero();
        for ((l, r), c) in &self.terms {
            let nl = cache.get(reducer, l)?;
            let nr = cache.get(reducer, r)?;
            for (ml, cl) in nl.terms() {
                let lc = cl.mul(c);
                for (mr, cr) in nr.terms() {
                    out.add_term(ml.clone(), mr.clone(), lc.mul(cr));
                }
            }
        }
        Ok(out)
    }

    /// Applies a scalar-valued map on the left leg: `(f (x) id)(self)`.
    pub fn contract_left(&self, f: impl Fn(&NcMonomial) -> C) -> NcPolynomial<C> {
        let mut out = NcPolynomial::zero();
        for ((l, r), c) in &self.terms {
            out.add_term(r.clone(), f(l).mul(c));
        }
        out
    }

    /// `(id (x) f)(self)`.
    pub fn contract_right(&self, f: impl Fn(&NcMonomial) -> C) -> NcPolynomial<C> {
        let mut out = NcPolynomial::zero();
        for ((l, r), c) in &self.terms {
            out.add_term(l.clone(), f(r).mul(c));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|((l, r), c)| json!({ "left": l.pairs(), "right": r.pairs(), "coeff": c.to_json() }))
            .collect();
        json!(terms)
    }
}

struct LegCache<C> {
    map: HashMap<NcMonomial, NcPolynomial<C>>,
}

impl<C> Default for LegCache<C> {
    fn default() -> Self {
        LegCache { map: HashMap::new() }
    }
}

impl<C: Coeff> LegCache<C> {
    fn get<R: Reducer<C> + ?Sized>(&mut self, reducer: &R, m: &NcMonomial) -> Result<NcPolynomial<C>> {
        if let Some(p) = self.map.get(m) {
            return Ok(p.clone());
        }
        let p = reducer.reduce(&NcPolynomial::term(m.clone(), reducer.one()))?;
        self.map.insert(m.clone(), p.clone());
        Ok(p)
    }
}

/// Componentwise product `(a (x) b)(c (x) d) = ac (x) bd`, legs re-normalized.
pub fn tensor_multiply<C: Coeff, R: Reducer<C> + ?Sized>(
    s: &TensorElement<C>,
    t: &TensorElement<C>,
    reducer: &R,
) -> Result<TensorElement<C>> {
    if let (Some(a), Some(b)) = (s.ring_witness(), t.ring_witness()) {
        if !a.same_ring(b) {
            return Err(Error::RingMismatch);
        }
    }
    let mut cache = LegCache::default();
    let mut out = TensorElement::zero();
    for ((a, b), c1) in &s.terms {
        for ((c, d), c2) in &t.terms {
            let left = cache.get(reducer, &a.concat(c))?;
            let right = cache.get(reducer, &b.concat(d))?;
            let coeff = c1.mul(c2);
            for (ml, cl) in left.terms() {
                let lc = cl.mul(&coeff);
                for (mr, cr) in right.terms() {
                    out.add_term(ml.clone(), mr.clone(), lc.mul(cr));
                }
            }
        }
    }
    Ok(out)
}

impl<C: Coeff> fmt::Display for TensorElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, ((l, r), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{l} (x) {r}")?;
            } else {
                write!(f, "({c})*{l} (x) {r}")?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for TensorElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Element of the triple tensor power, used for coassociativity.
#[derive(Clone, PartialEq, Debug)]
pub struct Tensor3<C> {
    terms: BTreeMap<(NcMonomial, NcMonomial, NcMonomial), C>,
}

impl<C: Coeff> Tensor3<C> {
    pub fn zero() -> Self {
        Tensor3 { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, a: NcMonomial, b: NcMonomial, c: NcMonomial, x: C) {
        if x.is_zero() {
            return;
        }
        let key = (a, b, c);
        match self.terms.get_mut(&key) {
            Some(e) => {
                let s = e.add(&x);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(key, x);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `(f (x) id)(t)` for a map `f` into the tensor square.
    pub fn expand_left(
        t: &TensorElement<C>,
        mut f: impl FnMut(&NcMonomial) -> Result<TensorElement<C>>,
    ) -> Result<Self> {
        let mut out = Self::zero();
        for (l, r, c) in t.terms() {
            for (a, b, x) in f(l)?.terms() {
                out.add_term(a.clone(), b.clone(), r.clone(), x.mul(c));
            }
        }
        Ok(out)
    }

    /// `(id (x) f)(t)`.
    pub fn expand_right(
        t: &TensorElement<C>,
        mut f: impl FnMut(&NcMonomial) -> Result<TensorElement<C>>,
    ) -> Result<Self> {
        let mut out = Self::zero();
        for (l, r, c) in t.terms() {
            for (a, b, x) in f(r)?.terms() {
                out.add_term(l.clone(), a.clone(), b.clone(), x.mul(c));
            }
        }
        Ok(out)
    }
}

impl<C: Coeff> fmt::Display for Tensor3<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, ((a, b, c), x)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({x})*{a} (x) {b} (x) {c}")?;
        }
        Ok(())
    }
}
