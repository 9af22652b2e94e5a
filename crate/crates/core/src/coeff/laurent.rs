use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};
use serde_json::json;

use super::{fmt_signed_terms, rat_int, rational_to_string, Coeff, IntPoly, Rational};

/// Laurent polynomial in `v` with rational coefficients.
///
/// Keys are powers of `v`; no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentScalar {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        LaurentScalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0)
    }

    pub fn from_int(k: i64) -> Self {
        Self::monomial(rat_int(k), 0)
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * v^e`.
    pub fn monomial(c: Rational, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentScalar { terms }
    }

    pub fn v_pow(e: i64) -> Self {
        Self::monomial(Rational::one(), e)
    }

    /// `q^k` at rank `n`, i.e. `v^{2nk}`.
    pub fn q_pow(n: usize, k: i64) -> Self {
        Self::v_pow(2 * n as i64 * k)
    }

    /// `(-q)^k` at rank `n`.
    pub fn neg_q_pow(n: usize, k: i64) -> Self {
        let s = Self::q_pow(n, k);
        if k.rem_euclid(2) == 1 {
            -s
        } else {
            s
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in it {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Units of `Q[v, v^-1]` are exactly the nonzero monomials.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(Self::monomial(c.recip(), -e))
    }

    pub fn pow(&self, k: i64) -> Option<Self> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        Some(acc)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentScalar { terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect() }
    }

    pub fn shift(&self, e: i64) -> Self {
        LaurentScalar { terms: self.terms.iter().map(|(k, a)| (k + e, a.clone())).collect() }
    }

    /// Evaluation at `v = 1`: the sum of all coefficients.
    pub fn eval_at_one(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Splits `self = v^shift * P(v)` with `P(0) != 0`.
    fn to_shifted_poly(&self) -> (i64, IntPoly) {
        let Some(lo) = self.min_exp() else {
            return (0, IntPoly::zero());
        };
        let len = (self.max_exp().unwrap() - lo + 1) as usize;
        let mut coeffs = vec![Rational::zero(); len];
        for (e, c) in &self.terms {
            coeffs[(e - lo) as usize] = c.clone();
        }
        (lo, IntPoly::new(coeffs))
    }

    fn from_shifted_poly(shift: i64, p: &IntPoly) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| (k as i64 + shift, c.clone())))
    }

    /// Exact quotient when `other` divides `self` in `Q[v, v^-1]`.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (sa, pa) = self.to_shifted_poly();
        let (sb, pb) = other.to_shifted_poly();
        let (q, r) = pa.div_rem(&pb);
        r.is_zero().then(|| Self::from_shifted_poly(sa - sb, &q))
    }

    /// Normalized gcd: shifted so the lowest exponent is zero, monic.
    pub fn gcd(&self, other: &Self) -> Self {
        let (_, pa) = self.to_shifted_poly();
        let (_, pb) = other.to_shifted_poly();
        Self::from_shifted_poly(0, &pa.gcd(&pb))
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LaurentScalar {
            type Output = LaurentScalar;
            fn $m(self, rhs: LaurentScalar) -> LaurentScalar { $tr::$m(&self, &rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}

impl Coeff for LaurentScalar {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inverse()
    }
    fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> =
            self.terms.iter().map(|(e, c)| json!([e, rational_to_string(c)])).collect();
        json!({ "terms": terms })
    }
}

impl Serialize for LaurentScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Terms<'a>(&'a BTreeMap<i64, Rational>);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for (e, c) in self.0 {
                    seq.serialize_element(&(e, rational_to_string(c)))?;
                }
                seq.end()
            }
        }
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LaurentScalar", 1)?;
        st.serialize_field("terms", &Terms(&self.terms))?;
        st.end()
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono = match *e {
                    0 => String::new(),
                    1 => "v".to_string(),
                    e => format!("v^{e}"),
                };
                (c, mono)
            })
            .collect();
        fmt_signed_terms(f, terms)
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({self})")
    }
}
