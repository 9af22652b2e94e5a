use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use serde_json::json;

use super::{fmt_signed_terms, rational_to_string, Coeff, CoeffRing, IntPoly, LaurentScalar, Rational};

fn divisors(m: u32) -> impl Iterator<Item = u32> {
    (1..=m).filter(move |d| m.is_multiple_of(*d))
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Arc<IntPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn cyclotomic_shared(m: u32) -> Arc<IntPoly> {
    assert!(m >= 1, "cyclotomic polynomial order must be positive");
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by every Phi_d with d a proper divisor of m.
    let mut p = IntPoly::monomial(Rational::one(), m as usize).sub(&IntPoly::one());
    for d in divisors(m).filter(|&d| d < m) {
        let (q, r) = p.div_rem(&cyclotomic_shared(d));
        debug_assert!(r.is_zero());
        p = q;
    }
    let p = Arc::new(p);
    cyclotomic_cache().lock().unwrap().insert(m, p.clone());
    p
}

/// The `m`-th cyclotomic polynomial `Phi_m(x)`.
pub fn cyclotomic_poly(m: u32) -> IntPoly {
    (*cyclotomic_shared(m)).clone()
}

/// The field `Q(zeta_m) = Q[x]/(Phi_m(x))`, with `v` mapped to `x`.
#[derive(Clone)]
pub struct CyclotomicRing {
    m: u32,
    modulus: Arc<IntPoly>,
}

impl CyclotomicRing {
    pub fn new(m: u32) -> Self {
        CyclotomicRing { m, modulus: cyclotomic_shared(m) }
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    /// Degree of the field over `Q`, i.e. Euler's phi of `m`.
    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    fn wrap(&self, residue: IntPoly) -> CyclotomicScalar {
        CyclotomicScalar { m: self.m, modulus: self.modulus.clone(), residue }
    }

    /// Reduces an arbitrary polynomial in `x` into the field.
    pub fn reduce(&self, p: &IntPoly) -> CyclotomicScalar {
        self.wrap(p.rem(&self.modulus))
    }

    /// The distinguished primitive root `zeta_m` (the image of `v`).
    pub fn zeta(&self) -> CyclotomicScalar {
        self.reduce(&IntPoly::x())
    }

    pub fn from_residue(&self, residue: Vec<Rational>) -> CyclotomicScalar {
        self.reduce(&IntPoly::new(residue))
    }
}

impl fmt::Debug for CyclotomicRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicRing({})", self.m)
    }
}

impl CoeffRing for CyclotomicRing {
    type Elem = CyclotomicScalar;

    fn zero(&self) -> CyclotomicScalar {
        self.wrap(IntPoly::zero())
    }
    fn one(&self) -> CyclotomicScalar {
        self.reduce(&IntPoly::one())
    }
    fn embed(&self, s: &LaurentScalar) -> CyclotomicScalar {
        specialize_in(self, s)
    }
    fn name(&self) -> String {
        format!("cyclotomic:{}", self.m)
    }
}

/// An element of `Q(zeta_m)`, stored as its canonical residue of degree
/// below `phi(m)`.
#[derive(Clone)]
pub struct CyclotomicScalar {
    m: u32,
    modulus: Arc<IntPoly>,
    residue: IntPoly,
}

impl CyclotomicScalar {
    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn residue(&self) -> &IntPoly {
        &self.residue
    }

    fn ring(&self) -> CyclotomicRing {
        CyclotomicRing { m: self.m, modulus: self.modulus.clone() }
    }

    fn check_ring(&self, other: &Self) {
        assert_eq!(self.m, other.m, "cyclotomic ring mismatch");
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut acc = self.ring().one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = Coeff::mul(&acc, &base);
            }
            base = Coeff::mul(&base, &base);
            k >>= 1;
        }
        acc
    }
}

impl PartialEq for CyclotomicScalar {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.residue == other.residue
    }
}
impl Eq for CyclotomicScalar {}

impl std::hash::Hash for CyclotomicScalar {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.m.hash(h);
        self.residue.hash(h);
    }
}

impl Coeff for CyclotomicScalar {
    fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }
    fn is_one(&self) -> bool {
        self.residue == IntPoly::one()
    }
    fn add(&self, other: &Self) -> Self {
        self.check_ring(other);
        // Degrees stay below phi(m); no reduction needed.
        CyclotomicScalar { residue: self.residue.add(&other.residue), ..self.clone() }
    }
    fn sub(&self, other: &Self) -> Self {
        self.check_ring(other);
        CyclotomicScalar { residue: self.residue.sub(&other.residue), ..self.clone() }
    }
    fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        let residue = self.residue.mul(&other.residue).rem(&self.modulus);
        CyclotomicScalar { residue, ..self.clone() }
    }
    fn neg(&self) -> Self {
        CyclotomicScalar { residue: self.residue.neg(), ..self.clone() }
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.residue.is_zero() {
            return None;
        }
        let (g, s) = self.residue.ext_gcd_mod(&self.modulus);
        debug_assert_eq!(g, IntPoly::one(), "Phi_m is irreducible");
        Some(CyclotomicScalar { residue: s, ..self.clone() })
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.m == other.m
    }
    fn to_json(&self) -> serde_json::Value {
        let residue: Vec<_> = self.residue.coeffs().iter().map(rational_to_string).collect();
        json!({ "m": self.m, "residue": residue })
    }
}

impl fmt::Display for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self
            .residue
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let mono = match k {
                    0 => String::new(),
                    1 => "z".to_string(),
                    _ => format!("z^{k}"),
                };
                (c, mono)
            })
            .collect();
        fmt_signed_terms(f, terms)
    }
}

impl fmt::Debug for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{}({self})", self.m)
    }
}

fn specialize_in(ring: &CyclotomicRing, s: &LaurentScalar) -> CyclotomicScalar {
    let m = ring.m as i64;
    // Fold exponents into [0, m) using x^m = 1, then reduce modulo Phi_m.
    let mut folded = vec![Rational::zero(); ring.m as usize];
    for (e, c) in s.terms() {
        folded[e.rem_euclid(m) as usize] += c;
    }
    ring.reduce(&IntPoly::new(folded))
}

/// Evaluates `s` at `v = zeta_m`.
pub fn specialize(s: &LaurentScalar, m: u32) -> CyclotomicScalar {
    specialize_in(&CyclotomicRing::new(m), s)
}
