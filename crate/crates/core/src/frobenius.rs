//! The classical ring `O(SLn)`, the Frobenius map `x_ij -> u_ij^m` into
//! `O_q(SLn)` at a primitive root of unity, and the spanning-set count.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::coeff::{Coeff, CoeffRing, CyclotomicRing, CyclotomicScalar, LaurentScalar, Rational};
use crate::error::{Error, Result};
use crate::ncalg::{is_central, tensor_multiply, GeneratorId, NcMonomial, NcPolynomial, TensorElement};
use crate::qmatrix::QMatrixAlgebra;
use crate::qsln::{exponent_matrices, ExponentMatrix, SlnAlgebra};
use crate::report::{CheckOutcome, CheckReport};
use crate::skeinconst::Permutation;

/// Polynomial in the commuting entries `x_ij`, rational coefficients.
///
/// Values produced by [`classical_normal_form`] are supported on exponent
/// matrices with some zero diagonal entry; hand-built values need not be.
#[derive(Clone, PartialEq, Eq)]
pub struct CommutativeSlnPoly {
    n: usize,
    terms: BTreeMap<ExponentMatrix, Rational>,
}

impl CommutativeSlnPoly {
    pub fn zero(n: usize) -> Self {
        CommutativeSlnPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(ExponentMatrix::zero(n), Rational::one())
    }

    pub fn monomial(m: ExponentMatrix, c: Rational) -> Self {
        let mut p = Self::zero(m.n());
        p.add_term(m, c);
        p
    }

    pub fn x(n: usize, i: usize, j: usize) -> Self {
        Self::monomial(ExponentMatrix::unit(n, i, j), Rational::one())
    }

    /// `det X = sum_s sgn(s) x_{1 s(1)} ... x_{n s(n)}`.
    pub fn det(n: usize) -> Self {
        let mut p = Self::zero(n);
        for s in Permutation::all(n) {
            let mut m = ExponentMatrix::zero(n);
            for t in 1..=n {
                m.set(t, s.image(t), 1);
            }
            p.add_term(m, Rational::from_integer(s.sign().into()));
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentMatrix, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: ExponentMatrix, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut m = a.clone();
                for i in 1..=self.n {
                    for j in 1..=self.n {
                        m.set(i, j, a.get(i, j) + b.get(i, j));
                    }
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    /// Evaluation at the identity matrix: `x_ij -> delta_ij`.
    pub fn counit(&self) -> Rational {
        self.terms
            .iter()
            .filter(|(m, _)| (1..=self.n).all(|i| (1..=self.n).all(|j| i == j || m.get(i, j) == 0)))
            .map(|(_, c)| c.clone())
            .sum()
    }
}

impl fmt::Display for CommutativeSlnPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})", crate::coeff::rational_to_string(c))?;
            for i in 1..=self.n {
                for j in 1..=self.n {
                    match m.get(i, j) {
                        0 => {}
                        1 => write!(f, "*x[{i},{j}]")?,
                        e => write!(f, "*x[{i},{j}]^{e}")?,
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CommutativeSlnPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Reduction modulo `det X - 1`: `x_11 ... x_nn -> 1 - sum_{s != id} sgn(s) prod x_{t s(t)}`
/// until some diagonal exponent of every term vanishes.
pub fn classical_normal_form(p: &CommutativeSlnPoly) -> CommutativeSlnPoly {
    let n = p.n;
    let rest: Vec<(ExponentMatrix, Rational)> = Permutation::all(n)
        .filter(|s| s.length() > 0)
        .map(|s| {
            let mut m = ExponentMatrix::zero(n);
            for t in 1..=n {
                m.set(t, s.image(t), 1);
            }
            (m, Rational::from_integer((-s.sign()).into()))
        })
        .collect();
    let mut pending = p.terms.clone();
    let mut out = CommutativeSlnPoly::zero(n);
    while let Some((m, c)) = pending.pop_last() {
        let Some(lower) = m.minus_identity() else {
            out.add_term(m, c);
            continue;
        };
        let mut add = |k: ExponentMatrix, a: Rational| {
            let e = pending.entry(k.clone()).or_insert_with(Rational::zero);
            *e += a;
            if e.is_zero() {
                pending.remove(&k);
            }
        };
        for (perm, sign) in &rest {
            let mut k = lower.clone();
            for i in 1..=n {
                for j in 1..=n {
                    k.set(i, j, lower.get(i, j) + perm.get(i, j));
                }
            }
            add(k, sign * &c);
        }
        add(lower, c);
    }
    out
}

/// `O_q(SLn)` at `v = zeta_m`, so `q = zeta_m^{2n}`.
pub struct RootOfUnityContext {
    n: usize,
    m: u32,
    v_value: CyclotomicScalar,
    q_value: CyclotomicScalar,
    algebra: SlnAlgebra<CyclotomicRing>,
    powers: OnceLock<Vec<NcPolynomial<CyclotomicScalar>>>,
}

impl fmt::Debug for RootOfUnityContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootOfUnityContext").field("n", &self.n).field("m", &self.m).finish()
    }
}

impl RootOfUnityContext {
    pub fn new(n: usize, m: u32) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Precondition("rank and order must be positive".into()));
        }
        if (m as u64).gcd(&(2 * n as u64)) != 1 {
            return Err(Error::Precondition(format!("gcd({m}, {}) != 1", 2 * n)));
        }
        let ring = CyclotomicRing::new(m);
        let v_value = ring.zeta();
        let q_value = ring.v_pow(2 * n as i64);
        let algebra = SlnAlgebra::new(QMatrixAlgebra::build_over(n, ring)?)?;
        Ok(RootOfUnityContext { n, m, v_value, q_value, algebra, powers: OnceLock::new() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn v_value(&self) -> &CyclotomicScalar {
        &self.v_value
    }

    pub fn q_value(&self) -> &CyclotomicScalar {
        &self.q_value
    }

    pub fn algebra(&self) -> &SlnAlgebra<CyclotomicRing> {
        &self.algebra
    }

    fn one(&self) -> CyclotomicScalar {
        self.algebra.ring().one()
    }

    fn power(&self, p: &NcPolynomial<CyclotomicScalar>, e: u32) -> Result<NcPolynomial<CyclotomicScalar>> {
        let mut acc = NcPolynomial::constant(self.one());
        for _ in 0..e {
            acc = self.algebra.multiply(&acc, p)?;
        }
        Ok(acc)
    }

    /// `u_ij^m` for every generator, row-major.
    pub fn generator_powers(&self) -> Result<&[NcPolynomial<CyclotomicScalar>]> {
        if let Some(p) = self.powers.get() {
            return Ok(p);
        }
        let powers = GeneratorId::all(self.n)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|g| self.power(&self.algebra.gen(g.row(), g.col()), self.m))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.powers.get_or_init(|| powers))
    }

    fn power_of(&self, i: usize, j: usize) -> Result<&NcPolynomial<CyclotomicScalar>> {
        Ok(&self.generator_powers()?[GeneratorId::new(i, j).index(self.n)])
    }
}

/// `x_ij -> u_ij^m`, extended multiplicatively (the images commute), then
/// reduced in `O_q(SLn)`.
pub fn frobenius_image(p: &CommutativeSlnPoly, ctx: &RootOfUnityContext) -> Result<NcPolynomial<CyclotomicScalar>> {
    if p.n != ctx.n {
        return Err(Error::Precondition(format!("rank {} polynomial in a rank {} context", p.n, ctx.n)));
    }
    let ring = ctx.algebra.ring();
    let mut out = NcPolynomial::zero();
    for (mhat, c) in p.terms() {
        let mut acc = NcPolynomial::constant(ctx.one());
        for g in GeneratorId::all(ctx.n) {
            for _ in 0..mhat.get(g.row(), g.col()) {
                acc = ctx.algebra.multiply(&acc, ctx.power_of(g.row(), g.col())?)?;
            }
        }
        out.add_scaled(&acc, &ring.embed(&LaurentScalar::from_rational(c.clone())));
    }
    ctx.algebra.sln_normal_form(&out)
}

fn signed_power_sum(ctx: &RootOfUnityContext, by_rows: bool) -> Result<NcPolynomial<CyclotomicScalar>> {
    let alg = &ctx.algebra;
    let mut out = NcPolynomial::zero();
    for s in Permutation::all(ctx.n) {
        let mut acc = NcPolynomial::constant(ctx.one());
        for t in 1..=ctx.n {
            let (i, j) = if by_rows { (t, s.image(t)) } else { (s.image(t), t) };
            acc = alg.multiply(&acc, ctx.power_of(i, j)?)?;
        }
        out.add_scaled(&acc, &alg.ring().from_int(s.sign()));
    }
    alg.sln_normal_form(&out)
}

fn power_identities_for_generator(ctx: &RootOfUnityContext, g: GeneratorId) -> Result<Vec<CheckOutcome>> {
    let alg = &ctx.algebra;
    let (i, j) = (g.row(), g.col());
    let mut delta = TensorElement::unit(ctx.one());
    let dg = alg.coproduct(&alg.gen(i, j))?;
    for _ in 0..ctx.m {
        delta = tensor_multiply(&delta, &dg, alg)?;
    }
    let mut want = TensorElement::zero();
    for k in 1..=ctx.n {
        want.add_scaled(&TensorElement::from_pair(ctx.power_of(i, k)?, ctx.power_of(k, j)?), &ctx.one());
    }
    let want = want.normalize(alg)?;
    let b = CheckOutcome::from_bool(format!("(b) Delta(u[{i},{j}]^m)"), delta == want, || {
        format!("lhs = {delta}; rhs = {want}")
    });
    let p = ctx.power_of(i, j)?;
    let c = match crate::ncalg::central_obstruction(p, alg)? {
        None => CheckOutcome::pass(format!("(c) u[{i},{j}]^m central")),
        Some((h, w)) => CheckOutcome::fail(format!("(c) u[{i},{j}]^m central"), format!("[p, {h}] reduces to {w}")),
    };
    debug_assert_eq!(c.passed, is_central(p, alg)?);
    Ok(vec![b, c])
}

/// The three root-of-unity identities: (a) the signed sums of `m`-th powers
/// equal 1, (b) `u_ij^m` is group-like in the matrix sense, (c) `u_ij^m` is
/// central.
pub fn check_power_identities(ctx: &RootOfUnityContext) -> Result<CheckReport> {
    let one = NcPolynomial::constant(ctx.one());
    let mut outcomes = vec![
        CheckOutcome::compare("(a) sum over rows", &signed_power_sum(ctx, true)?, &one),
        CheckOutcome::compare("(a) sum over columns", &signed_power_sum(ctx, false)?, &one),
    ];
    let per_gen = GeneratorId::all(ctx.n)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&g| power_identities_for_generator(ctx, g))
        .collect::<Result<Vec<_>>>()?;
    outcomes.extend(per_gen.into_iter().flatten());
    Ok(CheckReport::new("frobenius", json!({ "n": ctx.n, "m": ctx.m }), outcomes))
}

/// Images of the basis monomials of degree at most `degree_bound`: each must
/// be a nonzero multiple of the single basis monomial `b(m * mhat)`, and
/// distinct inputs must give distinct images.
pub fn injectivity_report(ctx: &RootOfUnityContext, degree_bound: u32) -> Result<CheckReport> {
    let inputs: Vec<ExponentMatrix> = (0..=degree_bound)
        .flat_map(|d| exponent_matrices(ctx.n, d))
        .filter(ExponentMatrix::is_sln_basis)
        .collect();
    let images = inputs
        .par_iter()
        .map(|mhat| frobenius_image(&CommutativeSlnPoly::monomial(mhat.clone(), Rational::one()), ctx))
        .collect::<Result<Vec<_>>>()?;
    let mut outcomes = Vec::new();
    let mut seen = HashSet::new();
    let mut distinct = true;
    for (mhat, img) in inputs.iter().zip(&images) {
        let mut want = mhat.clone();
        for i in 1..=ctx.n {
            for j in 1..=ctx.n {
                want.set(i, j, ctx.m * mhat.get(i, j));
            }
        }
        let terms: Vec<(&NcMonomial, &CyclotomicScalar)> = img.terms().collect();
        let ok = terms.len() == 1 && *terms[0].0 == want.to_monomial() && !terms[0].1.is_zero();
        if !ok {
            outcomes.push(CheckOutcome::fail(format!("image of {mhat:?}"), format!("{img}")));
        }
        distinct &= seen.insert(img.terms().map(|(m, _)| m.clone()).collect::<Vec<_>>());
    }
    outcomes.push(CheckOutcome::from_bool(
        format!("{} basis images are single basis monomials", inputs.len()),
        outcomes.is_empty(),
        || "see above".into(),
    ));
    outcomes.push(CheckOutcome::from_bool("images pairwise distinct", distinct, || "collision".into()));
    Ok(CheckReport::new(
        "injectivity",
        json!({ "n": ctx.n, "m": ctx.m, "degree_bound": degree_bound }),
        outcomes,
    ))
}

pub fn check_injectivity_on_basis(ctx: &RootOfUnityContext, degree_bound: u32) -> Result<bool> {
    Ok(injectivity_report(ctx, degree_bound)?.passed)
}

/// Largest `m^{n^2}` for which the tuples are enumerated directly.
pub const ENUMERATION_LIMIT: u64 = 50_000_000;

/// `m^{n^2} - (m-1)^n m^{n^2-n}`.
pub fn spanning_set_formula(n: usize, m: u32) -> BigUint {
    let mb = BigUint::from(m);
    let n2 = (n * n) as u32;
    let total = mb.pow(n2);
    let full_diag = BigUint::from(m.saturating_sub(1)).pow(n as u32) * mb.pow(n2 - n as u32);
    total - full_diag
}

/// Direct count of tuples `0 <= m_ij <= m-1` with some `m_ii = 0`, or
/// `None` when there are more than [`ENUMERATION_LIMIT`] tuples.
pub fn spanning_set_enumeration(n: usize, m: u32) -> Option<u64> {
    let slots = n * n;
    let total = (m as u64).checked_pow(slots as u32)?;
    if total > ENUMERATION_LIMIT {
        return None;
    }
    if m == 0 {
        return Some(0);
    }
    let diag: Vec<usize> = (0..n).map(|i| i * n + i).collect();
    let mut tuple = vec![0u32; slots];
    let mut count = 0u64;
    loop {
        if diag.iter().any(|&k| tuple[k] == 0) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == slots {
                return Some(count);
            }
            tuple[k] += 1;
            if tuple[k] < m {
                break;
            }
            tuple[k] = 0;
            k += 1;
        }
    }
}

/// The formula value; errors if the enumeration (when feasible) disagrees.
pub fn spanning_set_count(n: usize, m: u32) -> Result<BigUint> {
    if n == 0 || m == 0 {
        return Err(Error::Precondition("rank and order must be positive".into()));
    }
    let f = spanning_set_formula(n, m);
    if let Some(e) = spanning_set_enumeration(n, m) {
        if BigUint::from(e) != f {
            return Err(Error::Reduction(format!("formula {f} disagrees with enumeration {e}")));
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat_int;

    #[test]
    fn classical_examples() {
        for n in 1..=3 {
            assert_eq!(classical_normal_form(&CommutativeSlnPoly::det(n)), CommutativeSlnPoly::one(n));
        }
        let p = CommutativeSlnPoly::x(2, 1, 1).mul(&CommutativeSlnPoly::x(2, 2, 2));
        let want = CommutativeSlnPoly::one(2).add(&CommutativeSlnPoly::x(2, 1, 2).mul(&CommutativeSlnPoly::x(2, 2, 1)));
        assert_eq!(classical_normal_form(&p), want);
        let fixed = CommutativeSlnPoly::x(2, 1, 1).mul(&CommutativeSlnPoly::x(2, 1, 2));
        assert_eq!(classical_normal_form(&fixed), fixed);
    }

    #[test]
    fn context_gate() {
        assert!(matches!(RootOfUnityContext::new(2, 2), Err(Error::Precondition(_))));
        assert!(RootOfUnityContext::new(2, 4).is_err());
        assert!(RootOfUnityContext::new(3, 9).is_err());
        let ctx = RootOfUnityContext::new(2, 3).unwrap();
        assert_eq!(ctx.q_value(), &ctx.v_value().pow(4));
    }

    #[test]
    fn images() {
        let ctx = RootOfUnityContext::new(2, 3).unwrap();
        let img = frobenius_image(&CommutativeSlnPoly::x(2, 1, 2), &ctx).unwrap();
        let one = ctx.algebra().ring().one();
        assert_eq!(img, NcPolynomial::term(NcMonomial::from_pairs(&[(1, 2); 3]), one.clone()));
        assert_eq!(frobenius_image(&CommutativeSlnPoly::one(2), &ctx).unwrap(), NcPolynomial::constant(one.clone()));
        assert_eq!(frobenius_image(&CommutativeSlnPoly::det(2), &ctx).unwrap(), NcPolynomial::constant(one));
    }

    #[test]
    fn power_identities_small() {
        let ctx = RootOfUnityContext::new(2, 3).unwrap();
        let r = check_power_identities(&ctx).unwrap();
        assert!(r.passed, "{:?}", r.first_failure());
        assert!(check_injectivity_on_basis(&ctx, 2).unwrap());
    }

    #[test]
    fn counts() {
        assert_eq!(spanning_set_count(1, 7).unwrap(), BigUint::from(1u32));
        assert_eq!(spanning_set_count(2, 3).unwrap(), BigUint::from(45u32));
        assert_eq!(spanning_set_count(2, 5).unwrap(), BigUint::from(225u32));
        assert_eq!(spanning_set_enumeration(2, 3), Some(45));
        assert!(spanning_set_enumeration(5, 9).is_none());
        assert!(spanning_set_count(5, 9).unwrap() > BigUint::from(0u32));
    }

    #[test]
    fn classical_counit() {
        let p = CommutativeSlnPoly::det(3);
        assert_eq!(p.counit(), rat_int(1));
        assert_eq!(CommutativeSlnPoly::x(3, 1, 2).counit(), rat_int(0));
    }
}
