//! The quantum matrix bialgebra `O_q(M(n))`.
//!
//! Its defining relations are not transcribed by hand: they are expanded
//! entrywise from the R-matrix exchange relation `(u (x) u) R = R (u (x) u)`,
//! reduced to an independent set, and oriented into a quadratic rewriting
//! system whose normal words are the row-major ordered PBW monomials.

use std::collections::BTreeMap;

use crate::coeff::{CoeffRing, CyclotomicRing, LaurentRing, LaurentScalar};
use crate::error::{Error, Result};
use crate::ncalg::{GeneratorId, NcMonomial, NcPolynomial, Reducer, RewriteRule, RewriteSystem};
use crate::skeinconst::Permutation;

/// Degrees up to which the PBW dimension count is validated at build time.
pub const VALIDATION_DEPTH: usize = 3;

/// The `n^2 x n^2` R-matrix, keyed by `(i, j, l, k)` for the entry
/// `R^{ij}_{lk}`. Absent entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix {
    n: usize,
    entries: BTreeMap<(usize, usize, usize, usize), LaurentScalar>,
}

impl RMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `R^{ij}_{lk}`.
    pub fn get(&self, i: usize, j: usize, l: usize, k: usize) -> LaurentScalar {
        self.entries.get(&(i, j, l, k)).cloned().unwrap_or_default()
    }

    /// Entry of the matrix that enters the exchange relation, in row `(a, b)`
    /// and column `(c, d)`: `R^{ba}_{cd}`, i.e. the flip composed with `R`.
    /// Without the flip the exchange relation has 10 independent solutions at
    /// rank 2 instead of 6; flipping the columns instead inverts `q` and
    /// `det_q` is no longer central.
    pub fn matrix_entry(&self, row: (usize, usize), col: (usize, usize)) -> LaurentScalar {
        self.get(row.1, row.0, col.0, col.1)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize, usize), &LaurentScalar)> {
        self.entries.iter()
    }
}

/// `R^{ij}_{lk} = q^{-1/n} (q^{d(i,j)} d(j,k) d(i,l) + (q - q^{-1}) [j < i] d(j,l) d(i,k))`
/// with `q^{1/n} = v^2`.
pub fn r_matrix(n: usize) -> RMatrix {
    let q = |k| LaurentScalar::q_pow(n, k);
    let prefactor = LaurentScalar::v_pow(-2);
    let q_minus_qinv = &q(1) - &q(-1);
    let mut entries = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            for l in 1..=n {
                for k in 1..=n {
                    let mut e = LaurentScalar::zero();
                    if j == k && i == l {
                        e = &e + &q((i == j) as i64);
                    }
                    if j < i && j == l && i == k {
                        e = &e + &q_minus_qinv;
                    }
                    if !e.is_zero() {
                        entries.insert((i, j, l, k), &prefactor * &e);
                    }
                }
            }
        }
    }
    RMatrix { n, entries }
}

fn u2(a: (usize, usize), b: (usize, usize)) -> NcMonomial {
    NcMonomial::from_pairs(&[a, b])
}

/// The nonzero entries of `(u (x) u) R - R (u (x) u)` with the common
/// `q^{-1/n}` cancelled, in entry order `(i, k; j, l)`.
pub fn raw_frt_relations(n: usize) -> Vec<NcPolynomial<LaurentScalar>> {
    let r = r_matrix(n);
    let cancel = LaurentScalar::v_pow(2);
    let mut out = Vec::new();
    for i in 1..=n {
        for k in 1..=n {
            for j in 1..=n {
                for l in 1..=n {
                    let mut rel = NcPolynomial::zero();
                    for a in 1..=n {
                        for b in 1..=n {
                            // ((u (x) u) R)^{ik}_{jl}
                            let c = r.matrix_entry((a, b), (j, l));
                            if !c.is_zero() {
                                rel.add_term(u2((i, a), (k, b)), &c * &cancel);
                            }
                            // (R (u (x) u))^{ik}_{jl}
                            let c = r.matrix_entry((i, k), (a, b));
                            if !c.is_zero() {
                                rel.add_term(u2((a, j), (b, l)), -(&c * &cancel));
                            }
                        }
                    }
                    if !rel.is_zero() {
                        out.push(rel);
                    }
                }
            }
        }
    }
    out
}

fn content(p: &NcPolynomial<LaurentScalar>) -> LaurentScalar {
    let mut g = LaurentScalar::zero();
    for (_, c) in p.terms() {
        g = if g.is_zero() { c.clone() } else { g.gcd(c) };
    }
    g
}

fn primitive_part(p: &NcPolynomial<LaurentScalar>) -> NcPolynomial<LaurentScalar> {
    let g = content(p);
    if g.is_zero() {
        return p.clone();
    }
    p.map_coeffs(|c| c.checked_div(&g).expect("content divides every coefficient"))
}

/// Fraction-free elimination of every term of `r` that is the leading
/// monomial of an accepted relation.
fn reduce_against(
    mut r: NcPolynomial<LaurentScalar>,
    accepted: &BTreeMap<NcMonomial, NcPolynomial<LaurentScalar>>,
    skip: Option<&NcMonomial>,
) -> NcPolynomial<LaurentScalar> {
    loop {
        let hit = r
            .terms()
            .rev()
            .find(|(m, _)| Some(*m) != skip && accepted.contains_key(*m))
            .map(|(m, c)| (m.clone(), c.clone()));
        let Some((m, c)) = hit else {
            return r;
        };
        let pivot = &accepted[&m];
        let lead = pivot.coeff(&m).unwrap().clone();
        let mut next = r.scale(&lead);
        next.add_scaled(pivot, &-c);
        r = primitive_part(&next);
    }
}

/// An independent set of FRT relations, each monic with a distinct leading
/// monomial and no other term divisible by another relation's leading word.
pub fn frt_relations(n: usize) -> Result<Vec<NcPolynomial<LaurentScalar>>> {
    let mut accepted: BTreeMap<NcMonomial, NcPolynomial<LaurentScalar>> = BTreeMap::new();
    for rel in raw_frt_relations(n) {
        let r = reduce_against(primitive_part(&rel), &accepted, None);
        if let Some((lead, _)) = r.leading() {
            accepted.insert(lead.clone(), r);
        }
    }
    // Inter-reduce into reduced echelon form.
    let leads: Vec<NcMonomial> = accepted.keys().cloned().collect();
    for lead in &leads {
        let r = accepted.remove(lead).unwrap();
        let r = reduce_against(r, &accepted, Some(lead));
        accepted.insert(lead.clone(), r);
    }
    let mut out = Vec::with_capacity(accepted.len());
    for (lead, r) in accepted {
        let c = r.coeff(&lead).unwrap();
        let inv = c.inverse().ok_or_else(|| {
            Error::CompletionInconsistency(format!("relation with leading word {lead} has non-unit leading coefficient {c}"))
        })?;
        out.push(r.scale(&inv));
    }
    Ok(out)
}

/// `O_q(M(n))` over the coefficient ring `R`.
#[derive(Clone, Debug)]
pub struct QMatrixAlgebra<R: CoeffRing> {
    n: usize,
    ring: R,
    system: RewriteSystem<R::Elem>,
    relations: Vec<NcPolynomial<R::Elem>>,
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of degree-`d` monomials in `g` commuting variables.
pub fn commutative_count(g: usize, d: usize) -> u128 {
    binomial((g + d) as u128 - 1, d as u128)
}

impl QMatrixAlgebra<LaurentRing> {
    pub fn build(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("rank must be at least 1".into()));
        }
        let mut rules = Vec::new();
        for rel in frt_relations(n)? {
            let (lead, _) = rel.leading().unwrap();
            let lhs: [GeneratorId; 2] = lead
                .word()
                .try_into()
                .map_err(|_| Error::CompletionInconsistency(format!("non-quadratic leading word {lead}")))?;
            let mut rhs = rel.neg();
            rhs.add_term(lead.clone(), LaurentScalar::one());
            rules.push(RewriteRule { lhs, rhs });
        }
        let system = RewriteSystem::new(n, LaurentScalar::one(), rules)?;
        let alg = QMatrixAlgebra { n, ring: LaurentRing, system, relations: raw_frt_relations(n) };
        alg.validate()?;
        Ok(alg)
    }
}

impl<R: CoeffRing> QMatrixAlgebra<R> {
    /// Builds over `Q[v, v^-1]` and maps every coefficient into `ring`.
    pub fn build_over(n: usize, ring: R) -> Result<Self> {
        QMatrixAlgebra::build(n)?.change_ring(ring)
    }

    pub fn change_ring<S: CoeffRing>(&self, ring: S) -> Result<QMatrixAlgebra<S>>
    where
        R: CoeffRing<Elem = LaurentScalar>,
    {
        let rules = self
            .system
            .rules()
            .map(|r| RewriteRule { lhs: r.lhs, rhs: r.rhs.map_coeffs(|c| ring.embed(c)) })
            .collect();
        let system = RewriteSystem::new(self.n, ring.one(), rules)?;
        let relations = self.relations.iter().map(|p| p.map_coeffs(|c| ring.embed(c))).collect();
        let alg = QMatrixAlgebra { n: self.n, ring, system, relations };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        let g = n * n;
        // Leading words must be exactly the descending pairs, so normal words
        // are the sorted words.
        for a in GeneratorId::all(n) {
            for b in GeneratorId::all(n) {
                if self.system.rule_for(a, b).is_some() != (a > b) {
                    return Err(Error::CompletionInconsistency(format!(
                        "leading-word set differs from the descending pairs at {a:?}{b:?}"
                    )));
                }
            }
        }
        for d in 0..=VALIDATION_DEPTH {
            let got = self.system.graded_dimension(d);
            let want = commutative_count(g, d);
            if got != want {
                return Err(Error::CompletionInconsistency(format!(
                    "graded dimension {got} in degree {d}, expected {want}"
                )));
            }
        }
        if let Err(w) = self.system.check_overlaps() {
            return Err(Error::CompletionInconsistency(format!("overlap {w} does not resolve")));
        }
        if let Some(rel) = self.relations.iter().find(|r| !self.system.normal_form(r).is_zero()) {
            return Err(Error::CompletionInconsistency(format!("relation {rel} does not reduce to zero")));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn system(&self) -> &RewriteSystem<R::Elem> {
        &self.system
    }

    /// The raw entrywise relations, before deduplication.
    pub fn relations(&self) -> &[NcPolynomial<R::Elem>] {
        &self.relations
    }

    pub fn normal_form(&self, p: &NcPolynomial<R::Elem>) -> NcPolynomial<R::Elem> {
        self.system.normal_form(p)
    }

    pub fn graded_dimension(&self, d: usize) -> u128 {
        self.system.graded_dimension(d)
    }

    pub fn gen(&self, i: usize, j: usize) -> NcPolynomial<R::Elem> {
        NcPolynomial::gen(GeneratorId::new(i, j), self.ring.one())
    }

    pub fn embed(&self, p: &NcPolynomial<LaurentScalar>) -> NcPolynomial<R::Elem> {
        p.map_coeffs(|c| self.ring.embed(c))
    }

    pub fn quantum_det(&self, form: DetForm) -> NcPolynomial<R::Elem> {
        self.embed(&quantum_det(self.n, form))
    }
}

impl<R: CoeffRing> Reducer<R::Elem> for QMatrixAlgebra<R> {
    fn reduce(&self, p: &NcPolynomial<R::Elem>) -> Result<NcPolynomial<R::Elem>> {
        self.system.reduce(p)
    }
    fn one(&self) -> R::Elem {
        self.ring.one()
    }
    fn rank(&self) -> usize {
        self.n
    }
}

pub fn build_algebra(n: usize) -> Result<QMatrixAlgebra<LaurentRing>> {
    QMatrixAlgebra::build(n)
}

/// Row/column expansion of the quantum determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetForm {
    /// `sum (-q)^{l(s)} u_{1,s(1)} ... u_{n,s(n)}`
    Column,
    /// `sum (-q)^{l(s)} u_{s(1),1} ... u_{s(n),n}`
    Row,
}

fn det_of(n: usize, rows: &[usize], cols: &[usize], form: DetForm) -> NcPolynomial<LaurentScalar> {
    let k = rows.len();
    let mut out = NcPolynomial::zero();
    for sigma in Permutation::all(k) {
        let word: Vec<(usize, usize)> = (0..k)
            .map(|t| match form {
                DetForm::Column => (rows[t], cols[sigma.image(t + 1) - 1]),
                DetForm::Row => (rows[sigma.image(t + 1) - 1], cols[t]),
            })
            .collect();
        out.add_term(NcMonomial::from_pairs(&word), LaurentScalar::neg_q_pow(n, sigma.length() as i64));
    }
    out
}

pub fn quantum_det(n: usize, form: DetForm) -> NcPolynomial<LaurentScalar> {
    let idx: Vec<usize> = (1..=n).collect();
    det_of(n, &idx, &idx, form)
}

fn retained(n: usize, removed: &[usize]) -> Result<Vec<usize>> {
    let mut seen = vec![false; n + 1];
    for &r in removed {
        if !(1..=n).contains(&r) || seen[r] {
            return Err(Error::Precondition(format!("invalid index set {removed:?} for rank {n}")));
        }
        seen[r] = true;
    }
    Ok((1..=n).filter(|&k| !seen[k]).collect())
}

/// Quantum determinant of the submatrix left after deleting `removed_rows`
/// and `removed_cols`, indices kept increasing. `q` stays the rank-`n` one.
pub fn quantum_minor(n: usize, removed_rows: &[usize], removed_cols: &[usize]) -> Result<NcPolynomial<LaurentScalar>> {
    if removed_rows.len() != removed_cols.len() {
        return Err(Error::MinorSizeMismatch { rows: removed_rows.len(), cols: removed_cols.len() });
    }
    let rows = retained(n, removed_rows)?;
    let cols = retained(n, removed_cols)?;
    Ok(det_of(n, &rows, &cols, DetForm::Column))
}

pub fn is_central<R: CoeffRing>(p: &NcPolynomial<R::Elem>, alg: &QMatrixAlgebra<R>) -> Result<bool> {
    crate::ncalg::is_central(p, alg)
}

/// Convenience for the cyclotomic specialization.
pub fn build_cyclotomic(n: usize, m: u32) -> Result<QMatrixAlgebra<CyclotomicRing>> {
    QMatrixAlgebra::build_over(n, CyclotomicRing::new(m))
}
