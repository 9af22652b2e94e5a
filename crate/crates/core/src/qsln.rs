//! The Hopf algebra `O_q(SLn) = O_q(M(n)) / (det_q - 1)`.
//!
//! Elements are represented on the basis of PBW monomials `b(m)` whose
//! exponent matrix `m` has some zero diagonal entry. A PBW monomial with every
//! diagonal exponent positive is eliminated using
//!
//! ```text
//! b(m - Id) = b(m - Id) det_q = c b(m) + (smaller terms)   (mod det_q - 1)
//! ```
//!
//! where "smaller" is degree first, then the row-major lexicographic order on
//! exponent matrices. The leading-term claim is checked on every use.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;
use serde_json::json;

use crate::coeff::{Coeff, CoeffRing, LaurentRing, LaurentScalar};
use crate::error::{Error, Result};
use crate::ncalg::{tensor_multiply, GeneratorId, NcMonomial, NcPolynomial, Reducer, Tensor3, TensorElement};
use crate::qmatrix::{quantum_minor, DetForm, QMatrixAlgebra};
use crate::report::{CheckOutcome, CheckReport};

/// Default bound on elimination steps per normal-form call.
pub const DEFAULT_STEP_BUDGET: u64 = 20_000_000;

/// Environment variable overriding [`DEFAULT_STEP_BUDGET`].
pub const STEP_BUDGET_ENV: &str = "QCOORD_STEP_BUDGET";

pub fn default_step_budget() -> u64 {
    std::env::var(STEP_BUDGET_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_STEP_BUDGET)
}

/// Exponents of a PBW monomial, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentMatrix {
    n: usize,
    entries: Vec<u32>,
}

impl ExponentMatrix {
    pub fn zero(n: usize) -> Self {
        ExponentMatrix { n, entries: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 1..=n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.set(i, j, 1);
        m
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition("exponent matrix must be square".into()));
        }
        Ok(ExponentMatrix { n, entries: rows.concat() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, e: u32) {
        self.entries[(i - 1) * self.n + (j - 1)] = e;
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn degree(&self) -> u32 {
        self.entries.iter().sum()
    }

    pub fn min_diagonal(&self) -> u32 {
        (1..=self.n).map(|i| self.get(i, i)).min().unwrap_or(0)
    }

    /// Member of the `O_q(SLn)` basis: some diagonal exponent vanishes.
    pub fn is_sln_basis(&self) -> bool {
        self.min_diagonal() == 0
    }

    pub fn minus_identity(&self) -> Option<Self> {
        if self.n == 0 || self.min_diagonal() == 0 {
            return None;
        }
        let mut m = self.clone();
        for i in 1..=self.n {
            m.set(i, i, self.get(i, i) - 1);
        }
        Some(m)
    }

    pub fn plus_identity(&self) -> Self {
        let mut m = self.clone();
        for i in 1..=self.n {
            m.set(i, i, self.get(i, i) + 1);
        }
        m
    }

    /// The sorted word `b(m)`.
    pub fn to_monomial(&self) -> NcMonomial {
        let mut word = Vec::with_capacity(self.degree() as usize);
        for i in 1..=self.n {
            for j in 1..=self.n {
                word.extend(std::iter::repeat_n(GeneratorId::new(i, j), self.get(i, j) as usize));
            }
        }
        NcMonomial::new(word)
    }

    /// Inverse of [`to_monomial`](Self::to_monomial); the word must be sorted.
    pub fn from_monomial(m: &NcMonomial, n: usize) -> Result<Self> {
        if !m.is_sorted() {
            return Err(Error::Reduction(format!("{m} is not a PBW word")));
        }
        let mut out = Self::zero(n);
        for g in m.word() {
            if !g.in_rank(n) {
                return Err(Error::GeneratorOutOfRange { row: g.row(), col: g.col(), n });
            }
            out.entries[g.index(n)] += 1;
        }
        Ok(out)
    }
}

impl Ord for ExponentMatrix {
    /// Degree, then row-major lexicographic with larger `e_11` larger.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.entries.cmp(&other.entries))
    }
}

impl PartialOrd for ExponentMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl Serialize for ExponentMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

/// All `n x n` exponent matrices of total degree exactly `d`.
pub fn exponent_matrices(n: usize, d: u32) -> Vec<ExponentMatrix> {
    fn rec(slots: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == slots {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(slots, left - e, cur, out);
            cur.pop();
        }
    }
    if n == 0 {
        return if d == 0 { vec![ExponentMatrix::zero(0)] } else { vec![] };
    }
    let mut raw = Vec::new();
    rec(n * n, d, &mut Vec::new(), &mut raw);
    raw.into_iter().map(|entries| ExponentMatrix { n, entries }).collect()
}

/// Basis exponent matrices of total degree at most `degree_bound`, in PBW
/// word order.
pub fn basis_monomials(n: usize, degree_bound: u32) -> Vec<ExponentMatrix> {
    let mut out: Vec<_> = (0..=degree_bound)
        .flat_map(|d| exponent_matrices(n, d))
        .filter(ExponentMatrix::is_sln_basis)
        .collect();
    out.sort_by_cached_key(|m| m.to_monomial());
    out
}

/// How non-basis monomials are eliminated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionStrategy {
    /// Largest-first work queue using cached per-monomial replacements.
    WorkQueue,
    /// Row reduction against the ideal slice `{ b (det_q - 1) : deg b <= max_degree - n }`.
    /// Independent of the work queue; only for small degrees.
    LinearAlgebra { max_degree: u32 },
}

type Sparse<C> = BTreeMap<ExponentMatrix, C>;

fn sparse_add<C: Coeff>(map: &mut Sparse<C>, k: ExponentMatrix, c: C) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&k) {
        Some(e) => {
            let s = e.add(&c);
            if s.is_zero() {
                map.remove(&k);
            } else {
                *e = s;
            }
        }
        None => {
            map.insert(k, c);
        }
    }
}

struct Slice<C> {
    max_degree: u32,
    // Pivot key -> vector, monic at the key, every other key smaller.
    pivots: BTreeMap<ExponentMatrix, Sparse<C>>,
}

/// `O_q(SLn)` over the coefficient ring `R`.
pub struct SlnAlgebra<R: CoeffRing> {
    base: QMatrixAlgebra<R>,
    det_nf: NcPolynomial<R::Elem>,
    validation_depth: usize,
    step_budget: u64,
    strategy: ReductionStrategy,
    replacements: RwLock<HashMap<ExponentMatrix, Arc<Vec<(ExponentMatrix, R::Elem)>>>>,
    antipode_gens: OnceLock<Vec<NcPolynomial<R::Elem>>>,
    slice: OnceLock<std::result::Result<Slice<R::Elem>, String>>,
}

impl<R: CoeffRing> fmt::Debug for SlnAlgebra<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SlnAlgebra")
            .field("n", &self.n())
            .field("ring", &self.base.ring().name())
            .field("strategy", &self.strategy)
            .finish()
    }
}

impl SlnAlgebra<LaurentRing> {
    pub fn build(n: usize) -> Result<Self> {
        Self::new(QMatrixAlgebra::build(n)?)
    }
}

impl<R: CoeffRing> SlnAlgebra<R> {
    pub fn new(base: QMatrixAlgebra<R>) -> Result<Self> {
        let det_nf = base.normal_form(&base.quantum_det(DetForm::Column));
        let alg = SlnAlgebra {
            base,
            det_nf,
            validation_depth: 1,
            step_budget: default_step_budget(),
            strategy: ReductionStrategy::WorkQueue,
            replacements: RwLock::new(HashMap::new()),
            antipode_gens: OnceLock::new(),
            slice: OnceLock::new(),
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        if !self.counit(&self.det_nf).is_one() {
            return Err(Error::Reduction("counit of det_q is not 1".into()));
        }
        let reduced = self.sln_normal_form(&self.det_nf)?;
        if reduced != NcPolynomial::constant(self.one()) {
            return Err(Error::Reduction(format!("det_q reduces to {reduced}, not 1")));
        }
        Ok(())
    }

    pub fn with_step_budget(mut self, budget: u64) -> Self {
        self.step_budget = budget;
        self
    }

    pub fn with_strategy(mut self, strategy: ReductionStrategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn base(&self) -> &QMatrixAlgebra<R> {
        &self.base
    }

    pub fn ring(&self) -> &R {
        self.base.ring()
    }

    pub fn det_expansion(&self) -> &NcPolynomial<R::Elem> {
        &self.det_nf
    }

    pub fn validation_depth(&self) -> usize {
        self.validation_depth
    }

    pub fn strategy(&self) -> ReductionStrategy {
        self.strategy
    }

    pub fn gen(&self, i: usize, j: usize) -> NcPolynomial<R::Elem> {
        self.base.gen(i, j)
    }

    fn one(&self) -> R::Elem {
        self.ring().one()
    }

    fn to_sparse(&self, p: &NcPolynomial<R::Elem>) -> Result<Sparse<R::Elem>> {
        let mut out = BTreeMap::new();
        for (m, c) in p.terms() {
            sparse_add(&mut out, ExponentMatrix::from_monomial(m, self.n())?, c.clone());
        }
        Ok(out)
    }

    fn from_sparse(&self, s: Sparse<R::Elem>) -> NcPolynomial<R::Elem> {
        NcPolynomial::from_terms(s.into_iter().map(|(m, c)| (m.to_monomial(), c)))
    }

    /// `b(m) = sum c_k b(k)` modulo `det_q - 1`, every `k < m`.
    fn replacement(&self, m: &ExponentMatrix) -> Result<Arc<Vec<(ExponentMatrix, R::Elem)>>> {
        if let Some(hit) = self.replacements.read().unwrap().get(m) {
            return Ok(hit.clone());
        }
        let lower = m.minus_identity().ok_or_else(|| Error::Reduction(format!("{m:?} is already a basis monomial")))?;
        let b = NcPolynomial::term(lower.to_monomial(), self.one());
        let p = self.to_sparse(&self.base.normal_form(&b.mul_unchecked(&self.det_nf)))?;
        let c = p
            .get(m)
            .ok_or_else(|| Error::Reduction(format!("b(m - Id) det_q lacks b(m) for m = {m:?}")))?;
        if let Some((top, _)) = p.last_key_value() {
            if top != m {
                return Err(Error::Reduction(format!(
                    "b(m) is not the leading term of b(m - Id) det_q: m = {m:?}, leading {top:?}"
                )));
            }
        }
        let cinv = c
            .try_inverse()
            .ok_or_else(|| Error::Reduction(format!("non-unit leading coefficient {c} for m = {m:?}")))?;
        let mut rep = vec![(lower, cinv.clone())];
        for (k, a) in &p {
            if k != m {
                rep.push((k.clone(), a.mul(&cinv).neg()));
            }
        }
        let rep = Arc::new(rep);
        self.replacements.write().unwrap().insert(m.clone(), rep.clone());
        Ok(rep)
    }

    fn reduce_work_queue(&self, mut pending: Sparse<R::Elem>) -> Result<Sparse<R::Elem>> {
        let mut done = BTreeMap::new();
        let mut steps = 0u64;
        while let Some((m, c)) = pending.pop_last() {
            if m.is_sln_basis() {
                sparse_add(&mut done, m, c);
                continue;
            }
            steps += 1;
            if steps > self.step_budget {
                return Err(Error::StepBudgetExceeded(self.step_budget));
            }
            for (k, a) in self.replacement(&m)?.iter() {
                sparse_add(&mut pending, k.clone(), a.mul(&c));
            }
        }
        Ok(done)
    }

    fn build_slice(&self, max_degree: u32) -> std::result::Result<Slice<R::Elem>, String> {
        let n = self.n() as u32;
        let mut pivots: BTreeMap<ExponentMatrix, Sparse<R::Elem>> = BTreeMap::new();
        let mut lower: Vec<ExponentMatrix> =
            (0..=max_degree.saturating_sub(n)).flat_map(|d| exponent_matrices(self.n(), d)).collect();
        if max_degree < n {
            lower.clear();
        }
        lower.sort();
        for b in lower {
            let bp = NcPolynomial::term(b.to_monomial(), self.one());
            let mut v = self.to_sparse(&self.base.normal_form(&bp.mul_unchecked(&self.det_nf))).map_err(|e| e.to_string())?;
            sparse_add(&mut v, b, self.one().neg());
            loop {
                let Some((lead, c)) = v.last_key_value().map(|(k, c)| (k.clone(), c.clone())) else {
                    return Err("ideal slice has a dependent generator".into());
                };
                match pivots.get(&lead) {
                    Some(piv) => {
                        for (k, a) in piv {
                            sparse_add(&mut v, k.clone(), a.mul(&c).neg());
                        }
                    }
                    None => {
                        if lead.is_sln_basis() {
                            return Err(format!("ideal element with basis leading term {lead:?}"));
                        }
                        let inv = c.try_inverse().ok_or_else(|| format!("non-unit pivot {c} at {lead:?}"))?;
                        for a in v.values_mut() {
                            *a = a.mul(&inv);
                        }
                        pivots.insert(lead, v);
                        break;
                    }
                }
            }
        }
        Ok(Slice { max_degree, pivots })
    }

    fn reduce_linear_algebra(&self, mut p: Sparse<R::Elem>, max_degree: u32) -> Result<Sparse<R::Elem>> {
        let slice = self
            .slice
            .get_or_init(|| self.build_slice(max_degree))
            .as_ref()
            .map_err(|e| Error::Reduction(e.clone()))?;
        if slice.max_degree != max_degree {
            return Err(Error::Reduction("slice was built for a different degree bound".into()));
        }
        let mut done = BTreeMap::new();
        while let Some((m, c)) = p.pop_last() {
            if m.is_sln_basis() {
                sparse_add(&mut done, m, c);
                continue;
            }
            let piv = slice.pivots.get(&m).ok_or_else(|| {
                Error::Reduction(format!("{m:?} is outside the ideal slice of degree {max_degree}"))
            })?;
            for (k, a) in piv {
                if *k != m {
                    sparse_add(&mut p, k.clone(), a.mul(&c).neg());
                }
            }
        }
        Ok(done)
    }

    /// Canonical representative on the basis `{ b(m) : min_i m_ii = 0 }`.
    pub fn sln_normal_form(&self, p: &NcPolynomial<R::Elem>) -> Result<NcPolynomial<R::Elem>> {
        p.check_rank(self.n())?;
        let sparse = self.to_sparse(&self.base.normal_form(p))?;
        let done = match self.strategy {
            ReductionStrategy::WorkQueue => self.reduce_work_queue(sparse)?,
            ReductionStrategy::LinearAlgebra { max_degree } => self.reduce_linear_algebra(sparse, max_degree)?,
        };
        Ok(self.from_sparse(done))
    }

    pub fn multiply(&self, a: &NcPolynomial<R::Elem>, b: &NcPolynomial<R::Elem>) -> Result<NcPolynomial<R::Elem>> {
        self.sln_normal_form(&a.multiply(b)?)
    }

    pub fn counit(&self, p: &NcPolynomial<R::Elem>) -> R::Elem {
        let mut out = self.ring().zero();
        for (m, c) in p.terms() {
            if m.word().iter().all(|g| g.row() == g.col()) {
                out = out.add(c);
            }
        }
        out
    }

    fn generator_coproduct(&self, g: GeneratorId) -> TensorElement<R::Elem> {
        let mut t = TensorElement::zero();
        for k in 1..=self.n() {
            t.add_term(
                NcMonomial::gen(GeneratorId::new(g.row(), k)),
                NcMonomial::gen(GeneratorId::new(k, g.col())),
                self.one(),
            );
        }
        t
    }

    fn monomial_coproduct(&self, m: &NcMonomial) -> Result<TensorElement<R::Elem>> {
        let mut acc = TensorElement::unit(self.one());
        for &g in m.word() {
            acc = tensor_multiply(&acc, &self.generator_coproduct(g), self)?;
        }
        Ok(acc)
    }

    /// `Delta(u_ij) = sum_k u_ik (x) u_kj`, extended multiplicatively.
    pub fn coproduct(&self, p: &NcPolynomial<R::Elem>) -> Result<TensorElement<R::Elem>> {
        p.check_rank(self.n())?;
        let mut out = TensorElement::zero();
        for (m, c) in p.terms() {
            out.add_scaled(&self.monomial_coproduct(m)?, c);
        }
        Ok(out)
    }

    fn antipode_generators(&self) -> Result<&[NcPolynomial<R::Elem>]> {
        if let Some(v) = self.antipode_gens.get() {
            return Ok(v);
        }
        let n = self.n();
        let mut gens = Vec::with_capacity(n * n);
        for g in GeneratorId::all(n) {
            let (i, j) = (g.row(), g.col());
            let minor = self.base.embed(&quantum_minor(n, &[j], &[i])?);
            let factor = self.ring().embed(&LaurentScalar::neg_q_pow(n, i as i64 - j as i64));
            gens.push(self.sln_normal_form(&minor.scale(&factor))?);
        }
        Ok(self.antipode_gens.get_or_init(|| gens))
    }

    /// `S(u_ij) = (-q)^{i-j} det_q(u^{j,i})`, extended anti-multiplicatively.
    pub fn antipode(&self, p: &NcPolynomial<R::Elem>) -> Result<NcPolynomial<R::Elem>> {
        p.check_rank(self.n())?;
        let gens = self.antipode_generators()?;
        let n = self.n();
        let mut out = NcPolynomial::zero();
        for (m, c) in p.terms() {
            let mut acc = NcPolynomial::constant(self.one());
            for g in m.word().iter().rev() {
                acc = self.multiply(&acc, &gens[g.index(n)])?;
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }
}

impl<R: CoeffRing> Reducer<R::Elem> for SlnAlgebra<R> {
    fn reduce(&self, p: &NcPolynomial<R::Elem>) -> Result<NcPolynomial<R::Elem>> {
        self.sln_normal_form(p)
    }
    fn one(&self) -> R::Elem {
        self.ring().one()
    }
    fn rank(&self) -> usize {
        self.n()
    }
}

/// The bigon arc `b_{ij}` as an element of `O_q(SLn)`: the generator `u_ij`.
pub fn bigon_element(n: usize, i: usize, j: usize) -> Result<NcPolynomial<LaurentScalar>> {
    if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
        return Err(Error::GeneratorOutOfRange { row: i, col: j, n });
    }
    Ok(NcPolynomial::gen(GeneratorId::new(i, j), LaurentScalar::one()))
}

fn delta<C: Coeff>(i: usize, j: usize, one: &C) -> NcPolynomial<C> {
    if i == j {
        NcPolynomial::constant(one.clone())
    } else {
        NcPolynomial::zero()
    }
}

/// Every Hopf-algebra identity on generators and relations, over any ring.
pub fn check_hopf_axioms_for<R: CoeffRing>(alg: &SlnAlgebra<R>) -> Result<CheckReport> {
    let n = alg.n();
    let one = alg.ring().one();
    let mut outcomes = Vec::new();

    let det = alg.base().quantum_det(DetForm::Column);
    outcomes.push(CheckOutcome::compare(
        "det_q reduces to 1",
        &alg.sln_normal_form(&det)?,
        &NcPolynomial::constant(one.clone()),
    ));

    for g in GeneratorId::all(n) {
        let (i, j) = (g.row(), g.col());
        let u = alg.gen(i, j);
        let d = alg.coproduct(&u)?;

        let left = Tensor3::expand_left(&d, |m| alg.monomial_coproduct(m))?;
        let right = Tensor3::expand_right(&d, |m| alg.monomial_coproduct(m))?;
        outcomes.push(CheckOutcome::from_bool(format!("coassociativity {g}"), left == right, || {
            format!("lhs = {left}; rhs = {right}")
        }));

        let eps = |m: &NcMonomial| alg.counit(&NcPolynomial::term(m.clone(), one.clone()));
        let l = alg.sln_normal_form(&d.contract_left(eps))?;
        let r = alg.sln_normal_form(&d.contract_right(eps))?;
        outcomes.push(CheckOutcome::compare(format!("(eps x id) Delta {g}"), &l, &u));
        outcomes.push(CheckOutcome::compare(format!("(id x eps) Delta {g}"), &r, &u));

        let mut sl = NcPolynomial::zero();
        let mut sr = NcPolynomial::zero();
        for k in 1..=n {
            sl.add_scaled(&alg.antipode(&alg.gen(i, k))?.multiply(&alg.gen(k, j))?, &one);
            sr.add_scaled(&alg.gen(i, k).multiply(&alg.antipode(&alg.gen(k, j))?)?, &one);
        }
        let want = delta(i, j, &one);
        outcomes.push(CheckOutcome::compare(format!("sum_k S(u[{i},k]) u[k,{j}]"), &alg.sln_normal_form(&sl)?, &want));
        outcomes.push(CheckOutcome::compare(format!("sum_k u[{i},k] S(u[k,{j}])"), &alg.sln_normal_form(&sr)?, &want));
    }

    let mut relations: Vec<(String, NcPolynomial<R::Elem>)> = alg
        .base()
        .system()
        .rules()
        .map(|r| (format!("relation {}", r.lhs_monomial()), r.as_relation(&one)))
        .collect();
    let mut det_minus_one = det.clone();
    det_minus_one.add_term(NcMonomial::one(), one.neg());
    relations.push(("det_q - 1".to_string(), det_minus_one));
    for (name, rel) in &relations {
        let d = alg.coproduct(rel)?;
        outcomes.push(CheckOutcome::from_bool(format!("Delta({name}) = 0"), d.is_zero(), || format!("residual {d}")));
        let e = alg.counit(rel);
        outcomes.push(CheckOutcome::from_bool(format!("eps({name}) = 0"), e.is_zero(), || format!("residual {e}")));
    }

    Ok(CheckReport::new("hopf", json!({ "n": n, "ring": alg.ring().name() }), outcomes))
}

/// Hopf axioms for `O_q(SLn)` over `Q[v, v^-1]`.
pub fn check_hopf_axioms(n: usize) -> Result<CheckReport> {
    check_hopf_axioms_for(&SlnAlgebra::build(n)?)
}
