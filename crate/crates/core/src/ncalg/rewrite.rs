use std::collections::HashMap;
use std::sync::RwLock;

use super::{GeneratorId, NcMonomial, NcPolynomial};
use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// Anything that computes canonical representatives of algebra elements.
pub trait Reducer<C: Coeff>: Sync {
    fn reduce(&self, p: &NcPolynomial<C>) -> Result<NcPolynomial<C>>;
    fn one(&self) -> C;
    fn rank(&self) -> usize;
}

/// The only monomial order in use: degree first, then lexicographic with the
/// row-major generator order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    DegLexRowMajor,
}

/// `lhs -> rhs` with `lhs` a length-2 word and every monomial of `rhs`
/// strictly smaller than `lhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct RewriteRule<C: Coeff> {
    pub lhs: [GeneratorId; 2],
    pub rhs: NcPolynomial<C>,
}

impl<C: Coeff> RewriteRule<C> {
    pub fn lhs_monomial(&self) -> NcMonomial {
        NcMonomial::new(self.lhs.to_vec())
    }

    /// The relation `lhs - rhs` as an element of the free algebra.
    pub fn as_relation(&self, one: &C) -> NcPolynomial<C> {
        let mut p = self.rhs.neg();
        p.add_term(self.lhs_monomial(), one.clone());
        p
    }
}

/// Quadratic rewriting system over the generators `u_{ij}`, `1 <= i,j <= n`.
pub struct RewriteSystem<C: Coeff> {
    n: usize,
    one: C,
    // Indexed by `lhs[0].index(n) * n^2 + lhs[1].index(n)`.
    table: Vec<Option<RewriteRule<C>>>,
    memo: Option<RwLock<HashMap<NcMonomial, NcPolynomial<C>>>>,
}

impl<C: Coeff> Clone for RewriteSystem<C> {
    fn clone(&self) -> Self {
        RewriteSystem {
            n: self.n,
            one: self.one.clone(),
            table: self.table.clone(),
            memo: self.memo.as_ref().map(|_| RwLock::new(HashMap::new())),
        }
    }
}

impl<C: Coeff> std::fmt::Debug for RewriteSystem<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RewriteSystem").field("n", &self.n).field("rules", &self.num_rules()).finish()
    }
}

impl<C: Coeff> RewriteSystem<C> {
    pub fn new(n: usize, one: C, rules: Vec<RewriteRule<C>>) -> Result<Self> {
        let g = n * n;
        let mut table: Vec<Option<RewriteRule<C>>> = vec![None; g * g];
        for rule in rules {
            let [a, b] = rule.lhs;
            if !a.in_rank(n) || !b.in_rank(n) {
                return Err(Error::GeneratorOutOfRange { row: a.row().max(b.row()), col: a.col().max(b.col()), n });
            }
            rule.rhs.check_rank(n)?;
            let lhs = rule.lhs_monomial();
            if let Some((m, _)) = rule.rhs.terms().find(|(m, _)| **m >= lhs) {
                return Err(Error::CompletionInconsistency(format!(
                    "rule for {lhs} has right-hand monomial {m} that does not precede it"
                )));
            }
            let slot = &mut table[a.index(n) * g + b.index(n)];
            if let Some(existing) = slot {
                if existing.rhs != rule.rhs {
                    return Err(Error::CompletionInconsistency(format!(
                        "two rules for {lhs}: {} and {}",
                        existing.rhs, rule.rhs
                    )));
                }
            }
            *slot = Some(rule);
        }
        Ok(RewriteSystem { n, one, table, memo: Some(RwLock::new(HashMap::new())) })
    }

    /// Disables the shared monomial cache.
    pub fn without_memo(mut self) -> Self {
        self.memo = None;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> MonomialOrder {
        MonomialOrder::DegLexRowMajor
    }

    pub fn one_coeff(&self) -> &C {
        &self.one
    }

    pub fn rules(&self) -> impl Iterator<Item = &RewriteRule<C>> {
        self.table.iter().flatten()
    }

    pub fn num_rules(&self) -> usize {
        self.rules().count()
    }

    pub fn rule_for(&self, a: GeneratorId, b: GeneratorId) -> Option<&RewriteRule<C>> {
        if !a.in_rank(self.n) || !b.in_rank(self.n) {
            return None;
        }
        let g = self.n * self.n;
        self.table[a.index(self.n) * g + b.index(self.n)].as_ref()
    }

    /// Leftmost position `p` such that `word[p..p+2]` is a rule's left side.
    pub fn leftmost_redex(&self, word: &[GeneratorId]) -> Option<usize> {
        word.windows(2).position(|w| self.rule_for(w[0], w[1]).is_some())
    }

    pub fn is_normal(&self, m: &NcMonomial) -> bool {
        self.leftmost_redex(m.word()).is_none()
    }

    /// Rewrites at position `p` once; `p` must be a redex.
    pub fn rewrite_at(&self, m: &NcMonomial, p: usize) -> NcPolynomial<C> {
        let w = m.word();
        let rule = self.rule_for(w[p], w[p + 1]).expect("not a redex");
        let mut out = NcPolynomial::zero();
        for (r, c) in rule.rhs.terms() {
            let mut word = Vec::with_capacity(w.len());
            word.extend_from_slice(&w[..p]);
            word.extend_from_slice(r.word());
            word.extend_from_slice(&w[p + 2..]);
            out.add_term(NcMonomial::new(word), c.clone());
        }
        out
    }

    fn normal_form_word(&self, m: &NcMonomial) -> NcPolynomial<C> {
        let Some(p) = self.leftmost_redex(m.word()) else {
            return NcPolynomial::term(m.clone(), self.one.clone());
        };
        if let Some(memo) = &self.memo {
            if let Some(hit) = memo.read().unwrap().get(m) {
                return hit.clone();
            }
        }
        let mut out = NcPolynomial::zero();
        for (w, c) in self.rewrite_at(m, p).into_terms() {
            out.add_scaled(&self.normal_form_word(&w), &c);
        }
        if let Some(memo) = &self.memo {
            memo.write().unwrap().insert(m.clone(), out.clone());
        }
        out
    }

    /// Leftmost-first normal form. Terminates because every rewrite strictly
    /// lowers the monomial order.
    pub fn normal_form(&self, p: &NcPolynomial<C>) -> NcPolynomial<C> {
        let mut out = NcPolynomial::zero();
        for (m, c) in p.terms() {
            out.add_scaled(&self.normal_form_word(m), c);
        }
        out
    }

    /// Number of degree-`d` words avoiding every rule's left side.
    pub fn graded_dimension(&self, d: usize) -> u128 {
        let g = self.n * self.n;
        if d == 0 {
            return 1;
        }
        let mut counts = vec![1u128; g];
        for _ in 1..d {
            let mut next = vec![0u128; g];
            for (b, slot) in next.iter_mut().enumerate() {
                let gb = GeneratorId::from_index(b, self.n);
                for (a, &ca) in counts.iter().enumerate() {
                    let ga = GeneratorId::from_index(a, self.n);
                    if self.rule_for(ga, gb).is_none() {
                        *slot += ca;
                    }
                }
            }
            counts = next;
        }
        counts.iter().sum()
    }

    /// Resolves every overlap ambiguity `abc` with both `ab` and `bc` rule
    /// left sides. Returns the first unresolved word.
    pub fn check_overlaps(&self) -> std::result::Result<(), NcMonomial> {
        let lhs: Vec<_> = self.rules().map(|r| r.lhs).collect();
        for &[a, b] in &lhs {
            for &[b2, c] in &lhs {
                if b != b2 {
                    continue;
                }
                let w = NcMonomial::new(vec![a, b, c]);
                let left = self.normal_form(&self.rewrite_at(&w, 0));
                let right = self.normal_form(&self.rewrite_at(&w, 1));
                if left != right {
                    return Err(w);
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> Reducer<C> for RewriteSystem<C> {
    fn reduce(&self, p: &NcPolynomial<C>) -> Result<NcPolynomial<C>> {
        p.check_rank(self.n)?;
        Ok(self.normal_form(p))
    }
    fn one(&self) -> C {
        self.one.clone()
    }
    fn rank(&self) -> usize {
        self.n
    }
}

/// Normal form of `p` in the quotient presented by `rs`.
pub fn normal_form<C: Coeff>(p: &NcPolynomial<C>, rs: &RewriteSystem<C>) -> NcPolynomial<C> {
    rs.normal_form(p)
}

pub fn graded_dimension<C: Coeff>(rs: &RewriteSystem<C>, d: usize) -> u128 {
    rs.graded_dimension(d)
}
