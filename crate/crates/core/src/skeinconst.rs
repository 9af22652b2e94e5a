//! Skein-relation constants, q-integers and permutation statistics.
//!
//! All constants are signed monomials in `v = q^{1/2n}`:
//!
//! * `c_i = (-q)^{n-i} q^{(n-1)/2n}`
//! * `t = (-1)^{n-1} q^{(n^2-1)/n}`, `t^{n/2} = (-1)^{n(n-1)/2} q^{(n^2-1)/2}`
//! * `a = q^{(n+1-2n^2)/4}`, `d_n = (-1)^{n-1}`

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coeff::{LaurentScalar, Rational};
use crate::error::{Error, Result};
use num_traits::{One, Zero};

/// A bijection of `{1, ..., k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k + 1];
        for &x in &images {
            if !(1..=k).contains(&x) || seen[x] {
                return Err(Error::Precondition(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(k: usize) -> Self {
        Permutation { images: (1..=k).collect() }
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// `sigma(i)` for `1 <= i <= k`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Number of inversions `#{(i, j) : i < j, sigma(i) > sigma(j)}`.
    pub fn length(&self) -> usize {
        let s = &self.images;
        (0..s.len()).map(|i| (i + 1..s.len()).filter(|&j| s[i] > s[j]).count()).sum()
    }

    pub fn sign(&self) -> i64 {
        if self.length().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Lexicographic successor, `None` after the last permutation.
    pub fn next_lex(&self) -> Option<Self> {
        let mut s = self.images.clone();
        let i = (0..s.len().saturating_sub(1)).rev().find(|&i| s[i] < s[i + 1])?;
        let j = (i + 1..s.len()).rev().find(|&j| s[j] > s[i]).unwrap();
        s.swap(i, j);
        s[i + 1..].reverse();
        Some(Permutation { images: s })
    }

    /// All of `S_k` in lexicographic order.
    pub fn all(k: usize) -> impl Iterator<Item = Permutation> {
        std::iter::successors(Some(Self::identity(k)), Permutation::next_lex)
    }
}

/// `i -> n + 1 - i`.
pub fn dual_state(n: usize, i: usize) -> usize {
    n + 1 - i
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantTable {
    pub n: usize,
    /// `c_1, ..., c_n`.
    pub c: Vec<LaurentScalar>,
    pub t: LaurentScalar,
    /// `t^{n/2}`.
    pub t_half: LaurentScalar,
    pub a: LaurentScalar,
    pub d_n: i64,
}

fn signed_v(sign_exp: i64, v_exp: i64) -> LaurentScalar {
    let m = LaurentScalar::v_pow(v_exp);
    if sign_exp.rem_euclid(2) == 1 {
        -m
    } else {
        m
    }
}

pub fn constants(n: usize) -> ConstantTable {
    assert!(n >= 1, "rank must be positive");
    let ni = n as i64;
    // q = v^{2n}: q^{(n-1)/2n} = v^{n-1}, q^{(n^2-1)/n} = v^{2(n^2-1)},
    // q^{(n^2-1)/2} = v^{n(n^2-1)}, q^{(n+1-2n^2)/4} = v^{n(n+1-2n^2)/2}.
    let c = (1..=ni).map(|i| signed_v(ni - i, 2 * ni * (ni - i) + ni - 1)).collect();
    let t = signed_v(ni - 1, 2 * (ni * ni - 1));
    let t_half = signed_v(ni * (ni - 1) / 2, ni * (ni * ni - 1));
    let a = LaurentScalar::v_pow(ni * (ni + 1 - 2 * ni * ni) / 2);
    let d_n = if (n - 1).is_multiple_of(2) { 1 } else { -1 };
    ConstantTable { n, c, t, t_half, a, d_n }
}

impl ConstantTable {
    pub fn c(&self, i: usize) -> &LaurentScalar {
        &self.c[i - 1]
    }

    pub fn product_of_c(&self) -> LaurentScalar {
        self.c.iter().fold(LaurentScalar::one(), |acc, c| &acc * c)
    }

    /// `c_i c_{n+1-i} = t` for each `i`, as a list of booleans.
    pub fn dual_pair_checks(&self) -> Vec<bool> {
        (1..=self.n).map(|i| (self.c(i) * self.c(dual_state(self.n, i))) == self.t).collect()
    }
}

/// `prod c_i = t^{n/2}` and `c_i c_{bar i} = t` for all `i`, exactly.
pub fn check_constant_identities(n: usize) -> bool {
    let table = constants(n);
    table.product_of_c() == table.t_half && table.dual_pair_checks().into_iter().all(|b| b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QNumberVariant {
    Integer,
    Factorial,
}

/// `[k] = q^{k-1} + q^{k-3} + ... + q^{1-k}` or `[k]! = [1][2]...[k]`, with
/// `q = v^{2n}`.
pub fn q_number(n: usize, k: usize, variant: QNumberVariant) -> LaurentScalar {
    let q_int = |k: usize| {
        LaurentScalar::from_terms((0..k).map(|s| (2 * n as i64 * (k as i64 - 1 - 2 * s as i64), Rational::one())))
    };
    match variant {
        QNumberVariant::Integer => q_int(k),
        QNumberVariant::Factorial => (1..=k).fold(LaurentScalar::one(), |acc, i| &acc * &q_int(i)),
    }
}

/// Enumerates `S_k` and compares `sum (q^2)^{l(s)}` with `[k]! q^{k(k-1)/2}`.
pub fn perm_sum_identity(n: usize, k: usize) -> bool {
    let lhs = Permutation::all(k)
        .fold(LaurentScalar::zero(), |acc, s| &acc + &LaurentScalar::q_pow(n, 2 * s.length() as i64));
    let rhs = &q_number(n, k, QNumberVariant::Factorial) * &LaurentScalar::q_pow(n, (k * (k.max(1) - 1) / 2) as i64);
    lhs == rhs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExchangeCase {
    /// `j != n + 1 - i`
    Generic,
    /// `j == n + 1 - i`
    Dual,
}

/// Coefficients comparing the two stacking orders of a pair of boundary arcs
/// with opposite orientations and states `i`, `j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightExchangeCoeffs {
    pub case: ExchangeCase,
    pub lead: LaurentScalar,
    /// Keyed by the state `k` with `j < k <= n`; empty in the generic case.
    pub cross: BTreeMap<usize, LaurentScalar>,
}

pub fn height_exchange_coeffs(n: usize, i: usize, j: usize) -> Result<HeightExchangeCoeffs> {
    if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
        return Err(Error::Precondition(format!("states ({i}, {j}) outside 1..{n}")));
    }
    let ni = n as i64;
    if j != dual_state(n, i) {
        // q^{1/n}
        return Ok(HeightExchangeCoeffs { case: ExchangeCase::Generic, lead: LaurentScalar::v_pow(2), cross: BTreeMap::new() });
    }
    let table = constants(n);
    // q^{(1-n)/n} = v^{2(1-n)}
    let lead = LaurentScalar::v_pow(2 * (1 - ni));
    let one_minus_q2 = &LaurentScalar::one() - &LaurentScalar::q_pow(n, 2);
    let prefactor = &(&lead * table.c(i)) * &one_minus_q2;
    let cross = (j + 1..=n)
        .map(|k| {
            let inv = table.c(dual_state(n, k)).inverse().expect("c_k is a monomial");
            (k, &prefactor * &inv)
        })
        .collect();
    Ok(HeightExchangeCoeffs { case: ExchangeCase::Dual, lead, cross })
}

impl HeightExchangeCoeffs {
    /// At `v = 1` the exchange is trivial: lead `1`, every cross term `0`.
    pub fn is_trivial_at_one(&self) -> bool {
        self.lead.eval_at_one().is_one() && self.cross.values().all(|c| c.eval_at_one().is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;


    fn v(e: i64) -> LaurentScalar {
        LaurentScalar::v_pow(e)
    }

    #[test]
    fn permutation_basics() {
        let all: Vec<_> = Permutation::all(3).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], Permutation::identity(3));
        assert_eq!(all[5].images(), &[3, 2, 1]);
        assert_eq!(all[5].length(), 3);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(Permutation::all(0).count(), 1);
        assert!(Permutation::new(vec![1, 1]).is_err());
    }

    #[test]
    fn rank_two_constants() {
        let t = constants(2);
        assert_eq!(t.c, vec![-v(5), v(1)]);
        assert_eq!(t.t, -v(6));
        assert_eq!(t.c(1) * t.c(2), t.t);
        assert_eq!(t.d_n, -1);
    }

    #[test]
    fn rank_one_constants() {
        let t = constants(1);
        assert_eq!(t.c, vec![LaurentScalar::one()]);
        assert_eq!(t.t, LaurentScalar::one());
        assert_eq!(t.d_n, 1);
        assert!(check_constant_identities(1));
    }

    #[test]
    fn constant_identities_hold() {
        for n in 1..=6 {
            assert!(check_constant_identities(n), "n = {n}");
            let t = constants(n);
            assert_eq!(t.d_n * t.d_n, 1);
            assert_eq!(t.t_half.pow(2).unwrap(), t.t.pow(n as i64).unwrap());
        }
    }

    #[test]
    fn q_numbers() {
        let n = 2;
        let q = |k| LaurentScalar::q_pow(n, k);
        assert_eq!(q_number(n, 1, QNumberVariant::Integer), LaurentScalar::one());
        assert_eq!(q_number(n, 2, QNumberVariant::Integer), &q(1) + &q(-1));
        let three = &(&q(2) + &LaurentScalar::one()) + &q(-2);
        assert_eq!(q_number(n, 3, QNumberVariant::Factorial), &(&q(1) + &q(-1)) * &three);
        assert_eq!(q_number(n, 0, QNumberVariant::Factorial), LaurentScalar::one());
    }

    #[test]
    fn permutation_sum() {
        for n in 1..=3 {
            for k in 1..=6 {
                assert!(perm_sum_identity(n, k), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn height_exchange_examples() {
        let h = height_exchange_coeffs(2, 1, 2).unwrap();
        assert_eq!(h.case, ExchangeCase::Dual);
        assert_eq!(h.lead, v(-2));
        assert!(h.cross.is_empty());

        let h = height_exchange_coeffs(2, 2, 1).unwrap();
        assert_eq!(h.lead, v(-2));
        // q^{-3/2} (q^2 - 1)
        assert_eq!(h.cross[&2], &v(-6) * &(&v(8) - &LaurentScalar::one()));

        let h = height_exchange_coeffs(3, 1, 2).unwrap();
        assert_eq!(h.case, ExchangeCase::Generic);
        assert_eq!(h.lead, v(2));
        assert!(h.cross.is_empty());

        assert!(height_exchange_coeffs(3, 0, 1).is_err());
    }

    #[test]
    fn exchange_is_trivial_at_one() {
        for n in 1..=5 {
            for i in 1..=n {
                for j in 1..=n {
                    assert!(height_exchange_coeffs(n, i, j).unwrap().is_trivial_at_one());
                }
            }
        }
    }
}
