//! Exact coefficient rings.
//!
//! Every algebra element in this crate carries coefficients from one of two
//! rings: Laurent polynomials in `v` over the rationals ([`LaurentScalar`]),
//! or the cyclotomic field `Q(zeta_m)` obtained by specializing `v` to a
//! primitive `m`-th root of unity ([`CyclotomicScalar`]).
//!
//! The exponent unit is one power of `v = q^{1/2n}`, so `q` itself is
//! `v^{2n}` and every fractional power of `q` that appears in the skein
//! constants becomes an integer exponent.

mod cyclotomic;
mod intpoly;
mod laurent;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use cyclotomic::{cyclotomic_poly, specialize, CyclotomicRing, CyclotomicScalar};
pub use intpoly::IntPoly;
pub use laurent::LaurentScalar;

/// Arbitrary precision rational.
pub type Rational = BigRational;

/// An element of an exact commutative coefficient ring.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse when it exists in the ring.
    fn try_inverse(&self) -> Option<Self>;
    /// Whether two elements live in the same ring instance.
    fn same_ring(&self, _other: &Self) -> bool {
        true
    }
    /// Stable JSON encoding used by the CLI reports.
    fn to_json(&self) -> serde_json::Value;
}

/// A concrete coefficient ring: knows its constants and how Laurent data
/// embeds into it.
pub trait CoeffRing: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Coeff;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Image of a Laurent scalar under the structure map `Q[v, v^-1] -> R`.
    fn embed(&self, s: &LaurentScalar) -> Self::Elem;
    fn name(&self) -> String;

    fn from_int(&self, k: i64) -> Self::Elem {
        self.embed(&LaurentScalar::from_int(k))
    }
    fn v_pow(&self, e: i64) -> Self::Elem {
        self.embed(&LaurentScalar::v_pow(e))
    }
}

/// The generic ring `Q[v, v^-1]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LaurentRing;

impl CoeffRing for LaurentRing {
    type Elem = LaurentScalar;

    fn zero(&self) -> LaurentScalar {
        LaurentScalar::zero()
    }
    fn one(&self) -> LaurentScalar {
        LaurentScalar::one()
    }
    fn embed(&self, s: &LaurentScalar) -> LaurentScalar {
        s.clone()
    }
    fn name(&self) -> String {
        "laurent".to_string()
    }
}

pub(crate) fn rat_int(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

/// Formats a rational as `num/den`, the wire form of every exact coefficient.
pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Human form of a rational coefficient: integers without a denominator.
pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn fmt_signed_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: IntoIterator<Item = (&'a Rational, String)>,
{
    let mut first = true;
    for (c, mono) in terms {
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        if mono.is_empty() {
            f.write_str(&fmt_rational(&abs))?;
        } else if abs.is_one() {
            f.write_str(&mono)?;
        } else {
            write!(f, "{}*{}", fmt_rational(&abs), mono)?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}
