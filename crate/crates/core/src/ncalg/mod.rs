//! Free associative algebra on the generators `u_{ij}`, quadratic rewriting,
//! and the tensor square.

mod monomial;
mod poly;
mod rewrite;
mod tensor;

pub use monomial::{GeneratorId, NcMonomial};
pub use poly::NcPolynomial;
pub use rewrite::{graded_dimension, normal_form, MonomialOrder, Reducer, RewriteRule, RewriteSystem};
pub use tensor::{tensor_multiply, Tensor3, TensorElement};

use crate::coeff::Coeff;
use crate::error::Result;

/// `true` iff `p` commutes with every generator modulo `reducer`.
pub fn is_central<C: Coeff, R: Reducer<C> + ?Sized>(p: &NcPolynomial<C>, reducer: &R) -> Result<bool> {
    Ok(central_obstruction(p, reducer)?.is_none())
}

/// First generator whose commutator with `p` does not reduce to zero, with
/// the reduced commutator.
pub fn central_obstruction<C: Coeff, R: Reducer<C> + ?Sized>(
    p: &NcPolynomial<C>,
    reducer: &R,
) -> Result<Option<(GeneratorId, NcPolynomial<C>)>> {
    let n = reducer.rank();
    let p = reducer.reduce(p)?;
    for g in GeneratorId::all(n) {
        let u = NcPolynomial::gen(g, reducer.one());
        let comm = p.multiply(&u)?.sub(&u.multiply(&p)?)?;
        let red = reducer.reduce(&comm)?;
        if !red.is_zero() {
            return Ok(Some((g, red)));
        }
    }
    Ok(None)
}
