use std::sync::OnceLock;

use proptest::prelude::*;
use qcoord::coeff::{LaurentScalar, Rational};
use qcoord::ncalg::{tensor_multiply, GeneratorId, NcMonomial, NcPolynomial};
use qcoord::qsln::SlnAlgebra;

type Poly = NcPolynomial<LaurentScalar>;

fn algebra(n: usize) -> &'static SlnAlgebra<qcoord::coeff::LaurentRing> {
    static TWO: OnceLock<SlnAlgebra<qcoord::coeff::LaurentRing>> = OnceLock::new();
    static THREE: OnceLock<SlnAlgebra<qcoord::coeff::LaurentRing>> = OnceLock::new();
    match n {
        2 => TWO.get_or_init(|| SlnAlgebra::build(2).unwrap()),
        3 => THREE.get_or_init(|| SlnAlgebra::build(3).unwrap()),
        _ => unreachable!(),
    }
}

fn poly(n: usize, max_len: usize) -> impl Strategy<Value = Poly> {
    let gen = (1..=n, 1..=n).prop_map(|(i, j)| GeneratorId::new(i, j));
    let term = (prop::collection::vec(gen, 0..=max_len), -3i64..=3, -4i64..=4);
    prop::collection::vec(term, 1..=3).prop_map(|terms| {
        let mut p = Poly::zero();
        for (word, c, e) in terms {
            let coeff = LaurentScalar::monomial(Rational::from_integer(c.into()), e);
            p.add_term(NcMonomial::new(word), coeff);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn normal_form_is_idempotent_and_linear(a in poly(2, 4), b in poly(2, 4)) {
        let alg = algebra(2);
        let na = alg.sln_normal_form(&a).unwrap();
        prop_assert_eq!(&alg.sln_normal_form(&na).unwrap(), &na);
        let nb = alg.sln_normal_form(&b).unwrap();
        let sum = alg.sln_normal_form(&a.add(&b).unwrap()).unwrap();
        prop_assert_eq!(sum, na.add(&nb).unwrap());
    }

    #[test]
    fn normal_form_is_linear_rank_three(a in poly(3, 3), b in poly(3, 3)) {
        let alg = algebra(3);
        let na = alg.sln_normal_form(&a).unwrap();
        let nb = alg.sln_normal_form(&b).unwrap();
        prop_assert_eq!(alg.sln_normal_form(&a.sub(&b).unwrap()).unwrap(), na.sub(&nb).unwrap());
    }

    #[test]
    fn coproduct_is_multiplicative(a in poly(2, 2), b in poly(2, 2)) {
        let alg = algebra(2);
        let lhs = alg.coproduct(&alg.multiply(&a, &b).unwrap()).unwrap();
        let rhs = tensor_multiply(&alg.coproduct(&a).unwrap(), &alg.coproduct(&b).unwrap(), alg).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn counit_is_multiplicative(a in poly(3, 3), b in poly(3, 3)) {
        let alg = algebra(3);
        let ab = alg.multiply(&a, &b).unwrap();
        prop_assert_eq!(alg.counit(&ab), &alg.counit(&a) * &alg.counit(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduced_product_is_associative(a in poly(2, 2), b in poly(2, 2), c in poly(2, 2)) {
        let alg = algebra(2);
        let left = alg.multiply(&alg.multiply(&a, &b).unwrap(), &c).unwrap();
        let right = alg.multiply(&a, &alg.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reduced_product_is_associative_rank_three(a in poly(3, 2), b in poly(3, 2), c in poly(3, 1)) {
        let alg = algebra(3);
        let left = alg.multiply(&alg.multiply(&a, &b).unwrap(), &c).unwrap();
        let right = alg.multiply(&a, &alg.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn antipode_is_an_antihomomorphism(a in poly(2, 2), b in poly(2, 2)) {
        let alg = algebra(2);
        let lhs = alg.antipode(&alg.multiply(&a, &b).unwrap()).unwrap();
        let rhs = alg.multiply(&alg.antipode(&b).unwrap(), &alg.antipode(&a).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
