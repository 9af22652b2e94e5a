use qcoord::qsln::{check_hopf_axioms, SlnAlgebra};
use qcoord::report::CheckReport;

fn assert_all(r: &CheckReport) {
    assert!(r.passed, "first failure: {:?}", r.first_failure());
}

#[test]
fn hopf_axioms_rank_two_and_three() {
    for n in 2..=3 {
        assert_all(&check_hopf_axioms(n).unwrap());
    }
}

#[test]
#[ignore = "slow tier"]
fn hopf_axioms_rank_four() {
    assert_all(&check_hopf_axioms(4).unwrap());
}

#[test]
fn antipode_sum_rank_two() {
    let alg = SlnAlgebra::build(2).unwrap();
    let mut s = alg.antipode(&alg.gen(1, 1)).unwrap().multiply(&alg.gen(1, 1)).unwrap();
    s.add_scaled(&alg.antipode(&alg.gen(1, 2)).unwrap().multiply(&alg.gen(2, 1)).unwrap(), &qcoord::coeff::LaurentScalar::one());
    assert_eq!(alg.sln_normal_form(&s).unwrap(), qcoord::ncalg::NcPolynomial::constant(qcoord::coeff::LaurentScalar::one()));
}
