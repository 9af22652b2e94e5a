//! Report builders for the identity families that the core library exposes
//! as plain predicates or tables.

use qcoord::coeff::{rational_to_string, LaurentScalar};
use qcoord::frobenius::{
    check_power_identities, injectivity_report, spanning_set_enumeration, spanning_set_formula, RootOfUnityContext,
};
use qcoord::qmatrix::{commutative_count, frt_relations, is_central, DetForm, QMatrixAlgebra};
use qcoord::qsln::{basis_monomials, check_hopf_axioms};
use qcoord::report::{CheckOutcome, CheckReport};
use qcoord::skeinconst::{constants, dual_state, height_exchange_coeffs, perm_sum_identity};
use qcoord::{classical, Result};
use serde_json::{json, Value};

/// Relation count `n^2(n^2-1)/2` and `dim_d = C(n^2+d-1, d)` for `d <= max_degree`.
pub fn frt(n: usize, max_degree: usize) -> Result<CheckReport> {
    let rels = frt_relations(n)?;
    let g = n * n;
    let want = g * (g - 1) / 2;
    let mut outcomes = vec![CheckOutcome::compare("relation count", &rels.len(), &want)];
    let alg = QMatrixAlgebra::build(n)?;
    for d in 0..=max_degree {
        outcomes.push(CheckOutcome::compare(
            format!("graded dimension {d}"),
            &alg.graded_dimension(d),
            &commutative_count(g, d),
        ));
    }
    Ok(CheckReport::new("frt", json!({ "n": n, "max_degree": max_degree }), outcomes))
}

/// Row and column forms of `det_q` agree and `det_q` is central.
pub fn det(n: usize) -> Result<CheckReport> {
    let alg = QMatrixAlgebra::build(n)?;
    let col = alg.normal_form(&alg.quantum_det(DetForm::Column));
    let row = alg.normal_form(&alg.quantum_det(DetForm::Row));
    let central = is_central(&col, &alg)?;
    let outcomes = vec![
        CheckOutcome::compare("row form = column form", &row, &col),
        CheckOutcome::from_bool("det_q is central", central, || format!("det_q = {col}")),
    ];
    Ok(CheckReport::new("det", json!({ "n": n }), outcomes))
}

pub fn hopf(n: usize) -> Result<CheckReport> {
    check_hopf_axioms(n)
}

/// Exact constant identities, with the table itself as the value.
pub fn constants_report(n: usize) -> Result<(CheckReport, Value)> {
    if n == 0 {
        return Err(qcoord::Error::Precondition("rank must be positive".into()));
    }
    let t = constants(n);
    let mut outcomes = vec![CheckOutcome::compare("prod c_i = t^(n/2)", &t.product_of_c(), &t.t_half)];
    for i in 1..=n {
        let lhs = t.c(i) * t.c(dual_state(n, i));
        outcomes.push(CheckOutcome::compare(format!("c_{i} c_{} = t", dual_state(n, i)), &lhs, &t.t));
    }
    let value = serde_json::to_value(&t).expect("constant table serializes");
    Ok((CheckReport::new("constants", json!({ "n": n }), outcomes), value))
}

/// The permutation-sum identity for `k = 1..=max_k`.
pub fn permsum(n: usize, max_k: usize) -> Result<CheckReport> {
    if n == 0 {
        return Err(qcoord::Error::Precondition("rank must be positive".into()));
    }
    let outcomes = (1..=max_k)
        .map(|k| CheckOutcome::from_bool(format!("k = {k}"), perm_sum_identity(n, k), || "sides differ".into()))
        .collect();
    Ok(CheckReport::new("permsum", json!({ "n": n, "max_k": max_k }), outcomes))
}

/// Height-exchange coefficients are trivial at `v = 1` for every state pair.
pub fn height(n: usize) -> Result<CheckReport> {
    let mut outcomes = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let c = height_exchange_coeffs(n, i, j)?;
            outcomes.push(CheckOutcome::from_bool(format!("({i},{j})"), c.is_trivial_at_one(), || {
                format!("lead {}; cross {:?}", c.lead, c.cross.values().map(LaurentScalar::to_string).collect::<Vec<_>>())
            }));
        }
    }
    Ok(CheckReport::new("height", json!({ "n": n }), outcomes))
}

/// Identities (a)(b)(c) and injectivity at `v = zeta_m`.
pub fn frobenius(n: usize, m: u32, degree: u32) -> Result<Vec<CheckReport>> {
    let ctx = RootOfUnityContext::new(n, m)?;
    Ok(vec![check_power_identities(&ctx)?, injectivity_report(&ctx, degree)?])
}

pub fn count(n: usize, m: u32) -> Result<(CheckReport, Value)> {
    if n == 0 || m == 0 {
        return Err(qcoord::Error::Precondition("rank and order must be positive".into()));
    }
    let formula = spanning_set_formula(n, m);
    let enumerated = spanning_set_enumeration(n, m);
    let outcome = match enumerated {
        Some(e) => CheckOutcome::compare("formula = enumeration", &formula.to_string(), &e.to_string()),
        None => CheckOutcome::pass("formula (enumeration skipped: too many tuples)"),
    };
    let value = json!({ "formula": formula.to_string(), "enumeration": enumerated.map(|e| e.to_string()) });
    Ok((CheckReport::new("count", json!({ "n": n, "m": m }), vec![outcome]), value))
}

/// SL basis monomials up to `degree`, compared against the graded count
/// `dim_d O_q(M(n)) - dim_{d-n} O_q(M(n))`.
pub fn basis(n: usize, degree: u32) -> Result<(CheckReport, Value)> {
    if n == 0 {
        return Err(qcoord::Error::Precondition("rank must be positive".into()));
    }
    let mons = basis_monomials(n, degree);
    let g = n * n;
    let mut outcomes = Vec::new();
    for d in 0..=degree {
        let got = mons.iter().filter(|m| m.degree() == d).count() as u128;
        let d = d as usize;
        let want = commutative_count(g, d) - if d >= n { commutative_count(g, d - n) } else { 0 };
        outcomes.push(CheckOutcome::compare(format!("degree {d} count"), &got, &want));
    }
    let value = json!({ "count": mons.len(), "monomials": mons });
    Ok((CheckReport::new("basis", json!({ "n": n, "degree": degree }), outcomes), value))
}

pub fn classical(n: usize, seed: u64, trials: u64) -> Result<Vec<CheckReport>> {
    Ok(vec![classical::check_prop52(n, seed, trials)?, classical::check_knot_conjugation(n, seed, trials)?])
}

pub fn detexp(n: usize, seed: u64, trials: u64) -> Result<CheckReport> {
    classical::check_det_expansion(n, seed, trials)
}

pub fn cap(n: usize, seed: u64, trials: u64) -> Result<CheckReport> {
    classical::check_cap_resolution(n, seed, trials)
}

pub fn rational_json(r: &qcoord::coeff::Rational) -> Value {
    Value::String(rational_to_string(r))
}
