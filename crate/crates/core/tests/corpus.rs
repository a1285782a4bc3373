mod common;

use common::*;
use nilqi_core::classifier::{check_standing_assumptions, classify, Outcome, Witness, DEFAULT_POWER_BOUND};
use nilqi_core::endomorphism::{carnot_complete, Endomorphism};
use nilqi_core::growth::{endomorphism_rates, Direction};
use nilqi_core::lie_algebra::{validate, GradedAlgebra, StructureConstants, Violation};
use nilqi_core::matrix::Matrix;
use nilqi_core::oracle::{default_grid, fit_series, flow_divergence, flow_series, validate_rates, DEGREE_ABS_TOL};
use nilqi_core::scalar::rat;
use nilqi_core::Error;

fn h3_variant(n8: u32, n9: u32) -> Endomorphism {
    let mut n = H3_PHI;
    n[7] = n8;
    n[8] = n9;
    h3_endo(n)
}

#[test]
fn h3_variant_with_inconsistent_centre_is_rejected() {
    let bad = h3_variant(H3_PHI[7], 10);
    assert!(!bad.is_homomorphism());
    match classify(&h3_endo(H3_PHI), &bad, DEFAULT_POWER_BOUND) {
        Err(Error::AssumptionViolation(msg)) => assert!(msg.contains("homomorphism"), "{}", msg),
        other => panic!("expected an assumption violation, got {:?}", other),
    }
}

#[test]
fn h3_consistent_variant_differs_by_divergence() {
    let v = h3_variant(13, 10);
    assert!(check_standing_assumptions(&v).all_hold());
    let verdict = classify(&h3_endo(H3_PHI), &v, DEFAULT_POWER_BOUND).unwrap();
    assert!(matches!(verdict.outcome, Outcome::NotQuasiIsometric(Witness::Divergence(_))), "{:?}", verdict.outcome);
    assert!(verdict.evidence.iter().any(|e| e.check == "tree-valence"), "{:?}", verdict.evidence);
}

#[test]
fn fourstep_jacobi_violations_are_reported_but_do_not_block() {
    let g = fourstep();
    let v = validate(g.sc());
    let idx = |s: &str| FOURSTEP_NAMES.iter().position(|n| *n == s).unwrap();
    let (x, y, a, b, z, c) = (idx("x"), idx("y"), idx("a"), idx("b"), idx("z"), idx("c"));
    assert!(v.contains(&Violation::Jacobi { i: x, j: y, k: c }), "{:?}", v);
    assert!(v.contains(&Violation::Jacobi { i: a, j: b, k: z }), "{:?}", v);
    assert!(v.iter().all(|v| matches!(v, Violation::Jacobi { .. })));

    let verdict = classify(&fourstep_endo(FOURSTEP_PHI), &fourstep_endo(FOURSTEP_PHI), DEFAULT_POWER_BOUND).unwrap();
    assert_eq!(verdict.outcome, Outcome::QuasiIsometric { r1: 1, r2: 1 });
    assert!(verdict.evidence.iter().any(|e| e.check == "jacobi" && e.result == "warning"));
}

#[test]
fn validate_flags_non_triangular_brackets() {
    let sc = StructureConstants::from_int_triples(3, &[(0, 2, 1, 1)]).unwrap();
    let v = validate(&sc);
    assert_eq!(v, vec![Violation::Triangularity { i: 0, j: 2, k: 1 }]);
    assert_eq!(v[0].to_string(), "triangularity violation at (1,3,2)");
    assert!(validate(heisenberg().sc()).is_empty());
    assert!(validate(h3().sc()).is_empty());
}

#[test]
fn carnot_completion_of_heisenberg_base_actions() {
    let g = heisenberg();
    let e = carnot_complete(&g, &Matrix::from_i64(&[&[2, 1], &[0, 3]])).unwrap();
    assert!(e.is_homomorphism());
    assert_eq!(e.matrix().get(2, 2), &rat(6));
    let r = check_standing_assumptions(&e);
    assert!(r.all_hold(), "{:?}", r.failures());
    assert_eq!(e.tree_valence().unwrap(), 36.into());
}

#[test]
fn area_preserving_base_action_fails_assumptions() {
    // The centre is fixed (det = 1), so z is an eigenvector for 1.
    let e = carnot_complete(&heisenberg(), &Matrix::from_i64(&[&[2, 1], &[1, 1]])).unwrap();
    let r = check_standing_assumptions(&e);
    assert_eq!(r.failures(), vec!["nonsurjective", "unipotent-free"]);
    assert!(matches!(classify(&e, &e, DEFAULT_POWER_BOUND), Err(Error::AssumptionViolation(_))));
}

#[test]
fn rotation_type_base_action_is_self_equivalent() {
    let e = carnot_complete(&heisenberg(), &Matrix::from_i64(&[&[1, -2], &[2, 1]])).unwrap();
    let d = endomorphism_rates(&e, Direction::Forward).unwrap();
    assert_eq!(d.len(), 3);
    let v = classify(&e, &e.pow(3), DEFAULT_POWER_BOUND).unwrap();
    assert_eq!(v.outcome, Outcome::QuasiIsometric { r1: 3, r2: 1 });
}

#[test]
fn oracle_follows_heisenberg_example_rates() {
    let e = heisenberg_example();
    let grid = default_grid(10, 60);
    for c in validate_rates(&e, Direction::Forward, &grid).unwrap() {
        assert!(c.pass, "{:?}", c);
    }
    // e1 is not in the eigenspace of the 2-block, so it grows like t*2^t.
    let est = flow_divergence(&e, &[1.0, 0.0, 0.0], Direction::Forward, &grid).unwrap();
    assert!((est.base_est - 2.0).abs() < 0.1, "{:?}", est);
    assert!((est.polydeg_est - 1.0).abs() <= DEGREE_ABS_TOL, "{:?}", est);
}

#[test]
fn oracle_rejects_short_grids() {
    let e = heisenberg_example();
    let grid = default_grid(1, 7);
    assert_eq!(
        flow_divergence(&e, &[1.0, 0.0, 0.0], Direction::Forward, &grid),
        Err(Error::DegenerateFit { points: 7 })
    );
    let s = flow_series(e.matrix(), e.weights(), &[0.0, 0.0, 1.0], Direction::Forward, &default_grid(0, 20)).unwrap();
    // t = 0 is recorded but excluded from the fit.
    assert_eq!(s.len(), 21);
    assert!(fit_series(&s).is_ok());
    assert!(matches!(flow_divergence(&e, &[0.0; 3], Direction::Forward, &grid), Err(Error::InvalidInput(_))));
}

#[test]
fn abelian_algebra_is_carnot_in_degree_one() {
    let g = GradedAlgebra::abelian(2);
    let e = Endomorphism::new(g, Matrix::from_i64(&[&[3, 0], &[0, 2]])).unwrap();
    assert!(check_standing_assumptions(&e).all_hold());
    let v = classify(&e, &e, DEFAULT_POWER_BOUND).unwrap();
    assert_eq!(v.outcome, Outcome::QuasiIsometric { r1: 1, r2: 1 });
}
