mod common;

use common::*;
use nilqi_core::growth::Direction;
use nilqi_core::oracle::{default_grid, fit_series, flow_series, validate_matrix_rates};

#[test]
fn corpus_fits_are_linear_in_log_domain() {
    let grid = default_grid(10, 40);
    for (name, m, w) in corpus() {
        for c in validate_matrix_rates(&m, &w, Direction::Forward, &grid).unwrap() {
            assert!(c.pass, "{} vector {}: {:?}", name, c.entry, c);
            assert!(c.estimate.r2 >= 0.999, "{} vector {}: r2 {}", name, c.entry, c.estimate.r2);
            assert_eq!(c.estimate.t_range, (10, 40));
        }
    }
}

#[test]
fn diagonal_corpus_bases_within_one_percent() {
    let grid = default_grid(10, 40);
    for e in [h3_endo(H3_PHI), h3_endo(H3_THETA), fourstep_endo(FOURSTEP_PHI), fourstep_endo(FOURSTEP_THETA)] {
        for c in validate_matrix_rates(e.matrix(), e.weights(), Direction::Forward, &grid).unwrap() {
            assert!(c.base_rel_err < 0.01, "{:?}", c);
        }
    }
}

#[test]
fn backward_flow_of_inverse_matches_forward_flow() {
    let e = heisenberg_example();
    let inv = e.matrix().inverse().unwrap();
    let grid = default_grid(10, 40);
    for x in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, -2.0, 0.5]] {
        let fwd = fit_series(&flow_series(e.matrix(), e.weights(), &x, Direction::Forward, &grid).unwrap()).unwrap();
        let bwd = fit_series(&flow_series(&inv, e.weights(), &x, Direction::Backward, &grid).unwrap()).unwrap();
        assert!((fwd.base_est - bwd.base_est).abs() / fwd.base_est < 0.05, "{:?} vs {:?}", fwd, bwd);
        assert!((fwd.polydeg_est - bwd.polydeg_est).abs() < 0.3, "{:?} vs {:?}", fwd, bwd);
    }
}
