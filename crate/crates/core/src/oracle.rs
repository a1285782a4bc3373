//! Floating-point flow-line simulation: `||M^{±t} x||` under the
//! homogeneous norm, with a least-squares fit of base and polynomial degree.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::endomorphism::Endomorphism;
use crate::growth::{basis_rates, Direction, DivergenceMultiset, GrowthRate};
use crate::jordan::EigenKind;
use crate::matrix::Matrix;
use crate::pajf::{adapted_jordan_basis, AdaptedJordanBasis};
use crate::scalar::rational_to_f64;
use crate::{Error, Result};

pub const MIN_FIT_POINTS: usize = 8;
pub const BASE_REL_TOL: f64 = 0.05;
pub const DEGREE_ABS_TOL: f64 = 0.3;

/// Integer grid `t_min..=t_max`.
pub fn default_grid(t_min: u32, t_max: u32) -> Vec<u32> {
    (t_min..=t_max).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowEstimate {
    pub base_est: f64,
    pub polydeg_est: f64,
    pub r2: f64,
    pub t_range: (u32, u32),
}

fn to_f64_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| rational_to_f64(m.get(i, j))).collect()).collect()
}

fn step_matrix(m: &Matrix, direction: Direction) -> Result<Vec<Vec<f64>>> {
    match direction {
        Direction::Forward => Ok(to_f64_rows(m)),
        Direction::Backward => Ok(to_f64_rows(&m.inverse()?)),
    }
}

/// `(t, ln ||M^{±t} x||)` for every grid point where the orbit is nonzero.
/// The orbit is iterated one step at a time and renormalised, with the
/// scale kept as a logarithm.
pub fn flow_series(m: &Matrix, w: &[u32], x: &[f64], direction: Direction, grid: &[u32]) -> Result<Vec<(u32, f64)>> {
    let n = w.len();
    if m.nrows() != n || x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    let a = step_matrix(m, direction)?;
    let mut grid = grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let mut v = x.to_vec();
    let mut log_scale = 0.0;
    let mut out = Vec::new();
    let mut t = 0;
    for &target in &grid {
        while t < target {
            let next: Vec<f64> = a.iter().map(|row| row.iter().zip(&v).map(|(p, q)| p * q).sum()).collect();
            let s = next.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
            if s == 0.0 || !s.is_finite() {
                return Ok(out);
            }
            v = next.iter().map(|c| c / s).collect();
            log_scale += libm::log(s);
            t += 1;
        }
        let log_norm = v
            .iter()
            .zip(w)
            .filter(|(c, _)| **c != 0.0)
            .map(|(c, &wk)| (libm::log(c.abs()) + log_scale) / f64::from(wk))
            .fold(f64::NEG_INFINITY, f64::max);
        if log_norm.is_finite() {
            out.push((target, log_norm));
        }
    }
    Ok(out)
}

/// Fits `ln y = a t + b ln t + c` by least squares.
pub fn fit_series(series: &[(u32, f64)]) -> Result<FlowEstimate> {
    let pts: Vec<(f64, f64)> = series.iter().filter(|(t, _)| *t >= 1).map(|&(t, y)| (f64::from(t), y)).collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::DegenerateFit { points: pts.len() });
    }
    let mut ata = [[0.0f64; 3]; 3];
    let mut aty = [0.0f64; 3];
    for &(t, y) in &pts {
        let row = [t, libm::log(t), 1.0];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            aty[i] += row[i] * y;
        }
    }
    let coef = solve3(ata, aty).ok_or(Error::DegenerateFit { points: pts.len() })?;
    let mean = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for &(t, y) in &pts {
        let f = coef[0] * t + coef[1] * libm::log(t) + coef[2];
        ss_res += (y - f) * (y - f);
        ss_tot += (y - mean) * (y - mean);
    }
    let r2 = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    let t_min = series.iter().map(|p| p.0).min().unwrap_or(0);
    let t_max = series.iter().map(|p| p.0).max().unwrap_or(0);
    Ok(FlowEstimate { base_est: libm::exp(coef[0]), polydeg_est: coef[1], r2, t_range: (t_min, t_max) })
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for c in 0..3 {
        let p = (c..3).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..3 {
            let f = a[r][c] / a[c][c];
            for k in c..3 {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let s: f64 = (r + 1..3).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

pub fn flow_divergence(e: &Endomorphism, x: &[f64], direction: Direction, grid: &[u32]) -> Result<FlowEstimate> {
    if x.iter().all(|c| *c == 0.0) {
        return Err(Error::InvalidInput("flow of the zero vector".into()));
    }
    fit_series(&flow_series(e.matrix(), e.weights(), x, direction, grid)?)
}

/// A chain vector as a real vector: evaluated at the root, taking the real
/// or imaginary part for a complex pair.
pub fn numeric_chain_vector(
    basis: &AdaptedJordanBasis,
    component: usize,
    root: usize,
    chain: usize,
    position: usize,
    conjugate: bool,
) -> Vec<f64> {
    let comp = &basis.components[component];
    let v = &comp.chains[chain].vectors[position];
    let z = match &comp.roots[root].kind {
        EigenKind::Real(r) => Complex64::new(r.to_f64(), 0.0),
        EigenKind::ComplexPair { a, b } => Complex64::new(a.to_f64(), b.to_f64()),
    };
    v.iter()
        .map(|p| {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in p.coeffs().iter().rev() {
                acc = acc * z + Complex64::new(rational_to_f64(c), 0.0);
            }
            if conjugate {
                acc.im
            } else {
                acc.re
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateCheck {
    /// Index into the rate multiset.
    pub entry: usize,
    pub vector: Vec<f64>,
    pub symbolic: GrowthRate,
    pub estimate: FlowEstimate,
    pub base_rel_err: f64,
    pub degree_err: f64,
    pub pass: bool,
}

/// Compares every symbolic rate in `rates` with the simulated flow of its
/// chain vector under `m`.
pub fn validate_rates_against(
    m: &Matrix,
    w: &[u32],
    basis: &AdaptedJordanBasis,
    rates: &DivergenceMultiset,
    direction: Direction,
    grid: &[u32],
) -> Result<Vec<RateCheck>> {
    let mut out = vec![];
    for (i, entry) in rates.entries.iter().enumerate() {
        let x = numeric_chain_vector(basis, entry.component, entry.root, entry.chain, entry.position, entry.conjugate);
        let estimate = fit_series(&flow_series(m, w, &x, direction, grid)?)?;
        let base = entry.rate.base_f64();
        let base_rel_err = (estimate.base_est - base).abs() / base;
        let degree_err = (estimate.polydeg_est - entry.rate.degree_f64()).abs();
        let pass = base_rel_err <= BASE_REL_TOL && degree_err <= DEGREE_ABS_TOL;
        out.push(RateCheck {
            entry: i,
            vector: x,
            symbolic: entry.rate.clone(),
            estimate,
            base_rel_err,
            degree_err,
            pass,
        });
    }
    Ok(out)
}

pub fn validate_rates(e: &Endomorphism, direction: Direction, grid: &[u32]) -> Result<Vec<RateCheck>> {
    validate_matrix_rates(e.matrix(), e.weights(), direction, grid)
}

/// [`validate_rates`] for a bare matrix that preserves the weight filtration.
pub fn validate_matrix_rates(m: &Matrix, w: &[u32], direction: Direction, grid: &[u32]) -> Result<Vec<RateCheck>> {
    let basis = adapted_jordan_basis(m, w)?;
    let rates = basis_rates(&basis, direction);
    validate_rates_against(m, w, &basis, &rates, direction, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::{GradedAlgebra, StructureConstants};
    use crate::scalar::rat;

    fn heisenberg_example() -> Endomorphism {
        let g = GradedAlgebra::new(StructureConstants::from_int_triples(3, &[(0, 1, 2, 1)]).unwrap()).unwrap();
        Endomorphism::new(g, Matrix::from_i64(&[&[3, -1, 0], &[1, 1, 0], &[1, 0, 4]])).unwrap()
    }

    #[test]
    fn one_dimensional_doubling() {
        let e = Endomorphism::diagonal(GradedAlgebra::abelian(1), &[rat(2)]).unwrap();
        let f = flow_divergence(&e, &[1.0], Direction::Forward, &default_grid(10, 40)).unwrap();
        assert!((f.base_est - 2.0).abs() < 1e-9);
        assert!(f.polydeg_est.abs() < 1e-6);
        let b = flow_divergence(&e, &[1.0], Direction::Backward, &default_grid(10, 40)).unwrap();
        assert!((b.base_est - 0.5).abs() < 1e-9);
    }

    #[test]
    fn heisenberg_directions() {
        let e = heisenberg_example();
        let grid = default_grid(10, 40);
        // Basis direction e_y sits in the 2-eigenspace chain, e_x generates it.
        let checks = validate_rates(&e, Direction::Forward, &grid).unwrap();
        assert_eq!(checks.len(), 3);
        assert!(checks.iter().all(|c| c.pass && c.estimate.r2 > 0.999), "{:?}", checks);
        let fx = flow_divergence(&e, &[1.0, 0.0, 0.0], Direction::Forward, &grid).unwrap();
        assert!((fx.base_est - 2.0).abs() < 0.1 && (fx.polydeg_est - 1.0).abs() < 0.3);
    }

    #[test]
    fn too_few_points() {
        let e = heisenberg_example();
        let r = flow_divergence(&e, &[1.0, 0.0, 0.0], Direction::Forward, &default_grid(10, 15));
        assert_eq!(r, Err(Error::DegenerateFit { points: 6 }));
    }
}
