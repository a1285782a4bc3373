//! Worked examples shared by the integration tests.
#![allow(dead_code)]

use nilqi_core::endomorphism::Endomorphism;
use nilqi_core::lie_algebra::{GradedAlgebra, StructureConstants};
use nilqi_core::matrix::Matrix;
use nilqi_core::Rational;
use num_bigint::BigInt;

pub fn pow2(e: u32) -> Rational {
    Rational::from_integer(BigInt::from(2).pow(e))
}

pub fn heisenberg() -> GradedAlgebra {
    GradedAlgebra::new(StructureConstants::from_int_triples(3, &[(0, 1, 2, 1)]).unwrap()).unwrap()
}

/// Heisenberg endomorphism with a 2-dimensional Jordan block at 2 and
/// `phi(z) = z^4`.
pub fn heisenberg_example() -> Endomorphism {
    Endomorphism::new(heisenberg(), Matrix::from_i64(&[&[3, -1, 0], &[1, 1, 0], &[1, 0, 4]])).unwrap()
}

/// The 6x6 Jordan matrix with weights `(1, 2, 3, 1, 1, 2)`, columns as
/// images.
pub fn six_by_six() -> (Matrix, Vec<u32>) {
    let m = Matrix::from_i64(&[
        &[2, 0, 0, 0, 0, 0],
        &[1, 2, 0, 0, 0, 0],
        &[0, 0, 2, 0, 0, 0],
        &[0, 0, 0, 3, 0, 0],
        &[0, 0, 0, 1, 3, 0],
        &[0, 0, 0, 0, 1, 3],
    ]);
    (m, vec![1, 2, 3, 1, 1, 2])
}

/// The permuted matrix as printed for the 6x6 example.
pub const PRINTED_M_SIGMA: [[i64; 6]; 6] = [
    [2, 0, 0, 1, 0, 0],
    [0, 3, 1, 0, 0, 0],
    [0, 0, 3, 0, 1, 0],
    [0, 0, 0, 2, 0, 1],
    [0, 0, 0, 0, 3, 0],
    [0, 0, 0, 0, 0, 2],
];

/// `h x h x h` with `[a1,a2]=a3, [a4,a5]=a6, [a7,a8]=a9` (0-based here).
pub fn h3() -> GradedAlgebra {
    GradedAlgebra::new(StructureConstants::from_int_triples(9, &[(0, 1, 2, 1), (3, 4, 5, 1), (6, 7, 8, 1)]).unwrap())
        .unwrap()
}

pub const H3_PHI: [u32; 9] = [1, 11, 6, 3, 15, 9, 7, 9, 8];
pub const H3_THETA: [u32; 9] = [7, 11, 9, 1, 15, 8, 3, 9, 6];

/// Diagonal endomorphism of `h3` with growth exponents `n`: generators get
/// `2^n`, centres `2^(2n)`.
pub fn h3_endo(n: [u32; 9]) -> Endomorphism {
    let d: Vec<Rational> = n.iter().enumerate().map(|(i, &e)| pow2(if i % 3 == 2 { 2 * e } else { e })).collect();
    Endomorphism::diagonal(h3(), &d).unwrap()
}

pub const FOURSTEP_NAMES: [&str; 11] = ["x", "y", "a", "b", "p", "q", "z", "c", "r", "s", "t"];

/// The four-step algebra in the order `x,y,a,b,p,q,z,c,r,s,t`; the
/// self-bracket `[r,r]` is dropped.
pub fn fourstep() -> GradedAlgebra {
    let sc = StructureConstants::from_int_triples(
        11,
        &[
            (0, 1, 6, 1),
            (2, 3, 7, 1),
            (6, 7, 10, 1),
            (4, 5, 8, 1),
            (4, 8, 9, 1),
            (5, 8, 9, 1),
            (4, 9, 10, 1),
            (5, 9, 10, 1),
        ],
    )
    .unwrap();
    GradedAlgebra::new(sc).unwrap()
}

pub const FOURSTEP_PHI: [u32; 6] = [1, 5, 3, 2, 4, 3];
pub const FOURSTEP_THETA: [u32; 6] = [1, 3, 2, 3, 5, 4];

/// Diagonal endomorphism from `(n_x, n_y, n_z, n_a, n_b, n_c)`; every
/// generator `g` of weight `w` gets `2^(n_g w)` and `n = 3` on `p,q,r,s,t`.
pub fn fourstep_endo(six: [u32; 6]) -> Endomorphism {
    let [nx, ny, nz, na, nb, nc] = six;
    let n = [nx, ny, na, nb, 3, 3, nz, nc, 3, 3, 3];
    let g = fourstep();
    let d: Vec<Rational> = n.iter().zip(g.weights()).map(|(&e, &w)| pow2(e * w)).collect();
    Endomorphism::diagonal(g, &d).unwrap()
}

/// Every matrix of the corpus with its weights.
pub fn corpus() -> Vec<(&'static str, Matrix, Vec<u32>)> {
    let mut out = Vec::new();
    let e = heisenberg_example();
    out.push(("heisenberg-example", e.matrix().clone(), e.weights().to_vec()));
    let (m, w) = six_by_six();
    out.push(("six-by-six", m, w));
    for (name, e) in [
        ("h3-phi", h3_endo(H3_PHI)),
        ("h3-theta", h3_endo(H3_THETA)),
        ("fourstep-phi", fourstep_endo(FOURSTEP_PHI)),
        ("fourstep-theta", fourstep_endo(FOURSTEP_THETA)),
    ] {
        out.push((name, e.matrix().clone(), e.weights().to_vec()));
    }
    out
}

/// Corpus entries that are endomorphisms of an algebra.
pub fn corpus_endomorphisms() -> Vec<(&'static str, Endomorphism)> {
    vec![
        ("heisenberg-example", heisenberg_example()),
        ("h3-phi", h3_endo(H3_PHI)),
        ("h3-theta", h3_endo(H3_THETA)),
        ("fourstep-phi", fourstep_endo(FOURSTEP_PHI)),
        ("fourstep-theta", fourstep_endo(FOURSTEP_THETA)),
    ]
}
