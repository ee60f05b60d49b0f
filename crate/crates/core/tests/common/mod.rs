#![allow(dead_code)]

use dyndiv::linalg::{c, hermitian_eigen, ComplexMatrix, ComplexVector, I};
use num_complex::Complex64;
use rand::Rng;

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix<R: Rng>(rng: &mut R, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| random_complex(rng))
}

pub fn random_unit_vector<R: Rng>(rng: &mut R, d: usize) -> ComplexVector {
    let v = ComplexVector::from_fn(d, |_, _| random_complex(rng));
    let n = v.norm();
    v / c(n)
}

/// Orthonormal pair `(x, y)` by Gram–Schmidt.
pub fn random_orthonormal_pair<R: Rng>(rng: &mut R, d: usize) -> (ComplexVector, ComplexVector) {
    let x = random_unit_vector(rng, d);
    let y = random_unit_vector(rng, d);
    let overlap = x.dotc(&y);
    let y = &y - &x * overlap;
    let n = y.norm();
    (x, y / c(n))
}

pub fn random_density<R: Rng>(rng: &mut R, d: usize) -> ComplexMatrix {
    let a = random_matrix(rng, d);
    let rho = &a * a.adjoint();
    let tr = rho.trace();
    rho / tr
}

pub fn random_hermitian<R: Rng>(rng: &mut R, d: usize) -> ComplexMatrix {
    let a = random_matrix(rng, d);
    (&a + a.adjoint()) * c(0.5)
}

/// Trace-preserving Kraus family `K_i S^{-1/2}` with `S = Σ K_i†K_i`.
pub fn random_channel_kraus<R: Rng>(rng: &mut R, d: usize, n: usize) -> Vec<ComplexMatrix> {
    let raw: Vec<ComplexMatrix> = (0..n).map(|_| random_matrix(rng, d)).collect();
    let s = raw
        .iter()
        .fold(ComplexMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k);
    let (values, vectors) = hermitian_eigen(&s).unwrap();
    let inv_sqrt = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
        d,
        values.iter().map(|v| c(1.0 / v.sqrt())),
    ));
    let root = &vectors * inv_sqrt * vectors.adjoint();
    raw.iter().map(|k| k * &root).collect()
}

pub fn phase_rotation(phi: f64) -> ComplexMatrix {
    let e = |s: f64| (I * s * phi).exp();
    ComplexMatrix::from_row_slice(2, 2, &[e(-1.0), c(0.0), c(0.0), e(1.0)])
}

pub fn uniform_grid(n: usize, horizon: f64) -> Vec<f64> {
    (0..n)
        .map(|i| horizon * i as f64 / (n - 1) as f64)
        .collect()
}
