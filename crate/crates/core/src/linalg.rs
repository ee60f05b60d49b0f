//! Dense complex matrix kernel.
//!
//! Superoperators act on column-stacked matrices: `vec(X)[c*d + r] = X[(r, c)]`,
//! which is exactly nalgebra's column-major storage order. With this convention
//! `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.
//!
//! The Choi matrix of a map `φ` on `d×d` matrices is `Σ_ij E_ij ⊗ φ(E_ij)`, so
//! the first tensor factor carries the matrix-unit index and the second factor
//! carries the output of the map.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Default tolerance for Hermiticity checks, relative to `max(1, max|entry|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default PSD tolerance, relative to `max(1, spectral norm)`.
pub const PSD_TOL: f64 = 1e-9;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Pauli matrix `σ_i` with `σ_0 = I`.
///
/// # Panics
/// If `i > 3`.
pub fn pauli(i: usize) -> ComplexMatrix {
    let entries = match i {
        0 => [ONE, ZERO, ZERO, ONE],
        1 => [ZERO, ONE, ONE, ZERO],
        2 => [ZERO, -I, I, ZERO],
        3 => [ONE, ZERO, ZERO, -ONE],
        _ => panic!("Pauli index {i} out of range"),
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

/// Matrix unit `E_ij` of size `d×d` (0-based indices).
pub fn matrix_unit(d: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(d, d);
    e[(i, j)] = ONE;
    e
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

/// Largest absolute entry.
pub fn max_abs(a: &ComplexMatrix) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).norm()))
}

pub fn frobenius(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(a: &ComplexMatrix) -> Complex64 {
    a.trace()
}

/// Hilbert–Schmidt inner product `Tr(A† B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn vectorize(x: &ComplexMatrix) -> ComplexVector {
    DVector::from_column_slice(x.as_slice())
}

pub fn unvectorize(v: &ComplexVector, d: usize) -> ComplexMatrix {
    DMatrix::from_column_slice(d, d, v.as_slice())
}

fn hermitian_deviation(h: &ComplexMatrix) -> f64 {
    max_abs_diff(h, &h.adjoint())
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            actual: h.ncols(),
        });
    }
    let deviation = hermitian_deviation(h);
    if deviation > HERMITIAN_TOL * max_abs(h).max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending, eigenvectors
/// in the matching columns.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_hermitian(h)?;
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(h.nrows(), h.ncols(), |r, col| {
        eig.eigenvectors[(r, order[col])]
    });
    Ok((values, vectors))
}

pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(h).map(|(v, _)| v)
}

/// Smallest eigenvalue together with the spectral norm.
pub fn spectrum_bounds(h: &ComplexMatrix) -> Result<(f64, f64)> {
    let ev = hermitian_eigenvalues(h)?;
    let min = ev.first().copied().unwrap_or(0.0);
    let norm = ev.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    Ok((min, norm))
}

/// `true` iff the smallest eigenvalue is `≥ −tol·max(1, ‖H‖₂)`.
pub fn is_psd(h: &ComplexMatrix, tol: f64) -> Result<bool> {
    let (min, norm) = spectrum_bounds(h)?;
    Ok(min >= -tol * norm.max(1.0))
}

/// Linear map on `d×d` complex matrices in its `d²×d²` matrix representation.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperOperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl SuperOperator {
    pub fn new(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        let n = dim * dim;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::identity(dim * dim, dim * dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::zeros(dim * dim, dim * dim),
        }
    }

    /// Builds the representation by evaluating `f` on every matrix unit.
    pub fn from_map<F>(dim: usize, f: F) -> Self
    where
        F: Fn(&ComplexMatrix) -> ComplexMatrix,
    {
        let n = dim * dim;
        let mut matrix = ComplexMatrix::zeros(n, n);
        for col in 0..dim {
            for row in 0..dim {
                let image = f(&matrix_unit(dim, row, col));
                let v = vectorize(&image);
                matrix.set_column(col * dim + row, &v);
            }
        }
        Self { dim, matrix }
    }

    /// `X ↦ K X K†`.
    pub fn conjugation(k: &ComplexMatrix) -> Self {
        let dim = k.nrows();
        Self {
            dim,
            matrix: kron(&k.map(|z| z.conj()), k),
        }
    }

    /// The transposition map `θ(X) = Xᵀ`.
    pub fn transposition(dim: usize) -> Self {
        let n = dim * dim;
        let mut matrix = ComplexMatrix::zeros(n, n);
        for r in 0..dim {
            for col in 0..dim {
                matrix[(col * dim + r, r * dim + col)] = ONE;
            }
        }
        Self { dim, matrix }
    }

    /// `X ↦ A X`.
    pub fn left_multiplication(a: &ComplexMatrix) -> Self {
        let dim = a.nrows();
        Self {
            dim,
            matrix: kron(&ComplexMatrix::identity(dim, dim), a),
        }
    }

    /// `X ↦ X B`.
    pub fn right_multiplication(b: &ComplexMatrix) -> Self {
        let dim = b.nrows();
        Self {
            dim,
            matrix: kron(&b.transpose(), &ComplexMatrix::identity(dim, dim)),
        }
    }

    /// `X ↦ K X K† − ½{K†K, X}`.
    pub fn dissipator(k: &ComplexMatrix) -> Self {
        let kk = k.adjoint() * k;
        let anti = &Self::left_multiplication(&kk) + &Self::right_multiplication(&kk);
        &Self::conjugation(k) - &anti.scale(0.5)
    }

    /// `φ − ½{φ'(I), ·}`: the dissipative generator built from a map `φ`.
    pub fn generator_from(phi: &SuperOperator) -> Self {
        let k = phi.dual().apply(&ComplexMatrix::identity(phi.dim, phi.dim));
        let anti = &Self::left_multiplication(&k) + &Self::right_multiplication(&k);
        phi - &anti.scale(0.5)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(x.shape(), (self.dim, self.dim), "operand has wrong shape");
        unvectorize(&(&self.matrix * vectorize(x)), self.dim)
    }

    /// `self ∘ other`, i.e. `other` acts first.
    pub fn compose(&self, other: &SuperOperator) -> SuperOperator {
        assert_eq!(self.dim, other.dim, "dimension mismatch in compose");
        SuperOperator {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn scale(&self, factor: f64) -> SuperOperator {
        SuperOperator {
            dim: self.dim,
            matrix: self.matrix.scale(factor),
        }
    }

    /// Dual map with respect to the trace pairing, `Tr(A φ(B)) = Tr(φ'(A) B)`.
    pub fn dual(&self) -> SuperOperator {
        // Tr(A φ(B)) = vec(Aᵀ)ᵀ S vec(B), hence vec(φ'(A)ᵀ) = Sᵀ vec(Aᵀ).
        let t = SuperOperator::transposition(self.dim);
        SuperOperator {
            dim: self.dim,
            matrix: &t.matrix * self.matrix.transpose() * &t.matrix,
        }
    }

    pub fn max_abs_diff(&self, other: &SuperOperator) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }
}

impl Add for &SuperOperator {
    type Output = SuperOperator;
    fn add(self, rhs: &SuperOperator) -> SuperOperator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        SuperOperator {
            dim: self.dim,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &SuperOperator {
    type Output = SuperOperator;
    fn sub(self, rhs: &SuperOperator) -> SuperOperator {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        SuperOperator {
            dim: self.dim,
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Mul<f64> for &SuperOperator {
    type Output = SuperOperator;
    fn mul(self, rhs: f64) -> SuperOperator {
        self.scale(rhs)
    }
}

/// `Σ_ij E_ij ⊗ φ(E_ij)` for a map on `d×d` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn new(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        let n = dim * dim;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Transposes the second tensor factor blockwise.
    pub fn partial_transpose(&self) -> ChoiMatrix {
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        out[(i * d + k, j * d + l)] = self.matrix[(i * d + l, j * d + k)];
                    }
                }
            }
        }
        ChoiMatrix { dim: d, matrix: out }
    }

    /// Partial trace over the second factor; equals `I` iff the map is trace preserving.
    pub fn partial_trace_second(&self) -> ComplexMatrix {
        let d = self.dim;
        ComplexMatrix::from_fn(d, d, |i, j| {
            (0..d).map(|k| self.matrix[(i * d + k, j * d + k)]).sum()
        })
    }

    pub fn to_superoperator(&self) -> SuperOperator {
        let d = self.dim;
        let mut s = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        s[(l * d + k, j * d + i)] = self.matrix[(i * d + k, j * d + l)];
                    }
                }
            }
        }
        SuperOperator { dim: d, matrix: s }
    }

    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        is_psd(&self.matrix, tol)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        spectrum_bounds(&self.matrix).map(|(min, _)| min)
    }
}

pub fn choi_of(superop: &SuperOperator) -> ChoiMatrix {
    let d = superop.dim;
    let s = &superop.matrix;
    let mut c = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    c[(i * d + k, j * d + l)] = s[(l * d + k, j * d + i)];
                }
            }
        }
    }
    ChoiMatrix { dim: d, matrix: c }
}

pub fn partial_transpose(c: &ChoiMatrix) -> ChoiMatrix {
    c.partial_transpose()
}

/// Kraus operators from the spectral decomposition of a PSD Choi matrix.
///
/// Eigenvalues at or below `tol · λ_max` are dropped, so the operator count is
/// the numerical rank.
pub fn kraus_from_choi(c: &ChoiMatrix, tol: f64) -> Result<Vec<ComplexMatrix>> {
    let d = c.dim;
    let (values, vectors) = hermitian_eigen(&c.matrix)?;
    let max = values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let min = values.first().copied().unwrap_or(0.0);
    if min < -tol * max.max(1.0) {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let cutoff = tol * max;
    let kraus = values
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > cutoff)
        .map(|(col, &mu)| {
            let scale = mu.sqrt();
            ComplexMatrix::from_fn(d, d, |k, i| vectors[(i * d + k, col)] * scale)
        })
        .collect();
    Ok(kraus)
}

/// `Σ_j X_j ρ X_j†`.
pub fn apply_kraus(kraus: &[ComplexMatrix], rho: &ComplexMatrix) -> ComplexMatrix {
    kraus
        .iter()
        .fold(ComplexMatrix::zeros(rho.nrows(), rho.ncols()), |acc, x| {
            acc + x * rho * x.adjoint()
        })
}

pub fn superoperator_from_kraus(kraus: &[ComplexMatrix]) -> SuperOperator {
    let dim = kraus[0].nrows();
    kraus.iter().fold(SuperOperator::zeros(dim), |acc, k| {
        &acc + &SuperOperator::conjugation(k)
    })
}
