//! Maximal families of mutually unbiased bases.
//!
//! Bases are indexed `α = 1..=d+1`; `α = 1` is always the computational basis.
//! Odd primes use the quadratic-phase family `ψ_k^{(a)}[j] = ω^{a j² + k j}/√d`
//! (eigenbases of `X Z^a`), `d = 2` uses the σ₃, σ₁, σ₂ eigenbases in that order,
//! and `d = 4` uses a fixed table.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, ONE, ZERO, I};

pub const MAX_PRIME: usize = 31;

#[derive(Clone, Debug)]
pub struct MubFamily {
    dim: usize,
    bases: Vec<Vec<ComplexVector>>,
}

/// `U_α^k` together with a flag marking the degenerate `k = 0` case.
#[derive(Clone, Debug)]
pub struct UnitaryEigenvector {
    pub matrix: ComplexMatrix,
    pub degenerate: bool,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

pub fn is_supported_dimension(d: usize) -> bool {
    d == 4 || (is_prime(d) && d <= MAX_PRIME)
}

pub fn build_mubs(d: usize) -> Result<MubFamily> {
    let bases = match d {
        2 => qubit_bases(),
        4 => ququart_bases(),
        _ if is_prime(d) && d <= MAX_PRIME => odd_prime_bases(d),
        _ => return Err(Error::UnsupportedDimension(d)),
    };
    Ok(MubFamily { dim: d, bases })
}

fn computational(d: usize) -> Vec<ComplexVector> {
    (0..d)
        .map(|k| ComplexVector::from_fn(d, |j, _| if j == k { ONE } else { ZERO }))
        .collect()
}

fn from_rows(rows: &[[Complex64; 4]], scale: f64) -> Vec<ComplexVector> {
    rows.iter()
        .map(|r| ComplexVector::from_iterator(4, r.iter().map(|z| z * scale)))
        .collect()
}

fn qubit_bases() -> Vec<Vec<ComplexVector>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = |a: Complex64, b: Complex64| ComplexVector::from_vec(vec![a * h, b * h]);
    vec![
        computational(2),
        vec![v(ONE, ONE), v(ONE, -ONE)],
        vec![v(ONE, I), v(ONE, -I)],
    ]
}

fn ququart_bases() -> Vec<Vec<ComplexVector>> {
    let (o, m, i, n) = (ONE, -ONE, I, -I);
    vec![
        computational(4),
        from_rows(&[[o, o, o, o], [o, o, m, m], [o, m, m, o], [o, m, o, m]], 0.5),
        from_rows(&[[o, m, n, n], [o, m, i, i], [o, o, i, n], [o, o, n, i]], 0.5),
        from_rows(&[[o, n, n, m], [o, n, i, o], [o, i, i, m], [o, i, n, o]], 0.5),
        from_rows(&[[o, n, m, n], [o, n, o, i], [o, i, o, n], [o, i, m, i]], 0.5),
    ]
}

fn odd_prime_bases(d: usize) -> Vec<Vec<ComplexVector>> {
    let norm = 1.0 / (d as f64).sqrt();
    let root = |e: usize| Complex64::from_polar(norm, 2.0 * PI * (e % d) as f64 / d as f64);
    let mut bases = vec![computational(d)];
    for a in 0..d {
        let basis = (0..d)
            .map(|k| ComplexVector::from_fn(d, |j, _| root(a * j * j + k * j)))
            .collect();
        bases.push(basis);
    }
    bases
}

impl MubFamily {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_bases(&self) -> usize {
        self.bases.len()
    }

    fn check(&self, alpha: usize, k: usize) -> Result<()> {
        if alpha == 0 || alpha > self.dim + 1 {
            return Err(Error::IndexOutOfRange(format!(
                "basis index {alpha} not in 1..={}",
                self.dim + 1
            )));
        }
        if k >= self.dim {
            return Err(Error::IndexOutOfRange(format!(
                "vector index {k} not in 0..{}",
                self.dim
            )));
        }
        Ok(())
    }

    /// `ψ_k^{(α)}`.
    pub fn vector(&self, alpha: usize, k: usize) -> Result<&ComplexVector> {
        self.check(alpha, k)?;
        Ok(&self.bases[alpha - 1][k])
    }

    /// `P_k^{(α)} = |ψ_k^{(α)}⟩⟨ψ_k^{(α)}|`.
    pub fn projector(&self, alpha: usize, k: usize) -> Result<ComplexMatrix> {
        let v = self.vector(alpha, k)?;
        Ok(v * v.adjoint())
    }

    /// `U_α^k = Σ_ℓ ω^{kℓ} P_ℓ^{(α)}` with `ω = e^{2πi/d}`.
    pub fn unitary_eigenvector(&self, alpha: usize, k: usize) -> Result<UnitaryEigenvector> {
        self.check(alpha, k)?;
        let d = self.dim;
        let mut u = ComplexMatrix::zeros(d, d);
        for l in 0..d {
            let phase = Complex64::from_polar(1.0, 2.0 * PI * ((k * l) % d) as f64 / d as f64);
            u += self.projector(alpha, l)? * phase;
        }
        Ok(UnitaryEigenvector {
            matrix: u,
            degenerate: k == 0,
        })
    }

    /// Largest `|⟨ψ_k|ψ_l⟩ − δ_kl|` within any single basis.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for basis in &self.bases {
            for (k, a) in basis.iter().enumerate() {
                for (l, b) in basis.iter().enumerate() {
                    let target = if k == l { ONE } else { ZERO };
                    worst = worst.max((a.dotc(b) - target).norm());
                }
            }
        }
        worst
    }

    /// Largest `| |⟨ψ_k^{(α)}|ψ_l^{(β)}⟩|² − 1/d |` over α ≠ β.
    pub fn unbiasedness_deviation(&self) -> f64 {
        let target = 1.0 / self.dim as f64;
        let mut worst = 0.0_f64;
        for (alpha, ba) in self.bases.iter().enumerate() {
            for bb in self.bases.iter().skip(alpha + 1) {
                for a in ba {
                    for b in bb {
                        worst = worst.max((a.dotc(b).norm_sqr() - target).abs());
                    }
                }
            }
        }
        worst
    }

    /// JSON export: `bases[α-1][k][j] = [re, im]`.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Export<'a> {
            dim: usize,
            bases: &'a [Vec<Vec<[f64; 2]>>],
        }
        let bases: Vec<Vec<Vec<[f64; 2]>>> = self
            .bases
            .iter()
            .map(|b| {
                b.iter()
                    .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                    .collect()
            })
            .collect();
        serde_json::to_value(Export {
            dim: self.dim,
            bases: &bases,
        })
        .expect("MUB export is always serializable")
    }
}
