//! Pauli-channel qubit dynamics `Λ_t(ρ) = Σ_α p_α(t) σ_α ρ σ_α`.
//!
//! The generator is `L_t = Σ_α γ_α(t) L_α` with `L_α(ρ) = ½(σ_α ρ σ_α − ρ)`.
//! For qubits every positive map is decomposable, so P- and D-divisibility
//! coincide and both are decided exactly from the rates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pauli, ComplexMatrix, SuperOperator};
use crate::rates::{integrate, RateFunction};
use crate::verdict::nonneg;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliRates {
    pub rates: [RateFunction; 3],
}

impl PauliRates {
    pub fn new(g1: RateFunction, g2: RateFunction, g3: RateFunction) -> Result<Self> {
        let r = Self { rates: [g1, g2, g3] };
        r.rates.iter().try_for_each(RateFunction::validate)?;
        Ok(r)
    }

    pub fn constant(g: [f64; 3]) -> Self {
        Self {
            rates: g.map(RateFunction::constant),
        }
    }

    pub fn at(&self, t: f64) -> [f64; 3] {
        [self.rates[0].eval(t), self.rates[1].eval(t), self.rates[2].eval(t)]
    }
}

/// Eigenvalues `λ_k` of `Λ_t` on `σ_k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliEigenvalues(pub [f64; 3]);

/// `(p₀, p₁, p₂, p₃)`; entries may be negative when the map is not CP.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliProbabilities(pub [f64; 4]);

impl PauliProbabilities {
    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|&p| !nonneg(p))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JCoefficients(pub [f64; 3]);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliVerdict {
    pub cp: bool,
    pub p: bool,
    pub d: bool,
}

/// `λ_k(t) = exp(−∫₀ᵗ (γ₀ − γ_k))` with `γ₀ = γ₁ + γ₂ + γ₃`.
pub fn eigenvalues_at(r: &PauliRates, t: f64, tol: f64) -> Result<PauliEigenvalues> {
    eigenvalues_between(r, 0.0, t, tol)
}

/// Eigenvalues of the propagator `V_{t,s}`.
pub fn eigenvalues_between(r: &PauliRates, s: f64, t: f64, tol: f64) -> Result<PauliEigenvalues> {
    if s < 0.0 || t < s {
        return Err(Error::InvalidRate(format!("need 0 ≤ s ≤ t, got s={s}, t={t}")));
    }
    let acc = [
        integrate(&r.rates[0], s, t, tol)?,
        integrate(&r.rates[1], s, t, tol)?,
        integrate(&r.rates[2], s, t, tol)?,
    ];
    let total: f64 = acc.iter().sum();
    Ok(PauliEigenvalues(acc.map(|g| (-(total - g)).exp())))
}

pub fn probabilities_from_eigenvalues(lambda: &PauliEigenvalues) -> PauliProbabilities {
    let l = lambda.0;
    let sum: f64 = l.iter().sum();
    PauliProbabilities([
        0.25 * (1.0 + sum),
        0.25 * (1.0 + 2.0 * l[0] - sum),
        0.25 * (1.0 + 2.0 * l[1] - sum),
        0.25 * (1.0 + 2.0 * l[2] - sum),
    ])
}

pub fn apply_channel(p: &PauliProbabilities, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.shape() != (2, 2) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: rho.nrows().max(rho.ncols()),
        });
    }
    Ok((0..4).fold(ComplexMatrix::zeros(2, 2), |acc, a| {
        let s = pauli(a);
        acc + (&s * rho * &s).scale(p.0[a])
    }))
}

pub fn channel_superoperator(p: &PauliProbabilities) -> SuperOperator {
    (0..4).fold(SuperOperator::zeros(2), |acc, a| {
        &acc + &SuperOperator::conjugation(&pauli(a)).scale(p.0[a])
    })
}

pub fn map_from_eigenvalues(lambda: &PauliEigenvalues) -> SuperOperator {
    channel_superoperator(&probabilities_from_eigenvalues(lambda))
}

/// `j_α = Σ_β γ_β − γ_α`.
pub fn j_from_rates(g: [f64; 3]) -> JCoefficients {
    let s: f64 = g.iter().sum();
    JCoefficients(g.map(|x| s - x))
}

/// `γ_α = ½ Σ_β j_β − j_α`.
pub fn rates_from_j(j: &JCoefficients) -> [f64; 3] {
    let half: f64 = 0.5 * j.0.iter().sum::<f64>();
    j.0.map(|x| half - x)
}

pub fn classify_pointwise(g: [f64; 3]) -> PauliVerdict {
    let cp = g.iter().all(|&x| nonneg(x));
    let p = nonneg(g[0] + g[1]) && nonneg(g[0] + g[2]) && nonneg(g[1] + g[2]);
    let d = j_from_rates(g).0.iter().all(|&x| nonneg(x));
    PauliVerdict { cp, p, d }
}

/// `L_α(ρ) = ½(σ_α ρ σ_α − ρ)` for `α = 1, 2, 3`.
pub fn dissipator(alpha: usize) -> SuperOperator {
    assert!((1..=3).contains(&alpha), "Pauli dissipator index {alpha}");
    (&SuperOperator::conjugation(&pauli(alpha)) - &SuperOperator::identity(2)).scale(0.5)
}

pub fn generator(g: [f64; 3]) -> SuperOperator {
    (1..=3).fold(SuperOperator::zeros(2), |acc, a| {
        &acc + &dissipator(a).scale(g[a - 1])
    })
}

/// The completely copositive maps `φ₁(ρ) = (σ₃ρσ₃)ᵀ`, `φ₂(ρ) = ρᵀ`, `φ₃(ρ) = (σ₁ρσ₁)ᵀ`.
pub fn cocp_generator_parts() -> [SuperOperator; 3] {
    let t = SuperOperator::transposition(2);
    [
        t.compose(&SuperOperator::conjugation(&pauli(3))),
        t.clone(),
        t.compose(&SuperOperator::conjugation(&pauli(1))),
    ]
}

/// `G_α = ½ Σ_β L_β − L_α`, so that `L_t = Σ_α j_α G_α`.
pub fn generator_part(alpha: usize) -> SuperOperator {
    let sum = &(&dissipator(1) + &dissipator(2)) + &dissipator(3);
    &sum.scale(0.5) - &dissipator(alpha)
}
