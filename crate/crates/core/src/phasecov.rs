//! Phase-covariant qubit dynamics.
//!
//! `Λ[ρ] = ½[(I + λ*σ₃)Trρ + λ₁σ₁Tr(ρσ₁) + λ₁σ₂Tr(ρσ₂) + λ₃σ₃Tr(ρσ₃)]`, i.e. the
//! Bloch vector maps as `(x, y, z) ↦ (λ₁x, λ₁y, λ₃z + λ*)`. The generator is
//! `γ₊L₊ + γ₋L₋ + γ₃L₃` with
//! `L±[ρ] = σ±ρσ∓ − ½{σ∓σ±, ρ}` and `L₃[ρ] = ¼(σ₃ρσ₃ − ρ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, pauli, ComplexMatrix, SuperOperator, ONE, ZERO};
use crate::rates::{damped_integral, integrate, RateFunction};
use crate::verdict::{nonneg, Verdict, COMPARISON_TOL};

pub const CERT_CP: &str = "CP";
pub const CERT_P: &str = "P-iff";
pub const CERT_BETA: &str = "D-beta";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseCovRates {
    pub plus: RateFunction,
    pub minus: RateFunction,
    pub dephasing: RateFunction,
}

impl PhaseCovRates {
    pub fn new(plus: RateFunction, minus: RateFunction, dephasing: RateFunction) -> Result<Self> {
        plus.validate()?;
        minus.validate()?;
        dephasing.validate()?;
        Ok(Self {
            plus,
            minus,
            dephasing,
        })
    }

    pub fn constant(plus: f64, minus: f64, dephasing: f64) -> Self {
        Self {
            plus: RateFunction::constant(plus),
            minus: RateFunction::constant(minus),
            dephasing: RateFunction::constant(dephasing),
        }
    }

    pub fn at(&self, t: f64) -> [f64; 3] {
        [self.plus.eval(t), self.minus.eval(t), self.dephasing.eval(t)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseCovParams {
    pub lambda1: f64,
    pub lambda3: f64,
    pub lambda_star: f64,
}

impl PhaseCovParams {
    pub const IDENTITY: PhaseCovParams = PhaseCovParams {
        lambda1: 1.0,
        lambda3: 1.0,
        lambda_star: 0.0,
    };

    /// `self ∘ first`.
    pub fn after(&self, first: &PhaseCovParams) -> PhaseCovParams {
        PhaseCovParams {
            lambda1: self.lambda1 * first.lambda1,
            lambda3: self.lambda3 * first.lambda3,
            lambda_star: self.lambda3 * first.lambda_star + self.lambda_star,
        }
    }

    pub fn bloch_image(&self, v: [f64; 3]) -> [f64; 3] {
        [
            self.lambda1 * v[0],
            self.lambda1 * v[1],
            self.lambda3 * v[2] + self.lambda_star,
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaCoefficients(pub [f64; 3]);

/// Parameters of the propagator `V_{t,s}`.
pub fn params_between(r: &PhaseCovRates, s: f64, t: f64, tol: f64) -> Result<PhaseCovParams> {
    if s < 0.0 || t < s {
        return Err(Error::InvalidRate(format!("need 0 ≤ s ≤ t, got s={s}, t={t}")));
    }
    let gp = integrate(&r.plus, s, t, tol)?;
    let gm = integrate(&r.minus, s, t, tol)?;
    let g3 = integrate(&r.dephasing, s, t, tol)?;
    let lambda_star = damped_integral(
        &[&r.plus, &r.minus],
        |tau| r.plus.eval(tau) - r.minus.eval(tau),
        |tau| r.plus.eval(tau) + r.minus.eval(tau),
        s,
        t,
        tol,
    )?;
    Ok(PhaseCovParams {
        lambda1: (-0.5 * (gp + gm + g3)).exp(),
        lambda3: (-(gp + gm)).exp(),
        lambda_star,
    })
}

/// `λ₁(t)`, `λ₃(t)`, `λ*(t)` of `Λ_t`.
pub fn params_at(r: &PhaseCovRates, t: f64, tol: f64) -> Result<PhaseCovParams> {
    params_between(r, 0.0, t, tol)
}

/// `Λ_t` on a sorted grid starting at 0, composed interval by interval.
pub fn params_on_grid(r: &PhaseCovRates, grid: &[f64], tol: f64) -> Result<Vec<PhaseCovParams>> {
    if grid.first().copied() != Some(0.0) {
        return Err(Error::InvalidRate("grid must start at 0".into()));
    }
    let mut out = Vec::with_capacity(grid.len());
    let mut current = PhaseCovParams::IDENTITY;
    out.push(current);
    for w in grid.windows(2) {
        let step = params_between(r, w[0], w[1], tol)?;
        current = step.after(&current);
        out.push(current);
    }
    Ok(out)
}

pub fn apply_map(p: &PhaseCovParams, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.shape() != (2, 2) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: rho.nrows().max(rho.ncols()),
        });
    }
    let tr = |m: &ComplexMatrix| (rho * m).trace();
    let (s1, s2, s3) = (pauli(1), pauli(2), pauli(3));
    let id = ComplexMatrix::identity(2, 2);
    let out = (&id + &s3 * c(p.lambda_star)) * rho.trace()
        + &s1 * (tr(&s1) * p.lambda1)
        + &s2 * (tr(&s2) * p.lambda1)
        + &s3 * (tr(&s3) * p.lambda3);
    Ok(out * c(0.5))
}

pub fn superoperator(p: &PhaseCovParams) -> SuperOperator {
    SuperOperator::from_map(2, |x| apply_map(p, x).expect("2x2 operand"))
}

/// `ρ* = ½[I + λ*/(1 − λ₃)·σ₃]`.
pub fn stationary_state(lambda3: f64, lambda_star: f64) -> Result<ComplexMatrix> {
    if lambda3 == 1.0 {
        return Err(Error::NoStationaryState);
    }
    let z = lambda_star / (1.0 - lambda3);
    Ok((ComplexMatrix::identity(2, 2) + pauli(3) * c(z)) * c(0.5))
}

/// `|λ₃| + |λ*| ≤ 1` and `4λ₁² + λ*² ≤ (1 + λ₃)²`.
pub fn cp_static(p: &PhaseCovParams) -> bool {
    let first = p.lambda3.abs() + p.lambda_star.abs() <= 1.0 + COMPARISON_TOL;
    let second = 4.0 * p.lambda1 * p.lambda1 + p.lambda_star * p.lambda_star
        <= (1.0 + p.lambda3).powi(2) + COMPARISON_TOL;
    first && second
}

fn sqrt_product(gp: f64, gm: f64) -> f64 {
    let prod = gp * gm;
    if prod < 0.0 && prod.abs() < 1e-14 {
        0.0
    } else {
        prod.max(0.0).sqrt()
    }
}

/// `γ± ≥ 0` and `γ₃ + √(γ₊γ₋) ≥ 0`.
pub fn p_divisible_pointwise(gp: f64, gm: f64, g3: f64) -> bool {
    nonneg(gp) && nonneg(gm) && nonneg(g3 + sqrt_product(gp, gm))
}

/// `γ± ≥ 0` and `γ₃ + 2√(γ₊γ₋) ≥ 0`: positivity of `⟨ψ⊥|L(|ψ⟩⟨ψ|)|ψ⊥⟩` for
/// every pure `ψ` with `L₃ = ¼(σ₃ρσ₃ − ρ)`.
pub fn p_divisible_generator(gp: f64, gm: f64, g3: f64) -> bool {
    nonneg(gp) && nonneg(gm) && nonneg(g3 + 2.0 * sqrt_product(gp, gm))
}

pub fn cp_divisible_pointwise(gp: f64, gm: f64, g3: f64) -> bool {
    nonneg(gp) && nonneg(gm) && nonneg(g3)
}

/// `β₁ = γ₊+γ₋−γ₃`, `β₂ = 3γ₊−γ₋+γ₃`, `β₃ = −γ₊+3γ₋+γ₃`.
pub fn beta_from_rates(gp: f64, gm: f64, g3: f64) -> BetaCoefficients {
    BetaCoefficients([gp + gm - g3, 3.0 * gp - gm + g3, -gp + 3.0 * gm + g3])
}

/// Inverse of [`beta_from_rates`], returning `(γ₊, γ₋, γ₃)`.
pub fn rates_from_beta(b: &BetaCoefficients) -> [f64; 3] {
    let [b1, b2, b3] = b.0;
    [
        0.25 * (b1 + b2),
        0.25 * (b1 + b3),
        0.25 * (b2 + b3 - 2.0 * b1),
    ]
}

pub fn beta_region(gp: f64, gm: f64, g3: f64) -> bool {
    beta_from_rates(gp, gm, g3).0.iter().all(|&b| nonneg(b))
}

/// `γ± ≥ 0 ∧ max{γ₊−3γ₋, γ₋−3γ₊} ≤ γ₃ ≤ γ₊+γ₋`.
pub fn beta_equivalent_region(gp: f64, gm: f64, g3: f64) -> bool {
    nonneg(gp)
        && nonneg(gm)
        && nonneg(g3 - (gp - 3.0 * gm).max(gm - 3.0 * gp))
        && nonneg(gp + gm - g3)
}

/// β-certificate or CP: either one implies a decomposable propagator.
pub fn d_sufficient_pointwise(gp: f64, gm: f64, g3: f64) -> bool {
    beta_region(gp, gm, g3) || cp_divisible_pointwise(gp, gm, g3)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseCovCertificate {
    pub cp: bool,
    pub p: bool,
    pub beta: bool,
    pub d: Verdict,
    pub fired: Vec<&'static str>,
    pub failed: Vec<&'static str>,
}

pub fn classify_pointwise(gp: f64, gm: f64, g3: f64) -> PhaseCovCertificate {
    let cp = cp_divisible_pointwise(gp, gm, g3);
    let p = p_divisible_generator(gp, gm, g3);
    let beta = beta_region(gp, gm, g3);
    let d = if beta || cp {
        Verdict::Yes
    } else if !p {
        Verdict::No
    } else {
        Verdict::Unknown
    };
    let mut fired = Vec::new();
    let mut failed = Vec::new();
    for (name, ok) in [(CERT_CP, cp), (CERT_P, p), (CERT_BETA, beta)] {
        if ok {
            fired.push(name)
        } else {
            failed.push(name)
        }
    }
    PhaseCovCertificate {
        cp,
        p,
        beta,
        d,
        fired,
        failed,
    }
}

pub fn raising() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
}

pub fn lowering() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ONE, ZERO])
}

/// `L₊`, `L₋`, `L₃`.
pub fn dissipators() -> [SuperOperator; 3] {
    let l3 = (&SuperOperator::conjugation(&pauli(3)) - &SuperOperator::identity(2)).scale(0.25);
    [
        SuperOperator::dissipator(&raising()),
        SuperOperator::dissipator(&lowering()),
        l3,
    ]
}

pub fn generator(gp: f64, gm: f64, g3: f64) -> SuperOperator {
    let [lp, lm, l3] = dissipators();
    &(&lp.scale(gp) + &lm.scale(gm)) + &l3.scale(g3)
}

/// `G₁ = ¼(L₊+L₋−2L₃)`, `G₂ = ¼(L₊+L₃)`, `G₃ = ¼(L₋+L₃)`.
pub fn beta_generator_parts() -> [SuperOperator; 3] {
    let [lp, lm, l3] = dissipators();
    [
        (&(&lp + &lm) - &l3.scale(2.0)).scale(0.25),
        (&lp + &l3).scale(0.25),
        (&lm + &l3).scale(0.25),
    ]
}
