//! Generators, analytic dynamical maps and propagators, numeric oracles, and
//! timeline classification.

mod ode;
mod report;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpc::{self, GpcRates};
use crate::linalg::{choi_of, pauli, ComplexMatrix, ComplexVector, SuperOperator, ONE};
use crate::mub::{build_mubs, MubFamily};
use crate::phasecov::{self, PhaseCovParams, PhaseCovRates};
use crate::qubit_pauli::{self, PauliEigenvalues, PauliRates};
use crate::rates::RateFunction;

pub use ode::{integrate_master_equation, rk4_trajectory, MAX_REFINEMENTS};
pub use report::{
    classify_rates, classify_timeline, ClassifyOptions, DivisibilityReport, OracleCheck, PairKind,
    PointVerdict, RateVerdict, Summary, TRIVIAL_CERTIFICATE,
};

/// Family eigenvalues below this make `Λ_t` numerically non-invertible.
pub const INVERTIBILITY_TOL: f64 = 1e-12;
/// Slack on Bloch multipliers for Pauli-diagonal maps.
pub const BLOCH_TOL: f64 = 1e-12;
/// Slack on sampled Bloch image norms.
pub const BLOCH_SAMPLE_TOL: f64 = 1e-9;
pub const BLOCH_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Pauli,
    Gpc,
    PhaseCov,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::Pauli => "pauli",
            FamilyKind::Gpc => "gpc",
            FamilyKind::PhaseCov => "phasecov",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Family {
    Pauli(PauliRates),
    Gpc {
        rates: GpcRates,
        mubs: Arc<MubFamily>,
    },
    PhaseCov(PhaseCovRates),
}

/// A time-local generator `L_t = Σ_i γ_i(t) L_i` of one of the supported families.
#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    family: Family,
    parts: Arc<Vec<SuperOperator>>,
    /// Dephasing channels `Φ_α` (generalized Pauli only).
    channels: Arc<Vec<SuperOperator>>,
}

impl GeneratorSpec {
    pub fn pauli(rates: PauliRates) -> Self {
        Self {
            family: Family::Pauli(rates),
            parts: Arc::new((1..=3).map(qubit_pauli::dissipator).collect()),
            channels: Arc::new(Vec::new()),
        }
    }

    pub fn gpc(rates: GpcRates) -> Result<Self> {
        let mubs = build_mubs(rates.dim())?;
        Self::gpc_with(rates, Arc::new(mubs))
    }

    pub fn gpc_with(rates: GpcRates, mubs: Arc<MubFamily>) -> Result<Self> {
        if mubs.dim() != rates.dim() {
            return Err(Error::DimensionMismatch {
                expected: rates.dim(),
                actual: mubs.dim(),
            });
        }
        let channels = gpc::dephasing_channels(&mubs)?;
        let id = SuperOperator::identity(rates.dim());
        let parts = channels.iter().map(|phi| phi - &id).collect();
        Ok(Self {
            family: Family::Gpc { rates, mubs },
            parts: Arc::new(parts),
            channels: Arc::new(channels),
        })
    }

    pub fn phasecov(rates: PhaseCovRates) -> Self {
        Self {
            family: Family::PhaseCov(rates),
            parts: Arc::new(phasecov::dissipators().to_vec()),
            channels: Arc::new(Vec::new()),
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn kind(&self) -> FamilyKind {
        match self.family {
            Family::Pauli(_) => FamilyKind::Pauli,
            Family::Gpc { .. } => FamilyKind::Gpc,
            Family::PhaseCov(_) => FamilyKind::PhaseCov,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.family {
            Family::Gpc { rates, .. } => rates.dim(),
            _ => 2,
        }
    }

    pub fn rate_functions(&self) -> Vec<&RateFunction> {
        match &self.family {
            Family::Pauli(r) => r.rates.iter().collect(),
            Family::Gpc { rates, .. } => rates.rates().iter().collect(),
            Family::PhaseCov(r) => vec![&r.plus, &r.minus, &r.dephasing],
        }
    }

    pub fn rates_at(&self, t: f64) -> Vec<f64> {
        self.rate_functions().iter().map(|r| r.eval(t)).collect()
    }

    /// `L_t` as a superoperator.
    pub fn generator_at(&self, t: f64) -> SuperOperator {
        let mut out = SuperOperator::zeros(self.dim());
        for (part, rate) in self.parts.iter().zip(self.rates_at(t)) {
            if rate != 0.0 {
                out = &out + &part.scale(rate);
            }
        }
        out
    }

    /// True when every rate function vanishes identically.
    pub fn is_trivial(&self) -> bool {
        self.rate_functions().iter().all(|r| r.is_identically_zero())
    }

    pub fn mubs(&self) -> Option<&MubFamily> {
        match &self.family {
            Family::Gpc { mubs, .. } => Some(mubs),
            _ => None,
        }
    }
}

/// Closed-form parameters of a family map (either `Λ_t` or a propagator).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilyParams {
    Pauli { eigenvalues: [f64; 3] },
    Gpc { eigenvalues: Vec<f64> },
    PhaseCov(PhaseCovParams),
}

impl FamilyParams {
    pub fn identity(g: &GeneratorSpec) -> Self {
        match g.kind() {
            FamilyKind::Pauli => FamilyParams::Pauli {
                eigenvalues: [1.0; 3],
            },
            FamilyKind::Gpc => FamilyParams::Gpc {
                eigenvalues: vec![1.0; g.dim() + 1],
            },
            FamilyKind::PhaseCov => FamilyParams::PhaseCov(PhaseCovParams::IDENTITY),
        }
    }

    /// Smallest eigenvalue magnitude of the map restricted to traceless operators.
    pub fn min_eigenvalue(&self) -> f64 {
        let fold = |xs: &[f64]| xs.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        match self {
            FamilyParams::Pauli { eigenvalues } => fold(eigenvalues),
            FamilyParams::Gpc { eigenvalues } => fold(eigenvalues),
            FamilyParams::PhaseCov(p) => fold(&[p.lambda1, p.lambda3]),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FamilyParams) -> Result<FamilyParams> {
        match (self, first) {
            (FamilyParams::Pauli { eigenvalues: a }, FamilyParams::Pauli { eigenvalues: b }) => {
                Ok(FamilyParams::Pauli {
                    eigenvalues: [a[0] * b[0], a[1] * b[1], a[2] * b[2]],
                })
            }
            (FamilyParams::Gpc { eigenvalues: a }, FamilyParams::Gpc { eigenvalues: b })
                if a.len() == b.len() =>
            {
                Ok(FamilyParams::Gpc {
                    eigenvalues: a.iter().zip(b).map(|(x, y)| x * y).collect(),
                })
            }
            (FamilyParams::PhaseCov(a), FamilyParams::PhaseCov(b)) => {
                Ok(FamilyParams::PhaseCov(a.after(b)))
            }
            _ => Err(Error::Config("cannot compose maps of different families".into())),
        }
    }
}

fn check_times(s: f64, t: f64) -> Result<()> {
    if !(s.is_finite() && t.is_finite()) || s < 0.0 || t < s {
        return Err(Error::InvalidRate(format!("need 0 ≤ s ≤ t, got s={s}, t={t}")));
    }
    Ok(())
}

/// Parameters of `V_{t,s}` from quadratures of the rates over `[s, t]`.
pub fn params_between(g: &GeneratorSpec, s: f64, t: f64, tol: f64) -> Result<FamilyParams> {
    check_times(s, t)?;
    Ok(match &g.family {
        Family::Pauli(r) => FamilyParams::Pauli {
            eigenvalues: qubit_pauli::eigenvalues_between(r, s, t, tol)?.0,
        },
        Family::Gpc { rates, .. } => FamilyParams::Gpc {
            eigenvalues: gpc::eigenvalues_between(rates, s, t, tol)?.0,
        },
        Family::PhaseCov(r) => FamilyParams::PhaseCov(phasecov::params_between(r, s, t, tol)?),
    })
}

pub(crate) fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.first().copied() != Some(0.0) {
        return Err(Error::Config("time grid must start at 0".into()));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite("time grid".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Parameters of each grid step `V_{t_{i+1}, t_i}`.
pub fn step_params(g: &GeneratorSpec, grid: &[f64], tol: f64) -> Result<Vec<FamilyParams>> {
    validate_grid(grid)?;
    grid.windows(2)
        .map(|w| params_between(g, w[0], w[1], tol))
        .collect()
}

/// `Λ_{t_i}` parameters on the grid, composed step by step.
pub fn params_on_grid(g: &GeneratorSpec, grid: &[f64], tol: f64) -> Result<Vec<FamilyParams>> {
    let steps = step_params(g, grid, tol)?;
    let mut out = Vec::with_capacity(grid.len());
    let mut current = FamilyParams::identity(g);
    out.push(current.clone());
    for step in &steps {
        current = step.after(&current)?;
        out.push(current.clone());
    }
    Ok(out)
}

/// The superoperator of the family map with the given parameters.
pub fn map_from_params(g: &GeneratorSpec, p: &FamilyParams) -> Result<SuperOperator> {
    match (&g.family, p) {
        (Family::Pauli(_), FamilyParams::Pauli { eigenvalues }) => {
            Ok(qubit_pauli::map_from_eigenvalues(&PauliEigenvalues(*eigenvalues)))
        }
        (Family::Gpc { rates, .. }, FamilyParams::Gpc { eigenvalues }) => {
            let probs = gpc::probabilities_from_eigenvalues(
                &gpc::GpcEigenvalues(eigenvalues.clone()),
                rates.dim(),
            )?;
            gpc::gpc_map_from_channels(&g.channels, &probs)
        }
        (Family::PhaseCov(_), FamilyParams::PhaseCov(p)) => Ok(phasecov::superoperator(p)),
        _ => Err(Error::Config("parameters do not match the generator family".into())),
    }
}

/// `Λ_t` from the family's closed form.
pub fn analytic_map_at(g: &GeneratorSpec, t: f64, tol: f64) -> Result<SuperOperator> {
    map_from_params(g, &params_between(g, 0.0, t, tol)?)
}

/// `V_{t,s}` with `Λ_t = V_{t,s} ∘ Λ_s`.
#[derive(Clone, Debug)]
pub struct Propagator {
    pub s: f64,
    pub t: f64,
    pub params: FamilyParams,
    pub map: SuperOperator,
}

impl Propagator {
    /// `self ∘ earlier`, i.e. `V_{t,s} ∘ V_{s,r} = V_{t,r}`.
    pub fn after(&self, g: &GeneratorSpec, earlier: &Propagator) -> Result<Propagator> {
        if (earlier.t - self.s).abs() > 1e-12 * self.s.abs().max(1.0) {
            return Err(Error::Config(format!(
                "cannot compose V_({},{}) after V_({},{})",
                self.t, self.s, earlier.t, earlier.s
            )));
        }
        let params = self.params.after(&earlier.params)?;
        let map = map_from_params(g, &params)?;
        Ok(Propagator {
            s: earlier.s,
            t: self.t,
            params,
            map,
        })
    }
}

/// Builds `V_{t,s}` analytically. Fails when `Λ_s` is not invertible.
pub fn propagator(g: &GeneratorSpec, s: f64, t: f64, tol: f64) -> Result<Propagator> {
    check_times(s, t)?;
    let at_s = params_between(g, 0.0, s, tol)?;
    let min = at_s.min_eigenvalue();
    if min < INVERTIBILITY_TOL {
        return Err(Error::NonInvertible { t: s, eigenvalue: min });
    }
    let params = params_between(g, s, t, tol)?;
    let map = map_from_params(g, &params)?;
    Ok(Propagator { s, t, params, map })
}

/// Choi test: the map is CP.
pub fn map_is_cp(map: &SuperOperator, tol: f64) -> Result<bool> {
    choi_of(map).is_psd(tol)
}

/// Partial-transpose Choi test: the map is completely copositive.
pub fn map_is_cocp(map: &SuperOperator, tol: f64) -> Result<bool> {
    choi_of(map).partial_transpose().is_psd(tol)
}

pub fn check_cp(v: &Propagator, tol: f64) -> Result<bool> {
    map_is_cp(&v.map, tol)
}

pub fn check_cocp(v: &Propagator, tol: f64) -> Result<bool> {
    map_is_cocp(&v.map, tol)
}

/// Affine Bloch action `r ↦ T r + c` of a qubit map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochAffine {
    pub matrix: [[f64; 3]; 3],
    pub shift: [f64; 3],
}

impl BlochAffine {
    pub fn image(&self, r: [f64; 3]) -> [f64; 3] {
        let mut out = self.shift;
        for (i, row) in self.matrix.iter().enumerate() {
            out[i] += row[0] * r[0] + row[1] * r[1] + row[2] * r[2];
        }
        out
    }

    /// Diagonal multipliers when the map is Pauli-diagonal and unital.
    pub fn pauli_multipliers(&self) -> Option<[f64; 3]> {
        let scale = self
            .matrix
            .iter()
            .flatten()
            .fold(1.0_f64, |m, x| m.max(x.abs()));
        let eps = 1e-14 * scale;
        let off_diag = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .all(|(i, j)| self.matrix[i][j].abs() <= eps);
        let centred = self.shift.iter().all(|x| x.abs() <= eps);
        (off_diag && centred).then(|| [self.matrix[0][0], self.matrix[1][1], self.matrix[2][2]])
    }
}

pub fn bloch_affine(map: &SuperOperator) -> Result<BlochAffine> {
    if map.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: map.dim(),
        });
    }
    let sigma = [pauli(1), pauli(2), pauli(3)];
    let mut matrix = [[0.0; 3]; 3];
    let mut shift = [0.0; 3];
    let img_id = map.apply(&ComplexMatrix::identity(2, 2));
    for i in 0..3 {
        shift[i] = 0.5 * (&sigma[i] * &img_id).trace().re;
        for j in 0..3 {
            matrix[i][j] = 0.5 * (&sigma[i] * map.apply(&sigma[j])).trace().re;
        }
    }
    Ok(BlochAffine { matrix, shift })
}

/// Near-uniform points on the unit sphere plus the six axis poles.
pub fn sphere_samples(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    let mut out: Vec<[f64; 3]> = (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect();
    for axis in 0..3 {
        for sign in [1.0, -1.0] {
            let mut v = [0.0; 3];
            v[axis] = sign;
            out.push(v);
        }
    }
    out
}

/// Positivity of a qubit map: exact for Pauli-diagonal maps, sampled otherwise.
pub fn map_is_positive_qubit(map: &SuperOperator) -> Result<bool> {
    let affine = bloch_affine(map)?;
    if let Some(mu) = affine.pauli_multipliers() {
        return Ok(mu.iter().all(|m| m.abs() <= 1.0 + BLOCH_TOL));
    }
    Ok(sphere_samples(BLOCH_SAMPLES).into_iter().all(|r| {
        let v = affine.image(r);
        (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() <= 1.0 + BLOCH_SAMPLE_TOL
    }))
}

/// For qubits positivity and decomposability coincide.
pub fn check_positive_qubit(v: &Propagator) -> Result<bool> {
    map_is_positive_qubit(&v.map)
}

/// `L` has the Lindblad form with nonnegative rates iff its Choi matrix is PSD
/// on the complement of the maximally entangled vector.
pub fn generator_is_conditionally_cp(l: &SuperOperator, tol: f64) -> Result<bool> {
    let d = l.dim();
    let choi = choi_of(l).matrix().clone();
    let mut omega = ComplexVector::zeros(d * d);
    for i in 0..d {
        omega[i * d + i] = ONE / (d as f64).sqrt();
    }
    let proj = ComplexMatrix::identity(d * d, d * d) - &omega * omega.adjoint();
    let reduced = &proj * choi * &proj;
    let herm = (&reduced + reduced.adjoint()) * crate::linalg::c(0.5);
    crate::linalg::is_psd(&herm, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, PSD_TOL};

    fn eternal() -> GeneratorSpec {
        GeneratorSpec::pauli(
            PauliRates::new(
                RateFunction::constant(1.0),
                RateFunction::constant(1.0),
                RateFunction::tanh(-1.0, 1.0, 0.0),
            )
            .unwrap(),
        )
    }

    #[test]
    fn generators_annihilate_trace() {
        let specs = [
            eternal(),
            GeneratorSpec::gpc(GpcRates::constant(3, &[-1.0, 1.0, 0.5, 2.0]).unwrap()).unwrap(),
            GeneratorSpec::phasecov(PhaseCovRates::constant(0.3, 1.2, -0.4)),
        ];
        for g in &specs {
            let d = g.dim();
            let dual = g.generator_at(0.7).dual();
            let out = dual.apply(&ComplexMatrix::identity(d, d));
            assert!(crate::linalg::max_abs(&out) < 1e-12);
        }
    }

    #[test]
    fn identity_at_zero() {
        let specs = [
            eternal(),
            GeneratorSpec::gpc(GpcRates::constant(5, &[1.0; 6]).unwrap()).unwrap(),
            GeneratorSpec::phasecov(PhaseCovRates::constant(1.0, 0.0, 0.0)),
        ];
        for g in &specs {
            let m = analytic_map_at(g, 0.0, 1e-12).unwrap();
            assert!(m.max_abs_diff(&SuperOperator::identity(g.dim())) < 1e-12);
        }
    }

    #[test]
    fn propagator_at_equal_times_is_identity() {
        let g = eternal();
        let v = propagator(&g, 0.8, 0.8, 1e-12).unwrap();
        assert!(v.map.max_abs_diff(&SuperOperator::identity(2)) < 1e-14);
    }

    #[test]
    fn propagator_composes() {
        let g = GeneratorSpec::phasecov(PhaseCovRates::new(
            RateFunction::tanh(0.5, 1.0, 0.3),
            RateFunction::polynomial(vec![0.2, 0.1]),
            RateFunction::constant(-0.1),
        )
        .unwrap());
        let a = propagator(&g, 0.2, 0.9, 1e-12).unwrap();
        let b = propagator(&g, 0.9, 1.7, 1e-12).unwrap();
        let direct = propagator(&g, 0.2, 1.7, 1e-12).unwrap();
        let composed = b.after(&g, &a).unwrap();
        assert!(composed.map.max_abs_diff(&direct.map) < 1e-10);
        let by_matrix = b.map.compose(&a.map);
        assert!(by_matrix.max_abs_diff(&direct.map) < 1e-10);
    }

    #[test]
    fn non_invertible_source_is_rejected() {
        let g = GeneratorSpec::pauli(PauliRates::constant([40.0, 40.0, 40.0]));
        assert!(matches!(
            propagator(&g, 1.0, 2.0, 1e-12),
            Err(Error::NonInvertible { .. })
        ));
    }

    #[test]
    fn cp_oracle_examples() {
        let id = SuperOperator::identity(2);
        assert!(map_is_cp(&id, PSD_TOL).unwrap());
        assert!(!map_is_cocp(&id, PSD_TOL).unwrap());
        assert!(map_is_cocp(&SuperOperator::transposition(2), PSD_TOL).unwrap());
        let depol = qubit_pauli::map_from_eigenvalues(&PauliEigenvalues([0.0; 3]));
        assert!(map_is_cocp(&depol, PSD_TOL).unwrap());
        assert!(map_is_cp(&depol, PSD_TOL).unwrap());
    }

    #[test]
    fn positivity_examples() {
        let id = SuperOperator::identity(2);
        assert!(map_is_positive_qubit(&id).unwrap());
        let stretched = qubit_pauli::map_from_eigenvalues(&PauliEigenvalues([1.01, 0.5, 0.5]));
        assert!(!map_is_positive_qubit(&stretched).unwrap());
        assert!(map_is_positive_qubit(&SuperOperator::transposition(2)).unwrap());

        let pushed = phasecov::superoperator(&PhaseCovParams {
            lambda1: 0.5,
            lambda3: 0.5,
            lambda_star: 0.6,
        });
        assert!(!map_is_positive_qubit(&pushed).unwrap());
        let damp = phasecov::superoperator(&PhaseCovParams {
            lambda1: 0.5,
            lambda3: 0.5,
            lambda_star: 0.5,
        });
        assert!(map_is_positive_qubit(&damp).unwrap());
    }

    #[test]
    fn bloch_affine_of_phase_covariant_map() {
        let p = PhaseCovParams {
            lambda1: 0.3,
            lambda3: 0.6,
            lambda_star: -0.2,
        };
        let a = bloch_affine(&phasecov::superoperator(&p)).unwrap();
        assert!((a.matrix[0][0] - 0.3).abs() < 1e-15);
        assert!((a.matrix[2][2] - 0.6).abs() < 1e-15);
        assert!((a.shift[2] + 0.2).abs() < 1e-15);
        assert!(a.pauli_multipliers().is_none());
    }

    #[test]
    fn eternal_propagators_fail_cp_but_stay_positive() {
        let g = eternal();
        let v = propagator(&g, 1.0, 1.2, 1e-12).unwrap();
        assert!(!check_cp(&v, 1e-8).unwrap());
        assert!(check_positive_qubit(&v).unwrap());
        assert!(choi_of(&v.map).min_eigenvalue().unwrap() < -1e-6);
    }

    #[test]
    fn conditional_cp_matches_rate_signs() {
        let g = |r: [f64; 3]| qubit_pauli::generator(r);
        assert!(generator_is_conditionally_cp(&g([1.0, 0.5, 0.0]), 1e-10).unwrap());
        assert!(!generator_is_conditionally_cp(&g([1.0, 1.0, -0.1]), 1e-10).unwrap());
        let pc = phasecov::generator(1.0, 0.2, 0.0);
        assert!(generator_is_conditionally_cp(&pc, 1e-10).unwrap());
        let pc = phasecov::generator(1.0, 0.2, -0.05);
        assert!(!generator_is_conditionally_cp(&pc, 1e-10).unwrap());
    }

    #[test]
    fn gpc_analytic_map_matches_direct_construction() {
        let r = GpcRates::constant(3, &[1.0; 4]).unwrap();
        let g = GeneratorSpec::gpc(r).unwrap();
        let t: f64 = 0.4;
        let lam = (-3.0 * t).exp();
        let m = analytic_map_at(&g, t, 1e-12).unwrap();
        let mubs = g.mubs().unwrap();
        for alpha in 1..=4 {
            for k in 1..3 {
                let u = mubs.unitary_eigenvector(alpha, k).unwrap().matrix;
                let out = m.apply(&u);
                assert!(max_abs_diff(&out, &(&u * crate::linalg::c(lam))) < 1e-12);
            }
        }
    }
}
