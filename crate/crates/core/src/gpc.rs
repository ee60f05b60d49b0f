//! Generalized Pauli channels built from `d+1` mutually unbiased bases.
//!
//! `Λ = [(d p₀ − 1)/(d − 1)]·id + [d/(d − 1)]·Σ_α p_α Φ_α` with the MUB dephasings
//! `Φ_α(X) = Σ_k P_k^{(α)} X P_k^{(α)}`. The generator is `Σ_α γ_α (Φ_α − id)`.
//!
//! For `d ≥ 3` only necessary or sufficient criteria are available, so P and D
//! come back as tri-state verdicts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SuperOperator;
use crate::mub::MubFamily;
use crate::rates::{integrate, RateFunction};
use crate::verdict::{nonneg, Verdict};

pub const CERT_CP: &str = "CP";
pub const CERT_P_NECESSARY: &str = "P-necessary";
pub const CERT_P_PAIR: &str = "P-sufficient-pair";
pub const CERT_P_K: &str = "P-sufficient-k";
pub const CERT_D: &str = "D-sufficient";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpcRates {
    dim: usize,
    rates: Vec<RateFunction>,
}

impl GpcRates {
    pub fn new(dim: usize, rates: Vec<RateFunction>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if rates.len() != dim + 1 {
            return Err(Error::Config(format!(
                "generalized Pauli channel in d={dim} needs {} rates, got {}",
                dim + 1,
                rates.len()
            )));
        }
        rates.iter().try_for_each(RateFunction::validate)?;
        Ok(Self { dim, rates })
    }

    pub fn constant(dim: usize, g: &[f64]) -> Result<Self> {
        Self::new(dim, g.iter().copied().map(RateFunction::constant).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rates(&self) -> &[RateFunction] {
        &self.rates
    }

    pub fn at(&self, t: f64) -> Vec<f64> {
        self.rates.iter().map(|r| r.eval(t)).collect()
    }
}

/// `λ_α` for `α = 1..=d+1`, stored 0-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpcEigenvalues(pub Vec<f64>);

fn check_arity(len: usize, expected: usize, what: &str) -> Result<()> {
    if len == expected {
        Ok(())
    } else {
        Err(Error::Config(format!("{what}: expected {expected} entries, got {len}")))
    }
}

pub fn dephasing_channel(m: &MubFamily, alpha: usize) -> Result<SuperOperator> {
    let d = m.dim();
    let mut out = SuperOperator::zeros(d);
    for k in 0..d {
        out = &out + &SuperOperator::conjugation(&m.projector(alpha, k)?);
    }
    Ok(out)
}

/// `p = (p₀, p₁, …, p_{d+1})`.
pub fn gpc_map(m: &MubFamily, p: &[f64]) -> Result<SuperOperator> {
    let channels = dephasing_channels(m)?;
    gpc_map_from_channels(&channels, p)
}

/// `Φ_1, …, Φ_{d+1}`.
pub fn dephasing_channels(m: &MubFamily) -> Result<Vec<SuperOperator>> {
    (1..=m.dim() + 1).map(|a| dephasing_channel(m, a)).collect()
}

/// [`gpc_map`] with precomputed dephasing channels.
pub fn gpc_map_from_channels(channels: &[SuperOperator], p: &[f64]) -> Result<SuperOperator> {
    let d = channels
        .first()
        .map(SuperOperator::dim)
        .ok_or_else(|| Error::Config("no dephasing channels".into()))?;
    check_arity(channels.len(), d + 1, "dephasing channels")?;
    check_arity(p.len(), d + 2, "generalized Pauli probabilities")?;
    let df = d as f64;
    let mut out = SuperOperator::identity(d).scale((df * p[0] - 1.0) / (df - 1.0));
    for (phi, pa) in channels.iter().zip(&p[1..]) {
        out = &out + &phi.scale(df / (df - 1.0) * pa);
    }
    Ok(out)
}

pub fn eigenvalues_at(r: &GpcRates, t: f64, tol: f64) -> Result<GpcEigenvalues> {
    eigenvalues_between(r, 0.0, t, tol)
}

/// `λ_α = exp(−∫_s^t (γ₀ − γ_α))`, the eigenvalues of `V_{t,s}`.
pub fn eigenvalues_between(r: &GpcRates, s: f64, t: f64, tol: f64) -> Result<GpcEigenvalues> {
    if s < 0.0 || t < s {
        return Err(Error::InvalidRate(format!("need 0 ≤ s ≤ t, got s={s}, t={t}")));
    }
    let acc = r
        .rates
        .iter()
        .map(|g| integrate(g, s, t, tol))
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = acc.iter().sum();
    Ok(GpcEigenvalues(acc.iter().map(|g| (-(total - g)).exp()).collect()))
}

pub fn probabilities_from_eigenvalues(lambda: &GpcEigenvalues, d: usize) -> Result<Vec<f64>> {
    check_arity(lambda.0.len(), d + 1, "generalized Pauli eigenvalues")?;
    let df = d as f64;
    let sum: f64 = lambda.0.iter().sum();
    let mut p = Vec::with_capacity(d + 2);
    p.push((1.0 + (df - 1.0) * sum) / (df * df));
    p.extend(
        lambda
            .0
            .iter()
            .map(|l| (df - 1.0) / (df * df) * (1.0 + df * l - sum)),
    );
    Ok(p)
}

/// Inverse of [`probabilities_from_eigenvalues`]: `λ_α = (d p₀ − 1 + d p_α)/(d − 1)`.
pub fn eigenvalues_from_probabilities(p: &[f64], d: usize) -> Result<GpcEigenvalues> {
    check_arity(p.len(), d + 2, "generalized Pauli probabilities")?;
    let df = d as f64;
    Ok(GpcEigenvalues(
        p[1..]
            .iter()
            .map(|pa| (df * p[0] - 1.0 + df * pa) / (df - 1.0))
            .collect(),
    ))
}

pub fn map_from_eigenvalues(m: &MubFamily, lambda: &GpcEigenvalues) -> Result<SuperOperator> {
    gpc_map(m, &probabilities_from_eigenvalues(lambda, m.dim())?)
}

/// `Σ_α γ_α (Φ_α − id)`.
pub fn generator(m: &MubFamily, g: &[f64]) -> Result<SuperOperator> {
    let d = m.dim();
    check_arity(g.len(), d + 1, "generalized Pauli rates")?;
    let id = SuperOperator::identity(d);
    let mut out = SuperOperator::zeros(d);
    for (alpha, &rate) in g.iter().enumerate() {
        let l = &dephasing_channel(m, alpha + 1)? - &id;
        out = &out + &l.scale(rate);
    }
    Ok(out)
}

/// `Σ_β γ_β ≥ (d − 1)·max_α γ_α`.
pub fn d_sufficient(g: &[f64], d: usize) -> Result<bool> {
    check_arity(g.len(), d + 1, "generalized Pauli rates")?;
    let sum: f64 = g.iter().sum();
    let max = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(nonneg(sum - (d as f64 - 1.0) * max))
}

/// `j_α = ½[Σ_β γ_β/(d − 1) − γ_α]`.
pub fn j_alpha(g: &[f64], d: usize) -> Result<Vec<f64>> {
    check_arity(g.len(), d + 1, "generalized Pauli rates")?;
    let sum: f64 = g.iter().sum();
    let scaled = sum / (d as f64 - 1.0);
    Ok(g.iter().map(|x| 0.5 * (scaled - x)).collect())
}

/// `Σ_β γ_β − γ_α ≥ 0` for every `α`.
pub fn p_necessary(g: &[f64], d: usize) -> Result<bool> {
    check_arity(g.len(), d + 1, "generalized Pauli rates")?;
    let sum: f64 = g.iter().sum();
    Ok(g.iter().all(|x| nonneg(sum - x)))
}

/// `γ_α + (d − 1)·γ_β ≥ 0` for every ordered pair `α ≠ β`.
pub fn p_sufficient_pair(g: &[f64], d: usize) -> Result<bool> {
    check_arity(g.len(), d + 1, "generalized Pauli rates")?;
    let w = d as f64 - 1.0;
    Ok(g.iter().enumerate().all(|(a, ga)| {
        g.iter()
            .enumerate()
            .all(|(b, gb)| a == b || nonneg(ga + w * gb))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PcondStatus {
    /// No negative rate.
    Vacuous,
    Satisfied,
    Violated,
    /// `k > (d+1)/2`: the bound does not apply.
    Inapplicable,
}

impl PcondStatus {
    pub fn certifies(self) -> bool {
        matches!(self, PcondStatus::Vacuous | PcondStatus::Satisfied)
    }
}

/// Number of strictly negative rates.
pub fn negative_count(g: &[f64]) -> usize {
    g.iter().filter(|&&x| x < 0.0).count()
}

/// With `k` strictly negative rates: every nonnegative `γ_β` must satisfy
/// `γ_β ≥ −[(d + 2(k−1))/(d − 2(k−1))]·min_α γ_α`. Applies for `k ≤ (d+1)/2`.
pub fn p_sufficient_k_status(g: &[f64], d: usize) -> Result<PcondStatus> {
    check_arity(g.len(), d + 1, "generalized Pauli rates")?;
    let k = negative_count(g);
    if k == 0 {
        return Ok(PcondStatus::Vacuous);
    }
    let denom = d as i64 - 2 * (k as i64 - 1);
    if 2 * k > d + 1 || denom <= 0 {
        return Ok(PcondStatus::Inapplicable);
    }
    let factor = (d as f64 + 2.0 * (k as f64 - 1.0)) / denom as f64;
    let min = g.iter().copied().fold(f64::INFINITY, f64::min);
    let ok = g
        .iter()
        .filter(|&&x| x >= 0.0)
        .all(|&x| nonneg(x + factor * min));
    Ok(if ok {
        PcondStatus::Satisfied
    } else {
        PcondStatus::Violated
    })
}

pub fn p_sufficient_k(g: &[f64], d: usize) -> Result<bool> {
    p_sufficient_k_status(g, d).map(PcondStatus::certifies)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GpcCertificate {
    pub cp: bool,
    pub p_necessary: bool,
    pub p_sufficient_pair: bool,
    pub p_sufficient_k: PcondStatus,
    pub d_sufficient: bool,
    pub p: Verdict,
    pub d: Verdict,
    pub fired: Vec<&'static str>,
    pub failed: Vec<&'static str>,
}

impl GpcCertificate {
    pub fn cp_verdict(&self) -> Verdict {
        Verdict::from_bool(self.cp)
    }
}

pub fn classify_pointwise(g: &[f64], d: usize) -> Result<GpcCertificate> {
    let cp = g.iter().all(|&x| nonneg(x));
    let necessary = p_necessary(g, d)?;
    let pair = p_sufficient_pair(g, d)?;
    let pk = p_sufficient_k_status(g, d)?;
    let dsuf = d_sufficient(g, d)?;

    let p = if !necessary {
        Verdict::No
    } else if cp || pair || pk.certifies() {
        Verdict::Yes
    } else {
        Verdict::Unknown
    };
    let dv = if p == Verdict::No {
        Verdict::No
    } else if cp || dsuf {
        Verdict::Yes
    } else {
        Verdict::Unknown
    };

    let mut fired = Vec::new();
    let mut failed = Vec::new();
    for (name, ok) in [
        (CERT_CP, cp),
        (CERT_P_NECESSARY, necessary),
        (CERT_P_PAIR, pair),
        (CERT_P_K, pk.certifies()),
        (CERT_D, dsuf),
    ] {
        if ok {
            fired.push(name);
        } else if !(name == CERT_P_K && pk == PcondStatus::Inapplicable) {
            failed.push(name);
        }
    }

    Ok(GpcCertificate {
        cp,
        p_necessary: necessary,
        p_sufficient_pair: pair,
        p_sufficient_k: pk,
        d_sufficient: dsuf,
        p,
        d: dv,
        fired,
        failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, ComplexMatrix};
    use crate::mub::build_mubs;

    #[test]
    fn dephasing_examples() {
        let m = build_mubs(2).unwrap();
        let phi = dephasing_channel(&m, 1).unwrap();
        let x = ComplexMatrix::from_fn(2, 2, |r, c| crate::linalg::c((r * 2 + c + 1) as f64));
        let out = phi.apply(&x);
        let diag = ComplexMatrix::from_fn(2, 2, |r, c| if r == c { x[(r, c)] } else { crate::linalg::ZERO });
        assert!(max_abs_diff(&out, &diag) < 1e-15);

        let m3 = build_mubs(3).unwrap();
        for alpha in 1..=4 {
            let phi = dephasing_channel(&m3, alpha).unwrap();
            assert!(phi.compose(&phi).max_abs_diff(&phi) < 1e-12);
            for k in 0..3 {
                let p = m3.projector(alpha, k).unwrap();
                assert!(max_abs_diff(&phi.apply(&p), &p) < 1e-12);
            }
            for beta in (1..=4).filter(|&b| b != alpha) {
                for k in 1..3 {
                    let u = m3.unitary_eigenvector(beta, k).unwrap().matrix;
                    assert!(crate::linalg::max_abs(&phi.apply(&u)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn gpc_map_identity_and_depolarizing() {
        let m = build_mubs(3).unwrap();
        let id = gpc_map(&m, &[1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(id.max_abs_diff(&SuperOperator::identity(3)) < 1e-12);

        let lambda = 0.0;
        let d = 3.0_f64;
        let p0 = (1.0 + (d * d - 1.0) * lambda) / (d * d);
        let pa = (d - 1.0) * (1.0 - lambda) / (d * d);
        let map = gpc_map(&m, &[p0, pa, pa, pa, pa]).unwrap();
        for alpha in 1..=4 {
            for k in 1..3 {
                let u = m.unitary_eigenvector(alpha, k).unwrap().matrix;
                assert!(crate::linalg::max_abs(&map.apply(&u)) < 1e-12);
            }
        }
        assert!(gpc_map(&m, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        let c = 0.4;
        let r = GpcRates::constant(3, &[c; 4]).unwrap();
        for t in [0.0, 0.5, 2.0] {
            let l = eigenvalues_at(&r, t, 1e-12).unwrap();
            for x in l.0 {
                assert!((x - (-3.0 * c * t).exp()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn probability_examples() {
        assert_eq!(
            probabilities_from_eigenvalues(&GpcEigenvalues(vec![1.0; 4]), 3).unwrap(),
            vec![1.0, 0.0, 0.0, 0.0, 0.0]
        );
        let p = probabilities_from_eigenvalues(&GpcEigenvalues(vec![0.0; 4]), 3).unwrap();
        assert!((p[0] - 1.0 / 9.0).abs() < 1e-15);
        assert!(p[1..].iter().all(|x| (x - 2.0 / 9.0).abs() < 1e-15));
        let l = GpcEigenvalues(vec![0.3, -0.2, 0.9, 0.1]);
        let back = eigenvalues_from_probabilities(&probabilities_from_eigenvalues(&l, 3).unwrap(), 3).unwrap();
        assert!(back.0.iter().zip(&l.0).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn d_sufficient_examples() {
        assert!(d_sufficient(&[-1.0, 1.0, 1.0, 1.0], 3).unwrap());
        assert!(!d_sufficient(&[-1.0, 2.0, 2.0, 1.4, 1.4], 4).unwrap());
        assert!(d_sufficient(&[1.0, 2.0], 3).is_err());
    }

    #[test]
    fn j_alpha_examples() {
        let j = j_alpha(&[-1.0, 1.0, 1.0, 1.0], 3).unwrap();
        assert_eq!(j, vec![1.0, 0.0, 0.0, 0.0]);
        let c = 0.8;
        for d in [2usize, 3, 5] {
            let j = j_alpha(&vec![c; d + 1], d).unwrap();
            for x in j {
                assert!((x - c / (d as f64 - 1.0)).abs() < 1e-15);
            }
        }
        assert_eq!(j_alpha(&[0.0; 4], 3).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn p_necessary_examples() {
        assert!(p_necessary(&[-1.0, 1.0, 1.0, 1.0], 3).unwrap());
        assert!(!p_necessary(&[-3.0, 1.0, 1.0, 1.0], 3).unwrap());
        assert!(p_necessary(&[0.0; 4], 3).unwrap());
    }

    #[test]
    fn p_sufficient_pair_examples() {
        assert!(!p_sufficient_pair(&[-1.0, 1.0, 1.0, 1.0], 3).unwrap());
        assert!(p_sufficient_pair(&[0.0, 2.0, 0.1, 5.0], 3).unwrap());
        // Example 1 pattern: γ + (d−1)γ̃ ≥ 0 ∧ γ̃ + (d−1)γ ≥ 0, plus dγ̃ ≥ 0 from the γ̃ pairs
        let d = 3;
        for (gamma, tilde) in [(-0.5, 1.0), (-0.4, 0.8), (-1.0, 2.0), (1.0, -0.4), (-0.6, 1.0)] {
            let mut g = vec![tilde; d + 1];
            g[0] = gamma;
            let expected = gamma + 2.0 * tilde >= 0.0 && tilde + 2.0 * gamma >= 0.0 && tilde >= 0.0;
            assert_eq!(p_sufficient_pair(&g, d).unwrap(), expected, "{gamma} {tilde}");
        }
    }

    #[test]
    fn p_sufficient_k_examples() {
        assert_eq!(
            p_sufficient_k_status(&[-1.0, 1.0, 1.0, 1.0], 3).unwrap(),
            PcondStatus::Satisfied
        );
        assert_eq!(p_sufficient_k_status(&[0.0, 1.0, 1.0, 1.0], 3).unwrap(), PcondStatus::Vacuous);
        assert_eq!(
            p_sufficient_k_status(&[-1.0, -1.0, -1.0, 5.0], 3).unwrap(),
            PcondStatus::Inapplicable
        );
        // d=3, k=2: factor (3+2)/(3−2) = 5
        assert!(p_sufficient_k(&[-1.0, -1.0, 5.0, 5.0], 3).unwrap());
        assert!(!p_sufficient_k(&[-1.0, -1.0, 4.9, 5.0], 3).unwrap());
    }

    #[test]
    fn classification_examples() {
        let c = classify_pointwise(&[-1.0, 1.0, 1.0, 1.0], 3).unwrap();
        assert!(!c.cp);
        assert_eq!((c.p, c.d), (Verdict::Yes, Verdict::Yes));

        let c = classify_pointwise(&[-1.0, 2.0, 2.0, 1.4, 1.4], 4).unwrap();
        assert_eq!(c.p, Verdict::Yes);
        assert_eq!(c.d, Verdict::Unknown);
        assert!(c.fired.contains(&CERT_P_K));
        assert!(c.failed.contains(&CERT_D));

        let c = classify_pointwise(&[0.5; 6], 5).unwrap();
        assert_eq!((c.cp_verdict(), c.p, c.d), (Verdict::Yes, Verdict::Yes, Verdict::Yes));

        let c = classify_pointwise(&[-3.0, 1.0, 1.0, 1.0], 3).unwrap();
        assert_eq!((c.p, c.d), (Verdict::No, Verdict::No));
    }

    #[test]
    fn generator_matches_gksl_form() {
        let m = build_mubs(3).unwrap();
        let g = [0.3, -0.1, 0.7, 0.2];
        let l = generator(&m, &g).unwrap();
        // trace annihilation: L'(I) = 0
        let dual_on_identity = l.dual().apply(&ComplexMatrix::identity(3, 3));
        assert!(crate::linalg::max_abs(&dual_on_identity) < 1e-12);
    }
}
