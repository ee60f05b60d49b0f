//! Timeline classification and oracle cross-checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gpc;
use crate::linalg::{choi_of, PSD_TOL};
use crate::phasecov;
use crate::qubit_pauli;
use crate::rates::DEFAULT_QUAD_TOL;
use crate::verdict::Verdict;

use super::{
    map_from_params, map_is_cocp, map_is_positive_qubit, params_on_grid, step_params, FamilyKind, FamilyParams, GeneratorSpec, INVERTIBILITY_TOL,
};

pub const TRIVIAL_CERTIFICATE: &str = "trivial/CP";

const PAULI_CP: &str = "CP";
const PAULI_P: &str = "P-pairwise";
const PAULI_D: &str = "D-j-nonnegative";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub oracles: bool,
    pub seed: u64,
    pub random_pairs: usize,
    pub psd_tol: f64,
    pub quad_tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            oracles: true,
            seed: 0,
            random_pairs: 10,
            psd_tol: PSD_TOL,
            quad_tol: DEFAULT_QUAD_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointVerdict {
    pub t: f64,
    pub rates: Vec<f64>,
    pub cp: Verdict,
    pub p: Verdict,
    pub d: Verdict,
    pub fired: Vec<String>,
    pub failed: Vec<String>,
    /// Smallest eigenvalue magnitude of `Λ_t`.
    pub min_eigenvalue: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    Adjacent,
    Random,
}

/// Numeric checks of one propagator `V_{t,s}` against the rate certificates.
///
/// The certificates speak about every propagator inside `[s, t]`, so only one
/// direction is a contradiction: certified YES but the oracle says no.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub kind: PairKind,
    pub s: f64,
    pub t: f64,
    pub choi_min_eigenvalue: f64,
    pub cp: bool,
    pub cocp: bool,
    /// Qubit families only.
    pub positive: Option<bool>,
    pub expected_cp: Verdict,
    pub expected_p: Verdict,
    pub cp_consistent: bool,
    pub p_consistent: Option<bool>,
}

impl OracleCheck {
    pub fn consistent(&self) -> bool {
        self.cp_consistent && self.p_consistent.unwrap_or(true)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub cp: Verdict,
    pub p: Verdict,
    pub d: Verdict,
    pub oracle_checks: usize,
    pub oracle_disagreements: usize,
    /// First grid time at which `Λ_t` stops being invertible.
    pub indeterminate_from: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisibilityReport {
    pub family: FamilyKind,
    pub dim: usize,
    pub seed: u64,
    pub points: Vec<PointVerdict>,
    pub oracles: Vec<OracleCheck>,
    pub summary: Summary,
}

impl DivisibilityReport {
    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    /// CP=YES ⇒ D=YES and D=YES ⇒ P≠NO at every point.
    pub fn check_hierarchy(&self) -> Result<()> {
        self.points.iter().try_for_each(check_point_hierarchy)
    }
}

fn check_point_hierarchy(p: &PointVerdict) -> Result<()> {
    if p.cp == Verdict::Yes && p.d != Verdict::Yes {
        return Err(Error::HierarchyViolation {
            t: p.t,
            detail: format!("CP is YES but D is {}", p.d),
        });
    }
    if p.d == Verdict::Yes && p.p == Verdict::No {
        return Err(Error::HierarchyViolation {
            t: p.t,
            detail: "D is YES but P is NO".into(),
        });
    }
    Ok(())
}

fn names<'a>(xs: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    xs.into_iter().map(str::to_owned).collect()
}

/// Pointwise verdicts for a rate vector, independent of time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateVerdict {
    pub cp: Verdict,
    pub p: Verdict,
    pub d: Verdict,
    pub fired: Vec<String>,
    pub failed: Vec<String>,
}

/// Dispatches to the family's pointwise criteria. All-zero rates give the
/// single certificate [`TRIVIAL_CERTIFICATE`].
pub fn classify_rates(kind: FamilyKind, dim: usize, rates: &[f64]) -> Result<RateVerdict> {
    let expected = match kind {
        FamilyKind::Gpc => dim + 1,
        _ => 3,
    };
    if rates.len() != expected {
        return Err(Error::Config(format!(
            "{} needs {expected} rates, got {}",
            kind.as_str(),
            rates.len()
        )));
    }
    if rates.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("rate value".into()));
    }
    if rates.iter().all(|&x| x == 0.0) {
        return Ok(RateVerdict {
            cp: Verdict::Yes,
            p: Verdict::Yes,
            d: Verdict::Yes,
            fired: names([TRIVIAL_CERTIFICATE]),
            failed: Vec::new(),
        });
    }
    Ok(match kind {
        FamilyKind::Pauli => {
            let v = qubit_pauli::classify_pointwise([rates[0], rates[1], rates[2]]);
            let all = [(PAULI_CP, v.cp), (PAULI_P, v.p), (PAULI_D, v.d)];
            RateVerdict {
                cp: Verdict::from_bool(v.cp),
                p: Verdict::from_bool(v.p),
                d: Verdict::from_bool(v.d),
                fired: names(all.iter().filter(|x| x.1).map(|x| x.0)),
                failed: names(all.iter().filter(|x| !x.1).map(|x| x.0)),
            }
        }
        FamilyKind::Gpc => {
            let cert = gpc::classify_pointwise(rates, dim)?;
            RateVerdict {
                cp: cert.cp_verdict(),
                p: cert.p,
                d: cert.d,
                fired: names(cert.fired.iter().copied()),
                failed: names(cert.failed.iter().copied()),
            }
        }
        FamilyKind::PhaseCov => {
            let cert = phasecov::classify_pointwise(rates[0], rates[1], rates[2]);
            RateVerdict {
                cp: Verdict::from_bool(cert.cp),
                p: Verdict::from_bool(cert.p),
                d: cert.d,
                fired: names(cert.fired.iter().copied()),
                failed: names(cert.failed.iter().copied()),
            }
        }
    })
}

fn pointwise(g: &GeneratorSpec, t: f64, rates: &[f64]) -> Result<PointVerdict> {
    let v = classify_rates(g.kind(), g.dim(), rates)?;
    Ok(PointVerdict {
        t,
        rates: rates.to_vec(),
        cp: v.cp,
        p: v.p,
        d: v.d,
        fired: v.fired,
        failed: v.failed,
        min_eigenvalue: 1.0,
    })
}

fn oracle_check(
    g: &GeneratorSpec,
    kind: PairKind,
    grid: &[f64],
    steps: &[FamilyParams],
    points: &[PointVerdict],
    (i, j): (usize, usize),
    tol: f64,
) -> Result<OracleCheck> {
    let mut params = steps[i].clone();
    for step in &steps[i + 1..j] {
        params = step.after(&params)?;
    }
    let map = map_from_params(g, &params)?;
    let choi = choi_of(&map);
    let choi_min = choi.min_eigenvalue()?;
    let cp = choi.is_psd(tol)?;
    let cocp = map_is_cocp(&map, tol)?;
    let positive = match g.kind() {
        FamilyKind::Gpc => None,
        _ => Some(map_is_positive_qubit(&map)?),
    };
    let expected_cp = points[i..=j].iter().fold(Verdict::Yes, |acc, p| acc.and(p.cp));
    let expected_p = points[i..=j].iter().fold(Verdict::Yes, |acc, p| acc.and(p.p));
    Ok(OracleCheck {
        kind,
        s: grid[i],
        t: grid[j],
        choi_min_eigenvalue: choi_min,
        cp,
        cocp,
        positive,
        expected_cp,
        expected_p,
        cp_consistent: expected_cp != Verdict::Yes || cp,
        p_consistent: positive.map(|ok| expected_p != Verdict::Yes || ok),
    })
}

/// Classifies every grid point from the rates and cross-checks propagators
/// numerically on adjacent grid pairs and `random_pairs` seeded random pairs.
pub fn classify_timeline(
    g: &GeneratorSpec,
    grid: &[f64],
    opts: &ClassifyOptions,
) -> Result<DivisibilityReport> {
    let steps = step_params(g, grid, opts.quad_tol)?;
    let cumulative = params_on_grid(g, grid, opts.quad_tol)?;
    let cutoff = cumulative
        .iter()
        .position(|p| p.min_eigenvalue() < INVERTIBILITY_TOL)
        .unwrap_or(grid.len());

    let mut points = Vec::with_capacity(grid.len());
    for (idx, (&t, lam)) in grid.iter().zip(&cumulative).enumerate() {
        let rates = g.rates_at(t);
        let mut point = pointwise(g, t, &rates)?;
        point.min_eigenvalue = lam.min_eigenvalue();
        if idx >= cutoff {
            point.cp = Verdict::Indeterminate;
            point.p = Verdict::Indeterminate;
            point.d = Verdict::Indeterminate;
        }
        check_point_hierarchy(&point)?;
        points.push(point);
    }

    let mut oracles = Vec::new();
    if opts.oracles && cutoff > 1 {
        let usable = cutoff;
        for i in 0..usable - 1 {
            oracles.push(oracle_check(
                g,
                PairKind::Adjacent,
                grid,
                &steps,
                &points,
                (i, i + 1),
                opts.psd_tol,
            )?);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.random_pairs {
            let i = rng.gen_range(0..usable - 1);
            let j = rng.gen_range(i + 1..usable);
            oracles.push(oracle_check(
                g,
                PairKind::Random,
                grid,
                &steps,
                &points,
                (i, j),
                opts.psd_tol,
            )?);
        }
    }

    let fold = |f: fn(&PointVerdict) -> Verdict| {
        points.iter().fold(Verdict::Yes, |acc, p| acc.and(f(p)))
    };
    let summary = Summary {
        cp: fold(|p| p.cp),
        p: fold(|p| p.p),
        d: fold(|p| p.d),
        oracle_checks: oracles.len(),
        oracle_disagreements: oracles.iter().filter(|o| !o.consistent()).count(),
        indeterminate_from: grid.get(cutoff).copied(),
    };
    Ok(DivisibilityReport {
        family: g.kind(),
        dim: g.dim(),
        seed: opts.seed,
        points,
        oracles,
        summary,
    })
}
