//! Time-dependent decoherence rates and their integrals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
pub const MAX_DEPTH: u32 = 40;

/// Largest exponent accepted before `e^x` is considered an overflow.
const MAX_EXPONENT: f64 = 700.0;

/// A real rate `γ(t)` in units of inverse time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateFunction {
    Constant { value: f64 },
    /// `values[i]` holds on `[breakpoints[i-1], breakpoints[i])`; the first value
    /// extends to −∞ and the last to +∞.
    Piecewise { breakpoints: Vec<f64>, values: Vec<f64> },
    /// `Σ_n coefficients[n] · tⁿ`.
    Polynomial { coefficients: Vec<f64> },
    /// `a·tanh(b·t) + c`.
    Tanh { a: f64, b: f64, c: f64 },
    /// Linear interpolation through `(times[i], values[i])`, constant outside.
    Sampled { times: Vec<f64>, values: Vec<f64> },
}

impl RateFunction {
    pub fn constant(value: f64) -> Self {
        RateFunction::Constant { value }
    }

    pub fn tanh(a: f64, b: f64, c: f64) -> Self {
        RateFunction::Tanh { a, b, c }
    }

    pub fn polynomial(coefficients: Vec<f64>) -> Self {
        RateFunction::Polynomial { coefficients }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64], what: &str| -> Result<()> {
            if xs.iter().all(|x| x.is_finite()) {
                Ok(())
            } else {
                Err(Error::InvalidRate(format!("{what} must be finite")))
            }
        };
        let increasing = |xs: &[f64], what: &str| -> Result<()> {
            if xs.windows(2).all(|w| w[0] < w[1]) {
                Ok(())
            } else {
                Err(Error::InvalidRate(format!("{what} must be strictly increasing")))
            }
        };
        match self {
            RateFunction::Constant { value } => finite(&[*value], "constant value"),
            RateFunction::Piecewise { breakpoints, values } => {
                finite(breakpoints, "breakpoints")?;
                finite(values, "values")?;
                increasing(breakpoints, "breakpoints")?;
                if values.len() != breakpoints.len() + 1 {
                    return Err(Error::InvalidRate(format!(
                        "piecewise rate needs {} values for {} breakpoints, got {}",
                        breakpoints.len() + 1,
                        breakpoints.len(),
                        values.len()
                    )));
                }
                Ok(())
            }
            RateFunction::Polynomial { coefficients } => {
                finite(coefficients, "coefficients")?;
                if coefficients.is_empty() {
                    return Err(Error::InvalidRate("polynomial needs at least one coefficient".into()));
                }
                Ok(())
            }
            RateFunction::Tanh { a, b, c } => finite(&[*a, *b, *c], "tanh parameters"),
            RateFunction::Sampled { times, values } => {
                finite(times, "sample times")?;
                finite(values, "sample values")?;
                increasing(times, "sample times")?;
                if times.is_empty() || times.len() != values.len() {
                    return Err(Error::InvalidRate(
                        "sampled rate needs equally many (≥ 1) times and values".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            RateFunction::Constant { value } => *value,
            RateFunction::Piecewise { breakpoints, values } => {
                let idx = breakpoints.partition_point(|&b| b <= t);
                values[idx]
            }
            RateFunction::Polynomial { coefficients } => {
                coefficients.iter().rev().fold(0.0, |acc, &c| acc * t + c)
            }
            RateFunction::Tanh { a, b, c } => a * (b * t).tanh() + c,
            RateFunction::Sampled { times, values } => {
                let n = times.len();
                if t <= times[0] {
                    return values[0];
                }
                if t >= times[n - 1] {
                    return values[n - 1];
                }
                let hi = times.partition_point(|&x| x <= t);
                let (t0, t1) = (times[hi - 1], times[hi]);
                let w = (t - t0) / (t1 - t0);
                values[hi - 1] * (1.0 - w) + values[hi] * w
            }
        }
    }

    /// Points where the rate (or its derivative) may jump.
    pub fn breakpoints(&self) -> &[f64] {
        match self {
            RateFunction::Piecewise { breakpoints, .. } => breakpoints,
            RateFunction::Sampled { times, .. } => times,
            _ => &[],
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        match self {
            RateFunction::Constant { value } => *value == 0.0,
            RateFunction::Piecewise { values, .. } | RateFunction::Sampled { values, .. } => {
                values.iter().all(|v| *v == 0.0)
            }
            RateFunction::Polynomial { coefficients } => coefficients.iter().all(|v| *v == 0.0),
            RateFunction::Tanh { a, c, .. } => *a == 0.0 && *c == 0.0,
        }
    }
}

/// Adaptive Simpson quadrature with Richardson correction.
///
/// Intervals are bisected until `|S₂ − S₁| ≤ 15·tol` or `max_depth` is reached;
/// the tolerance is split evenly between the two halves.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite(format!("integrand value {y} at t = {x}")))
        }
    };
    let fa = eval(a)?;
    let fb = eval(b)?;
    let m = 0.5 * (a + b);
    let fm = eval(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&eval, a, b, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    eval: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(lm)?;
    let frm = eval(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || m <= a || m >= b {
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson_step(eval, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson_step(eval, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Splits `[a, b]` at every rate breakpoint strictly inside it.
fn pieces(rates: &[&RateFunction], a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = rates
        .iter()
        .flat_map(|r| r.breakpoints().iter().copied())
        .filter(|&x| x > a && x < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut lo = a;
    for c in cuts {
        out.push((lo, c));
        lo = c;
    }
    out.push((lo, b));
    out
}

/// `∫_a^b f(τ) dτ` for an integrand built from the given rates, honouring their
/// breakpoints.
pub fn integrate_with<F>(rates: &[&RateFunction], f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a > b {
        return integrate_with(rates, f, b, a, tol).map(|v| -v);
    }
    let parts = pieces(rates, a, b);
    let share = tol / parts.len() as f64;
    parts
        .into_iter()
        .map(|(lo, hi)| {
            // one-sided limits at the piece ends
            let inner = |x: f64| {
                if x <= lo {
                    f(lo.next_up().min(hi))
                } else if x >= hi {
                    f(hi.next_down().max(lo))
                } else {
                    f(x)
                }
            };
            adaptive_simpson(inner, lo, hi, share, MAX_DEPTH)
        })
        .sum()
}

pub fn integrate(r: &RateFunction, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite(format!("integration bounds [{a}, {b}]")));
    }
    integrate_with(&[r], |t| r.eval(t), a, b, tol)
}

/// `∫_s^t source(τ)·exp(−∫_τ^t decay) dτ`, evaluated with the exponent kept as a
/// difference so that large accumulated rates never overflow.
pub fn damped_integral<S, D>(
    rates: &[&RateFunction],
    source: S,
    decay: D,
    s: f64,
    t: f64,
    tol: f64,
) -> Result<f64>
where
    S: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if t <= s {
        return Ok(0.0);
    }
    let inner_tol = tol * 1e-2;
    let integrand = |tau: f64| -> f64 {
        match integrate_with(rates, &decay, tau, t, inner_tol) {
            Ok(acc) => source(tau) * (-acc).exp(),
            Err(_) => f64::NAN,
        }
    };
    integrate_with(rates, integrand, s, t, tol)
}

/// `∫₀ᵗ [γ₊ − γ₋](τ)·e^{Γ₊(τ)+Γ₋(τ)} dτ`.
pub fn weighted_integral(plus: &RateFunction, minus: &RateFunction, t: f64, tol: f64) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::InvalidRate(format!("negative time {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let exponent = integrate(plus, 0.0, t, tol)? + integrate(minus, 0.0, t, tol)?;
    if exponent > MAX_EXPONENT {
        return Err(Error::WeightOverflow { t, exponent });
    }
    let damped = damped_integral(
        &[plus, minus],
        |tau| plus.eval(tau) - minus.eval(tau),
        |tau| plus.eval(tau) + minus.eval(tau),
        0.0,
        t,
        tol * (-exponent).exp().min(1.0),
    )?;
    Ok(damped * exponent.exp())
}

/// `Γ(t) = ∫₀ᵗ γ` cached on a grid.
#[derive(Clone, Debug)]
pub struct AccumulatedRate {
    rate: RateFunction,
    times: Vec<f64>,
    values: Vec<f64>,
    tol: f64,
}

impl AccumulatedRate {
    /// `grid` must be sorted and start at 0.
    pub fn new(rate: &RateFunction, grid: &[f64], tol: f64) -> Result<Self> {
        rate.validate()?;
        if grid.first().copied() != Some(0.0) || grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidRate("accumulation grid must be sorted and start at 0".into()));
        }
        let mut values = Vec::with_capacity(grid.len());
        let mut acc = 0.0;
        values.push(0.0);
        for w in grid.windows(2) {
            acc += integrate(rate, w[0], w[1], tol)?;
            values.push(acc);
        }
        Ok(Self {
            rate: rate.clone(),
            times: grid.to_vec(),
            values,
            tol,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, t: f64) -> Result<f64> {
        let idx = self.times.partition_point(|&x| x <= t);
        if idx == 0 {
            return integrate(&self.rate, 0.0, t, self.tol);
        }
        let base = idx - 1;
        if self.times[base] == t {
            return Ok(self.values[base]);
        }
        Ok(self.values[base] + integrate(&self.rate, self.times[base], t, self.tol)?)
    }
}
