//! Two-parameter phase-diagram sweeps over constant rates.

use serde::{Deserialize, Serialize};

use crate::engine::{classify_rates, FamilyKind, RateVerdict};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    /// Number of sample points, endpoints included.
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last as f64
                }
            })
            .collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.max < self.min {
            return Err(Error::Config(format!("sweep axis {name} needs min ≤ max")));
        }
        if self.steps == 0 {
            return Err(Error::Config(format!("sweep axis {name} needs at least one step")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisName {
    X,
    Y,
}

/// One rate slot: an axis variable or a fixed value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatternEntry {
    Axis(AxisName),
    Value(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub x: Axis,
    pub y: Axis,
    pub pattern: Vec<PatternEntry>,
}

impl SweepConfig {
    pub fn validate(&self, arity: usize) -> Result<()> {
        self.x.validate("x")?;
        self.y.validate("y")?;
        if self.pattern.len() != arity {
            return Err(Error::Config(format!(
                "sweep pattern needs {arity} entries, got {}",
                self.pattern.len()
            )));
        }
        if self
            .pattern
            .iter()
            .any(|e| matches!(e, PatternEntry::Value(v) if !v.is_finite()))
        {
            return Err(Error::Config("sweep pattern values must be finite".into()));
        }
        Ok(())
    }

    pub fn rates_at(&self, x: f64, y: f64) -> Vec<f64> {
        self.pattern
            .iter()
            .map(|e| match e {
                PatternEntry::Axis(AxisName::X) => x,
                PatternEntry::Axis(AxisName::Y) => y,
                PatternEntry::Value(v) => *v,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub x: f64,
    pub y: f64,
    pub rates: Vec<f64>,
    #[serde(flatten)]
    pub verdict: RateVerdict,
}

/// Classifies every `(x, y)` cell, `x` outermost.
pub fn run_sweep(kind: FamilyKind, dim: usize, sweep: &SweepConfig) -> Result<Vec<SweepCell>> {
    let ys = sweep.y.values();
    let mut cells = Vec::with_capacity(sweep.x.steps * ys.len());
    for x in sweep.x.values() {
        for &y in &ys {
            let rates = sweep.rates_at(x, y);
            let verdict = classify_rates(kind, dim, &rates)?;
            cells.push(SweepCell { x, y, rates, verdict });
        }
    }
    Ok(cells)
}
