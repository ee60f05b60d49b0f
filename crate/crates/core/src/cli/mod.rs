//! Configuration, batch runs and report files.

pub mod config;
pub mod output;
pub mod sweep;

use serde::Serialize;

use crate::engine::{analytic_map_at, classify_timeline, integrate_master_equation, DivisibilityReport};
use crate::error::Result;

pub use config::{parse_config, RateSpec, RunConfig, Tolerances};
pub use output::{emit_report, report_json, sweep_csv, timeline_csv, EmittedFiles};
pub use sweep::{run_sweep, SweepCell, SweepConfig};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunOutput {
    pub config: RunConfig,
    pub report: DivisibilityReport,
    pub sweep: Option<Vec<SweepCell>>,
    /// Max-norm gap between the RK4 and closed-form maps on the grid.
    pub ode_max_deviation: Option<f64>,
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let g = cfg.generator()?;
    let grid = cfg.time_grid();
    let report = classify_timeline(&g, &grid, &cfg.options())?;
    let sweep = cfg
        .sweep
        .as_ref()
        .map(|s| run_sweep(cfg.family, cfg.dim(), s))
        .transpose()?;
    let ode_max_deviation = if cfg.ode_check {
        let numeric = integrate_master_equation(&g, &grid, cfg.tolerances.ode)?;
        let mut worst = 0.0_f64;
        for (t, m) in grid.iter().zip(&numeric) {
            let exact = analytic_map_at(&g, *t, cfg.tolerances.quadrature)?;
            worst = worst.max(m.max_abs_diff(&exact));
        }
        Some(worst)
    } else {
        None
    };
    Ok(RunOutput {
        config: cfg.clone(),
        report,
        sweep,
        ode_max_deviation,
    })
}
