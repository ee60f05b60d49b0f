//! JSON and CSV emission.

use std::fs;
use std::path::{Path, PathBuf};

use csv::{Terminator, WriterBuilder};
use serde_json::json;

use crate::engine::DivisibilityReport;
use crate::error::{Error, Result};

use super::sweep::SweepCell;
use super::RunOutput;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shortest decimal that round-trips the value rounded to 12 significant digits.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

fn writer() -> csv::Writer<Vec<u8>> {
    WriterBuilder::new()
        .terminator(Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

pub fn timeline_csv(report: &DivisibilityReport) -> Result<String> {
    let mut w = writer();
    w.write_record(["t", "cp", "p", "d", "fired_certificates"])?;
    for p in &report.points {
        w.write_record([
            format_number(p.t),
            p.cp.to_string(),
            p.p.to_string(),
            p.d.to_string(),
            p.fired.join(";"),
        ])?;
    }
    finish(w)
}

pub fn sweep_csv(cells: &[SweepCell]) -> Result<String> {
    let mut w = writer();
    w.write_record(["x", "y", "cp", "p", "d", "fired_certificates"])?;
    for c in cells {
        w.write_record([
            format_number(c.x),
            format_number(c.y),
            c.verdict.cp.to_string(),
            c.verdict.p.to_string(),
            c.verdict.d.to_string(),
            c.verdict.fired.join(";"),
        ])?;
    }
    finish(w)
}

pub fn report_json(out: &RunOutput) -> Result<String> {
    let doc = json!({
        "version": VERSION,
        "seed": out.config.seed,
        "config": out.config,
        "summary": out.report.summary,
        "points": out.report.points,
        "oracles": out.report.oracles,
        "ode_max_deviation": out.ode_max_deviation,
        "sweep": out.sweep,
    });
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmittedFiles {
    pub report: PathBuf,
    pub timeline: PathBuf,
    pub sweep: Option<PathBuf>,
}

/// Writes the JSON report, the timeline CSV and, if present, the sweep CSV into `dir`.
pub fn emit_report(out: &RunOutput, dir: &Path) -> Result<EmittedFiles> {
    fs::create_dir_all(dir)?;
    let paths = &out.config.output;
    let report = dir.join(&paths.report);
    let timeline = dir.join(&paths.timeline);
    fs::write(&report, report_json(out)?)?;
    fs::write(&timeline, timeline_csv(&out.report)?)?;
    let sweep = match &out.sweep {
        Some(cells) => {
            let path = dir.join(&paths.sweep);
            fs::write(&path, sweep_csv(cells)?)?;
            Some(path)
        }
        None => None,
    };
    Ok(EmittedFiles {
        report,
        timeline,
        sweep,
    })
}
