//! Streamline tracing from a seeds file to a plot-ready CSV of
//! (curve id, parameter, x, y, z) rows.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use gasdyn::streamtrace::{trace_3d, trace_rz, StreamCurve, TraceStop};
use gasdyn::{Error, Point3};
use serde_json::json;

use crate::config::RunConfig;
use crate::families::Family;
use crate::output::fmt;
use crate::CliError;

pub struct TraceOutcome {
    pub curves: Vec<Option<StreamCurve>>,
    pub statuses: Vec<String>,
}

pub fn read_seeds(path: &Path, dims: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("reading seeds file {}: {e}", path.display())))?;
    let mut seeds = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Result<Vec<f64>, _> = line.split(',').map(|s| s.trim().parse::<f64>()).collect();
        let parts =
            parts.map_err(|e| CliError::config(format!("seeds line {}: {e}", lineno + 1)))?;
        if parts.len() != dims {
            return Err(CliError::config(format!(
                "seeds line {}: expected {dims} coordinates, got {}",
                lineno + 1,
                parts.len()
            )));
        }
        seeds.push(parts);
    }
    if seeds.is_empty() {
        return Err(CliError::config("seeds file holds no seeds"));
    }
    Ok(seeds)
}

fn stop_label(stop: TraceStop) -> &'static str {
    match stop {
        TraceStop::ReachedEnd => "reached-end",
        TraceStop::Stagnation => "stagnation",
        TraceStop::DomainExit => "domain-exit",
        TraceStop::StepUnderflow => "step-underflow",
    }
}

/// Trace every seed. Stagnation at a seed flags that curve without failing
/// the run; other per-seed errors are likewise recorded per curve.
pub fn trace_all(config: &RunConfig, family: &Family, seeds: &[Vec<f64>]) -> TraceOutcome {
    let t = &config.trace;
    let mut curves = Vec::with_capacity(seeds.len());
    let mut statuses = Vec::with_capacity(seeds.len());
    for seed in seeds {
        let traced = match family {
            Family::Axisym { field, .. } => trace_rz(
                |z, r| field.state(z, r),
                (seed[0], seed[1]),
                t.t_end,
                t.step,
                t.arclength,
            ),
            Family::Threed { field, .. } => trace_3d(
                |p| field.state(p),
                Point3::new(seed[0], seed[1], seed[2]),
                t.t_end,
                t.step,
                t.arclength,
            ),
            Family::Chaplygin { .. } => {
                let fam = family;
                trace_3d(
                    |p| fam.state_at(&[p.x, p.y, p.z]),
                    Point3::new(seed[0], seed[1], seed[2]),
                    t.t_end,
                    t.step,
                    t.arclength,
                )
            }
        };
        match traced {
            Ok(curve) => {
                statuses.push(stop_label(curve.stop).to_string());
                curves.push(Some(curve));
            }
            Err(Error::Stagnation) => {
                statuses.push("stagnation-at-seed".to_string());
                curves.push(None);
            }
            Err(e) => {
                statuses.push(format!("error: {e}"));
                curves.push(None);
            }
        }
    }
    TraceOutcome { curves, statuses }
}

pub fn write_curves_csv(path: &Path, outcome: &TraceOutcome, dims: usize) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "curve,t,x,y,z")?;
    for (id, curve) in outcome.curves.iter().enumerate() {
        let Some(curve) = curve else { continue };
        for (t, pt) in curve.t.iter().zip(&curve.points) {
            let (x, y, z) = match dims {
                2 => (pt[0], pt[1], 0.0),
                _ => (pt[0], pt[1], pt[2]),
            };
            writeln!(w, "{id},{},{},{},{}", fmt(*t), fmt(x), fmt(y), fmt(z))?;
        }
    }
    Ok(())
}

pub fn metadata(outcome: &TraceOutcome) -> serde_json::Value {
    json!({
        "curves": outcome
            .statuses
            .iter()
            .enumerate()
            .map(|(id, status)| {
                json!({
                    "id": id,
                    "status": status,
                    "points": outcome.curves[id].as_ref().map_or(0, |c| c.len()),
                })
            })
            .collect::<Vec<_>>(),
    })
}
