//! Numerical streamline tracing: integral curves of a sampled velocity
//! field, for cross-checking closed-form streamline formulas.
//!
//! Arclength parameterization (dX/ds = velocity/|velocity|) is the default
//! in callers, because power-law fields vary in speed by orders of
//! magnitude and pseudo-time stepping would be stiff; plain pseudo-time
//! (dX/dt = velocity) is also available.

use crate::error::{Error, Result};
use crate::flow::{FlowState, Point3};
use crate::odeint::{integrate, StepPolicy, StopReason};

/// Speed below which the field is considered stagnant.
pub const STAGNATION_SPEED: f64 = 1e-12;

/// Why a trace stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStop {
    ReachedEnd,
    Stagnation,
    DomainExit,
    StepUnderflow,
}

/// A traced streamline: parameter samples and the visited points.
#[derive(Debug, Clone)]
pub struct StreamCurve {
    pub t: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub stop: TraceStop,
}

impl StreamCurve {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn last_point(&self) -> &[f64] {
        self.points.last().expect("trace always stores the seed")
    }
}

fn trace_impl<V>(
    velocity: V,
    seed: &[f64],
    t_end: f64,
    step: f64,
    arclength: bool,
) -> Result<StreamCurve>
where
    V: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let v0 = velocity(seed)?;
    let speed0 = v0.iter().map(|c| c * c).sum::<f64>().sqrt();
    if speed0 < STAGNATION_SPEED {
        return Err(Error::Stagnation);
    }
    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let v = velocity(y)?;
        let speed = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if speed < STAGNATION_SPEED {
            return Err(Error::Stagnation);
        }
        let scale = if arclength { 1.0 / speed } else { 1.0 };
        for (d, vi) in dy.iter_mut().zip(&v) {
            *d = vi * scale;
        }
        Ok(())
    };
    let traj = integrate(rhs, seed, (0.0, t_end), &StepPolicy::fixed(step), None)?;
    let stop = match traj.reason {
        StopReason::ReachedEnd => TraceStop::ReachedEnd,
        StopReason::StepUnderflow => TraceStop::StepUnderflow,
        StopReason::NonFinite => TraceStop::DomainExit,
        StopReason::Singularity => match traj.halt {
            Some(Error::Stagnation) => TraceStop::Stagnation,
            _ => TraceStop::DomainExit,
        },
    };
    Ok(StreamCurve {
        t: traj.t,
        points: traj.states,
        stop,
    })
}

/// Trace a streamline of a 3D field from a seed point.
pub fn trace_3d<F>(
    field: F,
    seed: Point3,
    t_end: f64,
    step: f64,
    arclength: bool,
) -> Result<StreamCurve>
where
    F: Fn(Point3) -> Result<FlowState>,
{
    trace_impl(
        |y: &[f64]| {
            let st = field(Point3::new(y[0], y[1], y[2]))?;
            Ok(vec![st.u, st.v, st.w])
        },
        &[seed.x, seed.y, seed.z],
        t_end,
        step,
        arclength,
    )
}

/// Trace a streamline of an axisymmetric field in the (z, r) half-plane.
pub fn trace_rz<F>(
    field: F,
    seed: (f64, f64),
    t_end: f64,
    step: f64,
    arclength: bool,
) -> Result<StreamCurve>
where
    F: Fn(f64, f64) -> Result<FlowState>,
{
    trace_impl(
        |y: &[f64]| {
            let st = field(y[0], y[1])?;
            Ok(vec![st.u, st.v])
        },
        &[seed.0, seed.1],
        t_end,
        step,
        arclength,
    )
}
