//! Explicit integrators: fixed-step RK4 and adaptive step-doubling RK4,
//! with invariant-drift monitoring and singularity-aware termination.
//!
//! Right-hand sides signal singular points by returning an error; the
//! integrator then bisects the step toward the failure and stops with a
//! labeled reason instead of propagating the error.

use crate::error::{Error, Result};

/// Step-size policy.
#[derive(Debug, Clone, Copy)]
pub enum StepPolicy {
    Fixed { h: f64 },
    Adaptive { h0: f64, rtol: f64, atol: f64 },
}

impl StepPolicy {
    pub fn fixed(h: f64) -> Self {
        StepPolicy::Fixed { h }
    }

    /// Step-doubling error control with rtol 1e−10, atol 1e−12.
    pub fn adaptive(h0: f64) -> Self {
        StepPolicy::Adaptive {
            h0,
            rtol: 1e-10,
            atol: 1e-12,
        }
    }

    pub fn adaptive_with(h0: f64, rtol: f64, atol: f64) -> Self {
        StepPolicy::Adaptive { h0, rtol, atol }
    }
}

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    ReachedEnd,
    /// The right-hand side reported an error; see [`Trajectory::halt`].
    Singularity,
    NonFinite,
    StepUnderflow,
}

/// Integration result: samples at every accepted step.
#[derive(Debug)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub reason: StopReason,
    /// The error that halted the integration, when reason is Singularity.
    pub halt: Option<Error>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn last(&self) -> (f64, &[f64]) {
        let i = self.t.len() - 1;
        (self.t[i], &self.states[i])
    }
}

type MonitorFn = Box<dyn Fn(f64, &[f64]) -> f64>;

struct MonitorEntry {
    label: String,
    f: MonitorFn,
    baseline: Option<f64>,
    max_drift: f64,
    saw_non_finite: bool,
}

/// Tracks labeled scalar functions of (t, state) along a trajectory and
/// records the maximum relative drift of each from its initial value.
#[derive(Default)]
pub struct InvariantMonitor {
    entries: Vec<MonitorEntry>,
}

impl InvariantMonitor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, label: impl Into<String>, f: impl Fn(f64, &[f64]) -> f64 + 'static) {
        self.entries.push(MonitorEntry {
            label: label.into(),
            f: Box::new(f),
            baseline: None,
            max_drift: 0.0,
            saw_non_finite: false,
        });
    }

    fn observe(&mut self, t: f64, y: &[f64]) {
        for e in &mut self.entries {
            let v = (e.f)(t, y);
            if !v.is_finite() {
                e.saw_non_finite = true;
                continue;
            }
            match e.baseline {
                None => e.baseline = Some(v),
                Some(b) => {
                    let drift = (v - b).abs() / b.abs().max(1e-30);
                    if drift > e.max_drift {
                        e.max_drift = drift;
                    }
                }
            }
        }
    }

    /// Maximum relative drift observed for the labeled invariant.
    pub fn max_drift(&self, label: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.label == label)
            .map(|e| e.max_drift)
    }

    pub fn drifts(&self) -> Vec<(&str, f64)> {
        self.entries
            .iter()
            .map(|e| (e.label.as_str(), e.max_drift))
            .collect()
    }

    pub fn saw_non_finite(&self) -> bool {
        self.entries.iter().any(|e| e.saw_non_finite)
    }
}

fn rk4_step<F>(rhs: &mut F, t: f64, y: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let n = y.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    rhs(t, y, &mut k1)?;
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k1[i];
    }
    rhs(t + 0.5 * h, &tmp, &mut k2)?;
    for i in 0..n {
        tmp[i] = y[i] + 0.5 * h * k2[i];
    }
    rhs(t + 0.5 * h, &tmp, &mut k3)?;
    for i in 0..n {
        tmp[i] = y[i] + h * k3[i];
    }
    rhs(t + h, &tmp, &mut k4)?;

    let mut out = vec![0.0; n];
    for i in 0..n {
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

fn all_finite(y: &[f64]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// Integrate y' = rhs(t, y) over the span with classic RK4.
///
/// Adaptive mode halves the step until the step-doubling error estimate is
/// within rtol·|y| + atol, and applies the fifth-order local extrapolation.
/// A right-hand-side failure mid-span bisects toward the failure point and
/// terminates with [`StopReason::Singularity`]; step underflow below
/// 1e−14·|span| terminates with [`StopReason::StepUnderflow`]. Neither is an
/// error return. The monitor, when given, is evaluated at every stored
/// sample.
pub fn integrate<F>(
    mut rhs: F,
    y0: &[f64],
    span: (f64, f64),
    policy: &StepPolicy,
    mut monitor: Option<&mut InvariantMonitor>,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let (t0, t1) = span;
    if !(t0.is_finite() && t1.is_finite()) || t0 == t1 {
        return Err(Error::Domain(format!("degenerate span [{t0}, {t1}]")));
    }
    if !all_finite(y0) {
        return Err(Error::NonFinite("initial state".into()));
    }
    // The right-hand side must at least be evaluable at the initial state.
    {
        let mut probe = vec![0.0; y0.len()];
        rhs(t0, y0, &mut probe)?;
        if !all_finite(&probe) {
            return Err(Error::NonFinite("rhs at initial state".into()));
        }
    }

    let dir = (t1 - t0).signum();
    let span_len = (t1 - t0).abs();
    let h_min = 1e-14 * span_len;

    let (mut h_abs, rtol, atol) = match *policy {
        StepPolicy::Fixed { h } => {
            if !(h > 0.0) {
                return Err(Error::Domain(format!("step must be positive, got {h}")));
            }
            (h, 0.0, 0.0)
        }
        StepPolicy::Adaptive { h0, rtol, atol } => {
            if !(h0 > 0.0) {
                return Err(Error::Domain(format!("step must be positive, got {h0}")));
            }
            (h0.min(span_len), rtol, atol)
        }
    };
    let adaptive = matches!(policy, StepPolicy::Adaptive { .. });

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut traj = Trajectory {
        t: vec![t0],
        states: vec![y.clone()],
        reason: StopReason::ReachedEnd,
        halt: None,
    };
    if let Some(m) = monitor.as_deref_mut() {
        m.observe(t, &y);
    }

    loop {
        let remaining = (t1 - t).abs();
        if remaining <= f64::EPSILON * span_len {
            break;
        }
        let mut h = h_abs.min(remaining);
        if h < h_min {
            traj.reason = StopReason::StepUnderflow;
            break;
        }

        // Attempt the step, bisecting toward any failure point.
        let mut attempt_result: Option<(Vec<f64>, f64)> = None;
        loop {
            let step = dir * h;
            let outcome = if adaptive {
                // full step, then two half steps
                match rk4_step(&mut rhs, t, &y, step) {
                    Err(e) => Err(e),
                    Ok(full) => match rk4_step(&mut rhs, t, &y, 0.5 * step)
                        .and_then(|half| rk4_step(&mut rhs, t + 0.5 * step, &half, 0.5 * step))
                    {
                        Err(e) => Err(e),
                        Ok(two_half) => Ok((full, two_half)),
                    },
                }
            } else {
                rk4_step(&mut rhs, t, &y, step).map(|full| (full.clone(), full))
            };

            match outcome {
                Err(e) => {
                    h *= 0.5;
                    if h < h_min {
                        traj.reason = StopReason::Singularity;
                        traj.halt = Some(e);
                        break;
                    }
                }
                Ok((full, two_half)) => {
                    if !all_finite(&two_half) {
                        h *= 0.5;
                        if h < h_min {
                            traj.reason = StopReason::NonFinite;
                            break;
                        }
                        continue;
                    }
                    if adaptive {
                        // Step-doubling estimate: error of the two-half-step
                        // value is ~|full − two_half|/15.
                        let mut ratio = 0.0f64;
                        for i in 0..y.len() {
                            let err = (two_half[i] - full[i]).abs() / 15.0;
                            let tol = atol + rtol * two_half[i].abs().max(y[i].abs());
                            if tol > 0.0 {
                                ratio = ratio.max(err / tol);
                            }
                        }
                        if ratio > 1.0 {
                            h *= 0.5;
                            if h < h_min {
                                traj.reason = StopReason::StepUnderflow;
                                break;
                            }
                            continue;
                        }
                        // Accept with local extrapolation; grow cautiously.
                        let mut accepted = two_half.clone();
                        for i in 0..y.len() {
                            accepted[i] += (two_half[i] - full[i]) / 15.0;
                        }
                        let grow = if ratio > 0.0 {
                            (0.9 * ratio.powf(-0.2)).clamp(0.5, 4.0)
                        } else {
                            4.0
                        };
                        h_abs = h * grow;
                        attempt_result = Some((accepted, h));
                    } else {
                        attempt_result = Some((full, h));
                    }
                    break;
                }
            }
        }

        match attempt_result {
            None => break, // reason already recorded
            Some((y_new, h_used)) => {
                t += dir * h_used;
                y = y_new;
                traj.t.push(t);
                traj.states.push(y.clone());
                if let Some(m) = monitor.as_deref_mut() {
                    m.observe(t, &y);
                }
            }
        }
    }

    Ok(traj)
}
