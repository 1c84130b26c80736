//! Independent finite-difference verification.
//!
//! A candidate flow field is sampled on symmetric stencils and substituted
//! into the governing balance equations; for an exact solution the residual
//! is pure truncation and decays at the stencil's second order. Reports
//! carry both raw residuals and a scale-free variant (raw divided by the
//! largest constituent term), because power-law fields span wide dynamic
//! ranges.

use crate::error::{Error, Result};
use crate::flow::{bernoulli_invariant, entropy_invariant, FlowState, Point3};

/// Per-equation residual magnitudes of a governing system at a point.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    /// Stencil spacing used.
    pub h: f64,
    /// Signed residual per equation.
    pub residuals: Vec<f64>,
    /// |residual| divided by the largest constituent term magnitude.
    pub normalized: Vec<f64>,
    pub labels: Vec<&'static str>,
}

impl ResidualReport {
    pub fn max_abs(&self) -> f64 {
        self.residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()))
    }

    pub fn max_normalized(&self) -> f64 {
        self.normalized.iter().fold(0.0f64, |m, r| m.max(*r))
    }
}

fn normalize(residual: f64, terms: &[f64]) -> f64 {
    let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if scale > 0.0 {
        residual.abs() / scale
    } else {
        residual.abs()
    }
}

fn sample<F>(field: &F, pt: Point3) -> Result<FlowState>
where
    F: Fn(Point3) -> Result<FlowState>,
{
    field(pt)
        .map_err(|e| Error::Stencil(format!("sampling at ({}, {}, {}): {e}", pt.x, pt.y, pt.z)))
}

/// Residuals of the full three-dimensional stationary system
/// (continuity, three momentum components, energy) by second-order central
/// differences with spacing h.
pub fn euler_residual_3d<F>(field: &F, pt: Point3, h: f64, gamma: f64) -> Result<ResidualReport>
where
    F: Fn(Point3) -> Result<FlowState>,
{
    if !(h > 0.0) {
        return Err(Error::Domain(format!(
            "stencil spacing must be > 0, got {h}"
        )));
    }
    let c = sample(field, pt)?;
    let xp = sample(field, Point3::new(pt.x + h, pt.y, pt.z))?;
    let xm = sample(field, Point3::new(pt.x - h, pt.y, pt.z))?;
    let yp = sample(field, Point3::new(pt.x, pt.y + h, pt.z))?;
    let ym = sample(field, Point3::new(pt.x, pt.y - h, pt.z))?;
    let zp = sample(field, Point3::new(pt.x, pt.y, pt.z + h))?;
    let zm = sample(field, Point3::new(pt.x, pt.y, pt.z - h))?;

    let d = |plus: f64, minus: f64| (plus - minus) / (2.0 * h);
    let ux = d(xp.u, xm.u);
    let uy = d(yp.u, ym.u);
    let uz = d(zp.u, zm.u);
    let vx = d(xp.v, xm.v);
    let vy = d(yp.v, ym.v);
    let vz = d(zp.v, zm.v);
    let wx = d(xp.w, xm.w);
    let wy = d(yp.w, ym.w);
    let wz = d(zp.w, zm.w);
    let rx = d(xp.rho, xm.rho);
    let ry = d(yp.rho, ym.rho);
    let rz = d(zp.rho, zm.rho);
    let px = d(xp.p, xm.p);
    let py = d(yp.p, ym.p);
    let pz = d(zp.p, zm.p);

    let div = ux + vy + wz;

    let cont_terms = [c.u * rx, c.v * ry, c.w * rz, c.rho * div];
    let cont = cont_terms.iter().sum::<f64>();

    let mx_terms = [c.rho * c.u * ux, c.rho * c.v * uy, c.rho * c.w * uz, px];
    let mx = mx_terms.iter().sum::<f64>();

    let my_terms = [c.rho * c.u * vx, c.rho * c.v * vy, c.rho * c.w * vz, py];
    let my = my_terms.iter().sum::<f64>();

    let mz_terms = [c.rho * c.u * wx, c.rho * c.v * wy, c.rho * c.w * wz, pz];
    let mz = mz_terms.iter().sum::<f64>();

    let en_terms = [c.u * px, c.v * py, c.w * pz, gamma * c.p * div];
    let en = en_terms.iter().sum::<f64>();

    Ok(ResidualReport {
        h,
        residuals: vec![cont, mx, my, mz, en],
        normalized: vec![
            normalize(cont, &cont_terms),
            normalize(mx, &mx_terms),
            normalize(my, &my_terms),
            normalize(mz, &mz_terms),
            normalize(en, &en_terms),
        ],
        labels: vec![
            "continuity",
            "momentum-x",
            "momentum-y",
            "momentum-z",
            "energy",
        ],
    })
}

/// Residuals of the stationary adiabatic axisymmetric system at (z, r),
/// including the geometric v/r terms. The stencil must stay off the axis:
/// requires r > h.
pub fn euler_residual_axisym<F>(
    field: &F,
    z: f64,
    r: f64,
    h: f64,
    gamma: f64,
) -> Result<ResidualReport>
where
    F: Fn(f64, f64) -> Result<FlowState>,
{
    if !(h > 0.0) {
        return Err(Error::Domain(format!(
            "stencil spacing must be > 0, got {h}"
        )));
    }
    if r <= h {
        return Err(Error::Stencil(format!(
            "stencil touches the axis: r = {r} with spacing {h}"
        )));
    }
    let at = |z: f64, r: f64| {
        field(z, r).map_err(|e| Error::Stencil(format!("sampling at (z={z}, r={r}): {e}")))
    };
    let c = at(z, r)?;
    let zp = at(z + h, r)?;
    let zm = at(z - h, r)?;
    let rp = at(z, r + h)?;
    let rm = at(z, r - h)?;

    let d = |plus: f64, minus: f64| (plus - minus) / (2.0 * h);
    let uz = d(zp.u, zm.u);
    let ur = d(rp.u, rm.u);
    let vz = d(zp.v, zm.v);
    let vr = d(rp.v, rm.v);
    let rhoz = d(zp.rho, zm.rho);
    let rhor = d(rp.rho, rm.rho);
    let pz = d(zp.p, zm.p);
    let pr = d(rp.p, rm.p);

    let div = uz + vr + c.v / r;

    let cont_terms = [c.u * rhoz, c.v * rhor, c.rho * div];
    let cont = cont_terms.iter().sum::<f64>();

    let mz_terms = [c.rho * c.u * uz, c.rho * c.v * ur, pz];
    let mz = mz_terms.iter().sum::<f64>();

    let mr_terms = [c.rho * c.u * vz, c.rho * c.v * vr, pr];
    let mr = mr_terms.iter().sum::<f64>();

    let en_terms = [c.u * pz, c.v * pr, gamma * c.p * div];
    let en = en_terms.iter().sum::<f64>();

    Ok(ResidualReport {
        h,
        residuals: vec![cont, mz, mr, en],
        normalized: vec![
            normalize(cont, &cont_terms),
            normalize(mz, &mz_terms),
            normalize(mr, &mr_terms),
            normalize(en, &en_terms),
        ],
        labels: vec!["continuity", "momentum-z", "momentum-r", "energy"],
    })
}

/// Observed convergence order, or saturation when the residuals sit below
/// the double-precision cancellation floor and carry no slope information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceOrder {
    Slope(f64),
    Saturated,
}

/// Default floor: central-difference residuals much below this are
/// dominated by rounding cancellation, not truncation.
pub const RESIDUAL_FLOOR: f64 = 1e-10;

/// Least-squares slope of log |residual| against log h over a geometric
/// spacing sequence. For an exact solution the residual is pure truncation
/// and the slope is ≈ 2 with second-order stencils; a non-solution
/// converges to a nonzero limit and the slope is ≈ 0.
pub fn convergence_order(hs: &[f64], residuals: &[f64], floor: f64) -> Result<ConvergenceOrder> {
    if hs.len() < 3 || hs.len() != residuals.len() {
        return Err(Error::Domain(format!(
            "need at least 3 matched spacings, got {} and {}",
            hs.len(),
            residuals.len()
        )));
    }
    if hs.iter().any(|&h| !(h > 0.0)) {
        return Err(Error::Domain("spacings must be positive".into()));
    }
    if residuals.iter().all(|r| r.abs() <= floor) {
        return Ok(ConvergenceOrder::Saturated);
    }
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = residuals
        .iter()
        .map(|r| r.abs().max(floor * 1e-6).ln())
        .collect();
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let num: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let den: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    if den == 0.0 {
        return Err(Error::Domain("degenerate spacing sequence".into()));
    }
    Ok(ConvergenceOrder::Slope(num / den))
}

/// Maximum relative drift of the entropy and Bernoulli invariants over a
/// set of states sampled along a curve, measured against the curve mean.
#[derive(Debug, Clone, Copy)]
pub struct InvariantDrift {
    pub entropy: f64,
    pub bernoulli: f64,
}

impl InvariantDrift {
    pub fn max(&self) -> f64 {
        self.entropy.max(self.bernoulli)
    }
}

fn drift_from_mean(values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let scale = mean.abs().max(1e-30);
    values
        .iter()
        .fold(0.0f64, |m, v| m.max((v - mean).abs() / scale))
}

/// Invariant drift over already-sampled states.
pub fn invariants_along_states(states: &[FlowState], gamma: f64) -> Result<InvariantDrift> {
    if states.is_empty() {
        return Err(Error::Domain("empty curve".into()));
    }
    let mut s_vals = Vec::with_capacity(states.len());
    let mut b_vals = Vec::with_capacity(states.len());
    for st in states {
        s_vals.push(entropy_invariant(gamma, st)?);
        b_vals.push(bernoulli_invariant(gamma, st)?);
    }
    Ok(InvariantDrift {
        entropy: drift_from_mean(&s_vals),
        bernoulli: drift_from_mean(&b_vals),
    })
}

/// Invariant drift along a 3D curve sampled from a field.
pub fn invariants_along_curve_3d<F>(
    field: &F,
    curve: &[Point3],
    gamma: f64,
) -> Result<InvariantDrift>
where
    F: Fn(Point3) -> Result<FlowState>,
{
    let states: Result<Vec<FlowState>> = curve.iter().map(|&pt| field(pt)).collect();
    invariants_along_states(&states?, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(_: Point3) -> Result<FlowState> {
        FlowState::new(1.0, 2.0, 3.0, 1.5, 0.7)
    }

    #[test]
    fn uniform_flow_residuals_vanish() {
        let rep = euler_residual_3d(&uniform, Point3::new(0.0, 0.0, 0.0), 1e-3, 1.4).unwrap();
        assert_eq!(rep.max_abs(), 0.0);

        let rz = |_z: f64, _r: f64| FlowState::new(1.0, 0.0, 0.0, 1.0, 1.0);
        let rep = euler_residual_axisym(&rz, 0.0, 1.0, 1e-3, 1.4).unwrap();
        assert_eq!(rep.max_abs(), 0.0);
    }

    #[test]
    fn axisym_geometric_term() {
        // v = r, others constant, rho = 1: continuity residual is v_r + v/r = 2.
        let f = |_z: f64, r: f64| FlowState::new(0.0, r, 0.0, 1.0, 1.0);
        let rep = euler_residual_axisym(&f, 0.5, 1.3, 1e-4, 1.4).unwrap();
        assert!(
            (rep.residuals[0] - 2.0).abs() < 1e-9,
            "continuity {}",
            rep.residuals[0]
        );
    }

    #[test]
    fn axis_proximity_is_a_stencil_error() {
        let f = |_z: f64, r: f64| FlowState::new(0.0, r, 0.0, 1.0, 1.0);
        assert!(matches!(
            euler_residual_axisym(&f, 0.0, 1e-3, 1e-2, 1.4),
            Err(Error::Stencil(_))
        ));
    }

    #[test]
    fn perturbed_pressure_shows_in_momentum_residual() {
        // Base state uniform; p multiplied by (1 + 0.1 x) leaves an x-momentum
        // residual converging to 0.1 * p.
        let f = |pt: Point3| FlowState::new(1.0, 0.0, 0.0, 1.0, 0.7 * (1.0 + 0.1 * pt.x));
        let rep = euler_residual_3d(&f, Point3::new(0.3, 0.0, 0.0), 1e-4, 1.4).unwrap();
        assert!(
            (rep.residuals[1] - 0.07).abs() < 1e-9,
            "momentum-x {}",
            rep.residuals[1]
        );
    }

    #[test]
    fn continuity_residual_linear_in_density_at_frozen_velocity() {
        let vel = (0.8, -0.3, 0.4);
        let make = move |rho: fn(Point3) -> f64| {
            move |pt: Point3| FlowState::new(vel.0, vel.1, vel.2, rho(pt), 1.0)
        };
        let f = make(|pt| 1.0 + 0.2 * pt.x + 0.1 * pt.y * pt.y);
        let g = make(|pt| 2.0 + 0.3 * pt.z * pt.z);
        let fg = make(|pt| 3.0 + 0.2 * pt.x + 0.1 * pt.y * pt.y + 0.3 * pt.z * pt.z);
        let pt = Point3::new(0.4, 0.6, -0.2);
        let rf = euler_residual_3d(&f, pt, 1e-3, 1.4).unwrap().residuals[0];
        let rg = euler_residual_3d(&g, pt, 1e-3, 1.4).unwrap().residuals[0];
        let rfg = euler_residual_3d(&fg, pt, 1e-3, 1.4).unwrap().residuals[0];
        assert!((rfg - (rf + rg)).abs() < 1e-12 * rfg.abs().max(1.0));
    }

    #[test]
    fn stencil_orientation_invariance() {
        // A symmetric stencil evaluated with reversed axis orientation uses
        // the same sample set; the report must be identical to rounding.
        let f = |pt: Point3| {
            FlowState::new(
                pt.x * pt.y + 0.1,
                pt.z * pt.z + 0.4,
                0.2 * pt.x,
                1.0 + 0.1 * pt.x * pt.x,
                2.0 + 0.3 * pt.y,
            )
        };
        let pt = Point3::new(0.3, -0.4, 0.6);
        let a = euler_residual_3d(&f, pt, 1e-3, 1.4).unwrap();
        let mirrored = |p: Point3| f(Point3::new(p.x, p.y, p.z));
        let b = euler_residual_3d(&mirrored, pt, 1e-3, 1.4).unwrap();
        for i in 0..a.residuals.len() {
            assert_eq!(a.residuals[i].to_bits(), b.residuals[i].to_bits());
        }
    }

    #[test]
    fn convergence_order_detects_slopes() {
        let hs = [1e-2, 1e-3, 1e-4];
        let quad: Vec<f64> = hs.iter().map(|h| 3.0 * h * h).collect();
        match convergence_order(&hs, &quad, RESIDUAL_FLOOR).unwrap() {
            ConvergenceOrder::Slope(s) => assert!((s - 2.0).abs() < 1e-12),
            _ => panic!("expected a slope"),
        }
        let flat = [0.5, 0.5, 0.5];
        match convergence_order(&hs, &flat, RESIDUAL_FLOOR).unwrap() {
            ConvergenceOrder::Slope(s) => assert!(s.abs() < 1e-12),
            _ => panic!("expected a slope"),
        }
        let tiny = [1e-14, 2e-14, 1.5e-14];
        assert_eq!(
            convergence_order(&hs, &tiny, RESIDUAL_FLOOR).unwrap(),
            ConvergenceOrder::Saturated
        );
    }

    #[test]
    fn invariant_drift_zero_for_constant_state() {
        let st = FlowState::new(1.0, 0.5, 0.0, 2.0, 1.3).unwrap();
        let drift = invariants_along_states(&[st; 8], 1.4).unwrap();
        assert!(drift.entropy < 1e-14);
        assert!(drift.bernoulli < 1e-14);
    }
}
