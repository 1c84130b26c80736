//! Axisymmetric power-law-invariant flows of a polytropic gas.
//!
//! Two branches, depending on which pressure derivative vanishes:
//!
//! - pressure independent of z: u = z^{m+1}U(r), v = z^m V(r),
//!   ρ = z^{−2m}Q(r), p = P(r), with the reduced unknowns functions of the
//!   radius;
//! - pressure independent of r: u = r^m U(z), v = r^{m+1}V(z),
//!   ρ = r^{−2m}Q(z), p = P(z), with the reduced unknowns functions of z.
//!
//! Substituting either representation into the stationary adiabatic
//! axisymmetric system collapses it to four coupled ODEs with three first
//! integrals (c1, c2, c3). When c3 = 0 the profile is elementary: a power
//! of a shifted power law for the first branch, an exponential (γ = 3) or
//! power law (γ ≠ 3) for the second. The closed-form constants that the
//! integrals do not fix are obtained by substituting the ansatz back into
//! the reduced system and root-finding, then validated by residual.

use crate::error::{Error, Result};
use crate::flow::FlowState;
use crate::rootfind::positive_root_expanding;
use crate::util::checked_pow;

/// Which pressure derivative vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisymBranch {
    /// p = P(r): reduced unknowns are functions of r.
    PzIndependent,
    /// p = P(z): reduced unknowns are functions of z.
    PrIndependent,
}

/// Closed-form profile constants. For the γ = 3 exponential branch `a` is
/// the exponential rate and `b` the amplitude; otherwise V or U is a power
/// of a·ξ + b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormCoeffs {
    pub a: f64,
    pub b: f64,
}

/// Parameters of one reduced axisymmetric family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisymParams {
    pub branch: AxisymBranch,
    pub m: f64,
    pub gamma: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    closed: Option<ClosedFormCoeffs>,
}

/// Reduced unknowns at one value of the independent variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedStateRZ {
    pub u: f64,
    pub v: f64,
    pub q: f64,
    pub p: f64,
}

impl ReducedStateRZ {
    pub fn new(u: f64, v: f64, q: f64, p: f64) -> Result<Self> {
        for (val, name) in [(u, "U"), (v, "V"), (q, "Q"), (p, "P")] {
            if !val.is_finite() {
                return Err(Error::NonFinite(format!("reduced unknown {name}")));
            }
        }
        if q <= 0.0 {
            return Err(Error::Domain(format!(
                "reduced density must be positive, got {q}"
            )));
        }
        Ok(Self { u, v, q, p })
    }

    /// No validation; integrator plumbing.
    pub const fn raw(u: f64, v: f64, q: f64, p: f64) -> Self {
        Self { u, v, q, p }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.u, self.v, self.q, self.p]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        Self::raw(s[0], s[1], s[2], s[3])
    }
}

fn validate_common(m: f64, gamma: f64, c1: f64) -> Result<()> {
    if !m.is_finite() || (m + 1.0).abs() < 1e-12 {
        return Err(Error::Domain(format!(
            "exponent m must be finite and != -1, got {m}"
        )));
    }
    if !gamma.is_finite() || gamma <= 1.0 {
        return Err(Error::Domain(format!(
            "adiabatic index must be > 1, got {gamma}"
        )));
    }
    if !c1.is_finite() || c1 == 0.0 {
        return Err(Error::Domain(format!(
            "integral constant c1 must be nonzero, got {c1}"
        )));
    }
    Ok(())
}

impl AxisymParams {
    /// Parameters for integrating the reduced system with arbitrary
    /// integral constants; no closed form attached.
    pub fn reduced(
        branch: AxisymBranch,
        m: f64,
        gamma: f64,
        c1: f64,
        c2: f64,
        c3: f64,
    ) -> Result<Self> {
        validate_common(m, gamma, c1)?;
        Ok(Self {
            branch,
            m,
            gamma,
            c1,
            c2,
            c3,
            closed: None,
        })
    }

    /// Closed form of the p = P(r) branch (c3 = 0):
    /// U = (a·r^{2γ/(1+γ)} + b)^{−(m+1)(1+γ)/2}.
    ///
    /// The profile scale `a` is not free: it is pinned by (c1, c2, γ, m).
    /// It is found numerically by substituting the ansatz into the reduced
    /// first-integral relation and root-finding, then validated by residual.
    /// Requires c1·c2 < 0; the two integral terms have fixed signs and can
    /// only cancel for constants of opposite sign.
    pub fn pz_closed_form(m: f64, gamma: f64, c1: f64, c2: f64, b: f64) -> Result<Self> {
        validate_common(m, gamma, c1)?;
        if !(c1 * c2 < 0.0) {
            return Err(Error::Domain(
                "closed form with vanishing third integral requires c1 and c2 of opposite signs"
                    .into(),
            ));
        }
        let lo = if b >= 0.0 { 0.0 } else { -b };
        let c3_of = |a: f64| -> Result<f64> {
            let p = Self {
                branch: AxisymBranch::PzIndependent,
                m,
                gamma,
                c1,
                c2,
                c3: 0.0,
                closed: Some(ClosedFormCoeffs { a, b }),
            };
            let s = closed_form(&p, 1.0)?;
            Ok(first_integrals(&p, &s, 1.0)?.2)
        };
        let shift = positive_root_expanding(|s| c3_of(lo + s), 1.0)?;
        let a = lo + shift;
        let params = Self {
            branch: AxisymBranch::PzIndependent,
            m,
            gamma,
            c1,
            c2,
            c3: 0.0,
            closed: Some(ClosedFormCoeffs { a, b }),
        };
        params.validate_closed_form(&[1.0, 1.2])?;
        Ok(params)
    }

    /// Closed form of the p = P(r) branch with the profile scale given and
    /// c2 derived from it (again by numeric substitution: c3 is affine in
    /// c2, so one evaluation per coefficient pins it).
    pub fn pz_closed_form_with_scale(m: f64, gamma: f64, c1: f64, a: f64, b: f64) -> Result<Self> {
        validate_common(m, gamma, c1)?;
        if !(a > 0.0) {
            return Err(Error::Domain(format!(
                "profile scale must be positive, got {a}"
            )));
        }
        let c3_with_c2 = |c2: f64| -> Result<f64> {
            let p = Self {
                branch: AxisymBranch::PzIndependent,
                m,
                gamma,
                c1,
                c2,
                c3: 0.0,
                closed: Some(ClosedFormCoeffs { a, b }),
            };
            let s = closed_form(&p, 1.0)?;
            Ok(first_integrals(&p, &s, 1.0)?.2)
        };
        let probe = -c1.signum();
        let f0 = c3_with_c2(0.0)?;
        let f1 = c3_with_c2(probe)?;
        let slope = (f1 - f0) / probe;
        if slope == 0.0 || !slope.is_finite() {
            return Err(Error::Root(
                "could not pin c2 from the profile scale".into(),
            ));
        }
        let c2 = -f0 / slope;
        let params = Self {
            branch: AxisymBranch::PzIndependent,
            m,
            gamma,
            c1,
            c2,
            c3: 0.0,
            closed: Some(ClosedFormCoeffs { a, b }),
        };
        params.validate_closed_form(&[1.0, 1.2])?;
        Ok(params)
    }

    /// Closed form of the p = P(z) branch (c3 = 0).
    ///
    /// γ = 3: V = b·e^{kz} with k = −(m+1)·(−c1/(3c2))^{1/4}; the radicand is
    /// positive exactly when c1·c2 < 0, which the vanishing third integral
    /// forces. γ ≠ 3: V = (a·z + b)^{(γ+1)(m+1)/(γ−3)} with `a` root-found
    /// from the integral relation.
    pub fn pr_closed_form(m: f64, gamma: f64, c1: f64, c2: f64, b: f64) -> Result<Self> {
        validate_common(m, gamma, c1)?;
        if !(c1 * c2 < 0.0) {
            return Err(Error::Domain(
                "closed form with vanishing third integral requires c1 and c2 of opposite signs"
                    .into(),
            ));
        }
        if gamma == 3.0 {
            if !(b > 0.0) {
                return Err(Error::Domain(format!(
                    "exponential amplitude must be positive, got {b}"
                )));
            }
            let k = -(m + 1.0) * (-c1 / (3.0 * c2)).powf(0.25);
            let params = Self {
                branch: AxisymBranch::PrIndependent,
                m,
                gamma,
                c1,
                c2,
                c3: 0.0,
                closed: Some(ClosedFormCoeffs { a: k, b }),
            };
            params.validate_closed_form(&[0.0, 1.0])?;
            return Ok(params);
        }
        let e = profile_exponent(gamma, m);
        // Solve for w = -a*e > 0; evaluate at the coordinate where the
        // profile base equals one so that only the constants remain.
        let c3_of_w = |w: f64| -> Result<f64> {
            let a = -w / e;
            let z_ref = (1.0 - b) / a;
            let p = Self {
                branch: AxisymBranch::PrIndependent,
                m,
                gamma,
                c1,
                c2,
                c3: 0.0,
                closed: Some(ClosedFormCoeffs { a, b }),
            };
            let s = closed_form(&p, z_ref)?;
            Ok(first_integrals(&p, &s, z_ref)?.2)
        };
        let w = positive_root_expanding(c3_of_w, 1.0)?;
        let a = -w / e;
        let params = Self {
            branch: AxisymBranch::PrIndependent,
            m,
            gamma,
            c1,
            c2,
            c3: 0.0,
            closed: Some(ClosedFormCoeffs { a, b }),
        };
        let z0 = (1.0 - b) / a;
        params.validate_closed_form(&[z0, z0 + 0.1 / a.abs()])?;
        Ok(params)
    }

    pub fn closed_coeffs(&self) -> Option<ClosedFormCoeffs> {
        self.closed
    }

    fn require_closed(&self) -> Result<ClosedFormCoeffs> {
        self.closed.ok_or_else(|| {
            Error::Domain("no closed-form profile attached to these parameters".into())
        })
    }

    fn validate_closed_form(&self, samples: &[f64]) -> Result<()> {
        for &x in samples {
            let s = closed_form(self, x)?;
            let (_, _, c3) = first_integrals(self, &s, x)?;
            let scale = s.u * s.u + s.v * s.v + 1.0;
            if c3.abs() > 1e-8 * scale {
                return Err(Error::Root(format!(
                    "closed-form constants inconsistent: third integral {c3} at {x}"
                )));
            }
        }
        Ok(())
    }
}

/// Exponent of the γ ≠ 3 power-law profile of the p = P(z) branch.
pub fn profile_exponent(gamma: f64, m: f64) -> f64 {
    (gamma + 1.0) * (m + 1.0) / (gamma - 3.0)
}

/// Right-hand side of the reduced system, in the order (U', V', Q', P').
///
/// The derivative pair coupled through the pressure is obtained from a 2×2
/// linear solve whose determinant vanishes exactly on the sonic locus of
/// the reduction (marching speed squared equals γP/Q); that degeneracy is
/// reported as a singularity, as are V = 0 (resp. U = 0) and r ≤ 0.
pub fn reduced_rhs(params: &AxisymParams, state: &ReducedStateRZ, x: f64) -> Result<[f64; 4]> {
    let (m, gamma) = (params.m, params.gamma);
    let ReducedStateRZ { u, v, q, p } = *state;
    if q <= 0.0 {
        return Err(Error::Domain(format!(
            "reduced density must be positive, got {q}"
        )));
    }
    match params.branch {
        AxisymBranch::PzIndependent => {
            let r = x;
            if r <= 0.0 {
                return Err(Error::Singular(format!("radius must be positive, got {r}")));
            }
            if v == 0.0 {
                return Err(Error::Singular("radial reduced velocity vanished".into()));
            }
            let det = v * v - gamma * p / q;
            let scale = v * v + (gamma * p / q).abs();
            if det.abs() <= 1e-12 * scale {
                return Err(Error::Singular(format!(
                    "sonic degeneracy of the reduction: V^2 = gamma*P/Q at r = {r}"
                )));
            }
            let du = -(1.0 + m) * u * u / v;
            let b1 = -m * v * u;
            let b2 = -gamma * p * ((m + 1.0) * u + v / r);
            let dv = (v * b1 - b2 / q) / det;
            let dp = (-gamma * p * b1 + v * b2) / det;
            let dq = -((1.0 - m) * u * q + q * dv + v * q / r) / v;
            Ok([du, dv, dq, dp])
        }
        AxisymBranch::PrIndependent => {
            if u == 0.0 {
                return Err(Error::Singular("axial reduced velocity vanished".into()));
            }
            let det = q * u * u - gamma * p;
            let scale = q * u * u + (gamma * p).abs();
            if det.abs() <= 1e-12 * scale {
                return Err(Error::Singular(
                    "sonic degeneracy of the reduction: U^2 = gamma*P/Q".into(),
                ));
            }
            let dv = -(m + 1.0) * v * v / u;
            let b1 = -m * q * u * v;
            let b2 = -gamma * (m + 2.0) * p * v;
            let du = (u * b1 - b2) / det;
            let dp = (-gamma * p * b1 + q * u * b2) / det;
            let dq = -(q * du + (2.0 - m) * q * v) / u;
            Ok([du, dv, dq, dp])
        }
    }
}

/// The three conserved quantities of the reduced system, computed from one
/// state. The third combines the first two, so it is evaluated with the
/// freshly computed (c1, c2).
pub fn first_integrals(
    params: &AxisymParams,
    state: &ReducedStateRZ,
    x: f64,
) -> Result<(f64, f64, f64)> {
    let (m, gamma) = (params.m, params.gamma);
    let ReducedStateRZ { u, v, q, p } = *state;
    match params.branch {
        AxisymBranch::PzIndependent => {
            let r = x;
            if r <= 0.0 {
                return Err(Error::Domain(format!("radius must be positive, got {r}")));
            }
            if u <= 0.0 {
                return Err(Error::Domain(format!(
                    "first integrals need a positive axial profile, got U = {u}"
                )));
            }
            let c1 = q * v * r * checked_pow(u, (m - 1.0) / (m + 1.0))?;
            let c2 = p * checked_pow(v * r / u, gamma)?;
            if c1 == 0.0 {
                return Err(Error::Domain("degenerate state: c1 = 0".into()));
            }
            let c3 = 0.5 * v * v * checked_pow(u, -2.0 * m / (m + 1.0))?
                + c2 * gamma / (c1 * (gamma - 1.0)) * checked_pow(u / (v * r), gamma - 1.0)?;
            Ok((c1, c2, c3))
        }
        AxisymBranch::PrIndependent => {
            if v <= 0.0 {
                return Err(Error::Domain(format!(
                    "first integrals need a positive radial profile, got V = {v}"
                )));
            }
            let c1 = q * u * checked_pow(v, (m - 2.0) / (m + 1.0))?;
            let c2 = p * checked_pow(u * checked_pow(v, -(m + 2.0) / (m + 1.0))?, gamma)?;
            if c1 == 0.0 {
                return Err(Error::Domain("degenerate state: c1 = 0".into()));
            }
            let g = u * checked_pow(v, -m / (m + 1.0))?;
            let h = checked_pow(v, (m + 2.0) / (m + 1.0))? / u;
            let c3 = 0.5 * g * g + c2 * gamma / (c1 * (gamma - 1.0)) * checked_pow(h, gamma - 1.0)?;
            Ok((c1, c2, c3))
        }
    }
}

struct Profile {
    u: f64,
    up: f64,
    v: f64,
    vp: f64,
}

fn pz_profile(params: &AxisymParams, r: f64) -> Result<Profile> {
    let ClosedFormCoeffs { a, b } = params.require_closed()?;
    if r <= 0.0 {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let (m, gamma) = (params.m, params.gamma);
    let kappa = 2.0 * gamma / (1.0 + gamma);
    let beta = (m + 1.0) * (1.0 + gamma) / 2.0;
    let g = a * r.powf(kappa) + b;
    if g <= 0.0 {
        return Err(Error::Domain(format!(
            "profile base must be positive, got {g} at r = {r}"
        )));
    }
    let gp = a * kappa * r.powf(kappa - 1.0);
    let u = g.powf(-beta);
    let up = -beta * g.powf(-beta - 1.0) * gp;
    let v = g.powf(1.0 - beta) * r.powf(1.0 - kappa) / (a * gamma);
    let vp = ((1.0 - beta) * g.powf(-beta) * gp * r.powf(1.0 - kappa)
        + (1.0 - kappa) * g.powf(1.0 - beta) * r.powf(-kappa))
        / (a * gamma);
    Ok(Profile { u, up, v, vp })
}

fn pr_profile(params: &AxisymParams, z: f64) -> Result<Profile> {
    let ClosedFormCoeffs { a, b } = params.require_closed()?;
    let m = params.m;
    if params.gamma == 3.0 {
        let k = a;
        let v = b * (k * z).exp();
        let vp = k * v;
        let u = -(m + 1.0) * v / k;
        let up = -(m + 1.0) * v;
        return Ok(Profile { u, up, v, vp });
    }
    let e = profile_exponent(params.gamma, m);
    let base = a * z + b;
    if base <= 0.0 {
        return Err(Error::Domain(format!(
            "profile base must be positive, got {base} at z = {z}"
        )));
    }
    let w = -a * e;
    let v = base.powf(e);
    let vp = a * e * base.powf(e - 1.0);
    let u = (m + 1.0) / w * base.powf(e + 1.0);
    let up = (m + 1.0) * (e + 1.0) * a / w * base.powf(e);
    Ok(Profile { u, up, v, vp })
}

fn profile(params: &AxisymParams, x: f64) -> Result<Profile> {
    match params.branch {
        AxisymBranch::PzIndependent => pz_profile(params, x),
        AxisymBranch::PrIndependent => pr_profile(params, x),
    }
}

/// Closed-form reduced state at one coordinate (requires c3 = 0 parameters
/// built by one of the closed-form constructors).
pub fn closed_form(params: &AxisymParams, x: f64) -> Result<ReducedStateRZ> {
    let pr = profile(params, x)?;
    let (m, gamma, c1, c2) = (params.m, params.gamma, params.c1, params.c2);
    let (q, p) = match params.branch {
        AxisymBranch::PzIndependent => {
            let q = c1 * checked_pow(pr.u, (1.0 - m) / (m + 1.0))? / (pr.v * x);
            let p = c2 * checked_pow(pr.u / (pr.v * x), gamma)?;
            (q, p)
        }
        AxisymBranch::PrIndependent => {
            let q = c1 * checked_pow(pr.v, (2.0 - m) / (m + 1.0))? / pr.u;
            let p = c2 * checked_pow(checked_pow(pr.v, (m + 2.0) / (m + 1.0))? / pr.u, gamma)?;
            (q, p)
        }
    };
    ReducedStateRZ::new(pr.u, pr.v, q, p)
}

/// Analytic derivative (U', V', Q', P') of the closed form, for residual
/// checks against the reduced system without finite differences.
pub fn closed_form_derivative(params: &AxisymParams, x: f64) -> Result<[f64; 4]> {
    let pr = profile(params, x)?;
    let state = closed_form(params, x)?;
    let (m, gamma) = (params.m, params.gamma);
    let (lq, lp) = match params.branch {
        AxisymBranch::PzIndependent => {
            let lq = (1.0 - m) / (m + 1.0) * pr.up / pr.u - pr.vp / pr.v - 1.0 / x;
            let lp = gamma * (pr.up / pr.u - pr.vp / pr.v - 1.0 / x);
            (lq, lp)
        }
        AxisymBranch::PrIndependent => {
            let lq = -pr.up / pr.u + (2.0 - m) / (m + 1.0) * pr.vp / pr.v;
            let lp = gamma * ((m + 2.0) / (m + 1.0) * pr.vp / pr.v - pr.up / pr.u);
            (lq, lp)
        }
    };
    Ok([pr.up, pr.vp, state.q * lq, state.p * lp])
}

/// Streamline constant through a point: z·U(r)^{1/(m+1)} for the p = P(r)
/// branch, r·V(z)^{1/(m+1)} for the other.
pub fn streamline_constant(params: &AxisymParams, z: f64, r: f64) -> Result<f64> {
    match params.branch {
        AxisymBranch::PzIndependent => {
            let s = closed_form(params, r)?;
            Ok(z * checked_pow(s.u, 1.0 / (params.m + 1.0))?)
        }
        AxisymBranch::PrIndependent => {
            let s = closed_form(params, z)?;
            Ok(r * checked_pow(s.v, 1.0 / (params.m + 1.0))?)
        }
    }
}

/// Closed-form streamline as (z, r) pairs. For the p = P(r) branch the
/// samples are radii and z = c·U(r)^{−1/(m+1)}; for the p = P(z) branch the
/// samples are axial coordinates and r = c·V(z)^{−1/(m+1)}.
pub fn streamline_curve(params: &AxisymParams, c: f64, samples: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(samples.len());
    for &x in samples {
        let s = closed_form(params, x)?;
        match params.branch {
            AxisymBranch::PzIndependent => {
                let z = c * checked_pow(s.u, -1.0 / (params.m + 1.0))?;
                out.push((z, x));
            }
            AxisymBranch::PrIndependent => {
                let r = c * checked_pow(s.v, -1.0 / (params.m + 1.0))?;
                out.push((x, r));
            }
        }
    }
    Ok(out)
}

type ReducedRzFn = std::sync::Arc<dyn Fn(f64) -> Result<ReducedStateRZ> + Send + Sync>;

/// Physical field assembled from a reduced-state provider (the closed form
/// or any other function of the reduced variable).
#[derive(Clone)]
pub struct AxisymField {
    params: AxisymParams,
    reduced: ReducedRzFn,
}

impl AxisymField {
    pub fn closed_form(params: AxisymParams) -> Result<Self> {
        params.require_closed()?;
        Ok(Self {
            params,
            reduced: std::sync::Arc::new(move |x| closed_form(&params, x)),
        })
    }

    pub fn with_reduced(
        params: AxisymParams,
        reduced: impl Fn(f64) -> Result<ReducedStateRZ> + Send + Sync + 'static,
    ) -> Self {
        Self {
            params,
            reduced: std::sync::Arc::new(reduced),
        }
    }

    pub fn params(&self) -> &AxisymParams {
        &self.params
    }

    /// Velocity components (u along z, v along r), density, and pressure
    /// at (z, r); the swirl component is identically zero.
    pub fn state(&self, z: f64, r: f64) -> Result<FlowState> {
        let m = self.params.m;
        match self.params.branch {
            AxisymBranch::PzIndependent => {
                let s = (self.reduced)(r)?;
                let u = checked_pow(z, m + 1.0)? * s.u;
                let v = checked_pow(z, m)? * s.v;
                let rho = checked_pow(z, -2.0 * m)? * s.q;
                FlowState::new(u, v, 0.0, rho, s.p)
            }
            AxisymBranch::PrIndependent => {
                let s = (self.reduced)(z)?;
                let u = checked_pow(r, m)? * s.u;
                let v = checked_pow(r, m + 1.0)? * s.v;
                let rho = checked_pow(r, -2.0 * m)? * s.q;
                FlowState::new(u, v, 0.0, rho, s.p)
            }
        }
    }
}
