//! Fully three-dimensional power-law-invariant flows of a polytropic gas.
//!
//! The ansatz u = x^{m+1}y^n U(z), v = x^m y^{n+1} V(z), w = x^m y^n W(z),
//! ρ = x^{−2m}y^{−2n} Q(z), p = P(z) collapses the stationary system to
//! five coupled ODEs in z with three first integrals. A logarithmic change
//! of variables (S, R, T, X, Y) reduces everything to one scalar ODE for
//! X(z), which is elementary when the third integral vanishes: exponential
//! in disguise for γ = 3, a pure power law for γ ≠ 3. The module provides
//! the reduced right-hand side, the change of variables and its inverse,
//! the first integrals, the scalar equation and its closed forms, full
//! state reconstruction, parametric streamlines, and physical-field
//! assembly.
//!
//! The energy equation admits a "literal" variant that drops the pressure
//! factor from the divergence term; it is wrong (it destroys the pressure
//! first integral) and is kept only as a regression reference, selectable
//! via [`EnergyForm::Literal`].

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::flow::{FlowState, Point3};
use crate::rootfind::positive_root_expanding;
use crate::util::checked_pow;

/// Parameters of the three-dimensional reduced family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeDParams {
    pub m: f64,
    pub n: f64,
    pub gamma: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// Integration constant of the scalar profile equation.
    pub b: f64,
}

impl ThreeDParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        m: f64,
        n: f64,
        gamma: f64,
        c1: f64,
        c2: f64,
        c3: f64,
        c4: f64,
        b: f64,
    ) -> Result<Self> {
        for (v, name) in [
            (m, "m"),
            (n, "n"),
            (gamma, "gamma"),
            (c1, "c1"),
            (c2, "c2"),
            (c3, "c3"),
            (c4, "c4"),
            (b, "b"),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("parameter {name}")));
            }
        }
        if (1.0 + m + n).abs() < 1e-12 {
            return Err(Error::Domain(
                "exponents with m + n + 1 = 0 make the reconstruction degenerate".into(),
            ));
        }
        if gamma <= 1.0 {
            return Err(Error::Domain(format!(
                "adiabatic index must be > 1, got {gamma}"
            )));
        }
        if c1 == 0.0 {
            return Err(Error::Domain("integral constant c1 must be nonzero".into()));
        }
        Ok(Self {
            m,
            n,
            gamma,
            c1,
            c2,
            c3,
            c4,
            b,
        })
    }

    pub fn sigma(&self) -> f64 {
        1.0 + self.m + self.n
    }

    /// Signed coupling of the two leading integrals in the third one:
    /// c2·γ/(c1·(γ−1)). Negative on every real closed-form branch.
    pub fn coupling(&self) -> f64 {
        self.c2 * self.gamma / (self.c1 * (self.gamma - 1.0))
    }

    /// Magnitude of the profile decay/growth rate, (2|coupling|)^{−1/(γ+1)}.
    pub fn rate_magnitude(&self) -> Result<f64> {
        let a = self.coupling();
        if a == 0.0 {
            return Err(Error::Domain(
                "zero integral coupling has no profile rate".into(),
            ));
        }
        Ok((2.0 * a.abs()).powf(-1.0 / (self.gamma + 1.0)))
    }
}

/// Reduced unknowns at one value of z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState3D {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub q: f64,
    pub p: f64,
}

impl ReducedState3D {
    pub fn new(u: f64, v: f64, w: f64, q: f64, p: f64) -> Result<Self> {
        for (val, name) in [(u, "U"), (v, "V"), (w, "W"), (q, "Q"), (p, "P")] {
            if !val.is_finite() {
                return Err(Error::NonFinite(format!("reduced unknown {name}")));
            }
        }
        if q <= 0.0 {
            return Err(Error::Domain(format!(
                "reduced density must be positive, got {q}"
            )));
        }
        Ok(Self { u, v, w, q, p })
    }

    pub const fn raw(u: f64, v: f64, w: f64, q: f64, p: f64) -> Self {
        Self { u, v, w, q, p }
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.u, self.v, self.w, self.q, self.p]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        Self::raw(s[0], s[1], s[2], s[3], s[4])
    }
}

/// Auxiliary variables of the logarithmic change of coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxVars {
    pub s: f64,
    pub r: f64,
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

/// Which form of the energy equation closes the reduced system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyForm {
    /// The correct form: the divergence term carries the pressure factor.
    PressureWeighted,
    /// Historical misprint without the pressure factor; breaks the pressure
    /// integral. Regression use only.
    Literal,
}

/// Sign branch of the scalar profile X(z).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XBranch {
    Decaying,
    Growing,
}

/// Right-hand side of the five reduced equations, order (U', V', W', Q', P').
///
/// (Q', W', P') come from a 3×3 linear solve whose determinant
/// W·(QW² − γP) vanishes on the sonic locus of the reduction.
pub fn rhs_3d(params: &ThreeDParams, state: &ReducedState3D, form: EnergyForm) -> Result<[f64; 5]> {
    let (m, n, gamma) = (params.m, params.n, params.gamma);
    let ReducedState3D { u, v, w, q, p } = *state;
    if q <= 0.0 {
        return Err(Error::Domain(format!(
            "reduced density must be positive, got {q}"
        )));
    }
    if w == 0.0 {
        return Err(Error::Singular("axial reduced velocity vanished".into()));
    }
    let du = -((1.0 + m) * u * u + n * u * v) / w;
    let dv = -(m * u * v + (1.0 + n) * v * v) / w;

    let b1 = -(1.0 - m) * q * u - (1.0 - n) * q * v;
    let b2 = -q * (m * u * w + n * v * w);
    let (e5_w, e5_p, b3) = match form {
        EnergyForm::PressureWeighted => {
            (gamma * p, w, -gamma * p * ((m + 1.0) * u + (n + 1.0) * v))
        }
        EnergyForm::Literal => (gamma, w, -gamma * ((m + 1.0) * u + (n + 1.0) * v)),
    };
    // rows: [q*w, 1] [e5_w, e5_p] acting on (W', P')
    let det2 = q * w * e5_p - e5_w;
    let scale = (q * w * e5_p).abs() + e5_w.abs();
    if det2.abs() <= 1e-12 * scale.max(1e-300) {
        return Err(Error::Singular(
            "sonic degeneracy of the reduction: Q*W^2 = gamma*P".into(),
        ));
    }
    let dw = (e5_p * b2 - b3) / det2;
    let dp = (q * w * b3 - e5_w * b2) / det2;
    let dq = (b1 - q * dw) / w;
    Ok([du, dv, dw, dq, dp])
}

/// Change of variables (U, V, W) → (S, R, T, X, Y):
/// S = U^{1/σ}, R = V^{1/σ}, T = R^{m+1}S^{n+1}/W, X = S^m R^{−m−1},
/// Y = R^n S^{−n−1}, with σ = 1 + m + n.
pub fn to_aux(state: &ReducedState3D, m: f64, n: f64) -> Result<AuxVars> {
    let sigma = 1.0 + m + n;
    if sigma.abs() < 1e-12 {
        return Err(Error::Domain(
            "m + n + 1 = 0: change of variables degenerate".into(),
        ));
    }
    let ReducedState3D { u, v, w, .. } = *state;
    if u <= 0.0 || v <= 0.0 {
        return Err(Error::Domain(format!(
            "change of variables needs positive transverse profiles, got U = {u}, V = {v}"
        )));
    }
    if w == 0.0 {
        return Err(Error::Singular("axial reduced velocity vanished".into()));
    }
    let ln_s = u.ln() / sigma;
    let ln_r = v.ln() / sigma;
    let s = ln_s.exp();
    let r = ln_r.exp();
    let t = ((m + 1.0) * ln_r + (n + 1.0) * ln_s).exp() / w;
    let x = (m * ln_s - (m + 1.0) * ln_r).exp();
    let y = (n * ln_r - (n + 1.0) * ln_s).exp();
    Ok(AuxVars { s, r, t, x, y })
}

/// Inverse change of variables: recover (U, V, W) from (X, Y, T) by solving
/// the log-linear system with determinant −(m + n + 1).
pub fn from_aux(aux: &AuxVars, m: f64, n: f64) -> Result<(f64, f64, f64)> {
    let sigma = 1.0 + m + n;
    if sigma.abs() < 1e-12 {
        return Err(Error::Domain(
            "m + n + 1 = 0: reconstruction degenerate".into(),
        ));
    }
    if aux.x <= 0.0 || aux.y <= 0.0 {
        return Err(Error::Domain(format!(
            "reconstruction needs positive (X, Y), got ({}, {})",
            aux.x, aux.y
        )));
    }
    if aux.t == 0.0 || !aux.t.is_finite() {
        return Err(Error::Domain(format!("invalid T = {}", aux.t)));
    }
    let ln_x = aux.x.ln();
    let ln_y = aux.y.ln();
    let ln_s = -(n * ln_x + (m + 1.0) * ln_y) / sigma;
    let ln_r = -((n + 1.0) * ln_x + m * ln_y) / sigma;
    let u = (sigma * ln_s).exp();
    let v = (sigma * ln_r).exp();
    let w = ((m + 1.0) * ln_r + (n + 1.0) * ln_s).exp() / aux.t;
    Ok((u, v, w))
}

/// The three conserved quantities, computed from one reduced state.
pub fn first_integrals_3d(
    params: &ThreeDParams,
    state: &ReducedState3D,
) -> Result<(f64, f64, f64)> {
    let (m, n, gamma) = (params.m, params.n, params.gamma);
    let aux = to_aux(state, m, n)?;
    let (s, r, t) = (aux.s, aux.r, aux.t);
    let c1 =
        state.q * state.w * checked_pow(r, 2.0 * n - 1.0 - m)? * checked_pow(s, 2.0 * m - 1.0 - n)?;
    let t_inv = state.w * checked_pow(s, -(1.0 + n))? * checked_pow(r, -(1.0 + m))?;
    let c2 = state.p * checked_pow(t_inv, gamma)?;
    if c1 == 0.0 {
        return Err(Error::Domain("degenerate state: c1 = 0".into()));
    }
    let c3 = state.w * state.w * checked_pow(r, -2.0 * n)? * checked_pow(s, -2.0 * m)?
        + 2.0 * c2 * gamma / (c1 * (gamma - 1.0)) * checked_pow(t, gamma - 1.0)?;
    Ok((c1, c2, c3))
}

/// Residual of the scalar profile equation
/// 1/(2X′²) + a·(X′/(X(X+c4)))^{γ−1} − c3, with a the integral coupling.
pub fn x_equation_residual(params: &ThreeDParams, x: f64, xp: f64) -> Result<f64> {
    if x <= 0.0 || x + params.c4 <= 0.0 {
        return Err(Error::Domain(format!(
            "profile requires X > 0 and X + c4 > 0, got X = {x}"
        )));
    }
    if xp == 0.0 {
        return Err(Error::Domain("zero profile slope".into()));
    }
    let a = params.coupling();
    let t = xp / (x * (x + params.c4));
    Ok(1.0 / (2.0 * xp * xp) + a * checked_pow(t, params.gamma - 1.0)? - params.c3)
}

fn branch_sign(branch: XBranch) -> f64 {
    match branch {
        XBranch::Decaying => -1.0,
        XBranch::Growing => 1.0,
    }
}

/// Slope X′ solving the scalar profile equation at X.
///
/// With c3 = 0 the slope is in closed form: ∓A·√(X(X+c4)) for γ = 3 and
/// ∓A·X^{2(γ−1)/(γ+1)} otherwise, A = (2|a|)^{−1/(γ+1)}. For c3 ≠ 0 the
/// slope is the bracketed real root of the algebraic equation on the
/// requested sign branch (decaying by default in callers; the growing
/// branch is the only real one for non-integer γ when the coupling is
/// negative). Every returned slope is validated by substituting back.
pub fn x_equation_rhs(params: &ThreeDParams, x: f64, branch: XBranch) -> Result<f64> {
    if x <= 0.0 || x + params.c4 <= 0.0 {
        return Err(Error::Domain(format!(
            "profile requires X > 0 and X + c4 > 0, got X = {x}"
        )));
    }
    let sign = branch_sign(branch);
    if params.c3 == 0.0 {
        let a_mag = params.rate_magnitude()?;
        let xp = if params.gamma == 3.0 {
            sign * a_mag * (x * (x + params.c4)).sqrt()
        } else {
            sign * a_mag * checked_pow(x, 2.0 * (params.gamma - 1.0) / (params.gamma + 1.0))?
        };
        let res = x_equation_residual(params, x, xp)?;
        let scale = 1.0 / (2.0 * xp * xp) + params.c3.abs();
        if res.abs() > 1e-9 * scale.max(1.0) {
            return Err(Error::Root(format!(
                "no real slope on the requested branch: residual {res}"
            )));
        }
        return Ok(xp);
    }
    // c3 != 0: solve the algebraic equation for the slope magnitude.
    let f = |s: f64| x_equation_residual(params, x, sign * s);
    let s = positive_root_expanding(f, 1.0)?;
    let xp = sign * s;
    let res = x_equation_residual(params, x, xp)?;
    if res.abs() > 1e-10 * (1.0 + params.c3.abs()) {
        return Err(Error::Root(format!(
            "slope root did not converge: residual {res}"
        )));
    }
    Ok(xp)
}

/// Closed-form profile X(z) for c3 = 0.
///
/// γ = 3: X = (2e^s − c4)²/(8e^s) with s = b ∓ A·z (decaying/growing).
/// γ ≠ 3 (requires c4 = 0): X = (Ã(γ−3)(z+b)/(γ+1))^{−(γ+1)/(γ−3)} with
/// Ã = ∓A; only the growing branch keeps every downstream power real.
pub fn closed_form_x(params: &ThreeDParams, z: f64, branch: XBranch) -> Result<f64> {
    if params.c3 != 0.0 {
        return Err(Error::Domain("closed-form profile requires c3 = 0".into()));
    }
    let a_mag = params.rate_magnitude()?;
    let sign = branch_sign(branch);
    if params.gamma == 3.0 {
        let s = params.b + sign * a_mag * z;
        let es = s.exp();
        let num = 2.0 * es - params.c4;
        if num == 0.0 {
            return Err(Error::Domain(format!("profile vanishes at z = {z}")));
        }
        return Ok(num * num / (8.0 * es));
    }
    if params.c4 != 0.0 {
        return Err(Error::Domain(
            "the power-law profile requires c4 = 0; only γ = 3 admits a shift".into(),
        ));
    }
    let a_eff = -sign * a_mag;
    let gamma = params.gamma;
    let base = a_eff * (gamma - 3.0) * (z + params.b) / (gamma + 1.0);
    if base <= 0.0 {
        return Err(Error::Domain(format!(
            "profile base must be positive, got {base} at z = {z}"
        )));
    }
    Ok(base.powf(-(gamma + 1.0) / (gamma - 3.0)))
}

/// Analytic z-derivative of [`closed_form_x`].
pub fn closed_form_x_derivative(params: &ThreeDParams, z: f64, branch: XBranch) -> Result<f64> {
    let a_mag = params.rate_magnitude()?;
    let sign = branch_sign(branch);
    if params.gamma == 3.0 {
        let s = params.b + sign * a_mag * z;
        let es = s.exp();
        return Ok(sign * a_mag * (4.0 * es * es - params.c4 * params.c4) / (8.0 * es));
    }
    let x = closed_form_x(params, z, branch)?;
    let a_eff = -sign * a_mag;
    Ok(-a_eff * checked_pow(x, 2.0 * (params.gamma - 1.0) / (params.gamma + 1.0))?)
}

fn reconstruct_branch(gamma: f64) -> XBranch {
    if gamma == 3.0 {
        XBranch::Decaying
    } else {
        XBranch::Growing
    }
}

/// Full reduced state on the closed-form branch (c3 = 0): the profile X
/// determines the auxiliary variables, the inverse change of variables
/// gives (U, V, W), and the two leading integrals pin Q and P.
pub fn reconstruct_3d(params: &ThreeDParams, z: f64) -> Result<ReducedState3D> {
    if params.c3 != 0.0 {
        return Err(Error::Domain("reconstruction requires c3 = 0".into()));
    }
    if !(params.coupling() < 0.0) {
        return Err(Error::Domain(
            "reconstruction requires integral constants of opposite signs".into(),
        ));
    }
    let branch = reconstruct_branch(params.gamma);
    let x = closed_form_x(params, z, branch)?;
    let xp = closed_form_x_derivative(params, z, branch)?;
    let y = x + params.c4;
    if x <= 0.0 || y <= 0.0 {
        return Err(Error::Domain(format!(
            "profile left the admissible region at z = {z}: X = {x}, Y = {y}"
        )));
    }
    let t = xp / (x * y);
    if t == 0.0 || !t.is_finite() {
        return Err(Error::Singular(format!("degenerate T = {t} at z = {z}")));
    }
    let aux = AuxVars {
        s: 0.0,
        r: 0.0,
        t,
        x,
        y,
    };
    let (u, v, w) = from_aux(&aux, params.m, params.n)?;
    let sigma = params.sigma();
    let ln_s = u.ln() / sigma;
    let ln_r = v.ln() / sigma;
    let q = params.c1 * t * (-2.0 * params.n * ln_r - 2.0 * params.m * ln_s).exp();
    let p = params.c2 * checked_pow(t, params.gamma)?;
    ReducedState3D::new(u, v, w, q, p)
}

/// Parametric streamline family of the closed-form flow:
/// x = a1·e^t, y = a2·e^t, z = a3·e^{t(3−γ)/(γ+1)}.
///
/// For γ = 3 the exponent vanishes and the streamlines lie in planes
/// z = const.
pub fn streamlines_3d_parametric(gamma: f64, a1: f64, a2: f64, a3: f64, ts: &[f64]) -> Vec<Point3> {
    let expo = (3.0 - gamma) / (gamma + 1.0);
    ts.iter()
        .map(|&t| Point3::new(a1 * t.exp(), a2 * t.exp(), a3 * (expo * t).exp()))
        .collect()
}

type Reduced3DFn = Arc<dyn Fn(f64) -> Result<ReducedState3D> + Send + Sync>;

/// Physical field assembled from a reduced trajectory.
#[derive(Clone)]
pub struct ThreeDField {
    params: ThreeDParams,
    reduced: Reduced3DFn,
}

impl ThreeDField {
    /// Field over the closed-form reconstruction.
    pub fn closed_form(params: ThreeDParams) -> Result<Self> {
        // Probe once so misconfigured parameters fail at construction.
        if params.gamma == 3.0 {
            reconstruct_3d(&params, 0.0)?;
        }
        Ok(Self {
            params,
            reduced: Arc::new(move |z| reconstruct_3d(&params, z)),
        })
    }

    /// Field over an arbitrary reduced-state provider.
    pub fn with_reduced(
        params: ThreeDParams,
        reduced: impl Fn(f64) -> Result<ReducedState3D> + Send + Sync + 'static,
    ) -> Self {
        Self {
            params,
            reduced: Arc::new(reduced),
        }
    }

    pub fn params(&self) -> &ThreeDParams {
        &self.params
    }

    pub fn state(&self, pt: Point3) -> Result<FlowState> {
        let (m, n) = (self.params.m, self.params.n);
        let red = (self.reduced)(pt.z)?;
        let u = checked_pow(pt.x, m + 1.0)? * checked_pow(pt.y, n)? * red.u;
        let v = checked_pow(pt.x, m)? * checked_pow(pt.y, n + 1.0)? * red.v;
        let w = checked_pow(pt.x, m)? * checked_pow(pt.y, n)? * red.w;
        let rho = checked_pow(pt.x, -2.0 * m)? * checked_pow(pt.y, -2.0 * n)? * red.q;
        FlowState::new(u, v, w, rho, red.p)
    }
}
