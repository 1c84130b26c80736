//! Flow-state primitives: velocity, density, pressure, the two gas laws
//! used by the solution families, and the pointwise scalar invariants
//! (entropy and Bernoulli) that are conserved along streamlines of
//! stationary adiabatic flow.
//!
//! Everything here is nondimensional. Finiteness is checked at
//! construction, not on access: verifiers evaluate these by the million.

use crate::error::{Error, Result};

/// A point in space. Plain data; samplers validate coordinates where needed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Local flow state: velocity components, density, and pressure.
///
/// Density must be positive and all components finite; pressure may be
/// negative (several exact families have p < 0 while still solving the
/// governing equations).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowState {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub rho: f64,
    pub p: f64,
}

impl FlowState {
    pub fn new(u: f64, v: f64, w: f64, rho: f64, p: f64) -> Result<Self> {
        for (val, name) in [(u, "u"), (v, "v"), (w, "w"), (rho, "rho"), (p, "p")] {
            if !val.is_finite() {
                return Err(Error::NonFinite(format!("flow state component {name}")));
            }
        }
        if rho <= 0.0 {
            return Err(Error::Domain(format!(
                "density must be positive, got {rho}"
            )));
        }
        Ok(Self { u, v, w, rho, p })
    }

    /// Squared flow speed u² + v² + w².
    pub fn speed_squared(&self) -> f64 {
        self.u * self.u + self.v * self.v + self.w * self.w
    }
}

/// Equation of state. Exactly the two laws the solution families need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GasLaw {
    /// p ∝ ρ^γ at constant entropy; γ is the adiabatic index.
    Polytropic { gamma: f64 },
    /// p = −a/ρ + b. Arises when the flow is everywhere sonic with constant
    /// entropy and Bernoulli integral.
    Chaplygin { a: f64, b: f64 },
}

impl GasLaw {
    /// γ = 1 is rejected: the (γ−1) denominators of the flow invariants
    /// blow up, and isothermal flow is out of scope.
    pub fn polytropic(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 1.0 {
            return Err(Error::Domain(format!(
                "polytropic index must be finite and > 1, got {gamma}"
            )));
        }
        Ok(GasLaw::Polytropic { gamma })
    }

    pub fn chaplygin(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || a <= 0.0 {
            return Err(Error::Domain(format!(
                "Chaplygin constant must be finite and > 0, got {a}"
            )));
        }
        if !b.is_finite() {
            return Err(Error::NonFinite("Chaplygin pressure offset".into()));
        }
        Ok(GasLaw::Chaplygin { a, b })
    }
}

/// Squared local sound speed: γp/ρ for a polytropic gas, a/ρ² for a
/// Chaplygin gas.
pub fn sound_speed_squared(law: &GasLaw, state: &FlowState) -> Result<f64> {
    let c2 = match *law {
        GasLaw::Polytropic { gamma } => gamma * state.p / state.rho,
        GasLaw::Chaplygin { a, .. } => a / (state.rho * state.rho),
    };
    if !c2.is_finite() {
        return Err(Error::NonFinite("sound speed".into()));
    }
    Ok(c2)
}

/// Entropy invariant p/ρ^γ, constant along streamlines of adiabatic flow.
pub fn entropy_invariant(gamma: f64, state: &FlowState) -> Result<f64> {
    if !gamma.is_finite() {
        return Err(Error::NonFinite("adiabatic index".into()));
    }
    let value = state.p / state.rho.powf(gamma);
    if !value.is_finite() {
        return Err(Error::NonFinite("entropy invariant".into()));
    }
    Ok(value)
}

/// Bernoulli invariant: kinetic energy per unit mass plus enthalpy,
/// (u²+v²+w²)/2 + γp/((γ−1)ρ).
pub fn bernoulli_invariant(gamma: f64, state: &FlowState) -> Result<f64> {
    if !gamma.is_finite() {
        return Err(Error::NonFinite("adiabatic index".into()));
    }
    if gamma == 1.0 {
        return Err(Error::Domain(
            "Bernoulli invariant undefined for adiabatic index 1".into(),
        ));
    }
    let value = 0.5 * state.speed_squared() + gamma * state.p / ((gamma - 1.0) * state.rho);
    if !value.is_finite() {
        return Err(Error::NonFinite("Bernoulli invariant".into()));
    }
    Ok(value)
}
