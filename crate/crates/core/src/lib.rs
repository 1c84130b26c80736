//! Exact stationary solutions of the inviscid compressible flow equations,
//! together with the machinery needed to trust them: generic explicit
//! integrators for the reduced systems, first-integral drift monitors,
//! finite-difference residual verification against the full governing
//! equations, and streamline tracing for cross-checks against closed-form
//! streamline formulas.
//!
//! The solution families are
//! - potential flows of a Chaplygin gas (flow speed equals sound speed
//!   everywhere), given implicitly by plane families or explicitly by a
//!   smooth function of a ratio of linear forms ([`chaplygin`]);
//! - axisymmetric power-law-invariant flows, in two branches depending on
//!   which pressure derivative vanishes ([`axisym`]);
//! - fully three-dimensional power-law-invariant flows ([`threed`]).

// Negated comparisons like `!(h > 0.0)` are kept as written: unlike
// `h <= 0.0`, they also reject NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axisym;
pub mod chaplygin;
pub mod error;
pub mod flow;
pub mod odeint;
pub mod poly;
pub mod rootfind;
pub mod streamtrace;
pub mod threed;
pub mod verify;

pub(crate) mod util;

pub use error::{Error, Result};
pub use flow::{bernoulli_invariant, entropy_invariant, sound_speed_squared};
pub use flow::{FlowState, GasLaw, Point3};
