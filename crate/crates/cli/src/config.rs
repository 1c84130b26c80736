//! Run configuration: a single JSON document selecting a solution family,
//! a sampling grid, verification tolerances, and tracing options.
//!
//! Coefficient functions are specified as polynomial coefficient lists in
//! the potential (ascending order) so that runs are reproducible; arbitrary
//! callables remain available at the library level.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: FamilyConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub trace: TraceConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilyConfig {
    /// Implicit plane family a(φ)x + b(φ)y + c(φ)z + d(φ) = 0.
    ChaplyginImplicit {
        coeff_a: Vec<f64>,
        coeff_b: Vec<f64>,
        coeff_c: Vec<f64>,
        coeff_d: Vec<f64>,
        bracket: [f64; 2],
        #[serde(default = "default_gas_a")]
        gas_a: f64,
        #[serde(default)]
        gas_b: f64,
    },
    /// Smooth potential f((k·x + k4)/(n·x + n4)).
    ChaplyginRational {
        k: [f64; 4],
        n: [f64; 4],
        f: Vec<f64>,
        #[serde(default = "default_gas_a")]
        gas_a: f64,
        #[serde(default)]
        gas_b: f64,
    },
    /// Axisymmetric branch with pressure independent of z. The profile
    /// scale may be given (`a`) or derived from `c2` by a root solve.
    AxisymPz {
        m: f64,
        gamma: f64,
        c1: f64,
        #[serde(default)]
        c2: Option<f64>,
        #[serde(default)]
        a: Option<f64>,
        #[serde(default)]
        b: f64,
    },
    /// Axisymmetric branch with pressure independent of r.
    AxisymPr {
        m: f64,
        gamma: f64,
        c1: f64,
        c2: f64,
        b: f64,
    },
    /// Fully three-dimensional closed-form family.
    Threed {
        m: f64,
        n: f64,
        gamma: f64,
        c1: f64,
        c2: f64,
        #[serde(default)]
        c4: f64,
        #[serde(default)]
        b: f64,
    },
}

fn default_gas_a() -> f64 {
    1.0
}

impl FamilyConfig {
    pub fn kind_name(&self) -> &'static str {
        match self {
            FamilyConfig::ChaplyginImplicit { .. } => "chaplygin-implicit",
            FamilyConfig::ChaplyginRational { .. } => "chaplygin-rational",
            FamilyConfig::AxisymPz { .. } => "axisym-pz",
            FamilyConfig::AxisymPr { .. } => "axisym-pr",
            FamilyConfig::Threed { .. } => "threed",
        }
    }

    /// Spatial dimension of the sampling grid for this family.
    pub fn grid_dims(&self) -> usize {
        match self {
            FamilyConfig::AxisymPz { .. } | FamilyConfig::AxisymPr { .. } => 2,
            _ => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Lower corner, one entry per axis ((x, y, z), or (z, r) for the
    /// axisymmetric families).
    pub min: Vec<f64>,
    /// Upper corner.
    pub max: Vec<f64>,
    /// Points per axis; at least 2 everywhere.
    pub shape: Vec<usize>,
}

impl GridConfig {
    pub fn validate(&self, dims: usize) -> Result<(), String> {
        if self.min.len() != dims || self.max.len() != dims || self.shape.len() != dims {
            return Err(format!(
                "grid must have {dims} axes for this family, got min/max/shape of lengths {}/{}/{}",
                self.min.len(),
                self.max.len(),
                self.shape.len()
            ));
        }
        for i in 0..dims {
            if !(self.min[i].is_finite() && self.max[i].is_finite()) || self.min[i] >= self.max[i] {
                return Err(format!(
                    "grid axis {i} has an empty or non-finite range [{}, {}]",
                    self.min[i], self.max[i]
                ));
            }
            if self.shape[i] < 2 {
                return Err(format!(
                    "grid resolution must be at least 2 per axis, got {} on axis {i}",
                    self.shape[i]
                ));
            }
        }
        Ok(())
    }

    pub fn coordinate(&self, axis: usize, index: usize) -> f64 {
        let n = self.shape[axis];
        self.min[axis] + (self.max[axis] - self.min[axis]) * index as f64 / (n - 1) as f64
    }

    pub fn total_points(&self) -> usize {
        self.shape.iter().product()
    }

    /// Interior probe coordinates used by verification sweeps.
    pub fn probe_fractions(&self, fracs: &[f64]) -> Vec<Vec<f64>> {
        fracs
            .iter()
            .map(|&f| {
                (0..self.min.len())
                    .map(|ax| self.min[ax] + (self.max[ax] - self.min[ax]) * f)
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "default_h_seq")]
    pub h_seq: Vec<f64>,
    #[serde(default = "default_slope_range")]
    pub slope_range: [f64; 2],
    /// Scale-free residual bound at the middle spacing.
    #[serde(default = "default_normalized_tol")]
    pub normalized_tol: f64,
    /// Relative drift bound for first integrals under integration.
    #[serde(default = "default_drift_tol")]
    pub drift_tol: f64,
    /// Bound for matching a numerical trajectory against the closed form.
    #[serde(default = "default_match_tol")]
    pub match_tol: f64,
    /// Bound for traced streamlines against the closed-form formulas and
    /// for invariant drift along them.
    #[serde(default = "default_streamline_tol")]
    pub streamline_tol: f64,
    /// Bound for pointwise algebraic identities (reduced-system residuals,
    /// vanishing third integral, profile-equation residual).
    #[serde(default = "default_reduced_tol")]
    pub reduced_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            h_seq: default_h_seq(),
            slope_range: default_slope_range(),
            normalized_tol: default_normalized_tol(),
            drift_tol: default_drift_tol(),
            match_tol: default_match_tol(),
            streamline_tol: default_streamline_tol(),
            reduced_tol: default_reduced_tol(),
        }
    }
}

fn default_h_seq() -> Vec<f64> {
    vec![1e-2, 1e-3, 1e-4]
}

fn default_slope_range() -> [f64; 2] {
    [1.8, 2.2]
}

fn default_normalized_tol() -> f64 {
    1e-6
}

fn default_drift_tol() -> f64 {
    1e-8
}

fn default_match_tol() -> f64 {
    1e-8
}

fn default_streamline_tol() -> f64 {
    1e-6
}

fn default_reduced_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceConfig {
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_arclength")]
    pub arclength: bool,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            t_end: default_t_end(),
            step: default_step(),
            arclength: default_arclength(),
        }
    }
}

fn default_t_end() -> f64 {
    1.0
}

fn default_step() -> f64 {
    1e-3
}

fn default_arclength() -> bool {
    true
}
