//! Build runtime solution families from configuration.

use gasdyn::axisym::{AxisymField, AxisymParams};
use gasdyn::chaplygin::{
    chaplygin_state, gradient, ChaplyginFamily, PotentialSampler, RationalPotential, ScalarFn,
};
use gasdyn::poly::Polynomial;
use gasdyn::threed::{ThreeDField, ThreeDParams};
use gasdyn::{FlowState, GasLaw, Point3, Result};

use crate::config::FamilyConfig;

/// Stencil spacing used when a potential sampler has no analytic gradient.
const GRADIENT_H: f64 = 1e-4;

pub enum Family {
    Chaplygin {
        sampler: PotentialSampler,
        law: GasLaw,
    },
    Axisym {
        params: AxisymParams,
        field: AxisymField,
    },
    Threed {
        params: ThreeDParams,
        field: ThreeDField,
    },
}

impl Family {
    pub fn build(cfg: &FamilyConfig) -> Result<Self> {
        match cfg {
            FamilyConfig::ChaplyginImplicit {
                coeff_a,
                coeff_b,
                coeff_c,
                coeff_d,
                bracket,
                gas_a,
                gas_b,
            } => {
                let fam = ChaplyginFamily::from_polys(
                    &Polynomial::new(coeff_a.clone()),
                    &Polynomial::new(coeff_b.clone()),
                    &Polynomial::new(coeff_c.clone()),
                    &Polynomial::new(coeff_d.clone()),
                );
                let sampler = PotentialSampler::implicit(fam, (bracket[0], bracket[1]));
                Ok(Family::Chaplygin {
                    sampler,
                    law: GasLaw::chaplygin(*gas_a, *gas_b)?,
                })
            }
            FamilyConfig::ChaplyginRational {
                k,
                n,
                f,
                gas_a,
                gas_b,
            } => {
                let rp = RationalPotential::new(
                    *k,
                    *n,
                    ScalarFn::from_poly(&Polynomial::new(f.clone())),
                )?;
                Ok(Family::Chaplygin {
                    sampler: PotentialSampler::rational(rp),
                    law: GasLaw::chaplygin(*gas_a, *gas_b)?,
                })
            }
            FamilyConfig::AxisymPz {
                m,
                gamma,
                c1,
                c2,
                a,
                b,
            } => {
                let params = match (a, c2) {
                    (Some(a), _) => {
                        AxisymParams::pz_closed_form_with_scale(*m, *gamma, *c1, *a, *b)?
                    }
                    (None, Some(c2)) => AxisymParams::pz_closed_form(*m, *gamma, *c1, *c2, *b)?,
                    (None, None) => {
                        return Err(gasdyn::Error::Domain(
                            "axisym-pz needs either the profile scale `a` or the constant `c2`"
                                .into(),
                        ))
                    }
                };
                let field = AxisymField::closed_form(params)?;
                Ok(Family::Axisym { params, field })
            }
            FamilyConfig::AxisymPr {
                m,
                gamma,
                c1,
                c2,
                b,
            } => {
                let params = AxisymParams::pr_closed_form(*m, *gamma, *c1, *c2, *b)?;
                let field = AxisymField::closed_form(params)?;
                Ok(Family::Axisym { params, field })
            }
            FamilyConfig::Threed {
                m,
                n,
                gamma,
                c1,
                c2,
                c4,
                b,
            } => {
                let params = ThreeDParams::new(*m, *n, *gamma, *c1, *c2, 0.0, *c4, *b)?;
                let field = ThreeDField::closed_form(params)?;
                Ok(Family::Threed { params, field })
            }
        }
    }

    /// Flow state at grid coordinates ((x, y, z), or (z, r) for the
    /// axisymmetric families).
    pub fn state_at(&self, coords: &[f64]) -> Result<FlowState> {
        match self {
            Family::Chaplygin { sampler, law } => {
                let pt = Point3::new(coords[0], coords[1], coords[2]);
                let g = gradient(sampler, pt, GRADIENT_H)?;
                chaplygin_state(g, law)
            }
            Family::Axisym { field, .. } => field.state(coords[0], coords[1]),
            Family::Threed { field, .. } => {
                field.state(Point3::new(coords[0], coords[1], coords[2]))
            }
        }
    }
}
