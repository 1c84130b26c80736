//! Potential flows of a Chaplygin gas.
//!
//! When the flow speed equals the local sound speed everywhere and both the
//! entropy and the Bernoulli integral are constant, the gas obeys
//! p = −a/ρ + b and the velocity potential φ satisfies a quasilinear
//! second-order equation whose characteristic surfaces are the planes
//! φ = const. Solutions come in an implicit family
//!
//! ```text
//! a(φ)·x + b(φ)·y + c(φ)·z + d(φ) = 0
//! ```
//!
//! with arbitrary smooth coefficient functions, and in an explicit smooth
//! form φ = f((k₁x + k₂y + k₃z + k₄)/(n₁x + n₂y + n₃z + n₄)).
//!
//! This module evaluates members of both families, converts potentials to
//! physical flow states, and measures the potential-equation and
//! characteristic-equation residuals by second-order central differences.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::flow::{FlowState, GasLaw, Point3};
use crate::poly::Polynomial;
use crate::rootfind::bracketed_root;

/// Scalar function of one variable with an optional analytic derivative.
#[derive(Clone)]
pub struct ScalarFn {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    df: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
}

impl ScalarFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            df: None,
        }
    }

    pub fn with_derivative(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            f: Arc::new(f),
            df: Some(Arc::new(df)),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::with_derivative(move |_| c, |_| 0.0)
    }

    /// Polynomials carry their analytic derivative.
    pub fn from_poly(p: &Polynomial) -> Self {
        let dp = p.derivative();
        let p = p.clone();
        Self {
            f: Arc::new(move |x| p.eval(x)),
            df: Some(Arc::new(move |x| dp.eval(x))),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn derivative(&self, x: f64) -> Option<f64> {
        self.df.as_ref().map(|d| d(x))
    }

    pub fn has_derivative(&self) -> bool {
        self.df.is_some()
    }
}

/// Implicit plane family a(φ)x + b(φ)y + c(φ)z + d(φ) = 0.
///
/// At every evaluated φ the normal (a, b, c) must be nonzero, otherwise the
/// defining relation degenerates.
#[derive(Clone)]
pub struct ChaplyginFamily {
    pub coeff_a: ScalarFn,
    pub coeff_b: ScalarFn,
    pub coeff_c: ScalarFn,
    pub coeff_d: ScalarFn,
}

impl ChaplyginFamily {
    pub fn new(coeff_a: ScalarFn, coeff_b: ScalarFn, coeff_c: ScalarFn, coeff_d: ScalarFn) -> Self {
        Self {
            coeff_a,
            coeff_b,
            coeff_c,
            coeff_d,
        }
    }

    pub fn from_polys(a: &Polynomial, b: &Polynomial, c: &Polynomial, d: &Polynomial) -> Self {
        Self::new(
            ScalarFn::from_poly(a),
            ScalarFn::from_poly(b),
            ScalarFn::from_poly(c),
            ScalarFn::from_poly(d),
        )
    }

    /// The defining relation g(φ) = a(φ)x + b(φ)y + c(φ)z + d(φ).
    pub fn relation(&self, phi: f64, pt: Point3) -> Result<f64> {
        let (a, b, c, d) = self.coefficients(phi)?;
        Ok(a * pt.x + b * pt.y + c * pt.z + d)
    }

    fn coefficients(&self, phi: f64) -> Result<(f64, f64, f64, f64)> {
        let a = self.coeff_a.eval(phi);
        let b = self.coeff_b.eval(phi);
        let c = self.coeff_c.eval(phi);
        let d = self.coeff_d.eval(phi);
        if !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite plane coefficients at phi = {phi}"
            )));
        }
        if a == 0.0 && b == 0.0 && c == 0.0 {
            return Err(Error::Domain(format!(
                "degenerate plane family: zero normal at phi = {phi}"
            )));
        }
        Ok((a, b, c, d))
    }

    /// d/dφ of the defining relation, available when all four coefficient
    /// functions carry analytic derivatives.
    fn relation_derivative(&self, phi: f64, pt: Point3) -> Option<f64> {
        let da = self.coeff_a.derivative(phi)?;
        let db = self.coeff_b.derivative(phi)?;
        let dc = self.coeff_c.derivative(phi)?;
        let dd = self.coeff_d.derivative(phi)?;
        Some(da * pt.x + db * pt.y + dc * pt.z + dd)
    }

    pub fn has_derivatives(&self) -> bool {
        self.coeff_a.has_derivative()
            && self.coeff_b.has_derivative()
            && self.coeff_c.has_derivative()
            && self.coeff_d.has_derivative()
    }
}

/// Solve the implicit relation for φ at one point, given a bracket on which
/// the relation changes sign. Deterministic bisection–secant hybrid.
pub fn solve_potential_implicit(
    family: &ChaplyginFamily,
    pt: Point3,
    bracket: (f64, f64),
) -> Result<f64> {
    bracketed_root(|phi| family.relation(phi, pt), bracket.0, bracket.1)
}

/// Smooth potential φ = f((k₁x + k₂y + k₃z + k₄)/(n₁x + n₂y + n₃z + n₄)).
#[derive(Clone)]
pub struct RationalPotential {
    pub k: [f64; 4],
    pub n: [f64; 4],
    pub f: ScalarFn,
}

impl RationalPotential {
    pub fn new(k: [f64; 4], n: [f64; 4], f: ScalarFn) -> Result<Self> {
        if n.iter().all(|&c| c == 0.0) {
            return Err(Error::Domain(
                "rational potential denominator is identically zero".into(),
            ));
        }
        if !(k.iter().all(|c| c.is_finite()) && n.iter().all(|c| c.is_finite())) {
            return Err(Error::NonFinite("rational potential coefficients".into()));
        }
        Ok(Self { k, n, f })
    }

    fn linear_forms(&self, pt: Point3) -> (f64, f64) {
        let num = self.k[0] * pt.x + self.k[1] * pt.y + self.k[2] * pt.z + self.k[3];
        let den = self.n[0] * pt.x + self.n[1] * pt.y + self.n[2] * pt.z + self.n[3];
        (num, den)
    }
}

/// Evaluate a rational potential. Points on the plane where the denominator
/// vanishes are singular.
pub fn rational_potential_value(rp: &RationalPotential, pt: Point3) -> Result<f64> {
    let (num, den) = rp.linear_forms(pt);
    if den == 0.0 {
        return Err(Error::Singular(format!(
            "rational potential denominator vanishes at ({}, {}, {})",
            pt.x, pt.y, pt.z
        )));
    }
    let value = rp.f.eval(num / den);
    if !value.is_finite() {
        return Err(Error::NonFinite("rational potential value".into()));
    }
    Ok(value)
}

type ValueFn = Arc<dyn Fn(Point3) -> Result<f64> + Send + Sync>;
type GradFn = Arc<dyn Fn(Point3) -> Result<[f64; 3]> + Send + Sync>;

/// Point sampler for a scalar potential, with an optional analytic gradient.
#[derive(Clone)]
pub struct PotentialSampler {
    value: ValueFn,
    grad: Option<GradFn>,
}

impl PotentialSampler {
    pub fn from_fn(f: impl Fn(Point3) -> Result<f64> + Send + Sync + 'static) -> Self {
        Self {
            value: Arc::new(f),
            grad: None,
        }
    }

    pub fn from_fn_with_gradient(
        f: impl Fn(Point3) -> Result<f64> + Send + Sync + 'static,
        g: impl Fn(Point3) -> Result<[f64; 3]> + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(f),
            grad: Some(Arc::new(g)),
        }
    }

    /// Sampler backed by the implicit plane family. When every coefficient
    /// function carries an analytic derivative, the gradient is computed by
    /// implicit differentiation: ∇φ = −(a, b, c)/g_φ at the solved φ.
    pub fn implicit(family: ChaplyginFamily, bracket: (f64, f64)) -> Self {
        let value_family = family.clone();
        let value: ValueFn =
            Arc::new(move |pt| solve_potential_implicit(&value_family, pt, bracket));
        let grad: Option<GradFn> = if family.has_derivatives() {
            Some(Arc::new(move |pt| {
                let phi = solve_potential_implicit(&family, pt, bracket)?;
                let (a, b, c, _) = family.coefficients(phi)?;
                let gphi = family
                    .relation_derivative(phi, pt)
                    .expect("derivatives checked at construction");
                if gphi == 0.0 || !gphi.is_finite() {
                    return Err(Error::Singular(format!(
                        "implicit family not differentiable at phi = {phi}: g_phi = {gphi}"
                    )));
                }
                Ok([-a / gphi, -b / gphi, -c / gphi])
            }))
        } else {
            None
        };
        Self { value, grad }
    }

    /// Sampler backed by a rational potential; analytic gradient when f has
    /// an analytic derivative.
    pub fn rational(rp: RationalPotential) -> Self {
        let value_rp = rp.clone();
        let value: ValueFn = Arc::new(move |pt| rational_potential_value(&value_rp, pt));
        let grad: Option<GradFn> = if rp.f.has_derivative() {
            Some(Arc::new(move |pt| {
                let (num, den) = rp.linear_forms(pt);
                if den == 0.0 {
                    return Err(Error::Singular("denominator vanishes".into()));
                }
                let s = num / den;
                let fp = rp.f.derivative(s).expect("derivative checked");
                let den2 = den * den;
                let mut g = [0.0; 3];
                for (gi, (ki, ni)) in g.iter_mut().zip(rp.k.iter().zip(&rp.n)) {
                    *gi = fp * (ki * den - num * ni) / den2;
                }
                Ok(g)
            }))
        } else {
            None
        };
        Self { value, grad }
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.grad.is_some()
    }

    pub fn value(&self, pt: Point3) -> Result<f64> {
        (self.value)(pt)
    }

    fn analytic_gradient(&self, pt: Point3) -> Option<Result<[f64; 3]>> {
        self.grad.as_ref().map(|g| g(pt))
    }
}

fn stencil_value(sampler: &PotentialSampler, pt: Point3) -> Result<f64> {
    sampler
        .value(pt)
        .map_err(|e| Error::Stencil(format!("sampling at ({}, {}, {}): {e}", pt.x, pt.y, pt.z)))
}

/// Gradient of the potential: analytic when the sampler carries one,
/// otherwise second-order central differences with spacing h.
pub fn gradient(sampler: &PotentialSampler, pt: Point3, h: f64) -> Result<[f64; 3]> {
    if let Some(g) = sampler.analytic_gradient(pt) {
        return g;
    }
    if !(h > 0.0) {
        return Err(Error::Domain(format!(
            "stencil spacing must be > 0, got {h}"
        )));
    }
    let q = |x, y, z| stencil_value(sampler, Point3::new(x, y, z));
    let (x, y, z) = (pt.x, pt.y, pt.z);
    Ok([
        (q(x + h, y, z)? - q(x - h, y, z)?) / (2.0 * h),
        (q(x, y + h, z)? - q(x, y - h, z)?) / (2.0 * h),
        (q(x, y, z + h)? - q(x, y, z - h)?) / (2.0 * h),
    ])
}

/// Physical state of a Chaplygin-gas potential flow from the potential
/// gradient: velocity = ∇φ, ρ = √a/|∇φ|, p = −a/ρ + b.
///
/// The flow speed then equals the local sound speed identically, so the
/// sonic condition holds pointwise by construction.
pub fn chaplygin_state(grad_phi: [f64; 3], law: &GasLaw) -> Result<FlowState> {
    let GasLaw::Chaplygin { a, b } = *law else {
        return Err(Error::Domain(
            "chaplygin_state requires a Chaplygin gas law".into(),
        ));
    };
    let speed2 = grad_phi.iter().map(|g| g * g).sum::<f64>();
    if speed2 == 0.0 {
        return Err(Error::Stagnation);
    }
    if !speed2.is_finite() {
        return Err(Error::NonFinite("potential gradient".into()));
    }
    let rho = a.sqrt() / speed2.sqrt();
    let p = -a / rho + b;
    FlowState::new(grad_phi[0], grad_phi[1], grad_phi[2], rho, p)
}

struct SecondOrderStencil {
    px: f64,
    py: f64,
    pz: f64,
    pxx: f64,
    pyy: f64,
    pzz: f64,
    pxy: f64,
    pxz: f64,
    pyz: f64,
}

fn second_order_stencil(
    sampler: &PotentialSampler,
    pt: Point3,
    h: f64,
) -> Result<SecondOrderStencil> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!(
            "stencil spacing must be > 0, got {h}"
        )));
    }
    let (x, y, z) = (pt.x, pt.y, pt.z);
    let q = |x, y, z| stencil_value(sampler, Point3::new(x, y, z));

    let c = q(x, y, z)?;
    let xp = q(x + h, y, z)?;
    let xm = q(x - h, y, z)?;
    let yp = q(x, y + h, z)?;
    let ym = q(x, y - h, z)?;
    let zp = q(x, y, z + h)?;
    let zm = q(x, y, z - h)?;

    let h2 = h * h;
    let cross = |pp: f64, pm: f64, mp: f64, mm: f64| (pp - pm - mp + mm) / (4.0 * h2);

    Ok(SecondOrderStencil {
        px: (xp - xm) / (2.0 * h),
        py: (yp - ym) / (2.0 * h),
        pz: (zp - zm) / (2.0 * h),
        pxx: (xp - 2.0 * c + xm) / h2,
        pyy: (yp - 2.0 * c + ym) / h2,
        pzz: (zp - 2.0 * c + zm) / h2,
        pxy: cross(
            q(x + h, y + h, z)?,
            q(x + h, y - h, z)?,
            q(x - h, y + h, z)?,
            q(x - h, y - h, z)?,
        ),
        pxz: cross(
            q(x + h, y, z + h)?,
            q(x + h, y, z - h)?,
            q(x - h, y, z + h)?,
            q(x - h, y, z - h)?,
        ),
        pyz: cross(
            q(x, y + h, z + h)?,
            q(x, y + h, z - h)?,
            q(x, y - h, z + h)?,
            q(x, y - h, z - h)?,
        ),
    })
}

fn residual_terms(s: &SecondOrderStencil) -> [f64; 6] {
    [
        (s.py * s.py + s.pz * s.pz) * s.pxx,
        (s.px * s.px + s.pz * s.pz) * s.pyy,
        (s.px * s.px + s.py * s.py) * s.pzz,
        2.0 * s.px * s.py * s.pxy,
        2.0 * s.px * s.pz * s.pxz,
        2.0 * s.py * s.pz * s.pyz,
    ]
}

/// Signed residual of the potential equation
///
/// ```text
/// (φ_y² + φ_z²)φ_xx + (φ_x² + φ_z²)φ_yy + (φ_x² + φ_y²)φ_zz
///   − 2(φ_xφ_yφ_xy + φ_xφ_zφ_xz + φ_yφ_zφ_yz) = 0
/// ```
///
/// evaluated with second-order central differences of spacing h. For exact
/// solutions the residual decays as O(h²).
pub fn potential_residual(sampler: &PotentialSampler, pt: Point3, h: f64) -> Result<f64> {
    let s = second_order_stencil(sampler, pt, h)?;
    let t = residual_terms(&s);
    Ok(t[0] + t[1] + t[2] - t[3] - t[4] - t[5])
}

/// Residual plus a scale-free variant: the raw residual divided by the
/// largest constituent term magnitude. Returns (raw, normalized).
pub fn potential_residual_normalized(
    sampler: &PotentialSampler,
    pt: Point3,
    h: f64,
) -> Result<(f64, f64)> {
    let s = second_order_stencil(sampler, pt, h)?;
    let t = residual_terms(&s);
    let raw = t[0] + t[1] + t[2] - t[3] - t[4] - t[5];
    let scale = t.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let normalized = if scale > 0.0 { raw.abs() / scale } else { 0.0 };
    Ok((raw, normalized))
}

/// Residual of the characteristic equation for a surface Φ relative to a
/// potential φ:
///
/// ```text
/// (φ_xΦ_y − φ_yΦ_x)² + (φ_xΦ_z − φ_zΦ_x)² + (φ_yΦ_z − φ_zΦ_y)²
/// ```
///
/// Nonnegative by construction; zero exactly when the gradients are
/// parallel, so Φ = φ always satisfies it.
pub fn characteristic_residual(
    phi: &PotentialSampler,
    cap_phi: &PotentialSampler,
    pt: Point3,
    h: f64,
) -> Result<f64> {
    let g = gradient(phi, pt, h)?;
    let cg = gradient(cap_phi, pt, h)?;
    let c1 = g[0] * cg[1] - g[1] * cg[0];
    let c2 = g[0] * cg[2] - g[2] * cg[0];
    let c3 = g[1] * cg[2] - g[2] * cg[1];
    Ok(c1 * c1 + c2 * c2 + c3 * c3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    fn linear_family() -> ChaplyginFamily {
        // phi*x + y - 1 = 0, i.e. phi = (1 - y)/x
        ChaplyginFamily::from_polys(
            &Polynomial::new(vec![0.0, 1.0]),
            &Polynomial::constant(1.0),
            &Polynomial::constant(0.0),
            &Polynomial::constant(-1.0),
        )
    }

    fn hyperbolic_sampler(analytic: bool) -> PotentialSampler {
        if analytic {
            PotentialSampler::from_fn_with_gradient(
                |pt| Ok((1.0 - pt.y) / pt.x),
                |pt| Ok([-(1.0 - pt.y) / (pt.x * pt.x), -1.0 / pt.x, 0.0]),
            )
        } else {
            PotentialSampler::from_fn(|pt| Ok((1.0 - pt.y) / pt.x))
        }
    }

    #[test]
    fn implicit_solve_linear_relation() {
        let phi =
            solve_potential_implicit(&linear_family(), Point3::new(2.0, 0.0, 0.0), (-1.0, 1.0))
                .unwrap();
        assert!((phi - 0.5).abs() < 1e-14);
    }

    #[test]
    fn implicit_solve_identity() {
        // x - phi = 0
        let fam = ChaplyginFamily::from_polys(
            &Polynomial::constant(1.0),
            &Polynomial::constant(0.0),
            &Polynomial::constant(0.0),
            &Polynomial::new(vec![0.0, -1.0]),
        );
        let phi = solve_potential_implicit(&fam, Point3::new(3.0, 7.0, -2.0), (0.0, 5.0)).unwrap();
        assert!((phi - 3.0).abs() < 1e-13);
    }

    #[test]
    fn implicit_solve_quadratic_coefficient() {
        // phi^2*x + y + 0*z + 0 = 0 at (1, 1, -2) ... relation phi^2 + 1 - 2;
        // the plane family (phi^2, 1, 1, 0) at (1, 1, -2): phi^2 + 1 - 2 = 0.
        let fam = ChaplyginFamily::from_polys(
            &Polynomial::new(vec![0.0, 0.0, 1.0]),
            &Polynomial::constant(1.0),
            &Polynomial::constant(1.0),
            &Polynomial::constant(0.0),
        );
        let pt = Point3::new(1.0, 1.0, -2.0);
        let phi = solve_potential_implicit(&fam, pt, (0.5, 2.0)).unwrap();
        assert!((phi - 1.0).abs() < 1e-13);
        // direct substitution oracle
        assert!(fam.relation(phi, pt).unwrap().abs() < 1e-12);
    }

    #[test]
    fn implicit_solve_requires_sign_change() {
        let fam = linear_family();
        assert!(matches!(
            solve_potential_implicit(&fam, Point3::new(2.0, 0.0, 0.0), (2.0, 3.0)),
            Err(Error::Bracket(_))
        ));
    }

    #[test]
    fn solve_residual_bound_holds() {
        let fam = linear_family();
        let pt = Point3::new(1.7, -0.4, 0.0);
        let phi = solve_potential_implicit(&fam, pt, (-1.0, 2.0)).unwrap();
        let g = fam.relation(phi, pt).unwrap();
        // |g| <= 1e-12 * (1 + |g'| * |bracket|)
        let gp = fam.relation_derivative(phi, pt).unwrap();
        assert!(g.abs() <= 1e-12 * (1.0 + gp.abs() * 3.0));
    }

    #[test]
    fn rational_examples() {
        let id = ScalarFn::from_poly(&Polynomial::new(vec![0.0, 1.0]));
        let rp =
            RationalPotential::new([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], id.clone()).unwrap();
        assert_eq!(
            rational_potential_value(&rp, Point3::new(3.0, 5.0, 7.0)).unwrap(),
            3.0
        );

        let rp = RationalPotential::new([0.0, -1.0, 0.0, 1.0], [1.0, 0.0, 0.0, 0.0], id).unwrap();
        assert_eq!(
            rational_potential_value(&rp, Point3::new(2.0, 0.0, 0.0)).unwrap(),
            0.5
        );

        let sq = ScalarFn::from_poly(&Polynomial::new(vec![0.0, 0.0, 1.0]));
        let rp = RationalPotential::new([1.0, 0.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], sq).unwrap();
        assert_eq!(
            rational_potential_value(&rp, Point3::new(1.0, 1.0, 0.0)).unwrap(),
            0.25
        );
    }

    #[test]
    fn rational_singular_plane() {
        let id = ScalarFn::from_poly(&Polynomial::new(vec![0.0, 1.0]));
        let rp = RationalPotential::new([1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], id).unwrap();
        assert!(matches!(
            rational_potential_value(&rp, Point3::new(0.0, 1.0, 0.0)),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn rational_agrees_with_implicit_family() {
        // (1 - y)/x both ways.
        let id = ScalarFn::from_poly(&Polynomial::new(vec![0.0, 1.0]));
        let rp = RationalPotential::new([0.0, -1.0, 0.0, 1.0], [1.0, 0.0, 0.0, 0.0], id).unwrap();
        let fam = linear_family();
        for &(x, y) in &[(2.0, 0.0), (1.3, 0.4), (0.8, -0.6)] {
            let pt = Point3::new(x, y, 0.3);
            let a = rational_potential_value(&rp, pt).unwrap();
            let b = solve_potential_implicit(&fam, pt, (-3.0, 3.0)).unwrap();
            assert!((a - b).abs() < 1e-12, "({x}, {y}): {a} vs {b}");
        }
    }

    #[test]
    fn gradient_of_plane_is_exact() {
        let s = PotentialSampler::from_fn(|pt| Ok(pt.x));
        let g = gradient(&s, Point3::new(0.3, 0.4, 0.5), 1e-4).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-10);
        assert_eq!(g[1], 0.0);
        assert_eq!(g[2], 0.0);

        let s = PotentialSampler::from_fn(|pt| Ok(pt.x + 2.0 * pt.y + 3.0 * pt.z));
        let g = gradient(&s, Point3::new(0.25, -0.5, 0.125), 1e-3).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-10);
        assert!((g[1] - 2.0).abs() < 1e-10);
        assert!((g[2] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn gradient_of_hyperbolic_potential() {
        let s = hyperbolic_sampler(false);
        let g = gradient(&s, Point3::new(2.0, 0.0, 0.0), 1e-4).unwrap();
        assert!((g[0] + 0.25).abs() < 1e-7);
        assert!((g[1] + 0.5).abs() < 1e-7);
        assert!(g[2].abs() < 1e-12);
    }

    #[test]
    fn analytic_gradient_taken_when_available() {
        let s = hyperbolic_sampler(true);
        assert!(s.has_analytic_gradient());
        let g = gradient(&s, Point3::new(2.0, 0.0, 0.0), 0.5).unwrap();
        assert_eq!(g, [-0.25, -0.5, 0.0]);
    }

    #[test]
    fn chaplygin_state_examples() {
        let law = GasLaw::chaplygin(1.0, 0.0).unwrap();
        let st = chaplygin_state([1.0, 0.0, 0.0], &law).unwrap();
        assert_eq!((st.u, st.v, st.w), (1.0, 0.0, 0.0));
        assert_eq!(st.rho, 1.0);
        assert_eq!(st.p, -1.0);

        let law = GasLaw::chaplygin(4.0, 2.0).unwrap();
        let st = chaplygin_state([0.0, 2.0, 0.0], &law).unwrap();
        assert_eq!(st.rho, 1.0);
        assert_eq!(st.p, -2.0);

        let law = GasLaw::chaplygin(1.0, 1.0).unwrap();
        let st = chaplygin_state([1.0, 1.0, 1.0], &law).unwrap();
        assert!((st.rho - 1.0 / 3.0f64.sqrt()).abs() < 1e-15);
        assert!((st.p - (1.0 - 3.0f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn stagnation_is_an_error() {
        let law = GasLaw::chaplygin(1.0, 0.0).unwrap();
        assert!(matches!(
            chaplygin_state([0.0, 0.0, 0.0], &law),
            Err(Error::Stagnation)
        ));
    }

    #[test]
    fn sonic_identity_holds_pointwise() {
        let law = GasLaw::chaplygin(2.5, 0.7).unwrap();
        for &g in &[[1.0, 0.0, 0.0], [0.3, -1.2, 0.5], [1e-3, 2e-3, -4.0]] {
            let st = chaplygin_state(g, &law).unwrap();
            let c2 = sound_speed_squared(&law, &st).unwrap();
            let q = st.speed_squared();
            assert!((q - c2).abs() <= 1e-12 * c2.abs());
        }
    }

    use crate::flow::sound_speed_squared;

    #[test]
    fn plane_potential_residual_vanishes() {
        let s = PotentialSampler::from_fn(|pt| Ok(0.7 * pt.x - 1.3 * pt.y + 0.2 * pt.z));
        let r = potential_residual(&s, Point3::new(0.4, -0.2, 0.9), 1e-3).unwrap();
        assert!(r.abs() < 1e-6, "linear potential residual {r}");
    }

    #[test]
    fn hyperbolic_residual_second_order() {
        let s = hyperbolic_sampler(false);
        let pt = Point3::new(2.0, 0.0, 0.0);
        let r1 = potential_residual(&s, pt, 1e-2).unwrap().abs();
        let r2 = potential_residual(&s, pt, 1e-3).unwrap().abs();
        let slope = (r1 / r2).log10();
        assert!((1.8..=2.2).contains(&slope), "observed order {slope}");
    }

    #[test]
    fn quadratic_negative_control() {
        // phi = x^2 + y^2 + z^2 is not a solution. Hand expansion with
        // phi_x = 2x etc. gives residual 48 at (1,1,1) and 16 at (1,0,0).
        let s = PotentialSampler::from_fn(|pt| Ok(pt.x * pt.x + pt.y * pt.y + pt.z * pt.z));
        let r = potential_residual(&s, Point3::new(1.0, 1.0, 1.0), 1e-3).unwrap();
        assert!((r - 48.0).abs() < 1e-6, "residual {r}");
        let r = potential_residual(&s, Point3::new(1.0, 0.0, 0.0), 1e-3).unwrap();
        assert!((r - 16.0).abs() < 1e-6, "residual {r}");
    }

    #[test]
    fn characteristic_residual_examples() {
        let phi = PotentialSampler::from_fn(|pt| Ok(pt.x));
        let cap = PotentialSampler::from_fn(|pt| Ok(pt.y));
        let r = characteristic_residual(&phi, &cap, Point3::new(0.0, 0.0, 0.0), 1e-4).unwrap();
        assert!((r - 1.0).abs() < 1e-10);

        let cap3 = PotentialSampler::from_fn(|pt| Ok(3.0 * pt.x));
        let r = characteristic_residual(&phi, &cap3, Point3::new(0.5, 0.5, 0.5), 1e-4).unwrap();
        assert!(r.abs() < 1e-12);

        // identity: cap_phi = phi for an arbitrary smooth sampler
        let s = hyperbolic_sampler(false);
        let r = characteristic_residual(&s, &s, Point3::new(1.5, 0.2, 0.0), 1e-4).unwrap();
        assert!(r.abs() < 1e-12);
    }

    #[test]
    fn level_set_constant_on_characteristic_plane() {
        // For a fixed phi0 the solution plane is a(phi0)x + b(phi0)y +
        // c(phi0)z + d(phi0) = 0; every point of it must solve back to phi0.
        let fam = ChaplyginFamily::from_polys(
            &Polynomial::new(vec![1.0, 0.5]),
            &Polynomial::new(vec![0.2, -0.3]),
            &Polynomial::constant(0.4),
            &Polynomial::new(vec![-1.0, 1.0, 0.25]),
        );
        let phi0 = 0.3;
        let (a, b, c, d) = fam.coefficients(phi0).unwrap();
        // Parameterize the plane through two in-plane directions.
        let normal = [a, b, c];
        let e1 = [-normal[1], normal[0], 0.0];
        let e2 = [
            normal[1] * e1[2] - normal[2] * e1[1],
            normal[2] * e1[0] - normal[0] * e1[2],
            normal[0] * e1[1] - normal[1] * e1[0],
        ];
        let n2 = normal.iter().map(|v| v * v).sum::<f64>();
        let base = [-d * a / n2, -d * b / n2, -d * c / n2];
        for &(s, t) in &[(0.0, 0.0), (0.1, -0.05), (-0.08, 0.12), (0.15, 0.1)] {
            let pt = Point3::new(
                base[0] + s * e1[0] + t * e2[0],
                base[1] + s * e1[1] + t * e2[1],
                base[2] + s * e1[2] + t * e2[2],
            );
            let solved = solve_potential_implicit(&fam, pt, (0.0, 0.6)).unwrap();
            assert!(
                (solved - phi0).abs() < 1e-11,
                "plane point ({}, {}, {}) gave {}",
                pt.x,
                pt.y,
                pt.z,
                solved
            );
        }
    }
}
