//! Analytic extension of a maximal surface across a boundary arc whose image
//! lies in a plane met at constant angle.
//!
//! Let `R` be the anti-holomorphic reflection across the arc (`z ↦ z̄` for the
//! real diameter, `z ↦ ρ²/z̄` for the circle `|z| = ρ`) and `ê = conj ∘ e ∘ R`,
//! which is holomorphic. Along the arc `g` lies on a circle or line `L`
//! (fitted from boundary samples), so
//!
//! ```text
//! g_ext = reflect_L(ĝ)
//! ```
//!
//! continues `g`. One harmonic coordinate is constant on the arc and is
//! continued by odd reflection; its holomorphic derivative is then
//! reflected accordingly and `f` is recovered from it:
//!
//! | plane      | reflected datum | recovery of f              |
//! |------------|-----------------|----------------------------|
//! | spacelike  | x₃ (φ₃ = fg)    | f = φ₃ / g                 |
//! | timelike   | x₂ (φ₂)         | f = 2φ₂ / (i (1 − g²))     |
//! | lightlike  | x₁ − x₃         | f = 2(φ₁ − φ₃) / (1 − g)²  |
//!
//! Planes must already be in normal form: normal proportional to
//! `(0,0,1)`, `(0,1,0)` or `(1,0,1)`; the offset is free.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

use crate::expr::Expr;
pub use crate::fit::CircleOrLine;
use crate::fit::{extrapolate_to_zero, fit_circle_or_line};
use crate::minkowski::{CausalClass, LVector, Plane};
use crate::weierstrass::{
    evaluate_surface, gauss_map_from_g, Boundary, Domain, DomainKind, QuadratureConfig, Sheet, Surface, SurfaceError,
    WeierstrassData,
};

#[derive(Clone, Debug, PartialEq)]
pub enum ExtensionError {
    /// `c = 0`: the plane meets the surface orthogonally.
    OrthogonalContact {
        c: f64,
    },
    HypothesisViolation {
        reason: String,
    },
    GeometryMismatch {
        reason: String,
    },
    SingularReconstruction {
        at: Complex64,
        reason: String,
    },
    Surface(SurfaceError),
}

impl fmt::Display for ExtensionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionError::OrthogonalContact { c } => write!(
                f,
                "orthogonal contact (c = {c:e}): the constant-angle extension needs c != 0; \
                 this case is the symmetric reflection across the plane, which is not handled here"
            ),
            ExtensionError::HypothesisViolation { reason } => write!(f, "hypothesis violated: {reason}"),
            ExtensionError::GeometryMismatch { reason } => write!(f, "geometry mismatch: {reason}"),
            ExtensionError::SingularReconstruction { at, reason } => {
                write!(f, "singular reconstruction at {at}: {reason}")
            }
            ExtensionError::Surface(e) => write!(f, "{e}"),
        }
    }
}

impl From<SurfaceError> for ExtensionError {
    fn from(e: SurfaceError) -> Self {
        ExtensionError::Surface(e)
    }
}

/// Which coordinate (or combination) is continued by odd reflection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReflectedDatum {
    X3,
    X2,
    /// `ψ = x₁ − x₃`.
    Psi,
}

impl ReflectedDatum {
    pub fn name(self) -> &'static str {
        match self {
            ReflectedDatum::X3 => "x3",
            ReflectedDatum::X2 => "x2",
            ReflectedDatum::Psi => "x1-x3",
        }
    }

    /// Value of the datum at a surface point.
    pub fn of(self, x: LVector) -> f64 {
        match self {
            ReflectedDatum::X3 => x.x3,
            ReflectedDatum::X2 => x.x2,
            ReflectedDatum::Psi => x.x1 - x.x3,
        }
    }
}

/// Case parameters derived from the contact constant `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CaseParameters {
    /// `cosh θ = |c|`.
    Spacelike { theta: f64 },
    /// `c = 1/λ`.
    Timelike { lambda: f64 },
    /// `c = 1 + λ`.
    Lightlike { lambda: f64 },
    /// `|g| → 1` along the arc: the boundary is a conelike locus and `c` is unbounded.
    Conelike,
}

/// A plane moved to normal form: canonical normal and the matching offset.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalForm {
    pub class: CausalClass,
    pub normal: LVector,
    pub offset: f64,
}

/// Rescale the plane so its normal is exactly `(0,0,1)`, `(0,1,0)` or `(1,0,1)`.
pub fn normal_form(plane: &Plane) -> Result<NormalForm, ExtensionError> {
    let class = plane.class();
    let canonical = match class {
        CausalClass::Spacelike => LVector::new(0.0, 0.0, 1.0),
        CausalClass::Timelike => LVector::new(0.0, 1.0, 0.0),
        CausalClass::Lightlike => LVector::new(1.0, 0.0, 1.0),
    };
    let n = plane.normal();
    let k = n.euclid_dot(canonical) / canonical.euclid_dot(canonical);
    let off_axis = (n - canonical * k).euclid_norm();
    if k == 0.0 || off_axis > 1e-12 * n.euclid_norm() {
        return Err(ExtensionError::GeometryMismatch {
            reason: format!("{class} plane with normal {n} is not in normal form; expected a multiple of {canonical}"),
        });
    }
    Ok(NormalForm { class, normal: canonical, offset: plane.offset() / k })
}

/// Where the contact is sampled: arc parameters (`u` on the diameter, `θ` on
/// a circle) and the distances from the arc at which values are taken before
/// extrapolating to the arc.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySamples {
    pub params: Vec<f64>,
    pub heights: Vec<f64>,
}

impl BoundarySamples {
    pub fn default_for(domain: &Domain, boundary: Boundary) -> Self {
        let n = 17;
        let (inner, outer) = domain.kind().radii();
        let (lo, hi, scale) = match boundary {
            Boundary::RealSegment => {
                let r = 0.9 * outer;
                if inner > 0.0 {
                    // Half-annulus: sample the right-hand segment.
                    (inner + 0.05 * (outer - inner), outer - 0.05 * (outer - inner), outer - inner)
                } else {
                    (-r, r, outer)
                }
            }
            Boundary::Circle { radius } => {
                let width = if inner < radius { radius - inner } else { outer.min(4.0 * radius) - radius };
                if domain.kind().is_upper_half() {
                    (0.05 * PI, 0.95 * PI, width.min(radius))
                } else {
                    (-PI, PI * (1.0 - 2.0 / n as f64), width.min(radius))
                }
            }
        };
        let params = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
        let h0 = 0.04 * scale;
        let heights = (0..5).map(|k| h0 / f64::from(1u32 << k)).collect();
        BoundarySamples { params, heights }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactOptions {
    /// Maximum spread of the measured `c` relative to `1 + |c|`.
    pub angle_tol: f64,
    /// `|c|` below this is treated as orthogonal contact.
    pub orthogonal_tol: f64,
    /// Allowed discrepancy between the fitted and the closed-form locus.
    pub locus_tol: f64,
    /// `|1 − |g|²|` below this on the arc marks a conelike boundary.
    pub conelike_tol: f64,
    /// Plane containment must hold to this many quadrature tolerances.
    pub containment_factor: f64,
    /// Agreement of values and derivatives across the arc.
    pub matching_tol: f64,
    pub quadrature: QuadratureConfig,
}

impl Default for ContactOptions {
    fn default() -> Self {
        ContactOptions {
            angle_tol: 1e-6,
            orthogonal_tol: 1e-8,
            locus_tol: 1e-6,
            conelike_tol: 1e-6,
            containment_factor: 10.0,
            matching_tol: 1e-7,
            quadrature: QuadratureConfig::default(),
        }
    }
}

/// Result of probing the boundary: the contact constant, its spread, the
/// fitted locus of `g` along the arc and its closed-form counterpart.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactData {
    pub plane: Plane,
    pub normal_form: NormalForm,
    pub boundary: Boundary,
    /// Mean of `lim ⟨N, n⟩` over the samples (`n` in normal form).
    pub c: f64,
    pub deviation: f64,
    pub params: CaseParameters,
    pub fitted: CircleOrLine,
    pub fit_residual: f64,
    /// Locus implied by `c` for this plane class and sheet.
    pub expected: Option<CircleOrLine>,
    pub locus_discrepancy: f64,
    /// Radius the uncorrected spacelike formula would use, `coth(θ/2)`.
    pub printed_radius: Option<f64>,
    pub sheet: Sheet,
    /// Boundary values of `g`, extrapolated to the arc.
    pub boundary_g: Vec<Complex64>,
    pub boundary_points: Vec<Complex64>,
    pub containment_residual: f64,
    pub containment_tol: f64,
    pub warnings: Vec<String>,
}

fn arc_point(boundary: Boundary, param: f64) -> Complex64 {
    match boundary {
        Boundary::RealSegment => Complex64::new(param, 0.0),
        Boundary::Circle { radius } => Complex64::from_polar(radius, param),
    }
}

/// Point at distance `h` from the arc on the side of the original domain.
fn approach_point(boundary: Boundary, param: f64, h: f64, inside: bool) -> Complex64 {
    match boundary {
        Boundary::RealSegment => Complex64::new(param, h),
        Boundary::Circle { radius } => {
            let r = if inside { radius - h } else { radius + h };
            Complex64::from_polar(r, param)
        }
    }
}

/// Whether the original domain lies inside the boundary circle.
fn original_inside(domain: &Domain, boundary: Boundary) -> Result<bool, ExtensionError> {
    match boundary {
        Boundary::RealSegment => {
            if domain.kind().is_upper_half() {
                Ok(true)
            } else {
                Err(ExtensionError::GeometryMismatch {
                    reason: "a real-diameter boundary needs an upper half-disk or half-annulus domain".into(),
                })
            }
        }
        Boundary::Circle { radius } => {
            let (inner, outer) = domain.kind().radii();
            let slack = 1e-12 * radius;
            if outer <= radius + slack {
                Ok(true)
            } else if inner >= radius - slack {
                Ok(false)
            } else {
                Err(ExtensionError::GeometryMismatch {
                    reason: format!("boundary circle |z| = {radius} passes through the domain interior"),
                })
            }
        }
    }
}

/// Closed-form locus of `g` along the arc for a contact constant `c`.
fn expected_locus(class: CausalClass, c: f64) -> Result<(CaseParameters, Option<CircleOrLine>), ExtensionError> {
    match class {
        CausalClass::Spacelike => {
            // ⟨N,(0,0,1)⟩ = −(1+|g|²)/(1−|g|²) = c  ⇒  |g|² = (c+1)/(c−1)
            if c.abs() <= 1.0 {
                return Err(ExtensionError::HypothesisViolation {
                    reason: format!("spacelike contact needs |c| > 1, measured c = {c}"),
                });
            }
            let theta = c.abs().acosh();
            let r = ((c + 1.0) / (c - 1.0)).sqrt();
            Ok((CaseParameters::Spacelike { theta }, Some(CircleOrLine::circle(Complex64::new(0.0, 0.0), r))))
        }
        CausalClass::Timelike => {
            let lambda = 1.0 / c;
            let locus = CircleOrLine::circle(Complex64::new(0.0, -lambda), (1.0 + lambda * lambda).sqrt());
            Ok((CaseParameters::Timelike { lambda }, Some(locus)))
        }
        CausalClass::Lightlike => {
            let lambda = c - 1.0;
            let radius = (1.0 + 1.0 / lambda).abs();
            let locus = if lambda == 0.0 || radius > 1e6 {
                CircleOrLine::line(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0))
            } else {
                CircleOrLine::circle(Complex64::new(-1.0 / lambda, 0.0), radius)
            };
            Ok((CaseParameters::Lightlike { lambda }, Some(locus)))
        }
    }
}

/// Boundary limits of `g` and of `⟨N, n⟩` at each sampled arc parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryLimits {
    pub points: Vec<Complex64>,
    pub g: Vec<Complex64>,
    /// Infinite where the approach crosses `|g| = 1`.
    pub contact: Vec<f64>,
}

/// Evaluate `g` and `⟨N, n⟩` at the approach heights and extrapolate each to
/// the arc.
pub fn boundary_limits(
    data: &WeierstrassData,
    normal: LVector,
    boundary: Boundary,
    samples: &BoundarySamples,
) -> Result<BoundaryLimits, ExtensionError> {
    let inside = original_inside(data.domain(), boundary)?;
    let mut out = BoundaryLimits { points: Vec::new(), g: Vec::new(), contact: Vec::new() };
    for &param in &samples.params {
        let mut gs = Vec::with_capacity(samples.heights.len());
        let mut ns = Vec::with_capacity(samples.heights.len());
        for &h in &samples.heights {
            let z = approach_point(boundary, param, h, inside);
            let (_, g) = data.fg(z)?;
            gs.push(g);
            let value = gauss_map_from_g(g, 0.0).map(|n| n.inner(normal)).unwrap_or(f64::INFINITY);
            ns.push(Complex64::new(value, 0.0));
        }
        out.g.push(extrapolate_to_zero(&samples.heights, &gs));
        out.contact.push(extrapolate_to_zero(&samples.heights, &ns).re);
        out.points.push(arc_point(boundary, param));
    }
    Ok(out)
}

/// Probe `⟨N, n⟩` and `g` on approach to the arc, extrapolate to the arc,
/// check constancy, fit the locus of `g`, cross-check it against the
/// closed form implied by `c`, and record how far the arc's image is from
/// the plane (enforced when the extension is built).
pub fn measure_contact(
    data: &WeierstrassData,
    plane: &Plane,
    boundary: Boundary,
    samples: &BoundarySamples,
    opts: &ContactOptions,
) -> Result<ContactData, ExtensionError> {
    let nf = normal_form(plane)?;
    let inside = original_inside(data.domain(), boundary)?;
    if samples.params.len() < 3 || samples.heights.len() < 2 {
        return Err(ExtensionError::HypothesisViolation { reason: "too few boundary samples".into() });
    }

    let limits = boundary_limits(data, nf.normal, boundary, samples)?;
    let mut contacts = Vec::with_capacity(limits.g.len());
    let mut conelike = 0usize;
    for (g0, value) in limits.g.iter().zip(&limits.contact) {
        if (1.0 - g0.norm_sqr()).abs() < opts.conelike_tol {
            conelike += 1;
        } else {
            contacts.push(*value);
        }
    }
    let BoundaryLimits { points: boundary_points, g: boundary_g, .. } = limits;

    let mut warnings = Vec::new();
    let sheet = Sheet::of_g(data.fg(approach_point(boundary, samples.params[0], samples.heights[0], inside))?.1);
    let (fitted, fit_residual) = fit_circle_or_line(&boundary_g).ok_or_else(|| {
        ExtensionError::HypothesisViolation { reason: "boundary values of g do not determine a circle or line".into() }
    })?;

    let (c, deviation, params, expected, printed_radius) = if conelike == samples.params.len() {
        warnings.push(String::from(
            "conelike boundary: |g| -> 1 along the arc, the induced metric degenerates there and c is unbounded",
        ));
        let unit = CircleOrLine::circle(Complex64::new(0.0, 0.0), 1.0);
        (f64::INFINITY, 0.0, CaseParameters::Conelike, Some(unit), None)
    } else if conelike > 0 {
        return Err(ExtensionError::HypothesisViolation {
            reason: "constant-angle hypothesis violated: the contact degenerates on part of the arc".into(),
        });
    } else {
        let n = contacts.len() as f64;
        let c = contacts.iter().sum::<f64>() / n;
        let deviation = contacts.iter().map(|x| (x - c).abs()).fold(0.0, f64::max);
        if c.abs() < opts.orthogonal_tol {
            return Err(ExtensionError::OrthogonalContact { c });
        }
        if !(deviation <= opts.angle_tol * (1.0 + c.abs())) {
            return Err(ExtensionError::HypothesisViolation {
                reason: format!("constant-angle hypothesis violated: <N,n> varies by {deviation:e} around c = {c}"),
            });
        }
        let (params, expected) = expected_locus(nf.class, c)?;
        let printed = match params {
            CaseParameters::Spacelike { theta } => Some(1.0 / (theta / 2.0).tanh()),
            _ => None,
        };
        if let (CaseParameters::Lightlike { lambda }, true) = (params, matches!(fitted, CircleOrLine::Line { .. })) {
            if lambda.abs() < 1e-6 {
                warnings.push(String::from(
                    "lightlike contact with c = 1: Re g = 1 on the arc forces |g| >= 1 there, so the \
                     surface is not spacelike up to the boundary",
                ));
            }
        }
        (c, deviation, params, expected, printed)
    };

    let locus_discrepancy = expected.map(|e| e.discrepancy(&fitted)).unwrap_or(0.0);
    if locus_discrepancy > opts.locus_tol {
        return Err(ExtensionError::GeometryMismatch {
            reason: format!(
                "fitted boundary locus {fitted} differs from the locus {} implied by c = {c} (by {locus_discrepancy:e})",
                expected.map(|e| format!("{e}")).unwrap_or_default()
            ),
        });
    }
    if let (Some(printed), CircleOrLine::Circle { radius, .. }) = (printed_radius, fitted) {
        if (printed - radius).abs() > opts.locus_tol * (1.0 + radius) {
            warnings.push(format!(
                "fitted boundary radius {radius} differs from coth(theta/2) = {printed}; using the fitted radius \
                 (on the upper sheet the boundary radius is tanh(theta/2))"
            ));
        }
    }

    let q = opts.quadrature;
    let containment_tol = opts.containment_factor * q.abs_tol;
    let mut containment_residual = 0.0f64;
    for z in &boundary_points {
        let x = evaluate_surface(data, *z, &q)?;
        let level = x.inner(nf.normal) - nf.offset;
        containment_residual = containment_residual.max(level.abs());
    }

    Ok(ContactData {
        plane: *plane,
        normal_form: nf,
        boundary,
        c,
        deviation,
        params,
        fitted,
        fit_residual,
        expected,
        locus_discrepancy,
        printed_radius,
        sheet,
        boundary_g,
        boundary_points,
        containment_residual,
        containment_tol,
        warnings,
    })
}

/// The reflection formulas for one arc, locus and plane class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReflectionRule {
    pub boundary: Boundary,
    pub locus: CircleOrLine,
    pub datum: ReflectedDatum,
}

impl ReflectionRule {
    pub fn new(boundary: Boundary, locus: CircleOrLine, class: CausalClass) -> Self {
        let datum = match class {
            CausalClass::Spacelike => ReflectedDatum::X3,
            CausalClass::Timelike => ReflectedDatum::X2,
            CausalClass::Lightlike => ReflectedDatum::Psi,
        };
        ReflectionRule { boundary, locus, datum }
    }

    /// `z ↦ conj(e(R z))`, holomorphic.
    pub fn conj_expr(&self, e: &Expr) -> Expr {
        let hat = e.clone().sconj();
        match self.boundary {
            Boundary::RealSegment => hat,
            Boundary::Circle { radius } => hat.compose(&(Expr::real(radius * radius) / Expr::z())),
        }
    }

    /// Holomorphic derivative of the odd reflection `x ↦ 2d − x∘R` of a
    /// harmonic coordinate with derivative `phi`.
    pub fn odd_form(&self, phi: &Expr) -> Expr {
        let hat = self.conj_expr(phi);
        match self.boundary {
            Boundary::RealSegment => -hat,
            Boundary::Circle { radius } => Expr::real(radius * radius) / Expr::z().powi(2) * hat,
        }
    }

    pub fn extend_g(&self, g: &Expr) -> Expr {
        self.locus.reflect_schwarz(self.conj_expr(g))
    }

    /// Holomorphic derivative of the reflected datum, from `(f, g)`.
    pub fn datum_form(&self, f: &Expr, g: &Expr) -> Expr {
        let one = || Expr::real(1.0);
        match self.datum {
            ReflectedDatum::X3 => f.clone() * g.clone(),
            ReflectedDatum::X2 => Expr::constant(Complex64::new(0.0, 0.5)) * f.clone() * (one() - g.clone().powi(2)),
            ReflectedDatum::Psi => Expr::real(0.5) * f.clone() * (one() - g.clone()).powi(2),
        }
    }

    /// Recover `f` on the far side from the reflected datum form and `g_ext`.
    pub fn recover_f(&self, datum_ext: Expr, g_ext: &Expr) -> Expr {
        let one = || Expr::real(1.0);
        match self.datum {
            ReflectedDatum::X3 => datum_ext / g_ext.clone(),
            ReflectedDatum::X2 => {
                Expr::real(2.0) * datum_ext / (Expr::constant(Complex64::i()) * (one() - g_ext.clone().powi(2)))
            }
            ReflectedDatum::Psi => Expr::real(2.0) * datum_ext / (one() - g_ext.clone()).powi(2),
        }
    }

    /// `(f_ext, g_ext)` from `(f, g)`.
    pub fn extend_pair(&self, f: &Expr, g: &Expr) -> (Expr, Expr) {
        let g_ext = self.extend_g(g);
        let datum_ext = self.odd_form(&self.datum_form(f, g));
        let f_ext = self.recover_f(datum_ext, &g_ext);
        (f_ext, g_ext)
    }
}

/// The `g`-continuation formulas exactly as parametrized by the contact
/// constant, for the real diameter: `coth²(θ/2)/ĝ`, `−iλ + (1+λ²)/(ĝ − iλ)`,
/// `2 − ĝ`, `−1/λ + (1+1/λ)²/(ĝ + 1/λ)`.
pub fn printed_g_extension(g: &Expr, params: CaseParameters) -> Option<Expr> {
    let hat = g.clone().sconj();
    Some(match params {
        CaseParameters::Spacelike { theta } => {
            let coth = 1.0 / (theta / 2.0).tanh();
            Expr::real(coth * coth) / hat
        }
        CaseParameters::Timelike { lambda } => {
            let il = Expr::constant(Complex64::new(0.0, lambda));
            -il.clone() + Expr::real(1.0 + lambda * lambda) / (hat - il)
        }
        CaseParameters::Lightlike { lambda: 0.0 } => Expr::real(2.0) - hat,
        CaseParameters::Lightlike { lambda } => {
            let inv = 1.0 / lambda;
            -Expr::real(inv) + Expr::real((1.0 + inv) * (1.0 + inv)) / (hat + Expr::real(inv))
        }
        CaseParameters::Conelike => return None,
    })
}

/// Per-quantity agreement of the two sets of formulas on the arc.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchingReport {
    pub samples: usize,
    pub g_gap: f64,
    pub f_gap: f64,
    pub phi_gap: f64,
    pub dg_gap: f64,
    pub df_gap: f64,
    pub dphi_gap: f64,
    /// Largest distance of `g_ext` on the arc from the fitted locus.
    pub locus_gap: f64,
    pub tol: f64,
    pub passed: bool,
}

impl MatchingReport {
    pub fn max_gap(&self) -> f64 {
        [self.g_gap, self.f_gap, self.phi_gap, self.dg_gap, self.df_gap, self.dphi_gap].into_iter().fold(0.0, f64::max)
    }
}

/// Weierstrass data on the original side, reflected formulas on the other.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedSurface {
    original: WeierstrassData,
    f_ext: Expr,
    g_ext: Expr,
    rule: ReflectionRule,
    original_inside: bool,
    domain: Domain,
    contact: Option<ContactData>,
    matching: Option<MatchingReport>,
}

fn phi_exprs(f: &Expr, g: &Expr) -> [Expr; 3] {
    let one = || Expr::real(1.0);
    [
        Expr::real(0.5) * f.clone() * (one() + g.clone().powi(2)),
        Expr::constant(Complex64::new(0.0, 0.5)) * f.clone() * (one() - g.clone().powi(2)),
        f.clone() * g.clone(),
    ]
}

fn gap(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + a.norm())
}

impl ExtendedSurface {
    /// Assemble piecewise data without probing the boundary. The basepoint
    /// stays on the original side.
    pub fn assemble(original: WeierstrassData, rule: ReflectionRule) -> Result<Self, ExtensionError> {
        let inside = original_inside(original.domain(), rule.boundary)?;
        let domain = original
            .domain()
            .mirrored(rule.boundary)
            .map_err(|e| ExtensionError::GeometryMismatch { reason: format!("{e}") })?;
        let (f_ext, g_ext) = rule.extend_pair(original.f(), original.g());
        Ok(ExtendedSurface {
            original,
            f_ext,
            g_ext,
            rule,
            original_inside: inside,
            domain,
            contact: None,
            matching: None,
        })
    }

    /// Piecewise data from explicit far-side formulas, as read back from a
    /// saved extension.
    pub fn from_parts(
        original: WeierstrassData,
        f_ext: Expr,
        g_ext: Expr,
        rule: ReflectionRule,
    ) -> Result<Self, ExtensionError> {
        let mut s = ExtendedSurface::assemble(original, rule)?;
        s.f_ext = f_ext;
        s.g_ext = g_ext;
        Ok(s)
    }

    pub fn original(&self) -> &WeierstrassData {
        &self.original
    }

    pub fn f_ext(&self) -> &Expr {
        &self.f_ext
    }

    pub fn g_ext(&self) -> &Expr {
        &self.g_ext
    }

    pub fn rule(&self) -> &ReflectionRule {
        &self.rule
    }

    pub fn boundary(&self) -> Boundary {
        self.rule.boundary
    }

    pub fn contact(&self) -> Option<&ContactData> {
        self.contact.as_ref()
    }

    pub fn matching(&self) -> Option<&MatchingReport> {
        self.matching.as_ref()
    }

    pub fn on_original_side(&self, z: Complex64) -> bool {
        match self.rule.boundary {
            Boundary::RealSegment => z.im >= 0.0,
            Boundary::Circle { radius } => (z.norm() <= radius) == self.original_inside,
        }
    }

    /// Mirror image of `z` across the arc.
    pub fn mirror(&self, z: Complex64) -> Complex64 {
        self.rule.boundary.reflect(z)
    }

    /// Points on the arc inside the assembled domain.
    pub fn arc_samples(&self, n: usize) -> Vec<Complex64> {
        let (inner, outer) = self.original.domain().kind().radii();
        (0..n)
            .map(|k| {
                let t = (k as f64 + 0.5) / n as f64;
                match self.rule.boundary {
                    Boundary::RealSegment if inner > 0.0 => Complex64::new(inner + (outer - inner) * t, 0.0),
                    Boundary::RealSegment => Complex64::new(outer * (1.8 * t - 0.9), 0.0),
                    Boundary::Circle { radius } => {
                        if self.original.domain().kind().is_upper_half() {
                            Complex64::from_polar(radius, PI * t)
                        } else {
                            Complex64::from_polar(radius, 2.0 * PI * t - PI)
                        }
                    }
                }
            })
            .collect()
    }

    /// Value of the reflected datum on the arc, read off the surface.
    pub fn boundary_value(&self, q: &QuadratureConfig) -> Result<f64, SurfaceError> {
        let z = self.arc_samples(1)[0];
        Ok(self.rule.datum.of(evaluate_surface(self, z, q)?))
    }

    /// Compare values and first derivatives of `g`, `f` and `φ` from both
    /// sides on `n` arc samples.
    pub fn check_matching(&self, n: usize, tol: f64) -> Result<MatchingReport, ExtensionError> {
        let (f, g) = (self.original.f(), self.original.g());
        let (fe, ge) = (&self.f_ext, &self.g_ext);
        let phi_a = phi_exprs(f, g);
        let phi_b = phi_exprs(fe, ge);
        let d = |e: &Expr| e.differentiate();
        let (df, dg, dfe, dge) = (d(f), d(g), d(fe), d(ge));
        let dphi_a: Vec<Expr> = phi_a.iter().map(d).collect();
        let dphi_b: Vec<Expr> = phi_b.iter().map(d).collect();
        let ev = |e: &Expr, z: Complex64| e.eval(z).map_err(|source| SurfaceError::Eval { at: z, source });

        let mut r = MatchingReport {
            samples: 0,
            g_gap: 0.0,
            f_gap: 0.0,
            phi_gap: 0.0,
            dg_gap: 0.0,
            df_gap: 0.0,
            dphi_gap: 0.0,
            locus_gap: 0.0,
            tol,
            passed: false,
        };
        for z in self.arc_samples(n) {
            r.g_gap = r.g_gap.max(gap(ev(g, z)?, ev(ge, z)?));
            r.f_gap = r.f_gap.max(gap(ev(f, z)?, ev(fe, z)?));
            r.dg_gap = r.dg_gap.max(gap(ev(&dg, z)?, ev(&dge, z)?));
            r.df_gap = r.df_gap.max(gap(ev(&df, z)?, ev(&dfe, z)?));
            for k in 0..3 {
                r.phi_gap = r.phi_gap.max(gap(ev(&phi_a[k], z)?, ev(&phi_b[k], z)?));
                r.dphi_gap = r.dphi_gap.max(gap(ev(&dphi_a[k], z)?, ev(&dphi_b[k], z)?));
            }
            let locus = &self.rule.locus;
            r.locus_gap = r.locus_gap.max(locus.distance(ev(ge, z)?) / (1.0 + locus.radius_or_zero()));
            r.samples += 1;
        }
        r.passed = r.max_gap() <= tol && r.locus_gap <= 1e-8;
        Ok(r)
    }

    /// Probe the far side on a coarse grid for points where the recovery of
    /// `f` divides by zero.
    fn check_reconstruction(&self) -> Result<(), ExtensionError> {
        let grid = self.original.domain().interior_grid(8, 16, 0.0);
        for z in grid.into_iter().map(|z| self.mirror(z)) {
            let Ok(ge) = self.g_ext.eval(z) else { continue };
            let one = Complex64::new(1.0, 0.0);
            let singular = match self.rule.datum {
                ReflectedDatum::X3 => ge.norm() < 1e-8,
                ReflectedDatum::X2 => (ge * ge - one).norm() < 1e-8,
                ReflectedDatum::Psi => (ge - one).norm() < 1e-8,
            };
            if singular {
                return Err(ExtensionError::SingularReconstruction {
                    at: z,
                    reason: format!("g_ext = {ge} makes the recovery of f divide by zero"),
                });
            }
        }
        Ok(())
    }
}

impl Surface for ExtendedSurface {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn basepoint(&self) -> (Complex64, LVector) {
        (self.original.z0(), self.original.x0())
    }

    fn fg(&self, z: Complex64) -> Result<(Complex64, Complex64), SurfaceError> {
        if self.on_original_side(z) {
            self.original.fg(z)
        } else {
            let ev = |e: &Expr| e.eval(z).map_err(|source| SurfaceError::Eval { at: z, source });
            Ok((ev(&self.f_ext)?, ev(&self.g_ext)?))
        }
    }

    fn switch_points(&self, a: Complex64, b: Complex64) -> Vec<f64> {
        match self.rule.boundary {
            Boundary::RealSegment => {
                if (a.im < 0.0) != (b.im < 0.0) && a.im != b.im {
                    vec![a.im / (a.im - b.im)]
                } else {
                    Vec::new()
                }
            }
            Boundary::Circle { radius } => {
                // |a + t d|² = ρ²
                let d = b - a;
                let qa = d.norm_sqr();
                let qb = 2.0 * (a * d.conj()).re;
                let qc = a.norm_sqr() - radius * radius;
                let disc = qb * qb - 4.0 * qa * qc;
                if qa == 0.0 || disc < 0.0 {
                    return Vec::new();
                }
                let s = disc.sqrt();
                [(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)].into_iter().filter(|t| *t > 0.0 && *t < 1.0).collect()
            }
        }
    }
}

fn finish(
    data: &WeierstrassData,
    contact: ContactData,
    opts: &ContactOptions,
) -> Result<ExtendedSurface, ExtensionError> {
    if !(contact.containment_residual <= contact.containment_tol) {
        return Err(ExtensionError::HypothesisViolation {
            reason: format!(
                "boundary curve is not contained in the plane: |<X,n> - d| reaches {:e}",
                contact.containment_residual
            ),
        });
    }
    let rule = ReflectionRule::new(contact.boundary, contact.fitted, contact.normal_form.class);
    let mut ext = ExtendedSurface::assemble(data.clone(), rule)?;
    ext.check_reconstruction()?;
    ext.matching = Some(ext.check_matching(33, opts.matching_tol)?);
    ext.contact = Some(contact);
    Ok(ext)
}

fn require_class(contact: &ContactData, class: CausalClass) -> Result<(), ExtensionError> {
    if contact.normal_form.class == class {
        Ok(())
    } else {
        Err(ExtensionError::GeometryMismatch {
            reason: format!("expected a {class} plane, got a {} plane", contact.normal_form.class),
        })
    }
}

fn real_boundary(data: &WeierstrassData) -> Result<Boundary, ExtensionError> {
    match data.domain().boundary() {
        Some(Boundary::RealSegment) => Ok(Boundary::RealSegment),
        _ => Err(ExtensionError::GeometryMismatch { reason: "the domain has no real-diameter boundary arc".into() }),
    }
}

/// Spacelike plane: inversion of `g` in the fitted circle about the origin,
/// odd reflection of `x₃`.
pub fn extend_spacelike(
    data: &WeierstrassData,
    contact: ContactData,
    opts: &ContactOptions,
) -> Result<ExtendedSurface, ExtensionError> {
    require_class(&contact, CausalClass::Spacelike)?;
    match contact.fitted {
        CircleOrLine::Circle { center, radius } if center.norm() <= opts.locus_tol * (1.0 + radius) => {}
        other => {
            return Err(ExtensionError::GeometryMismatch {
                reason: format!("spacelike contact needs g on a circle about 0, fitted {other}"),
            })
        }
    }
    finish(data, contact, opts)
}

/// Timelike plane: inversion in the circle about `−iλ` of radius `√(1+λ²)`,
/// odd reflection of `x₂`.
pub fn extend_timelike(
    data: &WeierstrassData,
    contact: ContactData,
    opts: &ContactOptions,
) -> Result<ExtendedSurface, ExtensionError> {
    require_class(&contact, CausalClass::Timelike)?;
    finish(data, contact, opts)
}

/// Lightlike plane: reflection in `Re w = 1` (`c = 1`) or inversion in the
/// circle about `−1/λ` of radius `|1 + 1/λ|`, odd reflection of `x₁ − x₃`.
pub fn extend_lightlike(
    data: &WeierstrassData,
    contact: ContactData,
    opts: &ContactOptions,
) -> Result<ExtendedSurface, ExtensionError> {
    require_class(&contact, CausalClass::Lightlike)?;
    finish(data, contact, opts)
}

/// Measure the contact along the domain's boundary arc and dispatch on the
/// plane class. Circle arcs go through [`extend_circular`].
pub fn extend(data: &WeierstrassData, plane: &Plane, opts: &ContactOptions) -> Result<ExtendedSurface, ExtensionError> {
    match data.domain().boundary() {
        Some(Boundary::Circle { radius }) => extend_circular(data, radius, plane, opts),
        _ => {
            let boundary = real_boundary(data)?;
            let samples = BoundarySamples::default_for(data.domain(), boundary);
            let contact = measure_contact(data, plane, boundary, &samples, opts)?;
            match contact.normal_form.class {
                CausalClass::Spacelike => extend_spacelike(data, contact, opts),
                CausalClass::Timelike => extend_timelike(data, contact, opts),
                CausalClass::Lightlike => extend_lightlike(data, contact, opts),
            }
        }
    }
}

/// Reflection across the circle `|z| = ρ` against a spacelike plane: the
/// spacelike formulas with `z̄` replaced by `ρ²/z̄`. Accepts a conelike
/// circle, where `|g| = 1` and the contact constant is unbounded.
pub fn extend_circular(
    data: &WeierstrassData,
    rho: f64,
    plane: &Plane,
    opts: &ContactOptions,
) -> Result<ExtendedSurface, ExtensionError> {
    let boundary = Boundary::Circle { radius: rho };
    let kind = data.domain().kind();
    if !matches!(
        kind,
        DomainKind::Annulus { .. }
            | DomainKind::PuncturedDisk { .. }
            | DomainKind::Disk { .. }
            | DomainKind::HalfAnnulus { .. }
    ) {
        return Err(ExtensionError::GeometryMismatch { reason: format!("{} domain has no circular arc", kind.name()) });
    }
    let samples = BoundarySamples::default_for(data.domain(), boundary);
    let contact = measure_contact(data, plane, boundary, &samples, opts)?;
    require_class(&contact, CausalClass::Spacelike)?;
    extend_spacelike(data, contact, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normal_forms() {
        let p = Plane::new(LVector::new(0.0, 0.0, -2.0), 4.0).unwrap();
        let nf = normal_form(&p).unwrap();
        assert_eq!(nf.normal, LVector::new(0.0, 0.0, 1.0));
        assert_eq!(nf.offset, -2.0);
        let tilted = Plane::new(LVector::new(0.1, 0.0, 1.0), 0.0).unwrap();
        assert!(matches!(normal_form(&tilted), Err(ExtensionError::GeometryMismatch { .. })));
        let light = Plane::new(LVector::new(-1.0, 0.0, 1.0), 0.0).unwrap();
        assert!(matches!(normal_form(&light), Err(ExtensionError::GeometryMismatch { .. })));
    }

    #[test]
    fn expected_loci() {
        let (_, l) = expected_locus(CausalClass::Spacelike, -5.0 / 3.0).unwrap();
        match l.unwrap() {
            CircleOrLine::Circle { center, radius } => {
                assert_eq!(center, c(0.0, 0.0));
                assert!((radius - 0.5).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        let (p, l) = expected_locus(CausalClass::Lightlike, -1.0).unwrap();
        assert_eq!(p, CaseParameters::Lightlike { lambda: -2.0 });
        assert_eq!(l.unwrap(), CircleOrLine::circle(c(0.5, 0.0), 0.5));
        let (_, l) = expected_locus(CausalClass::Lightlike, 1.0).unwrap();
        assert!(matches!(l.unwrap(), CircleOrLine::Line { .. }));
        assert!(expected_locus(CausalClass::Spacelike, 0.5).is_err());
    }

    #[test]
    fn printed_spacelike_self_symmetric() {
        // g = ½ e^{iz}: the inversion in |w| = ½ gives back g.
        let g = parse("0.5*exp(i*z)").unwrap();
        let rule =
            ReflectionRule::new(Boundary::RealSegment, CircleOrLine::circle(c(0.0, 0.0), 0.5), CausalClass::Spacelike);
        let ge = rule.extend_g(&g);
        for z in [c(0.3, -0.2), c(-0.5, -0.7)] {
            assert!((ge.eval(z).unwrap() - g.eval(z).unwrap()).norm() < 1e-15);
        }
    }

    #[test]
    fn lambda_zero_line_reflection_fixes_its_axis() {
        let g = parse("1 + i*exp(z)").unwrap();
        let ge = printed_g_extension(&g, CaseParameters::Lightlike { lambda: 0.0 }).unwrap();
        for u in [-0.5, 0.0, 0.7] {
            let w = ge.eval(c(u, 0.0)).unwrap();
            assert!((w.re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn switch_points_across_circle() {
        let data = WeierstrassData::new(
            parse("1/z^2").unwrap(),
            parse("z").unwrap(),
            Domain::annulus(0.3, 0.5),
            c(0.4, 0.0),
            LVector::ZERO,
        )
        .unwrap();
        let rule = ReflectionRule::new(
            Boundary::Circle { radius: 0.5 },
            CircleOrLine::circle(c(0.0, 0.0), 0.5),
            CausalClass::Spacelike,
        );
        let ext = ExtendedSurface::assemble(data, rule).unwrap();
        let t = ext.switch_points(c(0.4, 0.0), c(0.6, 0.0));
        assert_eq!(t.len(), 1);
        assert!((t[0] - 0.5).abs() < 1e-15);
        assert!(ext.on_original_side(c(0.45, 0.0)));
        assert!(!ext.on_original_side(c(0.55, 0.0)));
    }
}
