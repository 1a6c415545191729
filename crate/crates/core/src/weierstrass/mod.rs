//! Weierstrass data `(f, g)` of a maximal surface and everything computed
//! from it pointwise: the null triple `φ`, the surface `X = X₀ + Re ∫ φ dω`,
//! the Gauss map, its stereographic inverse and the conformal factor.
//!
//! The representation is
//!
//! ```text
//! φ₁ = ½ f (1 + g²),   φ₂ = (i/2) f (1 − g²),   φ₃ = f g
//! ```
//!
//! which makes `φ₁² + φ₂² − φ₃²` vanish identically.

mod domain;
mod path;
mod quadrature;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

pub use domain::{Boundary, Domain, DomainError, DomainKind, Obstacle, Puncture};
pub use path::{build_path, segment_distance};

use crate::expr::{EvalError, Expr};
use crate::minkowski::LVector;

#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceError {
    Eval {
        at: Complex64,
        source: EvalError,
    },
    OutOfDomain(Complex64),
    PathConstruction {
        from: Complex64,
        to: Complex64,
    },
    QuadratureTolerance {
        achieved: f64,
        requested: f64,
    },
    /// `|1 − |g|²|` below the configured threshold: the induced metric degenerates.
    DegenerateMetric {
        at: Complex64,
        one_minus_g2: f64,
    },
    /// Input to the stereographic inverse is not on the upper sheet of H².
    NotOnUpperSheet,
    InvalidData(String),
}

impl fmt::Display for SurfaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceError::Eval { at, source } => write!(f, "evaluation fault at {at}: {source}"),
            SurfaceError::OutOfDomain(z) => write!(f, "point {z} is outside the domain"),
            SurfaceError::PathConstruction { from, to } => {
                write!(f, "no admissible integration path from {from} to {to}")
            }
            SurfaceError::QuadratureTolerance { achieved, requested } => {
                write!(f, "quadrature reached error {achieved:e}, requested {requested:e}")
            }
            SurfaceError::DegenerateMetric { at, one_minus_g2 } => {
                write!(f, "degenerate metric at {at}: 1-|g|^2 = {one_minus_g2:e}")
            }
            SurfaceError::NotOnUpperSheet => f.write_str("vector is not on the upper sheet of H^2"),
            SurfaceError::InvalidData(msg) => f.write_str(msg),
        }
    }
}

fn eval_at(e: &Expr, z: Complex64) -> Result<Complex64, SurfaceError> {
    e.eval(z).map_err(|source| SurfaceError::Eval { at: z, source })
}

/// `(φ₁, φ₂, φ₃)` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiTriple {
    pub phi1: Complex64,
    pub phi2: Complex64,
    pub phi3: Complex64,
}

impl PhiTriple {
    pub fn from_weierstrass(f: Complex64, g: Complex64) -> Self {
        let g2 = g * g;
        let one = Complex64::new(1.0, 0.0);
        PhiTriple { phi1: 0.5 * f * (one + g2), phi2: Complex64::new(0.0, 0.5) * f * (one - g2), phi3: f * g }
    }

    pub fn to_array(self) -> [Complex64; 3] {
        [self.phi1, self.phi2, self.phi3]
    }

    /// `|φ₁² + φ₂² − φ₃²|`.
    pub fn null_residual(&self) -> f64 {
        (self.phi1 * self.phi1 + self.phi2 * self.phi2 - self.phi3 * self.phi3).norm()
    }

    /// Null residual over `|φ₁|² + |φ₂|² + |φ₃|²` (0 when all vanish).
    pub fn relative_null_residual(&self) -> f64 {
        let scale = self.phi1.norm_sqr() + self.phi2.norm_sqr() + self.phi3.norm_sqr();
        if scale == 0.0 {
            0.0
        } else {
            self.null_residual() / scale
        }
    }

    /// `|φ₁|² + |φ₂|² − |φ₃|²`.
    pub fn metric_sum(&self) -> f64 {
        self.phi1.norm_sqr() + self.phi2.norm_sqr() - self.phi3.norm_sqr()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathPolicy {
    /// Always the straight segment from the basepoint.
    Straight,
    /// Straight segment, rerouted around punctures and annulus holes.
    AvoidObstacles,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Keep-out radius around punctures, as a fraction of the domain scale.
    pub clearance: f64,
    pub path_policy: PathPolicy,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            max_subdivisions: 4000,
            clearance: 0.05,
            path_policy: PathPolicy::AvoidObstacles,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tol(abs_tol: f64) -> Self {
        QuadratureConfig { abs_tol, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), SurfaceError> {
        if self.abs_tol > 0.0 && self.abs_tol.is_finite() && self.max_subdivisions > 0 {
            Ok(())
        } else {
            Err(SurfaceError::InvalidData("quadrature tolerance must be positive".into()))
        }
    }
}

/// Anything that can hand out Weierstrass values pointwise on a domain:
/// plain data, or piecewise data assembled by a reflection.
pub trait Surface {
    fn domain(&self) -> &Domain;

    /// Basepoint `z₀` and the prescribed value `X(z₀)`.
    fn basepoint(&self) -> (Complex64, LVector);

    /// `(f(z), g(z))` using whichever formulas are valid at `z`.
    fn fg(&self, z: Complex64) -> Result<(Complex64, Complex64), SurfaceError>;

    /// Parameters `t ∈ (0, 1)` where the segment `a + t(b − a)` crosses from
    /// one set of formulas to another. Empty for unpiecewise surfaces.
    fn switch_points(&self, _a: Complex64, _b: Complex64) -> Vec<f64> {
        Vec::new()
    }

    fn phi(&self, z: Complex64) -> Result<PhiTriple, SurfaceError> {
        let (f, g) = self.fg(z)?;
        Ok(PhiTriple::from_weierstrass(f, g))
    }
}

/// `(f, g, domain, z₀, X₀)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassData {
    f: Expr,
    g: Expr,
    domain: Domain,
    z0: Complex64,
    x0: LVector,
}

impl WeierstrassData {
    pub fn new(f: Expr, g: Expr, domain: Domain, z0: Complex64, x0: LVector) -> Result<Self, SurfaceError> {
        if !domain.contains(z0) {
            return Err(SurfaceError::OutOfDomain(z0));
        }
        if !x0.is_finite() {
            return Err(SurfaceError::InvalidData("basepoint value must be finite".into()));
        }
        Ok(WeierstrassData { f, g, domain, z0, x0 })
    }

    pub fn f(&self) -> &Expr {
        &self.f
    }

    pub fn g(&self) -> &Expr {
        &self.g
    }

    pub fn z0(&self) -> Complex64 {
        self.z0
    }

    pub fn x0(&self) -> LVector {
        self.x0
    }

    pub fn with_basepoint(mut self, z0: Complex64, x0: LVector) -> Result<Self, SurfaceError> {
        if !self.domain.contains(z0) {
            return Err(SurfaceError::OutOfDomain(z0));
        }
        self.z0 = z0;
        self.x0 = x0;
        Ok(self)
    }
}

impl Surface for WeierstrassData {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn basepoint(&self) -> (Complex64, LVector) {
        (self.z0, self.x0)
    }

    fn fg(&self, z: Complex64) -> Result<(Complex64, Complex64), SurfaceError> {
        Ok((eval_at(&self.f, z)?, eval_at(&self.g, z)?))
    }
}

pub fn phi<S: Surface + ?Sized>(surface: &S, z: Complex64) -> Result<PhiTriple, SurfaceError> {
    surface.phi(z)
}

/// Surface value with the path actually integrated and the achieved error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub x: LVector,
    pub path: Vec<Complex64>,
    pub error_estimate: f64,
}

/// `Re ∫_a^b φ dω` along a straight segment, split where the formulas switch.
pub fn segment_integral<S: Surface + ?Sized>(
    surface: &S,
    a: Complex64,
    b: Complex64,
    tol: f64,
    max_subdivisions: usize,
) -> Result<(LVector, f64), SurfaceError> {
    let mut cuts = surface.switch_points(a, b);
    cuts.retain(|t| *t > 0.0 && *t < 1.0);
    cuts.sort_by(f64::total_cmp);
    let mut knots = vec![a];
    knots.extend(cuts.iter().map(|t| a + (b - a) * *t));
    knots.push(b);
    let total_len = (b - a).norm();
    let mut sum = LVector::ZERO;
    let mut err = 0.0;
    for w in knots.windows(2) {
        let share = if total_len > 0.0 { (w[1] - w[0]).norm() / total_len } else { 1.0 };
        let (v, e) = quadrature::integrate_segment(
            |z| surface.phi(z).map(PhiTriple::to_array),
            w[0],
            w[1],
            (tol * share).max(tol * 1e-3),
            max_subdivisions,
        )?;
        sum = sum + v;
        err += e;
    }
    Ok((sum, err))
}

/// `X₀ + Re ∫ φ dω` along an explicit polyline starting at the basepoint.
pub fn integrate_polyline<S: Surface + ?Sized>(
    surface: &S,
    path: &[Complex64],
    q: &QuadratureConfig,
) -> Result<Evaluation, SurfaceError> {
    q.validate()?;
    let (z0, x0) = surface.basepoint();
    if path.first() != Some(&z0) {
        return Err(SurfaceError::InvalidData("path must start at the basepoint".into()));
    }
    let total: f64 = path.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    let mut x = x0;
    let mut error = 0.0;
    for w in path.windows(2) {
        let share = if total > 0.0 { (w[1] - w[0]).norm() / total } else { 1.0 };
        let (v, e) = segment_integral(surface, w[0], w[1], q.abs_tol * share, q.max_subdivisions)?;
        x = x + v;
        error += e;
    }
    Ok(Evaluation { x, path: path.to_vec(), error_estimate: error })
}

/// The default path from the basepoint to `z` under the configured policy.
pub fn default_path<S: Surface + ?Sized>(
    surface: &S,
    z: Complex64,
    q: &QuadratureConfig,
) -> Result<Vec<Complex64>, SurfaceError> {
    let (z0, _) = surface.basepoint();
    match q.path_policy {
        PathPolicy::Straight => Ok(vec![z0, z]),
        PathPolicy::AvoidObstacles => {
            let domain = surface.domain();
            let obstacles = domain.obstacles(q.clearance * domain.scale());
            build_path(z0, z, &obstacles).ok_or(SurfaceError::PathConstruction { from: z0, to: z })
        }
    }
}

pub fn evaluate_surface_detailed<S: Surface + ?Sized>(
    surface: &S,
    z: Complex64,
    q: &QuadratureConfig,
) -> Result<Evaluation, SurfaceError> {
    if !surface.domain().contains(z) {
        return Err(SurfaceError::OutOfDomain(z));
    }
    let path = default_path(surface, z, q)?;
    integrate_polyline(surface, &path, q)
}

/// `X(z) = X₀ + Re ∫_{z₀}^{z} (φ₁, φ₂, φ₃) dω`.
pub fn evaluate_surface<S: Surface + ?Sized>(
    surface: &S,
    z: Complex64,
    q: &QuadratureConfig,
) -> Result<LVector, SurfaceError> {
    evaluate_surface_detailed(surface, z, q).map(|e| e.x)
}

/// Threshold on `|1 − |g|²|` below which the Gauss map is refused.
pub const DEGENERACY_EPS: f64 = 1e-12;

/// Gauss map from the value of `g`: `(2 Re g, 2 Im g, 1 + |g|²) / (1 − |g|²)`.
pub fn gauss_map_from_g(g: Complex64, eps: f64) -> Option<LVector> {
    let s = g.norm_sqr();
    let d = 1.0 - s;
    if d.abs() < eps || !d.is_finite() {
        return None;
    }
    Some(LVector::new(2.0 * g.re / d, 2.0 * g.im / d, (1.0 + s) / d))
}

pub fn gauss_map<S: Surface + ?Sized>(surface: &S, z: Complex64) -> Result<LVector, SurfaceError> {
    let (_, g) = surface.fg(z)?;
    gauss_map_from_g(g, DEGENERACY_EPS)
        .ok_or(SurfaceError::DegenerateMetric { at: z, one_minus_g2: 1.0 - g.norm_sqr() })
}

/// Stereographic projection of the upper sheet of H² from `(0, 0, −1)`:
/// `(N₁ + i N₂) / (1 + N₃)`.
pub fn stereo_inverse(n: LVector) -> Result<Complex64, SurfaceError> {
    let q = n.inner(n);
    let tol = 1e-9 * n.euclid_dot(n).max(1.0);
    if n.x3 < 1.0 - 1e-12 || (q + 1.0).abs() > tol {
        return Err(SurfaceError::NotOnUpperSheet);
    }
    Ok(Complex64::new(n.x1, n.x2) / (1.0 + n.x3))
}

/// `|φ₁|² + |φ₂|² − |φ₃|²`, positive wherever `|g| ≠ 1` and `f ≠ 0`.
pub fn conformal_factor<S: Surface + ?Sized>(surface: &S, z: Complex64) -> Result<f64, SurfaceError> {
    Ok(surface.phi(z)?.metric_sum())
}

/// The same quantity in closed form, `½ |f|² (1 − |g|²)²`.
pub fn conformal_factor_closed_form(f: Complex64, g: Complex64) -> f64 {
    let d = 1.0 - g.norm_sqr();
    0.5 * f.norm_sqr() * d * d
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sheet {
    /// `|g| < 1`, Gauss map on `x₃ ≥ 1`.
    Upper,
    /// `|g| > 1`, Gauss map on `x₃ ≤ −1`.
    Lower,
}

impl Sheet {
    pub fn of_g(g: Complex64) -> Sheet {
        if g.norm_sqr() < 1.0 {
            Sheet::Upper
        } else {
            Sheet::Lower
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sheet::Upper => "upper",
            Sheet::Lower => "lower",
        }
    }
}

/// Five-point Laplacian of `X` at `z` with spacing `h`.
///
/// The stencil values are differences `Re ∫_z^{z+δ} φ` taken on short
/// segments from the centre, so the common value `X(z)` and the quadrature
/// error of the long path never enter.
pub fn discrete_laplacian<S: Surface + ?Sized>(surface: &S, z: Complex64, h: f64) -> Result<LVector, SurfaceError> {
    let scale = {
        let p = surface.phi(z)?;
        1.0 + p.phi1.norm() + p.phi2.norm() + p.phi3.norm()
    };
    let tol = 1e-13 * h * scale;
    let mut sum = LVector::ZERO;
    for step in [Complex64::new(h, 0.0), Complex64::new(-h, 0.0), Complex64::new(0.0, h), Complex64::new(0.0, -h)] {
        let (v, _) = segment_integral(surface, z, z + step, tol, 64)?;
        sum = sum + v;
    }
    Ok(sum * (1.0 / (h * h)))
}

/// Central-difference tangents `(X_u, X_v)` at `z`, from the short integrals
/// `Re ∫_{z−h}^{z+h} φ` in each direction.
pub fn central_tangents<S: Surface + ?Sized>(
    surface: &S,
    z: Complex64,
    h: f64,
) -> Result<(LVector, LVector), SurfaceError> {
    let p = surface.phi(z)?;
    let tol = 1e-13 * h * (1.0 + p.phi1.norm() + p.phi2.norm() + p.phi3.norm());
    let dh = Complex64::new(h, 0.0);
    let dv = Complex64::new(0.0, h);
    let (xu, _) = segment_integral(surface, z - dh, z + dh, tol, 64)?;
    let (xv, _) = segment_integral(surface, z - dv, z + dv, tol, 64)?;
    Ok((xu * (0.5 / h), xv * (0.5 / h)))
}

/// Winding number of `e` around the circle `|z − center| = radius`: the order
/// of the zero (positive) or pole (negative) enclosed, as a raw real number.
pub fn winding_number(e: &Expr, center: Complex64, radius: f64, samples: usize) -> Result<f64, SurfaceError> {
    let n = samples.max(16);
    let point = |k: usize| center + Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64);
    let first = eval_at(e, point(0))?;
    let mut prev = first;
    let mut total = 0.0;
    for k in 1..=n {
        let cur = if k == n { first } else { eval_at(e, point(k))? };
        if cur.norm() == 0.0 || prev.norm() == 0.0 {
            return Err(SurfaceError::InvalidData("zero on the winding circle".into()));
        }
        total += (cur / prev).arg();
        prev = cur;
    }
    Ok(total / (2.0 * PI))
}

/// Mean of `|e(p + r e^{iθ})|` over the circle.
fn circle_mean_abs(e: &Expr, center: Complex64, radius: f64, samples: usize) -> Result<f64, SurfaceError> {
    let mut acc = 0.0;
    for k in 0..samples {
        let z = center + Complex64::from_polar(radius, 2.0 * PI * k as f64 / samples as f64);
        acc += eval_at(e, z)?.norm();
    }
    Ok(acc / samples as f64)
}

/// Measured orders of `f` and `g` at a puncture and the limit behaviour of
/// `f · (z − p)^{−2m}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleZeroEstimate {
    pub at: Complex64,
    pub declared_pole_order: u32,
    /// Winding number of `g` (negative for a pole).
    pub g_order: f64,
    /// Winding number of `f` (positive for a zero).
    pub f_order: f64,
    /// Growth exponent of `|f|·r^{−2m}` between radii `r` and `r/4`; 0 when the limit is finite and nonzero.
    pub limit_exponent: f64,
    pub accepted: bool,
}

/// At a declared pole of `g` of order `m`, `f` must vanish to order `2m`.
pub fn estimate_pole_zero(
    f: &Expr,
    g: &Expr,
    puncture: &Puncture,
    radius: f64,
) -> Result<PoleZeroEstimate, SurfaceError> {
    let m = puncture.g_pole_order.unwrap_or(0);
    let samples = 256;
    let g_order = winding_number(g, puncture.at, radius, samples)?;
    let f_order = winding_number(f, puncture.at, radius, samples)?;
    let power = 2.0 * f64::from(m);
    let outer = circle_mean_abs(f, puncture.at, radius, 64)? / radius.powf(power);
    let inner = circle_mean_abs(f, puncture.at, radius / 4.0, 64)? / (radius / 4.0).powf(power);
    let limit_exponent = (outer / inner).ln() / 4.0f64.ln();
    let accepted =
        (g_order + f64::from(m)).abs() < 0.25 && (f_order - power).abs() < 0.25 && limit_exponent.abs() < 0.25;
    Ok(PoleZeroEstimate { at: puncture.at, declared_pole_order: m, g_order, f_order, limit_exponent, accepted })
}
