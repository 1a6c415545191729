//! Quantitative diagnostics: each check samples the surface, measures one
//! residual and compares it with its own tolerance.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

use crate::expr::parse;
use crate::extension::{boundary_limits, BoundarySamples, ExtendedSurface, ExtensionError};
use crate::minkowski::{lorentz_cross, CausalClass, LVector, Plane};
use crate::weierstrass::{
    build_path, central_tangents, conformal_factor, default_path, discrete_laplacian, estimate_pole_zero,
    evaluate_surface, integrate_polyline, Boundary, Domain, QuadratureConfig, Sheet, Surface, SurfaceError,
    WeierstrassData,
};

/// Whether the measured value is an upper or a lower bound check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

impl Bound {
    pub fn name(self) -> &'static str {
        match self {
            Bound::AtMost => "at_most",
            Bound::AtLeast => "at_least",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub samples: usize,
    /// Largest residual for `AtMost` checks, smallest value for `AtLeast`.
    pub value: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
    pub note: String,
}

impl CheckRecord {
    pub fn at_most(name: &str, samples: usize, value: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            samples,
            value,
            tolerance,
            bound: Bound::AtMost,
            passed: value <= tolerance,
            note: String::new(),
        }
    }

    pub fn at_least(name: &str, samples: usize, value: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            samples,
            value,
            tolerance,
            bound: Bound::AtLeast,
            passed: value >= tolerance,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    fn failed(name: &str, note: String) -> Self {
        CheckRecord {
            name: name.into(),
            samples: 0,
            value: f64::NAN,
            tolerance: 0.0,
            bound: Bound::AtMost,
            passed: false,
            note,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsReport {
    pub checks: Vec<CheckRecord>,
    pub sheet: Option<Sheet>,
    pub warnings: Vec<String>,
}

impl DiagnosticsReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Sampling parameters for [`full_diagnostics`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub n_radial: usize,
    pub n_angular: usize,
    /// Keep-out radius around punctures, as a fraction of the domain scale.
    pub clearance: f64,
    pub quadrature: QuadratureConfig,
    /// Laplacian spacings, as fractions of the domain scale.
    pub laplacian_steps: [f64; 3],
    /// Points per side of the arc for the harmonicity fit.
    pub harmonicity_points: usize,
    pub path_points: usize,
    pub cross_points: usize,
    /// Central-difference step of the cross-product check, fraction of scale.
    pub cross_step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_radial: 6,
            n_angular: 12,
            clearance: 0.05,
            quadrature: QuadratureConfig::default(),
            laplacian_steps: [1e-3, 5e-4, 2.5e-4],
            harmonicity_points: 4,
            path_points: 4,
            cross_points: 3,
            cross_step: 1e-4,
        }
    }
}

/// Either kind of surface the diagnostics accept.
#[derive(Clone, Copy, Debug)]
pub enum Subject<'a> {
    Plain(&'a WeierstrassData),
    Extended(&'a ExtendedSurface),
}

impl<'a> From<&'a WeierstrassData> for Subject<'a> {
    fn from(d: &'a WeierstrassData) -> Self {
        Subject::Plain(d)
    }
}

impl<'a> From<&'a ExtendedSurface> for Subject<'a> {
    fn from(e: &'a ExtendedSurface) -> Self {
        Subject::Extended(e)
    }
}

/// `(sinh u cos v, sinh u sin v, u)`.
pub fn catenoid_reference(u: f64, v: f64) -> LVector {
    LVector::new(u.sinh() * v.cos(), u.sinh() * v.sin(), u)
}

/// `f = 1/z²`, `g = z` on the annulus `e^{-1.5} ≤ |z| ≤ 1`, with `X(1) = 0`.
pub fn catenoid_fixture() -> WeierstrassData {
    catenoid_on(Domain::annulus((-1.5f64).exp(), 1.0), Complex64::new(1.0, 0.0), LVector::ZERO)
}

/// The catenoid on the annulus `e^a ≤ |z| ≤ e^b` (`a < b < 0`), based at
/// `z₀ = e^a` where it takes the value `(sinh a, 0, a)`. Its outer circle
/// maps into the plane `x₃ = b`.
pub fn catenoid_slab(a: f64, b: f64) -> WeierstrassData {
    catenoid_on(Domain::annulus(a.exp(), b.exp()), Complex64::new(a.exp(), 0.0), catenoid_reference(a, 0.0))
}

fn catenoid_on(domain: Domain, z0: Complex64, x0: LVector) -> WeierstrassData {
    let f = parse("1/z^2").expect("fixture parses");
    let g = parse("z").expect("fixture parses");
    WeierstrassData::new(f, g, domain, z0, x0).expect("basepoint inside the fixture domain")
}

/// Relative null residual `|φ₁² + φ₂² − φ₃²| / Σ|φₖ|²` over the samples.
pub fn null_identity_check(triples: &[crate::weierstrass::PhiTriple], tol: f64) -> CheckRecord {
    let worst = triples.iter().map(|p| p.relative_null_residual()).fold(0.0, f64::max);
    CheckRecord::at_most("null_identity", triples.len(), worst, tol)
}

/// Discrete Laplacian norms at three spacings and the fitted decay order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicityEstimate {
    pub at: Complex64,
    pub steps: [f64; 3],
    pub norms: [f64; 3],
    /// Least-squares slope of `log |ΔX|` against `log h`; `None` below the noise floor.
    pub order: Option<f64>,
    /// `|ΔX| / h²` at the smallest spacing.
    pub constant: f64,
}

/// Laplacian decay at `z`. Values below the rounding floor
/// `10³ ε (1 + |φ|) / h` count as zero and yield no order.
pub fn harmonicity_order<S: Surface + ?Sized>(
    surface: &S,
    z: Complex64,
    steps: [f64; 3],
) -> Result<HarmonicityEstimate, SurfaceError> {
    let p = surface.phi(z)?;
    let size = 1.0 + p.phi1.norm() + p.phi2.norm() + p.phi3.norm();
    let mut norms = [0.0; 3];
    let mut noisy = true;
    for (k, h) in steps.iter().enumerate() {
        norms[k] = discrete_laplacian(surface, z, *h)?.euclid_norm();
        let floor = 1e3 * f64::EPSILON * size / h;
        noisy &= norms[k] <= floor;
    }
    let order = if noisy {
        None
    } else {
        let xs: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
        let ys: Vec<f64> = norms.iter().map(|n| n.max(f64::MIN_POSITIVE).ln()).collect();
        let mx = xs.iter().sum::<f64>() / 3.0;
        let my = ys.iter().sum::<f64>() / 3.0;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        Some(sxy / sxx)
    };
    let h = steps[2];
    Ok(HarmonicityEstimate { at: z, steps, norms, order, constant: norms[2] / (h * h) })
}

/// Residual of `X_u ∧ X_v` against the direction
/// `|f|²(1 − |g|²)(2 Re g, 2 Im g, 1 + |g|²)` and the fitted scalar multiple.
pub fn cross_product_residual<S: Surface + ?Sized>(
    surface: &S,
    z: Complex64,
    h: f64,
) -> Result<(f64, f64), SurfaceError> {
    let (xu, xv) = central_tangents(surface, z, h)?;
    let cross = lorentz_cross(xu, xv);
    let (f, g) = surface.fg(z)?;
    let s = g.norm_sqr();
    let reference = LVector::new(2.0 * g.re, 2.0 * g.im, 1.0 + s) * (f.norm_sqr() * (1.0 - s));
    let denom = reference.euclid_dot(reference);
    if denom == 0.0 {
        return Err(SurfaceError::DegenerateMetric { at: z, one_minus_g2: 1.0 - s });
    }
    let k = cross.euclid_dot(reference) / denom;
    let residual = (cross - reference * k).euclid_norm() / cross.euclid_norm().max(f64::MIN_POSITIVE);
    Ok((residual, k))
}

pub fn check_cross_product_normal<S: Surface + ?Sized>(surface: &S, z: Complex64, h: f64) -> CheckRecord {
    match cross_product_residual(surface, z, h) {
        Ok((residual, k)) => CheckRecord::at_most("cross_product_normal", 1, residual, 1e-6)
            .with_note(format!("fitted scalar {k:.12e} at {z}")),
        Err(e) => CheckRecord::failed("cross_product_normal", format!("{e}")),
    }
}

/// Outcome of inspecting the boundary limits for the cases the extension
/// theorem excludes or cannot reach.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Obstruction {
    None {
        c: f64,
    },
    /// `⟨N, n⟩ → 0` against a spacelike plane.
    ImpossibleContact {
        c: f64,
    },
    /// Lightlike plane with `|g| → 1` on the arc: the metric and `X_u ∧ X_v` vanish there.
    DegenerateLightlike {
        c: f64,
        g_limit: Complex64,
    },
    /// `⟨N, n⟩ → 0` against a timelike plane.
    OrthogonalOutOfScope {
        c: f64,
    },
}

impl Obstruction {
    pub fn message(&self) -> String {
        match *self {
            Obstruction::None { c } => format!("no obstruction, c = {c}"),
            Obstruction::ImpossibleContact { c } => format!(
                "impossible contact: a spacelike plane cannot meet a maximal surface orthogonally \
                 (would force 1+|g|^2 = 0), measured c = {c:e}"
            ),
            Obstruction::DegenerateLightlike { c, g_limit } => {
                format!("degenerate: X_u∧X_v=0 along the contact, g -> {g_limit}, c = {c:e}")
            }
            Obstruction::OrthogonalOutOfScope { c } => {
                format!("orthogonal contact: symmetric-reflection case, out of scope (c = {c:e})")
            }
        }
    }
}

/// Classify boundary limits. `contacts` are limits of `⟨N, n⟩`, `boundary_g`
/// limits of `g`; both may be synthetic.
pub fn classify_obstruction(class: CausalClass, contacts: &[f64], boundary_g: &[Complex64], tol: f64) -> Obstruction {
    let finite: Vec<f64> = contacts.iter().copied().filter(|c| c.is_finite()).collect();
    let c = if finite.is_empty() { f64::INFINITY } else { finite.iter().sum::<f64>() / finite.len() as f64 };
    let smallest = contacts.iter().map(|c| c.abs()).fold(f64::INFINITY, f64::min);
    match class {
        CausalClass::Spacelike if smallest < tol => Obstruction::ImpossibleContact { c },
        CausalClass::Timelike if smallest < tol => Obstruction::OrthogonalOutOfScope { c },
        CausalClass::Lightlike => {
            let worst = boundary_g
                .iter()
                .copied()
                .min_by(|a, b| (1.0 - a.norm_sqr()).abs().total_cmp(&(1.0 - b.norm_sqr()).abs()));
            match worst {
                Some(g) if (1.0 - g.norm_sqr()).abs() < tol || smallest < tol => {
                    Obstruction::DegenerateLightlike { c, g_limit: g }
                }
                _ => Obstruction::None { c },
            }
        }
        _ => Obstruction::None { c },
    }
}

pub fn obstruction_record(obstruction: Obstruction, samples: usize) -> CheckRecord {
    let passed = matches!(obstruction, Obstruction::None { .. });
    CheckRecord {
        name: "orthogonality_obstruction".into(),
        samples,
        value: match obstruction {
            Obstruction::None { c }
            | Obstruction::ImpossibleContact { c }
            | Obstruction::DegenerateLightlike { c, .. }
            | Obstruction::OrthogonalOutOfScope { c } => c,
        },
        tolerance: 0.0,
        bound: Bound::AtMost,
        passed,
        note: obstruction.message(),
    }
}

/// Measure the boundary limits of `data` against `plane` and classify them.
pub fn check_orthogonality_obstruction(
    plane: &Plane,
    data: &WeierstrassData,
    boundary: Boundary,
    samples: &BoundarySamples,
) -> Result<CheckRecord, ExtensionError> {
    let limits = boundary_limits(data, plane.normal() * (1.0 / plane.normal().euclid_norm()), boundary, samples)?;
    let obstruction = classify_obstruction(plane.class(), &limits.contact, &limits.g, 1e-8);
    Ok(obstruction_record(obstruction, limits.g.len()))
}

fn spread(points: &[Complex64], n: usize) -> Vec<Complex64> {
    if points.is_empty() || n == 0 {
        return Vec::new();
    }
    let n = n.min(points.len());
    (0..n).map(|k| points[(2 * k + 1) * points.len() / (2 * n)]).collect()
}

fn harmonicity_record<S: Surface + ?Sized>(
    surface: &S,
    name: &str,
    points: &[Complex64],
    steps: [f64; 3],
) -> CheckRecord {
    let mut min_order = f64::INFINITY;
    let mut max_constant = 0.0f64;
    let mut quiet = 0usize;
    for z in points {
        match harmonicity_order(surface, *z, steps) {
            Ok(est) => {
                max_constant = max_constant.max(est.constant);
                match est.order {
                    Some(o) => min_order = min_order.min(o),
                    None => quiet += 1,
                }
            }
            Err(e) => return CheckRecord::failed(name, format!("{e}")),
        }
    }
    if points.is_empty() {
        return CheckRecord::at_least(name, 0, f64::INFINITY, 1.8).with_note("no interior samples");
    }
    CheckRecord::at_least(name, points.len(), min_order, 1.8)
        .with_note(format!("{quiet} point(s) below the rounding floor; |ΔX|/h^2 <= {max_constant:.3e}"))
}

/// Run every applicable check on a grid of the subject's domain.
pub fn full_diagnostics<'a>(subject: impl Into<Subject<'a>>, grid: &GridSpec) -> DiagnosticsReport {
    let subject = subject.into();
    let surface: &dyn Surface = match subject {
        Subject::Plain(d) => d,
        Subject::Extended(e) => e,
    };
    let original: &WeierstrassData = match subject {
        Subject::Plain(d) => d,
        Subject::Extended(e) => e.original(),
    };
    let domain = surface.domain();
    let scale = domain.scale();
    let q = grid.quadrature;
    let points = domain.interior_grid(grid.n_radial, grid.n_angular, grid.clearance * scale);
    let mut report = DiagnosticsReport { checks: Vec::new(), sheet: None, warnings: Vec::new() };

    // Pointwise identities.
    let mut triples = Vec::with_capacity(points.len());
    let mut min_metric = f64::INFINITY;
    let mut max_metric = 0.0f64;
    let mut sheets = [0usize; 2];
    let mut faults = Vec::new();
    let mut metric_values = Vec::with_capacity(points.len());
    for z in &points {
        match surface.fg(*z) {
            Ok((f, g)) => {
                let p = crate::weierstrass::PhiTriple::from_weierstrass(f, g);
                triples.push(p);
                let m = p.metric_sum();
                metric_values.push((*z, m));
                min_metric = min_metric.min(m);
                max_metric = max_metric.max(m);
                sheets[usize::from(Sheet::of_g(g) == Sheet::Lower)] += 1;
            }
            Err(e) => faults.push(format!("{e}")),
        }
    }
    let mut null = null_identity_check(&triples, 1e-12);
    if !faults.is_empty() {
        null.passed = false;
        null.note = format!("{} evaluation fault(s), first: {}", faults.len(), faults[0]);
    }
    report.checks.push(null);
    let near_zero: Vec<Complex64> =
        metric_values.iter().filter(|(_, m)| *m < 1e-3 * max_metric).map(|(z, _)| *z).collect();
    let mut metric = CheckRecord {
        name: "metric_positive".into(),
        samples: triples.len(),
        value: min_metric,
        tolerance: 0.0,
        bound: Bound::AtLeast,
        passed: min_metric > 0.0,
        note: String::new(),
    };
    if !near_zero.is_empty() {
        metric.note = format!("{} sample(s) with conformal factor near 0 (|g| -> 1)", near_zero.len());
        report.warnings.push(format!(
            "conformal factor near 0 at {} sample(s), first at {}: degenerate metric where |g| -> 1",
            near_zero.len(),
            near_zero[0]
        ));
    }
    report.checks.push(metric);

    // Hyperboloid sheet: per side of the arc for extended surfaces.
    let sheet_record = match subject {
        Subject::Plain(_) => {
            let minority = sheets[0].min(sheets[1]);
            report.sheet = Some(if sheets[0] >= sheets[1] { Sheet::Upper } else { Sheet::Lower });
            CheckRecord::at_most("sheet_constancy", sheets[0] + sheets[1], minority as f64, 0.0)
                .with_note(format!("{} upper, {} lower", sheets[0], sheets[1]))
        }
        Subject::Extended(e) => {
            let mut counts = [[0usize; 2]; 2];
            for z in &points {
                if let Ok((_, g)) = e.fg(*z) {
                    let side = usize::from(!e.on_original_side(*z));
                    counts[side][usize::from(Sheet::of_g(g) == Sheet::Lower)] += 1;
                }
            }
            let minority: usize = counts.iter().map(|c| c[0].min(c[1])).sum();
            report.sheet = Some(if counts[0][0] >= counts[0][1] { Sheet::Upper } else { Sheet::Lower });
            CheckRecord::at_most("sheet_constancy", points.len(), minority as f64, 0.0).with_note(format!(
                "original side {} upper / {} lower, reflected side {} upper / {} lower",
                counts[0][0], counts[0][1], counts[1][0], counts[1][1]
            ))
        }
    };
    report.checks.push(sheet_record);

    // Harmonicity.
    let steps = grid.laplacian_steps.map(|s| s * scale);
    match subject {
        Subject::Plain(_) => {
            let sample = spread(&points, grid.harmonicity_points);
            report.checks.push(harmonicity_record(surface, "harmonicity", &sample, steps));
        }
        Subject::Extended(e) => {
            let (plus, minus): (Vec<Complex64>, Vec<Complex64>) = points.iter().partition(|z| e.on_original_side(**z));
            let plus = spread(&plus, grid.harmonicity_points);
            let minus = spread(&minus, grid.harmonicity_points);
            report.checks.push(harmonicity_record(surface, "harmonicity_original", &plus, steps));
            report.checks.push(harmonicity_record(surface, "harmonicity_reflected", &minus, steps));
        }
    }

    // Path independence: default path against a detour through another grid point.
    let targets = spread(&points, grid.path_points);
    let mut worst_gap = 0.0f64;
    let mut path_note = String::new();
    let obstacles = domain.obstacles(q.clearance * scale);
    for (k, z) in targets.iter().enumerate() {
        let via = points[(k * points.len() / targets.len().max(1) + points.len() / 3) % points.len()];
        let direct = evaluate_surface(surface, *z, &q);
        let detour = default_path(surface, via, &q).and_then(|mut p| {
            let rest = build_path(via, *z, &obstacles).ok_or(SurfaceError::PathConstruction { from: via, to: *z })?;
            p.extend(rest.into_iter().skip(1));
            integrate_polyline(surface, &p, &q)
        });
        match (direct, detour) {
            (Ok(a), Ok(b)) => worst_gap = worst_gap.max((a - b.x).euclid_norm()),
            (Err(e), _) | (_, Err(e)) => {
                worst_gap = f64::INFINITY;
                path_note = format!("{e}");
            }
        }
    }
    report.checks.push(
        CheckRecord::at_most("path_independence", targets.len(), worst_gap, 10.0 * q.abs_tol).with_note(path_note),
    );

    // Pole/zero pairing at declared poles of g.
    let declared: Vec<_> = original.domain().punctures().iter().filter(|p| p.g_pole_order.is_some()).collect();
    if declared.is_empty() {
        report.checks.push(CheckRecord::at_most("pole_zero_pairing", 0, 0.0, 0.25).with_note("no declared poles"));
    } else {
        let radius = 0.5 * grid.clearance * original.domain().scale();
        let mut worst = 0.0f64;
        let mut ok = true;
        let mut notes = Vec::new();
        for p in &declared {
            match estimate_pole_zero(original.f(), original.g(), p, radius) {
                Ok(est) => {
                    let m = f64::from(est.declared_pole_order);
                    worst = worst
                        .max((est.g_order + m).abs())
                        .max((est.f_order - 2.0 * m).abs())
                        .max(est.limit_exponent.abs());
                    ok &= est.accepted;
                    notes.push(format!(
                        "at {}: pole order {} of g, measured g order {:.3}, f order {:.3}, limit exponent {:.3}",
                        est.at, est.declared_pole_order, est.g_order, est.f_order, est.limit_exponent
                    ));
                }
                Err(e) => {
                    ok = false;
                    worst = f64::INFINITY;
                    notes.push(format!("{e}"));
                }
            }
        }
        let mut rec =
            CheckRecord::at_most("pole_zero_pairing", declared.len(), worst, 0.25).with_note(notes.join("; "));
        rec.passed &= ok;
        report.checks.push(rec);
    }

    // Normal direction from the tangent plane.
    let h = grid.cross_step * scale;
    let mut worst = 0.0f64;
    let mut note = String::new();
    let cross_points = spread(&points, grid.cross_points);
    for z in &cross_points {
        match cross_product_residual(surface, *z, h) {
            Ok((r, k)) => {
                worst = worst.max(r);
                note = format!("fitted scalar {k:.6e}");
            }
            Err(e) => {
                worst = f64::INFINITY;
                note = format!("{e}");
            }
        }
    }
    report.checks.push(CheckRecord::at_most("cross_product_normal", cross_points.len(), worst, 1e-6).with_note(note));

    if let Subject::Extended(e) = subject {
        extension_checks(e, grid, &mut report);
    }
    report
}

fn extension_checks(e: &ExtendedSurface, grid: &GridSpec, report: &mut DiagnosticsReport) {
    if let Some(contact) = e.contact() {
        let angle_tol = 1e-6 * (1.0 + if contact.c.is_finite() { contact.c.abs() } else { 0.0 });
        report.checks.push(
            CheckRecord::at_most("contact_angle", contact.boundary_g.len(), contact.deviation, angle_tol)
                .with_note(format!("c = {}", contact.c)),
        );
        report.checks.push(CheckRecord::at_most(
            "plane_containment",
            contact.boundary_points.len(),
            contact.containment_residual,
            contact.containment_tol,
        ));
        report.checks.push(
            CheckRecord::at_most("locus_fit", contact.boundary_g.len(), contact.locus_discrepancy, 1e-6)
                .with_note(format!("fitted {}", contact.fitted)),
        );
        report.warnings.extend(contact.warnings.iter().cloned());
    }
    match e.matching() {
        Some(m) => {
            report.checks.push(CheckRecord::at_most("c1_matching", m.samples, m.max_gap(), m.tol).with_note(format!(
                "g {:.2e}, f {:.2e}, phi {:.2e}, g' {:.2e}, f' {:.2e}, phi' {:.2e}",
                m.g_gap, m.f_gap, m.phi_gap, m.dg_gap, m.df_gap, m.dphi_gap
            )));
            report.checks.push(CheckRecord::at_most("boundary_locus", m.samples, m.locus_gap, 1e-8));
        }
        None => match e.check_matching(33, 1e-7) {
            Ok(m) => {
                report.checks.push(CheckRecord::at_most("c1_matching", m.samples, m.max_gap(), m.tol));
                report.checks.push(CheckRecord::at_most("boundary_locus", m.samples, m.locus_gap, 1e-8));
            }
            Err(err) => report.checks.push(CheckRecord::failed("c1_matching", format!("{err}"))),
        },
    }
    let original_points: Vec<Complex64> = e.original().domain().interior_grid(
        grid.n_radial,
        grid.n_angular,
        grid.clearance * e.original().domain().scale(),
    );
    report.checks.push(involution_check(e, &original_points));
    report.checks.push(reflection_symmetry_check(e, &spread(&original_points, grid.path_points), &grid.quadrature));
}

/// Apply the reflection rule to the extended formulas and compare with the
/// original data at the given points.
pub fn involution_check(e: &ExtendedSurface, points: &[Complex64]) -> CheckRecord {
    let (f2, g2) = e.rule().extend_pair(e.f_ext(), e.g_ext());
    let (f, g) = (e.original().f(), e.original().g());
    let mut worst = 0.0f64;
    let mut count = 0;
    for z in points {
        let pairs = [(g.eval(*z), g2.eval(*z)), (f.eval(*z), f2.eval(*z))];
        for (a, b) in pairs {
            match (a, b) {
                (Ok(a), Ok(b)) => worst = worst.max((a - b).norm() / (1.0 + a.norm())),
                _ => worst = f64::INFINITY,
            }
        }
        count += 1;
    }
    CheckRecord::at_most("involution", count, worst, 1e-10)
}

/// The reflected datum is odd about the plane: `datum(X(z)) + datum(X(R z)) = 2d`.
pub fn reflection_symmetry_check(e: &ExtendedSurface, points: &[Complex64], q: &QuadratureConfig) -> CheckRecord {
    let datum = e.rule().datum;
    let level = match e.contact() {
        Some(c) => {
            // Normal form `⟨x, n⟩ = d` in terms of the datum.
            match datum {
                crate::extension::ReflectedDatum::X3 => -c.normal_form.offset,
                _ => c.normal_form.offset,
            }
        }
        None => match e.boundary_value(q) {
            Ok(v) => v,
            Err(err) => return CheckRecord::failed("reflection_symmetry", format!("{err}")),
        },
    };
    let mut worst = 0.0f64;
    let mut note = String::new();
    for z in points {
        let pair = evaluate_surface(e, *z, q).and_then(|a| Ok((a, evaluate_surface(e, e.mirror(*z), q)?)));
        match pair {
            Ok((a, b)) => worst = worst.max((datum.of(a) + datum.of(b) - 2.0 * level).abs()),
            Err(err) => {
                worst = f64::INFINITY;
                note = format!("{err}");
            }
        }
    }
    CheckRecord::at_most("reflection_symmetry", points.len(), worst, 100.0 * q.abs_tol).with_note(format!(
        "datum {}{}{}",
        datum.name(),
        if note.is_empty() { "" } else { ": " },
        note
    ))
}

/// Largest distance of the reflected slice `|z| = e^a` from the plane
/// `x₃ = 2b − a`, for the catenoid slab extended across `|z| = e^b`.
pub fn slab_reflection_gap(
    e: &ExtendedSurface,
    a: f64,
    b: f64,
    n: usize,
    q: &QuadratureConfig,
) -> Result<f64, SurfaceError> {
    let mut worst = 0.0f64;
    for k in 0..n {
        let theta = -PI + 2.0 * PI * (k as f64 + 0.5) / n as f64;
        let z = e.mirror(Complex64::from_polar(a.exp(), theta));
        let x = evaluate_surface(e, z, q)?;
        worst = worst.max((x.x3 - (2.0 * b - a)).abs());
    }
    Ok(worst)
}

/// Conformal factor at each point, for callers that mask degenerate cells.
pub fn conformal_factors<S: Surface + ?Sized>(surface: &S, points: &[Complex64]) -> Vec<Result<f64, SurfaceError>> {
    points.iter().map(|z| conformal_factor(surface, *z)).collect()
}
