use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;

/// Shape of the parameter domain. All shapes are centred at the origin.
///
/// `Annulus` accepts `inner = 0` (punctured at the origin) and
/// `outer = ∞`; both occur after reflecting a punctured disk across its
/// boundary circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DomainKind {
    /// `{|z| < radius, Im z > 0}`.
    UpperHalfDisk {
        radius: f64,
    },
    Disk {
        radius: f64,
    },
    /// `{inner < |z| < outer, Im z > 0}`.
    HalfAnnulus {
        inner: f64,
        outer: f64,
    },
    Annulus {
        inner: f64,
        outer: f64,
    },
    /// `{0 < |z| < radius}`.
    PuncturedDisk {
        radius: f64,
    },
}

impl DomainKind {
    pub fn name(&self) -> &'static str {
        match self {
            DomainKind::UpperHalfDisk { .. } => "upper_half_disk",
            DomainKind::Disk { .. } => "disk",
            DomainKind::HalfAnnulus { .. } => "half_annulus",
            DomainKind::Annulus { .. } => "annulus",
            DomainKind::PuncturedDisk { .. } => "punctured_disk",
        }
    }

    /// `(inner, outer)` radii; `inner` is 0 for disks.
    pub fn radii(&self) -> (f64, f64) {
        match *self {
            DomainKind::UpperHalfDisk { radius }
            | DomainKind::Disk { radius }
            | DomainKind::PuncturedDisk { radius } => (0.0, radius),
            DomainKind::HalfAnnulus { inner, outer } | DomainKind::Annulus { inner, outer } => (inner, outer),
        }
    }

    pub fn is_upper_half(&self) -> bool {
        matches!(self, DomainKind::UpperHalfDisk { .. } | DomainKind::HalfAnnulus { .. })
    }

    /// Whether the origin is removed from the domain.
    pub fn excludes_origin(&self) -> bool {
        match *self {
            DomainKind::UpperHalfDisk { .. } | DomainKind::HalfAnnulus { .. } => false,
            DomainKind::Disk { .. } => false,
            DomainKind::PuncturedDisk { .. } => true,
            DomainKind::Annulus { .. } => true,
        }
    }
}

/// The arc across which a surface is reflected: the real diameter `D₀` or a circle `|z| = ρ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary {
    RealSegment,
    Circle { radius: f64 },
}

impl Boundary {
    /// Mirror image of `z` across the arc.
    pub fn reflect(&self, z: Complex64) -> Complex64 {
        match *self {
            Boundary::RealSegment => z.conj(),
            Boundary::Circle { radius } => radius * radius / z.conj(),
        }
    }
}

/// An isolated point removed from the domain; `g_pole_order` declares a
/// pole of `g` there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Puncture {
    pub at: Complex64,
    pub g_pole_order: Option<u32>,
}

impl Puncture {
    pub fn new(at: Complex64) -> Self {
        Puncture { at, g_pole_order: None }
    }

    pub fn with_pole(at: Complex64, order: u32) -> Self {
        Puncture { at, g_pole_order: Some(order) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DomainError {
    BadRadius,
    PunctureOutside(Complex64),
    BoundaryOutside,
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::BadRadius => f.write_str("domain radii must satisfy 0 <= inner < outer"),
            DomainError::PunctureOutside(p) => write!(f, "puncture {p} lies outside the domain"),
            DomainError::BoundaryOutside => f.write_str("boundary circle radius lies outside the domain radii"),
        }
    }
}

/// An open obstacle disk the integration path must go around.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Obstacle {
    pub center: Complex64,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    kind: DomainKind,
    punctures: Vec<Puncture>,
    boundary: Option<Boundary>,
}

impl Domain {
    pub fn new(kind: DomainKind) -> Result<Self, DomainError> {
        let (inner, outer) = kind.radii();
        let valid = inner >= 0.0 && outer > inner && !outer.is_nan() && inner.is_finite();
        if !valid {
            return Err(DomainError::BadRadius);
        }
        let boundary = match kind {
            DomainKind::UpperHalfDisk { .. } | DomainKind::HalfAnnulus { .. } => Some(Boundary::RealSegment),
            DomainKind::Disk { .. } => None,
            DomainKind::Annulus { outer, .. } | DomainKind::PuncturedDisk { radius: outer } => {
                if outer.is_finite() {
                    Some(Boundary::Circle { radius: outer })
                } else {
                    None
                }
            }
        };
        Ok(Domain { kind, punctures: Vec::new(), boundary })
    }

    pub fn upper_half_disk(radius: f64) -> Self {
        Domain::new(DomainKind::UpperHalfDisk { radius }).expect("positive radius")
    }

    pub fn disk(radius: f64) -> Self {
        Domain::new(DomainKind::Disk { radius }).expect("positive radius")
    }

    pub fn annulus(inner: f64, outer: f64) -> Self {
        Domain::new(DomainKind::Annulus { inner, outer }).expect("ordered radii")
    }

    pub fn punctured_disk(radius: f64) -> Self {
        Domain::new(DomainKind::PuncturedDisk { radius }).expect("positive radius")
    }

    pub fn with_puncture(mut self, puncture: Puncture) -> Result<Self, DomainError> {
        if !self.contains_closure(puncture.at) {
            return Err(DomainError::PunctureOutside(puncture.at));
        }
        self.punctures.push(puncture);
        Ok(self)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Result<Self, DomainError> {
        if let Boundary::Circle { radius } = boundary {
            let (inner, outer) = self.kind.radii();
            let slack = 1e-12 * outer.min(1e300);
            if !(radius > 0.0 && radius >= inner - slack && radius <= outer + slack) {
                return Err(DomainError::BoundaryOutside);
            }
        }
        self.boundary = Some(boundary);
        Ok(self)
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn punctures(&self) -> &[Puncture] {
        &self.punctures
    }

    pub fn boundary(&self) -> Option<Boundary> {
        self.boundary
    }

    /// Outer radius, or the inner one when the domain is unbounded.
    pub fn scale(&self) -> f64 {
        let (inner, outer) = self.kind.radii();
        if outer.is_finite() {
            outer
        } else {
            inner.max(1.0)
        }
    }

    fn contains_closure(&self, z: Complex64) -> bool {
        let (inner, outer) = self.kind.radii();
        let r = z.norm();
        let slack = 1e-12 * self.scale();
        if !(r.is_finite() && r <= outer + slack && r >= inner - slack) {
            return false;
        }
        !(self.kind.is_upper_half() && z.im < -slack)
    }

    /// Membership of the closed domain minus the punctures (and minus the
    /// origin when it is removed).
    pub fn contains(&self, z: Complex64) -> bool {
        if !self.contains_closure(z) {
            return false;
        }
        let slack = 1e-12 * self.scale();
        if self.kind.excludes_origin() && z.norm() <= slack {
            return false;
        }
        self.punctures.iter().all(|p| (z - p.at).norm() > slack)
    }

    /// Disks the integration path must avoid: the hole of an annulus, the
    /// removed origin and every puncture (with radius `clearance`).
    pub fn obstacles(&self, clearance: f64) -> Vec<Obstacle> {
        let mut out = Vec::new();
        let (inner, _) = self.kind.radii();
        if self.kind.excludes_origin() {
            out.push(Obstacle { center: Complex64::new(0.0, 0.0), radius: inner.max(clearance) });
        }
        for p in &self.punctures {
            out.push(Obstacle { center: p.at, radius: clearance });
        }
        out
    }

    /// Deterministic polar grid strictly inside the domain, skipping points
    /// within `clearance` of a puncture.
    pub fn interior_grid(&self, n_radial: usize, n_angular: usize, clearance: f64) -> Vec<Complex64> {
        let (inner, outer) = self.kind.radii();
        let outer = if outer.is_finite() { outer } else { 2.0 * inner.max(1.0) };
        let (theta0, theta1) = if self.kind.is_upper_half() { (0.0, PI) } else { (-PI, PI) };
        let mut pts = Vec::with_capacity(n_radial * n_angular);
        for i in 0..n_radial {
            let r = inner + (outer - inner) * (i as f64 + 0.5) / n_radial as f64;
            for j in 0..n_angular {
                let t = theta0 + (theta1 - theta0) * (j as f64 + 0.5) / n_angular as f64;
                let z = Complex64::from_polar(r, t);
                if self.punctures.iter().all(|p| (z - p.at).norm() > clearance) {
                    pts.push(z);
                }
            }
        }
        pts
    }

    /// Union of the domain with its mirror image across `boundary`, with the
    /// punctures reflected as well.
    pub fn mirrored(&self, boundary: Boundary) -> Result<Domain, DomainError> {
        let (inner, outer) = self.kind.radii();
        let kind = match (self.kind, boundary) {
            (DomainKind::UpperHalfDisk { radius }, Boundary::RealSegment) => DomainKind::Disk { radius },
            (DomainKind::HalfAnnulus { inner, outer }, Boundary::RealSegment) => DomainKind::Annulus { inner, outer },
            (_, Boundary::Circle { radius }) => {
                let rho2 = radius * radius;
                let image_inner = if outer.is_finite() { rho2 / outer } else { 0.0 };
                let image_outer = if inner > 0.0 { rho2 / inner } else { f64::INFINITY };
                DomainKind::Annulus { inner: inner.min(image_inner), outer: outer.max(image_outer) }
            }
            _ => return Err(DomainError::BoundaryOutside),
        };
        let mut out = Domain::new(kind)?;
        for p in &self.punctures {
            out.punctures.push(*p);
            let image = boundary.reflect(p.at);
            if image.norm().is_finite() && (image - p.at).norm() > 1e-12 * self.scale() {
                out.punctures.push(Puncture { at: image, g_pole_order: None });
            }
        }
        out.boundary = Some(boundary);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        let d = Domain::upper_half_disk(1.0);
        assert!(d.contains(Complex64::new(0.2, 0.1)));
        assert!(d.contains(Complex64::new(0.2, 0.0)));
        assert!(!d.contains(Complex64::new(0.2, -0.1)));
        assert!(!d.contains(Complex64::new(2.0, 0.0)));
        let a = Domain::annulus(0.2, 1.0);
        assert!(!a.contains(Complex64::new(0.1, 0.0)));
        assert!(a.contains(Complex64::new(-0.5, 0.0)));
        let p = Domain::punctured_disk(1.0);
        assert!(!p.contains(Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(Domain::new(DomainKind::Annulus { inner: 1.0, outer: 0.5 }), Err(DomainError::BadRadius));
        let d = Domain::disk(1.0);
        assert!(d.clone().with_puncture(Puncture::new(Complex64::new(3.0, 0.0))).is_err());
        assert!(d.with_boundary(Boundary::Circle { radius: 2.0 }).is_err());
    }

    #[test]
    fn mirror_shapes() {
        let d = Domain::upper_half_disk(1.0).with_puncture(Puncture::new(Complex64::new(0.1, 0.5))).unwrap();
        let m = d.mirrored(Boundary::RealSegment).unwrap();
        assert_eq!(m.kind(), DomainKind::Disk { radius: 1.0 });
        assert_eq!(m.punctures().len(), 2);
        assert_eq!(m.punctures()[1].at, Complex64::new(0.1, -0.5));

        let rho = 0.5;
        let a = Domain::annulus(0.25, rho);
        let m = a.mirrored(Boundary::Circle { radius: rho }).unwrap();
        assert_eq!(m.kind(), DomainKind::Annulus { inner: 0.25, outer: 1.0 });

        let p = Domain::punctured_disk(0.5);
        let m = p.mirrored(Boundary::Circle { radius: 0.5 }).unwrap();
        assert_eq!(m.kind(), DomainKind::Annulus { inner: 0.0, outer: f64::INFINITY });
    }

    #[test]
    fn grid_is_interior() {
        let d = Domain::upper_half_disk(1.0);
        let g = d.interior_grid(5, 8, 0.0);
        assert_eq!(g.len(), 40);
        assert!(g.iter().all(|z| z.im > 0.0 && z.norm() < 1.0));
    }
}
