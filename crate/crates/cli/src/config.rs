//! The surface config file: one `key = value` per line, `#` starts a comment.
//!
//! ```text
//! f = 1/z^2
//! g = z
//! domain = annulus 0.22313016014842982 1
//! z0 = 1
//! x0 = 0 0 0
//! puncture = 0.5 pole 1      # repeatable; `pole m` declares a pole of g
//! tol = 1e-10
//! max_subdivisions = 4000
//! boundary = circle 1        # or `real`; defaults from the domain
//! plane = 0 0 1 0.8          # nx ny nz d for <x, n> = d
//! ```
//!
//! An extended config adds `f_ext`, `g_ext`, `reflected` (`x3`, `x2` or
//! `x1-x3`) and `locus` (`circle cx cy r` or `line px py dx dy`); `boundary`
//! is then required.

use std::fmt;
use std::fmt::Write as _;

use maxsurf_core::extension::{ExtendedSurface, ReflectedDatum, ReflectionRule};
use maxsurf_core::fit::CircleOrLine;
use maxsurf_core::weierstrass::{Boundary, Puncture};
use maxsurf_core::{
    parse, Complex64, Domain, DomainKind, Expr, LVector, Plane, QuadratureConfig, Surface, WeierstrassData,
};

/// An error tied to one field of the config.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn new(field: &str, message: impl Into<String>) -> Self {
        ConfigError { field: field.into(), line: None, message: message.into() }
    }

    fn at(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "config field `{}` (line {l}): {}", self.field, self.message),
            None => write!(f, "config field `{}`: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Far-side formulas and the reflection they came from.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionSpec {
    pub f_ext: Expr,
    pub g_ext: Expr,
    pub datum: ReflectedDatum,
    pub locus: CircleOrLine,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceConfig {
    pub f: Expr,
    pub g: Expr,
    pub domain: DomainKind,
    pub boundary: Option<Boundary>,
    pub z0: Complex64,
    pub x0: LVector,
    pub punctures: Vec<Puncture>,
    pub tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    /// `(normal, offset)`.
    pub plane: Option<(LVector, f64)>,
    pub extension: Option<ExtensionSpec>,
}

/// What a config describes once validated.
#[derive(Clone, Debug)]
pub enum Model {
    Plain(WeierstrassData),
    Extended(Box<ExtendedSurface>),
}

impl Model {
    pub fn surface(&self) -> &dyn Surface {
        match self {
            Model::Plain(d) => d,
            Model::Extended(e) => e.as_ref(),
        }
    }

    pub fn subject(&self) -> maxsurf_core::verify::Subject<'_> {
        match self {
            Model::Plain(d) => d.into(),
            Model::Extended(e) => e.as_ref().into(),
        }
    }
}

const KEYS: [&str; 14] = [
    "f",
    "g",
    "domain",
    "boundary",
    "z0",
    "x0",
    "puncture",
    "tol",
    "max_subdivisions",
    "plane",
    "f_ext",
    "g_ext",
    "reflected",
    "locus",
];

fn numbers(field: &str, value: &str, count: usize) -> Result<Vec<f64>, ConfigError> {
    let parts: Vec<&str> = value.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
    if parts.len() != count {
        return Err(ConfigError::new(field, format!("expected {count} number(s), got `{value}`")));
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| ConfigError::new(field, format!("`{p}` is not a finite number")))
        })
        .collect()
}

fn expression(field: &str, value: &str) -> Result<Expr, ConfigError> {
    parse(value).map_err(|e| ConfigError::new(field, format!("{e}")))
}

/// A complex constant written as an expression without `z`.
fn constant(field: &str, value: &str) -> Result<Complex64, ConfigError> {
    let e = expression(field, value)?;
    let at = |z: Complex64| e.eval(z).map_err(|err| ConfigError::new(field, format!("{err}")));
    let (a, b) = (at(Complex64::new(0.3, 0.7))?, at(Complex64::new(-1.1, 0.2))?);
    if a != b {
        return Err(ConfigError::new(field, "must be a constant (no `z`)"));
    }
    Ok(a)
}

fn parse_domain(value: &str) -> Result<DomainKind, ConfigError> {
    let mut it = value.split_whitespace();
    let name = it.next().unwrap_or("");
    let rest: Vec<&str> = it.collect();
    let args = numbers("domain", &rest.join(" "), rest.len())?;
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(ConfigError::new("domain", format!("`{name}` takes {n} radius argument(s)")))
        }
    };
    let kind = match name {
        "upper_half_disk" => arity(1).map(|_| DomainKind::UpperHalfDisk { radius: args[0] }),
        "disk" => arity(1).map(|_| DomainKind::Disk { radius: args[0] }),
        "punctured_disk" => arity(1).map(|_| DomainKind::PuncturedDisk { radius: args[0] }),
        "half_annulus" => arity(2).map(|_| DomainKind::HalfAnnulus { inner: args[0], outer: args[1] }),
        "annulus" => arity(2).map(|_| DomainKind::Annulus { inner: args[0], outer: args[1] }),
        _ => Err(ConfigError::new(
            "domain",
            format!("unknown shape `{name}`; use upper_half_disk, disk, punctured_disk, half_annulus or annulus"),
        )),
    }?;
    Domain::new(kind).map_err(|e| ConfigError::new("domain", format!("{e}")))?;
    Ok(kind)
}

fn parse_boundary(value: &str) -> Result<Boundary, ConfigError> {
    let mut it = value.split_whitespace();
    match it.next() {
        Some("real") if it.next().is_none() => Ok(Boundary::RealSegment),
        Some("circle") => {
            let r = numbers("boundary", &it.collect::<Vec<_>>().join(" "), 1)?[0];
            if r > 0.0 {
                Ok(Boundary::Circle { radius: r })
            } else {
                Err(ConfigError::new("boundary", "circle radius must be positive"))
            }
        }
        _ => Err(ConfigError::new("boundary", format!("expected `real` or `circle <radius>`, got `{value}`"))),
    }
}

fn parse_puncture(value: &str) -> Result<Puncture, ConfigError> {
    match value.split_once(" pole ") {
        Some((at, order)) => {
            let m: u32 = order.trim().parse().ok().filter(|m| *m > 0).ok_or_else(|| {
                ConfigError::new("puncture", format!("pole order `{}` is not a positive integer", order.trim()))
            })?;
            Ok(Puncture::with_pole(constant("puncture", at)?, m))
        }
        None => Ok(Puncture::new(constant("puncture", value)?)),
    }
}

fn parse_datum(value: &str) -> Result<ReflectedDatum, ConfigError> {
    match value {
        "x3" => Ok(ReflectedDatum::X3),
        "x2" => Ok(ReflectedDatum::X2),
        "x1-x3" => Ok(ReflectedDatum::Psi),
        _ => Err(ConfigError::new("reflected", format!("expected x3, x2 or x1-x3, got `{value}`"))),
    }
}

fn parse_locus(value: &str) -> Result<CircleOrLine, ConfigError> {
    let (kind, rest) = value.split_once(char::is_whitespace).unwrap_or((value, ""));
    match kind {
        "circle" => {
            let v = numbers("locus", rest, 3)?;
            if v[2] > 0.0 {
                Ok(CircleOrLine::circle(Complex64::new(v[0], v[1]), v[2]))
            } else {
                Err(ConfigError::new("locus", "circle radius must be positive"))
            }
        }
        "line" => {
            let v = numbers("locus", rest, 4)?;
            let d = Complex64::new(v[2], v[3]);
            if d.norm() > 0.0 {
                Ok(CircleOrLine::Line { point: Complex64::new(v[0], v[1]), direction: d / d.norm() })
            } else {
                Err(ConfigError::new("locus", "line direction must be nonzero"))
            }
        }
        _ => Err(ConfigError::new("locus", format!("expected `circle cx cy r` or `line px py dx dy`, got `{value}`"))),
    }
}

fn with_line<T>(r: Result<T, ConfigError>, line: usize) -> Result<T, ConfigError> {
    r.map_err(|e| e.at(line))
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{} - {}*i", z.re, -z.im)
    } else {
        format!("{} + {}*i", z.re, z.im)
    }
}

impl SurfaceConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut values: Vec<(&'static str, String, usize)> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| ConfigError::new(line, "expected `key = value`").at(line_no))?;
            let key = key.trim();
            let value = value.trim().to_string();
            let known =
                KEYS.iter().find(|k| **k == key).ok_or_else(|| ConfigError::new(key, "unknown key").at(line_no))?;
            if *known != "puncture" && values.iter().any(|(k, _, _)| k == known) {
                return Err(ConfigError::new(key, "given more than once").at(line_no));
            }
            if value.is_empty() {
                return Err(ConfigError::new(key, "empty value").at(line_no));
            }
            values.push((known, value, line_no));
        }
        let get = |key: &str| values.iter().find(|(k, _, _)| *k == key).map(|(_, v, l)| (v.as_str(), *l));
        let required = |key: &str| get(key).ok_or_else(|| ConfigError::new(key, "missing"));

        let (f, l) = required("f")?;
        let f = with_line(expression("f", f), l)?;
        let (g, l) = required("g")?;
        let g = with_line(expression("g", g), l)?;
        let (d, l) = required("domain")?;
        let domain = with_line(parse_domain(d), l)?;
        let (z0, l) = required("z0")?;
        let z0 = with_line(constant("z0", z0), l)?;
        let x0 = match get("x0") {
            Some((v, l)) => {
                let v = with_line(numbers("x0", v, 3), l)?;
                LVector::new(v[0], v[1], v[2])
            }
            None => LVector::ZERO,
        };
        let boundary = get("boundary").map(|(v, l)| with_line(parse_boundary(v), l)).transpose()?;
        let mut punctures = Vec::new();
        for (_, v, l) in values.iter().filter(|(k, _, _)| *k == "puncture") {
            punctures.push(with_line(parse_puncture(v), *l)?);
        }
        let tol = match get("tol") {
            Some((v, l)) => {
                let t = with_line(numbers("tol", v, 1), l)?[0];
                if t <= 0.0 {
                    return Err(ConfigError::new("tol", "must be positive").at(l));
                }
                Some(t)
            }
            None => None,
        };
        let max_subdivisions = match get("max_subdivisions") {
            Some((v, l)) => Some(
                v.parse::<usize>()
                    .ok()
                    .filter(|n| *n > 0)
                    .ok_or_else(|| ConfigError::new("max_subdivisions", "must be a positive integer").at(l))?,
            ),
            None => None,
        };
        let plane = match get("plane") {
            Some((v, l)) => {
                let v = with_line(numbers("plane", v, 4), l)?;
                let n = LVector::new(v[0], v[1], v[2]);
                if n == LVector::ZERO {
                    return Err(ConfigError::new("plane", "normal must be nonzero").at(l));
                }
                Some((n, v[3]))
            }
            None => None,
        };
        let ext_keys = ["f_ext", "g_ext", "reflected", "locus"];
        let extension = if ext_keys.iter().any(|k| get(k).is_some()) {
            let missing = ext_keys.iter().find(|k| get(k).is_none());
            if let Some(k) = missing {
                return Err(ConfigError::new(k, "missing; an extended config needs f_ext, g_ext, reflected and locus"));
            }
            if boundary.is_none() {
                return Err(ConfigError::new("boundary", "missing; an extended config must name its boundary arc"));
            }
            let (fe, l1) = get("f_ext").unwrap_or_default();
            let (ge, l2) = get("g_ext").unwrap_or_default();
            let (r, l3) = get("reflected").unwrap_or_default();
            let (lc, l4) = get("locus").unwrap_or_default();
            Some(ExtensionSpec {
                f_ext: with_line(expression("f_ext", fe), l1)?,
                g_ext: with_line(expression("g_ext", ge), l2)?,
                datum: with_line(parse_datum(r), l3)?,
                locus: with_line(parse_locus(lc), l4)?,
            })
        } else {
            None
        };
        Ok(SurfaceConfig { f, g, domain, boundary, z0, x0, punctures, tol, max_subdivisions, plane, extension })
    }

    /// Config describing plain data, with default quadrature settings.
    pub fn from_data(data: &WeierstrassData) -> Self {
        let kind = data.domain().kind();
        let default_boundary = Domain::new(kind).ok().and_then(|d| d.boundary());
        let boundary = data.domain().boundary().filter(|b| Some(*b) != default_boundary);
        SurfaceConfig {
            f: data.f().clone(),
            g: data.g().clone(),
            domain: kind,
            boundary,
            z0: data.z0(),
            x0: data.x0(),
            punctures: data.domain().punctures().to_vec(),
            tol: None,
            max_subdivisions: None,
            plane: None,
            extension: None,
        }
    }

    /// Canonical text; parses back to an equal config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "f = {}", self.f);
        let _ = writeln!(s, "g = {}", self.g);
        let (inner, outer) = self.domain.radii();
        let _ = match self.domain {
            DomainKind::HalfAnnulus { .. } | DomainKind::Annulus { .. } => {
                writeln!(s, "domain = {} {inner} {outer}", self.domain.name())
            }
            _ => writeln!(s, "domain = {} {outer}", self.domain.name()),
        };
        match self.boundary {
            Some(Boundary::RealSegment) => s.push_str("boundary = real\n"),
            Some(Boundary::Circle { radius }) => {
                let _ = writeln!(s, "boundary = circle {radius}");
            }
            None => {}
        }
        let _ = writeln!(s, "z0 = {}", fmt_complex(self.z0));
        let _ = writeln!(s, "x0 = {} {} {}", self.x0.x1, self.x0.x2, self.x0.x3);
        for p in &self.punctures {
            match p.g_pole_order {
                Some(m) => writeln!(s, "puncture = {} pole {m}", fmt_complex(p.at)),
                None => writeln!(s, "puncture = {}", fmt_complex(p.at)),
            }
            .ok();
        }
        if let Some(t) = self.tol {
            let _ = writeln!(s, "tol = {t:e}");
        }
        if let Some(m) = self.max_subdivisions {
            let _ = writeln!(s, "max_subdivisions = {m}");
        }
        if let Some((n, d)) = self.plane {
            let _ = writeln!(s, "plane = {} {} {} {d}", n.x1, n.x2, n.x3);
        }
        if let Some(e) = &self.extension {
            let _ = writeln!(s, "f_ext = {}", e.f_ext);
            let _ = writeln!(s, "g_ext = {}", e.g_ext);
            let _ = writeln!(s, "reflected = {}", e.datum.name());
            let _ = match e.locus {
                CircleOrLine::Circle { center, radius } => {
                    writeln!(s, "locus = circle {} {} {radius}", center.re, center.im)
                }
                CircleOrLine::Line { point, direction } => {
                    writeln!(s, "locus = line {} {} {} {}", point.re, point.im, direction.re, direction.im)
                }
            };
        }
        s
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        let mut q = QuadratureConfig::default();
        if let Some(t) = self.tol {
            q.abs_tol = t;
        }
        if let Some(m) = self.max_subdivisions {
            q.max_subdivisions = m;
        }
        q
    }

    pub fn plane(&self) -> Option<Plane> {
        self.plane.and_then(|(n, d)| Plane::new(n, d).ok())
    }

    /// The original (unextended) data.
    pub fn data(&self) -> Result<WeierstrassData, ConfigError> {
        let mut domain = Domain::new(self.domain).map_err(|e| ConfigError::new("domain", format!("{e}")))?;
        for p in &self.punctures {
            domain = domain.with_puncture(*p).map_err(|e| ConfigError::new("puncture", format!("{e}")))?;
        }
        if let Some(b) = self.boundary {
            domain = domain.with_boundary(b).map_err(|e| ConfigError::new("boundary", format!("{e}")))?;
        }
        WeierstrassData::new(self.f.clone(), self.g.clone(), domain, self.z0, self.x0)
            .map_err(|e| ConfigError::new("z0", format!("{e}")))
    }

    pub fn model(&self) -> Result<Model, ConfigError> {
        let data = self.data()?;
        match (&self.extension, self.boundary) {
            (Some(e), Some(boundary)) => {
                let rule = ReflectionRule { boundary, locus: e.locus, datum: e.datum };
                ExtendedSurface::from_parts(data, e.f_ext.clone(), e.g_ext.clone(), rule)
                    .map(|s| Model::Extended(Box::new(s)))
                    .map_err(|err| ConfigError::new("boundary", format!("{err}")))
            }
            _ => Ok(Model::Plain(data)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CATENOID: &str = "# catenoid\nf = 1/z^2\ng = z\ndomain = annulus 0.2 1\nz0 = 1\n";

    #[test]
    fn parses_minimal_config() {
        let c = SurfaceConfig::parse(CATENOID).unwrap();
        assert_eq!(c.domain, DomainKind::Annulus { inner: 0.2, outer: 1.0 });
        assert_eq!(c.z0, Complex64::new(1.0, 0.0));
        assert_eq!(c.x0, LVector::ZERO);
        assert!(matches!(c.model().unwrap(), Model::Plain(_)));
    }

    #[test]
    fn errors_name_the_field() {
        let e = SurfaceConfig::parse("g = z\ndomain = disk 1\nz0 = 0\n").unwrap_err();
        assert_eq!(e.field, "f");
        let e = SurfaceConfig::parse("f = 1 +\ng = z\ndomain = disk 1\nz0 = 0\n").unwrap_err();
        assert_eq!((e.field.as_str(), e.line), ("f", Some(1)));
        let e = SurfaceConfig::parse("f = 1\ng = z\ndomain = square 1\nz0 = 0\n").unwrap_err();
        assert_eq!(e.field, "domain");
        let e = SurfaceConfig::parse("f = 1\ng = z\ndomain = disk 1\nz0 = z\n").unwrap_err();
        assert_eq!(e.field, "z0");
        let e = SurfaceConfig::parse("f = 1\ncolour = red\n").unwrap_err();
        assert_eq!(e.field, "colour");
        let e = SurfaceConfig::parse("f = 1\nf = 2\n").unwrap_err();
        assert!(e.to_string().contains("more than once"));
        let e = SurfaceConfig::parse("f = 1\ng = z\ndomain = disk 1\nz0 = 0\nplane = 0 0 0 1\n").unwrap_err();
        assert_eq!(e.field, "plane");
    }

    #[test]
    fn basepoint_outside_is_reported() {
        let c = SurfaceConfig::parse("f = 1\ng = z\ndomain = disk 1\nz0 = 2\n").unwrap();
        assert_eq!(c.data().unwrap_err().field, "z0");
    }

    #[test]
    fn text_round_trip() {
        let text = "f = 1/z^2\ng = 0.5*exp(i*z)\ndomain = half_annulus 0.1 0.9\nboundary = real\nz0 = 0.3 + 0.2*i\n\
                    x0 = 1 -2 0.5\npuncture = 0.4 + 0.4*i pole 2\npuncture = -0.3 + 0.1*i\ntol = 1e-9\n\
                    max_subdivisions = 100\nplane = 0 0 1 -0.25\nf_ext = sconj(z)\ng_ext = 1/z\nreflected = x3\n\
                    locus = line 1 0 0 1\n";
        let c = SurfaceConfig::parse(text).unwrap();
        let again = SurfaceConfig::parse(&c.to_text()).unwrap();
        assert_eq!(c, again);
        assert_eq!(again.to_text(), c.to_text());
        assert_eq!(c.punctures[0].g_pole_order, Some(2));
    }

    #[test]
    fn from_data_matches_fixture() {
        let data = maxsurf_core::verify::catenoid_fixture();
        let c = SurfaceConfig::from_data(&data);
        assert_eq!(c.data().unwrap(), data);
        assert_eq!(SurfaceConfig::parse(&c.to_text()).unwrap(), c);
    }
}
