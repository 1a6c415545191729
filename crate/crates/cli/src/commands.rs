//! The five commands. Each returns its standard output, standard error and
//! exit code: 0 pass, 1 hypothesis or check failure, 2 input error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use maxsurf_core::extension::{extend, ContactOptions};
use maxsurf_core::verify::{catenoid_fixture, full_diagnostics, GridSpec};
use maxsurf_core::{conformal_factor, evaluate_surface, gauss_map, Complex64, LVector, Plane, QuadratureConfig};

use crate::config::{ExtensionSpec, Model, SurfaceConfig};
use crate::mesh::build_mesh;
use crate::report::{Contact, Matching, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(message: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

/// Config file plus the effective quadrature settings.
pub struct Loaded {
    pub config: SurfaceConfig,
    pub model: Model,
    pub quadrature: QuadratureConfig,
}

pub fn load(path: &Path, tol: Option<f64>) -> Result<Loaded, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::input_error(format!("cannot read config {}: {e}", path.display())))?;
    let config = SurfaceConfig::parse(&text).map_err(Outcome::input_error)?;
    let model = config.model().map_err(Outcome::input_error)?;
    let mut quadrature = config.quadrature();
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Outcome::input_error("--tol must be a positive number"));
        }
        quadrature.abs_tol = t;
    }
    Ok(Loaded { config, model, quadrature })
}

/// SHA-256 of the canonical config text, in hex.
pub fn config_hash(config: &SurfaceConfig) -> String {
    let digest = Sha256::digest(config.to_text().as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn check(path: &Path, tol: Option<f64>) -> Outcome {
    let loaded = match load(path, tol) {
        Ok(l) => l,
        Err(o) => return o,
    };
    let grid = GridSpec { quadrature: loaded.quadrature, ..GridSpec::default() };
    let diagnostics = full_diagnostics(loaded.model.subject(), &grid);
    let report = Report::from_diagnostics("check", &diagnostics);
    let code = if report.passed { EXIT_PASS } else { EXIT_FAIL };
    Outcome { code, stdout: report.to_json(), stderr: String::new() }
}

/// Parse `a,b` (or `a b`) into two finite numbers.
pub fn parse_pair(s: &str) -> Option<(f64, f64)> {
    let parts: Vec<f64> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>().ok().filter(|x| x.is_finite()))
        .collect::<Option<_>>()?;
    match parts[..] {
        [a, b] => Some((a, b)),
        _ => None,
    }
}

fn vector_line(label: &str, v: LVector) -> String {
    format!("{label} {:.16e} {:.16e} {:.16e}\n", v.x1, v.x2, v.x3)
}

pub fn eval(path: &Path, at: &str, tol: Option<f64>) -> Outcome {
    let loaded = match load(path, tol) {
        Ok(l) => l,
        Err(o) => return o,
    };
    let Some((u, v)) = parse_pair(at) else {
        return Outcome::input_error(format!("--at expects `u,v`, got `{at}`"));
    };
    let z = Complex64::new(u, v);
    let surface = loaded.model.surface();
    if !surface.domain().contains(z) {
        return Outcome {
            code: EXIT_FAIL,
            stdout: String::new(),
            stderr: format!("error: {z} is outside the domain\n"),
        };
    }
    let x = match evaluate_surface(surface, z, &loaded.quadrature) {
        Ok(x) => x,
        Err(e) => return Outcome { code: EXIT_FAIL, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let mut out = vector_line("X", x);
    let mut stderr = String::new();
    match gauss_map(surface, z) {
        Ok(n) => out.push_str(&vector_line("N", n)),
        Err(e) => {
            out.push_str("N degenerate\n");
            let _ = writeln!(stderr, "warning: {e}");
        }
    }
    match conformal_factor(surface, z) {
        Ok(c) => {
            let _ = writeln!(out, "conformal_factor {c:.16e}");
        }
        Err(e) => return Outcome { code: EXIT_FAIL, stdout: out, stderr: format!("{stderr}error: {e}\n") },
    }
    Outcome { code: EXIT_PASS, stdout: out, stderr }
}

/// Parse `nx,ny,nz,d`.
pub fn parse_plane(s: &str) -> Option<Plane> {
    let v: Vec<f64> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>().ok())
        .collect::<Option<_>>()?;
    match v[..] {
        [a, b, c, d] => Plane::new(LVector::new(a, b, c), d).ok(),
        _ => None,
    }
}

pub fn extend_cmd(path: &Path, plane: Option<&str>, output: Option<&Path>, tol: Option<f64>) -> Outcome {
    let loaded = match load(path, tol) {
        Ok(l) => l,
        Err(o) => return o,
    };
    let Model::Plain(data) = &loaded.model else {
        return Outcome::input_error("config field `f_ext`: the config is already extended");
    };
    let plane = match plane {
        Some(s) => match parse_plane(s) {
            Some(p) => p,
            None => {
                return Outcome::input_error(format!("--plane expects `nx,ny,nz,d` with a nonzero normal, got `{s}`"))
            }
        },
        None => match loaded.config.plane() {
            Some(p) => p,
            None => return Outcome::input_error("config field `plane`: missing (or pass --plane nx,ny,nz,d)"),
        },
    };
    let opts = ContactOptions { quadrature: loaded.quadrature, ..ContactOptions::default() };
    let mut report = Report::new("extend");
    let ext = match extend(data, &plane, &opts) {
        Ok(e) => e,
        Err(e) => {
            report.error = Some(e.to_string());
            return Outcome { code: EXIT_FAIL, stdout: report.to_json(), stderr: format!("error: {e}\n") };
        }
    };
    if let Some(c) = ext.contact() {
        report.contact = Some(Contact::from(c));
        report.warnings = c.warnings.clone();
        report.sheet = Some(c.sheet.name());
    }
    if let Some(m) = ext.matching() {
        report.matching = Some(Matching::from(m));
        report.passed = m.passed;
    }
    let mut config = loaded.config.clone();
    let n = plane.normal();
    config.plane = Some((n, plane.offset()));
    config.boundary = Some(ext.boundary());
    config.extension = Some(ExtensionSpec {
        f_ext: ext.f_ext().clone(),
        g_ext: ext.g_ext().clone(),
        datum: ext.rule().datum,
        locus: ext.rule().locus,
    });
    let text = config.to_text();
    match output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                return Outcome::input_error(format!("cannot write {}: {e}", p.display()));
            }
            report.output = Some(p.display().to_string());
        }
        None => report.extended_config = Some(text),
    }
    let code = if report.passed { EXIT_PASS } else { EXIT_FAIL };
    Outcome { code, stdout: report.to_json(), stderr: String::new() }
}

/// Parse `NxM`.
pub fn parse_grid(s: &str) -> Option<(usize, usize)> {
    let (a, b) = s.split_once(['x', 'X'])?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// Sidecar path next to the OBJ file.
pub fn sidecar_path(obj: &Path) -> PathBuf {
    let candidate = obj.with_extension("json");
    if candidate == obj {
        let mut s = obj.as_os_str().to_owned();
        s.push(".gauss.json");
        PathBuf::from(s)
    } else {
        candidate
    }
}

pub fn mesh(path: &Path, grid: &str, output: &Path, eps: f64, tol: Option<f64>) -> Outcome {
    let loaded = match load(path, tol) {
        Ok(l) => l,
        Err(o) => return o,
    };
    let Some((n, m)) = parse_grid(grid) else {
        return Outcome::input_error(format!("--grid expects `NxM`, got `{grid}`"));
    };
    if n < 2 || m < 2 {
        return Outcome::input_error(format!("--grid must be at least 2x2, got {n}x{m}"));
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return Outcome::input_error("--eps must be a nonnegative number");
    }
    let mesh = build_mesh(loaded.model.surface(), n, m, eps, &loaded.quadrature);
    let obj = mesh.to_obj(VERSION, &config_hash(&loaded.config));
    let sidecar = sidecar_path(output);
    for (p, body) in [(output, obj), (sidecar.as_path(), mesh.sidecar_json())] {
        if let Err(e) = std::fs::write(p, body) {
            return Outcome::input_error(format!("cannot write {}: {e}", p.display()));
        }
    }
    let triangles = mesh.triangles().len();
    let masked = mesh.masked.iter().filter(|x| **x).count();
    Outcome {
        code: EXIT_PASS,
        stdout: format!(
            "wrote {} ({} triangles, {masked} masked cell(s)) and {}\n",
            output.display(),
            triangles,
            sidecar.display()
        ),
        stderr: String::new(),
    }
}

/// The built-in catenoid fixture as a config file.
pub fn catenoid_config() -> String {
    let mut s = String::from(
        "# Lorentzian catenoid f = 1/z^2, g = z, X(e^(u+iv)) = (sinh u cos v, sinh u sin v, u) for u < 0\n",
    );
    s.push_str(&SurfaceConfig::from_data(&catenoid_fixture()).to_text());
    s
}

pub fn catenoid() -> Outcome {
    Outcome { code: EXIT_PASS, stdout: catenoid_config(), stderr: String::new() }
}
