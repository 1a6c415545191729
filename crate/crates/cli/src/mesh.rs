//! Triangulated samples of a surface, written as Wavefront OBJ with a JSON
//! sidecar for the Gauss map and conformal factor.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use maxsurf_core::{
    conformal_factor, evaluate_surface, gauss_map, Complex64, DomainKind, LVector, QuadratureConfig, Surface,
};

#[derive(Clone, Debug, PartialEq)]
pub struct MeshVertex {
    pub z: Complex64,
    /// `None` where the surface could not be evaluated.
    pub position: Option<LVector>,
    pub gauss: Option<LVector>,
    pub conformal: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMesh {
    pub grid: (usize, usize),
    pub vertices: Vec<MeshVertex>,
    /// Corners of each grid cell, counter-clockwise in the parameter plane.
    pub cells: Vec<[usize; 4]>,
    pub masked: Vec<bool>,
    pub eps: f64,
}

/// Grid of parameter points, `n` along the first axis and `m` along the
/// second, and whether the second axis wraps around.
fn parameter_grid(kind: DomainKind, n: usize, m: usize) -> (Vec<Complex64>, bool) {
    let lerp = |a: f64, b: f64, k: usize, count: usize| a + (b - a) * k as f64 / (count - 1) as f64;
    let (inner, outer) = kind.radii();
    let outer = if outer.is_finite() { outer } else { 2.0 * inner.max(1.0) };
    let mut pts = Vec::with_capacity(n * m);
    let wraps = matches!(kind, DomainKind::Annulus { .. } | DomainKind::PuncturedDisk { .. });
    match kind {
        DomainKind::Disk { radius } => {
            let a = radius / 2f64.sqrt();
            for i in 0..n {
                for j in 0..m {
                    pts.push(Complex64::new(lerp(-a, a, i, n), lerp(-a, a, j, m)));
                }
            }
        }
        DomainKind::UpperHalfDisk { radius } => {
            // Largest rectangle [-2a, 2a] x [0, a] inside the half-disk.
            let a = radius / 5f64.sqrt();
            for i in 0..n {
                for j in 0..m {
                    pts.push(Complex64::new(lerp(-2.0 * a, 2.0 * a, i, n), lerp(0.0, a, j, m)));
                }
            }
        }
        DomainKind::HalfAnnulus { .. } => {
            for i in 0..n {
                for j in 0..m {
                    pts.push(Complex64::from_polar(lerp(inner, outer, i, n), lerp(0.0, PI, j, m)));
                }
            }
        }
        DomainKind::Annulus { .. } | DomainKind::PuncturedDisk { .. } => {
            // The origin of a punctured disk is kept out by a small hole.
            let inner = if inner > 0.0 { inner } else { 0.05 * outer };
            for i in 0..n {
                for j in 0..m {
                    let t = -PI + 2.0 * PI * j as f64 / m as f64;
                    pts.push(Complex64::from_polar(lerp(inner, outer, i, n), t));
                }
            }
        }
    }
    (pts, wraps)
}

/// Sample `surface` on an `n x m` grid. Cells with a corner that fails to
/// evaluate or whose conformal factor is below `eps` are masked.
pub fn build_mesh(surface: &dyn Surface, n: usize, m: usize, eps: f64, q: &QuadratureConfig) -> SurfaceMesh {
    let (points, wraps) = parameter_grid(surface.domain().kind(), n, m);
    let vertices: Vec<MeshVertex> = points
        .into_iter()
        .map(|z| {
            let inside = surface.domain().contains(z);
            let position = if inside { evaluate_surface(surface, z, q).ok() } else { None };
            MeshVertex {
                z,
                position,
                gauss: if inside { gauss_map(surface, z).ok() } else { None },
                conformal: if inside { conformal_factor(surface, z).unwrap_or(f64::NAN) } else { f64::NAN },
            }
        })
        .collect();
    let columns = if wraps { m } else { m - 1 };
    let mut cells = Vec::new();
    for i in 0..n - 1 {
        for j in 0..columns {
            let j1 = (j + 1) % m;
            cells.push([i * m + j, (i + 1) * m + j, (i + 1) * m + j1, i * m + j1]);
        }
    }
    let bad = |v: &MeshVertex| v.position.is_none() || v.conformal.is_nan() || v.conformal < eps;
    let masked = cells.iter().map(|c| c.iter().any(|k| bad(&vertices[*k]))).collect();
    SurfaceMesh { grid: (n, m), vertices, cells, masked, eps }
}

#[derive(Serialize)]
struct SidecarVertex {
    index: usize,
    z: [f64; 2],
    gauss: Option<[f64; 3]>,
    conformal: f64,
}

#[derive(Serialize)]
struct Sidecar {
    schema: &'static str,
    grid: [usize; 2],
    eps: f64,
    triangles: usize,
    masked_cells: Vec<usize>,
    vertices: Vec<SidecarVertex>,
}

impl SurfaceMesh {
    /// 1-based OBJ index of each grid vertex; vertices without a position are dropped.
    fn obj_indices(&self) -> Vec<Option<usize>> {
        let mut next = 0;
        self.vertices
            .iter()
            .map(|v| {
                v.position.map(|_| {
                    next += 1;
                    next
                })
            })
            .collect()
    }

    /// Triangles over unmasked cells, as grid vertex indices.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for (c, masked) in self.cells.iter().zip(&self.masked) {
            if !masked {
                out.push([c[0], c[1], c[2]]);
                out.push([c[0], c[2], c[3]]);
            }
        }
        out
    }

    pub fn to_obj(&self, version: &str, config_hash: &str) -> String {
        let idx = self.obj_indices();
        let mut s = String::new();
        let _ = writeln!(s, "# maxsurf {version}");
        let _ = writeln!(s, "# config sha256 {config_hash}");
        let masked = self.masked.iter().filter(|m| **m).count();
        let _ = writeln!(s, "# grid {}x{}, {masked} masked cell(s), eps {:e}", self.grid.0, self.grid.1, self.eps);
        for v in &self.vertices {
            if let Some(p) = v.position {
                let _ = writeln!(s, "v {:.16e} {:.16e} {:.16e}", p.x1, p.x2, p.x3);
            }
        }
        for t in self.triangles() {
            let k = t.map(|i| idx[i].expect("unmasked cells have evaluated corners"));
            let _ = writeln!(s, "f {} {} {}", k[0], k[1], k[2]);
        }
        s
    }

    pub fn sidecar_json(&self) -> String {
        let idx = self.obj_indices();
        let vertices = self
            .vertices
            .iter()
            .zip(&idx)
            .filter_map(|(v, i)| {
                i.map(|index| SidecarVertex {
                    index,
                    z: [v.z.re, v.z.im],
                    gauss: v.gauss.map(LVector::to_array),
                    conformal: v.conformal,
                })
            })
            .collect();
        let sidecar = Sidecar {
            schema: "maxsurf-mesh/1",
            grid: [self.grid.0, self.grid.1],
            eps: self.eps,
            triangles: self.triangles().len(),
            masked_cells: self.masked.iter().enumerate().filter(|(_, m)| **m).map(|(k, _)| k).collect(),
            vertices,
        };
        let mut s = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
        s.push('\n');
        s
    }
}
