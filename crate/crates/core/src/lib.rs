//! Maximal surfaces in Lorentz–Minkowski space from Weierstrass data, and
//! their analytic extension across a plane met at constant angle.
//!
//! The crate is `no_std` with `alloc`. IO, file formats and the command line
//! live in the companion `maxsurf` crate.
//!
//! * [`expr`]: holomorphic expressions in `z` (parse, print, evaluate, differentiate).
//! * [`minkowski`]: the (2,1) inner product, Lorentz cross product, causal classes, planes.
//! * [`weierstrass`]: the data `(f, g)`, the null triple `φ`, path-integrated
//!   surface values, Gauss map and conformal factor.
//! * [`extension`]: reflection of the data across a boundary arc whose image
//!   lies in a spacelike, timelike or lightlike plane.
//! * [`verify`]: quantitative diagnostics and the catenoid reference.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod expr;
pub mod extension;
pub mod fit;
pub mod fixtures;
pub mod minkowski;
pub mod verify;
pub mod weierstrass;

pub use num_complex::Complex64;

pub use expr::{parse, Expr, Func, ParseError};
pub use minkowski::{causal_class, lnorm, lorentz_cross, lorentz_inner, CausalClass, LVector, Plane};
pub use weierstrass::{
    conformal_factor, evaluate_surface, gauss_map, phi, stereo_inverse, Domain, DomainKind, PhiTriple,
    QuadratureConfig, Surface, SurfaceError, WeierstrassData,
};
