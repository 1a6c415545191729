//! Reference data whose boundary arc maps into a plane in normal form, one
//! per plane class. Each is invariant under its own reflection, so the
//! extended formulas must reproduce the originals pointwise.

use num_complex::Complex64;

use crate::expr::parse;
use crate::minkowski::{LVector, Plane};
use crate::weierstrass::{Domain, WeierstrassData};

/// Data on the upper half-disk of `radius`, based at `0` with `X(0) = 0`.
fn half_disk(f: &str, g: &str, radius: f64) -> WeierstrassData {
    WeierstrassData::new(
        parse(f).expect("fixture f parses"),
        parse(g).expect("fixture g parses"),
        Domain::upper_half_disk(radius),
        Complex64::new(0.0, 0.0),
        LVector::ZERO,
    )
    .expect("fixture basepoint inside")
}

/// `g = ½e^{iz}`, `φ₃ = i`: the diameter maps into `x₃ = 0`, `c = −5/3`.
pub fn spacelike() -> (WeierstrassData, Plane) {
    let data = half_disk("2*i*exp(-i*z)", "0.5*exp(i*z)", 0.6);
    (data, Plane::new(LVector::new(0.0, 0.0, 1.0), 0.0).expect("nonzero normal"))
}

/// `g = −i + √2 e^{i(π/2+z)}`, `φ₂ = i`: the diameter maps into `x₂ = 0`, `c = 1`.
pub fn timelike() -> (WeierstrassData, Plane) {
    let g = "-i + sqrt(2)*exp(i*(pi/2 + z))";
    let f = "2/(1 - (-i + sqrt(2)*exp(i*(pi/2 + z)))^2)";
    (half_disk(f, g, 0.3), Plane::new(LVector::new(0.0, 1.0, 0.0), 0.0).expect("nonzero normal"))
}

/// `g = ½ + ½e^{i(π/2+z)}`, `φ₁ − φ₃ = i`: the diameter maps into `x₁ = x₃`, `c = −1`.
pub fn lightlike() -> (WeierstrassData, Plane) {
    let g = "0.5 + 0.5*exp(i*(pi/2 + z))";
    let f = "2*i/(1 - (0.5 + 0.5*exp(i*(pi/2 + z))))^2";
    (half_disk(f, g, 0.5), Plane::new(LVector::new(1.0, 0.0, 1.0), 0.0).expect("nonzero normal"))
}

/// `g = 1 + i e^z`, `φ₁ − φ₃ = i`: `Re g = 1` on the diameter, `c = 1`.
pub fn lightlike_line() -> (WeierstrassData, Plane) {
    let g = "1 + i*exp(z)";
    let f = "2*i/(1 - (1 + i*exp(z)))^2";
    (half_disk(f, g, 0.5), Plane::new(LVector::new(1.0, 0.0, 1.0), 0.0).expect("nonzero normal"))
}

/// `f = 1, g = 0` on the unit disk: the plane `x₃ = 0` parametrized by `(u/2, −v/2)`.
pub fn plane() -> WeierstrassData {
    WeierstrassData::new(
        parse("1").expect("parses"),
        parse("0").expect("parses"),
        Domain::disk(1.0),
        Complex64::new(0.0, 0.0),
        LVector::ZERO,
    )
    .expect("basepoint inside")
}
