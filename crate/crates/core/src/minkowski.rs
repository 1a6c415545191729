//! Linear algebra of Lorentz–Minkowski 3-space, signature (+, +, −).

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

/// A point or vector of L³.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LVector {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl LVector {
    pub const ZERO: LVector = LVector::new(0.0, 0.0, 0.0);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        LVector { x1, x2, x3 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// `x1 y1 + x2 y2 − x3 y3`.
    pub fn inner(self, other: LVector) -> f64 {
        lorentz_inner(self, other)
    }

    pub fn cross(self, other: LVector) -> LVector {
        lorentz_cross(self, other)
    }

    /// Euclidean dot product, for fitting and residuals only.
    pub fn euclid_dot(self, other: LVector) -> f64 {
        self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }

    pub fn euclid_norm(self) -> f64 {
        self.euclid_dot(self).sqrt()
    }
}

impl fmt::Display for LVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x1, self.x2, self.x3)
    }
}

impl Add for LVector {
    type Output = LVector;
    fn add(self, o: LVector) -> LVector {
        LVector::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for LVector {
    type Output = LVector;
    fn sub(self, o: LVector) -> LVector {
        LVector::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for LVector {
    type Output = LVector;
    fn neg(self) -> LVector {
        LVector::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for LVector {
    type Output = LVector;
    fn mul(self, k: f64) -> LVector {
        LVector::new(self.x1 * k, self.x2 * k, self.x3 * k)
    }
}

impl Mul<LVector> for f64 {
    type Output = LVector;
    fn mul(self, v: LVector) -> LVector {
        v * self
    }
}

pub fn lorentz_inner(x: LVector, y: LVector) -> f64 {
    x.x1 * y.x1 + x.x2 * y.x2 - x.x3 * y.x3
}

/// Lorentz cross product `(a2 b3 − a3 b2, a3 b1 − a1 b3, a2 b1 − a1 b2)`.
///
/// This is the Euclidean cross product with the third component negated, so
/// the result is Lorentz-orthogonal to both factors.
pub fn lorentz_cross(a: LVector, b: LVector) -> LVector {
    LVector::new(a.x2 * b.x3 - a.x3 * b.x2, a.x3 * b.x1 - a.x1 * b.x3, a.x2 * b.x1 - a.x1 * b.x2)
}

/// `√|⟨x, x⟩|`.
pub fn lnorm(x: LVector) -> f64 {
    lorentz_inner(x, x).abs().sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CausalClass {
    Spacelike,
    Lightlike,
    Timelike,
}

impl CausalClass {
    pub fn name(self) -> &'static str {
        match self {
            CausalClass::Spacelike => "spacelike",
            CausalClass::Lightlike => "lightlike",
            CausalClass::Timelike => "timelike",
        }
    }

    /// Planes carry the class dual to that of their normal.
    pub fn dual(self) -> CausalClass {
        match self {
            CausalClass::Spacelike => CausalClass::Timelike,
            CausalClass::Lightlike => CausalClass::Lightlike,
            CausalClass::Timelike => CausalClass::Spacelike,
        }
    }
}

impl fmt::Display for CausalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exact classification by the sign of `⟨x, x⟩`. The zero vector is spacelike.
pub fn causal_class(x: LVector) -> CausalClass {
    if x == LVector::ZERO {
        return CausalClass::Spacelike;
    }
    let q = lorentz_inner(x, x);
    if q > 0.0 {
        CausalClass::Spacelike
    } else if q < 0.0 {
        CausalClass::Timelike
    } else {
        CausalClass::Lightlike
    }
}

/// Classification for computed vectors: `|⟨x,x⟩| ≤ eps·|x|²` counts as lightlike.
pub fn causal_class_tol(x: LVector, eps: f64) -> CausalClass {
    if x == LVector::ZERO {
        return CausalClass::Spacelike;
    }
    let q = lorentz_inner(x, x);
    if q.abs() <= eps * x.euclid_dot(x) {
        CausalClass::Lightlike
    } else if q > 0.0 {
        CausalClass::Spacelike
    } else {
        CausalClass::Timelike
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroNormal;

impl fmt::Display for ZeroNormal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("plane normal must be nonzero")
    }
}

/// The plane `{x : ⟨x, n⟩ = offset}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plane {
    normal: LVector,
    offset: f64,
}

impl Plane {
    pub fn new(normal: LVector, offset: f64) -> Result<Self, ZeroNormal> {
        if normal == LVector::ZERO || !normal.is_finite() || !offset.is_finite() {
            return Err(ZeroNormal);
        }
        Ok(Plane { normal, offset })
    }

    pub fn normal(&self) -> LVector {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Spacelike, timelike or lightlike when the normal is timelike,
    /// spacelike or lightlike respectively.
    pub fn class(&self) -> CausalClass {
        causal_class(self.normal).dual()
    }

    /// Signed level `⟨x, n⟩ − offset`; zero on the plane.
    pub fn level(&self, x: LVector) -> f64 {
        lorentz_inner(x, self.normal) - self.offset
    }
}

pub fn plane_class(p: &Plane) -> CausalClass {
    p.class()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const E1: LVector = LVector::new(1.0, 0.0, 0.0);
    const E2: LVector = LVector::new(0.0, 1.0, 0.0);
    const E3: LVector = LVector::new(0.0, 0.0, 1.0);

    #[test]
    fn inner_product_signature() {
        assert_eq!(lorentz_inner(E1, E1), 1.0);
        assert_eq!(lorentz_inner(E3, E3), -1.0);
        let l = LVector::new(1.0, 0.0, 1.0);
        assert_eq!(lorentz_inner(l, l), 0.0);
    }

    #[test]
    fn cross_product_as_printed() {
        assert_eq!(lorentz_cross(E1, E2), LVector::new(0.0, 0.0, -1.0));
        let a = LVector::new(0.3, -1.2, 2.5);
        assert_eq!(lorentz_cross(a, a), LVector::ZERO);
    }

    #[test]
    fn causal_classes() {
        assert_eq!(causal_class(E1), CausalClass::Spacelike);
        assert_eq!(causal_class(LVector::new(1.0, 0.0, 1.0)), CausalClass::Lightlike);
        assert_eq!(causal_class(LVector::ZERO), CausalClass::Spacelike);
        assert_eq!(causal_class(E3), CausalClass::Timelike);
        let nearly = LVector::new(1.0, 0.0, 1.0 + 1e-14);
        assert_eq!(causal_class(nearly), CausalClass::Timelike);
        assert_eq!(causal_class_tol(nearly, 1e-12), CausalClass::Lightlike);
    }

    #[test]
    fn plane_classes() {
        let p = |n: LVector| Plane::new(n, 0.0).unwrap().class();
        assert_eq!(p(E3), CausalClass::Spacelike);
        assert_eq!(p(E2), CausalClass::Timelike);
        assert_eq!(p(LVector::new(1.0, 0.0, 1.0)), CausalClass::Lightlike);
        assert_eq!(Plane::new(LVector::ZERO, 1.0), Err(ZeroNormal));
    }

    #[test]
    fn norms() {
        assert_eq!(lnorm(LVector::new(0.0, 0.0, 2.0)), 2.0);
        assert_eq!(lnorm(LVector::new(3.0, 4.0, 0.0)), 5.0);
        assert_eq!(lnorm(LVector::new(1.0, 0.0, 1.0)), 0.0);
    }

    #[test]
    fn plane_level() {
        // ⟨x, (0,0,1)⟩ = −x3, so P((0,0,1), 2) is x3 = −2.
        let plane = Plane::new(E3, 2.0).unwrap();
        assert_eq!(plane.level(LVector::new(5.0, 1.0, -2.0)), 0.0);
    }

    fn vector() -> impl Strategy<Value = LVector> {
        (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b, c)| LVector::new(a, b, c))
    }

    proptest! {
        #[test]
        fn cross_is_lorentz_orthogonal(a in vector(), b in vector()) {
            let n = lorentz_cross(a, b);
            let scale = a.euclid_norm() * b.euclid_norm() * (a.euclid_norm() + b.euclid_norm()) + 1.0;
            prop_assert!(lorentz_inner(n, a).abs() <= 1e-12 * scale);
            prop_assert!(lorentz_inner(n, b).abs() <= 1e-12 * scale);
        }

        #[test]
        fn class_is_scale_invariant(a in vector(), k in prop_oneof![-1e3..-1e-3f64, 1e-3..1e3f64]) {
            prop_assume!(a != LVector::ZERO);
            prop_assert_eq!(causal_class(a), causal_class(a * k));
        }

        #[test]
        fn plane_class_ignores_offset(a in vector(), d1 in -5.0..5.0f64, d2 in -5.0..5.0f64) {
            prop_assume!(a != LVector::ZERO);
            prop_assert_eq!(Plane::new(a, d1).unwrap().class(), Plane::new(a, d2).unwrap().class());
        }
    }
}
