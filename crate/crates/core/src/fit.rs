//! Circle/line fitting in the complex plane and polynomial extrapolation.

use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

use crate::expr::Expr;

/// A generalized circle in the `g`-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CircleOrLine {
    Circle {
        center: Complex64,
        radius: f64,
    },
    /// Line through `point` with unit `direction`.
    Line {
        point: Complex64,
        direction: Complex64,
    },
}

impl fmt::Display for CircleOrLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircleOrLine::Circle { center, radius } => write!(f, "circle(center {center}, radius {radius})"),
            CircleOrLine::Line { point, direction } => write!(f, "line(through {point}, direction {direction})"),
        }
    }
}

impl CircleOrLine {
    pub fn circle(center: Complex64, radius: f64) -> Self {
        CircleOrLine::Circle { center, radius }
    }

    pub fn line(point: Complex64, direction: Complex64) -> Self {
        CircleOrLine::Line { point, direction: direction / direction.norm() }
    }

    pub fn distance(&self, w: Complex64) -> f64 {
        match *self {
            CircleOrLine::Circle { center, radius } => ((w - center).norm() - radius).abs(),
            CircleOrLine::Line { point, direction } => ((w - point) * direction.conj()).im.abs(),
        }
    }

    /// Size used for relative tolerances: the radius, or 0 for a line.
    pub fn radius_or_zero(&self) -> f64 {
        match *self {
            CircleOrLine::Circle { radius, .. } => radius,
            CircleOrLine::Line { .. } => 0.0,
        }
    }

    /// Inversion in the circle, or mirror reflection in the line.
    pub fn reflect(&self, w: Complex64) -> Complex64 {
        match *self {
            CircleOrLine::Circle { center, radius } => center + radius * radius / (w - center).conj(),
            CircleOrLine::Line { point, direction } => point + direction * direction * (w - point).conj(),
        }
    }

    /// The reflection written for a holomorphic argument: given the Schwarz
    /// conjugate `ĝ(z) = conj(g(conj z))`, returns the expression whose value
    /// at `z` is `reflect(g(conj z))`.
    pub fn reflect_schwarz(&self, g_hat: Expr) -> Expr {
        match *self {
            CircleOrLine::Circle { center, radius } => {
                Expr::constant(center) + Expr::real(radius * radius) / (g_hat - Expr::constant(center.conj()))
            }
            CircleOrLine::Line { point, direction } => {
                Expr::constant(point) + Expr::constant(direction * direction) * (g_hat - Expr::constant(point.conj()))
            }
        }
    }

    /// Distance between two loci for cross-checks: centre offset plus radius
    /// difference for circles, offset and angle for lines, infinite otherwise.
    pub fn discrepancy(&self, other: &CircleOrLine) -> f64 {
        match (*self, *other) {
            (CircleOrLine::Circle { center: c1, radius: r1 }, CircleOrLine::Circle { center: c2, radius: r2 }) => {
                (c1 - c2).norm() + (r1 - r2).abs()
            }
            (CircleOrLine::Line { point: p1, direction: d1 }, CircleOrLine::Line { direction: d2, .. }) => {
                other.distance(p1) + (d1 * d2.conj()).im.abs()
            }
            _ => f64::INFINITY,
        }
    }
}

/// Curvature below which a fitted locus is reported as a line.
pub const LINE_CURVATURE: f64 = 1e-6;

/// Least-squares fit of a circle or line through `points` (algebraic fit
/// `A|w|² + D x + E y + F = 0` on centred, rescaled data). Returns the locus
/// and the largest point distance from it; `None` for fewer than three
/// points or a degenerate spread.
pub fn fit_circle_or_line(points: &[Complex64]) -> Option<(CircleOrLine, f64)> {
    if points.len() < 3 {
        return None;
    }
    let n = points.len() as f64;
    let mean = points.iter().fold(Complex64::new(0.0, 0.0), |a, p| a + p) / n;
    let spread = (points.iter().map(|p| (p - mean).norm_sqr()).sum::<f64>() / n).sqrt();
    if !(spread > 0.0) || !spread.is_finite() {
        return None;
    }
    let mut m = [[0.0f64; 4]; 4];
    for p in points {
        let w = (p - mean) / spread;
        let row = [w.norm_sqr(), w.re, w.im, 1.0];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += row[i] * row[j];
            }
        }
    }
    let [a, d, e, f] = smallest_eigenvector(m);
    let disc = d * d + e * e - 4.0 * a * f;
    if !(disc > 0.0) {
        return None;
    }
    let curvature = 2.0 * a.abs() / disc.sqrt() / spread;
    let locus = if curvature < LINE_CURVATURE {
        let norm2 = d * d + e * e;
        let foot = Complex64::new(d, e) * (-f / norm2);
        CircleOrLine::line(mean + foot * spread, Complex64::new(-e, d))
    } else {
        let center = Complex64::new(-d / (2.0 * a), -e / (2.0 * a));
        let radius = disc.sqrt() / (2.0 * a.abs());
        CircleOrLine::circle(mean + center * spread, radius * spread)
    };
    let residual = points.iter().map(|p| locus.distance(*p)).fold(0.0, f64::max);
    Some((locus, residual))
}

/// Cyclic Jacobi iteration on a symmetric 4×4 matrix; eigenvector of the
/// smallest eigenvalue.
fn smallest_eigenvector(mut a: [[f64; 4]; 4]) -> [f64; 4] {
    let mut v = [[0.0f64; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..64 {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let diag: f64 = (0..4).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-30 * diag.max(1e-300) {
            break;
        }
        for p in 0..3 {
            for q in p + 1..4 {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let k = (0..4).min_by(|&i, &j| a[i][i].total_cmp(&a[j][j])).expect("four entries");
    [v[0][k], v[1][k], v[2][k], v[3][k]]
}

/// Neville extrapolation of samples `(h_k, y_k)` to `h = 0`.
pub fn extrapolate_to_zero(hs: &[f64], ys: &[Complex64]) -> Complex64 {
    assert_eq!(hs.len(), ys.len());
    let mut p: alloc::vec::Vec<Complex64> = ys.to_vec();
    let n = p.len();
    for level in 1..n {
        for i in 0..n - level {
            let (hi, hj) = (hs[i], hs[i + level]);
            p[i] = (p[i + 1] * hi - p[i] * hj) / (hi - hj);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use approx::assert_abs_diff_eq;

    fn on_circle(center: Complex64, r: f64, n: usize) -> Vec<Complex64> {
        (0..n).map(|k| center + Complex64::from_polar(r, 0.3 + 0.2 * k as f64)).collect()
    }

    #[test]
    fn fits_exact_circle() {
        let pts = on_circle(Complex64::new(0.0, -1.0), 2.0f64.sqrt(), 9);
        let (locus, res) = fit_circle_or_line(&pts).unwrap();
        match locus {
            CircleOrLine::Circle { center, radius } => {
                assert_abs_diff_eq!(center.re, 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(center.im, -1.0, epsilon = 1e-12);
                assert_abs_diff_eq!(radius, 2.0f64.sqrt(), epsilon = 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert!(res < 1e-12);
    }

    #[test]
    fn fits_line() {
        let pts: Vec<Complex64> = (0..7).map(|k| Complex64::new(1.0, -0.5 + 0.1 * k as f64)).collect();
        let (locus, res) = fit_circle_or_line(&pts).unwrap();
        assert!(matches!(locus, CircleOrLine::Line { .. }), "{locus:?}");
        assert!(res < 1e-12);
        assert!(locus.distance(Complex64::new(1.0, 7.0)) < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_circle_or_line(&[Complex64::new(1.0, 0.0); 5]).is_none());
        assert!(fit_circle_or_line(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]).is_none());
    }

    #[test]
    fn reflections_fix_their_locus_and_are_involutions() {
        let circle = CircleOrLine::circle(Complex64::new(0.5, 0.0), 0.5);
        let line = CircleOrLine::line(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
        let on = Complex64::new(0.5, 0.5);
        assert!((circle.reflect(on) - on).norm() < 1e-15);
        assert!((line.reflect(Complex64::new(1.0, 3.0)) - Complex64::new(1.0, 3.0)).norm() < 1e-15);
        let w = Complex64::new(0.3, -0.7);
        for locus in [circle, line] {
            assert!((locus.reflect(locus.reflect(w)) - w).norm() < 1e-14);
        }
        assert!((line.reflect(w) - (Complex64::new(2.0, 0.0) - w.conj())).norm() < 1e-15);
    }

    #[test]
    fn neville_is_exact_for_polynomials() {
        let hs = [0.1, 0.05, 0.025, 0.0125];
        let ys: Vec<Complex64> = hs.iter().map(|h| Complex64::new(2.0 + 3.0 * h - h * h * h, h * h)).collect();
        let y0 = extrapolate_to_zero(&hs, &ys);
        assert_abs_diff_eq!(y0.re, 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(y0.im, 0.0, epsilon = 1e-13);
    }
}
