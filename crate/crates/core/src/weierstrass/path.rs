//! Polyline integration paths that avoid punctures and annulus holes.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // unused when std is linked into the build
use num_traits::Float;

use super::domain::Obstacle;

/// Largest angle subtended by one chord of a detour arc.
const ARC_STEP: f64 = PI / 16.0;
const MAX_PASSES: usize = 8;

/// Distance from `c` to the closed segment `a → b`.
pub fn segment_distance(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (c - a).norm();
    }
    let t = (((c - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * t - c).norm()
}

/// Route `a → b` around the obstacle: radial leg, arc of chords at a radius
/// that keeps every chord outside the obstacle, radial leg. The arc goes the
/// shorter way round (counter-clockwise on ties).
fn detour(a: Complex64, b: Complex64, obstacle: &Obstacle) -> Vec<Complex64> {
    let c = obstacle.center;
    let (ra, ta) = (a - c).to_polar();
    let (rb, tb) = (b - c).to_polar();
    let min_radius = obstacle.radius / (ARC_STEP / 2.0).cos() * (1.0 + 1e-3);
    let radius = ra.min(rb).max(min_radius);
    let mut sweep = tb - ta;
    while sweep > PI {
        sweep -= 2.0 * PI;
    }
    while sweep <= -PI {
        sweep += 2.0 * PI;
    }
    if sweep == -PI {
        sweep = PI;
    }
    let steps = ((sweep.abs() / ARC_STEP).ceil() as usize).max(1);
    let mut pts = vec![a];
    for k in 0..=steps {
        let t = ta + sweep * k as f64 / steps as f64;
        let p = c + Complex64::from_polar(radius, t);
        if (p - *pts.last().expect("non-empty")).norm() > 0.0 {
            pts.push(p);
        }
    }
    if (b - *pts.last().expect("non-empty")).norm() > 0.0 {
        pts.push(b);
    }
    pts
}

fn outside(p: Complex64, o: &Obstacle) -> bool {
    (p - o.center).norm() >= o.radius * (1.0 - 1e-12)
}

/// A polyline from `a` to `b` whose segments all keep at least the obstacle
/// radius away from every obstacle centre. `None` when no such path was found.
pub fn build_path(a: Complex64, b: Complex64, obstacles: &[Obstacle]) -> Option<Vec<Complex64>> {
    let mut path = vec![a, b];
    for _ in 0..MAX_PASSES {
        let mut next = vec![path[0]];
        let mut changed = false;
        for w in path.windows(2) {
            let (p, q) = (w[0], w[1]);
            let hit = obstacles
                .iter()
                .filter(|o| segment_distance(p, q, o.center) < o.radius * (1.0 - 1e-12))
                .min_by(|x, y| (x.center - p).norm().total_cmp(&(y.center - p).norm()));
            match hit {
                Some(o) if outside(p, o) && outside(q, o) => {
                    next.extend(detour(p, q, o).into_iter().skip(1));
                    changed = true;
                }
                Some(_) => return None,
                None => next.push(q),
            }
        }
        path = next;
        if !changed {
            return Some(path);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clear(path: &[Complex64], obstacles: &[Obstacle]) -> bool {
        path.windows(2).all(|w| obstacles.iter().all(|o| segment_distance(w[0], w[1], o.center) >= o.radius))
    }

    #[test]
    fn straight_when_unobstructed() {
        let p = build_path(Complex64::new(0.1, 0.1), Complex64::new(0.5, 0.2), &[]).unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn goes_around_annulus_hole() {
        let hole = [Obstacle { center: Complex64::new(0.0, 0.0), radius: 0.2 }];
        let a = Complex64::new(1.0, 0.0);
        let b = Complex64::from_polar(0.2231, 3.0);
        let p = build_path(a, b, &hole).unwrap();
        assert!(p.len() > 2);
        assert!(clear(&p, &hole));
        assert_eq!(p[0], a);
        assert_eq!(*p.last().unwrap(), b);
        // Upper half-plane is the shorter way round.
        assert!(p.iter().all(|z| z.im >= -1e-15));
    }

    #[test]
    fn antipodal_points_on_the_hole() {
        let hole = [Obstacle { center: Complex64::new(0.0, 0.0), radius: 0.5 }];
        let p = build_path(Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0), &hole).unwrap();
        assert!(clear(&p, &hole));
    }

    #[test]
    fn endpoint_inside_obstacle_fails() {
        let hole = [Obstacle { center: Complex64::new(0.0, 0.0), radius: 0.5 }];
        assert!(build_path(Complex64::new(0.1, 0.0), Complex64::new(1.0, 0.0), &hole).is_none());
    }
}
