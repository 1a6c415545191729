//! Adaptive Gauss–Kronrod (7/15) quadrature of `Re ∫ φ dω` along a segment.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::SurfaceError;
use crate::minkowski::LVector;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy, Debug)]
struct Piece {
    lo: f64,
    hi: f64,
    value: LVector,
    error: f64,
}

fn real_parts(v: [Complex64; 3]) -> LVector {
    LVector::new(v[0].re, v[1].re, v[2].re)
}

fn max_abs(v: LVector) -> f64 {
    v.x1.abs().max(v.x2.abs()).max(v.x3.abs())
}

/// One GK15 panel on `[lo, hi] ⊂ [0, 1]` of the segment `a → b`.
fn panel<F>(integrand: &mut F, a: Complex64, b: Complex64, lo: f64, hi: f64) -> Result<Piece, SurfaceError>
where
    F: FnMut(Complex64) -> Result<[Complex64; 3], SurfaceError>,
{
    let dir = b - a;
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    // dω = dir · dt, so each sample is φ(a + t·dir)·dir.
    let mut sample = |t: f64| -> Result<LVector, SurfaceError> {
        let phi = integrand(a + dir * t)?;
        Ok(real_parts([phi[0] * dir, phi[1] * dir, phi[2] * dir]))
    };
    let mid = sample(centre)?;
    let mut kronrod = mid * WGK[7];
    let mut gauss = mid * WG[3];
    for (k, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dt = half * x;
        let pair = sample(centre - dt)? + sample(centre + dt)?;
        kronrod = kronrod + pair * w;
        if k % 2 == 1 {
            gauss = gauss + pair * WG[k / 2];
        }
    }
    let value = kronrod * half;
    let error = max_abs((kronrod - gauss) * half);
    Ok(Piece { lo, hi, value, error })
}

/// Integrates `Re ∫_a^b φ(ω) dω` to absolute tolerance `tol` (max-norm over
/// the three coordinates). Returns the integral and the achieved error estimate.
pub(crate) fn integrate_segment<F>(
    mut integrand: F,
    a: Complex64,
    b: Complex64,
    tol: f64,
    max_subdivisions: usize,
) -> Result<(LVector, f64), SurfaceError>
where
    F: FnMut(Complex64) -> Result<[Complex64; 3], SurfaceError>,
{
    if a == b {
        return Ok((LVector::ZERO, 0.0));
    }
    let mut pieces: Vec<Piece> = Vec::new();
    pieces.push(panel(&mut integrand, a, b, 0.0, 1.0)?);
    loop {
        let total_error: f64 = pieces.iter().map(|p| p.error).sum();
        if total_error <= tol {
            break;
        }
        if pieces.len() >= max_subdivisions {
            return Err(SurfaceError::QuadratureTolerance { achieved: total_error, requested: tol });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("non-empty");
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if mid <= p.lo || mid >= p.hi {
            return Err(SurfaceError::QuadratureTolerance { achieved: total_error, requested: tol });
        }
        pieces.push(panel(&mut integrand, a, b, p.lo, mid)?);
        pieces.push(panel(&mut integrand, a, b, mid, p.hi)?);
    }
    // Sum in parameter order so the result does not depend on refinement history.
    pieces.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    let value = pieces.iter().fold(LVector::ZERO, |acc, p| acc + p.value);
    let error = pieces.iter().map(|p| p.error).sum();
    Ok((value, error))
}
