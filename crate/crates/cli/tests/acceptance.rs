//! Acceptance criteria 1 to 10. Runs without the libtest harness so every
//! criterion prints its PASS/FAIL line; exits nonzero if any fails.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use maxsurf_core::extension::{
    boundary_limits, extend, extend_circular, printed_g_extension, BoundarySamples, CaseParameters, ContactOptions,
};
use maxsurf_core::fit::extrapolate_to_zero;
use maxsurf_core::verify::{
    catenoid_fixture, catenoid_slab, classify_obstruction, full_diagnostics, harmonicity_order, involution_check,
    GridSpec, Obstruction,
};
use maxsurf_core::weierstrass::{Boundary, Puncture};
use maxsurf_core::{
    evaluate_surface, fixtures, parse, phi, CausalClass, Complex64, Domain, Expr, LVector, Plane, QuadratureConfig,
    Surface, WeierstrassData,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Uniform point of the domain by rejection from its bounding box, kept
/// `margin` away from the punctures and the origin when it is removed.
fn sample(domain: &Domain, rng: &mut ChaCha8Rng, margin: f64) -> Complex64 {
    let (_, outer) = domain.kind().radii();
    loop {
        let z = c(rng.gen_range(-outer..outer), rng.gen_range(-outer..outer));
        let clear = domain.punctures().iter().all(|p| (z - p.at).norm() > margin) && z.norm() > margin;
        if domain.contains(z) && clear {
            return z;
        }
    }
}

fn x3_plane(level: f64) -> Plane {
    Plane::new(LVector::new(0.0, 0.0, 1.0), -level).unwrap()
}

fn random_polynomial(rng: &mut ChaCha8Rng, degree: usize) -> Expr {
    let mut e = Expr::real(0.0);
    for k in 0..=degree {
        let coeff = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        e = e + Expr::constant(coeff) * Expr::z().powi(k as i32);
    }
    e
}

/// `φ` from `(f, g)` written out here, independent of the library's triple.
fn phi_by_hand(f: Complex64, g: Complex64) -> [Complex64; 3] {
    let one = c(1.0, 0.0);
    [0.5 * f * (one + g * g), c(0.0, 0.5) * f * (one - g * g), f * g]
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let poly = WeierstrassData::new(
        random_polynomial(&mut rng, 3),
        random_polynomial(&mut rng, 3),
        Domain::disk(1.0),
        c(0.0, 0.0),
        LVector::ZERO,
    )
    .map_err(|e| e.to_string())?;
    let sets: [(&str, WeierstrassData); 5] = [
        ("catenoid", catenoid_fixture()),
        ("spacelike", fixtures::spacelike().0),
        ("timelike", fixtures::timelike().0),
        ("lightlike", fixtures::lightlike().0),
        ("random polynomial", poly),
    ];
    let mut worst_null = 0.0f64;
    let mut worst_metric = 0.0f64;
    let mut nonpositive = 0;
    for (name, data) in &sets {
        for _ in 0..10_000 {
            let z = sample(data.domain(), &mut rng, 1e-3);
            let (f, g) = (data.f().eval(z).map_err(|e| format!("{name}: {e}"))?, data.g().eval(z).unwrap());
            let p = phi(data, z).map_err(|e| format!("{name}: {e}"))?.to_array();
            let hand = phi_by_hand(f, g);
            let size: f64 = hand.iter().map(|x| x.norm_sqr()).sum();
            // Library triple must agree with the formulas, and satisfy the null identity.
            for k in 0..3 {
                worst_null = worst_null.max((p[k] - hand[k]).norm_sqr().sqrt() / size.sqrt().max(1e-300));
            }
            let null = (p[0] * p[0] + p[1] * p[1] - p[2] * p[2]).norm() / size;
            worst_null = worst_null.max(null);
            let metric = p[0].norm_sqr() + p[1].norm_sqr() - p[2].norm_sqr();
            let closed = 0.5 * f.norm_sqr() * (1.0 - g.norm_sqr()).powi(2);
            worst_metric = worst_metric.max((metric - closed).abs() / size);
            if metric <= 0.0 {
                nonpositive += 1;
            }
        }
    }
    ensure(
        worst_null < 1e-12 && worst_metric < 1e-12 && nonpositive == 0,
        format!(
            "5 datasets x 10^4 points: null residual {worst_null:.2e}, metric vs closed form {worst_metric:.2e}, \
             {nonpositive} non-positive metric value(s)"
        ),
    )
}

fn criterion_2() -> Outcome {
    let data = catenoid_fixture();
    let q = QuadratureConfig::default();
    let mut worst = 0.0f64;
    let n = 60;
    for i in 0..=n {
        let u = -1.5 + 1.4 * i as f64 / n as f64;
        for j in 0..n {
            let v = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
            let z = Complex64::from_polar(u.exp(), v);
            let x = evaluate_surface(&data, z, &q).map_err(|e| e.to_string())?;
            // Closed-form antiderivatives ½(z − 1/z), (i/2)(2 − z − 1/z), log z, real parts.
            let one = c(1.0, 0.0);
            let a1 = 0.5 * (z - one / z);
            let a2 = c(0.0, 0.5) * (2.0 * one - z - one / z);
            let a3 = z.ln();
            let reference = [u.sinh() * v.cos(), u.sinh() * v.sin(), u];
            for k in 0..3 {
                let got = [x.x1, x.x2, x.x3][k];
                let antiderivative = [a1.re, a2.re, a3.re][k];
                worst = worst.max((got - reference[k]).abs()).max((got - antiderivative).abs());
            }
        }
    }
    ensure(worst <= 1e-8, format!("{} points, u in [-1.5, -0.1]: max error {worst:.2e}", (n + 1) * n))
}

fn criterion_3() -> Outcome {
    let (a, b) = (-1.2f64, -0.8f64);
    let slab = catenoid_slab(a, b);
    let ext = extend(&slab, &x3_plane(b), &ContactOptions::default()).map_err(|e| e.to_string())?;
    let q = QuadratureConfig::default();
    let mut worst = 0.0f64;
    let n = 64;
    for k in 0..n {
        let theta = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / n as f64;
        // Inversion in |z| = e^b sends the slice |z| = e^a to |z| = e^(2b - a).
        let z = Complex64::from_polar((2.0 * b - a).exp(), theta);
        let x = evaluate_surface(&ext, z, &q).map_err(|e| e.to_string())?;
        worst = worst.max((x.x3 - (2.0 * b - a)).abs());
    }
    let m = ext.matching().ok_or("no matching report")?;
    let c1 = [m.g_gap, m.f_gap, m.dg_gap, m.df_gap].into_iter().fold(0.0, f64::max);
    ensure(
        worst <= 1e-7 && c1 <= 1e-7,
        format!("a = {a}, b = {b}: slice distance from x3 = 2b - a {worst:.2e}, C1 gap of f, g {c1:.2e}"),
    )
}

fn lower_half_points(rng: &mut ChaCha8Rng, radius: f64, n: usize) -> Vec<Complex64> {
    let d = Domain::upper_half_disk(radius);
    (0..n).map(|_| sample(&d, rng, 1e-3).conj()).filter(|z| z.im < 0.0).collect()
}

fn criterion_4() -> Outcome {
    let (data, plane) = fixtures::timelike();
    let lambda = 1.0;
    let printed = printed_g_extension(data.g(), CaseParameters::Timelike { lambda }).ok_or("no printed formula")?;
    let ext = extend(&data, &plane, &ContactOptions::default()).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut self_gap = 0.0f64;
    for z in lower_half_points(&mut rng, 0.3, 1000) {
        let g = data.g().eval(z).unwrap();
        self_gap = self_gap.max((printed.eval(z).unwrap() - g).norm()).max((ext.g_ext().eval(z).unwrap() - g).norm());
    }
    let mut locus_gap = 0.0f64;
    for k in 0..=100 {
        let u = -0.3 + 0.6 * k as f64 / 100.0;
        let g = data.g().eval(c(u, 0.0)).unwrap();
        locus_gap = locus_gap.max((g.re.powi(2) + (g.im + lambda).powi(2) - (1.0 + lambda * lambda)).abs());
    }
    ensure(
        self_gap <= 1e-10 && locus_gap <= 1e-10,
        format!("lambda = 1: self-reproduction {self_gap:.2e}, boundary locus residual {locus_gap:.2e}"),
    )
}

fn criterion_5() -> Outcome {
    let (data, plane) = fixtures::lightlike();
    let ext = extend(&data, &plane, &ContactOptions::default()).map_err(|e| e.to_string())?;
    let lambda = match ext.contact().map(|c| c.params) {
        Some(CaseParameters::Lightlike { lambda }) => lambda,
        other => return Err(format!("unexpected case {other:?}")),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (center, r) = (c(0.5, 0.0), 0.5);
    let mut sym = 0.0f64;
    for z in lower_half_points(&mut rng, 0.5, 1000) {
        // Schwarz reflection by hand: the anti-holomorphic inversion in
        // |w - ½| = ½ applied to g(conj z).
        let w = data.g().eval(z.conj()).unwrap();
        let inverted = center + r * r / (w - center).conj();
        sym = sym.max((inverted - data.g().eval(z).unwrap()).norm());
    }
    let mut ident = 0.0f64;
    let one = c(1.0, 0.0);
    for _ in 0..10_000 {
        let z = sample(data.domain(), &mut rng, 1e-3);
        let (f, g) = data.fg(z).unwrap();
        let p = phi(&data, z).unwrap();
        let lhs = 0.5 * f * (one - g) * (one - g);
        ident = ident.max((lhs - (p.phi1 - p.phi3)).norm() / lhs.norm().max(1e-300));
    }
    ensure(
        (lambda + 2.0).abs() < 1e-8 && sym <= 1e-10 && ident <= 1e-12,
        format!("measured lambda = {lambda:.10}: inversion symmetry {sym:.2e}, psi identity {ident:.2e} relative"),
    )
}

fn all_extensions() -> Result<Vec<(&'static str, maxsurf_core::extension::ExtendedSurface)>, String> {
    let opts = ContactOptions::default();
    let e = |r: Result<_, maxsurf_core::extension::ExtensionError>| r.map_err(|e| e.to_string());
    let (s, sp) = fixtures::spacelike();
    let (t, tp) = fixtures::timelike();
    let (l, lp) = fixtures::lightlike();
    let (ll, llp) = fixtures::lightlike_line();
    let slab = catenoid_slab(-1.2, -0.8);
    Ok(vec![
        ("spacelike", e(extend(&s, &sp, &opts))?),
        ("timelike", e(extend(&t, &tp, &opts))?),
        ("lightlike", e(extend(&l, &lp, &opts))?),
        ("lightlike line", e(extend(&ll, &llp, &opts))?),
        ("catenoid slab", e(extend(&slab, &x3_plane(-0.8), &opts))?),
        ("conelike", e(extend_circular(&catenoid_fixture(), 1.0, &x3_plane(0.0), &opts))?),
    ])
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, ext) in all_extensions()? {
        let pts: Vec<Complex64> = (0..1000).map(|_| sample(ext.original().domain(), &mut rng, 1e-3)).collect();
        let rec = involution_check(&ext, &pts);
        ok &= rec.passed && rec.samples == 1000;
        lines.push(format!("{name} {:.1e}", rec.value));
    }
    ensure(ok, format!("10^3 points each: {}", lines.join(", ")))
}

fn criterion_7() -> Outcome {
    let steps = [1e-3, 5e-4, 2.5e-4];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut min_order = f64::INFINITY;
    let mut unfit = 0;
    let mut count = 0;
    for (name, ext) in all_extensions()? {
        let scale = ext.original().domain().scale();
        let h = steps.map(|s| s * scale);
        for _ in 0..6 {
            // Stay clear of the arc so the stencil does not straddle it.
            let z = loop {
                let z = sample(ext.original().domain(), &mut rng, 0.05 * scale);
                let far = ext.arc_samples(64).iter().all(|a| (z - a).norm() > 0.05 * scale);
                if far && ext.domain().contains(z + h[0]) && ext.domain().contains(z - h[0]) {
                    break z;
                }
            };
            for p in [z, ext.mirror(z)] {
                let est = harmonicity_order(&ext, p, h).map_err(|e| format!("{name}: {e}"))?;
                count += 1;
                match est.order {
                    Some(o) => min_order = min_order.min(o),
                    None => unfit += 1,
                }
            }
        }
    }
    ensure(
        min_order >= 1.8 && unfit == 0,
        format!("{count} points on both sides of 6 extensions: min fitted order {min_order:.4}, {unfit} below the rounding floor"),
    )
}

fn criterion_8() -> Outcome {
    // Synthetic approach values of <N, n> shrinking with the distance to the arc.
    let heights = [0.04, 0.02, 0.01, 0.005, 0.0025];
    let contacts: Vec<f64> = (0..9)
        .map(|k| {
            let ys: Vec<Complex64> = heights.iter().map(|h| c(h * (1.0 + 0.1 * k as f64) + h * h, 0.0)).collect();
            extrapolate_to_zero(&heights, &ys).re
        })
        .collect();
    let spacelike = classify_obstruction(CausalClass::Spacelike, &contacts, &[], 1e-8);
    let impossible = matches!(spacelike, Obstruction::ImpossibleContact { .. })
        && spacelike.message().starts_with("impossible contact");

    // g = -e^(iz) on a small half-disk: |g| -> 1 along the diameter and g ≈ -1.
    let data = WeierstrassData::new(
        parse("1").unwrap(),
        parse("-exp(i*z)").unwrap(),
        Domain::upper_half_disk(0.05),
        c(0.0, 0.02),
        LVector::ZERO,
    )
    .map_err(|e| e.to_string())?;
    let plane = Plane::new(LVector::new(1.0, 0.0, 1.0), 0.0).unwrap();
    let samples = BoundarySamples::default_for(data.domain(), Boundary::RealSegment);
    let limits = boundary_limits(&data, plane.normal(), Boundary::RealSegment, &samples).map_err(|e| e.to_string())?;
    let lightlike = classify_obstruction(CausalClass::Lightlike, &limits.contact, &limits.g, 1e-8);
    let degenerate = match lightlike {
        Obstruction::DegenerateLightlike { g_limit, .. } => (g_limit + 1.0).norm() < 0.06,
        _ => false,
    };
    ensure(
        impossible && degenerate,
        format!("spacelike: \"{}\"; lightlike: \"{}\"", spacelike.message(), lightlike.message()),
    )
}

fn pole_data(f: &str) -> WeierstrassData {
    let domain = Domain::punctured_disk(0.9).with_puncture(Puncture::with_pole(c(0.0, 0.0), 1)).unwrap();
    WeierstrassData::new(parse(f).unwrap(), parse("1/z").unwrap(), domain, c(0.5, 0.0), LVector::ZERO).unwrap()
}

fn criterion_9() -> Outcome {
    let grid = GridSpec::default();
    let good = full_diagnostics(&pole_data("z^2"), &grid);
    let bad = full_diagnostics(&pole_data("z"), &grid);
    let g = good.get("pole_zero_pairing").ok_or("missing record")?;
    let b = bad.get("pole_zero_pairing").ok_or("missing record")?;
    ensure(
        g.passed && !b.passed,
        format!(
            "g = 1/z with declared pole: f = z^2 {} ({}), f = z {} ({})",
            if g.passed { "accepted" } else { "rejected" },
            g.note,
            if b.passed { "accepted" } else { "rejected" },
            b.note
        ),
    )
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_maxsurf");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = dir.path().join("catenoid.cfg");
    let out = Command::new(bin).arg("catenoid").output().map_err(|e| e.to_string())?;
    std::fs::write(&cfg, &out.stdout).map_err(|e| e.to_string())?;
    let check = || Command::new(bin).arg("check").arg(&cfg).output().map(|o| (o.status.code(), o.stdout));
    let (c1, c2) = (check().map_err(|e| e.to_string())?, check().map_err(|e| e.to_string())?);
    let mut files = Vec::new();
    for name in ["a.obj", "b.obj"] {
        let p = dir.path().join(name);
        let run = Command::new(bin)
            .args(["mesh", cfg.to_str().unwrap(), "--grid", "12x24", "-o", p.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        if !run.status.success() {
            return Err(format!("mesh exited with {}", run.status));
        }
        let obj = std::fs::read(&p).map_err(|e| e.to_string())?;
        let side = std::fs::read(p.with_extension("json")).map_err(|e| e.to_string())?;
        files.push((obj, side));
    }
    let same_check = c1 == c2 && c1.0 == Some(0);
    let same_mesh = files[0] == files[1];
    ensure(
        same_check && same_mesh,
        format!(
            "check report {} ({} bytes), mesh OBJ and sidecar {} ({} + {} bytes)",
            if same_check { "identical" } else { "differs" },
            c1.1.len(),
            if same_mesh { "identical" } else { "differ" },
            files[0].0.len(),
            files[0].1.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Weierstrass identity suite", criterion_1),
        ("catenoid round trip", criterion_2),
        ("spacelike extension of the catenoid", criterion_3),
        ("timelike self-symmetric fixture", criterion_4),
        ("lightlike fixture, lambda = -2", criterion_5),
        ("involution", criterion_6),
        ("harmonicity on both sides", criterion_7),
        ("obstruction checks", criterion_8),
        ("pole/zero pairing", criterion_9),
        ("determinism of check and mesh", criterion_10),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag}: {name}: {detail} [{:.2}s]", k + 1, t.elapsed().as_secs_f64());
    }
    println!("acceptance: {} of 10 passed in {:.2}s", 10 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
