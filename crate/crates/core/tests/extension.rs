use maxsurf_core::extension::{
    extend, extend_circular, measure_contact, printed_g_extension, BoundarySamples, CaseParameters, CircleOrLine,
    ContactOptions, ExtensionError, ReflectedDatum,
};
use maxsurf_core::verify::{catenoid_slab, involution_check, slab_reflection_gap};
use maxsurf_core::weierstrass::Boundary;
use maxsurf_core::{
    evaluate_surface, fixtures, parse, Complex64, Domain, LVector, Plane, QuadratureConfig, Surface, WeierstrassData,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn lower_half_points(radius: f64) -> Vec<Complex64> {
    (0..40)
        .map(|k| {
            let t = -std::f64::consts::PI * (k as f64 + 0.5) / 40.0;
            Complex64::from_polar(radius * (0.2 + 0.7 * ((k % 5) as f64) / 4.0), t)
        })
        .collect()
}

fn x3_plane(level: f64) -> Plane {
    // <x, (0,0,1)> = -x3, so x3 = level is offset -level.
    Plane::new(LVector::new(0.0, 0.0, 1.0), -level).unwrap()
}

#[test]
fn catenoid_contact_on_its_boundary_circle() {
    let b = -0.8f64;
    let slab = catenoid_slab(-1.2, b);
    let boundary = Boundary::Circle { radius: b.exp() };
    let samples = BoundarySamples::default_for(slab.domain(), boundary);
    let contact = measure_contact(&slab, &x3_plane(b), boundary, &samples, &ContactOptions::default()).unwrap();
    assert!(contact.deviation < 1e-8, "{}", contact.deviation);
    let r2 = (2.0 * b).exp();
    assert!((contact.c + (1.0 + r2) / (1.0 - r2)).abs() < 1e-8);
    match contact.fitted {
        CircleOrLine::Circle { center, radius } => {
            assert!(center.norm() < 1e-10);
            assert!((radius - b.exp()).abs() < 1e-10);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn half_exponential_contact_constant() {
    let data = WeierstrassData::new(
        parse("1").unwrap(),
        parse("0.5*exp(i*z)").unwrap(),
        Domain::upper_half_disk(1.0),
        c(0.0, 0.0),
        LVector::ZERO,
    )
    .unwrap();
    let samples = BoundarySamples::default_for(data.domain(), Boundary::RealSegment);
    let contact =
        measure_contact(&data, &x3_plane(0.0), Boundary::RealSegment, &samples, &ContactOptions::default()).unwrap();
    assert!((contact.c + 5.0 / 3.0).abs() < 1e-9, "{}", contact.c);
    let CaseParameters::Spacelike { theta } = contact.params else { panic!("{:?}", contact.params) };
    assert!((theta.cosh() - 5.0 / 3.0).abs() < 1e-9);
    assert!(((theta / 2.0).tanh() - 0.5).abs() < 1e-9);
    match contact.fitted {
        CircleOrLine::Circle { center, radius } => {
            assert!(center.norm() < 1e-9);
            assert!((radius - 0.5).abs() < 1e-9);
        }
        other => panic!("{other:?}"),
    }
    // The uncorrected coefficient belongs to the other sheet.
    assert!((contact.printed_radius.unwrap() - 2.0).abs() < 1e-8);
    assert!(contact.warnings.iter().any(|w| w.contains("coth")));
    // f = 1 does not keep x3 constant along the diameter.
    assert!(contact.containment_residual > 1e-3);
}

#[test]
fn varying_angle_is_a_hypothesis_violation() {
    let data = WeierstrassData::new(
        parse("1").unwrap(),
        parse("0.3 + 0.2*z").unwrap(),
        Domain::upper_half_disk(1.0),
        c(0.0, 0.0),
        LVector::ZERO,
    )
    .unwrap();
    let err = extend(&data, &x3_plane(0.0), &ContactOptions::default()).unwrap_err();
    match err {
        ExtensionError::HypothesisViolation { reason } => assert!(reason.contains("constant-angle"), "{reason}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn spacelike_fixture_reproduces_itself() {
    let (data, plane) = fixtures::spacelike();
    let ext = extend(&data, &plane, &ContactOptions::default()).unwrap();
    assert_eq!(ext.rule().datum, ReflectedDatum::X3);
    for z in lower_half_points(0.6) {
        let (f, g) = data.fg(z).unwrap();
        let (fe, ge) = ext.fg(z).unwrap();
        assert!((g - ge).norm() < 1e-12 * (1.0 + g.norm()));
        assert!((f - fe).norm() < 1e-12 * (1.0 + f.norm()));
    }
    // Boundary values of the extended g stay on |w| = 1/2.
    for k in 0..21 {
        let u = -0.55 + 1.1 * k as f64 / 20.0;
        let w = ext.g_ext().eval(c(u, 0.0)).unwrap();
        assert!((w.norm() - 0.5).abs() < 1e-10);
    }
    assert!(ext.matching().unwrap().passed);
}

#[test]
fn spacelike_odd_reflection_of_height() {
    let (data, plane) = fixtures::spacelike();
    let ext = extend(&data, &plane, &ContactOptions::default()).unwrap();
    let q = QuadratureConfig::default();
    for z in [c(0.1, 0.2), c(-0.3, 0.4), c(0.25, 0.05)] {
        let up = evaluate_surface(&ext, z, &q).unwrap();
        let down = evaluate_surface(&ext, z.conj(), &q).unwrap();
        assert!((up.x3 + down.x3).abs() < 1e-9);
    }
}

#[test]
fn catenoid_slab_reflection_maps_slice_to_slice() {
    let (a, b) = (-1.2f64, -0.8f64);
    let slab = catenoid_slab(a, b);
    let ext = extend(&slab, &x3_plane(b), &ContactOptions::default()).unwrap();
    let m = ext.matching().unwrap();
    assert!(m.g_gap <= 1e-7 && m.f_gap <= 1e-7 && m.dg_gap <= 1e-7 && m.df_gap <= 1e-7, "{m:?}");
    let gap = slab_reflection_gap(&ext, a, b, 48, &QuadratureConfig::default()).unwrap();
    assert!(gap <= 1e-7, "{gap}");
}

#[test]
fn circular_reflection_fixes_its_circle_and_is_an_involution() {
    let (a, b) = (-1.2f64, -0.8f64);
    let slab = catenoid_slab(a, b);
    let ext = extend_circular(&slab, b.exp(), &x3_plane(b), &ContactOptions::default()).unwrap();
    for k in 0..16 {
        let z = Complex64::from_polar(b.exp(), 0.4 * k as f64);
        assert!((ext.g_ext().eval(z).unwrap() - slab.g().eval(z).unwrap()).norm() < 1e-10);
    }
    let pts: Vec<Complex64> = (0..30).map(|k| Complex64::from_polar(0.32 + 0.004 * k as f64, 0.2 * k as f64)).collect();
    assert!(involution_check(&ext, &pts).passed);
}

#[test]
fn timelike_fixture_and_its_locus() {
    let (data, plane) = fixtures::timelike();
    let ext = extend(&data, &plane, &ContactOptions::default()).unwrap();
    let contact = ext.contact().unwrap();
    let CaseParameters::Timelike { lambda } = contact.params else { panic!() };
    assert!((lambda - 1.0).abs() < 1e-8);
    let printed = printed_g_extension(data.g(), CaseParameters::Timelike { lambda: 1.0 }).unwrap();
    for z in lower_half_points(0.3) {
        let g = data.g().eval(z).unwrap();
        assert!((printed.eval(z).unwrap() - g).norm() < 1e-10);
        assert!((ext.g_ext().eval(z).unwrap() - g).norm() < 1e-10);
    }
    for k in 0..21 {
        let u = -0.28 + 0.56 * k as f64 / 20.0;
        let w = ext.g_ext().eval(c(u, 0.0)).unwrap();
        assert!((w.re * w.re + (w.im + 1.0) * (w.im + 1.0) - 2.0).abs() < 1e-10);
    }
    // Identity on the original half.
    let q = QuadratureConfig::default();
    for z in [c(0.1, 0.1), c(-0.2, 0.15)] {
        let a = evaluate_surface(&data, z, &q).unwrap();
        let b = evaluate_surface(&ext, z, &q).unwrap();
        assert!((a - b).euclid_norm() < 1e-12);
    }
}

#[test]
fn lightlike_fixture_is_self_symmetric() {
    let (data, plane) = fixtures::lightlike();
    let ext = extend(&data, &plane, &ContactOptions::default()).unwrap();
    assert_eq!(ext.rule().datum, ReflectedDatum::Psi);
    let CaseParameters::Lightlike { lambda } = ext.contact().unwrap().params else { panic!() };
    assert!((lambda + 2.0).abs() < 1e-8);
    let printed = printed_g_extension(data.g(), CaseParameters::Lightlike { lambda: -2.0 }).unwrap();
    for z in lower_half_points(0.5) {
        let g = data.g().eval(z).unwrap();
        assert!((printed.eval(z).unwrap() - g).norm() < 1e-10);
        assert!((ext.g_ext().eval(z).unwrap() - g).norm() < 1e-10);
    }
}

#[test]
fn lightlike_line_case_fixes_its_axis_and_warns() {
    let (data, plane) = fixtures::lightlike_line();
    let ext = extend(&data, &plane, &ContactOptions::default()).unwrap();
    assert!(matches!(ext.rule().locus, CircleOrLine::Line { .. }));
    assert!(ext.contact().unwrap().warnings.iter().any(|w| w.contains("c = 1")));
    for k in 0..11 {
        let u = -0.4 + 0.08 * k as f64;
        assert!((ext.g_ext().eval(c(u, 0.0)).unwrap().re - 1.0).abs() < 1e-12);
    }
}

#[test]
fn orthogonal_contact_is_refused() {
    // g real on the diameter makes N2 vanish there; x2 is 0 on the diameter.
    let data = WeierstrassData::new(
        parse("1").unwrap(),
        parse("z/2").unwrap(),
        Domain::upper_half_disk(1.0),
        c(0.0, 0.0),
        LVector::ZERO,
    )
    .unwrap();
    let plane = Plane::new(LVector::new(0.0, 1.0, 0.0), 0.0).unwrap();
    let err = extend(&data, &plane, &ContactOptions::default()).unwrap_err();
    assert!(matches!(err, ExtensionError::OrthogonalContact { .. }), "{err:?}");
    assert!(err.to_string().contains("symmetric reflection"));
}

#[test]
fn plane_off_the_boundary_image_is_refused() {
    let (data, _) = fixtures::spacelike();
    let err = extend(&data, &x3_plane(0.3), &ContactOptions::default()).unwrap_err();
    match err {
        ExtensionError::HypothesisViolation { reason } => assert!(reason.contains("not contained"), "{reason}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn conelike_circle_of_the_catenoid() {
    let cat = maxsurf_core::verify::catenoid_fixture();
    let ext = extend_circular(&cat, 1.0, &x3_plane(0.0), &ContactOptions::default()).unwrap();
    let contact = ext.contact().unwrap();
    assert_eq!(contact.params, CaseParameters::Conelike);
    assert!(contact.warnings.iter().any(|w| w.contains("conelike")));
    // Inversion about |z| = 1 sends the catenoid to itself.
    for z in [c(1.5, 0.3), c(-2.0, 1.0)] {
        assert!((ext.g_ext().eval(z).unwrap() - z).norm() < 1e-12);
        assert!((ext.f_ext().eval(z).unwrap() - 1.0 / (z * z)).norm() < 1e-12);
    }
}
