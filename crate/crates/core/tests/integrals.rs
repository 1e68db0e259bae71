mod common;

use std::f64::consts::PI;

use common::*;
use geocalc::field::{parse_poly_field, FieldFn};
use geocalc::integrate::{
    boundary_content, complex_boundary_integral, complex_ftc_check, directed_content, directed_integral,
    ftc_check, ftc_check_with, ftc_lhs, FtcOptions,
};
use geocalc::patch::{glue_patches, Orientation};
use geocalc::quadrature::QuadratureSpec;
use geocalc::Multivector;

fn quad() -> QuadratureSpec {
    QuadratureSpec::gauss(8, 8)
}

#[test]
fn directed_integral_is_linear() {
    let p = builtin::figure2();
    let n = 3;
    let f1 = parse_poly_field("x1^2*e1 + x2*e23", n).unwrap();
    let f2 = parse_poly_field("x3 - x1*x2*e123", n).unwrap();
    let combo = parse_poly_field("2*x1^2*e1 + 2*x2*e23 - 3*x3 + 3*x1*x2*e123", n).unwrap();
    let g = parse_poly_field("1 + x2*e12", n).unwrap();
    let q = quad();
    let a = directed_integral(&g, &p, &f1, &q).unwrap().value;
    let b = directed_integral(&g, &p, &f2, &q).unwrap().value;
    let c = directed_integral(&g, &p, &combo, &q).unwrap().value;
    let want = &a.scale(2.0) - &b.scale(3.0);
    assert!(rel(&c, &want, want.norm()) < 1e-13);
    // and in g
    let g2 = parse_poly_field("x1*e3", n).unwrap();
    let gsum = parse_poly_field("1 + x2*e12 + x1*e3", n).unwrap();
    let lhs = directed_integral(&gsum, &p, &f1, &q).unwrap().value;
    let rhs = &a + &directed_integral(&g2, &p, &f1, &q).unwrap().value;
    assert!(rel(&lhs, &rhs, rhs.norm()) < 1e-13);
}

#[test]
fn reversing_orientation_negates_integrals() {
    let q = quad();
    for p in [builtin::figure2(), builtin::sphere_octant(1.0).unwrap(), builtin::identity(3).unwrap()] {
        let s = sig(p.ambient_dim());
        let f = FieldFn::identity_vector(s);
        let g = FieldFn::norm_squared(s);
        for axis in 0..p.k() {
            let rev = p.reversed_axis(axis);
            let a = directed_integral(&g, &p, &f, &q).unwrap().value;
            let b = directed_integral(&g, &rev, &f, &q).unwrap().value;
            assert!(rel(&a, &-b, a.norm()) < 1e-13, "{} axis {axis}", p.name());
        }
    }
}

#[test]
fn boundary_content_vanishes_on_shipped_patches() {
    let q = quad();
    for p in shipped_patches() {
        let c = boundary_content(&p, &q).unwrap().value;
        assert!(c.max_norm() <= 1e-8, "{}: {c}", p.name());
    }
    for cx in [
        builtin::sphere_cube_faces(&[0.0, 0.0, 0.0], 1.0).unwrap(),
        builtin::circle_boundary(&[0.0, 0.0], 1.0).unwrap(),
    ] {
        let one = FieldFn::one(sig(cx.ambient_dim()));
        let c = complex_boundary_integral(&one, &cx, &one, &q).unwrap().value;
        assert!(c.max_norm() <= 1e-8);
    }
}

#[test]
fn half_circle_displacement() {
    let p = builtin::arc(&[0.0, 0.0], 1.0, 0.0, PI).unwrap();
    let d = directed_content(&p, &quad()).unwrap().value;
    let want = Multivector::vector(sig(2), &[-2.0, 0.0]).unwrap();
    assert!(rel(&d, &want, 2.0) < 1e-14);
}

#[test]
fn closed_surface_content_vanishes_and_area_matches() {
    let q = quad();
    let sphere = builtin::sphere_cube_faces(&[0.5, 0.0, -1.0], 2.0).unwrap();
    let s = sig(3);
    let one = FieldFn::one(s);
    let content = geocalc::integrate::complex_directed_integral(&one, &sphere, &one, &q).unwrap().value;
    assert!(content.max_norm() < 1e-10);
    // I^{-1} dx_(2) is the outward normal, so ∫ x . n dA = 3 V about the centre.
    let centred = FieldFn::new(s, "x - c", |x| Multivector::vector(sig(3), &[x[0] - 0.5, x[1], x[2] + 1.0]).unwrap());
    let flux = geocalc::integrate::complex_directed_integral(&FieldFn::one(s), &sphere, &centred, &q).unwrap().value;
    let i_inv = Multivector::pseudoscalar_inverse(s);
    let v = (&i_inv * &flux).scalar_part();
    assert!((v - 4.0 * PI * 8.0).abs() < 1e-6 * v, "{v}");
}

#[test]
fn ftc_on_curves() {
    let q = quad();
    let p = builtin::arc(&[0.5, 0.5], 1.5, 0.2, 2.5).unwrap();
    for (g, f) in [("1", "x1^3*e1 + x2*e12"), ("x1 - x2*e12", "x1*x2 + x2^2*e2")] {
        let g = parse_poly_field(g, 2).unwrap();
        let f = parse_poly_field(f, 2).unwrap();
        let r = ftc_check(&g, &f, &p, &q).unwrap();
        assert!(r.finest().rel_residual <= 1e-8, "{:?}", r.rows);
        assert!(r.converged());
    }
}

#[test]
fn ftc_on_surfaces_and_solids() {
    let q = QuadratureSpec::gauss(8, 4);
    let cases = [
        (builtin::figure2(), "1", "x1^2*e1 - 3*x2*e12 + x3"),
        (builtin::figure2(), "x2*e3 + 1", "x1*x3*e2"),
        (builtin::sphere_octant(1.2).unwrap(), "1", "x1*x2*e3 + x3^2"),
        (builtin::disk_polar(1.0).unwrap(), "1", "x1^2*x2*e1 + x2*e12"),
        (builtin::identity(3).unwrap(), "x3", "x1*x2*e1 + x3^2*e23"),
    ];
    for (p, g, f) in cases {
        let n = p.ambient_dim();
        let g = parse_poly_field(g, n).unwrap();
        let f = parse_poly_field(f, n).unwrap();
        let r = ftc_check_with(&g, &f, &p, &q, &FtcOptions { levels: 2, ..Default::default() }).unwrap();
        assert!(r.passes(1e-5), "{}: {:?}", p.name(), r.rows);
    }
}

#[test]
fn glued_square_residual_is_comparable() {
    let q = quad();
    let left = builtin::identity_on(KRectangle::new(vec![(0.0, 0.5), (0.0, 1.0)]).unwrap()).unwrap();
    let right = builtin::identity_on(KRectangle::new(vec![(0.5, 1.0), (0.0, 1.0)]).unwrap()).unwrap();
    let cx = glue_patches(vec![(left, Orientation::Positive), (right, Orientation::Positive)]).unwrap();
    let whole = builtin::identity(2).unwrap();
    let f = FieldFn::new(sig(2), "exp", |x| {
        let mut m = Multivector::scalar(sig(2), (x[0] * x[1]).exp());
        m.set_coeff(geocalc::Blade(0b01), (3.0 * x[0]).sin());
        m
    });
    let one = FieldFn::one(sig(2));
    let opts = FtcOptions { levels: 1, ..Default::default() };
    let glued = complex_ftc_check(&one, &f, &cx, &q, &opts).unwrap();
    let single = ftc_check_with(&one, &f, &whole, &q, &opts).unwrap();
    let (g, s) = (glued.finest().abs_residual, single.finest().abs_residual);
    assert!(g <= 2.0 * s.max(1e-15), "glued {g} vs single {s}");
    // Both sides agree with the single patch.
    assert!(rel(&glued.finest().rhs, &single.finest().rhs, 1.0) < 1e-12);
}

#[test]
fn lhs_of_constant_field_vanishes() {
    let p = builtin::sphere_octant(1.0).unwrap();
    let c = FieldFn::constant(Multivector::basis(sig(3), &[1, 3]).unwrap());
    let lhs = ftc_lhs(&c, &c, &p, &quad()).unwrap();
    assert!(lhs.value.is_zero());
}
