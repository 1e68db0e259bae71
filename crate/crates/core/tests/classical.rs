mod common;

use std::f64::consts::PI;

use common::*;
use geocalc::classical::{
    gauss_divergence_check, greens_theorem_check, path_independence_check, stokes_theorem_check,
};
use geocalc::field::{parse_poly_field, FieldFn};
use geocalc::quadrature::{gauss_legendre, QuadratureSpec};
use geocalc::Error;
use rand::Rng;

/// Quadratic `P e1 + Q e2` with random coefficients, as an expression and
/// as the coefficient lists `[1, x, y, x^2, xy, y^2]`.
fn random_quadratic(r: &mut impl Rng) -> (String, [f64; 6], [f64; 6]) {
    let mut c = || -> [f64; 6] { std::array::from_fn(|_| (r.gen_range(-20i32..=20) as f64) / 4.0) };
    let (p, q) = (c(), c());
    let mono = ["", "*x1", "*x2", "*x1^2", "*x1*x2", "*x2^2"];
    let mut expr = Vec::new();
    for (coefs, blade) in [(&p, "e1"), (&q, "e2")] {
        for (a, m) in coefs.iter().zip(mono) {
            expr.push(format!("{a}{m}*{blade}"));
        }
    }
    (expr.join(" + ").replace("+ -", "- "), p, q)
}

fn eval_quadratic(c: &[f64; 6], x: f64, y: f64) -> f64 {
    c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y
}

/// `∮ P dx + Q dy` counterclockwise around the circle, by plain composite
/// Gauss-Legendre in the angle.
fn line_integral_oracle(p: &[f64; 6], q: &[f64; 6], r: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(10);
    let panels = 16;
    let h = 2.0 * PI / panels as f64;
    let mut sum = 0.0;
    for j in 0..panels {
        for (t, w) in nodes.iter().zip(&weights) {
            let th = h * (j as f64 + 0.5 * (t + 1.0));
            let (x, y) = (r * th.cos(), r * th.sin());
            let (dx, dy) = (-r * th.sin(), r * th.cos());
            sum += 0.5 * h * w * (eval_quadratic(p, x, y) * dx + eval_quadratic(q, x, y) * dy);
        }
    }
    sum
}

#[test]
fn green_on_the_disk_against_independent_oracles() {
    let mut r = rng(30);
    let radius = 1.3;
    let disk = builtin::disk_polar(radius).unwrap();
    let quad = QuadratureSpec::gauss(12, 8);
    let area = PI * radius * radius;
    for _ in 0..10 {
        let (expr, p, q) = random_quadratic(&mut r);
        let f = parse_poly_field(&expr, 2).unwrap();
        let rep = greens_theorem_check(&f, &disk, &quad).unwrap();
        assert!(rep.passes(1e-7), "{expr}: {:?}", rep.rows);
        // Linear integrands over a centred disk: the mean is the centre value.
        let curl0 = q[1] - p[2];
        let div0 = p[1] + q[2];
        let circ = rep.row("green_circulation").unwrap();
        let flux = rep.row("green_flux").unwrap();
        let scale = 1.0 + curl0.abs() * area;
        assert!((circ.lhs.scalar_part() - curl0 * area).abs() <= 1e-7 * scale);
        assert!((circ.rhs.scalar_part() - line_integral_oracle(&p, &q, radius)).abs() <= 1e-7 * scale);
        assert!((flux.lhs.scalar_part() - div0 * area).abs() <= 1e-7 * (1.0 + div0.abs() * area));
    }
}

#[test]
fn stokes_curl_of_rotation_over_figure2() {
    let s = sig(3);
    let rep = stokes_theorem_check(&FieldFn::rotation(s).unwrap(), &builtin::figure2(), &QuadratureSpec::default()).unwrap();
    let row = rep.row("stokes").unwrap();
    // curl = 2 e3 and the surface projects onto the unit square.
    assert!((row.lhs.scalar_part() - 2.0).abs() <= 1e-6);
    assert!((row.rhs.scalar_part() - 2.0).abs() <= 1e-6);
    assert!(rep.consistency <= 1e-12);
}

#[test]
fn stokes_changes_sign_with_orientation() {
    let f = parse_poly_field("x2*x3*e1 - x1^2*e3 + x3*e2", 3).unwrap();
    let quad = QuadratureSpec::default();
    for p in [builtin::figure2(), builtin::sphere_octant(1.0).unwrap()] {
        let a = stokes_theorem_check(&f, &p, &quad).unwrap();
        let b = stokes_theorem_check(&f, &p.reversed_axis(1), &quad).unwrap();
        assert!(a.passes(1e-9) && b.passes(1e-9), "{}", p.name());
        let (ra, rb) = (a.row("stokes").unwrap(), b.row("stokes").unwrap());
        assert!((ra.lhs.scalar_part() + rb.lhs.scalar_part()).abs() < 1e-10);
        assert!(ra.lhs.scalar_part().abs() > 1e-3);
    }
}

#[test]
fn gauss_on_sheared_cubes() {
    let mut r = rng(31);
    let quad = QuadratureSpec::gauss(4, 2);
    for _ in 0..10 {
        let m: Vec<Vec<f64>> = (0..3).map(|_| (0..3).map(|_| r.gen_range(-1.5..1.5)).collect()).collect();
        let a: Vec<Vec<f64>> = (0..3).map(|_| (0..3).map(|_| r.gen_range(-2.0..2.0)).collect()).collect();
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if det.abs() < 0.05 {
            continue;
        }
        let solid = builtin::linear(&m, KRectangle::unit(3).unwrap()).unwrap();
        let f = FieldFn::linear_vector(sig(3), a.clone()).unwrap();
        let rep = gauss_divergence_check(&f, &solid, &quad).unwrap();
        let want = (a[0][0] + a[1][1] + a[2][2]) * det;
        let row = rep.row("gauss").unwrap();
        assert!((row.lhs.scalar_part() - want).abs() <= 1e-12 * want.abs().max(1.0));
        assert!((row.rhs.scalar_part() - want).abs() <= 1e-12 * want.abs().max(1.0));
    }
}

#[test]
fn gauss_identity_field_on_unit_cube() {
    let rep = gauss_divergence_check(&FieldFn::identity_vector(sig(3)), &builtin::identity(3).unwrap(), &QuadratureSpec::default()).unwrap();
    let row = rep.row("gauss").unwrap();
    assert!((row.lhs.scalar_part() - 3.0).abs() <= 1e-12);
    assert!((row.rhs.scalar_part() - 3.0).abs() <= 1e-12);
}

#[test]
fn path_independence_across_curves() {
    let quad = QuadratureSpec::default();
    let straight = builtin::segment(&[1.0, 0.0], &[-1.0, 0.0]).unwrap();
    let upper = builtin::arc(&[0.0, 0.0], 1.0, 0.0, PI).unwrap();
    let f = parse_poly_field("x1^2*x2 + 3*x1*e12 - x2^3*e2", 2).unwrap();
    let g = parse_poly_field("1 + x2*e1", 2).unwrap();
    let rep = path_independence_check(&g, &f, &[straight, upper], &quad).unwrap();
    assert_eq!(rep.rows.len(), 2);
    assert!(rep.passes(1e-12), "{:?}", rep.rows);

    let elsewhere = builtin::segment(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
    let err = path_independence_check(&g, &f, &[builtin::segment(&[1.0, 0.0], &[-1.0, 0.0]).unwrap(), elsewhere], &quad);
    assert!(matches!(err, Err(Error::EndpointMismatch { .. })));
}

#[test]
fn non_vector_fields_are_rejected() {
    let f = parse_poly_field("x1*e12", 2).unwrap();
    let err = greens_theorem_check(&f, &builtin::identity(2).unwrap(), &QuadratureSpec::default());
    assert!(matches!(err, Err(Error::NotAVector)));
}
