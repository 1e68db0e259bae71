mod common;

use common::*;
use geocalc::derivative::{flat_vector_derivative, flat_vector_derivative_right, two_sided_derivative};
use geocalc::field::{parse_poly_field, FieldFn};
use geocalc::patch::tangent_frame;
use geocalc::Multivector;
use rand::Rng;

#[test]
fn identity_squared_on_the_plane() {
    let s = sig(2);
    let x = FieldFn::identity_vector(s);
    let p = builtin::identity(2).unwrap();
    let d = two_sided_derivative(&x, &x, &p, &[0.3, 0.8]).unwrap();
    let want = Multivector::vector(s, &[1.2, 3.2]).unwrap();
    assert!((&d.value - &want).max_norm() < 1e-14);
    assert!((&d.left - &want.scale(0.5)).max_norm() < 1e-14);
}

#[test]
fn leibniz_split_on_flat_patches() {
    let mut r = rng(20);
    for n in 2..=3 {
        let s = sig(n);
        let p = builtin::identity(n).unwrap();
        let g = parse_poly_field(if n == 2 { "x1*x2*e1 + 2 - x2^2*e12" } else { "x1*e12 + x3^2 - x2*x3*e123" }, n).unwrap();
        let f = parse_poly_field(if n == 2 { "x1^2*e2 + x2" } else { "x2^2*e1 + x1*x3*e23 + 1" }, n).unwrap();
        for _ in 0..100 {
            let at = interior_param(&p, &mut r);
            let d = two_sided_derivative(&g, &f, &p, &at).unwrap();
            let left = &flat_vector_derivative_right(&g, &at).unwrap() * &f.eval(&at);
            let right = &g.eval(&at) * &flat_vector_derivative(&f, &at).unwrap();
            let scale = left.norm() + right.norm() + 1.0;
            assert!(rel(&d.left, &left, scale) < 1e-13);
            assert!(rel(&d.right, &right, scale) < 1e-13);
            assert!(rel(&d.value, &(&left + &right), scale) < 1e-13);
            let mut axes = Multivector::zero(s);
            for t in &d.per_axis_terms {
                axes += t;
            }
            assert!(rel(&axes, &d.value, scale) < 1e-13);
        }
    }
}

/// `Σ x^i ∂/∂s^i f(x(s))` by central differences in the parameters.
fn parameter_fd(f: &FieldFn, p: &PatchMap, s: &[f64]) -> Multivector {
    let frame = tangent_frame(p, s).unwrap();
    let h = 1e-5;
    let mut out = Multivector::zero(f.sig());
    for (i, recip) in frame.reciprocals.iter().enumerate() {
        let mut up = s.to_vec();
        let mut dn = s.to_vec();
        up[i] += h;
        dn[i] -= h;
        let d = (&f.eval(&p.eval(&up).unwrap()) - &f.eval(&p.eval(&dn).unwrap())).scale(0.5 / h);
        out += &(recip * &d);
    }
    out
}

#[test]
fn chain_rule_matches_parameter_differences() {
    let mut r = rng(21);
    let cases = [
        (builtin::figure2(), "x1^2*e1 - 3*x2*e12 + x3*x1"),
        (builtin::sphere_octant(1.5).unwrap(), "x1*x2*x3 + x3^2*e13"),
        (builtin::disk_polar(2.0).unwrap(), "x1^3 - x2*e12"),
        (builtin::arc(&[0.0, 0.0], 1.0, 0.1, 3.0).unwrap(), "x1*x2*e1 + x2^2*e2"),
    ];
    for (p, expr) in cases {
        let f = parse_poly_field(expr, p.ambient_dim()).unwrap();
        let one = FieldFn::one(f.sig());
        for _ in 0..100 {
            let s = interior_param(&p, &mut r);
            let d = two_sided_derivative(&one, &f, &p, &s).unwrap().value;
            let want = parameter_fd(&f, &p, &s);
            assert!(rel(&d, &want, want.norm().max(1.0)) < 1e-7, "{} at {s:?}", p.name());
            // The FD field path agrees with the analytic one.
            let fd = two_sided_derivative(&one, &f.clone().without_derivative(), &p, &s).unwrap().value;
            assert!(rel(&fd, &d, d.norm().max(1.0)) < 1e-8);
        }
    }
}

#[test]
fn flat_derivative_agrees_on_identity_patches() {
    let mut r = rng(22);
    for n in 1..=4 {
        let s = sig(n);
        let f = parse_poly_field(&format!("x1^2*e1 + x{n}*e{n} + 3"), n).unwrap();
        let p = builtin::identity(n).unwrap();
        for _ in 0..100 {
            let at: Vec<f64> = (0..n).map(|_| r.gen_range(0.05..0.95)).collect();
            let d = two_sided_derivative(&FieldFn::one(s), &f, &p, &at).unwrap().value;
            let flat = flat_vector_derivative(&f, &at).unwrap();
            assert!(rel(&d, &flat, 1.0) < 1e-14);
        }
    }
}
