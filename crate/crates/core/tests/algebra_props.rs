mod common;

use common::*;
use geocalc::algebra::{euler_decompose, parse_multivector};
use geocalc::{Blade, Multivector};
use proptest::prelude::*;

#[test]
fn basis_products_match_list_oracle() {
    for n in 1..=6 {
        let s = sig(n);
        for a in 0..s.basis_len() as u32 {
            for b in 0..s.basis_len() as u32 {
                let got = &Multivector::from_blade(s, Blade(a), 1.0) * &Multivector::from_blade(s, Blade(b), 1.0);
                let (sign, idx) = oracle_blade_product(&indices(a), &indices(b));
                let want = Multivector::from_blade(s, Blade::from_indices(&idx).unwrap(), sign);
                assert_eq!(got, want, "n={n} a={a:b} b={b:b}");
            }
        }
    }
}

#[test]
fn oracle_examples() {
    assert_eq!(oracle_blade_product(&[2], &[1]), (-1.0, vec![1, 2]));
    assert_eq!(oracle_blade_product(&[1, 2, 3], &[1, 2, 3]), (-1.0, vec![]));
    let s = sig(2);
    let a = parse_multivector(s, "e1 + e2").unwrap();
    let b = parse_multivector(s, "e1 - e2").unwrap();
    assert_eq!(&a * &b, parse_multivector(s, "-2*e12").unwrap());
}

#[test]
fn symmetrized_forms_match_grade_definitions_exhaustively() {
    for n in 1..=5 {
        let s = sig(n);
        for i in 1..=n {
            let a = Multivector::basis(s, &[i]).unwrap();
            for bits in 0..s.basis_len() as u32 {
                let b = Multivector::from_blade(s, Blade(bits), 1.0);
                let k = bits.count_ones() as i32;
                let ab = &a * &b;
                let ba = &b * &a;
                let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
                let sym = (&ab + &ba.scale(sign)).scale(0.5);
                let anti = (&ab - &ba.scale(sign)).scale(0.5);
                let inner = a.dot(&b);
                let outer = a.wedge(&b);
                if k == 0 {
                    assert!(inner.is_zero());
                    assert_eq!(outer, ab);
                } else {
                    assert_eq!(inner, sym, "n={n} i={i} B={bits:b}");
                    assert_eq!(inner, ab.grade(k as usize - 1));
                    assert_eq!(outer, anti);
                    assert_eq!(outer, ab.grade(k as usize + 1));
                }
            }
        }
    }
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-4i32..=4, 1 << n).prop_map(|v| v.into_iter().map(f64::from).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn associativity_exact_on_integers(n in 1usize..=5, seed in any::<u64>()) {
        let s = sig(n);
        let mut r = rng(seed);
        use rand::Rng;
        let mut pick = || -> Multivector {
            let c: Vec<f64> = (0..s.basis_len()).map(|_| r.gen_range(-3i32..=3) as f64).collect();
            Multivector::from_coeffs(s, &c).unwrap()
        };
        let (a, b, c) = (pick(), pick(), pick());
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn grade_parts_reassemble(c in coeffs(4)) {
        let s = sig(4);
        let m = Multivector::from_coeffs(s, &c).unwrap();
        let mut sum = Multivector::zero(s);
        for k in 0..=4 {
            sum += &m.grade(k);
        }
        prop_assert_eq!(sum, m);
    }

    #[test]
    fn reverse_is_an_anti_automorphism(seed in any::<u64>()) {
        let s = sig(4);
        let mut r = rng(seed);
        let a = random_multivector(s, &mut r);
        let b = random_multivector(s, &mut r);
        let lhs = (&a * &b).reverse();
        let rhs = &b.reverse() * &a.reverse();
        prop_assert!(rel(&lhs, &rhs, a.norm() * b.norm()) < 1e-14);
    }

    #[test]
    fn text_round_trip(c in coeffs(3)) {
        let s = sig(3);
        let m = Multivector::from_coeffs(s, &c).unwrap();
        prop_assert_eq!(parse_multivector(s, &m.to_string()).unwrap(), m);
    }
}

#[test]
fn associativity_on_random_floats() {
    let mut r = rng(1);
    for n in 1..=6 {
        let s = sig(n);
        for _ in 0..1000 / n {
            let a = random_multivector(s, &mut r);
            let b = random_multivector(s, &mut r);
            let c = random_multivector(s, &mut r);
            let scale = a.norm() * b.norm() * c.norm();
            assert!(rel(&(&(&a * &b) * &c), &(&a * &(&b * &c)), scale) < 1e-12);
        }
    }
}

#[test]
fn vector_product_split() {
    let mut r = rng(2);
    for _ in 0..1000 {
        let s = sig(r.clone().next_u64_mod(5) + 1);
        let a = random_vector(s, &mut r);
        let b = random_vector(s, &mut r);
        let ab = &a * &b;
        let ba = &b * &a;
        let scale = a.norm() * b.norm();
        assert!(rel(&a.dot(&b), &(&ab + &ba).scale(0.5), scale) < 1e-12);
        assert!(rel(&a.wedge(&b), &(&ab - &ba).scale(0.5), scale) < 1e-12);
        assert!(rel(&ab, &(&a.dot(&b) + &a.wedge(&b)), scale) < 1e-15);
    }
}

trait SmallDraw {
    fn next_u64_mod(&mut self, m: usize) -> usize;
}

impl<R: rand::RngCore> SmallDraw for R {
    fn next_u64_mod(&mut self, m: usize) -> usize {
        (self.next_u64() % m as u64) as usize
    }
}

#[test]
fn vector_k_vector_split() {
    let mut r = rng(3);
    let s = sig(5);
    for t in 0..1000 {
        let k = t % 6;
        let a = random_vector(s, &mut r);
        let b = random_homogeneous(s, k, &mut r);
        let ab = &a * &b;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let ba = (&b * &a).scale(sign);
        let scale = a.norm() * b.norm();
        if k > 0 {
            assert!(rel(&a.dot(&b), &(&ab + &ba).scale(0.5), scale) < 1e-12);
            assert!(rel(&a.dot(&b), &ab.grade(k - 1), scale) < 1e-12);
        }
        assert!(rel(&a.wedge(&b), &(&ab - &ba).scale(0.5), scale) < 1e-12);
        assert!(rel(&a.wedge(&b), &ab.grade(k + 1), scale) < 1e-12);
    }
}

#[test]
fn distributive_law_for_the_inner_product() {
    let mut r = rng(4);
    let s = sig(6);
    let mut checked = 0;
    while checked < 1000 {
        let rr = r.next_u64_mod(4) + 1;
        let ss = r.next_u64_mod(4) + 1;
        if rr + ss > 6 {
            continue;
        }
        let a = random_vector(s, &mut r);
        let ar = random_homogeneous(s, rr, &mut r);
        let bs = random_homogeneous(s, ss, &mut r);
        let wedge = ar.wedge(&bs);
        let lhs = a.dot(&wedge);
        let sign_r = if rr % 2 == 0 { 1.0 } else { -1.0 };
        let mid = &a.dot(&ar).wedge(&bs) + &ar.wedge(&a.dot(&bs)).scale(sign_r);
        let sign = if (rr + ss + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let right = wedge.dot(&a).scale(sign);
        let scale = a.norm() * ar.norm() * bs.norm();
        assert!(rel(&lhs, &mid, scale) < 1e-12);
        assert!(rel(&lhs, &right, scale) < 1e-12);
        checked += 1;
    }
}

#[test]
fn euler_form_reconstructs_product() {
    let s = sig(3);
    let a = Multivector::vector(s, &[1.0, 1.0, 0.0]).unwrap();
    let b = Multivector::vector(s, &[0.0, 1.0, 1.0]).unwrap();
    let e = euler_decompose(&a, &b).unwrap();
    assert!((e.magnitude - 2.0).abs() < 1e-15);
    assert!((e.angle - std::f64::consts::FRAC_PI_3).abs() < 1e-15);
    let plane = e.plane.clone().unwrap();
    assert!(rel(&(&plane * &plane), &Multivector::scalar(s, -1.0), 1.0) < 1e-15);
    assert!(rel(&e.reconstruct(s), &(&a * &b), 1.0) < 1e-15);
}
