#![allow(dead_code)]

use geocalc::{Blade, Multivector, Signature};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn sig(n: usize) -> Signature {
    Signature::euclidean(n).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(s: Signature, rng: &mut impl Rng) -> Multivector {
    let v: Vec<f64> = (0..s.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Multivector::vector(s, &v).unwrap()
}

/// Random k-vector (a sum of grade-k blades, not necessarily a blade).
pub fn random_homogeneous(s: Signature, k: usize, rng: &mut impl Rng) -> Multivector {
    let mut m = Multivector::zero(s);
    for bits in 0..s.basis_len() as u32 {
        if bits.count_ones() as usize == k {
            m.set_coeff(Blade(bits), rng.gen_range(-1.0..1.0));
        }
    }
    m
}

pub fn random_multivector(s: Signature, rng: &mut impl Rng) -> Multivector {
    let c: Vec<f64> = (0..s.basis_len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Multivector::from_coeffs(s, &c).unwrap()
}

/// Product of two basis blades given as ascending index lists: concatenate,
/// bubble-sort counting swaps, then cancel equal neighbours (e_i e_i = 1).
pub fn oracle_blade_product(a: &[usize], b: &[usize]) -> (f64, Vec<usize>) {
    let mut list: Vec<usize> = a.iter().chain(b).copied().collect();
    let mut swaps = 0usize;
    for i in 0..list.len() {
        for j in 0..list.len() - 1 - i {
            if list[j] > list[j + 1] {
                list.swap(j, j + 1);
                swaps += 1;
            }
        }
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < list.len() {
        if i + 1 < list.len() && list[i] == list[i + 1] {
            i += 2;
        } else {
            out.push(list[i]);
            i += 1;
        }
    }
    (if swaps % 2 == 0 { 1.0 } else { -1.0 }, out)
}

pub fn indices(bits: u32) -> Vec<usize> {
    (0..32).filter(|i| bits >> i & 1 == 1).map(|i| i + 1).collect()
}

/// `|a - b|_max / scale`.
pub fn rel(a: &Multivector, b: &Multivector, scale: f64) -> f64 {
    (a - b).max_norm() / scale.max(f64::MIN_POSITIVE)
}

pub use geocalc::patch::{builtin, KRectangle, PatchMap};

/// Every builtin patch, each complex split into its member patches.
pub fn shipped_patches() -> Vec<PatchMap> {
    let mut v = vec![
        builtin::identity(1).unwrap(),
        builtin::identity(2).unwrap(),
        builtin::identity(3).unwrap(),
        builtin::figure2(),
        builtin::disk_polar(1.5).unwrap(),
        builtin::disk_polar_at(&[0.5, -1.0], 0.75).unwrap(),
        builtin::sphere_octant(2.0).unwrap(),
        builtin::linear(
            &[vec![2.0, 0.5], vec![-1.0, 1.0], vec![0.3, 0.0], vec![0.0, 1.5]],
            KRectangle::unit(2).unwrap(),
        )
        .unwrap(),
        builtin::graph2d(
            geocalc::field::parse_poly_field("x1^2 - 0.5*x1*x2 + x2^3", 2).unwrap(),
            KRectangle::new(vec![(-1.0, 1.0), (0.0, 2.0)]).unwrap(),
        )
        .unwrap(),
        builtin::segment(&[0.0, 1.0, 2.0], &[1.0, -1.0, 0.5]).unwrap(),
        builtin::arc(&[1.0, 0.0], 2.0, 0.0, 2.0).unwrap(),
        builtin::circle(&[0.0, 0.0], 1.0).unwrap(),
    ];
    for c in [
        builtin::sphere_cube_faces(&[0.0, 0.0, 0.0], 1.0).unwrap(),
        builtin::circle_boundary(&[1.0, 1.0], 0.5).unwrap(),
    ] {
        v.extend(c.patches().iter().map(|op| op.patch.clone()));
    }
    v
}

/// Uniform point strictly inside the parameter domain.
pub fn interior_param(p: &PatchMap, rng: &mut impl Rng) -> Vec<f64> {
    p.domain()
        .bounds()
        .iter()
        .map(|&(a, b)| {
            let w = b - a;
            rng.gen_range(a + 0.01 * w..b - 0.01 * w)
        })
        .collect()
}
