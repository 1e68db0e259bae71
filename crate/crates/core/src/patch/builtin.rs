//! Ready-made patches with analytic Jacobians.

use std::f64::consts::{FRAC_PI_2, PI};

use super::complex::{glue_patches, Orientation, PatchComplex};
use super::map::PatchMap;
use super::rectangle::KRectangle;
use crate::error::{Error, Result};
use crate::field::FieldFn;

/// `x(s) = s` on `[0,1]^k` in `R^k`.
pub fn identity(k: usize) -> Result<PatchMap> {
    identity_on(KRectangle::unit(k)?)
}

/// `x(s) = s` on an arbitrary k-rectangle in `R^k`.
pub fn identity_on(domain: KRectangle) -> Result<PatchMap> {
    let k = domain.k();
    Ok(PatchMap::new(domain, k, |s| s.to_vec())?
        .with_jacobian(move |_| {
            (0..k)
                .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect()
        })
        .with_name(format!("identity_{k}")))
}

/// `x(s1, s2) = (s1, s2, (1 - sin(s1^2))/2 - 3 s2)` over the unit square.
pub fn figure2() -> PatchMap {
    PatchMap::new(KRectangle::unit(2).expect("unit square"), 3, |s| {
        vec![s[0], s[1], 0.5 * (1.0 - (s[0] * s[0]).sin()) - 3.0 * s[1]]
    })
    .expect("k <= n")
    .with_jacobian(|s| {
        vec![
            vec![1.0, 0.0, -s[0] * (s[0] * s[0]).cos()],
            vec![0.0, 1.0, -3.0],
        ]
    })
    .with_name("figure2")
}

/// Polar parametrization of the disk of radius `radius` about the origin,
/// `(r, θ) in [0, radius] x [0, 2π]`. The face `r = 0` collapses to the centre.
pub fn disk_polar(radius: f64) -> Result<PatchMap> {
    disk_polar_at(&[0.0, 0.0], radius)
}

pub fn disk_polar_at(center: &[f64], radius: f64) -> Result<PatchMap> {
    if center.len() != 2 || !(radius > 0.0) {
        return Err(Error::InvalidDomain("disk needs a 2-d center and radius > 0".into()));
    }
    let (cx, cy) = (center[0], center[1]);
    Ok(
        PatchMap::new(KRectangle::new(vec![(0.0, radius), (0.0, 2.0 * PI)])?, 2, move |s| {
            vec![cx + s[0] * s[1].cos(), cy + s[0] * s[1].sin()]
        })?
        .with_jacobian(|s| {
            let (c, sn) = (s[1].cos(), s[1].sin());
            vec![vec![c, sn], vec![-s[0] * sn, s[0] * c]]
        })
        .with_name("disk_polar"),
    )
}

/// The first-octant piece of the sphere of radius `radius`, in spherical
/// coordinates `(θ, φ) in [0, π/2]^2`. The face `θ = 0` collapses to the pole.
pub fn sphere_octant(radius: f64) -> Result<PatchMap> {
    if !(radius > 0.0) {
        return Err(Error::InvalidDomain("sphere radius must be positive".into()));
    }
    let r = radius;
    Ok(PatchMap::new(
        KRectangle::new(vec![(0.0, FRAC_PI_2), (0.0, FRAC_PI_2)])?,
        3,
        move |s| {
            let (st, ct) = s[0].sin_cos();
            let (sp, cp) = s[1].sin_cos();
            vec![r * st * cp, r * st * sp, r * ct]
        },
    )?
    .with_jacobian(move |s| {
        let (st, ct) = s[0].sin_cos();
        let (sp, cp) = s[1].sin_cos();
        vec![
            vec![r * ct * cp, r * ct * sp, -r * st],
            vec![-r * st * sp, r * st * cp, 0.0],
        ]
    })
    .with_name("sphere_octant"))
}

/// `x(s) = A s` where `matrix` holds the `n` rows of the `n x k` matrix `A`.
pub fn linear(matrix: &[Vec<f64>], domain: KRectangle) -> Result<PatchMap> {
    let n = matrix.len();
    let k = domain.k();
    if n == 0 || matrix.iter().any(|row| row.len() != k) {
        return Err(Error::DimensionMismatch(format!(
            "linear patch needs an n x {k} matrix"
        )));
    }
    let a = matrix.to_vec();
    let cols: Vec<Vec<f64>> = (0..k).map(|j| a.iter().map(|row| row[j]).collect()).collect();
    Ok(PatchMap::new(domain, n, move |s| {
        a.iter()
            .map(|row| row.iter().zip(s).map(|(x, y)| x * y).sum())
            .collect()
    })?
    .with_jacobian(move |_| cols.clone())
    .with_name("linear"))
}

/// Graph `(s1, s2, h(s1, s2))` of a scalar height field `h` on `R^2`.
pub fn graph2d(height: FieldFn, domain: KRectangle) -> Result<PatchMap> {
    if height.dim() != 2 || domain.k() != 2 {
        return Err(Error::DimensionMismatch(
            "graph2d needs a scalar field on R^2 and a 2-rectangle".into(),
        ));
    }
    let h = height.clone();
    Ok(PatchMap::new(domain, 3, move |s| {
        vec![s[0], s[1], h.eval(s).scalar_part()]
    })?
    .with_jacobian(move |s| {
        let d1 = height.directional(s, &[1.0, 0.0]).scalar_part();
        let d2 = height.directional(s, &[0.0, 1.0]).scalar_part();
        vec![vec![1.0, 0.0, d1], vec![0.0, 1.0, d2]]
    })
    .with_name("graph2d"))
}

/// Straight segment from `a` to `b`, `s in [0, 1]`.
pub fn segment(a: &[f64], b: &[f64]) -> Result<PatchMap> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch("segment endpoints differ in dimension".into()));
    }
    let a = a.to_vec();
    let d: Vec<f64> = b.iter().zip(&a).map(|(y, x)| y - x).collect();
    let d2 = d.clone();
    Ok(PatchMap::new(KRectangle::unit(1)?, a.len(), move |s| {
        a.iter().zip(&d).map(|(x, v)| x + s[0] * v).collect()
    })?
    .with_jacobian(move |_| vec![d2.clone()])
    .with_name("segment"))
}

/// Circular arc `c + r (cos t, sin t)` for `t in [t0, t1]`.
pub fn arc(center: &[f64], radius: f64, t0: f64, t1: f64) -> Result<PatchMap> {
    if center.len() != 2 {
        return Err(Error::DimensionMismatch("arc needs a 2-d center".into()));
    }
    let (cx, cy) = (center[0], center[1]);
    Ok(PatchMap::new(KRectangle::new(vec![(t0, t1)])?, 2, move |s| {
        vec![cx + radius * s[0].cos(), cy + radius * s[0].sin()]
    })?
    .with_jacobian(move |s| vec![vec![-radius * s[0].sin(), radius * s[0].cos()]])
    .with_name("arc"))
}

/// Full circle `c + r (cos t, -sin t)`, `t in [0, 2π]`.
///
/// Traversed clockwise in the `e12` plane: that is the boundary orientation
/// induced on a positively oriented planar region, for which `I^{-1} dx`
/// points outward.
pub fn circle(center: &[f64], radius: f64) -> Result<PatchMap> {
    if center.len() != 2 || !(radius > 0.0) {
        return Err(Error::InvalidDomain("circle needs a 2-d center and radius > 0".into()));
    }
    let (cx, cy) = (center[0], center[1]);
    Ok(PatchMap::new(KRectangle::new(vec![(0.0, 2.0 * PI)])?, 2, move |s| {
        vec![cx + radius * s[0].cos(), cy - radius * s[0].sin()]
    })?
    .with_jacobian(move |s| vec![vec![-radius * s[0].sin(), -radius * s[0].cos()]])
    .with_name("circle"))
}

/// Closed sphere as six cube faces projected radially, each parametrized over
/// `[-1, 1]^2` so that `I^{-1} x_(2)` is the outward normal.
pub fn sphere_cube_faces(center: &[f64], radius: f64) -> Result<PatchComplex> {
    if center.len() != 3 || !(radius > 0.0) {
        return Err(Error::InvalidDomain("sphere needs a 3-d center and radius > 0".into()));
    }
    // Each face: u(a, b) = P (a, b, 1) for a signed permutation P.
    // (axis of a, axis of b, fixed axis, fixed value)
    let layouts: [(usize, usize, usize, f64); 6] = [
        (1, 2, 0, 1.0),
        (2, 1, 0, -1.0),
        (2, 0, 1, 1.0),
        (0, 2, 1, -1.0),
        (0, 1, 2, 1.0),
        (1, 0, 2, -1.0),
    ];
    let c = [center[0], center[1], center[2]];
    let mut patches = Vec::new();
    for (ia, ib, ifx, v) in layouts {
        let cube = move |s: &[f64]| {
            let mut u = [0.0; 3];
            u[ia] = s[0];
            u[ib] = s[1];
            u[ifx] = v;
            u
        };
        let p = PatchMap::new(KRectangle::new(vec![(-1.0, 1.0), (-1.0, 1.0)])?, 3, move |s| {
            let u = cube(s);
            let len = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
            (0..3).map(|i| c[i] + radius * u[i] / len).collect()
        })?
        .with_jacobian(move |s| {
            let u = cube(s);
            let len2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
            let len = len2.sqrt();
            [ia, ib]
                .iter()
                .map(|&axis| {
                    // d/da (u/|u|) = e_axis/|u| - u u_axis/|u|^3
                    (0..3)
                        .map(|i| {
                            let delta = if i == axis { 1.0 } else { 0.0 };
                            radius * (delta / len - u[i] * u[axis] / (len2 * len))
                        })
                        .collect()
                })
                .collect()
        })
        .with_name("sphere_face");
        patches.push((p, Orientation::Positive));
    }
    glue_patches(patches)
}

/// Closed circle as a one-patch complex.
pub fn circle_boundary(center: &[f64], radius: f64) -> Result<PatchComplex> {
    glue_patches(vec![(circle(center, radius)?, Orientation::Positive)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Multivector, Signature};
    use crate::patch::{tangent_frame, PatchMap};

    fn fd_matches_analytic(p: &PatchMap, s: &[f64]) {
        let analytic = p.tangents(s).unwrap();
        let fd = p.clone().without_jacobian().tangents(s).unwrap();
        for (a, b) in analytic.iter().zip(&fd) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-8, "{}: {x} vs {y}", p.name());
            }
        }
    }

    #[test]
    fn analytic_jacobians_agree_with_differences() {
        fd_matches_analytic(&figure2(), &[0.7, 0.2]);
        fd_matches_analytic(&disk_polar(1.5).unwrap(), &[0.7, 2.0]);
        fd_matches_analytic(&sphere_octant(2.0).unwrap(), &[0.3, 1.1]);
        fd_matches_analytic(&circle(&[1.0, 2.0], 0.5).unwrap(), &[1.0]);
        fd_matches_analytic(&arc(&[0.0, 0.0], 1.0, 0.0, FRAC_PI_2).unwrap(), &[0.4]);
        for face in sphere_cube_faces(&[0.0, 0.0, 0.0], 1.0).unwrap().patches() {
            fd_matches_analytic(&face.patch, &[0.3, -0.6]);
        }
    }

    #[test]
    fn sphere_faces_point_outward() {
        let sig = Signature::euclidean(3).unwrap();
        let inv = Multivector::pseudoscalar_inverse(sig);
        for face in sphere_cube_faces(&[0.0, 0.0, 0.0], 1.0).unwrap().patches() {
            let f = tangent_frame(&face.patch, &[0.2, -0.1]).unwrap();
            let normal = (&inv * &f.kvector).vector_part();
            let radial: f64 = normal.iter().zip(&f.point).map(|(a, b)| a * b).sum();
            assert!(radial > 0.0);
        }
    }

    #[test]
    fn circle_normal_is_outward() {
        let sig = Signature::euclidean(2).unwrap();
        let inv = Multivector::pseudoscalar_inverse(sig);
        let p = circle(&[0.0, 0.0], 1.0).unwrap();
        let f = tangent_frame(&p, &[0.8]).unwrap();
        let n = (&inv * &f.kvector).vector_part();
        assert!(n[0] * f.point[0] + n[1] * f.point[1] > 0.0);
    }

    #[test]
    fn linear_patch_shape_checks() {
        let dom = KRectangle::unit(2).unwrap();
        assert!(linear(&[vec![1.0, 0.0], vec![0.0]], dom.clone()).is_err());
        let p = linear(&[vec![1.0, 2.0], vec![0.0, 1.0], vec![3.0, 0.0]], dom).unwrap();
        assert_eq!(p.eval(&[1.0, 1.0]).unwrap(), vec![3.0, 1.0, 3.0]);
    }
}
