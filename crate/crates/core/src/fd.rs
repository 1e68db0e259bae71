//! Fourth-order finite-difference stencils.

use crate::algebra::Multivector;
use crate::error::{Error, Result};

/// `eps^(1/5)`: the step scale balancing truncation and roundoff for
/// fourth-order first-derivative stencils.
pub fn step_scale() -> f64 {
    f64::EPSILON.powf(0.2)
}

/// Values a stencil can be applied to.
pub(crate) trait Stencil: Sized {
    fn combine(terms: &[(f64, &Self)], scale: f64) -> Self;
}

impl Stencil for Vec<f64> {
    fn combine(terms: &[(f64, &Self)], scale: f64) -> Self {
        let mut out = vec![0.0; terms[0].1.len()];
        for (w, v) in terms {
            for (o, x) in out.iter_mut().zip(v.iter()) {
                *o += w * x;
            }
        }
        out.iter_mut().for_each(|o| *o *= scale);
        out
    }
}

impl Stencil for Multivector {
    fn combine(terms: &[(f64, &Self)], scale: f64) -> Self {
        let mut out = Multivector::zero(terms[0].1.sig());
        for (w, v) in terms {
            out.add_scaled(v, *w);
        }
        out.scale(scale)
    }
}

/// Which stencil to use at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Direction {
    Central,
    Forward,
    Backward,
}

/// First derivative of `f` at `t0` with step `h`.
pub(crate) fn derivative<T: Stencil>(
    mut f: impl FnMut(f64) -> Result<T>,
    t0: f64,
    h: f64,
    dir: Direction,
) -> Result<T> {
    if !(h > 0.0) || t0 + h == t0 {
        return Err(Error::StepUnderflow { point: vec![t0] });
    }
    match dir {
        Direction::Central => {
            let m2 = f(t0 - 2.0 * h)?;
            let m1 = f(t0 - h)?;
            let p1 = f(t0 + h)?;
            let p2 = f(t0 + 2.0 * h)?;
            Ok(T::combine(
                &[(1.0, &m2), (-8.0, &m1), (8.0, &p1), (-1.0, &p2)],
                1.0 / (12.0 * h),
            ))
        }
        Direction::Forward | Direction::Backward => {
            let hs = if dir == Direction::Forward { h } else { -h };
            let v: Vec<T> = (0..5)
                .map(|j| f(t0 + j as f64 * hs))
                .collect::<Result<_>>()?;
            Ok(T::combine(
                &[
                    (-25.0, &v[0]),
                    (48.0, &v[1]),
                    (-36.0, &v[2]),
                    (16.0, &v[3]),
                    (-3.0, &v[4]),
                ],
                1.0 / (12.0 * hs),
            ))
        }
    }
}
