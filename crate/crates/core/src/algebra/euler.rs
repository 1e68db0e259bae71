use super::multivector::Multivector;
use crate::error::{Error, Result};

/// Threshold on `|sin θ|` below which two vectors count as parallel.
pub const PARALLEL_EPS: f64 = 1e-10;

/// Polar form of the product of two vectors: `ab = |a||b|(cos θ + i sin θ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerForm {
    pub magnitude: f64,
    pub angle: f64,
    /// Unit bivector of the plane spanned by `a` and `b`; `None` when parallel.
    pub plane: Option<Multivector>,
}

impl EulerForm {
    /// Rebuilds `ab` from the polar form. For parallel inputs the plane term
    /// vanishes and only the scalar survives.
    pub fn reconstruct(&self, sig: crate::algebra::Signature) -> Multivector {
        let mut out = Multivector::scalar(sig, self.magnitude * self.angle.cos());
        if let Some(plane) = &self.plane {
            out.add_scaled(plane, self.magnitude * self.angle.sin());
        }
        out
    }
}

pub fn euler_decompose(a: &Multivector, b: &Multivector) -> Result<EulerForm> {
    for v in [a, b] {
        match v.homogeneous_grade() {
            Some(1) => {}
            None if v.is_zero() => return Err(Error::ZeroVector),
            _ => return Err(Error::NotAVector),
        }
    }
    let na = a.norm();
    let nb = b.norm();
    let dot = a.inner_product(b)?.scalar_part();
    let wedge = a.outer_product(b)?;
    let wn = wedge.norm();
    let magnitude = na * nb;
    let angle = wn.atan2(dot);
    let plane = if wn / magnitude < PARALLEL_EPS {
        None
    } else {
        Some(wedge.scale(1.0 / wn))
    };
    Ok(EulerForm {
        magnitude,
        angle,
        plane,
    })
}
