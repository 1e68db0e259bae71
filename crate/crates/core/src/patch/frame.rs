//! Tangent and reciprocal frames of a patch, and oriented face measures.

use super::map::PatchMap;
use super::rectangle::Face;
use crate::algebra::{Multivector, Signature};
use crate::error::{Error, Result};

/// Relative threshold on `|x_(k)|` against the product of tangent norms.
pub const REGULARITY_EPS: f64 = 1e-10;

/// The local frame of a patch at one parameter point.
#[derive(Clone, Debug)]
pub struct FrameData {
    pub param: Vec<f64>,
    pub point: Vec<f64>,
    /// `x_i = dx/ds^i`.
    pub tangents: Vec<Multivector>,
    /// `x_(k) = x_1 ^ ... ^ x_k`.
    pub kvector: Multivector,
    /// `x^i` with `x^i . x_j = delta^i_j`.
    pub reciprocals: Vec<Multivector>,
}

impl FrameData {
    pub fn k(&self) -> usize {
        self.tangents.len()
    }

    pub fn sig(&self) -> Signature {
        self.kvector.sig()
    }

    /// `x_(k) x^i` for a 0-based axis; a `(k-1)`-vector.
    pub fn face_product(&self, axis: usize) -> Multivector {
        &self.kvector * &self.reciprocals[axis]
    }

    /// `|x_(k)|`, the scalar volume element.
    pub fn volume_element(&self) -> f64 {
        self.kvector.norm()
    }
}

fn vectors(sig: Signature, raw: &[Vec<f64>]) -> Result<Vec<Multivector>> {
    raw.iter().map(|v| Multivector::vector(sig, v)).collect()
}

fn tangent_product(tangents: &[Multivector]) -> f64 {
    tangents.iter().map(Multivector::norm).product()
}

/// Builds the frame from tangent vectors, failing on degeneracy.
pub fn frame_from_tangents(
    param: Vec<f64>,
    point: Vec<f64>,
    tangents: Vec<Multivector>,
) -> Result<FrameData> {
    let sig = tangents[0].sig();
    let kvector = Multivector::wedge_all(sig, &tangents);
    let wedge_norm = kvector.norm();
    let prod = tangent_product(&tangents);
    if !(wedge_norm > REGULARITY_EPS * prod) || !(wedge_norm > 0.0) {
        return Err(Error::Regularity {
            point: param,
            wedge_norm,
            tangent_product: prod,
        });
    }
    let reciprocals = reciprocal_frame(&tangents, &kvector)?;
    Ok(FrameData {
        param,
        point,
        tangents,
        kvector,
        reciprocals,
    })
}

/// `x^i = (-1)^{i-1} (x_1 ^ ... x_i-hat ... ^ x_k) . x_(k)^{-1}`.
///
/// For `k = 1` the inner product with a scalar would vanish, so the
/// reciprocal is `x_1 / |x_1|^2` directly.
fn reciprocal_frame(tangents: &[Multivector], kvector: &Multivector) -> Result<Vec<Multivector>> {
    let sig = kvector.sig();
    let k = tangents.len();
    if k == 1 {
        let t = &tangents[0];
        let nn = t.norm().powi(2);
        return Ok(vec![t.scale(1.0 / nn)]);
    }
    let inverse = kvector.blade_inverse()?;
    (0..k)
        .map(|i| {
            let others = Multivector::wedge_all(
                sig,
                tangents.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, t)| t),
            );
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            Ok(others.inner_product(&inverse)?.scale(sign))
        })
        .collect()
}

/// Frame of `p` at parameter point `s`.
pub fn tangent_frame(p: &PatchMap, s: &[f64]) -> Result<FrameData> {
    let sig = Signature::euclidean(p.ambient_dim())?;
    let s = p.domain().clamp(s)?;
    let point = p.eval(&s)?;
    let tangents = vectors(sig, &p.tangents(&s)?)?;
    frame_from_tangents(s, point, tangents)
}

/// Point, tangents and tangent k-vector, skipping the reciprocal frame.
pub(crate) fn tangent_kvector(
    p: &PatchMap,
    s: &[f64],
) -> Result<(Vec<f64>, Vec<Multivector>, Multivector)> {
    let sig = Signature::euclidean(p.ambient_dim())?;
    let s = p.domain().clamp(s)?;
    let point = p.eval(&s)?;
    let tangents = vectors(sig, &p.tangents(&s)?)?;
    let kvector = Multivector::wedge_all(sig, &tangents);
    let wedge_norm = kvector.norm();
    let prod = tangent_product(&tangents);
    if !(wedge_norm > REGULARITY_EPS * prod) || !(wedge_norm > 0.0) {
        return Err(Error::Regularity {
            point: s,
            wedge_norm,
            tangent_product: prod,
        });
    }
    Ok((point, tangents, kvector))
}

/// Everything the boundary integral needs at one face point.
#[derive(Clone, Debug)]
pub struct FaceFrame {
    pub param: Vec<f64>,
    pub point: Vec<f64>,
    /// The patch frame at the boundary point; `None` where the face collapses.
    pub frame: Option<FrameData>,
    /// The oriented `(k-1)`-vector `±x_(k) x^i`.
    pub measure: Multivector,
}

/// `(-1)^{k-i} x_1 ^ ... x_i-hat ... ^ x_k` (1-based `i`), which equals
/// `x_(k) x^i` wherever the frame is regular and stays well defined where it
/// is not.
pub fn face_wedge(tangents: &[Multivector], axis: usize) -> Multivector {
    let sig = tangents[0].sig();
    let k = tangents.len();
    let others = Multivector::wedge_all(
        sig,
        tangents.iter().enumerate().filter(|&(j, _)| j != axis).map(|(_, t)| t),
    );
    if (k - 1 - axis) % 2 == 0 {
        others
    } else {
        -others
    }
}

/// Frame and oriented measure at the face point lifted from `t`.
///
/// A face along which the patch collapses (a polar axis, say) has zero
/// measure; there the frame is degenerate and `frame` is `None`. A degenerate
/// frame with nonzero face measure is a genuine regularity violation.
pub fn face_frame(p: &PatchMap, face: &Face, t: &[f64]) -> Result<FaceFrame> {
    let sig = Signature::euclidean(p.ambient_dim())?;
    let s = p.domain().clamp(&face.lift(t))?;
    let point = p.eval(&s)?;
    let tangents = vectors(sig, &p.tangents(&s)?)?;
    let measure = face_wedge(&tangents, face.axis).scale(face.sign());
    match frame_from_tangents(s.clone(), point.clone(), tangents.clone()) {
        Ok(frame) => Ok(FaceFrame {
            param: s,
            point,
            frame: Some(frame),
            measure,
        }),
        Err(err @ Error::Regularity { .. }) => {
            let scale = tangents.iter().map(Multivector::norm).fold(0.0, f64::max);
            let collapsed = measure.norm() <= REGULARITY_EPS * scale.powi(p.k() as i32 - 1)
                || scale == 0.0;
            if collapsed && p.k() > 1 {
                Ok(FaceFrame {
                    param: s,
                    point,
                    frame: None,
                    measure,
                })
            } else {
                Err(err)
            }
        }
        Err(other) => Err(other),
    }
}
