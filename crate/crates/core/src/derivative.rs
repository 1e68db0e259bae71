//! The two-sided vector derivative on patches and the flat vector
//! derivative on `R^n`.

use crate::algebra::Multivector;
use crate::error::{Error, Result};
use crate::field::FieldFn;
use crate::patch::{tangent_frame, FrameData, PatchMap};

/// `g ∂ f` at one parameter point, split by axis and by which factor is
/// differentiated.
#[derive(Clone, Debug)]
pub struct TwoSidedDerivativeResult {
    pub value: Multivector,
    /// `∂/∂s^i (ġ x^i ḟ)` for each axis.
    pub per_axis_terms: Vec<Multivector>,
    /// `ġ ∂ f`: only `g` differentiated.
    pub left: Multivector,
    /// `g ∂ ḟ`: only `f` differentiated.
    pub right: Multivector,
}

pub(crate) fn check_dims(p: &PatchMap, fields: &[&FieldFn]) -> Result<()> {
    for f in fields {
        if f.dim() != p.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "field `{}` lives on R^{} but patch `{}` is in R^{}",
                f.name(),
                f.dim(),
                p.ambient_dim(),
                p.name()
            )));
        }
    }
    Ok(())
}

/// Per-axis derivatives of a field along the tangents, `∂/∂s^i f(x(s))`.
///
/// The chain rule turns the parameter derivative into the directional
/// derivative along `x_i`, which keeps every stencil centred even on the
/// boundary of the parameter domain.
pub(crate) fn axis_derivatives(f: &FieldFn, frame: &FrameData) -> Vec<Multivector> {
    frame
        .tangents
        .iter()
        .map(|t| {
            if f.is_constant() {
                Multivector::zero(f.sig())
            } else {
                f.directional(&frame.point, &t.vector_part())
            }
        })
        .collect()
}

/// `Σ_i ∂/∂s^i (ġ x^i ḟ)` with the reciprocal frame held fixed at `s`.
pub fn two_sided_derivative(
    g: &FieldFn,
    f: &FieldFn,
    p: &PatchMap,
    s: &[f64],
) -> Result<TwoSidedDerivativeResult> {
    check_dims(p, &[g, f])?;
    let frame = tangent_frame(p, s)?;
    let gv = g.try_eval(&frame.point)?;
    let fv = f.try_eval(&frame.point)?;
    let dg = axis_derivatives(g, &frame);
    let df = axis_derivatives(f, &frame);
    let sig = frame.sig();
    let mut left = Multivector::zero(sig);
    let mut right = Multivector::zero(sig);
    let mut per_axis_terms = Vec::with_capacity(frame.k());
    for (i, recip) in frame.reciprocals.iter().enumerate() {
        let l = &(&dg[i] * recip) * &fv;
        let r = &(&gv * recip) * &df[i];
        left += &l;
        right += &r;
        per_axis_terms.push(l + r);
    }
    let value = &left + &right;
    if !value.is_finite() {
        return Err(Error::NonFinite { point: s.to_vec() });
    }
    Ok(TwoSidedDerivativeResult {
        value,
        per_axis_terms,
        left,
        right,
    })
}

/// `∂f = Σ_j e_j ∂f/∂x^j`, with the basis vectors acting from the left.
pub fn flat_vector_derivative(f: &FieldFn, x: &[f64]) -> Result<Multivector> {
    let n = f.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "point in R^{} for a field on R^{n}",
            x.len()
        )));
    }
    let sig = f.sig();
    let mut out = Multivector::zero(sig);
    let mut dir = vec![0.0; n];
    for j in 0..n {
        dir.iter_mut().for_each(|d| *d = 0.0);
        dir[j] = 1.0;
        let d = if f.has_analytic_derivative() {
            f.directional(x, &dir)
        } else {
            f.directional_fd(x, &dir)?
        };
        let e = Multivector::basis(sig, &[j + 1])?;
        out += &(&e * &d);
    }
    if !out.is_finite() {
        return Err(Error::NonFinite { point: x.to_vec() });
    }
    Ok(out)
}

/// Right-acting form `f ∂ = Σ_j (∂f/∂x^j) e_j`.
pub fn flat_vector_derivative_right(f: &FieldFn, x: &[f64]) -> Result<Multivector> {
    let n = f.dim();
    let sig = f.sig();
    let mut out = Multivector::zero(sig);
    let mut dir = vec![0.0; n];
    for j in 0..n {
        dir.iter_mut().for_each(|d| *d = 0.0);
        dir[j] = 1.0;
        let d = f.directional(x, &dir);
        out += &(&d * &Multivector::basis(sig, &[j + 1])?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Signature;
    use crate::patch::builtin;

    #[test]
    fn constants_have_zero_two_sided_derivative() {
        let s = Signature::euclidean(3).unwrap();
        let one = FieldFn::one(s);
        let r = two_sided_derivative(&one, &one, &builtin::figure2(), &[0.3, 0.6]).unwrap();
        assert!(r.value.is_zero());
    }

    #[test]
    fn derivative_of_position_is_dimension() {
        for n in 1..=4 {
            let s = Signature::euclidean(n).unwrap();
            let p = builtin::identity(n).unwrap();
            let x = FieldFn::identity_vector(s);
            let r = two_sided_derivative(&FieldFn::one(s), &x, &p, &vec![0.4; n]).unwrap();
            assert!((&r.value - &Multivector::scalar(s, n as f64)).max_norm() < 1e-14);
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let s2 = Signature::euclidean(2).unwrap();
        let r = two_sided_derivative(
            &FieldFn::one(s2),
            &FieldFn::one(s2),
            &builtin::figure2(),
            &[0.5, 0.5],
        );
        assert!(matches!(r, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn flat_derivative_examples() {
        let s = Signature::euclidean(3).unwrap();
        let x = [0.5, -1.0, 2.0];
        let xv = Multivector::vector(s, &x).unwrap();
        let d = flat_vector_derivative(&FieldFn::identity_vector(s), &x).unwrap();
        assert!((&d - &Multivector::scalar(s, 3.0)).max_norm() < 1e-14);
        let d = flat_vector_derivative(&FieldFn::norm_squared(s), &x).unwrap();
        assert!((&d - &xv.scale(2.0)).max_norm() < 1e-14);
        let d = flat_vector_derivative(&FieldFn::log_norm(s), &x).unwrap();
        let inv = xv.blade_inverse().unwrap();
        assert!((&d - &inv).max_norm() < 1e-14);
        let d = flat_vector_derivative(&FieldFn::log_norm(s).without_derivative(), &x).unwrap();
        assert!((&d - &inv).max_norm() < 1e-10);
    }
}
