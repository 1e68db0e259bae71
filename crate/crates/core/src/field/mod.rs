//! Multivector-valued fields on open subsets of `R^n`.

mod poly;

use std::fmt;
use std::sync::Arc;

use crate::algebra::{Blade, Multivector, Signature};
use crate::error::{Error, Result};
use crate::fd::{self, Direction};

pub use poly::{parse_poly_field, parse_polynomial, MvPolynomial};

pub type EvalFn = dyn Fn(&[f64]) -> Multivector + Send + Sync;
/// `(x, v) -> (v . grad) f (x)`.
pub type DirectionalFn = dyn Fn(&[f64], &[f64]) -> Multivector + Send + Sync;

/// A G_n-valued function of a point in `R^n`, declared of class C^1 on an
/// open set containing every patch it is integrated over.
#[derive(Clone)]
pub struct FieldFn {
    name: String,
    sig: Signature,
    eval: Arc<EvalFn>,
    directional: Option<Arc<DirectionalFn>>,
    singularity: Option<Vec<f64>>,
    constant: bool,
}

impl fmt::Debug for FieldFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldFn")
            .field("name", &self.name)
            .field("dim", &self.sig.dim())
            .field("analytic", &self.directional.is_some())
            .finish()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl FieldFn {
    pub fn new(
        sig: Signature,
        name: impl Into<String>,
        eval: impl Fn(&[f64]) -> Multivector + Send + Sync + 'static,
    ) -> Self {
        FieldFn {
            name: name.into(),
            sig,
            eval: Arc::new(eval),
            directional: None,
            singularity: None,
            constant: false,
        }
    }

    /// Attaches an analytic directional derivative `(x, v) -> (v . grad) f`.
    pub fn with_directional(
        mut self,
        d: impl Fn(&[f64], &[f64]) -> Multivector + Send + Sync + 'static,
    ) -> Self {
        self.directional = Some(Arc::new(d));
        self
    }

    /// Removes the analytic derivative so every derivative is differenced.
    pub fn without_derivative(mut self) -> Self {
        self.directional = None;
        self.constant = false;
        self
    }

    /// Declares a point where the field is singular.
    pub fn with_singularity(mut self, point: Vec<f64>) -> Self {
        self.singularity = Some(point);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn constant(value: Multivector) -> Self {
        let sig = value.sig();
        let v = value.clone();
        let mut f = FieldFn::new(sig, format!("constant({value})"), move |_| v.clone())
            .with_directional(move |_, _| Multivector::zero(sig));
        f.constant = true;
        f
    }

    pub fn one(sig: Signature) -> Self {
        Self::constant(Multivector::one(sig)).with_name("one")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn dim(&self) -> usize {
        self.sig.dim()
    }

    pub fn is_constant(&self) -> bool {
        self.constant
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.directional.is_some()
    }

    pub fn singularity(&self) -> Option<&[f64]> {
        self.singularity.as_deref()
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> Multivector {
        (self.eval)(x)
    }

    /// Evaluates with shape and finiteness checks.
    pub fn try_eval(&self, x: &[f64]) -> Result<Multivector> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "field `{}` lives on R^{}, got a point in R^{}",
                self.name,
                self.dim(),
                x.len()
            )));
        }
        let v = self.eval(x);
        if v.sig() != self.sig {
            return Err(Error::SignatureMismatch {
                left: self.dim(),
                right: v.sig().dim(),
            });
        }
        if !v.is_finite() {
            return Err(Error::NonFinite { point: x.to_vec() });
        }
        Ok(v)
    }

    /// `(v . grad) f (x)`: analytic when available, otherwise a fourth-order
    /// central difference along `v` with step `eps^(1/5) max(1, |x|) / |v|`.
    pub fn directional(&self, x: &[f64], v: &[f64]) -> Multivector {
        if let Some(d) = &self.directional {
            return d(x, v);
        }
        self.directional_fd(x, v)
            .expect("finite-difference step is positive for nonzero directions")
    }

    pub fn directional_fd(&self, x: &[f64], v: &[f64]) -> Result<Multivector> {
        let vn = norm(v);
        if vn == 0.0 {
            return Ok(Multivector::zero(self.sig));
        }
        let h = fd::step_scale() * norm(x).max(1.0) / vn;
        let mut probe = x.to_vec();
        fd::derivative(
            |t| {
                for ((p, xi), vi) in probe.iter_mut().zip(x).zip(v) {
                    *p = xi + t * vi;
                }
                Ok(self.eval(&probe))
            },
            0.0,
            h,
            Direction::Central,
        )
    }

    // Built-in fields, each with its analytic derivative.

    /// `x -> x`.
    pub fn identity_vector(sig: Signature) -> Self {
        FieldFn::new(sig, "identity_vector", move |x| vec_mv(sig, x))
            .with_directional(move |_, v| vec_mv(sig, v))
    }

    /// `x -> |x|^2`.
    pub fn norm_squared(sig: Signature) -> Self {
        FieldFn::new(sig, "norm_squared", move |x| Multivector::scalar(sig, dot(x, x)))
            .with_directional(move |x, v| Multivector::scalar(sig, 2.0 * dot(x, v)))
    }

    /// `x -> |x|^k` (any real `k`; singular at the origin for `k < 1`).
    pub fn norm_power(sig: Signature, k: f64) -> Self {
        FieldFn::new(sig, format!("norm_power({k})"), move |x| {
            Multivector::scalar(sig, norm(x).powf(k))
        })
        .with_directional(move |x, v| {
            Multivector::scalar(sig, k * norm(x).powf(k - 2.0) * dot(x, v))
        })
        .with_singularity(vec![0.0; sig.dim()])
    }

    /// `x -> x / |x|^k`.
    pub fn kernel_power(sig: Signature, k: f64) -> Self {
        FieldFn::new(sig, format!("kernel_power({k})"), move |x| {
            vec_mv(sig, x).scale(norm(x).powf(-k))
        })
        .with_directional(move |x, v| {
            let r = norm(x);
            let mut out = vec_mv(sig, v).scale(r.powf(-k));
            out.add_scaled(&vec_mv(sig, x), -k * dot(x, v) * r.powf(-k - 2.0));
            out
        })
        .with_singularity(vec![0.0; sig.dim()])
    }

    /// `x -> log |x|`.
    pub fn log_norm(sig: Signature) -> Self {
        FieldFn::new(sig, "log_norm", move |x| Multivector::scalar(sig, norm(x).ln()))
            .with_directional(move |x, v| Multivector::scalar(sig, dot(x, v) / dot(x, x)))
            .with_singularity(vec![0.0; sig.dim()])
    }

    /// `x -> A x` for an `n x n` matrix given by rows.
    pub fn linear_vector(sig: Signature, matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = sig.dim();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("linear field needs an {n} x {n} matrix")));
        }
        let a = Arc::new(matrix);
        let b = a.clone();
        let apply = move |m: &[Vec<f64>], x: &[f64]| -> Vec<f64> {
            m.iter().map(|row| dot(row, x)).collect()
        };
        Ok(FieldFn::new(sig, "linear_vector", move |x| vec_mv(sig, &apply(&a, x)))
            .with_directional(move |_, v| vec_mv(sig, &apply(&b, v))))
    }

    /// The rotation field `-x2 e1 + x1 e2` (n >= 2), whose curl is `2 e3` in R^3.
    pub fn rotation(sig: Signature) -> Result<Self> {
        if sig.dim() < 2 {
            return Err(Error::DimensionMismatch("rotation field needs n >= 2".into()));
        }
        let rot = move |x: &[f64]| {
            let mut m = Multivector::zero(sig);
            m.set_coeff(Blade::vector(1), -x[1]);
            m.set_coeff(Blade::vector(2), x[0]);
            m
        };
        Ok(FieldFn::new(sig, "rotation", rot).with_directional(move |_, v| rot(v)))
    }

    /// The G_2 image `u + v e12` of the analytic function `z -> z^p`.
    ///
    /// With `z = x1 + i x2`, the left vector derivative of `u + v e12` is
    /// `(u_1 - v_2) e1 + (u_2 + v_1) e2`, which vanishes exactly when the
    /// Cauchy-Riemann equations hold; so these fields are monogenic.
    pub fn complex_power(p: u32) -> Self {
        let sig = Signature::euclidean(2).expect("n = 2");
        let to_mv = move |(u, v): (f64, f64)| {
            let mut m = Multivector::scalar(sig, u);
            m.set_coeff(Blade(0b11), v);
            m
        };
        FieldFn::new(sig, format!("complex_power({p})"), move |x| {
            to_mv(cpow(x[0], x[1], p))
        })
        .with_directional(move |x, v| {
            // d/dt (z + t w)^p = p z^{p-1} w
            if p == 0 {
                return Multivector::zero(sig);
            }
            let (a, b) = cpow(x[0], x[1], p - 1);
            let (c, d) = (v[0], v[1]);
            to_mv((p as f64 * (a * c - b * d), p as f64 * (a * d + b * c)))
        })
    }
}

fn cpow(x: f64, y: f64, p: u32) -> (f64, f64) {
    let mut acc = (1.0, 0.0);
    for _ in 0..p {
        acc = (acc.0 * x - acc.1 * y, acc.0 * y + acc.1 * x);
    }
    acc
}

fn vec_mv(sig: Signature, x: &[f64]) -> Multivector {
    Multivector::vector(sig, x).expect("point dimension matches field dimension")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn analytic_vs_fd(f: &FieldFn, x: &[f64], v: &[f64], tol: f64) {
        let a = f.directional(x, v);
        let d = f.directional_fd(x, v).unwrap();
        let err = (&a - &d).max_norm();
        assert!(err < tol, "{}: {err:e}", f.name());
    }

    #[test]
    fn builtin_derivatives_match_differences() {
        let s3 = Signature::euclidean(3).unwrap();
        let x = [0.7, -0.4, 1.1];
        let v = [0.3, 0.9, -0.5];
        analytic_vs_fd(&FieldFn::identity_vector(s3), &x, &v, 1e-10);
        analytic_vs_fd(&FieldFn::norm_squared(s3), &x, &v, 1e-10);
        analytic_vs_fd(&FieldFn::norm_power(s3, -1.5), &x, &v, 1e-9);
        analytic_vs_fd(&FieldFn::kernel_power(s3, 3.0), &x, &v, 1e-9);
        analytic_vs_fd(&FieldFn::log_norm(s3), &x, &v, 1e-10);
        analytic_vs_fd(&FieldFn::rotation(s3).unwrap(), &x, &v, 1e-10);
        analytic_vs_fd(&FieldFn::complex_power(3), &x[..2], &v[..2], 1e-9);
        let lin = FieldFn::linear_vector(s3, vec![vec![1.0, 2.0, 0.0], vec![0.0, 1.0, 0.0], vec![3.0, 0.0, -1.0]])
            .unwrap();
        analytic_vs_fd(&lin, &x, &v, 1e-10);
    }

    #[test]
    fn constants_have_zero_derivative() {
        let s = Signature::euclidean(2).unwrap();
        let c = FieldFn::constant(Multivector::basis(s, &[1, 2]).unwrap());
        assert!(c.is_constant());
        assert!(c.directional(&[1.0, 2.0], &[1.0, 0.0]).is_zero());
        assert!(!c.clone().without_derivative().is_constant());
    }

    #[test]
    fn try_eval_checks_shape_and_finiteness() {
        let s = Signature::euclidean(2).unwrap();
        let f = FieldFn::log_norm(s);
        assert!(matches!(f.try_eval(&[1.0]), Err(Error::DimensionMismatch(_))));
        assert!(matches!(f.try_eval(&[0.0, 0.0]), Err(Error::NonFinite { .. })));
    }
}
