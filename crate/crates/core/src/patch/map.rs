use std::fmt;
use std::sync::Arc;

use super::rectangle::KRectangle;
use crate::error::{Error, Result};
use crate::fd::{self, Direction};

/// `s -> x(s)`, with `s` in the parameter domain and `x` in `R^n`.
pub type MapFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
/// `s -> [dx/ds^1, ..., dx/ds^k]`.
pub type JacobianFn = dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync;

/// Declared differentiability class. A user contract; never checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Smoothness {
    C1,
    #[default]
    C2,
}

/// A parametrized rectangular k-patch `x: R -> R^n`.
///
/// Callables must be pure; they are invoked concurrently from the quadrature
/// workers.
#[derive(Clone)]
pub struct PatchMap {
    name: String,
    domain: KRectangle,
    ambient_dim: usize,
    map: Arc<MapFn>,
    jacobian: Option<Arc<JacobianFn>>,
    smoothness: Smoothness,
}

impl fmt::Debug for PatchMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PatchMap")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("ambient_dim", &self.ambient_dim)
            .field("analytic_jacobian", &self.jacobian.is_some())
            .finish()
    }
}

impl PatchMap {
    pub fn new(
        domain: KRectangle,
        ambient_dim: usize,
        map: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if domain.k() > ambient_dim {
            return Err(Error::PatchDimension {
                k: domain.k(),
                n: ambient_dim,
            });
        }
        crate::algebra::Signature::euclidean(ambient_dim)?;
        Ok(PatchMap {
            name: "patch".into(),
            domain,
            ambient_dim,
            map: Arc::new(map),
            jacobian: None,
            smoothness: Smoothness::default(),
        })
    }

    pub fn with_jacobian(
        mut self,
        jacobian: impl Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        self.jacobian = Some(Arc::new(jacobian));
        self
    }

    /// Drops the analytic Jacobian so tangents come from finite differences.
    pub fn without_jacobian(mut self) -> Self {
        self.jacobian = None;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_smoothness(mut self, smoothness: Smoothness) -> Self {
        self.smoothness = smoothness;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &KRectangle {
        &self.domain
    }

    pub fn k(&self) -> usize {
        self.domain.k()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    fn raw_eval(&self, s: &[f64]) -> Result<Vec<f64>> {
        let x = (self.map)(s);
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "patch `{}` returned {} coordinates, expected {}",
                self.name,
                x.len(),
                self.ambient_dim
            )));
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { point: s.to_vec() });
        }
        Ok(x)
    }

    /// `x(s)`; `s` must lie in the domain up to a roundoff margin.
    pub fn eval(&self, s: &[f64]) -> Result<Vec<f64>> {
        let s = self.domain.clamp(s)?;
        self.raw_eval(&s)
    }

    /// Tangent vectors `x_i = dx/ds^i` at `s`.
    ///
    /// Without an analytic Jacobian, fourth-order differences are used with
    /// step `max(|s^i|, 1) eps^(1/5)`; the stencil turns one-sided near the
    /// edges so the map is never evaluated outside the domain.
    pub fn tangents(&self, s: &[f64]) -> Result<Vec<Vec<f64>>> {
        let s = self.domain.clamp(s)?;
        if let Some(jac) = &self.jacobian {
            let t = jac(&s);
            if t.len() != self.k() || t.iter().any(|v| v.len() != self.ambient_dim) {
                return Err(Error::DimensionMismatch(format!(
                    "Jacobian of `{}` has the wrong shape",
                    self.name
                )));
            }
            if t.iter().flatten().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite { point: s });
            }
            return Ok(t);
        }
        let mut out = Vec::with_capacity(self.k());
        for (i, &(a, b)) in self.domain.bounds().iter().enumerate() {
            let si = s[i];
            let h = (si.abs().max(1.0) * fd::step_scale()).min((b - a) / 4.0);
            let dir = if si - 2.0 * h < a {
                Direction::Forward
            } else if si + 2.0 * h > b {
                Direction::Backward
            } else {
                Direction::Central
            };
            let mut probe = s.clone();
            let d = fd::derivative(
                |t| {
                    probe[i] = t;
                    self.raw_eval(&probe)
                },
                si,
                h,
                dir,
            )?;
            out.push(d);
        }
        Ok(out)
    }

    /// The same surface with axis `axis` traversed backwards,
    /// `s^i -> a^i + b^i - s^i`. Its directed content is negated.
    pub fn reversed_axis(&self, axis: usize) -> PatchMap {
        let (a, b) = self.domain.bounds()[axis];
        let flip = move |s: &[f64]| {
            let mut t = s.to_vec();
            t[axis] = a + b - t[axis];
            t
        };
        let map = self.map.clone();
        let mut out = PatchMap {
            name: format!("{}~rev{}", self.name, axis + 1),
            domain: self.domain.clone(),
            ambient_dim: self.ambient_dim,
            map: Arc::new(move |s: &[f64]| map(&flip(s))),
            jacobian: None,
            smoothness: self.smoothness,
        };
        if let Some(jac) = self.jacobian.clone() {
            out.jacobian = Some(Arc::new(move |s: &[f64]| {
                let mut t = jac(&flip(s));
                for c in t[axis].iter_mut() {
                    *c = -*c;
                }
                t
            }));
        }
        out
    }
}
