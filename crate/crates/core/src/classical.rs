//! Grade-part specializations of the fundamental theorem: path independence,
//! Green's two planar forms, Stokes and Gauss.
//!
//! Each check computes its classical left side from the flat vector
//! derivative, its right side from the oriented boundary integral, and also
//! extracts both from the general fundamental-theorem integrals so that the
//! two routes can be compared.

use crate::algebra::{Blade, Multivector, Signature};
use crate::derivative::flat_vector_derivative;
use crate::error::{Error, Result};
use crate::field::FieldFn;
use crate::integrate::{boundary_integral, ftc_lhs};
use crate::patch::{tangent_kvector, PatchMap};
use crate::quadrature::{integrate_tensor, AxisRule, QuadratureSpec};
use crate::report::{num, Table};

#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalRow {
    /// `theorem_form`, e.g. `green_flux`.
    pub theorem: String,
    pub scenario: String,
    pub lhs: Multivector,
    pub rhs: Multivector,
    pub residual: f64,
    pub nodes: usize,
}

impl ClassicalRow {
    fn new(theorem: String, scenario: &str, lhs: Multivector, rhs: Multivector, nodes: usize) -> Self {
        ClassicalRow {
            theorem,
            scenario: scenario.to_string(),
            residual: (&lhs - &rhs).max_norm(),
            lhs,
            rhs,
            nodes,
        }
    }

    pub fn rel_residual(&self) -> f64 {
        self.residual / self.rhs.max_norm().max(1.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalReport {
    pub rows: Vec<ClassicalRow>,
    /// Largest gap between the classical sides and the same quantities
    /// extracted from the general integrals, relative to `max(1, |value|)`.
    pub consistency: f64,
}

pub const CLASSICAL_CSV_HEADER: [&str; 6] = ["theorem", "scenario", "lhs", "rhs", "residual", "nodes"];

/// Tolerance for agreement between the classical and general routes.
pub const CONSISTENCY_TOL: f64 = 1e-12;

impl ClassicalReport {
    pub fn max_rel_residual(&self) -> f64 {
        self.rows.iter().map(ClassicalRow::rel_residual).fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_rel_residual() <= tol && self.consistency <= CONSISTENCY_TOL
    }

    pub fn row(&self, theorem: &str) -> Option<&ClassicalRow> {
        self.rows.iter().find(|r| r.theorem == theorem)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&CLASSICAL_CSV_HEADER);
        for r in &self.rows {
            t.push(vec![
                r.theorem.clone(),
                r.scenario.clone(),
                r.lhs.to_string(),
                r.rhs.to_string(),
                num(r.residual),
                r.nodes.to_string(),
            ]);
        }
        t
    }
}

fn gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn require(p: &PatchMap, k: usize, n: usize, what: &str) -> Result<Signature> {
    if p.k() != k || p.ambient_dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "{what} needs a {k}-patch in R^{n}; `{}` is a {}-patch in R^{}",
            p.name(),
            p.k(),
            p.ambient_dim()
        )));
    }
    Signature::euclidean(n)
}

fn require_vector_field(f: &FieldFn, p: &PatchMap) -> Result<()> {
    if f.dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "field `{}` lives on R^{}, patch on R^{}",
            f.name(),
            f.dim(),
            p.ambient_dim()
        )));
    }
    let probe = f.try_eval(&p.eval(&p.domain().center())?)?;
    match probe.homogeneous_grade() {
        Some(1) => Ok(()),
        None if probe.is_zero() => Ok(()),
        _ => Err(Error::NotAVector),
    }
}

/// `∫_R h(x(s), x_(k)(s)) ds` for a node function `h`.
fn volume_quad(
    p: &PatchMap,
    quad: &QuadratureSpec,
    h: impl Fn(&[f64], &Multivector) -> Result<Multivector> + Sync,
) -> Result<Multivector> {
    let sig = Signature::euclidean(p.ambient_dim())?;
    let axes: Vec<AxisRule> = p
        .domain()
        .bounds()
        .iter()
        .map(|&(a, b)| AxisRule::new(quad, a, b))
        .collect();
    integrate_tensor(&axes, sig, |s| {
        let (x, _, kv) = tangent_kvector(p, s)?;
        h(&x, &kv)
    })
}

/// `∫ dx . ∂ f` along each curve against `g(b) f(b) - g(a) f(a)`.
pub fn path_independence_check(
    g: &FieldFn,
    f: &FieldFn,
    curves: &[PatchMap],
    quad: &QuadratureSpec,
) -> Result<ClassicalReport> {
    let first = curves.first().ok_or(Error::EmptyComplex)?;
    let ends = |c: &PatchMap| -> Result<(Vec<f64>, Vec<f64>)> {
        if c.k() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "path independence needs curves; `{}` is a {}-patch",
                c.name(),
                c.k()
            )));
        }
        let (a, b) = c.domain().bounds()[0];
        Ok((c.eval(&[a])?, c.eval(&[b])?))
    };
    let (xa, xb) = ends(first)?;
    for c in &curves[1..] {
        let (ya, yb) = ends(c)?;
        let gap = xa
            .iter()
            .zip(&ya)
            .chain(xb.iter().zip(&yb))
            .map(|(u, v)| (u - v).abs())
            .fold(0.0, f64::max);
        let scale = xa.iter().chain(&xb).fold(1.0f64, |m, c| m.max(c.abs()));
        if gap > 1e-10 * scale {
            return Err(Error::EndpointMismatch { gap });
        }
    }
    let rhs = &(&g.try_eval(&xb)? * &f.try_eval(&xb)?) - &(&g.try_eval(&xa)? * &f.try_eval(&xa)?);
    let mut rows = Vec::new();
    let mut consistency: f64 = 0.0;
    for (i, c) in curves.iter().enumerate() {
        let lhs = ftc_lhs(g, f, c, quad)?;
        let bnd = boundary_integral(g, c, f, quad)?;
        consistency = consistency.max((&bnd.value - &rhs).max_norm() / rhs.max_norm().max(1.0));
        rows.push(ClassicalRow::new(
            "path".into(),
            &format!("{}#{i}", c.name()),
            lhs.value,
            rhs.clone(),
            lhs.node_count,
        ));
    }
    Ok(ClassicalReport { rows, consistency })
}

/// Both planar Green identities for a vector field `f = P e1 + Q e2`.
///
/// `green_circulation`: `∬ (∂Q/∂x - ∂P/∂y) dA = ∮ P dx + Q dy`, the scalar
/// part of `∫ dx_(2) ∂^f = ∮ dx.f` up to the sign fixed by the boundary
/// orientation. `green_flux`: `∬ ∂.f dA = ∮ P dy - Q dx`, the `e12` part of
/// `∫ dx_(2) ∂.f = ∮ dx^f`. Areas are signed by the patch orientation.
pub fn greens_theorem_check(
    f: &FieldFn,
    p: &PatchMap,
    quad: &QuadratureSpec,
) -> Result<ClassicalReport> {
    let sig = require(p, 2, 2, "Green's theorem")?;
    require_vector_field(f, p)?;
    let e12 = Blade(0b11);
    let packed = volume_quad(p, quad, |x, kv| {
        let d = flat_vector_derivative(f, x)?;
        let jac = kv.coeff(e12);
        let mut out = Multivector::scalar(sig, jac * d.coeff(e12));
        out.set_coeff(e12, jac * d.scalar_part());
        Ok(out)
    })?;
    let one = FieldFn::one(sig);
    let bnd = boundary_integral(&one, p, f, quad)?;
    let general = ftc_lhs(&one, f, p, quad)?;
    let circ_lhs = packed.scalar_part();
    let flux_lhs = packed.coeff(e12);
    // The boundary measures run clockwise for a positive patch.
    let circ_rhs = -bnd.value.scalar_part();
    let flux_rhs = bnd.value.coeff(e12);
    let consistency = gap(circ_lhs, -general.value.scalar_part()).max(gap(flux_lhs, general.value.coeff(e12)));
    let s = |v: f64| Multivector::scalar(sig, v);
    let nodes = general.node_count + bnd.node_count;
    Ok(ClassicalReport {
        rows: vec![
            ClassicalRow::new("green_circulation".into(), p.name(), s(circ_lhs), s(circ_rhs), nodes),
            ClassicalRow::new("green_flux".into(), p.name(), s(flux_lhs), s(flux_rhs), nodes),
        ],
        consistency,
    })
}

/// `a x b = -I (a ^ b)` in G_3.
pub fn cross(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    let i = Multivector::pseudoscalar(a.sig());
    Ok(-(&i * &a.outer_product(b)?))
}

/// `∫_S (∂ x f) . n |dx_(2)| = ∮ f . dx` with `n = I^{-1} x_(2) / |x_(2)|` and
/// the boundary traversed by the right-hand rule about `n`.
pub fn stokes_theorem_check(
    f: &FieldFn,
    p: &PatchMap,
    quad: &QuadratureSpec,
) -> Result<ClassicalReport> {
    let sig = require(p, 2, 3, "Stokes' theorem")?;
    require_vector_field(f, p)?;
    let i = Multivector::pseudoscalar(sig);
    let i_inv = Multivector::pseudoscalar_inverse(sig);
    let lhs = volume_quad(p, quad, |x, kv| {
        let d = flat_vector_derivative(f, x)?;
        let curl = -(&i * &d.grade(2));
        let normal_area = &i_inv * kv;
        Ok(Multivector::scalar(sig, curl.scalar_product(&normal_area)?))
    })?
    .scalar_part();
    let one = FieldFn::one(sig);
    let bnd = boundary_integral(&one, p, f, quad)?;
    let general = ftc_lhs(&one, f, p, quad)?;
    // Face measures circulate opposite to the right-hand rule about n.
    let rhs = -bnd.value.scalar_part();
    let consistency = gap(lhs, -general.value.scalar_part());
    Ok(ClassicalReport {
        rows: vec![ClassicalRow::new(
            "stokes".into(),
            p.name(),
            Multivector::scalar(sig, lhs),
            Multivector::scalar(sig, rhs),
            general.node_count + bnd.node_count,
        )],
        consistency,
    })
}

/// `∫ ∂.f |dx_(3)| = ∮ n.f |dx_(2)|`, both sides being the scalar part of the
/// fundamental theorem multiplied by `I^{-1}`. For a negatively oriented
/// solid both sides change sign.
pub fn gauss_divergence_check(
    f: &FieldFn,
    solid: &PatchMap,
    quad: &QuadratureSpec,
) -> Result<ClassicalReport> {
    let sig = require(solid, 3, 3, "the divergence theorem")?;
    require_vector_field(f, solid)?;
    let i_inv = Multivector::pseudoscalar_inverse(sig);
    let lhs = volume_quad(solid, quad, |x, kv| {
        let div = flat_vector_derivative(f, x)?.scalar_part();
        Ok(Multivector::scalar(sig, div * kv.determinant()?))
    })?
    .scalar_part();
    let one = FieldFn::one(sig);
    let bnd = boundary_integral(&one, solid, f, quad)?;
    let general = ftc_lhs(&one, f, solid, quad)?;
    let rhs = (&i_inv * &bnd.value).scalar_part();
    let consistency = gap(lhs, (&i_inv * &general.value).scalar_part());
    Ok(ClassicalReport {
        rows: vec![ClassicalRow::new(
            "gauss".into(),
            solid.name(),
            Multivector::scalar(sig, lhs),
            Multivector::scalar(sig, rhs),
            general.node_count + bnd.node_count,
        )],
        consistency,
    })
}
