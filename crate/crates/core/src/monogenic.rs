//! Monogenic fields, the Cauchy kernel and reconstruction of interior values
//! from boundary values.
//!
//! With `K(x) = (x' - x)/|x' - x|^n` and `n` the unit outward normal, a field
//! of class C¹ on a region `M` satisfies
//!
//! ```text
//! f(x') = (1/Ω) ∫_M K ∂f |dV| - (1/Ω) ∮_∂M K n f |dA|,
//! ```
//!
//! so for monogenic `f` only the boundary term remains. The leading minus
//! sign goes with the outward normal: a constant field is reproduced as
//! `+c`.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::algebra::{Multivector, Signature};
use crate::derivative::flat_vector_derivative;
use crate::error::{Error, Result};
use crate::field::FieldFn;
use crate::integrate::outer_faces;
use crate::patch::{face_frame, tangent_kvector, PatchComplex, PatchMap};
use crate::quadrature::{integrate_tensor, tree_sum, AxisRule, QuadratureSpec};
use crate::report::{num, Table};

/// `Ω_n = 2 π^{n/2} / Γ(n/2)`, the area of the unit sphere in `R^n`.
pub fn sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

/// `x' -> (x' - x)/|x' - x|^n` for a fixed source `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct CauchyKernel {
    pub source: Vec<f64>,
}

impl CauchyKernel {
    pub fn new(source: Vec<f64>) -> Result<Self> {
        Signature::euclidean(source.len())?;
        Ok(CauchyKernel { source })
    }

    pub fn dim(&self) -> usize {
        self.source.len()
    }

    pub fn eval(&self, x: &[f64]) -> Result<Multivector> {
        kernel(&self.source, x, self.sig())
    }

    fn sig(&self) -> Signature {
        Signature::euclidean(self.dim()).expect("checked on construction")
    }

    /// The kernel as a field, with its analytic derivative and singularity.
    pub fn field(&self) -> FieldFn {
        let sig = self.sig();
        let n = self.dim() as f64;
        let c = self.source.clone();
        let c2 = self.source.clone();
        FieldFn::new(sig, "cauchy_kernel", move |x| {
            let d: Vec<f64> = x.iter().zip(&c).map(|(a, b)| a - b).collect();
            let r = d.iter().map(|v| v * v).sum::<f64>().sqrt();
            Multivector::vector(sig, &d).expect("dimension").scale(r.powf(-n))
        })
        .with_directional(move |x, v| {
            let d: Vec<f64> = x.iter().zip(&c2).map(|(a, b)| a - b).collect();
            let r2: f64 = d.iter().map(|v| v * v).sum();
            let dv: f64 = d.iter().zip(v).map(|(a, b)| a * b).sum();
            let r = r2.sqrt();
            let mut out = Multivector::vector(sig, v).expect("dimension").scale(r.powf(-n));
            out.add_scaled(
                &Multivector::vector(sig, &d).expect("dimension"),
                -n * dv * r.powf(-n - 2.0),
            );
            out
        })
        .with_singularity(self.source.clone())
    }
}

/// `K(x) = (x' - x)/|x' - x|^n`, the kernel seen from the evaluation point.
fn kernel(xp: &[f64], x: &[f64], sig: Signature) -> Result<Multivector> {
    let d: Vec<f64> = xp.iter().zip(x).map(|(a, b)| a - b).collect();
    let r = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 {
        return Err(Error::NonFinite { point: x.to_vec() });
    }
    Ok(Multivector::vector(sig, &d)?.scale(r.powi(-(sig.dim() as i32))))
}

/// An axis-aligned box sampled on a regular grid, cell centres included.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRegion {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub per_axis: usize,
    /// Points closer than this to the field's declared singularity are skipped.
    pub exclusion: f64,
}

impl SampleRegion {
    pub fn cube(n: usize, lo: f64, hi: f64, per_axis: usize) -> Self {
        SampleRegion {
            lower: vec![lo; n],
            upper: vec![hi; n],
            per_axis,
            exclusion: 0.0,
        }
    }

    pub fn with_exclusion(mut self, exclusion: f64) -> Self {
        self.exclusion = exclusion;
        self
    }

    /// Grid points `lo + (i + 1/2)(hi - lo)/N` in lexicographic order.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let n = self.lower.len();
        let total = self.per_axis.pow(n as u32);
        (0..total)
            .map(|mut idx| {
                (0..n)
                    .map(|j| {
                        let i = idx % self.per_axis;
                        idx /= self.per_axis;
                        let (a, b) = (self.lower[j], self.upper[j]);
                        a + (i as f64 + 0.5) * (b - a) / self.per_axis as f64
                    })
                    .collect()
            })
            .collect()
    }
}

/// Tolerance for the certificate: finite differences or analytic derivatives.
pub const CERT_TOL_FD: f64 = 1e-6;
pub const CERT_TOL_ANALYTIC: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct MonogenicCertificate {
    pub max_derivative_norm: f64,
    /// Where the maximum was attained.
    pub worst_point: Vec<f64>,
    pub points_checked: usize,
    pub points_excluded: usize,
    pub tolerance: f64,
    pub certified: bool,
}

/// `max |∂f|` over the grid of `region`, compared to the tolerance for the
/// derivative path the field offers.
pub fn monogenicity_certificate(f: &FieldFn, region: &SampleRegion) -> Result<MonogenicCertificate> {
    let n = f.dim();
    if region.lower.len() != n || region.upper.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "sample region in R^{} for a field on R^{n}",
            region.lower.len()
        )));
    }
    if region.per_axis == 0 {
        return Err(Error::InvalidDomain("sample grid needs at least one point per axis".into()));
    }
    let tolerance = if f.has_analytic_derivative() {
        CERT_TOL_ANALYTIC
    } else {
        CERT_TOL_FD
    };
    let mut max = 0.0f64;
    let mut worst = Vec::new();
    let mut checked = 0;
    let mut excluded = 0;
    for x in region.points() {
        if let Some(c) = f.singularity() {
            let d = x.iter().zip(c).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            if d <= region.exclusion || d == 0.0 {
                excluded += 1;
                continue;
            }
        }
        let norm = flat_vector_derivative(f, &x)?.norm();
        checked += 1;
        if norm > max || worst.is_empty() {
            max = max.max(norm);
            worst = x;
        }
    }
    Ok(MonogenicCertificate {
        max_derivative_norm: max,
        worst_point: worst,
        points_checked: checked,
        points_excluded: excluded,
        tolerance,
        certified: checked > 0 && max <= tolerance,
    })
}

/// Interior margin, as a multiple of the boundary node spacing.
pub const DELTA_NODE_SPACINGS: f64 = 5.0;
/// Exclusion radius of the volume term, in volume cells.
pub const EXCLUSION_CELLS: f64 = 2.0;

#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub value: Multivector,
    pub nodes: usize,
    /// Required distance from the boundary.
    pub delta: f64,
    /// Smallest distance from `x'` to a boundary node.
    pub min_distance: f64,
}

/// Largest physical spacing between quadrature nodes on `p`, estimated from
/// the tangent lengths at the domain centre.
fn node_spacing(p: &PatchMap, quad: &QuadratureSpec) -> Result<f64> {
    let c = p.domain().center();
    let t = p.tangents(&c)?;
    let per_axis = (quad.points_per_axis * quad.subdivisions) as f64;
    Ok(p.domain()
        .bounds()
        .iter()
        .zip(&t)
        .map(|(&(a, b), v)| v.iter().map(|c| c * c).sum::<f64>().sqrt() * (b - a) / per_axis)
        .fold(0.0, f64::max))
}

fn axes(bounds: &[(f64, f64)], quad: &QuadratureSpec) -> Vec<AxisRule> {
    bounds.iter().map(|&(a, b)| AxisRule::new(quad, a, b)).collect()
}

/// Smallest distance from `xp` to the images of the quadrature nodes of
/// `bounds`, lifted into the parameter domain of `p`.
fn min_node_distance(
    p: &PatchMap,
    bounds: &[(f64, f64)],
    lift: impl Fn(&[f64]) -> Vec<f64>,
    xp: &[f64],
    quad: &QuadratureSpec,
) -> Result<f64> {
    let mut points = Vec::new();
    collect_nodes(&axes(bounds, quad), &mut Vec::new(), &mut points);
    let mut best = f64::INFINITY;
    for t in points {
        let x = p.eval(&lift(&t))?;
        let d = x.iter().zip(xp).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        best = best.min(d);
    }
    Ok(best)
}

fn collect_nodes(axes: &[AxisRule], prefix: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
    match axes.split_first() {
        None => out.push(prefix.clone()),
        Some((head, rest)) => {
            for &x in &head.nodes {
                prefix.push(x);
                collect_nodes(rest, prefix, out);
                prefix.pop();
            }
        }
    }
}

fn check_point(xp: &[f64], n: usize) -> Result<()> {
    if xp.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "evaluation point in R^{} for a problem in R^{n}",
            xp.len()
        )));
    }
    Ok(())
}

/// `f(x') ≈ -(1/Ω) ∮ K n f |dA|` over a closed boundary complex whose
/// `I^{-1} x_(n-1)` points outward.
///
/// Whether the complex actually encloses `x'` is not checked.
pub fn cauchy_reconstruct(
    f: &FieldFn,
    boundary: &PatchComplex,
    xp: &[f64],
    quad: &QuadratureSpec,
) -> Result<Reconstruction> {
    let n = boundary.ambient_dim();
    if boundary.k() + 1 != n || f.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "reconstruction needs (n-1)-patches in R^n and a field on R^n; got {}-patches in R^{n}, field on R^{}",
            boundary.k(),
            f.dim()
        )));
    }
    check_point(xp, n)?;
    let sig = Signature::euclidean(n)?;
    let i_inv = Multivector::pseudoscalar_inverse(sig);
    let mut spacing = 0.0f64;
    let mut min_distance = f64::INFINITY;
    for op in boundary.patches() {
        let p = &op.patch;
        spacing = spacing.max(node_spacing(p, quad)?);
        min_distance = min_distance.min(min_node_distance(p, p.domain().bounds(), |t| t.to_vec(), xp, quad)?);
    }
    let delta = DELTA_NODE_SPACINGS * spacing;
    if min_distance < delta {
        return Err(Error::TooCloseToBoundary {
            distance: min_distance,
            margin: delta,
        });
    }
    let mut parts = Vec::new();
    let mut nodes = 0;
    for op in boundary.patches() {
        let p = &op.patch;
        let v = integrate_tensor(&axes(p.domain().bounds(), quad), sig, |s| {
            let (x, _, kv) = tangent_kvector(p, s)?;
            let normal_area = &i_inv * &kv;
            Ok(&(&kernel(xp, &x, sig)? * &normal_area) * &f.try_eval(&x)?)
        })?;
        nodes += quad.node_count(p.k());
        parts.push(v.scale(op.orientation.sign()));
    }
    let value = tree_sum(sig, parts).scale(-1.0 / sphere_area(n));
    if !value.is_finite() {
        return Err(Error::NonFinite { point: xp.to_vec() });
    }
    Ok(Reconstruction {
        value,
        nodes,
        delta,
        min_distance,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FullCauchy {
    pub value: Multivector,
    /// `(1/Ω) ∫ K ∂f |dV|` outside the exclusion ball.
    pub volume_term: Multivector,
    /// `-(1/Ω) ∮ K n f |dA|`.
    pub boundary_term: Multivector,
    pub excluded_radius: f64,
    /// `r0 |∂f(x')|`, the size of the dropped part for smooth `∂f`.
    pub exclusion_bound: f64,
    pub nodes: usize,
    pub delta: f64,
    pub min_distance: f64,
}

/// Both terms of the Cauchy formula for a field that need not be monogenic.
///
/// Volume nodes within `r0 = 2` cell widths of `x'` are dropped. Faces of the
/// region that collapse or that coincide with another face (the seam of a
/// polar parametrization, say) are interior and carry no boundary term.
pub fn full_cauchy_formula(
    f: &FieldFn,
    region: &PatchMap,
    xp: &[f64],
    quad: &QuadratureSpec,
) -> Result<FullCauchy> {
    let n = region.ambient_dim();
    if region.k() != n || f.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "the full formula needs an n-patch in R^n and a field on R^n; got a {}-patch in R^{n}, field on R^{}",
            region.k(),
            f.dim()
        )));
    }
    check_point(xp, n)?;
    let sig = Signature::euclidean(n)?;
    let i_inv = Multivector::pseudoscalar_inverse(sig);
    let omega = sphere_area(n);
    // Orientation of the parametrization; both terms flip with it.
    let (_, _, kv_c) = tangent_kvector(region, &region.domain().center())?;
    let orient = kv_c.determinant()?.signum();

    // Smallest physical cell edge at the domain centre.
    let c = region.domain().center();
    let t = region.tangents(&c)?;
    let cell = region
        .domain()
        .bounds()
        .iter()
        .zip(&t)
        .map(|(&(a, b), v)| v.iter().map(|c| c * c).sum::<f64>().sqrt() * (b - a) / quad.subdivisions as f64)
        .fold(f64::INFINITY, f64::min);
    let r0 = EXCLUSION_CELLS * cell;

    let faces = region.domain().boundary_chain();
    let outer = outer_faces(region)?;
    let mut spacing = 0.0f64;
    let mut min_distance = f64::INFINITY;
    let per_axis = (quad.points_per_axis * quad.subdivisions) as f64;
    for &fi in &outer {
        let face = &faces[fi];
        min_distance = min_distance.min(min_node_distance(region, &face.domain, |t| face.lift(t), xp, quad)?);
        let mid: Vec<f64> = face.domain.iter().map(|&(a, b)| 0.5 * (a + b)).collect();
        let tan = region.tangents(&face.lift(&mid))?;
        for (j, v) in tan.iter().enumerate() {
            if j == face.axis {
                continue;
            }
            let (a, b) = region.domain().bounds()[j];
            spacing = spacing.max(v.iter().map(|c| c * c).sum::<f64>().sqrt() * (b - a) / per_axis);
        }
    }
    let delta = DELTA_NODE_SPACINGS * spacing;
    if min_distance < delta {
        return Err(Error::TooCloseToBoundary {
            distance: min_distance,
            margin: delta,
        });
    }

    let volume = integrate_tensor(&axes(region.domain().bounds(), quad), sig, |s| {
        let (x, _, kv) = tangent_kvector(region, s)?;
        let r = x.iter().zip(xp).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        if r < r0 {
            return Ok(Multivector::zero(sig));
        }
        let d = flat_vector_derivative(f, &x)?;
        Ok((&kernel(xp, &x, sig)? * &d).scale(kv.determinant()?))
    })?
    .scale(orient / omega);

    let mut parts = Vec::new();
    let mut nodes = quad.node_count(n);
    for &fi in &outer {
        let face = &faces[fi];
        parts.push(integrate_tensor(&axes(&face.domain, quad), sig, |t| {
            let ff = face_frame(region, face, t)?;
            if ff.measure.is_zero() {
                return Ok(Multivector::zero(sig));
            }
            let normal_area = &i_inv * &ff.measure;
            Ok(&(&kernel(xp, &ff.point, sig)? * &normal_area) * &f.try_eval(&ff.point)?)
        })?);
        nodes += quad.node_count(n - 1);
    }
    let boundary_term = tree_sum(sig, parts).scale(-orient / omega);
    let value = &volume + &boundary_term;
    if !value.is_finite() {
        return Err(Error::NonFinite { point: xp.to_vec() });
    }
    let exclusion_bound = r0 * flat_vector_derivative(f, xp)?.norm();
    Ok(FullCauchy {
        value,
        volume_term: volume,
        boundary_term,
        excluded_radius: r0,
        exclusion_bound,
        nodes,
        delta,
        min_distance,
    })
}

pub const RECONSTRUCTION_CSV_HEADER: [&str; 8] = [
    "n",
    "scenario",
    "x_prime",
    "direct_value",
    "reconstructed_value",
    "abs_err",
    "nodes",
    "excluded_radius",
];

/// One row of the reconstruction report.
#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionRow {
    pub n: usize,
    pub scenario: String,
    pub x_prime: Vec<f64>,
    pub direct: Multivector,
    pub reconstructed: Multivector,
    pub nodes: usize,
    pub excluded_radius: f64,
}

impl ReconstructionRow {
    pub fn abs_err(&self) -> f64 {
        (&self.direct - &self.reconstructed).max_norm()
    }
}

pub fn reconstruction_table(rows: &[ReconstructionRow]) -> Table {
    let mut t = Table::new(&RECONSTRUCTION_CSV_HEADER);
    for r in rows {
        t.push(vec![
            r.n.to_string(),
            r.scenario.clone(),
            r.x_prime.iter().map(|c| num(*c)).collect::<Vec<_>>().join(" "),
            r.direct.to_string(),
            r.reconstructed.to_string(),
            num(r.abs_err()),
            r.nodes.to_string(),
            num(r.excluded_radius),
        ]);
    }
    t
}
