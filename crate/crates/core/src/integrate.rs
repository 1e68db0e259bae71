//! Directed integrals over patches and their boundaries, directed content,
//! and the fundamental-theorem check.

use std::time::Instant;

use crate::algebra::{Multivector, Signature};
use crate::derivative::check_dims;
use crate::error::{Error, Result};
use crate::field::FieldFn;
use crate::patch::{face_frame, face_wedge, tangent_kvector, PatchComplex, PatchMap};
use crate::quadrature::{integrate_tensor, tree_sum, AxisRule, QuadratureSpec};
use crate::report::{num, Table};

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralResult {
    pub value: Multivector,
    pub node_count: usize,
    /// `|I(2m) - I(m)|` (max norm) when a refinement comparison was made.
    pub est_error: Option<f64>,
}

fn finite(value: Multivector, node_count: usize) -> Result<IntegralResult> {
    if !value.is_finite() {
        return Err(Error::NonFinite { point: vec![] });
    }
    Ok(IntegralResult {
        value,
        node_count,
        est_error: None,
    })
}

fn axes(bounds: &[(f64, f64)], quad: &QuadratureSpec) -> Vec<AxisRule> {
    bounds.iter().map(|&(a, b)| AxisRule::new(quad, a, b)).collect()
}

fn sig_of(p: &PatchMap) -> Result<Signature> {
    Signature::euclidean(p.ambient_dim())
}

/// `∫_R g(x(s)) x_(k)(s) f(x(s)) ds`, products taken in that order.
pub fn directed_integral(
    g: &FieldFn,
    p: &PatchMap,
    f: &FieldFn,
    quad: &QuadratureSpec,
) -> Result<IntegralResult> {
    check_dims(p, &[g, f])?;
    let sig = sig_of(p)?;
    let value = integrate_tensor(&axes(p.domain().bounds(), quad), sig, |s| {
        let (x, _, kv) = tangent_kvector(p, s)?;
        let gv = g.try_eval(&x)?;
        let fv = f.try_eval(&x)?;
        Ok(&(&gv * &kv) * &fv)
    })?;
    finite(value, quad.node_count(p.k()))
}

/// [`directed_integral`] at `m` and `2m` subdivisions; returns the finer value
/// with the difference as the error estimate.
pub fn directed_integral_with_estimate(
    g: &FieldFn,
    p: &PatchMap,
    f: &FieldFn,
    quad: &QuadratureSpec,
) -> Result<IntegralResult> {
    let coarse = directed_integral(g, p, f, quad)?;
    let mut fine = directed_integral(g, p, f, &quad.refined(2))?;
    fine.est_error = Some((&fine.value - &coarse.value).max_norm());
    fine.node_count += coarse.node_count;
    Ok(fine)
}

/// Integral over one face of the boundary chain, index as in
/// [`crate::patch::KRectangle::boundary_chain`].
pub fn face_integral(
    g: &FieldFn,
    p: &PatchMap,
    f: &FieldFn,
    face_index: usize,
    quad: &QuadratureSpec,
) -> Result<IntegralResult> {
    check_dims(p, &[g, f])?;
    let sig = sig_of(p)?;
    let faces = p.domain().boundary_chain();
    let face = faces.get(face_index).ok_or_else(|| {
        Error::InvalidDomain(format!("face {face_index} of a {}-patch", p.k()))
    })?;
    let value = integrate_tensor(&axes(&face.domain, quad), sig, |t| {
        let ff = face_frame(p, face, t)?;
        let gv = g.try_eval(&ff.point)?;
        let fv = f.try_eval(&ff.point)?;
        Ok(&(&gv * &ff.measure) * &fv)
    })?;
    finite(value, quad.node_count(p.k() - 1))
}

/// `Σ_faces ∫ g (±x_(k) x^i) f`; for curves, `g(b)f(b) - g(a)f(a)`.
pub fn boundary_integral(
    g: &FieldFn,
    p: &PatchMap,
    f: &FieldFn,
    quad: &QuadratureSpec,
) -> Result<IntegralResult> {
    let sig = sig_of(p)?;
    let parts = (0..2 * p.k())
        .map(|i| face_integral(g, p, f, i, quad))
        .collect::<Result<Vec<_>>>()?;
    let nodes = parts.iter().map(|r| r.node_count).sum();
    finite(tree_sum(sig, parts.into_iter().map(|r| r.value).collect()), nodes)
}

/// `D(M) = ∫_M dx_(k)`.
pub fn directed_content(p: &PatchMap, quad: &QuadratureSpec) -> Result<IntegralResult> {
    let one = FieldFn::one(sig_of(p)?);
    directed_integral(&one, p, &one, quad)
}

/// `D(β(M))`, which vanishes for any C² patch.
pub fn boundary_content(p: &PatchMap, quad: &QuadratureSpec) -> Result<IntegralResult> {
    let one = FieldFn::one(sig_of(p)?);
    boundary_integral(&one, p, &one, quad)
}

/// `∫_R Σ_i ∂/∂s^i (ġ x_(k) x^i ḟ) ds`, the left side of the fundamental
/// theorem with the frame frozen at each node.
///
/// `x_(k) x^i` is formed as the signed wedge of the other tangents, which is
/// the same (k-1)-vector at every regular node and needs no blade inverse.
pub fn ftc_lhs(
    g: &FieldFn,
    f: &FieldFn,
    p: &PatchMap,
    quad: &QuadratureSpec,
) -> Result<IntegralResult> {
    check_dims(p, &[g, f])?;
    let sig = sig_of(p)?;
    let value = integrate_tensor(&axes(p.domain().bounds(), quad), sig, |s| {
        let (x, tangents, _) = tangent_kvector(p, s)?;
        let gv = g.try_eval(&x)?;
        let fv = f.try_eval(&x)?;
        let mut acc = Multivector::zero(sig);
        for (i, t) in tangents.iter().enumerate() {
            let m = face_wedge(&tangents, i);
            let dir = t.vector_part();
            if !f.is_constant() {
                acc += &(&(&gv * &m) * &f.directional(&x, &dir));
            }
            if !g.is_constant() {
                acc += &(&(&g.directional(&x, &dir) * &m) * &fv);
            }
        }
        if !acc.is_finite() {
            return Err(Error::NonFinite { point: s.to_vec() });
        }
        Ok(acc)
    })?;
    finite(value, quad.node_count(p.k()))
}

/// One refinement level of a fundamental-theorem check.
#[derive(Clone, Debug, PartialEq)]
pub struct FtcRow {
    pub q: usize,
    pub m: usize,
    pub lhs: Multivector,
    pub rhs: Multivector,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub nodes: usize,
    pub wall_ms: f64,
}

impl FtcRow {
    fn new(q: usize, m: usize, lhs: IntegralResult, rhs: IntegralResult, wall_ms: f64) -> Self {
        let abs_residual = (&lhs.value - &rhs.value).max_norm();
        let rel_residual = abs_residual / rhs.value.max_norm().max(1.0);
        FtcRow {
            q,
            m,
            nodes: lhs.node_count + rhs.node_count,
            lhs: lhs.value,
            rhs: rhs.value,
            abs_residual,
            rel_residual,
            wall_ms,
        }
    }
}

/// Refinement levels and the roundoff floor for the convergence test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FtcOptions {
    /// Number of rows: `m, 2m, 4m, ...`.
    pub levels: usize,
    /// Relative residuals below this count as converged; halving the cell
    /// size cannot shrink roundoff.
    pub noise_floor: f64,
}

impl Default for FtcOptions {
    fn default() -> Self {
        FtcOptions {
            levels: 3,
            noise_floor: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FtcReport {
    pub scenario: String,
    pub k: usize,
    pub n: usize,
    pub rows: Vec<FtcRow>,
    pub noise_floor: f64,
}

pub const FTC_CSV_HEADER: [&str; 11] = [
    "scenario",
    "k",
    "n",
    "q",
    "m",
    "lhs_norm",
    "rhs_norm",
    "abs_residual",
    "rel_residual",
    "nodes",
    "wall_ms",
];

impl FtcReport {
    pub fn finest(&self) -> &FtcRow {
        self.rows.last().expect("at least one level")
    }

    /// Every refinement cuts the relative residual at least threefold, unless
    /// it is already below the noise floor.
    pub fn converged(&self) -> bool {
        self.rows.windows(2).all(|w| {
            w[1].rel_residual <= w[0].rel_residual / 3.0 || w[1].rel_residual <= self.noise_floor
        })
    }

    pub fn row_for(&self, m: usize) -> Option<&FtcRow> {
        self.rows.iter().find(|r| r.m == m)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.finest().rel_residual <= tol && self.converged()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&FTC_CSV_HEADER);
        for r in &self.rows {
            t.push(vec![
                self.scenario.clone(),
                self.k.to_string(),
                self.n.to_string(),
                r.q.to_string(),
                r.m.to_string(),
                num(r.lhs.max_norm()),
                num(r.rhs.max_norm()),
                num(r.abs_residual),
                num(r.rel_residual),
                r.nodes.to_string(),
                num(r.wall_ms),
            ]);
        }
        t
    }
}

fn run_levels(
    scenario: &str,
    k: usize,
    n: usize,
    quad: &QuadratureSpec,
    opts: &FtcOptions,
    mut level: impl FnMut(&QuadratureSpec) -> Result<(IntegralResult, IntegralResult)>,
) -> Result<FtcReport> {
    if opts.levels == 0 {
        return Err(Error::Quadrature("at least one refinement level".into()));
    }
    let mut rows = Vec::with_capacity(opts.levels);
    for j in 0..opts.levels {
        let qs = quad.refined(1 << j);
        let start = Instant::now();
        let (lhs, rhs) = level(&qs)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        rows.push(FtcRow::new(qs.points_per_axis, qs.subdivisions, lhs, rhs, ms));
    }
    Ok(FtcReport {
        scenario: scenario.to_string(),
        k,
        n,
        rows,
        noise_floor: opts.noise_floor,
    })
}

/// Fundamental theorem on one patch at the default three refinement levels.
pub fn ftc_check(
    g: &FieldFn,
    f: &FieldFn,
    p: &PatchMap,
    quad: &QuadratureSpec,
) -> Result<FtcReport> {
    ftc_check_with(g, f, p, quad, &FtcOptions::default())
}

pub fn ftc_check_with(
    g: &FieldFn,
    f: &FieldFn,
    p: &PatchMap,
    quad: &QuadratureSpec,
    opts: &FtcOptions,
) -> Result<FtcReport> {
    check_dims(p, &[g, f])?;
    run_levels(p.name(), p.k(), p.ambient_dim(), quad, opts, |qs| {
        Ok((ftc_lhs(g, f, p, qs)?, boundary_integral(g, p, f, qs)?))
    })
}

fn complex_sum(
    cx: &PatchComplex,
    mut each: impl FnMut(&PatchMap) -> Result<IntegralResult>,
) -> Result<IntegralResult> {
    let sig = Signature::euclidean(cx.ambient_dim())?;
    let mut parts = Vec::new();
    let mut nodes = 0;
    for op in cx.patches() {
        let r = each(&op.patch)?;
        nodes += r.node_count;
        parts.push(r.value.scale(op.orientation.sign()));
    }
    finite(tree_sum(sig, parts), nodes)
}

pub fn complex_directed_integral(
    g: &FieldFn,
    cx: &PatchComplex,
    f: &FieldFn,
    quad: &QuadratureSpec,
) -> Result<IntegralResult> {
    complex_sum(cx, |p| directed_integral(g, p, f, quad))
}

pub fn complex_boundary_integral(
    g: &FieldFn,
    cx: &PatchComplex,
    f: &FieldFn,
    quad: &QuadratureSpec,
) -> Result<IntegralResult> {
    complex_sum(cx, |p| boundary_integral(g, p, f, quad))
}

pub fn complex_ftc_check(
    g: &FieldFn,
    f: &FieldFn,
    cx: &PatchComplex,
    quad: &QuadratureSpec,
    opts: &FtcOptions,
) -> Result<FtcReport> {
    let name = cx.patches().iter().map(|p| p.patch.name()).collect::<Vec<_>>().join("+");
    run_levels(&name, cx.k(), cx.ambient_dim(), quad, opts, |qs| {
        Ok((
            complex_sum(cx, |p| ftc_lhs(g, f, p, qs))?,
            complex_boundary_integral(g, cx, f, qs)?,
        ))
    })
}

/// A face of one patch in a complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceRef {
    pub patch: usize,
    /// Index into the patch's boundary chain.
    pub face: usize,
}

/// Two faces that occupy the same points. With consistent orientations their
/// oriented integrals cancel.
#[derive(Clone, Debug, PartialEq)]
pub struct Seam {
    pub a: FaceRef,
    pub b: FaceRef,
    pub sum: Multivector,
}

/// The boundary integral of a complex split into seams and the outer boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct SeamReport {
    /// Sum of every face integral, seams included.
    pub total: Multivector,
    /// Sum over faces that matched no other face.
    pub outer: Multivector,
    pub seams: Vec<Seam>,
}

impl SeamReport {
    /// Largest seam sum; zero when all shared faces cancel.
    pub fn max_seam_mismatch(&self) -> f64 {
        self.seams.iter().map(|s| s.sum.max_norm()).fold(0.0, f64::max)
    }
}

/// Signature of a face for matching: images of its corners and centre.
fn face_fingerprint(p: &PatchMap, face_index: usize) -> Result<Vec<Vec<f64>>> {
    let face = &p.domain().boundary_chain()[face_index];
    let d = face.domain.len();
    let mut pts = Vec::with_capacity((1 << d) + 1);
    for corner in 0..(1usize << d) {
        let t: Vec<f64> = face
            .domain
            .iter()
            .enumerate()
            .map(|(j, &(a, b))| if corner >> j & 1 == 1 { b } else { a })
            .collect();
        pts.push(p.eval(&face.lift(&t))?);
    }
    let mid: Vec<f64> = face.domain.iter().map(|&(a, b)| 0.5 * (a + b)).collect();
    pts.push(p.eval(&face.lift(&mid))?);
    Ok(pts)
}

fn same_points(a: &[Vec<f64>], b: &[Vec<f64>]) -> bool {
    let scale = a
        .iter()
        .chain(b)
        .flatten()
        .fold(1.0f64, |m, c| m.max(c.abs()));
    let tol = 1e-9 * scale;
    let close = |x: &Vec<f64>, y: &Vec<f64>| x.iter().zip(y).all(|(u, v)| (u - v).abs() <= tol);
    let centre_a = a.last().expect("centre");
    let centre_b = b.last().expect("centre");
    close(centre_a, centre_b)
        && a.iter().all(|x| b.iter().any(|y| close(x, y)))
        && b.iter().all(|y| a.iter().any(|x| close(x, y)))
}

/// Faces of `p` that neither collapse to a point nor coincide with another
/// face of `p`: the part of the boundary chain that is geometric boundary.
pub fn outer_faces(p: &PatchMap) -> Result<Vec<usize>> {
    let prints = (0..2 * p.k())
        .map(|i| face_fingerprint(p, i))
        .collect::<Result<Vec<_>>>()?;
    let collapsed = |i: usize| p.k() > 1 && same_points(&prints[i][..1], &prints[i]);
    let mut keep = Vec::new();
    for i in 0..prints.len() {
        let paired = (0..prints.len()).any(|j| j != i && same_points(&prints[i], &prints[j]));
        if !paired && !collapsed(i) {
            keep.push(i);
        }
    }
    Ok(keep)
}

/// Splits the boundary integral of a complex into shared seams and the outer
/// boundary. Faces are matched by the images of their corners and centre.
pub fn seam_report(
    g: &FieldFn,
    cx: &PatchComplex,
    f: &FieldFn,
    quad: &QuadratureSpec,
) -> Result<SeamReport> {
    let sig = Signature::euclidean(cx.ambient_dim())?;
    let mut faces = Vec::new();
    for (pi, op) in cx.patches().iter().enumerate() {
        for fi in 0..2 * op.patch.k() {
            let value = face_integral(g, &op.patch, f, fi, quad)?
                .value
                .scale(op.orientation.sign());
            faces.push((FaceRef { patch: pi, face: fi }, face_fingerprint(&op.patch, fi)?, value));
        }
    }
    let mut used = vec![false; faces.len()];
    let mut seams = Vec::new();
    for i in 0..faces.len() {
        if used[i] {
            continue;
        }
        // A face whose points all coincide has collapsed; it pairs with nothing.
        let collapsed = {
            let pts = &faces[i].1;
            same_points(&pts[..1], pts)
        };
        if collapsed && cx.k() > 1 {
            continue;
        }
        if let Some(j) = (i + 1..faces.len()).find(|&j| !used[j] && same_points(&faces[i].1, &faces[j].1)) {
            used[i] = true;
            used[j] = true;
            seams.push(Seam {
                a: faces[i].0,
                b: faces[j].0,
                sum: &faces[i].2 + &faces[j].2,
            });
        }
    }
    let total = tree_sum(sig, faces.iter().map(|f| f.2.clone()).collect());
    let outer = tree_sum(
        sig,
        faces
            .iter()
            .zip(&used)
            .filter(|(_, u)| !**u)
            .map(|(f, _)| f.2.clone())
            .collect(),
    );
    Ok(SeamReport {
        total,
        outer,
        seams,
    })
}
