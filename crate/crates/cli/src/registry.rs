//! Named patches and fields, built from scenario parameters.

use geocalc::algebra::parse_multivector;
use geocalc::field::{parse_poly_field, FieldFn};
use geocalc::monogenic::CauchyKernel;
use geocalc::patch::{builtin, glue_patches, KRectangle, Orientation, PatchComplex, PatchMap};
use geocalc::{Error, Signature};

use crate::scenario::{Check, ConfigError, FieldSpec, OrientationName, PatchSpec, Scenario};

/// A registry entry as listed by `--list-patches` and `--list-fields`.
#[derive(Clone, Copy, Debug)]
pub struct Entry {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub about: &'static str,
}

pub const PATCHES: &[Entry] = &[
    Entry {
        name: "identity",
        params: &["k", "bounds"],
        about: "the k-rectangle itself in R^k (default unit cube)",
    },
    Entry {
        name: "figure2",
        params: &[],
        about: "(s1, s2, (1 - sin s1^2)/2 - 3 s2) over the unit square, in R^3",
    },
    Entry {
        name: "disk_polar",
        params: &["radius", "center"],
        about: "polar disk (r, theta) in R^2; the r = 0 face collapses",
    },
    Entry {
        name: "sphere_octant",
        params: &["radius"],
        about: "first octant of the sphere in spherical angles, in R^3",
    },
    Entry {
        name: "linear",
        params: &["matrix", "bounds"],
        about: "x = A s for an n x k matrix A given by rows",
    },
    Entry {
        name: "graph2d",
        params: &["height", "bounds"],
        about: "graph (s1, s2, h(s1, s2)) of a polynomial height in R^3",
    },
    Entry {
        name: "segment",
        params: &["a", "b"],
        about: "straight curve from a to b",
    },
    Entry {
        name: "arc",
        params: &["center", "radius", "t0", "t1"],
        about: "counterclockwise circular arc in R^2",
    },
    Entry {
        name: "circle",
        params: &["center", "radius"],
        about: "closed circle traversed clockwise (outward I^-1 dx)",
    },
    Entry {
        name: "sphere",
        params: &["center", "radius"],
        about: "closed sphere as six projected cube faces (outward I^-1 dx)",
    },
    Entry {
        name: "glued",
        params: &["pieces"],
        about: "complex of the listed patches, each with an orientation",
    },
];

pub const FIELDS: &[Entry] = &[
    Entry {
        name: "one",
        params: &[],
        about: "the scalar 1",
    },
    Entry {
        name: "constant",
        params: &["value"],
        about: "a constant multivector, e.g. \"1.5 + 2*e12\"",
    },
    Entry {
        name: "identity_vector",
        params: &[],
        about: "x",
    },
    Entry {
        name: "norm_squared",
        params: &[],
        about: "|x|^2",
    },
    Entry {
        name: "norm_power",
        params: &["power"],
        about: "|x|^power",
    },
    Entry {
        name: "kernel_power",
        params: &["power"],
        about: "x / |x|^power",
    },
    Entry {
        name: "log_norm",
        params: &[],
        about: "log |x|",
    },
    Entry {
        name: "linear_vector",
        params: &["matrix"],
        about: "A x for an n x n matrix given by rows",
    },
    Entry {
        name: "rotation",
        params: &[],
        about: "-x2 e1 + x1 e2",
    },
    Entry {
        name: "complex_power",
        params: &["power"],
        about: "z^p as u + v e12 on R^2 (monogenic)",
    },
    Entry {
        name: "cauchy_kernel",
        params: &["source"],
        about: "(x - source) / |x - source|^n",
    },
    Entry {
        name: "poly",
        params: &["expr"],
        about: "polynomial with blade coefficients, e.g. \"x1^2*e1 - 3*x2*e12\"",
    },
];

/// One line per entry: name, parameters, description.
pub fn listing(entries: &[Entry]) -> String {
    let mut out = String::new();
    for e in entries {
        let params = if e.params.is_empty() {
            "-".to_string()
        } else {
            e.params.join(", ")
        };
        out.push_str(&format!("{:<16} {:<28} {}\n", e.name, params, e.about));
    }
    out
}

fn core(e: Error) -> ConfigError {
    match e {
        Error::DimensionMismatch(m) => ConfigError::DimensionMismatch(m),
        Error::PatchDimension { k, n } => {
            ConfigError::DimensionMismatch(format!("a {k}-patch cannot live in R^{n}"))
        }
        other => ConfigError::Invalid(other.to_string()),
    }
}

fn entry(entries: &'static [Entry], what: &'static str, name: &str) -> Result<&'static Entry, ConfigError> {
    entries.iter().find(|e| e.name == name).ok_or(ConfigError::UnknownName {
        what,
        name: name.to_string(),
    })
}

fn check_params(
    what: &str,
    entry: &Entry,
    present: &[(&'static str, bool)],
) -> Result<(), ConfigError> {
    for (p, set) in present {
        if *set && !entry.params.contains(p) {
            return Err(ConfigError::Invalid(format!(
                "parameter `{p}` does not apply to {what} `{}`",
                entry.name
            )));
        }
    }
    Ok(())
}

fn need<T: Clone>(v: &Option<T>, param: &str, kind: &str) -> Result<T, ConfigError> {
    v.clone()
        .ok_or_else(|| ConfigError::Invalid(format!("`{kind}` needs parameter `{param}`")))
}

fn rectangle(bounds: &Option<Vec<[f64; 2]>>, k: usize) -> Result<KRectangle, ConfigError> {
    match bounds {
        None => KRectangle::unit(k).map_err(core),
        Some(b) => {
            if b.len() != k {
                return Err(ConfigError::DimensionMismatch(format!(
                    "{} bounds for a {k}-patch",
                    b.len()
                )));
            }
            KRectangle::new(b.iter().map(|[a, c]| (*a, *c)).collect()).map_err(core)
        }
    }
}

fn orientation(o: Option<OrientationName>) -> Orientation {
    match o.unwrap_or_default() {
        OrientationName::Positive => Orientation::Positive,
        OrientationName::Negative => Orientation::Negative,
    }
}

fn build_map(spec: &PatchSpec) -> Result<PatchMap, ConfigError> {
    let kind = spec.kind.as_str();
    let center = |default: &[f64]| spec.center.clone().unwrap_or_else(|| default.to_vec());
    let radius = spec.radius.unwrap_or(1.0);
    let p = match kind {
        "identity" => {
            let k = need(&spec.k, "k", kind)?;
            builtin::identity_on(rectangle(&spec.bounds, k)?)
        }
        "figure2" => Ok(builtin::figure2()),
        "disk_polar" => builtin::disk_polar_at(&center(&[0.0, 0.0]), radius),
        "sphere_octant" => builtin::sphere_octant(radius),
        "linear" => {
            let m = need(&spec.matrix, "matrix", kind)?;
            let k = m.first().map_or(0, Vec::len);
            builtin::linear(&m, rectangle(&spec.bounds, k)?)
        }
        "graph2d" => {
            let h = need(&spec.height, "height", kind)?;
            let height = parse_poly_field(&h, 2).map_err(core)?;
            builtin::graph2d(height, rectangle(&spec.bounds, 2)?)
        }
        "segment" => builtin::segment(&need(&spec.a, "a", kind)?, &need(&spec.b, "b", kind)?),
        "arc" => builtin::arc(
            &center(&[0.0, 0.0]),
            radius,
            need(&spec.t0, "t0", kind)?,
            need(&spec.t1, "t1", kind)?,
        ),
        "circle" => builtin::circle(&center(&[0.0, 0.0]), radius),
        _ => unreachable!("registry entries are matched above"),
    };
    p.map_err(core)
}

/// Builds the patch complex a spec describes.
fn check_patch_params(spec: &PatchSpec) -> Result<(), ConfigError> {
    let e = entry(PATCHES, "patch", &spec.kind)?;
    check_params(
        "patch",
        e,
        &[
            ("k", spec.k.is_some()),
            ("radius", spec.radius.is_some()),
            ("center", spec.center.is_some()),
            ("matrix", spec.matrix.is_some()),
            ("bounds", spec.bounds.is_some()),
            ("height", spec.height.is_some()),
            ("a", spec.a.is_some()),
            ("b", spec.b.is_some()),
            ("t0", spec.t0.is_some()),
            ("t1", spec.t1.is_some()),
            ("pieces", !spec.pieces.is_empty()),
        ],
    )?;
    if spec.kind == "glued" && spec.orientation.is_some() {
        return Err(ConfigError::Invalid(
            "a glued complex takes orientations per piece".into(),
        ));
    }
    Ok(())
}

/// Builds the patch complex a spec describes.
pub fn build_patch(spec: &PatchSpec) -> Result<PatchComplex, ConfigError> {
    check_patch_params(spec)?;
    match spec.kind.as_str() {
        "glued" => {
            if spec.pieces.is_empty() {
                return Err(ConfigError::Invalid("`glued` needs at least one piece".into()));
            }
            let mut parts = Vec::new();
            for piece in &spec.pieces {
                if piece.kind == "glued" || piece.kind == "sphere" {
                    return Err(ConfigError::Invalid(format!(
                        "`{}` cannot be a piece of a glued complex",
                        piece.kind
                    )));
                }
                check_patch_params(piece)?;
                parts.push((build_map(piece)?, orientation(piece.orientation)));
            }
            glue_patches(parts).map_err(core)
        }
        "sphere" => {
            let c = spec.center.clone().unwrap_or_else(|| vec![0.0; 3]);
            let cx = builtin::sphere_cube_faces(&c, spec.radius.unwrap_or(1.0)).map_err(core)?;
            if orientation(spec.orientation) == Orientation::Negative {
                let flipped = cx
                    .patches()
                    .iter()
                    .map(|op| (op.patch.clone(), op.orientation.flipped()))
                    .collect();
                return glue_patches(flipped).map_err(core);
            }
            Ok(cx)
        }
        _ => {
            let p = build_map(spec)?;
            Ok(PatchComplex::single(match orientation(spec.orientation) {
                Orientation::Positive => p,
                Orientation::Negative => p.reversed_axis(0),
            }))
        }
    }
}

/// The described patch as one positively oriented map, for checks that need one.
pub fn build_single(spec: &PatchSpec) -> Result<PatchMap, ConfigError> {
    let cx = build_patch(spec)?;
    match cx.patches() {
        [only] if only.orientation == Orientation::Positive => Ok(only.patch.clone()),
        [only] => Ok(only.patch.reversed_axis(0)),
        _ => Err(ConfigError::Invalid(format!(
            "this check needs a single patch, not `{}`",
            spec.kind
        ))),
    }
}

/// `(k, n)` of a patch spec.
pub fn patch_dims(spec: &PatchSpec) -> Result<(usize, usize), ConfigError> {
    let cx = build_patch(spec)?;
    Ok((cx.k(), cx.ambient_dim()))
}

/// Builds a field on `R^n`; an explicit `dim` must agree with `n`.
pub fn build_field(spec: &FieldSpec, n: usize) -> Result<FieldFn, ConfigError> {
    let e = entry(FIELDS, "field", &spec.kind)?;
    check_params(
        "field",
        e,
        &[
            ("expr", spec.expr.is_some()),
            ("value", spec.value.is_some()),
            ("power", spec.power.is_some()),
            ("matrix", spec.matrix.is_some()),
            ("source", spec.source.is_some()),
        ],
    )?;
    if let Some(d) = spec.dim {
        if d != n {
            return Err(ConfigError::DimensionMismatch(format!(
                "field `{}` declared on R^{d} but the geometry is in R^{n}",
                spec.kind
            )));
        }
    }
    let sig = Signature::euclidean(n).map_err(core)?;
    let kind = spec.kind.as_str();
    let f = match kind {
        "one" => FieldFn::one(sig),
        "constant" => FieldFn::constant(parse_multivector(sig, &need(&spec.value, "value", kind)?).map_err(core)?),
        "identity_vector" => FieldFn::identity_vector(sig),
        "norm_squared" => FieldFn::norm_squared(sig),
        "norm_power" => FieldFn::norm_power(sig, need(&spec.power, "power", kind)?),
        "kernel_power" => FieldFn::kernel_power(sig, need(&spec.power, "power", kind)?),
        "log_norm" => FieldFn::log_norm(sig),
        "linear_vector" => FieldFn::linear_vector(sig, need(&spec.matrix, "matrix", kind)?).map_err(core)?,
        "rotation" => FieldFn::rotation(sig).map_err(core)?,
        "complex_power" => {
            if n != 2 {
                return Err(ConfigError::DimensionMismatch(format!(
                    "complex_power lives on R^2, the geometry is in R^{n}"
                )));
            }
            let p = need(&spec.power, "power", kind)?;
            if p < 0.0 || p.fract() != 0.0 || p > u32::MAX as f64 {
                return Err(ConfigError::Invalid(format!(
                    "complex_power needs a nonnegative integer power, got {p}"
                )));
            }
            FieldFn::complex_power(p as u32)
        }
        "cauchy_kernel" => {
            let src = need(&spec.source, "source", kind)?;
            if src.len() != n {
                return Err(ConfigError::DimensionMismatch(format!(
                    "kernel source in R^{} for geometry in R^{n}",
                    src.len()
                )));
            }
            CauchyKernel::new(src).map_err(core)?.field()
        }
        "poly" => parse_poly_field(&need(&spec.expr, "expr", kind)?, n).map_err(core)?,
        _ => unreachable!("registry entries are matched above"),
    };
    Ok(f)
}

fn require_patch(s: &Scenario) -> Result<&PatchSpec, ConfigError> {
    s.patch
        .as_ref()
        .ok_or_else(|| ConfigError::Invalid(format!("check `{}` needs a [patch]", s.check.as_str())))
}

fn require_f(s: &Scenario) -> Result<&FieldSpec, ConfigError> {
    s.f.as_ref()
        .ok_or_else(|| ConfigError::Invalid(format!("check `{}` needs a field [f]", s.check.as_str())))
}

fn require_shape(s: &Scenario, k: usize, n: usize, want_k: usize, want_n: usize) -> Result<(), ConfigError> {
    if (k, n) != (want_k, want_n) {
        return Err(ConfigError::DimensionMismatch(format!(
            "check `{}` needs a {want_k}-patch in R^{want_n}, got a {k}-patch in R^{n}",
            s.check.as_str()
        )));
    }
    Ok(())
}

fn check_points(points: &[Vec<f64>], n: usize) -> Result<(), ConfigError> {
    if points.is_empty() {
        return Err(ConfigError::Invalid("the Cauchy checks need evaluation `points`".into()));
    }
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(ConfigError::DimensionMismatch(format!(
            "evaluation point {p:?} is not in R^{n}"
        )));
    }
    Ok(())
}

/// Resolves every reference in a scenario and checks dimensions.
pub fn validate(s: &Scenario) -> Result<(), ConfigError> {
    let q = &s.quadrature;
    if q.q == 0 || q.m == 0 || q.levels == 0 || q.q > 128 {
        return Err(ConfigError::Invalid(
            "quadrature needs 1 <= q <= 128, m >= 1 and levels >= 1".into(),
        ));
    }
    if let Some(t) = s.tolerance {
        if !(t > 0.0) {
            return Err(ConfigError::Invalid(format!("tolerance must be positive, got {t}")));
        }
    }
    let fields_on = |n: usize| -> Result<(), ConfigError> {
        if let Some(f) = &s.f {
            build_field(f, n)?;
        }
        if let Some(g) = &s.g {
            build_field(g, n)?;
        }
        Ok(())
    };
    match s.check {
        Check::Identities => {
            let n = s
                .dim
                .ok_or_else(|| ConfigError::Invalid("the identities check needs `dim`".into()))?;
            Signature::euclidean(n).map_err(core)?;
        }
        Check::Ftc | Check::Content => {
            let (_, n) = patch_dims(require_patch(s)?)?;
            if s.check == Check::Ftc {
                require_f(s)?;
            }
            fields_on(n)?;
        }
        Check::Green | Check::Stokes | Check::Gauss => {
            let p = build_single(require_patch(s)?)?;
            let (k, n) = (p.k(), p.ambient_dim());
            match s.check {
                Check::Green => require_shape(s, k, n, 2, 2)?,
                Check::Stokes => require_shape(s, k, n, 2, 3)?,
                _ => require_shape(s, k, n, 3, 3)?,
            }
            require_f(s)?;
            fields_on(n)?;
        }
        Check::Path => {
            if s.curves.is_empty() {
                return Err(ConfigError::Invalid("the path check needs [[curves]]".into()));
            }
            let mut dims = Vec::new();
            for c in &s.curves {
                let p = build_single(c)?;
                if p.k() != 1 {
                    return Err(ConfigError::DimensionMismatch(format!(
                        "path curves must be 1-patches; `{}` is a {}-patch",
                        c.kind,
                        p.k()
                    )));
                }
                dims.push(p.ambient_dim());
            }
            if dims.iter().any(|&d| d != dims[0]) {
                return Err(ConfigError::DimensionMismatch("curves live in different spaces".into()));
            }
            require_f(s)?;
            fields_on(dims[0])?;
        }
        Check::Monogenic => {
            let (k, n) = patch_dims(require_patch(s)?)?;
            if k + 1 != n {
                return Err(ConfigError::DimensionMismatch(format!(
                    "reconstruction needs a closed (n-1)-surface; got a {k}-patch in R^{n}"
                )));
            }
            require_f(s)?;
            fields_on(n)?;
            check_points(&s.points, n)?;
            if let Some(g) = &s.sample {
                if g.lower.len() != n || g.upper.len() != n {
                    return Err(ConfigError::DimensionMismatch(format!("sample grid is not in R^{n}")));
                }
                if g.per_axis == 0 {
                    return Err(ConfigError::Invalid("sample grid needs per_axis >= 1".into()));
                }
            }
        }
        Check::Cauchy => {
            let p = build_single(require_patch(s)?)?;
            let (k, n) = (p.k(), p.ambient_dim());
            if k != n {
                return Err(ConfigError::DimensionMismatch(format!(
                    "the full formula needs a solid n-patch; got a {k}-patch in R^{n}"
                )));
            }
            require_f(s)?;
            fields_on(n)?;
            check_points(&s.points, n)?;
        }
    }
    Ok(())
}
