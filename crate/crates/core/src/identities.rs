//! Randomized checks of the elementary vector-derivative formulas in `R^n`.
//!
//! 1. `∂x = n` (so `∂.x = n`, `∂^x = 0`)
//! 2. `a.∂ x = a = ∂(x.a)` for a constant vector `a`
//! 3. `∂ x^2 = 2x`
//! 4. `∂|x| = x/|x|`
//! 5. `∂|x|^k = k |x|^{k-2} x`, `k = -2..4`
//! 6. `∂(x/|x|^k) = (n-k)/|x|^k`, `k = 0..n+1`; `k = n` is the Cauchy kernel
//! 7. `∂ log|x| = x^{-1}`

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Multivector, Signature};
use crate::derivative::flat_vector_derivative;
use crate::error::Result;
use crate::field::FieldFn;
use crate::report::{num, Table};

/// Default seed for the random sample points.
pub const DEFAULT_SEED: u64 = 0xC11F_F0AD;

pub const FORMULA_COUNT: usize = 7;

/// How derivatives are taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativePath {
    Analytic,
    FiniteDifference,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormulaRow {
    pub formula_id: usize,
    pub trials: usize,
    pub max_rel_err: f64,
    pub mean_rel_err: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub n: usize,
    pub seed: u64,
    pub path: DerivativePath,
    pub rows: Vec<FormulaRow>,
    /// Largest `|x|^n |∂(x/|x|^n)|` seen; the kernel's departure from
    /// monogenicity.
    pub kernel_rel_err: f64,
}

pub const IDENTITY_CSV_HEADER: [&str; 4] = ["formula_id", "trials", "max_rel_err", "mean_rel_err"];

impl IdentityReport {
    pub fn max_rel_err(&self) -> f64 {
        self.rows.iter().map(|r| r.max_rel_err).fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_rel_err() <= tol
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&IDENTITY_CSV_HEADER);
        for r in &self.rows {
            t.push(vec![
                r.formula_id.to_string(),
                r.trials.to_string(),
                num(r.max_rel_err),
                num(r.mean_rel_err),
            ]);
        }
        t
    }
}

/// Uniform in `[-2, 2]^n` outside the ball of radius 0.1.
pub fn sample_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        if x.iter().map(|c| c * c).sum::<f64>() >= 0.01 {
            return x;
        }
    }
}

struct Fields {
    x: FieldFn,
    x2: FieldFn,
    abs: FieldFn,
    powers: Vec<(i32, FieldFn)>,
    kernels: Vec<(usize, FieldFn)>,
    log: FieldFn,
}

impl Fields {
    fn new(sig: Signature, path: DerivativePath) -> Self {
        let prep = |f: FieldFn| match path {
            DerivativePath::Analytic => f,
            DerivativePath::FiniteDifference => f.without_derivative(),
        };
        let n = sig.dim();
        Fields {
            x: prep(FieldFn::identity_vector(sig)),
            x2: prep(FieldFn::norm_squared(sig)),
            abs: prep(FieldFn::norm_power(sig, 1.0)),
            powers: (-2..=4).map(|k| (k, prep(FieldFn::norm_power(sig, k as f64)))).collect(),
            kernels: (0..=n + 1)
                .map(|k| (k, prep(FieldFn::kernel_power(sig, k as f64))))
                .collect(),
            log: prep(FieldFn::log_norm(sig)),
        }
    }
}

fn rel(got: &Multivector, want: &Multivector, scale: f64) -> f64 {
    (got - want).norm() / scale
}

/// Relative errors of formulas 1-7 at one point, plus the kernel error.
fn errors_at(
    sig: Signature,
    fields: &Fields,
    path: DerivativePath,
    x: &[f64],
    a: &[f64],
) -> Result<([f64; FORMULA_COUNT], f64)> {
    let n = sig.dim();
    let xv = Multivector::vector(sig, x)?;
    let av = Multivector::vector(sig, a)?;
    let r = xv.norm();
    let d = |f: &FieldFn| flat_vector_derivative(f, x);
    let mut e = [0.0; FORMULA_COUNT];

    e[0] = rel(&d(&fields.x)?, &Multivector::scalar(sig, n as f64), n as f64);

    let along = match path {
        DerivativePath::Analytic => fields.x.directional(x, a),
        DerivativePath::FiniteDifference => fields.x.directional_fd(x, a)?,
    };
    let avec = a.to_vec();
    let dot_a = FieldFn::new(sig, "x.a", move |y| {
        Multivector::scalar(sig, y.iter().zip(&avec).map(|(p, q)| p * q).sum())
    });
    let dot_a = match path {
        DerivativePath::Analytic => {
            let avec = a.to_vec();
            dot_a.with_directional(move |_, v| {
                Multivector::scalar(sig, v.iter().zip(&avec).map(|(p, q)| p * q).sum())
            })
        }
        DerivativePath::FiniteDifference => dot_a,
    };
    let an = av.norm();
    e[1] = rel(&along, &av, an).max(rel(&d(&dot_a)?, &av, an));

    e[2] = rel(&d(&fields.x2)?, &xv.scale(2.0), 2.0 * r);
    e[3] = rel(&d(&fields.abs)?, &xv.scale(1.0 / r), 1.0);

    e[4] = 0.0;
    for (k, f) in &fields.powers {
        let k = *k as f64;
        let want = xv.scale(k * r.powf(k - 2.0));
        // |k| r^{k-1} is the size of the answer; r^{k-1} covers k = 0.
        let scale = r.powf(k - 1.0) * k.abs().max(1.0);
        e[4] = e[4].max(rel(&d(f)?, &want, scale));
    }

    e[5] = 0.0;
    let mut kernel = 0.0;
    for (k, f) in &fields.kernels {
        let kf = *k as f64;
        let want = Multivector::scalar(sig, (n as f64 - kf) / r.powf(kf));
        let scale = (n as f64 - kf).abs().max(1.0) / r.powf(kf);
        let err = rel(&d(f)?, &want, scale);
        if *k == n {
            kernel = err;
        }
        e[5] = e[5].max(err);
    }

    e[6] = rel(&d(&fields.log)?, &xv.blade_inverse()?, 1.0 / r);
    Ok((e, kernel))
}

/// Formulas 1-7 at `trials` random points, derivatives by finite differences.
pub fn identity_suite(n: usize, trials: usize, seed: u64) -> Result<IdentityReport> {
    identity_suite_with(n, trials, seed, DerivativePath::FiniteDifference)
}

pub fn identity_suite_with(
    n: usize,
    trials: usize,
    seed: u64,
    path: DerivativePath,
) -> Result<IdentityReport> {
    let sig = Signature::euclidean(n)?;
    let fields = Fields::new(sig, path);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max = [0.0f64; FORMULA_COUNT];
    let mut sum = [0.0f64; FORMULA_COUNT];
    let mut kernel_rel_err = 0.0f64;
    for _ in 0..trials {
        let x = sample_point(&mut rng, n);
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if a.iter().all(|c| *c == 0.0) {
            continue;
        }
        let (e, kernel) = errors_at(sig, &fields, path, &x, &a)?;
        for i in 0..FORMULA_COUNT {
            max[i] = max[i].max(e[i]);
            sum[i] += e[i];
        }
        kernel_rel_err = kernel_rel_err.max(kernel);
    }
    let rows = (0..FORMULA_COUNT)
        .map(|i| FormulaRow {
            formula_id: i + 1,
            trials,
            max_rel_err: max[i],
            mean_rel_err: if trials > 0 { sum[i] / trials as f64 } else { 0.0 },
        })
        .collect();
    Ok(IdentityReport {
        n,
        seed,
        path,
        rows,
        kernel_rel_err,
    })
}
