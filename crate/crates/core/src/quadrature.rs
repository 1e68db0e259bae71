//! Composite tensor-product quadrature with deterministic reduction.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::algebra::{Multivector, Signature};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Rule {
    #[default]
    GaussLegendre,
    Midpoint,
}

/// `points_per_axis` nodes in each of `subdivisions` equal cells per axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub rule: Rule,
    pub points_per_axis: usize,
    pub subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rule: Rule::GaussLegendre,
            points_per_axis: 8,
            subdivisions: 8,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rule: Rule, points_per_axis: usize, subdivisions: usize) -> Result<Self> {
        if points_per_axis == 0 || subdivisions == 0 {
            return Err(Error::Quadrature(
                "points per axis and subdivisions must be at least 1".into(),
            ));
        }
        if rule == Rule::GaussLegendre && points_per_axis > 128 {
            return Err(Error::Quadrature("at most 128 Gauss points per axis".into()));
        }
        Ok(QuadratureSpec {
            rule,
            points_per_axis,
            subdivisions,
        })
    }

    pub fn gauss(q: usize, m: usize) -> Self {
        Self::new(Rule::GaussLegendre, q, m).expect("valid Gauss rule")
    }

    pub fn midpoint(q: usize, m: usize) -> Self {
        Self::new(Rule::Midpoint, q, m).expect("valid midpoint rule")
    }

    /// The same rule with `factor` times as many subdivisions.
    pub fn refined(self, factor: usize) -> Self {
        QuadratureSpec {
            subdivisions: self.subdivisions * factor,
            ..self
        }
    }

    /// Total node count on a `k`-dimensional domain, `(q m)^k`.
    pub fn node_count(&self, k: usize) -> usize {
        (self.points_per_axis * self.subdivisions).pow(k as u32)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    for i in 0..(q + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=q {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let (p, pm1) = if q == 1 { (x, 1.0) } else { (p1, p0) };
            let dp = q as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        // Recompute the derivative at the converged node.
        let (mut p0, mut p1) = (1.0, x);
        for j in 2..=q {
            let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = if q > 1 {
            q as f64 * (x * p1 - p0) / (x * x - 1.0)
        } else {
            1.0
        };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[q - 1 - i] = x;
        weights[i] = w;
        weights[q - 1 - i] = w;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    (nodes, weights)
}

/// Composite one-dimensional rule on `[a, b]`.
#[derive(Clone, Debug)]
pub struct AxisRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl AxisRule {
    pub fn new(spec: &QuadratureSpec, a: f64, b: f64) -> Self {
        let q = spec.points_per_axis;
        let m = spec.subdivisions;
        let (ref_nodes, ref_weights) = match spec.rule {
            Rule::GaussLegendre => gauss_legendre(q),
            Rule::Midpoint => (
                (0..q).map(|i| -1.0 + (2 * i + 1) as f64 / q as f64).collect(),
                vec![2.0 / q as f64; q],
            ),
        };
        let cell = (b - a) / m as f64;
        let mut nodes = Vec::with_capacity(q * m);
        let mut weights = Vec::with_capacity(q * m);
        for c in 0..m {
            let lo = a + c as f64 * cell;
            for (x, w) in ref_nodes.iter().zip(&ref_weights) {
                nodes.push(lo + 0.5 * cell * (x + 1.0));
                weights.push(0.5 * cell * w);
            }
        }
        AxisRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

const BLOCK: usize = 32;

/// Blocked pairwise summation: short sequential runs merged as a binary tree.
pub(crate) struct PairwiseSum {
    sig: Signature,
    block: Multivector,
    in_block: usize,
    stack: Vec<(u32, Multivector)>,
}

impl PairwiseSum {
    pub(crate) fn new(sig: Signature) -> Self {
        PairwiseSum {
            sig,
            block: Multivector::zero(sig),
            in_block: 0,
            stack: Vec::new(),
        }
    }

    pub(crate) fn push_scaled(&mut self, v: &Multivector, w: f64) {
        self.block.add_scaled(v, w);
        self.in_block += 1;
        if self.in_block == BLOCK {
            let full = std::mem::replace(&mut self.block, Multivector::zero(self.sig));
            self.in_block = 0;
            self.push_node(0, full);
        }
    }

    fn push_node(&mut self, mut level: u32, mut value: Multivector) {
        while let Some((top, _)) = self.stack.last() {
            if *top != level {
                break;
            }
            let (_, prev) = self.stack.pop().expect("nonempty");
            value = prev + value;
            level += 1;
        }
        self.stack.push((level, value));
    }

    pub(crate) fn finish(mut self) -> Multivector {
        let mut acc = std::mem::replace(&mut self.block, Multivector::zero(self.sig));
        while let Some((_, v)) = self.stack.pop() {
            acc = v + acc;
        }
        acc
    }
}

/// Pairwise reduction of an ordered list.
pub(crate) fn tree_sum(sig: Signature, mut parts: Vec<Multivector>) -> Multivector {
    if parts.is_empty() {
        return Multivector::zero(sig);
    }
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        parts = next;
    }
    parts.pop().expect("one part left")
}

/// `Σ w(s) f(s)` over the tensor grid of `axes`.
///
/// Work is split by the node index on the first axis, a partition that does
/// not depend on the thread count; each slab is summed in a fixed order and the
/// slab sums are combined as a binary tree, so results are bit-for-bit
/// reproducible for any pool size.
pub(crate) fn integrate_tensor<F>(axes: &[AxisRule], sig: Signature, f: F) -> Result<Multivector>
where
    F: Fn(&[f64]) -> Result<Multivector> + Sync,
{
    let k = axes.len();
    if k == 0 {
        return f(&[]);
    }
    let slabs: Vec<Result<Multivector>> = (0..axes[0].len())
        .into_par_iter()
        .map(|i0| {
            let mut acc = PairwiseSum::new(sig);
            let mut idx = vec![0usize; k];
            idx[0] = i0;
            let mut s: Vec<f64> = (0..k).map(|j| axes[j].nodes[idx[j]]).collect();
            loop {
                let w: f64 = (0..k).map(|j| axes[j].weights[idx[j]]).product();
                let v = f(&s)?;
                acc.push_scaled(&v, w);
                // Odometer over axes 1..k.
                let mut j = k;
                loop {
                    j -= 1;
                    if j == 0 {
                        return Ok(acc.finish());
                    }
                    idx[j] += 1;
                    if idx[j] < axes[j].len() {
                        s[j] = axes[j].nodes[idx[j]];
                        break;
                    }
                    idx[j] = 0;
                    s[j] = axes[j].nodes[0];
                }
            }
        })
        .collect();
    let slabs = slabs.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(tree_sum(sig, slabs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_small_rules() {
        let (x, w) = gauss_legendre(1);
        assert_eq!((x[0], w[0]), (0.0, 2.0));
        let (x, w) = gauss_legendre(2);
        assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(3);
        assert!((x[2] - 0.6f64.sqrt()).abs() < 1e-15);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_exactness() {
        for q in [4, 8, 16, 33] {
            let (x, w) = gauss_legendre(q);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for d in 0..2 * q {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(d as i32)).sum();
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d + 1) as f64 };
                assert!((got - exact).abs() < 1e-13, "q={q} d={d}");
            }
        }
    }

    #[test]
    fn composite_rule_on_interval() {
        let rule = AxisRule::new(&QuadratureSpec::gauss(6, 4), 1.0, 3.0);
        assert_eq!(rule.len(), 24);
        let got: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.exp()).sum();
        assert!((got - (3f64.exp() - 1f64.exp())).abs() < 1e-12);
        let mid = AxisRule::new(&QuadratureSpec::midpoint(2, 2), 0.0, 1.0);
        assert_eq!(mid.nodes, vec![0.125, 0.375, 0.625, 0.875]);
    }

    #[test]
    fn invalid_specs() {
        assert!(QuadratureSpec::new(Rule::GaussLegendre, 0, 1).is_err());
        assert!(QuadratureSpec::new(Rule::Midpoint, 1, 0).is_err());
    }

    #[test]
    fn tensor_volume() {
        let sig = Signature::euclidean(3).unwrap();
        let spec = QuadratureSpec::gauss(2, 3);
        let axes = vec![AxisRule::new(&spec, 0.0, 1.0), AxisRule::new(&spec, 0.0, 2.0), AxisRule::new(&spec, -1.0, 1.0)];
        let v = integrate_tensor(&axes, sig, |s| Ok(Multivector::scalar(sig, s[0] * s[1] * s[2] * s[2])))
            .unwrap();
        // ∫x ∫y ∫z^2 = 1/2 * 2 * 2/3
        assert!((v.scalar_part() - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn pairwise_sum_matches_plain_sum_on_integers() {
        let sig = Signature::euclidean(1).unwrap();
        let mut acc = PairwiseSum::new(sig);
        for i in 0..1000 {
            acc.push_scaled(&Multivector::scalar(sig, i as f64), 1.0);
        }
        assert_eq!(acc.finish().scalar_part(), 499500.0);
    }
}
