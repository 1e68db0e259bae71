use crate::error::{Error, Result};

/// The parameter domain `R = [a^1,b^1] x ... x [a^k,b^k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct KRectangle {
    bounds: Vec<(f64, f64)>,
}

/// Which end of an axis a face sits on: `+` at `b^i`, `-` at `a^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

/// One oriented face `R^i_+ = R(s^i = b^i)` or `R^i_- = R(s^i = a^i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    /// 0-based axis index of the pinned parameter.
    pub axis: usize,
    pub side: Side,
    /// Value the pinned parameter takes on the face.
    pub value: f64,
    /// The `k-1` surviving intervals, in original axis order.
    pub domain: Vec<(f64, f64)>,
}

impl Face {
    pub fn sign(&self) -> f64 {
        self.side.sign()
    }

    /// Lifts a face parameter point `t` (length `k-1`) into `R`.
    pub fn lift(&self, t: &[f64]) -> Vec<f64> {
        let mut s = Vec::with_capacity(t.len() + 1);
        s.extend_from_slice(&t[..self.axis]);
        s.push(self.value);
        s.extend_from_slice(&t[self.axis..]);
        s
    }
}

impl KRectangle {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidDomain("a k-rectangle needs k >= 1".into()));
        }
        for (i, &(a, b)) in bounds.iter().enumerate() {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::InvalidDomain(format!(
                    "interval {} is [{a}, {b}]; need finite a < b",
                    i + 1
                )));
            }
        }
        Ok(KRectangle { bounds })
    }

    /// The unit cube `[0,1]^k`.
    pub fn unit(k: usize) -> Result<Self> {
        Self::new(vec![(0.0, 1.0); k])
    }

    pub fn k(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn volume(&self) -> f64 {
        self.bounds.iter().map(|(a, b)| b - a).product()
    }

    pub fn center(&self) -> Vec<f64> {
        self.bounds.iter().map(|(a, b)| 0.5 * (a + b)).collect()
    }

    /// Clamps `s` into the rectangle, allowing a roundoff-sized margin.
    pub fn clamp(&self, s: &[f64]) -> Result<Vec<f64>> {
        if s.len() != self.k() {
            return Err(Error::DimensionMismatch(format!(
                "parameter point has {} coordinates, domain has {}",
                s.len(),
                self.k()
            )));
        }
        let mut out = Vec::with_capacity(s.len());
        for (&x, &(a, b)) in s.iter().zip(&self.bounds) {
            let margin = 1e-12 * a.abs().max(b.abs()).max(1.0);
            if !(x >= a - margin && x <= b + margin) {
                return Err(Error::OutsideDomain { point: s.to_vec() });
            }
            out.push(x.clamp(a, b));
        }
        Ok(out)
    }

    /// The boundary k-chain, ordered `R^1_+, R^1_-, R^2_+, R^2_-, ...`.
    pub fn boundary_chain(&self) -> Vec<Face> {
        let mut faces = Vec::with_capacity(2 * self.k());
        for axis in 0..self.k() {
            let domain: Vec<(f64, f64)> = self
                .bounds
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != axis)
                .map(|(_, &iv)| iv)
                .collect();
            let (a, b) = self.bounds[axis];
            faces.push(Face {
                axis,
                side: Side::Plus,
                value: b,
                domain: domain.clone(),
            });
            faces.push(Face {
                axis,
                side: Side::Minus,
                value: a,
                domain,
            });
        }
        faces
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_endpoints() {
        let r = KRectangle::new(vec![(-1.0, 2.0)]).unwrap();
        let faces = r.boundary_chain();
        assert_eq!(faces.len(), 2);
        assert_eq!((faces[0].value, faces[0].sign()), (2.0, 1.0));
        assert_eq!((faces[1].value, faces[1].sign()), (-1.0, -1.0));
        assert!(faces[0].domain.is_empty());
        assert_eq!(faces[0].lift(&[]), vec![2.0]);
    }

    #[test]
    fn unit_square_faces() {
        let faces = KRectangle::unit(2).unwrap().boundary_chain();
        let summary: Vec<(usize, f64, f64)> =
            faces.iter().map(|f| (f.axis, f.value, f.sign())).collect();
        assert_eq!(
            summary,
            vec![(0, 1.0, 1.0), (0, 0.0, -1.0), (1, 1.0, 1.0), (1, 0.0, -1.0)]
        );
        assert_eq!(faces[2].lift(&[0.25]), vec![0.25, 1.0]);
    }

    #[test]
    fn cube_has_six_square_faces() {
        let faces = KRectangle::unit(3).unwrap().boundary_chain();
        assert_eq!(faces.len(), 6);
        assert!(faces.iter().all(|f| f.domain.len() == 2));
        assert_eq!(faces[2].lift(&[0.1, 0.2]), vec![0.1, 1.0, 0.2]);
    }

    #[test]
    fn rejects_degenerate_intervals() {
        assert!(KRectangle::new(vec![]).is_err());
        assert!(KRectangle::new(vec![(1.0, 1.0)]).is_err());
        assert!(KRectangle::new(vec![(0.0, f64::NAN)]).is_err());
    }

    #[test]
    fn clamp_margin() {
        let r = KRectangle::unit(2).unwrap();
        assert_eq!(r.clamp(&[1.0 + 1e-14, 0.5]).unwrap(), vec![1.0, 0.5]);
        assert!(r.clamp(&[1.01, 0.5]).is_err());
    }
}
