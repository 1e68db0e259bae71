//! Dense multivectors of the Euclidean geometric algebra G_n.
//!
//! A multivector stores one real coefficient per basis blade, indexed by the
//! blade bitmask (bit `i` set means `e_{i+1}` is a factor). All products are
//! computed blade by blade; the reordering sign comes from counting the
//! transpositions needed to bring the concatenated factor list into ascending
//! order, and repeated factors cancel because every `e_i` squares to `+1`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};

/// Largest supported dimension of the underlying vector space.
pub const MAX_DIM: usize = 12;

/// Default relative tolerance for detecting singular blades.
pub const BLADE_EPS: f64 = 1e-12;

/// A Euclidean metric signature: `n` basis vectors, each squaring to `+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    n: u8,
}

impl Signature {
    pub fn euclidean(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::DimensionOutOfRange(n));
        }
        Ok(Signature { n: n as u8 })
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.n as usize
    }

    /// Number of basis blades, `2^n`.
    #[inline]
    pub fn basis_len(self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn pseudoscalar_blade(self) -> Blade {
        Blade(((1u32) << self.n) - 1)
    }

    /// All basis blades ordered by grade, then lexicographically by factor list.
    pub fn blades_by_grade(self) -> Vec<Blade> {
        let mut blades: Vec<Blade> = (0..self.basis_len() as u32).map(Blade).collect();
        blades.sort_by_key(|b| (b.grade(), b.indices()));
        blades
    }

    fn check(self, other: Signature) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SignatureMismatch {
                left: self.dim(),
                right: other.dim(),
            })
        }
    }
}

/// A basis blade, encoded as a bitmask over the basis vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade(pub u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// Builds a blade from 1-based, strictly ascending factor indices.
    pub fn from_indices(indices: &[usize]) -> Result<Blade> {
        let mut bits = 0u32;
        let mut last = 0usize;
        for &i in indices {
            if i == 0 || i > MAX_DIM || i <= last {
                return Err(Error::Parse {
                    position: 0,
                    message: format!("blade indices must be ascending and in 1..={MAX_DIM}"),
                });
            }
            bits |= 1 << (i - 1);
            last = i;
        }
        Ok(Blade(bits))
    }

    /// The basis vector `e_i` (1-based).
    #[inline]
    pub fn vector(i: usize) -> Blade {
        Blade(1 << (i - 1))
    }

    #[inline]
    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based factor indices in canonical ascending order.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|i| self.0 & (1 << i) != 0).map(|i| i + 1).collect()
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Sign of `e_A e_B = sign * e_{A xor B}` for canonical blades `A`, `B`.
#[inline]
pub fn reorder_sign(a: u32, b: u32) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
fn reverse_sign(grade: usize) -> f64 {
    // (-1)^{k(k-1)/2}
    if (grade / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

type Coeffs = SmallVec<[f64; 16]>;

/// A general element of G_n with dense coefficient storage.
#[derive(Clone, PartialEq)]
pub struct Multivector {
    sig: Signature,
    coeffs: Coeffs,
}

impl Multivector {
    pub fn zero(sig: Signature) -> Self {
        Multivector {
            sig,
            coeffs: smallvec![0.0; sig.basis_len()],
        }
    }

    pub fn scalar(sig: Signature, value: f64) -> Self {
        let mut m = Self::zero(sig);
        m.coeffs[0] = value;
        m
    }

    pub fn one(sig: Signature) -> Self {
        Self::scalar(sig, 1.0)
    }

    pub fn from_blade(sig: Signature, blade: Blade, coef: f64) -> Self {
        let mut m = Self::zero(sig);
        m.coeffs[blade.index()] = coef;
        m
    }

    /// The basis blade `e_{i1 i2 ...}` with 1-based ascending indices.
    pub fn basis(sig: Signature, indices: &[usize]) -> Result<Self> {
        let blade = Blade::from_indices(indices)?;
        if blade.0 >> sig.dim() != 0 {
            return Err(Error::DimensionMismatch(format!(
                "blade e{indices:?} does not exist in G_{}",
                sig.dim()
            )));
        }
        Ok(Self::from_blade(sig, blade, 1.0))
    }

    /// The grade-1 multivector `sum_i v[i] e_{i+1}`.
    pub fn vector(sig: Signature, components: &[f64]) -> Result<Self> {
        if components.len() != sig.dim() {
            return Err(Error::CoefficientLength {
                expected: sig.dim(),
                got: components.len(),
            });
        }
        let mut m = Self::zero(sig);
        for (i, &c) in components.iter().enumerate() {
            m.coeffs[1 << i] = c;
        }
        Ok(m)
    }

    pub fn from_coeffs(sig: Signature, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() != sig.basis_len() {
            return Err(Error::CoefficientLength {
                expected: sig.basis_len(),
                got: coeffs.len(),
            });
        }
        Ok(Multivector {
            sig,
            coeffs: coeffs.iter().copied().collect(),
        })
    }

    /// The unit pseudoscalar `I = e_{1...n}`.
    pub fn pseudoscalar(sig: Signature) -> Self {
        Self::from_blade(sig, sig.pseudoscalar_blade(), 1.0)
    }

    /// `I^{-1} = e_{n...1}`.
    pub fn pseudoscalar_inverse(sig: Signature) -> Self {
        Self::pseudoscalar(sig).reverse()
    }

    #[inline]
    pub fn sig(&self) -> Signature {
        self.sig
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeff(&self, blade: Blade) -> f64 {
        self.coeffs.get(blade.index()).copied().unwrap_or(0.0)
    }

    pub fn set_coeff(&mut self, blade: Blade, value: f64) {
        self.coeffs[blade.index()] = value;
    }

    #[inline]
    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Grade-1 components `(a^1, ..., a^n)`.
    pub fn vector_part(&self) -> Vec<f64> {
        (0..self.sig.dim()).map(|i| self.coeffs[1 << i]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// `<A>_k`; grades outside `0..=n` give the zero multivector.
    pub fn grade(&self, k: usize) -> Self {
        let mut out = Self::zero(self.sig);
        if k <= self.sig.dim() {
            for (i, &c) in self.coeffs.iter().enumerate() {
                if (i as u32).count_ones() as usize == k {
                    out.coeffs[i] = c;
                }
            }
        }
        out
    }

    /// The single grade carried by `self`, if it is homogeneous and nonzero.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        let mut grade = None;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                let g = (i as u32).count_ones() as usize;
                match grade {
                    None => grade = Some(g),
                    Some(h) if h != g => return None,
                    _ => {}
                }
            }
        }
        grade
    }

    /// Grades present with nonzero coefficients.
    pub fn grades_present(&self) -> Vec<usize> {
        let mut seen = vec![false; self.sig.dim() + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                seen[(i as u32).count_ones() as usize] = true;
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(g, &s)| s.then_some(g))
            .collect()
    }

    pub fn reverse(&self) -> Self {
        self.map_by_grade(reverse_sign)
    }

    /// Grade involution, `(-1)^k` on grade `k`.
    pub fn involute(&self) -> Self {
        self.map_by_grade(|g| if g % 2 == 0 { 1.0 } else { -1.0 })
    }

    fn map_by_grade(&self, sign: impl Fn(usize) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * sign((i as u32).count_ones() as usize))
            .collect();
        Multivector {
            sig: self.sig,
            coeffs,
        }
    }

    #[inline]
    fn product_filtered(&self, other: &Self, keep: impl Fn(u32, u32) -> bool) -> Self {
        let mut out: Coeffs = smallvec![0.0; self.coeffs.len()];
        for (i, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            let a = i as u32;
            for (j, &cb) in other.coeffs.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                let b = j as u32;
                if keep(a, b) {
                    out[(a ^ b) as usize] += reorder_sign(a, b) * ca * cb;
                }
            }
        }
        Multivector {
            sig: self.sig,
            coeffs: out,
        }
    }

    /// The geometric product `AB`.
    pub fn geometric_product(&self, other: &Self) -> Result<Self> {
        self.sig.check(other.sig)?;
        Ok(self.product_filtered(other, |_, _| true))
    }

    /// The outer product, extended bilinearly from `A_r ^ B_s = <A_r B_s>_{r+s}`.
    ///
    /// Scalars wedge by plain multiplication.
    pub fn outer_product(&self, other: &Self) -> Result<Self> {
        self.sig.check(other.sig)?;
        Ok(self.product_filtered(other, |a, b| a & b == 0))
    }

    /// The inner product, extended bilinearly from `A_r . B_s = <A_r B_s>_{|r-s|}`
    /// for `r, s > 0`; any scalar operand gives zero.
    pub fn inner_product(&self, other: &Self) -> Result<Self> {
        self.sig.check(other.sig)?;
        Ok(self.product_filtered(other, |a, b| {
            if a == 0 || b == 0 {
                return false;
            }
            let (r, s) = (a.count_ones(), b.count_ones());
            (a ^ b).count_ones() == r.abs_diff(s)
        }))
    }

    /// `<AB>_0`.
    pub fn scalar_product(&self, other: &Self) -> Result<f64> {
        self.sig.check(other.sig)?;
        let mut acc = 0.0;
        // <e_A e_B>_0 is nonzero only when A == B.
        for (i, (&a, &b)) in self.coeffs.iter().zip(&other.coeffs).enumerate() {
            if a != 0.0 && b != 0.0 {
                acc += reorder_sign(i as u32, i as u32) * a * b;
            }
        }
        Ok(acc)
    }

    pub fn wedge(&self, other: &Self) -> Self {
        self.outer_product(other).expect("signature mismatch in outer product")
    }

    pub fn dot(&self, other: &Self) -> Self {
        self.inner_product(other).expect("signature mismatch in inner product")
    }

    /// Euclidean coefficient norm, `sqrt(<A reverse(A)>_0)`.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Largest absolute blade coefficient.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Multivector {
            sig: self.sig,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `self += s * other`, in place.
    pub fn add_scaled(&mut self, other: &Self, s: f64) {
        assert_eq!(self.sig, other.sig, "signature mismatch in addition");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    /// Inverse of a nonzero blade: `reverse(B) / <B reverse(B)>_0`.
    pub fn blade_inverse(&self) -> Result<Self> {
        self.blade_inverse_with_tol(BLADE_EPS)
    }

    pub fn blade_inverse_with_tol(&self, eps: f64) -> Result<Self> {
        let peak = self.max_norm();
        if !(peak > 0.0) || !peak.is_finite() {
            return Err(Error::SingularBlade { norm: peak, tol: eps });
        }
        let unit = self.scale(1.0 / peak);
        let rev = unit.reverse();
        let square = &unit * &rev;
        let s = square.scalar_part();
        if !(s > eps) {
            return Err(Error::SingularBlade { norm: s.sqrt() * peak, tol: eps });
        }
        // A blade times its reverse is a pure scalar; anything else is not a blade.
        let residue = (&square - &Multivector::scalar(self.sig, s)).max_norm();
        if residue > 1e-9 * s {
            return Err(Error::NotHomogeneous {
                expected: self.homogeneous_grade().unwrap_or(0),
            });
        }
        Ok(rev.scale(1.0 / (s * peak)))
    }

    /// `det(A_n) = <A_n I^{-1}>_0` for an `n`-vector.
    pub fn determinant(&self) -> Result<f64> {
        let n = self.sig.dim();
        match self.homogeneous_grade() {
            Some(g) if g == n => {}
            None if self.is_zero() => return Ok(0.0),
            _ => return Err(Error::NotHomogeneous { expected: n }),
        }
        Ok((self * &Self::pseudoscalar_inverse(self.sig)).scalar_part())
    }

    /// Exterior product of a list of vectors; the empty product is `1`.
    pub fn wedge_all<'a>(sig: Signature, factors: impl IntoIterator<Item = &'a Multivector>) -> Self {
        factors
            .into_iter()
            .fold(Multivector::one(sig), |acc, v| acc.wedge(v))
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector<G{}>({})", self.sig.dim(), self)
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: Multivector) -> Multivector {
        self += &rhs;
        self
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        self.add_scaled(rhs, 1.0);
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        self.add_scaled(rhs, -1.0);
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(mut self, rhs: Multivector) -> Multivector {
        self -= &rhs;
        self
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

/// Geometric product. Panics on a signature mismatch; use
/// [`Multivector::geometric_product`] for the fallible form.
impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.geometric_product(rhs)
            .expect("signature mismatch in geometric product")
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        &self * &rhs
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> Signature {
        Signature::euclidean(n).unwrap()
    }

    fn e(n: usize, idx: &[usize]) -> Multivector {
        Multivector::basis(g(n), idx).unwrap()
    }

    #[test]
    fn signature_bounds() {
        assert!(Signature::euclidean(0).is_err());
        assert!(Signature::euclidean(13).is_err());
        assert_eq!(Signature::euclidean(12).unwrap().basis_len(), 4096);
    }

    #[test]
    fn basis_vector_products() {
        let s = g(2);
        assert_eq!(&e(2, &[1]) * &e(2, &[1]), Multivector::one(s));
        assert_eq!(&e(2, &[1]) * &e(2, &[2]), e(2, &[1, 2]));
        assert_eq!(&e(2, &[2]) * &e(2, &[1]), -e(2, &[1, 2]));
        let a = &e(2, &[1]) + &e(2, &[2]);
        let b = &e(2, &[1]) - &e(2, &[2]);
        assert_eq!(&a * &b, e(2, &[1, 2]) * Multivector::scalar(s, -2.0));
    }

    #[test]
    fn outer_and_inner_examples() {
        let s = g(2);
        assert_eq!(e(2, &[1]).wedge(&e(2, &[2])), e(2, &[1, 2]));
        assert!(e(2, &[1]).wedge(&e(2, &[1])).is_zero());
        assert_eq!(
            Multivector::scalar(s, 3.0).wedge(&e(2, &[2])),
            e(2, &[2]).scale(3.0)
        );
        assert_eq!(e(2, &[1]).dot(&e(2, &[1])), Multivector::one(s));
        assert_eq!(e(2, &[1]).dot(&e(2, &[1, 2])), e(2, &[2]));
        assert!(Multivector::scalar(s, 5.0).dot(&e(2, &[1])).is_zero());
    }

    #[test]
    fn grade_projection() {
        let s = g(2);
        let m = &(&Multivector::one(s) + &e(2, &[1])) + &e(2, &[1, 2]);
        assert_eq!(m.grade(1), e(2, &[1]));
        assert_eq!((&e(2, &[1]) * &e(2, &[2])).grade(2), e(2, &[1, 2]));
        assert!(m.grade(7).is_zero());
        assert_eq!(m.grades_present(), vec![0, 1, 2]);
        assert_eq!(m.homogeneous_grade(), None);
    }

    #[test]
    fn reverse_and_pseudoscalar_inverse() {
        let s = g(3);
        assert_eq!(e(3, &[1, 2, 3]).reverse(), -e(3, &[1, 2, 3]));
        assert_eq!(Multivector::scalar(s, 2.5).reverse(), Multivector::scalar(s, 2.5));
        let i = Multivector::pseudoscalar(s);
        assert_eq!(&i.reverse() * &i, Multivector::one(s));
        assert_eq!(i.blade_inverse().unwrap(), Multivector::pseudoscalar_inverse(s));
    }

    #[test]
    fn blade_inverses() {
        let s = g(2);
        let inv = e(2, &[1]).scale(2.0).blade_inverse().unwrap();
        assert_eq!(inv, e(2, &[1]).scale(0.5));
        let inv = e(2, &[1, 2]).blade_inverse().unwrap();
        assert_eq!(inv, -e(2, &[1, 2]));
        assert_eq!(&e(2, &[1, 2]) * &inv, Multivector::one(s));
        assert!(matches!(
            Multivector::zero(s).blade_inverse(),
            Err(Error::SingularBlade { .. })
        ));
        // e12 + e34 is homogeneous but not a blade.
        let not_blade = &e(4, &[1, 2]) + &e(4, &[3, 4]);
        assert!(not_blade.blade_inverse().is_err());
    }

    #[test]
    fn determinants() {
        let s2 = g(2);
        assert_eq!(Multivector::pseudoscalar(g(3)).determinant().unwrap(), 1.0);
        assert_eq!(e(2, &[1, 2]).scale(2.0).determinant().unwrap(), 2.0);
        let a = Multivector::vector(s2, &[1.0, 0.0]).unwrap();
        let b = Multivector::vector(s2, &[0.0, 3.0]).unwrap();
        assert_eq!(a.wedge(&b).determinant().unwrap(), 3.0);
        assert!(e(2, &[1]).determinant().is_err());
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        assert!(matches!(
            e(2, &[1]).geometric_product(&e(3, &[1])),
            Err(Error::SignatureMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn scalar_product_matches_full_product() {
        let s = g(3);
        let a = Multivector::from_coeffs(s, &[1.0, 2.0, -1.0, 0.5, 3.0, -2.0, 1.5, 0.25]).unwrap();
        let b = Multivector::from_coeffs(s, &[0.5, -1.0, 2.0, 1.0, -0.5, 1.0, 2.0, -3.0]).unwrap();
        assert!(((&a * &b).scalar_part() - a.scalar_product(&b).unwrap()).abs() < 1e-14);
    }
}
