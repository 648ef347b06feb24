//! The solvable Lie algebra `a + n` of complex hyperbolic space as a real
//! vector space of dimension `2n`.
//!
//! Vectors are stored flat as `[a, Re v_1, Im v_1, ..., Re v_{n-1}, Im v_{n-1}, z]`
//! where `a` is the coefficient of `B`, `v` is the `g_alpha` component and `z`
//! the coefficient of `Z = JB`. In this encoding the metric is Euclidean and the
//! complex structure is an index permutation with signs.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Complex dimension `n` of the ambient `CH^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ModelDim(usize);

impl ModelDim {
    pub const MIN: usize = 2;
    pub const MAX: usize = 32;

    pub fn new(n: usize) -> Result<Self> {
        if (Self::MIN..=Self::MAX).contains(&n) {
            Ok(Self(n))
        } else {
            Err(Error::InvalidModelDim(n))
        }
    }

    /// Infers the model dimension from a flat encoding length `2n`.
    pub fn from_real_dim(len: usize) -> Result<Self> {
        if !len.is_multiple_of(2) {
            return Err(Error::InvalidSpec(format!("odd vector length {len}")));
        }
        Self::new(len / 2)
    }

    #[inline]
    pub fn n(self) -> usize {
        self.0
    }

    /// Real dimension `2n` of `a + n`.
    #[inline]
    pub fn real_dim(self) -> usize {
        2 * self.0
    }

    /// Complex dimension `n - 1` of `g_alpha`.
    #[inline]
    pub fn alpha_complex_dim(self) -> usize {
        self.0 - 1
    }

    /// Index of the `Z` coefficient in the flat encoding.
    #[inline]
    pub fn z_index(self) -> usize {
        2 * self.0 - 1
    }

    /// Flat index of the real axis of the `k`-th complex coordinate of `g_alpha`.
    #[inline]
    pub fn re_index(self, k: usize) -> usize {
        1 + 2 * k
    }

    /// Flat index of the imaginary axis of the `k`-th complex coordinate of `g_alpha`.
    #[inline]
    pub fn im_index(self, k: usize) -> usize {
        2 + 2 * k
    }
}

impl<'de> Deserialize<'de> for ModelDim {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = usize::deserialize(d)?;
        ModelDim::new(n).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ModelDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element `aB + v + zZ` of `a + g_alpha + g_2alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgVec {
    coords: Vec<f64>,
}

impl AlgVec {
    pub fn zero(dim: ModelDim) -> Self {
        Self {
            coords: vec![0.0; dim.real_dim()],
        }
    }

    /// Wraps a flat encoding, validating its length.
    pub fn from_flat(coords: Vec<f64>) -> Result<Self> {
        ModelDim::from_real_dim(coords.len())?;
        Ok(Self { coords })
    }

    /// Same as [`AlgVec::from_flat`] but checks against an expected dimension.
    pub fn from_flat_in(dim: ModelDim, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != dim.real_dim() {
            return Err(Error::DimensionMismatch {
                expected: dim.real_dim(),
                found: coords.len(),
            });
        }
        Ok(Self { coords })
    }

    /// Builds `aB + v + zZ` from the interleaved real/imaginary parts of `v`.
    pub fn from_parts(dim: ModelDim, a: f64, alpha: &[f64], z: f64) -> Result<Self> {
        let expected = 2 * dim.alpha_complex_dim();
        if alpha.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: alpha.len(),
            });
        }
        let mut coords = Vec::with_capacity(dim.real_dim());
        coords.push(a);
        coords.extend_from_slice(alpha);
        coords.push(z);
        Ok(Self { coords })
    }

    /// The `i`-th standard basis vector of the flat encoding.
    pub fn unit(dim: ModelDim, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coords[i] = 1.0;
        v
    }

    /// The unit vector `B` spanning `a`.
    pub fn b(dim: ModelDim) -> Self {
        Self::unit(dim, 0)
    }

    /// The unit vector `Z = JB` spanning `g_2alpha`.
    pub fn z_unit(dim: ModelDim) -> Self {
        Self::unit(dim, dim.z_index())
    }

    pub fn dim(&self) -> ModelDim {
        ModelDim(self.coords.len() / 2)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coords
    }

    /// Coefficient of `B`.
    pub fn a(&self) -> f64 {
        self.coords[0]
    }

    /// Coefficient of `Z`.
    pub fn z(&self) -> f64 {
        self.coords[self.coords.len() - 1]
    }

    /// Interleaved real/imaginary coordinates of the `g_alpha` component.
    pub fn alpha(&self) -> &[f64] {
        let len = self.coords.len();
        &self.coords[1..len - 1]
    }

    pub fn alpha_mut(&mut self) -> &mut [f64] {
        let len = self.coords.len();
        &mut self.coords[1..len - 1]
    }

    pub fn set_a(&mut self, a: f64) {
        self.coords[0] = a;
    }

    pub fn set_z(&mut self, z: f64) {
        let last = self.coords.len() - 1;
        self.coords[last] = z;
    }

    /// The `g_alpha` part alone, as an element of the full algebra.
    pub fn alpha_part(&self) -> Self {
        let mut v = self.clone();
        v.set_a(0.0);
        v.set_z(0.0);
        v
    }

    pub fn dot(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.coords.len(), other.coords.len());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(x, y)| x * y)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|x| s * x).collect(),
        }
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        debug_assert_eq!(self.coords.len(), other.coords.len());
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(x, y)| x + s * y)
                .collect(),
        }
    }

    /// The complex structure: `J(a, v, z) = (-z, iv, a)`.
    pub fn j(&self) -> Self {
        let len = self.coords.len();
        let mut out = vec![0.0; len];
        out[0] = -self.coords[len - 1];
        out[len - 1] = self.coords[0];
        for k in (1..len - 1).step_by(2) {
            let (re, im) = (self.coords[k], self.coords[k + 1]);
            out[k] = -im;
            out[k + 1] = re;
        }
        Self { coords: out }
    }

    /// `<Ju, v>` restricted to the `g_alpha` components.
    pub fn omega_alpha(&self, other: &Self) -> f64 {
        let (u, v) = (self.alpha(), other.alpha());
        u.chunks_exact(2)
            .zip(v.chunks_exact(2))
            .map(|(p, q)| -p[1] * q[0] + p[0] * q[1])
            .sum()
    }

    /// The Lie bracket
    /// `[(a1,v1,z1),(a2,v2,z2)] = (0, (a1 v2 - a2 v1)/2, a1 z2 - a2 z1 + <Jv1, v2>)`.
    ///
    /// Panics if the dimensions differ; see [`crate::lie::bracket`] for the
    /// checked form.
    pub fn bracket(&self, other: &Self) -> Self {
        assert_eq!(
            self.coords.len(),
            other.coords.len(),
            "bracket of vectors in different models"
        );
        let (a1, a2) = (self.a(), other.a());
        let len = self.coords.len();
        let mut out = vec![0.0; len];
        for k in 1..len - 1 {
            out[k] = 0.5 * (a1 * other.coords[k] - a2 * self.coords[k]);
        }
        out[len - 1] = a1 * other.z() - a2 * self.z() + self.omega_alpha(other);
        Self { coords: out }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.coords.len() == other.coords.len()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(x, y)| (x - y).abs() <= tol)
    }

    /// Largest coordinate difference.
    pub fn dist_max(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
    }
}

impl Serialize for AlgVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(d)?;
        AlgVec::from_flat(coords).map_err(serde::de::Error::custom)
    }
}

impl Add for &AlgVec {
    type Output = AlgVec;
    fn add(self, rhs: &AlgVec) -> AlgVec {
        self.axpy(1.0, rhs)
    }
}

impl Add for AlgVec {
    type Output = AlgVec;
    fn add(self, rhs: AlgVec) -> AlgVec {
        &self + &rhs
    }
}

impl Sub for &AlgVec {
    type Output = AlgVec;
    fn sub(self, rhs: &AlgVec) -> AlgVec {
        self.axpy(-1.0, rhs)
    }
}

impl Sub for AlgVec {
    type Output = AlgVec;
    fn sub(self, rhs: AlgVec) -> AlgVec {
        &self - &rhs
    }
}

impl AddAssign<&AlgVec> for AlgVec {
    fn add_assign(&mut self, rhs: &AlgVec) {
        for (x, y) in self.coords.iter_mut().zip(&rhs.coords) {
            *x += y;
        }
    }
}

impl SubAssign<&AlgVec> for AlgVec {
    fn sub_assign(&mut self, rhs: &AlgVec) {
        for (x, y) in self.coords.iter_mut().zip(&rhs.coords) {
            *x -= y;
        }
    }
}

impl Mul<&AlgVec> for f64 {
    type Output = AlgVec;
    fn mul(self, rhs: &AlgVec) -> AlgVec {
        rhs.scale(self)
    }
}

impl Mul<AlgVec> for f64 {
    type Output = AlgVec;
    fn mul(self, rhs: AlgVec) -> AlgVec {
        rhs.scale(self)
    }
}

impl Neg for &AlgVec {
    type Output = AlgVec;
    fn neg(self) -> AlgVec {
        self.scale(-1.0)
    }
}

impl Neg for AlgVec {
    type Output = AlgVec;
    fn neg(self) -> AlgVec {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: usize) -> ModelDim {
        ModelDim::new(n).unwrap()
    }

    #[test]
    fn model_dim_bounds() {
        assert!(ModelDim::new(1).is_err());
        assert!(ModelDim::new(33).is_err());
        assert_eq!(ModelDim::new(32).unwrap().real_dim(), 64);
    }

    #[test]
    fn j_maps_b_to_z() {
        let d = dim(3);
        assert_eq!(AlgVec::b(d).j(), AlgVec::z_unit(d));
        assert_eq!(AlgVec::z_unit(d).j(), -AlgVec::b(d));
    }

    #[test]
    fn j_is_multiplication_by_i_on_alpha() {
        let d = dim(2);
        let u = AlgVec::unit(d, d.re_index(0));
        assert_eq!(u.j(), AlgVec::unit(d, d.im_index(0)));
    }

    #[test]
    fn bracket_relations() {
        let d = dim(2);
        let b = AlgVec::b(d);
        let z = AlgVec::z_unit(d);
        let u = AlgVec::unit(d, d.re_index(0));
        assert_eq!(b.bracket(&z), z);
        assert_eq!(b.bracket(&u), u.scale(0.5));
        assert_eq!(u.bracket(&u.j()), z);
        assert_eq!(u.bracket(&z), AlgVec::zero(d));
    }

    #[test]
    fn from_flat_rejects_odd_length() {
        assert!(AlgVec::from_flat(vec![0.0; 5]).is_err());
        assert!(AlgVec::from_parts(dim(3), 0.0, &[0.0; 3], 0.0).is_err());
    }

    #[test]
    fn json_is_flat_array() {
        let d = dim(2);
        let v = AlgVec::from_parts(d, 1.0, &[2.0, 3.0], 4.0).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), "[1.0,2.0,3.0,4.0]");
        let back: AlgVec = serde_json::from_str("[1.0,2.0,3.0,4.0]").unwrap();
        assert_eq!(back, v);
    }
}
