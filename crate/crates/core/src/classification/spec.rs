//! Normal-form descriptors and their canonical embedding.
//!
//! The canonical embedding puts the complex part `c` on the first `dim_c`
//! complex coordinates of `g_alpha`, the totally real part `r` on the real axes
//! of the next `dim_r` coordinates, and leaves the remaining coordinates for
//! `c' = g_alpha - (c + Cr)`. `Jr` occupies the imaginary axes of the `r`
//! coordinates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{AlgVec, GroupElement, ModelDim};
use crate::subspace::Subspace;

/// The four normal-form types `r`, `c+r+g2a`, `a+r`, `a+c+r+g2a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    R,
    CRZ,
    AR,
    ACRZ,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::R, Kind::CRZ, Kind::AR, Kind::ACRZ];

    /// Whether `h` contains `a = span{B}`.
    pub fn has_a(self) -> bool {
        matches!(self, Kind::AR | Kind::ACRZ)
    }

    /// Whether `h` contains `g_2alpha = span{Z}`.
    pub fn has_z(self) -> bool {
        matches!(self, Kind::CRZ | Kind::ACRZ)
    }

    pub fn type_tag(self) -> TypeTag {
        match self {
            Kind::R => TypeTag::I,
            Kind::CRZ => TypeTag::II,
            Kind::AR => TypeTag::III,
            Kind::ACRZ => TypeTag::IV,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::R => "R",
            Kind::CRZ => "CRZ",
            Kind::AR => "AR",
            Kind::ACRZ => "ACRZ",
        };
        f.write_str(s)
    }
}

/// Classification verdict: the four CR families or not CR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeTag {
    I,
    II,
    III,
    IV,
    NotCR,
}

/// Normal form `b + c + r + z` given by its type and dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct SubalgebraSpec {
    pub kind: Kind,
    /// Complex dimension of `c`.
    pub dim_c: usize,
    /// Real dimension of `r`.
    pub dim_r: usize,
    pub n: ModelDim,
}

#[derive(Deserialize)]
struct RawSpec {
    kind: Kind,
    dim_c: usize,
    dim_r: usize,
    n: usize,
}

impl TryFrom<RawSpec> for SubalgebraSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        SubalgebraSpec::new(raw.kind, raw.dim_c, raw.dim_r, ModelDim::new(raw.n)?)
    }
}

impl SubalgebraSpec {
    pub fn new(kind: Kind, dim_c: usize, dim_r: usize, n: ModelDim) -> Result<Self> {
        let spec = Self {
            kind,
            dim_c,
            dim_r,
            n,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let cap = self.n.alpha_complex_dim();
        let fail = |msg: String| Err(Error::InvalidSpec(msg));
        match self.kind {
            Kind::R | Kind::AR => {
                if self.dim_c != 0 {
                    return fail(format!("kind {} has no complex part", self.kind));
                }
                let min_r = usize::from(self.kind == Kind::R);
                if self.dim_r < min_r || self.dim_r > cap {
                    return fail(format!(
                        "kind {} needs {min_r} <= dim_r <= n-1 = {cap}, got {}",
                        self.kind, self.dim_r
                    ));
                }
            }
            Kind::CRZ | Kind::ACRZ => {
                if self.dim_c + self.dim_r > cap {
                    return fail(format!(
                        "dim_c + dim_r = {} exceeds n-1 = {cap}",
                        self.dim_c + self.dim_r
                    ));
                }
                if self.kind == Kind::ACRZ && self.dim_c == cap {
                    return fail("a + g_alpha + g_2alpha is the whole algebra".into());
                }
            }
        }
        Ok(())
    }

    /// Real dimension of `c + r`.
    pub fn dim_cr(&self) -> usize {
        2 * self.dim_c + self.dim_r
    }

    /// Real dimension of `h`.
    pub fn dim_h(&self) -> usize {
        self.dim_cr() + usize::from(self.kind.has_a()) + usize::from(self.kind.has_z())
    }

    /// Complex dimension of `c'`.
    pub fn dim_c_prime(&self) -> usize {
        self.n.alpha_complex_dim() - self.dim_c - self.dim_r
    }

    fn c_coords(&self) -> std::ops::Range<usize> {
        0..self.dim_c
    }

    fn r_coords(&self) -> std::ops::Range<usize> {
        self.dim_c..self.dim_c + self.dim_r
    }

    fn c_prime_coords(&self) -> std::ops::Range<usize> {
        self.dim_c + self.dim_r..self.n.alpha_complex_dim()
    }

    pub fn c_subspace(&self) -> Subspace {
        let n = self.n;
        Subspace::coordinate_span(
            n,
            self.c_coords().flat_map(|k| [n.re_index(k), n.im_index(k)]),
        )
    }

    pub fn r_subspace(&self) -> Subspace {
        let n = self.n;
        Subspace::coordinate_span(n, self.r_coords().map(|k| n.re_index(k)))
    }

    pub fn jr_subspace(&self) -> Subspace {
        let n = self.n;
        Subspace::coordinate_span(n, self.r_coords().map(|k| n.im_index(k)))
    }

    pub fn c_prime_subspace(&self) -> Subspace {
        let n = self.n;
        Subspace::coordinate_span(
            n,
            self.c_prime_coords()
                .flat_map(|k| [n.re_index(k), n.im_index(k)]),
        )
    }

    /// Splits the `g_alpha` part of `x` along `c + c' + r + Jr`.
    pub fn split_alpha(&self, x: &AlgVec) -> AlphaSplit {
        let n = self.n;
        let src = x.as_slice();
        let pick = |axes: &mut dyn Iterator<Item = usize>| {
            let mut out = vec![0.0; n.real_dim()];
            for i in axes {
                out[i] = src[i];
            }
            AlgVec::from_flat_in(n, out).expect("length")
        };
        AlphaSplit {
            u: pick(&mut self.c_coords().flat_map(|k| [n.re_index(k), n.im_index(k)])),
            v: pick(
                &mut self
                    .c_prime_coords()
                    .flat_map(|k| [n.re_index(k), n.im_index(k)]),
            ),
            s: pick(&mut self.r_coords().map(|k| n.re_index(k))),
            jt: pick(&mut self.r_coords().map(|k| n.im_index(k))),
        }
    }

    /// Builds `Exp(bB + JT + W + yZ)` from structured coordinates.
    pub fn group_element(&self, coords: &StructuredCoords) -> Result<GroupElement> {
        let n = self.n;
        if !coords.t.is_empty() && coords.t.len() != self.dim_r {
            return Err(Error::DimensionMismatch {
                expected: self.dim_r,
                found: coords.t.len(),
            });
        }
        if !coords.w.is_empty() && coords.w.len() != 2 * self.dim_c_prime() {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.dim_c_prime(),
                found: coords.w.len(),
            });
        }
        let mut xi = vec![0.0; n.real_dim()];
        xi[0] = coords.b;
        xi[n.z_index()] = coords.y;
        for (k, t) in self.r_coords().zip(&coords.t) {
            xi[n.im_index(k)] = *t;
        }
        for (k, w) in self.c_prime_coords().zip(coords.w.chunks(2)) {
            xi[n.re_index(k)] = w[0];
            xi[n.im_index(k)] = w[1];
        }
        Ok(GroupElement::exp(AlgVec::from_flat_in(n, xi)?))
    }

    /// Structured coordinates `(b, T, W, y)` of `xi`; components along `c` and `r`
    /// are dropped.
    pub fn structured(&self, xi: &AlgVec) -> StructuredCoords {
        let n = self.n;
        let s = xi.as_slice();
        StructuredCoords {
            b: xi.a(),
            t: self.r_coords().map(|k| s[n.im_index(k)]).collect(),
            w: self
                .c_prime_coords()
                .flat_map(|k| [s[n.re_index(k)], s[n.im_index(k)]])
                .collect(),
            y: xi.z(),
        }
    }
}

/// Components of a `g_alpha` vector along the canonical splitting
/// `c + c' + r + Jr`, each embedded in the full algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSplit {
    /// Component in `c`.
    pub u: AlgVec,
    /// Component in `c'`.
    pub v: AlgVec,
    /// Component in `r`.
    pub s: AlgVec,
    /// Component in `Jr`, i.e. `JT` for `T = -J(jt)` in `r`.
    pub jt: AlgVec,
}

impl AlphaSplit {
    /// The vector `T` in `r` with `JT = jt`.
    pub fn t(&self) -> AlgVec {
        -self.jt.j()
    }
}

/// Coordinates `g = Exp(bB + JT + W + yZ)` relative to the canonical embedding:
/// `t` holds the `dim_r` coefficients of `T` in `r`, `w` the interleaved complex
/// coordinates of `W` in `c'`. An empty `t` or `w` stands for zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructuredCoords {
    #[serde(default)]
    pub b: f64,
    #[serde(rename = "T", default)]
    pub t: Vec<f64>,
    #[serde(rename = "W", default)]
    pub w: Vec<f64>,
    #[serde(default)]
    pub y: f64,
}

/// Canonical embedded normal form of `spec`.
pub fn build_subalgebra(spec: &SubalgebraSpec) -> Result<Subspace> {
    spec.validate()?;
    let n = spec.n;
    let mut axes = Vec::with_capacity(spec.dim_h());
    if spec.kind.has_a() {
        axes.push(0);
    }
    for k in spec.c_coords() {
        axes.push(n.re_index(k));
        axes.push(n.im_index(k));
    }
    for k in spec.r_coords() {
        axes.push(n.re_index(k));
    }
    if spec.kind.has_z() {
        axes.push(n.z_index());
    }
    Ok(Subspace::coordinate_span(n, axes))
}
