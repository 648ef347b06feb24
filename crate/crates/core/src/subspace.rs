//! Linear subspaces of `a + n` and the complex / totally real / CR / subalgebra
//! predicates.
//!
//! A [`Subspace`] always carries an orthonormal basis. Rank decisions use a
//! relative cutoff of [`tol::RANK`]; intersections are read off the spectrum
//! of `P_V P_W P_V`.

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::lie::{AlgVec, ModelDim};
use crate::tol;

/// An orthonormally spanned subspace of `a + n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subspace {
    n: ModelDim,
    basis: Vec<AlgVec>,
}

/// Splitting of a subspace into its maximal complex part and the orthogonal rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrDecomposition {
    pub complex_part: Subspace,
    pub real_part: Subspace,
    pub is_cr: bool,
}

impl Subspace {
    pub fn zero(dim: ModelDim) -> Self {
        Self {
            n: dim,
            basis: Vec::new(),
        }
    }

    pub fn full(dim: ModelDim) -> Self {
        Self {
            n: dim,
            basis: (0..dim.real_dim()).map(|i| AlgVec::unit(dim, i)).collect(),
        }
    }

    /// Span of flat coordinate axes, which are already orthonormal.
    pub fn coordinate_span(dim: ModelDim, axes: impl IntoIterator<Item = usize>) -> Self {
        Self {
            n: dim,
            basis: axes.into_iter().map(|i| AlgVec::unit(dim, i)).collect(),
        }
    }

    /// Wraps a basis that is already orthonormal, checking the Gram matrix.
    pub fn from_orthonormal(dim: ModelDim, basis: Vec<AlgVec>) -> Result<Self> {
        for v in &basis {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim.real_dim(),
                    found: v.dim().real_dim(),
                });
            }
        }
        let s = Self { n: dim, basis };
        let err = s.gram_error();
        if err > 1e-10 {
            return Err(Error::InvalidSpec(format!(
                "basis is not orthonormal (Gram error {err:.3e})"
            )));
        }
        Ok(s)
    }

    pub fn model_dim(&self) -> ModelDim {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[AlgVec] {
        &self.basis
    }

    /// Largest entry of `G - I` for the Gram matrix `G` of the basis.
    pub fn gram_error(&self) -> f64 {
        let mut err = 0.0_f64;
        for (i, u) in self.basis.iter().enumerate() {
            for (j, v) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((u.dot(v) - target).abs());
            }
        }
        err
    }

    /// Basis vectors as the columns of a `2n x d` matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        let rows = self.n.real_dim();
        DMatrix::from_fn(rows, self.dim(), |r, c| self.basis[c].as_slice()[r])
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> DMatrix<f64> {
        let q = self.matrix();
        &q * q.transpose()
    }

    pub fn project(&self, v: &AlgVec) -> AlgVec {
        self.basis
            .iter()
            .fold(AlgVec::zero(self.n), |acc, b| acc.axpy(b.dot(v), b))
    }

    /// Component of `v` orthogonal to the subspace.
    pub fn reject(&self, v: &AlgVec) -> AlgVec {
        v - &self.project(v)
    }

    /// Distance from `v` to the subspace.
    pub fn residual(&self, v: &AlgVec) -> f64 {
        self.reject(v).norm()
    }

    pub fn contains(&self, v: &AlgVec, tol: f64) -> bool {
        self.residual(v) <= tol * v.norm().max(1.0)
    }

    /// Frobenius distance between the orthogonal projectors.
    pub fn projector_distance(&self, other: &Self) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        (self.projector() - other.projector()).norm()
    }

    /// Equality as subspaces, up to `tol` in projector distance.
    pub fn same_as(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim() && self.projector_distance(other) <= tol
    }

    /// Image of the subspace under a linear map, re-orthonormalized.
    pub fn map<F: Fn(&AlgVec) -> AlgVec>(&self, f: F) -> Self {
        let images: Vec<AlgVec> = self.basis.iter().map(f).collect();
        orthonormalize_in(self.n, &images)
    }

    /// `J` applied to the subspace. The result is orthonormal without rework.
    pub fn j(&self) -> Self {
        Self {
            n: self.n,
            basis: self.basis.iter().map(AlgVec::j).collect(),
        }
    }

    /// Sum of two subspaces.
    pub fn sum(&self, other: &Self) -> Self {
        let all: Vec<AlgVec> = self.basis.iter().chain(&other.basis).cloned().collect();
        orthonormalize_in(self.n, &all)
    }

    /// Span of `self` together with extra vectors.
    pub fn extend(&self, extra: &[AlgVec]) -> Self {
        let all: Vec<AlgVec> = self.basis.iter().chain(extra).cloned().collect();
        orthonormalize_in(self.n, &all)
    }

    /// `self` minus `other`, i.e. `self` intersected with the complement of `other`.
    pub fn minus(&self, other: &Self) -> Self {
        let rejected: Vec<AlgVec> = self.basis.iter().map(|b| other.reject(b)).collect();
        orthonormalize_against(self.n, &rejected, 1.0)
    }

    /// Cosines of the principal angles to `other`, in descending order.
    pub fn principal_cosines(&self, other: &Self) -> Vec<f64> {
        if self.is_zero() || other.is_zero() {
            return Vec::new();
        }
        let c = self.matrix().transpose() * other.matrix();
        let mut s: Vec<f64> = c
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: Option<ModelDim>,
            basis: Vec<AlgVec>,
        }
        let raw = Raw::deserialize(d)?;
        let n = match (raw.n, raw.basis.first()) {
            (Some(n), _) => n,
            (None, Some(v)) => v.dim(),
            (None, None) => {
                return Err(serde::de::Error::custom(
                    "an empty basis needs an explicit \"n\"",
                ))
            }
        };
        Subspace::from_orthonormal(n, raw.basis).map_err(serde::de::Error::custom)
    }
}

fn check_dims(dim: ModelDim, vectors: &[AlgVec]) -> Result<()> {
    match vectors.iter().find(|v| v.dim() != dim) {
        Some(v) => Err(Error::DimensionMismatch {
            expected: dim.real_dim(),
            found: v.dim().real_dim(),
        }),
        None => Ok(()),
    }
}

/// Orthonormal basis of the span of `vectors`.
///
/// Rank is decided by singular values above `1e-8` times the largest one.
pub fn orthonormalize(dim: ModelDim, vectors: &[AlgVec]) -> Result<Subspace> {
    check_dims(dim, vectors)?;
    Ok(orthonormalize_in(dim, vectors))
}

pub(crate) fn orthonormalize_in(dim: ModelDim, vectors: &[AlgVec]) -> Subspace {
    orthonormalize_against(dim, vectors, 0.0)
}

/// Like [`orthonormalize`], with the cutoff taken relative to
/// `max(largest input norm, reference)`.
///
/// Gram-Schmidt with column pivoting and a second orthogonalization pass.
fn orthonormalize_against(dim: ModelDim, vectors: &[AlgVec], reference: f64) -> Subspace {
    let scale = vectors.iter().map(AlgVec::norm).fold(reference, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return Subspace::zero(dim);
    }
    let cut = tol::RANK * scale;
    let mut rest: Vec<AlgVec> = vectors.to_vec();
    let mut basis: Vec<AlgVec> = Vec::new();
    while !rest.is_empty() && basis.len() < dim.real_dim() {
        let (pos, norm) =
            rest.iter()
                .map(AlgVec::norm)
                .enumerate()
                .fold(
                    (0, -1.0),
                    |best, (i, n)| if n > best.1 { (i, n) } else { best },
                );
        if norm <= cut {
            break;
        }
        let mut q = rest.swap_remove(pos).scale(1.0 / norm);
        for b in &basis {
            q = q.axpy(-b.dot(&q), b);
        }
        q = q.scale(1.0 / q.norm());
        for v in rest.iter_mut() {
            *v = v.axpy(-q.dot(v), &q);
        }
        basis.push(q);
    }
    Subspace { n: dim, basis }
}

fn column(m: &DMatrix<f64>, c: usize, dim: ModelDim) -> AlgVec {
    AlgVec::from_flat_in(dim, m.column(c).iter().copied().collect()).expect("column length")
}

/// Rank of a set of vectors, by an independent route (column-pivoted QR).
///
/// Used to cross-check [`orthonormalize`].
pub fn pivoted_rank(vectors: &[AlgVec]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let m = DMatrix::from_fn(first.dim().real_dim(), vectors.len(), |i, j| {
        vectors[j].as_slice()[i]
    });
    let r = m.col_piv_qr().unpack_r();
    let diag: Vec<f64> = (0..r.nrows().min(r.ncols()))
        .map(|i| r[(i, i)].abs())
        .collect();
    let top = diag.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    diag.iter().filter(|d| **d > tol::RANK * top).count()
}

/// Orthogonal complement within `a + n`.
pub fn orth_complement(v: &Subspace) -> Subspace {
    let dim = v.model_dim();
    let comp = DMatrix::identity(dim.real_dim(), dim.real_dim()) - v.projector();
    let eig = comp.symmetric_eigen();
    let basis: Vec<AlgVec> = (0..dim.real_dim())
        .filter(|&i| eig.eigenvalues[i] > 0.5)
        .map(|i| column(&eig.eigenvectors, i, dim))
        .collect();
    // Re-orthonormalize to strip the small eigen-solver drift.
    orthonormalize_in(dim, &basis)
}

/// `V` intersected with `W`: eigenvectors of `P_V P_W P_V` with eigenvalue
/// above `1 - 1e-8`.
pub fn intersection(v: &Subspace, w: &Subspace) -> Subspace {
    let dim = v.model_dim();
    if v.is_zero() || w.is_zero() {
        return Subspace::zero(dim);
    }
    let pv = v.projector();
    let m = &pv * w.projector() * &pv;
    let sym = (&m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let basis: Vec<AlgVec> = (0..dim.real_dim())
        .filter(|&i| eig.eigenvalues[i] > 1.0 - tol::INTERSECTION)
        .map(|i| v.project(&column(&eig.eigenvectors, i, dim)))
        .collect();
    orthonormalize_in(dim, &basis)
}

/// The maximal complex subspace `V ∩ JV`.
pub fn maximal_complex_subspace(v: &Subspace) -> Subspace {
    intersection(v, &v.j())
}

/// Largest `|<J b_i, b_j>|` over the basis.
pub fn totally_real_defect(v: &Subspace) -> f64 {
    let mut m = 0.0_f64;
    for bi in v.basis() {
        let jb = bi.j();
        for bj in v.basis() {
            m = m.max(jb.dot(bj).abs());
        }
    }
    m
}

/// `JV ⊥ V`.
pub fn is_totally_real(v: &Subspace) -> bool {
    totally_real_defect(v) <= tol::TOTALLY_REAL
}

/// `JV = V`.
pub fn is_complex(v: &Subspace) -> bool {
    v.projector_distance(&v.j()) <= tol::COMPLEX
}

pub fn cr_decompose(v: &Subspace) -> CrDecomposition {
    let complex_part = maximal_complex_subspace(v);
    let real_part = v.minus(&complex_part);
    let is_cr = is_totally_real(&real_part);
    CrDecomposition {
        complex_part,
        real_part,
        is_cr,
    }
}

/// Largest `|(I - P_V)[b_i, b_j]|` over basis pairs.
pub fn subalgebra_residual(v: &Subspace) -> f64 {
    let b = v.basis();
    let mut m = 0.0_f64;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            m = m.max(v.residual(&b[i].bracket(&b[j])));
        }
    }
    m
}

pub fn is_subalgebra(v: &Subspace) -> bool {
    subalgebra_residual(v) <= tol::SUBALGEBRA
}

/// The root-space pieces `a`, `g_alpha`, `g_2alpha` and `n` as subspaces.
pub mod root_spaces {
    use super::Subspace;
    use crate::lie::ModelDim;

    pub fn a(dim: ModelDim) -> Subspace {
        Subspace::coordinate_span(dim, [0])
    }

    pub fn g_alpha(dim: ModelDim) -> Subspace {
        Subspace::coordinate_span(dim, 1..dim.z_index())
    }

    pub fn g_2alpha(dim: ModelDim) -> Subspace {
        Subspace::coordinate_span(dim, [dim.z_index()])
    }

    /// `a + g_2alpha`, the target of the projection used in normalization.
    pub fn a_plus_center(dim: ModelDim) -> Subspace {
        Subspace::coordinate_span(dim, [0, dim.z_index()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: usize) -> ModelDim {
        ModelDim::new(n).unwrap()
    }

    fn span(d: ModelDim, v: &[AlgVec]) -> Subspace {
        orthonormalize(d, v).unwrap()
    }

    #[test]
    fn orthonormalize_collinear_and_empty() {
        let d = dim(2);
        let b = AlgVec::b(d);
        assert_eq!(span(d, &[b.clone(), b.scale(2.0)]).dim(), 1);
        assert_eq!(span(d, &[b, AlgVec::z_unit(d)]).dim(), 2);
        assert!(span(d, &[]).is_zero());
        assert!(span(d, &[AlgVec::zero(d)]).is_zero());
    }

    #[test]
    fn orthonormalize_rejects_mixed_dims() {
        assert!(orthonormalize(dim(2), &[AlgVec::zero(dim(3))]).is_err());
    }

    #[test]
    fn complement_basics() {
        let d = dim(3);
        assert_eq!(orth_complement(&Subspace::zero(d)).dim(), 6);
        let c = orth_complement(&root_spaces::a(d));
        assert_eq!(c.dim(), 5);
        assert!(c.contains(&AlgVec::z_unit(d), 1e-12));
        for i in 1..d.z_index() {
            assert!(c.contains(&AlgVec::unit(d, i), 1e-12));
        }
    }

    #[test]
    fn maximal_complex_examples() {
        let d = dim(3);
        let b = AlgVec::b(d);
        let z = AlgVec::z_unit(d);
        let u = AlgVec::unit(d, d.re_index(0));

        let ga = root_spaces::g_alpha(d);
        assert!(maximal_complex_subspace(&ga).same_as(&ga, 1e-10));

        assert!(maximal_complex_subspace(&span(d, &[b.clone(), u.clone()])).is_zero());

        let m = maximal_complex_subspace(&span(d, &[b.clone(), z.clone(), u]));
        assert!(m.same_as(&span(d, &[b, z]), 1e-10));
    }

    #[test]
    fn totally_real_and_complex_examples() {
        let d = dim(2);
        let b = AlgVec::b(d);
        let z = AlgVec::z_unit(d);
        assert!(is_totally_real(&span(d, &[b.clone()])));
        assert!(!is_totally_real(&span(d, &[b.clone(), z.clone()])));
        assert!(is_complex(&span(d, &[b.clone(), z.clone()])));
        assert!(!is_complex(&span(d, &[b.clone()])));

        let x = AlgVec::from_parts(d, 0.0, &[0.4, -1.1], 0.0).unwrap();
        let v = span(d, &[&b + &x, &z + &x.j()]);
        assert!(is_complex(&v));
    }

    #[test]
    fn cr_decompose_lines_and_complex() {
        let d = dim(3);
        let line = span(
            d,
            &[AlgVec::from_parts(d, 0.3, &[1.0, 2.0, -1.0, 0.5], 0.7).unwrap()],
        );
        let dec = cr_decompose(&line);
        assert!(dec.is_cr);
        assert!(dec.complex_part.is_zero());
        assert_eq!(dec.real_part.dim(), 1);

        let ga = root_spaces::g_alpha(d);
        let dec = cr_decompose(&ga);
        assert!(dec.is_cr);
        assert!(dec.real_part.is_zero());
        assert_eq!(dec.complex_part.dim(), 4);
    }

    #[test]
    fn subalgebra_examples() {
        let d = dim(2);
        let u = AlgVec::unit(d, d.re_index(0));
        assert!(is_subalgebra(&root_spaces::g_2alpha(d)));
        assert!(is_subalgebra(&span(d, &[AlgVec::b(d), u.clone()])));
        assert!(!is_subalgebra(&span(d, &[u.clone(), u.j()])));
    }

    #[test]
    fn subspace_json_roundtrip() {
        let d = dim(2);
        let s = span(d, &[AlgVec::b(d), AlgVec::z_unit(d)]);
        let text = serde_json::to_string(&s).unwrap();
        let back: Subspace = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<Subspace>(r#"{"basis":[[1,1,0,0]]}"#).is_err());
        assert!(serde_json::from_str::<Subspace>(r#"{"basis":[]}"#).is_err());
        let z: Subspace = serde_json::from_str(r#"{"n":2,"basis":[]}"#).unwrap();
        assert!(z.is_zero());
    }
}
