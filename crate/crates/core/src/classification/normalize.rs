//! Conjugation of an arbitrary subalgebra with a CR orbit through `o` into
//! normal form.
//!
//! The case analysis follows the projection `pi` onto `a + g_2alpha`. With
//! `w = h ∩ g_alpha`, the rank of `pi(h)` is `dim h - dim w`:
//!
//! * rank 0: `h = w` is totally real, no conjugation needed;
//! * rank 1: `h = R(aB + X + xZ) + w`, conjugated by `Exp((2/a)X + (x/a)Z)` when
//!   `a != 0` and by `Exp((x/|X|^2) JX)` when `a = 0`, `X != 0`;
//! * rank 2: `h = R(B + X) + w + R(Y + Z)`, where only `Y = 0` can occur, and
//!   `Exp(2X)` does the job.
//!
//! The resulting `b + c + r + z` is then aligned with the canonical embedding by
//! a [`UnitaryFrame`], an element of `K_0` that fixes `B` and `Z`.

use serde::Serialize;

use super::spec::{build_subalgebra, Kind, SubalgebraSpec};
use crate::error::{Error, Result};
use crate::lie::{AlgVec, GroupElement, ModelDim};
use crate::subspace::{
    cr_decompose, intersection, is_totally_real, orthonormalize, root_spaces, subalgebra_residual,
    Subspace,
};
use crate::tol;

/// A unitary frame `f_0, ..., f_{n-2}` of `g_alpha`. As a map it sends `f_k` to
/// the `k`-th real axis and `J f_k` to the `k`-th imaginary axis, fixing `B`
/// and `Z`. It commutes with `J` and is a Lie algebra automorphism.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitaryFrame {
    vectors: Vec<AlgVec>,
}

impl UnitaryFrame {
    pub fn identity(dim: ModelDim) -> Self {
        Self {
            vectors: (0..dim.alpha_complex_dim())
                .map(|k| AlgVec::unit(dim, dim.re_index(k)))
                .collect(),
        }
    }

    /// Frame listing a unitary basis of `c`, then an orthonormal basis of `r`,
    /// then a unitary basis of the rest of `g_alpha`.
    pub fn adapted(c: &Subspace, r: &Subspace) -> Self {
        let dim = c.model_dim();
        let mut vectors = unitary_basis(c);
        vectors.extend(r.basis().iter().cloned());
        let taken = orthonormalize(
            dim,
            &vectors
                .iter()
                .flat_map(|f| [f.clone(), f.j()])
                .collect::<Vec<_>>(),
        )
        .expect("same model");
        let rest = root_spaces::g_alpha(dim).minus(&taken);
        vectors.extend(unitary_basis(&rest));
        Self { vectors }
    }

    /// Frame from `n - 1` vectors of `g_alpha` forming a unitary basis.
    pub fn from_vectors(vectors: Vec<AlgVec>) -> Result<Self> {
        let dim = match vectors.first() {
            Some(v) => v.dim(),
            None => {
                return Err(Error::InvalidSpec(
                    "a frame needs at least one vector".into(),
                ))
            }
        };
        if vectors.len() != dim.alpha_complex_dim() {
            return Err(Error::DimensionMismatch {
                expected: dim.alpha_complex_dim(),
                found: vectors.len(),
            });
        }
        let mut worst = 0.0_f64;
        for (i, f) in vectors.iter().enumerate() {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim.real_dim(),
                    found: f.dim().real_dim(),
                });
            }
            worst = worst.max(f.a().abs()).max(f.z().abs());
            for (j, e) in vectors.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((f.dot(e) - want).abs()).max(f.j().dot(e).abs());
            }
        }
        if worst > 1e-10 {
            return Err(Error::InvalidSpec(format!(
                "frame vectors are not unitary in g_alpha (defect {worst:.3e})"
            )));
        }
        Ok(Self { vectors })
    }

    pub fn model_dim(&self) -> ModelDim {
        self.vectors
            .first()
            .map(AlgVec::dim)
            .expect("frames exist only for n >= 2")
    }

    pub fn vectors(&self) -> &[AlgVec] {
        &self.vectors
    }

    pub fn apply(&self, v: &AlgVec) -> AlgVec {
        let dim = v.dim();
        let mut out = vec![0.0; dim.real_dim()];
        out[0] = v.a();
        out[dim.z_index()] = v.z();
        for (k, f) in self.vectors.iter().enumerate() {
            out[dim.re_index(k)] = f.dot(v);
            out[dim.im_index(k)] = f.j().dot(v);
        }
        AlgVec::from_flat_in(dim, out).expect("length")
    }

    pub fn apply_inverse(&self, v: &AlgVec) -> AlgVec {
        let dim = v.dim();
        let s = v.as_slice();
        let mut out = AlgVec::zero(dim);
        out.set_a(v.a());
        out.set_z(v.z());
        for (k, f) in self.vectors.iter().enumerate() {
            out = out
                .axpy(s[dim.re_index(k)], f)
                .axpy(s[dim.im_index(k)], &f.j());
        }
        out
    }

    pub fn apply_subspace(&self, v: &Subspace) -> Subspace {
        v.map(|x| self.apply(x))
    }

    pub fn apply_inverse_subspace(&self, v: &Subspace) -> Subspace {
        v.map(|x| self.apply_inverse(x))
    }

    /// Conjugation `k g k^{-1}` of a group element by the frame.
    pub fn conjugate(&self, g: &GroupElement) -> GroupElement {
        GroupElement::exp(self.apply(&g.xi))
    }
}

/// Greedy unitary basis of a complex subspace: pick a unit vector, remove its
/// complex line, repeat.
fn unitary_basis(v: &Subspace) -> Vec<AlgVec> {
    let mut out = Vec::new();
    let mut rest = v.clone();
    while !rest.is_zero() {
        let u = rest.basis()[0].clone();
        let line = orthonormalize(v.model_dim(), &[u.clone(), u.j()]).expect("same model");
        let next = rest.minus(&line);
        out.push(u);
        if next.dim() + 2 != rest.dim() {
            break;
        }
        rest = next;
    }
    out
}

/// Outcome of the normalization: `Ad(g) h = frame^{-1}(build_subalgebra(spec))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Normalization {
    pub g: GroupElement,
    pub spec: SubalgebraSpec,
    /// `Ad(g) h`, before alignment.
    pub normal_form: Subspace,
    pub complex_part: Subspace,
    pub real_part: Subspace,
    pub frame: UnitaryFrame,
}

impl Normalization {
    /// The canonical element `g'` with `H g(o)` congruent to `H' g'(o)`, where
    /// `H'` is the canonical normal form: `g' = k (g0 g) k^{-1}`.
    pub fn transport(&self, g: &GroupElement) -> GroupElement {
        self.frame.conjugate(&self.g.mul(g))
    }

    /// Inverse of [`Normalization::transport`]: `g = g0^{-1} k^{-1} g' k`.
    pub fn transport_inverse(&self, g_canon: &GroupElement) -> GroupElement {
        let back = GroupElement::exp(self.frame.apply_inverse(&g_canon.xi));
        self.g.inverse().mul(&back)
    }
}

/// Conjugates `h` into normal form.
pub fn prop31_normalize(h: &Subspace) -> Result<Normalization> {
    let dim = h.model_dim();
    let residual = subalgebra_residual(h);
    if residual > tol::SUBALGEBRA {
        return Err(Error::NotSubalgebra { residual });
    }
    if h.is_zero() {
        return Err(Error::Unsupported(
            "the zero subalgebra has a point orbit".into(),
        ));
    }
    let dec = cr_decompose(h);
    if !dec.is_cr {
        return Err(Error::NotCr(
            "h minus its maximal complex subspace is not totally real".into(),
        ));
    }
    let w = intersection(h, &root_spaces::g_alpha(dim));
    let rest = h.minus(&w);
    let (g, kind, c, r) = match rest.dim() {
        0 => {
            expect_totally_real(&w, "h inside g_alpha")?;
            (GroupElement::identity(dim), Kind::R, Subspace::zero(dim), w)
        }
        1 => rank_one(dim, &w, &rest.basis()[0])?,
        2 => rank_two(&w, &rest)?,
        k => {
            return Err(Error::Inconsistent(format!(
                "projection onto a + g_2alpha has rank {k}"
            )))
        }
    };
    let spec = SubalgebraSpec::new(kind, c.dim() / 2, r.dim(), dim).map_err(|e| match e {
        Error::InvalidSpec(msg) => Error::Unsupported(msg),
        other => other,
    })?;
    let normal_form = h.map(|v| g.ad(v));
    let frame = UnitaryFrame::adapted(&c, &r);
    let canonical = build_subalgebra(&spec)?;
    let aligned = frame.apply_subspace(&normal_form);
    let dist = aligned.projector_distance(&canonical);
    if dist > 1e-8 {
        return Err(Error::Inconsistent(format!(
            "normal form misses the canonical embedding by {dist:.3e}"
        )));
    }
    Ok(Normalization {
        g,
        spec,
        normal_form,
        complex_part: c,
        real_part: r,
        frame,
    })
}

type Case = (GroupElement, Kind, Subspace, Subspace);

fn rank_one(dim: ModelDim, w: &Subspace, xi: &AlgVec) -> Result<Case> {
    let a = xi.a();
    let x = xi.z();
    let big_x = xi.alpha_part();
    if a.abs() <= tol::NONZERO && big_x.norm() <= tol::RANK {
        let c = intersection(w, &w.j());
        let r = w.minus(&c);
        expect_totally_real(&r, "r")?;
        return Ok((GroupElement::identity(dim), Kind::CRZ, c, r));
    }
    expect_totally_real(w, "w")?;
    if a.abs() > tol::NONZERO {
        let mut gen = big_x.scale(2.0 / a);
        gen.set_z(x / a);
        Ok((
            GroupElement::exp(gen),
            Kind::AR,
            Subspace::zero(dim),
            w.clone(),
        ))
    } else {
        let gen = big_x.j().scale(x / big_x.norm_sq());
        let r = w.extend(std::slice::from_ref(&big_x));
        expect_totally_real(&r, "R X + w")?;
        Ok((GroupElement::exp(gen), Kind::R, Subspace::zero(dim), r))
    }
}

fn rank_two(w: &Subspace, rest: &Subspace) -> Result<Case> {
    let (v1, v2) = (&rest.basis()[0], &rest.basis()[1]);
    let det = v1.a() * v2.z() - v2.a() * v1.z();
    if det.abs() <= tol::NONZERO {
        return Err(Error::Inconsistent(
            "rank-two projection with singular coefficient matrix".into(),
        ));
    }
    // B + X and Y + Z inside h - w
    let b_plus_x = v1.scale(v2.z() / det).axpy(-v1.z() / det, v2);
    let y_plus_z = v1.scale(-v2.a() / det).axpy(v1.a() / det, v2);
    let y = y_plus_z.alpha_part();
    if y.norm() > tol::RANK {
        return Err(Error::Inconsistent(format!(
            "h contains Y + Z with |Y| = {:.3e}; impossible for a CR orbit",
            y.norm()
        )));
    }
    let g = GroupElement::exp(b_plus_x.alpha_part().scale(2.0));
    let c = intersection(w, &w.j());
    let r = w.minus(&c);
    expect_totally_real(&r, "w minus its complex part")?;
    Ok((g, Kind::ACRZ, c, r))
}

fn expect_totally_real(v: &Subspace, what: &str) -> Result<()> {
    if is_totally_real(v) {
        Ok(())
    } else {
        Err(Error::Inconsistent(format!("{what} is not totally real")))
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
    fn normal_forms_are_fixed() {
        for n in 2..=5 {
            let d = dim(n);
            for kind in Kind::ALL {
                for c in 0..n {
                    for r in 0..n {
                        let Ok(spec) = SubalgebraSpec::new(kind, c, r, d) else {
                            continue;
                        };
                        let h = build_subalgebra(&spec).unwrap();
                        let norm = prop31_normalize(&h).unwrap();
                        assert_eq!(norm.spec, spec);
                        assert!(norm.g.xi.norm() < 1e-14, "{spec:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn a_plus_x_line() {
        let d = dim(3);
        let x = AlgVec::unit(d, d.re_index(1));
        let h = span(d, &[&AlgVec::b(d) + &x]);
        let norm = prop31_normalize(&h).unwrap();
        assert!(norm.g.xi.approx_eq(&x.scale(2.0), 1e-14));
        assert_eq!(norm.spec.kind, Kind::AR);
        assert_eq!(norm.spec.dim_r, 0);
        assert!(norm.normal_form.same_as(&root_spaces::a(d), 1e-12));
    }

    #[test]
    fn heisenberg_line() {
        let d = dim(2);
        let x = AlgVec::unit(d, d.re_index(0));
        let h = span(d, &[&x + &AlgVec::z_unit(d)]);
        let norm = prop31_normalize(&h).unwrap();
        assert!(norm.g.xi.approx_eq(&x.j(), 1e-14));
        assert_eq!(norm.spec.kind, Kind::R);
        assert!(norm.normal_form.same_as(&span(d, &[x]), 1e-12));
    }

    #[test]
    fn rejects_bad_inputs() {
        let d = dim(3);
        let u = AlgVec::unit(d, d.re_index(0));
        assert!(matches!(
            prop31_normalize(&span(d, &[u.clone(), u.j()])),
            Err(Error::NotSubalgebra { .. })
        ));
        assert!(matches!(
            prop31_normalize(&Subspace::zero(d)),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            prop31_normalize(&Subspace::full(d)),
            Err(Error::Unsupported(_))
        ));
        // span{B, Z} has a complex orbit through o
        let bz = span(d, &[AlgVec::b(d), AlgVec::z_unit(d)]);
        let norm = prop31_normalize(&bz).unwrap();
        assert_eq!(norm.spec.kind, Kind::ACRZ);
    }

    #[test]
    fn transport_round_trips() {
        let d = dim(3);
        let spec = SubalgebraSpec::new(Kind::AR, 0, 1, d).unwrap();
        let g0 =
            GroupElement::exp(AlgVec::from_parts(d, 0.3, &[0.2, 0.0, -0.4, 0.6], 0.5).unwrap());
        let h = build_subalgebra(&spec).unwrap().map(|v| g0.inverse().ad(v));
        let norm = prop31_normalize(&h).unwrap();
        let g =
            GroupElement::exp(AlgVec::from_parts(d, -0.7, &[0.1, 0.9, 0.3, -0.2], 1.2).unwrap());
        assert!(norm
            .transport_inverse(&norm.transport(&g))
            .xi
            .approx_eq(&g.xi, 1e-12));
    }

    #[test]
    fn frame_is_an_automorphism() {
        let d = dim(4);
        let c = span(
            d,
            &[AlgVec::from_parts(d, 0.0, &[0.6, 0.0, 0.0, 0.8, 0.0, 0.0], 0.0).unwrap()],
        );
        let c = c.extend(&[c.basis()[0].j()]);
        let r = span(
            d,
            &[AlgVec::from_parts(d, 0.0, &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0], 0.0).unwrap()],
        );
        let f = UnitaryFrame::adapted(&c, &r);
        let x = AlgVec::from_parts(d, 0.3, &[0.1, -0.5, 0.7, 0.2, -0.9, 0.4], 1.1).unwrap();
        let y = AlgVec::from_parts(d, -0.2, &[0.8, 0.3, -0.1, 0.6, 0.5, -0.7], 0.4).unwrap();
        assert!(f
            .apply(&x.bracket(&y))
            .approx_eq(&f.apply(&x).bracket(&f.apply(&y)), 1e-14));
        assert!(f.apply(&x.j()).approx_eq(&f.apply(&x).j(), 1e-14));
        assert!(f.apply_inverse(&f.apply(&x)).approx_eq(&x, 1e-14));
        assert!((f.apply(&x).norm() - x.norm()).abs() < 1e-14);
    }
}
