//! Random sampling helpers for verification sweeps.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::classification::{Kind, SubalgebraSpec, UnitaryFrame};
use crate::lie::{AlgVec, GroupElement, ModelDim};

/// Deterministic per-trial generator: seed `seed ^ trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ trial)
}

/// Vector with i.i.d. standard normal coordinates.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, dim: ModelDim) -> AlgVec {
    let coords = (0..dim.real_dim())
        .map(|_| StandardNormal.sample(rng))
        .collect();
    AlgVec::from_flat_in(dim, coords).expect("length matches")
}

pub fn unit<R: Rng + ?Sized>(rng: &mut R, dim: ModelDim) -> AlgVec {
    loop {
        let v = gaussian(rng, dim);
        let n = v.norm();
        if n > 1e-3 {
            return v.scale(1.0 / n);
        }
    }
}

/// Vector with norm drawn uniformly from `[0, max_norm]`.
pub fn in_ball<R: Rng + ?Sized>(rng: &mut R, dim: ModelDim, max_norm: f64) -> AlgVec {
    let r = rng.random_range(0.0..=max_norm);
    unit(rng, dim).scale(r)
}

pub fn group_element<R: Rng + ?Sized>(rng: &mut R, dim: ModelDim, max_norm: f64) -> GroupElement {
    GroupElement::exp(in_ball(rng, dim, max_norm))
}

/// Standard normal vector of length `len`.
pub fn normal_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| StandardNormal.sample(rng)).collect()
}

/// Uniformly drawn valid spec of the given kind.
pub fn spec<R: Rng + ?Sized>(rng: &mut R, kind: Kind, dim: ModelDim) -> SubalgebraSpec {
    let cap = dim.alpha_complex_dim();
    loop {
        let c = rng.random_range(0..=cap);
        let r = rng.random_range(0..=cap);
        if let Ok(s) = SubalgebraSpec::new(kind, c, r, dim) {
            return s;
        }
    }
}

/// Random element of `h`.
pub fn in_subalgebra<R: Rng + ?Sized>(rng: &mut R, spec: &SubalgebraSpec, scale: f64) -> AlgVec {
    let h = crate::classification::build_subalgebra(spec).expect("valid spec");
    h.project(&gaussian(rng, spec.n)).scale(scale)
}

/// Random slice element `Y` in the CR part of `(a + n) - h`: all of it for kinds
/// R and CRZ, `(g_alpha - Cr) + g_2alpha` for AR and `Jr` for ACRZ.
pub fn cr_slice<R: Rng + ?Sized>(rng: &mut R, spec: &SubalgebraSpec, scale: f64) -> AlgVec {
    let v = gaussian(rng, spec.n).scale(scale);
    let parts = spec.split_alpha(&v);
    let mut y = match spec.kind {
        Kind::R | Kind::CRZ => &parts.v + &parts.jt,
        Kind::AR => parts.v.clone(),
        Kind::ACRZ => parts.jt.clone(),
    };
    if !spec.kind.has_a() {
        y.set_a(v.a());
    }
    if !spec.kind.has_z() {
        y.set_z(v.z());
    }
    y
}

/// `Exp(X_h) Exp(Y)` with random `X_h` in `h` and `Y` from [`cr_slice`].
pub fn cr_element<R: Rng + ?Sized>(rng: &mut R, spec: &SubalgebraSpec, scale: f64) -> GroupElement {
    let xh = in_subalgebra(rng, spec, scale);
    let y = cr_slice(rng, spec, scale);
    GroupElement::exp(xh).mul(&GroupElement::exp(y))
}

/// Random element of `K_0` acting on `g_alpha`, as a unitary frame.
pub fn unitary_frame<R: Rng + ?Sized>(rng: &mut R, dim: ModelDim) -> UnitaryFrame {
    let mut vectors: Vec<AlgVec> = Vec::new();
    while vectors.len() < dim.alpha_complex_dim() {
        let mut v = gaussian(rng, dim).alpha_part();
        for f in &vectors {
            v = v.axpy(-f.dot(&v), f).axpy(-f.j().dot(&v), &f.j());
        }
        let n = v.norm();
        if n > 1e-3 {
            vectors.push(v.scale(1.0 / n));
        }
    }
    UnitaryFrame::from_vectors(vectors).expect("Gram-Schmidt output is unitary")
}
