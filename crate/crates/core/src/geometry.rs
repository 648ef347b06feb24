//! Levi-Civita connection of the left-invariant metric, curvature, and the
//! extrinsic geometry of subgroup orbits.
//!
//! Orbits are studied at the base point `o` through the pulled-back tangent
//! space `Ad(g^{-1}) h`, which is again a subalgebra. For left-invariant fields
//! tangent to a subgroup orbit the second fundamental form is the normal part
//! of the connection, so everything reduces to linear algebra on `a + n`.

use serde::{Deserialize, Serialize};

use crate::classification::{slice_reduce, Kind, SubalgebraSpec};
use crate::error::{Error, Result};
use crate::lie::{rho, AlgVec, GroupElement};
use crate::subspace::{subalgebra_residual, Subspace};
use crate::tol;

/// Squared norms of the mean curvature and second fundamental form of an
/// orbit, together with the mean curvature vector at `o`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrinsicInvariants {
    pub mean_sq: f64,
    pub second_fundamental_sq: f64,
    #[serde(rename = "mean_vector")]
    pub mean_curvature_vector: AlgVec,
}

/// Closed-form counterpart of [`ExtrinsicInvariants`]. `second_fundamental_sq`
/// is only known in closed form for kind `AR`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormInvariants {
    pub mean_sq: f64,
    pub second_fundamental_sq: Option<f64>,
    pub mean_vector: AlgVec,
}

/// `nabla_x y` for left-invariant fields:
/// `(<U,V>/2 + xy) B - (bU + yJU + xJV)/2 + (<JU,V>/2 - bx) Z`
/// for `x = aB + U + xZ`, `y = bB + V + yZ`.
pub fn levi_civita(x: &AlgVec, y: &AlgVec) -> AlgVec {
    assert_eq!(x.dim(), y.dim(), "connection across different models");
    let u = x.alpha_part();
    let v = y.alpha_part();
    let (xz, b, yz) = (x.z(), y.a(), y.z());
    let mut out = u
        .scale(-0.5 * b)
        .axpy(-0.5 * yz, &u.j())
        .axpy(-0.5 * xz, &v.j());
    out.set_a(0.5 * u.dot(&v) + xz * yz);
    out.set_z(0.5 * u.omega_alpha(&v) - b * xz);
    out
}

/// Connection reconstructed from the Koszul formula for left-invariant fields,
/// `2<nabla_x y, e> = <[x,y],e> - <[y,e],x> + <[e,x],y>`, using only the bracket
/// and the metric.
pub fn koszul_oracle(x: &AlgVec, y: &AlgVec) -> AlgVec {
    let n = x.dim();
    let xy = x.bracket(y);
    let coords = (0..n.real_dim())
        .map(|k| {
            let e = AlgVec::unit(n, k);
            0.5 * (xy.dot(&e) - y.bracket(&e).dot(x) + e.bracket(x).dot(y))
        })
        .collect();
    AlgVec::from_flat_in(n, coords).expect("length")
}

/// `R(x,y)w = nabla_x nabla_y w - nabla_y nabla_x w - nabla_[x,y] w`.
pub fn curvature(x: &AlgVec, y: &AlgVec, w: &AlgVec) -> AlgVec {
    let a = levi_civita(x, &levi_civita(y, w));
    let b = levi_civita(y, &levi_civita(x, w));
    let c = levi_civita(&x.bracket(y), w);
    &(&a - &b) - &c
}

/// `<R(x,Jx)Jx, x>` for a unit vector `x`.
pub fn holomorphic_sectional_curvature(x: &AlgVec) -> f64 {
    let jx = x.j();
    curvature(x, &jx, &jx).dot(x) / x.norm_sq().powi(2)
}

/// Second fundamental form data of the orbit through `o` of the subgroup with
/// Lie algebra `tangent`.
pub fn orbit_invariants(tangent: &Subspace) -> Result<ExtrinsicInvariants> {
    let residual = subalgebra_residual(tangent);
    if residual > tol::SUBALGEBRA {
        return Err(Error::NotSubalgebra { residual });
    }
    let e = tangent.basis();
    let second = |i: usize, j: usize| tangent.reject(&levi_civita(&e[i], &e[j]));
    let mut mean = AlgVec::zero(tangent.model_dim());
    let mut ii_sq = 0.0;
    for i in 0..e.len() {
        let diag = second(i, i);
        ii_sq += diag.norm_sq();
        mean += &diag;
        for j in i + 1..e.len() {
            // II is symmetric on a subalgebra; count both orderings.
            ii_sq += 2.0 * second(i, j).norm_sq();
        }
    }
    Ok(ExtrinsicInvariants {
        mean_sq: mean.norm_sq(),
        second_fundamental_sq: ii_sq,
        mean_curvature_vector: mean,
    })
}

/// How the kind-`R` displacement `(b, ||T||)` of `Exp(bB + JT + W + yZ)` is
/// reduced to the norm of an equivalent `Exp(J T~)`.
///
/// The orbit through `g(o)` has tangent `Ad(g^{-1}) h`, and
/// `Ad(Exp(-bB - JT - W - yZ)) r = Ad(Exp(-rho(-b/2) JT)) r`, so the reduced
/// norm is `rho(-b/2) ||T|| = e^{-b/2} rho(b/2) ||T||`. This choice is checked
/// against the mean-curvature inversion oracle in
/// [`crate::congruence::displacement_oracle`].
pub fn reduced_displacement(b: f64, t_norm: f64) -> f64 {
    rho(-b / 2.0) * t_norm
}

/// Mean curvature squared of the kind-`R` orbit through `Exp(JT)(o)` as a
/// function of `t = ||T||^2`: `(4t + (r + (r+1)t)^2) / (4(1+t)^2)`.
pub fn h_profile(t: f64, r: usize) -> f64 {
    let r = r as f64;
    let s = r + (r + 1.0) * t;
    (4.0 * t + s * s) / (4.0 * (1.0 + t) * (1.0 + t))
}

/// Derivative `h'(t) = (2 + r + (r-1)t) / (2(1+t)^3)`.
pub fn h_profile_derivative(t: f64, r: usize) -> f64 {
    let r = r as f64;
    (2.0 + r + (r - 1.0) * t) / (2.0 * (1.0 + t).powi(3))
}

/// Closed forms for kind `AR` at `Exp(2W + yZ)`:
/// returns `(||H||^2, ||II||^2)`.
pub fn ar_closed_forms(w_norm: f64, y: f64, r: usize) -> (f64, f64) {
    let r = r as f64;
    let w2 = w_norm * w_norm;
    let y2 = y * y;
    let d = 1.0 + y2 + w2;
    let den = 4.0 * d * d;
    let mean = ((1.0 + r).powi(2) * w2 * w2
        + (2.0 + r).powi(2) * y2 * (1.0 + y2)
        + w2 * (1.0 + 8.0 * y2 + r * r * (1.0 + 2.0 * y2) + 2.0 * r * (1.0 + 3.0 * y2)))
        / den;
    let second = ((1.0 + r) * w2 * w2
        + (4.0 + 3.0 * r) * y2 * (1.0 + y2)
        + w2 * (1.0 + r + 4.0 * y2 * (2.0 + r)))
        / den;
    (mean, second)
}

/// The two combinations `(||H||^2 - ||II||^2, (r+1)||II||^2 - ||H||^2)` for kind
/// `AR`, evaluated from their own closed forms.
pub fn corollary_invariants(spec: &SubalgebraSpec, w_norm: f64, y: f64) -> Result<(f64, f64)> {
    if spec.kind != Kind::AR {
        return Err(Error::Unsupported(format!(
            "corollary invariants are defined for kind AR, not {}",
            spec.kind
        )));
    }
    let r = spec.dim_r as f64;
    let w2 = w_norm * w_norm;
    let y2 = y * y;
    let d = 1.0 + y2 + w2;
    let first = r * (1.0 + r) * (y2 + w2) / (4.0 * d);
    let second = r * y2 * ((3.0 + 2.0 * r) * (1.0 + y2) + 2.0 * (3.0 + r) * w2) / (4.0 * d * d);
    Ok((first, second))
}

/// Frame `X, xi_1, xi_2` for kind `AR` at `Exp(2W + yZ)`: the unit tangent
/// direction and the two unit normals built from `B`, `W`, `Z`.
pub fn ar_frame(w: &AlgVec, y: f64) -> (AlgVec, AlgVec, Option<AlgVec>) {
    let n = w.dim();
    let b = AlgVec::b(n);
    let z = AlgVec::z_unit(n);
    let w2 = w.norm_sq();
    let d = 1.0 + y * y + w2;
    let x = (&b + w).axpy(y, &z).scale(1.0 / d.sqrt());
    let xi1 = z.axpy(-y, &b).scale(1.0 / (1.0 + y * y).sqrt());
    let xi2 = (w2 > 0.0).then(|| {
        let num = b.scale(w2).axpy(-(1.0 + y * y), w).axpy(y * w2, &z);
        num.scale(1.0 / (w2.sqrt() * ((1.0 + y * y) * d).sqrt()))
    });
    (x, xi1, xi2)
}

/// Closed-form invariants of the CR orbit `H g(o)` for the canonical normal
/// form `spec`. `g` is first reduced to the normal slice.
pub fn closed_form_invariants(
    spec: &SubalgebraSpec,
    g: &GroupElement,
) -> Result<ClosedFormInvariants> {
    let n = spec.n;
    let y_vec = slice_reduce(spec, g)?.slice.xi;
    let parts = spec.split_alpha(&y_vec);
    let b_unit = AlgVec::b(n);
    let z_unit = AlgVec::z_unit(n);
    let d = spec.dim_cr() as f64;
    match spec.kind {
        Kind::R => {
            let scale = rho(-y_vec.a() / 2.0);
            let jt = parts.jt.scale(scale);
            let t = jt.norm_sq();
            let r = spec.dim_r as f64;
            let coef_b = (r - 1.0) / 2.0 + (1.0 + 2.0 * t) / (2.0 * (1.0 + t));
            let mean_vector = b_unit.scale(coef_b).axpy(-1.0 / (1.0 + t), &jt);
            Ok(ClosedFormInvariants {
                mean_sq: h_profile(t, spec.dim_r),
                second_fundamental_sq: None,
                mean_vector,
            })
        }
        Kind::CRZ => Ok(ClosedFormInvariants {
            mean_sq: (2.0 + d).powi(2) / 4.0,
            second_fundamental_sq: None,
            mean_vector: b_unit.scale((2.0 + d) / 2.0),
        }),
        Kind::AR => {
            if parts.jt.norm() > tol::NONZERO {
                return Err(Error::NotCr(
                    "kind AR orbit with nonzero Jr component".into(),
                ));
            }
            // Exp(Y) = Exp(2W + yZ)
            let w = parts.v.scale(0.5);
            let y = y_vec.z();
            let w2 = w.norm_sq();
            let dd = 1.0 + y * y + w2;
            let r = spec.dim_r as f64;
            let (mean_sq, ii_sq) = ar_closed_forms(w2.sqrt(), y, spec.dim_r);
            // II(X,X) + sum_S II(S,S)
            let xx = b_unit
                .scale(y * y + 0.5 * w2)
                .axpy(-0.5, &w)
                .axpy(-y, &z_unit)
                .axpy(-y, &w.j());
            let ss = b_unit.scale(y * y + w2).axpy(-1.0, &w).axpy(-y, &z_unit);
            let mean_vector = xx.axpy(r / 2.0, &ss).scale(1.0 / dd);
            Ok(ClosedFormInvariants {
                mean_sq,
                second_fundamental_sq: Some(ii_sq),
                mean_vector,
            })
        }
        Kind::ACRZ => {
            if parts.v.norm() > tol::NONZERO {
                return Err(Error::NotCr(
                    "kind ACRZ orbit with nonzero c' component".into(),
                ));
            }
            let jt = &parts.jt;
            let t = jt.norm_sq();
            let mean_sq = t * (3.0 + d).powi(2) / (4.0 * (4.0 + t));
            let mean_vector = b_unit
                .scale(t)
                .axpy(-2.0, jt)
                .scale((3.0 + d) / (2.0 * (4.0 + t)));
            Ok(ClosedFormInvariants {
                mean_sq,
                second_fundamental_sq: None,
                mean_vector,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::ModelDim;

    fn dim(n: usize) -> ModelDim {
        ModelDim::new(n).unwrap()
    }

    #[test]
    fn connection_examples() {
        let d = dim(3);
        let b = AlgVec::b(d);
        let z = AlgVec::z_unit(d);
        let s = AlgVec::unit(d, d.re_index(1));
        assert_eq!(levi_civita(&b, &b), AlgVec::zero(d));
        assert_eq!(levi_civita(&z, &z), b);
        assert_eq!(levi_civita(&s, &s), b.scale(0.5));
        assert_eq!(levi_civita(&z, &b), -&z);
        assert!(koszul_oracle(&b, &b).norm() < 1e-15);
        assert!(koszul_oracle(&z, &z).approx_eq(&b, 1e-15));
    }

    #[test]
    fn curvature_examples() {
        let d = dim(2);
        let b = AlgVec::b(d);
        let z = AlgVec::z_unit(d);
        let w = AlgVec::unit(d, 2);
        assert_eq!(curvature(&b, &b, &w), AlgVec::zero(d));
        assert!((curvature(&b, &z, &z).dot(&b) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn h_profile_anchor() {
        for r in 1..=8 {
            assert_eq!(h_profile(0.0, r), (r * r) as f64 / 4.0);
        }
    }

    #[test]
    fn corollary_rejects_other_kinds() {
        let s = SubalgebraSpec::new(Kind::R, 0, 1, dim(3)).unwrap();
        assert!(corollary_invariants(&s, 1.0, 1.0).is_err());
        let s = SubalgebraSpec::new(Kind::AR, 0, 2, dim(3)).unwrap();
        assert_eq!(corollary_invariants(&s, 0.0, 0.0).unwrap(), (0.0, 0.0));
        assert_eq!(corollary_invariants(&s, 1.3, 0.0).unwrap().1, 0.0);
    }

    #[test]
    fn orbit_invariants_requires_subalgebra() {
        let d = dim(2);
        let u = AlgVec::unit(d, d.re_index(0));
        let v = crate::subspace::orthonormalize(d, &[u.clone(), u.j()]).unwrap();
        assert!(matches!(
            orbit_invariants(&v),
            Err(Error::NotSubalgebra { .. })
        ));
    }

    #[test]
    fn acrz_anchor_value() {
        // r = 1, c = 0, ||T|| = 2
        let n = dim(2);
        let s = SubalgebraSpec::new(Kind::ACRZ, 0, 1, n).unwrap();
        let g = GroupElement::exp(AlgVec::from_parts(n, 0.0, &[0.0, 2.0], 0.0).unwrap());
        let cf = closed_form_invariants(&s, &g).unwrap();
        assert!((cf.mean_sq - 2.0).abs() < 1e-15);
    }
}
