//! Reduction of an arbitrary `g` to the normal slice `Exp((a+n) - h)`.

use serde::Serialize;

use super::spec::SubalgebraSpec;
use crate::error::{Error, Result};
use crate::lie::{rho, AlgVec, GroupElement};

/// `g = Exp(h_part) * slice` with `h_part` in `h` and `slice = Exp(Y)`,
/// `Y` orthogonal to `h`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceDecomposition {
    pub h_part: AlgVec,
    pub slice: GroupElement,
}

/// Writes `g = Exp(cB + U + V + S + JT + zZ)` as `Exp(X_h) Exp(Y)`.
///
/// With `(a, b) = (c, 0)` when `a` lies in `h` and `(0, c)` otherwise,
/// `X_h = aB + rho(c/2)/rho(a/2) (U + S) + xZ` and
/// `Y = bB + e^{-a/2} rho(c/2)/rho(b/2) (V + JT) + yZ`, where the central
/// coefficient `rho(c) z - rho(c/2)^2 <S,T>/2` is absorbed by `x` when `Z` lies in
/// `h` and by `y` otherwise.
pub fn slice_reduce(spec: &SubalgebraSpec, g: &GroupElement) -> Result<SliceDecomposition> {
    spec.validate()?;
    if g.dim() != spec.n {
        return Err(Error::DimensionMismatch {
            expected: spec.n.real_dim(),
            found: g.dim().real_dim(),
        });
    }
    let xi = &g.xi;
    let c = xi.a();
    let z = xi.z();
    let parts = spec.split_alpha(xi);
    let (a, b) = if spec.kind.has_a() {
        (c, 0.0)
    } else {
        (0.0, c)
    };

    let st = parts.s.dot(&parts.t());
    let rc2 = rho(c / 2.0);
    let central = rho(c) * z - 0.5 * rc2 * rc2 * st;
    let (x, y) = if spec.kind.has_z() {
        (central / rho(a), 0.0)
    } else {
        (0.0, (-a).exp() * central / rho(b))
    };

    let mut h_part = (&parts.u + &parts.s).scale(rc2 / rho(a / 2.0));
    h_part.set_a(a);
    h_part.set_z(x);

    let mut y_vec = (&parts.v + &parts.jt).scale((-a / 2.0).exp() * rc2 / rho(b / 2.0));
    y_vec.set_a(b);
    y_vec.set_z(y);

    Ok(SliceDecomposition {
        h_part,
        slice: GroupElement::exp(y_vec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::spec::{build_subalgebra, Kind};
    use crate::lie::ModelDim;

    #[test]
    fn slice_elements_are_fixed() {
        let n = ModelDim::new(3).unwrap();
        let spec = SubalgebraSpec::new(Kind::AR, 0, 1, n).unwrap();
        let y = AlgVec::from_parts(n, 0.0, &[0.0, 0.7, 0.3, -0.2], 0.9).unwrap();
        let g = GroupElement::exp(y.clone());
        let dec = slice_reduce(&spec, &g).unwrap();
        assert!(dec.h_part.norm() < 1e-15);
        assert!(dec.slice.xi.approx_eq(&y, 1e-15));
    }

    #[test]
    fn ar_central_coefficient() {
        let n = ModelDim::new(2).unwrap();
        let spec = SubalgebraSpec::new(Kind::AR, 0, 1, n).unwrap();
        // g = Exp(cB + S + JT + zZ) with S = s e_re, JT = t e_im
        let (c, s, t, z) = (0.8, 0.6, -1.1, 0.45);
        let g = GroupElement::exp(AlgVec::from_parts(n, c, &[s, t], z).unwrap());
        let dec = slice_reduce(&spec, &g).unwrap();
        let rc2 = rho(c / 2.0);
        let want_y = (-c).exp() * (rho(c) * z - 0.5 * rc2 * rc2 * s * t);
        assert!((dec.slice.xi.z() - want_y).abs() < 1e-15);
        assert_eq!(dec.slice.xi.a(), 0.0);
    }

    #[test]
    fn round_trip_and_orthogonality() {
        let n = ModelDim::new(4).unwrap();
        let xi = AlgVec::from_parts(n, -0.7, &[0.3, 1.2, -0.4, 0.9, 0.2, -1.5], 0.8).unwrap();
        let g = GroupElement::exp(xi);
        for kind in Kind::ALL {
            let spec = SubalgebraSpec::new(kind, usize::from(kind.has_z()), 1, n).unwrap();
            let h = build_subalgebra(&spec).unwrap();
            let dec = slice_reduce(&spec, &g).unwrap();
            assert!(h.contains(&dec.h_part, 1e-14), "{kind}");
            assert!(h.project(&dec.slice.xi).norm() < 1e-14, "{kind}");
            let back = GroupElement::exp(dec.h_part.clone()).mul(&dec.slice);
            assert!(back.xi.approx_eq(&g.xi, 1e-13), "{kind}");
        }
    }
}
