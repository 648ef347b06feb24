//! Which orbits `H g(o)` are CR, and of which type.

use serde::{Deserialize, Serialize};

use super::normalize::{prop31_normalize, Normalization};
use super::slice::slice_reduce;
use super::spec::{build_subalgebra, Kind, SubalgebraSpec, TypeTag};
use crate::congruence::{congruence_key, CongruenceKey};
use crate::error::{Error, Result};
use crate::lie::GroupElement;
use crate::subspace::{cr_decompose, subalgebra_residual, CrDecomposition, Subspace};
use crate::tol;

/// The orbit `H g(o)`, with `H` given either by a normal-form spec or by an
/// explicit subalgebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitQuery {
    pub spec: SubalgebraSpec,
    pub g: GroupElement,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_subalgebra: Option<Subspace>,
}

impl OrbitQuery {
    pub fn new(spec: SubalgebraSpec, g: GroupElement) -> Result<Self> {
        spec.validate()?;
        if g.dim() != spec.n {
            return Err(Error::DimensionMismatch {
                expected: spec.n.real_dim(),
                found: g.dim().real_dim(),
            });
        }
        Ok(Self {
            spec,
            g,
            raw_subalgebra: None,
        })
    }

    /// Query for an explicit subalgebra; its spec is found by normalization.
    pub fn from_subalgebra(h: Subspace, g: GroupElement) -> Result<Self> {
        if g.dim() != h.model_dim() {
            return Err(Error::DimensionMismatch {
                expected: h.model_dim().real_dim(),
                found: g.dim().real_dim(),
            });
        }
        let norm = prop31_normalize(&h)?;
        Ok(Self {
            spec: norm.spec,
            g,
            raw_subalgebra: Some(h),
        })
    }

    /// `h` as given.
    pub fn subalgebra(&self) -> Result<Subspace> {
        match &self.raw_subalgebra {
            Some(h) => Ok(h.clone()),
            None => build_subalgebra(&self.spec),
        }
    }

    /// The congruent orbit `H' g'(o)` with `H'` in canonical normal form.
    pub fn canonical(&self) -> Result<(SubalgebraSpec, GroupElement, Option<Normalization>)> {
        match &self.raw_subalgebra {
            None => Ok((self.spec, self.g.clone(), None)),
            Some(h) => {
                let residual = subalgebra_residual(h);
                if residual > tol::SUBALGEBRA {
                    return Err(Error::NotSubalgebra { residual });
                }
                let norm = prop31_normalize(h)?;
                if norm.spec != self.spec {
                    return Err(Error::InvalidSpec(format!(
                        "subalgebra normalizes to {:?}, query states {:?}",
                        norm.spec, self.spec
                    )));
                }
                let g = norm.transport(&self.g);
                Ok((norm.spec, g, Some(norm)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub is_cr: bool,
    pub type_tag: TypeTag,
    pub spec: SubalgebraSpec,
    /// `Ad(g^{-1}) h`.
    pub tangent_at_o: Subspace,
    pub decomposition: CrDecomposition,
    pub congruence_key: Option<CongruenceKey>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

/// Membership test on the slice element: kinds R and CRZ are always CR, kind
/// AR iff the `Jr` part vanishes, kind ACRZ iff the `c'` part vanishes.
///
/// Returns the verdict and the size of the deciding component.
pub fn theorem_a_predicate(spec: &SubalgebraSpec, g: &GroupElement) -> Result<(bool, f64)> {
    let y = slice_reduce(spec, g)?.slice.xi;
    let parts = spec.split_alpha(&y);
    let size = match spec.kind {
        Kind::R | Kind::CRZ => 0.0,
        Kind::AR => parts.jt.norm(),
        Kind::ACRZ => parts.v.norm(),
    };
    Ok((size <= tol::NONZERO, size))
}

/// Decides whether `H g(o)` is CR, once directly from `Ad(g^{-1}) h` and once
/// from the slice predicate; the two must agree.
pub fn theorem_a_classify(query: &OrbitQuery) -> Result<OrbitReport> {
    let (spec, g_canon, _) = query.canonical()?;
    let h = query.subalgebra()?;
    let g_inv = query.g.inverse();
    let tangent_at_o = h.map(|v| g_inv.ad(v));
    let decomposition = cr_decompose(&tangent_at_o);
    let (predicate, size) = theorem_a_predicate(&spec, &g_canon)?;
    let mut diagnostics = Vec::new();
    if predicate != decomposition.is_cr {
        let msg = format!(
            "direct CR test says {}, slice predicate says {} (deciding component {size:.3e})",
            decomposition.is_cr, predicate
        );
        if !(tol::FLOOR..=1e-7).contains(&size) {
            return Err(Error::Inconsistent(msg));
        }
        diagnostics.push(format!(
            "{msg}; near the decision threshold, using the predicate"
        ));
    }
    let is_cr = predicate;
    let congruence_key = if is_cr {
        Some(congruence_key(&spec, &g_canon)?)
    } else {
        None
    };
    Ok(OrbitReport {
        is_cr,
        type_tag: if is_cr {
            spec.kind.type_tag()
        } else {
            TypeTag::NotCR
        },
        spec,
        tangent_at_o,
        decomposition,
        congruence_key,
        diagnostics,
    })
}

/// Classification of `H g(o)` for an explicit subalgebra `h`.
pub fn classify_subalgebra(h: &Subspace, g: &GroupElement) -> Result<OrbitReport> {
    theorem_a_classify(&OrbitQuery::from_subalgebra(h.clone(), g.clone())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{AlgVec, ModelDim};

    fn dim(n: usize) -> ModelDim {
        ModelDim::new(n).unwrap()
    }

    fn query(kind: Kind, c: usize, r: usize, n: usize, xi: AlgVec) -> OrbitQuery {
        let spec = SubalgebraSpec::new(kind, c, r, dim(n)).unwrap();
        OrbitQuery::new(spec, GroupElement::exp(xi)).unwrap()
    }

    #[test]
    fn crz_is_always_type_two() {
        let d = dim(3);
        let xi = AlgVec::from_parts(d, 0.4, &[0.3, -0.2, 1.1, 0.5], -0.7).unwrap();
        let rep = theorem_a_classify(&query(Kind::CRZ, 1, 0, 3, xi)).unwrap();
        assert!(rep.is_cr);
        assert_eq!(rep.type_tag, TypeTag::II);
    }

    #[test]
    fn ar_with_jr_component_is_not_cr() {
        let d = dim(3);
        let jt = AlgVec::unit(d, d.im_index(0)).scale(2.0 * 0.8);
        let rep = theorem_a_classify(&query(Kind::AR, 0, 1, 3, jt)).unwrap();
        assert!(!rep.is_cr);
        assert_eq!(rep.type_tag, TypeTag::NotCR);
        assert!(rep.congruence_key.is_none());
    }

    #[test]
    fn acrz_cases() {
        let d = dim(3);
        let jt = AlgVec::unit(d, d.im_index(0)).scale(0.9);
        let rep = theorem_a_classify(&query(Kind::ACRZ, 0, 1, 3, jt)).unwrap();
        assert!(rep.is_cr);
        assert_eq!(rep.type_tag, TypeTag::IV);
        let w = AlgVec::unit(d, d.re_index(1)).scale(2.0 * 0.6);
        let rep = theorem_a_classify(&query(Kind::ACRZ, 0, 1, 3, w)).unwrap();
        assert!(!rep.is_cr);
    }

    #[test]
    fn raw_subalgebra_matches_spec_route() {
        let d = dim(3);
        let spec = SubalgebraSpec::new(Kind::AR, 0, 1, d).unwrap();
        let h = build_subalgebra(&spec).unwrap();
        let g0 =
            GroupElement::exp(AlgVec::from_parts(d, 0.3, &[0.2, 0.0, -0.4, 0.6], 0.5).unwrap());
        // conjugated copy Ad(g0^{-1}) h, whose orbit through g0^{-1} g(o) matches H g(o)
        let raw = h.map(|v| g0.inverse().ad(v));
        let g = GroupElement::exp(AlgVec::from_parts(d, 0.0, &[0.0, 0.0, 0.7, -0.2], 0.9).unwrap());
        let direct = theorem_a_classify(&OrbitQuery::new(spec, g.clone()).unwrap()).unwrap();
        let via_raw = classify_subalgebra(&raw, &g0.inverse().mul(&g)).unwrap();
        assert_eq!(direct.type_tag, via_raw.type_tag);
        let (k1, k2) = (
            direct.congruence_key.unwrap(),
            via_raw.congruence_key.unwrap(),
        );
        assert!(k1.matches(&k2), "{k1:?} vs {k2:?}");
    }

    #[test]
    fn query_rejects_mismatched_model() {
        let spec = SubalgebraSpec::new(Kind::R, 0, 1, dim(2)).unwrap();
        assert!(OrbitQuery::new(spec, GroupElement::identity(dim(3))).is_err());
    }
}
