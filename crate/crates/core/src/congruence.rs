//! Congruence of CR orbits, the scalar invariants that separate them, and the
//! moduli space of congruence classes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classification::{
    slice_reduce, theorem_a_classify, Kind, OrbitQuery, SubalgebraSpec, TypeTag,
};
use crate::error::{Error, Result};
use crate::geometry::{h_profile, orbit_invariants, reduced_displacement};
use crate::lie::{rho, GroupElement, ModelDim};
use crate::tol;

/// Complete congruence invariant of a CR orbit in normal form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CongruenceKey {
    pub kind: TypeTag,
    /// `[dim_c, dim_r, n]`.
    pub dims: [usize; 3],
    /// Kind I: `[iota]`; kind II: `[]`; kind III: `[|W|, |y|]`; kind IV: `[|T|]`.
    pub scalars: Vec<f64>,
}

impl CongruenceKey {
    /// Same kind, same dimensions and scalars within [`tol::KEY`].
    pub fn matches(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.dims == other.dims
            && self.scalars.len() == other.scalars.len()
            && self
                .scalars
                .iter()
                .zip(&other.scalars)
                .all(|(a, b)| (a - b).abs() <= tol::KEY)
    }
}

/// Key of the orbit `H g(o)` for the canonical normal form `spec`.
pub fn congruence_key(spec: &SubalgebraSpec, g: &GroupElement) -> Result<CongruenceKey> {
    let y = slice_reduce(spec, g)?.slice.xi;
    let parts = spec.split_alpha(&y);
    let scalars = match spec.kind {
        Kind::R => vec![reduced_displacement(y.a(), parts.jt.norm())],
        Kind::CRZ => Vec::new(),
        Kind::AR => {
            if parts.jt.norm() > tol::NONZERO {
                return Err(Error::NotCr("kind AR orbit with a Jr component".into()));
            }
            vec![parts.v.norm(), y.z().abs()]
        }
        Kind::ACRZ => {
            if parts.v.norm() > tol::NONZERO {
                return Err(Error::NotCr("kind ACRZ orbit with a c' component".into()));
            }
            vec![parts.jt.norm()]
        }
    };
    Ok(CongruenceKey {
        kind: spec.kind.type_tag(),
        dims: [spec.dim_c, spec.dim_r, spec.n.n()],
        scalars,
    })
}

/// Why two orbits are or are not congruent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    EqualKeys,
    DifferentDimensions,
    DifferentScalars,
    /// Types I and II lie in horospheres, types III and IV do not.
    Horosphere,
    /// Type III orbits are totally real, type IV orbits have a holomorphic part.
    HolomorphicPart,
    /// Type I against type II: equal mean curvature would force
    /// `3 + 2(r-1)(1+|T|^2) = 0`.
    MeanCurvatureGap,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Reason::EqualKeys => "congruence keys agree",
            Reason::DifferentDimensions => "normal forms have different dimensions",
            Reason::DifferentScalars => "congruence scalars differ",
            Reason::Horosphere => "only one orbit lies in a horosphere",
            Reason::HolomorphicPart => "only one orbit has a holomorphic part",
            Reason::MeanCurvatureGap => "mean curvatures of types I and II never agree",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CongruenceVerdict {
    pub congruent: bool,
    pub reason: Reason,
    pub keys: [CongruenceKey; 2],
}

/// Decides congruence of two CR orbits from their keys.
pub fn compare_keys(k1: &CongruenceKey, k2: &CongruenceKey) -> (bool, Reason) {
    use TypeTag::*;
    let horo = |t: TypeTag| matches!(t, I | II);
    if k1.kind != k2.kind {
        let reason = if horo(k1.kind) != horo(k2.kind) {
            Reason::Horosphere
        } else if horo(k1.kind) {
            Reason::MeanCurvatureGap
        } else {
            Reason::HolomorphicPart
        };
        return (false, reason);
    }
    if k1.dims != k2.dims {
        return (false, Reason::DifferentDimensions);
    }
    if k1.matches(k2) {
        (true, Reason::EqualKeys)
    } else {
        (false, Reason::DifferentScalars)
    }
}

/// Congruence of `H_1 g_1(o)` and `H_2 g_2(o)`; both orbits must be CR.
pub fn theorem_b_congruent(q1: &OrbitQuery, q2: &OrbitQuery) -> Result<CongruenceVerdict> {
    let key = |q: &OrbitQuery| -> Result<CongruenceKey> {
        let report = theorem_a_classify(q)?;
        report
            .congruence_key
            .ok_or_else(|| Error::NotCr("congruence is only decided for CR orbits".into()))
    };
    let k1 = key(q1)?;
    let k2 = key(q2)?;
    let (congruent, reason) = compare_keys(&k1, &k2);
    Ok(CongruenceVerdict {
        congruent,
        reason,
        keys: [k1, k2],
    })
}

/// `3 + 2(r-1)(1+t)`, which must vanish for a type I orbit (with `t = |T|^2`)
/// and a type II orbit of the same dimension to share their mean curvature.
pub fn type_one_two_gap(r: usize, t: f64) -> f64 {
    3.0 + 2.0 * (r as f64 - 1.0) * (1.0 + t)
}

/// `F(z, w) = ((z+w)/(1+z+w), z(a(1+z) + (a+3)w)/(1+z+w)^2)`.
pub fn f_profile(z: f64, w: f64, a: f64) -> (f64, f64) {
    let s = 1.0 + z + w;
    ((z + w) / s, z * (a * (1.0 + z) + (a + 3.0) * w) / (s * s))
}

/// The admissible root of `F(z, w) = (c1, c2)`:
/// `z = (a + 3c1 - sqrt(D)) / (6(1-c1))`, `w = c1/(1-c1) - z` with
/// `D = (a+3c1)^2 - 12 c2`. The root is evaluated in rationalized form.
pub fn f_profile_inverse(c1: f64, c2: f64, a: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&c1) || c2 < 0.0 {
        return Err(Error::Unsupported(format!(
            "({c1}, {c2}) is outside the image of F"
        )));
    }
    let p = a + 3.0 * c1;
    let disc = p * p - 12.0 * c2;
    if disc < 0.0 {
        return Err(Error::Unsupported(format!(
            "({c1}, {c2}) is outside the image of F"
        )));
    }
    let z = 2.0 * c2 / ((1.0 - c1) * (p + disc.sqrt()));
    let w = c1 / (1.0 - c1) - z;
    Ok((z, w.max(0.0)))
}

/// Index set `I_k = {1..k}` or `I_{k,l} = {(i,j) : k <= i <= j <= l}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum IndexSet {
    #[serde(rename = "I_k")]
    Single { k: usize },
    #[serde(rename = "I_kl")]
    Pair { k: usize, l: usize },
}

/// An element of an index set: `i` for `I_k`, `(i, j)` for `I_{k,l}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexElement {
    Single(usize),
    Pair(usize, usize),
}

impl IndexSet {
    pub fn elements(&self) -> Vec<IndexElement> {
        match *self {
            IndexSet::Single { k } => (1..=k).map(IndexElement::Single).collect(),
            IndexSet::Pair { k, l } => (k..=l)
                .flat_map(|i| (i..=l).map(move |j| IndexElement::Pair(i, j)))
                .collect(),
        }
    }
}

/// One piece of the moduli space: an index set (or a single point) times a
/// number of half-lines `[0, inf)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliComponent {
    pub kind: TypeTag,
    /// `None` for the piece without a discrete factor.
    pub index_set: Option<IndexSet>,
    pub half_lines: usize,
    /// Expanded index set; `[]` when `index_set` is `None`.
    pub elements: Vec<IndexElement>,
}

impl ModuliComponent {
    fn new(kind: TypeTag, index_set: Option<IndexSet>, half_lines: usize) -> Self {
        let elements = index_set.map(|s| s.elements()).unwrap_or_default();
        Self {
            kind,
            index_set,
            half_lines,
            elements,
        }
    }
}

/// Congruence classes of proper CR orbits of subgroups of `AN` in `CH^n`:
/// `I_{n-1} x [0,inf)`, `I_{0,n-1}`, `[0,inf)` and `I_{n-1} x [0,inf)^2`,
/// `I_{n-1}` and `I_{1,n-1} x [0,inf)`.
pub fn moduli_space(n: usize) -> Result<Vec<ModuliComponent>> {
    let m = ModelDim::new(n)?.alpha_complex_dim();
    Ok(vec![
        ModuliComponent::new(TypeTag::I, Some(IndexSet::Single { k: m }), 1),
        ModuliComponent::new(TypeTag::II, Some(IndexSet::Pair { k: 0, l: m }), 0),
        ModuliComponent::new(TypeTag::III, None, 1),
        ModuliComponent::new(TypeTag::III, Some(IndexSet::Single { k: m }), 2),
        ModuliComponent::new(TypeTag::IV, Some(IndexSet::Single { k: m }), 0),
        ModuliComponent::new(TypeTag::IV, Some(IndexSet::Pair { k: 1, l: m }), 1),
    ])
}

/// Inverse of the strictly increasing `h` on `[0, inf)`, by bisection.
pub fn h_profile_inverse(value: f64, r: usize) -> Result<f64> {
    let lo_val = h_profile(0.0, r);
    let sup = ((r + 1) as f64).powi(2) / 4.0;
    if value < lo_val - 1e-12 || value >= sup {
        return Err(Error::Unsupported(format!(
            "{value} is outside the range [{lo_val}, {sup}) of h"
        )));
    }
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while h_profile(hi, r) < value {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Unsupported("h inversion did not bracket".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h_profile(mid, r) < value {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Candidate closed forms for the kind-I reduced displacement `(b, |T|) -> iota`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisplacementForm {
    /// `|T| / rho(b/2)`: the invariant behind `rho(b2/2)|T1| = rho(b1/2)|T2|`.
    CrossIndexed,
    /// `rho(b/2) |T|`, from `Ad(g) h = Ad(Exp(rho(b/2) JT)) h`.
    Product,
}

/// How `(b, T)` is read off `g = Exp(bB + JT)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Coordinates of `g`, the point the orbit passes through.
    Direct,
    /// Coordinates of `g^{-1}`, whose adjoint moves the orbit tangent to `o`;
    /// this flips the sign of `b`.
    Inverse,
}

impl DisplacementForm {
    pub const ALL: [DisplacementForm; 2] =
        [DisplacementForm::CrossIndexed, DisplacementForm::Product];

    pub fn eval(self, b: f64, t_norm: f64) -> f64 {
        match self {
            DisplacementForm::CrossIndexed => t_norm / rho(b / 2.0),
            DisplacementForm::Product => rho(b / 2.0) * t_norm,
        }
    }

    pub fn eval_in(self, convention: Convention, b: f64, t_norm: f64) -> f64 {
        match convention {
            Convention::Direct => self.eval(b, t_norm),
            Convention::Inverse => self.eval(-b, t_norm),
        }
    }
}

/// Squared kind-I displacement read off the geometry: the mean curvature of
/// `H Exp(bB + JT)(o)` computed numerically, pulled back through `h`.
pub fn displacement_oracle_sq(spec: &SubalgebraSpec, b: f64, t: &[f64]) -> Result<f64> {
    if spec.kind != Kind::R {
        return Err(Error::Unsupported(format!(
            "the displacement oracle is defined for kind R, not {}",
            spec.kind
        )));
    }
    let g = spec.group_element(&crate::classification::StructuredCoords {
        b,
        t: t.to_vec(),
        w: vec![0.0; 2 * spec.dim_c_prime()],
        y: 0.0,
    })?;
    h_profile_inverse(mean_sq(spec, &g)?, spec.dim_r)
}

/// Kind-I displacement read off the geometry; see [`displacement_oracle_sq`].
pub fn displacement_oracle(spec: &SubalgebraSpec, b: f64, t: &[f64]) -> Result<f64> {
    Ok(displacement_oracle_sq(spec, b, t)?.sqrt())
}

/// Largest discrepancy of one closed form from the oracle over a sweep,
/// measured on `iota^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplacementAudit {
    pub form: DisplacementForm,
    pub convention: Convention,
    pub max_abs_error: f64,
    pub consistent: bool,
}

/// Compares every [`DisplacementForm`] under both conventions with
/// [`displacement_oracle_sq`] on the given `(b, |T|)` samples, for `r = 1`
/// in `CH^2`.
pub fn audit_displacement(samples: &[(f64, f64)], tol: f64) -> Result<Vec<DisplacementAudit>> {
    let spec = SubalgebraSpec::new(Kind::R, 0, 1, ModelDim::new(2)?)?;
    let oracle: Vec<f64> = samples
        .iter()
        .map(|&(b, t)| displacement_oracle_sq(&spec, b, &[t]))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for convention in [Convention::Direct, Convention::Inverse] {
        for form in DisplacementForm::ALL {
            let max_abs_error = samples
                .iter()
                .zip(&oracle)
                .map(|(&(b, t), o)| (form.eval_in(convention, b, t).powi(2) - o).abs())
                .fold(0.0, f64::max);
            out.push(DisplacementAudit {
                form,
                convention,
                max_abs_error,
                consistent: max_abs_error <= tol,
            });
        }
    }
    Ok(out)
}

/// Kind-I key scalar straight from the oracle, for use as a cross-check.
pub fn oracle_key(spec: &SubalgebraSpec, g: &GroupElement) -> Result<f64> {
    let y = slice_reduce(spec, g)?.slice.xi;
    let coords = spec.structured(&y);
    displacement_oracle(spec, coords.b, &coords.t)
}

/// Mean curvature squared of the orbit, for soundness checks.
pub fn mean_sq(spec: &SubalgebraSpec, g: &GroupElement) -> Result<f64> {
    let h = crate::classification::build_subalgebra(spec)?;
    let tangent = h.map(|v| g.inverse().ad(v));
    Ok(orbit_invariants(&tangent)?.mean_sq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli_small_cases() {
        let m = moduli_space(2).unwrap();
        assert_eq!(m.len(), 6);
        assert_eq!(
            m[1].elements,
            vec![
                IndexElement::Pair(0, 0),
                IndexElement::Pair(0, 1),
                IndexElement::Pair(1, 1)
            ]
        );
        assert_eq!(m[4].elements, vec![IndexElement::Single(1)]);
        assert_eq!(m[5].elements, vec![IndexElement::Pair(1, 1)]);
        assert_eq!(m[5].half_lines, 1);
        assert!(moduli_space(1).is_err());
    }

    #[test]
    fn moduli_json() {
        let m = moduli_space(2).unwrap();
        let s = serde_json::to_string(&m[0]).unwrap();
        assert_eq!(
            s,
            r#"{"kind":"I","index_set":{"type":"I_k","k":1},"half_lines":1,"elements":[1]}"#
        );
        let s = serde_json::to_string(&m[2]).unwrap();
        assert_eq!(
            s,
            r#"{"kind":"III","index_set":null,"half_lines":1,"elements":[]}"#
        );
        let back: ModuliComponent =
            serde_json::from_str(&serde_json::to_string(&m[1]).unwrap()).unwrap();
        assert_eq!(back, m[1]);
    }

    #[test]
    fn f_profile_basics() {
        assert_eq!(f_profile(0.0, 0.0, 5.0), (0.0, 0.0));
        let z = 0.7;
        assert_eq!(f_profile(z, 0.0, 7.0).0, z / (1.0 + z));
        let (c1, c2) = f_profile(0.3, 1.2, 5.0);
        let (z, w) = f_profile_inverse(c1, c2, 5.0).unwrap();
        assert!((z - 0.3).abs() < 1e-12 && (w - 1.2).abs() < 1e-12);
    }

    #[test]
    fn h_inverse_round_trip() {
        for r in 1..=4 {
            for t in [0.0, 0.1, 1.0, 7.5] {
                let back = h_profile_inverse(h_profile(t, r), r).unwrap();
                assert!((back - t).abs() < 1e-9, "r={r} t={t} back={back}");
            }
        }
    }

    #[test]
    fn cross_kind_reasons() {
        let key = |kind, scalars: Vec<f64>| CongruenceKey {
            kind,
            dims: [0, 1, 3],
            scalars,
        };
        assert_eq!(
            compare_keys(&key(TypeTag::I, vec![1.0]), &key(TypeTag::II, vec![])).1,
            Reason::MeanCurvatureGap
        );
        assert_eq!(
            compare_keys(&key(TypeTag::I, vec![1.0]), &key(TypeTag::IV, vec![1.0])).1,
            Reason::Horosphere
        );
        assert_eq!(
            compare_keys(
                &key(TypeTag::III, vec![1.0, 0.0]),
                &key(TypeTag::IV, vec![1.0])
            )
            .1,
            Reason::HolomorphicPart
        );
        assert!(type_one_two_gap(1, 5.0) > 0.0);
    }
}
