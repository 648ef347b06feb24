//! Scenario files and the classification report.

use serde::{Deserialize, Serialize};

use crorbit::classification::{
    prop31_normalize, theorem_a_classify, Kind, OrbitQuery, OrbitReport, StructuredCoords,
    SubalgebraSpec,
};
use crorbit::congruence::CongruenceKey;
use crorbit::geometry::{orbit_invariants, ExtrinsicInvariants};
use crorbit::lie::{AlgVec, GroupElement, ModelDim};
use crorbit::subspace::orthonormalize;
use crorbit::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub n: usize,
    pub subalgebra: SubalgebraInput,
    pub group_element: GroupInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// `{kind, dim_c, dim_r}` or `{basis}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, try_from = "serde_json::Value")]
pub enum SubalgebraInput {
    Spec(SpecInput),
    Basis(BasisInput),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecInput {
    pub kind: Kind,
    pub dim_c: usize,
    pub dim_r: usize,
}

/// Spanning vectors of `h`, each in the flat layout `[a, Re v_1, Im v_1, ..., z]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisInput {
    pub basis: Vec<Vec<f64>>,
}

/// `{b, T, W, y}` or `{xi}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, try_from = "serde_json::Value")]
pub enum GroupInput {
    Raw(RawInput),
    Structured(StructuredCoords),
}

/// `g = Exp(xi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInput {
    pub xi: Vec<f64>,
}

fn has_key(value: &serde_json::Value, key: &str) -> bool {
    value.as_object().is_some_and(|m| m.contains_key(key))
}

impl TryFrom<serde_json::Value> for SubalgebraInput {
    type Error = serde_json::Error;

    fn try_from(value: serde_json::Value) -> std::result::Result<Self, Self::Error> {
        if has_key(&value, "basis") {
            serde_json::from_value(value).map(SubalgebraInput::Basis)
        } else {
            serde_json::from_value(value).map(SubalgebraInput::Spec)
        }
    }
}

impl TryFrom<serde_json::Value> for GroupInput {
    type Error = serde_json::Error;

    fn try_from(value: serde_json::Value) -> std::result::Result<Self, Self::Error> {
        if has_key(&value, "xi") {
            serde_json::from_value(value).map(GroupInput::Raw)
        } else {
            serde_json::from_value(value).map(GroupInput::Structured)
        }
    }
}

/// A scenario turned into an orbit query, with notes on how it was read.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub query: OrbitQuery,
    pub diagnostics: Vec<String>,
}

impl Scenario {
    pub fn resolve(&self) -> Result<Resolved> {
        let d = ModelDim::new(self.n)?;
        let mut diagnostics = Vec::new();
        let query = match &self.subalgebra {
            SubalgebraInput::Spec(s) => {
                let spec = SubalgebraSpec::new(s.kind, s.dim_c, s.dim_r, d)?;
                let g = match &self.group_element {
                    GroupInput::Raw(raw) => {
                        GroupElement::exp(AlgVec::from_flat_in(d, raw.xi.clone())?)
                    }
                    GroupInput::Structured(coords) => spec.group_element(coords)?,
                };
                OrbitQuery::new(spec, g)?
            }
            SubalgebraInput::Basis(b) => {
                let vectors = b
                    .basis
                    .iter()
                    .map(|v| AlgVec::from_flat_in(d, v.clone()))
                    .collect::<Result<Vec<_>>>()?;
                let h = orthonormalize(d, &vectors)?;
                if h.dim() < vectors.len() {
                    diagnostics.push(format!(
                        "basis vectors are dependent; using their span of dimension {}",
                        h.dim()
                    ));
                }
                let norm = prop31_normalize(&h)?;
                diagnostics.push(format!(
                    "subalgebra normalizes to kind {} with dim_c = {}, dim_r = {}",
                    norm.spec.kind, norm.spec.dim_c, norm.spec.dim_r
                ));
                let g = match &self.group_element {
                    GroupInput::Raw(raw) => {
                        GroupElement::exp(AlgVec::from_flat_in(d, raw.xi.clone())?)
                    }
                    GroupInput::Structured(coords) => {
                        diagnostics.push(
                            "structured coordinates are read against the canonical embedding of the normal form"
                                .into(),
                        );
                        norm.transport_inverse(&norm.spec.group_element(coords)?)
                    }
                };
                OrbitQuery::from_subalgebra(h, g)?
            }
        };
        Ok(Resolved { query, diagnostics })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub orbit: OrbitReport,
    pub invariants: ExtrinsicInvariants,
    /// `null` when the orbit is not CR.
    pub key: Option<CongruenceKey>,
    pub diagnostics: Vec<String>,
}

pub fn classify(resolved: Resolved) -> Result<Report> {
    let orbit = theorem_a_classify(&resolved.query)?;
    let invariants = orbit_invariants(&orbit.tangent_at_o)?;
    let mut diagnostics = resolved.diagnostics;
    diagnostics.extend(orbit.diagnostics.iter().cloned());
    Ok(Report {
        key: orbit.congruence_key.clone(),
        orbit,
        invariants,
        diagnostics,
    })
}

/// Parse failures split by cause: bad JSON text versus a well-formed document
/// that is not a scenario.
#[derive(Debug)]
pub enum LoadError {
    Read(std::io::Error),
    Syntax(serde_json::Error),
    Shape(serde_json::Error),
    Invalid(Error),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Read(e) => write!(f, "cannot read scenario: {e}"),
            LoadError::Syntax(e) => write!(f, "malformed JSON: {e}"),
            LoadError::Shape(e) => write!(f, "not a valid scenario: {e}"),
            LoadError::Invalid(e) => write!(f, "invalid scenario: {e}"),
        }
    }
}

pub fn load(path: &std::path::Path) -> std::result::Result<Resolved, LoadError> {
    let text = std::fs::read_to_string(path).map_err(LoadError::Read)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(LoadError::Syntax)?;
    let scenario: Scenario = serde_json::from_value(value).map_err(LoadError::Shape)?;
    scenario.resolve().map_err(LoadError::Invalid)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = r#"{"n":3,"subalgebra":{"kind":"ACRZ","dim_c":1,"dim_r":1},"group_element":{"b":0.0,"T":[0.5],"W":[],"y":1.25},"seed":9}"#;
    const BASIS: &str = r#"{"n":2,"subalgebra":{"basis":[[0.0,1.0,1.0,0.0],[0.0,0.0,0.0,1.0]]},"group_element":{"xi":[0.1,0.2,0.3,0.4]}}"#;

    #[test]
    fn scenarios_round_trip() {
        for text in [SPEC, BASIS] {
            let s: Scenario = serde_json::from_str(text).unwrap();
            assert_eq!(serde_json::to_string(&s).unwrap(), text);
        }
        let s: Scenario = serde_json::from_str(SPEC).unwrap();
        assert!(matches!(s.subalgebra, SubalgebraInput::Spec(_)));
        assert!(matches!(s.group_element, GroupInput::Structured(_)));
    }

    #[test]
    fn both_forms_are_rejected() {
        let text = r#"{"n":2,"subalgebra":{"kind":"R","dim_c":0,"dim_r":1,"basis":[]},"group_element":{}}"#;
        assert!(serde_json::from_str::<Scenario>(text).is_err());
    }

    #[test]
    fn report_round_trips() {
        let s: Scenario = serde_json::from_str(SPEC).unwrap();
        let report = classify(s.resolve().unwrap()).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        assert_eq!(serde_json::from_str::<Report>(&text).unwrap(), report);
    }

    #[test]
    fn basis_and_spec_agree_on_the_key() {
        let by_basis: Scenario = serde_json::from_str(
            r#"{"n":2,"subalgebra":{"basis":[[0,0,1,0],[1,0,0,0]]},"group_element":{"T":[0.8]}}"#,
        )
        .unwrap();
        let by_spec: Scenario = serde_json::from_str(
            r#"{"n":2,"subalgebra":{"kind":"AR","dim_c":0,"dim_r":1},"group_element":{"T":[0.8]}}"#,
        )
        .unwrap();
        let a = classify(by_basis.resolve().unwrap()).unwrap();
        let b = classify(by_spec.resolve().unwrap()).unwrap();
        assert_eq!(a.orbit.is_cr, b.orbit.is_cr);
        assert!((a.invariants.mean_sq - b.invariants.mean_sq).abs() < 1e-9);
    }
}
