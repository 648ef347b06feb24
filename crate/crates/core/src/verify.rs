//! Randomized verification suites.
//!
//! Each property runs over a number of trials. Trial `i` draws from
//! [`trial_rng`]`(seed, i)`, and trials may run in parallel, so a report
//! depends only on the seed and the trial counts.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classification::{
    build_subalgebra, classify_subalgebra, slice_reduce, theorem_a_classify, theorem_a_predicate,
    Kind, OrbitQuery, StructuredCoords, SubalgebraSpec,
};
use crate::congruence::{
    audit_displacement, congruence_key, f_profile, f_profile_inverse, h_profile_inverse, mean_sq,
    moduli_space, theorem_b_congruent, CongruenceKey, Convention, DisplacementAudit,
    DisplacementForm, IndexElement,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{
    ar_closed_forms, ar_frame, closed_form_invariants, corollary_invariants, curvature, h_profile,
    h_profile_derivative, holomorphic_sectional_curvature, koszul_oracle, levi_civita,
    orbit_invariants, reduced_displacement,
};
use crate::lie::{adjoint, adjoint_series_oracle, rho, AlgVec, GroupElement, ModelDim};
use crate::sample::{self, trial_rng};
use crate::subspace::{cr_decompose, orthonormalize, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Suite {
    Algebra,
    Connection,
    Curvature,
    TheoremA,
    Lemmas4x,
    Congruence,
    All,
}

impl Suite {
    /// The individual suites, in run order.
    pub const EACH: [Suite; 6] = [
        Suite::Algebra,
        Suite::Connection,
        Suite::Curvature,
        Suite::TheoremA,
        Suite::Lemmas4x,
        Suite::Congruence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Connection => "connection",
            Suite::Curvature => "curvature",
            Suite::TheoremA => "theoremA",
            Suite::Lemmas4x => "lemmas4x",
            Suite::Congruence => "congruence",
            Suite::All => "all",
        }
    }

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::EACH.to_vec(),
            s => vec![s],
        }
    }

    fn default_trials(self) -> u64 {
        match self {
            Suite::Algebra | Suite::Connection => 1000,
            Suite::Curvature | Suite::Lemmas4x | Suite::Congruence => 100,
            Suite::TheoremA => 200,
            Suite::All => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides every suite's default trial count.
    pub trials: Option<u64>,
    pub exec: Exec,
}


/// Outcome of one property over all its trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub suite: Suite,
    pub property: String,
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    /// Largest finite residual seen.
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Which kind-I displacement formula the mean-curvature oracle supports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplacementReport {
    pub samples: usize,
    pub tolerance: f64,
    pub audits: Vec<DisplacementAudit>,
    /// The unique consistent `(form, convention)`, if there is exactly one.
    pub selected: Option<(DisplacementForm, Convention)>,
}

impl DisplacementReport {
    /// Number of candidate forms consistent under `convention`.
    pub fn consistent_under(&self, convention: Convention) -> usize {
        self.audits
            .iter()
            .filter(|a| a.convention == convention && a.consistent)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub parallel: bool,
    pub properties: Vec<PropertyResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub displacement: Option<DisplacementReport>,
    pub passed: usize,
    pub failed: usize,
    pub all_pass: bool,
}

impl VerifyReport {
    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.property == name)
    }
}

/// Runs `suite` (or every suite for [`Suite::All`]).
pub fn run(suite: Suite, config: &VerifyConfig) -> VerifyReport {
    let mut properties = Vec::new();
    let mut displacement = None;
    for member in suite.members() {
        let runner = Runner {
            config,
            suite: member,
            trials: config.trials.unwrap_or(member.default_trials()),
        };
        match member {
            Suite::Algebra => properties.extend(algebra(&runner)),
            Suite::Connection => properties.extend(connection(&runner)),
            Suite::Curvature => properties.extend(curvature_suite(&runner)),
            Suite::TheoremA => properties.extend(theorem_a(&runner)),
            Suite::Lemmas4x => properties.extend(lemmas(&runner)),
            Suite::Congruence => {
                let (props, report) = congruence(&runner);
                properties.extend(props);
                displacement = report;
            }
            Suite::All => unreachable!("members are individual suites"),
        }
    }
    let passed = properties.iter().filter(|p| p.pass).count();
    let failed = properties.len() - passed;
    VerifyReport {
        suite,
        seed: config.seed,
        parallel: config.exec.is_parallel(),
        properties,
        displacement,
        passed,
        failed,
        all_pass: failed == 0,
    }
}

struct Runner<'a> {
    config: &'a VerifyConfig,
    suite: Suite,
    trials: u64,
}

impl Runner<'_> {
    fn sweep<F>(&self, property: &str, tolerance: f64, f: F) -> PropertyResult
    where
        F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync + Send,
    {
        self.sweep_n(property, self.trials, tolerance, f)
    }

    /// Like [`Runner::sweep`] with a property-specific default trial count.
    fn sweep_n<F>(&self, property: &str, default: u64, tolerance: f64, f: F) -> PropertyResult
    where
        F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync + Send,
    {
        let trials = self.config.trials.unwrap_or(default);
        let seed = self.config.seed;
        let outcomes = self.config.exec.map(trials, |i| f(&mut trial_rng(seed, i)));
        summarize(self.suite, property, tolerance, outcomes)
    }

    /// A deterministic check with no random input.
    fn once<F: FnOnce() -> Result<f64>>(
        &self,
        property: &str,
        tolerance: f64,
        f: F,
    ) -> PropertyResult {
        summarize(self.suite, property, tolerance, vec![f()])
    }
}

fn summarize(
    suite: Suite,
    property: &str,
    tolerance: f64,
    outcomes: Vec<Result<f64>>,
) -> PropertyResult {
    let trials = outcomes.len() as u64;
    let mut passed = 0;
    let mut max_residual: f64 = 0.0;
    let mut note = None;
    for outcome in outcomes {
        match outcome {
            Ok(r) if r.is_finite() => {
                max_residual = max_residual.max(r);
                if r <= tolerance {
                    passed += 1;
                }
            }
            Ok(r) => {
                note.get_or_insert_with(|| format!("non-finite residual {r}"));
            }
            Err(e) => {
                note.get_or_insert_with(|| e.to_string());
            }
        }
    }
    PropertyResult {
        suite,
        property: property.to_string(),
        trials,
        passed,
        failed: trials - passed,
        max_residual,
        tolerance,
        pass: passed == trials,
        note,
    }
}

fn dims(ns: &[usize]) -> Vec<ModelDim> {
    ns.iter()
        .map(|&n| ModelDim::new(n).expect("supported model"))
        .collect()
}

const SMALL: [usize; 5] = [2, 3, 4, 6, 8];
const CLASSIFY: [usize; 4] = [2, 3, 4, 6];

fn worst<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    it.into_iter().try_fold(0.0_f64, |acc, r| Ok(acc.max(r?)))
}

/// Runs `f` once for every kind and every model in `ds`.
fn per_kind<'a, F>(
    ds: &'a [ModelDim],
    f: F,
) -> impl Fn(&mut ChaCha8Rng) -> Result<f64> + Sync + Send + 'a
where
    F: Fn(&mut ChaCha8Rng, Kind, ModelDim) -> Result<f64> + Sync + Send + 'a,
{
    move |rng| {
        let mut acc: f64 = 0.0;
        for kind in Kind::ALL {
            for &d in ds {
                acc = acc.max(f(rng, kind, d)?);
            }
        }
        Ok(acc)
    }
}

fn dist(x: &AlgVec, y: &AlgVec) -> f64 {
    (x - y).norm()
}

fn algebra(r: &Runner) -> Vec<PropertyResult> {
    let ds = dims(&SMALL);
    vec![
        r.sweep("jacobi_identity", 1e-12, |rng| {
            worst(ds.iter().map(|&d| {
                let (x, y, z) = (
                    sample::gaussian(rng, d),
                    sample::gaussian(rng, d),
                    sample::gaussian(rng, d),
                );
                let jac = x.bracket(&y.bracket(&z))
                    + y.bracket(&z.bracket(&x))
                    + z.bracket(&x.bracket(&y));
                Ok(jac.norm() / (1.0 + x.norm() * y.norm() * z.norm()))
            }))
        }),
        r.sweep("complex_structure", 1e-14, |rng| {
            worst(ds.iter().map(|&d| {
                let (x, y) = (sample::gaussian(rng, d), sample::gaussian(rng, d));
                let isometry = (x.j().dot(&y.j()) - x.dot(&y)).abs();
                let square = (x.j().j() + x.clone()).max_abs();
                Ok(isometry.max(square))
            }))
        }),
        r.sweep("center_of_n", 0.0, |rng| {
            worst(ds.iter().map(|&d| {
                let mut x = sample::gaussian(rng, d);
                x.set_a(0.0);
                let z = AlgVec::z_unit(d);
                Ok(z.bracket(&x).max_abs().max(x.bracket(&z).max_abs()))
            }))
        }),
        r.sweep("adjoint_series_oracle", 1e-9, |rng| {
            worst(ds.iter().map(|&d| {
                let g = sample::group_element(rng, d, 2.0);
                let y = sample::gaussian(rng, d);
                let series = adjoint_series_oracle(&g, &y, 40)?;
                Ok(dist(&adjoint(&g, &y)?, &series) / series.norm().max(1.0))
            }))
        }),
        r.sweep("adjoint_automorphism", 1e-10, |rng| {
            worst(ds.iter().map(|&d| {
                let g = sample::group_element(rng, d, 2.0);
                let (x, y) = (sample::gaussian(rng, d), sample::gaussian(rng, d));
                Ok(dist(&g.ad(&x.bracket(&y)), &g.ad(&x).bracket(&g.ad(&y))))
            }))
        }),
        r.sweep("adjoint_homomorphism", 1e-10, |rng| {
            worst(ds.iter().map(|&d| {
                let g1 = sample::group_element(rng, d, 2.0);
                let g2 = sample::group_element(rng, d, 2.0);
                let y = sample::gaussian(rng, d);
                Ok(dist(&g1.mul(&g2).ad(&y), &g1.ad(&g2.ad(&y))))
            }))
        }),
        r.sweep("group_inverse", 1e-12, |rng| {
            worst(ds.iter().map(|&d| {
                let g = sample::group_element(rng, d, 2.0);
                Ok(g.mul(&g.inverse())
                    .xi
                    .norm()
                    .max(g.inverse().mul(&g).xi.norm()))
            }))
        }),
    ]
}

fn connection(r: &Runner) -> Vec<PropertyResult> {
    let ds = dims(&SMALL);
    vec![
        r.sweep("koszul_oracle", 1e-12, |rng| {
            worst(ds.iter().map(|&d| {
                let (x, y) = (sample::gaussian(rng, d), sample::gaussian(rng, d));
                Ok(dist(&levi_civita(&x, &y), &koszul_oracle(&x, &y)))
            }))
        }),
        r.sweep("torsion_free", 1e-12, |rng| {
            worst(ds.iter().map(|&d| {
                let (x, y) = (sample::gaussian(rng, d), sample::gaussian(rng, d));
                let torsion = levi_civita(&x, &y) - levi_civita(&y, &x) - x.bracket(&y);
                Ok(torsion.norm())
            }))
        }),
        r.sweep("metric_compatible", 1e-12, |rng| {
            worst(ds.iter().map(|&d| {
                let (x, y, z) = (
                    sample::gaussian(rng, d),
                    sample::gaussian(rng, d),
                    sample::gaussian(rng, d),
                );
                Ok((levi_civita(&x, &y).dot(&z) + y.dot(&levi_civita(&x, &z))).abs())
            }))
        }),
    ]
}

/// `R(x,y)z` of a complex space form of holomorphic curvature `-1`.
fn space_form_curvature(x: &AlgVec, y: &AlgVec, z: &AlgVec) -> AlgVec {
    let (jx, jy, jz) = (x.j(), y.j(), z.j());
    let sum = x.scale(y.dot(z)) - y.scale(x.dot(z)) + jx.scale(jy.dot(z)) - jy.scale(jx.dot(z))
        + jz.scale(2.0 * x.dot(&jy));
    sum.scale(-0.25)
}

fn curvature_suite(r: &Runner) -> Vec<PropertyResult> {
    let ds = dims(&SMALL);
    vec![
        r.sweep("holomorphic_sectional_curvature", 1e-9, |rng| {
            worst(
                ds.iter().map(|&d| {
                    Ok((holomorphic_sectional_curvature(&sample::unit(rng, d)) + 1.0).abs())
                }),
            )
        }),
        r.sweep("complex_space_form", 1e-10, |rng| {
            worst(ds.iter().map(|&d| {
                let (x, y, z) = (
                    sample::unit(rng, d),
                    sample::unit(rng, d),
                    sample::unit(rng, d),
                );
                Ok(dist(
                    &curvature(&x, &y, &z),
                    &space_form_curvature(&x, &y, &z),
                ))
            }))
        }),
    ]
}

fn random_coords(rng: &mut ChaCha8Rng, spec: &SubalgebraSpec, scale: f64) -> StructuredCoords {
    StructuredCoords {
        b: rng.random_range(-scale..=scale),
        t: sample::normal_vec(rng, spec.dim_r)
            .iter()
            .map(|v| v * scale / 2.0)
            .collect(),
        w: sample::normal_vec(rng, 2 * spec.dim_c_prime())
            .iter()
            .map(|v| v * scale / 2.0)
            .collect(),
        y: rng.random_range(-scale..=scale),
    }
}

/// Unit-free random `g`: half the time one with a CR orbit.
fn mixed_element(rng: &mut ChaCha8Rng, spec: &SubalgebraSpec) -> GroupElement {
    if rng.random_bool(0.5) {
        sample::cr_element(rng, spec, 1.0)
    } else {
        sample::group_element(rng, spec.n, 2.0)
    }
}

fn span(d: ModelDim, vectors: &[AlgVec]) -> Result<Subspace> {
    orthonormalize(d, vectors)
}

/// `T` in `r` and `W` in `c'` as algebra vectors.
fn t_and_w(spec: &SubalgebraSpec, coords: &StructuredCoords) -> Result<(AlgVec, AlgVec)> {
    let unit = StructuredCoords {
        b: 0.0,
        t: coords.t.clone(),
        w: coords.w.clone(),
        y: 0.0,
    };
    let parts = spec.split_alpha(&spec.group_element(&unit)?.xi);
    Ok((parts.t(), parts.v))
}

fn theorem_a(r: &Runner) -> Vec<PropertyResult> {
    let ds = dims(&CLASSIFY);
    vec![
        r.sweep(
            "predicate_agreement",
            0.0,
            per_kind(&ds, |rng, kind, d| {
                let spec = sample::spec(rng, kind, d);
                let g = mixed_element(rng, &spec);
                let h = build_subalgebra(&spec)?;
                let g_inv = g.inverse();
                let direct = cr_decompose(&h.map(|v| g_inv.ad(v))).is_cr;
                let (predicate, _) = theorem_a_predicate(&spec, &g)?;
                let report = theorem_a_classify(&OrbitQuery::new(spec, g)?)?;
                Ok(f64::from(u8::from(
                    direct != predicate || report.is_cr != predicate,
                )))
            }),
        ),
        r.sweep("conjugate_r", 1e-9, |rng| {
            worst(ds.iter().map(|&d| {
                let spec = sample::spec(rng, Kind::R, d);
                let coords = random_coords(rng, &spec, 2.0);
                let g = spec.group_element(&coords)?;
                let (t, _) = t_and_w(&spec, &coords)?;
                let z = AlgVec::z_unit(d);
                let mut rhs = spec
                    .r_subspace()
                    .minus(&span(d, std::slice::from_ref(&t))?)
                    .basis()
                    .to_vec();
                rhs.push(t.axpy(-rho(coords.b / 2.0) * t.norm_sq(), &z));
                let lhs = build_subalgebra(&spec)?.map(|v| g.ad(v));
                Ok(lhs.projector_distance(&span(d, &rhs)?))
            }))
        }),
        r.sweep("conjugate_ar", 1e-9, |rng| {
            worst(ds.iter().map(|&d| {
                let spec = sample::spec(rng, Kind::AR, d);
                let coords = random_coords(rng, &spec, 2.0);
                let (t, w) = t_and_w(&spec, &coords)?;
                let g = GroupElement::exp(
                    t.j().scale(2.0) + w.scale(2.0) + AlgVec::z_unit(d).scale(coords.y),
                );
                let (b, z) = (AlgVec::b(d), AlgVec::z_unit(d));
                let mut rhs = spec
                    .r_subspace()
                    .minus(&span(d, std::slice::from_ref(&t))?)
                    .basis()
                    .to_vec();
                rhs.push(&b - &t.j() - w.clone() - z.scale(coords.y));
                rhs.push(t.axpy(-2.0 * t.norm_sq(), &z));
                let lhs = build_subalgebra(&spec)?.map(|v| g.ad(v));
                Ok(lhs.projector_distance(&span(d, &rhs)?))
            }))
        }),
        r.sweep("conjugate_acrz", 1e-9, |rng| {
            worst(ds.iter().map(|&d| {
                let spec = sample::spec(rng, Kind::ACRZ, d);
                let coords = random_coords(rng, &spec, 2.0);
                let (t, w) = t_and_w(&spec, &coords)?;
                let g = GroupElement::exp(t.j().scale(2.0) + w.scale(2.0));
                let mut rhs = vec![&AlgVec::b(d) - &t.j() - w, AlgVec::z_unit(d)];
                rhs.extend_from_slice(spec.c_subspace().basis());
                rhs.extend_from_slice(spec.r_subspace().basis());
                let lhs = build_subalgebra(&spec)?.map(|v| g.ad(v));
                Ok(lhs.projector_distance(&span(d, &rhs)?))
            }))
        }),
        r.sweep(
            "slice_roundtrip",
            1e-10,
            per_kind(&ds, |rng, kind, d| {
                let spec = sample::spec(rng, kind, d);
                let g = sample::group_element(rng, d, 2.0);
                let dec = slice_reduce(&spec, &g)?;
                Ok(dist(
                    &GroupElement::exp(dec.h_part).mul(&dec.slice).xi,
                    &g.xi,
                ))
            }),
        ),
        r.sweep(
            "slice_orthogonal_to_h",
            1e-12,
            per_kind(&ds, |rng, kind, d| {
                let spec = sample::spec(rng, kind, d);
                let g = sample::group_element(rng, d, 2.0);
                let dec = slice_reduce(&spec, &g)?;
                let h = build_subalgebra(&spec)?;
                let across = h
                    .basis()
                    .iter()
                    .map(|e| e.dot(&dec.slice.xi).abs())
                    .fold(0.0, f64::max);
                Ok(across.max(h.residual(&dec.h_part)))
            }),
        ),
        r.sweep(
            "normalization_roundtrip",
            1e-9,
            per_kind(&ds, normalization_trial),
        ),
    ]
}

/// Largest scalar difference of two keys; infinite when kind, dims or
/// length differ.
fn key_distance(k1: &CongruenceKey, k2: &CongruenceKey) -> f64 {
    if k1.kind != k2.kind || k1.dims != k2.dims || k1.scalars.len() != k2.scalars.len() {
        return f64::INFINITY;
    }
    k1.scalars
        .iter()
        .zip(&k2.scalars)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Hides the canonical `h` behind a random `K_0` frame and a conjugation that
/// keeps the orbit through `o` CR, then checks that classifying the disguised
/// orbit agrees with the canonical one.
fn normalization_trial(rng: &mut ChaCha8Rng, kind: Kind, d: ModelDim) -> Result<f64> {
    let spec = sample::spec(rng, kind, d);
    let h = build_subalgebra(&spec)?;
    let frame = sample::unitary_frame(rng, d);
    let g = sample::cr_element(rng, &spec, 1.0);
    let g_inv = g.inverse();
    let raw = frame.apply_subspace(&h.map(|v| g_inv.ad(v)));
    let q = mixed_element(rng, &spec);
    let p = GroupElement::exp(frame.apply(&g_inv.mul(&q).xi));
    let direct = theorem_a_classify(&OrbitQuery::new(spec, q)?)?;
    let disguised = classify_subalgebra(&raw, &p)?;
    if disguised.spec != spec {
        return Err(Error::Inconsistent(format!(
            "normalized to {:?}, expected {spec:?}",
            disguised.spec
        )));
    }
    if direct.type_tag != disguised.type_tag {
        return Ok(f64::INFINITY);
    }
    match (&direct.congruence_key, &disguised.congruence_key) {
        (Some(k1), Some(k2)) => Ok(key_distance(k1, k2)),
        (None, None) => Ok(0.0),
        _ => Ok(f64::INFINITY),
    }
}

fn lemmas(r: &Runner) -> Vec<PropertyResult> {
    let ds = dims(&CLASSIFY);
    vec![
        r.sweep(
            "closed_form_vs_numeric",
            1e-9,
            per_kind(&ds, |rng, kind, d| {
                let spec = sample::spec(rng, kind, d);
                let g = sample::cr_element(rng, &spec, 1.0);
                let closed = closed_form_invariants(&spec, &g)?;
                let g_inv = g.inverse();
                let numeric = orbit_invariants(&build_subalgebra(&spec)?.map(|v| g_inv.ad(v)))?;
                let mut res = (closed.mean_sq - numeric.mean_sq)
                    .abs()
                    .max(dist(&closed.mean_vector, &numeric.mean_curvature_vector));
                if let Some(ii) = closed.second_fundamental_sq {
                    res = res.max((ii - numeric.second_fundamental_sq).abs());
                }
                Ok(res)
            }),
        ),
        r.sweep(
            "mean_vector_norm",
            1e-12,
            per_kind(&ds, |rng, kind, d| {
                let spec = sample::spec(rng, kind, d);
                let closed = closed_form_invariants(&spec, &sample::cr_element(rng, &spec, 1.0))?;
                Ok((closed.mean_vector.norm_sq() - closed.mean_sq).abs() / closed.mean_sq.max(1.0))
            }),
        ),
        r.once("anchor_values", 1e-12, anchors),
        r.sweep("ar_frame_orthonormal", 1e-12, |rng| {
            worst(ds.iter().map(|&d| {
                let w = sample::gaussian(rng, d).alpha_part();
                let y = rng.random_range(-2.0..=2.0);
                let (x, xi1, xi2) = ar_frame(&w, y);
                let xi2 =
                    xi2.ok_or_else(|| Error::Inconsistent("no second normal for W != 0".into()))?;
                let frame = [x, xi1, xi2];
                let mut res: f64 = 0.0;
                for (i, u) in frame.iter().enumerate() {
                    for (j, v) in frame.iter().enumerate() {
                        let target = if i == j { 1.0 } else { 0.0 };
                        res = res.max((u.dot(v) - target).abs());
                    }
                }
                Ok(res)
            }))
        }),
        r.sweep("corollary_consistency", 1e-12, |rng| {
            worst(ds.iter().map(|&d| {
                let spec = sample::spec(rng, Kind::AR, d);
                let w = rng.random_range(0.0..=2.0);
                let y = rng.random_range(-2.0..=2.0);
                let rr = spec.dim_r as f64;
                let (h2, ii2) = ar_closed_forms(w, y, spec.dim_r);
                let (first, second) = corollary_invariants(&spec, w, y)?;
                let mut res = (first - (h2 - ii2))
                    .abs()
                    .max((second - ((rr + 1.0) * ii2 - h2)).abs());
                if spec.dim_r >= 1 {
                    let (f1, f2) = f_profile(y * y, w * w, 3.0 + 2.0 * rr);
                    res = res
                        .max((4.0 * first / (rr * (1.0 + rr)) - f1).abs())
                        .max((4.0 * second / rr - f2).abs());
                }
                Ok(res / h2.max(1.0))
            }))
        }),
        r.sweep(
            "cauchy_schwarz",
            1e-12,
            per_kind(&ds, |rng, kind, d| {
                let spec = sample::spec(rng, kind, d);
                let g = sample::cr_element(rng, &spec, 1.0);
                let g_inv = g.inverse();
                let inv = orbit_invariants(&build_subalgebra(&spec)?.map(|v| g_inv.ad(v)))?;
                Ok((inv.mean_sq - spec.dim_h() as f64 * inv.second_fundamental_sq).max(0.0))
            }),
        ),
        r.once("h_strictly_increasing", 0.0, || {
            let mut violations = 0u32;
            for rr in 1..=8 {
                let mut prev = f64::NEG_INFINITY;
                for i in 0..10_000 {
                    let t = i as f64 * 0.01;
                    let v = h_profile(t, rr);
                    if v <= prev || h_profile_derivative(t, rr) <= 0.0 {
                        violations += 1;
                    }
                    prev = v;
                }
            }
            Ok(f64::from(violations))
        }),
        r.sweep_n("f_roundtrip", 1000, 1e-9, |rng| {
            let z = rng.random_range(0.0..=10.0);
            let w = rng.random_range(0.0..=10.0);
            worst([5.0, 7.0, 11.0].into_iter().map(|a| {
                let (c1, c2) = f_profile(z, w, a);
                let (z2, w2) = f_profile_inverse(c1, c2, a)?;
                Ok((z2 - z).abs().max((w2 - w).abs()))
            }))
        }),
    ]
}

/// Exact anchor values of the mean curvature, numerically and in closed form.
fn anchors() -> Result<f64> {
    let mut res: f64 = 0.0;
    for d in dims(&[2, 3, 4, 5, 6]) {
        let cap = d.alpha_complex_dim();
        for kind in Kind::ALL {
            for c in 0..=cap {
                for r in 0..=cap {
                    let Ok(spec) = SubalgebraSpec::new(kind, c, r, d) else {
                        continue;
                    };
                    let anchor = match kind {
                        Kind::R => (r * r) as f64 / 4.0,
                        Kind::CRZ => (2.0 + spec.dim_cr() as f64).powi(2) / 4.0,
                        Kind::AR | Kind::ACRZ => 0.0,
                    };
                    let mut points = vec![GroupElement::identity(d)];
                    if matches!(kind, Kind::R | Kind::CRZ) {
                        let coords = StructuredCoords {
                            b: 0.7,
                            t: vec![0.0; spec.dim_r],
                            w: (0..2 * spec.dim_c_prime())
                                .map(|i| 0.3 - 0.1 * i as f64)
                                .collect(),
                            y: -0.4,
                        };
                        points.push(spec.group_element(&coords)?);
                    }
                    for g in points {
                        res = res
                            .max((mean_sq(&spec, &g)? - anchor).abs())
                            .max((closed_form_invariants(&spec, &g)?.mean_sq - anchor).abs());
                    }
                }
            }
        }
    }
    Ok(res)
}

/// Structured coordinates of a CR orbit of `spec`, with `b = 0` when `B`
/// lies in `h`.
fn cr_coords(rng: &mut ChaCha8Rng, spec: &SubalgebraSpec, scale: f64) -> StructuredCoords {
    let mut coords = random_coords(rng, spec, scale);
    if spec.kind.has_a() {
        coords.b = 0.0;
    }
    match spec.kind {
        Kind::AR => coords.t.iter_mut().for_each(|t| *t = 0.0),
        Kind::ACRZ => coords.w.iter_mut().for_each(|w| *w = 0.0),
        Kind::R | Kind::CRZ => {}
    }
    coords
}

/// Unit vector of length `len` in a random direction, scaled to `norm`.
fn with_norm(rng: &mut ChaCha8Rng, len: usize, norm: f64) -> Vec<f64> {
    if len == 0 {
        return Vec::new();
    }
    let v = loop {
        let v = sample::normal_vec(rng, len);
        if v.iter().map(|x| x * x).sum::<f64>() > 1e-6 {
            break v;
        }
    };
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x * norm / n).collect()
}

fn vec_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Second point with the same congruence key as `coords`.
fn congruent_coords(
    rng: &mut ChaCha8Rng,
    spec: &SubalgebraSpec,
    coords: &StructuredCoords,
) -> StructuredCoords {
    let mut other = cr_coords(rng, spec, 2.0);
    match spec.kind {
        Kind::R => {
            let iota = reduced_displacement(coords.b, vec_norm(&coords.t));
            other.t = with_norm(rng, spec.dim_r, iota / rho(-other.b / 2.0));
        }
        Kind::CRZ => {}
        Kind::AR => {
            other.w = with_norm(rng, coords.w.len(), vec_norm(&coords.w));
            other.y = if rng.random_bool(0.5) {
                coords.y
            } else {
                -coords.y
            };
        }
        Kind::ACRZ => other.t = with_norm(rng, spec.dim_r, vec_norm(&coords.t)),
    }
    other
}

/// `Exp(X_h) g(coords)` for random `X_h` in `h`.
fn disguise(
    rng: &mut ChaCha8Rng,
    spec: &SubalgebraSpec,
    coords: &StructuredCoords,
) -> Result<GroupElement> {
    let xh = sample::in_subalgebra(rng, spec, 1.0);
    Ok(GroupElement::exp(xh).mul(&spec.group_element(coords)?))
}

/// Scalars recovered from the numeric extrinsic geometry of the orbit, in the
/// squared form the key encodes: `iota^2` (I), `(y^2, |W|^2)` (III), `|T|^2`
/// (IV).
fn recovered_invariants(spec: &SubalgebraSpec, g: &GroupElement) -> Result<Vec<f64>> {
    let g_inv = g.inverse();
    let inv = orbit_invariants(&build_subalgebra(spec)?.map(|v| g_inv.ad(v)))?;
    let r = spec.dim_r as f64;
    match spec.kind {
        Kind::R => Ok(vec![h_profile_inverse(inv.mean_sq, spec.dim_r)?]),
        Kind::CRZ => Ok(Vec::new()),
        Kind::AR => {
            let (h2, ii2) = (inv.mean_sq, inv.second_fundamental_sq);
            let c1 = 4.0 * (h2 - ii2) / (r * (1.0 + r));
            let c2 = 4.0 * ((r + 1.0) * ii2 - h2) / r;
            let (z, w) = f_profile_inverse(c1, c2, 3.0 + 2.0 * r)?;
            Ok(vec![w, z])
        }
        Kind::ACRZ => {
            let a = (3.0 + spec.dim_cr() as f64).powi(2) / 4.0;
            Ok(vec![4.0 * inv.mean_sq / (a - inv.mean_sq)])
        }
    }
}

/// The key scalars in the squared form of [`recovered_invariants`].
fn squared_key(key: &CongruenceKey) -> Vec<f64> {
    match key.kind {
        crate::classification::TypeTag::III => {
            vec![key.scalars[0].powi(2) / 4.0, key.scalars[1].powi(2)]
        }
        _ => key.scalars.iter().map(|s| s * s).collect(),
    }
}

fn congruence(r: &Runner) -> (Vec<PropertyResult>, Option<DisplacementReport>) {
    let ds = dims(&CLASSIFY);
    let pick_dim = |rng: &mut ChaCha8Rng| ds[rng.random_range(0..ds.len())];
    let cr_query = |rng: &mut ChaCha8Rng, kind: Kind, d: ModelDim| -> Result<OrbitQuery> {
        let spec = sample::spec(rng, kind, d);
        let coords = cr_coords(rng, &spec, 2.0);
        OrbitQuery::new(spec, disguise(rng, &spec, &coords)?)
    };
    let mut props = vec![
        r.sweep("kind_ii_always_congruent", 0.0, |rng| {
            let d = pick_dim(rng);
            let spec = sample::spec(rng, Kind::CRZ, d);
            let q1 = OrbitQuery::new(spec, sample::group_element(rng, d, 2.0))?;
            let q2 = OrbitQuery::new(spec, sample::group_element(rng, d, 2.0))?;
            Ok(f64::from(u8::from(
                !theorem_b_congruent(&q1, &q2)?.congruent,
            )))
        }),
        r.sweep("kind_iii_sign_symmetry", 0.0, |rng| {
            let d = pick_dim(rng);
            let spec = sample::spec(rng, Kind::AR, d);
            let mut coords = cr_coords(rng, &spec, 2.0);
            let k1 = congruence_key(&spec, &spec.group_element(&coords)?)?;
            coords.y = -coords.y;
            let k2 = congruence_key(&spec, &spec.group_element(&coords)?)?;
            Ok(if k1 == k2 {
                0.0
            } else {
                key_distance(&k1, &k2).max(f64::MIN_POSITIVE)
            })
        }),
        r.sweep("congruent_pairs_equal_mean_sq", 1e-9, |rng| {
            worst(Kind::ALL.into_iter().map(|kind| {
                let d = pick_dim(rng);
                let spec = sample::spec(rng, kind, d);
                let c1 = cr_coords(rng, &spec, 2.0);
                let c2 = congruent_coords(rng, &spec, &c1);
                let (g1, g2) = (disguise(rng, &spec, &c1)?, disguise(rng, &spec, &c2)?);
                let verdict = theorem_b_congruent(
                    &OrbitQuery::new(spec, g1.clone())?,
                    &OrbitQuery::new(spec, g2.clone())?,
                )?;
                if !verdict.congruent {
                    return Err(Error::Inconsistent(format!(
                        "constructed congruent pair judged {}",
                        verdict.reason
                    )));
                }
                Ok((mean_sq(&spec, &g1)? - mean_sq(&spec, &g2)?).abs())
            }))
        }),
        r.sweep("same_kind_separation", 1e-9, |rng| {
            worst([Kind::R, Kind::AR, Kind::ACRZ].into_iter().map(|kind| {
                let d = pick_dim(rng);
                let spec = loop {
                    let s = sample::spec(rng, kind, d);
                    if s.dim_r >= 1 {
                        break s;
                    }
                };
                let (c1, c2) = (cr_coords(rng, &spec, 2.0), cr_coords(rng, &spec, 2.0));
                let q1 = OrbitQuery::new(spec, disguise(rng, &spec, &c1)?)?;
                let q2 = OrbitQuery::new(spec, disguise(rng, &spec, &c2)?)?;
                let verdict = theorem_b_congruent(&q1, &q2)?;
                let mut res: f64 = 0.0;
                let mut recovered = Vec::new();
                for (q, key) in [&q1, &q2].into_iter().zip(&verdict.keys) {
                    let inv = recovered_invariants(&spec, &q.g)?;
                    for (x, k) in inv.iter().zip(squared_key(key)) {
                        res = res.max((x - k).abs());
                    }
                    recovered.push(inv);
                }
                let gap = recovered[0]
                    .iter()
                    .zip(&recovered[1])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                if !verdict.congruent && gap <= 1e-9 {
                    return Err(Error::Inconsistent(
                        "non-congruent pair not separated by its invariants".into(),
                    ));
                }
                Ok(res)
            }))
        }),
        r.sweep("cross_kind_non_congruent", 0.0, |rng| {
            let mut wrong = 0u32;
            for k1 in Kind::ALL {
                for k2 in Kind::ALL {
                    if k1 == k2 {
                        continue;
                    }
                    let d = pick_dim(rng);
                    let (q1, q2) = (cr_query(rng, k1, d)?, cr_query(rng, k2, d)?);
                    wrong += u32::from(theorem_b_congruent(&q1, &q2)?.congruent);
                }
            }
            Ok(f64::from(wrong))
        }),
        r.sweep("kind_i_key_matches_oracle", 1e-9, |rng| {
            let d = pick_dim(rng);
            let spec = sample::spec(rng, Kind::R, d);
            let g = sample::cr_element(rng, &spec, 1.0);
            let key = congruence_key(&spec, &g)?;
            let oracle = h_profile_inverse(mean_sq(&spec, &g)?, spec.dim_r)?;
            Ok((key.scalars[0].powi(2) - oracle).abs())
        }),
        r.sweep("key_block_invariance", 1e-12, |rng| {
            worst(Kind::ALL.into_iter().map(|kind| {
                let d = pick_dim(rng);
                let spec = sample::spec(rng, kind, d);
                let coords = cr_coords(rng, &spec, 2.0);
                let mut moved = coords.clone();
                moved.t.shuffle(rng);
                let mut slots: Vec<[f64; 2]> = coords.w.chunks(2).map(|c| [c[0], c[1]]).collect();
                slots.shuffle(rng);
                moved.w = slots
                    .iter()
                    .flat_map(|&[re, im]| {
                        let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                        let (s, c) = phase.sin_cos();
                        [c * re - s * im, s * re + c * im]
                    })
                    .collect();
                let k1 = congruence_key(&spec, &spec.group_element(&coords)?)?;
                let k2 = congruence_key(&spec, &spec.group_element(&moved)?)?;
                Ok(key_distance(&k1, &k2))
            }))
        }),
        r.once("moduli_space", 0.0, moduli_check),
    ];

    let samples: Vec<(f64, f64)> = (0..=12)
        .flat_map(|i| (0..=8).map(move |j| (-3.0 + 0.5 * i as f64, 0.25 * j as f64)))
        .collect();
    let tolerance = 1e-9;
    let (displacement, prop) = match audit_displacement(&samples, tolerance) {
        Ok(audits) => {
            let consistent: Vec<&DisplacementAudit> =
                audits.iter().filter(|a| a.consistent).collect();
            let selected =
                (consistent.len() == 1).then(|| (consistent[0].form, consistent[0].convention));
            let report = DisplacementReport {
                samples: samples.len(),
                tolerance,
                audits: audits.clone(),
                selected,
            };
            let mut prop = r.once("kind_i_displacement_form", 0.0, || {
                Ok((consistent.len() as f64 - 1.0).abs())
            });
            prop.note = Some(match selected {
                Some((form, convention)) => {
                    format!("selected {form:?} under the {convention:?} convention")
                }
                None => format!("{} consistent forms", consistent.len()),
            });
            (Some(report), prop)
        }
        Err(e) => (None, r.once("kind_i_displacement_form", 0.0, || Err(e))),
    };
    props.push(prop);
    (props, displacement)
}

fn moduli_check() -> Result<f64> {
    use IndexElement::{Pair, Single};
    let singles = |k: usize| (1..=k).map(Single).collect::<Vec<_>>();
    let expected: [(usize, Vec<Vec<IndexElement>>); 3] = [
        (
            2,
            vec![
                vec![Single(1)],
                vec![Pair(0, 0), Pair(0, 1), Pair(1, 1)],
                vec![],
                vec![Single(1)],
                vec![Single(1)],
                vec![Pair(1, 1)],
            ],
        ),
        (
            3,
            vec![
                singles(2),
                vec![
                    Pair(0, 0),
                    Pair(0, 1),
                    Pair(0, 2),
                    Pair(1, 1),
                    Pair(1, 2),
                    Pair(2, 2),
                ],
                vec![],
                singles(2),
                singles(2),
                vec![Pair(1, 1), Pair(1, 2), Pair(2, 2)],
            ],
        ),
        (
            5,
            vec![
                singles(4),
                vec![
                    Pair(0, 0),
                    Pair(0, 1),
                    Pair(0, 2),
                    Pair(0, 3),
                    Pair(0, 4),
                    Pair(1, 1),
                    Pair(1, 2),
                    Pair(1, 3),
                    Pair(1, 4),
                    Pair(2, 2),
                    Pair(2, 3),
                    Pair(2, 4),
                    Pair(3, 3),
                    Pair(3, 4),
                    Pair(4, 4),
                ],
                vec![],
                singles(4),
                singles(4),
                vec![
                    Pair(1, 1),
                    Pair(1, 2),
                    Pair(1, 3),
                    Pair(1, 4),
                    Pair(2, 2),
                    Pair(2, 3),
                    Pair(2, 4),
                    Pair(3, 3),
                    Pair(3, 4),
                    Pair(4, 4),
                ],
            ],
        ),
    ];
    let half_lines = [1, 0, 1, 2, 0, 1];
    let mut wrong = 0u32;
    for (n, elements) in expected {
        let comps = moduli_space(n)?;
        wrong += u32::from(comps.len() != elements.len());
        for ((comp, els), hl) in comps.iter().zip(&elements).zip(half_lines) {
            wrong += u32::from(&comp.elements != els || comp.half_lines != hl);
        }
    }
    wrong += u32::from(moduli_space(1).is_ok());
    Ok(f64::from(wrong))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(
                serde_json::to_string(&s).unwrap(),
                format!("\"{}\"", s.name())
            );
        }
        assert!("theorema".parse::<Suite>().is_err());
    }

    #[test]
    fn failures_are_counted() {
        let r = summarize(
            Suite::Algebra,
            "p",
            1e-3,
            vec![
                Ok(1e-4),
                Ok(1.0),
                Err(Error::Unsupported("x".into())),
                Ok(f64::NAN),
            ],
        );
        assert_eq!((r.trials, r.passed, r.failed), (4, 1, 3));
        assert_eq!(r.max_residual, 1.0);
        assert!(!r.pass);
        assert_eq!(r.note.as_deref(), Some("unsupported: x"));
    }
}
