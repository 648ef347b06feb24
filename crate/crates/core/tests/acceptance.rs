//! One pass/fail line per acceptance criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use crorbit::congruence::{moduli_space, Convention};
use crorbit::verify::{run, Suite, VerifyConfig, VerifyReport};

const SEED: u64 = 20_240_601;

struct Timed {
    report: VerifyReport,
    elapsed: Duration,
}

fn timed(suite: Suite) -> Timed {
    let config = VerifyConfig {
        seed: SEED,
        ..VerifyConfig::default()
    };
    let start = Instant::now();
    let report = run(suite, &config);
    Timed {
        report,
        elapsed: start.elapsed(),
    }
}

struct Line {
    pass: bool,
    detail: String,
}

/// All named properties pass and the suite ran within `limit`.
fn check(t: &Timed, names: &[&str], limit: Duration) -> Line {
    let mut pass = t.elapsed < limit;
    let mut parts = Vec::new();
    for name in names {
        match t.report.property(name) {
            Some(p) => {
                pass &= p.pass;
                parts.push(format!(
                    "{name} {}/{} max {:.2e} (tol {:.0e})",
                    p.passed, p.trials, p.max_residual, p.tolerance
                ));
            }
            None => {
                pass = false;
                parts.push(format!("{name} missing"));
            }
        }
    }
    parts.push(format!(
        "{:.0} ms < {} ms",
        t.elapsed.as_secs_f64() * 1e3,
        limit.as_millis()
    ));
    Line {
        pass,
        detail: parts.join("; "),
    }
}

fn moduli_line() -> Line {
    let start = Instant::now();
    let mut pass = true;
    let two = moduli_space(2).expect("n = 2");
    pass &= two[1].elements.len() == 3;
    pass &= serde_json::to_string(&two[4].elements).unwrap() == "[1]";
    pass &= serde_json::to_string(&two[5].elements).unwrap() == "[[1,1]]" && two[5].half_lines == 1;
    for n in [3, 5] {
        let comps = moduli_space(n).expect("n >= 2");
        pass &= comps[0].elements.len() == n - 1 && comps[0].half_lines == 1;
        pass &= comps[1].elements.len() == n * (n + 1) / 2;
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_millis(100);
    Line {
        pass,
        detail: format!(
            "I_(0,1) has {} elements; IV for n=2 is {{1}} + {{(1,1)}} x [0,inf); {:.2} ms",
            two[1].elements.len(),
            elapsed.as_secs_f64() * 1e3
        ),
    }
}

fn main() -> ExitCode {
    let ms = Duration::from_millis;
    let algebra = timed(Suite::Algebra);
    let connection = timed(Suite::Connection);
    let curvature = timed(Suite::Curvature);
    let theorem_a = timed(Suite::TheoremA);
    let lemmas = timed(Suite::Lemmas4x);
    let congruence = timed(Suite::Congruence);

    let mut c9 = check(
        &congruence,
        &[
            "congruent_pairs_equal_mean_sq",
            "same_kind_separation",
            "cross_kind_non_congruent",
            "kind_i_displacement_form",
        ],
        ms(10_000),
    );
    match &congruence.report.displacement {
        Some(d) => {
            c9.pass &= d.selected.is_some();
            c9.detail.push_str(&format!(
                "; selected {:?}; consistent candidates: {} with g's coordinates, {} with g^-1's",
                d.selected,
                d.consistent_under(Convention::Direct),
                d.consistent_under(Convention::Inverse)
            ));
        }
        None => {
            c9.pass = false;
            c9.detail.push_str("; displacement audit missing");
        }
    }

    let lines = [
        (
            "algebra suite",
            check(&algebra, &["jacobi_identity"], ms(1000)),
        ),
        (
            "adjoint oracle",
            check(
                &algebra,
                &["adjoint_series_oracle", "adjoint_homomorphism"],
                ms(2000),
            ),
        ),
        (
            "connection suite",
            check(
                &connection,
                &["koszul_oracle", "torsion_free", "metric_compatible"],
                ms(1000),
            ),
        ),
        (
            "curvature normalization",
            check(&curvature, &["holomorphic_sectional_curvature"], ms(1000)),
        ),
        (
            "theorem A equivalence",
            check(
                &theorem_a,
                &[
                    "predicate_agreement",
                    "conjugate_r",
                    "conjugate_ar",
                    "conjugate_acrz",
                ],
                ms(5000),
            ),
        ),
        (
            "slice reduction",
            check(
                &theorem_a,
                &["slice_roundtrip", "slice_orthogonal_to_h"],
                ms(2000),
            ),
        ),
        (
            "closed-form invariants",
            check(
                &lemmas,
                &["closed_form_vs_numeric", "anchor_values"],
                ms(5000),
            ),
        ),
        (
            "injectivity certificates",
            check(&lemmas, &["h_strictly_increasing", "f_roundtrip"], ms(1000)),
        ),
        ("theorem B soundness", c9),
        ("moduli space", moduli_line()),
    ];

    let mut all = true;
    for (i, (name, line)) in lines.iter().enumerate() {
        all &= line.pass;
        println!(
            "criterion {:>2} {} {name}: {}",
            i + 1,
            if line.pass { "PASS" } else { "FAIL" },
            line.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
