//! Acceptance suite: one test per criterion. Each test prints a single
//! `[PASS]` line on success (visible with `--nocapture`); a failing
//! criterion fails its test. Run with
//! `cargo test -p tvlab --test acceptance -- --nocapture`.

use std::sync::OnceLock;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use tvlab::report::{ReportRecord, RunReport};
use tvlab::suite::{run_suite, SuiteConfig, SuiteName};
use tvlab_core::complexes::{reduced_homology, SimplicialComplex};
use tvlab_core::geometry::{Instance, Polytope};
use tvlab_core::hypothesis::{
    check_models_dependencies, pullback_feasible, Refutation, SamplingPolicy, Verdict,
};
use tvlab_core::lp::{lp_feasible, lp_stats, LinearSystem, Rel};
use tvlab_core::matroid::Matroid;
use tvlab_core::scalar::{rat, Field, Scalar};
use tvlab_core::transversal::{find_line_transversal_2d, TransversalResult};

const MASTER_SEED: u64 = 20240;

fn instance_records(report: &RunReport) -> Vec<(&str, &Option<String>, &Option<String>, &Value)> {
    report
        .records
        .iter()
        .filter_map(|r| match r {
            ReportRecord::Instance { id, hypothesis, conclusion, detail, .. } => {
                Some((id.as_str(), hypothesis, conclusion, detail))
            }
            _ => None,
        })
        .collect()
}

fn summary(report: &RunReport) -> (usize, usize, usize, usize, usize) {
    match report.summary() {
        Some(ReportRecord::Summary { total, passed, refuted, inconclusive, violations, .. }) => {
            (*total, *passed, *refuted, *inconclusive, *violations)
        }
        _ => panic!("report has no summary"),
    }
}

#[test]
fn criterion_1_colorful_helly() {
    let start = Instant::now();
    let cfg = SuiteConfig::new(SuiteName::Helly, MASTER_SEED);
    let report = run_suite(&cfg).expect("helly suite runs");
    let elapsed = start.elapsed();

    let (total, passed, refuted, inconclusive, violations) = summary(&report);
    assert_eq!(total, 200);
    assert_eq!((refuted, inconclusive, violations), (0, 0, 0));
    assert_eq!(passed, 200);
    for (id, hypothesis, conclusion, detail) in instance_records(&report) {
        assert_eq!(hypothesis.as_deref(), Some("HOLDS_EXACT"), "{id}");
        assert_eq!(conclusion.as_deref(), Some("PASS"), "{id}");
        assert!(
            !detail["color"].is_null(),
            "{id}: no monochromatic class reported"
        );
    }
    assert!(
        elapsed.as_secs() < 300,
        "helly suite took {elapsed:?}, limit is five minutes"
    );
    println!(
        "[PASS] criterion 1: 200/200 colorful instances hold exactly and yield a \
         monochromatic class with a common point in {elapsed:?}"
    );
}

#[test]
fn criterion_2_kalai_meshulam() {
    let cfg = SuiteConfig::new(SuiteName::KalaiMeshulam, MASTER_SEED);
    let report = run_suite(&cfg).expect("kalai-meshulam suite runs");
    let (total, passed, ..) = summary(&report);
    assert_eq!(total, 100);
    assert_eq!(passed, 100);
    for (id, hypothesis, conclusion, detail) in instance_records(&report) {
        assert_eq!(hypothesis.as_deref(), Some("HOLDS_EXACT"), "{id}");
        assert_eq!(conclusion.as_deref(), Some("PASS"), "{id}");
        assert_eq!(detail["bound"], 2, "{id}: rank bound is the dimension");
        assert!(detail["rank_removed"].as_u64().unwrap() <= 2, "{id}");
    }
    println!(
        "[PASS] criterion 2: 100/100 matroidal intersection instances yield a common \
         point with removed rank at most 2"
    );
}

#[test]
fn criterion_3_holmsen() {
    let cfg = SuiteConfig::new(SuiteName::Holmsen, MASTER_SEED);
    let report = run_suite(&cfg).expect("holmsen suite runs");
    let (total, passed, ..) = summary(&report);
    assert_eq!(total, 100);
    assert_eq!(passed, 100);
    for (id, hypothesis, conclusion, detail) in instance_records(&report) {
        assert_eq!(hypothesis.as_deref(), Some("HOLDS_EXACT"), "{id}");
        assert_eq!(conclusion.as_deref(), Some("PASS"), "{id}");
        let bound = detail["bound"].as_u64().unwrap();
        assert!(bound <= 2, "{id}: bound is r+1 with r in {{0,1}}");
        assert!(detail["rank_removed"].as_u64().unwrap() <= bound, "{id}");
    }
    println!(
        "[PASS] criterion 3: 100/100 hull-implication instances admit a line \
         transversal with removed rank at most r+1 via the exact sweep"
    );
}

#[test]
fn criterion_4_main_theorem() {
    let cfg = SuiteConfig::new(SuiteName::MainTheorem, MASTER_SEED);
    let report = run_suite(&cfg).expect("main-theorem suite runs");
    let (_, _, refuted, _, violations) = summary(&report);
    assert_eq!(refuted, 0, "no pierced instance may refute its hypothesis");
    assert_eq!(violations, 0, "zero theorem-violation fails");

    let records = instance_records(&report);
    let phase = |prefix: &str| -> Vec<_> {
        records.iter().filter(|(id, ..)| id.starts_with(prefix)).collect()
    };

    let a = phase("main-a-");
    assert_eq!(a.len(), 100);
    for (id, hypothesis, conclusion, detail) in &a {
        let h = hypothesis.as_deref().unwrap();
        assert!(h.starts_with("HOLDS"), "{id}: hypothesis must hold, got {h}");
        assert_eq!(conclusion.as_deref(), Some("PASS"), "{id}");
        assert_eq!(detail["bound"], 2, "{id}: (d−k)(r+1) = 2");
    }

    let b = phase("main-b-");
    assert_eq!(b.len(), 50);
    let mut found = 0;
    for (id, hypothesis, conclusion, _) in &b {
        assert!(hypothesis.as_deref().unwrap().starts_with("HOLDS"), "{id}");
        match conclusion.as_deref() {
            Some("PASS") => found += 1,
            Some("INCONCLUSIVE") => {}
            other => panic!("{id}: unexpected conclusion {other:?}"),
        }
    }
    assert!(
        found * 10 >= b.len() * 9,
        "heuristic FOUND rate {found}/{} below 90%",
        b.len()
    );

    let c = phase("main-c-");
    assert_eq!(c.len(), 50);
    for (id, hypothesis, conclusion, detail) in &c {
        assert!(hypothesis.as_deref().unwrap().starts_with("HOLDS"), "{id}");
        assert_eq!(conclusion.as_deref(), Some("PASS"), "{id}");
        assert_eq!(detail["bound"], 2, "{id}: complex bound 2·1·1 = 2");
    }

    println!(
        "[PASS] criterion 4: (a) 100/100 planar pass exactly, (b) heuristic found \
         {found}/50 with the rest inconclusive and zero fails, (c) 50/50 complex pass"
    );
}

fn topology_report() -> &'static RunReport {
    static REPORT: OnceLock<RunReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let cfg = SuiteConfig::new(SuiteName::Topology, MASTER_SEED);
        run_suite(&cfg).expect("topology suite runs")
    })
}

#[test]
fn criterion_5_join_connectivity() {
    let start = Instant::now();
    let report = topology_report();
    let elapsed = start.elapsed();

    let (total, passed, _, _, violations) = summary(report);
    assert!(total >= 100, "fleet has only {total} matroids");
    assert_eq!(violations, 0);
    assert_eq!(passed, total);
    let mut joins = 0usize;
    for (id, _, conclusion, detail) in instance_records(report) {
        assert_eq!(conclusion.as_deref(), Some("PASS"), "{id}");
        for row in detail["joins"].as_array().unwrap() {
            joins += 1;
            assert_eq!(row["meets_bound"], true, "{id}: {row}");
        }
    }
    assert!(
        elapsed.as_secs() < 600,
        "topology suite took {elapsed:?}, limit is ten minutes"
    );
    println!(
        "[PASS] criterion 5: {joins} matroidal joins over {total} matroids are all \
         homologically (rank−2)-connected in {elapsed:?}"
    );
}

#[test]
fn criterion_6_parallel_extensions() {
    let report = topology_report();
    let (total, ..) = summary(report);
    let mut extensions = 0usize;
    for (id, _, _, detail) in instance_records(report) {
        for row in detail["joins"].as_array().unwrap() {
            extensions += 1;
            assert_eq!(row["rank_preserved"], true, "{id}: {row}");
            assert_eq!(row["axioms"], true, "{id}: {row}");
        }
    }
    // facet identity between the discrete join and the extension's
    // independence complex is asserted inside every join construction
    println!(
        "[PASS] criterion 6: {extensions} parallel extensions over {total} matroids \
         preserve rank, satisfy the axioms, and match the join facet-for-facet"
    );
}

#[test]
fn criterion_7_certificate_soundness() {
    let before = lp_stats();
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED ^ 0xce27);
    let mut infeasible = 0u64;
    for _ in 0..1200 {
        let n_vars = rng.random_range(1..=4);
        let mut sys = LinearSystem::new(n_vars);
        for v in 0..n_vars {
            if rng.random_bool(0.5) {
                sys.set_nonneg(v);
            }
        }
        for _ in 0..rng.random_range(1..=6) {
            let coeffs: Vec<_> = (0..n_vars)
                .map(|_| rat(rng.random_range(-8..=8), rng.random_range(1..=4)))
                .collect();
            let rel = match rng.random_range(0..3) {
                0 => Rel::Le,
                1 => Rel::Ge,
                _ => Rel::Eq,
            };
            sys.push(coeffs, rel, rat(rng.random_range(-8..=8), rng.random_range(1..=4)));
        }
        if let tvlab_core::lp::LpOutcome::Infeasible(cert) = lp_feasible(&sys) {
            infeasible += 1;
            assert!(cert.verify(&sys), "certificate failed re-validation");
        }
    }
    let after = lp_stats();
    let calls = after.calls - before.calls;
    assert!(calls >= 1000, "only {calls} solver calls made");
    assert_eq!(after.certificate_failures, 0, "certificate validation failed somewhere");
    assert!(infeasible > 0);
    println!(
        "[PASS] criterion 7: {calls} solver calls, {infeasible} infeasible answers, \
         every certificate re-validated exactly, zero failures"
    );
}

#[test]
fn criterion_8_refutation_path() {
    // noncollinear singleton sets with collinear phi-images
    let points = [(0i64, 0i64), (1, 5), (2, 0)];
    let polys: Vec<Polytope> = points
        .iter()
        .map(|&(x, y)| {
            Polytope::point(Field::Real, vec![Scalar::from_int(x), Scalar::from_int(y)]).unwrap()
        })
        .collect();
    let inst = Instance::new(
        Field::Real,
        2,
        1,
        1,
        polys,
        None,
        Matroid::uniform(3, 3).unwrap(),
        vec![
            vec![Scalar::from_int(0)],
            vec![Scalar::from_int(1)],
            vec![Scalar::from_int(2)],
        ],
    )
    .unwrap();

    let report =
        check_models_dependencies(&inst, &SamplingPolicy { samples: 4, seed: MASTER_SEED })
            .expect("check runs");
    let Verdict::Refuted(Refutation::DependencyPullback { tuple, certificate }) = report.verdict
    else {
        panic!("collinear phi over a bent family must be refuted");
    };
    // the witness re-runs to the same exact infeasibility
    let again = pullback_feasible(&inst, &tuple).expect("witness re-checks");
    assert!(!again.is_feasible());
    assert!(!certificate.multipliers.is_empty());

    // and no line passes through the three designated points
    match find_line_transversal_2d(&inst, &[0, 1, 2]).expect("sweep runs") {
        TransversalResult::NotFoundExact { .. } => {}
        other => panic!("three noncollinear points admit no line, got {other:?}"),
    }
    println!(
        "[PASS] criterion 8: the bent family is refuted with an exact witness tuple \
         and the degenerate singletons admit no line"
    );
}

#[test]
fn criterion_9_homology_oracle_equivalence() {
    // rational boundary-rank Betti oracle, independent of the Smith route
    fn betti_oracle(k: &SimplicialComplex) -> Vec<usize> {
        let dim = k.dim();
        let mut ranks = vec![0usize; dim + 2];
        ranks[0] = 1; // augmentation
        for q in 1..=dim {
            ranks[q] = k.boundary_matrix(q).to_qmatrix().rank();
        }
        (0..=dim)
            .map(|q| k.faces(q).len() - ranks[q] - ranks[q + 1])
            .collect()
    }

    let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED ^ 0x9090);
    for round in 0..50 {
        let verts = rng.random_range(4..=10usize);
        let facet_count = rng.random_range(3..=7);
        let facets: Vec<std::collections::BTreeSet<usize>> = (0..facet_count)
            .map(|_| {
                let size = rng.random_range(1..=4.min(verts));
                let mut f = std::collections::BTreeSet::new();
                while f.len() < size {
                    f.insert(rng.random_range(0..verts));
                }
                f
            })
            .collect();
        let complex = SimplicialComplex::from_facets(facets).unwrap();
        let profile = reduced_homology(&complex).unwrap();
        let oracle = betti_oracle(&complex);
        for (q, expected) in oracle.iter().enumerate() {
            assert_eq!(
                profile.group(q).betti,
                *expected,
                "round {round}: Betti mismatch in degree {q}"
            );
        }
    }

    // torsion path: the six-vertex projective plane
    let rp2 = SimplicialComplex::from_facets(
        [
            [0usize, 1, 2].as_slice(),
            &[0, 1, 3],
            &[0, 2, 4],
            &[0, 3, 5],
            &[0, 4, 5],
            &[1, 2, 5],
            &[1, 3, 4],
            &[1, 4, 5],
            &[2, 3, 4],
            &[2, 3, 5],
        ]
        .iter()
        .map(|f| f.iter().copied().collect())
        .collect(),
    )
    .unwrap();
    let profile = reduced_homology(&rp2).unwrap();
    assert_eq!(profile.group(1).betti, 0);
    assert_eq!(profile.group(1).torsion, vec![num_bigint::BigInt::from(2)]);
    println!(
        "[PASS] criterion 9: Smith-form homology matches the rational rank oracle on \
         50 random complexes and reproduces the Z/2 torsion of the projective plane"
    );
}
