//! Experiment suites: generation plans, parallel execution, and JSONL
//! reports. Each suite generates its instances from a master seed, runs
//! the matching hypothesis check and conclusion verification, and records
//! one deterministic line per instance.

use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use tvlab_core::complexes::{homological_connectivity, matroidal_join_discrete, Connectivity};
use tvlab_core::hypothesis::{
    c1_holds, check_colorful_helly, check_matroid_intersections, check_models_dependencies,
    check_holmsen, C1Verdict, SamplingPolicy, Verdict,
};
use tvlab_core::lp::lp_stats;
use tvlab_core::scalar::{rat, unit_circle_point, Field, Scalar};
use tvlab_core::transversal::{verify_theorem_conclusion, ConclusionVerdict, SearchBudget};

use crate::generate::{
    generate_colorful_instance, generate_holmsen_instance,
    generate_matroid_intersecting_instance, generate_pierced_instance, matroid_fleet,
    ColorfulMode, ColorfulParams, PiercedParams,
};
use crate::report::{digest_debug, ReportRecord, RunReport};
use crate::spec::{point_to_spec, InstanceSpec, MatroidSpec, ScalarSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    Helly,
    KalaiMeshulam,
    Holmsen,
    MainTheorem,
    Topology,
    C1,
}

impl SuiteName {
    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::Helly => "helly",
            SuiteName::KalaiMeshulam => "kalai-meshulam",
            SuiteName::Holmsen => "holmsen",
            SuiteName::MainTheorem => "main-theorem",
            SuiteName::Topology => "topology",
            SuiteName::C1 => "c1",
        }
    }
}

impl FromStr for SuiteName {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "helly" => SuiteName::Helly,
            "kalai-meshulam" => SuiteName::KalaiMeshulam,
            "holmsen" => SuiteName::Holmsen,
            "main-theorem" => SuiteName::MainTheorem,
            "topology" => SuiteName::Topology,
            "c1" => SuiteName::C1,
            other => bail!("unknown suite {other:?}"),
        })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: SuiteName,
    pub seed: u64,
    /// Overrides the per-suite default instance count.
    pub count: Option<usize>,
    pub jobs: usize,
    /// Random tuples per independent set in the dependency checker.
    pub samples: usize,
}

impl SuiteConfig {
    pub fn new(suite: SuiteName, seed: u64) -> Self {
        SuiteConfig { suite, seed, count: None, jobs: 0, samples: 3 }
    }
}

/// One generated artifact of a suite plan.
#[derive(Debug, Clone)]
pub enum Artifact {
    /// An instance plus the name of the hypothesis check to run on it.
    Instance { spec: InstanceSpec, check: CheckKind },
    /// A matroid together with discrete fiber-size vectors for the join.
    MatroidJoin { name: String, spec: MatroidSpec, sizes_list: Vec<Vec<usize>> },
    /// A triviality-condition case.
    C1Case { spec: InstanceSpec, sigma: Vec<usize>, z: Vec<Vec<ScalarSpec>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    ColorfulHelly,
    MatroidIntersections,
    HullImplication,
    ModelsDependencies,
}

#[derive(Debug, Clone)]
pub struct PlanItem {
    pub id: String,
    pub seed: u64,
    pub artifact: Artifact,
}

fn default_count(suite: SuiteName) -> usize {
    match suite {
        SuiteName::Helly => 200,
        SuiteName::KalaiMeshulam => 100,
        SuiteName::Holmsen => 100,
        SuiteName::MainTheorem => 200,
        SuiteName::Topology => 0, // fleet-driven
        SuiteName::C1 => 60,
    }
}

/// The deterministic generation plan of a suite.
pub fn generation_plan(cfg: &SuiteConfig) -> Result<Vec<PlanItem>> {
    let count = cfg.count.unwrap_or_else(|| default_count(cfg.suite));
    let mut items = Vec::new();
    match cfg.suite {
        SuiteName::Helly => {
            for i in 0..count {
                let seed = cfg.seed.wrapping_add(i as u64);
                let d = 1 + i % 2;
                let params = ColorfulParams {
                    d,
                    classes: d + 1,
                    sets_per_class: 2 + i % 3,
                    mode: ColorfulMode::HypothesisTrue,
                    vertices_per_set: 3,
                    spread: 5,
                };
                let spec = generate_colorful_instance(seed, &params)?;
                items.push(PlanItem {
                    id: format!("helly-{i:04}"),
                    seed,
                    artifact: Artifact::Instance { spec, check: CheckKind::ColorfulHelly },
                });
            }
        }
        SuiteName::KalaiMeshulam => {
            // uniform, partition and linear backends only
            let fleet: Vec<(String, MatroidSpec)> = matroid_fleet(8, 4, cfg.seed)
                .into_iter()
                .filter(|(_, spec)| !matches!(spec, MatroidSpec::Explicit { .. }))
                .filter(|(_, spec)| spec.build().map(|m| m.ground().len() >= 2).unwrap_or(false))
                .collect();
            for i in 0..count {
                let seed = cfg.seed.wrapping_add(1000 + i as u64);
                let (_, matroid) = &fleet[i % fleet.len()];
                let spec = generate_matroid_intersecting_instance(seed, 2, matroid)?;
                items.push(PlanItem {
                    id: format!("kalai-meshulam-{i:04}"),
                    seed,
                    artifact: Artifact::Instance {
                        spec,
                        check: CheckKind::MatroidIntersections,
                    },
                });
            }
        }
        SuiteName::Holmsen => {
            let fleet: Vec<(String, MatroidSpec)> = matroid_fleet(6, 3, cfg.seed)
                .into_iter()
                .filter(|(_, spec)| {
                    spec.build()
                        .map(|m| (4..=6).contains(&m.ground().len()))
                        .unwrap_or(false)
                })
                .collect();
            for i in 0..count {
                let seed = cfg.seed.wrapping_add(2000 + i as u64);
                let r = i % 2;
                let (_, matroid) = &fleet[i % fleet.len()];
                let n = matroid.build()?.ground().len();
                let spec = generate_holmsen_instance(seed, r, n, matroid)?;
                items.push(PlanItem {
                    id: format!("holmsen-{i:04}"),
                    seed,
                    artifact: Artifact::Instance { spec, check: CheckKind::HullImplication },
                });
            }
        }
        SuiteName::MainTheorem => {
            // three phases: planar lines, spatial lines (heuristic), complex points
            let (a, b, c) = if let Some(total) = cfg.count {
                let a = (total / 2).max(1);
                let b = (total.saturating_sub(a) / 2).max(1);
                let c = total.saturating_sub(a + b).max(1);
                (a, b, c)
            } else {
                (100, 50, 50)
            };
            for i in 0..a {
                let seed = cfg.seed.wrapping_add(3000 + i as u64);
                let spec = generate_pierced_instance(
                    seed,
                    &PiercedParams {
                        field: Field::Real,
                        d: 2,
                        k: 1,
                        r: 1,
                        n: 6,
                        vertices_per_set: 4,
                        spread: 4,
                    },
                )?;
                items.push(PlanItem {
                    id: format!("main-a-{i:04}"),
                    seed,
                    artifact: Artifact::Instance { spec, check: CheckKind::ModelsDependencies },
                });
            }
            for i in 0..b {
                let seed = cfg.seed.wrapping_add(4000 + i as u64);
                let spec = generate_pierced_instance(
                    seed,
                    &PiercedParams {
                        field: Field::Real,
                        d: 3,
                        k: 1,
                        r: 1,
                        n: 5,
                        vertices_per_set: 4,
                        spread: 4,
                    },
                )?;
                items.push(PlanItem {
                    id: format!("main-b-{i:04}"),
                    seed,
                    artifact: Artifact::Instance { spec, check: CheckKind::ModelsDependencies },
                });
            }
            for i in 0..c {
                let seed = cfg.seed.wrapping_add(5000 + i as u64);
                let spec = generate_pierced_instance(
                    seed,
                    &PiercedParams {
                        field: Field::Complex,
                        d: 1,
                        k: 0,
                        r: 0,
                        n: 4,
                        vertices_per_set: 3,
                        spread: 3,
                    },
                )?;
                items.push(PlanItem {
                    id: format!("main-c-{i:04}"),
                    seed,
                    artifact: Artifact::Instance { spec, check: CheckKind::ModelsDependencies },
                });
            }
        }
        SuiteName::Topology => {
            let fleet = matroid_fleet(8, 4, cfg.seed);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x746f706f);
            for (idx, (name, spec)) in fleet.into_iter().enumerate() {
                let matroid = spec.build()?;
                let n = matroid.ground().len();
                let sizes_list: Vec<Vec<usize>> = if n <= 3 {
                    // all fiber-size vectors with entries up to three
                    let mut all = vec![Vec::new()];
                    for _ in 0..n {
                        let mut grown = Vec::new();
                        for v in &all {
                            for s in 1..=3usize {
                                let mut next = v.clone();
                                next.push(s);
                                grown.push(next);
                            }
                        }
                        all = grown;
                    }
                    all
                } else {
                    // seeded vectors, total extension size capped for homology
                    let vectors = if n <= 6 { 2 } else { 1 };
                    (0..vectors)
                        .map(|_| {
                            let mut sizes: Vec<usize> =
                                (0..n).map(|_| rng.random_range(1..=3)).collect();
                            while sizes.iter().sum::<usize>() > 10 {
                                let argmax = (0..n)
                                    .max_by_key(|&p| sizes[p])
                                    .expect("nonempty sizes");
                                sizes[argmax] -= 1;
                            }
                            sizes
                        })
                        .collect()
                };
                items.push(PlanItem {
                    id: format!("topology-{idx:04}-{name}"),
                    seed: cfg.seed,
                    artifact: Artifact::MatroidJoin { name, spec, sizes_list },
                });
            }
        }
        SuiteName::C1 => {
            for i in 0..count {
                let seed = cfg.seed.wrapping_add(6000 + i as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let field = if i % 3 == 2 { Field::Complex } else { Field::Real };
                let (d, k) = if i % 2 == 0 { (2, 1) } else { (3, 1) };
                let spec = generate_pierced_instance(
                    seed,
                    &PiercedParams {
                        field,
                        d,
                        k,
                        r: k,
                        n: 3,
                        vertices_per_set: 3,
                        spread: 4,
                    },
                )?;
                let inst = spec.to_instance()?;
                let sigma: Vec<usize> = (0..inst.matroid.rank().min(3)).collect();
                let rows = d - k;
                let z: Vec<Vec<ScalarSpec>> = sigma
                    .iter()
                    .map(|_| loop {
                        let zl: Vec<Scalar> = (0..rows)
                            .map(|_| match field {
                                Field::Real => Scalar::from_int(rng.random_range(-1i64..=1)),
                                Field::Complex => {
                                    if rng.random_bool(0.25) {
                                        Scalar::zero()
                                    } else {
                                        let t = rat(
                                            rng.random_range(-3i64..=3),
                                            rng.random_range(1i64..=3),
                                        );
                                        unit_circle_point(&t)
                                    }
                                }
                            })
                            .collect();
                        if zl.iter().any(|e| !e.is_zero()) {
                            break point_to_spec(&zl);
                        }
                    })
                    .collect();
                items.push(PlanItem {
                    id: format!("c1-{i:04}"),
                    seed,
                    artifact: Artifact::C1Case { spec, sigma, z },
                });
            }
        }
    }
    Ok(items)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OutcomeClass {
    Pass,
    Refuted,
    Inconclusive,
    Violation,
}

struct ItemOutcome {
    record: ReportRecord,
    class: OutcomeClass,
}

fn verdict_label(v: &Verdict) -> String {
    match v {
        Verdict::HoldsExact => "HOLDS_EXACT".into(),
        Verdict::HoldsSampled { tuples_tested } => format!("HOLDS_SAMPLED({tuples_tested})"),
        Verdict::Refuted(_) => "REFUTED".into(),
    }
}

fn conclusion_label(v: ConclusionVerdict) -> String {
    match v {
        ConclusionVerdict::Pass => "PASS".into(),
        ConclusionVerdict::Fail => "FAIL".into(),
        ConclusionVerdict::Inconclusive => "INCONCLUSIVE".into(),
    }
}

fn run_item(item: &PlanItem, samples: usize) -> Result<ItemOutcome> {
    let start = Instant::now();
    let outcome = match &item.artifact {
        Artifact::Instance { spec, check } => {
            let inst = spec.to_instance()?;
            let report = match check {
                CheckKind::ColorfulHelly => check_colorful_helly(&inst)?,
                CheckKind::MatroidIntersections => check_matroid_intersections(&inst)?,
                CheckKind::HullImplication => check_holmsen(&inst)?,
                CheckKind::ModelsDependencies => check_models_dependencies(
                    &inst,
                    &SamplingPolicy { samples, seed: item.seed },
                )?,
            };
            let hypothesis = verdict_label(&report.verdict);
            let budget = SearchBudget { restarts: 10, iterations: 60, seed: item.seed };
            let conclusion = verify_theorem_conclusion(&inst, &budget)?;
            let class = if !report.verdict.holds() {
                OutcomeClass::Refuted
            } else {
                match conclusion.verdict {
                    ConclusionVerdict::Pass => OutcomeClass::Pass,
                    ConclusionVerdict::Inconclusive => OutcomeClass::Inconclusive,
                    ConclusionVerdict::Fail => OutcomeClass::Violation,
                }
            };
            let detail = json!({
                "removed": conclusion.removed,
                "kept": conclusion.kept,
                "rank_removed": conclusion.rank_removed,
                "bound": conclusion.bound,
                "color": conclusion.color,
                "flat_digest": conclusion.flat.as_ref().map(digest_debug),
                "witness_digest": digest_debug(&conclusion.witnesses),
            });
            ItemOutcome {
                record: ReportRecord::Instance {
                    id: item.id.clone(),
                    hypothesis: Some(hypothesis),
                    conclusion: Some(conclusion_label(conclusion.verdict)),
                    detail,
                    timing_ms: start.elapsed().as_millis() as u64,
                },
                class,
            }
        }
        Artifact::MatroidJoin { name, spec, sizes_list } => {
            let matroid = spec.build()?;
            let rank = matroid.rank();
            let mut rows = Vec::new();
            let mut ok = true;
            for sizes in sizes_list {
                let join = matroidal_join_discrete(&matroid, sizes)?;
                let conn = homological_connectivity(&join)?;
                let meets_bound = conn.at_least(rank as i64 - 2);
                ok &= meets_bound;

                let extension = matroid.parallel_extension(sizes)?;
                let rank_preserved = extension.rank() == rank;
                let axioms = extension.verify_axioms()?.passed;
                ok &= rank_preserved && axioms;

                rows.push(json!({
                    "sizes": sizes,
                    "connectivity": match conn {
                        Connectivity::Disconnected => "disconnected".to_string(),
                        Connectivity::UpTo(c) => format!("up-to-{c}"),
                        Connectivity::Acyclic => "acyclic".to_string(),
                    },
                    "meets_bound": meets_bound,
                    "rank_preserved": rank_preserved,
                    "axioms": axioms,
                }));
            }
            ItemOutcome {
                record: ReportRecord::Instance {
                    id: item.id.clone(),
                    hypothesis: None,
                    conclusion: Some(if ok { "PASS".into() } else { "FAIL".into() }),
                    detail: json!({ "matroid": name, "rank": rank, "joins": rows }),
                    timing_ms: start.elapsed().as_millis() as u64,
                },
                class: if ok { OutcomeClass::Pass } else { OutcomeClass::Violation },
            }
        }
        Artifact::C1Case { spec, sigma, z } => {
            let inst = spec.to_instance()?;
            let zs: Result<Vec<Vec<Scalar>>, _> = z
                .iter()
                .map(|zl| zl.iter().map(|e| e.to_scalar()).collect::<Result<Vec<_>, _>>())
                .collect();
            let verdict = c1_holds(&inst, sigma, &zs?)?;
            let (label, detail) = match &verdict {
                C1Verdict::Holds { certificate } => (
                    "HOLDS",
                    json!({ "sigma": sigma, "certificate_digest": digest_debug(certificate) }),
                ),
                C1Verdict::Fails { witness } => (
                    "FAILS",
                    json!({ "sigma": sigma, "witness_digest": digest_debug(witness) }),
                ),
            };
            ItemOutcome {
                record: ReportRecord::Instance {
                    id: item.id.clone(),
                    hypothesis: Some(label.into()),
                    conclusion: None,
                    detail,
                    timing_ms: start.elapsed().as_millis() as u64,
                },
                class: OutcomeClass::Pass,
            }
        }
    };
    Ok(outcome)
}

/// Runs a full suite: generation, checks, verification, report assembly.
/// Instances run in parallel (bounded by `jobs` when nonzero) and records
/// are emitted in plan order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<RunReport> {
    let plan = generation_plan(cfg)?;
    let stats_before = lp_stats();

    let run_all = || -> Result<Vec<ItemOutcome>> {
        plan.par_iter().map(|item| run_item(item, cfg.samples)).collect()
    };
    let outcomes = if cfg.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()?
            .install(run_all)?
    } else {
        run_all()?
    };

    let stats_after = lp_stats();
    let mut records = vec![ReportRecord::Header {
        suite: cfg.suite.as_str().to_string(),
        seed: cfg.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: json!({ "count": cfg.count, "samples": cfg.samples }),
    }];
    let mut passed = 0;
    let mut refuted = 0;
    let mut inconclusive = 0;
    let mut violations = 0;
    for o in &outcomes {
        match o.class {
            OutcomeClass::Pass => passed += 1,
            OutcomeClass::Refuted => refuted += 1,
            OutcomeClass::Inconclusive => inconclusive += 1,
            OutcomeClass::Violation => violations += 1,
        }
    }
    records.extend(outcomes.into_iter().map(|o| o.record));
    records.push(ReportRecord::Summary {
        total: plan.len(),
        passed,
        refuted,
        inconclusive,
        violations,
        lp_calls: stats_after.calls - stats_before.calls,
        certificates_verified: stats_after.certificates_verified
            - stats_before.certificates_verified,
        certificate_failures: stats_after.certificate_failures
            - stats_before.certificate_failures,
    });
    Ok(RunReport { records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_helly_suite_passes() {
        let mut cfg = SuiteConfig::new(SuiteName::Helly, 11);
        cfg.count = Some(4);
        let report = run_suite(&cfg).unwrap();
        assert_eq!(report.exit_code(), 0);
        let body = report.deterministic_body();
        let again = run_suite(&cfg).unwrap();
        assert_eq!(body, again.deterministic_body(), "suite runs are deterministic");
    }

    #[test]
    fn empty_suite_is_empty_report() {
        let mut cfg = SuiteConfig::new(SuiteName::Helly, 1);
        cfg.count = Some(0);
        let report = run_suite(&cfg).unwrap();
        assert_eq!(report.exit_code(), 0);
        assert_eq!(report.records.len(), 2, "header and summary only");
    }

    #[test]
    fn tiny_c1_suite_runs() {
        let mut cfg = SuiteConfig::new(SuiteName::C1, 3);
        cfg.count = Some(6);
        let report = run_suite(&cfg).unwrap();
        assert_eq!(report.exit_code(), 0);
    }
}
