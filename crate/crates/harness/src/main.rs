use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tvlab::report::digest_debug;
use tvlab::spec::{ComplexSpec, FlatSpec, InstanceSpec, MatroidSpec};
use tvlab::suite::{generation_plan, run_suite, Artifact, SuiteConfig, SuiteName};
use tvlab_core::complexes::{
    homological_connectivity, matroidal_join_discrete, reduced_homology, Connectivity,
};
use tvlab_core::hypothesis::{
    c1_holds, check_colorful_helly, check_matroid_intersections, check_models_dependencies,
    check_holmsen, C1Verdict, SamplingPolicy, Verdict,
};
use tvlab_core::transversal::{
    find_transversal, verify_theorem_conclusion, ConclusionVerdict, SearchBudget,
    TransversalResult,
};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "tvlab", version, about = "Exact workbench for geometric transversal checks")]
struct Cli {
    /// Worker threads for suites (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Master seed for all randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report destination (defaults to stdout).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a suite's generated artifacts as JSON files.
    Generate {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Run one hypothesis check against an instance file.
    Check {
        #[arg(long)]
        instance: PathBuf,
        /// helly | matroid | holmsen | models-deps | c1
        #[arg(long)]
        condition: String,
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Search for a k-flat transversal of (a subset of) an instance.
    Find {
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated indices; all sets when omitted.
        #[arg(long)]
        subset: Option<String>,
        /// Restart budget for the heuristic finder.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Verify the rank-bounded conclusion for an instance.
    VerifyTheorem {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Matroidal join of discrete fibers: homology and connectivity bound.
    Topology {
        #[arg(long)]
        matroid: PathBuf,
        /// Comma-separated fiber sizes, one per matroid element.
        #[arg(long)]
        sizes: String,
    },
    /// Reduced integer homology of a complex file.
    Homology {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Run a full suite and write its JSONL report.
    Suite {
        #[arg(long)]
        name: String,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn read_instance(path: &Path) -> Result<(InstanceSpec, tvlab_core::geometry::Instance)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let spec = InstanceSpec::from_json(&text)?;
    let inst = spec.to_instance()?;
    Ok((spec, inst))
}

fn emit(cli: &Cli, text_lines: &[String], json_value: serde_json::Value) -> Result<()> {
    let body = match cli.format {
        Format::Text => text_lines.join("\n") + "\n",
        Format::Json => serde_json::to_string_pretty(&json_value)? + "\n",
    };
    match &cli.output {
        Some(path) => std::fs::write(path, body)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{body}"),
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Generate { suite, out, count } => {
            let name: SuiteName = suite.parse()?;
            let mut cfg = SuiteConfig::new(name, cli.seed);
            cfg.count = *count;
            cfg.jobs = cli.jobs;
            let plan = generation_plan(&cfg)?;
            std::fs::create_dir_all(out)
                .with_context(|| format!("creating {}", out.display()))?;
            let mut lines = Vec::new();
            for item in &plan {
                let (file, body) = match &item.artifact {
                    Artifact::Instance { spec, .. } => {
                        (format!("{}.json", item.id), spec.to_json())
                    }
                    Artifact::MatroidJoin { spec, sizes_list, .. } => (
                        format!("{}.json", item.id),
                        serde_json::to_string_pretty(&json!({
                            "matroid": spec,
                            "sizes": sizes_list,
                        }))?,
                    ),
                    Artifact::C1Case { spec, sigma, z } => (
                        format!("{}.json", item.id),
                        serde_json::to_string_pretty(&json!({
                            "instance": spec,
                            "sigma": sigma,
                            "z": z,
                        }))?,
                    ),
                };
                let path = out.join(&file);
                std::fs::write(&path, body)
                    .with_context(|| format!("writing {}", path.display()))?;
                lines.push(format!("wrote {}", path.display()));
            }
            emit(cli, &lines, json!({ "written": plan.len(), "dir": out }))?;
            Ok(EXIT_OK)
        }

        Command::Check { instance, condition, samples } => {
            let (_, inst) = read_instance(instance)?;
            let (label, holds, detail) = match condition.as_str() {
                "helly" => {
                    let r = check_colorful_helly(&inst)?;
                    (verdict_text(&r.verdict), r.verdict.holds(), json!({ "log_entries": r.log.len() }))
                }
                "matroid" => {
                    let r = check_matroid_intersections(&inst)?;
                    (verdict_text(&r.verdict), r.verdict.holds(), json!({ "log_entries": r.log.len() }))
                }
                "holmsen" => {
                    let r = check_holmsen(&inst)?;
                    (verdict_text(&r.verdict), r.verdict.holds(), json!({ "log_entries": r.log.len() }))
                }
                "models-deps" => {
                    let r = check_models_dependencies(
                        &inst,
                        &SamplingPolicy { samples: *samples, seed: cli.seed },
                    )?;
                    (verdict_text(&r.verdict), r.verdict.holds(), json!({ "log_entries": r.log.len(), "seed": r.seed }))
                }
                "c1" => {
                    // alternating-sign vectors over a maximal independent set
                    let sigma: Vec<usize> = inst
                        .matroid
                        .maximal_independent_sets()
                        .first()
                        .map(|s| s.iter().copied().collect())
                        .unwrap_or_default();
                    if sigma.is_empty() {
                        bail!("instance has no independent sets");
                    }
                    let rows = inst.d - inst.k;
                    let z: Vec<Vec<tvlab_core::scalar::Scalar>> = sigma
                        .iter()
                        .enumerate()
                        .map(|(p, _)| {
                            (0..rows)
                                .map(|j| {
                                    tvlab_core::scalar::Scalar::from_int(if (p + j) % 2 == 0 {
                                        1
                                    } else {
                                        -1
                                    })
                                })
                                .collect()
                        })
                        .collect();
                    match c1_holds(&inst, &sigma, &z)? {
                        C1Verdict::Holds { certificate } => (
                            "HOLDS".to_string(),
                            true,
                            json!({ "sigma": sigma, "certificate_digest": digest_debug(&certificate) }),
                        ),
                        C1Verdict::Fails { witness } => (
                            "FAILS".to_string(),
                            false,
                            json!({ "sigma": sigma, "witness_digest": digest_debug(&witness) }),
                        ),
                    }
                }
                other => bail!("unknown condition {other:?}"),
            };
            emit(
                cli,
                &[format!("{condition}: {label}")],
                json!({ "condition": condition, "verdict": label, "detail": detail }),
            )?;
            Ok(if holds { EXIT_OK } else { EXIT_NEGATIVE })
        }

        Command::Find { instance, subset, budget } => {
            let (_, inst) = read_instance(instance)?;
            let subset: Vec<usize> = match subset {
                Some(s) => parse_indices(s)?,
                None => (0..inst.len()).collect(),
            };
            let budget = SearchBudget {
                restarts: budget.unwrap_or(12),
                iterations: 80,
                seed: cli.seed,
            };
            let result = find_transversal(&inst, &subset, &budget)?;
            let (label, code, detail) = match &result {
                TransversalResult::Found { flat, witnesses, method } => (
                    "FOUND",
                    EXIT_OK,
                    json!({
                        "method": format!("{method:?}"),
                        "flat": FlatSpec::from_flat(flat),
                        "witness_digest": digest_debug(witnesses),
                    }),
                ),
                TransversalResult::NotFoundExact { method, .. } => (
                    "NOT_FOUND_EXACT",
                    EXIT_NEGATIVE,
                    json!({ "method": format!("{method:?}") }),
                ),
                TransversalResult::Inconclusive { restarts_used, .. } => (
                    "INCONCLUSIVE",
                    EXIT_NEGATIVE,
                    json!({ "restarts_used": restarts_used }),
                ),
            };
            emit(cli, &[format!("find: {label}")], json!({ "verdict": label, "detail": detail }))?;
            Ok(code)
        }

        Command::VerifyTheorem { instance, budget } => {
            let (_, inst) = read_instance(instance)?;
            let budget = SearchBudget {
                restarts: budget.unwrap_or(12),
                iterations: 80,
                seed: cli.seed,
            };
            let report = verify_theorem_conclusion(&inst, &budget)?;
            let (label, code) = match report.verdict {
                ConclusionVerdict::Pass => ("PASS", EXIT_OK),
                ConclusionVerdict::Inconclusive => ("INCONCLUSIVE", EXIT_NEGATIVE),
                ConclusionVerdict::Fail => ("FAIL", EXIT_VIOLATION),
            };
            emit(
                cli,
                &[
                    format!("verify-theorem: {label}"),
                    format!("  bound {}", report.bound),
                    format!("  removed {:?} (rank {})", report.removed, report.rank_removed),
                    format!("  kept {:?}", report.kept),
                    format!(
                        "  color {}",
                        report.color.map_or("-".into(), |c| c.to_string())
                    ),
                ],
                json!({
                    "verdict": label,
                    "bound": report.bound,
                    "removed": report.removed,
                    "rank_removed": report.rank_removed,
                    "kept": report.kept,
                    "color": report.color,
                    "flat": report.flat.as_ref().map(FlatSpec::from_flat),
                }),
            )?;
            Ok(code)
        }

        Command::Topology { matroid, sizes } => {
            let text = std::fs::read_to_string(matroid)
                .with_context(|| format!("reading {}", matroid.display()))?;
            // accept either a bare matroid spec or a generated suite file
            // wrapping it under a "matroid" key
            let spec: MatroidSpec = serde_json::from_str(&text).or_else(|_| {
                let wrapper: serde_json::Value = serde_json::from_str(&text)?;
                serde_json::from_value(wrapper["matroid"].clone())
            })?;
            let m = spec.build()?;
            let sizes = parse_indices(sizes)?;
            if sizes.len() != m.ground().len() {
                bail!(
                    "need {} fiber sizes, got {}",
                    m.ground().len(),
                    sizes.len()
                );
            }
            let join = matroidal_join_discrete(&m, &sizes)?;
            let profile = reduced_homology(&join)?;
            let conn = homological_connectivity(&join)?;
            let bound_ok = conn.at_least(m.rank() as i64 - 2);
            let conn_str = match &conn {
                Connectivity::Disconnected => "disconnected".to_string(),
                Connectivity::UpTo(c) => format!("up to {c}"),
                Connectivity::Acyclic => "acyclic".to_string(),
            };
            let mut lines = vec![
                format!("rank {}", m.rank()),
                format!("join: {} vertices, {} facets", join.vertices().len(), join.facets().len()),
                format!("connectivity: {conn_str} (bound rank-2 = {}) {}",
                    m.rank() as i64 - 2,
                    if bound_ok { "ok" } else { "VIOLATED" }),
            ];
            for (q, g) in profile.groups().iter().enumerate() {
                lines.push(format!(
                    "H~{q}: Z^{} {}",
                    g.betti,
                    if g.torsion.is_empty() {
                        String::new()
                    } else {
                        format!("+ torsion {:?}", g.torsion)
                    }
                ));
            }
            emit(
                cli,
                &lines,
                json!({
                    "rank": m.rank(),
                    "connectivity": conn_str,
                    "bound_ok": bound_ok,
                    "homology": profile
                        .groups()
                        .iter()
                        .map(|g| json!({
                            "betti": g.betti,
                            "torsion": g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                        }))
                        .collect::<Vec<_>>(),
                }),
            )?;
            Ok(if bound_ok { EXIT_OK } else { EXIT_VIOLATION })
        }

        Command::Homology { complex } => {
            let text = std::fs::read_to_string(complex)
                .with_context(|| format!("reading {}", complex.display()))?;
            let spec: ComplexSpec = serde_json::from_str(&text)?;
            let k = spec.to_complex()?;
            let profile = reduced_homology(&k)?;
            let mut lines = Vec::new();
            for (q, g) in profile.groups().iter().enumerate() {
                lines.push(format!(
                    "H~{q}: Z^{}{}",
                    g.betti,
                    if g.torsion.is_empty() {
                        String::new()
                    } else {
                        format!(" + torsion {:?}", g.torsion)
                    }
                ));
            }
            emit(
                cli,
                &lines,
                json!({
                    "homology": profile
                        .groups()
                        .iter()
                        .map(|g| json!({
                            "betti": g.betti,
                            "torsion": g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                        }))
                        .collect::<Vec<_>>(),
                }),
            )?;
            Ok(EXIT_OK)
        }

        Command::Suite { name, count, samples } => {
            let suite: SuiteName = name.parse()?;
            let mut cfg = SuiteConfig::new(suite, cli.seed);
            cfg.count = *count;
            cfg.jobs = cli.jobs;
            cfg.samples = *samples;
            let report = run_suite(&cfg)?;
            let body = report.to_jsonl();
            match &cli.output {
                Some(path) => std::fs::write(path, &body)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{body}"),
            }
            let code = report.exit_code();
            Ok(code.clamp(0, u8::MAX as i32) as u8)
        }
    }
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::HoldsExact => "HOLDS_EXACT".into(),
        Verdict::HoldsSampled { tuples_tested } => format!("HOLDS_SAMPLED({tuples_tested})"),
        Verdict::Refuted(_) => "REFUTED".into(),
    }
}

fn parse_indices(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<usize>().context("parsing index list"))
        .collect()
}
