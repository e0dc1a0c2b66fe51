//! Serialization round trips, report determinism, and generator honesty.

use tvlab::generate::{
    generate_colorful_instance, generate_holmsen_instance,
    generate_matroid_intersecting_instance, generate_pierced_instance, ColorfulMode,
    ColorfulParams, PiercedParams,
};
use tvlab::spec::{InstanceSpec, MatroidSpec};
use tvlab::suite::{run_suite, SuiteConfig, SuiteName};
use tvlab_core::geometry::flat_meets_polytope;
use tvlab_core::hypothesis::{check_colorful_helly, check_matroid_intersections, check_holmsen};
use tvlab_core::scalar::Field;

fn sample_specs() -> Vec<InstanceSpec> {
    let mut specs = Vec::new();
    for seed in 0..40u64 {
        specs.push(
            generate_pierced_instance(
                seed,
                &PiercedParams {
                    field: if seed % 3 == 0 { Field::Complex } else { Field::Real },
                    d: if seed % 3 == 0 { 1 } else { 2 },
                    k: if seed % 3 == 0 { 0 } else { 1 },
                    r: if seed % 3 == 0 { 0 } else { 1 },
                    n: 3 + (seed % 3) as usize,
                    vertices_per_set: 1 + (seed % 4) as usize,
                    spread: 5,
                },
            )
            .unwrap(),
        );
    }
    for seed in 0..30u64 {
        specs.push(
            generate_colorful_instance(
                seed,
                &ColorfulParams {
                    d: 1 + (seed % 2) as usize,
                    classes: 2 + (seed % 2) as usize,
                    sets_per_class: 2,
                    mode: if seed % 5 == 4 {
                        ColorfulMode::HypothesisFalse
                    } else {
                        ColorfulMode::HypothesisTrue
                    },
                    vertices_per_set: 3,
                    spread: 4,
                },
            )
            .unwrap(),
        );
    }
    for seed in 0..30u64 {
        specs.push(
            generate_matroid_intersecting_instance(
                seed,
                2,
                &MatroidSpec::Uniform { rank: 2 + (seed % 2) as usize, n: 4 + (seed % 3) as usize },
            )
            .unwrap(),
        );
    }
    specs
}

#[test]
fn instance_specs_roundtrip_field_for_field() {
    let specs = sample_specs();
    assert!(specs.len() >= 100);
    for (i, spec) in specs.iter().enumerate() {
        let json = spec.to_json();
        let back = InstanceSpec::from_json(&json).unwrap();
        assert_eq!(&back, spec, "spec {i} does not round-trip");
        // and the reloaded spec still validates into an instance
        back.to_instance().unwrap_or_else(|e| panic!("spec {i} fails validation: {e}"));
    }
}

#[test]
fn reports_are_deterministic_for_fixed_seed() {
    for (suite, count) in [(SuiteName::Helly, 3), (SuiteName::MainTheorem, 3), (SuiteName::C1, 4)] {
        let mut cfg = SuiteConfig::new(suite, 0xfeed);
        cfg.count = Some(count);
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        assert_eq!(
            a.deterministic_body(),
            b.deterministic_body(),
            "suite {suite:?} is not deterministic"
        );
    }
}

#[test]
fn generators_are_honest_on_load() {
    // hypothesis-true instances re-validate; planted flats re-verify
    for seed in 100..110u64 {
        let spec = generate_colorful_instance(
            seed,
            &ColorfulParams {
                d: 1,
                classes: 2,
                sets_per_class: 3,
                mode: ColorfulMode::HypothesisTrue,
                vertices_per_set: 3,
                spread: 5,
            },
        )
        .unwrap();
        let inst = InstanceSpec::from_json(&spec.to_json()).unwrap().to_instance().unwrap();
        assert!(check_colorful_helly(&inst).unwrap().verdict.is_exact());
    }
    for seed in 100..110u64 {
        let spec = generate_pierced_instance(
            seed,
            &PiercedParams {
                field: Field::Real,
                d: 2,
                k: 1,
                r: 1,
                n: 5,
                vertices_per_set: 4,
                spread: 4,
            },
        )
        .unwrap();
        let inst = spec.to_instance().unwrap();
        let flat = spec
            .provenance
            .ground_truth_flat
            .as_ref()
            .expect("pierced instances carry their flat")
            .to_flat(inst.field)
            .unwrap();
        for (i, p) in inst.polytopes.iter().enumerate() {
            assert!(
                flat_meets_polytope(&flat, p).unwrap().is_feasible(),
                "seed {seed}: ground-truth flat misses set {i}"
            );
        }
    }
    for seed in 100..105u64 {
        let spec = generate_matroid_intersecting_instance(
            seed,
            2,
            &MatroidSpec::Partition { classes: vec![vec![0, 1], vec![2, 3], vec![4]] },
        )
        .unwrap();
        let inst = spec.to_instance().unwrap();
        assert!(check_matroid_intersections(&inst).unwrap().verdict.is_exact());
    }
    for seed in 100..105u64 {
        for r in [0usize, 1] {
            let spec = generate_holmsen_instance(
                seed,
                r,
                4,
                &MatroidSpec::Uniform { rank: 3, n: 4 },
            )
            .unwrap();
            let inst = spec.to_instance().unwrap();
            assert!(check_holmsen(&inst).unwrap().verdict.is_exact());
        }
    }
}
