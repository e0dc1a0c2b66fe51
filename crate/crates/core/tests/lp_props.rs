//! Solver-level properties: every infeasible answer re-validates its
//! Farkas certificate (counted over a thousand seeded calls), geometric
//! predicates are permutation-invariant and monotone, shadow sets are
//! sign-flip invariant, and the flat/point predicates agree at k = 0.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tvlab_core::geometry::{
    affine_dependency_kernel, compute_shadow_set, flat_meets_polytope, polytopes_intersect, Flat,
    Instance, Polytope,
};
use tvlab_core::lp::{lp_feasible, lp_stats, LinearSystem, Rel};
use tvlab_core::matrix::QMatrix;
use tvlab_core::matroid::Matroid;
use tvlab_core::scalar::{rat, Field, Scalar};

fn rnd_rat(rng: &mut ChaCha8Rng) -> tvlab_core::scalar::Rational {
    rat(rng.random_range(-8..=8), rng.random_range(1..=4))
}

#[test]
fn thousand_seeded_solves_with_validated_certificates() {
    let before = lp_stats();
    let mut rng = ChaCha8Rng::seed_from_u64(0xfa5ca5);
    let mut feasible = 0u32;
    let mut infeasible = 0u32;
    for _ in 0..1000 {
        let n_vars = rng.random_range(1..=4);
        let n_rows = rng.random_range(1..=6);
        let mut sys = LinearSystem::new(n_vars);
        for v in 0..n_vars {
            if rng.random_bool(0.5) {
                sys.set_nonneg(v);
            }
        }
        for _ in 0..n_rows {
            let coeffs: Vec<_> = (0..n_vars).map(|_| rnd_rat(&mut rng)).collect();
            let rel = match rng.random_range(0..3) {
                0 => Rel::Le,
                1 => Rel::Ge,
                _ => Rel::Eq,
            };
            sys.push(coeffs, rel, rnd_rat(&mut rng));
        }
        // feasibility asserts the witness, infeasibility validates the
        // certificate before returning
        match lp_feasible(&sys) {
            tvlab_core::lp::LpOutcome::Feasible(_) => feasible += 1,
            tvlab_core::lp::LpOutcome::Infeasible(cert) => {
                infeasible += 1;
                assert!(cert.verify(&sys), "certificate failed independent re-validation");
            }
        }
    }
    assert!(feasible > 0 && infeasible > 0, "the mix should hit both outcomes");
    let after = lp_stats();
    assert!(after.calls - before.calls >= 1000);
    assert_eq!(after.certificate_failures, 0);
    assert!(after.certificates_verified - before.certificates_verified >= infeasible as u64);
}

fn random_polytope(rng: &mut ChaCha8Rng, dim: usize, verts: usize, spread: i64) -> Polytope {
    let vs: Vec<Vec<Scalar>> = (0..verts)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    Scalar::from_rational(rat(
                        rng.random_range(-spread..=spread),
                        rng.random_range(1..=3),
                    ))
                })
                .collect()
        })
        .collect();
    Polytope::new(Field::Real, dim, vs).unwrap()
}

#[test]
fn intersection_is_permutation_invariant_and_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let dim = rng.random_range(1..=2);
        let count = rng.random_range(2..=4);
        let polys: Vec<Polytope> =
            (0..count).map(|_| random_polytope(&mut rng, dim, 3, 5)).collect();
        let refs: Vec<&Polytope> = polys.iter().collect();
        let forward = polytopes_intersect(&refs).unwrap().is_feasible();
        let mut reversed = refs.clone();
        reversed.reverse();
        let backward = polytopes_intersect(&reversed).unwrap().is_feasible();
        assert_eq!(forward, backward, "verdict depends on polytope order");

        // adding a set can only shrink the intersection
        if !forward {
            let extra = random_polytope(&mut rng, dim, 3, 5);
            let mut bigger = refs.clone();
            bigger.push(&extra);
            assert!(
                !polytopes_intersect(&bigger).unwrap().is_feasible(),
                "adding a polytope flipped infeasible to feasible"
            );
        }
    }
}

#[test]
fn kernel_dimension_matches_affine_rank() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..60 {
        let r = rng.random_range(0..=3);
        let m = rng.random_range(1..=5);
        let points: Vec<Vec<Scalar>> = (0..m)
            .map(|_| (0..r).map(|_| Scalar::from_rational(rnd_rat(&mut rng))).collect())
            .collect();
        let kernel = affine_dependency_kernel(&points);
        // affine rank via differences against the first point
        let diffs: Vec<Vec<Scalar>> = points[1..]
            .iter()
            .map(|p| (0..r).map(|c| &p[c] - &points[0][c]).collect())
            .collect();
        let affine_rank = if diffs.is_empty() {
            0
        } else {
            QMatrix::from_columns(diffs).rank()
        };
        assert_eq!(kernel.len(), m - 1 - affine_rank);
    }
}

fn interval_instance(bounds: &[(i64, i64)]) -> Instance {
    let polys: Vec<Polytope> = bounds
        .iter()
        .map(|&(a, b)| {
            Polytope::new(
                Field::Real,
                1,
                vec![vec![Scalar::from_int(a)], vec![Scalar::from_int(b)]],
            )
            .unwrap()
        })
        .collect();
    let n = polys.len();
    Instance::new(
        Field::Real,
        1,
        0,
        0,
        polys,
        None,
        Matroid::uniform(1, n).unwrap(),
        vec![vec![]; n],
    )
    .unwrap()
}

#[test]
fn shadow_sets_match_the_interval_description() {
    // frame = e2: the orthocomplement is the horizontal axis, which misses
    // every height-one point
    let inst = interval_instance(&[(-1, 1), (2, 3), (-5, -4)]);
    let e2 = vec![vec![Scalar::from_int(0), Scalar::from_int(1)]];
    let all = compute_shadow_set(&e2, &inst).unwrap();
    assert_eq!(all.into_iter().collect::<Vec<_>>(), vec![0, 1, 2]);

    // frame = e1: membership is exactly "zero is outside the interval"
    let e1 = vec![vec![Scalar::from_int(1), Scalar::from_int(0)]];
    let shadow = compute_shadow_set(&e1, &inst).unwrap();
    assert_eq!(shadow.into_iter().collect::<Vec<_>>(), vec![1, 2]);
}

#[test]
fn shadow_sets_are_sign_flip_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let bounds: Vec<(i64, i64)> = (0..4)
            .map(|_| {
                let a = rng.random_range(-6..=6);
                (a, a + rng.random_range(0..=4))
            })
            .collect();
        let inst = interval_instance(&bounds);
        let frame = vec![vec![
            Scalar::from_rational(rnd_rat(&mut rng)),
            Scalar::from_rational(rnd_rat(&mut rng)),
        ]];
        if frame[0].iter().all(Scalar::is_zero) {
            continue;
        }
        let shadow = compute_shadow_set(&frame, &inst).unwrap();
        let flipped = vec![frame[0].iter().map(|c| -c).collect::<Vec<Scalar>>()];
        assert_eq!(shadow, compute_shadow_set(&flipped, &inst).unwrap());
    }
}

#[test]
fn degenerate_frames_are_rejected() {
    let inst = interval_instance(&[(0, 1)]);
    let dependent = vec![
        vec![Scalar::from_int(1), Scalar::from_int(1)],
        vec![Scalar::from_int(2), Scalar::from_int(2)],
    ];
    assert!(compute_shadow_set(&dependent, &inst).is_err());
}

#[test]
fn zero_flats_agree_with_point_intersections() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for _ in 0..30 {
        let dim = rng.random_range(1..=2);
        let p = random_polytope(&mut rng, dim, 4, 4);
        let point: Vec<Scalar> = (0..dim)
            .map(|_| Scalar::from_rational(rnd_rat(&mut rng)))
            .collect();
        let flat = Flat::new(Field::Real, point.clone(), vec![]).unwrap();
        let as_flat = flat_meets_polytope(&flat, &p).unwrap().is_feasible();
        let as_point = polytopes_intersect(&[
            &p,
            &Polytope::point(Field::Real, point).unwrap(),
        ])
        .unwrap()
        .is_feasible();
        assert_eq!(as_flat, as_point);
    }
}

fn complex_interval_instance() -> Instance {
    // boxes in the complex line: C-polytopes on four corner points each
    let mk_box = |cx: i64, cy: i64| -> Polytope {
        let verts = [(0, 0), (1, 0), (0, 1), (1, 1)]
            .iter()
            .map(|&(dx, dy)| {
                vec![Scalar::new(
                    rat(cx + dx, 1),
                    rat(cy + dy, 1),
                )]
            })
            .collect();
        Polytope::new(Field::Complex, 1, verts).unwrap()
    };
    let polys = vec![mk_box(-1, -1), mk_box(3, 0), mk_box(0, 0)];
    Instance::new(
        Field::Complex,
        1,
        0,
        0,
        polys,
        None,
        Matroid::uniform(1, 3).unwrap(),
        vec![vec![]; 3],
    )
    .unwrap()
}

#[test]
fn complex_intersections_split_into_real_rows() {
    let inst = complex_interval_instance();
    // boxes 0 and 2 share the corner 0; boxes 1 and 0 are disjoint
    let meet = polytopes_intersect(&[&inst.polytopes[0], &inst.polytopes[2]]).unwrap();
    assert!(meet.is_feasible());
    let miss = polytopes_intersect(&[&inst.polytopes[0], &inst.polytopes[1]]).unwrap();
    assert!(!miss.is_feasible());
    assert!(miss.certificate().is_some());
}

#[test]
fn complex_shadow_sets_are_unit_scaling_invariant() {
    use tvlab_core::scalar::unit_circle_point;
    let inst = complex_interval_instance();
    // frames in C^2 (the lifted space for d = 1)
    let frames = vec![
        vec![vec![Scalar::from_int(0), Scalar::one()]],
        vec![vec![Scalar::one(), Scalar::from_int(0)]],
        vec![vec![Scalar::one(), Scalar::i()]],
        vec![vec![Scalar::new(rat(1, 2), rat(-1, 3)), Scalar::from_int(2)]],
    ];
    for frame in frames {
        let base = compute_shadow_set(&frame, &inst).unwrap();
        // the lifted orthocomplement only depends on the complex span, so
        // any unit-modulus rescaling of a frame vector fixes the shadow
        for t in [rat(1, 1), rat(-1, 2), rat(3, 4)] {
            let g = unit_circle_point(&t);
            let scaled: Vec<Vec<Scalar>> =
                vec![frame[0].iter().map(|c| c * &g).collect()];
            assert_eq!(base, compute_shadow_set(&scaled, &inst).unwrap());
        }
    }
    // the vertical frame misses every height-one lift
    let vertical = vec![vec![Scalar::from_int(0), Scalar::one()]];
    let all = compute_shadow_set(&vertical, &inst).unwrap();
    assert_eq!(all.len(), inst.len());
    // the horizontal frame keeps exactly the sets avoiding the origin
    let horizontal = vec![vec![Scalar::one(), Scalar::from_int(0)]];
    let shadow = compute_shadow_set(&horizontal, &inst).unwrap();
    assert_eq!(shadow.into_iter().collect::<Vec<_>>(), vec![1]);
}

#[test]
fn complex_flats_split_into_real_rows() {
    // a complex line in C^2 must meet a box touching it and miss one that
    // is far away in the imaginary direction
    let dir = vec![Scalar::one(), Scalar::i()];
    let base = vec![Scalar::zero(), Scalar::zero()];
    let flat = Flat::new(Field::Complex, base, vec![dir]).unwrap();
    // the point (1, i) lies on the flat
    let on = Polytope::point(Field::Complex, vec![Scalar::one(), Scalar::i()]).unwrap();
    assert!(flat_meets_polytope(&flat, &on).unwrap().is_feasible());
    // (1, -i) does not: s·1 = 1 forces s = 1, but s·i = -i fails
    let off = Polytope::point(Field::Complex, vec![Scalar::one(), -&Scalar::i()]).unwrap();
    assert!(!flat_meets_polytope(&flat, &off).unwrap().is_feasible());
}
