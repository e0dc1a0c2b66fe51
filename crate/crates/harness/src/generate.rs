//! Seeded instance generators with known ground truth. Every generator
//! validates its own output before returning: the instance re-loads, the
//! planted structure re-verifies exactly, and hypothesis-true modes re-run
//! the relevant exact checks.

use anyhow::{bail, Context, Result};
use num_traits::One;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tvlab_core::geometry::{flat_meets_polytope, polytopes_intersect, Flat, Instance, Polytope};
use tvlab_core::scalar::{rat, Field, Rational, Scalar};

use crate::spec::{FlatSpec, InstanceSpec, MatroidSpec, Provenance, ScalarSpec};

/// Rationals on the grid `Z/4` within `±spread`; one fixed denominator
/// keeps every derived LP row's integer-clearing scale small.
fn small_rational(rng: &mut ChaCha8Rng, spread: i64) -> Rational {
    let num = rng.random_range(-4 * spread..=4 * spread);
    rat(num, 4)
}

fn scalar(rng: &mut ChaCha8Rng, field: Field, spread: i64) -> Scalar {
    match field {
        Field::Real => Scalar::from_rational(small_rational(rng, spread)),
        Field::Complex => Scalar::new(small_rational(rng, spread), small_rational(rng, spread)),
    }
}

fn point(rng: &mut ChaCha8Rng, field: Field, dim: usize, spread: i64) -> Vec<Scalar> {
    (0..dim).map(|_| scalar(rng, field, spread)).collect()
}

/// Vertices of a polytope guaranteed to contain `center`: offsets are
/// mean-centered, so the center is the average of the vertices.
fn polytope_around(
    rng: &mut ChaCha8Rng,
    field: Field,
    center: &[Scalar],
    vertices: usize,
    spread: i64,
) -> Result<Polytope> {
    let dim = center.len();
    if vertices <= 1 {
        return Ok(Polytope::new(field, dim, vec![center.to_vec()])?);
    }
    let offsets: Vec<Vec<Scalar>> =
        (0..vertices).map(|_| point(rng, field, dim, spread)).collect();
    let count = Scalar::from_int(vertices as i64);
    let mean: Vec<Scalar> = (0..dim)
        .map(|c| {
            let sum = offsets
                .iter()
                .fold(Scalar::zero(), |acc, o| &acc + &o[c]);
            &sum / &count
        })
        .collect();
    let verts: Vec<Vec<Scalar>> = offsets
        .iter()
        .map(|o| {
            (0..dim)
                .map(|c| &center[c] + &(&o[c] - &mean[c]))
                .collect()
        })
        .collect();
    Ok(Polytope::new(field, dim, verts)?)
}

#[derive(Debug, Clone, Copy)]
pub struct PiercedParams {
    pub field: Field,
    pub d: usize,
    pub k: usize,
    pub r: usize,
    pub n: usize,
    pub vertices_per_set: usize,
    pub spread: i64,
}

/// A family built around a planted rational k-flat: every set contains a
/// sampled point of the flat, and phi reads the first r internal
/// coordinates of those points. The flat is recorded as ground truth and
/// re-verified against every set before returning.
pub fn generate_pierced_instance(seed: u64, p: &PiercedParams) -> Result<InstanceSpec> {
    if !(p.r <= p.k && p.k < p.d) || p.n == 0 {
        bail!("invalid pierced-instance parameters");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // planted flat with independent rational directions
    let flat = loop {
        let base = point(&mut rng, p.field, p.d, p.spread);
        let dirs: Vec<Vec<Scalar>> =
            (0..p.k).map(|_| point(&mut rng, p.field, p.d, p.spread)).collect();
        if let Ok(f) = Flat::new(p.field, base, dirs) {
            break f;
        }
    };

    let mut polytopes = Vec::with_capacity(p.n);
    let mut phi = Vec::with_capacity(p.n);
    for _ in 0..p.n {
        let params: Vec<Scalar> = (0..p.k).map(|_| scalar(&mut rng, p.field, p.spread)).collect();
        let anchor = flat.point_at(&params);
        polytopes.push(polytope_around(
            &mut rng,
            p.field,
            &anchor,
            p.vertices_per_set,
            p.spread,
        )?);
        phi.push(params[..p.r].to_vec());
    }

    let bound = p.field.real_dim() * (p.d - p.k) * (p.r + 1);
    let rank = p.n.min(bound + 1);
    let matroid_spec = MatroidSpec::Uniform { rank, n: p.n };
    let inst = Instance::new(
        p.field,
        p.d,
        p.k,
        p.r,
        polytopes,
        None,
        matroid_spec.build()?,
        phi,
    )?;

    // generator honesty: the planted flat meets every set exactly
    for poly in &inst.polytopes {
        if !flat_meets_polytope(&flat, poly)?.is_feasible() {
            bail!("planted flat fails to meet a generated set");
        }
    }

    Ok(InstanceSpec::from_instance(
        &inst,
        matroid_spec,
        Provenance {
            generator: "pierced".into(),
            seed,
            ground_truth_flat: Some(FlatSpec::from_flat(&flat)),
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorfulMode {
    HypothesisTrue,
    HypothesisFalse,
}

#[derive(Debug, Clone, Copy)]
pub struct ColorfulParams {
    pub d: usize,
    /// Number of color classes; the point-transversal setting needs d+1.
    pub classes: usize,
    pub sets_per_class: usize,
    pub mode: ColorfulMode,
    pub vertices_per_set: usize,
    pub spread: i64,
}

/// Scale a polytope by two about its own vertex centroid; the result
/// contains the original.
fn inflate(p: &Polytope) -> Polytope {
    let dim = p.dim();
    let count = Scalar::from_int(p.vertices().len() as i64);
    let centroid: Vec<Scalar> = (0..dim)
        .map(|c| {
            let s = p.vertices().iter().fold(Scalar::zero(), |acc, v| &acc + &v[c]);
            &s / &count
        })
        .collect();
    let two = Scalar::from_int(2);
    let verts = p
        .vertices()
        .iter()
        .map(|v| {
            (0..dim)
                .map(|c| &centroid[c] + &(&two * &(&v[c] - &centroid[c])))
                .collect()
        })
        .collect();
    Polytope::new(p.field(), dim, verts).expect("inflation preserves validity")
}

/// Colorful family over d+1 classes. Hypothesis-true mode plants a point
/// shared by one designated class and inflates the other sets until every
/// colorful tuple passes the exact intersection LP; hypothesis-false mode
/// plants a pairwise-disjoint colorful tuple.
pub fn generate_colorful_instance(seed: u64, p: &ColorfulParams) -> Result<InstanceSpec> {
    if p.sets_per_class == 0 || p.d == 0 {
        bail!("invalid colorful-instance parameters");
    }
    if p.classes != p.d + 1 {
        bail!("the point-transversal setting needs exactly d+1 classes");
    }
    let classes = p.classes;
    let n = classes * p.sets_per_class;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = Field::Real;

    let class_members: Vec<Vec<usize>> = (0..classes)
        .map(|c| (c * p.sets_per_class..(c + 1) * p.sets_per_class).collect())
        .collect();

    let mut polytopes: Vec<Polytope> = Vec::with_capacity(n);
    match p.mode {
        ColorfulMode::HypothesisTrue => {
            let designated = rng.random_range(0..classes);
            let shared = point(&mut rng, field, p.d, p.spread);
            for class in 0..classes {
                for _ in 0..p.sets_per_class {
                    let center = if class == designated {
                        shared.clone()
                    } else {
                        point(&mut rng, field, p.d, p.spread)
                    };
                    polytopes.push(polytope_around(
                        &mut rng,
                        field,
                        &center,
                        p.vertices_per_set,
                        p.spread,
                    )?);
                }
            }
            // inflate-and-recheck until every colorful tuple intersects;
            // scaling alone cannot help flat sets grow toward the shared
            // point, so stubborn rounds extend hulls by the point itself
            for round in 0..64 {
                let mut failed: Option<Vec<usize>> = None;
                for tuple in colorful_tuples(&class_members) {
                    let polys: Vec<&Polytope> = tuple.iter().map(|&i| &polytopes[i]).collect();
                    if !polytopes_intersect(&polys)?.is_feasible() {
                        failed = Some(tuple);
                        break;
                    }
                }
                let Some(tuple) = failed else { break };
                for &i in &tuple {
                    if class_members[designated].contains(&i) {
                        continue;
                    }
                    polytopes[i] = if round < 6 {
                        inflate(&polytopes[i])
                    } else {
                        let mut verts = polytopes[i].vertices().to_vec();
                        verts.push(shared.clone());
                        Polytope::new(field, p.d, verts)?
                    };
                }
            }
            // all colorful tuples must pass now
            for tuple in colorful_tuples(&class_members) {
                let polys: Vec<&Polytope> = tuple.iter().map(|&i| &polytopes[i]).collect();
                if !polytopes_intersect(&polys)?.is_feasible() {
                    bail!("inflation loop failed to make a colorful tuple intersect");
                }
            }
        }
        ColorfulMode::HypothesisFalse => {
            for class in 0..classes {
                for slot in 0..p.sets_per_class {
                    let center = if slot == 0 {
                        // planted disjoint tuple: far-apart boxes, one per class
                        let mut c = vec![Scalar::zero(); p.d];
                        c[0] = Scalar::from_int(100 * (class as i64 + 1));
                        c
                    } else {
                        point(&mut rng, field, p.d, p.spread)
                    };
                    polytopes.push(polytope_around(
                        &mut rng,
                        field,
                        &center,
                        p.vertices_per_set.min(3),
                        1,
                    )?);
                }
            }
        }
    }

    let matroid_spec = MatroidSpec::Partition { classes: class_members.clone() };
    let inst = Instance::new(
        field,
        p.d,
        0,
        0,
        polytopes,
        Some(class_members),
        matroid_spec.build()?,
        vec![Vec::new(); n],
    )?;
    Ok(InstanceSpec::from_instance(
        &inst,
        matroid_spec,
        Provenance {
            generator: match p.mode {
                ColorfulMode::HypothesisTrue => "colorful-true".into(),
                ColorfulMode::HypothesisFalse => "colorful-false".into(),
            },
            seed,
            ground_truth_flat: None,
        },
    ))
}

fn colorful_tuples(classes: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut tuples = vec![Vec::new()];
    for class in classes {
        let mut grown = Vec::with_capacity(tuples.len() * class.len());
        for t in &tuples {
            for &i in class {
                let mut next = t.clone();
                next.push(i);
                grown.push(next);
            }
        }
        tuples = grown;
    }
    tuples
}

/// A family satisfying the matroidal intersection premise by construction:
/// every basis receives a shared anchor point placed into each of its
/// members, so every independent set inherits a common point.
pub fn generate_matroid_intersecting_instance(
    seed: u64,
    d: usize,
    matroid_spec: &MatroidSpec,
) -> Result<InstanceSpec> {
    let matroid = matroid_spec.build()?;
    if !matroid.is_loopless() {
        bail!("intersecting-instance generator needs a loopless matroid");
    }
    let n = matroid.ground().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = Field::Real;

    let bases = matroid.maximal_independent_sets();
    let anchors: Vec<Vec<Scalar>> = bases.iter().map(|_| point(&mut rng, field, d, 8)).collect();

    let mut per_set_vertices: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); n];
    for (basis, anchor) in bases.iter().zip(&anchors) {
        for &i in basis {
            per_set_vertices[i].push(anchor.clone());
        }
    }
    for verts in per_set_vertices.iter_mut() {
        // texture vertices only grow the hulls
        let extra = rng.random_range(1..=2);
        for _ in 0..extra {
            verts.push(point(&mut rng, field, d, 8));
        }
    }
    let polytopes: Result<Vec<Polytope>> = per_set_vertices
        .into_iter()
        .map(|v| Polytope::new(field, d, v).context("building an intersecting set"))
        .collect();

    let inst = Instance::new(
        field,
        d,
        0,
        0,
        polytopes?,
        None,
        matroid,
        vec![Vec::new(); n],
    )?;
    Ok(InstanceSpec::from_instance(
        &inst,
        matroid_spec.clone(),
        Provenance { generator: "matroid-intersecting".into(), seed, ground_truth_flat: None },
    ))
}

/// A planar family stabbed by a planted rational line, with phi either
/// empty (r = 0, pairwise-overlapping squares on the line) or the line
/// parameter of each set's anchor (r = 1). Both make the hull-implication
/// premise hold for any matroid on the family.
pub fn generate_holmsen_instance(
    seed: u64,
    r: usize,
    n: usize,
    matroid_spec: &MatroidSpec,
) -> Result<InstanceSpec> {
    if r > 1 || n == 0 {
        bail!("hull-implication generator supports r in {{0,1}}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = Field::Real;
    let d = 2;

    // planted line through `base` with direction `dir`
    let (dir, flat) = loop {
        let base = point(&mut rng, field, d, 6);
        let dir = point(&mut rng, field, d, 6);
        if let Ok(f) = Flat::new(field, base.clone(), vec![dir.clone()]) {
            break (dir, f);
        }
    };

    let params: Vec<Rational> = (0..n).map(|_| small_rational(&mut rng, 8)).collect();
    let mut polytopes = Vec::with_capacity(n);
    let mut phi: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    match r {
        1 => {
            for t in &params {
                let anchor = flat.point_at(&[Scalar::from_rational(t.clone())]);
                polytopes.push(polytope_around(&mut rng, field, &anchor, 4, 3)?);
                phi.push(vec![Scalar::from_rational(t.clone())]);
            }
        }
        _ => {
            // squares wide enough to overlap pairwise: the center spread is
            // the parameter range scaled by the direction's largest axis
            let lo = params.iter().min().unwrap().clone();
            let hi = params.iter().max().unwrap().clone();
            let dir_span = {
                use num_traits::Signed;
                let dx = dir[0].re.abs();
                let dy = dir[1].re.abs();
                if dx > dy { dx } else { dy }
            };
            let width = (&hi - &lo) * dir_span / Rational::from_integer(2.into()) + Rational::one();
            let w = Scalar::from_rational(width);
            for t in &params {
                let anchor = flat.point_at(&[Scalar::from_rational(t.clone())]);
                let verts: Vec<Vec<Scalar>> = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
                    .iter()
                    .map(|&(sx, sy)| {
                        vec![
                            &anchor[0] + &(&Scalar::from_int(sx) * &w),
                            &anchor[1] + &(&Scalar::from_int(sy) * &w),
                        ]
                    })
                    .collect();
                polytopes.push(Polytope::new(field, d, verts)?);
                phi.push(Vec::new());
            }
        }
    }

    let inst = Instance::new(field, d, 1, r, polytopes, None, matroid_spec.build()?, phi)?;
    for poly in &inst.polytopes {
        if !flat_meets_polytope(&flat, poly)?.is_feasible() {
            bail!("planted line fails to meet a generated set");
        }
    }
    Ok(InstanceSpec::from_instance(
        &inst,
        matroid_spec.clone(),
        Provenance {
            generator: "holmsen".into(),
            seed,
            ground_truth_flat: Some(FlatSpec::from_flat(&flat)),
        },
    ))
}

/// A deterministic fleet of loopless matroid specs (uniform, partition,
/// linear and explicit backends) within the given size and rank caps.
pub fn matroid_fleet(
    max_elements: usize,
    max_rank: usize,
    seed: u64,
) -> Vec<(String, MatroidSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fleet: Vec<(String, MatroidSpec)> = Vec::new();

    for n in 1..=max_elements {
        for rank in 1..=n.min(max_rank) {
            fleet.push((format!("uniform-{rank}-{n}"), MatroidSpec::Uniform { rank, n }));
        }
    }

    // partitions: weakly decreasing compositions of n into 2..=max_rank parts
    fn compositions(n: usize, max_parts: usize) -> Vec<Vec<usize>> {
        fn rec(rest: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest == 0 {
                if !prefix.is_empty() {
                    out.push(prefix.clone());
                }
                return;
            }
            if parts == 0 {
                return;
            }
            let cap = prefix.last().copied().unwrap_or(rest);
            for take in (1..=rest.min(cap)).rev() {
                prefix.push(take);
                rec(rest - take, parts - 1, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, max_parts, &mut Vec::new(), &mut out);
        out
    }
    for n in 2..=max_elements {
        for sizes in compositions(n, max_rank) {
            if sizes.len() < 2 {
                continue;
            }
            let mut classes = Vec::new();
            let mut next = 0;
            for &s in &sizes {
                classes.push((next..next + s).collect::<Vec<usize>>());
                next += s;
            }
            let name: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
            fleet.push((
                format!("partition-{}", name.join("+")),
                MatroidSpec::Partition { classes },
            ));
        }
    }

    // seeded small-integer linear matroids without zero columns
    for n in 3..=max_elements {
        for rows in 2..=max_rank.min(n) {
            for copy in 0..2 {
                let cols: Vec<Vec<ScalarSpec>> = (0..n)
                    .map(|_| loop {
                        let col: Vec<i64> =
                            (0..rows).map(|_| rng.random_range(-2i64..=2)).collect();
                        if col.iter().any(|&c| c != 0) {
                            break col
                                .into_iter()
                                .map(|c| ScalarSpec::Real(c.to_string()))
                                .collect();
                        }
                    })
                    .collect();
                fleet.push((format!("linear-{rows}x{n}-{copy}"), MatroidSpec::Linear { columns: cols }));
            }
        }
    }

    // explicit backends copied from small matroids' own bases
    let snapshots: Vec<(String, MatroidSpec)> = fleet
        .iter()
        .filter_map(|(name, spec)| {
            let m = spec.build().ok()?;
            if m.ground().len() <= 5 && m.rank() >= 2 && m.is_loopless() {
                let bases = m
                    .maximal_independent_sets()
                    .into_iter()
                    .map(|b| b.into_iter().collect())
                    .collect();
                Some((
                    format!("explicit-from-{name}"),
                    MatroidSpec::Explicit { n: m.ground().len(), bases },
                ))
            } else {
                None
            }
        })
        .take(8)
        .collect();
    fleet.extend(snapshots);

    fleet
}
