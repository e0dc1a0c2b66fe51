//! Premise checkers: the dependency-modeling condition via the lifted
//! pullback LP, colorful and matroidal intersection premises, the
//! hull-implication premise, and the triviality condition on sign-vector
//! tuples.
//!
//! Positive answers are exact when the dependency space of an independent
//! set is at most a line (scaling a row by a nonzero field element does not
//! change feasibility of its pullback LP); higher-dimensional tuple spaces
//! are probed on a coefficient grid plus seeded random tuples and reported
//! as sampled. Refutations are always exact and carry a re-checkable
//! witness tuple together with a Farkas certificate.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{
    affine_dependency_kernel, hulls_of_unions_intersect, polytopes_intersect, FieldRow,
    GeometryError, Instance, Polytope,
};
use crate::lp::{lp_feasible, FarkasCertificate, LinearSystem, LpOutcome, Rel};
use crate::scalar::{Field, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HypothesisError {
    #[error("tuple does not match the instance: {0}")]
    TupleMismatch(String),
    #[error("instance has no coloring")]
    MissingColoring,
    #[error("expected exactly {expected} color classes, found {got}")]
    WrongClassCount { expected: usize, got: usize },
    #[error("check requires the real field")]
    RealFieldOnly,
    #[error("geometry error: {0}")]
    Geometry(#[from] GeometryError),
    #[error("set is not independent in the instance matroid")]
    NotIndependent,
    #[error("invalid sign vector: {0}")]
    BadSignVector(String),
}

/// A tuple of `d−k` affine dependencies of the phi-images of an
/// independent set, in ascending element order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyTuple {
    pub sigma: Vec<usize>,
    pub rows: Vec<Vec<Scalar>>,
}

impl DependencyTuple {
    /// Checks the defining conditions against the instance: σ independent,
    /// every row an affine dependency of `phi|σ`, and not all rows zero.
    pub fn validate(&self, inst: &Instance) -> Result<(), HypothesisError> {
        let set: BTreeSet<usize> = self.sigma.iter().copied().collect();
        if set.len() != self.sigma.len() || !self.sigma.windows(2).all(|w| w[0] < w[1]) {
            return Err(HypothesisError::TupleMismatch(
                "sigma must be strictly ascending".into(),
            ));
        }
        if self.sigma.iter().any(|&i| i >= inst.len()) {
            return Err(HypothesisError::TupleMismatch("element out of range".into()));
        }
        if !inst.matroid.is_independent(&set) {
            return Err(HypothesisError::NotIndependent);
        }
        if self.rows.len() != inst.d - inst.k {
            return Err(HypothesisError::TupleMismatch(format!(
                "expected {} dependency rows, got {}",
                inst.d - inst.k,
                self.rows.len()
            )));
        }
        let m = self.sigma.len();
        let mut all_zero = true;
        for row in &self.rows {
            if row.len() != m {
                return Err(HypothesisError::TupleMismatch("row width mismatch".into()));
            }
            let mut sum = Scalar::zero();
            let mut weighted = vec![Scalar::zero(); inst.r];
            for (pos, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    all_zero = false;
                }
                sum = &sum + a;
                for (acc, coord) in weighted.iter_mut().zip(&inst.phi[self.sigma[pos]]) {
                    *acc = &*acc + &(a * coord);
                }
            }
            if !sum.is_zero() || weighted.iter().any(|w| !w.is_zero()) {
                return Err(HypothesisError::TupleMismatch(
                    "row is not an affine dependency of the phi-images".into(),
                ));
            }
        }
        if all_zero {
            return Err(HypothesisError::TupleMismatch("all rows are zero".into()));
        }
        Ok(())
    }
}

/// A nontrivial pullback: per σ position a nonnegative scale `r_F` and,
/// when positive, a point `q_F ∈ F` (stored with its barycentric weights).
#[derive(Debug, Clone)]
pub struct PullbackWitness {
    pub scales: Vec<Rational>,
    pub barycentric: Vec<Vec<Rational>>,
    pub points: Vec<Option<Vec<Scalar>>>,
}

#[derive(Debug, Clone)]
pub enum PullbackOutcome {
    Feasible(PullbackWitness),
    Infeasible(FarkasCertificate),
}

impl PullbackOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, PullbackOutcome::Feasible(_))
    }
}

/// Layout and assembly shared by the pullback LP and the triviality LP:
/// one nonnegative weight per vertex of every listed polytope, the block
/// sums acting as the scalar unknowns.
fn lifted_dependency_system(
    field: Field,
    d: usize,
    polys: &[&Polytope],
    row_coeffs: &[Vec<Scalar>],
    support: &[usize],
) -> (LinearSystem, Vec<usize>) {
    let mut offsets = Vec::with_capacity(polys.len());
    let mut next = 0usize;
    for p in polys {
        offsets.push(next);
        next += p.vertices().len();
    }
    let mut sys = LinearSystem::new(next);
    sys.set_nonneg_range(0..next);

    for coeffs in row_coeffs {
        // Σ_pos coeff·(block sum) = 0 in 𝔽
        let mut scalar_row = FieldRow::new();
        for (pos, p) in polys.iter().enumerate() {
            if coeffs[pos].is_zero() {
                continue;
            }
            for v in 0..p.vertices().len() {
                scalar_row.add_real_var(offsets[pos] + v, &coeffs[pos]);
            }
        }
        scalar_row.push_eq(field, &mut sys);
        // Σ_pos coeff·(weighted vertex sum) = 0 in 𝔽^d
        for c in 0..d {
            let mut row = FieldRow::new();
            for (pos, p) in polys.iter().enumerate() {
                if coeffs[pos].is_zero() {
                    continue;
                }
                for (v, vert) in p.vertices().iter().enumerate() {
                    row.add_real_var(offsets[pos] + v, &(&coeffs[pos] * &vert[c]));
                }
            }
            row.push_eq(field, &mut sys);
        }
    }

    // nontriviality: the supported block sums add to one
    let mut norm = Vec::new();
    for &pos in support {
        for v in 0..polys[pos].vertices().len() {
            norm.push((offsets[pos] + v, Rational::one()));
        }
    }
    sys.push_sparse(&norm, Rel::Eq, Rational::one());

    (sys, offsets)
}

fn witness_from_assignment(
    polys: &[&Polytope],
    offsets: &[usize],
    x: &[Rational],
) -> PullbackWitness {
    let mut scales = Vec::with_capacity(polys.len());
    let mut barycentric = Vec::with_capacity(polys.len());
    let mut points = Vec::with_capacity(polys.len());
    for (pos, p) in polys.iter().enumerate() {
        let lam = &x[offsets[pos]..offsets[pos] + p.vertices().len()];
        let r: Rational = lam.iter().cloned().sum();
        if r.is_zero() {
            points.push(None);
        } else {
            let mut q = vec![Scalar::zero(); p.dim()];
            for (l, vert) in lam.iter().zip(p.vertices()) {
                if !l.is_zero() {
                    let w = Scalar::from_rational(l / &r);
                    for (acc, coord) in q.iter_mut().zip(vert) {
                        *acc = &*acc + &(&w * coord);
                    }
                }
            }
            points.push(Some(q));
        }
        scales.push(r);
        barycentric.push(lam.to_vec());
    }
    PullbackWitness { scales, barycentric, points }
}

/// Decides whether a dependency tuple pulls back nontrivially into the
/// sets: nonnegative rescalings `r_F` and points `q_F ∈ F` reproducing all
/// `d−k` dependencies in `𝔽^d`, with some `r_F·a_{j,F} ≠ 0`.
pub fn pullback_feasible(
    inst: &Instance,
    tuple: &DependencyTuple,
) -> Result<PullbackOutcome, HypothesisError> {
    tuple.validate(inst)?;
    let polys: Vec<&Polytope> = tuple.sigma.iter().map(|&i| &inst.polytopes[i]).collect();
    let support: Vec<usize> = (0..tuple.sigma.len())
        .filter(|&pos| tuple.rows.iter().any(|row| !row[pos].is_zero()))
        .collect();
    let (sys, offsets) =
        lifted_dependency_system(inst.field, inst.d, &polys, &tuple.rows, &support);
    Ok(match lp_feasible(&sys) {
        LpOutcome::Feasible(x) => {
            PullbackOutcome::Feasible(witness_from_assignment(&polys, &offsets, &x))
        }
        LpOutcome::Infeasible(certificate) => PullbackOutcome::Infeasible(certificate),
    })
}

/// Sampling policy for tuple spaces of dimension two or more.
#[derive(Debug, Clone, Copy)]
pub struct SamplingPolicy {
    /// Extra random tuples per independent set beyond the coefficient grid.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SamplingPolicy {
    fn default() -> Self {
        SamplingPolicy { samples: 8, seed: 0 }
    }
}

/// Verdict of a hypothesis check.
#[derive(Debug, Clone)]
pub enum Verdict {
    HoldsExact,
    HoldsSampled { tuples_tested: u64 },
    Refuted(Refutation),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        !matches!(self, Verdict::Refuted(_))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Verdict::HoldsExact)
    }
}

/// Exact, re-checkable refutation of a premise.
#[derive(Debug, Clone)]
pub enum Refutation {
    /// A dependency tuple whose pullback LP is infeasible.
    DependencyPullback {
        tuple: DependencyTuple,
        certificate: FarkasCertificate,
    },
    /// A family required to intersect that does not.
    EmptyIntersection {
        indices: Vec<usize>,
        certificate: FarkasCertificate,
    },
    /// An independent bipartition whose phi-hulls meet while the set hulls
    /// do not.
    HullImplication {
        left: Vec<usize>,
        right: Vec<usize>,
        certificate: FarkasCertificate,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigmaStatus {
    /// No nontrivial dependencies exist for this set.
    VacuousKernel,
    /// One-dimensional tuple space: a single LP decided every tuple.
    ExactLine,
    /// Grid plus random sampling; positives are not exhaustive.
    Sampled { tuples: u64 },
    /// Intersection-style check passed.
    IntersectionOk,
    /// All independent bipartitions passed the implication.
    BipartitionsOk { count: u64 },
}

#[derive(Debug, Clone)]
pub struct SigmaDetail {
    pub sigma: Vec<usize>,
    pub kernel_dim: Option<usize>,
    pub status: SigmaStatus,
}

/// Report of one hypothesis check; the per-σ log is in enumeration order
/// (ascending size, lexicographic within a size).
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub log: Vec<SigmaDetail>,
    pub seed: u64,
}

/// Rescales a vector to primitive integer (or Gaussian-integer) entries;
/// the spanned line is unchanged and coefficients stay small in the LPs.
fn primitive_vector(v: &[Scalar]) -> Vec<Scalar> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let mut lcm = BigInt::from(1);
    for s in v {
        lcm = lcm.lcm(s.re.denom());
        lcm = lcm.lcm(s.im.denom());
    }
    let scale = Rational::from_integer(lcm);
    let scaled: Vec<Scalar> = v
        .iter()
        .map(|s| Scalar::new(&s.re * &scale, &s.im * &scale))
        .collect();
    let mut gcd: BigInt = Zero::zero();
    for s in &scaled {
        gcd = gcd.gcd(s.re.numer());
        gcd = gcd.gcd(s.im.numer());
    }
    if gcd.is_zero() || gcd.is_one() {
        return scaled;
    }
    let inv = Rational::from_integer(gcd);
    scaled
        .into_iter()
        .map(|s| Scalar::new(&s.re / &inv, &s.im / &inv))
        .collect()
}

/// Random field scalar with small numerators and denominators.
fn random_coefficient(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    let part = |rng: &mut ChaCha8Rng| {
        let num = rng.random_range(-4i64..=4);
        let den = rng.random_range(1i64..=3);
        Rational::new(num.into(), den.into())
    };
    match field {
        Field::Real => Scalar::from_rational(part(rng)),
        Field::Complex => Scalar::new(part(rng), part(rng)),
    }
}

/// Grids larger than this fall back to random sampling only; the verdict
/// for such sets is HOLDS_SAMPLED regardless.
const GRID_ENUMERATION_CAP: usize = 60_000;

/// Canonical form of a tuple modulo row sign flips and row order; two
/// tuples with the same key have identical pullback feasibility.
fn tuple_key(rows: &[Vec<Scalar>]) -> Vec<Vec<(Rational, Rational)>> {
    let mut key: Vec<Vec<(Rational, Rational)>> = rows
        .iter()
        .map(|row| {
            let flip = row
                .iter()
                .find(|a| !a.is_zero())
                .is_some_and(|a| {
                    use num_traits::Signed;
                    a.re.is_negative() || (a.re.is_zero() && a.im.is_negative())
                });
            row.iter()
                .map(|a| {
                    if flip {
                        (-a.re.clone(), -a.im.clone())
                    } else {
                        (a.re.clone(), a.im.clone())
                    }
                })
                .collect()
        })
        .collect();
    key.sort();
    key
}

/// The central check: does `phi` model the dependency condition for every
/// independent set of the instance matroid? Colorful instances use their
/// partition matroid, which makes this the colorful condition.
pub fn check_models_dependencies(
    inst: &Instance,
    policy: &SamplingPolicy,
) -> Result<CheckReport, HypothesisError> {
    let n_rows = inst.d - inst.k;
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let mut log = Vec::new();
    let mut all_exact = true;
    let mut tuples_tested: u64 = 0;

    for sigma_set in inst.matroid.enumerate_independent_sets(inst.len()) {
        let sigma: Vec<usize> = sigma_set.iter().copied().collect();
        let points: Vec<Vec<Scalar>> = sigma.iter().map(|&i| inst.phi[i].clone()).collect();
        let kernel: Vec<Vec<Scalar>> = affine_dependency_kernel(&points)
            .iter()
            .map(|v| primitive_vector(v))
            .collect();
        let dim = kernel.len();

        if dim == 0 {
            log.push(SigmaDetail {
                sigma,
                kernel_dim: Some(0),
                status: SigmaStatus::VacuousKernel,
            });
            continue;
        }

        if dim == 1 {
            // every nontrivial tuple is row-wise a nonzero multiple of the
            // kernel line; one replicated-row LP decides them all
            let tuple = DependencyTuple {
                sigma: sigma.clone(),
                rows: vec![kernel[0].clone(); n_rows],
            };
            tuples_tested += 1;
            log.push(SigmaDetail {
                sigma,
                kernel_dim: Some(1),
                status: SigmaStatus::ExactLine,
            });
            if let PullbackOutcome::Infeasible(certificate) = pullback_feasible(inst, &tuple)? {
                return Ok(CheckReport {
                    verdict: Verdict::Refuted(Refutation::DependencyPullback {
                        tuple,
                        certificate,
                    }),
                    log,
                    seed: policy.seed,
                });
            }
            continue;
        }

        all_exact = false;
        let mut tuples: Vec<Vec<Vec<Scalar>>> = Vec::new();

        // coefficient grid {−1,0,1} per basis vector per row; feasibility
        // is invariant under flipping a row's sign and under permuting the
        // rows, so only canonical representatives reach the solver
        let mut seen_keys: BTreeSet<Vec<Vec<(Rational, Rational)>>> = BTreeSet::new();
        if let Some(total) = 3usize
            .checked_pow((dim * n_rows) as u32)
            .filter(|&t| t <= GRID_ENUMERATION_CAP)
        {
            for code in 0..total {
                let mut digits = code;
                let mut rows = Vec::with_capacity(n_rows);
                for _ in 0..n_rows {
                    let mut row = vec![Scalar::zero(); sigma.len()];
                    for basis_vec in kernel.iter() {
                        let digit = (digits % 3) as i64 - 1;
                        digits /= 3;
                        if digit != 0 {
                            let c = Scalar::from_int(digit);
                            for (acc, b) in row.iter_mut().zip(basis_vec) {
                                *acc = &*acc + &(&c * b);
                            }
                        }
                    }
                    rows.push(row);
                }
                if rows.iter().all(|row| row.iter().all(Scalar::is_zero)) {
                    continue;
                }
                if seen_keys.insert(tuple_key(&rows)) {
                    tuples.push(rows);
                }
            }
        }
        for _ in 0..policy.samples {
            loop {
                let rows: Vec<Vec<Scalar>> = (0..n_rows)
                    .map(|_| {
                        let mut row = vec![Scalar::zero(); sigma.len()];
                        for basis_vec in &kernel {
                            let c = random_coefficient(inst.field, &mut rng);
                            if !c.is_zero() {
                                for (acc, b) in row.iter_mut().zip(basis_vec) {
                                    *acc = &*acc + &(&c * b);
                                }
                            }
                        }
                        row
                    })
                    .collect();
                if rows.iter().any(|row| row.iter().any(|a| !a.is_zero())) {
                    tuples.push(rows);
                    break;
                }
            }
        }

        let mut local: u64 = 0;
        for rows in tuples {
            let tuple = DependencyTuple { sigma: sigma.clone(), rows };
            local += 1;
            tuples_tested += 1;
            if let PullbackOutcome::Infeasible(certificate) = pullback_feasible(inst, &tuple)? {
                log.push(SigmaDetail {
                    sigma: sigma.clone(),
                    kernel_dim: Some(dim),
                    status: SigmaStatus::Sampled { tuples: local },
                });
                return Ok(CheckReport {
                    verdict: Verdict::Refuted(Refutation::DependencyPullback {
                        tuple,
                        certificate,
                    }),
                    log,
                    seed: policy.seed,
                });
            }
        }
        log.push(SigmaDetail {
            sigma,
            kernel_dim: Some(dim),
            status: SigmaStatus::Sampled { tuples: local },
        });
    }

    let verdict = if all_exact {
        Verdict::HoldsExact
    } else {
        Verdict::HoldsSampled { tuples_tested }
    };
    Ok(CheckReport { verdict, log, seed: policy.seed })
}

/// The colorful intersection premise: every choice of one set per class
/// (over exactly d+1 classes) has a common point.
pub fn check_colorful_helly(inst: &Instance) -> Result<CheckReport, HypothesisError> {
    let classes = inst.coloring.as_ref().ok_or(HypothesisError::MissingColoring)?;
    if classes.len() != inst.d + 1 {
        return Err(HypothesisError::WrongClassCount {
            expected: inst.d + 1,
            got: classes.len(),
        });
    }
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
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

    let mut log = Vec::new();
    for tuple in tuples {
        let polys: Vec<&Polytope> = tuple.iter().map(|&i| &inst.polytopes[i]).collect();
        match polytopes_intersect(&polys)? {
            crate::geometry::LpResult::Feasible { .. } => {
                log.push(SigmaDetail {
                    sigma: tuple,
                    kernel_dim: None,
                    status: SigmaStatus::IntersectionOk,
                });
            }
            crate::geometry::LpResult::Infeasible { certificate } => {
                return Ok(CheckReport {
                    verdict: Verdict::Refuted(Refutation::EmptyIntersection {
                        indices: tuple,
                        certificate,
                    }),
                    log,
                    seed: 0,
                });
            }
        }
    }
    Ok(CheckReport { verdict: Verdict::HoldsExact, log, seed: 0 })
}

/// The matroidal intersection premise: every independent set has a common
/// point.
pub fn check_matroid_intersections(inst: &Instance) -> Result<CheckReport, HypothesisError> {
    let mut log = Vec::new();
    for sigma_set in inst.matroid.enumerate_independent_sets(inst.len()) {
        let sigma: Vec<usize> = sigma_set.iter().copied().collect();
        let polys: Vec<&Polytope> = sigma.iter().map(|&i| &inst.polytopes[i]).collect();
        match polytopes_intersect(&polys)? {
            crate::geometry::LpResult::Feasible { .. } => {
                log.push(SigmaDetail {
                    sigma,
                    kernel_dim: None,
                    status: SigmaStatus::IntersectionOk,
                });
            }
            crate::geometry::LpResult::Infeasible { certificate } => {
                return Ok(CheckReport {
                    verdict: Verdict::Refuted(Refutation::EmptyIntersection {
                        indices: sigma,
                        certificate,
                    }),
                    log,
                    seed: 0,
                });
            }
        }
    }
    Ok(CheckReport { verdict: Verdict::HoldsExact, log, seed: 0 })
}

/// The hull-implication premise over the reals: for every independent
/// bipartition, intersecting phi-hulls force intersecting set hulls.
pub fn check_holmsen(inst: &Instance) -> Result<CheckReport, HypothesisError> {
    if inst.field != Field::Real {
        return Err(HypothesisError::RealFieldOnly);
    }
    let phi_points: Vec<Polytope> = inst
        .phi
        .iter()
        .map(|img| Polytope::point(inst.field, img.clone()).expect("phi image as a point"))
        .collect();

    let mut log = Vec::new();
    for sigma_set in inst.matroid.enumerate_independent_sets(inst.len()) {
        let sigma: Vec<usize> = sigma_set.iter().copied().collect();
        if sigma.len() < 2 {
            log.push(SigmaDetail {
                sigma,
                kernel_dim: None,
                status: SigmaStatus::BipartitionsOk { count: 0 },
            });
            continue;
        }
        let mut count = 0u64;
        // unordered bipartitions: the part containing the first element
        // ranges over submasks
        let m = sigma.len();
        for mask in 0..(1u32 << (m - 1)) {
            let left: Vec<usize> = (0..m)
                .filter(|&p| p == 0 || (mask >> (p - 1)) & 1 == 1)
                .map(|p| sigma[p])
                .collect();
            let right: Vec<usize> =
                sigma.iter().copied().filter(|i| !left.contains(i)).collect();
            if right.is_empty() {
                continue;
            }
            count += 1;
            let phi_left: Vec<&Polytope> = left.iter().map(|&i| &phi_points[i]).collect();
            let phi_right: Vec<&Polytope> = right.iter().map(|&i| &phi_points[i]).collect();
            if hulls_of_unions_intersect(&phi_left, &phi_right)?.is_feasible() {
                let set_left: Vec<&Polytope> =
                    left.iter().map(|&i| &inst.polytopes[i]).collect();
                let set_right: Vec<&Polytope> =
                    right.iter().map(|&i| &inst.polytopes[i]).collect();
                if let crate::geometry::LpResult::Infeasible { certificate } =
                    hulls_of_unions_intersect(&set_left, &set_right)?
                {
                    return Ok(CheckReport {
                        verdict: Verdict::Refuted(Refutation::HullImplication {
                            left,
                            right,
                            certificate,
                        }),
                        log,
                        seed: 0,
                    });
                }
            }
        }
        log.push(SigmaDetail {
            sigma,
            kernel_dim: None,
            status: SigmaStatus::BipartitionsOk { count },
        });
    }
    Ok(CheckReport { verdict: Verdict::HoldsExact, log, seed: 0 })
}

/// Witness that the triviality condition fails: nonnegative coefficients
/// (not all zero) and points realizing the dependencies.
#[derive(Debug, Clone)]
pub struct C1Witness {
    pub coefficients: Vec<Rational>,
    pub points: Vec<Option<Vec<Scalar>>>,
}

#[derive(Debug, Clone)]
pub enum C1Verdict {
    Holds { certificate: FarkasCertificate },
    Fails { witness: C1Witness },
}

impl C1Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, C1Verdict::Holds { .. })
    }
}

/// The triviality condition on a tuple of sign vectors `z_ℓ`: nonnegative
/// `a_ℓ` with points `q_ℓ ∈ F_ℓ` satisfying all `d−k` dependencies are
/// necessarily all zero. Entries of each `z_ℓ` must have modulus zero or
/// one (rational points of the unit circle over the complexes) and `z_ℓ`
/// itself must be nonzero.
pub fn c1_holds(
    inst: &Instance,
    sigma: &[usize],
    z: &[Vec<Scalar>],
) -> Result<C1Verdict, HypothesisError> {
    let set: BTreeSet<usize> = sigma.iter().copied().collect();
    if set.len() != sigma.len() || sigma.iter().any(|&i| i >= inst.len()) {
        return Err(HypothesisError::TupleMismatch("bad sigma".into()));
    }
    if !inst.matroid.is_independent(&set) {
        return Err(HypothesisError::NotIndependent);
    }
    if z.len() != sigma.len() {
        return Err(HypothesisError::BadSignVector(
            "one sign vector per element required".into(),
        ));
    }
    let n_rows = inst.d - inst.k;
    for zl in z {
        if zl.len() != n_rows {
            return Err(HypothesisError::BadSignVector(format!(
                "sign vectors live in C_{n_rows}"
            )));
        }
        if zl.iter().all(Scalar::is_zero) {
            return Err(HypothesisError::BadSignVector("zero sign vector".into()));
        }
        for e in zl {
            let n = e.norm_sqr();
            if !(n.is_zero() || n.is_one()) {
                return Err(HypothesisError::BadSignVector(
                    "entries must have modulus zero or one".into(),
                ));
            }
        }
    }

    let polys: Vec<&Polytope> = sigma.iter().map(|&i| &inst.polytopes[i]).collect();
    // row j uses coefficient z_{j,ℓ} on element ℓ
    let row_coeffs: Vec<Vec<Scalar>> = (0..n_rows)
        .map(|j| z.iter().map(|zl| zl[j].clone()).collect())
        .collect();
    let support: Vec<usize> = (0..sigma.len()).collect();
    let (sys, offsets) =
        lifted_dependency_system(inst.field, inst.d, &polys, &row_coeffs, &support);
    Ok(match lp_feasible(&sys) {
        LpOutcome::Feasible(x) => {
            let w = witness_from_assignment(&polys, &offsets, &x);
            C1Verdict::Fails {
                witness: C1Witness { coefficients: w.scales, points: w.points },
            }
        }
        LpOutcome::Infeasible(certificate) => C1Verdict::Holds { certificate },
    })
}
