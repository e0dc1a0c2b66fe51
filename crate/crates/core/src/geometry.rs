//! Exact polytope geometry over the real or complex rationals: V-polytopes,
//! affine flats, intersection predicates through the rational LP, affine
//! dependency kernels, and the shadow sets of lifted frames.
//!
//! Complex data never leaves exact arithmetic: every complex-linear
//! equality is split into real and imaginary rows before reaching the
//! solver, while ranks and kernels stay native on rational pairs.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::lp::{lp_feasible, FarkasCertificate, LinearSystem, LpOutcome, Rel};
use crate::matrix::QMatrix;
use crate::matroid::Matroid;
use crate::scalar::{Field, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("ambient dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ambient field mismatch")]
    FieldMismatch,
    #[error("a polytope needs at least one vertex")]
    NoVertices,
    #[error("real-field data with nonzero imaginary part")]
    NotReal,
    #[error("frame vectors are linearly dependent")]
    DependentFrame,
    #[error("empty polytope list")]
    EmptyFamily,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

/// Compact convex set given by its vertices (a V-polytope) in `𝔽^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    field: Field,
    dim: usize,
    vertices: Vec<Vec<Scalar>>,
}

impl Polytope {
    /// Exact duplicate vertices are dropped; order is otherwise preserved.
    pub fn new(field: Field, dim: usize, vertices: Vec<Vec<Scalar>>) -> Result<Self, GeometryError> {
        if vertices.is_empty() {
            return Err(GeometryError::NoVertices);
        }
        let mut seen: Vec<Vec<Scalar>> = Vec::new();
        for v in vertices {
            if v.len() != dim {
                return Err(GeometryError::DimensionMismatch { expected: dim, got: v.len() });
            }
            if field == Field::Real && v.iter().any(|c| !c.is_real()) {
                return Err(GeometryError::NotReal);
            }
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        Ok(Polytope { field, dim, vertices: seen })
    }

    pub fn point(field: Field, coords: Vec<Scalar>) -> Result<Self, GeometryError> {
        let dim = coords.len();
        Self::new(field, dim, vec![coords])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Scalar>] {
        &self.vertices
    }
}

/// Affine flat `base + span_𝔽(dirs)`; directions are checked independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flat {
    field: Field,
    ambient: usize,
    base: Vec<Scalar>,
    dirs: Vec<Vec<Scalar>>,
}

impl Flat {
    pub fn new(
        field: Field,
        base: Vec<Scalar>,
        dirs: Vec<Vec<Scalar>>,
    ) -> Result<Self, GeometryError> {
        let ambient = base.len();
        if dirs.len() > ambient {
            return Err(GeometryError::DependentFrame);
        }
        for d in &dirs {
            if d.len() != ambient {
                return Err(GeometryError::DimensionMismatch { expected: ambient, got: d.len() });
            }
        }
        if field == Field::Real
            && (base.iter().any(|c| !c.is_real())
                || dirs.iter().flatten().any(|c| !c.is_real()))
        {
            return Err(GeometryError::NotReal);
        }
        if !dirs.is_empty() {
            let m = QMatrix::from_columns(dirs.clone());
            if m.rank() != dirs.len() {
                return Err(GeometryError::DependentFrame);
            }
        }
        Ok(Flat { field, ambient, base, dirs })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn k(&self) -> usize {
        self.dirs.len()
    }

    pub fn base(&self) -> &[Scalar] {
        &self.base
    }

    pub fn dirs(&self) -> &[Vec<Scalar>] {
        &self.dirs
    }

    pub fn point_at(&self, params: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(params.len(), self.dirs.len());
        let mut p = self.base.clone();
        for (s, dir) in params.iter().zip(&self.dirs) {
            for (acc, d) in p.iter_mut().zip(dir) {
                *acc = &*acc + &(s * d);
            }
        }
        p
    }
}

/// A full problem instance: the family, its matroid, the optional coloring
/// and the image map `phi` into `𝔽^r`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub field: Field,
    pub d: usize,
    pub k: usize,
    pub r: usize,
    pub polytopes: Vec<Polytope>,
    pub coloring: Option<Vec<Vec<usize>>>,
    pub matroid: Matroid,
    pub phi: Vec<Vec<Scalar>>,
}

impl Instance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: Field,
        d: usize,
        k: usize,
        r: usize,
        polytopes: Vec<Polytope>,
        coloring: Option<Vec<Vec<usize>>>,
        matroid: Matroid,
        phi: Vec<Vec<Scalar>>,
    ) -> Result<Self, GeometryError> {
        if !(r <= k && k < d) {
            return Err(GeometryError::InvalidInstance(format!(
                "need r ≤ k < d, got r={r}, k={k}, d={d}"
            )));
        }
        let n = polytopes.len();
        for p in &polytopes {
            if p.field() != field {
                return Err(GeometryError::FieldMismatch);
            }
            if p.dim() != d {
                return Err(GeometryError::DimensionMismatch { expected: d, got: p.dim() });
            }
        }
        if matroid.ground() != (0..n).collect::<Vec<_>>().as_slice() {
            return Err(GeometryError::InvalidInstance(
                "matroid ground set must be 0..n".into(),
            ));
        }
        if let Some(classes) = &coloring {
            let mut seen = vec![false; n];
            for class in classes {
                if class.is_empty() {
                    return Err(GeometryError::InvalidInstance("empty color class".into()));
                }
                for &i in class {
                    if i >= n || seen[i] {
                        return Err(GeometryError::InvalidInstance(
                            "coloring is not a partition of 0..n".into(),
                        ));
                    }
                    seen[i] = true;
                }
            }
            if !seen.iter().all(|&s| s) {
                return Err(GeometryError::InvalidInstance(
                    "coloring misses some elements".into(),
                ));
            }
        }
        if phi.len() != n {
            return Err(GeometryError::InvalidInstance(format!(
                "phi defined on {} of {} elements",
                phi.len(),
                n
            )));
        }
        for img in &phi {
            if img.len() != r {
                return Err(GeometryError::DimensionMismatch { expected: r, got: img.len() });
            }
            if field == Field::Real && img.iter().any(|c| !c.is_real()) {
                return Err(GeometryError::NotReal);
            }
        }
        Ok(Instance { field, d, k, r, polytopes, coloring, matroid, phi })
    }

    pub fn len(&self) -> usize {
        self.polytopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polytopes.is_empty()
    }

    /// The rank bound of the conclusion: `dim_ℝ(𝔽)·(d−k)(r+1)`.
    pub fn rank_bound(&self) -> usize {
        self.field.real_dim() * (self.d - self.k) * (self.r + 1)
    }
}

/// Feasibility answer for the geometric predicates: an exact common point
/// or a validated Farkas certificate.
#[derive(Debug, Clone)]
pub enum LpResult {
    Feasible { point: Vec<Scalar> },
    Infeasible { certificate: FarkasCertificate },
}

impl LpResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpResult::Feasible { .. })
    }

    pub fn point(&self) -> Option<&[Scalar]> {
        match self {
            LpResult::Feasible { point } => Some(point),
            LpResult::Infeasible { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&FarkasCertificate> {
        match self {
            LpResult::Feasible { .. } => None,
            LpResult::Infeasible { certificate } => Some(certificate),
        }
    }
}

/// One field-valued linear equality, accumulated sparsely and then split
/// into real rows according to the field.
pub(crate) struct FieldRow {
    re: Vec<(usize, Rational)>,
    im: Vec<(usize, Rational)>,
    rhs: Scalar,
}

impl FieldRow {
    pub(crate) fn new() -> Self {
        FieldRow { re: Vec::new(), im: Vec::new(), rhs: Scalar::zero() }
    }

    /// Term `coeff · x` where `x` is a real variable occupying one slot.
    pub(crate) fn add_real_var(&mut self, slot: usize, coeff: &Scalar) {
        if !coeff.re.is_zero() {
            self.re.push((slot, coeff.re.clone()));
        }
        if !coeff.im.is_zero() {
            self.im.push((slot, coeff.im.clone()));
        }
    }

    /// Term `coeff · z` where `z` is a field variable at `re_slot` (and
    /// `re_slot + 1` for its imaginary part over the complexes).
    pub(crate) fn add_field_var(&mut self, field: Field, re_slot: usize, coeff: &Scalar) {
        match field {
            Field::Real => {
                debug_assert!(coeff.is_real());
                if !coeff.re.is_zero() {
                    self.re.push((re_slot, coeff.re.clone()));
                }
            }
            Field::Complex => {
                // (a+bi)(x+yi) = (ax − by) + (ay + bx)i
                if !coeff.re.is_zero() {
                    self.re.push((re_slot, coeff.re.clone()));
                    self.im.push((re_slot + 1, coeff.re.clone()));
                }
                if !coeff.im.is_zero() {
                    self.re.push((re_slot + 1, -coeff.im.clone()));
                    self.im.push((re_slot, coeff.im.clone()));
                }
            }
        }
    }

    pub(crate) fn set_rhs(&mut self, rhs: Scalar) {
        self.rhs = rhs;
    }

    /// Emit the equality into the system: one row over the reals, a
    /// real/imaginary pair over the complexes.
    pub(crate) fn push_eq(self, field: Field, sys: &mut LinearSystem) {
        sys.push_sparse(&self.re, Rel::Eq, self.rhs.re.clone());
        match field {
            Field::Real => debug_assert!(self.im.is_empty() && self.rhs.im.is_zero()),
            Field::Complex => sys.push_sparse(&self.im, Rel::Eq, self.rhs.im.clone()),
        }
    }
}

/// Number of real LP slots a field variable occupies.
pub(crate) fn slots(field: Field) -> usize {
    field.real_dim()
}

/// Reads a field point out of consecutive real LP slots.
pub(crate) fn point_from_slots(field: Field, x: &[Rational], base: usize, dim: usize) -> Vec<Scalar> {
    (0..dim)
        .map(|c| match field {
            Field::Real => Scalar::from_rational(x[base + c].clone()),
            Field::Complex => {
                Scalar::new(x[base + 2 * c].clone(), x[base + 2 * c + 1].clone())
            }
        })
        .collect()
}

fn check_family(parts: &[&Polytope]) -> Result<(Field, usize), GeometryError> {
    let first = parts.first().ok_or(GeometryError::EmptyFamily)?;
    let (field, dim) = (first.field(), first.dim());
    for p in parts {
        if p.field() != field {
            return Err(GeometryError::FieldMismatch);
        }
        if p.dim() != dim {
            return Err(GeometryError::DimensionMismatch { expected: dim, got: p.dim() });
        }
    }
    Ok((field, dim))
}

/// Does the family have a common point? One LP in barycentric variables
/// per polytope; the witness is a common point in `𝔽^d`.
pub fn polytopes_intersect(parts: &[&Polytope]) -> Result<LpResult, GeometryError> {
    let (field, dim) = check_family(parts)?;
    let ff = slots(field);
    let point_base = 0;
    let mut next = dim * ff;
    let lambda_base: Vec<usize> = parts
        .iter()
        .map(|p| {
            let b = next;
            next += p.vertices().len();
            b
        })
        .collect();
    let mut sys = LinearSystem::new(next);
    sys.set_nonneg_range(dim * ff..next);

    for (p, &base) in parts.iter().zip(&lambda_base) {
        let ones: Vec<(usize, Rational)> = (0..p.vertices().len())
            .map(|v| (base + v, Rational::from_integer(1.into())))
            .collect();
        sys.push_sparse(&ones, Rel::Eq, Rational::from_integer(1.into()));
        for c in 0..dim {
            let mut row = FieldRow::new();
            for (v, vert) in p.vertices().iter().enumerate() {
                row.add_real_var(base + v, &vert[c]);
            }
            row.add_field_var(field, point_base + c * ff, &Scalar::from_int(-1));
            row.push_eq(field, &mut sys);
        }
    }

    Ok(match lp_feasible(&sys) {
        LpOutcome::Feasible(x) => LpResult::Feasible {
            point: point_from_slots(field, &x, point_base, dim),
        },
        LpOutcome::Infeasible(certificate) => LpResult::Infeasible { certificate },
    })
}

/// Do `conv(∪ g1)` and `conv(∪ g2)` intersect? A single LP over joint
/// barycentric weights; the witness is a point of both hulls.
pub fn hulls_of_unions_intersect(
    g1: &[&Polytope],
    g2: &[&Polytope],
) -> Result<LpResult, GeometryError> {
    let all: Vec<&Polytope> = g1.iter().chain(g2.iter()).copied().collect();
    let (field, dim) = check_family(&all)?;

    let count1: usize = g1.iter().map(|p| p.vertices().len()).sum();
    let count2: usize = g2.iter().map(|p| p.vertices().len()).sum();
    let n_vars = count1 + count2;
    let mut sys = LinearSystem::new(n_vars);
    sys.set_nonneg_range(0..n_vars);

    let one = Rational::from_integer(1.into());
    let ones1: Vec<(usize, Rational)> = (0..count1).map(|v| (v, one.clone())).collect();
    let ones2: Vec<(usize, Rational)> =
        (count1..n_vars).map(|v| (v, one.clone())).collect();
    sys.push_sparse(&ones1, Rel::Eq, one.clone());
    sys.push_sparse(&ones2, Rel::Eq, one.clone());

    let verts1: Vec<&Vec<Scalar>> = g1.iter().flat_map(|p| p.vertices()).collect();
    let verts2: Vec<&Vec<Scalar>> = g2.iter().flat_map(|p| p.vertices()).collect();
    for c in 0..dim {
        let mut row = FieldRow::new();
        for (v, vert) in verts1.iter().enumerate() {
            row.add_real_var(v, &vert[c]);
        }
        for (v, vert) in verts2.iter().enumerate() {
            row.add_real_var(count1 + v, &(-&vert[c]));
        }
        row.push_eq(field, &mut sys);
    }

    Ok(match lp_feasible(&sys) {
        LpOutcome::Feasible(x) => {
            let mut point = vec![Scalar::zero(); dim];
            for (v, vert) in verts1.iter().enumerate() {
                if !x[v].is_zero() {
                    let w = Scalar::from_rational(x[v].clone());
                    for (acc, coord) in point.iter_mut().zip(vert.iter()) {
                        *acc = &*acc + &(&w * coord);
                    }
                }
            }
            LpResult::Feasible { point }
        }
        LpOutcome::Infeasible(certificate) => LpResult::Infeasible { certificate },
    })
}

/// Does the flat meet the polytope? Parameters of the flat are free field
/// unknowns; membership in the polytope is barycentric.
pub fn flat_meets_polytope(flat: &Flat, p: &Polytope) -> Result<LpResult, GeometryError> {
    if flat.field() != p.field() {
        return Err(GeometryError::FieldMismatch);
    }
    if flat.ambient() != p.dim() {
        return Err(GeometryError::DimensionMismatch { expected: flat.ambient(), got: p.dim() });
    }
    let field = flat.field();
    let dim = p.dim();
    let ff = slots(field);
    let k = flat.k();
    let param_base = 0;
    let lambda_base = k * ff;
    let n_vars = lambda_base + p.vertices().len();
    let mut sys = LinearSystem::new(n_vars);
    sys.set_nonneg_range(lambda_base..n_vars);

    let one = Rational::from_integer(1.into());
    let ones: Vec<(usize, Rational)> = (0..p.vertices().len())
        .map(|v| (lambda_base + v, one.clone()))
        .collect();
    sys.push_sparse(&ones, Rel::Eq, one);

    for c in 0..dim {
        // base_c + Σ_j s_j·dir_j[c] − Σ_v λ_v·vert_v[c] = 0
        let mut row = FieldRow::new();
        for (j, dir) in flat.dirs().iter().enumerate() {
            row.add_field_var(field, param_base + j * ff, &dir[c]);
        }
        for (v, vert) in p.vertices().iter().enumerate() {
            row.add_real_var(lambda_base + v, &(-&vert[c]));
        }
        row.set_rhs(-&flat.base()[c]);
        row.push_eq(field, &mut sys);
    }

    Ok(match lp_feasible(&sys) {
        LpOutcome::Feasible(x) => {
            let params = point_from_slots(field, &x, param_base, k);
            LpResult::Feasible { point: flat.point_at(&params) }
        }
        LpOutcome::Infeasible(certificate) => LpResult::Infeasible { certificate },
    })
}

/// Basis of the affine dependencies of a point list in `𝔽^r`: vectors `a`
/// with `Σ aᵢ = 0` and `Σ aᵢ pᵢ = 0`, via the kernel of the lifted
/// `(r+1)×m` matrix.
pub fn affine_dependency_kernel(points: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let m = points.len();
    assert!(m >= 1, "need at least one point");
    let r = points[0].len();
    assert!(points.iter().all(|p| p.len() == r), "ragged point list");
    let mut rows = Vec::with_capacity(r + 1);
    rows.push(vec![Scalar::one(); m]);
    for c in 0..r {
        rows.push(points.iter().map(|p| p[c].clone()).collect());
    }
    QMatrix::from_rows(rows).kernel_basis()
}

/// Indices of instance polytopes whose height-one lift misses the
/// orthocomplement of the frame's span. Decided by one LP per set: the
/// lift is lowered onto the span's orthocomplement by the `d−k` Hermitian
/// orthogonality rows, and infeasibility means membership in `S(v)`.
pub fn compute_shadow_set(
    frame: &[Vec<Scalar>],
    inst: &Instance,
) -> Result<BTreeSet<usize>, GeometryError> {
    let field = inst.field;
    let lifted_dim = inst.d + 1;
    for v in frame {
        if v.len() != lifted_dim {
            return Err(GeometryError::DimensionMismatch { expected: lifted_dim, got: v.len() });
        }
        if field == Field::Real && v.iter().any(|c| !c.is_real()) {
            return Err(GeometryError::NotReal);
        }
    }
    if frame.is_empty() || QMatrix::from_columns(frame.to_vec()).rank() != frame.len() {
        return Err(GeometryError::DependentFrame);
    }

    let one = Rational::from_integer(1.into());
    let mut shadow = BTreeSet::new();
    for (i, p) in inst.polytopes.iter().enumerate() {
        let n_vars = p.vertices().len();
        let mut sys = LinearSystem::new(n_vars);
        sys.set_nonneg_range(0..n_vars);
        let ones: Vec<(usize, Rational)> = (0..n_vars).map(|v| (v, one.clone())).collect();
        sys.push_sparse(&ones, Rel::Eq, one.clone());
        for fv in frame {
            // ⟨f, x⟩ = Σ_t conj(f_t)·x_t over the lifted point x = (q, 1)
            let mut row = FieldRow::new();
            for (v, vert) in p.vertices().iter().enumerate() {
                let mut coeff = fv[inst.d].conj();
                for (t, coord) in vert.iter().enumerate() {
                    coeff = &coeff + &(&fv[t].conj() * coord);
                }
                row.add_real_var(v, &coeff);
            }
            row.push_eq(field, &mut sys);
        }
        if !lp_feasible(&sys).is_feasible() {
            shadow.insert(i);
        }
    }
    Ok(shadow)
}
