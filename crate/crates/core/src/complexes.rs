//! Independence complexes, matroidal joins of finite discrete fibers, and
//! reduced integer homology via Smith normal form.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::One;

use crate::matrix::{smith_normal_form, ZMatrix};
use crate::matroid::{Matroid, MatroidError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("empty facet")]
    EmptyFacet,
    #[error("complex has no faces")]
    EmptyComplex,
    #[error("matroid has loops")]
    Loops,
    #[error("matroid error: {0}")]
    Matroid(#[from] MatroidError),
    #[error("maximal independent sets of unequal size; not a matroid")]
    UnequalBases,
}

/// Finite simplicial complex given by its inclusion-maximal faces.
/// Construction canonicalizes: duplicates and dominated sets are dropped,
/// facets and the vertex list are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<usize>,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn from_facets(facets: Vec<BTreeSet<usize>>) -> Result<Self, ComplexError> {
        if facets.iter().any(BTreeSet::is_empty) {
            return Err(ComplexError::EmptyFacet);
        }
        let mut maximal: Vec<BTreeSet<usize>> = Vec::new();
        let mut by_size = facets;
        by_size.sort_by_key(|f| std::cmp::Reverse(f.len()));
        for f in by_size {
            if !maximal.iter().any(|m| f.is_subset(m)) {
                maximal.push(f);
            }
        }
        let vertices: BTreeSet<usize> = maximal.iter().flatten().copied().collect();
        let mut facets: Vec<Vec<usize>> = maximal
            .into_iter()
            .map(|f| f.into_iter().collect())
            .collect();
        facets.sort();
        Ok(SimplicialComplex {
            vertices: vertices.into_iter().collect(),
            facets,
        })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    /// Dimension: largest facet size minus one. Panics on the void complex.
    pub fn dim(&self) -> usize {
        self.facets.iter().map(|f| f.len() - 1).max().expect("void complex")
    }

    /// All faces of dimension `q`, sorted lexicographically.
    pub fn faces(&self, q: usize) -> Vec<Vec<usize>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in &self.facets {
            if f.len() > q {
                for c in f.iter().copied().combinations(q + 1) {
                    out.insert(c);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Alternating sum of face counts, `Σ (−1)^q n_q`.
    pub fn euler_characteristic(&self) -> i64 {
        if self.is_void() {
            return 0;
        }
        let mut chi = 0i64;
        for q in 0..=self.dim() {
            let n = self.faces(q).len() as i64;
            chi += if q % 2 == 0 { n } else { -n };
        }
        chi
    }

    /// Boundary matrix from q-chains to (q−1)-chains (q ≥ 1), columns in
    /// lexicographic face order, sign by position parity.
    pub fn boundary_matrix(&self, q: usize) -> ZMatrix {
        assert!(q >= 1);
        let rows_faces = self.faces(q - 1);
        let cols_faces = self.faces(q);
        let index: BTreeMap<&[usize], usize> =
            rows_faces.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
        let mut m = ZMatrix::zeros(rows_faces.len(), cols_faces.len());
        for (j, face) in cols_faces.iter().enumerate() {
            for drop in 0..face.len() {
                let mut sub = face.clone();
                sub.remove(drop);
                let i = index[sub.as_slice()];
                let sign = if drop % 2 == 0 { 1 } else { -1 };
                m.set(i, j, BigInt::from(sign));
            }
        }
        m
    }
}

/// One reduced homology group: free rank plus torsion invariant factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn trivial() -> Self {
        HomologyGroup { betti: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

/// Reduced integer homology in degrees `0..=dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyProfile {
    groups: Vec<HomologyGroup>,
}

impl HomologyProfile {
    pub fn group(&self, degree: usize) -> &HomologyGroup {
        &self.groups[degree]
    }

    pub fn degrees(&self) -> usize {
        self.groups.len()
    }

    pub fn groups(&self) -> &[HomologyGroup] {
        &self.groups
    }
}

/// Reduced integer homology of a nonempty complex. Ranks and torsion come
/// from Smith normal forms of the boundary matrices (with the augmentation
/// map in degree zero); an Euler characteristic cross-check is asserted.
pub fn reduced_homology(k: &SimplicialComplex) -> Result<HomologyProfile, ComplexError> {
    if k.is_void() {
        return Err(ComplexError::EmptyComplex);
    }
    let dim = k.dim();
    let face_counts: Vec<usize> = (0..=dim).map(|q| k.faces(q).len()).collect();
    // rank of ∂_q for q = 0..=dim+1; ∂₀ is the augmentation (rank 1)
    let mut ranks = vec![0usize; dim + 2];
    let mut torsion_from = vec![Vec::<BigInt>::new(); dim + 2];
    ranks[0] = 1;
    for q in 1..=dim {
        let factors = smith_normal_form(&k.boundary_matrix(q));
        ranks[q] = factors.len();
        torsion_from[q] = factors.into_iter().filter(|f| !f.is_one()).collect();
    }
    let mut groups = Vec::with_capacity(dim + 1);
    for q in 0..=dim {
        let betti = face_counts[q]
            .checked_sub(ranks[q] + ranks[q + 1])
            .expect("negative Betti number; boundary ranks inconsistent");
        groups.push(HomologyGroup { betti, torsion: torsion_from[q + 1].clone() });
    }
    // χ = 1 + Σ (−1)^q b̃_q in the reduced convention
    let chi_faces = k.euler_characteristic();
    let chi_betti: i64 = groups
        .iter()
        .enumerate()
        .map(|(q, g)| if q % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) })
        .sum();
    assert_eq!(
        chi_faces,
        1 + chi_betti,
        "Euler characteristic mismatch between face counts and Betti numbers"
    );
    Ok(HomologyProfile { groups })
}

/// Homological connectivity: the largest `c` with vanishing reduced
/// homology in all degrees `≤ c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Connectivity {
    /// Reduced H₀ is nonzero: the complex is disconnected.
    Disconnected,
    /// Vanishing through degree `c`, nonvanishing in degree `c + 1`.
    UpTo(usize),
    /// All reduced homology through the top dimension vanishes.
    Acyclic,
}

impl Connectivity {
    /// Whether the complex is homologically at least `c`-connected. Any
    /// nonempty complex is (−1)-connected.
    pub fn at_least(&self, c: i64) -> bool {
        match self {
            Connectivity::Disconnected => c < 0,
            Connectivity::UpTo(m) => c <= *m as i64,
            Connectivity::Acyclic => true,
        }
    }
}

pub fn homological_connectivity(k: &SimplicialComplex) -> Result<Connectivity, ComplexError> {
    let profile = reduced_homology(k)?;
    for (q, g) in profile.groups().iter().enumerate() {
        if !g.is_trivial() {
            return Ok(if q == 0 {
                Connectivity::Disconnected
            } else {
                Connectivity::UpTo(q - 1)
            });
        }
    }
    Ok(Connectivity::Acyclic)
}

/// The independence complex of a loopless matroid: facets are the maximal
/// independent sets, which are asserted equicardinal (the bases).
pub fn independence_complex(m: &Matroid) -> Result<SimplicialComplex, ComplexError> {
    if !m.is_loopless() {
        return Err(ComplexError::Loops);
    }
    let bases = m.maximal_independent_sets();
    if !bases.iter().all(|b| b.len() == m.rank()) {
        return Err(ComplexError::UnequalBases);
    }
    SimplicialComplex::from_facets(bases)
}

/// Matroidal join of finite discrete fibers: `sizes[p]` points over the
/// element at ground position `p`. Vertices are numbered consecutively per
/// element in ground order, and a set of vertices is a face exactly when
/// it picks at most one point per element over an independent set.
///
/// The result is computed directly from the definition and asserted equal
/// to the independence complex of the corresponding parallel extension.
pub fn matroidal_join_discrete(
    m: &Matroid,
    sizes: &[usize],
) -> Result<SimplicialComplex, ComplexError> {
    if !m.is_loopless() {
        return Err(ComplexError::Loops);
    }
    if let Some(p) = sizes.iter().position(|&s| s == 0) {
        return Err(ComplexError::Matroid(MatroidError::ZeroMultiplicity(
            m.ground().get(p).copied().unwrap_or(p),
        )));
    }
    // vertex ids: prefix offsets per ground position
    let mut offset = Vec::with_capacity(m.ground().len());
    let mut total = 0usize;
    for &s in sizes {
        offset.push(total);
        total += s;
    }
    let pos_of: BTreeMap<usize, usize> =
        m.ground().iter().enumerate().map(|(p, &e)| (e, p)).collect();

    let mut facets: Vec<BTreeSet<usize>> = Vec::new();
    for sigma in m.maximal_independent_sets() {
        let positions: Vec<usize> = sigma.iter().map(|e| pos_of[e]).collect();
        let choices = positions.iter().map(|&p| 0..sizes[p]).multi_cartesian_product();
        for choice in choices {
            let facet: BTreeSet<usize> = positions
                .iter()
                .zip(&choice)
                .map(|(&p, &c)| offset[p] + c)
                .collect();
            facets.push(facet);
        }
    }
    let join = SimplicialComplex::from_facets(facets)?;

    let extension = m.parallel_extension(sizes)?;
    let from_extension = independence_complex(&extension)?;
    assert_eq!(
        join, from_extension,
        "matroidal join differs from the parallel-extension independence complex"
    );
    Ok(join)
}
