//! Matroids as independence oracles over ordered ground sets, with the
//! minor and extension operations needed downstream: deletion, link
//! (contraction at an independent element) and parallel extension.

use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;

use crate::matrix::QMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatroidError {
    #[error("unknown element id {0}")]
    UnknownElement(usize),
    #[error("element {0} is a loop and cannot be linked at")]
    LoopPivot(usize),
    #[error("matroid has loops")]
    HasLoops,
    #[error("multiplicity for element {0} must be at least 1")]
    ZeroMultiplicity(usize),
    #[error("ground set of size {n} exceeds the brute-force cap {cap}")]
    GroundTooLarge { n: usize, cap: usize },
    #[error("invalid construction: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug)]
enum Backend {
    /// Independent iff `|S| ≤ rank`.
    Uniform { rank: usize },
    /// At most one element per class; `class_of[i]` indexed by element id.
    Partition { class_of: Vec<Option<usize>> },
    /// Independent iff the corresponding columns are linearly independent.
    Linear { columns: Arc<QMatrix> },
    /// Independent iff contained in one of the listed sets. The listed sets
    /// need not form a matroid; `verify_axioms` decides that.
    Explicit { bases: Arc<Vec<BTreeSet<usize>>> },
    /// σ independent iff σ ∪ {pivot} independent in the inner matroid.
    Link { inner: Arc<Matroid>, pivot: usize },
    /// Copies of inner elements; at most one copy per original, and the
    /// projection must be independent.
    Parallel { inner: Arc<Matroid>, orig_of: Arc<Vec<usize>> },
}

/// A matroid (or candidate matroid, for the explicit backend) given by an
/// independence oracle on an ordered ground set of element ids.
#[derive(Clone, Debug)]
pub struct Matroid {
    ground: Vec<usize>,
    backend: Backend,
    rank: usize,
}

impl Matroid {
    fn build(ground: Vec<usize>, backend: Backend) -> Self {
        let mut m = Matroid { ground, backend, rank: 0 };
        m.rank = m.greedy_rank(&m.ground.iter().copied().collect());
        m
    }

    /// Uniform matroid U(rank, n) on elements `0..n`.
    pub fn uniform(rank: usize, n: usize) -> Result<Self, MatroidError> {
        if rank > n {
            return Err(MatroidError::Invalid(format!(
                "uniform rank {rank} exceeds ground size {n}"
            )));
        }
        if rank == 0 && n > 0 {
            // every element would be a loop
            return Err(MatroidError::HasLoops);
        }
        Ok(Self::build((0..n).collect(), Backend::Uniform { rank }))
    }

    /// Partition matroid with consecutive classes of the given sizes and
    /// per-class capacity one.
    pub fn partition(class_sizes: &[usize]) -> Result<Self, MatroidError> {
        if class_sizes.contains(&0) {
            return Err(MatroidError::Invalid("empty color class".into()));
        }
        let mut classes = Vec::new();
        let mut next = 0;
        for (c, &s) in class_sizes.iter().enumerate() {
            classes.push((next..next + s).collect::<Vec<usize>>());
            next += s;
            let _ = c;
        }
        Self::partition_from_classes(&classes)
    }

    /// Partition matroid from explicit (disjoint, nonempty) classes.
    pub fn partition_from_classes(classes: &[Vec<usize>]) -> Result<Self, MatroidError> {
        let mut ground: Vec<usize> = Vec::new();
        let max_id = classes.iter().flatten().copied().max();
        let mut class_of: Vec<Option<usize>> = vec![None; max_id.map_or(0, |m| m + 1)];
        for (c, members) in classes.iter().enumerate() {
            if members.is_empty() {
                return Err(MatroidError::Invalid("empty color class".into()));
            }
            for &e in members {
                if class_of[e].is_some() {
                    return Err(MatroidError::Invalid(format!(
                        "element {e} appears in two classes"
                    )));
                }
                class_of[e] = Some(c);
                ground.push(e);
            }
        }
        ground.sort_unstable();
        Ok(Self::build(ground, Backend::Partition { class_of }))
    }

    /// Linear matroid; element `i` is column `i` of the matrix. Zero
    /// columns are loops and are permitted.
    pub fn linear(columns: QMatrix) -> Self {
        let n = columns.cols();
        Self::build((0..n).collect(), Backend::Linear { columns: Arc::new(columns) })
    }

    /// Explicit backend from a list of claimed maximal independent sets.
    pub fn from_bases(n: usize, bases: Vec<BTreeSet<usize>>) -> Result<Self, MatroidError> {
        if bases.is_empty() {
            return Err(MatroidError::Invalid("no bases given".into()));
        }
        for b in &bases {
            if let Some(&e) = b.iter().find(|&&e| e >= n) {
                return Err(MatroidError::UnknownElement(e));
            }
        }
        Ok(Self::build((0..n).collect(), Backend::Explicit { bases: Arc::new(bases) }))
    }

    pub fn ground(&self) -> &[usize] {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.ground.binary_search(&e).is_ok()
    }

    /// Rank of the full ground set (cached at construction).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Independence oracle. The set must be a subset of the ground set.
    pub fn is_independent(&self, set: &BTreeSet<usize>) -> bool {
        for &e in set {
            assert!(self.contains(e), "element {e} outside the ground set");
        }
        self.indep_unchecked(set)
    }

    fn indep_unchecked(&self, set: &BTreeSet<usize>) -> bool {
        match &self.backend {
            Backend::Uniform { rank } => set.len() <= *rank,
            Backend::Partition { class_of } => {
                let mut seen = BTreeSet::new();
                set.iter().all(|&e| seen.insert(class_of[e].expect("classless element")))
            }
            Backend::Linear { columns } => {
                let cols: Vec<usize> = set.iter().copied().collect();
                columns.select_columns(&cols).rank() == cols.len()
            }
            Backend::Explicit { bases } => bases.iter().any(|b| set.is_subset(b)),
            Backend::Link { inner, pivot } => {
                let mut with = set.clone();
                with.insert(*pivot);
                inner.indep_unchecked(&with)
            }
            Backend::Parallel { inner, orig_of } => {
                let mut proj = BTreeSet::new();
                for &e in set {
                    if !proj.insert(orig_of[e]) {
                        return false; // two copies of the same element
                    }
                }
                inner.indep_unchecked(&proj)
            }
        }
    }

    fn greedy_rank(&self, set: &BTreeSet<usize>) -> usize {
        let mut indep = BTreeSet::new();
        for &e in set {
            indep.insert(e);
            if !self.indep_unchecked(&indep) {
                indep.remove(&e);
            }
        }
        indep.len()
    }

    /// Rank of a subset: size of a maximal independent subset, grown
    /// greedily in ascending element order.
    pub fn rank_of(&self, set: &BTreeSet<usize>) -> Result<usize, MatroidError> {
        for &e in set {
            if !self.contains(e) {
                return Err(MatroidError::UnknownElement(e));
            }
        }
        Ok(self.greedy_rank(set))
    }

    pub fn is_loop(&self, e: usize) -> bool {
        assert!(self.contains(e), "element {e} outside the ground set");
        !self.indep_unchecked(&BTreeSet::from([e]))
    }

    pub fn is_loopless(&self) -> bool {
        self.ground.iter().all(|&e| !self.is_loop(e))
    }

    /// Matroid on `ground ∖ {e}` with the restricted oracle.
    pub fn deletion(&self, e: usize) -> Result<Self, MatroidError> {
        if !self.contains(e) {
            return Err(MatroidError::UnknownElement(e));
        }
        let ground: Vec<usize> = self.ground.iter().copied().filter(|&x| x != e).collect();
        Ok(Self::build(ground, self.backend.clone()))
    }

    /// Link (contraction) at an independent element: σ is independent iff
    /// σ ∪ {e} is independent in `self`.
    pub fn link(&self, e: usize) -> Result<Self, MatroidError> {
        if !self.contains(e) {
            return Err(MatroidError::UnknownElement(e));
        }
        if self.is_loop(e) {
            return Err(MatroidError::LoopPivot(e));
        }
        let ground: Vec<usize> = self.ground.iter().copied().filter(|&x| x != e).collect();
        Ok(Self::build(
            ground,
            Backend::Link { inner: Arc::new(self.clone()), pivot: e },
        ))
    }

    /// Parallel extension: element at ground position `p` is replaced by
    /// `counts[p] ≥ 1` mutually dependent copies. The new ground set is
    /// `0..total` with copies consecutive in original ground order; the
    /// rank is preserved.
    pub fn parallel_extension(&self, counts: &[usize]) -> Result<Self, MatroidError> {
        if counts.len() != self.ground.len() {
            return Err(MatroidError::Invalid(format!(
                "got {} multiplicities for {} elements",
                counts.len(),
                self.ground.len()
            )));
        }
        if !self.is_loopless() {
            return Err(MatroidError::HasLoops);
        }
        let mut orig_of = Vec::new();
        for (p, (&e, &c)) in self.ground.iter().zip(counts).enumerate() {
            if c == 0 {
                return Err(MatroidError::ZeroMultiplicity(e));
            }
            orig_of.extend(std::iter::repeat_n(e, c));
            let _ = p;
        }
        let total = orig_of.len();
        Ok(Self::build(
            (0..total).collect(),
            Backend::Parallel { inner: Arc::new(self.clone()), orig_of: Arc::new(orig_of) },
        ))
    }

    /// All nonempty independent sets of size at most `max_card`, grouped by
    /// cardinality and lexicographic within each size.
    pub fn enumerate_independent_sets(&self, max_card: usize) -> Vec<BTreeSet<usize>> {
        let mut out = Vec::new();
        for size in 1..=max_card.min(self.ground.len()) {
            for combo in self.ground.iter().copied().combinations(size) {
                let set: BTreeSet<usize> = combo.into_iter().collect();
                if self.indep_unchecked(&set) {
                    out.push(set);
                }
            }
        }
        out
    }

    /// Inclusion-maximal independent sets (the facets of the independence
    /// complex; the bases, for an actual matroid).
    pub fn maximal_independent_sets(&self) -> Vec<BTreeSet<usize>> {
        let all = self.enumerate_independent_sets(self.ground.len());
        let mut maximal: Vec<BTreeSet<usize>> = Vec::new();
        // size-major enumeration reversed puts supersets first
        for s in all.iter().rev() {
            if !maximal.iter().any(|m| s.is_subset(m)) {
                maximal.push(s.clone());
            }
        }
        maximal.sort();
        maximal
    }

    pub const DEFAULT_AXIOM_CAP: usize = 12;

    /// Brute-force check of downward closure and the exchange axiom; on
    /// failure the report carries a re-checkable violating pair.
    pub fn verify_axioms(&self) -> Result<MatroidCheckReport, MatroidError> {
        self.verify_axioms_capped(Self::DEFAULT_AXIOM_CAP)
    }

    pub fn verify_axioms_capped(&self, cap: usize) -> Result<MatroidCheckReport, MatroidError> {
        let n = self.ground.len();
        if n > cap {
            return Err(MatroidError::GroundTooLarge { n, cap });
        }
        let independents = self.enumerate_independent_sets(n);
        // downward closure
        for s in &independents {
            for &e in s {
                let mut smaller = s.clone();
                smaller.remove(&e);
                if !smaller.is_empty() && !self.indep_unchecked(&smaller) {
                    return Ok(MatroidCheckReport::fail(
                        ViolatedAxiom::DownwardClosure,
                        smaller,
                        s.clone(),
                    ));
                }
            }
        }
        // exchange: |I| < |J| must admit e ∈ J∖I with I + e independent
        for i in &independents {
            for j in &independents {
                if i.len() >= j.len() {
                    continue;
                }
                let can_extend = j.difference(i).any(|&e| {
                    let mut grown = i.clone();
                    grown.insert(e);
                    self.indep_unchecked(&grown)
                });
                if !can_extend {
                    return Ok(MatroidCheckReport::fail(
                        ViolatedAxiom::Exchange,
                        i.clone(),
                        j.clone(),
                    ));
                }
            }
        }
        Ok(MatroidCheckReport::pass())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolatedAxiom {
    DownwardClosure,
    Exchange,
}

/// Outcome of the brute-force axiom check.
#[derive(Debug, Clone)]
pub struct MatroidCheckReport {
    pub passed: bool,
    pub violation: Option<(ViolatedAxiom, BTreeSet<usize>, BTreeSet<usize>)>,
}

impl MatroidCheckReport {
    fn pass() -> Self {
        MatroidCheckReport { passed: true, violation: None }
    }

    fn fail(axiom: ViolatedAxiom, a: BTreeSet<usize>, b: BTreeSet<usize>) -> Self {
        MatroidCheckReport { passed: false, violation: Some((axiom, a, b)) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn uniform_rank_caps() {
        let m = Matroid::uniform(2, 4).unwrap();
        assert_eq!(m.rank_of(&set(&[0, 1, 2])).unwrap(), 2);
        assert_eq!(m.rank(), 2);
        assert!(m.rank_of(&set(&[7])).is_err());
    }

    #[test]
    fn partition_one_per_class() {
        let m = Matroid::partition(&[2, 1]).unwrap();
        assert_eq!(m.rank_of(&set(&[0, 1])).unwrap(), 1);
        assert_eq!(m.rank(), 2);
        assert!(m.is_independent(&set(&[0, 2])));
        assert!(!m.is_independent(&set(&[0, 1])));
    }

    #[test]
    fn linear_matroid_rank_by_elimination() {
        let cols = QMatrix::from_columns(vec![
            vec![Scalar::from_int(1), Scalar::from_int(0)],
            vec![Scalar::from_int(0), Scalar::from_int(1)],
            vec![Scalar::from_int(1), Scalar::from_int(1)],
        ]);
        let m = Matroid::linear(cols);
        assert_eq!(m.rank_of(&set(&[0, 1, 2])).unwrap(), 2);
        assert!(m.is_independent(&set(&[0, 2])));
        assert!(!m.is_independent(&set(&[0, 1, 2])));
    }

    #[test]
    fn deletion_shrinks_ground() {
        let m = Matroid::uniform(2, 4).unwrap();
        let d = m.deletion(3).unwrap();
        assert_eq!(d.ground(), &[0, 1, 2]);
        assert_eq!(d.rank(), 2);
        // oracle-equivalent to U(2,3) on all subsets
        let u23 = Matroid::uniform(2, 3).unwrap();
        for s in u23.enumerate_independent_sets(3) {
            assert!(d.is_independent(&s));
        }

        let p = Matroid::partition(&[2, 1]).unwrap();
        assert_eq!(p.deletion(2).unwrap().rank(), 1);

        let e = Matroid::from_bases(3, vec![set(&[0, 1]), set(&[0, 2]), set(&[1, 2])]).unwrap();
        let ed = e.deletion(0).unwrap();
        assert_eq!(ed.maximal_independent_sets(), vec![set(&[1, 2])]);
    }

    #[test]
    fn link_drops_rank_by_one() {
        let m = Matroid::uniform(2, 3).unwrap();
        let l = m.link(0).unwrap();
        assert_eq!(l.ground(), &[1, 2]);
        assert_eq!(l.rank(), 1);
        assert!(l.is_independent(&set(&[1])));
        assert!(!l.is_independent(&set(&[1, 2])));

        let full = Matroid::uniform(3, 3).unwrap();
        let lf = full.link(2).unwrap();
        assert_eq!(lf.rank(), 2);
        assert!(lf.is_independent(&set(&[0, 1])));
    }

    #[test]
    fn link_of_linear_matches_brute_force() {
        let cols = QMatrix::from_columns(vec![
            vec![Scalar::from_int(1), Scalar::from_int(0)],
            vec![Scalar::from_int(0), Scalar::from_int(1)],
            vec![Scalar::from_int(1), Scalar::from_int(1)],
        ]);
        let m = Matroid::linear(cols);
        let l = m.link(0).unwrap();
        for s in [set(&[1]), set(&[2]), set(&[1, 2])] {
            let mut with = s.clone();
            with.insert(0);
            assert_eq!(l.is_independent(&s), m.is_independent(&with));
        }
    }

    #[test]
    fn link_refuses_loops() {
        let cols = QMatrix::from_columns(vec![
            vec![Scalar::from_int(0), Scalar::from_int(0)],
            vec![Scalar::from_int(0), Scalar::from_int(1)],
        ]);
        let m = Matroid::linear(cols);
        assert!(matches!(m.link(0), Err(MatroidError::LoopPivot(0))));
    }

    #[test]
    fn parallel_extension_doubles_element() {
        let m = Matroid::uniform(2, 3).unwrap();
        let p = m.parallel_extension(&[2, 1, 1]).unwrap();
        assert_eq!(p.ground().len(), 4);
        assert_eq!(p.rank(), 2);
        let bases = p.maximal_independent_sets();
        // all pairs except the two copies {0,1} of the original element 0
        let expected: Vec<BTreeSet<usize>> =
            vec![set(&[0, 2]), set(&[0, 3]), set(&[1, 2]), set(&[1, 3]), set(&[2, 3])];
        assert_eq!(bases, expected);
    }

    #[test]
    fn parallel_extension_identity_and_rank_one() {
        let m = Matroid::uniform(2, 3).unwrap();
        let p = m.parallel_extension(&[1, 1, 1]).unwrap();
        for s in m.enumerate_independent_sets(3) {
            assert!(p.is_independent(&s));
        }
        assert_eq!(p.enumerate_independent_sets(3).len(), m.enumerate_independent_sets(3).len());

        let one = Matroid::uniform(1, 1).unwrap();
        let tripled = one.parallel_extension(&[3]).unwrap();
        assert_eq!(tripled.rank(), 1);
        assert_eq!(tripled.ground().len(), 3);
        assert!(!tripled.is_independent(&set(&[0, 1])));
    }

    #[test]
    fn axioms_pass_and_fail() {
        assert!(Matroid::uniform(2, 4).unwrap().verify_axioms().unwrap().passed);

        let fake = Matroid::from_bases(4, vec![set(&[0, 1]), set(&[2, 3])]).unwrap();
        let report = fake.verify_axioms().unwrap();
        assert!(!report.passed);
        let (axiom, a, b) = report.violation.unwrap();
        assert_eq!(axiom, ViolatedAxiom::Exchange);
        // the witness must be re-checkable against the oracle
        assert!(fake.is_independent(&a) && fake.is_independent(&b));
        assert!(a.len() < b.len());
        assert!(b.difference(&a).all(|&e| {
            let mut grown = a.clone();
            grown.insert(e);
            !fake.is_independent(&grown)
        }));

        let ext = Matroid::uniform(2, 3).unwrap().parallel_extension(&[2, 1, 1]).unwrap();
        assert!(ext.verify_axioms().unwrap().passed);
    }

    #[test]
    fn enumeration_is_sorted_and_nonempty_only() {
        let m = Matroid::partition(&[2, 1]).unwrap();
        let sets = m.enumerate_independent_sets(2);
        assert_eq!(
            sets,
            vec![set(&[0]), set(&[1]), set(&[2]), set(&[0, 2]), set(&[1, 2])]
        );
        let u = Matroid::uniform(1, 2).unwrap();
        assert_eq!(u.enumerate_independent_sets(2), vec![set(&[0]), set(&[1])]);
        assert_eq!(
            Matroid::uniform(2, 3).unwrap().enumerate_independent_sets(1),
            vec![set(&[0]), set(&[1]), set(&[2])]
        );
    }

    #[test]
    fn axiom_cap_enforced() {
        let m = Matroid::uniform(3, 13).unwrap();
        assert!(matches!(
            m.verify_axioms(),
            Err(MatroidError::GroundTooLarge { n: 13, cap: 12 })
        ));
    }
}
