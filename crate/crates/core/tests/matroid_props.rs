//! Structural properties of the matroid oracles across a small fleet:
//! rank monotonicity and submodularity on all subsets, commuting
//! deletions, rank preservation under parallel extension, and the
//! brute-force axiom check on every backend.

use std::collections::BTreeSet;

use tvlab_core::matrix::QMatrix;
use tvlab_core::matroid::Matroid;
use tvlab_core::scalar::Scalar;

fn fleet() -> Vec<(String, Matroid)> {
    let mut out: Vec<(String, Matroid)> = Vec::new();
    for (r, n) in [(1, 4), (2, 4), (2, 6), (3, 6), (4, 8), (3, 8)] {
        out.push((format!("U({r},{n})"), Matroid::uniform(r, n).unwrap()));
    }
    for sizes in [vec![2, 2], vec![3, 2, 1], vec![2, 2, 2, 2], vec![4, 4]] {
        let name = format!("partition{sizes:?}");
        out.push((name, Matroid::partition(&sizes).unwrap()));
    }
    // small linear matroids with repeated and dependent columns
    let cols = |v: Vec<Vec<i64>>| -> QMatrix {
        QMatrix::from_columns(
            v.into_iter()
                .map(|c| c.into_iter().map(Scalar::from_int).collect())
                .collect(),
        )
    };
    out.push((
        "linear-fano-ish".into(),
        Matroid::linear(cols(vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 0],
            vec![0, 1, 1],
            vec![1, 1, 1],
        ])),
    ));
    out.push((
        "linear-parallel-pair".into(),
        Matroid::linear(cols(vec![vec![1, 0], vec![2, 0], vec![0, 1], vec![1, 1]])),
    ));
    out.push((
        "explicit-u24".into(),
        Matroid::from_bases(
            4,
            vec![
                [0, 1].into(),
                [0, 2].into(),
                [0, 3].into(),
                [1, 2].into(),
                [1, 3].into(),
                [2, 3].into(),
            ],
        )
        .unwrap(),
    ));
    out
}

fn subset_of_mask(ground: &[usize], mask: usize) -> BTreeSet<usize> {
    ground
        .iter()
        .enumerate()
        .filter(|&(p, _)| (mask >> p) & 1 == 1)
        .map(|(_, &e)| e)
        .collect()
}

#[test]
fn rank_is_monotone_and_submodular_on_all_subsets() {
    for (name, m) in fleet() {
        let n = m.ground().len();
        assert!(n <= 8, "{name} too large for the exhaustive check");
        let ranks: Vec<usize> = (0..1usize << n)
            .map(|mask| m.rank_of(&subset_of_mask(m.ground(), mask)).unwrap())
            .collect();
        for a in 0..1usize << n {
            // monotone in one-element steps
            for p in 0..n {
                if (a >> p) & 1 == 0 {
                    assert!(ranks[a] <= ranks[a | (1 << p)], "{name}: rank not monotone");
                }
            }
        }
        for a in 0..1usize << n {
            for b in 0..1usize << n {
                let union = a | b;
                let inter = a & b;
                assert!(
                    ranks[a] + ranks[b] >= ranks[union] + ranks[inter],
                    "{name}: submodularity fails on masks {a:#b}, {b:#b}"
                );
            }
        }
    }
}

#[test]
fn deletions_commute_as_oracles() {
    for (name, m) in fleet() {
        let ground = m.ground().to_vec();
        if ground.len() < 2 {
            continue;
        }
        let (a, b) = (ground[0], ground[1]);
        let ab = m.deletion(a).unwrap().deletion(b).unwrap();
        let ba = m.deletion(b).unwrap().deletion(a).unwrap();
        assert_eq!(ab.ground(), ba.ground(), "{name}");
        let n = ab.ground().len();
        for mask in 0..1usize << n {
            let s = subset_of_mask(ab.ground(), mask);
            assert_eq!(
                ab.is_independent(&s),
                ba.is_independent(&s),
                "{name}: deletion order changes the oracle on {s:?}"
            );
        }
    }
}

#[test]
fn parallel_extension_preserves_rank() {
    for (name, m) in fleet() {
        if !m.is_loopless() {
            continue;
        }
        let n = m.ground().len();
        for pattern in 0..3usize {
            let counts: Vec<usize> = (0..n).map(|p| 1 + (p + pattern) % 3).collect();
            let ext = m.parallel_extension(&counts).unwrap();
            assert_eq!(ext.rank(), m.rank(), "{name}: rank changed under {counts:?}");
        }
    }
}

#[test]
fn axioms_hold_for_every_backend_and_extension() {
    for (name, m) in fleet() {
        if m.ground().len() > 8 {
            continue;
        }
        let report = m.verify_axioms().unwrap();
        assert!(report.passed, "{name} failed the axiom check: {:?}", report.violation);

        if m.is_loopless() && m.ground().len() <= 5 {
            let counts: Vec<usize> = (0..m.ground().len()).map(|p| 1 + p % 2).collect();
            let ext = m.parallel_extension(&counts).unwrap();
            let report = ext.verify_axioms().unwrap();
            assert!(report.passed, "parallel extension of {name} failed the axioms");
        }
    }
}

#[test]
fn link_rank_drops_when_pivot_is_in_a_basis() {
    for (name, m) in fleet() {
        if !m.is_loopless() || m.rank() == 0 {
            continue;
        }
        let e = m.ground()[0];
        let linked = m.link(e).unwrap();
        assert_eq!(linked.rank(), m.rank() - 1, "{name}: link rank");
    }
}
