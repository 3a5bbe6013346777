use std::collections::BTreeSet;

use proptest::prelude::*;
use toric_implicit::lattice_geometry::{
    ehrhart_counts, enumerate_counts, pt, select_edge_set, DegreeSpec, LatticePoint, Polygon,
};

fn polygon() -> impl Strategy<Value = Polygon> {
    prop::collection::vec((0i64..=8, 0i64..=8), 3..=8)
        .prop_filter_map("collinear", |v| {
            let pts: Vec<LatticePoint> = v.into_iter().map(|(x, y)| pt(x, y)).collect();
            Polygon::hull(&pts).ok()
        })
}

/// Connected chains of edges, as index sets.
fn chains(n: usize) -> Vec<Vec<usize>> {
    let mut out = BTreeSet::new();
    for start in 0..n {
        for len in 1..n {
            let mut c: Vec<usize> = (0..len).map(|j| (start + j) % n).collect();
            c.sort_unstable();
            out.insert(c);
        }
    }
    out.into_iter().collect()
}

/// A subset of the cyclically ordered edges is a chain when exactly one of
/// its members has its predecessor missing.
fn is_chain(n: usize, set: &[usize]) -> bool {
    let s: BTreeSet<usize> = set.iter().copied().collect();
    !s.is_empty() && s.len() < n && s.iter().filter(|&&i| !s.contains(&((i + n - 1) % n))).count() == 1
}

fn b_i(q: &Polygon, set: &[usize]) -> i64 {
    set.iter().map(|&i| q.edges()[i].length).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn ehrhart_matches_enumeration(q in polygon()) {
        prop_assert!(q.area2() > 0);
        for k in 1..=3 {
            prop_assert_eq!(ehrhart_counts(&q, k), enumerate_counts(&q, k));
        }
    }

    #[test]
    fn pushed_pieces_agree_with_set_difference(q in polygon()) {
        let (a2, b) = (q.area2(), q.boundary());
        for set in chains(q.edges().len()) {
            let bi = b_i(&q, &set);
            if 2 * bi > b {
                continue;
            }
            for k in 1..=3i64 {
                let pushed: Vec<LatticePoint> = DegreeSpec::pushed(&q, k, &set).basis().to_vec();
                let minus: Vec<LatticePoint> = DegreeSpec::scaled(&q, k)
                    .basis()
                    .iter()
                    .copied()
                    .filter(|p| set.iter().all(|&i| p.dot(q.edges()[i].eta) != -k * q.edges()[i].offset))
                    .collect();
                prop_assert_eq!(&pushed, &minus);
                // (k^2 2A + k B) / 2 + 1 minus the k B_I + 1 points on the chain
                prop_assert_eq!(pushed.len() as i64, (k * k * a2 + k * b) / 2 - k * bi);
            }
        }
    }

    #[test]
    fn edge_selection_matches_exhaustive_search(q in polygon()) {
        let n = q.edges().len();
        prop_assume!(n <= 8);
        let b = q.boundary();
        let best = (1u32..(1 << n) - 1)
            .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>())
            .filter(|s| is_chain(n, s))
            .map(|s| b_i(&q, &s))
            .filter(|&bi| 2 * bi <= b)
            .max()
            .unwrap();
        let sel = select_edge_set(&q, None).unwrap();
        prop_assert_eq!(sel.b_i, best);
        prop_assert!(is_chain(n, &sel.edges));
        prop_assert!(b >= 2 * sel.b_i);
    }
}

#[test]
fn explicit_edge_sets_are_validated() {
    let q = Polygon::hull(&[pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]).unwrap();
    assert!(select_edge_set(&q, Some(&[0, 2])).is_err());
    assert!(select_edge_set(&q, Some(&[0, 1, 2, 3])).is_err());
    assert_eq!(select_edge_set(&q, Some(&[3, 0])).unwrap().b_i, 2);
}
