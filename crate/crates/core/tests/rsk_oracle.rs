//! Row insertion checked against a deliberately naive reimplementation.

use itertools::Itertools;
use proptest::prelude::*;
use rsk_trajectory::tableau::{rsk, BoxPosition, Permutation, Tableau};

/// Textbook row insertion with linear scans; returns the created cell.
fn naive_insert(rows: &mut Vec<Vec<f64>>, x: f64) -> (usize, usize) {
    let mut carry = x;
    for (r, row) in rows.iter_mut().enumerate() {
        match row.iter().position(|&y| y > carry) {
            Some(c) => carry = std::mem::replace(&mut row[c], carry),
            None => {
                row.push(carry);
                return (r + 1, row.len());
            }
        }
    }
    rows.push(vec![carry]);
    (rows.len(), 1)
}

fn naive_rsk(seq: &[f64]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let (mut p, mut q): (Vec<Vec<f64>>, Vec<Vec<f64>>) = (vec![], vec![]);
    for (j, &x) in seq.iter().enumerate() {
        let (r, _) = naive_insert(&mut p, x);
        if q.len() < r {
            q.push(vec![]);
        }
        q[r - 1].push((j + 1) as f64);
    }
    (p, q)
}

fn distinct_reals(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(-1_000_000i64..1_000_000, 0..max_len)
        .prop_map(|s| s.into_iter().map(|v| v as f64 / 997.0).collect::<Vec<_>>())
        .prop_shuffle()
}

#[test]
fn all_small_permutations_match_the_oracle() {
    for n in 0..=7 {
        for perm in (1..=n).permutations(n) {
            let seq: Vec<f64> = perm.iter().map(|&v| v as f64).collect();
            let (p, q) = rsk(&seq).unwrap();
            let (np, nq) = naive_rsk(&seq);
            assert_eq!(p.rows(), np.as_slice(), "{perm:?}");
            assert_eq!(q.rows(), nq.as_slice(), "{perm:?}");
        }
    }
}

#[test]
fn hand_examples() {
    let (p, q) = rsk(&[3.0, 1.0, 2.0]).unwrap();
    assert_eq!(p.to_string(), "[[1,2],[3]]");
    assert_eq!(q.to_string(), "[[1,3],[2]]");
    let mut t = Tableau::from_rows(vec![vec![1.0, 3.0, 5.0], vec![2.0, 4.0]]).unwrap();
    let route = t.insert(2.5).unwrap();
    assert_eq!(
        route.cells(),
        &[
            BoxPosition::new(1, 2),
            BoxPosition::new(2, 2),
            BoxPosition::new(3, 1)
        ]
    );
    assert_eq!(t.rows(), &[vec![1.0, 2.5, 5.0], vec![2.0, 3.0], vec![4.0]]);
}

#[test]
fn permutation_count_by_shape_matches_hook_lengths() {
    // Σ_λ f_λ² = n!, where f_λ counts standard tableaux of shape λ
    let n = 6;
    let mut by_shape = std::collections::HashMap::new();
    for perm in (1..=n).permutations(n) {
        let (p, _) = Permutation::new(perm).unwrap().rsk();
        *by_shape.entry(p.shape().parts().to_vec()).or_insert(0usize) += 1;
    }
    assert_eq!(by_shape.len(), 11);
    assert_eq!(by_shape[&vec![6]], 1);
    assert_eq!(by_shape[&vec![3, 2, 1]], 16 * 16);
    assert_eq!(by_shape[&vec![5, 1]], 25);
}

proptest! {
    #[test]
    fn real_sequences_match_the_oracle(seq in distinct_reals(60)) {
        let (p, q) = rsk(&seq).unwrap();
        let (np, nq) = naive_rsk(&seq);
        prop_assert_eq!(p.rows(), np.as_slice());
        prop_assert_eq!(q.rows(), nq.as_slice());
        prop_assert_eq!(p.shape(), q.shape());
    }

    #[test]
    fn reverse_insertion_undoes_insertion(seq in distinct_reals(40), x in -2000.0f64..2000.0) {
        let (p, _) = rsk(&seq).unwrap();
        prop_assume!(!p.contains(x));
        let (grown, route) = p.inserted(x).unwrap();
        prop_assert_eq!(p.new_box_position(x).unwrap(), route.last());
        let (back, y) = grown.reverse_inserted(route.last()).unwrap();
        prop_assert_eq!(back, p);
        prop_assert_eq!(y, x);
    }

    #[test]
    fn insertion_and_recording_swap_under_inversion(perm in Just((1..=9).collect::<Vec<usize>>()).prop_shuffle()) {
        let p = Permutation::new(perm).unwrap();
        let (ins, rec) = p.rsk();
        let (ins_inv, rec_inv) = p.inverse().rsk();
        prop_assert_eq!(ins, rec_inv);
        prop_assert_eq!(rec, ins_inv);
    }

    #[test]
    fn new_box_is_monotone(seq in distinct_reals(50), a in -1100.0f64..1100.0, b in -1100.0f64..1100.0) {
        let (p, _) = rsk(&seq).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assume!(!p.contains(lo) && !p.contains(hi));
        let (first, second) = (p.new_box_position(lo).unwrap(), p.new_box_position(hi).unwrap());
        prop_assert!(first.prec(second), "{} then {}", first, second);
        prop_assert!(first.to_point().prec(second.to_point()));
    }

    #[test]
    fn relabeling_by_increasing_map_commutes(seq in distinct_reals(40)) {
        let (p, q) = rsk(&seq).unwrap();
        let f = |v: f64| 3.0 * v + v.powi(3);
        let mapped: Vec<f64> = seq.iter().map(|&v| f(v)).collect();
        let (pm, qm) = rsk(&mapped).unwrap();
        prop_assert_eq!(p.relabel(f).unwrap(), pm);
        prop_assert_eq!(q, qm);
    }

    #[test]
    fn tableau_json_round_trips(seq in distinct_reals(30)) {
        let (p, _) = rsk(&seq).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        let back: Tableau = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, p);
    }
}
