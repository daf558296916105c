use std::collections::HashSet;

use obdd_core::boolfn::{n_min, n_min_by_enumeration, n_pi, subfunction_count, Partition};
use obdd_core::diagrams::build_binary_tree_obdd_in_order;
use obdd_core::zoo::{eq, mod_p, req};
use obdd_core::{BlockLayout, BoolFn, VarOrder};
use proptest::prelude::*;

fn random_fn(n: usize, seed: u64) -> BoolFn {
    let mut s = seed | 1;
    BoolFn::from_index_fn(n, |_| {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        s & 1 == 1
    })
    .unwrap()
}

/// Subfunction count by explicit restriction, independent of the bit-deposit path.
fn count_by_restriction(f: &BoolFn, order: &VarOrder, u: usize) -> usize {
    let vars = &order.as_slice()[..u];
    let mut seen = HashSet::new();
    for a in 0..1usize << u {
        let rho: Vec<(usize, bool)> = vars.iter().enumerate().map(|(t, &v)| (v, a >> (u - 1 - t) & 1 == 1)).collect();
        seen.insert(f.restrict(&rho).unwrap().to_hex());
    }
    seen.len()
}

#[test]
fn eq_identity_cut() {
    for n in [2, 4, 6, 8] {
        let f = eq(n).unwrap();
        let theta = Partition::new(VarOrder::identity(n), n / 2).unwrap();
        assert_eq!(subfunction_count(&f, &theta).unwrap(), 1 << (n / 2));
    }
}

#[test]
fn mod_p_counts() {
    // Reading u bits of MOD_3 leaves min(u + 1, 3) residues.
    let f = mod_p(3, 6).unwrap();
    for u in 1..6 {
        let theta = Partition::new(VarOrder::identity(6), u).unwrap();
        assert_eq!(subfunction_count(&f, &theta).unwrap(), (u + 1).min(3));
    }
}

#[test]
fn restriction_oracle_agrees() {
    for seed in 0..20u64 {
        let n = 3 + (seed as usize % 3);
        let f = random_fn(n, seed * 7919 + 1);
        for order in VarOrder::all(n).into_iter().step_by(5) {
            let by_restriction = (1..n).map(|u| count_by_restriction(&f, &order, u)).max().unwrap();
            assert_eq!(n_pi(&f, &order).unwrap(), by_restriction);
        }
    }
}

#[test]
fn n_min_is_reachable_width() {
    // The minimum over orders of the reachable width of the binary-tree
    // program after merging equal subfunctions is n_min.
    for seed in 0..10u64 {
        let f = random_fn(4, seed + 100);
        let best = VarOrder::all(4)
            .iter()
            .map(|o| (1..4).map(|u| count_by_restriction(&f, o, u)).max().unwrap())
            .min()
            .unwrap();
        assert_eq!(n_min(&f).unwrap().width, best);
        let m = n_min(&f).unwrap();
        let tree = build_binary_tree_obdd_in_order(&f, &[1, 2, 3, 4], &m.order).unwrap();
        assert_eq!(tree.truth_table().unwrap(), f);
    }
}

#[test]
fn req_q2_lower_bound() {
    let f = req(&BlockLayout::new(2).unwrap()).unwrap();
    let dp = n_min(&f).unwrap();
    assert_eq!(dp.width, n_min_by_enumeration(&f).unwrap().width);
    assert!(dp.width >= 2);
}

#[test]
fn reordered_eq_needs_the_original_width() {
    use obdd_core::reorder::reorder_function;
    use obdd_core::AddressMode;
    for q in [2, 4] {
        let layout = BlockLayout::new(q).unwrap();
        let f = eq(q).unwrap();
        let theta = Partition::new(VarOrder::identity(q), q / 2).unwrap();
        let bound = subfunction_count(&f, &theta).unwrap();
        let fr = reorder_function(&f, &layout, AddressMode::Xor).unwrap();
        assert!(n_min(&fr).unwrap().width >= bound, "q = {q}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn dp_matches_enumeration(n in 1usize..=6, seed in any::<u64>()) {
        let f = random_fn(n, seed);
        prop_assert_eq!(n_min(&f).unwrap().width, n_min_by_enumeration(&f).unwrap().width);
        let m = n_min(&f).unwrap();
        prop_assert_eq!(n_pi(&f, &m.order).unwrap(), m.width);
    }
}
