use std::collections::HashSet;

use obdd_core::boolfn::assignment;
use obdd_core::diagrams::build_binary_tree_obdd;
use obdd_core::qobdd::non_commutative_control;
use obdd_core::reorder::{
    addresses, is_allowed, reorder_function, reorder_nobdd, reorder_obdd, reorder_pobdd, totalize, xor_reorder_qobdd,
};
use obdd_core::zoo::{
    any_one_nobdd, coin_tree_pobdd, eq, eq_fingerprint_modulus, eq_xor_obdd, fingerprint_eq_qobdd, fixture_multipliers, req,
};
use obdd_core::{AddressMode, BlockLayout, Error};

const MODES: [AddressMode; 2] = [AddressMode::Direct, AddressMode::Xor];

#[test]
fn every_permutation_is_an_address_sequence() {
    for q in [2, 4] {
        let l = BlockLayout::new(q).unwrap();
        for mode in MODES {
            let perms: HashSet<Vec<usize>> = (0..1usize << l.n())
                .map(|i| assignment(i, l.n()))
                .filter(|x| is_allowed(&l, x, mode).unwrap())
                .map(|x| addresses(&l, &x, mode).unwrap())
                .collect();
            let fact: usize = (1..=q).product();
            assert_eq!(perms.len(), fact, "q = {q}, {mode}");
        }
    }
}

#[test]
fn classical_transforms_agree_with_reorder_function() {
    for q in [2, 4] {
        let l = BlockLayout::new(q).unwrap();
        let f = eq(q).unwrap();
        let obdd = eq_xor_obdd(q).unwrap();
        let nobdd = any_one_nobdd(q).unwrap();
        let any = nobdd.truth_table().unwrap();
        let pobdd = coin_tree_pobdd::<f64>(&f).unwrap();
        for mode in MODES {
            let fr = reorder_function(&f, &l, mode).unwrap();
            let r = reorder_obdd(&obdd, &l, mode).unwrap();
            assert!(r.width() <= q * obdd.width());
            totalize(&fr, &r).unwrap();

            let r = reorder_nobdd(&nobdd, &l, mode).unwrap();
            assert!(r.width() <= q * nobdd.width());
            totalize(&reorder_function(&any, &l, mode).unwrap(), &r).unwrap();

            let r = reorder_pobdd(&pobdd, &l, mode).unwrap();
            assert!(r.width() <= q * pobdd.width());
            totalize(&fr, &r).unwrap();
        }
    }
}

#[test]
fn quantum_transform_on_allowed_inputs() {
    for q in [2, 4] {
        let l = BlockLayout::new(q).unwrap();
        let set = fixture_multipliers(eq_fingerprint_modulus(q)).unwrap();
        let p = fingerprint_eq_qobdd::<f64>(q, &set.multipliers).unwrap();
        let r = xor_reorder_qobdd(&p, &l).unwrap();
        assert_eq!(r.dim(), q * p.dim());
        assert!(r.check_unitary().pass);
        let fr = reorder_function(&eq(q).unwrap(), &l, AddressMode::Xor).unwrap();
        for i in 0..1usize << l.n() {
            let pr = r.accept_probability_at(i).unwrap();
            match fr.at(i) {
                Some(true) => assert!((pr - 1.0).abs() < 1e-9),
                Some(false) => assert!(pr <= set.worst + 1e-9),
                None => {}
            }
        }
        // On every input the verdict is the reordered equality.
        assert_eq!(totalize(&fr, &r).unwrap(), req(&l).unwrap(), "q = {q}");
    }
}

#[test]
fn non_commutative_programs_are_rejected() {
    let l = BlockLayout::new(2).unwrap();
    let control = non_commutative_control::<f64>();
    assert!(matches!(xor_reorder_qobdd(&control, &l), Err(Error::NotCommutative(_))));
    // A tree for x1 and not x2 keys its nodes to reading positions.
    let f = obdd_core::BoolFn::from_fn(2, |x| x[0] && !x[1]).unwrap();
    let tree = build_binary_tree_obdd(&f, &[1, 2]).unwrap();
    for mode in MODES {
        assert!(matches!(reorder_obdd(&tree, &l, mode), Err(Error::NotCommutative(_))));
    }
}
