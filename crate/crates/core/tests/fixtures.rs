use obdd_core::zoo::{eq_fingerprint_modulus, fixture_multipliers, multiplier_worst_case, smallest_good_multipliers, SearchBudget};

const MODULI: [u64; 8] = [2, 3, 4, 5, 7, 11, 13, 16];

#[test]
fn fixture_sets_are_reproduced_by_the_search() {
    for m in MODULI {
        let stored = fixture_multipliers(m).unwrap();
        let found = smallest_good_multipliers(m, 1.0 / 3.0, 16, SearchBudget::default()).unwrap();
        assert_eq!(found.multipliers, stored.multipliers, "M = {m}");
    }
}

#[test]
fn stored_worst_cases_are_exact() {
    for m in MODULI.into_iter().chain([eq_fingerprint_modulus(8)]) {
        let s = fixture_multipliers(m).unwrap();
        assert!((multiplier_worst_case(m, &s.multipliers) - s.worst).abs() < 1e-12);
        assert!(s.worst <= 1.0 / 3.0 + 1e-12);
    }
}
