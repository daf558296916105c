//! Regenerates `fixtures/multipliers.json`:
//! `cargo run -p obdd-core --example multipliers > crates/core/fixtures/multipliers.json`

use obdd_core::zoo::{eq_fingerprint_modulus, smallest_good_multipliers, SearchBudget};

fn main() {
    // EQ moduli for q = 2, 4, 8, then the primes used for MOD_p.
    let mut moduli: Vec<u64> = [2, 4, 8].iter().map(|&q| eq_fingerprint_modulus(q)).collect();
    moduli.extend([2u64, 3, 5, 7, 11, 13]);
    let sets: Vec<_> = moduli
        .iter()
        .map(|&m| smallest_good_multipliers(m, 1.0 / 3.0, 16, SearchBudget::default()).expect("multiplier set"))
        .collect();
    let doc = serde_json::json!({ "version": 1, "target": 1.0 / 3.0, "sets": sets });
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
}
