//! Rotation fingerprinting programs and the search for multiplier sets.
//!
//! A program with multipliers `k_1..k_t` runs `t` two-dimensional rotation
//! machines; machine `j` turns by `2 pi k_j d / M` for an integer invariant
//! `d` of the input. Every rotation is conjugated by a fixed reflection `H`
//! on the machine index with `H e_0 = (1/sqrt t) sum_j e_j`, so the start
//! state `e_0` is spread over all machines before the first rotation and
//! folded back after the last one, whatever the reading order. Accepting
//! only `e_0` gives probability `((1/t) sum_j cos(2 pi k_j d / M))^2`:
//! exactly 1 when `d = 0 (mod M)`, at most the set's worst case otherwise.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boolfn::VarOrder;
use crate::error::{Error, Result};
use crate::qobdd::{CMatrix, QuantumProgram};
use crate::scalar::RealScalar;

/// Multipliers found for a modulus, with their worst-case acceptance.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct MultiplierSet {
    pub modulus: u64,
    pub multipliers: Vec<u64>,
    /// `max_{d != 0 mod M} ((1/t) sum_j cos(2 pi k_j d / M))^2`.
    pub worst: f64,
}

/// Search limits; exhaustive enumeration is used when the number of multisets fits.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchBudget {
    pub max_candidates: u64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_candidates: 2_000_000, seed: 1 }
    }
}

pub fn multiplier_worst_case(modulus: u64, ks: &[u64]) -> f64 {
    let m = modulus as f64;
    (1..modulus)
        .map(|d| {
            let avg = ks
                .iter()
                .map(|&k| (2.0 * std::f64::consts::PI * ((k * d) % modulus) as f64 / m).cos())
                .sum::<f64>()
                / ks.len() as f64;
            avg * avg
        })
        .fold(0.0, f64::max)
}

/// Number of multisets of size `t` from `m` values, saturating.
fn multiset_count(m: u64, t: usize) -> u64 {
    let mut c: u128 = 1;
    for i in 0..t as u128 {
        c = c * (m as u128 + i) / (i + 1);
        if c > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    c as u64
}

fn next_multiset(ks: &mut [u64], top: u64) -> bool {
    for i in (0..ks.len()).rev() {
        if ks[i] < top {
            ks[i] += 1;
            let v = ks[i];
            ks[i + 1..].iter_mut().for_each(|k| *k = v);
            return true;
        }
    }
    false
}

const TOL: f64 = 1e-12;

/// First multiset `k_1 <= ... <= k_t` from `0..M` whose worst case is at
/// most `target`, in lexicographic order; random search (seeded) when the
/// multisets do not fit in the budget.
pub fn search_good_multipliers(modulus: u64, t: usize, target: f64, budget: SearchBudget) -> Result<MultiplierSet> {
    if modulus < 2 || t == 0 {
        return Err(Error::param(format!("need modulus >= 2 and t >= 1, got M = {modulus}, t = {t}")));
    }
    let top = modulus - 1;
    let count = multiset_count(modulus, t);
    let found = |ks: &[u64]| {
        let worst = multiplier_worst_case(modulus, ks);
        (worst <= target + TOL).then(|| MultiplierSet { modulus, multipliers: ks.to_vec(), worst })
    };
    if count <= budget.max_candidates {
        let mut ks = vec![0u64; t];
        loop {
            if let Some(set) = found(&ks) {
                return Ok(set);
            }
            if !next_multiset(&mut ks, top) {
                break;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        for _ in 0..budget.max_candidates {
            let mut ks: Vec<u64> = (0..t).map(|_| rng.gen_range(0..=top)).collect();
            ks.sort_unstable();
            if let Some(set) = found(&ks) {
                return Ok(set);
            }
        }
    }
    Err(Error::NotFound(format!("M = {modulus}, t = {t}, target {target}")))
}

/// Smallest `t <= t_max` admitting a set with worst case at most `target`.
pub fn smallest_good_multipliers(modulus: u64, target: f64, t_max: usize, budget: SearchBudget) -> Result<MultiplierSet> {
    for t in 1..=t_max {
        match search_good_multipliers(modulus, t, target, budget) {
            Ok(set) => return Ok(set),
            Err(Error::NotFound(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NotFound(format!("M = {modulus}, t <= {t_max}, target {target}")))
}

#[derive(Deserialize)]
struct Fixtures {
    sets: Vec<MultiplierSet>,
}

/// Versioned multiplier sets shipped with the crate (worst case at most 1/3).
pub fn fixture_multipliers(modulus: u64) -> Option<MultiplierSet> {
    let fixtures: Fixtures = serde_json::from_str(include_str!("../../fixtures/multipliers.json")).expect("fixture file");
    fixtures.sets.into_iter().find(|s| s.modulus == modulus)
}

/// Householder reflection `H = I - 2 w w^T / |w|^2`, `w = e_0 - u`, lifted to
/// the machine index of a `2t`-dimensional register (state `2j + c`).
fn spread<T: RealScalar>(t: usize) -> CMatrix<T> {
    let mut h = CMatrix::identity(2 * t);
    if t == 1 {
        return h;
    }
    let u = T::one() / T::from_usize(t).unwrap().sqrt();
    let w: Vec<T> = (0..t).map(|j| if j == 0 { T::one() - u } else { -u }).collect();
    let norm2 = w.iter().fold(T::zero(), |acc, &x| acc + x * x);
    let two = T::one() + T::one();
    for r in 0..t {
        for c in 0..t {
            let delta = if r == c { T::one() } else { T::zero() };
            let v = Complex::new(delta - two * w[r] * w[c] / norm2, T::zero());
            for bit in 0..2 {
                h.set(2 * r + bit, 2 * c + bit, v);
            }
        }
    }
    h
}

/// Machine `j` lives on states `2j, 2j + 1`; a 1-bit of variable `v` applies
/// `H diag(R(angle(v, k_j))) H`. All such matrices commute.
fn rotation_program<T: RealScalar>(order: VarOrder, ks: &[u64], angle: impl Fn(usize, u64) -> T) -> Result<QuantumProgram<T>> {
    let t = ks.len();
    if t == 0 {
        return Err(Error::param("empty multiplier set"));
    }
    let n = order.len();
    let h = spread::<T>(t);
    let mut initial = vec![Complex::new(T::zero(), T::zero()); 2 * t];
    initial[0] = Complex::new(T::one(), T::zero());
    let steps = (1..=n)
        .map(|v| {
            let rots: Vec<CMatrix<T>> = ks.iter().map(|&k| CMatrix::rotation(angle(v, k))).collect();
            let refs: Vec<&CMatrix<T>> = rots.iter().collect();
            [CMatrix::identity(2 * t), h.mul(&CMatrix::block_diag(&refs)).mul(&h)]
        })
        .collect();
    QuantumProgram::new(order, initial, steps, vec![0], 1)
}

/// Modulus used by [`fingerprint_eq_qobdd`]: `q 2^{q/2}`, larger than any
/// weighted difference the reordered encoding can produce.
pub fn eq_fingerprint_modulus(q: usize) -> u64 {
    (q as u64) << (q / 2)
}

/// Fingerprint program for `EQ_q` with `M = q 2^{q/2}`: bit `i` of the first
/// half turns machine `j` by `2 pi k_j 2^{i-1} / M`, the matching bit of the
/// second half by the opposite angle. `d` is the difference of the halves.
pub fn fingerprint_eq_qobdd<T: RealScalar>(q: usize, ks: &[u64]) -> Result<QuantumProgram<T>> {
    if q == 0 || q % 2 == 1 || q > 24 {
        return Err(Error::param(format!("EQ fingerprint needs an even q <= 24, got {q}")));
    }
    let h = q / 2;
    let m = T::from_u64(eq_fingerprint_modulus(q)).unwrap();
    let two = T::one() + T::one();
    rotation_program(VarOrder::identity(q), ks, |v, k| {
        let (sign, e) = if v <= h { (T::one(), v - 1) } else { (-T::one(), v - h - 1) };
        let w = T::from_u64(k).unwrap() * T::from_u64(1u64 << e).unwrap();
        sign * two * T::pi() * w / m
    })
}

/// Fingerprint program for `MOD_p` over `n` bits: each 1 turns machine `j` by
/// `2 pi k_j / p`, so `d` is the number of ones.
pub fn fingerprint_modp_qobdd<T: RealScalar>(p: u64, n: usize, ks: &[u64]) -> Result<QuantumProgram<T>> {
    if p < 2 {
        return Err(Error::param(format!("MOD_p fingerprint needs p >= 2, got {p}")));
    }
    let pt = T::from_u64(p).unwrap();
    let two = T::one() + T::one();
    rotation_program(VarOrder::identity(n), ks, |_, k| two * T::pi() * T::from_u64(k).unwrap() / pt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_case_closed_forms() {
        // M = 2: a lone machine turns by pi and comes back to +-e_0.
        assert!((multiplier_worst_case(2, &[1]) - 1.0).abs() < 1e-12);
        assert!(multiplier_worst_case(2, &[0, 1]).abs() < 1e-12);
        // M = 4, k = (1): residue 1 gives cos(pi/2) = 0, residue 2 gives cos(pi)^2 = 1.
        assert!((multiplier_worst_case(4, &[1]) - 1.0).abs() < 1e-12);
        let s = search_good_multipliers(2, 2, 1e-9, SearchBudget::default()).unwrap();
        assert_eq!(s.multipliers, vec![0, 1]);
    }

    #[test]
    fn eq_fingerprint_closed_form() {
        // q = 2, M = 4, k = (1): halves differing by 1 give cos(pi/2)^2 = 0.
        let p = fingerprint_eq_qobdd::<f64>(2, &[1]).unwrap();
        assert!(p.accept_probability(&[true, false]).unwrap().abs() < 1e-12);
        assert!((p.accept_probability(&[true, true]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(p.dim(), 2);
        let p = fingerprint_eq_qobdd::<f64>(4, &[1, 3, 5]).unwrap();
        assert_eq!(p.dim(), 6);
        assert!((p.accept_probability(&[true, false, true, false]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn modp_fingerprint_closed_form() {
        let p = fingerprint_modp_qobdd::<f64>(3, 3, &[1]).unwrap();
        // One 1: cos(2 pi / 3)^2 = 1/4.
        assert!((p.accept_probability(&[true, false, false]).unwrap() - 0.25).abs() < 1e-12);
        assert!((p.accept_probability(&[true, true, true]).unwrap() - 1.0).abs() < 1e-12);
        let p = fingerprint_modp_qobdd::<f64>(2, 3, &[0, 1]).unwrap();
        assert!(p.accept_probability(&[true, false, false]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn averaged_amplitude_matches_formula() {
        let ks = [1u64, 4, 6];
        let p = fingerprint_modp_qobdd::<f64>(7, 6, &ks).unwrap();
        for m in 0..=6usize {
            let x: Vec<bool> = (0..6).map(|i| i < m).collect();
            let avg: f64 = ks.iter().map(|&k| (2.0 * std::f64::consts::PI * (k as f64) * m as f64 / 7.0).cos()).sum::<f64>() / 3.0;
            assert!((p.accept_probability(&x).unwrap() - avg * avg).abs() < 1e-12);
        }
    }

    #[test]
    fn not_found_is_explicit() {
        let r = search_good_multipliers(4, 1, 0.1, SearchBudget::default());
        assert!(matches!(r, Err(Error::NotFound(_))));
    }

    #[test]
    fn random_branch_is_seeded() {
        let budget = SearchBudget { max_candidates: 50, seed: 9 };
        let a = search_good_multipliers(512, 6, 0.01, budget);
        let b = search_good_multipliers(512, 6, 0.01, budget);
        assert_eq!(a, b);
    }
}
