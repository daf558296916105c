//! Explicit function catalogue and the program constructions built on it.

mod fingerprint;
mod pj;

pub use fingerprint::{
    eq_fingerprint_modulus, fingerprint_eq_qobdd, fingerprint_modp_qobdd, fixture_multipliers, multiplier_worst_case, search_good_multipliers,
    smallest_good_multipliers, MultiplierSet, SearchBudget,
};
pub use pj::{
    pj_2k_obdd, pj_bool, pj_eval, pj_layered_obdd, rpj, rpj_2k_obdd, rpj_eval, PjInstance, RpjLayout,
};

use crate::boolfn::{BoolFn, VarOrder};
use crate::diagrams::{Choice, Dist, Layer, Leveled, Nobdd, Obdd, Pobdd};
use crate::error::{Error, Result};
use crate::reorder::{addresses, AddressMode, BlockLayout};
use crate::scalar::Scalar;

/// Smallest prime strictly larger than `n`.
pub fn next_prime(n: usize) -> usize {
    let is_prime = |m: usize| m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| m % d != 0);
    (n + 1..).find(|&m| is_prime(m)).unwrap()
}

/// `EQ_n`: the two halves are equal.
pub fn eq(n: usize) -> Result<BoolFn> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::param(format!("EQ needs an even n, got {n}")));
    }
    BoolFn::from_fn(n, |x| x[..n / 2] == x[n / 2..])
}

/// Commutative OBDD for `EQ_q` of width `2^{q/2}`: the node is the xor vector
/// `(x_i ^ x_{i+q/2})_i`, so each variable's table does not depend on where it is read.
pub fn eq_xor_obdd(q: usize) -> Result<Obdd> {
    if q == 0 || q % 2 == 1 || q > 24 {
        return Err(Error::param(format!("EQ needs an even q <= 24, got {q}")));
    }
    let h = q / 2;
    let w = 1usize << h;
    let steps = (1..=q)
        .map(|v| {
            let bit = 1 << ((v - 1) % h);
            (0..w).map(|s| [s, s ^ bit]).collect()
        })
        .collect();
    let exit = (0..w).map(|s| (s == 0) as usize).collect();
    Leveled::new(VarOrder::identity(q), 0, vec![Layer::new(steps, exit)], vec![false, true])
}

/// Reordered equality over the xor layout: with `Adr'` the 0-based running
/// address, `sum_{Adr' < q/2} 2^{Adr'} Val = sum_{Adr' >= q/2} 2^{Adr' - q/2} Val`
/// as integers. Repeated addresses add up.
pub fn req(layout: &BlockLayout) -> Result<BoolFn> {
    let n = layout.n();
    BoolFn::from_fn(n, |x| req_eval(layout, x))
}

pub fn req_eval(layout: &BlockLayout, x: &[bool]) -> bool {
    let q = layout.q();
    let h = q / 2;
    let adrs = addresses(layout, x, AddressMode::Xor).unwrap();
    let (mut lhs, mut rhs) = (0u64, 0u64);
    for (i, &a) in adrs.iter().enumerate() {
        if !layout.value(x, i + 1) {
            continue;
        }
        let a = a - 1;
        if a < h {
            lhs += 1 << a;
        } else {
            rhs += 1 << (a - h);
        }
    }
    lhs == rhs
}

/// `MOD_p`: the number of ones is divisible by `p`.
pub fn mod_p(p: usize, n: usize) -> Result<BoolFn> {
    if p < 2 {
        return Err(Error::param(format!("MOD_p needs p >= 2, got {p}")));
    }
    BoolFn::from_index_fn(n, |i| i.count_ones() as usize % p == 0)
}

fn weighted_sum(x: &[bool]) -> usize {
    x.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i + 1).sum()
}

/// `x_s`, with `x_0` and indices beyond `n` read as 0.
fn pick(x: &[bool], s: usize) -> bool {
    s >= 1 && s <= x.len() && x[s - 1]
}

/// Weighted sum `WS_n`: `x_s` with `s = (sum i x_i) mod p(n)`.
pub fn ws(n: usize) -> Result<BoolFn> {
    let p = next_prime(n);
    BoolFn::from_fn(n, |x| pick(x, weighted_sum(x) % p))
}

fn check_ws_b(n: usize, b: usize) -> Result<()> {
    if b == 0 || 3 * b > n {
        return Err(Error::param(format!("WS^b needs 1 <= b <= n/3, got b = {b}, n = {n}")));
    }
    Ok(())
}

/// `WS^b_n`: the weighted sum is taken over the first `b` bits, modulo `p(b)`.
pub fn ws_b(n: usize, b: usize) -> Result<BoolFn> {
    check_ws_b(n, b)?;
    let p = next_prime(b);
    BoolFn::from_fn(n, |x| pick(x, weighted_sum(&x[..b]) % p))
}

/// Variables `ws_b` never reads.
pub fn ws_b_padding(n: usize, b: usize) -> Result<Vec<usize>> {
    check_ws_b(n, b)?;
    let used = b.max(next_prime(b) - 1);
    Ok((used + 1..=n).collect())
}

fn check_msw_b(n: usize, b: usize) -> Result<()> {
    if b == 0 || b % 2 == 1 || n % 2 == 1 || 3 * b > n {
        return Err(Error::param(format!("MSW^b needs even b <= n/3 and even n, got b = {b}, n = {n}")));
    }
    Ok(())
}

/// `MSW^b_n`: `z` and `r` are slice-local weighted sums of the two halves of
/// the first `b` bits modulo `p(b/2)`; the output is `x_z ^ x_{z + n/2}` when
/// `z = r` and 0 otherwise.
pub fn msw_b(n: usize, b: usize) -> Result<BoolFn> {
    check_msw_b(n, b)?;
    let h = b / 2;
    let p = next_prime(h);
    BoolFn::from_fn(n, |x| {
        let z = weighted_sum(&x[..h]) % p;
        let r = weighted_sum(&x[h..b]) % p;
        z == r && z != 0 && (pick(x, z) ^ pick(x, z + n / 2))
    })
}

pub fn msw_b_padding(n: usize, b: usize) -> Result<Vec<usize>> {
    check_msw_b(n, b)?;
    let top = next_prime(b / 2) - 1;
    Ok((1..=n)
        .filter(|&v| v > b && v > top && !(v > n / 2 && v - n / 2 <= top))
        .collect())
}

fn req_b_layout(n: usize, b: usize) -> Result<BlockLayout> {
    let q = (1..=b).find(|&q| q.is_power_of_two() && q * (q.trailing_zeros() as usize + 1) == b);
    match q {
        Some(q) if q >= 2 && b <= n => BlockLayout::new(q),
        _ => Err(Error::param(format!("b = {b} is not a REQ layout length q(log q + 1) <= n = {n}"))),
    }
}

/// `REQ^b_n`: `req` on the first `b` bits, the rest are padding.
pub fn req_b(n: usize, b: usize) -> Result<BoolFn> {
    let layout = req_b_layout(n, b)?;
    BoolFn::from_fn(n, |x| req_eval(&layout, &x[..b]))
}

pub fn req_b_padding(n: usize, b: usize) -> Result<Vec<usize>> {
    req_b_layout(n, b)?;
    Ok((b + 1..=n).collect())
}

/// NOBDD that guesses a position holding a 1. Each variable's table is the
/// same, so the program is commutative.
pub fn any_one_nobdd(n: usize) -> Result<Nobdd> {
    let step = vec![[Choice(vec![0]), Choice(vec![0, 1])], [Choice(vec![1]), Choice(vec![1])]];
    Leveled::new(VarOrder::identity(n), 0, vec![Layer::new(vec![step; n], vec![0, 1])], vec![false, true])
}

/// POBDD for any `f` over `n <= 12` variables: the node is a fair coin copy
/// together with the set of variables read as 1. Every read re-flips the coin,
/// so probabilities are genuinely split, yet the result is exactly `f`.
pub fn coin_tree_pobdd<T: Scalar>(f: &BoolFn) -> Result<Pobdd<T>> {
    let n = f.n();
    if n > 12 {
        return Err(Error::Capacity(format!("coin tree needs n <= 12, got {n}")));
    }
    let w = 1usize << n;
    let half = T::one() / (T::one() + T::one());
    let steps = (1..=n)
        .map(|v| {
            let bit = 1 << (n - v);
            (0..2 * w)
                .map(|idx| {
                    let mask = idx % w;
                    let split = |m: usize| Dist(vec![(m, half.clone()), (w + m, half.clone())]);
                    [split(mask), split(mask | bit)]
                })
                .collect()
        })
        .collect();
    let exit = (0..2 * w).map(|idx| f.at(idx % w) as usize).collect();
    Leveled::new(VarOrder::identity(n), 0, vec![Layer::new(steps, exit)], vec![false, true])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{n_pi, subfunction_count, Partition};
    use crate::diagrams::is_commutative;
    use num_traits::{One, Zero};

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn primes() {
        assert_eq!(next_prime(2), 3);
        assert_eq!(next_prime(3), 5);
        assert_eq!(next_prime(13), 17);
    }

    #[test]
    fn eq_examples() {
        let f = eq(4).unwrap();
        assert!(f.eval(&bits("1010")).unwrap());
        assert!(!f.eval(&bits("1101")).unwrap());
        let cut = Partition::new(VarOrder::identity(4), 2).unwrap();
        assert_eq!(subfunction_count(&f, &cut).unwrap(), 4);
        assert_eq!(n_pi(&f, &VarOrder::identity(4)).unwrap(), 4);
    }

    #[test]
    fn eq_xor_obdd_is_commutative() {
        for q in [2, 4, 6] {
            let p = eq_xor_obdd(q).unwrap();
            assert_eq!(p.truth_table().unwrap(), eq(q).unwrap());
            assert_eq!(p.width(), 1 << (q / 2));
            assert!(is_commutative(&p, 100, 3).unwrap());
        }
    }

    #[test]
    fn req_q2() {
        let l = BlockLayout::new(2).unwrap();
        // Both blocks land on address 1: left side 2, right side 0.
        assert!(!req_eval(&l, &bits("0101")));
        assert!(req_eval(&l, &bits("0000")));
        // Addresses 1, 2 carrying 1, 1: both sides equal 2^0.
        assert!(req_eval(&l, &bits("0111")));
        assert!(!req_eval(&l, &bits("0110")));
    }

    #[test]
    fn mod_p_examples() {
        let f = mod_p(3, 4).unwrap();
        assert!(f.eval(&bits("1110")).unwrap());
        assert!(!f.eval(&bits("1100")).unwrap());
    }

    #[test]
    fn ws_b_examples() {
        let f = ws_b(9, 3).unwrap();
        assert!(!f.eval(&bits("110000000")).unwrap());
        assert!(f.eval(&bits("100000000")).unwrap());
        assert!(!f.eval(&bits("000000000")).unwrap());
        assert_eq!(ws_b_padding(9, 3).unwrap(), vec![5, 6, 7, 8, 9]);
        assert!(ws_b(6, 3).is_err());
    }

    #[test]
    fn msw_b_examples() {
        let f = msw_b(12, 4).unwrap();
        let mut x = bits("101000000000");
        x[6] = true;
        // z = 1, r = 1, x1 ^ x7 = 0.
        assert!(!f.eval(&x).unwrap());
        x[6] = false;
        assert!(f.eval(&x).unwrap());
        assert!(!f.eval(&vec![false; 12]).unwrap());
        assert_eq!(msw_b_padding(12, 4).unwrap(), vec![5, 6, 9, 10, 11, 12]);
    }

    #[test]
    fn req_b_matches_req() {
        let l = BlockLayout::new(2).unwrap();
        let full = req(&l).unwrap();
        let padded = req_b(7, 4).unwrap();
        for i in 0..128usize {
            assert_eq!(padded.at(i), full.at(i >> 3));
        }
        assert!(req_b(7, 5).is_err());
    }

    #[test]
    fn any_one_and_coin_tree() {
        let p = any_one_nobdd(3).unwrap();
        assert_eq!(p.truth_table().unwrap().ones(), 7);
        let f = BoolFn::from_index_fn(3, |i| i % 3 == 1).unwrap();
        let r = coin_tree_pobdd::<num_rational::Rational64>(&f).unwrap();
        for i in 0..8 {
            assert_eq!(r.acceptance_at(i), if f.at(i) { One::one() } else { Zero::zero() });
        }
        assert!(is_commutative(&r, 0, 0).unwrap());
    }
}
