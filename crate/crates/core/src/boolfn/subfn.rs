//! Subfunction counting and exact minimum width over all variable orders.
//!
//! For a partial function two subfunctions count as different only when some
//! commonly defined point separates them. That relation is not transitive, so
//! the count for partial functions is the size of the largest family of
//! pairwise-separated subfunctions. For total functions this coincides with
//! the number of distinct restricted tables.

use std::collections::HashSet;

use rayon::prelude::*;

use super::{Partition, TruthTable, VarOrder};
use crate::bits::BitVec;
use crate::error::{Error, Result};

/// Cap for the subset dynamic program.
pub const DP_MAX_VARS: usize = 16;
/// Cap for the n!-enumeration cross-check.
pub const ENUM_MAX_VARS: usize = 8;

/// Exact minimum of `N^pi(f)` over all orders, with one order attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinWidth {
    pub width: usize,
    pub order: VarOrder,
}

/// Table indices contributed by each assignment to `vars` (MSB-first over `vars`).
fn deposits(n: usize, vars: &[usize]) -> Vec<usize> {
    let u = vars.len();
    (0..1usize << u)
        .map(|a| {
            vars.iter()
                .enumerate()
                .fold(0, |acc, (t, &v)| acc | ((a >> (u - 1 - t)) & 1) << (n - v))
        })
        .collect()
}

/// Number of distinct subfunctions when the variables in `set` (bit `v-1` for
/// `x_v`) are fixed.
pub fn subfunction_count_for_set<F: TruthTable + ?Sized>(f: &F, set: u64) -> usize {
    let n = f.num_vars();
    let left: Vec<usize> = (1..=n).filter(|v| set >> (v - 1) & 1 == 1).collect();
    let right: Vec<usize> = (1..=n).filter(|v| set >> (v - 1) & 1 == 0).collect();
    let dep_a = deposits(n, &left);
    let dep_b = deposits(n, &right);
    let m = dep_b.len();
    let values = f.values();
    let restricted = |base: usize, table: &BitVec| BitVec::from_fn(m, |b| table.get(base | dep_b[b]));

    match f.mask() {
        None => {
            let distinct: HashSet<BitVec> = dep_a.iter().map(|&a| restricted(a, values)).collect();
            distinct.len()
        }
        Some(mask) => {
            let distinct: HashSet<(BitVec, BitVec)> = dep_a
                .iter()
                .map(|&a| (restricted(a, mask), restricted(a, values)))
                .collect();
            if distinct.iter().all(|(mk, _)| mk.all()) {
                return distinct.len();
            }
            let mut subs: Vec<(BitVec, BitVec)> =
                distinct.into_iter().filter(|(mk, _)| mk.count_ones() > 0).collect();
            if subs.is_empty() {
                return 1;
            }
            // Deterministic vertex order for the clique search.
            subs.sort_by(|x, y| (x.0.words(), x.1.words()).cmp(&(y.0.words(), y.1.words())));
            max_separated_family(&subs)
        }
    }
}

fn separated(a: &(BitVec, BitVec), b: &(BitVec, BitVec)) -> bool {
    a.0.words()
        .iter()
        .zip(b.0.words())
        .zip(a.1.words().iter().zip(b.1.words()))
        .any(|((ma, mb), (va, vb))| ma & mb & (va ^ vb) != 0)
}

/// Maximum clique of the separation graph (Bron-Kerbosch with pivoting).
fn max_separated_family(subs: &[(BitVec, BitVec)]) -> usize {
    let k = subs.len();
    let words = k.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; k];
    for i in 0..k {
        for j in i + 1..k {
            if separated(&subs[i], &subs[j]) {
                adj[i][j >> 6] |= 1 << (j & 63);
                adj[j][i >> 6] |= 1 << (i & 63);
            }
        }
    }
    let mut p = vec![0u64; words];
    for i in 0..k {
        p[i >> 6] |= 1 << (i & 63);
    }
    let x = vec![0u64; words];
    let mut best = 1;
    bron_kerbosch(&adj, 0, p, x, &mut best);
    best
}

fn popcount(s: &[u64]) -> usize {
    s.iter().map(|w| w.count_ones() as usize).sum()
}

fn bits(s: &[u64]) -> impl Iterator<Item = usize> + '_ {
    s.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + t)
        })
    })
}

fn bron_kerbosch(adj: &[Vec<u64>], size: usize, mut p: Vec<u64>, mut x: Vec<u64>, best: &mut usize) {
    let np = popcount(&p);
    if np == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + np <= *best {
        return;
    }
    let pivot = bits(&p)
        .chain(bits(&x))
        .max_by_key(|&u| p.iter().zip(&adj[u]).map(|(a, b)| (a & b).count_ones()).sum::<u32>())
        .unwrap();
    let candidates: Vec<usize> = bits(&p).filter(|&v| adj[pivot][v >> 6] >> (v & 63) & 1 == 0).collect();
    for v in candidates {
        let np: Vec<u64> = p.iter().zip(&adj[v]).map(|(a, b)| a & b).collect();
        let nx: Vec<u64> = x.iter().zip(&adj[v]).map(|(a, b)| a & b).collect();
        bron_kerbosch(adj, size + 1, np, nx, best);
        p[v >> 6] &= !(1 << (v & 63));
        x[v >> 6] |= 1 << (v & 63);
    }
}

fn check_order<F: TruthTable + ?Sized>(f: &F, order: &VarOrder) -> Result<()> {
    if order.len() != f.num_vars() {
        return Err(Error::shape(format!(
            "order over {} variables for a function of {}",
            order.len(),
            f.num_vars()
        )));
    }
    Ok(())
}

/// `N^theta(f)`.
pub fn subfunction_count<F: TruthTable + ?Sized>(f: &F, theta: &Partition) -> Result<usize> {
    check_order(f, theta.order())?;
    Ok(subfunction_count_for_set(f, theta.left_mask()))
}

/// `N^pi(f)`: the maximum count over all cuts of `order` (1 when there is no cut).
pub fn n_pi<F: TruthTable + ?Sized>(f: &F, order: &VarOrder) -> Result<usize> {
    check_order(f, order)?;
    let n = f.num_vars();
    Ok((1..n).map(|u| subfunction_count_for_set(f, order.prefix_mask(u))).max().unwrap_or(1))
}

/// `N(f)` by dynamic programming over the subset lattice.
///
/// The count at a cut depends only on the set of variables already read, so
/// `best[S]` (the least achievable maximum over orders starting with `S`) obeys
/// `best[S] = max(c(S), min_{v in S} best[S \ {v}])`.
pub fn n_min<F: TruthTable + Sync + ?Sized>(f: &F) -> Result<MinWidth> {
    let n = f.num_vars();
    if n > DP_MAX_VARS {
        return Err(Error::Capacity(format!("n_min supports n <= {DP_MAX_VARS}, got {n}")));
    }
    let full: u64 = (1 << n) - 1;
    let counts: Vec<u32> = (0..=full)
        .into_par_iter()
        .map(|s| if s == 0 || s == full { 1 } else { subfunction_count_for_set(f, s) as u32 })
        .collect();
    let mut best = vec![0u32; 1 << n];
    best[0] = 1;
    for s in 1..=full {
        let inner = (0..n)
            .filter(|v| s >> v & 1 == 1)
            .map(|v| best[(s & !(1 << v)) as usize])
            .min()
            .unwrap();
        best[s as usize] = inner.max(counts[s as usize]);
    }
    // Walk back from the full set, peeling off the last-read variable.
    let mut rev = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = (0..n)
            .filter(|v| s >> v & 1 == 1)
            .min_by_key(|&v| best[(s & !(1 << v)) as usize])
            .unwrap();
        rev.push(v + 1);
        s &= !(1 << v);
    }
    rev.reverse();
    Ok(MinWidth { width: best[full as usize] as usize, order: VarOrder::new(rev)? })
}

/// `N(f)` by trying all n! orders. Cross-check for [`n_min`].
pub fn n_min_by_enumeration<F: TruthTable + ?Sized>(f: &F) -> Result<MinWidth> {
    let n = f.num_vars();
    if n > ENUM_MAX_VARS {
        return Err(Error::Capacity(format!("enumeration supports n <= {ENUM_MAX_VARS}, got {n}")));
    }
    let mut best: Option<MinWidth> = None;
    for order in VarOrder::all(n) {
        let w = n_pi(f, &order)?;
        if best.as_ref().map_or(true, |b| w < b.width) {
            best = Some(MinWidth { width: w, order });
        }
    }
    Ok(best.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{BoolFn, PartialBoolFn};

    fn eq4() -> BoolFn {
        BoolFn::from_fn(4, |x| x[0] == x[2] && x[1] == x[3]).unwrap()
    }

    #[test]
    fn eq4_identity_middle_cut() {
        let theta = Partition::new(VarOrder::identity(4), 2).unwrap();
        assert_eq!(subfunction_count(&eq4(), &theta).unwrap(), 4);
    }

    #[test]
    fn eq4_interleaved_cut() {
        let theta = Partition::new(VarOrder::new(vec![1, 3, 2, 4]).unwrap(), 3).unwrap();
        assert_eq!(subfunction_count(&eq4(), &theta).unwrap(), 3);
    }

    #[test]
    fn eq4_n_pi_and_min() {
        assert_eq!(n_pi(&eq4(), &VarOrder::identity(4)).unwrap(), 4);
        assert_eq!(n_pi(&eq4(), &VarOrder::new(vec![1, 3, 2, 4]).unwrap()).unwrap(), 3);
        assert_eq!(n_min(&eq4()).unwrap().width, 3);
        assert_eq!(n_min_by_enumeration(&eq4()).unwrap().width, 3);
    }

    #[test]
    fn constant_counts_one() {
        let z = BoolFn::constant(5, false).unwrap();
        let theta = Partition::new(VarOrder::new(vec![5, 2, 1, 4, 3]).unwrap(), 3).unwrap();
        assert_eq!(subfunction_count(&z, &theta).unwrap(), 1);
        assert_eq!(n_pi(&z, &VarOrder::identity(5)).unwrap(), 1);
        assert_eq!(n_min(&z).unwrap().width, 1);
    }

    #[test]
    fn dp_order_attains_minimum() {
        let f = eq4();
        let m = n_min(&f).unwrap();
        assert_eq!(n_pi(&f, &m.order).unwrap(), m.width);
    }

    #[test]
    fn undefined_points_never_separate() {
        // x1 selects between two subfunctions that agree wherever both are defined.
        let p = PartialBoolFn::from_index_fn(2, |i| match i {
            0 => Some(true),
            1 => None,
            2 => None,
            _ => Some(false),
        })
        .unwrap();
        assert_eq!(subfunction_count_for_set(&p, 0b01), 1);
        let q = PartialBoolFn::from_index_fn(2, |i| match i {
            0 => Some(true),
            2 => Some(false),
            _ => None,
        })
        .unwrap();
        assert_eq!(subfunction_count_for_set(&q, 0b01), 2);
    }

    #[test]
    fn separation_is_not_transitive() {
        // Three subfunctions over one variable: (1,?), (?,0), (0,1): A~B, B sep C, A sep C.
        let p = PartialBoolFn::from_index_fn(3, |i| match i {
            0 => Some(true),
            3 => Some(false),
            4 => Some(false),
            5 => Some(true),
            _ => None,
        })
        .unwrap();
        // Variables x1,x2 fixed: assignments 00 -> (1,?), 01 -> (?,0), 10 -> (0,1), 11 -> (?,?)
        assert_eq!(subfunction_count_for_set(&p, 0b011), 2);
    }

    #[test]
    fn dp_capacity() {
        let f = BoolFn::constant(17, false).unwrap();
        assert!(n_min(&f).unwrap_err().is_capacity());
        assert!(n_min_by_enumeration(&BoolFn::constant(9, false).unwrap()).unwrap_err().is_capacity());
    }
}
