//! Pointer jumping, its reordered total version and the layered programs.
//!
//! Vertices are `V_A = 0..a` and `V_B = a..2a` with `a` a power of two and
//! `w = log2 a`. Vertex `v` owns the `w` encoding variables
//! `v*w + 1 ..= (v+1)*w`, which hold the side-local index of `f(v)` with the
//! lowest-numbered variable least significant. So `f_A(v) = local + a` and
//! `f_B(v) = local`. The Boolean output is the xor of the bits owned by the
//! result vertex `r`.

use crate::boolfn::{assignment, BoolFn, VarOrder};
use crate::diagrams::{Layer, Leveled, Obdd};
use crate::error::{Error, Result};
use crate::reorder::{addresses, reorder_obdd, AddressMode, BlockLayout};

fn check_a(a: usize) -> Result<usize> {
    if a < 2 || !a.is_power_of_two() {
        return Err(Error::param(format!("a = {a} must be a power of two >= 2")));
    }
    Ok(a.trailing_zeros() as usize)
}

/// Pointer-jumping instance with start vertex 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PjInstance {
    pub a: usize,
    /// `f_a[v]` in `a..2a` for `v` in `0..a`.
    pub f_a: Vec<usize>,
    /// `f_b[v - a]` in `0..a` for `v` in `a..2a`.
    pub f_b: Vec<usize>,
}

impl PjInstance {
    pub fn new(a: usize, f_a: Vec<usize>, f_b: Vec<usize>) -> Result<Self> {
        check_a(a)?;
        if f_a.len() != a || f_b.len() != a {
            return Err(Error::shape("f_A and f_B need a entries each"));
        }
        if f_a.iter().any(|&t| t < a || t >= 2 * a) || f_b.iter().any(|&t| t >= a) {
            return Err(Error::param("f_A must map into V_B and f_B into V_A"));
        }
        Ok(PjInstance { a, f_a, f_b })
    }

    /// Decodes the `2a log2 a` encoding bits.
    pub fn decode(a: usize, x: &[bool]) -> Result<Self> {
        let w = check_a(a)?;
        if x.len() != 2 * a * w {
            return Err(Error::shape(format!("PJ encoding for a = {a} has {} bits, got {}", 2 * a * w, x.len())));
        }
        let local = |v: usize| (0..w).filter(|&e| x[v * w + e]).map(|e| 1 << e).sum::<usize>();
        Ok(PjInstance { a, f_a: (0..a).map(|v| local(v) + a).collect(), f_b: (a..2 * a).map(local).collect() })
    }

    pub fn encode(&self) -> Vec<bool> {
        let w = self.a.trailing_zeros() as usize;
        let mut x = vec![false; 2 * self.a * w];
        for v in 0..2 * self.a {
            let local = self.side_local(self.f(v));
            for e in 0..w {
                x[v * w + e] = (local >> e) & 1 == 1;
            }
        }
        x
    }

    fn side_local(&self, v: usize) -> usize {
        v % self.a
    }

    pub fn f(&self, v: usize) -> usize {
        if v < self.a {
            self.f_a[v]
        } else {
            self.f_b[v - self.a]
        }
    }
}

/// `f^{(k)}(0)`.
pub fn pj_eval(inst: &PjInstance, k: usize) -> usize {
    (0..k).fold(0, |v, _| inst.f(v))
}

/// Parity of the side-local index stored at vertex `r`, i.e. of the bits `r` owns.
fn owned_parity(inst: &PjInstance, r: usize) -> bool {
    inst.side_local(inst.f(r)).count_ones() % 2 == 1
}

/// `PJ_{k}` over `2a log2 a` bits.
pub fn pj_bool(k: usize, a: usize) -> Result<BoolFn> {
    let w = check_a(a)?;
    let n = 2 * a * w;
    BoolFn::from_index_fn(n, |i| {
        let inst = PjInstance::decode(a, &assignment(i, n)).unwrap();
        owned_parity(&inst, pj_eval(&inst, k))
    })
}

/// Commutative OBDD with `jumps + 1` layers computing `pj_bool(jumps, a)`.
///
/// In a jump layer the node is `(v, v')`, index `v * a + v'`: `v` is the
/// current vertex and `v'` accumulates the owned bits of `v` with weights
/// `2^e mod a`. The layer exit moves to `(v' + a, 0)` from `V_A` and to
/// `(v', 0)` from `V_B`. The last layer xors the owned bits of `v` and exits
/// to that sink.
pub fn pj_layered_obdd(jumps: usize, a: usize) -> Result<Obdd> {
    let w = check_a(a)?;
    let n = 2 * a * w;
    let owner = |var: usize| ((var - 1) / w, (var - 1) % w);
    let mut layers = Vec::with_capacity(jumps + 1);
    let width = 2 * a * a;
    for j in 0..jumps {
        // The final layer indexes its entry node (v, 0) as 2v.
        let entry = |v: usize| if j + 1 == jumps { 2 * v } else { v * a };
        let steps = (1..=n)
            .map(|var| {
                let (o, e) = owner(var);
                (0..width)
                    .map(|idx| {
                        let (v, acc) = (idx / a, idx % a);
                        let one = if v == o { v * a + (acc + (1 << e)) % a } else { idx };
                        [idx, one]
                    })
                    .collect()
            })
            .collect();
        let exit = (0..width)
            .map(|idx| {
                let (v, acc) = (idx / a, idx % a);
                entry(if v < a { acc + a } else { acc })
            })
            .collect();
        layers.push(Layer::new(steps, exit));
    }
    let steps = (1..=n)
        .map(|var| {
            let (o, _) = owner(var);
            (0..4 * a)
                .map(|idx| {
                    let v = idx / 2;
                    [idx, if v == o { idx ^ 1 } else { idx }]
                })
                .collect()
        })
        .collect();
    layers.push(Layer::new(steps, (0..4 * a).map(|idx| idx % 2).collect()));
    Leveled::new(VarOrder::identity(n), 0, layers, vec![false, true])
}

/// The `2k`-layer program for `PJ_{2k-1}`.
pub fn pj_2k_obdd(k: usize, a: usize) -> Result<Obdd> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    pj_layered_obdd(2 * k - 1, a)
}

/// Block structure of `RPJ`: `b = 2a log2 a` blocks, each with `log2 b`
/// address bits and one value bit. `b` must be a power of two.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RpjLayout {
    a: usize,
    w: usize,
    blocks: BlockLayout,
}

impl RpjLayout {
    pub fn new(a: usize) -> Result<Self> {
        let w = check_a(a)?;
        let b = 2 * a * w;
        let blocks = BlockLayout::new(b).map_err(|_| Error::param(format!("b = 2a log2 a = {b} is not a power of two")))?;
        Ok(RpjLayout { a, w, blocks })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    /// Addresses owned per vertex.
    pub fn w(&self) -> usize {
        self.w
    }

    pub fn b(&self) -> usize {
        self.blocks.q()
    }

    pub fn n(&self) -> usize {
        self.blocks.n()
    }

    pub fn blocks(&self) -> &BlockLayout {
        &self.blocks
    }
}

/// `RPJ_k` on one input. Addresses are direct; vertex `v` owns addresses
/// `v*w + 1 ..= (v+1)*w` and address `v*w + e + 1` weighs `2^e`. Repeated
/// addresses add up and missing ones contribute nothing.
pub fn rpj_eval(k: usize, layout: &RpjLayout, x: &[bool]) -> Result<bool> {
    let (a, w) = (layout.a, layout.w);
    let adrs = addresses(&layout.blocks, x, AddressMode::Direct)?;
    let mut bv = vec![0usize; 2 * a];
    let mut par = vec![false; 2 * a];
    for (i, &adr) in adrs.iter().enumerate() {
        if layout.blocks.value(x, i + 1) {
            let (v, e) = ((adr - 1) / w, (adr - 1) % w);
            bv[v] = (bv[v] + (1 << e)) % a;
            par[v] ^= true;
        }
    }
    let r = (0..k).fold(0, |v, _| if v < a { bv[v] + a } else { bv[v] });
    Ok(par[r])
}

pub fn rpj(k: usize, layout: &RpjLayout) -> Result<BoolFn> {
    let n = layout.n();
    BoolFn::from_index_fn(n, |i| rpj_eval(k, layout, &assignment(i, n)).unwrap())
}

/// Direct-mode reordering of [`pj_2k_obdd`]; computes `RPJ_{2k-1}` on every input.
pub fn rpj_2k_obdd(k: usize, layout: &RpjLayout) -> Result<Obdd> {
    reorder_obdd(&pj_2k_obdd(k, layout.a)?, &layout.blocks, AddressMode::Direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::is_commutative;

    fn example() -> PjInstance {
        PjInstance::new(2, vec![2, 3], vec![1, 0]).unwrap()
    }

    #[test]
    fn jumps_by_hand() {
        let inst = example();
        assert_eq!(pj_eval(&inst, 3), 3);
        assert_eq!(pj_eval(&inst, 0), 0);
        assert_eq!(pj_eval(&inst, 1), 2);
        let x = inst.encode();
        assert_eq!(PjInstance::decode(2, &x).unwrap(), inst);
        assert!(!pj_bool(3, 2).unwrap().eval(&x).unwrap());
        assert!(pj_bool(1, 2).unwrap().eval(&x).unwrap());
        assert!(!pj_bool(0, 2).unwrap().eval(&x).unwrap());
    }

    #[test]
    fn layered_program_matches() {
        for jumps in 0..=3 {
            let p = pj_layered_obdd(jumps, 2).unwrap();
            assert_eq!(p.truth_table().unwrap(), pj_bool(jumps, 2).unwrap(), "jumps = {jumps}");
            assert_eq!(p.k(), jumps + 1);
        }
        let p = pj_2k_obdd(2, 2).unwrap();
        assert_eq!(p.k(), 4);
        assert!(p.width() <= 2 * 2 * 3);
        assert!(is_commutative(&p, 0, 0).unwrap());
    }

    #[test]
    fn rpj_by_hand() {
        let l = RpjLayout::new(2).unwrap();
        assert_eq!((l.b(), l.n()), (4, 12));
        let x = l.blocks().encode(&[(1, true), (2, false), (3, true), (4, false)], AddressMode::Direct).unwrap();
        assert!(!rpj_eval(1, &l, &x).unwrap());
        assert!(!rpj_eval(1, &l, &vec![false; 12]).unwrap());
        let dup = l.blocks().encode(&[(1, true), (1, true), (4, true), (4, false)], AddressMode::Direct).unwrap();
        rpj_eval(3, &l, &dup).unwrap();
        assert!(RpjLayout::new(8).is_err());
    }

    #[test]
    fn rpj_program_is_total() {
        let l = RpjLayout::new(2).unwrap();
        let p = rpj_2k_obdd(1, &l).unwrap();
        assert_eq!(p.truth_table().unwrap(), rpj(1, &l).unwrap());
        assert_eq!(p.k(), 2);
    }
}
