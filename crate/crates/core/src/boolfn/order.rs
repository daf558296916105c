use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A variable order `(j1, ..., jn)`: position `i` (1-based) reads variable `perm[i-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct VarOrder {
    perm: Vec<usize>,
    pos: Vec<usize>,
}

impl VarOrder {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut pos = vec![0; n];
        for (i, &v) in perm.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::shape(format!("variable {v} out of range 1..={n}")));
            }
            if pos[v - 1] != 0 {
                return Err(Error::shape(format!("variable {v} repeated in order")));
            }
            pos[v - 1] = i + 1;
        }
        Ok(VarOrder { perm, pos })
    }

    pub fn identity(n: usize) -> Self {
        VarOrder { perm: (1..=n).collect(), pos: (1..=n).collect() }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut perm: Vec<usize> = (1..=n).collect();
        perm.shuffle(rng);
        Self::new(perm).unwrap()
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Variable read at 1-based position `i`.
    #[inline]
    pub fn var_at(&self, i: usize) -> usize {
        self.perm[i - 1]
    }

    /// 1-based position at which variable `v` is read.
    #[inline]
    pub fn position_of(&self, v: usize) -> usize {
        self.pos[v - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse(&self) -> VarOrder {
        VarOrder { perm: self.pos.clone(), pos: self.perm.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Bit mask (bit `v-1` for variable `v`) of the first `u` variables.
    pub fn prefix_mask(&self, u: usize) -> u64 {
        self.perm[..u].iter().fold(0, |m, &v| m | 1 << (v - 1))
    }

    /// Every permutation of `1..=n` (Heap's algorithm). Intended for n <= 8.
    pub fn all(n: usize) -> Vec<VarOrder> {
        let mut a: Vec<usize> = (1..=n).collect();
        let mut out = vec![VarOrder::new(a.clone()).unwrap()];
        let mut c = vec![0usize; n];
        let mut i = 1;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    a.swap(0, i);
                } else {
                    a.swap(c[i], i);
                }
                out.push(VarOrder::new(a.clone()).unwrap());
                c[i] += 1;
                i = 1;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        out
    }

    pub fn parse(s: &str) -> Result<Self> {
        let perm = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("order {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(perm)
    }
}

impl TryFrom<Vec<usize>> for VarOrder {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        VarOrder::new(v)
    }
}

impl From<VarOrder> for Vec<usize> {
    fn from(o: VarOrder) -> Self {
        o.perm
    }
}

impl std::fmt::Display for VarOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.perm.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Split of the variables into the first `cut` of an order (`X_A`) and the rest (`X_B`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    order: VarOrder,
    cut: usize,
}

impl Partition {
    pub fn new(order: VarOrder, cut: usize) -> Result<Self> {
        let n = order.len();
        if cut == 0 || cut >= n {
            return Err(Error::shape(format!("cut {cut} outside 1..={}", n.saturating_sub(1))));
        }
        Ok(Partition { order, cut })
    }

    pub fn order(&self) -> &VarOrder {
        &self.order
    }

    pub fn cut(&self) -> usize {
        self.cut
    }

    /// Mask of `X_A`.
    pub fn left_mask(&self) -> u64 {
        self.order.prefix_mask(self.cut)
    }

    pub fn left(&self) -> &[usize] {
        &self.order.as_slice()[..self.cut]
    }

    pub fn right(&self) -> &[usize] {
        &self.order.as_slice()[self.cut..]
    }
}
