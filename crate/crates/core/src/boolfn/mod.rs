//! Explicit truth tables for total and partial Boolean functions.
//!
//! Inputs are indexed by `bin(x1 ... xn)`, so `x1` is the most significant
//! bit of the table index. Variables are 1-based throughout.

mod order;
mod subfn;

pub use order::{Partition, VarOrder};
pub use subfn::{
    n_min, n_min_by_enumeration, n_pi, subfunction_count, subfunction_count_for_set, MinWidth, DP_MAX_VARS, ENUM_MAX_VARS,
};

use crate::bits::BitVec;
use crate::error::{Error, Result};

/// Largest variable count a truth table may have (16 MiB of bits).
pub const MAX_VARS: usize = 24;

/// Index of an assignment `x = (x1, ..., xn)`.
pub fn index_of(x: &[bool]) -> usize {
    x.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Value of variable `var` (1-based) in the assignment with table index `index`.
#[inline]
pub fn var_bit(index: usize, n: usize, var: usize) -> bool {
    (index >> (n - var)) & 1 == 1
}

/// Assignment with table index `index`.
pub fn assignment(index: usize, n: usize) -> Vec<bool> {
    (1..=n).map(|v| var_bit(index, n, v)).collect()
}

fn check_vars(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VARS {
        return Err(Error::Capacity(format!("variable count {n} outside 1..={MAX_VARS}")));
    }
    Ok(())
}

/// Read-only view shared by total and partial functions.
pub trait TruthTable {
    fn num_vars(&self) -> usize;

    /// Values, zero wherever the function is undefined.
    fn values(&self) -> &BitVec;

    /// Allowed-input mask; `None` for total functions.
    fn mask(&self) -> Option<&BitVec>;

    fn value_at(&self, index: usize) -> Option<bool> {
        match self.mask() {
            Some(m) if !m.get(index) => None,
            _ => Some(self.values().get(index)),
        }
    }

    fn is_total(&self) -> bool {
        self.mask().map_or(true, BitVec::all)
    }
}

/// Total Boolean function on `n` variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BoolFn {
    n: usize,
    table: BitVec,
}

impl BoolFn {
    pub fn new(n: usize, table: BitVec) -> Result<Self> {
        check_vars(n)?;
        if table.len() != 1 << n {
            return Err(Error::shape(format!("table of {} bits for n = {n}", table.len())));
        }
        Ok(BoolFn { n, table })
    }

    /// Build from a predicate on the table index.
    pub fn from_index_fn(n: usize, f: impl FnMut(usize) -> bool) -> Result<Self> {
        check_vars(n)?;
        Ok(BoolFn { n, table: BitVec::from_fn(1 << n, f) })
    }

    /// Build from a predicate on the assignment (`x[0]` is `x1`).
    pub fn from_fn(n: usize, mut f: impl FnMut(&[bool]) -> bool) -> Result<Self> {
        let mut x = vec![false; n];
        Self::from_index_fn(n, |i| {
            for (v, b) in x.iter_mut().enumerate() {
                *b = var_bit(i, n, v + 1);
            }
            f(&x)
        })
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        check_vars(n)?;
        let table = if value { BitVec::ones(1 << n) } else { BitVec::zeros(1 << n) };
        Ok(BoolFn { n, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &BitVec {
        &self.table
    }

    #[inline]
    pub fn at(&self, index: usize) -> bool {
        self.table.get(index)
    }

    pub fn eval(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::shape(format!("assignment of length {} for n = {}", x.len(), self.n)));
        }
        Ok(self.at(index_of(x)))
    }

    pub fn negate(&self) -> BoolFn {
        BoolFn::from_index_fn(self.n, |i| !self.at(i)).unwrap()
    }

    pub fn ones(&self) -> usize {
        self.table.count_ones()
    }

    /// True if flipping `var` changes the value on some input.
    pub fn depends_on(&self, var: usize) -> bool {
        let bit = 1 << (self.n - var);
        (0..1usize << self.n).any(|i| i & bit == 0 && self.at(i) != self.at(i | bit))
    }

    pub fn to_partial(&self) -> PartialBoolFn {
        PartialBoolFn { n: self.n, defined: BitVec::ones(1 << self.n), values: self.table.clone() }
    }

    pub fn restrict(&self, rho: &[(usize, bool)]) -> Result<BoolFn> {
        let (m, table, _) = restrict_tables(self.n, &self.table, None, rho)?;
        BoolFn::new(m, table)
    }

    pub fn to_hex(&self) -> String {
        self.table.to_hex()
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        check_vars(n)?;
        Self::new(n, BitVec::from_hex(1 << n, hex)?)
    }
}

impl TruthTable for BoolFn {
    fn num_vars(&self) -> usize {
        self.n
    }
    fn values(&self) -> &BitVec {
        &self.table
    }
    fn mask(&self) -> Option<&BitVec> {
        None
    }
}

/// Partial Boolean function: values are meaningful only where `defined` is set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PartialBoolFn {
    n: usize,
    defined: BitVec,
    values: BitVec,
}

impl PartialBoolFn {
    /// Values outside the mask are cleared to keep the representation canonical.
    pub fn new(n: usize, defined: BitVec, values: BitVec) -> Result<Self> {
        check_vars(n)?;
        if defined.len() != 1 << n || values.len() != 1 << n {
            return Err(Error::shape(format!("mask/value tables do not have 2^{n} bits")));
        }
        let values = values.and(&defined);
        Ok(PartialBoolFn { n, defined, values })
    }

    pub fn from_index_fn(n: usize, mut f: impl FnMut(usize) -> Option<bool>) -> Result<Self> {
        check_vars(n)?;
        let mut defined = BitVec::zeros(1 << n);
        let mut values = BitVec::zeros(1 << n);
        for i in 0..1usize << n {
            if let Some(b) = f(i) {
                defined.set(i, true);
                values.set(i, b);
            }
        }
        Ok(PartialBoolFn { n, defined, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn defined(&self) -> &BitVec {
        &self.defined
    }

    pub fn defined_count(&self) -> usize {
        self.defined.count_ones()
    }

    #[inline]
    pub fn at(&self, index: usize) -> Option<bool> {
        self.defined.get(index).then(|| self.values.get(index))
    }

    pub fn eval(&self, x: &[bool]) -> Result<Option<bool>> {
        if x.len() != self.n {
            return Err(Error::shape(format!("assignment of length {} for n = {}", x.len(), self.n)));
        }
        Ok(self.at(index_of(x)))
    }

    /// The total function if every input is defined.
    pub fn to_total(&self) -> Option<BoolFn> {
        self.defined.all().then(|| BoolFn { n: self.n, table: self.values.clone() })
    }

    pub fn negate(&self) -> PartialBoolFn {
        PartialBoolFn::from_index_fn(self.n, |i| self.at(i).map(|b| !b)).unwrap()
    }

    pub fn restrict(&self, rho: &[(usize, bool)]) -> Result<PartialBoolFn> {
        let (m, values, defined) = restrict_tables(self.n, &self.values, Some(&self.defined), rho)?;
        PartialBoolFn::new(m, defined.unwrap(), values)
    }

    /// `(mask, values)` hex pair.
    pub fn to_hex(&self) -> (String, String) {
        (self.defined.to_hex(), self.values.to_hex())
    }

    pub fn from_hex(n: usize, mask: &str, values: &str) -> Result<Self> {
        check_vars(n)?;
        let defined = BitVec::from_hex(1 << n, mask)?;
        let values = BitVec::from_hex(1 << n, values)?;
        if values.and(&defined) != values {
            return Err(Error::Parse("values set outside the defined mask".into()));
        }
        Self::new(n, defined, values)
    }
}

impl TruthTable for PartialBoolFn {
    fn num_vars(&self) -> usize {
        self.n
    }
    fn values(&self) -> &BitVec {
        &self.values
    }
    fn mask(&self) -> Option<&BitVec> {
        Some(&self.defined)
    }
}

type Restricted = (usize, BitVec, Option<BitVec>);

fn restrict_tables(
    n: usize,
    values: &BitVec,
    mask: Option<&BitVec>,
    rho: &[(usize, bool)],
) -> Result<Restricted> {
    let mut fixed = vec![None; n];
    for &(v, b) in rho {
        if v == 0 || v > n {
            return Err(Error::shape(format!("restriction names unknown variable x{v}")));
        }
        if fixed[v - 1].is_some_and(|old| old != b) {
            return Err(Error::shape(format!("conflicting values for x{v}")));
        }
        fixed[v - 1] = Some(b);
    }
    let free: Vec<usize> = (1..=n).filter(|v| fixed[v - 1].is_none()).collect();
    let m = free.len();
    if m == 0 {
        return Err(Error::shape("restriction fixes every variable"));
    }
    let base = (1..=n).fold(0usize, |acc, v| {
        acc | (fixed[v - 1] == Some(true)) as usize * (1 << (n - v))
    });
    let full_index = |j: usize| {
        free.iter().enumerate().fold(base, |acc, (t, &v)| {
            acc | ((j >> (m - 1 - t)) & 1) << (n - v)
        })
    };
    let out_values = BitVec::from_fn(1 << m, |j| values.get(full_index(j)));
    let out_mask = mask.map(|mk| BitVec::from_fn(1 << m, |j| mk.get(full_index(j))));
    Ok((m, out_values, out_mask))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq4() -> BoolFn {
        BoolFn::from_fn(4, |x| x[0] == x[2] && x[1] == x[3]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let one = BoolFn::constant(3, true).unwrap();
        assert!(one.eval(&[false, true, false]).unwrap());
        assert!(eq4().eval(&[true, false, true, false]).unwrap());
        assert!(!eq4().eval(&[true, false, false, false]).unwrap());
        assert!(matches!(eq4().eval(&[true]), Err(Error::Shape(_))));
    }

    #[test]
    fn partial_eval_undefined() {
        let p = PartialBoolFn::from_index_fn(2, |i| (i != 3).then_some(i == 1)).unwrap();
        assert_eq!(p.eval(&[true, true]).unwrap(), None);
        assert_eq!(p.eval(&[false, true]).unwrap(), Some(true));
        assert_eq!(p.eval(&[false, false]).unwrap(), Some(false));
    }

    #[test]
    fn capacity_cap() {
        assert!(BoolFn::constant(25, false).unwrap_err().is_capacity());
        assert!(BoolFn::constant(0, false).unwrap_err().is_capacity());
    }

    #[test]
    fn restrict_eq4_to_indicator() {
        let r = eq4().restrict(&[(1, true), (2, false)]).unwrap();
        let expected = BoolFn::from_fn(2, |x| x[0] && !x[1]).unwrap();
        assert_eq!(r, expected);
    }

    #[test]
    fn empty_restriction_is_identity() {
        assert_eq!(eq4().restrict(&[]).unwrap(), eq4());
    }

    #[test]
    fn restrict_rejects_unknown_variable() {
        assert!(matches!(eq4().restrict(&[(5, true)]), Err(Error::Shape(_))));
    }

    #[test]
    fn partial_restriction_keeps_mask() {
        let p = PartialBoolFn::from_index_fn(3, |i| (i % 3 != 0).then_some(i % 2 == 1)).unwrap();
        let r = p.restrict(&[(2, true)]).unwrap();
        for j in 0..4 {
            let x1 = j >> 1 & 1;
            let x3 = j & 1;
            let full = x1 << 2 | 1 << 1 | x3;
            assert_eq!(r.at(j), p.at(full));
        }
    }

    #[test]
    fn hex_roundtrip_examples() {
        let f = eq4();
        assert_eq!(f.to_hex(), "8421");
        assert_eq!(BoolFn::from_hex(4, "8421").unwrap(), f);
        let p = f.to_partial();
        let (m, v) = p.to_hex();
        assert_eq!(m, "ffff");
        assert_eq!(PartialBoolFn::from_hex(4, &m, &v).unwrap(), p);
    }

    #[test]
    fn dependency_check() {
        let f = BoolFn::from_fn(3, |x| x[0]).unwrap();
        assert!(f.depends_on(1));
        assert!(!f.depends_on(2));
    }
}
