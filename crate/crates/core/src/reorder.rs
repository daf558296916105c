//! Reordered and xor-reordered encodings of a function, and the program
//! transforms that follow them.
//!
//! An input of length `n = q(p + 1)` is split into `q` blocks. Block `i`
//! carries `p` address bits `y^i_1..y^i_p` followed by one value bit `z^i`.
//! Direct addressing reads `Adr(x, i) = bin(y^i) + 1`; xor addressing keeps a
//! running xor `Adr'(x, i) = Adr'(x, i - 1) ^ bin(y^i)` from `Adr'(x, 0) = 0`
//! and uses `Adr'(x, i) + 1`. An input is allowed when the `q` addresses are
//! a permutation of `1..=q`; variable `a` of the original function then takes
//! the value bit of the block whose address is `a`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolfn::{assignment, index_of, BoolFn, PartialBoolFn, TruthTable, VarOrder};
use crate::diagrams::{commutativity_witness, Edge, Layer, Leveled, Nobdd, Obdd, Pobdd, Weight};
use crate::error::{Error, Result};
use crate::qobdd::{is_commutative_quantum, quantum_commutativity_witness, CMatrix, QuantumProgram};
use crate::scalar::{RealScalar, Scalar};

/// Random permutations tried by the commutativity precondition when exhaustive enumeration is too large.
pub const PRECONDITION_TRIALS: usize = 200;
pub const PRECONDITION_SEED: u64 = 0x0bdd;

/// Block structure of an encoded input.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BlockLayout {
    q: usize,
    p: usize,
}

impl BlockLayout {
    /// `q` must be a power of two, at least 2.
    pub fn new(q: usize) -> Result<Self> {
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::param(format!("q = {q} must be a power of two >= 2")));
        }
        Ok(BlockLayout { q, p: q.trailing_zeros() as usize })
    }

    /// Value bits (blocks).
    pub fn q(&self) -> usize {
        self.q
    }

    /// Address bits per block.
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.q * (self.p + 1)
    }

    /// Variable holding address bit `j` of block `i` (both 1-based).
    pub fn address_var(&self, i: usize, j: usize) -> usize {
        (i - 1) * (self.p + 1) + j
    }

    /// Variable holding the value bit of block `i`.
    pub fn value_var(&self, i: usize) -> usize {
        i * (self.p + 1)
    }

    /// `bin(y^i_1 .. y^i_p)`, with `y^i_1` most significant.
    pub fn address_field(&self, x: &[bool], i: usize) -> usize {
        (1..=self.p).fold(0, |acc, j| (acc << 1) | x[self.address_var(i, j) - 1] as usize)
    }

    pub fn value(&self, x: &[bool], i: usize) -> bool {
        x[self.value_var(i) - 1]
    }

    /// Encodes a block sequence `(address in 1..=q, value)` as an input under `mode`.
    pub fn encode(&self, blocks: &[(usize, bool)], mode: AddressMode) -> Result<Vec<bool>> {
        if blocks.len() != self.q {
            return Err(Error::shape(format!("{} blocks for q = {}", blocks.len(), self.q)));
        }
        let mut x = vec![false; self.n()];
        let mut prev = 0;
        for (i, &(adr, val)) in blocks.iter().enumerate() {
            if adr == 0 || adr > self.q {
                return Err(Error::shape(format!("address {adr} outside 1..={}", self.q)));
            }
            let field = match mode {
                AddressMode::Direct => adr - 1,
                AddressMode::Xor => (adr - 1) ^ prev,
            };
            prev = adr - 1;
            for j in 1..=self.p {
                x[self.address_var(i + 1, j) - 1] = (field >> (self.p - j)) & 1 == 1;
            }
            x[self.value_var(i + 1) - 1] = val;
        }
        Ok(x)
    }

    fn check(&self, x: &[bool]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::shape(format!("input of length {} for layout n = {}", x.len(), self.n())));
        }
        Ok(())
    }
}

impl fmt::Display for BlockLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={}", self.q)
    }
}

impl FromStr for BlockLayout {
    type Err = Error;

    /// Parses `q=<power of two>`.
    fn from_str(s: &str) -> Result<Self> {
        let v = s.trim().strip_prefix("q=").ok_or_else(|| Error::Parse(format!("layout {s:?}, expected q=<n>")))?;
        BlockLayout::new(v.parse().map_err(|_| Error::Parse(format!("layout {s:?}")))?)
    }
}

/// How block addresses are read.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AddressMode {
    Direct,
    Xor,
}

impl fmt::Display for AddressMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AddressMode::Direct => "direct",
            AddressMode::Xor => "xor",
        })
    }
}

impl FromStr for AddressMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(AddressMode::Direct),
            "xor" => Ok(AddressMode::Xor),
            _ => Err(Error::Parse(format!("mode {s:?}, expected direct|xor"))),
        }
    }
}

/// All `q` addresses (1-based) of `x`.
pub fn addresses(layout: &BlockLayout, x: &[bool], mode: AddressMode) -> Result<Vec<usize>> {
    layout.check(x)?;
    let mut prev = 0;
    Ok((1..=layout.q)
        .map(|i| {
            let field = layout.address_field(x, i);
            let a = match mode {
                AddressMode::Direct => field,
                AddressMode::Xor => prev ^ field,
            };
            prev = a;
            a + 1
        })
        .collect())
}

/// Address of block `i` (1-based), in `1..=q`.
pub fn adr(layout: &BlockLayout, x: &[bool], i: usize, mode: AddressMode) -> Result<usize> {
    if i == 0 || i > layout.q {
        return Err(Error::shape(format!("block {i} outside 1..={}", layout.q)));
    }
    Ok(addresses(layout, x, mode)?[i - 1])
}

fn is_permutation(adrs: &[usize]) -> bool {
    let mut seen = vec![false; adrs.len()];
    adrs.iter().all(|&a| !std::mem::replace(&mut seen[a - 1], true))
}

/// True iff the block addresses form a permutation of `1..=q`.
pub fn is_allowed(layout: &BlockLayout, x: &[bool], mode: AddressMode) -> Result<bool> {
    Ok(is_permutation(&addresses(layout, x, mode)?))
}

/// Input of the original function routed from an allowed encoded input.
fn route(layout: &BlockLayout, x: &[bool], mode: AddressMode) -> Option<Vec<bool>> {
    let adrs = addresses(layout, x, mode).ok()?;
    if !is_permutation(&adrs) {
        return None;
    }
    let mut y = vec![false; layout.q];
    for (i, &a) in adrs.iter().enumerate() {
        y[a - 1] = layout.value(x, i + 1);
    }
    Some(y)
}

/// Partial function over `n = q(p + 1)` variables, defined exactly on allowed inputs.
pub fn reorder_function<F: TruthTable + ?Sized>(f: &F, layout: &BlockLayout, mode: AddressMode) -> Result<PartialBoolFn> {
    if f.num_vars() != layout.q {
        return Err(Error::shape(format!("function over {} variables, layout has q = {}", f.num_vars(), layout.q)));
    }
    let n = layout.n();
    PartialBoolFn::from_index_fn(n, |i| {
        route(layout, &assignment(i, n), mode).and_then(|y| f.value_at(index_of(&y)))
    })
}

/// Lift of a commutative QOBDD of dimension `g` to the
/// xor-reordered encoding: dimension `g * q`, state index `a * g + s` with
/// `a` the running address. Address bit `y_j` flips bit `p - j` of `a`; the
/// value bit applies `diag(G_1, ..., G_q)` where `G_a` is the pair for
/// variable `a + 1`.
pub fn xor_reorder_qobdd<T: RealScalar>(p: &QuantumProgram<T>, layout: &BlockLayout) -> Result<QuantumProgram<T>> {
    if p.n() != layout.q {
        return Err(Error::shape(format!("program over {} variables, layout has q = {}", p.n(), layout.q)));
    }
    if p.layers() != 1 {
        return Err(Error::param("xor reordering of quantum programs is implemented for one layer"));
    }
    let tolerance = T::tolerance().to_f64_lossy().max(1e-9);
    if !is_commutative_quantum(p, PRECONDITION_TRIALS, PRECONDITION_SEED, tolerance)? {
        let w = quantum_commutativity_witness(p, PRECONDITION_TRIALS, PRECONDITION_SEED, tolerance)?.unwrap();
        return Err(Error::NotCommutative(format!(
            "order {} changes acceptance on {:?} from {} to {}",
            w.order, w.input, w.original, w.reordered
        )));
    }
    let (q, bits, g) = (layout.q, layout.p, p.dim());
    let dim = g * q;
    let id = CMatrix::identity(dim);
    let mut steps = Vec::with_capacity(layout.n());
    for _block in 1..=q {
        for j in 1..=bits {
            let flip = 1 << (bits - j);
            let perm: Vec<usize> = (0..dim).map(|idx| ((idx / g) ^ flip) * g + idx % g).collect();
            steps.push([id.clone(), CMatrix::permutation(&perm)]);
        }
        let diag = |z: usize| {
            let blocks: Vec<&CMatrix<T>> = (1..=q).map(|v| &p.pair_for_var(v)[z]).collect();
            CMatrix::block_diag(&blocks)
        };
        steps.push([diag(0), diag(1)]);
    }
    let mut initial = vec![Complex::new(T::zero(), T::zero()); dim];
    initial[..g].clone_from_slice(p.initial());
    let accept = (0..q).flat_map(|a| p.accept().iter().map(move |&s| a * g + s)).collect();
    QuantumProgram::new(VarOrder::identity(layout.n()), initial, steps, accept, 1)
}

fn require_commutative<E: Edge>(p: &Leveled<E>) -> Result<()> {
    if let Some(w) = commutativity_witness(p, PRECONDITION_TRIALS, PRECONDITION_SEED)? {
        return Err(Error::NotCommutative(format!("order {} changes the output on {:?}", w.order, w.input)));
    }
    Ok(())
}

/// Lift of a commutative leveled program over `q` variables to the block encoding.
///
/// Nodes are pairs `(a, s)` stored as `a * W + s`, where `W` is the padded
/// width of the layer and `a` the 0-based address register. Address bits
/// xor into `a`; the value bit applies the program's table for variable
/// `a + 1` to `s`. Direct mode clears `a` after each value bit, xor mode
/// keeps it as the running carry. Every layer starts from `a = 0`.
pub fn reorder_program<E: Edge>(p: &Leveled<E>, layout: &BlockLayout, mode: AddressMode) -> Result<Leveled<E>> {
    if p.n() != layout.q {
        return Err(Error::shape(format!("program over {} variables, layout has q = {}", p.n(), layout.q)));
    }
    require_commutative(p)?;
    let u = p.uniformized();
    let (q, bits) = (layout.q, layout.p);
    let layers = u
        .layers()
        .iter()
        .map(|layer| {
            let w = layer.widths()[0];
            let node = |a: usize, s: usize| a * w + s;
            let mut steps: Vec<Vec<[E; 2]>> = Vec::with_capacity(layout.n());
            for _block in 1..=q {
                for j in 1..=bits {
                    let flip = 1 << (bits - j);
                    steps.push(
                        (0..q * w)
                            .map(|idx| [E::point(idx), E::point(node((idx / w) ^ flip, idx % w))])
                            .collect(),
                    );
                }
                steps.push(
                    (0..q * w)
                        .map(|idx| {
                            let (a, s) = (idx / w, idx % w);
                            let table = &layer.steps()[u.order().position_of(a + 1) - 1];
                            let keep = match mode {
                                AddressMode::Direct => 0,
                                AddressMode::Xor => a,
                            };
                            let [e0, e1] = &table[s];
                            [e0.map_targets(|t| node(keep, t)), e1.map_targets(|t| node(keep, t))]
                        })
                        .collect(),
                );
            }
            let exit = (0..q * w).map(|idx| layer.exit()[idx % w]).collect();
            Layer::new(steps, exit)
        })
        .collect();
    Leveled::new(VarOrder::identity(layout.n()), u.start(), layers, u.accepting().to_vec())
}

pub fn reorder_obdd(p: &Obdd, layout: &BlockLayout, mode: AddressMode) -> Result<Obdd> {
    reorder_program(p, layout, mode)
}

pub fn reorder_nobdd(p: &Nobdd, layout: &BlockLayout, mode: AddressMode) -> Result<Nobdd> {
    reorder_program(p, layout, mode)
}

pub fn reorder_pobdd<T: Scalar>(p: &Pobdd<T>, layout: &BlockLayout, mode: AddressMode) -> Result<Pobdd<T>> {
    reorder_program(p, layout, mode)
}

/// A program with a Boolean verdict per input. Probabilistic and quantum
/// programs answer 1 iff the acceptance probability exceeds 1/2.
pub trait Decide: Sync {
    fn num_vars(&self) -> usize;
    fn decide(&self, index: usize) -> Result<bool>;
}

impl<E: Edge> Decide for Leveled<E> {
    fn num_vars(&self) -> usize {
        self.n()
    }
    fn decide(&self, index: usize) -> Result<bool> {
        Ok(self.acceptance(&assignment(index, self.n()))?.decides_one())
    }
}

impl<T: RealScalar> Decide for QuantumProgram<T> {
    fn num_vars(&self) -> usize {
        self.n()
    }
    fn decide(&self, index: usize) -> Result<bool> {
        let half = T::one() / (T::one() + T::one());
        Ok(self.accept_probability_at(index)? > half)
    }
}

impl Decide for BoolFn {
    fn num_vars(&self) -> usize {
        self.n()
    }
    fn decide(&self, index: usize) -> Result<bool> {
        Ok(self.at(index))
    }
}

/// Total function equal to `fp` where it is defined and to the program's
/// verdict elsewhere. A disagreement on a defined input is an error.
pub fn totalize<P: Decide + ?Sized>(fp: &PartialBoolFn, program: &P) -> Result<BoolFn> {
    let n = fp.n();
    if program.num_vars() != n {
        return Err(Error::shape(format!("program over {} variables, function over {n}", program.num_vars())));
    }
    let verdicts = (0..1usize << n).into_par_iter().map(|i| program.decide(i)).collect::<Result<Vec<_>>>()?;
    if let Some(i) = (0..1usize << n).find(|&i| fp.at(i).is_some_and(|v| v != verdicts[i])) {
        let input: String = assignment(i, n).iter().map(|&b| if b { '1' } else { '0' }).collect();
        return Err(Error::Inconsistent { input });
    }
    BoolFn::from_index_fn(n, |i| verdicts[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().filter(|c| !c.is_whitespace()).map(|c| c == '1').collect()
    }

    #[test]
    fn xor_addresses_by_hand() {
        let l = BlockLayout::new(4).unwrap();
        // Address fields 00, 01, 11, 01 with arbitrary value bits.
        let x = bits("000 011 110 011");
        assert_eq!(addresses(&l, &x, AddressMode::Xor).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(adr(&l, &x, 4, AddressMode::Xor).unwrap(), 4);
        assert!(is_allowed(&l, &x, AddressMode::Xor).unwrap());
        assert!(!is_allowed(&l, &x, AddressMode::Direct).unwrap());
    }

    #[test]
    fn direct_addresses() {
        let l = BlockLayout::new(4).unwrap();
        assert_eq!(adr(&l, &vec![false; 12], 1, AddressMode::Direct).unwrap(), 1);
        assert_eq!(adr(&l, &bits("110 000 000 000"), 1, AddressMode::Direct).unwrap(), 4);
        let two = BlockLayout::new(2).unwrap();
        assert!(!is_allowed(&two, &bits("0101"), AddressMode::Direct).unwrap());
        assert!(!is_allowed(&two, &bits("0000"), AddressMode::Direct).unwrap());
    }

    #[test]
    fn encode_roundtrip() {
        let l = BlockLayout::new(4).unwrap();
        let blocks = [(3, true), (1, false), (4, true), (2, true)];
        for mode in [AddressMode::Direct, AddressMode::Xor] {
            let x = l.encode(&blocks, mode).unwrap();
            assert_eq!(addresses(&l, &x, mode).unwrap(), vec![3, 1, 4, 2]);
        }
    }

    #[test]
    fn layout_rejects_non_powers() {
        assert!(BlockLayout::new(3).is_err());
        assert!(BlockLayout::new(1).is_err());
        assert_eq!("q=8".parse::<BlockLayout>().unwrap().n(), 32);
    }

    #[test]
    fn reorder_eq2_xor() {
        let eq2 = BoolFn::from_fn(2, |x| x[0] == x[1]).unwrap();
        let l = BlockLayout::new(2).unwrap();
        let f = reorder_function(&eq2, &l, AddressMode::Xor).unwrap();
        // Addresses (1, 2), values (1, 1).
        assert_eq!(f.eval(&bits("0111")).unwrap(), Some(true));
        assert_eq!(f.eval(&bits("0101")).unwrap(), None);
        assert_eq!(f.defined_count(), 8);
    }

    #[test]
    fn constant_reorders_to_constant() {
        let one = BoolFn::constant(4, true).unwrap();
        let l = BlockLayout::new(4).unwrap();
        let f = reorder_function(&one, &l, AddressMode::Direct).unwrap();
        assert_eq!(f.defined_count(), 24 * 16);
        assert!((0..1 << 12).all(|i| f.at(i) != Some(false)));
    }

    #[test]
    fn totalize_fills_gaps() {
        let l = BlockLayout::new(2).unwrap();
        let fp = reorder_function(&BoolFn::constant(2, true).unwrap(), &l, AddressMode::Direct).unwrap();
        let filled = totalize(&fp, &BoolFn::constant(4, true).unwrap()).unwrap();
        assert_eq!(filled.ones(), 16);
        let zero = BoolFn::constant(4, false).unwrap();
        assert!(matches!(totalize(&fp, &zero), Err(Error::Inconsistent { .. })));
        let total = BoolFn::from_index_fn(4, |i| i % 3 == 0).unwrap();
        assert_eq!(totalize(&total.to_partial(), &total).unwrap(), total);
    }
}
