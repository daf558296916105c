//! State-vector simulation of quantum OBDDs.
//!
//! A program is the tuple (transition pairs, initial vector, accepting set,
//! order). Step `i` applies `G_i^0` or `G_i^1` depending on the bit of the
//! variable read at position `i`; a single measurement at the end accepts
//! with probability `sum |v_a|^2` over accepting basis states `a`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolfn::{assignment, TruthTable, VarOrder};
use crate::diagrams::sample_orders;
use crate::error::{Error, Result};
pub use crate::inputs::InputMode;
use crate::scalar::RealScalar;

/// Largest state-space dimension accepted by the simulator.
pub const MAX_DIM: usize = 4096;
/// Quantum commutativity checks enumerate all inputs, up to this size.
pub const QUANTUM_COMMUTE_MAX_VARS: usize = 10;

/// Unitarity and norm tolerance; never tighter than 1e-9.
fn tol<T: RealScalar>() -> f64 {
    T::tolerance().to_f64_lossy().max(1e-9)
}

/// Dense square complex matrix in row-major order.
#[derive(Clone, PartialEq, Debug)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: RealScalar> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        CMatrix { dim, data: vec![Complex::new(T::zero(), T::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::shape("matrix is not square"));
        }
        Ok(CMatrix { dim, data: rows.into_iter().flatten().collect() })
    }

    /// Real 2x2 rotation by `theta`.
    pub fn rotation(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        let z = T::zero();
        CMatrix { dim: 2, data: vec![Complex::new(c, z), Complex::new(-s, z), Complex::new(s, z), Complex::new(c, z)] }
    }

    /// Permutation matrix sending basis state `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let dim = perm.len();
        let mut m = Self::zeros(dim);
        for (j, &i) in perm.iter().enumerate() {
            m.data[i * dim + j] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Block-diagonal matrix `diag(blocks[0], blocks[1], ...)`.
    pub fn block_diag(blocks: &[&CMatrix<T>]) -> Self {
        let dim = blocks.iter().map(|b| b.dim).sum();
        let mut m = Self::zeros(dim);
        let mut off = 0;
        for b in blocks {
            for r in 0..b.dim {
                for c in 0..b.dim {
                    m.data[(off + r) * dim + off + c] = b.get(r, c);
                }
            }
            off += b.dim;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex<T>) {
        self.data[r * self.dim + c] = v;
    }

    pub fn scale(&self, s: T) -> Self {
        CMatrix { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.dim;
        let mut m = Self::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..d {
                    m.data[r * d + c] = m.data[r * d + c] + a * other.data[k * d + c];
                }
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut m = Self::zeros(d);
        for r in 0..d {
            for c in 0..d {
                m.data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        m
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let d = self.dim;
        (0..d)
            .map(|r| {
                self.data[r * d..(r + 1) * d]
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// `max |(G^dagger G - I)_{rc}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.adjoint().mul(self);
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let want = if r == c { T::one() } else { T::zero() };
                let z = g.get(r, c) - Complex::new(want, T::zero());
                worst = worst.max(z.norm().to_f64_lossy());
            }
        }
        worst
    }
}

fn norm2<T: RealScalar>(v: &[Complex<T>]) -> f64 {
    v.iter().map(|z| z.norm_sqr().to_f64_lossy()).sum::<f64>().sqrt()
}

/// Quantum OBDD (or k-QOBDD when `layers > 1`: the same pairs repeat per layer).
#[derive(Clone, PartialEq, Debug)]
pub struct QuantumProgram<T> {
    order: VarOrder,
    initial: Vec<Complex<T>>,
    /// Transition pair for the read at each position of the order.
    steps: Vec<[CMatrix<T>; 2]>,
    /// Accepting basis states, sorted, 0-based.
    accept: Vec<usize>,
    layers: usize,
}

/// Worst-case unitarity deviation over all matrices.
#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct UnitarityReport {
    pub max_defect: f64,
    pub pass: bool,
}

/// Outcome of an exhaustive bounded-error check.
#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct BoundedErrorVerdict {
    /// Minimum acceptance over defined 1-inputs (1.0 if there are none).
    pub min_accept_on_ones: f64,
    /// Maximum acceptance over defined 0-inputs (0.0 if there are none).
    pub max_accept_on_zeros: f64,
    pub epsilon: f64,
    pub inputs_checked: usize,
    pub pass: bool,
}

impl<T: RealScalar> QuantumProgram<T> {
    /// Validates shapes, the norm of the initial vector and unitarity of every matrix.
    pub fn new(
        order: VarOrder,
        initial: Vec<Complex<T>>,
        steps: Vec<[CMatrix<T>; 2]>,
        accept: Vec<usize>,
        layers: usize,
    ) -> Result<Self> {
        let p = Self::new_unchecked(order, initial, steps, accept, layers)?;
        let report = p.check_unitary();
        if !report.pass {
            return Err(Error::structure(format!("transition is not unitary (defect {:e})", report.max_defect)));
        }
        Ok(p)
    }

    /// Like [`QuantumProgram::new`] but without the unitarity check. Evaluation
    /// still detects a non-unitary step through norm drift.
    pub fn new_unchecked(
        order: VarOrder,
        initial: Vec<Complex<T>>,
        steps: Vec<[CMatrix<T>; 2]>,
        mut accept: Vec<usize>,
        layers: usize,
    ) -> Result<Self> {
        let dim = initial.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Capacity(format!("dimension {dim} outside 1..={MAX_DIM}")));
        }
        if steps.len() != order.len() {
            return Err(Error::shape(format!("{} transition pairs for {} variables", steps.len(), order.len())));
        }
        if layers == 0 {
            return Err(Error::structure("program without layers"));
        }
        if steps.iter().flatten().any(|g| g.dim != dim) {
            return Err(Error::shape("matrix dimension differs from the state dimension"));
        }
        if (norm2(&initial) - 1.0).abs() > 1e-12f64.max(T::tolerance().to_f64_lossy()) {
            return Err(Error::structure(format!("initial vector has norm {}", norm2(&initial))));
        }
        accept.sort_unstable();
        accept.dedup();
        if accept.iter().any(|&a| a >= dim) {
            return Err(Error::structure("accepting state outside the state space"));
        }
        Ok(QuantumProgram { order, initial, steps, accept, layers })
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// State-space dimension (the program's width).
    pub fn dim(&self) -> usize {
        self.initial.len()
    }

    pub fn order(&self) -> &VarOrder {
        &self.order
    }

    pub fn initial(&self) -> &[Complex<T>] {
        &self.initial
    }

    pub fn steps(&self) -> &[[CMatrix<T>; 2]] {
        &self.steps
    }

    pub fn accept(&self) -> &[usize] {
        &self.accept
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    /// Transition pair applied when variable `var` is read.
    pub fn pair_for_var(&self, var: usize) -> &[CMatrix<T>; 2] {
        &self.steps[self.order.position_of(var) - 1]
    }

    pub fn check_unitary(&self) -> UnitarityReport {
        let max_defect = self.steps.iter().flatten().map(CMatrix::unitarity_defect).fold(0.0, f64::max);
        UnitarityReport { max_defect, pass: max_defect <= tol::<T>() }
    }

    fn check_input(&self, x: &[bool]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::shape(format!("input of length {} for n = {}", x.len(), self.n())));
        }
        Ok(())
    }

    /// Final state vector; errors if the norm drifts from 1 at any step.
    pub fn final_state(&self, x: &[bool]) -> Result<Vec<Complex<T>>> {
        let mut v = self.initial.clone();
        self.run(x, |_, state| {
            v = state.to_vec();
        })?;
        Ok(v)
    }

    /// Norm of the state after every step (`k * n` values).
    pub fn step_norms(&self, x: &[bool]) -> Result<Vec<f64>> {
        let mut norms = Vec::with_capacity(self.layers * self.n());
        self.run(x, |_, state| norms.push(norm2(state)))?;
        Ok(norms)
    }

    fn run(&self, x: &[bool], mut visit: impl FnMut(usize, &[Complex<T>])) -> Result<()> {
        self.check_input(x)?;
        let mut v = self.initial.clone();
        let limit = tol::<T>();
        let mut step = 0;
        for _ in 0..self.layers {
            for (i, pair) in self.steps.iter().enumerate() {
                let bit = x[self.order.var_at(i + 1) - 1] as usize;
                v = pair[bit].apply(&v);
                step += 1;
                let norm = norm2(&v);
                if (norm - 1.0).abs() > limit {
                    return Err(Error::structure(format!("state norm {norm} after step {step}: non-unitary transition")));
                }
                visit(step, &v);
            }
        }
        Ok(())
    }

    /// `sum_{a in Accept} |v_a|^2` after reading `x`.
    pub fn accept_probability(&self, x: &[bool]) -> Result<T> {
        let v = self.final_state(x)?;
        Ok(self.accept.iter().fold(T::zero(), |acc, &a| acc + v[a].norm_sqr()))
    }

    pub fn accept_probability_at(&self, index: usize) -> Result<T> {
        self.accept_probability(&assignment(index, self.n()))
    }

    /// Same program read in `new_order`: the pair at position `i` is the pair
    /// this program uses for variable `new_order(i)`.
    pub fn reorder(&self, new_order: &VarOrder) -> Result<Self> {
        if new_order.len() != self.n() {
            return Err(Error::shape("new order has a different length"));
        }
        let steps = (1..=self.n()).map(|i| self.pair_for_var(new_order.var_at(i)).clone()).collect();
        Ok(QuantumProgram {
            order: new_order.clone(),
            initial: self.initial.clone(),
            steps,
            accept: self.accept.clone(),
            layers: self.layers,
        })
    }

    /// Serializable form; amplitudes are stored as `f64` pairs.
    pub fn to_json(&self) -> QuantumProgramJson {
        let pair = |z: &Complex<T>| [z.re.to_f64_lossy(), z.im.to_f64_lossy()];
        let mat = |g: &CMatrix<T>| -> Vec<Vec<[f64; 2]>> {
            (0..g.dim).map(|r| (0..g.dim).map(|c| pair(&g.get(r, c))).collect()).collect()
        };
        QuantumProgramJson {
            dim: self.dim(),
            order: self.order.as_slice().to_vec(),
            accept: self.accept.clone(),
            layers: self.layers,
            initial: self.initial.iter().map(pair).collect(),
            steps: self.steps.iter().map(|[g0, g1]| StepJson { g0: mat(g0), g1: mat(g1) }).collect(),
        }
    }

    pub fn from_json(j: &QuantumProgramJson) -> Result<Self> {
        let c = |p: &[f64; 2]| Complex::new(T::from_f64_lossy(p[0]), T::from_f64_lossy(p[1]));
        let mat = |m: &Vec<Vec<[f64; 2]>>| CMatrix::from_rows(m.iter().map(|r| r.iter().map(c).collect()).collect());
        if j.initial.len() != j.dim {
            return Err(Error::Parse(format!("initial vector has {} entries, dim is {}", j.initial.len(), j.dim)));
        }
        let steps = j.steps.iter().map(|s| Ok([mat(&s.g0)?, mat(&s.g1)?])).collect::<Result<Vec<_>>>()?;
        Self::new(VarOrder::new(j.order.clone())?, j.initial.iter().map(c).collect(), steps, j.accept.clone(), j.layers)
    }
}

/// JSON layout of a quantum program. Matrices are row-major lists of `[re, im]`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct QuantumProgramJson {
    pub dim: usize,
    pub order: Vec<usize>,
    pub accept: Vec<usize>,
    #[serde(default = "one")]
    pub layers: usize,
    pub initial: Vec<[f64; 2]>,
    pub steps: Vec<StepJson>,
}

fn one() -> usize {
    1
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct StepJson {
    pub g0: Vec<Vec<[f64; 2]>>,
    pub g1: Vec<Vec<[f64; 2]>>,
}

/// Checks acceptance `>= 1/2 + eps` on defined 1-inputs and `<= 1/2 - eps` on
/// defined 0-inputs, over every input.
pub fn computes_with_bounded_error<T: RealScalar, F: TruthTable + Sync + ?Sized>(
    p: &QuantumProgram<T>,
    f: &F,
    eps: f64,
) -> Result<BoundedErrorVerdict> {
    computes_with_bounded_error_on(p, f, eps, InputMode::Exhaustive)
}

pub fn computes_with_bounded_error_on<T: RealScalar, F: TruthTable + Sync + ?Sized>(
    p: &QuantumProgram<T>,
    f: &F,
    eps: f64,
    mode: InputMode,
) -> Result<BoundedErrorVerdict> {
    if f.num_vars() != p.n() {
        return Err(Error::shape(format!("function over {} variables, program over {}", f.num_vars(), p.n())));
    }
    let indices = mode.indices(p.n())?;
    let results = indices
        .par_iter()
        .filter_map(|&i| match f.value_at(i) {
            None => None,
            Some(v) => Some(p.accept_probability_at(i).map(|pr| (v, pr.to_f64_lossy()))),
        })
        .collect::<Result<Vec<_>>>()?;
    let min1 = results.iter().filter(|r| r.0).map(|r| r.1).fold(1.0, f64::min);
    let max0 = results.iter().filter(|r| !r.0).map(|r| r.1).fold(0.0, f64::max);
    let t = tol::<T>();
    Ok(BoundedErrorVerdict {
        min_accept_on_ones: min1,
        max_accept_on_zeros: max0,
        epsilon: eps,
        inputs_checked: results.len(),
        pass: min1 >= 0.5 + eps - t && max0 <= 0.5 - eps + t,
    })
}

/// A permutation and input where acceptance probabilities differ by more than the tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumCommutativityWitness {
    pub order: VarOrder,
    pub input: Vec<bool>,
    pub original: f64,
    pub reordered: f64,
}

pub fn quantum_commutativity_witness<T: RealScalar>(
    p: &QuantumProgram<T>,
    trials: usize,
    seed: u64,
    tolerance: f64,
) -> Result<Option<QuantumCommutativityWitness>> {
    let n = p.n();
    if n > QUANTUM_COMMUTE_MAX_VARS {
        return Err(Error::Capacity(format!("quantum commutativity check needs n <= {QUANTUM_COMMUTE_MAX_VARS}, got {n}")));
    }
    let reference =
        (0..1usize << n).map(|i| p.accept_probability_at(i).map(|x| x.to_f64_lossy())).collect::<Result<Vec<_>>>()?;
    let found = sample_orders(n, trials, seed)
        .par_iter()
        .map(|order| -> Result<Option<QuantumCommutativityWitness>> {
            let q = p.reorder(order)?;
            for (i, &want) in reference.iter().enumerate() {
                let got = q.accept_probability_at(i)?.to_f64_lossy();
                if (got - want).abs() > tolerance {
                    return Ok(Some(QuantumCommutativityWitness {
                        order: order.clone(),
                        input: assignment(i, n),
                        original: want,
                        reordered: got,
                    }));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().next())
}

/// True iff every sampled reordering keeps all acceptance probabilities within `tolerance`.
pub fn is_commutative_quantum<T: RealScalar>(p: &QuantumProgram<T>, trials: usize, seed: u64, tolerance: f64) -> Result<bool> {
    Ok(quantum_commutativity_witness(p, trials, seed, tolerance)?.is_none())
}

/// Hadamard-type control that does not commute: `H` on the first variable,
/// `H S` on the second, identity on 0 bits. Used as a negative control.
pub fn non_commutative_control<T: RealScalar>() -> QuantumProgram<T> {
    let z = T::zero();
    let h = T::one() / (T::one() + T::one()).sqrt();
    let c = |re: T, im: T| Complex::new(re, im);
    let hadamard = CMatrix::from_rows(vec![vec![c(h, z), c(h, z)], vec![c(h, z), c(-h, z)]]).unwrap();
    let phase = CMatrix::from_rows(vec![vec![c(T::one(), z), c(z, z)], vec![c(z, z), c(z, T::one())]]).unwrap();
    let id = CMatrix::identity(2);
    QuantumProgram::new(
        VarOrder::identity(2),
        vec![c(T::one(), z), c(z, z)],
        vec![[id.clone(), hadamard.clone()], [id, hadamard.mul(&phase)]],
        vec![0],
        1,
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::BoolFn;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    fn mod2_machine(n: usize) -> QuantumProgram<f64> {
        let rot = CMatrix::rotation(std::f64::consts::FRAC_PI_2);
        let steps = vec![[CMatrix::identity(2), rot]; n];
        QuantumProgram::new(VarOrder::identity(n), vec![c(1.0), c(0.0)], steps, vec![0], 1).unwrap()
    }

    #[test]
    fn identity_program_accepts() {
        let p = QuantumProgram::new(VarOrder::identity(3), vec![c(1.0), c(0.0)], vec![[CMatrix::identity(2), CMatrix::identity(2)]; 3], vec![0], 1)
            .unwrap();
        for i in 0..8 {
            assert!((p.accept_probability_at(i).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(p.check_unitary().max_defect, 0.0);
    }

    #[test]
    fn rotation_machine_closed_form() {
        let p = mod2_machine(3);
        assert!(p.accept_probability(&[true, false, false]).unwrap().abs() < 1e-12);
        assert!((p.accept_probability(&[true, true, false]).unwrap() - 1.0).abs() < 1e-12);
        assert!(p.check_unitary().max_defect <= 1e-12);
    }

    #[test]
    fn scaled_identity_fails_unitarity() {
        let g = CMatrix::<f64>::identity(2).scale(1.1);
        let steps = vec![[g.clone(), g]];
        assert!(QuantumProgram::new(VarOrder::identity(1), vec![c(1.0), c(0.0)], steps.clone(), vec![0], 1).is_err());
        let p = QuantumProgram::new_unchecked(VarOrder::identity(1), vec![c(1.0), c(0.0)], steps, vec![0], 1).unwrap();
        assert!(!p.check_unitary().pass);
        assert!(matches!(p.accept_probability(&[true]), Err(Error::Structure(_))));
    }

    #[test]
    fn norm_is_conserved() {
        let p = non_commutative_control::<f64>();
        for i in 0..4 {
            for norm in p.step_norms(&assignment(i, 2)).unwrap() {
                assert!((norm - 1.0).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn full_accept_set_gives_one() {
        let mut p = mod2_machine(2);
        p.accept = vec![0, 1];
        for i in 0..4 {
            assert!((p.accept_probability_at(i).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bounded_error_checks() {
        let p = mod2_machine(3);
        let even = BoolFn::from_index_fn(3, |i| i.count_ones() % 2 == 0).unwrap();
        let v = computes_with_bounded_error(&p, &even, 0.5).unwrap();
        assert!(v.pass, "{v:?}");
        assert!(!computes_with_bounded_error(&p, &even.negate(), 0.1).unwrap().pass);
    }

    #[test]
    fn control_does_not_commute() {
        let p = non_commutative_control::<f64>();
        assert!((p.accept_probability(&[true, true]).unwrap() - 0.5).abs() < 1e-12);
        let swapped = p.reorder(&VarOrder::new(vec![2, 1]).unwrap()).unwrap();
        assert!((swapped.accept_probability(&[true, true]).unwrap() - 1.0).abs() < 1e-12);
        let w = quantum_commutativity_witness(&p, 0, 0, 1e-9).unwrap().unwrap();
        assert!((w.original - w.reordered).abs() > 0.1);
        assert!(is_commutative_quantum(&mod2_machine(4), 0, 0, 1e-9).unwrap());
    }

    #[test]
    fn reorder_roundtrip() {
        let p = non_commutative_control::<f64>();
        let o = VarOrder::new(vec![2, 1]).unwrap();
        assert_eq!(p.reorder(&o).unwrap().reorder(&VarOrder::identity(2)).unwrap(), p);
    }

    #[test]
    fn json_roundtrip() {
        let p = non_commutative_control::<f64>();
        let text = serde_json::to_string(&p.to_json()).unwrap();
        let back = QuantumProgram::<f64>::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        for i in 0..4 {
            assert!((back.accept_probability_at(i).unwrap() - p.accept_probability_at(i).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn f32_programs_run() {
        let rot = CMatrix::<f32>::rotation(std::f32::consts::FRAC_PI_2);
        let p = QuantumProgram::new(
            VarOrder::identity(2),
            vec![Complex::new(1.0f32, 0.0), Complex::new(0.0, 0.0)],
            vec![[CMatrix::identity(2), rot]; 2],
            vec![0],
            1,
        )
        .unwrap();
        assert!((p.accept_probability(&[true, true]).unwrap() - 1.0).abs() < 1e-5);
    }
}
