//! Leveled read-once programs (OBDD, NOBDD, POBDD) and their k-layer variants.
//!
//! A program with `k` layers reads all `n` variables once per layer, in the
//! same order. Each layer is stored as `n` transition tables plus a fixed
//! end-of-layer map into the next layer's entry level (or into the sinks for
//! the last layer). Keeping the hand-off separate from the per-variable
//! tables is what makes position reordering well defined: only the tables
//! move, the hand-off stays at the end of the layer.
//!
//! The three program kinds share [`Leveled`] and differ in the edge type:
//! a single successor, a set of successors, or a probability vector.

mod build;
mod commute;
mod text;

pub use build::{build_binary_tree_obdd, build_binary_tree_obdd_in_order};
pub(crate) use commute::sample_orders;
pub use commute::{commutativity_witness, is_commutative, CommutativityWitness, EXHAUSTIVE_PERMUTATION_MAX};

use std::fmt::Debug;

use crate::boolfn::{assignment, BoolFn, VarOrder};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Accumulation semiring for path weights.
pub trait Weight: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn approx_eq(&self, other: &Self) -> bool;
    /// Boolean verdict: acceptance, or probability strictly above 1/2.
    fn decides_one(&self) -> bool;
}

impl Weight for bool {
    fn zero() -> Self {
        false
    }
    fn one() -> Self {
        true
    }
    fn add(&self, other: &Self) -> Self {
        *self || *other
    }
    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
    fn decides_one(&self) -> bool {
        *self
    }
}

impl<T: Scalar> Weight for T {
    fn zero() -> Self {
        T::zero()
    }
    fn one() -> Self {
        T::one()
    }
    fn add(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn mul(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }
    fn approx_eq(&self, other: &Self) -> bool {
        Scalar::approx_eq(self, other)
    }
    fn decides_one(&self) -> bool {
        *self > T::one() / (T::one() + T::one())
    }
}

/// Outgoing edge of a node for one input bit.
pub trait Edge: Clone + PartialEq + Debug + Send + Sync {
    type W: Weight;
    /// Header keyword in the text format.
    const KIND: &'static str;

    /// Edge with a single certain successor.
    fn point(target: usize) -> Self;
    fn for_each(&self, f: impl FnMut(usize, &Self::W));
    fn map_targets(&self, f: impl Fn(usize) -> usize) -> Self;
    fn targets(&self) -> Vec<usize>;
    fn validate(&self) -> Result<()>;
    fn format(&self) -> String;
    fn parse(s: &str) -> Result<Self>;
}

impl Edge for usize {
    type W = bool;
    const KIND: &'static str = "obdd";

    fn point(target: usize) -> Self {
        target
    }
    fn for_each(&self, mut f: impl FnMut(usize, &bool)) {
        f(*self, &true)
    }
    fn map_targets(&self, f: impl Fn(usize) -> usize) -> Self {
        f(*self)
    }
    fn targets(&self) -> Vec<usize> {
        vec![*self]
    }
    fn validate(&self) -> Result<()> {
        Ok(())
    }
    fn format(&self) -> String {
        self.to_string()
    }
    fn parse(s: &str) -> Result<Self> {
        s.trim().parse().map_err(|e| Error::Parse(format!("edge {s:?}: {e}")))
    }
}

/// Nondeterministic successor set. Empty means the path dies (rejects).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Choice(pub Vec<usize>);

impl Edge for Choice {
    type W = bool;
    const KIND: &'static str = "nobdd";

    fn point(target: usize) -> Self {
        Choice(vec![target])
    }
    fn for_each(&self, mut f: impl FnMut(usize, &bool)) {
        for &t in &self.0 {
            f(t, &true)
        }
    }
    fn map_targets(&self, f: impl Fn(usize) -> usize) -> Self {
        Choice(self.0.iter().map(|&t| f(t)).collect())
    }
    fn targets(&self) -> Vec<usize> {
        self.0.clone()
    }
    fn validate(&self) -> Result<()> {
        Ok(())
    }
    fn format(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        format!("{{{}}}", parts.join(";"))
    }
    fn parse(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("choice {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Choice(Vec::new()));
        }
        inner.split(';').map(usize::parse).collect::<Result<_>>().map(Choice)
    }
}

/// Probability vector over successors.
#[derive(Clone, PartialEq, Debug)]
pub struct Dist<T>(pub Vec<(usize, T)>);

impl<T: Scalar> Edge for Dist<T> {
    type W = T;
    const KIND: &'static str = "pobdd";

    fn point(target: usize) -> Self {
        Dist(vec![(target, T::one())])
    }
    fn for_each(&self, mut f: impl FnMut(usize, &T)) {
        for (t, p) in &self.0 {
            f(*t, p)
        }
    }
    fn map_targets(&self, f: impl Fn(usize) -> usize) -> Self {
        Dist(self.0.iter().map(|(t, p)| (f(*t), p.clone())).collect())
    }
    fn targets(&self) -> Vec<usize> {
        self.0.iter().map(|(t, _)| *t).collect()
    }
    fn validate(&self) -> Result<()> {
        let mut total = T::zero();
        for (_, p) in &self.0 {
            if *p < T::zero() {
                return Err(Error::structure(format!("negative probability {p}")));
            }
            total = total + p.clone();
        }
        // Stochastic rows are checked to 1e-9 regardless of the scalar's own tolerance.
        let tol = if T::EXACT { T::zero() } else { T::from_f64_lossy(1e-9) };
        if (total.clone() - T::one()).abs() > tol {
            return Err(Error::structure(format!("probabilities sum to {total}")));
        }
        Ok(())
    }
    fn format(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|(t, p)| format!("{p}→{t}")).collect();
        format!("({})", parts.join(";"))
    }
    fn parse(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("distribution {s:?}")))?;
        inner
            .split(';')
            .map(|item| {
                let (p, t) = item
                    .split_once('→')
                    .or_else(|| item.split_once("->"))
                    .ok_or_else(|| Error::Parse(format!("distribution entry {item:?}")))?;
                let p = p
                    .trim()
                    .parse::<T>()
                    .map_err(|_| Error::Parse(format!("probability {p:?}")))?;
                Ok((usize::parse(t)?, p))
            })
            .collect::<Result<_>>()
            .map(Dist)
    }
}

/// One pass over all variables.
#[derive(Clone, PartialEq, Debug)]
pub struct Layer<E> {
    /// Node counts before each of the `n` reads, followed by the end-of-layer count.
    widths: Vec<usize>,
    /// `steps[i][node] = [edge on 0, edge on 1]` for the read at position `i + 1`.
    steps: Vec<Vec<[E; 2]>>,
    /// End-of-layer node to next-layer entry node (or sink index).
    exit: Vec<usize>,
}

impl<E: Edge> Layer<E> {
    /// Widths are implied by the table sizes; the last table's targets index the end level,
    /// whose size is `exit.len()`.
    pub fn new(steps: Vec<Vec<[E; 2]>>, exit: Vec<usize>) -> Self {
        let mut widths: Vec<usize> = steps.iter().map(Vec::len).collect();
        widths.push(exit.len());
        Layer { widths, steps, exit }
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn steps(&self) -> &[Vec<[E; 2]>] {
        &self.steps
    }

    pub fn exit(&self) -> &[usize] {
        &self.exit
    }

    /// Largest level size among the `n` reading levels.
    pub fn width(&self) -> usize {
        self.widths[..self.steps.len()].iter().copied().max().unwrap_or(1)
    }
}

/// Leveled oblivious read-once program with `k` layers sharing one order.
#[derive(Clone, PartialEq, Debug)]
pub struct Leveled<E> {
    n: usize,
    order: VarOrder,
    start: usize,
    layers: Vec<Layer<E>>,
    accepting: Vec<bool>,
}

/// Deterministic OBDD / k-OBDD.
pub type Obdd = Leveled<usize>;
/// Nondeterministic OBDD / k-NOBDD.
pub type Nobdd = Leveled<Choice>;
/// Probabilistic OBDD / k-POBDD over scalar `T`.
pub type Pobdd<T> = Leveled<Dist<T>>;

impl<E: Edge> Leveled<E> {
    pub fn new(order: VarOrder, start: usize, layers: Vec<Layer<E>>, accepting: Vec<bool>) -> Result<Self> {
        let n = order.len();
        if n == 0 {
            return Err(Error::shape("program over zero variables"));
        }
        if layers.is_empty() {
            return Err(Error::structure("program without layers"));
        }
        for (j, layer) in layers.iter().enumerate() {
            if layer.steps.len() != n {
                return Err(Error::structure(format!("layer {} has {} levels, expected {n}", j + 1, layer.steps.len())));
            }
            for (i, table) in layer.steps.iter().enumerate() {
                if table.is_empty() {
                    return Err(Error::structure(format!("layer {} level {} is empty", j + 1, i + 1)));
                }
                let next = layer.widths[i + 1];
                for (node, edges) in table.iter().enumerate() {
                    for e in edges {
                        e.validate()?;
                        if let Some(t) = e.targets().into_iter().find(|&t| t >= next) {
                            return Err(Error::structure(format!(
                                "layer {} level {} node {node}: target {t} outside next level of width {next}",
                                j + 1,
                                i + 1
                            )));
                        }
                    }
                }
            }
            let next = layers.get(j + 1).map_or(accepting.len(), |l| l.widths[0]);
            if let Some(t) = layer.exit.iter().find(|&&t| t >= next) {
                return Err(Error::structure(format!("layer {} exit target {t} outside width {next}", j + 1)));
            }
        }
        if start >= layers[0].widths[0] {
            return Err(Error::structure(format!("start node {start} outside first level")));
        }
        Ok(Leveled { n, order, start, layers, accepting })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of layers.
    pub fn k(&self) -> usize {
        self.layers.len()
    }

    pub fn order(&self) -> &VarOrder {
        &self.order
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn layers(&self) -> &[Layer<E>] {
        &self.layers
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    /// Maximum level size over all `k * n` levels.
    pub fn width(&self) -> usize {
        self.layers.iter().map(Layer::width).max().unwrap()
    }

    /// Sizes of the `k * n` reading levels.
    pub fn level_widths(&self) -> Vec<usize> {
        self.layers.iter().flat_map(|l| l.widths[..self.n].iter().copied()).collect()
    }

    /// Total node count: every reading level plus the sink level.
    pub fn size(&self) -> usize {
        self.level_widths().iter().sum::<usize>() + self.accepting.len()
    }

    /// Variable tested on global level `level` (1-based, up to `k * n`).
    pub fn var_at_level(&self, level: usize) -> usize {
        self.order.var_at((level - 1) % self.n + 1)
    }

    fn check_input(&self, x: &[bool]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::shape(format!("input of length {} for n = {}", x.len(), self.n)));
        }
        Ok(())
    }

    /// Total weight of accepting sinks: acceptance for deterministic and
    /// nondeterministic programs, acceptance probability for probabilistic ones.
    pub fn acceptance(&self, x: &[bool]) -> Result<E::W> {
        self.check_input(x)?;
        let mut cur = vec![E::W::zero(); self.layers[0].widths[0]];
        cur[self.start] = E::W::one();
        for (j, layer) in self.layers.iter().enumerate() {
            for (i, table) in layer.steps.iter().enumerate() {
                let bit = x[self.order.var_at(i + 1) - 1] as usize;
                let mut next = vec![E::W::zero(); layer.widths[i + 1]];
                for (node, edges) in table.iter().enumerate() {
                    if cur[node] == E::W::zero() {
                        continue;
                    }
                    edges[bit].for_each(|t, w| next[t] = next[t].add(&cur[node].mul(w)));
                }
                cur = next;
            }
            let width = self.layers.get(j + 1).map_or(self.accepting.len(), |l| l.widths[0]);
            let mut next = vec![E::W::zero(); width];
            for (node, &t) in layer.exit.iter().enumerate() {
                next[t] = next[t].add(&cur[node]);
            }
            cur = next;
        }
        Ok(cur
            .iter()
            .zip(&self.accepting)
            .filter(|(_, &acc)| acc)
            .fold(E::W::zero(), |acc, (w, _)| acc.add(w)))
    }

    pub fn acceptance_at(&self, index: usize) -> E::W {
        self.acceptance(&assignment(index, self.n)).unwrap()
    }

    /// Number of nodes reachable on each reading level under some input prefix.
    pub fn reachable_widths(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.k() * self.n);
        let mut cur = vec![false; self.layers[0].widths[0]];
        cur[self.start] = true;
        for (j, layer) in self.layers.iter().enumerate() {
            for (i, table) in layer.steps.iter().enumerate() {
                out.push(cur.iter().filter(|&&b| b).count());
                let mut next = vec![false; layer.widths[i + 1]];
                for (node, edges) in table.iter().enumerate() {
                    if cur[node] {
                        for e in edges {
                            for t in e.targets() {
                                next[t] = true;
                            }
                        }
                    }
                }
                cur = next;
            }
            let width = self.layers.get(j + 1).map_or(self.accepting.len(), |l| l.widths[0]);
            let mut next = vec![false; width];
            for (node, &t) in layer.exit.iter().enumerate() {
                if cur[node] {
                    next[t] = true;
                }
            }
            cur = next;
        }
        out
    }

    /// Same program with every edge replaced by `f(edge)`.
    pub fn map_edges<F: Edge>(&self, f: impl Fn(&E) -> F) -> Leveled<F> {
        Leveled {
            n: self.n,
            order: self.order.clone(),
            start: self.start,
            layers: self
                .layers
                .iter()
                .map(|l| Layer {
                    widths: l.widths.clone(),
                    steps: l.steps.iter().map(|t| t.iter().map(|[a, b]| [f(a), f(b)]).collect()).collect(),
                    exit: l.exit.clone(),
                })
                .collect(),
            accepting: self.accepting.clone(),
        }
    }
}

impl Obdd {
    /// Follows the unique consistent path.
    pub fn eval(&self, x: &[bool]) -> Result<bool> {
        self.check_input(x)?;
        let mut node = self.start;
        for layer in &self.layers {
            for (i, table) in layer.steps.iter().enumerate() {
                let bit = x[self.order.var_at(i + 1) - 1] as usize;
                node = table[node][bit];
            }
            node = layer.exit[node];
        }
        Ok(self.accepting[node])
    }

    pub fn eval_index(&self, index: usize) -> bool {
        self.eval(&assignment(index, self.n)).unwrap()
    }

    pub fn truth_table(&self) -> Result<BoolFn> {
        BoolFn::from_index_fn(self.n, |i| self.eval_index(i))
    }

    pub fn to_nobdd(&self) -> Nobdd {
        self.map_edges(|&t| Choice::point(t))
    }

    pub fn to_pobdd<T: Scalar>(&self) -> Pobdd<T> {
        self.map_edges(|&t| Dist::point(t))
    }
}

impl Nobdd {
    /// 1 iff some consistent path reaches an accepting sink.
    pub fn eval(&self, x: &[bool]) -> Result<bool> {
        self.acceptance(x)
    }

    pub fn truth_table(&self) -> Result<BoolFn> {
        BoolFn::from_index_fn(self.n, |i| self.acceptance_at(i))
    }
}

impl<T: Scalar> Pobdd<T> {
    /// Probability of reaching an accepting sink.
    pub fn eval(&self, x: &[bool]) -> Result<T> {
        self.acceptance(x)
    }

    /// Distribution mass on each level after reading `x`; mass is conserved.
    pub fn level_masses(&self, x: &[bool]) -> Result<Vec<T>> {
        self.check_input(x)?;
        let mut masses = Vec::new();
        let mut cur = vec![T::zero(); self.layers[0].widths[0]];
        cur[self.start] = T::one();
        for (j, layer) in self.layers.iter().enumerate() {
            for (i, table) in layer.steps.iter().enumerate() {
                masses.push(cur.iter().fold(T::zero(), |a, b| a + b.clone()));
                let bit = x[self.order.var_at(i + 1) - 1] as usize;
                let mut next = vec![T::zero(); layer.widths[i + 1]];
                for (node, edges) in table.iter().enumerate() {
                    edges[bit].for_each(|t, w| next[t] = next[t].clone() + cur[node].clone() * w.clone());
                }
                cur = next;
            }
            let width = self.layers.get(j + 1).map_or(self.accepting.len(), |l| l.widths[0]);
            let mut next = vec![T::zero(); width];
            for (node, &t) in layer.exit.iter().enumerate() {
                next[t] = next[t].clone() + cur[node].clone();
            }
            cur = next;
        }
        masses.push(cur.iter().fold(T::zero(), |a, b| a + b.clone()));
        Ok(masses)
    }
}
