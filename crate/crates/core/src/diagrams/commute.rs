//! Position reordering of transition tables and the commutativity check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Edge, Layer, Leveled, Weight};
use crate::boolfn::{assignment, VarOrder};
use crate::error::{Error, Result};

/// Up to this many variables every permutation is tried.
pub const EXHAUSTIVE_PERMUTATION_MAX: usize = 5;
/// Inputs are enumerated exhaustively, so programs are limited to this size.
pub const COMMUTE_MAX_VARS: usize = 12;

impl<E: Edge> Layer<E> {
    /// Same layer with every level padded to the layer's widest level.
    /// Padded nodes keep their index on every read and leave through node 0's exit.
    fn uniform(&self) -> Layer<E> {
        let w = self.widths.iter().copied().max().unwrap();
        let steps = self
            .steps
            .iter()
            .map(|t| (0..w).map(|s| t.get(s).cloned().unwrap_or_else(|| [E::point(s), E::point(s)])).collect())
            .collect();
        let exit = (0..w).map(|s| self.exit.get(s).copied().unwrap_or(self.exit[0])).collect();
        Layer { widths: vec![w; self.widths.len()], steps, exit }
    }
}

impl<E: Edge> Leveled<E> {
    /// Program `P'` with order `new_order` whose table at position `i` of every
    /// layer is the table `P` used for variable `new_order(i)`.
    ///
    /// Levels are first padded to a common width per layer so that any table
    /// can sit at any position.
    pub fn reorder_positions(&self, new_order: &VarOrder) -> Result<Leveled<E>> {
        if new_order.len() != self.n {
            return Err(Error::shape("new order has a different length"));
        }
        let layers = self
            .layers
            .iter()
            .map(|layer| {
                let u = layer.uniform();
                let steps = (1..=self.n)
                    .map(|i| u.steps[self.order.position_of(new_order.var_at(i)) - 1].clone())
                    .collect();
                Layer { widths: u.widths, steps, exit: u.exit }
            })
            .collect();
        Leveled::new(new_order.clone(), self.start, layers, self.accepting.clone())
    }

    /// Same program with every level padded to its layer's widest level.
    pub fn uniformized(&self) -> Leveled<E> {
        Leveled {
            n: self.n,
            order: self.order.clone(),
            start: self.start,
            layers: self.layers.iter().map(Layer::uniform).collect(),
            accepting: self.accepting.clone(),
        }
    }
}

/// A permutation and input on which a reordered program differs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutativityWitness {
    pub order: VarOrder,
    pub input: Vec<bool>,
}

/// Permutations to test: all of them for small `n`, otherwise `trials` seeded random ones.
pub(crate) fn sample_orders(n: usize, trials: usize, seed: u64) -> Vec<VarOrder> {
    if n <= EXHAUSTIVE_PERMUTATION_MAX {
        VarOrder::all(n)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..trials).map(|_| VarOrder::random(n, &mut rng)).collect()
    }
}

/// First violating permutation/input found, if any.
pub fn commutativity_witness<E: Edge>(p: &Leveled<E>, trials: usize, seed: u64) -> Result<Option<CommutativityWitness>> {
    let n = p.n();
    if n > COMMUTE_MAX_VARS {
        return Err(Error::Capacity(format!("commutativity check needs n <= {COMMUTE_MAX_VARS}, got {n}")));
    }
    let reference: Vec<E::W> = (0..1usize << n).map(|i| p.acceptance_at(i)).collect();
    let orders = sample_orders(n, trials, seed);
    let found = orders
        .par_iter()
        .map(|order| -> Result<Option<CommutativityWitness>> {
            let q = p.reorder_positions(order)?;
            Ok((0..1usize << n)
                .find(|&i| !q.acceptance_at(i).approx_eq(&reference[i]))
                .map(|i| CommutativityWitness { order: order.clone(), input: assignment(i, n) }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().next())
}

/// True iff every sampled position permutation leaves the computed function unchanged.
pub fn is_commutative<E: Edge>(p: &Leveled<E>, trials: usize, seed: u64) -> Result<bool> {
    Ok(commutativity_witness(p, trials, seed)?.is_none())
}
