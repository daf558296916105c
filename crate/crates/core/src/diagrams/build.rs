use super::{Layer, Leveled, Obdd};
use crate::boolfn::{BoolFn, VarOrder};
use crate::error::{Error, Result};

/// Full binary tree over the `live` variables in natural order.
pub fn build_binary_tree_obdd(f: &BoolFn, live: &[usize]) -> Result<Obdd> {
    build_binary_tree_obdd_in_order(f, live, &VarOrder::identity(f.n()))
}

/// Full binary tree over the `live` variables, read in `order`.
///
/// Before the last live variable a node is the tuple of live values read so
/// far; reading the last live variable lands on the output value, which is
/// carried unchanged to the sinks. Non-live variables keep the node.
pub fn build_binary_tree_obdd_in_order(f: &BoolFn, live: &[usize], order: &VarOrder) -> Result<Obdd> {
    let n = f.n();
    if order.len() != n {
        return Err(Error::shape("order length differs from the function's arity"));
    }
    let mut is_live = vec![false; n];
    for &v in live {
        if v == 0 || v > n {
            return Err(Error::shape(format!("live variable x{v} out of range")));
        }
        is_live[v - 1] = true;
    }
    if let Some(v) = (1..=n).find(|&v| !is_live[v - 1] && f.depends_on(v)) {
        return Err(Error::Dependency(v));
    }
    // Live variables in reading order.
    let live_seq: Vec<usize> = order.as_slice().iter().copied().filter(|&v| is_live[v - 1]).collect();
    let last_live_pos = order.as_slice().iter().rposition(|&v| is_live[v - 1]);

    let value_of = |tuple: usize| {
        let c = live_seq.len();
        let mut index = 0usize;
        for (t, &v) in live_seq.iter().enumerate() {
            if (tuple >> (c - 1 - t)) & 1 == 1 {
                index |= 1 << (n - v);
            }
        }
        f.at(index) as usize
    };

    let mut steps = Vec::with_capacity(n);
    let mut read = 0usize;
    for pos in 0..n {
        let v = order.var_at(pos + 1);
        let table: Vec<[usize; 2]> = match last_live_pos {
            Some(last) if pos < last => {
                let width = 1 << read;
                if is_live[v - 1] {
                    (0..width).map(|s| [2 * s, 2 * s + 1]).collect()
                } else {
                    (0..width).map(|s| [s, s]).collect()
                }
            }
            Some(last) if pos == last => {
                let width = 1 << read;
                (0..width).map(|s| [value_of(2 * s), value_of(2 * s + 1)]).collect()
            }
            Some(_) => vec![[0, 0], [1, 1]],
            // Constant function: a single node until the end.
            None => vec![[0, 0]],
        };
        if is_live[v - 1] {
            read += 1;
        }
        steps.push(table);
    }
    let exit = match last_live_pos {
        Some(_) => vec![0, 1],
        None => vec![f.at(0) as usize],
    };
    Leveled::new(order.clone(), 0, vec![Layer::new(steps, exit)], vec![false, true])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_live_variable() {
        let f = BoolFn::from_fn(3, |x| x[0]).unwrap();
        let p = build_binary_tree_obdd(&f, &[1]).unwrap();
        assert_eq!(p.width(), 2);
        assert_eq!(p.truth_table().unwrap(), f);
    }

    #[test]
    fn eq4_tree_middle_level() {
        let f = BoolFn::from_fn(4, |x| x[0] == x[2] && x[1] == x[3]).unwrap();
        let p = build_binary_tree_obdd(&f, &[1, 2, 3, 4]).unwrap();
        assert_eq!(p.truth_table().unwrap(), f);
        assert_eq!(p.reachable_widths()[2], 4);
        assert!(p.width() <= 16);
    }

    #[test]
    fn dependency_error() {
        let f = BoolFn::from_fn(3, |x| x[0] ^ x[2]).unwrap();
        assert_eq!(build_binary_tree_obdd(&f, &[1]).unwrap_err(), Error::Dependency(3));
    }

    #[test]
    fn constant_tree() {
        let f = BoolFn::constant(3, true).unwrap();
        let p = build_binary_tree_obdd(&f, &[]).unwrap();
        assert_eq!(p.width(), 1);
        assert_eq!(p.truth_table().unwrap(), f);
    }

    #[test]
    fn tree_in_other_order() {
        let f = BoolFn::from_fn(3, |x| x[0] && !x[2]).unwrap();
        let order = VarOrder::new(vec![3, 2, 1]).unwrap();
        let p = build_binary_tree_obdd_in_order(&f, &[1, 3], &order).unwrap();
        assert_eq!(p.truth_table().unwrap(), f);
        assert_eq!(p.width(), 2);
    }
}
