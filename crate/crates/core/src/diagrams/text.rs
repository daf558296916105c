//! Line-oriented text format.
//!
//! ```text
//! obdd <n> <k> <width> order=<v1,...,vn> start=<node>
//! L<level> var=<v>: <node>:<e0>,<e1> ...
//! X<layer>: <node>><target> ...
//! sinks: <node>=<0|1> ...
//! ```
//!
//! Edges print as a node id (deterministic), `{a;b}` (nondeterministic) or
//! `(p→t;...)` (probabilistic). `X` lines carry the end-of-layer hand-off.

use std::fmt;

use super::{Edge, Layer, Leveled};
use crate::boolfn::VarOrder;
use crate::error::{Error, Result};

impl<E: Edge> fmt::Display for Leveled<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {} {} order={} start={}", E::KIND, self.n, self.k(), self.width(), self.order, self.start)?;
        let mut level = 1;
        for (j, layer) in self.layers.iter().enumerate() {
            for (i, table) in layer.steps.iter().enumerate() {
                write!(f, "L{level} var={}:", self.order.var_at(i + 1))?;
                for (node, [e0, e1]) in table.iter().enumerate() {
                    write!(f, " {node}:{},{}", e0.format(), e1.format())?;
                }
                writeln!(f)?;
                level += 1;
            }
            write!(f, "X{}:", j + 1)?;
            for (node, t) in layer.exit.iter().enumerate() {
                write!(f, " {node}>{t}")?;
            }
            writeln!(f)?;
        }
        write!(f, "sinks:")?;
        for (node, &acc) in self.accepting.iter().enumerate() {
            write!(f, " {node}={}", acc as u8)?;
        }
        writeln!(f)
    }
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(tok: Option<&'a str>, key: &str) -> Result<&'a str> {
    tok.and_then(|t| t.strip_prefix(key)).ok_or_else(|| parse_err(format!("expected {key}...")))
}

fn num(s: &str) -> Result<usize> {
    s.parse().map_err(|_| parse_err(format!("expected integer, got {s:?}")))
}

impl<E: Edge> Leveled<E> {
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| parse_err("empty program text"))?;
        let mut toks = header.split_whitespace();
        let kind = toks.next().unwrap_or_default();
        if kind != E::KIND {
            return Err(parse_err(format!("expected {} program, found {kind:?}", E::KIND)));
        }
        let n = num(toks.next().unwrap_or_default())?;
        let k = num(toks.next().unwrap_or_default())?;
        let _width = num(toks.next().unwrap_or_default())?;
        let order = VarOrder::parse(field(toks.next(), "order=")?)?;
        let start = num(field(toks.next(), "start=")?)?;
        if order.len() != n {
            return Err(parse_err("order length differs from n"));
        }

        let mut layers = Vec::with_capacity(k);
        let mut steps = Vec::new();
        let mut accepting = None;
        for line in lines {
            if let Some(rest) = line.strip_prefix("sinks:") {
                let acc = rest
                    .split_whitespace()
                    .enumerate()
                    .map(|(i, tok)| {
                        let (node, v) = tok.split_once('=').ok_or_else(|| parse_err(format!("sink {tok:?}")))?;
                        if num(node)? != i {
                            return Err(parse_err("sinks must be listed in order"));
                        }
                        match v {
                            "0" => Ok(false),
                            "1" => Ok(true),
                            _ => Err(parse_err(format!("sink label {v:?}"))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                accepting = Some(acc);
            } else if line.starts_with('L') {
                let (_, body) = line.split_once(':').ok_or_else(|| parse_err(format!("level line {line:?}")))?;
                let table = body
                    .split_whitespace()
                    .enumerate()
                    .map(|(i, tok)| {
                        let (node, edges) = tok.split_once(':').ok_or_else(|| parse_err(format!("node {tok:?}")))?;
                        if num(node)? != i {
                            return Err(parse_err("nodes must be listed in order"));
                        }
                        let (e0, e1) = edges.split_once(',').ok_or_else(|| parse_err(format!("edges {edges:?}")))?;
                        Ok([E::parse(e0)?, E::parse(e1)?])
                    })
                    .collect::<Result<Vec<_>>>()?;
                steps.push(table);
            } else if line.starts_with('X') {
                let (_, body) = line.split_once(':').ok_or_else(|| parse_err(format!("exit line {line:?}")))?;
                let exit = body
                    .split_whitespace()
                    .enumerate()
                    .map(|(i, tok)| {
                        let (node, t) = tok.split_once('>').ok_or_else(|| parse_err(format!("exit {tok:?}")))?;
                        if num(node)? != i {
                            return Err(parse_err("exit nodes must be listed in order"));
                        }
                        num(t)
                    })
                    .collect::<Result<Vec<_>>>()?;
                if steps.len() != n {
                    return Err(parse_err(format!("layer {} has {} levels", layers.len() + 1, steps.len())));
                }
                layers.push(Layer::new(std::mem::take(&mut steps), exit));
            } else {
                return Err(parse_err(format!("unrecognised line {line:?}")));
            }
        }
        if layers.len() != k || !steps.is_empty() {
            return Err(parse_err(format!("expected {k} complete layers")));
        }
        let accepting = accepting.ok_or_else(|| parse_err("missing sinks line"))?;
        Leveled::new(order, start, layers, accepting)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::BoolFn;
    use crate::diagrams::{build_binary_tree_obdd, Dist, Nobdd, Obdd, Pobdd};

    #[test]
    fn obdd_text_roundtrip() {
        let f = BoolFn::from_fn(3, |x| x[0] ^ (x[1] && x[2])).unwrap();
        let p = build_binary_tree_obdd(&f, &[1, 2, 3]).unwrap();
        let text = p.to_text();
        assert!(text.starts_with("obdd 3 1 4 order=1,2,3 start=0\nL1 var=1: 0:0,1\n"));
        assert_eq!(Obdd::from_text(&text).unwrap(), p);
    }

    #[test]
    fn pobdd_text_uses_arrows() {
        let p: Pobdd<f64> = Leveled::new(
            VarOrder::identity(1),
            0,
            vec![Layer::new(vec![vec![[Dist(vec![(0, 0.25), (1, 0.75)]), Dist::point(1)]]], vec![0, 1])],
            vec![false, true],
        )
        .unwrap();
        let text = p.to_text();
        assert!(text.contains("0:(0.25→0;0.75→1),(1→1)"));
        assert_eq!(Pobdd::<f64>::from_text(&text).unwrap(), p);
        assert_eq!(Pobdd::<f64>::from_text(&text.replace('→', "->")).unwrap(), p);
    }

    #[test]
    fn kind_mismatch_rejected() {
        let f = BoolFn::from_fn(2, |x| x[0]).unwrap();
        let text = build_binary_tree_obdd(&f, &[1]).unwrap().to_text();
        assert!(Nobdd::from_text(&text).is_err());
    }
}
