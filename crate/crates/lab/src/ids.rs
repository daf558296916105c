//! `name:key=value,...` identifiers for functions and programs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use obdd_core::diagrams::Leveled;
use obdd_core::qobdd::non_commutative_control;
use obdd_core::reorder::{reorder_nobdd, reorder_obdd, reorder_pobdd, xor_reorder_qobdd};
use obdd_core::zoo::{self, RpjLayout};
use obdd_core::{AddressMode, BlockLayout, BoolFn, Nobdd, Obdd, Pobdd64, QuantumProgram64};

use crate::{LabError, Result};

fn split_id(s: &str) -> Result<(String, BTreeMap<String, usize>)> {
    let (name, rest) = s.split_once(':').unwrap_or((s, ""));
    let mut params = BTreeMap::new();
    for kv in rest.split(',').filter(|t| !t.is_empty()) {
        let (k, v) = kv.split_once('=').ok_or_else(|| LabError::usage(format!("{s:?}: expected key=value, got {kv:?}")))?;
        let v = v.trim().parse().map_err(|_| LabError::usage(format!("{s:?}: {k} must be a non-negative integer")))?;
        params.insert(k.trim().to_string(), v);
    }
    Ok((name.trim().to_string(), params))
}

struct Params<'a> {
    id: &'a str,
    map: BTreeMap<String, usize>,
}

impl Params<'_> {
    fn take(&mut self, key: &str) -> Result<usize> {
        self.map.remove(key).ok_or_else(|| LabError::usage(format!("{:?} needs {key}=<n>", self.id)))
    }

    fn done(self) -> Result<()> {
        match self.map.keys().next() {
            Some(k) => Err(LabError::usage(format!("{:?}: unknown parameter {k}", self.id))),
            None => Ok(()),
        }
    }
}

/// A catalogue function with its size parameters.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FunctionId {
    Eq { n: usize },
    Req { q: usize },
    ModP { p: usize, n: usize },
    Ws { n: usize },
    WsB { n: usize, b: usize },
    MswB { n: usize, b: usize },
    ReqB { n: usize, b: usize },
    Pj { k: usize, a: usize },
    Rpj { k: usize, a: usize },
}

impl FromStr for FunctionId {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let (name, map) = split_id(s)?;
        let mut p = Params { id: s, map };
        let id = match name.as_str() {
            "eq" => FunctionId::Eq { n: p.take("n")? },
            "req" => FunctionId::Req { q: p.take("q")? },
            "modp" => FunctionId::ModP { p: p.take("p")?, n: p.take("n")? },
            "ws" => FunctionId::Ws { n: p.take("n")? },
            "wsb" => FunctionId::WsB { n: p.take("n")?, b: p.take("b")? },
            "mswb" => FunctionId::MswB { n: p.take("n")?, b: p.take("b")? },
            "reqb" => FunctionId::ReqB { n: p.take("n")?, b: p.take("b")? },
            "pj" => FunctionId::Pj { k: p.take("k")?, a: p.take("a")? },
            "rpj" => FunctionId::Rpj { k: p.take("k")?, a: p.take("a")? },
            other => return Err(LabError::usage(format!("unknown function {other:?}"))),
        };
        p.done()?;
        Ok(id)
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FunctionId::Eq { n } => write!(f, "eq:n={n}"),
            FunctionId::Req { q } => write!(f, "req:q={q}"),
            FunctionId::ModP { p, n } => write!(f, "modp:p={p},n={n}"),
            FunctionId::Ws { n } => write!(f, "ws:n={n}"),
            FunctionId::WsB { n, b } => write!(f, "wsb:n={n},b={b}"),
            FunctionId::MswB { n, b } => write!(f, "mswb:n={n},b={b}"),
            FunctionId::ReqB { n, b } => write!(f, "reqb:n={n},b={b}"),
            FunctionId::Pj { k, a } => write!(f, "pj:k={k},a={a}"),
            FunctionId::Rpj { k, a } => write!(f, "rpj:k={k},a={a}"),
        }
    }
}

impl FunctionId {
    pub fn build(&self) -> Result<BoolFn> {
        Ok(match *self {
            FunctionId::Eq { n } => zoo::eq(n)?,
            FunctionId::Req { q } => zoo::req(&BlockLayout::new(q)?)?,
            FunctionId::ModP { p, n } => zoo::mod_p(p, n)?,
            FunctionId::Ws { n } => zoo::ws(n)?,
            FunctionId::WsB { n, b } => zoo::ws_b(n, b)?,
            FunctionId::MswB { n, b } => zoo::msw_b(n, b)?,
            FunctionId::ReqB { n, b } => zoo::req_b(n, b)?,
            FunctionId::Pj { k, a } => zoo::pj_bool(k, a)?,
            FunctionId::Rpj { k, a } => zoo::rpj(k, &RpjLayout::new(a)?)?,
        })
    }
}

/// A program constructor with its parameters.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProgramId {
    /// Xor-vector OBDD for `EQ_q`.
    EqObdd { q: usize },
    /// NOBDD guessing a 1 among `n` variables.
    AnyNobdd { n: usize },
    /// Coin-tree POBDD for `EQ_q`.
    EqPobdd { q: usize },
    /// Fingerprint QOBDD for `EQ_q` with the fixture multipliers.
    EqQobdd { q: usize },
    /// Fingerprint QOBDD for `MOD_p` over `n` bits with the fixture multipliers.
    ModpQobdd { p: usize, n: usize },
    /// Layered OBDD computing `PJ_{2k-1}`.
    PjObdd { k: usize, a: usize },
    /// Its direct-mode reordering, computing `RPJ_{2k-1}`.
    RpjObdd { k: usize, a: usize },
    /// Non-commutative two-variable QOBDD.
    ControlQobdd,
}

impl FromStr for ProgramId {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let (name, map) = split_id(s)?;
        let mut p = Params { id: s, map };
        let id = match name.as_str() {
            "eq-obdd" => ProgramId::EqObdd { q: p.take("q")? },
            "any-nobdd" => ProgramId::AnyNobdd { n: p.take("n")? },
            "eq-pobdd" => ProgramId::EqPobdd { q: p.take("q")? },
            "eq-qobdd" => ProgramId::EqQobdd { q: p.take("q")? },
            "modp-qobdd" => ProgramId::ModpQobdd { p: p.take("p")?, n: p.take("n")? },
            "pj-obdd" => ProgramId::PjObdd { k: p.take("k")?, a: p.take("a")? },
            "rpj-obdd" => ProgramId::RpjObdd { k: p.take("k")?, a: p.take("a")? },
            "control-qobdd" => ProgramId::ControlQobdd,
            other => return Err(LabError::usage(format!("unknown program {other:?}"))),
        };
        p.done()?;
        Ok(id)
    }
}

impl fmt::Display for ProgramId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ProgramId::EqObdd { q } => write!(f, "eq-obdd:q={q}"),
            ProgramId::AnyNobdd { n } => write!(f, "any-nobdd:n={n}"),
            ProgramId::EqPobdd { q } => write!(f, "eq-pobdd:q={q}"),
            ProgramId::EqQobdd { q } => write!(f, "eq-qobdd:q={q}"),
            ProgramId::ModpQobdd { p, n } => write!(f, "modp-qobdd:p={p},n={n}"),
            ProgramId::PjObdd { k, a } => write!(f, "pj-obdd:k={k},a={a}"),
            ProgramId::RpjObdd { k, a } => write!(f, "rpj-obdd:k={k},a={a}"),
            ProgramId::ControlQobdd => write!(f, "control-qobdd"),
        }
    }
}

fn fixture(modulus: u64) -> Result<Vec<u64>> {
    zoo::fixture_multipliers(modulus)
        .map(|s| s.multipliers)
        .ok_or_else(|| LabError::usage(format!("no fixture multiplier set for modulus {modulus}")))
}

fn pj_k(k: usize) -> Result<usize> {
    if k == 0 {
        return Err(LabError::usage("k must be at least 1"));
    }
    Ok(2 * k - 1)
}

impl ProgramId {
    pub fn build(&self) -> Result<Program> {
        Ok(match *self {
            ProgramId::EqObdd { q } => Program::Obdd(zoo::eq_xor_obdd(q)?),
            ProgramId::AnyNobdd { n } => Program::Nobdd(zoo::any_one_nobdd(n)?),
            ProgramId::EqPobdd { q } => Program::Pobdd(zoo::coin_tree_pobdd(&zoo::eq(q)?)?),
            ProgramId::EqQobdd { q } => {
                let ks = fixture(zoo::eq_fingerprint_modulus(q))?;
                Program::Quantum(zoo::fingerprint_eq_qobdd(q, &ks)?)
            }
            ProgramId::ModpQobdd { p, n } => Program::Quantum(zoo::fingerprint_modp_qobdd(p as u64, n, &fixture(p as u64)?)?),
            ProgramId::PjObdd { k, a } => Program::Obdd(zoo::pj_2k_obdd(k, a)?),
            ProgramId::RpjObdd { k, a } => Program::Obdd(zoo::rpj_2k_obdd(k, &RpjLayout::new(a)?)?),
            ProgramId::ControlQobdd => Program::Quantum(non_commutative_control()),
        })
    }

    /// The catalogue function the program is meant to compute, if any.
    pub fn target(&self) -> Result<Option<FunctionId>> {
        Ok(match *self {
            ProgramId::EqObdd { q } | ProgramId::EqPobdd { q } | ProgramId::EqQobdd { q } => Some(FunctionId::Eq { n: q }),
            ProgramId::ModpQobdd { p, n } => Some(FunctionId::ModP { p, n }),
            ProgramId::PjObdd { k, a } => Some(FunctionId::Pj { k: pj_k(k)?, a }),
            ProgramId::RpjObdd { k, a } => Some(FunctionId::Rpj { k: pj_k(k)?, a }),
            ProgramId::AnyNobdd { .. } | ProgramId::ControlQobdd => None,
        })
    }
}

/// A built program of any kind.
#[derive(Clone, Debug)]
pub enum Program {
    Obdd(Obdd),
    Nobdd(Nobdd),
    Pobdd(Pobdd64),
    Quantum(QuantumProgram64),
}

impl Program {
    pub fn kind(&self) -> &'static str {
        match self {
            Program::Obdd(_) => "obdd",
            Program::Nobdd(_) => "nobdd",
            Program::Pobdd(_) => "pobdd",
            Program::Quantum(_) => "qobdd",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Program::Obdd(p) => p.n(),
            Program::Nobdd(p) => p.n(),
            Program::Pobdd(p) => p.n(),
            Program::Quantum(p) => p.n(),
        }
    }

    /// Width for classical programs, state dimension for quantum ones.
    pub fn width(&self) -> usize {
        match self {
            Program::Obdd(p) => p.width(),
            Program::Nobdd(p) => p.width(),
            Program::Pobdd(p) => p.width(),
            Program::Quantum(p) => p.dim(),
        }
    }

    /// Acceptance on input `index`: 0 or 1 for OBDDs and NOBDDs, a probability otherwise.
    pub fn acceptance_at(&self, index: usize) -> Result<f64> {
        Ok(match self {
            Program::Obdd(p) => p.eval_index(index) as u8 as f64,
            Program::Nobdd(p) => p.acceptance_at(index) as u8 as f64,
            Program::Pobdd(p) => p.acceptance_at(index),
            Program::Quantum(p) => p.accept_probability_at(index)?,
        })
    }

    pub fn reorder(&self, layout: &BlockLayout, mode: AddressMode) -> Result<Program> {
        Ok(match self {
            Program::Obdd(p) => Program::Obdd(reorder_obdd(p, layout, mode)?),
            Program::Nobdd(p) => Program::Nobdd(reorder_nobdd(p, layout, mode)?),
            Program::Pobdd(p) => Program::Pobdd(reorder_pobdd(p, layout, mode)?),
            Program::Quantum(p) => {
                if mode != AddressMode::Xor {
                    return Err(LabError::usage("quantum programs are reordered in xor mode only"));
                }
                Program::Quantum(xor_reorder_qobdd(p, layout)?)
            }
        })
    }

    /// Text form for classical programs, JSON for quantum ones.
    pub fn serialize(&self) -> String {
        fn text<E: obdd_core::diagrams::Edge>(p: &Leveled<E>) -> String {
            p.to_text()
        }
        match self {
            Program::Obdd(p) => text(p),
            Program::Nobdd(p) => text(p),
            Program::Pobdd(p) => text(p),
            Program::Quantum(p) => serde_json::to_string_pretty(&p.to_json()).expect("program json"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for s in ["eq:n=4", "req:q=2", "modp:p=3,n=6", "wsb:n=12,b=4", "pj:k=1,a=2", "rpj:k=3,a=2"] {
            assert_eq!(s.parse::<FunctionId>().unwrap().to_string(), s);
        }
        for s in ["eq-qobdd:q=4", "modp-qobdd:p=5,n=10", "control-qobdd", "rpj-obdd:k=1,a=2"] {
            assert_eq!(s.parse::<ProgramId>().unwrap().to_string(), s);
        }
        assert_eq!("modp:n=6,p=3".parse::<FunctionId>().unwrap().to_string(), "modp:p=3,n=6");
    }

    #[test]
    fn bad_ids() {
        assert!(matches!("eq".parse::<FunctionId>(), Err(LabError::Usage(_))));
        assert!(matches!("eq:n=4,m=2".parse::<FunctionId>(), Err(LabError::Usage(_))));
        assert!(matches!("nope:n=1".parse::<FunctionId>(), Err(LabError::Usage(_))));
        assert!(matches!("eq:n=x".parse::<FunctionId>(), Err(LabError::Usage(_))));
        let e = "modp:p=3,n=40".parse::<FunctionId>().unwrap().build().unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }
}
