//! Single experiments. Each returns a report; none writes anywhere.

use obdd_core::boolfn::{n_min, n_min_by_enumeration, n_pi, subfunction_count, Partition, ENUM_MAX_VARS};
use obdd_core::inputs::InputMode;
use obdd_core::reorder::reorder_function;
use obdd_core::{AddressMode, BlockLayout, BoolFn, VarOrder};

use crate::ids::{FunctionId, Program, ProgramId};
use crate::report::{Check, Report};
use crate::{LabError, Result};

fn parse_bits(s: &str, n: usize) -> Result<Vec<bool>> {
    let x: Vec<bool> = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '_')
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(LabError::usage(format!("input {s:?} must be a bit string"))),
        })
        .collect::<Result<_>>()?;
    if x.len() != n {
        return Err(LabError::usage(format!("input has {} bits, function has {n}", x.len())));
    }
    Ok(x)
}

fn mode_name(mode: &InputMode) -> String {
    match mode {
        InputMode::Exhaustive => "exhaustive".to_string(),
        InputMode::Sampled { count, seed } => format!("sampled:count={count},seed={seed}"),
    }
}

/// Truth table (hex, first input all zeros) or the value at one input.
pub fn eval(f: FunctionId, input: Option<&str>) -> Result<Report> {
    let table = f.build()?;
    let mut r = Report::new(format!("eval {f}"), "eval", "truth table of the catalogue function").param("function", f.to_string()).param("n", table.n());
    match input {
        Some(s) => {
            let x = parse_bits(s, table.n())?;
            r = r.param("input", s);
            r.check(Check::new("value", table.eval(&x)?, "", true));
        }
        None => {
            r.check(Check::new("ones", table.ones(), "", true));
            r.check(Check::new("truth_table_hex", table.to_hex(), "", true));
        }
    }
    Ok(r)
}

/// `N^theta` at one cut of `order`, or `N^pi` (maximum over cuts).
pub fn nsub(f: FunctionId, order: Option<&str>, cut: Option<usize>) -> Result<Report> {
    let table = f.build()?;
    let n = table.n();
    let order = match order {
        Some(s) => VarOrder::parse(s)?,
        None => VarOrder::identity(n),
    };
    let mut r = Report::new(format!("nsub {f}"), "nsub", "number of subfunctions after fixing a prefix of the order")
        .param("function", f.to_string())
        .param("order", order.to_string());
    let count = match cut {
        Some(u) => {
            r = r.param("cut", u);
            subfunction_count(&table, &Partition::new(order.clone(), u)?)?
        }
        None => n_pi(&table, &order)?,
    };
    if matches!(f, FunctionId::Eq { .. }) && order.is_identity() && cut == Some(n / 2) {
        r.claim = "N^{id}(EQ_n) at cut n/2 equals 2^{n/2}".to_string();
        let want = 1usize << (n / 2);
        r.check(Check::new("subfunctions", count, format!("== {want} (2^{{n/2}}, n={n})"), count == want));
    } else {
        r.check(Check::new("subfunctions", count, "", true));
    }
    Ok(r)
}

/// Exact `n_min` by the subset DP, cross-checked by enumeration for small `n`.
pub fn width_exact(f: FunctionId) -> Result<Report> {
    let table = f.build()?;
    let n = table.n();
    let m = n_min(&table)?;
    let mut r = Report::new(format!("width-exact {f}"), "width-exact", "minimum over orders of the largest subfunction count")
        .param("function", f.to_string())
        .param("n", n);
    match f {
        FunctionId::Req { q } => {
            r.claim = "n_min(REQ) >= 2^{q/2}".to_string();
            let bound = 1usize << (q / 2);
            r.check(Check::new("n_min", m.width, format!(">= {bound} (2^{{q/2}}, q={q})"), m.width >= bound));
        }
        _ => r.check(Check::new("n_min", m.width, "", true)),
    }
    r.check(Check::new("witness_order", m.order.to_string(), "", n_pi(&table, &m.order)? == m.width));
    if n <= ENUM_MAX_VARS {
        let e = n_min_by_enumeration(&table)?;
        r.check(Check::new("n_min_by_enumeration", e.width, format!("== {}", m.width), e.width == m.width));
    }
    Ok(r)
}

fn decided(p: &Program) -> Result<BoolFn> {
    let values = (0..1usize << p.n()).map(|i| p.acceptance_at(i).map(|a| a > 0.5)).collect::<Result<Vec<_>>>()?;
    Ok(BoolFn::from_index_fn(p.n(), |i| values[i])?)
}

/// Reorders a program and compares it with the reordered function it computes.
pub fn reorder(pid: ProgramId, layout: BlockLayout, mode: AddressMode, inputs: InputMode) -> Result<(Report, Program)> {
    let p = pid.build()?;
    if p.n() != layout.q() {
        return Err(LabError::usage(format!("{pid} reads {} variables, layout {layout} needs {}", p.n(), layout.q())));
    }
    let out = p.reorder(&layout, mode)?;
    let q = layout.q();
    let mut r = Report::new(format!("reorder {pid}"), "reorder-roundtrip", "width(out) <= q * width(in); agrees with the reordered function on allowed inputs")
        .param("program", pid.to_string())
        .param("layout", layout.to_string())
        .param("mode", mode.to_string())
        .param("inputs", mode_name(&inputs));
    let (w_in, w_out) = (p.width(), out.width());
    if matches!(p, Program::Quantum(_)) {
        r.claim = "dim(out) = q * dim(in); agrees with the reordered function on allowed inputs".to_string();
        r.check(Check::new("dimension", w_out, format!("== {} (q={q} * {w_in})", q * w_in), w_out == q * w_in));
    } else {
        r.check(Check::new("width", w_out, format!("<= {} (q={q} * {w_in})", q * w_in), w_out <= q * w_in));
    }
    let fr = reorder_function(&decided(&p)?, &layout, mode)?;
    let (mut checked, mut wrong) = (0usize, 0usize);
    let (mut min1, mut max0) = (1.0f64, 0.0f64);
    for i in inputs.indices(out.n())? {
        if let Some(v) = fr.at(i) {
            let a = out.acceptance_at(i)?;
            checked += 1;
            wrong += ((a > 0.5) != v) as usize;
            if v {
                min1 = min1.min(a);
            } else {
                max0 = max0.max(a);
            }
        }
    }
    r.check(Check::new("allowed_inputs_checked", checked, "> 0", checked > 0));
    r.check(Check::new("disagreements", wrong, "== 0", wrong == 0));
    r.check(Check::new("min_accept_on_ones", min1, "", true));
    r.check(Check::new("max_accept_on_zeros", max0, "", true));
    Ok((r, out))
}

/// Bounded-error (or exact) agreement of a program with a function.
pub fn verify(pid: ProgramId, against: Option<FunctionId>, epsilon: f64, inputs: InputMode) -> Result<Report> {
    let f = match against.or(pid.target()?) {
        Some(f) => f,
        None => return Err(LabError::usage(format!("{pid} has no default target; pass --against"))),
    };
    if !(0.0..=0.5).contains(&epsilon) {
        return Err(LabError::usage("epsilon must lie in [0, 1/2]"));
    }
    let p = pid.build()?;
    let table = f.build()?;
    if table.n() != p.n() {
        return Err(LabError::usage(format!("{pid} reads {} variables, {f} has {}", p.n(), table.n())));
    }
    let kind = if matches!(p, Program::Obdd(_)) { "equivalence" } else { "error-margin" };
    let mut r = Report::new(format!("verify {pid} against {f}"), kind, "acceptance >= 1/2 + eps on 1-inputs and <= 1/2 - eps on 0-inputs")
        .param("program", pid.to_string())
        .param("function", f.to_string())
        .param("epsilon", epsilon)
        .param("inputs", mode_name(&inputs));
    let (mut min1, mut max0, mut count) = (1.0f64, 0.0f64, 0usize);
    for i in inputs.indices(p.n())? {
        let a = p.acceptance_at(i)?;
        count += 1;
        if table.at(i) {
            min1 = min1.min(a);
        } else {
            max0 = max0.max(a);
        }
    }
    const TOL: f64 = 1e-9;
    r.check(Check::new("inputs_checked", count, "> 0", count > 0));
    r.check(Check::new("min_accept_on_ones", min1, format!(">= {}", 0.5 + epsilon), min1 >= 0.5 + epsilon - TOL));
    r.check(Check::new("max_accept_on_zeros", max0, format!("<= {}", 0.5 - epsilon), max0 <= 0.5 - epsilon + TOL));
    if let Program::Quantum(q) = &p {
        let u = q.check_unitary();
        r.check(Check::new("unitarity_defect", u.max_defect, "<= 1e-9", u.max_defect <= TOL));
    }
    Ok(r)
}
