//! Named suites. `paper-core` runs every acceptance criterion, `quick` a
//! fast subset of it.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use obdd_core::boolfn::{assignment, n_min, n_min_by_enumeration, subfunction_count, Partition};
use obdd_core::diagrams::{build_binary_tree_obdd, is_commutative, Edge, Leveled, Weight};
use obdd_core::qobdd::{computes_with_bounded_error, non_commutative_control};
use obdd_core::reorder::{is_allowed, reorder_function, reorder_nobdd, reorder_obdd, reorder_pobdd, totalize, xor_reorder_qobdd};
use obdd_core::zoo::{self, RpjLayout};
use obdd_core::{AddressMode, BlockLayout, BoolFn, Error, PartialBoolFn, QuantumProgram64, VarOrder};

use crate::report::{emit_suite, Check, Format, Report, SuiteReport};
use crate::{LabError, Result};

const TOL: f64 = 1e-9;
const SEED: u64 = 0x5eed;

pub type Criterion = fn() -> Result<Report>;

/// `(id, criterion)` pairs of the full suite, in order.
pub fn criteria() -> Vec<(&'static str, Criterion)> {
    vec![("A1", a1), ("A2", a2), ("A3", a3), ("A4", a4), ("A5", a5), ("A6", a6), ("A7", a7), ("A8", a8), ("A9", a9)]
}

pub const QUICK: [&str; 3] = ["A1", "A4", "A9"];

pub fn suite_ids(suite: &str) -> Result<Vec<&'static str>> {
    match suite {
        "paper-core" => Ok(criteria().into_iter().map(|c| c.0).collect()),
        "quick" => Ok(QUICK.to_vec()),
        "" => Err(LabError::usage("empty suite id")),
        other => Err(LabError::usage(format!("unknown suite {other:?}, expected paper-core|quick"))),
    }
}

/// Runs one criterion; an error inside it becomes a failing report.
pub fn run_criterion(id: &str, timing: bool) -> Result<Report> {
    let (_, f) = criteria().into_iter().find(|c| c.0 == id).ok_or_else(|| LabError::usage(format!("unknown criterion {id:?}")))?;
    let start = Instant::now();
    let mut r = match f() {
        Ok(r) => r,
        Err(e) => {
            let mut r = Report::new(id, "criterion", "criterion raised an error");
            r.check(Check::new("error", e.to_string(), "no error", false));
            r
        }
    };
    if timing {
        r.duration_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(r)
}

pub fn run_suite(suite: &str, timing: bool) -> Result<SuiteReport> {
    let start = Instant::now();
    let reports = suite_ids(suite)?.into_iter().map(|id| run_criterion(id, timing)).collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.pass);
    Ok(SuiteReport { suite: suite.to_string(), reports, pass, duration_ms: timing.then(|| start.elapsed().as_millis() as u64) })
}

fn criterion(id: &str, claim: &str) -> Report {
    Report::new(id, "criterion", claim)
}

fn fixture(modulus: u64) -> Result<zoo::MultiplierSet> {
    zoo::fixture_multipliers(modulus).ok_or_else(|| LabError::usage(format!("no fixture multiplier set for modulus {modulus}")))
}

fn fingerprint_eq(q: usize) -> Result<(QuantumProgram64, zoo::MultiplierSet)> {
    let set = fixture(zoo::eq_fingerprint_modulus(q))?;
    Ok((zoo::fingerprint_eq_qobdd(q, &set.multipliers)?, set))
}

fn a1() -> Result<Report> {
    let mut r = criterion("A1", "N^{id}(EQ_n) at cut n/2 equals 2^{n/2}").param("n", [2, 4, 6, 8]);
    for n in [2usize, 4, 6, 8] {
        let c = subfunction_count(&zoo::eq(n)?, &Partition::new(VarOrder::identity(n), n / 2)?)?;
        r.check(Check::new(format!("eq n={n}"), c, format!("== {}", 1 << (n / 2)), c == 1 << (n / 2)));
    }
    Ok(r)
}

fn a2() -> Result<Report> {
    let mut r = criterion("A2", "n_min(REQ) >= 2^{q/2}").param("q", [2, 4]);
    let f = zoo::req(&BlockLayout::new(2)?)?;
    let e = n_min_by_enumeration(&f)?.width;
    r.check(Check::new("q=2 n_min (all 4! orders)", e, ">= 2", e >= 2));
    let d = n_min(&f)?.width;
    r.check(Check::new("q=2 subset DP", d, format!("== {e}"), d == e));
    let d = n_min(&zoo::req(&BlockLayout::new(4)?)?)?.width;
    r.check(Check::new("q=4 n_min (subset DP, n=12)", d, ">= 4", d >= 4));
    Ok(r)
}

fn a3() -> Result<Report> {
    let mut r = criterion("A3", "xor reordering of the EQ fingerprint has dim q * dim(in); acceptance 1 on 1-inputs, <= 1/2 - eps on 0-inputs")
        .param("q", [2, 4]);
    for q in [2usize, 4] {
        let layout = BlockLayout::new(q)?;
        let (p, set) = fingerprint_eq(q)?;
        let out = xor_reorder_qobdd(&p, &layout)?;
        r.check(Check::new(format!("q={q} dimension"), out.dim(), format!("== {} (q * {})", q * p.dim(), p.dim()), out.dim() == q * p.dim()));
        let fr = reorder_function(&zoo::eq(q)?, &layout, AddressMode::Xor)?;
        let (mut min1, mut max0, mut count) = (1.0f64, 0.0f64, 0usize);
        for i in 0..1usize << layout.n() {
            if let Some(v) = fr.at(i) {
                let a = out.accept_probability_at(i)?;
                count += 1;
                if v {
                    min1 = min1.min(a);
                } else {
                    max0 = max0.max(a);
                }
            }
        }
        let eps = 0.5 - set.worst;
        r.check(Check::new(format!("q={q} allowed inputs"), count, format!("== {}", fr.defined_count()), count == fr.defined_count()));
        r.check(Check::new(format!("q={q} min acceptance on 1-inputs"), min1, "== 1 (+-1e-9)", (min1 - 1.0).abs() <= TOL));
        r.check(Check::new(
            format!("q={q} max acceptance on 0-inputs"),
            max0,
            format!("<= 1/2 - eps, eps = {eps:.6} (multipliers {:?})", set.multipliers),
            eps > 0.0 && max0 <= 0.5 - eps + TOL,
        ));
    }
    Ok(r)
}

fn a4() -> Result<Report> {
    let mut r = criterion("A4", "totalize(reordered EQ_q, reordered fingerprint program) equals REQ bitwise").param("q", [2, 4]);
    for q in [2usize, 4] {
        let layout = BlockLayout::new(q)?;
        let (p, _) = fingerprint_eq(q)?;
        let out = xor_reorder_qobdd(&p, &layout)?;
        let total = totalize(&reorder_function(&zoo::eq(q)?, &layout, AddressMode::Xor)?, &out)?;
        let req = zoo::req(&layout)?;
        let diff = (0..1usize << layout.n()).filter(|&i| total.at(i) != req.at(i)).count();
        r.check(Check::new(format!("q={q} differing inputs"), diff, format!("== 0 of {}", 1usize << layout.n()), diff == 0));
    }
    Ok(r)
}

const A5_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn a5() -> Result<Report> {
    let mut r = criterion("A5", "MOD_p fingerprint: acceptance 1 on weights = 0 mod p, <= 1/3 otherwise, t <= 4 ceil(log2 p)").param("p", A5_PRIMES);
    for p in A5_PRIMES {
        let set = fixture(p)?;
        let t = set.multipliers.len();
        let t_max = 4 * (64 - (p - 1).leading_zeros()) as usize;
        r.check(Check::new(format!("p={p} t"), t, format!("<= {t_max}"), t <= t_max));
        let n = 2 * p as usize;
        let prog: QuantumProgram64 = zoo::fingerprint_modp_qobdd(p, n, &set.multipliers)?;
        r.check(Check::new(format!("p={p} dimension"), prog.dim(), format!("== 2t = {}", 2 * t), prog.dim() == 2 * t));
        let (mut min1, mut max0) = (1.0f64, 0.0f64);
        for w in 0..=n {
            let x: Vec<bool> = (0..n).map(|i| i < w).collect();
            let a = prog.accept_probability(&x)?;
            if w as u64 % p == 0 {
                min1 = min1.min(a);
            } else {
                max0 = max0.max(a);
            }
        }
        r.check(Check::new(format!("p={p} min acceptance, weight = 0 mod p"), min1, "== 1 (+-1e-9)", (min1 - 1.0).abs() <= TOL));
        r.check(Check::new(format!("p={p} max acceptance, other weights"), max0, "<= 1/3", max0 <= 1.0 / 3.0 + TOL));
    }
    Ok(r)
}

/// Agreement of a reordered program with the reordered function on the given inputs.
fn disagreements<E: Edge>(p: &Leveled<E>, fr: &PartialBoolFn, inputs: &[usize]) -> Result<(usize, usize)> {
    let mut wrong = 0;
    for &i in inputs {
        let a = p.acceptance(&assignment(i, p.n()))?.decides_one();
        wrong += (fr.at(i) != Some(a)) as usize;
    }
    Ok((inputs.len(), wrong))
}

fn a6() -> Result<Report> {
    let mut r = criterion("A6", "classical reorderings have width <= q * d(q) and agree with the reordered function").param("q", [2, 4]);
    for q in [2usize, 4] {
        let layout = BlockLayout::new(q)?;
        let f = zoo::eq(q)?;
        let obdd = zoo::eq_xor_obdd(q)?;
        let nobdd = zoo::any_one_nobdd(q)?;
        let any = nobdd.truth_table()?;
        let pobdd = zoo::coin_tree_pobdd::<f64>(&f)?;
        for mode in [AddressMode::Direct, AddressMode::Xor] {
            let allowed: Vec<usize> =
                (0..1usize << layout.n()).filter(|&i| is_allowed(&layout, &assignment(i, layout.n()), mode).unwrap_or(false)).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            let sampled: Vec<usize> = (0..10_000).map(|_| allowed[rng.gen_range(0..allowed.len())]).collect();
            let fr = reorder_function(&f, &layout, mode)?;
            let fr_any = reorder_function(&any, &layout, mode)?;
            let mut record = |name: &str, w_in: usize, w_out: usize, fr: &PartialBoolFn, res: (usize, usize), res2: (usize, usize)| {
                let tag = format!("q={q} {mode} {name}");
                r.check(Check::new(format!("{tag} width"), w_out, format!("<= {} (q * {w_in})", q * w_in), w_out <= q * w_in));
                r.check(Check::new(
                    format!("{tag} disagreements, all allowed"),
                    res.1,
                    format!("== 0 of {} (defined {})", res.0, fr.defined_count()),
                    res.1 == 0 && res.0 == fr.defined_count(),
                ));
                if q == 4 {
                    r.check(Check::new(format!("{tag} disagreements, sampled"), res2.1, format!("== 0 of {}", res2.0), res2.1 == 0));
                }
            };
            let out = reorder_obdd(&obdd, &layout, mode)?;
            record("obdd", obdd.width(), out.width(), &fr, disagreements(&out, &fr, &allowed)?, disagreements(&out, &fr, &sampled)?);
            let out = reorder_nobdd(&nobdd, &layout, mode)?;
            record("nobdd", nobdd.width(), out.width(), &fr_any, disagreements(&out, &fr_any, &allowed)?, disagreements(&out, &fr_any, &sampled)?);
            let out = reorder_pobdd(&pobdd, &layout, mode)?;
            record("pobdd", pobdd.width(), out.width(), &fr, disagreements(&out, &fr, &allowed)?, disagreements(&out, &fr, &sampled)?);
        }
    }
    Ok(r)
}

fn a7() -> Result<Report> {
    let mut r = criterion("A7", "the 2k-layer OBDD computes PJ_{2k-1}, is commutative, and its reordering computes RPJ; width <= (2a)(a+1) b")
        .param("a", 2)
        .param("k", [1, 2]);
    let a = 2usize;
    let structural = 2 * a * (a + 1);
    for k in [1usize, 2] {
        let p = zoo::pj_2k_obdd(k, a)?;
        let f = zoo::pj_bool(2 * k - 1, a)?;
        let diff = (0..1usize << f.n()).filter(|&i| p.eval_index(i) != f.at(i)).count();
        r.check(Check::new(format!("k={k} differing inputs"), diff, format!("== 0 of {}", 1usize << f.n()), diff == 0));
        let comm = is_commutative(&p, 1000, SEED)?;
        let perms: usize = (1..=p.n()).product();
        r.check(Check::new(format!("k={k} commutative"), comm, format!("all {perms} position permutations"), comm));
        r.check(Check::new(format!("k={k} width"), p.width(), format!("<= {structural}"), p.width() <= structural));
    }
    let layout = RpjLayout::new(a)?;
    let p = zoo::rpj_2k_obdd(1, &layout)?;
    let f = zoo::rpj(1, &layout)?;
    let diff = (0..1usize << f.n()).filter(|&i| p.eval_index(i) != f.at(i)).count();
    r.check(Check::new("rpj k=1 differing inputs", diff, format!("== 0 of {}", 1usize << f.n()), diff == 0));
    let bound = structural * layout.b();
    r.check(Check::new("rpj k=1 width", p.width(), format!("<= {bound} ((2a)(a+1) b, b={})", layout.b()), p.width() <= bound));
    Ok(r)
}

fn quantum_programs() -> Result<Vec<(String, QuantumProgram64)>> {
    let mut v = Vec::new();
    for q in [2usize, 4, 8] {
        let (p, _) = fingerprint_eq(q)?;
        if q <= 4 {
            v.push((format!("xor-reordered eq q={q}"), xor_reorder_qobdd(&p, &BlockLayout::new(q)?)?));
        }
        v.push((format!("eq q={q}"), p));
    }
    for p in A5_PRIMES {
        v.push((format!("modp p={p}"), zoo::fingerprint_modp_qobdd(p, 2 * p as usize, &fixture(p)?.multipliers)?));
    }
    v.push(("control".to_string(), non_commutative_control()));
    Ok(v)
}

fn random_fn(n: usize, rng: &mut ChaCha8Rng) -> Result<BoolFn> {
    Ok(BoolFn::from_index_fn(n, |_| rng.gen())?)
}

fn a8() -> Result<Report> {
    let mut r = criterion("A8", "unitarity, norm conservation, padding independence, DP = enumeration, deterministic reports");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut defect, mut drift, mut programs) = (0.0f64, 0.0f64, 0usize);
    for (_, p) in quantum_programs()? {
        programs += 1;
        defect = defect.max(p.check_unitary().max_defect);
        for _ in 0..100 {
            let x: Vec<bool> = (0..p.n()).map(|_| rng.gen()).collect();
            for norm in p.step_norms(&x)? {
                drift = drift.max((norm - 1.0).abs());
            }
        }
    }
    r.check(Check::new("max unitarity defect", defect, format!("<= 1e-9 over {programs} programs"), defect <= TOL));
    r.check(Check::new("max per-step norm drift", drift, "<= 1e-9 over 100 inputs per program", drift <= TOL));

    let padded = [
        ("wsb n=12 b=4", zoo::ws_b(12, 4)?, zoo::ws_b_padding(12, 4)?),
        ("mswb n=12 b=4", zoo::msw_b(12, 4)?, zoo::msw_b_padding(12, 4)?),
        ("reqb n=12 b=4", zoo::req_b(12, 4)?, zoo::req_b_padding(12, 4)?),
    ];
    for (name, f, pad) in &padded {
        let changed = (0..1000)
            .filter(|_| {
                let i = rng.gen_range(0..1usize << f.n());
                let v = pad[rng.gen_range(0..pad.len())];
                f.at(i) != f.at(i ^ (1 << (f.n() - v)))
            })
            .count();
        r.check(Check::new(format!("{name} padding flips changing the value"), changed, "== 0 of 1000", changed == 0));
    }

    let mut mismatched = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=6);
        let f = random_fn(n, &mut rng)?;
        mismatched += (n_min(&f)?.width != n_min_by_enumeration(&f)?.width) as usize;
    }
    r.check(Check::new("DP vs enumeration mismatches", mismatched, "== 0 of 50 (n <= 6)", mismatched == 0));

    let first = emit_suite(&run_suite("quick", false)?, Format::Json);
    let second = emit_suite(&run_suite("quick", false)?, Format::Json);
    r.check(Check::new("run-twice byte equality (suite quick)", first == second, "true", first == second));
    Ok(r)
}

fn a9() -> Result<Report> {
    let mut r = criterion("A9", "non-commutative programs are rejected; the EQ fingerprint does not compute NOT EQ");
    let control = non_commutative_control::<f64>();
    let layout = BlockLayout::new(2)?;
    let rejected = matches!(xor_reorder_qobdd(&control, &layout), Err(Error::NotCommutative(_)));
    r.check(Check::new("quantum control rejected by xor reordering", rejected, "true", rejected));
    let tree = build_binary_tree_obdd(&BoolFn::from_fn(2, |x| x[0] && !x[1])?, &[1, 2])?;
    for mode in [AddressMode::Direct, AddressMode::Xor] {
        let rejected = matches!(reorder_obdd(&tree, &layout, mode), Err(Error::NotCommutative(_)));
        r.check(Check::new(format!("position-keyed OBDD rejected ({mode})"), rejected, "true", rejected));
    }
    let (p, _) = fingerprint_eq(4)?;
    let v = computes_with_bounded_error(&p, &zoo::eq(4)?.negate(), 0.0)?;
    r.check(Check::new("EQ fingerprint against NOT EQ passes", v.pass, "false", !v.pass));
    Ok(r)
}
