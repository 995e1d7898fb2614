//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Set ANNIH_STRETCH=1 to run the generic
//! quintic as well.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use annih_cli::corpus::{leading_degrees, load_corpus, GoldenCase};
use annih_cli::parse::parse_equation;
use annih_core::annihilator::{annihilate, determination, reduced_family, AnnihilateOptions, DiffOperator, Engine};
use annih_core::multipoly::{parse_rational, Monomial, MultiPoly, Rational, VarContext};
use annih_core::oracle::{instantiate, numeric_determination_seeded, sample_point, verify_operator, verify_seeded, PrecisionConfig};
use annih_core::resultants::{leading_coefficient_check, discriminant};
use annih_core::shape::{Equation, EquationShape};
use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL_RESIDUAL: f64 = 1e-30;
const PRECISION_BITS: u32 = 256;
const DRAWS: usize = 3;

/// The eleven shapes of the timing table, in table order, with their orders.
const TABLE: [(&str, usize); 11] = [
    ("y^4 + a*y^3 + x", 4),
    ("y^4 + a*y^3 + b*y^2 + x", 4),
    ("y^4 + a*y^3 + b*y^2 + c*y + x", 4),
    ("y^5 + a*y + x", 4),
    ("y^5 + a*y^2 + b*y + x", 4),
    ("y^5 + a*y^3 + b*y^2 + c*y + x", 4),
    ("y^5 + a*y^4 + x", 5),
    ("y^5 + a*y^4 + b*y^3 + x", 5),
    ("y^5 + a*y^4 + b*y^3 + c*y^2 + x", 5),
    ("y^5 + a*y^4 + b*y^3 + c*y^2 + d*y + x", 5),
    ("y^6 + a*y^3 + b*y^2 + c*y + x", 5),
];

/// Rows whose full symbolic run exceeds the default budget; their order is
/// taken from an exact run at random rational parameter values.
const SPECIALIZED_ROWS: [usize; 1] = [10];

/// Exponent sets whose kernel is not recomputed per engine in criterion 10.
const HEAVY_KERNELS: [&[u32]; 2] = [&[4, 3, 2], &[4, 3, 2, 1]];

const GENERIC_QUINTIC: &str = "y^5 + a4*y^4 + a3*y^3 + a2*y^2 + a1*y + x";

struct Gate {
    failed: usize,
}

impl Gate {
    fn report(&mut self, id: &str, title: &str, elapsed: Duration, outcome: Result<String, String>) {
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {id:>2} {title} ({secs:.2}s): {detail}"),
            Err(why) => {
                self.failed += 1;
                println!("[FAIL] {id:>2} {title} ({secs:.2}s): {why}");
            }
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn within(elapsed: Duration, budget_s: f64) -> Result<(), String> {
    if elapsed.as_secs_f64() <= budget_s {
        Ok(())
    } else {
        Err(format!("took {:.1}s, budget {budget_s}s", elapsed.as_secs_f64()))
    }
}

/// Reads `c*v^e*...` sums; enough for displayed coefficients.
fn poly(ctx: &Arc<VarContext>, text: &str) -> MultiPoly {
    let src = text.replace(' ', "");
    let mut acc = MultiPoly::zero(ctx);
    let mut start = 0;
    let bytes = src.as_bytes();
    for i in 1..=bytes.len() {
        if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^') {
            acc = &acc + &term(ctx, &src[start..i]);
            start = i;
        }
    }
    acc
}

fn term(ctx: &Arc<VarContext>, t: &str) -> MultiPoly {
    let (sign, body) = match t.as_bytes()[0] {
        b'-' => (-Rational::one(), &t[1..]),
        b'+' => (Rational::one(), &t[1..]),
        _ => (Rational::one(), t),
    };
    let mut coef = sign;
    let mut exps = vec![0u32; ctx.len()];
    for factor in body.split('*') {
        if let Some(r) = parse_rational(factor) {
            coef *= r;
            continue;
        }
        let (name, e) = factor.split_once('^').map_or((factor, 1), |(n, e)| (n, e.parse().unwrap()));
        exps[ctx.index_of(name).unwrap_or_else(|| panic!("unknown variable {name}"))] += e;
    }
    MultiPoly::from_terms(ctx, [(Monomial::from_exponents(exps), coef)])
}

fn operator(vars: &[&str], coeffs_low_to_high: &[&str]) -> DiffOperator {
    let ctx = VarContext::new(vars.iter().copied()).unwrap();
    DiffOperator::from_raw("x", coeffs_low_to_high.iter().map(|c| poly(&ctx, c)).collect()).unwrap()
}

fn same_primitive_form(got: &DiffOperator, want: &DiffOperator) -> Result<(), String> {
    let want = want.remap(got.context()).map_err(|e| e.to_string())?;
    let (g, w) = (got.normalized().map_err(|e| e.to_string())?, want.normalized().map_err(|e| e.to_string())?);
    if g == w {
        Ok(())
    } else {
        Err(format!("operator differs:\n  got  {g}\n  want {w}"))
    }
}

fn proportional(got: &DiffOperator, want: &DiffOperator) -> Result<(), String> {
    let want = want.remap(got.context()).map_err(|e| e.to_string())?;
    if want.proportional_to(got) {
        Ok(())
    } else {
        Err("operator is not proportional to the expected one".into())
    }
}

fn run(text: &str) -> Result<(Equation, DiffOperator, Duration), String> {
    let eq = parse_equation(text).map_err(|e| e.to_string())?;
    let (res, elapsed) = timed(|| annihilate(&eq, &AnnihilateOptions::default()));
    let (op, _) = res.map_err(|e| e.to_string())?;
    Ok((eq, op, elapsed))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../golden")
}

fn golden(cases: &[GoldenCase], name: &str) -> Result<DiffOperator, String> {
    let case = cases.iter().find(|c| c.name == name).ok_or(format!("golden case {name} missing"))?;
    let doc = case.expected.as_ref().ok_or(format!("golden case {name} has no operator"))?;
    doc.operator().map_err(|e| e.to_string())
}

/// Computed operators, keyed by equation text.
type Cache = BTreeMap<String, (Equation, DiffOperator, Duration)>;

fn key(text: &str) -> String {
    parse_equation(text).map_or_else(|_| text.to_string(), |eq| eq.to_text())
}

fn cached<'a>(cache: &'a mut Cache, text: &str) -> Result<&'a (Equation, DiffOperator, Duration), String> {
    let k = key(text);
    if !cache.contains_key(&k) {
        let r = run(text)?;
        cache.insert(k.clone(), r);
    }
    Ok(&cache[&k])
}

fn criterion_1(cache: &mut Cache) -> (Result<String, String>, Duration) {
    let want = operator(&["a", "x"], &["-1155", "31875*x", "73125*x^2", "31250*x^3", "256*a^5 + 3125*x^4"]);
    match cached(cache, "y^5 + a*y + x") {
        Ok((_, op, t)) => {
            let r = same_primitive_form(op, &want).and_then(|_| within(*t, 10.0)).map(|_| format!("{op}"));
            (r, *t)
        }
        Err(e) => (Err(e), Duration::ZERO),
    }
}

fn criterion_2(cache: &mut Cache) -> (Result<String, String>, Duration) {
    let want = operator(
        &["a", "x"],
        &["0", "-360", "60*a^4 - 2160*x", "108*a^4*x - 1664*x^2", "27*a^4*x^2 - 256*x^3"],
    );
    match cached(cache, "y^4 + a*y^3 + x") {
        Ok((_, op, t)) => (same_primitive_form(op, &want).and_then(|_| within(*t, 5.0)).map(|_| format!("{op}")), *t),
        Err(e) => (Err(e), Duration::ZERO),
    }
}

fn criterion_3(cache: &mut Cache, cases: &[GoldenCase]) -> (Result<String, String>, Duration) {
    let text = "y^5 + 2*y^4 - 3*y^3 + y^2 + 5*y + x = 0";
    let want = match golden(cases, "numeric_quintic") {
        Ok(w) => w,
        Err(e) => return (Err(e), Duration::ZERO),
    };
    match cached(cache, text) {
        Ok((_, op, t)) => (
            proportional(op, &want).and_then(|_| within(*t, 120.0)).map(|_| format!("order {}, {} terms", op.order(), op.total_terms())),
            *t,
        ),
        Err(e) => (Err(e), Duration::ZERO),
    }
}

fn criterion_4(cache: &mut Cache) -> (Result<String, String>, Duration) {
    let want = operator(
        &["a", "x"],
        &[
            "0",
            "1344",
            "168*a^5 + 14100*x",
            "624*a^5*x + 19500*x^2",
            "384*a^5*x^2 + 6875*x^3",
            "256/5*a^5*x^3 + 625*x^4",
        ],
    );
    match cached(cache, "y^5 + a*y^4 + x") {
        Ok((_, op, t)) => {
            let lead = poly(op.context(), "256*a^5*x^3 + 3125*x^4");
            let r = proportional(op, &want)
                .and_then(|_| {
                    let got = op.normalized().map_err(|e| e.to_string())?;
                    if got.leading_coefficient() == &lead {
                        Ok(())
                    } else {
                        Err(format!("primitive leading coefficient is {}", got.leading_coefficient()))
                    }
                })
                .and_then(|_| within(*t, 60.0))
                .map(|_| format!("{op}"));
            (r, *t)
        }
        Err(e) => (Err(e), Duration::ZERO),
    }
}

fn criterion_5(cache: &mut Cache, cases: &[GoldenCase]) -> (Result<String, String>, Duration) {
    let want = match golden(cases, "sextic_a2_b1") {
        Ok(w) => w,
        Err(e) => return (Err(e), Duration::ZERO),
    };
    match cached(cache, "y^6 + a*y^2 + b*y + x") {
        Ok((_, op, t)) => {
            let ctx = op.context().clone();
            let f1 = poly(
                &ctx,
                "-255664128*a^10 + 395740000*a^5*b^4 + 1599609375*b^8 + 148780800*a^6*b^2*x + 2859609375*a*b^6*x \
                 - 499654656*a^7*x^2 - 1573425000*a^2*b^4*x^2 + 1051704000*a^3*b^2*x^3 + 16796160*a^4*x^4",
            );
            let f2 = poly(
                &ctx,
                "256*a^5*b^2 + 3125*b^6 - 1024*a^6*x - 22500*a*b^4*x + 43200*a^2*b^2*x^2 - 13824*a^3*x^3 - 46656*x^5",
            );
            let product = &f1 * &f2;
            let r = proportional(op, &want)
                .and_then(|_| {
                    let lead = op.leading_coefficient();
                    if lead == &product || lead == &product.neg() {
                        Ok(())
                    } else {
                        Err("leading coefficient is not the product of the displayed factors".into())
                    }
                })
                .and_then(|_| within(*t, 1800.0))
                .map(|_| format!("order {}, {} terms", op.order(), op.total_terms()));
            (r, *t)
        }
        Err(e) => (Err(e), Duration::ZERO),
    }
}

fn subsets(m: u32) -> Vec<Vec<u32>> {
    (0..1u32 << (m - 1))
        .map(|mask| (1..m).rev().filter(|e| mask & (1 << (e - 1)) != 0).collect())
        .collect()
}

fn specialized_order(eq: &Equation) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (values, _) = sample_point(eq, &mut rng).map_err(|e| e.to_string())?;
    let numeric = instantiate(eq, &values).map_err(|e| e.to_string())?;
    let (op, _) = annihilate(&numeric, &AnnihilateOptions::default()).map_err(|e| e.to_string())?;
    Ok(op.order())
}

fn criterion_6(cache: &mut Cache) -> (Result<String, String>, Duration) {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut orders = Vec::new();
    for (row, (text, want)) in TABLE.iter().enumerate() {
        let row = row + 1;
        let eq = parse_equation(text).unwrap();
        let got = if SPECIALIZED_ROWS.contains(&row) {
            specialized_order(&eq)
        } else {
            cached(cache, text).map(|(_, op, _)| op.order())
        };
        match got {
            Ok(o) if o == *want && determination(&eq.shape) == *want => orders.push(o),
            Ok(o) => problems.push(format!("row {row}: order {o}, determination {}, want {want}", determination(&eq.shape))),
            Err(e) => problems.push(format!("row {row}: {e}")),
        }
    }
    let cfg = PrecisionConfig::with_bits(PRECISION_BITS);
    let mut shapes = 0;
    for m in 2..=6 {
        for exps in subsets(m) {
            let shape = EquationShape::new(m, exps.clone()).unwrap();
            shapes += 1;
            match numeric_determination_seeded(&shape, &cfg, 2, 3) {
                Ok(r) if r == determination(&shape) => {}
                Ok(r) => problems.push(format!("numeric determination {r} for m={m} {exps:?}")),
                Err(e) => problems.push(format!("numeric determination m={m} {exps:?}: {e}")),
            }
        }
    }
    let r = if problems.is_empty() {
        Ok(format!(
            "orders {orders:?} (row {} at specialized parameters); numeric determination agrees on {shapes} shapes",
            SPECIALIZED_ROWS[0]
        ))
    } else {
        Err(problems.join("; "))
    };
    (r, start.elapsed())
}

fn criterion_7(cache: &mut Cache) -> (Result<String, String>, Duration) {
    let start = Instant::now();
    let want: [(usize, &[u32]); 6] =
        [(2, &[4, 6, 7]), (3, &[4, 7, 7, 6]), (4, &[4, 5]), (5, &[6, 13, 11]), (6, &[7, 15, 13, 11]), (7, &[4, 5])];
    let mut problems = Vec::new();
    for (row, degs) in want {
        match cached(cache, TABLE[row - 1].0) {
            Ok((eq, op, _)) => {
                let got = leading_degrees(op, eq);
                if got != degs {
                    problems.push(format!("row {row}: {got:?} != {degs:?}"));
                }
            }
            Err(e) => problems.push(format!("row {row}: {e}")),
        }
    }
    let r = if problems.is_empty() { Ok("rows 2-7 match".into()) } else { Err(problems.join("; ")) };
    (r, start.elapsed())
}

/// Every golden case that is not slow or was already computed for another
/// criterion.
fn corpus_operators(cache: &mut Cache, cases: &[GoldenCase]) -> Result<Vec<(String, (Equation, DiffOperator, Duration))>, String> {
    let mut out = Vec::new();
    let wanted: Vec<&GoldenCase> =
        cases.iter().filter(|c| !c.meta.slow || cache.contains_key(&key(&c.equation_text))).collect();
    for c in wanted {
        out.push((c.name.clone(), cached(cache, &c.equation_text)?.clone()));
    }
    Ok(out)
}

fn criterion_8(cache: &mut Cache, cases: &[GoldenCase]) -> (Result<String, String>, Duration) {
    let start = Instant::now();
    let ops = match corpus_operators(cache, cases) {
        Ok(o) => o,
        Err(e) => return (Err(e), start.elapsed()),
    };
    let mut problems = Vec::new();
    for (name, (eq, op, _)) in &ops {
        let rep = discriminant(eq).map_err(|e| e.to_string()).and_then(|d| leading_coefficient_check(op, &d).map_err(|e| e.to_string()));
        match rep {
            Ok(r) if r.divisible && r.support_equal => {}
            Ok(r) => problems.push(format!("{name}: divisible {}, support equal {}", r.divisible, r.support_equal)),
            Err(e) => problems.push(format!("{name}: {e}")),
        }
    }
    let r = if problems.is_empty() { Ok(format!("{} corpus cases", ops.len())) } else { Err(problems.join("; ")) };
    (r, start.elapsed())
}

fn criterion_9(cache: &mut Cache, cases: &[GoldenCase]) -> (Result<String, String>, Duration) {
    let start = Instant::now();
    let ops = match corpus_operators(cache, cases) {
        Ok(o) => o,
        Err(e) => return (Err(e), start.elapsed()),
    };
    let cfg = PrecisionConfig::with_bits(PRECISION_BITS);
    let mut problems = Vec::new();
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for (name, (eq, op, _)) in &ops {
        let (reports, t) = timed(|| verify_seeded(op, eq, DRAWS, 1, &cfg));
        slowest = slowest.max(t);
        match reports {
            Ok(rs) => {
                for r in &rs {
                    worst = worst.max(r.max_residual);
                    if !r.passed || r.max_residual >= TOL_RESIDUAL {
                        problems.push(format!("{name}: residual {:.2e}", r.max_residual));
                    }
                }
            }
            Err(e) => problems.push(format!("{name}: {e}")),
        }
        if let Err(e) = within(t, 5.0) {
            problems.push(format!("{name}: {e}"));
        }
    }
    // a corrupted operator must be caught
    let (eq, op, _) = &cache[&key("y^5 + a*y + x")];
    let mut coeffs = op.coeffs().to_vec();
    coeffs[0] = &coeffs[0] + &MultiPoly::one(op.context());
    let bad = DiffOperator::from_raw("x", coeffs).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mutant = sample_point(eq, &mut rng).map_err(|e| e.to_string()).and_then(|(values, x0)| {
        verify_operator(&bad, eq, &values, &x0, &cfg).map_err(|e| e.to_string())
    });
    match mutant {
        Ok(r) if !r.passed => {}
        Ok(r) => problems.push(format!("mutated operator passed with residual {:.2e}", r.max_residual)),
        Err(e) => problems.push(format!("mutant: {e}")),
    }
    let r = if problems.is_empty() {
        Ok(format!(
            "{} cases x {DRAWS} draws, worst residual {worst:.2e}, slowest {:.2}s; mutant rejected",
            ops.len(),
            slowest.as_secs_f64()
        ))
    } else {
        Err(problems.join("; "))
    };
    (r, start.elapsed())
}

fn criterion_10() -> (Result<String, String>, Duration) {
    let start = Instant::now();
    let mut problems = Vec::new();
    let (mut families, mut operators) = (0, 0);
    for m in 2..=5 {
        for exps in subsets(m) {
            let eq = Equation::symbolic(m, exps.clone()).unwrap();
            let (a, b) = (reduced_family(&eq, Engine::Buchberger), reduced_family(&eq, Engine::Cauchy));
            match (a, b) {
                (Ok(a), Ok(b)) if a == b => families += 1,
                (Ok(_), Ok(_)) => problems.push(format!("families differ for m={m} {exps:?}")),
                (a, b) => problems.push(format!("m={m} {exps:?}: {:?} / {:?}", a.err(), b.err())),
            }
            // The heaviest quintic kernels are the same deterministic
            // computation on equal families; run both engines on the rest.
            if HEAVY_KERNELS.contains(&exps.as_slice()) {
                continue;
            }
            let a = annihilate(&eq, &AnnihilateOptions { engine: Engine::Buchberger });
            let b = annihilate(&eq, &AnnihilateOptions { engine: Engine::Cauchy });
            match (a, b) {
                (Ok((a, _)), Ok((b, _))) if a == b => operators += 1,
                (Ok(_), Ok(_)) => problems.push(format!("operators differ for m={m} {exps:?}")),
                (a, b) => problems.push(format!("m={m} {exps:?}: {:?} / {:?}", a.err(), b.err())),
            }
        }
    }
    let r = if problems.is_empty() {
        Ok(format!("{families} families and {operators} operators identical"))
    } else {
        Err(problems.join("; "))
    };
    (r, start.elapsed())
}

fn criterion_11() -> (Result<String, String>, Duration) {
    let start = Instant::now();
    let r = (|| {
        let (eq, op, t) = run(GENERIC_QUINTIC)?;
        let op = op.normalized().map_err(|e| e.to_string())?;
        let nonzero = op.coeffs().iter().filter(|c| !c.is_zero()).count();
        let terms = op.total_terms();
        let largest = op
            .coeffs()
            .iter()
            .flat_map(|c| c.terms().iter().map(|(_, q)| q.numer().abs()))
            .max()
            .unwrap();
        let x = op.context().index_of("x").unwrap();
        let deg_x = op.leading_coefficient().degree_in(x);
        let d = discriminant(&eq).map_err(|e| e.to_string())?;
        let rep = leading_coefficient_check(&op, &d).map_err(|e| e.to_string())?;
        let cof = rep.cofactor.as_ref().map(|c| (c.len(), c.total_degree()));
        let summary = format!(
            "{nonzero} coefficients, {terms} monomials, largest {largest}, deg_x {deg_x}, cofactor {cof:?}, {:.0}s",
            t.as_secs_f64()
        );
        let ok = nonzero == 5
            && terms == 4306
            && largest.to_string() == "2739594525000"
            && deg_x == 7
            && rep.divisible
            && cof == Some((264, 15))
            && t.as_secs_f64() <= 4.0 * 3600.0;
        if ok {
            Ok(summary)
        } else {
            Err(summary)
        }
    })();
    (r, start.elapsed())
}

fn main() {
    // `cargo test` passes libtest flags; a name filter that excludes us is honoured.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return;
    }
    let cases = load_corpus(&golden_dir()).expect("golden corpus loads");
    let mut cache = Cache::new();
    let mut gate = Gate { failed: 0 };
    let checks: Vec<(&str, &str)> = vec![
        ("1", "trinomial quintic operator"),
        ("2", "quartic y^4 + a*y^3 + x operator"),
        ("3", "numeric quintic operator"),
        ("4", "quintic y^5 + a*y^4 + x operator"),
        ("5", "tetranomial sextic operator"),
        ("6", "orders and determinations"),
        ("7", "leading coefficient partial degrees"),
        ("8", "discriminant divides leading coefficient"),
        ("9", "numeric verification of the corpus"),
        ("10", "Buchberger and Cauchy engines agree"),
    ];
    for (id, title) in checks {
        let (r, t) = match id {
            "1" => criterion_1(&mut cache),
            "2" => criterion_2(&mut cache),
            "3" => criterion_3(&mut cache, &cases),
            "4" => criterion_4(&mut cache),
            "5" => criterion_5(&mut cache, &cases),
            "6" => criterion_6(&mut cache),
            "7" => criterion_7(&mut cache),
            "8" => criterion_8(&mut cache, &cases),
            "9" => criterion_9(&mut cache, &cases),
            _ => criterion_10(),
        };
        gate.report(id, title, t, r);
    }
    if std::env::var("ANNIH_STRETCH").is_ok_and(|v| v == "1") {
        let (r, t) = criterion_11();
        gate.report("11", "generic quintic (stretch)", t, r);
    } else {
        println!("[SKIP] 11 generic quintic (stretch): set ANNIH_STRETCH=1");
    }
    println!("acceptance: {} failed", gate.failed);
    if gate.failed > 0 {
        std::process::exit(1);
    }
}
