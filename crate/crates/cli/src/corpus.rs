//! Golden cases: `DIR/<name>/equation.txt`, optional `operator.json` and
//! `meta.json`.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use annih_core::annihilator::{annihilate, AnnihilateOptions, DiffOperator};
use annih_core::shape::Equation;
use serde::{Deserialize, Serialize};

use crate::document::OperatorDocument;
use crate::parse::parse_equation;

/// Optional expectations beyond the operator itself.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CaseMeta {
    #[serde(default)]
    pub order: Option<usize>,
    /// Partial degrees of the leading coefficient in `x`, then each parameter.
    #[serde(default)]
    pub leading_degrees: Option<Vec<u32>>,
    #[serde(default)]
    pub time_budget_s: Option<f64>,
    /// Skipped unless slow cases are requested.
    #[serde(default)]
    pub slow: bool,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct GoldenCase {
    pub name: String,
    pub dir: PathBuf,
    pub equation_text: String,
    pub expected: Option<OperatorDocument>,
    pub meta: CaseMeta,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CaseStatus {
    Pass,
    Fail(Vec<String>),
    Skipped(String),
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub name: String,
    pub status: CaseStatus,
    pub order: Option<usize>,
    pub elapsed: Duration,
}

/// Partial degrees of `op`'s leading coefficient in `x` and then in each
/// symbolic coefficient of `eq`.
pub fn leading_degrees(op: &DiffOperator, eq: &Equation) -> Vec<u32> {
    let lead = op.leading_coefficient();
    let ctx = op.context();
    let mut out = Vec::new();
    let deg_of = |name: &str| ctx.index_of(name).map_or(0, |i| lead.degree_in(i));
    out.push(deg_of("x"));
    for name in eq.binding.symbol_names() {
        out.push(deg_of(&name));
    }
    out
}

pub fn load_corpus(dir: &Path) -> Result<Vec<GoldenCase>, String> {
    let entries = fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut cases = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| e.to_string())?.path();
        let eq_file = path.join("equation.txt");
        if !eq_file.is_file() {
            continue;
        }
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let equation_text = fs::read_to_string(&eq_file).map_err(|e| format!("{}: {e}", eq_file.display()))?.trim().to_string();
        let op_file = path.join("operator.json");
        let expected = if op_file.is_file() {
            let text = fs::read_to_string(&op_file).map_err(|e| e.to_string())?;
            Some(OperatorDocument::from_json(&text).map_err(|e| format!("{}: {e}", op_file.display()))?)
        } else {
            None
        };
        let meta_file = path.join("meta.json");
        let meta = if meta_file.is_file() {
            let text = fs::read_to_string(&meta_file).map_err(|e| e.to_string())?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", meta_file.display()))?
        } else {
            CaseMeta::default()
        };
        cases.push(GoldenCase { name, dir: path, equation_text, expected, meta });
    }
    cases.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(cases)
}

pub fn run_case(case: &GoldenCase, include_slow: bool) -> CaseResult {
    let start = Instant::now();
    let result = |status, order| CaseResult { name: case.name.clone(), status, order, elapsed: start.elapsed() };
    if case.meta.slow && !include_slow {
        return result(CaseStatus::Skipped("slow".into()), None);
    }
    let eq = match parse_equation(&case.equation_text) {
        Ok(eq) => eq,
        Err(e) => return result(CaseStatus::Fail(vec![format!("parse: {e}")]), None),
    };
    let op = match annihilate(&eq, &AnnihilateOptions::default()) {
        Ok((op, _)) => op,
        Err(e) => return result(CaseStatus::Fail(vec![format!("annihilate: {e}")]), None),
    };
    let elapsed = start.elapsed();
    let mut problems = Vec::new();
    if let Some(doc) = &case.expected {
        match doc.operator() {
            Ok(want) if want.proportional_to(&op) => {}
            Ok(_) => problems.push("operator differs from the expected one".to_string()),
            Err(e) => problems.push(format!("expected operator: {e}")),
        }
    }
    if let Some(order) = case.meta.order {
        if order != op.order() {
            problems.push(format!("order {} != expected {order}", op.order()));
        }
    }
    if let Some(want) = &case.meta.leading_degrees {
        let got = leading_degrees(&op, &eq);
        if &got != want {
            problems.push(format!("leading degrees {got:?} != expected {want:?}"));
        }
    }
    if let Some(budget) = case.meta.time_budget_s {
        if elapsed.as_secs_f64() > budget {
            problems.push(format!("took {:.1}s, budget {budget}s", elapsed.as_secs_f64()));
        }
    }
    let status = if problems.is_empty() { CaseStatus::Pass } else { CaseStatus::Fail(problems) };
    CaseResult { name: case.name.clone(), status, order: Some(op.order()), elapsed }
}

/// Runs every case on up to `jobs` threads; results come back sorted by name.
pub fn run_corpus(cases: &[GoldenCase], jobs: usize, include_slow: bool) -> Vec<CaseResult> {
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(cases.len()));
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, cases.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(case) = cases.get(i) else { break };
                let r = run_case(case, include_slow);
                results.lock().unwrap().push(r);
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by(|a, b| a.name.cmp(&b.name));
    results
}

pub fn format_table(results: &[CaseResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let mut s = format!("{:<width$}  {:<6}  {:>5}  {:>9}  notes\n", "case", "status", "order", "time");
    for r in results {
        let (status, notes) = match &r.status {
            CaseStatus::Pass => ("PASS", String::new()),
            CaseStatus::Fail(p) => ("FAIL", p.join("; ")),
            CaseStatus::Skipped(why) => ("SKIP", why.clone()),
        };
        let order = r.order.map_or("-".to_string(), |o| o.to_string());
        s.push_str(&format!(
            "{:<width$}  {:<6}  {:>5}  {:>8.2}s  {}\n",
            r.name,
            status,
            order,
            r.elapsed.as_secs_f64(),
            notes
        ));
    }
    s
}
