//! The serialized form of a computed operator.

use annih_core::annihilator::{DiffOperator, KernelReport};
use annih_core::multipoly::{format_rational, parse_rational, Monomial, MultiPoly, VarContext};
use annih_core::oracle::VerificationReport;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad coefficient `{0}`")]
    BadCoefficient(String),
    #[error("exponent vector of length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },
    #[error("invalid variable list: {0}")]
    Vars(String),
    #[error("operator: {0}")]
    Operator(String),
}

/// One term `c · vars^e`; `c` is an exact decimal `num` or `num/den`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub c: String,
    pub e: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelDoc {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub pivots: Vec<(usize, usize)>,
    pub selected_free_column: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationDoc {
    pub point: Vec<(String, String)>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub bits: u32,
    pub retried: bool,
    pub passed: bool,
}

impl From<&VerificationReport> for VerificationDoc {
    fn from(r: &VerificationReport) -> Self {
        VerificationDoc {
            point: r.point.iter().map(|(n, v)| (n.clone(), format_rational(v))).collect(),
            residuals: r.residuals.clone(),
            max_residual: r.max_residual,
            tolerance: r.tolerance,
            bits: r.bits,
            retried: r.retried,
            passed: r.passed,
        }
    }
}

/// `coeffs[k]` lists the terms of `p_k`, lex-descending in `vars`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDocument {
    pub equation: String,
    pub vars: Vec<String>,
    pub order: usize,
    pub low: usize,
    pub coeffs: Vec<Vec<TermDoc>>,
    pub kernel_dim: usize,
    pub time_ms: u64,
    #[serde(default)]
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verification: Vec<VerificationDoc>,
}

pub fn terms_of(p: &MultiPoly) -> Vec<TermDoc> {
    p.terms().iter().map(|(m, c)| TermDoc { c: format_rational(c), e: m.exponents().collect() }).collect()
}

impl OperatorDocument {
    pub fn new(equation: &str, op: &DiffOperator, report: Option<&KernelReport>, time_ms: u64) -> Self {
        OperatorDocument {
            equation: equation.to_string(),
            vars: op.context().names().to_vec(),
            order: op.order(),
            low: op.low(),
            coeffs: op.coeffs().iter().map(terms_of).collect(),
            kernel_dim: report.map_or(1, |r| r.kernel_dim),
            time_ms,
            version: env!("CARGO_PKG_VERSION").to_string(),
            kernel: report.map(|r| KernelDoc {
                rows: r.rows,
                cols: r.cols,
                rank: r.rank,
                pivots: r.pivots.clone(),
                selected_free_column: r.selected_free_column,
                warnings: r.warnings.clone(),
            }),
            verification: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, DocumentError> {
        Ok(serde_json::from_str(s)?)
    }

    /// Rebuilds the operator in the context named by `vars`.
    pub fn operator(&self) -> Result<DiffOperator, DocumentError> {
        let ctx = VarContext::new(self.vars.clone()).map_err(|e| DocumentError::Vars(e.to_string()))?;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for terms in &self.coeffs {
            let mut parts = Vec::with_capacity(terms.len());
            for t in terms {
                if t.e.len() != ctx.len() {
                    return Err(DocumentError::ExponentLength { expected: ctx.len(), got: t.e.len() });
                }
                let c = parse_rational(&t.c).ok_or_else(|| DocumentError::BadCoefficient(t.c.clone()))?;
                parts.push((Monomial::from_exponents(t.e.iter().copied()), c));
            }
            coeffs.push(MultiPoly::from_terms(&ctx, parts));
        }
        DiffOperator::from_raw("x", coeffs).map_err(|e| DocumentError::Operator(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use annih_core::annihilator::normalize_operator;
    use annih_core::multipoly::int;

    fn quadratic() -> DiffOperator {
        let c = VarContext::new(["a", "x"]).unwrap();
        let (a, x) = (MultiPoly::var(&c, 0), MultiPoly::var(&c, 1));
        normalize_operator(&[MultiPoly::zero(&c), MultiPoly::from_int(&c, -2), &a.pow(2) - &x.scale(&int(4))]).unwrap()
    }

    #[test]
    fn quadratic_json_coefficients() {
        let doc = OperatorDocument::new("y^2 + a*y + x", &quadratic(), None, 0);
        let v: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        let want: serde_json::Value = serde_json::from_str(
            r#"[[], [{"c":"-2","e":[0,0]}], [{"c":"1","e":[2,0]},{"c":"-4","e":[0,1]}]]"#,
        )
        .unwrap();
        assert_eq!(v["coeffs"], want);
        assert_eq!(v["vars"], serde_json::json!(["a", "x"]));
        assert_eq!(v["order"], 2);
        assert_eq!(v["low"], 1);
    }

    #[test]
    fn round_trip() {
        let doc = OperatorDocument::new("y^2 + a*y + x", &quadratic(), None, 12);
        let back = OperatorDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.operator().unwrap(), quadratic());
    }
}
