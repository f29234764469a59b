//! Deterministic report serialization: sorted object keys, fixed
//! scientific float formatting at 15 significant digits, byte-identical
//! output for identical inputs.

use serde::Serialize;
use serde_json::Value;

use crate::bound::BoundReport;
use crate::error::{Error, Result};
use crate::oracle::{OracleResult, SweepRow};
use crate::quantum::ProbDist;

/// Serializes any `Serialize` value to canonical JSON: keys sorted,
/// floats as `d.dddddddddddddde±x`, trailing newline.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Validation(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

/// 15 significant digits, scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.14e}")
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(f) = n.as_f64().filter(|_| n.is_f64()) {
                out.push_str(&fmt_f64(f));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serialization"))
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(out, indent + 1);
                write_value(out, item, indent + 1);
            }
            out.push('\n');
            push_indent(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            // serde_json's map is BTree-backed: iteration is key-sorted.
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(out, indent + 1);
                out.push_str(&serde_json::to_string(k).expect("key serialization"));
                out.push_str(": ");
                write_value(out, item, indent + 1);
            }
            out.push('\n');
            push_indent(out, indent);
            out.push('}');
        }
    }
}

fn push_indent(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// Summary section shared by the `analyze` and `bound` reports.
#[derive(Debug, Clone, Serialize)]
pub struct BoundSection {
    pub bound_nats: f64,
    pub zezd_possible: bool,
    pub sorted_p: Vec<f64>,
    pub sorted_q: Vec<f64>,
    pub perm_p: Vec<usize>,
    pub perm_q: Vec<usize>,
    pub coarsest_partitions: Vec<Vec<usize>>,
    pub argmin_partitions: Vec<Vec<usize>>,
    pub per_partition_js_nats: Vec<(Vec<usize>, f64)>,
    pub extreme_point_p: Vec<f64>,
    pub extreme_point_q: Vec<f64>,
}

impl BoundSection {
    pub fn from_report(r: &BoundReport) -> Self {
        Self {
            bound_nats: r.bound,
            zezd_possible: r.zezd_possible,
            sorted_p: r.sorted_p.values().to_vec(),
            sorted_q: r.sorted_q.values().to_vec(),
            perm_p: r.sorted_p.perm().to_vec(),
            perm_q: r.sorted_q.perm().to_vec(),
            coarsest_partitions: r.coarsest.iter().map(|p| p.cuts().to_vec()).collect(),
            argmin_partitions: r.argmin.iter().map(|p| p.cuts().to_vec()).collect(),
            per_partition_js_nats: r
                .per_partition_js
                .iter()
                .map(|(p, v)| (p.cuts().to_vec(), *v))
                .collect(),
            extreme_point_p: r.extreme_point.0.values().to_vec(),
            extreme_point_q: r.extreme_point.1.values().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSection {
    pub budget: u64,
    pub seed: u64,
    pub min_nats: f64,
    pub evaluations: u64,
    pub refined: bool,
}

impl OracleSection {
    pub fn new(r: &OracleResult, budget: u64, seed: u64) -> Self {
        Self {
            budget,
            seed,
            min_nats: r.min_value,
            evaluations: r.evaluations,
            refined: r.refined,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub dimension: usize,
    pub eta: f64,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub verdict: String,
    pub bound: BoundSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchReport {
    pub signs: String,
    /// Basis vectors as `[re, im]` pairs, one row per outcome label.
    pub basis: Vec<Vec<[f64; 2]>>,
    pub unitarity_residual: f64,
    pub condition_residual_1: f64,
    pub condition_residual_2: f64,
    pub err_nats: f64,
    pub dis_nats: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthesizeReport {
    pub dimension: usize,
    pub method: String,
    pub branches: Vec<BranchReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundCliReport {
    pub dimension: usize,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub bound: BoundSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valid_partitions: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleReport {
    pub shots: u64,
    pub seed: u64,
    pub empirical_p: Vec<f64>,
    pub empirical_q_tilde: Vec<f64>,
}

impl SampleReport {
    pub fn new(shots: u64, seed: u64, emp_p: &ProbDist, emp_qt: &ProbDist) -> Self {
        Self {
            shots,
            seed,
            empirical_p: emp_p.values().to_vec(),
            empirical_q_tilde: emp_qt.values().to_vec(),
        }
    }
}

/// CSV emission for the θ-sweep, one row per grid point, plottable as-is.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("theta,p1,q1,verdict,blue_bound_nats,red_oracle_nats\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f64(r.theta),
            fmt_f64(r.p1),
            fmt_f64(r.q1),
            r.verdict,
            fmt_f64(r.blue),
            fmt_f64(r.red)
        ));
    }
    out
}
