//! Per-class reports: the closed-form structure next to the Smith normal
//! form of the torus matrix, with JSON and plain-text renderings.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::lattice::{torus_matrix, LatticeError};
use crate::smith::invariant_factors;
use crate::theory::{canonical_invariants, evaluate, theorem_decomposition, Case, CyclicFactor};
use crate::weyl::{Sign, SignedCycleType};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QResult {
    pub q: u64,
    pub orders: Vec<BigInt>,
    pub invariants: Vec<BigInt>,
    pub oracle_invariants: Vec<BigInt>,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportEntry {
    pub class_type: SignedCycleType,
    pub form: Sign,
    pub case: Case,
    pub factors: Vec<CyclicFactor>,
    pub symbolic: String,
    pub results: Vec<QResult>,
}

impl ReportEntry {
    pub fn all_match(&self) -> bool {
        self.results.iter().all(|r| r.matched)
    }
}

/// Evaluates the closed form at each `q` and compares with the SNF route.
pub fn build_entry(t: &SignedCycleType, qs: &[u64]) -> Result<ReportEntry, LatticeError> {
    let d = theorem_decomposition(t);
    let results = qs
        .iter()
        .map(|&q| {
            let orders = evaluate(&d, q);
            let invariants = canonical_invariants(&orders).factors().to_vec();
            let oracle_invariants = invariant_factors(&torus_matrix(t, q)?).factors().to_vec();
            Ok(QResult {
                q,
                matched: invariants == oracle_invariants,
                orders,
                invariants,
                oracle_invariants,
            })
        })
        .collect::<Result<Vec<_>, LatticeError>>()?;
    Ok(ReportEntry {
        class_type: t.clone(),
        form: t.form(),
        case: d.case,
        symbolic: d.structure(),
        factors: d.factors,
        results,
    })
}

/// Arbitrary-precision integer written as a bare JSON number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n = serde_json::Number::from_str(&self.0.to_string()).map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        BigInt::from_str(&n.to_string()).map(JsonInt).map_err(D::Error::custom)
    }
}

fn ints(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

/// One flat JSON record; the `q` fields are absent for symbolic-only output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub l: usize,
    pub form: String,
    #[serde(rename = "type")]
    pub class_type: String,
    pub split: Option<String>,
    pub case: String,
    pub factors: Vec<Vec<(u32, i64)>>,
    pub symbolic: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<JsonInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<Vec<JsonInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_invariants: Option<Vec<JsonInt>>,
    #[serde(default, rename = "match", skip_serializing_if = "Option::is_none")]
    pub matched: Option<bool>,
}

/// One record per `(entry, q)`, or one per entry when no `q` was evaluated.
pub fn records(entries: &[ReportEntry]) -> Vec<ReportRecord> {
    let mut out = Vec::new();
    for e in entries {
        let base = ReportRecord {
            l: e.class_type.rank(),
            form: e.form.symbol().to_string(),
            class_type: e.class_type.partition_literal(),
            split: e.class_type.split().map(|s| s.symbol().to_string()),
            case: e.case.label().to_string(),
            factors: e
                .factors
                .iter()
                .map(|f| f.terms().iter().map(|&(a, s)| (a, s.value())).collect())
                .collect(),
            symbolic: e.symbolic.clone(),
            q: None,
            orders: None,
            invariants: None,
            oracle_invariants: None,
            matched: None,
        };
        if e.results.is_empty() {
            out.push(base.clone());
        }
        for r in &e.results {
            out.push(ReportRecord {
                q: Some(r.q),
                orders: Some(ints(&r.orders)),
                invariants: Some(ints(&r.invariants)),
                oracle_invariants: Some(ints(&r.oracle_invariants)),
                matched: Some(r.matched),
                ..base.clone()
            });
        }
    }
    out
}

pub fn to_json(records: &[ReportRecord]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("records serialize");
    s.push('\n');
    s
}

pub fn from_json(s: &str) -> serde_json::Result<Vec<ReportRecord>> {
    serde_json::from_str(s)
}

/// Table label of a class; the two split classes share the label `a,b:±`.
pub fn table_label(t: &SignedCycleType) -> String {
    match t.split() {
        Some(_) => format!("{}:±", t.partition_literal()),
        None => t.partition_literal(),
    }
}

/// Two-column `(type, structure)` rows, split pairs merged into one row.
pub fn table_rows(entries: &[ReportEntry]) -> Vec<(String, String)> {
    let mut rows: Vec<(String, String)> = Vec::new();
    for e in entries {
        let row = (table_label(&e.class_type), e.symbolic.clone());
        if rows.last() != Some(&row) {
            rows.push(row);
        }
    }
    rows
}

pub fn render_table(title: &str, rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(t, _)| t.chars().count()).max().unwrap_or(0);
    let mut out = format!("{title}\n");
    for (t, s) in rows {
        let pad = width - t.chars().count();
        out.push_str(&format!("{t}{}  {s}\n", " ".repeat(pad)));
    }
    out
}
