//! Cacheable computations and their canonical keys.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::oracle::{analyze, ContractionOperator, RankOptions};
use crate::proj_cohomology::{bott_cohomology, kunneth_cohomology, CohomologyVector, DivisorClass};
use crate::rep_theory::predict_map_analysis;

pub type Values = BTreeMap<String, Value>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "engine", rename_all = "snake_case")]
pub enum Request {
    Bott {
        n: u32,
        d: i64,
    },
    Product {
        n: u32,
        a1: i64,
        a2: i64,
    },
    Predict {
        n: u32,
        k: u32,
        a: u64,
        b: i64,
    },
    Oracle {
        a: u64,
        b: i64,
        operator: ContractionOperator,
    },
}

impl Request {
    pub fn key(&self) -> String {
        match self {
            Request::Bott { n, d } => format!("bott:n={n};d={d}"),
            Request::Product { n, a1, a2 } => format!("product:n={n};a1={a1};a2={a2}"),
            Request::Predict { n, k, a, b } => format!("predict:n={n};k={k};A={a};B={b}"),
            Request::Oracle { a, b, operator } => {
                format!("oracle:A={a};B={b};op={}", operator.canonical_string())
            }
        }
    }

    /// Exact integers of the result, as decimal strings. Independent of the
    /// seed so cached values can be compared with any recomputation.
    pub fn compute(&self, size_cap: u64, seed: u64) -> Result<Values> {
        let mut out = Values::new();
        match self {
            Request::Bott { n, d } => cohomology_values(&bott_cohomology(*n, *d), &mut out),
            Request::Product { n, a1, a2 } => {
                let v = kunneth_cohomology(*n, DivisorClass::new(*a1, *a2));
                cohomology_values(&v, &mut out);
                out.insert(
                    "euler".into(),
                    Value::String(v.euler_characteristic().to_string()),
                );
            }
            Request::Predict { n, k, a, b } => {
                let r = predict_map_analysis(*n, *k, *a, *b)?;
                out.insert("source_dim".into(), Value::String(r.source_dim.to_string()));
                out.insert("target_dim".into(), Value::String(r.target_dim.to_string()));
                out.insert("kernel_dim".into(), Value::String(r.kernel_dim.to_string()));
                out.insert(
                    "cokernel_dim".into(),
                    Value::String(r.cokernel_dim.to_string()),
                );
                out.insert("kernel_labels".into(), labels(&r.kernel_labels));
                out.insert("cokernel_labels".into(), labels(&r.cokernel_labels));
            }
            Request::Oracle { a, b, operator } => {
                let r = analyze(
                    operator,
                    *a,
                    *b,
                    size_cap,
                    RankOptions {
                        seed,
                        ..RankOptions::default()
                    },
                )?;
                out.insert("dim_source".into(), Value::String(r.dim_source.to_string()));
                out.insert("dim_target".into(), Value::String(r.dim_target.to_string()));
                out.insert("rank".into(), Value::String(r.rank.to_string()));
                out.insert("kernel_dim".into(), Value::String(r.kernel_dim.to_string()));
                out.insert(
                    "cokernel_dim".into(),
                    Value::String(r.cokernel_dim.to_string()),
                );
                out.insert("certified".into(), Value::Bool(r.certified));
            }
        }
        Ok(out)
    }
}

fn cohomology_values(v: &CohomologyVector, out: &mut Values) {
    let h = v
        .values()
        .iter()
        .map(|h| Value::String(h.to_string()))
        .collect();
    out.insert("h".into(), Value::Array(h));
}

fn labels(labels: &[crate::rep_theory::IrrepLabel]) -> Value {
    Value::Array(
        labels
            .iter()
            .map(|l| Value::String(l.to_string()))
            .collect(),
    )
}
