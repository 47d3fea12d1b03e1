//! Engine cross-checks and closed forms, run by `asympure verify`.

use clap::ValueEnum;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::asymptotics::{classify, fit_unsigned, purity_report, CaseKind};
use crate::combinatorics::binomial;
use crate::oracle::{
    analyze, diagonal_operator, oracle_series, special_fiber_operator, RankOptions, RankResult,
};
use crate::par;
use crate::proj_cohomology::{bott_cohomology, kunneth_cohomology, DivisorClass};
use crate::rep_theory::{highest_weight_certificate, pieri_decompose, predict_map_analysis};

use super::cache::Cache;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// n <= 2, k <= 2, m <= 8.
    Small,
    /// m <= 12, plus n = 3 prediction identities.
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Limits {
    max_exponent: u64,
    max_m: i64,
    scan_max: i64,
    include_n3: bool,
}

impl Suite {
    fn limits(self) -> Limits {
        match self {
            Suite::Small => Limits {
                max_exponent: 8,
                max_m: 8,
                scan_max: 4,
                include_n3: false,
            },
            Suite::Full => Limits {
                max_exponent: 12,
                max_m: 12,
                scan_max: 5,
                include_n3: true,
            },
        }
    }
}

fn outcome(name: &str, results: Vec<Option<String>>) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        cases: results.len(),
        failures: results.into_iter().flatten().collect(),
    }
}

fn rank_nullity(r: &RankResult) -> bool {
    &r.kernel_dim + &r.rank == r.dim_source && &r.cokernel_dim + &r.rank == r.dim_target
}

pub fn run_suite(
    suite: Suite,
    seed: u64,
    size_cap: u64,
    cache: Option<&Cache>,
) -> Vec<CheckOutcome> {
    let limits = suite.limits();
    let options = RankOptions {
        seed,
        ..RankOptions::default()
    };
    let mut out = vec![
        engine_equivalence(limits.max_exponent, size_cap, options),
        corner_closed_form(limits.max_m, size_cap, options),
        diagonal_lower_bound(limits.max_m.min(10), size_cap, options),
        pieri_identity(if limits.include_n3 { 4 } else { 2 }, 30),
        serre_duality(),
        classification(),
        purity_scan(limits.scan_max),
    ];
    if limits.include_n3 {
        out.push(prediction_identities(3, 12));
    }
    if let Some(cache) = cache {
        out.push(cache_soundness(cache, size_cap, seed));
    }
    out
}

/// Special-fiber oracle against the Pieri prediction, n, k in {1, 2}.
fn engine_equivalence(max_exponent: u64, size_cap: u64, options: RankOptions) -> CheckOutcome {
    let mut cases = Vec::new();
    for n in 1..=2u32 {
        for k in 1..=2u32 {
            for a in 0..=max_exponent {
                for b in i64::from(k)..=max_exponent as i64 {
                    cases.push((n, k, a, b));
                }
            }
        }
    }
    let results = par::map(cases, |(n, k, a, b)| {
        let predicted = match predict_map_analysis(n, k, a, b) {
            Ok(p) => p,
            Err(e) => return Some(format!("n={n} k={k} A={a} B={b}: predict failed: {e}")),
        };
        let r = match analyze(&special_fiber_operator(n, k), a, b, size_cap, options) {
            Ok(r) => r,
            Err(e) => return Some(format!("n={n} k={k} A={a} B={b}: oracle failed: {e}")),
        };
        if !rank_nullity(&r) || !r.certified {
            return Some(format!(
                "n={n} k={k} A={a} B={b}: rank bookkeeping or certification failed"
            ));
        }
        (r.kernel_dim != predicted.kernel_dim || r.cokernel_dim != predicted.cokernel_dim).then(
            || {
                format!(
                    "n={n} k={k} A={a} B={b}: predicted ({}, {}), oracle ({}, {})",
                    predicted.kernel_dim, predicted.cokernel_dim, r.kernel_dim, r.cokernel_dim
                )
            },
        )
    });
    outcome("engine_equivalence", results)
}

/// Kernel of x0 (x) d0 on P^2 x P^2, D = H1 - H2: (m^3 - m)/2.
fn corner_closed_form(max_m: i64, size_cap: u64, options: RankOptions) -> CheckOutcome {
    let op = diagonal_operator(2, 1);
    let mut results = Vec::new();
    match oracle_series(&op, 1, 1, 2..=max_m, size_cap, options) {
        Ok(series) => {
            for (m, r) in &series {
                let expected = BigUint::from(((m * m * m - m) / 2) as u64);
                results.push(
                    (r.kernel_dim != expected || !rank_nullity(r)).then(|| {
                        format!("m={m}: kernel {} != (m^3-m)/2 = {expected}", r.kernel_dim)
                    }),
                );
            }
            let tail: Vec<(i64, BigUint)> = series
                .iter()
                .filter(|(m, _)| *m >= 4)
                .map(|(m, r)| (*m, r.kernel_dim.clone()))
                .collect();
            let half = BigRational::new(1.into(), 2.into());
            results.push(match fit_unsigned(&tail, 3) {
                Ok(c) if c == half => None,
                Ok(c) => Some(format!("leading coefficient {c} != 1/2")),
                Err(e) => Some(format!("leading coefficient: {e}")),
            });
        }
        Err(e) => results.push(Some(format!("oracle series failed: {e}"))),
    }
    outcome("corner_closed_form", results)
}

/// Kernel of x0 (x) d0 + x1 (x) d1 is at least sum_j C(2 + (m-1-j), 2).
fn diagonal_lower_bound(max_m: i64, size_cap: u64, options: RankOptions) -> CheckOutcome {
    let op = diagonal_operator(2, 2);
    let results = match oracle_series(&op, 1, 1, 2..=max_m, size_cap, options) {
        Ok(series) => series
            .iter()
            .map(|(m, r)| {
                let bound: BigUint = (0..=m - 2).map(|j| binomial(2 + (m - 1 - j), 2)).sum();
                (r.kernel_dim < bound || !rank_nullity(r))
                    .then(|| format!("m={m}: kernel {} below bound {bound}", r.kernel_dim))
            })
            .collect(),
        Err(e) => vec![Some(format!("oracle series failed: {e}"))],
    };
    outcome("diagonal_lower_bound", results)
}

fn pieri_identity(max_n: u32, max_ab: u64) -> CheckOutcome {
    let mut results = Vec::new();
    for n in 1..=max_n {
        for a in 0..=max_ab {
            for b in 0..=max_ab {
                let d = pieri_decompose(n, a, b);
                results.push((d.total_dimension() != d.expected_dimension()).then(|| {
                    format!("n={n} A={a} B={b}: Pieri dimensions do not sum to the tensor product")
                }));
            }
        }
    }
    outcome("pieri_dimension_sum", results)
}

fn serre_duality() -> CheckOutcome {
    let mut results = Vec::new();
    for n in 1..=5u32 {
        let ni = i64::from(n);
        for d in -30..=30 {
            let v = bott_cohomology(n, d);
            let w = bott_cohomology(n, -d - ni - 1);
            results.push(
                (0..=ni)
                    .any(|q| v.get(q) != w.get(ni - q))
                    .then(|| format!("P^{n}, d={d}: Serre duality fails")),
            );
        }
        for a1 in -8..=8 {
            for a2 in -8..=8 {
                let v = kunneth_cohomology(n, DivisorClass::new(a1, a2));
                let w = kunneth_cohomology(n, DivisorClass::new(-a1 - ni - 1, -a2 - ni - 1));
                let bad =
                    (0..=2 * ni).any(|i| v.get(i) != w.get(2 * ni - i)) || v.nonzero_count() > 1;
                results.push(
                    bad.then(|| format!("P^{n} x P^{n}, ({a1},{a2}): Kunneth duality fails")),
                );
            }
        }
    }
    outcome("duality", results)
}

fn classification() -> CheckOutcome {
    let mut results = Vec::new();
    for n in 1..=4u32 {
        for a1 in -4..=4i64 {
            for a2 in -4..=4i64 {
                let c = classify(n, DivisorClass::new(a1, a2));
                let expected = if a1 == 0 && a2 == 0 {
                    vec![]
                } else if a1 >= 0 && a2 >= 0 {
                    vec![0]
                } else if a1 <= 0 && a2 <= 0 {
                    vec![2 * n - 1]
                } else {
                    vec![n - 1, n]
                };
                let kind_ok = (a1 * a2 == 0) == (c.kind == CaseKind::Boundary);
                results.push((c.allowed_indices != expected || !kind_ok).then(|| {
                    format!(
                        "n={n} ({a1},{a2}): got {:?} {:?}",
                        c.kind, c.allowed_indices
                    )
                }));
            }
        }
    }
    outcome("classification", results)
}

fn purity_scan(max: i64) -> CheckOutcome {
    let grid: Vec<(i64, i64)> = (0..=max)
        .flat_map(|a| (0..=max).map(move |b| (a, b)))
        .collect();
    let mut results = Vec::new();
    for k in 1..=2 {
        match purity_report(2, k, &grid) {
            Ok(report) => results.extend(report.entries.iter().map(|e| {
                (!e.vector.purity.is_pure())
                    .then(|| format!("n=2 k={k} D={}: {}", e.divisor, e.vector.purity))
            })),
            Err(e) => results.push(Some(format!("n=2 k={k}: {e}"))),
        }
    }
    outcome("purity_scan", results)
}

/// Prediction-only identities where the oracle would be too large.
fn prediction_identities(n: u32, max_ab: u64) -> CheckOutcome {
    let mut results = Vec::new();
    for k in 1..=3u32 {
        for a in 0..=max_ab {
            for b in i64::from(k)..=max_ab as i64 {
                let r = match predict_map_analysis(n, k, a, b) {
                    Ok(r) => r,
                    Err(e) => {
                        results.push(Some(format!("n={n} k={k} A={a} B={b}: {e}")));
                        continue;
                    }
                };
                let euler = &r.kernel_dim + &r.target_dim == &r.cokernel_dim + &r.source_dim;
                let certified = r
                    .shared
                    .clone()
                    .all(|i| !highest_weight_certificate(n, k, b, i).is_zero());
                results.push((!euler || !certified).then(|| {
                    format!("n={n} k={k} A={a} B={b}: Euler consistency or certificate failed")
                }));
            }
        }
    }
    outcome("prediction_identities_n3", results)
}

fn cache_soundness(cache: &Cache, size_cap: u64, seed: u64) -> CheckOutcome {
    let records = cache.records().to_vec();
    let results = par::map(records, |record| {
        if record.key != record.request.key() {
            return Some(format!("key {} does not match its request", record.key));
        }
        match record.request.compute(size_cap, seed) {
            Ok(fresh) if fresh == record.value => None,
            Ok(_) => Some(format!(
                "cached value for key {} differs from recomputation",
                record.key
            )),
            Err(e) => Some(format!("key {}: recomputation failed: {e}", record.key)),
        }
    });
    outcome("cache_soundness", results)
}
