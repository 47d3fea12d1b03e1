use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{falling_factorial, multinomial};
use crate::error::{Error, Result};

use super::basis::MonomialBasis;

/// One term `coeff * x^alpha (x) d^beta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: i64,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
}

/// A bihomogeneous operator of bidegree `(k, -k)` acting on
/// `Sym^A (x) Sym^B`: multiplication on the first factor, differentiation
/// on the second.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionOperator {
    pub n: u32,
    pub k: u32,
    pub terms: Vec<Term>,
}

impl ContractionOperator {
    /// Validates the invariants and sorts the terms into a canonical order.
    pub fn new(n: u32, k: u32, mut terms: Vec<Term>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidOperator("n and k must be positive".into()));
        }
        if terms.is_empty() {
            return Err(Error::InvalidOperator("operator has no terms".into()));
        }
        let mut seen = BTreeSet::new();
        for t in &terms {
            if t.coeff == 0 {
                return Err(Error::InvalidOperator("zero coefficient".into()));
            }
            for (name, v) in [("alpha", &t.alpha), ("beta", &t.beta)] {
                if v.len() != n as usize + 1 {
                    return Err(Error::InvalidOperator(format!(
                        "{name} {v:?} has length {}, expected {}",
                        v.len(),
                        n + 1
                    )));
                }
                let total: u64 = v.iter().map(|&e| u64::from(e)).sum();
                if total != u64::from(k) {
                    return Err(Error::InvalidOperator(format!(
                        "{name} {v:?} has degree {total}, expected {k}"
                    )));
                }
            }
            if !seen.insert((t.alpha.clone(), t.beta.clone())) {
                return Err(Error::InvalidOperator(format!(
                    "duplicate term alpha={:?} beta={:?}",
                    t.alpha, t.beta
                )));
            }
        }
        terms.sort_by(|x, y| (&y.alpha, &y.beta).cmp(&(&x.alpha, &x.beta)));
        Ok(Self { n, k, terms })
    }

    /// Loads an operator from a JSON document `{n, k, terms: [{coeff, alpha, beta}]}`.
    pub fn from_json_str(text: &str) -> std::result::Result<Self, OperatorLoadError> {
        let raw: ContractionOperator = serde_json::from_str(text)?;
        Ok(Self::new(raw.n, raw.k, raw.terms)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json_str(&text).map_err(|e| match e {
            OperatorLoadError::Json(source) => Error::Json {
                path: path.to_owned(),
                source,
            },
            OperatorLoadError::Invalid(e) => e,
        })
    }

    /// Compact canonical string, stable across runs; used as a cache key.
    pub fn canonical_string(&self) -> String {
        let mut s = format!("n={};k={};", self.n, self.k);
        for t in &self.terms {
            let _ = write!(s, "[{}:{:?}:{:?}]", t.coeff, t.alpha, t.beta);
        }
        s.retain(|c| c != ' ');
        s
    }

    /// Relabels variable `j` as `perm[j]` in both factors.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let apply = |v: &[u32]| {
            let mut out = vec![0; v.len()];
            for (j, &e) in v.iter().enumerate() {
                out[perm[j]] = e;
            }
            out
        };
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: t.coeff,
                alpha: apply(&t.alpha),
                beta: apply(&t.beta),
            })
            .collect();
        Self::new(self.n, self.k, terms)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum OperatorLoadError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// `(sum_i x_i (x) d_i)^k`: terms with `alpha = beta` and multinomial
/// coefficients `k! / prod alpha_j!`.
pub fn special_fiber_operator(n: u32, k: u32) -> ContractionOperator {
    let basis = MonomialBasis::new(n as usize + 1, k);
    let terms = basis
        .elements()
        .iter()
        .map(|m| Term {
            coeff: multinomial(&m.exponents)
                .to_i64()
                .expect("multinomial coefficient fits in i64"),
            alpha: m.exponents.clone(),
            beta: m.exponents.clone(),
        })
        .collect();
    ContractionOperator::new(n, k, terms).expect("special fiber operator is well formed")
}

/// `sum_{i < rank} x_i (x) d_i`, the bidegree `(1, 1)` form of the given
/// rank on `P^n x P^n`. Rank `n + 1` is the smooth (full) case.
pub fn diagonal_operator(n: u32, rank: u32) -> ContractionOperator {
    assert!(rank >= 1 && rank <= n + 1, "rank must lie in [1, n + 1]");
    let terms = (0..rank as usize)
        .map(|i| {
            let mut e = vec![0; n as usize + 1];
            e[i] = 1;
            Term {
                coeff: 1,
                alpha: e.clone(),
                beta: e,
            }
        })
        .collect();
    ContractionOperator::new(n, 1, terms).expect("diagonal operator is well formed")
}

/// Image of `x^u (x) y^v` under one term: the scaled pair
/// `coeff * prod_j v_j!/(v_j - beta_j)! * x^{u+alpha} (x) y^{v-beta}`,
/// or `None` when some `v_j < beta_j`.
pub fn apply_term(term: &Term, u: &[u32], v: &[u32]) -> Option<(BigInt, Vec<u32>, Vec<u32>)> {
    let mut scale = BigInt::from(term.coeff);
    let mut y = Vec::with_capacity(v.len());
    for (&vj, &bj) in v.iter().zip(&term.beta) {
        if vj < bj {
            return None;
        }
        scale *= BigInt::from(falling_factorial(u64::from(vj), u64::from(bj)));
        y.push(vj - bj);
    }
    let x = u.iter().zip(&term.alpha).map(|(a, b)| a + b).collect();
    Some((scale, x, y))
}
