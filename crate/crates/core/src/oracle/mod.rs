//! Brute-force engine: the exact matrix of a contraction operator between
//! monomial bases and its rank.

mod basis;
mod matrix;
mod operator;
mod rank;

use std::ops::RangeInclusive;

pub use basis::{Monomial, MonomialBasis};
pub use matrix::{build_matrix, map_dimensions, SparseMatrix, DEFAULT_SIZE_CAP};
pub use operator::{
    apply_term, diagonal_operator, special_fiber_operator, ContractionOperator, OperatorLoadError,
    Term,
};
pub use rank::{
    choose_primes, exact_rank, is_prime, rank_bareiss, rank_mod_p, RankMethod, RankOptions,
    RankResult, DEFAULT_EXACT_THRESHOLD,
};

use crate::error::{Error, Result};
use crate::par;

/// Builds and ranks `op` at exponents `(a, b)`.
///
/// For `0 <= b < k` the target `Sym^{b-k}` is the zero space and every
/// source vector lies in the kernel; no matrix is built.
pub fn analyze(
    op: &ContractionOperator,
    a: u64,
    b: i64,
    size_cap: u64,
    options: RankOptions,
) -> Result<RankResult> {
    if (0..i64::from(op.k)).contains(&b) {
        let (source, _) = map_dimensions(op.n, op.k, a, b);
        let cap = num_bigint::BigUint::from(size_cap);
        if source > cap {
            return Err(Error::SizeCap {
                source_dim: source.to_string(),
                target_dim: "0".into(),
                cap: size_cap,
            });
        }
        let cols = usize::try_from(&source).expect("capped dimension fits in usize");
        return Ok(exact_rank(&SparseMatrix::zeros(0, cols), options));
    }
    let matrix = build_matrix(op, a, b, size_cap)?;
    Ok(exact_rank(&matrix, options))
}

/// Oracle kernel/cokernel along `m` with `A = m a1 - k`,
/// `B = m a2 + k - (n + 1)`; `m` with `A < 0` or `B < 0` are skipped.
pub fn oracle_series(
    op: &ContractionOperator,
    a1: i64,
    a2: i64,
    m_range: RangeInclusive<i64>,
    size_cap: u64,
    options: RankOptions,
) -> Result<Vec<(i64, RankResult)>> {
    let feasible: Vec<(i64, u64, i64)> = m_range
        .filter_map(|m| {
            let k = i64::from(op.k);
            let a = m * a1 - k;
            let b = m * a2 + k - (i64::from(op.n) + 1);
            (a >= 0 && b >= 0).then_some((m, a as u64, b))
        })
        .collect();
    if feasible.is_empty() {
        return Err(Error::EmptyRange);
    }
    par::try_map(feasible, |(m, a, b)| {
        analyze(op, a, b, size_cap, options).map(|r| (m, r))
    })
}
