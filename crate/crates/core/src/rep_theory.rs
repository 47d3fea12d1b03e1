//! Pieri decompositions, Weyl dimensions and the Schur's-lemma prediction
//! for multiplication by `f = (sum_i x_i (x) y_i^*)^k`.
//!
//! Both `Sym^A` and `Sym^B` are treated as `SL(n+1)`-modules over the same
//! standard representation; `f` acts as `x^alpha (x) d^alpha` and is
//! equivariant. `Sym^A (x) Sym^B` splits multiplicity-free into the two-row
//! partitions `(A + B - i, i)`, `0 <= i <= min(A, B)`, and the target of the
//! map carries the same partition sum `A + B`, so the map is read off by
//! comparing index ranges.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{falling_factorial, monomial_count};
use crate::error::{Error, Result};
use crate::par;

/// Irreducible `SL(n+1)` representation labelled by a partition with at most
/// two nonzero rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrrepLabel {
    pub lambda1: u64,
    pub lambda2: u64,
    pub rank_n: u32,
}

impl IrrepLabel {
    pub fn new(rank_n: u32, lambda1: u64, lambda2: u64) -> Self {
        assert!(rank_n >= 1, "rank must be positive");
        assert!(lambda1 >= lambda2, "partition rows must be non-increasing");
        Self {
            lambda1,
            lambda2,
            rank_n,
        }
    }

    /// From fundamental-weight coordinates `Gamma_{c1, c2, 0, ...}`.
    pub fn from_fundamental(rank_n: u32, c1: u64, c2: u64) -> Self {
        Self::new(rank_n, c1 + c2, c2)
    }

    pub fn fundamental(&self) -> (u64, u64) {
        (self.lambda1 - self.lambda2, self.lambda2)
    }

    pub fn dimension(&self) -> BigUint {
        weyl_dimension(self.rank_n, self)
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lambda1, self.lambda2)
    }
}

/// Weyl dimension formula for `SL(n+1)`:
/// `prod_{p<q} (lambda_p - lambda_q + q - p) / (q - p)`.
pub fn weyl_dimension(n: u32, label: &IrrepLabel) -> BigUint {
    assert_eq!(label.rank_n, n, "label rank does not match group");
    let rows = n as usize + 1;
    let mut lambda = vec![0u64; rows];
    lambda[0] = label.lambda1;
    if rows > 1 {
        lambda[1] = label.lambda2;
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for p in 0..rows {
        for q in (p + 1)..rows {
            let gap = (q - p) as u64;
            num *= lambda[p] - lambda[q] + gap;
            den *= gap;
        }
    }
    num / den
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieriDecomposition {
    pub a: u64,
    pub b: u64,
    pub rank_n: u32,
    /// Component `i` is the partition `(a + b - i, i)`.
    pub components: Vec<IrrepLabel>,
}

impl PieriDecomposition {
    pub fn total_dimension(&self) -> BigUint {
        self.components.iter().map(IrrepLabel::dimension).sum()
    }

    /// `dim Sym^a (x) Sym^b` computed directly from monomial counts.
    pub fn expected_dimension(&self) -> BigUint {
        monomial_count(self.rank_n, self.a as i64) * monomial_count(self.rank_n, self.b as i64)
    }
}

/// Pieri rule for `Sym^a C^{n+1} (x) Sym^b C^{n+1}`.
pub fn pieri_decompose(n: u32, a: u64, b: u64) -> PieriDecomposition {
    let components = (0..=a.min(b))
        .map(|i| IrrepLabel::new(n, a + b - i, i))
        .collect();
    PieriDecomposition {
        a,
        b,
        rank_n: n,
        components,
    }
}

/// Kernel and cokernel of multiplication by `f` as sums of irreducibles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapAnalysis {
    pub source_dim: BigUint,
    pub target_dim: BigUint,
    pub kernel_dim: BigUint,
    pub cokernel_dim: BigUint,
    pub kernel_labels: Vec<IrrepLabel>,
    pub cokernel_labels: Vec<IrrepLabel>,
    /// Pieri indices present on both sides; each maps isomorphically.
    pub shared: RangeInclusive<u64>,
}

/// Predicts kernel and cokernel of
/// `Sym^a (x) Sym^b -> Sym^{a+k} (x) Sym^{b-k}` given by `f^k`.
pub fn predict_map_analysis(n: u32, k: u32, a: u64, b: i64) -> Result<MapAnalysis> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("n and k must be positive".into()));
    }
    let k64 = u64::from(k);
    if b < i64::from(k) {
        return Err(Error::InvalidArgument(format!(
            "target exponent B - k = {} is negative (B = {b}, k = {k})",
            b - i64::from(k)
        )));
    }
    let b = b as u64;
    let source = pieri_decompose(n, a, b);
    let target = pieri_decompose(n, a + k64, b - k64);
    let source_top = a.min(b);
    let target_top = (a + k64).min(b - k64);

    let kernel_labels: Vec<IrrepLabel> = source
        .components
        .iter()
        .filter(|l| l.lambda2 > target_top)
        .copied()
        .collect();
    let cokernel_labels: Vec<IrrepLabel> = target
        .components
        .iter()
        .filter(|l| l.lambda2 > source_top)
        .copied()
        .collect();
    let kernel_dim = kernel_labels.iter().map(IrrepLabel::dimension).sum();
    let cokernel_dim = cokernel_labels.iter().map(IrrepLabel::dimension).sum();

    Ok(MapAnalysis {
        source_dim: source.expected_dimension(),
        target_dim: target.expected_dimension(),
        kernel_dim,
        cokernel_dim,
        kernel_labels,
        cokernel_labels,
        shared: 0..=source_top.min(target_top),
    })
}

/// Coefficient picked up by the leading monomial of the highest weight
/// vector of Pieri index `i` under `x_0^k (x) d_0^k`: `(B-i)!/(B-k-i)!`.
/// Nonzero exactly when the component survives in the target.
pub fn highest_weight_certificate(_n: u32, k: u32, b: i64, i: u64) -> BigUint {
    let Ok(i) = i64::try_from(i) else {
        return BigUint::zero();
    };
    if b - i < 0 {
        return BigUint::zero();
    }
    falling_factorial((b - i) as u64, u64::from(k))
}

/// Exponents `(A, B)` of the source `Sym^A (x) Sym^B` for the special fiber
/// at multiple `m` of the divisor `a1 H1 - a2 H2`:
/// `A = m a1 - k`, `B = m a2 + k - (n + 1)`. `None` when `A < 0` or `B < k`.
pub fn fiber_exponents(n: u32, k: u32, a1: i64, a2: i64, m: i64) -> Option<(u64, i64)> {
    let k = i64::from(k);
    let a = m * a1 - k;
    let b = m * a2 + k - (i64::from(n) + 1);
    (a >= 0 && b >= k).then_some((a as u64, b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPoint {
    pub m: i64,
    pub kernel_dim: BigUint,
    pub cokernel_dim: BigUint,
}

/// Kernel/cokernel of the special-fiber map for each feasible `m`.
pub fn kernel_series_rep(
    n: u32,
    k: u32,
    a1: i64,
    a2: i64,
    m_range: RangeInclusive<i64>,
) -> Result<Vec<SeriesPoint>> {
    let mut feasible = Vec::new();
    for m in m_range {
        match fiber_exponents(n, k, a1, a2, m) {
            Some((a, b)) => feasible.push((m, a, b)),
            None => {
                log::warn!("dropping m = {m}: exponents infeasible for n={n} k={k} a=({a1},{a2})")
            }
        }
    }
    if feasible.is_empty() {
        return Err(Error::EmptyRange);
    }
    par::try_map(feasible, |(m, a, b)| {
        let analysis = predict_map_analysis(n, k, a, b)?;
        Ok(SeriesPoint {
            m,
            kernel_dim: analysis.kernel_dim,
            cokernel_dim: analysis.cokernel_dim,
        })
    })
}
