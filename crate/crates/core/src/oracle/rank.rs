//! Rank over the rationals.
//!
//! The matrix is first split into independent blocks (connected components
//! of its row/column incidence graph). Each block is eliminated modulo two
//! seeded random primes in `(2^30, 2^31)`; a modular rank never exceeds the
//! rational rank. Matrices with both sides at most `exact_threshold` are
//! additionally reduced exactly with fraction-free (Bareiss) elimination.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::par;

use super::matrix::SparseMatrix;

pub const DEFAULT_EXACT_THRESHOLD: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankOptions {
    pub seed: u64,
    pub exact_threshold: usize,
}

impl Default for RankOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            exact_threshold: DEFAULT_EXACT_THRESHOLD,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMethod {
    Exact,
    TwoPrime,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankResult {
    pub dim_source: BigUint,
    pub dim_target: BigUint,
    pub rank: BigUint,
    pub kernel_dim: BigUint,
    pub cokernel_dim: BigUint,
    pub certified: bool,
    pub method: RankMethod,
    pub primes: [u64; 2],
    pub modular_ranks: [usize; 2],
    pub blocks: usize,
}

/// Rank of `matrix` over `Q`, with kernel and cokernel dimensions.
pub fn exact_rank(matrix: &SparseMatrix, options: RankOptions) -> RankResult {
    let primes = choose_primes(options.seed);
    let blocks = split_blocks(matrix);
    let exact =
        matrix.rows() <= options.exact_threshold && matrix.cols() <= options.exact_threshold;

    let per_block: Vec<([usize; 2], Option<usize>)> = par::map(blocks.iter().collect(), |block| {
        let r0 = rank_mod_p(block.reduce(primes[0]), primes[0]);
        let r1 = rank_mod_p(block.reduce(primes[1]), primes[1]);
        let exact_rank = exact.then(|| rank_bareiss(block.dense()));
        ([r0, r1], exact_rank)
    });

    let modular_ranks: [usize; 2] = [
        per_block.iter().map(|(r, _)| r[0]).sum(),
        per_block.iter().map(|(r, _)| r[1]).sum(),
    ];
    let (rank, certified, method) = if exact {
        let r: usize = per_block.iter().map(|(_, e)| e.unwrap()).sum();
        (r, true, RankMethod::Exact)
    } else {
        let agree = modular_ranks[0] == modular_ranks[1];
        if agree {
            log::info!(
                "rank {} certified by prime pair ({}, {})",
                modular_ranks[0],
                primes[0],
                primes[1]
            );
        } else {
            log::warn!(
                "modular ranks disagree: {} mod {}, {} mod {}",
                modular_ranks[0],
                primes[0],
                modular_ranks[1],
                primes[1]
            );
        }
        (
            modular_ranks[0].max(modular_ranks[1]),
            agree,
            RankMethod::TwoPrime,
        )
    };

    let dim_source = BigUint::from(matrix.cols());
    let dim_target = BigUint::from(matrix.rows());
    let rank_big = BigUint::from(rank);
    RankResult {
        kernel_dim: &dim_source - &rank_big,
        cokernel_dim: &dim_target - &rank_big,
        dim_source,
        dim_target,
        rank: rank_big,
        certified,
        method,
        primes,
        modular_ranks,
        blocks: blocks.len(),
    }
}

/// Two distinct primes in `(2^30, 2^31)` drawn from `seed`.
pub fn choose_primes(seed: u64) -> [u64; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || next_prime(rng.random_range((1u64 << 30) + 1..(1u64 << 31) - (1 << 16)));
    let p = draw();
    let mut q = draw();
    while q == p {
        q = draw();
    }
    [p, q]
}

fn next_prime(mut n: u64) -> u64 {
    if n.is_multiple_of(2) {
        n += 1;
    }
    while !is_prime(n) {
        n += 2;
    }
    n
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((u128::from(acc) * u128::from(base)) % u128::from(p)) as u64;
        }
        base = ((u128::from(base) * u128::from(base)) % u128::from(p)) as u64;
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for `n < 2^32`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 61] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 7, 61] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((u128::from(x) * u128::from(x)) % u128::from(n)) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

struct Block {
    /// Dense entries restricted to this block's rows and columns.
    entries: Vec<Vec<BigInt>>,
}

impl Block {
    fn dense(&self) -> Vec<Vec<BigInt>> {
        self.entries.clone()
    }

    fn reduce(&self, p: u64) -> Vec<Vec<u64>> {
        let p_big = BigInt::from(p);
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.mod_floor(&p_big).to_u64().expect("residue fits"))
                    .collect()
            })
            .collect()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components of the bipartite row/column graph that contain at
/// least one nonzero entry.
fn split_blocks(matrix: &SparseMatrix) -> Vec<Block> {
    let rows = matrix.rows();
    let cols = matrix.cols();
    let mut parent: Vec<usize> = (0..rows + cols).collect();
    for c in 0..cols {
        for (r, _) in matrix.column(c) {
            let a = find(&mut parent, rows + c);
            let b = find(&mut parent, *r);
            if a != b {
                parent[a] = b;
            }
        }
    }

    let mut block_of_root = vec![usize::MAX; rows + cols];
    let mut members: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for c in 0..cols {
        if matrix.column(c).is_empty() {
            continue;
        }
        let root = find(&mut parent, rows + c);
        if block_of_root[root] == usize::MAX {
            block_of_root[root] = members.len();
            members.push((Vec::new(), Vec::new()));
        }
        members[block_of_root[root]].1.push(c);
    }
    for r in 0..rows {
        let root = find(&mut parent, r);
        if block_of_root[root] != usize::MAX {
            members[block_of_root[root]].0.push(r);
        }
    }

    members
        .into_iter()
        .map(|(block_rows, block_cols)| {
            let mut local_row = std::collections::HashMap::with_capacity(block_rows.len());
            for (i, r) in block_rows.iter().enumerate() {
                local_row.insert(*r, i);
            }
            let mut entries = vec![vec![BigInt::zero(); block_cols.len()]; block_rows.len()];
            for (j, c) in block_cols.iter().enumerate() {
                for (r, v) in matrix.column(*c) {
                    entries[local_row[r]][j] = v.clone();
                }
            }
            Block { entries }
        })
        .collect()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Gaussian elimination over `GF(p)`; `p < 2^31` keeps products in `u64`.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][c], p);
        for v in rows[rank][c..].iter_mut() {
            *v = *v * inv % p;
        }
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let factor = row[c];
            if factor == 0 {
                continue;
            }
            for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = (*x + p - factor * y % p) % p;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Fraction-free Gaussian elimination over `Z`; every division is exact.
pub fn rank_bareiss(mut rows: Vec<Vec<BigInt>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let p = &pivot_row[c];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in (c + 1)..ncols {
                let v = (p * &row[j] - &factor * &pivot_row[j]) / &prev;
                row[j] = v;
            }
            row[c] = BigInt::zero();
        }
        prev = p.clone();
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
