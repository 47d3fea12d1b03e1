use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::combinatorics::monomial_count;
use crate::error::{Error, Result};

use super::basis::MonomialBasis;
use super::operator::{apply_term, ContractionOperator};

pub const DEFAULT_SIZE_CAP: u64 = 200_000;

/// Column-major sparse integer matrix.
///
/// Rows index the target basis `Sym^{A+k} (x) Sym^{B-k}`, columns the source
/// basis `Sym^A (x) Sym^B`; a pair `(i, j)` of factor indices sits at
/// `i * len(second factor) + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, BigInt)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize, columns: Vec<Vec<(usize, BigInt)>>) -> Self {
        assert_eq!(columns.len(), cols);
        debug_assert!(columns
            .iter()
            .flatten()
            .all(|(r, v)| *r < rows && !v.is_zero()));
        Self {
            rows,
            cols,
            columns,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Vec::new(); cols])
    }

    pub fn from_dense(dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        let columns = (0..cols)
            .map(|c| {
                (0..rows)
                    .filter(|&r| dense[r][c] != 0)
                    .map(|r| (r, BigInt::from(dense[r][c])))
                    .collect()
            })
            .collect();
        Self::new(rows, cols, columns)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.columns[c]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                out[*r][c] = v.clone();
            }
        }
        out
    }
}

/// Dimensions of source and target of `op` at exponents `(a, b)`.
pub fn map_dimensions(n: u32, k: u32, a: u64, b: i64) -> (BigUint, BigUint) {
    let k = i64::from(k);
    let a = a as i64;
    (
        monomial_count(n, a) * monomial_count(n, b),
        monomial_count(n, a + k) * monomial_count(n, b - k),
    )
}

/// Matrix of `op : Sym^a (x) Sym^b -> Sym^{a+k} (x) Sym^{b-k}` in the
/// graded-lexicographic monomial bases.
pub fn build_matrix(
    op: &ContractionOperator,
    a: u64,
    b: i64,
    size_cap: u64,
) -> Result<SparseMatrix> {
    let k = i64::from(op.k);
    if b < k {
        return Err(Error::InvalidArgument(format!(
            "B = {b} is smaller than k = {k}"
        )));
    }
    let (source_dim, target_dim) = map_dimensions(op.n, op.k, a, b);
    let cap = BigUint::from(size_cap);
    if source_dim > cap || target_dim > cap {
        return Err(Error::SizeCap {
            source_dim: source_dim.to_string(),
            target_dim: target_dim.to_string(),
            cap: size_cap,
        });
    }
    let vars = op.n as usize + 1;
    let deg = |d: i64| u32::try_from(d).expect("degree fits in u32");
    let src_x = MonomialBasis::new(vars, deg(a as i64));
    let src_y = MonomialBasis::new(vars, deg(b));
    let dst_x = MonomialBasis::new(vars, deg(a as i64 + k));
    let dst_y = MonomialBasis::new(vars, deg(b - k));

    let rows = dst_x.len() * dst_y.len();
    let cols = src_x.len() * src_y.len();
    debug_assert_eq!(Some(rows), target_dim.to_usize());
    debug_assert_eq!(Some(cols), source_dim.to_usize());

    let mut columns = Vec::with_capacity(cols);
    for u in src_x.elements() {
        for v in src_y.elements() {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for term in &op.terms {
                if let Some((scale, x, y)) = apply_term(term, &u.exponents, &v.exponents) {
                    let i = dst_x.index_of(&x).expect("image lies in target basis");
                    let j = dst_y.index_of(&y).expect("image lies in target basis");
                    *acc.entry(i * dst_y.len() + j).or_default() += scale;
                }
            }
            columns.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
    }
    Ok(SparseMatrix::new(rows, cols, columns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::operator::{special_fiber_operator, Term};

    fn corner_operator() -> ContractionOperator {
        ContractionOperator::new(
            2,
            1,
            vec![Term {
                coeff: 1,
                alpha: vec![1, 0, 0],
                beta: vec![1, 0, 0],
            }],
        )
        .unwrap()
    }

    #[test]
    fn shapes() {
        let m = build_matrix(&special_fiber_operator(2, 1), 1, 1, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!((m.rows(), m.cols()), (6, 9));

        let m = build_matrix(&corner_operator(), 2, 1, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!((m.rows(), m.cols()), (10, 18));

        // k = B leaves Sym^0 on the second factor
        let m = build_matrix(&special_fiber_operator(2, 2), 3, 2, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!((m.rows(), m.cols()), (21, 60));
    }

    #[test]
    fn entries_follow_differentiation() {
        // n = 1, k = 1, A = 0, B = 2: source 1 (x) {y0^2, y0 y1, y1^2}
        // target {x0, x1} (x) {y0, y1}, rows (x0,y0) (x0,y1) (x1,y0) (x1,y1)
        let m = build_matrix(&special_fiber_operator(1, 1), 0, 2, DEFAULT_SIZE_CAP).unwrap();
        let dense: Vec<Vec<i64>> = m
            .to_dense()
            .iter()
            .map(|r| r.iter().map(|v| i64::try_from(v).unwrap()).collect())
            .collect();
        assert_eq!(
            dense,
            [vec![2, 0, 0], vec![0, 1, 0], vec![0, 1, 0], vec![0, 0, 2]]
        );
    }

    #[test]
    fn size_cap_names_both_dimensions() {
        let err = build_matrix(&special_fiber_operator(2, 1), 9, 3, 500).unwrap_err();
        match err {
            Error::SizeCap {
                source_dim,
                target_dim,
                cap,
            } => {
                assert_eq!(
                    (source_dim.as_str(), target_dim.as_str(), cap),
                    ("550", "396", 500)
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_small_b() {
        assert!(build_matrix(&special_fiber_operator(2, 2), 3, 1, DEFAULT_SIZE_CAP).is_err());
    }
}
