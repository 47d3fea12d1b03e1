//! Cohomology of `O(d)` on `P^n` and of `O(a1, a2)` on `P^n x P^n`.

use std::fmt;
use std::ops::Neg;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;

/// A class `a1 H1 + a2 H2` in the Neron-Severi lattice of `P^n x P^n`,
/// where `H1`, `H2` are the pulled-back hyperplanes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    pub a1: i64,
    pub a2: i64,
}

impl DivisorClass {
    pub const fn new(a1: i64, a2: i64) -> Self {
        Self { a1, a2 }
    }

    pub fn scale(self, m: i64) -> Self {
        Self::new(self.a1 * m, self.a2 * m)
    }

    /// Twist by `(-k, -k)`, the class of `mD - Y` for `Y` of bidegree `(k, k)`.
    pub fn twist(self, k: i64) -> Self {
        Self::new(self.a1 - k, self.a2 - k)
    }

    pub fn is_zero(self) -> bool {
        self.a1 == 0 && self.a2 == 0
    }
}

impl Neg for DivisorClass {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.a1, -self.a2)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a1, self.a2)
    }
}

/// Dimensions `h^0 .. h^top` of one sheaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyVector {
    n_ambient: u32,
    values: Vec<BigUint>,
}

impl CohomologyVector {
    fn zero(n_ambient: u32) -> Self {
        Self {
            n_ambient,
            values: vec![BigUint::zero(); n_ambient as usize + 1],
        }
    }

    pub fn n_ambient(&self) -> u32 {
        self.n_ambient
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    /// `h^q`; zero outside `[0, n_ambient]`.
    pub fn get(&self, q: i64) -> BigUint {
        usize::try_from(q)
            .ok()
            .and_then(|q| self.values.get(q).cloned())
            .unwrap_or_default()
    }

    /// Index and value of the nonzero entry, if any.
    pub fn support(&self) -> Option<(usize, &BigUint)> {
        self.values.iter().enumerate().find(|(_, v)| !v.is_zero())
    }

    pub fn nonzero_count(&self) -> usize {
        self.values.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn euler_characteristic(&self) -> BigInt {
        self.values
            .iter()
            .enumerate()
            .map(|(q, v)| {
                let v = BigInt::from(v.clone());
                if q % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum()
    }
}

/// Cohomology of `O(d)` on `P^n` (Bott's formula).
pub fn bott_cohomology(n: u32, d: i64) -> CohomologyVector {
    assert!(n >= 1, "projective space dimension must be positive");
    let mut out = CohomologyVector::zero(n);
    let n_i = i64::from(n);
    if d >= 0 {
        out.values[0] = binomial(n_i + d, n_i);
    } else if d <= -(n_i + 1) {
        out.values[n as usize] = binomial(-d - 1, n_i);
    }
    out
}

/// Cohomology of `O(a1, a2)` on `P^n x P^n` by the Kunneth convolution.
pub fn kunneth_cohomology(n: u32, divisor: DivisorClass) -> CohomologyVector {
    let left = bott_cohomology(n, divisor.a1);
    let right = bott_cohomology(n, divisor.a2);
    let mut out = CohomologyVector::zero(2 * n);
    for (j, lj) in left.values.iter().enumerate() {
        if lj.is_zero() {
            continue;
        }
        for (k, rk) in right.values.iter().enumerate() {
            if !rk.is_zero() {
                out.values[j + k] += lj * rk;
            }
        }
    }
    out
}

/// Euler characteristic of `O(a1, a2)` on `P^n x P^n`.
pub fn euler_characteristic(n: u32, divisor: DivisorClass) -> BigInt {
    kunneth_cohomology(n, divisor).euler_characteristic()
}

/// `chi(P^n, O(d))` as the polynomial `C(n + d, n)` extended to all `d`.
/// Independent of [`bott_cohomology`]; used as a cross-check.
pub fn euler_characteristic_projective(n: u32, d: i64) -> BigInt {
    let n_i = i64::from(n);
    // (d+1)(d+2)...(d+n)/n!
    let num: BigInt = (1..=n_i).map(|i| BigInt::from(d + i)).product();
    let den: BigInt = (1..=n_i).map(BigInt::from).product();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vals(v: &CohomologyVector) -> Vec<u64> {
        v.values()
            .iter()
            .map(|x| u64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn bott_examples() {
        assert_eq!(vals(&bott_cohomology(2, 3)), [10, 0, 0]);
        assert_eq!(vals(&bott_cohomology(2, -1)), [0, 0, 0]);
        assert_eq!(vals(&bott_cohomology(2, -4)), [0, 0, 3]);
        assert_eq!(vals(&bott_cohomology(2, -3)), [0, 0, 1]);
        assert_eq!(vals(&bott_cohomology(2, 0)), [1, 0, 0]);
    }

    #[test]
    fn acyclic_band_is_zero() {
        for n in 1..6 {
            for d in -(n as i64)..0 {
                assert_eq!(bott_cohomology(n, d).nonzero_count(), 0);
            }
        }
    }

    #[test]
    fn kunneth_examples() {
        let v = kunneth_cohomology(2, DivisorClass::new(1, 1));
        assert_eq!(vals(&v), [9, 0, 0, 0, 0]);
        let v = kunneth_cohomology(2, DivisorClass::new(2, -4));
        assert_eq!(vals(&v), [0, 0, 18, 0, 0]);
        let v = kunneth_cohomology(1, DivisorClass::new(-2, -2));
        assert_eq!(vals(&v), [0, 0, 1]);
    }

    #[test]
    fn euler_examples() {
        assert_eq!(
            euler_characteristic(2, DivisorClass::new(1, 1)),
            BigInt::from(9)
        );
        assert_eq!(
            euler_characteristic(2, DivisorClass::new(2, -4)),
            BigInt::from(18)
        );
        assert_eq!(
            euler_characteristic(1, DivisorClass::new(-1, 5)),
            BigInt::from(0)
        );
    }

    #[test]
    fn serre_duality_on_projective_space() {
        for n in 1..=5u32 {
            for d in -30..=30 {
                let v = bott_cohomology(n, d);
                let w = bott_cohomology(n, -d - i64::from(n) - 1);
                for q in 0..=i64::from(n) {
                    assert_eq!(v.get(q), w.get(i64::from(n) - q), "n={n} d={d} q={q}");
                }
            }
        }
    }

    #[test]
    fn get_outside_range_is_zero() {
        let v = bott_cohomology(2, 3);
        assert!(v.get(-1).is_zero());
        assert!(v.get(3).is_zero());
    }

    proptest! {
        #[test]
        fn kunneth_single_support_and_duality(n in 1u32..5, a1 in -25i64..25, a2 in -25i64..25) {
            let d = DivisorClass::new(a1, a2);
            let v = kunneth_cohomology(n, d);
            prop_assert!(v.nonzero_count() <= 1);
            let dual = kunneth_cohomology(n, DivisorClass::new(-a1 - i64::from(n) - 1, -a2 - i64::from(n) - 1));
            let top = 2 * i64::from(n);
            for i in 0..=top {
                prop_assert_eq!(v.get(i), dual.get(top - i));
            }
        }

        #[test]
        fn euler_is_product_of_factors(n in 1u32..5, a1 in -25i64..25, a2 in -25i64..25) {
            let d = DivisorClass::new(a1, a2);
            let product = euler_characteristic_projective(n, a1) * euler_characteristic_projective(n, a2);
            prop_assert_eq!(euler_characteristic(n, d), product);
        }

        #[test]
        fn euler_polynomial_in_m(n in 1u32..4, a1 in -4i64..5, a2 in -4i64..5) {
            // (2n+1)-th finite difference of m -> chi(n, mD) vanishes over m >= 1
            let d = DivisorClass::new(a1, a2);
            let order = 2 * n as usize + 1;
            let mut row: Vec<BigInt> = (1..=(order as i64 + 3))
                .map(|m| euler_characteristic(n, d.scale(m)))
                .collect();
            for _ in 0..order {
                row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
            }
            prop_assert!(row.iter().all(Zero::is_zero));
        }
    }
}
