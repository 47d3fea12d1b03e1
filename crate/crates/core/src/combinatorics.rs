//! Exact integer combinatorics shared by both engines.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Binomial coefficient `C(p, q)`, zero whenever `p < q` or `q < 0`.
///
/// No generalized (negative upper index) binomials: callers dispatch
/// sign ranges themselves.
pub fn binomial(p: i64, q: i64) -> BigUint {
    if q < 0 || p < q {
        return BigUint::zero();
    }
    // p >= q >= 0 here
    let q = q.min(p - q) as u64;
    let p = p as u64;
    let mut acc = BigUint::one();
    for i in 0..q {
        acc *= p - i;
        acc /= i + 1;
    }
    acc
}

/// `n!`
pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Falling factorial `top (top-1) ... (top-len+1)`, i.e. `top!/(top-len)!`.
/// Zero when `len > top`.
pub fn falling_factorial(top: u64, len: u64) -> BigUint {
    if len > top {
        return BigUint::zero();
    }
    ((top - len + 1)..=top).fold(BigUint::one(), |acc, i| acc * i)
}

/// Multinomial coefficient `(sum parts)! / prod(parts_j!)`.
pub fn multinomial(parts: &[u32]) -> BigUint {
    let mut acc = BigUint::one();
    let mut running = 0i64;
    for &p in parts {
        running += i64::from(p);
        acc *= binomial(running, i64::from(p));
    }
    acc
}

/// Number of monomials of degree `d` in `n + 1` variables.
pub fn monomial_count(n: u32, d: i64) -> BigUint {
    if d < 0 {
        return BigUint::zero();
    }
    binomial(d + i64::from(n), i64::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(5, 0), big(1));
        assert_eq!(binomial(5, 5), big(1));
        assert_eq!(binomial(2, 5), big(0));
        assert_eq!(binomial(5, -1), big(0));
        assert_eq!(binomial(-3, 2), big(0));
        assert_eq!(binomial(0, 0), big(1));
    }

    #[test]
    fn binomial_matches_pascal() {
        for p in 1..40i64 {
            for q in 1..p {
                assert_eq!(binomial(p, q), binomial(p - 1, q - 1) + binomial(p - 1, q));
            }
        }
    }

    #[test]
    fn binomial_does_not_overflow() {
        // C(100, 50)
        let expected: BigUint = "100891344545564193334812497256".parse().unwrap();
        assert_eq!(binomial(100, 50), expected);
    }

    #[test]
    fn falling_and_factorial() {
        assert_eq!(falling_factorial(3, 1), big(3));
        assert_eq!(falling_factorial(3, 3), big(6));
        assert_eq!(falling_factorial(3, 0), big(1));
        assert_eq!(falling_factorial(2, 3), big(0));
        assert_eq!(factorial(0), big(1));
        assert_eq!(factorial(6), big(720));
    }

    #[test]
    fn multinomial_small() {
        assert_eq!(multinomial(&[1, 1]), big(2));
        assert_eq!(multinomial(&[2, 0, 0]), big(1));
        assert_eq!(multinomial(&[2, 1, 1]), big(12));
    }
}
