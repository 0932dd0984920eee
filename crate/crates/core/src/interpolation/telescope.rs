//! The Euler telescoping identity as an exact identity of truncated formal
//! series in u = χ(𝔭)N𝔭^{-s}.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::fourier::char_hat;

/// Coefficients of u·Σ_{n≥−1} Ĉhar_𝔭(𝔭^n)·u^n up to u^m.
pub fn char_hat_series(np: u64, m: usize) -> Vec<BigRational> {
    (0..=m)
        .map(|j| {
            let (a, b) = char_hat(np, j as i64 - 1);
            BigRational::new(a, b)
        })
        .collect()
}

/// Coefficients of u·(1 − N𝔭^{-1}u^{-1})·(1 − u)^{-1} = (u − 1/N𝔭)·Σ u^k up to u^m.
pub fn closed_form_series(np: u64, m: usize) -> Vec<BigRational> {
    let inv = BigRational::new(BigInt::one(), BigInt::from(np));
    let mut out = alloc::vec![BigRational::zero(); m + 1];
    // (u − 1/N)·Σ_{k≥0} u^k
    for (j, c) in out.iter_mut().enumerate() {
        if j >= 1 {
            *c += BigRational::one();
        }
        *c -= &inv;
    }
    out
}

/// Σ_{n≥−1} u^n Ĉhar_𝔭(𝔭^n) = (1 − N𝔭^{-1}u^{-1})(1 − u)^{-1}, exactly to
/// order `m`, both as series and after clearing the denominator 1 − u.
pub fn euler_telescope_check(np: u64, m: usize) -> bool {
    if m < 3 || np < 2 {
        return false;
    }
    let lhs = char_hat_series(np, m);
    if lhs != closed_form_series(np, m) {
        return false;
    }
    // (1 − u)·lhs must be the polynomial u − 1/N up to order m
    let inv = BigRational::new(BigInt::one(), BigInt::from(np));
    (0..=m).all(|j| {
        let mut c = lhs[j].clone();
        if j >= 1 {
            c -= &lhs[j - 1];
        }
        let want = match j {
            0 => -inv.clone(),
            1 => BigRational::one(),
            _ => BigRational::zero(),
        };
        c == want
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_listed_norms() {
        for np in [2, 3, 4, 5, 7, 9, 25, 49] {
            assert!(euler_telescope_check(np, 12), "N𝔭 = {np}");
        }
        assert!(euler_telescope_check(5, 10));
    }

    #[test]
    fn leading_term() {
        let s = char_hat_series(5, 3);
        assert_eq!(s[0], BigRational::new(BigInt::from(-1), BigInt::from(5)));
    }

    #[test]
    fn large_norm_limit_is_geometric() {
        let s = char_hat_series(1_000_003, 6);
        for c in &s[1..] {
            let d = (c - BigRational::one()) * BigRational::from_integer(BigInt::from(1_000_003));
            assert_eq!(d, BigRational::from_integer(BigInt::from(-1)));
        }
    }
}
