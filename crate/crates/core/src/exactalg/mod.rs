//! Exact rational numbers, homogeneous polynomial arithmetic in three
//! variables, and exact dense linear algebra.
//!
//! All types are immutable after construction and all operations are pure;
//! everything here is safe to use from multiple threads.

mod matrix;
mod modp;
mod parse;
mod poly;

pub use matrix::{RatMatrix, SparseMat};
pub use modp::certified_rank;
pub use parse::{homogenize_affine, parse_form, parse_form_vars, parse_polynomial, FormError};
pub use poly::{homogenize, monomial_basis, monomial_count, monomial_index, Exp, Form, Poly};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

use num_bigint::BigInt;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n/d`.
pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient `C(k, 2)`, clamped to 0 for `k < 2`.
///
/// This truncation is used throughout the dimension formulas: the dimension
/// of the degree-`d` part of a free module generated in degree `g` is
/// `C(d - g + 2, 2)`, which is zero below the generator degree.
pub fn binom2(k: i64) -> u64 {
    if k < 2 {
        0
    } else {
        (k as u64) * (k as u64 - 1) / 2
    }
}

/// `dim S_d = C(d+2, 2)` for the three-variable polynomial ring.
pub fn dim_sd(d: u32) -> u64 {
    binom2(d as i64 + 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom2_clamps() {
        assert_eq!(binom2(-3), 0);
        assert_eq!(binom2(0), 0);
        assert_eq!(binom2(1), 0);
        assert_eq!(binom2(2), 1);
        assert_eq!(binom2(4), 6);
    }

    #[test]
    fn dim_sd_values() {
        assert_eq!(dim_sd(0), 1);
        assert_eq!(dim_sd(1), 3);
        assert_eq!(dim_sd(4), 15);
    }
}
