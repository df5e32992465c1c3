//! Modular elimination and certified exact ranks for large degree slices.
//!
//! A rank computed modulo a prime is always a lower bound for the rank over
//! the rationals (a nonzero minor mod p is nonzero over the integers).  An
//! upper bound comes from exhibiting exact left-kernel vectors: k verified
//! independent vectors `w` with `w^T M = 0` prove `rank <= rows - k`.  When
//! the two bounds meet, the rank is known exactly without any large exact
//! elimination.

use num_traits::Zero;

use super::matrix::SparseMat;
use super::Rational;

/// Mersenne prime 2^31 - 1; products of reduced values fit in u64.
pub const P31: u64 = (1 << 31) - 1;
/// Mersenne prime 2^61 - 1; products are reduced through u128.
pub const P61: u64 = (1 << 61) - 1;

#[inline]
fn reduce31(x: u64) -> u64 {
    let mut r = (x & P31) + (x >> 31);
    r = (r & P31) + (r >> 31);
    if r >= P31 {
        r - P31
    } else {
        r
    }
}

#[inline]
fn reduce61(x: u128) -> u64 {
    let mut r = ((x & P61 as u128) + (x >> 61)) as u128;
    r = (r & P61 as u128) + (r >> 61);
    let mut r = r as u64;
    if r >= P61 {
        r -= P61;
    }
    r
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    match p {
        P31 => reduce31(a * b),
        P61 => reduce61(a as u128 * b as u128),
        _ => ((a as u128 * b as u128) % p as u128) as u64,
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Rank of a sparse matrix modulo `p` by dense forward elimination.
pub(crate) fn rank_mod_p(mat: &SparseMat, p: u64) -> Option<usize> {
    let rows = mat.rows();
    let cols = mat.cols();
    if rows == 0 || cols == 0 {
        return Some(0);
    }
    let reduced = mat.to_mod_p(p)?;
    let mut m = vec![0u64; rows * cols];
    for (j, col) in reduced.iter().enumerate() {
        for &(i, v) in col {
            m[i as usize * cols + j] = v;
        }
    }
    let mut rank = 0usize;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&i| m[i * cols + col] != 0) else {
            continue;
        };
        if pr != rank {
            let (a, b) = m.split_at_mut(pr * cols);
            a[rank * cols + col..rank * cols + cols].swap_with_slice(&mut b[col..cols]);
        }
        let inv = inv_mod(m[rank * cols + col], p);
        for i in rank + 1..rows {
            let head = m[i * cols + col];
            if head == 0 {
                continue;
            }
            let factor = p - mul_mod(head, inv, p);
            let (pivot_row, work_row) = {
                let (a, b) = m.split_at_mut(i * cols);
                (&a[rank * cols..rank * cols + cols], &mut b[..cols])
            };
            for j in col..cols {
                let pv = pivot_row[j];
                if pv != 0 {
                    let mut v = work_row[j] + mul_mod(factor, pv, p);
                    if v >= p {
                        v -= p;
                    }
                    work_row[j] = v;
                }
            }
        }
        rank += 1;
    }
    Some(rank)
}

/// Exact rank from a modular lower bound and a verified left-kernel upper
/// bound.  Returns `None` when the bounds do not meet (callers then fall
/// back to full exact elimination).
pub fn certified_rank(mat: &SparseMat, left_kernel_candidates: &[Vec<Rational>]) -> Option<usize> {
    let rows = mat.rows();
    // Verify each candidate annihilates every column, exactly.
    for w in left_kernel_candidates {
        assert_eq!(w.len(), rows);
        for j in 0..mat.cols() {
            let mut acc = Rational::zero();
            for (i, v) in mat.column(j) {
                if !w[*i as usize].is_zero() {
                    acc += &w[*i as usize] * v;
                }
            }
            if !acc.is_zero() {
                return None;
            }
        }
    }
    // Verify independence of the candidates.
    let k = left_kernel_candidates.len();
    if k > 0 {
        let cand = super::matrix::RatMatrix::from_rows(left_kernel_candidates.to_vec());
        if cand.rank() != k {
            return None;
        }
    }
    let upper = rows - k;
    for p in [P31, P61] {
        if let Some(lower) = rank_mod_p(mat, p) {
            debug_assert!(lower <= upper);
            if lower == upper {
                return Some(lower);
            }
        }
    }
    None
}
