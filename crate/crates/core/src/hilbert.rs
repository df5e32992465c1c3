//! Hilbert-function post-processing: quadratic Hilbert-polynomial fitting,
//! postulation-number detection, and Hilbert-series numerator extraction.
//!
//! The graded modules arising here live over a three-variable ring, so the
//! eventual polynomial has degree at most 2 and exact interpolation through
//! three stabilized values suffices; a finite-difference guard over a
//! trailing window protects against fitting a not-yet-stabilized table.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exactalg::{rat, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HilbertError {
    #[error("table of {len} values is too short for window {window}")]
    TooShort { len: usize, window: usize },
    #[error("values still show third-difference activity in the last {window} steps; raise the degree cap")]
    NotStabilized { window: usize },
}

/// Exact quadratic `a d^2 + b d + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratic {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Quadratic {
    pub fn eval(&self, d: i64) -> Rational {
        let dd = rat(d);
        (&self.a * &dd + &self.b) * &dd + &self.c
    }

    pub fn eval_u64(&self, d: u32) -> Option<u64> {
        let v = self.eval(d as i64);
        if v.is_integer() && !v.is_negative() {
            num_traits::ToPrimitive::to_u64(v.numer())
        } else {
            None
        }
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (coef, pow) in [(&self.a, 2u32), (&self.b, 1), (&self.c, 0)] {
            if coef.is_zero() {
                continue;
            }
            let neg = coef.is_negative();
            let mag = coef.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match pow {
                2 => {
                    if mag != rat(1) {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "d^2")?;
                }
                1 => {
                    if mag != rat(1) {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "d")?;
                }
                _ => write!(f, "{mag}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Hilbert data bundle for one table.
#[derive(Clone, Debug)]
pub struct HilbertData {
    pub values: Vec<u64>,
    pub hp: Quadratic,
    /// Greatest degree where the table and the polynomial disagree; -1 if
    /// they agree everywhere in range.
    pub postulation: i64,
    /// Integer coefficients of the series numerator `p(t)`.
    pub series_numerator: Vec<BigInt>,
}

/// Fit the eventual quadratic through the last three values.
///
/// Requires every third finite difference within the trailing
/// `stabilization_window + 1` values to vanish, i.e. the tail must already
/// look like a quadratic; otherwise `NotStabilized`.
pub fn fit_hp(values: &[u64], stabilization_window: usize) -> Result<Quadratic, HilbertError> {
    let w = stabilization_window;
    if values.len() < w + 3 {
        return Err(HilbertError::TooShort {
            len: values.len(),
            window: w,
        });
    }
    let n = values.len();
    let tail = &values[n - (w + 1)..];
    for k in 3..tail.len() {
        let d3 = tail[k] as i128 - 3 * tail[k - 1] as i128 + 3 * tail[k - 2] as i128
            - tail[k - 3] as i128;
        if d3 != 0 {
            return Err(HilbertError::NotStabilized { window: w });
        }
    }
    // Exact quadratic through (n-3, v0), (n-2, v1), (n-1, v2) by finite
    // differences.
    let d0 = (n - 3) as i64;
    let v0 = rat(values[n - 3] as i64);
    let v1 = rat(values[n - 2] as i64);
    let v2 = rat(values[n - 1] as i64);
    let second = &v2 - &v1 - (&v1 - &v0);
    let a = second / rat(2);
    // b, c from two points once a is known.
    let b = (&v1 - &v0) - &a * rat(2 * d0 + 1);
    let c = &v0 - &a * rat(d0 * d0) - &b * rat(d0);
    Ok(Quadratic { a, b, c })
}

/// Greatest degree in range where the table disagrees with the polynomial;
/// -1 when they never disagree.
pub fn postulation(values: &[u64], hp: &Quadratic) -> i64 {
    for d in (0..values.len()).rev() {
        if hp.eval(d as i64) != rat(values[d] as i64) {
            return d as i64;
        }
    }
    -1
}

/// Coefficients of the Hilbert series numerator `p(t)`: third differences
/// of the table, truncated after the last nonzero entry.
///
/// Verifies that the numerator degree is consistent with stabilization:
/// every computed coefficient beyond `postulation + 3` must vanish.
pub fn series_numerator(values: &[u64], hp: &Quadratic) -> Result<Vec<BigInt>, HilbertError> {
    let post = postulation(values, hp);
    let mut p: Vec<BigInt> = Vec::with_capacity(values.len());
    let at = |k: i64| -> i128 {
        if k < 0 {
            0
        } else {
            values[k as usize] as i128
        }
    };
    for k in 0..values.len() as i64 {
        let c = at(k) - 3 * at(k - 1) + 3 * at(k - 2) - at(k - 3);
        p.push(BigInt::from(c));
    }
    for (k, c) in p.iter().enumerate() {
        if k as i64 > post + 3 && !c.is_zero() {
            return Err(HilbertError::NotStabilized { window: 0 });
        }
    }
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    Ok(p)
}

/// Expand `p(t) / (1-t)^3` back into a value table of the given length;
/// inverse of [`series_numerator`].
pub fn expand_series(numerator: &[BigInt], len: usize) -> Vec<BigInt> {
    // 1/(1-t)^3 has coefficients C(k+2, 2).
    let mut out = Vec::with_capacity(len);
    for d in 0..len as i64 {
        let mut acc = BigInt::zero();
        for (k, c) in numerator.iter().enumerate() {
            let k = k as i64;
            if k <= d {
                let m = d - k;
                acc += c * BigInt::from((m + 1) * (m + 2) / 2);
            }
        }
        out.push(acc);
    }
    out
}

/// Bundle fit + postulation + numerator.
pub fn analyze(values: &[u64], window: usize) -> Result<HilbertData, HilbertError> {
    let hp = fit_hp(values, window)?;
    let post = postulation(values, &hp);
    let series = series_numerator(values, &hp)?;
    Ok(HilbertData {
        values: values.to_vec(),
        hp,
        postulation: post,
        series_numerator: series,
    })
}
