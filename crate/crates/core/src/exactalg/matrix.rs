//! Exact dense linear algebra over the rationals.
//!
//! Two elimination strategies are provided and cross-checked in the test
//! suite: fraction-free (Bareiss-style) elimination on integer matrices for
//! ranks, and plain rational reduction to reduced row echelon form for
//! kernel bases.  Column scaling by denominators is applied before the
//! fraction-free pass; it does not change rank or kernel dimension.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::Rational;

/// Dense matrix over exact rationals in row-major layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::from_integer(BigInt::from(1));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Exact rank via fraction-free elimination on the cleared integer
    /// matrix.
    pub fn rank(&self) -> usize {
        let int = self.to_integer_cols();
        bareiss_rank(int, self.rows, self.cols)
    }

    /// Exact rank via plain rational reduction.  Used to cross-check the
    /// fraction-free route.
    pub fn rank_rational(&self) -> usize {
        let (_, pivots) = rref(self.clone());
        pivots.len()
    }

    /// Basis of the right kernel, derived from the reduced row echelon form.
    ///
    /// One vector per free column, carrying 1 in that column and the negated
    /// reduced entries in the pivot columns; the result is deterministic.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = rref(self.clone());
        kernel_from_rref(&r, &pivots)
    }

    /// Determinant of a square matrix (fraction-free, with denominator
    /// tracking).
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Rational::from_integer(BigInt::from(1));
        }
        // Clear denominators row-wise, remembering the scale.
        let mut scale = Rational::from_integer(BigInt::from(1));
        let mut m: Vec<BigInt> = Vec::with_capacity(n * n);
        for i in 0..n {
            let mut lcm = BigInt::from(1);
            for j in 0..n {
                lcm = lcm.lcm(self.at(i, j).denom());
            }
            scale *= Rational::new(BigInt::from(1), lcm.clone());
            for j in 0..n {
                let q = self.at(i, j);
                m.push(q.numer() * (&lcm / q.denom()));
            }
        }
        let det = bareiss_determinant(m, n);
        scale * Rational::from_integer(det)
    }

    /// Row-wise denominator clearing; columns keep their meaning.
    fn to_integer_cols(&self) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for i in 0..self.rows {
            let mut lcm = BigInt::from(1);
            for j in 0..self.cols {
                lcm = lcm.lcm(self.at(i, j).denom());
            }
            for j in 0..self.cols {
                let q = self.at(i, j);
                out.push(q.numer() * (&lcm / q.denom()));
            }
        }
        out
    }
}

/// Integer row echelon by cross-multiplication with content stripping:
/// every row update is `row * pivot - pivot_row * head` followed by
/// division by the row's content.  Exact, fraction-free, and in practice
/// far smaller intermediate entries than strict minor arithmetic on the
/// structured matrices arising here.
///
/// Returns the pivot rows in elimination order as `(pivot_col, row)`.
pub(crate) fn primitive_echelon(m: Vec<Vec<BigInt>>, cols: usize) -> Vec<(usize, Vec<BigInt>)> {
    let mut active: Vec<Vec<BigInt>> = m.into_iter().filter(|r| !all_zero(r)).collect();
    let mut pivots: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for col in 0..cols {
        if active.is_empty() {
            break;
        }
        // Shortest nonzero head entry as pivot.
        let mut best: Option<(usize, u64)> = None;
        for (i, row) in active.iter().enumerate() {
            if !row[col].is_zero() {
                let bits = row[col].bits();
                if best.map_or(true, |(_, b)| bits < b) {
                    best = Some((i, bits));
                }
            }
        }
        let Some((pi, _)) = best else { continue };
        let mut pivot_row = active.swap_remove(pi);
        strip_content(&mut pivot_row);
        let p = pivot_row[col].clone();
        let mut next_active = Vec::with_capacity(active.len());
        for mut row in active {
            if row[col].is_zero() {
                next_active.push(row);
                continue;
            }
            let head = std::mem::replace(&mut row[col], BigInt::zero());
            for j in col + 1..cols {
                if pivot_row[j].is_zero() {
                    if !row[j].is_zero() {
                        row[j] = &row[j] * &p;
                    }
                } else {
                    row[j] = &row[j] * &p - &pivot_row[j] * &head;
                }
            }
            strip_content(&mut row);
            if !all_zero(&row) {
                next_active.push(row);
            }
        }
        active = next_active;
        pivots.push((col, pivot_row));
    }
    pivots
}

fn all_zero(row: &[BigInt]) -> bool {
    row.iter().all(Zero::is_zero)
}

fn strip_content(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
            if g == BigInt::from(1) {
                return;
            }
        }
    }
    if g > BigInt::from(1) {
        for v in row.iter_mut() {
            if !v.is_zero() {
                *v = &*v / &g;
            }
        }
    }
}

/// Kernel basis from an integer echelon by fraction-free back-substitution:
/// each kernel vector is carried as an integer vector with content
/// stripping, scaling up by the (reduced) pivot where a division would be
/// needed; a single rational normalization at the end restores the unit at
/// the free column.  One vector per free column, unit there, zero at the
/// other free columns; with that normalization the kernel vector is
/// unique, so the output matches the reduced-echelon construction.
pub(crate) fn kernel_from_echelon(
    pivots: &[(usize, Vec<BigInt>)],
    cols: usize,
) -> Vec<Vec<Rational>> {
    let is_pivot = {
        let mut v = vec![false; cols];
        for &(c, _) in pivots {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for f in 0..cols {
        if is_pivot[f] {
            continue;
        }
        let mut x = vec![BigInt::zero(); cols];
        x[f] = BigInt::from(1);
        for (c, row) in pivots.iter().rev() {
            if *c >= f {
                continue;
            }
            let mut acc = BigInt::zero();
            for j in (c + 1)..=f {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc += &row[j] * &x[j];
                }
            }
            if acc.is_zero() {
                continue;
            }
            let mut p = row[*c].clone();
            let g = acc.gcd(&p);
            acc /= &g;
            p /= &g;
            if p != BigInt::from(1) && p != BigInt::from(-1) {
                for v in x.iter_mut() {
                    if !v.is_zero() {
                        *v *= &p;
                    }
                }
            } else if p == BigInt::from(-1) {
                acc = -acc;
            }
            x[*c] = -acc;
            strip_content(&mut x);
        }
        let unit = x[f].clone();
        debug_assert!(!unit.is_zero());
        let vec: Vec<Rational> = x
            .into_iter()
            .map(|v| {
                if v.is_zero() {
                    Rational::zero()
                } else {
                    Rational::new(v, unit.clone())
                }
            })
            .collect();
        basis.push(vec);
    }
    basis
}

/// Fraction-free row echelon rank of an integer matrix (consumed).
pub(crate) fn bareiss_rank(mut m: Vec<BigInt>, rows: usize, cols: usize) -> usize {
    let idx = |i: usize, j: usize| i * cols + j;
    let mut rank = 0usize;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        if rank == rows {
            break;
        }
        // Smallest nonzero pivot keeps intermediate entries short.
        let mut pivot_row = None;
        let mut best_bits = u64::MAX;
        for i in rank..rows {
            let v = &m[idx(i, col)];
            if !v.is_zero() {
                let bits = v.bits();
                if bits < best_bits {
                    best_bits = bits;
                    pivot_row = Some(i);
                }
            }
        }
        let Some(p) = pivot_row else { continue };
        if p != rank {
            for j in col..cols {
                m.swap(idx(p, j), idx(rank, j));
            }
        }
        let pivot = m[idx(rank, col)].clone();
        for i in rank + 1..rows {
            let head = std::mem::replace(&mut m[idx(i, col)], BigInt::zero());
            if head.is_zero() {
                // Still must rescale the trailing entries for exactness.
                for j in col + 1..cols {
                    let v = &m[idx(i, j)] * &pivot;
                    m[idx(i, j)] = &v / &prev;
                }
                continue;
            }
            for j in col + 1..cols {
                let v = &m[idx(i, j)] * &pivot - &m[idx(rank, j)] * &head;
                debug_assert!((&v % &prev).is_zero());
                m[idx(i, j)] = &v / &prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

fn bareiss_determinant(mut m: Vec<BigInt>, n: usize) -> BigInt {
    let idx = |i: usize, j: usize| i * n + j;
    let mut prev = BigInt::from(1);
    let mut sign = 1i32;
    for k in 0..n {
        if m[idx(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[idx(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                m.swap(idx(p, j), idx(k, j));
            }
            sign = -sign;
        }
        let pivot = m[idx(k, k)].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[idx(i, j)] * &pivot - &m[idx(i, k)] * &m[idx(k, j)];
                m[idx(i, j)] = &v / &prev;
            }
            m[idx(i, k)] = BigInt::zero();
        }
        prev = pivot;
    }
    let det = m[idx(n - 1, n - 1)].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Reduced row echelon form; returns the reduced matrix and the pivot
/// columns.  The RREF is unique, so the result does not depend on pivot row
/// choices.
fn rref(mut m: RatMatrix) -> (RatMatrix, Vec<usize>) {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for col in 0..cols {
        if r == rows {
            break;
        }
        // Prefer short entries as pivots to limit fraction growth.
        let mut pivot_row = None;
        let mut best = u64::MAX;
        for i in r..rows {
            let v = m.at(i, col);
            if !v.is_zero() {
                let sz = v.numer().bits() + v.denom().bits();
                if sz < best {
                    best = sz;
                    pivot_row = Some(i);
                }
            }
        }
        let Some(p) = pivot_row else { continue };
        if p != r {
            for j in col..cols {
                let tmp = m.at(p, j).clone();
                let other = m.at(r, j).clone();
                m.set(p, j, other);
                m.set(r, j, tmp);
            }
        }
        let inv = {
            let piv = m.at(r, col).clone();
            piv.recip()
        };
        for j in col..cols {
            let v = m.at(r, j) * &inv;
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || m.at(i, col).is_zero() {
                continue;
            }
            let factor = m.at(i, col).clone();
            for j in col..cols {
                let v = m.at(i, j) - &(m.at(r, j) * &factor);
                m.set(i, j, v);
            }
        }
        pivots.push(col);
        r += 1;
    }
    (m, pivots)
}

fn kernel_from_rref(r: &RatMatrix, pivots: &[usize]) -> Vec<Vec<Rational>> {
    let cols = r.cols;
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; cols];
        for &p in pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::with_capacity(cols - pivots.len());
    for f in 0..cols {
        if pivot_set[f] {
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::from_integer(BigInt::from(1));
        for (row, &p) in pivots.iter().enumerate() {
            let entry = r.at(row, f);
            if !entry.is_zero() {
                v[p] = -entry.clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Sparse column-major matrix used while assembling degree-slice systems.
///
/// Row indices within one column are strictly increasing.
#[derive(Clone, Debug)]
pub struct SparseMat {
    rows: usize,
    columns: Vec<Vec<(u32, Rational)>>,
}

impl SparseMat {
    pub fn new(rows: usize) -> Self {
        SparseMat {
            rows,
            columns: Vec::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// Append a column given as (row, value) pairs; entries with equal row
    /// indices are combined.
    pub fn push_column(&mut self, mut entries: Vec<(u32, Rational)>) {
        entries.sort_by_key(|&(r, _)| r);
        let mut merged: Vec<(u32, Rational)> = Vec::with_capacity(entries.len());
        for (r, v) in entries {
            debug_assert!((r as usize) < self.rows);
            if let Some(last) = merged.last_mut() {
                if last.0 == r {
                    last.1 += v;
                    continue;
                }
            }
            merged.push((r, v));
        }
        merged.retain(|(_, v)| !v.is_zero());
        self.columns.push(merged);
    }

    pub fn column(&self, j: usize) -> &[(u32, Rational)] {
        &self.columns[j]
    }

    pub fn to_dense(&self) -> RatMatrix {
        let mut m = RatMatrix::zero(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                m.set(*i as usize, j, v.clone());
            }
        }
        m
    }

    /// Integer rows with column-wise cleared denominators (column scaling
    /// does not change the rank).
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        let cols = self.cols();
        let mut rows = vec![vec![BigInt::zero(); cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            let mut lcm = BigInt::from(1);
            for (_, v) in col {
                lcm = lcm.lcm(v.denom());
            }
            for (i, v) in col {
                rows[*i as usize][j] = v.numer() * (&lcm / v.denom());
            }
        }
        rows
    }

    /// Exact rank (fraction-free with content stripping, after clearing
    /// column denominators).
    pub fn rank_exact(&self) -> usize {
        primitive_echelon(self.integer_rows(), self.cols()).len()
    }

    /// Deterministic kernel basis: integer echelon plus exact
    /// back-substitution.  Column scaling is undone afterwards so the
    /// kernel belongs to the original matrix.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let cols = self.cols();
        // Track the per-column scale applied while clearing denominators.
        let mut scales: Vec<BigInt> = Vec::with_capacity(cols);
        let mut rows = vec![vec![BigInt::zero(); cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            let mut lcm = BigInt::from(1);
            for (_, v) in col {
                lcm = lcm.lcm(v.denom());
            }
            for (i, v) in col {
                rows[*i as usize][j] = v.numer() * (&lcm / v.denom());
            }
            scales.push(lcm);
        }
        let pivots = primitive_echelon(rows, cols);
        let mut kernel = kernel_from_echelon(&pivots, cols);
        // The scaled matrix column is s_j * col_j, so a kernel vector y of
        // the scaled matrix maps to x_j = s_j * y_j for the original;
        // renormalizing by the free-column entry restores the unit there.
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(c, _)| c).collect();
        let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
        for (x, &f) in kernel.iter_mut().zip(free_cols.iter()) {
            for (j, v) in x.iter_mut().enumerate() {
                if !v.is_zero() {
                    *v *= Rational::from_integer(scales[j].clone());
                }
            }
            let lead = x[f].clone();
            debug_assert!(!lead.is_zero());
            if lead != Rational::from_integer(BigInt::from(1)) {
                let inv = lead.recip();
                for v in x.iter_mut() {
                    if !v.is_zero() {
                        *v *= &inv;
                    }
                }
            }
        }
        kernel
    }

    /// Reduce entries modulo a prime, clearing denominators column-wise.
    /// Returns `None` when a denominator vanishes mod `p`.
    pub(crate) fn to_mod_p(&self, p: u64) -> Option<Vec<Vec<(u32, u64)>>> {
        let pm = BigInt::from(p);
        let to_u = |x: &BigInt| -> u64 {
            let m = x.mod_floor(&pm);
            m.to_u64_digits().1.first().copied().unwrap_or(0)
        };
        let mut out = Vec::with_capacity(self.columns.len());
        for col in &self.columns {
            let mut c = Vec::with_capacity(col.len());
            for (i, v) in col {
                let den = to_u(v.denom());
                if den == 0 {
                    return None;
                }
                let num = to_u(v.numer());
                let entry = super::modp::mul_mod(num, super::modp::inv_mod(den, p), p);
                c.push((*i, entry));
            }
            out.push(c);
        }
        Some(out)
    }
}
