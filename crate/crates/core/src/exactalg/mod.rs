//! Exact linear and multilinear algebra over `Z` and `Z[q]`.
//!
//! Determinants and Pfaffians use fraction-free elimination, so every
//! intermediate stays in the coefficient ring and each division is exact.
//! Permanents and Hafnians are exponential-time reference implementations
//! meant for small matrices.

mod poly;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use poly::Poly;

/// Largest dimension accepted by [`permanent`].
pub const PERMANENT_LIMIT: usize = 30;
/// Largest dimension accepted by [`hafnian`].
pub const HAFNIAN_LIMIT: usize = 16;

/// The commutative integral domains the engine computes over.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact quotient, `None` when `rhs` does not divide `self`.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
    /// Canonical representative of `{x, -x}`.
    fn normalize_sign(&self) -> Self;
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) || !Zero::is_zero(&(self % rhs)) {
            return None;
        }
        Some(self / rhs)
    }
    fn normalize_sign(&self) -> Self {
        self.abs()
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn one() -> Self {
        Poly::constant(1)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        Poly::div_exact(self, rhs)
    }
    fn normalize_sign(&self) -> Self {
        Poly::normalize_sign(self)
    }
}

/// Dense matrix whose rows and columns carry labels.
///
/// Label order has no meaning, so only the absolute determinant and the
/// absolute Pfaffian are well defined.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix<T> {
    rows: usize,
    cols: usize,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    data: Vec<T>,
}

impl<T: Ring> ExactMatrix<T> {
    pub fn zeros(row_labels: Vec<String>, col_labels: Vec<String>) -> Self {
        let (rows, cols) = (row_labels.len(), col_labels.len());
        ExactMatrix { rows, cols, row_labels, col_labels, data: vec![T::zero(); rows * cols] }
    }

    /// Unlabeled matrix from row vectors; labels default to indices.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        ExactMatrix {
            rows: n,
            cols: m,
            row_labels: (0..n).map(|i| i.to_string()).collect(),
            col_labels: (0..m).map(|j| j.to_string()).collect(),
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &T) {
        let k = i * self.cols + j;
        self.data[k] = self.data[k].add(v);
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> ExactMatrix<U> {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = ExactMatrix::zeros(self.col_labels.clone(), self.row_labels.clone());
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_skew(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero() && (i + 1..self.cols).all(|j| *self.get(i, j) == self.get(j, i).neg())
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[T]>::to_vec).collect()
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rows)
    }

    /// JSON rendering for debugging: labels plus entries as strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rows": self.row_labels,
            "cols": self.col_labels,
            "entries": self.to_rows().iter()
                .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

impl ExactMatrix<Poly> {
    /// Entrywise substitution `q = value`.
    pub fn eval(&self, value: &BigInt) -> ExactMatrix<BigInt> {
        self.map(|p| p.eval(value))
    }
}

/// Signed determinant by Bareiss fraction-free elimination.
///
/// Pivoting takes the first nonzero entry of the current column, scanning
/// rows downward; a column with no pivot means the determinant is zero.
pub fn det_signed<T: Ring>(m: &ExactMatrix<T>) -> Result<T> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(T::one());
    }
    let mut a = m.to_rows();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(T::zero()),
            }
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in rest.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..n {
                let num = row[j].mul(pivot).sub(&factor.mul(&pivot_row[j]));
                row[j] = num.div_exact(&prev).ok_or(Error::InexactDivision("Bareiss step"))?;
            }
            row[k] = T::zero();
        }
        prev = pivot.clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { d.neg() } else { d })
}

/// Determinant up to sign: the absolute value for integers, or the
/// polynomial with positive lowest coefficient.
pub fn det<T: Ring>(m: &ExactMatrix<T>) -> Result<T> {
    det_signed(m).map(|d| d.normalize_sign())
}

/// Signed Pfaffian of a skew-symmetric matrix by fraction-free skew
/// elimination.
///
/// After `k` pivot steps entry `(i, j)` holds the Pfaffian of the principal
/// minor on the first `2k` indices plus `{i, j}`. The Pfaffian analogue of
/// Sylvester's identity makes the division by the previous pivot exact.
/// Odd dimension gives zero.
pub fn pfaffian<T: Ring>(m: &ExactMatrix<T>) -> Result<T> {
    let n = m.require_square()?;
    if !m.is_skew() {
        return Err(Error::NotSkew);
    }
    if n % 2 == 1 {
        return Ok(T::zero());
    }
    if n == 0 {
        return Ok(T::one());
    }
    let mut a = m.to_rows();
    let mut negate = false;
    let mut prev = T::one();
    let mut k = 0;
    loop {
        if a[k][k + 1].is_zero() {
            match (k + 2..n).find(|&j| !a[k][j].is_zero()) {
                Some(j) => {
                    swap_index(&mut a, k + 1, j);
                    negate = !negate;
                }
                None => return Ok(T::zero()),
            }
        }
        if k + 2 == n {
            let p = a[k][k + 1].clone();
            return Ok(if negate { p.neg() } else { p });
        }
        let p = a[k][k + 1].clone();
        for i in k + 2..n {
            for j in i + 1..n {
                let num = p.mul(&a[i][j]).sub(&a[k][i].mul(&a[k + 1][j])).add(&a[k][j].mul(&a[k + 1][i]));
                let v = num.div_exact(&prev).ok_or(Error::InexactDivision("Pfaffian step"))?;
                a[j][i] = v.neg();
                a[i][j] = v;
            }
        }
        prev = p;
        k += 2;
    }
}

fn swap_index<T>(a: &mut [Vec<T>], i: usize, j: usize) {
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Absolute Pfaffian of an integer skew matrix, as the exact square root of
/// its determinant.
pub fn pfaffian_abs(m: &ExactMatrix<BigInt>) -> Result<BigInt> {
    let n = m.require_square()?;
    if !m.is_skew() {
        return Err(Error::NotSkew);
    }
    if n % 2 == 1 {
        return Ok(BigInt::from(0));
    }
    integer_sqrt(&det_signed(m)?)
}

/// Absolute Pfaffian of a polynomial skew matrix by skew elimination, with
/// `Pf^2 = Det` asserted.
pub fn pfaffian_abs_poly(m: &ExactMatrix<Poly>) -> Result<Poly> {
    let pf = pfaffian(m)?;
    if &pf * &pf != det_signed(m)? {
        return Err(Error::NotPerfectSquare);
    }
    Ok(pf.normalize_sign())
}

/// Exact square root of a perfect square.
pub fn integer_sqrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return Err(Error::NotPerfectSquare);
    }
    let r = n.sqrt();
    if &(&r * &r) != n {
        return Err(Error::NotPerfectSquare);
    }
    Ok(r)
}

/// Permanent by Ryser's inclusion-exclusion formula over column subsets,
/// visited in Gray-code order.
pub fn permanent(m: &ExactMatrix<BigInt>) -> Result<BigInt> {
    let n = m.require_square()?;
    if n > PERMANENT_LIMIT {
        return Err(Error::DimensionLimit { what: "permanent", dim: n, limit: PERMANENT_LIMIT });
    }
    if n == 0 {
        return Ok(BigInt::from(1));
    }
    match small_entries(m) {
        Some(a) if fits_i128(&a, n) => Ok(BigInt::from(ryser_i128(&a, n))),
        _ => Ok(ryser_generic(m, n)),
    }
}

fn small_entries(m: &ExactMatrix<BigInt>) -> Option<Vec<i64>> {
    m.data.iter().map(ToPrimitive::to_i64).collect()
}

fn fits_i128(a: &[i64], n: usize) -> bool {
    // Every row sum is bounded by the row's absolute sum; the whole
    // alternating sum is bounded by 2^n times the product of those bounds.
    let mut bits = n as f64;
    for row in a.chunks(n) {
        let s: f64 = row.iter().map(|&x| (x as f64).abs()).sum();
        bits += s.max(1.0).log2();
    }
    bits < 120.0
}

fn ryser_i128(a: &[i64], n: usize) -> i128 {
    let cols: Vec<Vec<(usize, i128)>> =
        (0..n).map(|j| (0..n).filter(|&i| a[i * n + j] != 0).map(|i| (i, a[i * n + j] as i128)).collect()).collect();
    let mut row_sums = vec![0i128; n];
    let mut in_set = vec![false; n];
    // Product of the nonzero row sums, plus the number of zero rows.
    let mut product: i128 = 1;
    let mut zeros = n;
    let mut total: i128 = 0;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let adding = !in_set[j];
        in_set[j] = adding;
        for &(i, v) in &cols[j] {
            let old = row_sums[i];
            let new = if adding { old + v } else { old - v };
            if old == 0 {
                zeros -= 1;
            } else {
                product /= old;
            }
            if new == 0 {
                zeros += 1;
            } else {
                product *= new;
            }
            row_sums[i] = new;
        }
        if zeros == 0 {
            // Gray code g(k) = k ^ (k >> 1) is the current subset.
            let subset_size = (k ^ (k >> 1)).count_ones() as usize;
            if (n - subset_size).is_multiple_of(2) {
                total += product;
            } else {
                total -= product;
            }
        }
    }
    total
}

fn ryser_generic(m: &ExactMatrix<BigInt>, n: usize) -> BigInt {
    let mut total = BigInt::from(0);
    for subset in 1u64..(1u64 << n) {
        let mut prod = BigInt::from(1);
        for i in 0..n {
            let s: BigInt = (0..n).filter(|&j| subset >> j & 1 == 1).map(|j| m.get(i, j)).sum();
            prod *= s;
            if Zero::is_zero(&prod) {
                break;
            }
        }
        if (n - subset.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}

/// Hafnian of a symmetric matrix: the sum over perfect matchings of the
/// index set, by recursion on the first unmatched index. Odd dimension
/// gives zero.
pub fn hafnian<T: Ring>(m: &ExactMatrix<T>) -> Result<T> {
    let n = m.require_square()?;
    if n > HAFNIAN_LIMIT {
        return Err(Error::DimensionLimit { what: "hafnian", dim: n, limit: HAFNIAN_LIMIT });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if n % 2 == 1 {
        return Ok(T::zero());
    }
    fn rec<T: Ring>(m: &ExactMatrix<T>, free: u32) -> T {
        if free == 0 {
            return T::one();
        }
        let i = free.trailing_zeros() as usize;
        let rest = free & !(1 << i);
        let mut acc = T::zero();
        let mut others = rest;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            let w = m.get(i, j);
            if !w.is_zero() {
                acc = acc.add(&w.mul(&rec(m, rest & !(1 << j))));
            }
        }
        acc
    }
    Ok(rec(m, ((1u64 << n) - 1) as u32))
}
