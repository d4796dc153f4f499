use std::fmt::Write as _;
use std::ops::{Add, AddAssign, Mul};

use num_traits::Zero;

use super::C64;

/// Coordinate-format accumulator. Duplicate entries are summed, in insertion
/// order, when converted to CSR.
#[derive(Clone, Debug)]
pub struct Triplets<T> {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, T)>,
}

impl<T: Copy + Zero + AddAssign> Triplets<T> {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, entries: Vec::new() }
    }

    pub fn with_capacity(nrows: usize, ncols: usize, cap: usize) -> Self {
        Self { nrows, ncols, entries: Vec::with_capacity(cap) }
    }

    pub fn push(&mut self, i: usize, j: usize, v: T) {
        debug_assert!(i < self.nrows && j < self.ncols);
        self.entries.push((i, j, v));
    }

    pub fn to_csr(mut self) -> CsrMatrix<T> {
        // stable sort keeps summation order deterministic
        self.entries.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; self.nrows + 1];
        let mut col_idx = Vec::with_capacity(self.entries.len());
        let mut values: Vec<T> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for &(i, j, v) in &self.entries {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..self.nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix { nrows: self.nrows, ncols: self.ncols, row_ptr, col_idx, values }
    }
}

/// Compressed sparse row matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T> CsrMatrix<T>
where
    T: Copy + Zero + AddAssign + Add<Output = T> + Mul<Output = T>,
{
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, row_ptr: vec![0; nrows + 1], col_idx: vec![], values: vec![] }
    }

    pub fn identity(n: usize, one: T) -> Self {
        Self {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![one; n],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Iterator over `(col, value)` of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[r.clone()].binary_search(&j) {
            Ok(k) => self.values[r.start + k],
            Err(_) => T::zero(),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.nrows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn mul_vec<X>(&self, x: &[X]) -> Vec<X>
    where
        X: Copy + Zero + AddAssign + Mul<T, Output = X>,
    {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows)
            .map(|i| {
                let mut acc = X::zero();
                for (j, v) in self.row(i) {
                    acc += x[j] * v;
                }
                acc
            })
            .collect()
    }

    /// `self^T x` without forming the transpose.
    pub fn mul_vec_transpose<X>(&self, x: &[X]) -> Vec<X>
    where
        X: Copy + Zero + AddAssign + Mul<T, Output = X>,
    {
        assert_eq!(x.len(), self.nrows);
        let mut y = vec![X::zero(); self.ncols];
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                y[j] += x[i] * v;
            }
        }
        y
    }

    pub fn transpose(&self) -> Self {
        let mut t = Triplets::with_capacity(self.ncols, self.nrows, self.nnz());
        for (i, j, v) in self.triplets() {
            t.push(j, i, v);
        }
        t.to_csr()
    }

    pub fn map<U, F>(&self, f: F) -> CsrMatrix<U>
    where
        F: Fn(T) -> U,
    {
        CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `a * self + b * other`.
    pub fn lin_comb(&self, a: T, other: &Self, b: T) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut t = Triplets::with_capacity(self.nrows, self.ncols, self.nnz() + other.nnz());
        for (i, j, v) in self.triplets() {
            t.push(i, j, a * v);
        }
        for (i, j, v) in other.triplets() {
            t.push(i, j, b * v);
        }
        t.to_csr()
    }

    /// Sparse product `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let mut t = Triplets::new(self.nrows, other.ncols);
        let mut acc = vec![T::zero(); other.ncols];
        let mut mark = vec![usize::MAX; other.ncols];
        let mut cols = Vec::new();
        for i in 0..self.nrows {
            cols.clear();
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    if mark[j] != i {
                        mark[j] = i;
                        acc[j] = T::zero();
                        cols.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            cols.sort_unstable();
            for &j in &cols {
                t.push(i, j, acc[j]);
            }
        }
        t.to_csr()
    }

    /// Embed `self` at offset `(r0, c0)` into a larger triplet list.
    pub fn push_into(&self, t: &mut Triplets<T>, r0: usize, c0: usize, scale: T) {
        for (i, j, v) in self.triplets() {
            t.push(r0 + i, c0 + j, scale * v);
        }
    }

    /// Submatrix on the given (sorted or not) row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut cmap = vec![usize::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            cmap[c] = k;
        }
        let mut t = Triplets::new(rows.len(), cols.len());
        for (ki, &r) in rows.iter().enumerate() {
            for (j, v) in self.row(r) {
                if cmap[j] != usize::MAX {
                    t.push(ki, cmap[j], v);
                }
            }
        }
        t.to_csr()
    }
}

impl CsrMatrix<f64> {
    pub fn to_complex(&self) -> CsrMatrix<C64> {
        self.map(|v| C64::new(v, 0.0))
    }

    pub fn to_dense(&self) -> faer::Mat<f64> {
        let mut m = faer::Mat::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] += v;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        let mut s = vec![0.0; self.ncols];
        for (_, j, v) in self.triplets() {
            s[j] += v.abs();
        }
        s.into_iter().fold(0.0, f64::max)
    }

    pub fn mul_dense(&self, b: faer::MatRef<'_, f64>) -> faer::Mat<f64> {
        assert_eq!(self.ncols, b.nrows());
        let mut out = faer::Mat::zeros(self.nrows, b.ncols());
        for c in 0..b.ncols() {
            for i in 0..self.nrows {
                let mut acc = 0.0;
                for (j, v) in self.row(i) {
                    acc += v * b[(j, c)];
                }
                out[(i, c)] = acc;
            }
        }
        out
    }
}

impl CsrMatrix<C64> {
    pub fn to_dense(&self) -> faer::Mat<C64> {
        let mut m = faer::Mat::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] += v;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn norm_1(&self) -> f64 {
        let mut s = vec![0.0; self.ncols];
        for (_, j, v) in self.triplets() {
            s[j] += v.norm();
        }
        s.into_iter().fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().map(|v| v.conj())
    }

    /// Max entrywise deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        if self.nrows != self.ncols {
            return f64::INFINITY;
        }
        let a = self.adjoint();
        self.lin_comb(C64::new(1.0, 0.0), &a, C64::new(-1.0, 0.0)).max_abs()
    }

    /// Matrix Market coordinate export (complex general).
    pub fn to_matrix_market(&self) -> String {
        let mut s = String::new();
        s.push_str("%%MatrixMarket matrix coordinate complex general\n");
        let _ = writeln!(s, "{} {} {}", self.nrows, self.ncols, self.nnz());
        for (i, j, v) in self.triplets() {
            let _ = writeln!(s, "{} {} {:.17e} {:.17e}", i + 1, j + 1, v.re, v.im);
        }
        s
    }

    pub fn to_faer(&self) -> faer::sparse::SparseColMat<usize, C64> {
        let trip: Vec<_> = self
            .triplets()
            .map(|(i, j, v)| faer::sparse::Triplet::new(i, j, v))
            .collect();
        faer::sparse::SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &trip)
            .expect("csr indices are in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CsrMatrix<f64> {
        let mut t = Triplets::new(3, 3);
        t.push(0, 0, 2.0);
        t.push(2, 1, -1.0);
        t.push(0, 0, 1.0);
        t.push(1, 2, 4.0);
        t.to_csr()
    }

    #[test]
    fn duplicates_are_summed() {
        let a = sample();
        assert_eq!(a.get(0, 0), 3.0);
        assert_eq!(a.nnz(), 3);
        assert_eq!(a.get(1, 1), 0.0);
    }

    #[test]
    fn transpose_and_products() {
        let a = sample();
        let x = [1.0, 2.0, 3.0];
        assert_eq!(a.mul_vec(&x), vec![3.0, 12.0, -2.0]);
        assert_eq!(a.transpose().mul_vec(&x), a.mul_vec_transpose(&x));
        let aa = a.matmul(&a);
        let d = a.to_dense();
        let dd = &d * &d;
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(aa.get(i, j), dd[(i, j)]);
            }
        }
    }

    #[test]
    fn matrix_market_header() {
        let a = sample().to_complex();
        let mm = a.to_matrix_market();
        assert!(mm.starts_with("%%MatrixMarket matrix coordinate complex general\n3 3 3\n"));
    }
}
