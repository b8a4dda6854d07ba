use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use super::projvec::ProjVec;
use super::scalar::{max_modulus, Scalar};
use crate::error::{Error, Result};

/// Singular values below this fraction of the largest one count as zero.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Small dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T> Mat<T> {
    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Scalar> Mat<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer-literal convenience constructor.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let c = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == c), "ragged matrix literal");
        Self::from_fn(rows.len(), c, |i, j| T::from_i64(rows[i][j]))
    }

    pub fn diag(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { T::zero() })
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, o: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, o.rows, "matmul shape mismatch");
        let mut out = Mat::<T>::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out[(i, j)].clone() + a.clone() * o[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|r| dot(self.row(r), v))
            .collect()
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn add(&self, o: &Mat<T>) -> Self {
        assert_eq!(self.shape(), o.shape());
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, o: &Mat<T>) -> Self {
        self.add(&o.scale(&-T::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |i, j| self[(rows[i], j)].clone())
    }

    pub fn hstack(&self, o: &Mat<T>) -> Self {
        assert_eq!(self.rows, o.rows);
        Self::from_fn(self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                o[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, o: &Mat<T>) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Mat {
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<T>]) -> Result<Self> {
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != r) {
            return Err(Error::InvalidInput("columns of unequal length".into()));
        }
        Ok(Self::from_fn(r, cols.len(), |i, j| cols[j][i].clone()))
    }

    pub fn max_modulus(&self) -> f64 {
        max_modulus(&self.data)
    }

    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = pick_pivot(&a, c, c, 0.0) else {
                return T::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a[(c, c)].clone();
            det = det * piv.clone();
            for r in c + 1..n {
                let f = a[(r, c)].clone() / piv.clone();
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = a[(r, k)].clone() - f.clone() * a[(c, k)].clone();
                    a[(r, k)] = v;
                }
            }
        }
        det
    }

    /// Classical adjoint: `adj(M)·M = M·adj(M) = det(M)·I`.
    pub fn adjugate(&self) -> Self {
        assert_eq!(self.rows, self.cols, "adjugate of a non-square matrix");
        let n = self.rows;
        if n == 1 {
            return Mat::identity(1);
        }
        if n == 3 {
            return self.adjugate3();
        }
        Self::from_fn(n, n, |i, j| {
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let m = self.select_rows(&rows).select_cols(&cols).det();
            if (i + j) % 2 == 0 {
                m
            } else {
                -m
            }
        })
    }

    fn adjugate3(&self) -> Self {
        let a = |r: usize, c: usize| self[(r, c)].clone();
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0)
        };
        Mat::from_fn(3, 3, |i, j| {
            // adj[i][j] = cofactor of entry (j, i)
            let rs: Vec<usize> = (0..3).filter(|&r| r != j).collect();
            let cs: Vec<usize> = (0..3).filter(|&c| c != i).collect();
            let m = cof(rs[0], rs[1], cs[0], cs[1]);
            if (i + j) % 2 == 0 {
                m
            } else {
                -m
            }
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols || self.rows == 0 {
            return Err(Error::InvalidInput("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let (r, pivots) = rref(&self.hstack(&Mat::identity(n)));
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::InvalidInput("singular matrix".into()));
        }
        Ok(r.select_cols(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// Rank: exact row echelon in exact fields, singular-value ratio otherwise.
    pub fn rank(&self) -> Result<usize> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidInput("rank of an empty matrix".into()));
        }
        Ok(T::rank_of(self))
    }

    /// Basis of the right null space, each vector in canonical projective form.
    pub fn kernel_basis(&self) -> Vec<ProjVec<T>> {
        T::kernel_of(self)
            .into_iter()
            .filter_map(|v| ProjVec::new(v).ok())
            .map(|v| v.normalized())
            .collect()
    }

    /// A right inverse `X` with `self·X = I`, supported on the first maximal
    /// set of independent columns.
    pub fn right_pseudo_inverse(&self) -> Result<Self> {
        let (_, pivots) = rref(self);
        if pivots.len() != self.rows {
            return Err(Error::InvalidInput("matrix is not of full row rank".into()));
        }
        let block_inv = self.select_cols(&pivots).inverse()?;
        let mut out = Mat::zeros(self.cols, self.rows);
        for (k, &p) in pivots.iter().enumerate() {
            for j in 0..self.rows {
                out[(p, j)] = block_inv[(k, j)].clone();
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl Mat<f64> {
    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        let m = DMatrix::from_row_slice(self.rows, self.cols, &self.data);
        let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    pub fn numerical_rank(&self, threshold: f64) -> usize {
        numerical_rank(self, threshold)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

pub(crate) fn numerical_rank(m: &Mat<f64>, threshold: f64) -> usize {
    let s = m.singular_values();
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x / top > threshold).count(),
        _ => 0,
    }
}

pub(crate) fn svd_kernel(m: &Mat<f64>, threshold: f64) -> Vec<Vec<f64>> {
    let n = m.cols;
    if n == 0 {
        return Vec::new();
    }
    // Pad wide matrices to square so the full right singular basis is available.
    let rows = m.rows.max(n);
    let mut padded = DMatrix::<f64>::zeros(rows, n);
    for r in 0..m.rows {
        for c in 0..n {
            padded[(r, c)] = m[(r, c)];
        }
    }
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let top = svd.singular_values[order[0]];
    order
        .into_iter()
        .filter(|&i| top == 0.0 || svd.singular_values[i] / top <= threshold)
        .map(|i| v_t.row(i).iter().copied().collect())
        .collect()
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn pick_pivot<T: Scalar>(a: &Mat<T>, col: usize, from: usize, scale: f64) -> Option<usize> {
    if T::EXACT {
        (from..a.rows).find(|&r| !a[(r, col)].is_zero())
    } else {
        let (best, m) = (from..a.rows)
            .map(|r| (r, a[(r, col)].modulus()))
            .fold((None, 0.0), |(b, bm), (r, m)| if m > bm { (Some(r), m) } else { (b, bm) });
        if m == 0.0 || m <= crate::numeric::scalar::ELIMINATION_EPS * scale {
            None
        } else {
            best
        }
    }
}

/// Reduced row echelon form and pivot columns.
pub(crate) fn rref<T: Scalar>(m: &Mat<T>) -> (Mat<T>, Vec<usize>) {
    let mut a = m.clone();
    let scale = m.max_modulus();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = pick_pivot(&a, c, r, scale) else {
            if !T::EXACT {
                for i in r..a.rows {
                    a[(i, c)] = T::zero();
                }
            }
            continue;
        };
        a.swap_rows(p, r);
        let piv = a[(r, c)].clone();
        for k in 0..a.cols {
            let v = a[(r, k)].clone() / piv.clone();
            a[(r, k)] = v;
        }
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let f = a[(i, c)].clone();
            if f.is_zero() {
                continue;
            }
            for k in 0..a.cols {
                let v = a[(i, k)].clone() - f.clone() * a[(r, k)].clone();
                a[(i, k)] = v;
            }
            a[(i, c)] = T::zero();
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub(crate) fn rref_kernel<T: Scalar>(m: &Mat<T>) -> Vec<Vec<T>> {
    let (a, pivots) = rref(m);
    (0..m.cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![T::zero(); m.cols];
            v[free] = T::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -a[(i, free)].clone();
            }
            v
        })
        .collect()
}
