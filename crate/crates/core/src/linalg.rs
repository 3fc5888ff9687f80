//! Column-major dense storage and the column kernels every solver stage uses.
//!
//! Reductions are bitwise deterministic for a fixed lane count: `chunk`
//! interleaved partial sums are each accumulated sequentially (lane `l` takes
//! elements `l, l + chunk, l + 2 chunk, ...`) and then folded in a fixed
//! binary tree. With the default of 32 lanes this is the per-warp reduction
//! pattern of a GPU dot product, replayed on the CPU.

use std::ops::{Index, IndexMut};

use crate::error::{HsvdError, Result};
use crate::scalar::Real;

/// Default number of interleaved partial sums in a reduction.
pub const DEFAULT_CHUNK: usize = 32;

const STACK_LANES: usize = 64;

/// Dense matrix stored column by column.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_col_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(HsvdError::shape(format!(
                "{} values cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let r = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != r) {
            return Err(HsvdError::shape("ragged rows"));
        }
        let mut m = Self::zeros(n, r);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn col(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Two distinct columns, mutably.
    pub fn col_pair_mut(&mut self, a: usize, b: usize) -> (&mut [T], &mut [T]) {
        assert!(a != b, "col_pair_mut needs distinct columns");
        let n = self.rows;
        if a < b {
            let (lo, hi) = self.data.split_at_mut(b * n);
            (&mut lo[a * n..(a + 1) * n], &mut hi[..n])
        } else {
            let (lo, hi) = self.data.split_at_mut(a * n);
            (&mut hi[..n], &mut lo[b * n..(b + 1) * n])
        }
    }

    /// Every column as its own mutable slice, in order.
    pub fn columns_mut(&mut self) -> Vec<&mut [T]> {
        if self.rows == 0 {
            return Vec::new();
        }
        self.data.chunks_mut(self.rows).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(HsvdError::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            for k in 0..self.cols {
                let b = other[(k, j)];
                if b == T::zero() {
                    continue;
                }
                let a = self.col(k);
                for (o, &x) in out.col_mut(j).iter_mut().zip(a) {
                    *o = T::fma(x, b, *o);
                }
            }
        }
        Ok(out)
    }

    /// `G diag(signs) G^T`.
    pub fn signed_gram_outer(&self, signs: &SignatureVector) -> Result<Self> {
        if signs.len() != self.cols {
            return Err(HsvdError::shape("signature length differs from column count"));
        }
        let mut scaled = self.clone();
        for j in 0..self.cols {
            if signs.sign(j) < 0 {
                scaled.col_mut(j).iter_mut().for_each(|v| *v = -*v);
            }
        }
        scaled.matmul(&self.transpose())
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|&v| v * v).sum::<T>().sqrt()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(HsvdError::shape("operands differ in shape"));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn map<U: Real>(&self, f: impl Fn(T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

/// Signature (inertia) of `M = G J G^T`: `p` leading `+1` entries, then `-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureVector {
    len: usize,
    p: usize,
}

impl SignatureVector {
    pub fn new(len: usize, p: usize) -> Result<Self> {
        if p > len {
            return Err(HsvdError::shape(format!(
                "{p} positive signs exceed signature length {len}"
            )));
        }
        Ok(Self { len, p })
    }

    /// Accepts only separated sign sequences (all `+1` before all `-1`).
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let p = signs.iter().take_while(|&&s| s == 1).count();
        if signs[p..].iter().any(|&s| s != -1) {
            return Err(HsvdError::Domain(
                "signature must list every +1 before every -1, with no other values".into(),
            ));
        }
        Ok(Self {
            len: signs.len(),
            p,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of `+1` entries.
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn sign(&self, i: usize) -> i8 {
        assert!(i < self.len);
        if i < self.p {
            1
        } else {
            -1
        }
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.len).map(|i| self.sign(i)).collect()
    }

    pub fn is_definite(&self) -> bool {
        self.p == 0 || self.p == self.len
    }
}

/// Deterministic lane-interleaved dot product.
///
/// Lane `l` accumulates `x[l] * y[l] + x[l + chunk] * y[l + chunk] + ...`
/// with one fused multiply-add per term; the lanes are then folded pairwise
/// (`lane[i] += lane[i + s]` for `s = 1, 2, 4, ...`).
pub fn dot_chunked<T: Real>(x: &[T], y: &[T], chunk: usize) -> Result<T> {
    if x.len() != y.len() {
        return Err(HsvdError::shape(format!(
            "dot of vectors with lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if chunk == 0 {
        return Err(HsvdError::shape("reduction chunk must be at least 1"));
    }
    Ok(dot_lanes(x, y, chunk))
}

#[inline]
pub(crate) fn dot_lanes<T: Real>(x: &[T], y: &[T], chunk: usize) -> T {
    debug_assert_eq!(x.len(), y.len());
    if chunk <= STACK_LANES {
        let mut lanes = [T::zero(); STACK_LANES];
        accumulate_and_fold(x, y, &mut lanes[..chunk])
    } else {
        let mut lanes = vec![T::zero(); chunk];
        accumulate_and_fold(x, y, &mut lanes)
    }
}

#[inline(always)]
fn accumulate_and_fold<T: Real>(x: &[T], y: &[T], lanes: &mut [T]) -> T {
    let w = lanes.len();
    let mut xs = x.chunks_exact(w);
    let mut ys = y.chunks_exact(w);
    for (xc, yc) in (&mut xs).zip(&mut ys) {
        for ((acc, &a), &b) in lanes.iter_mut().zip(xc).zip(yc) {
            *acc = T::fma(a, b, *acc);
        }
    }
    for ((acc, &a), &b) in lanes.iter_mut().zip(xs.remainder()).zip(ys.remainder()) {
        *acc = T::fma(a, b, *acc);
    }
    let mut stride = 1;
    while stride < w {
        let mut i = 0;
        while i + stride < w {
            lanes[i] = lanes[i] + lanes[i + stride];
            i += 2 * stride;
        }
        stride *= 2;
    }
    lanes[0]
}

/// Applies one plane rotation to the column pair `(x, y)` in place:
///
/// `x' = (x + s t y) c`, `y' = (t x + y) c`
///
/// with the parenthesised parts fused. `s = -1` is the trigonometric
/// rotation, `s = +1` the hyperbolic one. Returns the new squared norms of
/// `x'` and `y'`, recomputed from the updated columns.
pub fn fused_pair_update<T: Real>(
    x: &mut [T],
    y: &mut [T],
    t: T,
    c: T,
    s: i8,
    chunk: usize,
) -> Result<(T, T)> {
    if x.len() != y.len() {
        return Err(HsvdError::shape(format!(
            "column pair with lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if chunk == 0 {
        return Err(HsvdError::shape("reduction chunk must be at least 1"));
    }
    if !(c > T::zero()) || (s != 1 && s != -1) {
        return Err(HsvdError::Domain(
            "rotation needs c > 0 and a sign of +1 or -1".into(),
        ));
    }
    apply_pair(x, y, t, c, s);
    Ok((dot_lanes(x, x, chunk), dot_lanes(y, y, chunk)))
}

#[inline]
pub(crate) fn apply_pair<T: Real>(x: &mut [T], y: &mut [T], t: T, c: T, s: i8) {
    let st = if s < 0 { -t } else { t };
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let xa = *a;
        let yb = *b;
        *a = T::fma(st, yb, xa) * c;
        *b = T::fma(t, xa, yb) * c;
    }
}

/// `|| I - U^T U ||_F`.
pub fn orthonormality_distance<T: Real>(u: &DenseMatrix<T>) -> T {
    let r = u.cols();
    let mut acc = T::zero();
    for i in 0..r {
        for j in i..r {
            let g = dot_lanes(u.col(i), u.col(j), DEFAULT_CHUNK);
            let e = if i == j { T::one() - g } else { g };
            let w = if i == j { T::one() } else { T::two() };
            acc += w * e * e;
        }
    }
    acc.sqrt()
}
