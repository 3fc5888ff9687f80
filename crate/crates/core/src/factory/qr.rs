use crate::error::{HsvdError, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Real;

/// Householder QR of a tall factor: `G = Q R` with `R` (r x r) upper
/// triangular with positive diagonal and `Q` (n x r) with orthonormal
/// columns. The HSVD of `R` gives that of `G` with `U = Q U_R`.
pub fn qr_shorten<T: Real>(g: &DenseMatrix<T>) -> Result<(DenseMatrix<T>, DenseMatrix<T>)> {
    let (n, r) = (g.rows(), g.cols());
    if n < r {
        return Err(HsvdError::shape(format!("QR needs n >= r, got {n}x{r}")));
    }
    let mut a = g.clone();
    let mut vs: Vec<(Vec<T>, T)> = Vec::with_capacity(r);
    for k in 0..r {
        let x = &a.col(k)[k..];
        let norm = x.iter().map(|&v| v * v).sum::<T>().sqrt();
        if norm == T::zero() {
            return Err(HsvdError::RankDeficient { column: k });
        }
        let alpha = if x[0] > T::zero() { -norm } else { norm };
        let mut v = x.to_vec();
        v[0] = v[0] - alpha;
        let vv: T = v.iter().map(|&e| e * e).sum();
        let tau = if vv == T::zero() { T::zero() } else { T::two() / vv };
        for c in k..r {
            let col = &mut a.col_mut(c)[k..];
            let s = tau * col.iter().zip(&v).map(|(&p, &q)| p * q).sum::<T>();
            col.iter_mut().zip(&v).for_each(|(p, &q)| *p = *p - s * q);
        }
        vs.push((v, tau));
    }

    let mut rmat = DenseMatrix::zeros(r, r);
    for c in 0..r {
        rmat.col_mut(c)[..=c].copy_from_slice(&a.col(c)[..=c]);
    }
    let mut q = DenseMatrix::zeros(n, r);
    for c in 0..r {
        q[(c, c)] = T::one();
    }
    for (k, (v, tau)) in vs.iter().enumerate().rev() {
        for c in 0..r {
            let col = &mut q.col_mut(c)[k..];
            let s = *tau * col.iter().zip(v).map(|(&p, &w)| p * w).sum::<T>();
            col.iter_mut().zip(v).for_each(|(p, &w)| *p = *p - s * w);
        }
    }
    for k in 0..r {
        if rmat[(k, k)] == T::zero() {
            return Err(HsvdError::RankDeficient { column: k });
        }
        if rmat[(k, k)] < T::zero() {
            for c in k..r {
                rmat[(k, c)] = -rmat[(k, c)];
            }
            q.col_mut(k).iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok((rmat, q))
}
