use super::generate::TwoFoldSymmetric;
use super::twofold::TwoFold;
use crate::error::{HsvdError, Result};
use crate::linalg::{DenseMatrix, SignatureVector};
use crate::scalar::Real;

/// `M = G J G^T` with the positive signs of `J` first.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorPair<T> {
    pub g: DenseMatrix<T>,
    pub j: SignatureVector,
    /// Symmetric pivoting: row `i` of `P^T M P` is row `perm[i]` of `M`.
    pub perm: Vec<usize>,
}

impl<T: Real> FactorPair<T> {
    /// `||G J G^T - M||_F`.
    pub fn residual(&self, m: &DenseMatrix<T>) -> Result<T> {
        Ok(self.g.signed_gram_outer(&self.j)?.sub(m)?.frobenius_norm())
    }
}

/// Growth bound constant for complete pivoting, `(1 + sqrt(17)) / 8`.
pub fn pivot_alpha<T: Real>() -> T {
    (T::one() + T::lit(17.0).sqrt()) / T::lit(8.0)
}

/// Symmetric indefinite factorization with complete pivoting, followed by
/// diagonalization of the 2x2 pivots: `G = P L Q |Lambda|^(1/2)`,
/// `J = sign(Lambda)`. Carried out in double-word precision.
pub fn bunch_parlett_factor<T: Real>(m: &DenseMatrix<T>) -> Result<FactorPair<T>> {
    let norm = m.frobenius_norm();
    factor_twofold(TwoFoldSymmetric::from_matrix(m)?, norm)
}

struct Block<T> {
    start: usize,
    // [e11, e21, e22]; 1x1 blocks use e11 only
    e: [TwoFold<T>; 3],
    size: usize,
}

pub(crate) fn factor_twofold<T: Real>(m: TwoFoldSymmetric<T>, norm: T) -> Result<FactorPair<T>> {
    let n = m.n();
    let mut a = m.into_raw();
    let mut l = vec![TwoFold::<T>::zero(); n * n];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::new();
    let threshold = T::from_count(n) * T::eps() * norm;
    let alpha = pivot_alpha::<T>();

    let swap = |a: &mut [TwoFold<T>], l: &mut [TwoFold<T>], perm: &mut [usize], k: usize, s: usize| {
        if k == s {
            return;
        }
        for c in 0..n {
            a.swap(k * n + c, s * n + c);
        }
        for r in 0..n {
            a.swap(r * n + k, r * n + s);
        }
        for c in 0..k {
            l.swap(k * n + c, s * n + c);
        }
        perm.swap(k, s);
    };

    let mut k = 0;
    while k < n {
        let (mut mu0, mut p, mut q) = (T::zero(), k, k);
        let (mut mu1, mut d) = (T::zero(), k);
        for i in k..n {
            let x = a[i * n + i].value().abs();
            if x > mu1 {
                mu1 = x;
                d = i;
            }
            for j in k..i {
                let x = a[i * n + j].value().abs();
                if x > mu0 {
                    mu0 = x;
                    p = i;
                    q = j;
                }
            }
        }
        if mu1 >= alpha * mu0 || k + 1 == n {
            swap(&mut a, &mut l, &mut perm, k, d);
            let piv = a[k * n + k];
            if !(piv.value().abs() > threshold) {
                return Err(HsvdError::NumericalSingularity {
                    step: k,
                    pivot: piv.value().to_f64().unwrap_or(f64::NAN),
                    threshold: threshold.to_f64().unwrap_or(f64::NAN),
                });
            }
            l[k * n + k] = TwoFold::one();
            let col: Vec<TwoFold<T>> = (k + 1..n).map(|i| a[i * n + k]).collect();
            let lk: Vec<TwoFold<T>> = col.iter().map(|&c| c / piv).collect();
            for (o, &x) in lk.iter().enumerate() {
                l[(k + 1 + o) * n + k] = x;
            }
            for (oi, &li) in lk.iter().enumerate() {
                let i = k + 1 + oi;
                for (oj, &cj) in col.iter().enumerate().take(oi + 1) {
                    let j = k + 1 + oj;
                    a[i * n + j] = a[i * n + j] - li * cj;
                    a[j * n + i] = a[i * n + j];
                }
            }
            blocks.push(Block {
                start: k,
                e: [piv, TwoFold::zero(), TwoFold::zero()],
                size: 1,
            });
            k += 1;
        } else {
            // k <= q < p, so moving q to k leaves p in place
            swap(&mut a, &mut l, &mut perm, k, q);
            swap(&mut a, &mut l, &mut perm, k + 1, p);
            let e11 = a[k * n + k];
            let e21 = a[(k + 1) * n + k];
            let e22 = a[(k + 1) * n + k + 1];
            let (lam1, lam2, _, _) = jacobi2(e11, e21, e22);
            let small = lam1.value().abs().min(lam2.value().abs());
            if !(small > threshold) {
                return Err(HsvdError::NumericalSingularity {
                    step: k,
                    pivot: small.to_f64().unwrap_or(f64::NAN),
                    threshold: threshold.to_f64().unwrap_or(f64::NAN),
                });
            }
            let det = e11 * e22 - e21 * e21;
            l[k * n + k] = TwoFold::one();
            l[(k + 1) * n + k + 1] = TwoFold::one();
            let c1: Vec<TwoFold<T>> = (k + 2..n).map(|i| a[i * n + k]).collect();
            let c2: Vec<TwoFold<T>> = (k + 2..n).map(|i| a[i * n + k + 1]).collect();
            let l1: Vec<TwoFold<T>> = c1
                .iter()
                .zip(&c2)
                .map(|(&x, &y)| (x * e22 - y * e21) / det)
                .collect();
            let l2: Vec<TwoFold<T>> = c1
                .iter()
                .zip(&c2)
                .map(|(&x, &y)| (y * e11 - x * e21) / det)
                .collect();
            for o in 0..l1.len() {
                l[(k + 2 + o) * n + k] = l1[o];
                l[(k + 2 + o) * n + k + 1] = l2[o];
            }
            for oi in 0..l1.len() {
                let i = k + 2 + oi;
                for oj in 0..=oi {
                    let j = k + 2 + oj;
                    a[i * n + j] = a[i * n + j] - l1[oi] * c1[oj] - l2[oi] * c2[oj];
                    a[j * n + i] = a[i * n + j];
                }
            }
            blocks.push(Block {
                start: k,
                e: [e11, e21, e22],
                size: 2,
            });
            k += 2;
        }
    }

    // G_perm = L Q |Lambda|^(1/2), one column block per pivot
    let mut lambda = vec![TwoFold::<T>::zero(); n];
    for b in &blocks {
        let k = b.start;
        if b.size == 1 {
            lambda[k] = b.e[0];
            continue;
        }
        let (l1, l2, t, c) = jacobi2(b.e[0], b.e[1], b.e[2]);
        lambda[k] = l1;
        lambda[k + 1] = l2;
        for i in k..n {
            let (x, y) = (l[i * n + k], l[i * n + k + 1]);
            l[i * n + k] = c * (x - t * y);
            l[i * n + k + 1] = c * (t * x + y);
        }
    }
    let scale: Vec<TwoFold<T>> = lambda.iter().map(|x| x.abs().sqrt()).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&c| lambda[c].hi < T::zero());
    let p = order.iter().filter(|&&c| lambda[c].hi > T::zero()).count();
    let mut g = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = g.col_mut(dst);
        // a rotated 2x2 block reaches one row above its column
        for i in src.saturating_sub(1)..n {
            col[perm[i]] = (l[i * n + src] * scale[src]).value();
        }
    }
    Ok(FactorPair {
        g,
        j: SignatureVector::new(n, p)?,
        perm,
    })
}

/// Diagonalizes `[[a, b], [b, c]]` by `W = cs [[1, t], [-t, 1]]`; returns the
/// eigenvalues `(a - t b, c + t b)` with `t` and `cs`.
fn jacobi2<T: Real>(
    a: TwoFold<T>,
    b: TwoFold<T>,
    c: TwoFold<T>,
) -> (TwoFold<T>, TwoFold<T>, TwoFold<T>, TwoFold<T>) {
    if b.is_zero() {
        return (a, c, TwoFold::zero(), TwoFold::one());
    }
    let zeta = (c - a) / (TwoFold::new(T::two()) * b);
    let root = (TwoFold::one() + zeta * zeta).sqrt();
    let t = TwoFold::new(if zeta.hi < T::zero() { -T::one() } else { T::one() })
        / (zeta.abs() + root);
    let cs = TwoFold::one() / (TwoFold::one() + t * t).sqrt();
    (a - t * b, c + t * b, t, cs)
}
