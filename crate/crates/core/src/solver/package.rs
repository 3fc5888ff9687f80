use std::cmp::Ordering;

use crate::error::{HsvdError, Result};
use crate::linalg::{dot_lanes, DenseMatrix, SignatureVector};
use crate::scalar::Real;

/// Squared norm, original column index, and sign of one diagonal position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagonalPackage<T> {
    pub d: T,
    pub rho: usize,
    pub sign: i8,
}

/// Packed diagonal of the implicit `G^T G`, kept in sorted order.
///
/// Positions `0..p` hold the `+1` packages and `p..r` the `-1` packages; the
/// solver addresses columns of `G` only through `rho`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalPackageVector<T> {
    packages: Vec<DiagonalPackage<T>>,
    p: usize,
}

impl<T: Real> DiagonalPackageVector<T> {
    /// Squared column norms, identity permutation, and the signs of `j`.
    pub fn precompute(g: &DenseMatrix<T>, j: &SignatureVector, chunk: usize) -> Result<Self> {
        if j.len() != g.cols() {
            return Err(HsvdError::shape(format!(
                "signature of length {} for {} columns",
                j.len(),
                g.cols()
            )));
        }
        if chunk == 0 {
            return Err(HsvdError::shape("reduction chunk must be at least 1"));
        }
        let packages = (0..g.cols())
            .map(|k| {
                let col = g.col(k);
                let d = dot_lanes(col, col, chunk);
                if d == T::zero() {
                    Err(HsvdError::RankDeficient { column: k })
                } else if !d.is_finite() {
                    Err(HsvdError::Domain(format!("column {k} is not finite")))
                } else {
                    Ok(DiagonalPackage {
                        d,
                        rho: k,
                        sign: j.sign(k),
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { packages, p: j.p() })
    }

    pub fn from_packages(packages: Vec<DiagonalPackage<T>>) -> Result<Self> {
        let p = packages.iter().take_while(|pk| pk.sign == 1).count();
        if packages[p..].iter().any(|pk| pk.sign != -1) {
            return Err(HsvdError::Domain(
                "packages must list every +1 sign before every -1 sign".into(),
            ));
        }
        let mut seen = vec![false; packages.len()];
        for pk in &packages {
            if pk.rho >= seen.len() || std::mem::replace(&mut seen[pk.rho], true) {
                return Err(HsvdError::Domain("rho is not a permutation".into()));
            }
        }
        Ok(Self { packages, p })
    }

    pub fn len(&self) -> usize {
        self.packages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packages.is_empty()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn packages(&self) -> &[DiagonalPackage<T>] {
        &self.packages
    }

    pub fn get(&self, k: usize) -> &DiagonalPackage<T> {
        &self.packages[k]
    }

    pub(crate) fn set_d(&mut self, k: usize, d: T) {
        self.packages[k].d = d;
    }

    /// First part by `d` descending, second part by `d` ascending; stable.
    pub fn sort(&mut self) {
        let (pos, neg) = self.packages.split_at_mut(self.p);
        pos.sort_by(|a, b| b.d.partial_cmp(&a.d).unwrap_or(Ordering::Equal));
        neg.sort_by(|a, b| a.d.partial_cmp(&b.d).unwrap_or(Ordering::Equal));
    }
}

/// Free-function form of [`DiagonalPackageVector::precompute`].
pub fn precompute<T: Real>(
    g: &DenseMatrix<T>,
    j: &SignatureVector,
    chunk: usize,
) -> Result<DiagonalPackageVector<T>> {
    DiagonalPackageVector::precompute(g, j, chunk)
}

/// Returns `d` sorted as [`DiagonalPackageVector::sort`] does.
pub fn sort_diagonal<T: Real>(mut d: DiagonalPackageVector<T>) -> DiagonalPackageVector<T> {
    d.sort();
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pk(d: f64, rho: usize, sign: i8) -> DiagonalPackage<f64> {
        DiagonalPackage { d, rho, sign }
    }

    #[test]
    fn precompute_identity() {
        let g = DenseMatrix::<f64>::identity(4);
        let d = precompute(&g, &SignatureVector::new(4, 2).unwrap(), 32).unwrap();
        let ds: Vec<_> = d.packages().iter().map(|p| (p.d, p.rho, p.sign)).collect();
        assert_eq!(
            ds,
            vec![(1.0, 0, 1), (1.0, 1, 1), (1.0, 2, -1), (1.0, 3, -1)]
        );
    }

    #[test]
    fn precompute_diag() {
        let g = DenseMatrix::from_diagonal(&[2.0, 1.0]);
        let d = precompute(&g, &SignatureVector::new(2, 1).unwrap(), 32).unwrap();
        assert_eq!(d.get(0).d, 4.0);
        assert_eq!(d.get(1).d, 1.0);
    }

    #[test]
    fn precompute_zero_column_fails() {
        let mut g = DenseMatrix::<f64>::identity(3);
        g[(1, 1)] = 0.0;
        let err = precompute(&g, &SignatureVector::new(3, 3).unwrap(), 32).unwrap_err();
        assert!(matches!(err, HsvdError::RankDeficient { column: 1 }));
    }

    #[test]
    fn sort_example() {
        let d = DiagonalPackageVector::from_packages(vec![
            pk(1.0, 0, 1),
            pk(4.0, 1, 1),
            pk(3.0, 2, -1),
            pk(2.0, 3, -1),
        ])
        .unwrap();
        let s = sort_diagonal(d);
        assert_eq!(
            s.packages(),
            &[pk(4.0, 1, 1), pk(1.0, 0, 1), pk(2.0, 3, -1), pk(3.0, 2, -1)]
        );
        assert_eq!(sort_diagonal(s.clone()), s);
    }

    #[test]
    fn sort_all_positive_reversal_and_stability() {
        let asc = DiagonalPackageVector::from_packages(vec![
            pk(1.0, 0, 1),
            pk(2.0, 1, 1),
            pk(3.0, 2, 1),
        ])
        .unwrap();
        let s = sort_diagonal(asc);
        let rho: Vec<_> = s.packages().iter().map(|p| p.rho).collect();
        assert_eq!(rho, vec![2, 1, 0]);

        let ties = DiagonalPackageVector::from_packages(vec![
            pk(1.0, 2, 1),
            pk(1.0, 0, 1),
            pk(1.0, 1, 1),
        ])
        .unwrap();
        let rho: Vec<_> = sort_diagonal(ties).packages().iter().map(|p| p.rho).collect();
        assert_eq!(rho, vec![2, 0, 1]);
    }

    #[test]
    fn from_packages_validates() {
        assert!(DiagonalPackageVector::from_packages(vec![pk(1.0, 0, -1), pk(1.0, 1, 1)]).is_err());
        assert!(DiagonalPackageVector::from_packages(vec![pk(1.0, 0, 1), pk(1.0, 0, 1)]).is_err());
    }
}
