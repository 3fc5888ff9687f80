use rand::distributions::{Distribution, Uniform};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::bunch_parlett::{factor_twofold, FactorPair};
use super::twofold::TwoFold;
use crate::error::{HsvdError, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Real;

/// Lower end of the eigenvalue magnitudes, relative to `a`.
pub const SPECTRUM_GAP: f64 = 1e-5;

/// Random spectrum description. Eigenvalue magnitudes are uniform in
/// `[a * 1e-5, a]`; signs are random unless `positives` fixes their count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumSpec {
    pub n: usize,
    pub a: f64,
    pub seed: u64,
    pub positives: Option<usize>,
}

impl SpectrumSpec {
    pub fn new(n: usize, a: f64, seed: u64) -> Self {
        Self {
            n,
            a,
            seed,
            positives: None,
        }
    }

    pub fn with_positives(mut self, p: usize) -> Self {
        self.positives = Some(p);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(HsvdError::shape(format!("order must be at least 2, got {}", self.n)));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(HsvdError::Domain(format!("scale must be positive, got {}", self.a)));
        }
        if let Some(p) = self.positives {
            if p > self.n {
                return Err(HsvdError::Domain(format!(
                    "{p} positive eigenvalues requested for order {}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Scale parameter by matrix order, as used for the published accuracy runs.
pub fn table_scale(n: usize) -> f64 {
    match n {
        0..=3168 => 20.0,
        3169..=6368 => 30.0,
        6369..=9568 => 40.0,
        _ => 50.0,
    }
}

/// Eigenvalues in generation order (unsorted).
pub fn generate_spectrum<T: Real, R: Rng>(spec: &SpectrumSpec, rng: &mut R) -> Result<Vec<T>> {
    spec.validate()?;
    let mags = Uniform::new_inclusive(spec.a * SPECTRUM_GAP, spec.a);
    let positive: Vec<bool> = match spec.positives {
        None => (0..spec.n).map(|_| rng.gen_bool(0.5)).collect(),
        Some(p) => {
            let mut s: Vec<bool> = (0..spec.n).map(|i| i < p).collect();
            s.shuffle(rng);
            s
        }
    };
    Ok(positive
        .into_iter()
        .map(|pos| {
            let m = T::lit(mags.sample(rng));
            if pos {
                m
            } else {
                -m
            }
        })
        .collect())
}

/// `n - 1` Gaussian Householder vectors of lengths `2, 3, ..., n`. The
/// reflector of length `m` acts on the trailing `m` coordinates.
pub fn random_reflectors<T: Real, R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<T>> {
    (2..=n)
        .map(|m| {
            (0..m)
                .map(|_| T::lit(rng.sample::<f64, _>(StandardNormal)))
                .collect()
        })
        .collect()
}

/// Symmetric matrix held in double-word precision, full row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoFoldSymmetric<T> {
    n: usize,
    a: Vec<TwoFold<T>>,
}

impl<T: Real> TwoFoldSymmetric<T> {
    pub fn from_diagonal(d: &[T]) -> Self {
        let n = d.len();
        let mut a = vec![TwoFold::zero(); n * n];
        for (i, &x) in d.iter().enumerate() {
            a[i * n + i] = TwoFold::new(x);
        }
        Self { n, a }
    }

    /// Exact lift of a working-precision matrix. Fails unless symmetric.
    pub fn from_matrix(m: &DenseMatrix<T>) -> Result<Self> {
        let n = m.rows();
        if m.cols() != n {
            return Err(HsvdError::shape(format!("{}x{} is not square", n, m.cols())));
        }
        let mut a = vec![TwoFold::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(HsvdError::Domain(format!("not symmetric at ({i}, {j})")));
                }
                a[i * n + j] = TwoFold::new(m[(i, j)]);
            }
        }
        Ok(Self { n, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> TwoFold<T> {
        self.a[i * self.n + j]
    }

    pub(crate) fn into_raw(self) -> Vec<TwoFold<T>> {
        self.a
    }

    /// Rounded copy. Symmetric by construction.
    pub fn to_matrix(&self) -> DenseMatrix<T> {
        let n = self.n;
        let mut m = DenseMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] = self.a[i * n + j].value();
            }
        }
        m
    }

    /// Frobenius norm of the rounded matrix.
    pub fn frobenius_norm(&self) -> T {
        self.a
            .iter()
            .map(|x| x.value() * x.value())
            .fold(T::zero(), |s, x| s + x)
            .sqrt()
    }

    /// Two-sided update `H A H` with `H = I - 2 v v^T / v^T v` acting on the
    /// trailing `v.len()` coordinates. Requires the rows above that block
    /// to be decoupled from it, which holds when reflectors are applied in
    /// order of nondecreasing length to a diagonal start.
    fn reflect_trailing(&mut self, v: &[T]) {
        let n = self.n;
        let m = v.len();
        let k = n - m;
        let vv = v
            .iter()
            .fold(TwoFold::zero(), |s, &x| s + TwoFold::new(x) * TwoFold::new(x));
        if vv.is_zero() {
            return;
        }
        let tau = TwoFold::new(T::two()) / vv;
        let mut w: Vec<TwoFold<T>> = (0..m)
            .map(|i| {
                let row = &self.a[(k + i) * n + k..(k + i) * n + n];
                let s = row
                    .iter()
                    .zip(v)
                    .fold(TwoFold::zero(), |s, (&x, &y)| s + x.mul_scalar(y));
                tau * s
            })
            .collect();
        let wv = w
            .iter()
            .zip(v)
            .fold(TwoFold::zero(), |s, (&x, &y)| s + x.mul_scalar(y));
        let alpha = -(TwoFold::new(T::half()) * tau * wv);
        for (wi, &vi) in w.iter_mut().zip(v) {
            *wi = *wi + alpha.mul_scalar(vi);
        }
        for i in 0..m {
            for j in 0..=i {
                let idx = (k + i) * n + k + j;
                self.a[idx] = self.a[idx] - w[j].mul_scalar(v[i]) - w[i].mul_scalar(v[j]);
            }
        }
        for i in 0..m {
            for j in 0..i {
                self.a[(k + j) * n + k + i] = self.a[(k + i) * n + k + j];
            }
        }
    }
}

/// `H diag(lambda) H^T` for the product `H` of the given reflectors, in
/// double-word precision. A zero vector stands for the identity.
pub fn symmetric_from_spectrum<T: Real>(
    lambda: &[T],
    reflectors: &[Vec<T>],
) -> Result<TwoFoldSymmetric<T>> {
    let n = lambda.len();
    let mut prev = 0;
    for v in reflectors {
        if v.len() > n || v.len() < prev {
            return Err(HsvdError::shape(
                "reflectors must have nondecreasing lengths no larger than the order",
            ));
        }
        prev = v.len();
    }
    let mut a = TwoFoldSymmetric::from_diagonal(lambda);
    for v in reflectors {
        a.reflect_trailing(v);
    }
    Ok(a)
}

/// Random symmetric matrix with the spectrum of `spec`, and that spectrum in
/// ascending order.
pub fn generate_symmetric<T: Real>(spec: &SpectrumSpec) -> Result<(DenseMatrix<T>, Vec<T>)> {
    let (m, lambda) = generate_twofold(spec)?;
    Ok((m.to_matrix(), lambda))
}

fn generate_twofold<T: Real>(spec: &SpectrumSpec) -> Result<(TwoFoldSymmetric<T>, Vec<T>)> {
    let mut rng = spec.rng();
    let mut lambda: Vec<T> = generate_spectrum(spec, &mut rng)?;
    let reflectors = random_reflectors::<T, _>(spec.n, &mut rng);
    let m = symmetric_from_spectrum(&lambda, &reflectors)?;
    lambda.sort_by(|a, b| a.partial_cmp(b).expect("finite spectrum"));
    Ok((m, lambda))
}

/// A generated test problem: `M`, its exact spectrum, and a factor of `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct TestInstance<T> {
    pub spec: SpectrumSpec,
    pub m: DenseMatrix<T>,
    /// Ascending.
    pub lambda_true: Vec<T>,
    pub factor: FactorPair<T>,
}

impl<T: Real> TestInstance<T> {
    pub fn positive_count(&self) -> usize {
        self.lambda_true.iter().filter(|&&x| x > T::zero()).count()
    }
}

/// Full factory pipeline. The factorization runs on the double-word matrix,
/// so `factor` is not affected by the rounding of `m`.
pub fn generate_instance<T: Real>(spec: &SpectrumSpec) -> Result<TestInstance<T>> {
    let (mdd, lambda_true) = generate_twofold(spec)?;
    let m = mdd.to_matrix();
    let norm = m.frobenius_norm();
    let factor = factor_twofold(mdd, norm)?;
    Ok(TestInstance {
        spec: *spec,
        m,
        lambda_true,
        factor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_reflector_keeps_diagonal() {
        let m = symmetric_from_spectrum(&[4.0, -1.0], &[vec![0.0, 0.0]]).unwrap();
        assert_eq!(m.to_matrix(), DenseMatrix::from_diagonal(&[4.0, -1.0]));
    }

    #[test]
    fn single_reflector_swaps_axes() {
        // v = e1 - e2 reflects e1 onto e2
        let m = symmetric_from_spectrum(&[4.0, -1.0], &[vec![1.0, -1.0]]).unwrap();
        assert_eq!(m.to_matrix(), DenseMatrix::from_diagonal(&[-1.0, 4.0]));
    }

    #[test]
    fn generated_matrix_is_exactly_symmetric() {
        let (m, _) = generate_symmetric::<f64>(&SpectrumSpec::new(33, 20.0, 7)).unwrap();
        assert_eq!(m, m.transpose());
    }

    #[test]
    fn spectrum_respects_gap() {
        let spec = SpectrumSpec::new(500, 20.0, 3);
        let l: Vec<f64> = generate_spectrum(&spec, &mut spec.rng()).unwrap();
        assert!(l.iter().all(|x| x.abs() >= 20.0 * SPECTRUM_GAP && x.abs() <= 20.0));
        assert!(l.iter().any(|&x| x > 0.0) && l.iter().any(|&x| x < 0.0));
    }

    #[test]
    fn fixed_positive_count() {
        let spec = SpectrumSpec::new(40, 5.0, 11).with_positives(13);
        let l: Vec<f64> = generate_spectrum(&spec, &mut spec.rng()).unwrap();
        assert_eq!(l.iter().filter(|&&x| x > 0.0).count(), 13);
    }

    #[test]
    fn trace_is_preserved() {
        let spec = SpectrumSpec::new(24, 20.0, 5);
        let (m, lambda) = generate_symmetric::<f64>(&spec).unwrap();
        let tr: f64 = (0..24).map(|i| m[(i, i)]).sum();
        let want: f64 = lambda.iter().sum();
        assert!((tr - want).abs() < 1e-12 * 20.0 * 24.0);
    }

    #[test]
    fn same_seed_same_matrix() {
        let spec = SpectrumSpec::new(16, 20.0, 99);
        let a = generate_instance::<f64>(&spec).unwrap();
        let b = generate_instance::<f64>(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(generate_symmetric::<f64>(&SpectrumSpec::new(1, 1.0, 0)).is_err());
        assert!(generate_symmetric::<f64>(&SpectrumSpec::new(4, 0.0, 0)).is_err());
        assert!(generate_symmetric::<f64>(&SpectrumSpec::new(4, 1.0, 0).with_positives(5)).is_err());
    }

    #[test]
    fn scale_table() {
        assert_eq!(table_scale(160), 20.0);
        assert_eq!(table_scale(3168), 20.0);
        assert_eq!(table_scale(3169), 30.0);
        assert_eq!(table_scale(9568), 40.0);
        assert_eq!(table_scale(10144), 50.0);
    }
}
